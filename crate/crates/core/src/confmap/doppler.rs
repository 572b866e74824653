//! First-order change of the spectral density of a one-quantum packet under
//! `u -> u + eps u^k`, compared with the Doppler shift of a source sitting at
//! the packet position.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::checks::commutator_profile;
use crate::fock::ops::realize;
use crate::fock::{FockBasis, OnePacket};
use crate::grid::DerivativeStencil;
use crate::quadform::t_k;

#[derive(Clone, Debug, Serialize)]
pub struct DopplerReport {
    /// 1 for a boost, 2 for a uniform acceleration
    pub generator: usize,
    pub eps: f64,
    pub u0: f64,
    pub sigma_u: f64,
    pub d_omega: f64,
    pub omega_max: f64,
    pub omegas: Vec<f64>,
    /// deep-interior rows the comparison runs over
    pub rows: Vec<usize>,
    /// `eps <(1/i hbar)[T_k, n_w]>`
    pub shift: Vec<f64>,
    /// `eps d_w(w <n_w>)` (boost) or `2 eps d_w(w u0 <n_w>)` (acceleration)
    pub prediction: Vec<f64>,
    /// `|shift - prediction| / |prediction|`; NaN when the prediction vanishes
    pub relative_l2: f64,
    /// `|shift|` over the rows
    pub shift_norm: f64,
    /// `2 eps |d_w(w sigma_u <n_w>)|`, the size a shift would have for a
    /// packet displaced by one spread
    pub reference_norm: f64,
    pub mean_position: f64,
}

impl DopplerReport {
    /// `|<m> - u0| / |u0|`, or the absolute offset in units of `sigma_u` at
    /// `u0 = 0`.
    pub fn position_error(&self) -> f64 {
        if self.u0 != 0.0 {
            (self.mean_position - self.u0).abs() / self.u0.abs()
        } else {
            self.mean_position.abs() / self.sigma_u
        }
    }
}

fn norm_on(rows: &[usize], v: &[f64]) -> f64 {
    rows.iter().map(|&j| v[j] * v[j]).sum::<f64>().sqrt()
}

/// Runs the comparison for generator `k` (1 or 2) on `basis`, which must hold
/// the one-quantum sector of the packet grid.
pub fn doppler_experiment(
    packet: &OnePacket,
    eps: f64,
    basis: &FockBasis,
    d: &DerivativeStencil,
    k: usize,
) -> Result<DopplerReport> {
    if !(k == 1 || k == 2) {
        return Err(Error::UnsupportedGenerator(k));
    }
    let g = packet.grid();
    if !g.same_lattice(basis.grid()) || basis.n_max() < 1 {
        return Err(Error::GridMismatch);
    }
    packet.require_interior(d)?;
    let state = packet.state(basis)?;
    let t = realize(&t_k(g, k)?, basis)?.matrix;
    let shift: Vec<f64> = commutator_profile(&t, basis, &state).iter().map(|x| eps * x).collect();

    let w = g.omegas();
    let n = packet.number_profile();
    let u0 = packet.u0();
    let (scale, pos) = if k == 1 { (1.0, 1.0) } else { (2.0, u0) };
    let wn: Vec<f64> = w.iter().zip(&n).map(|(w, n)| w * pos * n).collect();
    let prediction: Vec<f64> = d.apply(&wn).iter().map(|x| scale * eps * x).collect();
    let ws: Vec<f64> = w.iter().zip(&n).map(|(w, n)| w * packet.sigma_u() * n).collect();
    let reference: Vec<f64> = d.apply(&ws).iter().map(|x| 2.0 * eps * x).collect();

    let rows: Vec<usize> = d.deep_interior().collect();
    let diff: Vec<f64> = shift.iter().zip(&prediction).map(|(a, b)| a - b).collect();
    let pn = norm_on(&rows, &prediction);
    Ok(DopplerReport {
        generator: k,
        eps,
        u0,
        sigma_u: packet.sigma_u(),
        d_omega: g.d_omega(),
        omega_max: g.omega_max(),
        omegas: w,
        relative_l2: if pn > 0.0 { norm_on(&rows, &diff) / pn } else { f64::NAN },
        shift_norm: norm_on(&rows, &shift),
        reference_norm: norm_on(&rows, &reference),
        mean_position: packet.mean_position(d),
        rows,
        shift,
        prediction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::FrequencyGrid;

    fn setup(u0: f64) -> (OnePacket, FockBasis, DerivativeStencil) {
        let g = FrequencyGrid::with_max(64, 8.0, Default::default()).unwrap();
        (
            OnePacket::gaussian(&g, 4.0, 0.5, u0),
            FockBasis::new(&g, 1).unwrap(),
            DerivativeStencil::new(&g, 4).unwrap(),
        )
    }

    #[test]
    fn acceleration_shift_follows_position() {
        let (p, b, d) = setup(2.0);
        let r = doppler_experiment(&p, 1e-3, &b, &d, 2).unwrap();
        assert!(r.relative_l2 <= 0.10, "{}", r.relative_l2);
        assert!(r.position_error() <= 0.02, "{}", r.position_error());
    }

    #[test]
    fn boost_shift() {
        let (p, b, d) = setup(2.0);
        let r = doppler_experiment(&p, 1e-3, &b, &d, 1).unwrap();
        assert!(r.relative_l2 <= 0.10, "{}", r.relative_l2);
    }

    #[test]
    fn centered_packet_barely_moves() {
        let (p, b, d) = setup(0.0);
        let r = doppler_experiment(&p, 1e-3, &b, &d, 2).unwrap();
        assert!(r.relative_l2.is_nan());
        assert!(r.shift_norm < 0.05 * r.reference_norm, "{} {}", r.shift_norm, r.reference_norm);
    }

    #[test]
    fn rejects_other_generators() {
        let (p, b, d) = setup(1.0);
        assert!(doppler_experiment(&p, 1e-3, &b, &d, 3).is_err());
    }
}
