//! Exponential phase operators and the phase-time derivative.
//!
//! The phase itself is never built as a logarithm; only `e_j`, `e_j^+` and
//! `delta'_j = -i sum_l D[j,l] e_l e_j^+` exist.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_factorial;

use super::basis::FockBasis;
use super::ops::{realize_monomials, FockOperator, Ladder, Monomial};
use crate::error::{Error, Result};
use crate::grid::DerivativeStencil;
use crate::sparse::CsrMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhaseConvention {
    /// `e = sum_n |n><n+1|`; `e^+ e = 1 - |0><0|`
    SusskindGlogower,
    /// Cyclic shift on an `(s+1)`-dimensional mode space; unitary.
    PeggBarnett { s: usize },
}

/// Per-mode phase operators under one convention. All modes share the same
/// local matrices.
#[derive(Clone, Debug)]
pub struct PhaseOperatorSet {
    convention: PhaseConvention,
    modes: usize,
    e: CsrMatrix,
    vacuum: CsrMatrix,
}

impl PhaseOperatorSet {
    pub fn new(basis: &FockBasis, convention: PhaseConvention) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        let (dim, mut trip) = match convention {
            PhaseConvention::SusskindGlogower => {
                let dim = basis.n_max() + 1;
                (dim, (0..dim - 1).map(|n| (n, n + 1, one)).collect::<Vec<_>>())
            }
            PhaseConvention::PeggBarnett { s } => {
                if s > basis.n_max() {
                    return Err(Error::Convention(format!(
                        "Pegg-Barnett dimension {} exceeds the mode space {}",
                        s + 1,
                        basis.n_max() + 1
                    )));
                }
                (s + 1, (0..s).map(|n| (n, n + 1, one)).collect::<Vec<_>>())
            }
        };
        if let PhaseConvention::PeggBarnett { s } = convention {
            trip.push((s, 0, one));
        }
        let e = CsrMatrix::from_triplets(dim, dim, &trip);
        let vacuum = CsrMatrix::from_triplets(dim, dim, &[(0, 0, one)]);
        Ok(Self {
            convention,
            modes: basis.modes(),
            e,
            vacuum,
        })
    }

    pub fn convention(&self) -> PhaseConvention {
        self.convention
    }

    /// `e^+ e = 1 - alpha |0><0|`: 1 for Susskind-Glogower, 0 for Pegg-Barnett.
    pub fn alpha(&self) -> f64 {
        match self.convention {
            PhaseConvention::SusskindGlogower => 1.0,
            PhaseConvention::PeggBarnett { .. } => 0.0,
        }
    }

    pub fn local_dim(&self) -> usize {
        self.e.nrows()
    }

    pub fn e_local(&self) -> &CsrMatrix {
        &self.e
    }

    pub fn vacuum_projector_local(&self) -> &CsrMatrix {
        &self.vacuum
    }

    /// `e_j` on the tensor product of the first `factors` mode spaces.
    pub fn e_on_product(&self, factors: usize, j: usize) -> Result<CsrMatrix> {
        if j >= factors || factors > self.modes {
            return Err(Error::SectorMismatch(format!(
                "mode {j} outside a product of {factors} factors"
            )));
        }
        let id = CsrMatrix::identity(self.local_dim());
        let mut out = CsrMatrix::identity(1);
        for k in 0..factors {
            out = out.kron(if k == j { &self.e } else { &id });
        }
        Ok(out)
    }

    fn require_sg(&self) -> Result<()> {
        match self.convention {
            PhaseConvention::SusskindGlogower => Ok(()),
            PhaseConvention::PeggBarnett { .. } => Err(Error::Convention(
                "Pegg-Barnett operators live on the per-mode product space, not the capped basis".into(),
            )),
        }
    }

    /// Susskind-Glogower `e_j` on the capped multimode basis.
    pub fn e(&self, basis: &FockBasis, j: usize) -> Result<CsrMatrix> {
        self.require_sg()?;
        Ok(realize_monomials(basis, &[Monomial::new(Complex64::new(1.0, 0.0), vec![Ladder::PhaseLower(j)])]))
    }

    pub fn e_dag(&self, basis: &FockBasis, j: usize) -> Result<CsrMatrix> {
        self.require_sg()?;
        Ok(realize_monomials(basis, &[Monomial::new(Complex64::new(1.0, 0.0), vec![Ladder::PhaseRaise(j)])]))
    }
}

fn require_interior(d: &DerivativeStencil, j: usize) -> Result<()> {
    let r = d.interior();
    if !r.contains(&j) {
        return Err(Error::BoundaryMode {
            mode: j,
            start: r.start,
            end: r.end,
        });
    }
    Ok(())
}

fn delta_prime_terms(d: &DerivativeStencil, j: usize, wrap_sqrt_n: bool) -> Vec<Monomial> {
    let mi = Complex64::new(0.0, -1.0);
    d.row(j)
        .iter()
        .map(|&(l, w)| {
            let ops = if wrap_sqrt_n {
                vec![Ladder::SqrtNumber(j), Ladder::PhaseLower(l), Ladder::PhaseRaise(j), Ladder::SqrtNumber(j)]
            } else {
                vec![Ladder::PhaseLower(l), Ladder::PhaseRaise(j)]
            };
            Monomial::new(mi * w, ops)
        })
        .collect()
}

/// `delta'_j = -i e'_j e_j^+` with `e'_j = sum_l D[j,l] e_l`.
/// Not exactly hermitian; see [`FockOperator::hermiticity_ok`].
pub fn delta_prime(
    phases: &PhaseOperatorSet,
    basis: &FockBasis,
    d: &DerivativeStencil,
    j: usize,
) -> Result<FockOperator> {
    phases.require_sg()?;
    require_interior(d, j)?;
    Ok(FockOperator::new(
        realize_monomials(basis, &delta_prime_terms(d, j, false)),
        format!("delta'[{j}]"),
        false,
    ))
}

/// `sqrt(n_w[j]) delta'_j sqrt(n_w[j])`.
pub fn sqrt_n_delta_prime_sqrt_n(
    phases: &PhaseOperatorSet,
    basis: &FockBasis,
    d: &DerivativeStencil,
    j: usize,
) -> Result<FockOperator> {
    phases.require_sg()?;
    require_interior(d, j)?;
    let s = Complex64::new(1.0 / basis.grid().d_nu(), 0.0);
    Ok(FockOperator::new(
        realize_monomials(basis, &delta_prime_terms(d, j, true)).scale(s),
        format!("sqrt(n) delta' sqrt(n)[{j}]"),
        false,
    ))
}

/// Truncated single-mode coherent state `|alpha>`.
#[derive(Clone, Debug)]
pub struct CoherentMode {
    amps: Vec<Complex64>,
}

impl CoherentMode {
    /// Truncated at `|alpha|^2 + 12 |alpha| + 20` quanta and renormalized.
    pub fn new(alpha: Complex64) -> Self {
        let r = alpha.norm();
        let cap = (r * r + 12.0 * r + 20.0).ceil() as usize;
        let th = alpha.arg();
        let mut amps: Vec<Complex64> = (0..=cap)
            .map(|n| {
                let logc = if r > 0.0 {
                    -0.5 * r * r + n as f64 * r.ln() - 0.5 * ln_factorial(n as u64)
                } else if n == 0 {
                    0.0
                } else {
                    f64::NEG_INFINITY
                };
                Complex64::from_polar(logc.exp(), n as f64 * th)
            })
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        Self { amps }
    }

    pub fn mean_number(&self) -> f64 {
        self.amps.iter().enumerate().map(|(n, a)| n as f64 * a.norm_sqr()).sum()
    }

    /// Susskind-Glogower `<e>`.
    pub fn mean_e(&self) -> Complex64 {
        self.amps.windows(2).map(|w| w[0].conj() * w[1]).sum()
    }

    /// `<sqrt(N) e^+ sqrt(N)>`.
    pub fn mean_sqrt_n_e_dag_sqrt_n(&self) -> Complex64 {
        self.amps
            .windows(2)
            .enumerate()
            .map(|(n, w)| w[1].conj() * w[0] * ((n * (n + 1)) as f64).sqrt())
            .sum()
    }
}

/// `<sqrt(n_w) delta' sqrt(n_w)>` per mode on a product coherent state,
/// real part. Modes factorize, and `e_j e_j^+ = 1` turns the diagonal term
/// into `<N_j>`.
pub fn phase_route_profile(alphas: &[Complex64], d: &DerivativeStencil, d_nu: f64) -> Vec<f64> {
    let modes: Vec<CoherentMode> = alphas.iter().map(|&a| CoherentMode::new(a)).collect();
    let e: Vec<Complex64> = modes.iter().map(|m| m.mean_e()).collect();
    let mi = Complex64::new(0.0, -1.0);
    (0..alphas.len())
        .map(|j| {
            let h = modes[j].mean_sqrt_n_e_dag_sqrt_n();
            let mut acc = Complex64::new(0.0, 0.0);
            for &(l, w) in d.row(j) {
                acc += if l == j {
                    Complex64::new(w * modes[j].mean_number(), 0.0)
                } else {
                    e[l] * h * w
                };
            }
            (mi * acc).re / d_nu
        })
        .collect()
}

/// `<m_w[j]>` on the same coherent state: `Im(alpha_j^* (D_A alpha)_j) / d_nu`.
pub fn position_route_profile(alphas: &[Complex64], d: &DerivativeStencil, d_nu: f64) -> Vec<f64> {
    let da = d.antisymmetric();
    let m = alphas.len();
    (0..m)
        .map(|j| {
            let s: Complex64 = (0..m).map(|l| alphas[l] * da[(j, l)]).sum();
            (alphas[j].conj() * s).im / d_nu
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::ops::{number, FieldState};
    use crate::fock::packet::OnePacket;
    use crate::grid::FrequencyGrid;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn sg_relations() {
        let g = FrequencyGrid::new(4, 0.5).unwrap();
        let b = FockBasis::new(&g, 3).unwrap();
        let ph = PhaseOperatorSet::new(&b, PhaseConvention::SusskindGlogower).unwrap();
        let e = ph.e_local();
        let dim = ph.local_dim();
        let id = CsrMatrix::identity(dim);
        let eed = e.matmul(&e.adjoint());
        // e e^+ = 1 below the truncation level
        assert_eq!(eed.restrict(&(0..dim - 1).collect::<Vec<_>>()), CsrMatrix::identity(dim - 1));
        assert_eq!(e.adjoint().matmul(e), id.sub(ph.vacuum_projector_local()));
        assert_eq!(ph.alpha(), 1.0);
        // on the multimode basis
        for j in 0..4 {
            let ej = ph.e(&b, j).unwrap();
            let edj = ph.e_dag(&b, j).unwrap();
            let low = b.indices_up_to(2);
            assert_eq!(ej.matmul(&edj).restrict(&low), CsrMatrix::identity(low.len()));
            let vac_proj: Vec<Complex64> = (0..b.dimension())
                .map(|i| c(if b.occupation(i)[j] == 0 { 1.0 } else { 0.0 }))
                .collect();
            let expect = CsrMatrix::identity(b.dimension()).sub(&CsrMatrix::from_diagonal(&vac_proj));
            assert_eq!(edj.matmul(&ej), expect);
            for k in 0..4 {
                assert_eq!(ej.commutator(&ph.e(&b, k).unwrap()).nnz(), 0);
            }
        }
    }

    #[test]
    fn pb_unitary_and_commuting() {
        let g = FrequencyGrid::new(4, 0.5).unwrap();
        let b = FockBasis::new(&g, 3).unwrap();
        let ph = PhaseOperatorSet::new(&b, PhaseConvention::PeggBarnett { s: 3 }).unwrap();
        let e = ph.e_local();
        let id = CsrMatrix::identity(4);
        assert_eq!(e.matmul(&e.adjoint()), id);
        assert_eq!(e.adjoint().matmul(e), id);
        assert_eq!(ph.alpha(), 0.0);
        let e0 = ph.e_on_product(3, 0).unwrap();
        let e2 = ph.e_on_product(3, 2).unwrap();
        assert_eq!(e0.commutator(&e2).nnz(), 0);
        assert!(PhaseOperatorSet::new(&b, PhaseConvention::PeggBarnett { s: 4 }).is_err());
        assert!(ph.e(&b, 0).is_err());
    }

    #[test]
    fn phase_time_on_one_particle_packet() {
        let g = FrequencyGrid::with_max(24, 8.0, Default::default()).unwrap();
        let b = FockBasis::new(&g, 2).unwrap();
        let d = DerivativeStencil::new(&g, 2).unwrap();
        let ph = PhaseOperatorSet::new(&b, PhaseConvention::SusskindGlogower).unwrap();
        let p = OnePacket::gaussian(&g, 4.0, 0.8, 1.2);
        let s = p.state(&b).unwrap();
        let cj: Vec<Complex64> = p.amplitudes().iter().map(|f| f * g.d_nu().sqrt()).collect();
        for j in [8usize, 11, 12, 15] {
            let dp = delta_prime(&ph, &b, &d, j).unwrap();
            let got = s.expectation(&dp.matrix);
            let dc: Complex64 = d.row(j).iter().map(|&(l, w)| cj[l] * w).sum();
            let expect = Complex64::new(0.0, -1.0) * cj[j].conj() * dc;
            assert!((got - expect).norm() < 1e-12, "j {j}");
            let nj = s.expectation(&number(&b, j)).re;
            assert!((got.re / nj - 1.2).abs() < 0.1, "j {j}: {}", got.re / nj);
        }
        let vac = FieldState::vacuum(&b);
        let w = sqrt_n_delta_prime_sqrt_n(&ph, &b, &d, 10).unwrap();
        assert_eq!(vac.expectation(&w.matrix).norm(), 0.0);
        assert!(delta_prime(&ph, &b, &d, 0).is_err());
    }

    #[test]
    fn coherent_mode_statistics() {
        let a = Complex64::from_polar(3.0, 0.7);
        let m = CoherentMode::new(a);
        assert!((m.mean_number() - 9.0).abs() < 1e-9);
        // <e> has the phase of alpha and modulus slightly below one
        let e = m.mean_e();
        assert!((e.arg() - 0.7).abs() < 1e-12);
        assert!(e.norm() < 1.0 && e.norm() > 0.95);
    }
}
