use std::f64::consts::PI;

use num_complex::Complex64;

use super::basis::FockBasis;
use super::ops::FieldState;
use crate::error::{Error, Result};
use crate::grid::{DerivativeStencil, FrequencyGrid};

/// Relative weight `|f_j|^2 / max |f|^2` above which a packet counts as
/// touching a boundary row.
pub const BOUNDARY_THRESHOLD: f64 = 1e-4;

/// One-particle spectral amplitude `f_j`, normalized as `sum_j d_nu |f_j|^2 = 1`.
#[derive(Clone, Debug)]
pub struct OnePacket {
    grid: FrequencyGrid,
    amps: Vec<Complex64>,
    u0: f64,
    sigma_u: f64,
}

impl OnePacket {
    /// `f(w) ∝ exp(-(w - w_c)^2 / (4 s^2)) e^(i w u0)`; the position spread
    /// is `1 / (2 s)`.
    pub fn gaussian(grid: &FrequencyGrid, omega_c: f64, sigma_omega: f64, u0: f64) -> Self {
        let amps = grid
            .omegas()
            .iter()
            .map(|&w| {
                let env = (-(w - omega_c).powi(2) / (4.0 * sigma_omega * sigma_omega)).exp();
                Complex64::from_polar(env, w * u0)
            })
            .collect();
        let mut p = Self {
            grid: grid.clone(),
            amps,
            u0,
            sigma_u: 1.0 / (2.0 * sigma_omega),
        };
        p.normalize();
        p
    }

    /// Arbitrary amplitudes. The nominal center and spread start at zero;
    /// see [`Self::with_nominal`].
    pub fn from_amplitudes(grid: &FrequencyGrid, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != grid.modes() {
            return Err(Error::GridMismatch);
        }
        let mut p = Self {
            grid: grid.clone(),
            amps,
            u0: 0.0,
            sigma_u: 0.0,
        };
        p.normalize();
        Ok(p)
    }

    pub fn with_nominal(mut self, u0: f64, sigma_u: f64) -> Self {
        self.u0 = u0;
        self.sigma_u = sigma_u;
        self
    }

    fn normalize(&mut self) {
        let n: f64 = self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.d_nu();
        let s = n.sqrt();
        self.amps.iter_mut().for_each(|a| *a /= s);
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn u0(&self) -> f64 {
        self.u0
    }

    pub fn sigma_u(&self) -> f64 {
        self.sigma_u
    }

    /// `<n_w[j]> = |f_j|^2`.
    pub fn number_profile(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `<m_w[j]> = Im(f_j^* (D_A f)_j)` with `D_A` the antisymmetric stencil.
    pub fn position_profile(&self, d: &DerivativeStencil) -> Vec<f64> {
        let da = d.antisymmetric();
        let m = self.amps.len();
        (0..m)
            .map(|j| {
                let df: Complex64 = (0..m).map(|l| self.amps[l] * da[(j, l)]).sum();
                (self.amps[j].conj() * df).im
            })
            .collect()
    }

    /// `<m> = sum_j d_nu <m_w[j]>`.
    pub fn mean_position(&self, d: &DerivativeStencil) -> f64 {
        self.position_profile(d).iter().sum::<f64>() * self.grid.d_nu()
    }

    /// Largest `|f_j|^2` outside the stencil's deep interior, relative to the peak.
    pub fn boundary_weight(&self, d: &DerivativeStencil) -> f64 {
        let peak = self.amps.iter().map(|a| a.norm_sqr()).fold(0.0, f64::max);
        let deep = d.deep_interior();
        self.amps
            .iter()
            .enumerate()
            .filter(|(j, _)| !deep.contains(j))
            .map(|(_, a)| a.norm_sqr())
            .fold(0.0, f64::max)
            / peak
    }

    pub fn require_interior(&self, d: &DerivativeStencil) -> Result<()> {
        let w = self.boundary_weight(d);
        if w > BOUNDARY_THRESHOLD {
            return Err(Error::PacketTouchesBoundary { weight: w });
        }
        Ok(())
    }

    /// `|f> = sum_j sqrt(d_nu) f_j a_j^+ |vac>`.
    pub fn state(&self, basis: &FockBasis) -> Result<FieldState> {
        if basis.n_max() < 1 {
            return Err(Error::SectorMismatch("packet needs at least one quantum".into()));
        }
        if !basis.grid().same_lattice(&self.grid) {
            return Err(Error::GridMismatch);
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); basis.dimension()];
        let s = self.grid.d_nu().sqrt();
        for (j, f) in self.amps.iter().enumerate() {
            amps[basis.one_particle(j).expect("one quantum fits")] = f * s;
        }
        Ok(FieldState { amps })
    }

    /// Position-space wavefunction, see [`position_transform`].
    pub fn position_samples(&self, points: usize) -> (Vec<f64>, Vec<Complex64>) {
        position_transform(&self.grid, &self.amps, points)
    }
}

/// `psi(u) = sum_j d_nu f_j e^(-i w_j u)` on `points` samples of one period
/// `2 pi / d_omega`, centered on `u = 0`.
pub fn position_transform(grid: &FrequencyGrid, amps: &[Complex64], points: usize) -> (Vec<f64>, Vec<Complex64>) {
    let period = 2.0 * PI / grid.d_omega();
    let du = period / points as f64;
    let us: Vec<f64> = (0..points).map(|k| (k as f64 - (points / 2) as f64) * du).collect();
    let psi = us
        .iter()
        .map(|&u| {
            amps.iter()
                .enumerate()
                .map(|(j, f)| f * Complex64::from_polar(grid.d_nu(), -grid.omega(j) * u))
                .sum()
        })
        .collect();
    (us, psi)
}
