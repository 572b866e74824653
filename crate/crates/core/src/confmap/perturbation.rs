//! Vacuum change under `f(u) = u + eps u^k`, measured on the compactified
//! line `u = R tan(theta / 2)` where the circle modes `e^{-i j theta}` are
//! normalizable and the overlaps are ordinary integrals:
//!
//! `beta_jl = -(1/2 pi) sqrt(l / j) int dtheta e^{-i (l theta + j F(theta))}`
//! with `F = 2 atan(f(u) / R)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::maps::{ConformalMap, MapKind};
use super::quadrature::adaptive_gk15;
use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompactQuadrature {
    /// Circle modes `j = 1..=n_modes`.
    pub n_modes: usize,
    /// The line is covered by `u = R sinh s`, `|s| <= s_max`.
    pub s_max: f64,
    pub tolerance: f64,
    pub max_intervals: usize,
    /// Half width of the window on which the map must be increasing.
    pub core: f64,
}

impl Default for CompactQuadrature {
    fn default() -> Self {
        Self {
            n_modes: 2,
            s_max: 40.0,
            tolerance: 1e-14,
            max_intervals: 200_000,
            core: 10.0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PerturbationScaling {
    pub k: u32,
    pub eps: Vec<f64>,
    pub beta_norms: Vec<f64>,
    pub quadrature_error: Vec<f64>,
    /// Least-squares slope of `ln |beta|` against `ln eps`.
    pub slope: f64,
}

/// Frobenius norm of the compactified `beta` block and its error estimate.
pub fn compact_beta_norm(k: u32, eps: f64, radius: f64, quad: &CompactQuadrature) -> Result<(f64, f64)> {
    let map = ConformalMap::on_domain(MapKind::Perturbation { k, eps }, -quad.core, quad.core)?;
    let n = quad.n_modes;
    let integrand = |s: f64| {
        let u = radius * s.sinh();
        let theta = 2.0 * s.sinh().atan();
        let big_f = 2.0 * (map.eval(u) / radius).atan();
        let jac = 2.0 / s.cosh();
        let mut out = Vec::with_capacity(n * n);
        for j in 1..=n {
            for l in 1..=n {
                out.push(Complex64::from_polar(jac, -(l as f64 * theta + j as f64 * big_f)));
            }
        }
        out
    };
    let breaks: Vec<f64> = (0..=16).map(|i| -quad.s_max + i as f64 * quad.s_max / 8.0).collect();
    let (v, err) = adaptive_gk15(integrand, &breaks, quad.tolerance, quad.max_intervals)?;
    let mut norm2 = 0.0;
    for j in 1..=n {
        for l in 1..=n {
            let pref = (l as f64 / j as f64).sqrt() / std::f64::consts::TAU;
            norm2 += (v[(j - 1) * n + (l - 1)] * pref).norm_sqr();
        }
    }
    Ok((norm2.sqrt(), err))
}

pub fn log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// `eps` values spaced logarithmically from `lo` to `hi`.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Slope of `|beta|` against `eps`; the compactification radius is `2 / dOmega`
/// so that the circle modes sit on the grid frequencies.
pub fn perturbation_scaling(
    k: u32,
    eps_list: &[f64],
    grid: &FrequencyGrid,
    quad: &CompactQuadrature,
) -> Result<PerturbationScaling> {
    if eps_list.len() < 2 || eps_list.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::Config("need at least two positive eps values".into()));
    }
    let radius = 2.0 / grid.d_omega();
    let mut norms = Vec::new();
    let mut errs = Vec::new();
    for &e in eps_list {
        let (b, err) = compact_beta_norm(k, e, radius, quad)?;
        norms.push(b);
        errs.push(err);
    }
    Ok(PerturbationScaling {
        k,
        eps: eps_list.to_vec(),
        slope: log_slope(eps_list, &norms),
        beta_norms: norms,
        quadrature_error: errs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_no_beta() {
        let (b, _) = compact_beta_norm(2, 0.0, 1.0, &CompactQuadrature::default()).unwrap();
        assert!(b < 1e-13, "{b}");
    }

    #[test]
    fn slope_fit_recovers_power() {
        let x = log_space(1e-4, 1e-2, 5);
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v.powf(1.7)).collect();
        assert!((log_slope(&x, &y) - 1.7).abs() < 1e-12);
    }

    #[test]
    fn folding_map_rejected_on_core() {
        let q = CompactQuadrature {
            core: 100.0,
            ..Default::default()
        };
        assert!(compact_beta_norm(2, 1e-2, 1.0, &q).is_err());
    }

    #[test]
    fn scaling_contract() {
        let g = FrequencyGrid::new(4, 2.0).unwrap();
        let eps = log_space(1e-4, 1e-2, 5);
        let q = CompactQuadrature::default();
        let s2 = perturbation_scaling(2, &eps, &g, &q).unwrap();
        let s3 = perturbation_scaling(3, &eps, &g, &q).unwrap();
        assert!(s2.slope >= 1.9, "{}", s2.slope);
        assert!((s3.slope - 1.0).abs() <= 0.2, "{}", s3.slope);
    }
}
