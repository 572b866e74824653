//! Overlaps between the in modes `e^{-i w u}` and the out modes
//! `e^{-i wbar f(u)}`:
//!
//! `alpha(wbar, w) = N sqrt(w / wbar) int W(u) e^{i (w u - wbar f(u))} du`
//! `beta(wbar, w)  = -N sqrt(w / wbar) int W(u) e^{-i (w u + wbar f(u))} du`
//!
//! with `N = 1 / int W` (window normalization, so that the identity map gives
//! `alpha = 1`) or `N = 1 / 2 pi` (continuum normalization).

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::maps::{ConformalMap, MapKind};
use super::quadrature::{oscillatory_nodes, Window};
use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    Window,
    Continuum,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Gauss-Legendre points per panel.
    pub order: usize,
    /// Oscillations of the fastest integrand per panel.
    pub per_panel: f64,
    /// Absolute bound on the entrywise error estimate.
    pub tolerance: f64,
    /// `None` picks a default from the map and the input grid.
    pub window: Option<Window>,
    pub normalization: Normalization,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            order: 16,
            per_panel: 1.0,
            tolerance: 1e-9,
            window: None,
            normalization: Normalization::Window,
        }
    }
}

impl QuadratureSpec {
    /// Window wide enough that neighbouring grid lines leak below `e^-32`.
    pub fn default_window(map: &ConformalMap, grid_in: &FrequencyGrid) -> Window {
        let wide = 8.0 / grid_in.d_omega();
        match map.kind {
            MapKind::Rindler { .. } => RINDLER_WINDOW,
            // finite domains get the widest Gaussian that fits inside
            _ if map.u_min.is_finite() && map.u_max.is_finite() => Window::Gaussian {
                center: 0.5 * (map.u_min + map.u_max),
                sigma: wide.min(0.5 * (map.u_max - map.u_min) / 8.5),
                cut: 8.5,
            },
            _ => Window::Gaussian {
                center: 0.0,
                sigma: wide,
                cut: 8.5,
            },
        }
    }

    pub fn rindler() -> Self {
        Self {
            window: Some(RINDLER_WINDOW),
            normalization: Normalization::Continuum,
            tolerance: 1e-6,
            ..Self::default()
        }
    }
}

/// Flat over the region where the exponential map is non-degenerate, with a
/// sharp edge on the blue-shifted side and a long tail on the other.
pub const RINDLER_WINDOW: Window = Window::Plateau {
    lo: -4.0,
    hi: 20.0,
    sigma_lo: 0.5,
    sigma_hi: 80.0,
    cut: 8.0,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureMeta {
    pub rule: String,
    pub nodes: usize,
    pub window: Window,
    pub normalization: Normalization,
    /// Largest entrywise difference between two panel resolutions.
    pub error_estimate: f64,
}

/// Rows are out frequencies, columns in frequencies.
#[derive(Clone, Debug)]
pub struct BogoliubovPair {
    pub map: ConformalMap,
    pub omega_out: Vec<f64>,
    pub omega_in: Vec<f64>,
    pub alpha: DMatrix<Complex64>,
    pub beta: DMatrix<Complex64>,
    pub alpha_error: DMatrix<f64>,
    pub beta_error: DMatrix<f64>,
    pub meta: QuadratureMeta,
}

struct Sums {
    alpha: DMatrix<Complex64>,
    beta: DMatrix<Complex64>,
    nodes: usize,
}

const CHUNK: usize = 8192;

/// Raw sums `sum w W e^{i(w u - wbar f)}` and `sum w W e^{-i(w u + wbar f)}`
/// built from four real products of cosine/sine tables.
fn overlap_sums(
    map: &ConformalMap,
    window: &Window,
    w_in: &[f64],
    w_out: &[f64],
    per_panel: f64,
    order: usize,
) -> Result<Sums> {
    let wi_max = w_in.iter().cloned().fold(0.0, f64::max);
    let wo_max = w_out.iter().cloned().fold(0.0, f64::max);
    let freq = |u: f64| wi_max + wo_max * map.derivative(u).abs();
    let (nodes, weights) = oscillatory_nodes(&window.breakpoints(), freq, per_panel, order)?;
    let (nj, nk) = (w_out.len(), w_in.len());

    let parts: Vec<[DMatrix<f64>; 4]> = nodes
        .par_chunks(CHUNK)
        .zip(weights.par_chunks(CHUNK))
        .map(|(u, w)| {
            let n = u.len();
            let f: Vec<f64> = u.iter().map(|&x| map.eval(x)).collect();
            let ww: Vec<f64> = u.iter().zip(w).map(|(&x, &w)| w * window.eval(x)).collect();
            let co = DMatrix::from_fn(nj, n, |j, q| (w_out[j] * f[q]).cos() * ww[q]);
            let so = DMatrix::from_fn(nj, n, |j, q| (w_out[j] * f[q]).sin() * ww[q]);
            let ci = DMatrix::from_fn(n, nk, |q, k| (w_in[k] * u[q]).cos());
            let si = DMatrix::from_fn(n, nk, |q, k| (w_in[k] * u[q]).sin());
            [&co * &ci, &so * &si, &co * &si, &so * &ci]
        })
        .collect();

    let mut acc = [
        DMatrix::zeros(nj, nk),
        DMatrix::zeros(nj, nk),
        DMatrix::zeros(nj, nk),
        DMatrix::zeros(nj, nk),
    ];
    for p in parts {
        for (a, b) in acc.iter_mut().zip(p) {
            *a += b;
        }
    }
    let [cc, ss, cs, sc] = acc;
    Ok(Sums {
        alpha: DMatrix::from_fn(nj, nk, |j, k| Complex64::new(cc[(j, k)] + ss[(j, k)], cs[(j, k)] - sc[(j, k)])),
        beta: DMatrix::from_fn(nj, nk, |j, k| Complex64::new(cc[(j, k)] - ss[(j, k)], -cs[(j, k)] - sc[(j, k)])),
        nodes: nodes.len(),
    })
}

fn check_window(map: &ConformalMap, window: &Window) -> Result<()> {
    window.validate()?;
    let (a, b) = window.support();
    if a < map.u_min || b > map.u_max {
        return Err(Error::InvalidMap(format!(
            "window support [{a}, {b}] leaves the map domain [{}, {}]",
            map.u_min, map.u_max
        )));
    }
    Ok(())
}

/// Windowed overlap matrices with entrywise error estimates from a second,
/// twice finer panel resolution.
pub fn bogoliubov(
    map: &ConformalMap,
    grid_in: &FrequencyGrid,
    grid_out: &FrequencyGrid,
    quad: &QuadratureSpec,
) -> Result<BogoliubovPair> {
    let window = quad.window.unwrap_or_else(|| QuadratureSpec::default_window(map, grid_in));
    check_window(map, &window)?;
    let w_in = grid_in.omegas();
    let w_out = grid_out.omegas();
    let coarse = overlap_sums(map, &window, &w_in, &w_out, quad.per_panel, quad.order)?;
    let fine = overlap_sums(map, &window, &w_in, &w_out, 0.5 * quad.per_panel, quad.order)?;

    let norm = match quad.normalization {
        Normalization::Window => 1.0 / window.area(),
        Normalization::Continuum => 1.0 / std::f64::consts::TAU,
    };
    let pref = DMatrix::from_fn(w_out.len(), w_in.len(), |j, k| norm * (w_in[k] / w_out[j]).sqrt());
    let alpha = fine.alpha.zip_map(&pref, |a, p| a * p);
    let beta = fine.beta.zip_map(&pref, |b, p| -b * p);
    let alpha_error = (&fine.alpha - &coarse.alpha).zip_map(&pref, |d, p| d.norm() * p);
    let beta_error = (&fine.beta - &coarse.beta).zip_map(&pref, |d, p| d.norm() * p);
    let estimate = alpha_error.max().max(beta_error.max());
    if !(estimate <= quad.tolerance) {
        return Err(Error::Quadrature {
            estimate,
            tolerance: quad.tolerance,
        });
    }
    Ok(BogoliubovPair {
        map: *map,
        omega_out: w_out,
        omega_in: w_in,
        alpha,
        beta,
        alpha_error,
        beta_error,
        meta: QuadratureMeta {
            rule: format!("composite Gauss-Legendre, {} points per panel", quad.order),
            nodes: fine.nodes,
            window,
            normalization: quad.normalization,
            error_estimate: estimate,
        },
    })
}

impl BogoliubovPair {
    pub fn beta_norm(&self) -> f64 {
        self.beta.norm()
    }

    pub fn beta_max(&self) -> f64 {
        self.beta.iter().map(|b| b.norm()).fold(0.0, f64::max)
    }

    /// CSV rows `omega_out, omega_in, |alpha|, arg alpha, |beta|, arg beta, err`.
    pub fn to_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Config(format!("csv: {e}"));
        w.write_record(["omega_out", "omega_in", "abs_alpha", "arg_alpha", "abs_beta", "arg_beta", "error"])
            .map_err(io)?;
        for (j, wo) in self.omega_out.iter().enumerate() {
            for (k, wi) in self.omega_in.iter().enumerate() {
                let (a, b) = (self.alpha[(j, k)], self.beta[(j, k)]);
                let err = self.alpha_error[(j, k)].max(self.beta_error[(j, k)]);
                w.write_record(
                    [*wo, *wi, a.norm(), a.arg(), b.norm(), b.arg(), err].map(|x| format!("{x:.12e}")),
                )
                .map_err(io)?;
            }
        }
        w.flush().map_err(|e| Error::Config(format!("csv: {e}")))?;
        Ok(())
    }
}

/// `|beta|^2` against the exponential-map result
/// `1 / (2 pi a wbar (e^{2 pi w / a} - 1))` along one out row.
#[derive(Clone, Debug, Serialize)]
pub struct PlanckFit {
    pub accel: f64,
    pub omega_out: f64,
    pub omega_in: Vec<f64>,
    pub ratio: Vec<f64>,
}

impl PlanckFit {
    pub fn max_deviation(&self) -> f64 {
        self.ratio.iter().map(|r| (r - 1.0).abs()).fold(0.0, f64::max)
    }
}

pub fn planck_spectrum(accel: f64, omega_out: f64, grid_in: &FrequencyGrid, quad: &QuadratureSpec) -> Result<PlanckFit> {
    let map = ConformalMap::new(MapKind::Rindler { accel })?;
    let grid_out = FrequencyGrid::new(4, omega_out / 4.0)?;
    let pair = bogoliubov(&map, grid_in, &grid_out, quad)?;
    let row = 3;
    let tau = std::f64::consts::TAU;
    let ratio = pair
        .omega_in
        .iter()
        .enumerate()
        .map(|(k, &w)| {
            let exact = 1.0 / (tau * accel * omega_out * ((tau * w / accel).exp() - 1.0));
            pair.beta[(row, k)].norm_sqr() / exact
        })
        .collect();
    Ok(PlanckFit {
        accel,
        omega_out,
        omega_in: pair.omega_in,
        ratio,
    })
}
