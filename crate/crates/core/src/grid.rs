//! Positive-frequency lattice and finite-difference stencils over it.
//!
//! Modes are indexed from zero in code: mode `j` carries frequency
//! `omega(j) = (j + 1) * d_omega`, so there is no zero mode.
//!
//! Continuum objects map onto the lattice through one fixed dictionary:
//!
//! | continuum                   | lattice                      |
//! |-----------------------------|------------------------------|
//! | `a_w`                       | `a_j / sqrt(d_nu)`           |
//! | `2 pi delta(w - w')`        | `delta_jk / d_nu`            |
//! | `delta(w + w')` (signed)    | `delta_{m,-m'} / d_omega`    |
//! | `int dw / 2 pi f(w)`        | `sum_j d_nu f(w_j)`          |
//!
//! with `d_nu = d_omega / 2 pi`.

use std::f64::consts::PI;
use std::ops::Range;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical constants. The speed of light is fixed at one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub hbar: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self { hbar: 1.0 }
    }
}

impl Constants {
    pub fn new(hbar: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidGrid(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Self { hbar })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    modes: usize,
    d_omega: f64,
    constants: Constants,
}

/// Smallest lattice accepted by [`FrequencyGrid::new`].
pub const MIN_MODES: usize = 4;

impl FrequencyGrid {
    pub fn new(modes: usize, d_omega: f64) -> Result<Self> {
        Self::with_constants(modes, d_omega, Constants::default())
    }

    pub fn with_constants(modes: usize, d_omega: f64, constants: Constants) -> Result<Self> {
        if modes < MIN_MODES {
            return Err(Error::InvalidGrid(format!(
                "need at least {MIN_MODES} modes, got {modes}"
            )));
        }
        if !(d_omega > 0.0 && d_omega.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "frequency spacing must be positive, got {d_omega}"
            )));
        }
        Constants::new(constants.hbar)?;
        Ok(Self {
            modes,
            d_omega,
            constants,
        })
    }

    /// Grid with `modes` points covering `(0, omega_max]`.
    pub fn with_max(modes: usize, omega_max: f64, constants: Constants) -> Result<Self> {
        Self::with_constants(modes, omega_max / modes as f64, constants)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn d_omega(&self) -> f64 {
        self.d_omega
    }

    /// Spectral measure weight `d_omega / 2 pi`.
    pub fn d_nu(&self) -> f64 {
        self.d_omega / (2.0 * PI)
    }

    pub fn hbar(&self) -> f64 {
        self.constants.hbar
    }

    pub fn constants(&self) -> Constants {
        self.constants
    }

    pub fn omega(&self, j: usize) -> f64 {
        (j + 1) as f64 * self.d_omega
    }

    /// Frequency of a signed lattice index (`m = 0` is the zero frequency).
    pub fn signed_omega(&self, m: i64) -> f64 {
        m as f64 * self.d_omega
    }

    pub fn omegas(&self) -> Vec<f64> {
        (0..self.modes).map(|j| self.omega(j)).collect()
    }

    pub fn omega_max(&self) -> f64 {
        self.omega(self.modes - 1)
    }

    /// Same frequency window, `factor` times more modes.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::with_constants(
            self.modes * factor,
            self.d_omega / factor as f64,
            self.constants,
        )
    }

    /// Riemann sum `int dw / 2 pi f(w)`.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        values.iter().sum::<f64>() * self.d_nu()
    }

    pub(crate) fn same_lattice(&self, other: &FrequencyGrid) -> bool {
        self.modes == other.modes
            && self.d_omega.to_bits() == other.d_omega.to_bits()
            && self.constants.hbar.to_bits() == other.constants.hbar.to_bits()
    }
}

/// Central-difference derivative along the mode index, with one-sided rows
/// of the same order at the two ends of the lattice.
#[derive(Clone, Debug)]
pub struct DerivativeStencil {
    order: usize,
    modes: usize,
    d_omega: f64,
    rows: Vec<Vec<(usize, f64)>>,
}

// Central first-derivative weights on offsets 1..=s (antisymmetric).
const CENTRAL_2: [f64; 1] = [0.5];
const CENTRAL_4: [f64; 2] = [2.0 / 3.0, -1.0 / 12.0];

// One-sided weights at offsets 0.. from the boundary row.
const FORWARD_2: [f64; 3] = [-1.5, 2.0, -0.5];
const FORWARD_4: [f64; 5] = [-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -0.25];
// Second row for order 4: offsets -1..=3.
const SKEWED_4: [f64; 5] = [-0.25, -5.0 / 6.0, 1.5, -0.5, 1.0 / 12.0];

impl DerivativeStencil {
    pub fn new(grid: &FrequencyGrid, order: usize) -> Result<Self> {
        let half = match order {
            2 => 1,
            4 => 2,
            _ => return Err(Error::UnsupportedOrder(order)),
        };
        let m = grid.modes();
        let needed = if order == 2 { 3 } else { 5 };
        if m < needed {
            return Err(Error::StencilTooWide {
                order,
                needed,
                modes: m,
            });
        }
        let inv_h = 1.0 / grid.d_omega();
        let central: &[f64] = if order == 2 { &CENTRAL_2 } else { &CENTRAL_4 };

        let mut rows = Vec::with_capacity(m);
        for j in 0..m {
            let mut row = Vec::new();
            if j >= half && j + half < m {
                for (k, &w) in central.iter().enumerate().rev() {
                    row.push((j - k - 1, -w * inv_h));
                }
                for (k, &w) in central.iter().enumerate() {
                    row.push((j + k + 1, w * inv_h));
                }
            } else if j < half {
                // j == 0 always gets the forward stencil; for order 4, j == 1
                // gets the skewed one.
                if j == 0 {
                    let w: &[f64] = if order == 2 { &FORWARD_2 } else { &FORWARD_4 };
                    row.extend(w.iter().enumerate().map(|(k, &c)| (k, c * inv_h)));
                } else {
                    row.extend(SKEWED_4.iter().enumerate().map(|(k, &c)| (k, c * inv_h)));
                }
            } else {
                // mirror image of the leading rows, with the sign flipped
                let from_end = m - 1 - j;
                let w: &[f64] = match (order, from_end) {
                    (2, _) => &FORWARD_2,
                    (_, 0) => &FORWARD_4,
                    _ => &SKEWED_4,
                };
                let anchor = if from_end == 0 { j } else { j + 1 };
                let mut mirrored: Vec<(usize, f64)> = w
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| (anchor - k, -c * inv_h))
                    .collect();
                mirrored.reverse();
                row.extend(mirrored);
            }
            rows.push(row);
        }

        Ok(Self {
            order,
            modes: m,
            d_omega: grid.d_omega(),
            rows,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn half_width(&self) -> usize {
        self.order / 2
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn d_omega(&self) -> f64 {
        self.d_omega
    }

    /// Rows where the full central stencil fits.
    pub fn interior(&self) -> Range<usize> {
        let s = self.half_width();
        s..self.modes - s
    }

    /// Rows on which `D` coincides with its antisymmetric part: the row's
    /// support stays in the interior and no one-sided boundary row reaches it.
    pub fn deep_interior(&self) -> Range<usize> {
        let s = self.half_width();
        // one-sided rows span 2s + 1 columns
        let start = 2 * s + 1;
        start..self.modes.saturating_sub(start).max(start)
    }

    pub fn row(&self, j: usize) -> &[(usize, f64)] {
        &self.rows[j]
    }

    pub fn entry(&self, j: usize, l: usize) -> f64 {
        self.rows[j]
            .iter()
            .find(|(c, _)| *c == l)
            .map(|(_, w)| *w)
            .unwrap_or(0.0)
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut d = nalgebra::DMatrix::zeros(self.modes, self.modes);
        for (j, row) in self.rows.iter().enumerate() {
            for &(l, w) in row {
                d[(j, l)] = w;
            }
        }
        d
    }

    /// `(D - D^T) / 2`. Equal to `D` on [`Self::deep_interior`] rows.
    pub fn antisymmetric(&self) -> nalgebra::DMatrix<f64> {
        let d = self.to_dense();
        (&d - d.transpose()) * 0.5
    }

    pub fn apply(&self, values: &[f64]) -> Vec<f64> {
        assert_eq!(values.len(), self.modes);
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(l, w)| w * values[l]).sum())
            .collect()
    }

    pub fn apply_complex(&self, values: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(values.len(), self.modes);
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(l, w)| values[l] * w).sum())
            .collect()
    }
}

/// Compact second-order central weights for the `k`-th derivative at zero,
/// as `(offset, weight)` pairs on a lattice of spacing `h`.
///
/// These are the minimal-width stencils: the first and second derivatives
/// only touch offsets `-1..=1`, the third touches `-2..=2`.
pub fn taylor_weights(k: usize, h: f64) -> Result<Vec<(i64, f64)>> {
    let w = match k {
        0 => vec![(0, 1.0)],
        1 => vec![(-1, -0.5 / h), (1, 0.5 / h)],
        2 => {
            let s = 1.0 / (h * h);
            vec![(-1, s), (0, -2.0 * s), (1, s)]
        }
        3 => {
            let s = 1.0 / (h * h * h);
            vec![(-2, -0.5 * s), (-1, s), (1, -s), (2, 0.5 * s)]
        }
        _ => return Err(Error::UnsupportedGenerator(k)),
    };
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid_values() {
        let g = FrequencyGrid::new(4, 0.5).unwrap();
        assert_eq!(g.omegas(), vec![0.5, 1.0, 1.5, 2.0]);
        let g = FrequencyGrid::new(64, 0.125).unwrap();
        assert_eq!(g.omega(63), 8.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(FrequencyGrid::new(1, 0.5), Err(Error::InvalidGrid(_))));
        assert!(FrequencyGrid::new(8, 0.0).is_err());
        assert!(FrequencyGrid::new(8, -1.0).is_err());
        assert!(Constants::new(0.0).is_err());
    }

    #[test]
    fn interior_row_coefficients() {
        let g = FrequencyGrid::new(8, 0.25).unwrap();
        let d = DerivativeStencil::new(&g, 2).unwrap();
        assert_eq!(d.row(3), &[(2, -2.0), (4, 2.0)]);
        assert_eq!(d.interior(), 1..7);
    }

    #[test]
    fn antisymmetric_on_interior() {
        for order in [2, 4] {
            let g = FrequencyGrid::new(16, 0.3).unwrap();
            let d = DerivativeStencil::new(&g, order).unwrap();
            let r = d.interior();
            for j in r.clone() {
                for l in r.clone() {
                    assert_eq!(d.entry(j, l), -d.entry(l, j));
                }
            }
        }
    }

    #[test]
    fn exact_on_low_polynomials() {
        for order in [2, 4] {
            let g = FrequencyGrid::new(12, 0.5).unwrap();
            let d = DerivativeStencil::new(&g, order).unwrap();
            let w = g.omegas();
            let sq: Vec<f64> = w.iter().map(|x| x * x).collect();
            let d1 = d.apply(&w);
            let d2 = d.apply(&sq);
            // boundary rows are one-sided of the same order, also exact here
            for j in 0..g.modes() {
                assert!((d1[j] - 1.0).abs() < 1e-12, "order {order} row {j}");
                assert!((d2[j] - 2.0 * w[j]).abs() < 1e-11, "order {order} row {j}");
            }
        }
    }

    #[test]
    fn deep_rows_are_antisymmetric() {
        for order in [2, 4] {
            let g = FrequencyGrid::new(20, 0.3).unwrap();
            let d = DerivativeStencil::new(&g, order).unwrap();
            let da = d.antisymmetric();
            let deep = d.deep_interior();
            for j in 0..20 {
                let same = (0..20).all(|l| da[(j, l)] == d.entry(j, l));
                assert_eq!(same, deep.contains(&j), "order {order} row {j}");
            }
        }
    }

    #[test]
    fn too_small_for_stencil() {
        let g = FrequencyGrid::new(4, 0.5).unwrap();
        assert!(matches!(
            DerivativeStencil::new(&g, 4),
            Err(Error::StencilTooWide { .. })
        ));
        assert!(matches!(DerivativeStencil::new(&g, 3), Err(Error::UnsupportedOrder(3))));
    }

    fn plane_wave_error(modes: usize, order: usize) -> f64 {
        let u0 = 1.3;
        let g = FrequencyGrid::with_max(modes, 4.0, Constants::default()).unwrap();
        let d = DerivativeStencil::new(&g, order).unwrap();
        let f: Vec<Complex64> = g
            .omegas()
            .iter()
            .map(|&w| Complex64::new(0.0, w * u0).exp())
            .collect();
        let df = d.apply_complex(&f);
        d.interior()
            .map(|j| (df[j] - Complex64::new(0.0, u0) * f[j]).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn refinement_ratio_matches_order() {
        for order in [2usize, 4] {
            let e1 = plane_wave_error(32, order);
            let e2 = plane_wave_error(64, order);
            let e3 = plane_wave_error(128, order);
            let slope = ((e1 / e3).ln()) / (4f64).ln();
            assert!((slope - order as f64).abs() < 0.3, "order {order}: slope {slope}");
            if order == 2 {
                assert!((e1 / e2 - 4.0).abs() < 0.3, "ratio {}", e1 / e2);
            }
        }
    }

    #[test]
    fn taylor_weights_annihilate_low_monomials() {
        let h = 0.37;
        for k in 0..=3usize {
            let w = taylor_weights(k, h).unwrap();
            for p in 0..=k + 1 {
                let v: f64 = w.iter().map(|&(m, c)| c * (m as f64 * h).powi(p as i32)).sum();
                let expect = if p == k {
                    (1..=k).product::<usize>() as f64
                } else if p < k {
                    0.0
                } else {
                    // odd/even symmetry kills the next power as well
                    0.0
                };
                assert!((v - expect).abs() < 1e-9, "k {k} p {p}: {v}");
            }
        }
        assert!(taylor_weights(4, h).is_err());
    }
}
