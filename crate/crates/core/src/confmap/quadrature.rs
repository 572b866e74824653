use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smooth taper that regularizes the non-decaying mode overlaps.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Window {
    /// `exp(-(u - center)^2 / (2 sigma^2))` cut at `center +- cut * sigma`.
    Gaussian { center: f64, sigma: f64, cut: f64 },
    /// 1 on `[lo, hi]` with Gaussian shoulders of widths `sigma_lo`, `sigma_hi`.
    Plateau {
        lo: f64,
        hi: f64,
        sigma_lo: f64,
        sigma_hi: f64,
        cut: f64,
    },
}

impl Window {
    pub fn eval(&self, u: f64) -> f64 {
        let (a, b) = self.support();
        if u < a || u > b {
            return 0.0;
        }
        match *self {
            Window::Gaussian { center, sigma, .. } => (-(u - center).powi(2) / (2.0 * sigma * sigma)).exp(),
            Window::Plateau {
                lo,
                hi,
                sigma_lo,
                sigma_hi,
                ..
            } => {
                if u < lo {
                    (-(u - lo).powi(2) / (2.0 * sigma_lo * sigma_lo)).exp()
                } else if u > hi {
                    (-(u - hi).powi(2) / (2.0 * sigma_hi * sigma_hi)).exp()
                } else {
                    1.0
                }
            }
        }
    }

    pub fn support(&self) -> (f64, f64) {
        match *self {
            Window::Gaussian { center, sigma, cut } => (center - cut * sigma, center + cut * sigma),
            Window::Plateau {
                lo,
                hi,
                sigma_lo,
                sigma_hi,
                cut,
            } => (lo - cut * sigma_lo, hi + cut * sigma_hi),
        }
    }

    /// Points where the window is not smooth; panels must not straddle them.
    pub fn breakpoints(&self) -> Vec<f64> {
        let (a, b) = self.support();
        match *self {
            Window::Gaussian { .. } => vec![a, b],
            Window::Plateau { lo, hi, .. } => vec![a, lo, hi, b],
        }
    }

    /// `int W du`, by quadrature.
    pub fn area(&self) -> f64 {
        let rule = GaussLegendre::new(32).expect("degree >= 2");
        self.breakpoints()
            .windows(2)
            .map(|w| {
                let n = 64;
                let h = (w[1] - w[0]) / n as f64;
                (0..n)
                    .map(|i| {
                        let a = w[0] + i as f64 * h;
                        rule.integrate(a, a + h, |u| self.eval(u))
                    })
                    .sum::<f64>()
            })
            .sum()
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Window::Gaussian { sigma, cut, center } => sigma > 0.0 && cut > 0.0 && center.is_finite(),
            Window::Plateau {
                lo,
                hi,
                sigma_lo,
                sigma_hi,
                cut,
            } => lo <= hi && sigma_lo > 0.0 && sigma_hi > 0.0 && cut > 0.0,
        };
        if ok && self.support().0.is_finite() && self.support().1.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidMap(format!("bad window {self:?}")))
        }
    }
}

/// Composite Gauss-Legendre nodes on `[a, b]`, with panel lengths chosen so
/// that each panel spans about `per_panel` oscillations of local angular
/// frequency `freq(u)`.
pub fn oscillatory_nodes(
    breaks: &[f64],
    freq: impl Fn(f64) -> f64,
    per_panel: f64,
    order: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let rule = GaussLegendre::new(order).map_err(|e| Error::Config(format!("quadrature order {order}: {e}")))?;
    let pairs = rule.as_node_weight_pairs();
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let target = per_panel * std::f64::consts::TAU;
    for seg in breaks.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        if b <= a {
            continue;
        }
        let mut lo = a;
        while lo < b {
            // step from the larger of the frequencies at both ends of a trial panel
            let mut h = target / freq(lo).max(1e-300);
            h = h.min(b - lo);
            let f_hi = freq(lo + h);
            if f_hi * h > 1.5 * target {
                h = (target / f_hi).min(b - lo);
            }
            let hi = if b - (lo + h) < 1e-3 * h { b } else { lo + h };
            let mid = 0.5 * (lo + hi);
            let half = 0.5 * (hi - lo);
            for &(x, w) in pairs {
                nodes.push(mid + half * x);
                weights.push(half * w);
            }
            lo = hi;
        }
    }
    Ok((nodes, weights))
}

const GK_XK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const GK_WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> Vec<Complex64>>(f: &F, a: f64, b: f64) -> (Vec<Complex64>, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let n = fc.len();
    let mut kron: Vec<Complex64> = fc.iter().map(|v| v * GK_WK[7]).collect();
    let mut gauss: Vec<Complex64> = fc.iter().map(|v| v * GK_WG[3]).collect();
    for i in 0..7 {
        let x = h * GK_XK[i];
        let (f1, f2) = (f(c - x), f(c + x));
        for q in 0..n {
            let s = f1[q] + f2[q];
            kron[q] += s * GK_WK[i];
            if i % 2 == 1 {
                gauss[q] += s * GK_WG[i / 2];
            }
        }
    }
    let mut err = 0.0f64;
    for q in 0..n {
        kron[q] *= h;
        err = err.max((kron[q] - gauss[q] * h).norm());
    }
    (kron, err)
}

/// Globally adaptive Gauss-Kronrod (7-15) for a vector-valued integrand.
/// Returns the integral and the summed error estimate; fails if the estimate
/// stays above `tol` after `max_intervals` subdivisions.
pub fn adaptive_gk15<F: Fn(f64) -> Vec<Complex64>>(
    f: F,
    breaks: &[f64],
    tol: f64,
    max_intervals: usize,
) -> Result<(Vec<Complex64>, f64)> {
    let mut parts: Vec<(f64, f64, Vec<Complex64>, f64)> = breaks
        .windows(2)
        .map(|w| {
            let (v, e) = gk15(&f, w[0], w[1]);
            (w[0], w[1], v, e)
        })
        .collect();
    loop {
        let total: f64 = parts.iter().map(|p| p.3).sum();
        if total <= tol || parts.len() >= max_intervals {
            let n = parts[0].2.len();
            let mut sum = vec![Complex64::new(0.0, 0.0); n];
            for p in &parts {
                for q in 0..n {
                    sum[q] += p.2[q];
                }
            }
            if total > tol {
                return Err(Error::Quadrature {
                    estimate: total,
                    tolerance: tol,
                });
            }
            return Ok((sum, total));
        }
        let worst = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap();
        let (a, b, _, _) = parts.swap_remove(worst);
        let m = 0.5 * (a + b);
        let (v1, e1) = gk15(&f, a, m);
        let (v2, e2) = gk15(&f, m, b);
        parts.push((a, m, v1, e1));
        parts.push((m, b, v2, e2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_window_area() {
        let w = Window::Gaussian {
            center: 1.0,
            sigma: 2.0,
            cut: 8.5,
        };
        let exact = 2.0 * (std::f64::consts::TAU).sqrt();
        assert!((w.area() - exact).abs() < 1e-12 * exact);
        assert_eq!(w.eval(100.0), 0.0);
    }

    #[test]
    fn panels_integrate_oscillation() {
        let omega = 200.0;
        let (x, w) = oscillatory_nodes(&[0.0, 3.0], |_| omega, 1.0, 16).unwrap();
        let num: Complex64 = x
            .iter()
            .zip(&w)
            .map(|(u, w)| Complex64::from_polar(*w, omega * u))
            .sum();
        let exact = (Complex64::new(0.0, omega * 3.0).exp() - 1.0) / Complex64::new(0.0, omega);
        assert!((num - exact).norm() < 1e-13);
        assert!((w.iter().sum::<f64>() - 3.0).abs() < 1e-13);
    }

    #[test]
    fn adaptive_handles_peaks() {
        let f = |x: f64| vec![Complex64::new(1.0 / (1e-4 + x * x), 0.0), Complex64::new(0.0, x.cos())];
        let (v, e) = adaptive_gk15(f, &[-1.0, 1.0], 1e-10, 10_000).unwrap();
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!((v[0].re - exact).abs() < 1e-8, "{} {}", v[0].re, exact);
        assert!((v[1].im - 2.0 * 1f64.sin()).abs() < 1e-12);
        assert!(e <= 1e-10);
        assert!(adaptive_gk15(f, &[-1.0, 1.0], 1e-30, 20).is_err());
    }
}
