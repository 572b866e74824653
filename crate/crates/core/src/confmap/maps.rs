use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reparametrization `u -> f(u)` of one light-cone variable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapKind {
    /// `u + b`
    Translation { b: f64 },
    /// `e^lambda u`
    Dilation { lambda: f64 },
    /// `(a u + b) / (c u + d)` with `a d - b c = 1`
    Homographic { a: f64, b: f64, c: f64, d: f64 },
    /// `u + eps u^k`
    Perturbation { k: u32, eps: f64 },
    /// `-(1/accel) e^(-accel u)`
    Rindler { accel: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConformalMap {
    pub kind: MapKind,
    pub u_min: f64,
    pub u_max: f64,
}

const UNIMODULAR_TOL: f64 = 1e-12;

impl ConformalMap {
    /// Map on the whole line.
    pub fn new(kind: MapKind) -> Result<Self> {
        Self::on_domain(kind, f64::NEG_INFINITY, f64::INFINITY)
    }

    /// Map restricted to `[u_min, u_max]`; fails if `f` is not strictly
    /// increasing there or a pole lies inside.
    pub fn on_domain(kind: MapKind, u_min: f64, u_max: f64) -> Result<Self> {
        if !(u_min < u_max) {
            return Err(Error::InvalidMap(format!("empty domain [{u_min}, {u_max}]")));
        }
        match kind {
            MapKind::Translation { b } if !b.is_finite() => {
                return Err(Error::InvalidMap("non-finite shift".into()))
            }
            MapKind::Dilation { lambda } if !lambda.is_finite() => {
                return Err(Error::InvalidMap("non-finite dilation".into()))
            }
            MapKind::Homographic { a, b, c, d } => {
                let det = a * d - b * c;
                if (det - 1.0).abs() > UNIMODULAR_TOL {
                    return Err(Error::InvalidMap(format!("ad - bc = {det}, expected 1")));
                }
                if c != 0.0 {
                    let pole = -d / c;
                    if pole >= u_min && pole <= u_max {
                        return Err(Error::InvalidMap(format!("pole at u = {pole} inside the domain")));
                    }
                }
            }
            MapKind::Perturbation { k, eps } => {
                if !eps.is_finite() || k < 2 {
                    return Err(Error::InvalidMap(format!("perturbation needs k >= 2 and finite eps, got k={k}")));
                }
                // f' = 1 + k eps u^(k-1) is monotone on each side of 0, so its
                // minimum sits at an endpoint or at the origin
                let fp = |u: f64| 1.0 + k as f64 * eps * u.powi(k as i32 - 1);
                let mut probes = vec![u_min, u_max];
                if u_min < 0.0 && u_max > 0.0 {
                    probes.push(0.0);
                }
                if probes.iter().any(|&u| !(fp(u) > 0.0)) {
                    return Err(Error::InvalidMap(format!(
                        "u + {eps} u^{k} is not increasing on [{u_min}, {u_max}]"
                    )));
                }
            }
            MapKind::Rindler { accel } => {
                if !(accel > 0.0 && accel.is_finite()) {
                    return Err(Error::InvalidMap(format!("acceleration must be positive, got {accel}")));
                }
            }
            _ => {}
        }
        Ok(Self { kind, u_min, u_max })
    }

    pub fn eval(&self, u: f64) -> f64 {
        match self.kind {
            MapKind::Translation { b } => u + b,
            MapKind::Dilation { lambda } => lambda.exp() * u,
            MapKind::Homographic { a, b, c, d } => (a * u + b) / (c * u + d),
            MapKind::Perturbation { k, eps } => u + eps * u.powi(k as i32),
            MapKind::Rindler { accel } => -(-accel * u).exp() / accel,
        }
    }

    pub fn derivative(&self, u: f64) -> f64 {
        match self.kind {
            MapKind::Translation { .. } => 1.0,
            MapKind::Dilation { lambda } => lambda.exp(),
            MapKind::Homographic { c, d, .. } => 1.0 / (c * u + d).powi(2),
            MapKind::Perturbation { k, eps } => 1.0 + k as f64 * eps * u.powi(k as i32 - 1),
            MapKind::Rindler { accel } => (-accel * u).exp(),
        }
    }

    /// True for the vacuum-preserving (homographic) family.
    pub fn is_homographic(&self) -> bool {
        !matches!(self.kind, MapKind::Perturbation { .. } | MapKind::Rindler { .. })
    }

    /// Identity map.
    pub fn identity() -> Self {
        Self::new(MapKind::Translation { b: 0.0 }).expect("identity is valid")
    }
}
