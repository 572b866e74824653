use serde::Serialize;

use super::checks::{profile_sweep, PROFILE_CHECKS};
use super::config::SuiteConfig;
use crate::confmap::log_slope;
use crate::error::{Error, Result};
use crate::quadform::{central_charge_ratio, t_k};

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub identity: String,
    pub modes: usize,
    pub d_omega: f64,
    pub error: f64,
    /// central charge ratio at this level; empty for the other identities
    pub ratio: Option<f64>,
    /// fitted over all levels of the identity, repeated on each row
    pub slope: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepTable {
    pub schema: String,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn slope_of(&self, identity: &str) -> Option<f64> {
        self.rows.iter().find(|r| r.identity == identity).map(|r| r.slope)
    }

    pub fn errors_of(&self, identity: &str) -> Vec<f64> {
        self.rows.iter().filter(|r| r.identity == identity).map(|r| r.error).collect()
    }

    pub fn to_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| Error::Config(format!("csv: {e}"));
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["schema", "identity", "modes", "d_omega", "error", "ratio", "slope"])
            .map_err(io)?;
        for r in &self.rows {
            w.write_record([
                self.schema.clone(),
                r.identity.clone(),
                r.modes.to_string(),
                format!("{:.12e}", r.d_omega),
                format!("{:.12e}", r.error),
                r.ratio.map(|x| format!("{x:.12e}")).unwrap_or_default(),
                format!("{:.6}", r.slope),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| Error::Config(format!("csv: {e}")))
    }
}

/// Error-versus-`dOmega` table over the configured sweep (at least three
/// levels): every packet identity, the central charge in the middle of the
/// spectrum, and the exact coefficient closure `[T_1, T_2] = i hbar T_2`.
pub fn converge(config: &SuiteConfig) -> Result<SweepTable> {
    let levels = config.sweep.modes.len();
    if levels < 3 {
        return Err(Error::SweepTooShort { needed: 3, got: levels });
    }
    config.validate()?;
    let grids = config.sweep_grids()?;
    let h: Vec<f64> = grids.iter().map(|g| g.d_omega()).collect();
    let mut rows = Vec::new();
    let mut push = |identity: &str, errs: &[f64], ratios: Option<&[f64]>| {
        let slope = log_slope(&h, errs);
        for (i, g) in grids.iter().enumerate() {
            rows.push(SweepRow {
                identity: identity.to_string(),
                modes: g.modes(),
                d_omega: g.d_omega(),
                error: errs[i],
                ratio: ratios.map(|r| r[i]),
                slope,
            });
        }
    };

    for (id, _, f) in PROFILE_CHECKS {
        let (_, errs) = profile_sweep(config, f)?;
        push(id.trim_start_matches("convergence."), &errs, None);
    }

    // the mode at the middle of the spectrum, where 1/m^2 corrections are smallest
    let target = 1.0 / 12.0;
    let ratios: Vec<f64> = grids
        .iter()
        .map(|g| central_charge_ratio(g, g.modes() as i64 / 2))
        .collect();
    let errs: Vec<f64> = ratios.iter().map(|r| (r - target).abs() / target).collect();
    push("central_charge", &errs, Some(&ratios));

    let mut closure = Vec::new();
    for g in &grids {
        let lhs = t_k(g, 1)?.commutator(&t_k(g, 2)?)?;
        let rhs = t_k(g, 2)?.scale(num_complex::Complex64::new(0.0, g.hbar()));
        let m = g.modes();
        let (a, b) = (lhs.coefficient_matrix(), rhs.coefficient_matrix());
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for i in 0..2 * m {
            for j in 0..2 * m {
                if i % m + 4 < m && j % m + 4 < m {
                    worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
                    scale = scale.max(b[(i, j)].norm());
                }
            }
        }
        // floor at the rounding level so the slope column stays finite
        closure.push((worst / scale).max(f64::EPSILON * 1e-3));
    }
    push("boost_acceleration_closure", &closure, None);

    Ok(SweepTable {
        schema: super::report::SWEEP_SCHEMA.to_string(),
        rows,
    })
}
