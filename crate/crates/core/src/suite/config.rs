use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fock::{FockBasis, PhaseConvention};
use crate::grid::{Constants, DerivativeStencil, FrequencyGrid};

/// Suites in the order they are listed by default.
pub const ALL_SUITES: [&str; 9] = [
    "algebra",
    "number",
    "position",
    "phase",
    "convergence",
    "bogoliubov",
    "doppler",
    "oracle",
    "literal",
];

/// Suites run when the config does not name any. `literal` holds identities
/// that cannot hold in finite dimension and is opt-in.
pub const DEFAULT_SUITES: [&str; 8] = [
    "algebra",
    "number",
    "position",
    "phase",
    "convergence",
    "bogoliubov",
    "doppler",
    "oracle",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub modes: usize,
    pub d_omega: f64,
    #[serde(default = "one")]
    pub hbar: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Relative bound for identities that hold to rounding.
    pub exact: f64,
    /// Lower bound (relative) that a non-vanishing quantity must exceed.
    pub nonzero: f64,
    pub slope_target: f64,
    pub slope_window: f64,
    /// Absolute bound on Bogoliubov `beta` for vacuum-preserving maps.
    pub quadrature: f64,
    /// Relative bound on the continuum central charge 1/12.
    pub central_charge: f64,
    pub planck: f64,
    pub doppler: f64,
    pub position: f64,
    /// Entrywise bound for quadratic-form vs Fock commutators.
    pub oracle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            exact: 1e-12,
            nonzero: 1e-6,
            slope_target: 2.0,
            slope_window: 0.3,
            quadrature: 1e-8,
            central_charge: 0.05,
            planck: 0.05,
            doppler: 0.10,
            position: 0.02,
            oracle: 1e-10,
        }
    }
}

/// Refinement sweep at fixed `omega_max`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub modes: Vec<usize>,
    pub omega_max: f64,
    pub stencil_order: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            modes: vec![16, 32, 64],
            omega_max: 8.0,
            stencil_order: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PacketConfig {
    pub omega_c: f64,
    pub sigma_omega: f64,
    pub u0: f64,
    /// coherent amplitude of the phase-route comparison
    pub amplitude: f64,
}

impl Default for PacketConfig {
    fn default() -> Self {
        Self {
            omega_c: 4.0,
            sigma_omega: 0.5,
            u0: 1.5,
            amplitude: 100.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DopplerConfig {
    pub modes: usize,
    pub omega_max: f64,
    pub stencil_order: usize,
    pub omega_c: f64,
    pub sigma_omega: f64,
    pub u0: f64,
    pub eps: f64,
}

impl Default for DopplerConfig {
    fn default() -> Self {
        Self {
            modes: 64,
            omega_max: 8.0,
            stencil_order: 4,
            omega_c: 4.0,
            sigma_omega: 0.5,
            u0: 2.0,
            eps: 1e-3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BogoliubovConfig {
    pub modes: usize,
    pub d_omega: f64,
    pub translation: f64,
    pub dilation: f64,
    pub eps: Vec<f64>,
    pub accel: f64,
    pub omega_out: f64,
    pub planck_modes: usize,
    /// in-frequency band `[lo, hi]` of the thermal fit, in units of `accel`
    pub planck_band: [f64; 2],
}

impl Default for BogoliubovConfig {
    fn default() -> Self {
        Self {
            modes: 16,
            d_omega: 0.25,
            translation: 0.7,
            dilation: std::f64::consts::LN_2,
            eps: vec![1e-4, 3.162_277_660_168_379e-4, 1e-3, 3.162_277_660_168_379e-3, 1e-2],
            accel: 1.0,
            omega_out: 1.0,
            planck_modes: 64,
            planck_band: [0.1, 1.0],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleConfig {
    pub samples: usize,
    pub max_modes: usize,
    pub max_n: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            samples: 100,
            max_modes: 4,
            max_n: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub grid: GridConfig,
    pub n_max: usize,
    #[serde(default = "two")]
    pub stencil_order: usize,
    #[serde(default = "sg")]
    pub phase: PhaseConvention,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Empty selects [`DEFAULT_SUITES`].
    #[serde(default)]
    pub suites: Vec<String>,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub packet: PacketConfig,
    #[serde(default)]
    pub doppler: DopplerConfig,
    #[serde(default)]
    pub bogoliubov: BogoliubovConfig,
    #[serde(default)]
    pub oracle: OracleConfig,
    #[serde(default = "default_out")]
    pub output_dir: PathBuf,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn one() -> f64 {
    1.0
}
fn two() -> usize {
    2
}
fn sg() -> PhaseConvention {
    PhaseConvention::SusskindGlogower
}
fn default_out() -> PathBuf {
    PathBuf::from("out")
}
fn default_seed() -> u64 {
    20_240_601
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            grid: GridConfig {
                modes: 8,
                d_omega: 0.5,
                hbar: 1.0,
            },
            n_max: 3,
            stencil_order: 2,
            phase: sg(),
            tolerances: Tolerances::default(),
            suites: Vec::new(),
            sweep: SweepConfig::default(),
            packet: PacketConfig::default(),
            doppler: DopplerConfig::default(),
            bogoliubov: BogoliubovConfig::default(),
            oracle: OracleConfig::default(),
            output_dir: default_out(),
            seed: default_seed(),
        }
    }
}

impl SuiteConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let c: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        let tols = [
            ("exact", t.exact),
            ("nonzero", t.nonzero),
            ("slope_window", t.slope_window),
            ("quadrature", t.quadrature),
            ("central_charge", t.central_charge),
            ("planck", t.planck),
            ("doppler", t.doppler),
            ("position", t.position),
            ("oracle", t.oracle),
        ];
        for (name, v) in tols {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("tolerance {name} must be positive, got {v}")));
            }
        }
        if !self.sweep.modes.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::Config(format!(
                "sweep schedule must be strictly refining, got {:?}",
                self.sweep.modes
            )));
        }
        for s in &self.suites {
            if !ALL_SUITES.contains(&s.as_str()) {
                return Err(Error::Config(format!("unknown suite {s:?}; known: {}", ALL_SUITES.join(", "))));
            }
        }
        if self.bogoliubov.eps.len() < 2 || self.bogoliubov.eps.iter().any(|e| !(*e > 0.0)) {
            return Err(Error::Config("bogoliubov.eps needs at least two positive values".into()));
        }
        self.grid()?;
        Ok(())
    }

    pub fn selected_suites(&self) -> Vec<String> {
        if self.suites.is_empty() {
            DEFAULT_SUITES.iter().map(|s| s.to_string()).collect()
        } else {
            self.suites.clone()
        }
    }

    pub fn constants(&self) -> Result<Constants> {
        Constants::new(self.grid.hbar)
    }

    pub fn grid(&self) -> Result<FrequencyGrid> {
        FrequencyGrid::with_constants(self.grid.modes, self.grid.d_omega, self.constants()?)
    }

    pub fn basis(&self) -> Result<FockBasis> {
        FockBasis::new(&self.grid()?, self.n_max)
    }

    pub fn stencil(&self) -> Result<DerivativeStencil> {
        DerivativeStencil::new(&self.grid()?, self.stencil_order)
    }

    pub fn sweep_grids(&self) -> Result<Vec<FrequencyGrid>> {
        let c = self.constants()?;
        self.sweep
            .modes
            .iter()
            .map(|&m| FrequencyGrid::with_max(m, self.sweep.omega_max, c))
            .collect()
    }

    /// SHA-256 of the canonical JSON form of the config.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(json))
    }
}
