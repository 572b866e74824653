//! Classical reparametrizations `u -> f(u)` and the Bogoliubov overlaps they
//! induce between in and out plane waves.

pub mod bogoliubov;
pub mod doppler;
pub mod maps;
pub mod perturbation;
pub mod quadrature;

pub use bogoliubov::{bogoliubov, planck_spectrum, BogoliubovPair, Normalization, PlanckFit, QuadratureMeta, QuadratureSpec};
pub use maps::{ConformalMap, MapKind};
pub use quadrature::{adaptive_gk15, oscillatory_nodes, Window};
pub use perturbation::{compact_beta_norm, log_slope, log_space, perturbation_scaling, CompactQuadrature, PerturbationScaling};
pub use doppler::{doppler_experiment, DopplerReport};
