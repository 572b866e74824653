//! Discretized-mode operator algebra for a 2D massless scalar field.
//!
//! Single-sided frequency lattice, quadratic forms in ladder operators,
//! truncated Fock realizations and Bogoliubov coefficients of conformal maps.

pub mod confmap;
pub mod error;
pub mod fock;
pub mod grid;
pub mod quadform;
pub mod sparse;
pub mod suite;

pub use error::{Error, Result};
pub use grid::{Constants, DerivativeStencil, FrequencyGrid};
pub use quadform::{FieldVector, QuadraticForm};
pub use sparse::CsrMatrix;
