//! Truncated multimode Fock space and the operators realized on it.

pub mod basis;
pub mod checks;
pub mod dual;
pub mod ops;
pub mod packet;
pub mod phase;
pub mod position;

pub use basis::{FockBasis, Sector, DEFAULT_DIMENSION_CAP};
pub use ops::{
    mode_operators, number_density, realize, realize_monomials, total_number, FieldState,
    FockOperator, Ladder, ModeOperators, Monomial,
};
pub use packet::OnePacket;
pub use position::{m_density, m_number_normal, m_total};
pub use phase::{delta_prime, PhaseConvention, PhaseOperatorSet};
pub use dual::{dual_sector_operators, DualSector};
