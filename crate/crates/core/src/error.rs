use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("stencil of order {order} needs at least {needed} modes, grid has {modes}")]
    StencilTooWide {
        order: usize,
        needed: usize,
        modes: usize,
    },

    #[error("unsupported stencil order {0} (expected 2 or 4)")]
    UnsupportedOrder(usize),

    #[error("generator order {0} is outside 0..=3")]
    UnsupportedGenerator(usize),

    #[error("operands live on different grids")]
    GridMismatch,

    #[error("Fock basis dimension {dimension} exceeds the cap {cap}")]
    DimensionCap { dimension: usize, cap: usize },

    #[error("mode {mode} is outside the stencil interior {start}..{end}")]
    BoundaryMode { mode: usize, start: usize, end: usize },

    #[error("packet has weight {weight:.3e} on boundary modes")]
    PacketTouchesBoundary { weight: f64 },

    #[error("phase convention mismatch: {0}")]
    Convention(String),

    #[error("sector mismatch: {0}")]
    SectorMismatch(String),

    #[error("invalid conformal map: {0}")]
    InvalidMap(String),

    #[error("quadrature did not converge: estimated error {estimate:.3e} above {tolerance:.3e}")]
    Quadrature { estimate: f64, tolerance: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("sweep needs at least {needed} strictly refining levels, got {got}")]
    SweepTooShort { needed: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
