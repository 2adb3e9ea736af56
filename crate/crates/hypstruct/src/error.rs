use num_bigint::BigInt;

/// Shared error type. Every fallible operation in the library reports one of
/// these; the CLI maps them onto exit codes and JSON error objects.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("polynomial must be monic")]
    NonMonic,

    #[error("input has a repeated root; squarefree input required")]
    NonSquarefreeInput,

    #[error("series moduli differ: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },

    #[error("constant term {constant} is not a unit of the base ring")]
    NotAUnit { constant: BigInt },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("constant term is 0 or a unit; nothing to split")]
    DegenerateConstant,

    #[error("constant term {constant} is not plus or minus a prime power")]
    ConstantNotPrimePower { constant: BigInt },

    #[error("constant term is zero; Newton polygon undefined")]
    ZeroConstant,

    #[error("matrix is not expanding: {0}")]
    NotExpanding(String),

    #[error("matrix is expanding but the lattice is not a cyclic module (cyclic vector search exhausted bound {bound})")]
    NotCyclic { bound: u64 },

    #[error("operands belong to different ambient rings")]
    RingMismatch,

    #[error("value has no digit expansion over this ring: {0}")]
    NotIntegral(String),

    #[error("carry state exceeded the configured bound {bound}")]
    CarryOverflow { bound: u64 },

    #[error("series is zero to working precision; valuation undefined")]
    ZeroSeries,

    #[error("answer is not stable at the working depth {depth}; increase precision")]
    DepthExceeded { depth: usize },

    #[error("ambient factorization signature is not fully certified")]
    UncertifiedSignature,

    #[error("ideals live over different ambient rings")]
    AmbientMismatch,

    #[error("iteration failed to converge: {0}")]
    NoConvergence(String),

    #[error("eigenvector chain computation is numerically ambiguous at tolerance {tolerance}")]
    DefectiveJordanTolerance { tolerance: f64 },

    #[error("slice is not connected at the requested depth")]
    DisconnectedSlice,

    #[error("point leaves the computed slice; enlarge the height window or depth")]
    OutOfSlice,
}
