use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid circulant spec: {0}")]
    InvalidSpec(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("vertex {0} is isolated; the boundary matrix needs deg >= 1")]
    IsolatedVertex(usize),

    #[error("vertex {vertex} out of range for a graph on {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("ambiguous eigenvalue grouping: gap {gap:e} between clusters is below {required:e}")]
    AmbiguousGrouping { gap: f64, required: f64 },

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("conductor mismatch: {left} vs {right}")]
    ConductorMismatch { left: u64, right: u64 },

    #[error("conductor {conductor} has degree {degree}, above the exact-arithmetic cap {cap}")]
    DegreeCap { conductor: u64, degree: usize, cap: usize },

    #[error("pi/theta maps are undefined at p = 2 when n = {0} is 2 mod 4")]
    PiThetaUndefinedAtTwo(u64),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("invalid basis choice: {0}")]
    InvalidBasisChoice(String),

    #[error("singular linear system (basis is not independent)")]
    SingularSystem,

    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),

    #[error("refused: {0}")]
    Refused(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
