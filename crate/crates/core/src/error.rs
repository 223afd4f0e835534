use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid priors: p = {p}, q = {q}")]
    InvalidPriors { p: f64, q: f64 },
    #[error("cell {z} has zero mass (mu = {mu}, pi = {pi})")]
    ZeroMassBin { z: usize, mu: f64, pi: f64 },
    #[error("quantizer is incompatible with the source: {0}")]
    IncompatibleQuantizer(&'static str),
    #[error("invalid measure: {0}")]
    InvalidMeasure(&'static str),
    #[error("invalid source: {0}")]
    InvalidSource(&'static str),
    #[error("invalid quantizer: {0}")]
    InvalidQuantizer(&'static str),
    #[error("generator is +inf at ratio {ratio}")]
    InfiniteValue { ratio: f64 },
    #[error("conjugate maximizer for argument {arg} lies on the grid boundary")]
    GridTooNarrow { arg: f64 },
    #[error("psi(beta) - beta has no sign change on (beta1, beta2)")]
    NoFixedPoint,
    #[error("generator has no exact conjugate; use a grid")]
    NoExactConjugate,
    #[error("infimum over the margin is -inf")]
    Unbounded,
    #[error("divergence is not realizable by a decreasing convex loss: {0}")]
    UnrealizableDivergence(&'static str),
    #[error("bad link function: {0}")]
    BadLink(&'static str),
    #[error("loss is not convex")]
    NotConvex,
    #[error("loss is not convex: {0}")]
    NonConvexLoss(&'static str),
    #[error("phi-risk term is +inf at cell {z}")]
    InfiniteRisk { z: usize },
    #[error("loss and generator do not correspond: |f_loss(u) - f(u)| = {residual} at u = {u}")]
    MismatchedPair { u: f64, residual: f64 },
    #[error("degenerate affine fit (determinant {det:e})")]
    DegenerateFit { det: f64 },
    #[error("sample must be non-empty")]
    EmptySample,
    #[error("generator is not in the variational family (residual {residual:e}, c = {c})")]
    NotVariationalFamily { residual: f64, c: f64 },
    #[error("no mismatch witness on the searched grid")]
    NoWitnessFound,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid function class: {0}")]
    InvalidFunctionClass(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
