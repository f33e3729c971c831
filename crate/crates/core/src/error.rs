use thiserror::Error;

/// Errors raised by basis construction, assembly, the eigensolver and the
/// high-spot analysis.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("basis cutoff n = {n} is too small for {what} (need n >= {min})")]
    CutoffTooSmall {
        what: &'static str,
        n: usize,
        min: usize,
    },

    #[error("basis index {index} outside admissible range {lo}..={hi}")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },

    #[error("derivative order {0} not supported (0, 1 or 2)")]
    DerivativeOrder(usize),

    #[error("invalid Bond number {0}: must be positive or inf")]
    InvalidBond(String),

    #[error("requested {requested} eigenpairs but the system has dimension {dim}")]
    EigenCount { requested: usize, dim: usize },

    #[error("operator not positive definite: Cholesky pivot {pivot:e} at row {row}")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("kernel matrix indefinite: transformed eigenvalue {theta:e} (largest {theta_max:e})")]
    IndefiniteKernel { theta: f64, theta_max: f64 },

    #[error("symmetric eigensolver did not converge within {0} iterations")]
    NoConvergence(usize),

    #[error("operation requires {expected} geometry")]
    WrongGeometry { expected: &'static str },

    #[error("operation requires mode m >= 1 (got m = {0})")]
    ModeZero(u32),

    #[error("profile is identically zero")]
    ZeroProfile,

    #[error("profile must be normalized so that xi(1) = 1")]
    NotBoundaryNormalized,

    #[error("pole of T at Bo = {bond}: denominator {denominator:e}")]
    PoleOfT { bond: f64, denominator: f64 },

    #[error("slope parameter alpha = {0} must exceed 1")]
    InvalidAlpha(f64),

    #[error("reciprocal Bond number x = {0} must lie in (0, 1]")]
    InvalidReciprocal(f64),

    #[error(
        "no fixed point for m = {m}: iteration left (0, 1] or exhausted the budget of {budget} (last x = {last:e})"
    )]
    NoFixedPoint { m: u32, budget: usize, last: f64 },

    #[error("indicator does not change sign on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature accuracy unattainable: {0}")]
    Accuracy(String),
}

pub type Result<T> = std::result::Result<T, Error>;
