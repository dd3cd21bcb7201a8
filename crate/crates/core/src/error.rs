use thiserror::Error;

/// Floating-point overflow while iterating or evaluating `f`.
///
/// Returned in place of a [`Point`](crate::Point) or complex value whenever a
/// coordinate leaves the finite `f64` range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("floating-point overflow")]
pub struct Overflow;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point {0} is not in W_R for R = {1}")]
    NotInRegion(String, f64),

    #[error("R = {r} is not admissible for epsilon = {eps}: sup|f| = {sup} > (a-1)R - eps = {rhs}")]
    NotAdmissible { r: f64, eps: f64, sup: f64, rhs: f64 },

    #[error("denominator not certifiably nonzero (|v| = {modulus}, err = {err})")]
    DenominatorNotCertified { modulus: f64, err: f64 },

    #[error("tolerance {tol} unreachable with at most {cap} series terms")]
    ToleranceUnreachable { tol: f64, cap: usize },

    #[error("orbit did not enter W_R within {0} steps")]
    NotAbsorbed(usize),

    #[error("epsilon too large: epsilon = {eps} >= m = {m}")]
    EpsilonTooLarge { eps: f64, m: f64 },

    #[error("limit function takes the value 0 or infinity on the sample set")]
    DegenerateLimit,

    #[error("M too small: {0}")]
    MTooSmall(String),

    #[error("disk centre (c w0, w0) lies outside W_R")]
    CentreOutsideRegion,

    #[error("curve too close to the target value (refinement cap reached)")]
    CurveTooClose,

    #[error(transparent)]
    Overflow(#[from] Overflow),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
