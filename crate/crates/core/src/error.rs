use thiserror::Error;

/// Every failure the engines can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid precision context: {0}")]
    InvalidContext(String),
    #[error("invalid algebraic number: {0}")]
    InvalidAlgebraic(String),
    #[error("Newton refinement left the isolation disk of the pinned root")]
    RootDrift,
    #[error("degenerate lattice: discriminant below tolerance")]
    DegenerateLattice,
    #[error("pole hit: {0}")]
    PoleHit(String),
    #[error("point is not on the curve (residual {0})")]
    NotOnCurve(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("lift data required but not declared: {0}")]
    MissingLift(String),
    #[error("block {0} has g > 1 and no declared commutative endomorphism field")]
    NonCommutativeEndo(String),
    #[error("audit failed: {0}")]
    AuditFailed(String),
    #[error("precision insufficient: {0}")]
    PrecisionInsufficient(String),
    #[error("logarithm of zero")]
    ZeroArgument,
    #[error("pole on integration path: {0}")]
    PoleOnPath(String),
    #[error("declared roots do not match the denominator: {0}")]
    RootMismatch(String),
    #[error("unsupported differential form: {0}")]
    UnsupportedForm(String),
    #[error("series evaluation outside |lambda| < 1 - 2^-8")]
    OutOfSeriesDomain,
    #[error("outside the domain of the operation: {0}")]
    Domain(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
