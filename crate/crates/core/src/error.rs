use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quaternion has zero modulus and no inverse")]
    ZeroDivisor,
    #[error("expected a unit quaternion, got modulus {0}")]
    NonUnit(f64),
    #[error("expected a positive real, got {0}")]
    NonPositive(f64),
    #[error("expected a purely imaginary quaternion, real part is {0}")]
    NotPurelyImaginary(f64),
    #[error("matrix does not preserve the Hermitian form (defect {0:e})")]
    NotSymplectic(f64),
    #[error("element fixes infinity; it has no isometric sphere")]
    FixesInfinity,
    #[error("input is the origin of the Heisenberg group")]
    OriginInput,
    #[error("argument {name} = {value} outside its domain {domain}")]
    DomainError {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("unknown objective function `{0}`")]
    UnknownFunction(String),
    #[error("fan direction is not aligned with zeta_2/|zeta_2|")]
    MisalignedFan,
    #[error("zeta_2 vanishes; the strip test needs a non-vertical translation")]
    ZetaTwoZero,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("word length {requested} exceeds the budget of {limit}")]
    BudgetExceeded { requested: usize, limit: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
