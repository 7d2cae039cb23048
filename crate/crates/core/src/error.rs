use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes shared by every module. Each variant has a stable code,
/// see [`Error::code`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("operands disagree on variable count or lambda mode: {0}")]
    ModeMismatch(String),
    #[error("the element is zero")]
    Zero,
    #[error("lambda = 0 gives a commutative fiber, which is not simple")]
    Degenerate,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("lambda must be nonzero")]
    ZeroLambda,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("characteristic polynomial coefficients depend on {0}")]
    NonConstant(String),
    #[error("characteristic polynomial does not split over Q: {0}")]
    NotSplit(String),
    #[error("generator images {0} and {1} do not commute")]
    NotAdmissible(usize, usize),
    #[error("coboundary test is only decidable for mu_n coefficients")]
    UndecidableGroup,
    #[error("cochains live on different covers or groups: {0}")]
    CoverMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::ModeMismatch(_) => "E_MODE_MISMATCH",
            Error::Zero => "E_ZERO",
            Error::Degenerate => "E_DEGENERATE",
            Error::Shape(_) => "E_SHAPE",
            Error::ZeroLambda => "E_ZERO_LAMBDA",
            Error::Precondition(_) => "E_PRECONDITION",
            Error::NonConstant(_) => "E_NONCONST",
            Error::NotSplit(_) => "E_NOT_SPLIT",
            Error::NotAdmissible(..) => "E_NOT_ADMISSIBLE",
            Error::UndecidableGroup => "E_UNDECIDABLE_GROUP",
            Error::CoverMismatch(_) => "E_COVER_MISMATCH",
            Error::InvalidInput(_) => "E_INVALID_INPUT",
            Error::Parse { .. } => "E_PARSE",
        }
    }
}
