use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: i64, rank: usize },
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("invalid root datum: {0}")]
    InvalidDatum(String),
    #[error("word {0:?} is not reduced")]
    NotReduced(Vec<usize>),
    #[error("K = {0:?} is not compatible with the word")]
    Incompatible(Vec<usize>),
    #[error("move {mv} not applicable at position {pos}")]
    MoveNotApplicable { mv: String, pos: usize },
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("no positive presentation: {0}")]
    NotPositive(String),
    #[error("expected a single monomial: {0}")]
    NotMonomial(String),
    #[error("Gauss decomposition undefined: leading minor {0} vanishes")]
    GaussUndefined(usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("polytope is unbounded in coordinate {0}")]
    Unbounded(usize),
    #[error("cap of {0} exceeded")]
    CapExceeded(usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Validation(String),
}

impl Error {
    /// Short machine-readable tag used in JSON error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::SizeMismatch(_) => "size_mismatch",
            Error::InvalidDatum(_) => "invalid_datum",
            Error::NotReduced(_) => "not_reduced",
            Error::Incompatible(_) => "incompatible",
            Error::MoveNotApplicable { .. } => "move_not_applicable",
            Error::NotDivisible(_) => "not_divisible",
            Error::NotPositive(_) => "not_positive",
            Error::NotMonomial(_) => "not_monomial",
            Error::GaussUndefined(_) => "gauss_undefined",
            Error::DivisionByZero => "division_by_zero",
            Error::Unbounded(_) => "unbounded",
            Error::CapExceeded(_) => "cap_exceeded",
            Error::Unsupported(_) => "unsupported",
            Error::Validation(_) => "validation",
        }
    }

    /// True for failures that indicate a broken construction rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::NotDivisible(_)
                | Error::NotPositive(_)
                | Error::NotMonomial(_)
                | Error::GaussUndefined(_)
                | Error::Unbounded(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
