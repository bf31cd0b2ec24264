use thiserror::Error;

/// Errors surfaced by the toolkit. Every CLI exit code maps onto one of the
/// broad classes here: budget (2), input (3), verification (4).
#[derive(Debug, Error)]
pub enum Error {
    #[error("budget exceeded in {stage}: {detail}")]
    BudgetExceeded { stage: &'static str, detail: String },

    #[error("input error: {0}")]
    Input(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("coset tables belong to different presentations")]
    AmbientMismatch,

    #[error("cochain is not a cocycle: boundary sum of 2-cell {two_cell} is {sum} mod {p}")]
    NotACocycle { two_cell: usize, sum: u32, p: u32 },

    #[error("cocycle support is empty (a regular mod-p cocycle is a non-empty graph)")]
    EmptySupport,

    #[error("class does not restrict to zero on the avoided subcomplex")]
    ClassNotTrivialOnAvoid,

    #[error("class coefficients outside the cocycle basis span")]
    ClassOutsideSpan,

    #[error("verification failure: {0}")]
    VerificationFailure(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// CLI exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. } => 2,
            Error::VerificationFailure(_) => 4,
            Error::Io(_) => 3,
            Error::Json(_) => 3,
            Error::Overflow(_) => 2,
            _ => 3,
        }
    }
}
