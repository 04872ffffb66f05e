use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported Coxeter label {label} at ({row}, {col}); supported labels are 1, 2, 3, 4, 6, inf")]
    UnsupportedLabel { row: usize, col: usize, label: u32 },

    #[error("invalid Coxeter matrix: {0}")]
    InvalidMatrix(String),

    #[error("small-root closure exceeded {bound} roots")]
    ClosureOverflow { bound: usize },

    #[error("walls must be distinct")]
    SameWall,

    #[error("{len} walls exceed the exact clique solver bound of {bound}")]
    TooLarge { len: usize, bound: usize },

    #[error("the Coxeter system is spherical (finite group); the scan needs a non-spherical system")]
    SphericalSystem,

    #[error("oracle is not declared vertex-transitive and no center sample was supplied")]
    NonTransitiveUnsupported,

    #[error("memory budget of {budget} vertices exceeded at radius {radius}")]
    MemoryBudget { budget: usize, radius: usize },

    #[error("Laurent polynomial span {span} exceeds the degree bound {bound}")]
    SpanBudget { span: usize, bound: usize },

    #[error("determinant invariant violated: {0}")]
    DetViolation(String),

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    /// Budget failures (memory, span) as opposed to bad input or bugs.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::MemoryBudget { .. } | Error::SpanBudget { .. })
    }

    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::ClosureOverflow { .. } | Error::DetViolation(_) | Error::Invariant(_)
        )
    }
}
