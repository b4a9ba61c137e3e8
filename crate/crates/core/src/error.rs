use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },

    #[error("duplicate name `{0}`")]
    DuplicateName(String),

    #[error("empty range for `{name}`: {lo}..{hi}")]
    EmptyRange { name: String, lo: i64, hi: i64 },

    #[error("sort `{0}` has an empty carrier")]
    EmptyCarrier(String),

    #[error("duplicate atom `{atom}` in sort `{sort}`")]
    DuplicateAtom { sort: String, atom: String },

    #[error("unknown sort `{0}`")]
    UnknownSort(String),

    #[error("size limit exceeded: {what} needs {needed}, limit is {limit}")]
    SizeLimit { what: &'static str, needed: u128, limit: u128 },

    #[error("signature mismatch: {left} vs {right}")]
    SigMismatch { left: String, right: String },

    #[error("tuple {tuple} is not well-sorted against {sig}")]
    IllSorted { tuple: String, sig: String },

    #[error("lasso cycle must be nonempty")]
    EmptyCycle,

    #[error("`{0}` is not assigned in the model")]
    Unassigned(String),

    #[error("ill-formed: {0}")]
    IllFormed(String),

    #[error("undeclared variable `{name}` (line {line})")]
    UndeclaredVar { name: String, line: usize },

    #[error("no event is mapped to value {value} (state {state})")]
    EventOutOfAlphabet { value: i128, state: String },

    #[error("no event alphabet declared")]
    NoEvents,

    #[error("fixed-point iteration exceeded {limit} steps; map is not monotone")]
    NonMonotone { limit: usize },

    #[error("{0}")]
    Flavor(String),
}
