use thiserror::Error;

/// Errors raised by the library. Each variant carries enough of a witness
/// to re-check the failure against the Cayley table by hand.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("table must be {n}x{n}, found {found}")]
    BadShape { n: usize, found: String },

    #[error("table entry ({row},{col}) = {value} is out of range for n = {n}")]
    OutOfRange {
        row: usize,
        col: usize,
        value: usize,
        n: usize,
    },

    #[error("operation is not associative: ({x}*{y})*{z} != {x}*({y}*{z})")]
    NotAssociative { x: usize, y: usize, z: usize },

    #[error("duplicate element name {0:?}")]
    DuplicateName(String),

    #[error("carrier size {n} exceeds the configured cap {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("{what}: size {size} exceeds bound {bound}")]
    BoundExceeded {
        what: &'static str,
        size: usize,
        bound: usize,
    },

    #[error("generator set is empty")]
    EmptyGenerator,

    #[error("element {0} is not an idempotent")]
    NotIdempotent(usize),

    #[error("element {0} is not a central idempotent")]
    NotCentralIdempotent(usize),

    #[error("subset is not an ideal: {x}*{y} = {product} escapes it")]
    NotAnIdeal { x: usize, y: usize, product: usize },

    #[error("partition is not a congruence: {x}~{y} but {lhs} !~ {rhs}")]
    NotCompatible {
        x: usize,
        y: usize,
        lhs: usize,
        rhs: usize,
    },

    #[error("invalid partition: {0}")]
    BadPartition(String),

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("family builder failed at N = {n}: {message}")]
    BuilderFailure { n: usize, message: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("element {element} is outside the carrier of size {n}")]
    ElementOutOfRange { element: usize, n: usize },

    /// A textbook fact failed on a concrete table. This is always a bug.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
