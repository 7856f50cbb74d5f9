use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("element index {index} out of range for {n} elements")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("cover relation contains a cycle through elements {0} and {1}")]
    CycleDetected(usize, usize),

    #[error("size limit exceeded: more than {limit} {what}")]
    SizeLimitExceeded { what: &'static str, limit: usize },

    #[error("empty poset has no lattice structure")]
    EmptyLattice,

    #[error("not a lattice: elements {0} and {1} lack a unique meet or join")]
    NotALattice(usize, usize),

    #[error("lattice is not distributive (witness triple {0:?})")]
    NotDistributive(Option<(usize, usize, usize)>),

    #[error("no prime filter separates: {x} <= {y}")]
    NotSeparable { x: usize, y: usize },

    #[error("filter is not prime: its complement is not a lattice ideal")]
    NotPrime,

    #[error("subset is not a lattice filter")]
    NotAFilter,

    #[error("element is already a member of the target set")]
    AlreadyMember,

    #[error("not a covering: {0}")]
    NotACovering(String),

    #[error("elements are not comparable: {0}")]
    NotComparable(String),

    #[error("window has more than {limit} elements")]
    WindowTooLarge { limit: usize },

    #[error("operation unsupported for lattice {0}")]
    UnsupportedLattice(String),

    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),

    #[error("descriptor is not an order ideal of the prime poset: {0}")]
    NotAnIdeal(String),

    #[error("ideal descriptors do not differ finitely: {0}")]
    IncomparableBases(String),

    #[error("{property} violated: {detail}")]
    PropertyViolated { property: String, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("plugin error: {0}")]
    Plugin(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
