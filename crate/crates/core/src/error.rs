use std::path::PathBuf;

/// Every failure the library can report.
///
/// Cap-related variants are kept distinct from genuine errors so callers can
/// downgrade them to a "skipped" status instead of aborting.
#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid degree {0} (must be between 1 and {max})", max = crate::perm::MAX_DEGREE)]
    InvalidDegree(usize),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("image list is not a bijection of 0..{0}")]
    NotABijection(usize),
    #[error("malformed cycle notation at byte {pos}: {msg}")]
    MalformedSyntax { pos: usize, msg: String },
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("point {0} repeated in cycle notation")]
    RepeatedPoint(usize),

    #[error("group order does not fit in 64 bits")]
    OrderOverflow,
    #[error("enumeration cap exceeded: group order {order} > cap {cap}")]
    CapExceeded { order: u64, cap: u64 },
    #[error("normal subgroup lattice exceeds cap of {0} subgroups")]
    LatticeCapExceeded(usize),
    #[error("degree {degree} exceeds 2-closure search cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },

    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("zero has no factorization")]
    Zero,
    #[error("prime {p} does not divide the group order {order}")]
    PrimeNotDividingOrder { p: u64, order: u64 },
    #[error("operation undefined for the trivial group")]
    TrivialGroup,
    #[error("group is not transitive")]
    NotTransitive,
    #[error("group is not abelian")]
    NotAbelian,
    #[error("element {0} does not lie in the group")]
    ElementNotInGroup(String),
    #[error("malformed partition: {0}")]
    MalformedPartition(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: {source}")]
    AtLine { line: usize, source: Box<Error> },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("{}: {source}", path.display())]
    InFile { path: PathBuf, source: Box<Error> },
    #[error("duplicate group name `{0}` in corpus")]
    DuplicateName(String),
    #[error("validation failed for `{name}`: {msg}")]
    Validation { name: String, msg: String },
    #[error("invalid family parameters: {0}")]
    InvalidParams(String),
    #[error("unknown check id `{0}`")]
    UnknownCheck(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures caused by a configured resource cap rather than bad input.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. }
                | Error::LatticeCapExceeded(_)
                | Error::DegreeCapExceeded { .. }
                | Error::OrderOverflow
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
