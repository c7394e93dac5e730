use thiserror::Error;

use crate::rational::RationalVector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("not a rational number: {0:?}")]
    Rational(String),
    #[error("unknown catalog name: {0:?}")]
    Name(String),
    #[error("malformed subset: {0:?}")]
    Subset(String),
    #[error("malformed document: {0}")]
    Document(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("reflection base {0} is isotropic")]
    IsotropicBase(RationalVector),
    #[error("both {0} and {1} are roots; the isotropic reflection is ambiguous")]
    AmbiguousReflection(RationalVector, RationalVector),
    #[error("neither {0} nor {1} is a root; the isotropic reflection has no image")]
    MissingImage(RationalVector, RationalVector),
    #[error("seed root {0} is orthogonal to every seed")]
    OrthogonalSeed(RationalVector),
    #[error("system contains the isotropic root {0}")]
    IsotropicPresent(RationalVector),
    #[error("{0} is not a root of the minimal quotient")]
    UnknownRoot(RationalVector),
    #[error("kernel has dimension {0}; gaps need a one-dimensional kernel")]
    KernelTooLarge(usize),
    #[error("{0} does not lie in the kernel of the form")]
    NotInKernel(RationalVector),
    #[error("quotient is not injective on the roots ({0})")]
    NotBijective(String),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("bad matrix: {0}")]
    BadMatrix(String),
    #[error("kernel rank {k} exceeds the classification cap {cap}")]
    KTooLarge { k: usize, cap: usize },
    #[error("not classified: {0}")]
    NotClassified(String),
    #[error("minimal quotient is not a recognized catalog type: {0}")]
    UnrecognizedCl(String),
    #[error("no Kac-Moody name for {0}")]
    NoName(String),
    #[error("invalid system: {0}")]
    Invalid(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
