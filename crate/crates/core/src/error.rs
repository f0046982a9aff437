use thiserror::Error;

/// Every failure the library can report.
///
/// Variants are grouped loosely by the module that raises them; callers
/// that need a coarse classification use [`Error::kind`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division would produce negative powers: order {numerator} < order {denominator}")]
    DivisionOrder { numerator: u32, denominator: u32 },
    #[error("order cannot be resolved below truncation t^{at_least}")]
    IndeterminateOrder { at_least: u32 },
    #[error("series is not a unit with constant term 1")]
    NotUnit,
    #[error("inner series of a composition must vanish at 0")]
    CompositionOrder,

    #[error("curve germ must vanish at t = 0 in both coordinates")]
    ConstantTerm,
    #[error("curve germ is not well parametrized (support gcd {gcd})")]
    NotWellParametrized { gcd: u32 },
    #[error("order(y) < order(x); swap the coordinates first")]
    SwapRequired,
    #[error("curve is not in the normal form (t^m, y(t))")]
    NotNormalized,
    #[error(
        "truncation t^{trunc} too small to certify the invariant; retry with --trunc {suggested}"
    )]
    TruncationTooSmall { trunc: u32, suggested: u32 },

    #[error("curve did not regularize within {max_depth} prolongations")]
    NotRegularizedWithinDepth { max_depth: usize },

    #[error("invalid Puiseux characteristic: {0}")]
    InvalidCharacteristic(String),
    #[error("malformed vector: {0}")]
    MalformedVector(String),
    #[error("malformed chain code: {0}")]
    MalformedChain(String),
    #[error("malformed code: {0}")]
    MalformedCode(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("code is not grammatical: violation at index {index}")]
    Ungrammatical { index: usize },

    #[error("no witness curve within bounds a <= {max_a}, exponents <= {max_exponent}")]
    NotFound { max_a: u32, max_exponent: u32 },
}

/// Coarse classification used for process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The input was well formed but the mathematics refused it.
    Domain,
    /// The input did not describe a valid object.
    Input,
    /// A bounded search exhausted its space.
    NotFound,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::NotFound { .. } => ErrorKind::NotFound,
            Error::MalformedVector(_)
            | Error::MalformedChain(_)
            | Error::MalformedCode(_)
            | Error::InvalidPresentation(_)
            | Error::InvalidCharacteristic(_) => ErrorKind::Input,
            _ => ErrorKind::Domain,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
