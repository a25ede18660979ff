use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("{0} exceeds the 2^63 factorization cap")]
    FactorCap(u128),

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("prime {ell} ramifies in Q(sqrt(-{d}))")]
    Ramified { ell: u64, d: u64 },

    #[error("D = {0} must be a positive squarefree integer")]
    BadDiscriminant(u64),

    #[error("unsupported extension degree {0}")]
    UnsupportedDegree(usize),

    #[error("zero has no multiplicative order")]
    ZeroElement,

    #[error("polynomial is not monic")]
    NotMonic,

    #[error("element has no square root in the field")]
    NoSquareRoot,

    #[error("singular matrix")]
    Singular,

    #[error("closure exceeded the cap of {0} elements")]
    ClosureCap(usize),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("case {case} does not exist for l = {ell}, t = {t}")]
    NoSuchCase { case: String, ell: u64, t: u32 },

    /// No nonreal `a_p` in a usable residue class: the reducibility sieve
    /// has no probe.
    #[error("Condition 1' unverifiable: {0}")]
    Unverifiable(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
