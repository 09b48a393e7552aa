use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field of order {order} exceeds the table bound {bound}")]
    TooLarge { order: u64, bound: u64 },
    #[error("context mismatch: {0}")]
    CtxMismatch(String),
    #[error("zero has no l-th power residue class")]
    ZeroInput,
    #[error("l = {ell} does not divide the unit group order {units}")]
    OrderMismatch { ell: u32, units: u32 },
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("field of order {small} is not a subfield of the field of order {big}")]
    NotASubfield { small: u32, big: u32 },
    #[error(
        "q = {q} is 1 mod l = {ell}: this is the Kummer regime (n_q = 1), which is not handled; \
         pick q with q mod l not in {{0, 1}}"
    )]
    KummerRegime { q: u32, ell: u32 },
    #[error("l = {ell} divides q = {q}")]
    CharacteristicDividesEll { q: u32, ell: u32 },
    #[error("invalid parameter tuple: {0}")]
    InvalidTuple(String),
    #[error("empty stratum: {0}")]
    EmptyStratum(String),
    #[error("twisted polynomial vanishes at rational point {0}; no F_q point can ramify here")]
    UnexpectedRoot(String),
    #[error("the trivial character has no L-polynomial in this sense")]
    TrivialCharacter,
    #[error("cross-check mismatch: {0}")]
    CrossCheckMismatch(String),
    #[error("cannot find roots of the zero polynomial")]
    DegenerateZeroPolynomial,
    #[error("distributions live on different supports: {0}")]
    SupportMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}
