use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("p = {p} exceeds the configured bound {max}")]
    PrimeTooLarge { p: u64, max: u64 },
    #[error("{g} is not a primitive root mod {p}")]
    NotPrimitiveRoot { g: u64, p: u64 },
    #[error("p = {p} is not 1 mod {modulus}")]
    Congruence { p: u64, modulus: u64 },
    #[error("characters belong to different fields")]
    ContextMismatch,
    #[error("invalid datum: {0}")]
    InvalidDatum(String),
    #[error("datum is not defined over Q")]
    NotDefinedOverQ,
    #[error("value {re}+{im}i is not within {tol} of an integer")]
    Snap { re: f64, im: f64, tol: f64 },
    #[error("calibration failed: {0}")]
    Calibration(String),
    #[error("lambda = {0} is special for this row")]
    SpecialLambda(String),
    #[error("bad reduction: {0}")]
    BadReduction(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("truncation too small: need at least {need} coefficients, have {have}")]
    Truncation { need: usize, have: usize },
    #[error("fixture error: {0}")]
    Fixture(String),
    #[error("Ramanujan bound violated at p = {p}: |a_p| = {ap}")]
    RamanujanBound { p: u64, ap: i64 },
    #[error("offline: {0}")]
    Offline(String),
    #[error("network error: {0}")]
    Network(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
