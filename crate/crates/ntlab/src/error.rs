use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("cube map is not a bijection mod {0} (p ≡ 1 mod 3)")]
    CubeMapNotBijective(u32),
    #[error("singular curve: lambda = {0}")]
    SingularCurve(u32),
    #[error("insufficient precision: error bound {err:e} ≥ 1/2 (need ~{extra_bits} more bits)")]
    InsufficientPrecision { err: f64, extra_bits: u32 },
    #[error("unsupported twist: character index {0} is not real-valued")]
    UnsupportedTwist(u32),
    #[error("brute-force cap exceeded: p = {p} > cap {cap}")]
    BruteForceCap { p: u32, cap: u32 },
    #[error("hurwitz table too small: need D ≤ {need}, table bound {have} (extend cache)")]
    ExtendCache { need: u64, have: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precision cost: p^{digits} does not fit a 63-bit modulus for p = {p}")]
    PrecisionCost { p: u32, digits: u32 },
    #[error("denominator divisible by p = {0}")]
    PDivisibleDenominator(u32),
    #[error("rational reconstruction ambiguous: bound {bound} ≥ p^K/2 (raise K)")]
    RaiseK { bound: f64 },
    #[error("not a degree-0 element of the pi-ring")]
    NotDegreeZero,
    #[error("non-unit inversion mod p^K")]
    NonUnit,
    #[error("cache: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Cache(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Cache(e.to_string())
    }
}
