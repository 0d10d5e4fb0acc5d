use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is divisible by p = {1}")]
    NotAUnit(String, u64),
    #[error("zero has no valuation or logarithm here: {0}")]
    ZeroInput(&'static str),
    #[error("division by zero")]
    DivisionByZero,
    #[error("series does not converge: {0}")]
    Divergent(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("supersingular prime {p}: a_p = {ap} is not a p-adic unit")]
    Supersingular { p: u64, ap: i64 },
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("distribution relation fails at level {level}, residue {residue}")]
    DistributionViolation { level: u32, residue: u64 },
    #[error("edge outside the harmonicity certificate (radius {radius})")]
    OutsideCertificate { radius: u32 },
    #[error("additive reduction at {0}")]
    AdditiveReduction(u64),
    #[error("good reduction at {0}")]
    GoodReduction(u64),
    #[error("non-split multiplicative reduction at {0}")]
    NonSplit(u64),
    #[error("eigenspace has dimension {dim} after Hecke operators up to {bound}")]
    EigenspaceNotIsolated { dim: usize, bound: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
