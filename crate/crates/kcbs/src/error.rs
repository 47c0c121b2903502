use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("state cannot be normalized (norm {0:e})")]
    Unnormalizable(f64),

    #[error("setting {0} is out of range 0..5")]
    SettingOutOfRange(usize),

    #[error("basis is not a KCBS pentagon: {0}")]
    NotPentagon(String),

    #[error("orthogonality tolerance {0} must lie in (0, 1)")]
    BadTolerance(f64),

    #[error("graph has {0} vertices, limit is {1}")]
    InstanceTooLarge(usize, usize),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("monogamy check failed: {0}")]
    CertificateCheck(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("transcript has no sifted rounds")]
    NoSiftedRounds,

    #[error("transcript carries no eavesdropper records")]
    NoEveRecords,

    #[error("bit sequences differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("strategy has no eavesdropper")]
    AbsentEve,
}
