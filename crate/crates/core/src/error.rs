use thiserror::Error;

/// Errors raised by the algebra, network and checker layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("elements belong to different skew forms")]
    FormMismatch,

    #[error("exchange matrix is not skew-symmetric at ({0}, {1})")]
    NotSkewSymmetric(usize, usize),

    #[error("element is not a unit monomial: {0}")]
    NotAUnit(String),

    #[error("matrix is outside the supported invertible class: {0}")]
    NotInvertibleInSupportedClass(String),

    #[error("network contains a directed cycle but has no geometry")]
    CyclicWithoutGeometry,

    #[error("network contains a directed cycle; set max_cycle_uses to truncate the path sum")]
    TruncationRequired,

    #[error("series level {level} is beyond the computed truncation {truncation}")]
    Truncation { level: i64, truncation: i64 },

    #[error("groupoid condition M21 = M22 M12^-1 M11 does not hold")]
    GroupoidViolated,

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
