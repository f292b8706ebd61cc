use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("vertex label {label} exceeds the {n} columns of the ring")]
    LabelOverflow { label: u32, n: u32 },
    #[error("{got} variables, at most {max} supported")]
    TooManyVariables { got: usize, max: usize },
    #[error("resource cap exceeded: {what} > {limit}")]
    ResourceCap { what: &'static str, limit: usize },
    #[error("ideal is not homogeneous")]
    NotHomogeneous,
    #[error("ideals live in different rings")]
    RingMismatch,
    #[error("ring declares characteristic {ring}, coefficients are in F_{field}")]
    CharacteristicMismatch { ring: u32, field: u32 },
    #[error("characteristic {0} is not among the compiled prime fields")]
    UnsupportedCharacteristic(u32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Graph(#[from] bei_core::Error),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
