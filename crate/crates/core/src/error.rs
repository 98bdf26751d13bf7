use thiserror::Error;

/// Largest group order any operation accepts.
pub const MAX_ORDER: usize = 1 << 20;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group order {0}")]
    InvalidOrder(usize),

    #[error("group order {order} exceeds the limit of {limit} elements")]
    Resource { order: usize, limit: usize },

    #[error("group table validation failed: {0}")]
    Validation(String),

    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),

    #[error("subgroup is not normal: {0}")]
    NotNormal(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid exponent p = {0}, need p >= 1")]
    InvalidExponent(f64),

    #[error("element {0} lies outside the character's domain")]
    Domain(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operands live over different groups")]
    GroupMismatch,

    #[error("invalid character: {0}")]
    InvalidCharacter(String),

    #[error("quotient identification needs the trivial character")]
    NontrivialCharacter,

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("subgroup is not invariant under the action: {0}")]
    NotInvariant(String),

    #[error("discretization requires M | R, got M = {m}, R = {r}")]
    Discretization { m: usize, r: usize },

    #[error("character or subgroup has the wrong shape: {0}")]
    Shape(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable kebab-case name, used in CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidOrder(_) => "invalid-order",
            Error::Resource { .. } => "resource",
            Error::Validation(_) => "validation",
            Error::InvalidSubgroup(_) => "invalid-subgroup",
            Error::NotNormal(_) => "normality",
            Error::InvalidMeasure(_) => "invalid-measure",
            Error::InvalidExponent(_) => "invalid-exponent",
            Error::Domain(_) => "domain",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::GroupMismatch => "group-mismatch",
            Error::InvalidCharacter(_) => "invalid-character",
            Error::NontrivialCharacter => "identification-undefined",
            Error::InvalidAction(_) => "invalid-action",
            Error::NotInvariant(_) => "invariance",
            Error::Discretization { .. } => "discretization",
            Error::Shape(_) => "shape",
            Error::Json(_) => "json",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_order(order: usize) -> Result<()> {
    if order == 0 {
        return Err(Error::InvalidOrder(0));
    }
    if order > MAX_ORDER {
        return Err(Error::Resource { order, limit: MAX_ORDER });
    }
    Ok(())
}
