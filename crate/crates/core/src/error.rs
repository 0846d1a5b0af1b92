use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid config field `{field}`: {reason}")]
    InvalidConfig { field: &'static str, reason: String },

    #[error("weight {weight} does not have denominator dividing root index {root_index}")]
    BadDenominator { weight: String, root_index: u32 },

    #[error("weight {0} is not in [0, 1)")]
    WeightOutOfRange(String),

    #[error("residue {residue} is not in 0..{root_index}")]
    ResidueOutOfRange { residue: i64, root_index: u32 },

    #[error("summand has {got} entries but the config has {expected} marked points")]
    ConfigMismatch { expected: usize, got: usize },

    #[error("operation requires genus 0 but the config has genus {0}")]
    GenusRestriction(u32),

    #[error("summand index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("bundle has no summands")]
    EmptyBundle,

    #[error("no nonzero morphism from {from} to {to}")]
    NoMorphism { from: String, to: String },

    #[error("{0}")]
    Domain(String),

    #[error("generator column {0} is not homogeneous")]
    NonHomogeneous(usize),

    #[error("graded module is not free of the stated rank: {0}")]
    NotFree(String),

    #[error("sector evaluation outside tolerance: {0}")]
    Tolerance(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A check that holds for every valid input failed.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    /// True for failures of invariants that are theorems of the model, as
    /// opposed to bad input.
    pub fn is_verification_failure(&self) -> bool {
        matches!(self, Error::Inconsistency(_) | Error::Tolerance(_))
    }
}
