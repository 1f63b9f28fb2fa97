use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parameter {name} must be positive")]
    ZeroParameter { name: &'static str },

    #[error("label {label} out of range 1..={n}")]
    LabelOutOfRange { label: u32, n: u32 },

    #[error("cover ({0}, {1}) relates an element to itself")]
    SelfCover(u32, u32),

    #[error("cover relation contains a cycle")]
    Cyclic,

    #[error("cover ({0}, {1}) is implied by the other covers")]
    RedundantCover(u32, u32),

    #[error("poset has {n} elements, exceeding the enumeration cap {cap}")]
    SizeCap { n: u32, cap: usize },

    #[error("Hasse diagram is not a rooted forest")]
    NotForest,

    #[error("permutation entries must be distinct")]
    DuplicateEntry,

    #[error("permutation entries must be positive")]
    ZeroEntry,

    #[error("operation requires a permutation of 1..=n")]
    NotStandard,

    #[error("pattern must be a permutation of 1..=k")]
    BadPattern,

    #[error("input must avoid the pattern {0}")]
    MustAvoid(&'static str),

    #[error("parameters out of range: {0}")]
    OutOfRange(String),

    #[error("{0}")]
    InvalidInput(String),

    #[error("series composition requires the inner series to have zero constant term")]
    NonzeroConstantTerm,

    #[error("series coefficient expected to be a nonnegative integer, got {0}")]
    NonIntegralCoefficient(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
