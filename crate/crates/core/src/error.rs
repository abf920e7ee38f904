//! Shared error type for all modules.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Malformed or out-of-domain input (bad dimensions, non-finite entries,
    /// invalid indices, degenerate regions, negative weights, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A Lorentzian-distance query on a pair that is not causally related.
    /// The dilatation distance is only defined for `p ≺ q`.
    #[error("events {p} and {q} are not causally related")]
    NotCausallyRelated { p: usize, q: usize },

    /// Exhaustive enumeration was requested on an instance above its cap.
    #[error("instance too large: {0}")]
    InstanceTooLarge(String),

    /// A Gram form too close to singular to define a Krein space.
    #[error("singular form: {0}")]
    SingularForm(String),
}

pub type Result<T> = std::result::Result<T, Error>;
