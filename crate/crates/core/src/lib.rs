//! Exact counting and construction of pattern-avoiding linear extensions of
//! labeled comb posets.
//!
//! The library is organized around five pieces:
//!
//! * [`poset`] builds labeled combs and uneven combs and enumerates or counts
//!   their linear extensions.
//! * [`perm`] provides permutations, pattern containment, classical statistics,
//!   the Simion-Schmidt map, and the brute-force avoiding-extension oracle.
//! * [`closed`] holds every closed form, recurrence, and constructive bijection
//!   for the avoidance counts, computed with arbitrary-precision integers.
//! * [`series`] is a small exact truncated power-series ring over the rationals,
//!   enough to state the Catalan generating-function identities.
//! * [`bounds`] evaluates the growth-rate bound expressions and the finite
//!   inequalities behind them.

pub mod bounds;
pub mod closed;
pub mod perm;
pub mod poset;
pub mod series;

mod error;

pub use error::Error;

/// Arbitrary-precision nonnegative integer used for all counts.
pub type Count = num_bigint::BigUint;

pub type Result<T> = std::result::Result<T, Error>;

/// Default cap on poset size for brute-force enumeration.
pub const DEFAULT_ENUM_CAP: usize = 16;
