//! Random multi-hooking networks.
//!
//! A network starts from a connected seed graph with a designated hook. At
//! step `n`, `k_{n-1}` distinct latches are drawn uniformly from the current
//! graph and a fresh copy of the seed is fused onto each latch through its
//! hook. This crate grows such networks, tracks depths, eccentricities and
//! the diameter incrementally, evaluates the exact expectations of degree and
//! distance statistics, and checks both against brute force and simulation.

pub mod error;
pub mod growth;
pub mod io;
pub mod montecarlo;
pub mod multigraph;
pub mod seed;
pub mod sequence;
pub mod theory;
pub mod verify;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use error::Error;
pub use growth::{GrowthOptions, GrowthState, GrowthTrace, LatchSample};
pub use multigraph::{MultiGraph, VertexId};
pub use seed::{profile_seed, validate_seed, SeedProfile, SeedSpec};
pub use sequence::{BuildingSequence, Gamma, SequenceLimits};

/// Exact rational used by every closed-form evaluation.
pub type Rational = BigRational;

/// Shorthand for a small exact rational.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Lossy conversion used only at the reporting boundary.
pub fn to_f64(value: &Rational) -> f64 {
    num_traits::ToPrimitive::to_f64(value).unwrap_or(f64::NAN)
}
