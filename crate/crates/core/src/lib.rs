//! Meta-INF: learning the initialization and learning rate of Tsallis-INF
//! across a sequence of adversarial bandit episodes.
//!
//! The numeric core is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar for the common case.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adversary;
pub mod baselines;
pub mod error;
pub mod harness;
pub mod inner;
pub mod outer;
pub mod scalar;
pub mod seed;
pub mod simplex;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Distribution64 = simplex::Distribution<f64>;
pub type Distribution32 = simplex::Distribution<f32>;
pub type TruncationLevel64 = simplex::TruncationLevel<f64>;
pub type TruncationLevel32 = simplex::TruncationLevel<f32>;
pub type MetaParams64 = outer::MetaParams<f64>;
pub type MetaParams32 = outer::MetaParams<f32>;
pub type EpisodeLosses64 = adversary::EpisodeLosses<f64>;
pub type EpisodeLosses32 = adversary::EpisodeLosses<f32>;
pub type RegretReport64 = harness::RegretReport<f64>;
pub type RegretReport32 = harness::RegretReport<f32>;
