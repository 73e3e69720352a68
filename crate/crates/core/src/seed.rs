//! Deterministic seed splitting.
//!
//! Every random stream in a run is derived from one master seed:
//!
//! ```text
//! child(parent, stream, index) = mix(mix(parent ^ (tag(stream) · 0x9E3779B97F4A7C15)) ^ index)
//! ```
//!
//! where `mix` is the SplitMix64 finalizer. The replicate seed of a run is
//! `child(master, Run, seed)`; best-arm draws use `child(run, BestArms, 0)`, the losses of
//! episode `s` use `child(run, EpisodeLosses, s)` and the learner's sampling in episode `s`
//! uses `child(run, Learner, s)`. Losses therefore depend only on (seed, s, t, i), and every
//! algorithm run on the same seed sees the same loss realizations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Named sub-streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Run = 1,
    BestArms = 2,
    EpisodeLosses = 3,
    Learner = 4,
    Identification = 5,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of sub-stream `index` of kind `stream` from `parent`.
pub fn split(parent: u64, stream: Stream, index: u64) -> u64 {
    mix(mix(parent ^ (stream as u64).wrapping_mul(GOLDEN)) ^ index)
}

/// A ChaCha8 generator for the given sub-stream.
pub fn stream_rng(parent: u64, stream: Stream, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(split(parent, stream, index))
}
