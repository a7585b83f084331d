//! Seeded randomness.
//!
//! Every random decision in the pipeline (corpus shuffle, train/test split,
//! mini-batch order, parameter initialization) draws from ChaCha8 seeded via
//! `SeedableRng::seed_from_u64`. ChaCha8 output is specified bit-for-bit and
//! does not depend on platform word size, so a seed reproduces the same
//! corpus order, split and model everywhere.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type PipelineRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> PipelineRng {
    ChaCha8Rng::seed_from_u64(seed)
}
