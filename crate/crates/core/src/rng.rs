//! Portable seeded randomness.
//!
//! Every random stream in the crate is a `ChaCha8Rng` seeded through
//! `SeedableRng::seed_from_u64`. ChaCha output and the PCG32 seed expansion
//! used by `seed_from_u64` are platform independent, and index draws go
//! through `u64` ranges so that 32- and 64-bit targets consume the stream
//! identically.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Generator used for instances and chains.
pub type ChainRng = ChaCha8Rng;

/// Name written into instance metadata so files document their provenance.
pub const RNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.3, seed_from_u64)";

/// XOR mask that separates the clique-placement stream from the graph stream.
pub const CLIQUE_SEED_MASK: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn seeded(seed: u64) -> ChainRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform index in `0..len`. `len` must be non-zero.
#[inline]
pub fn pick_index<R: Rng + ?Sized>(rng: &mut R, len: usize) -> usize {
    debug_assert!(len > 0);
    rng.gen_range(0..len as u64) as usize
}

/// Uniform element of a non-empty slice.
#[inline]
pub fn pick<'a, T, R: Rng + ?Sized>(rng: &mut R, items: &'a [T]) -> &'a T {
    &items[pick_index(rng, items.len())]
}

/// Uniform draw in `[0, 1)`.
#[inline]
pub fn unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.gen::<f64>()
}
