//! Reproducible random streams.
//!
//! Every random quantity in the crate is drawn from a ChaCha20 stream. The key
//! comes from the user seed (expanded by `rand_core`'s `seed_from_u64`, a
//! fixed PCG32 expansion), and the 64-bit stream id is a SplitMix64 hash of a
//! path of integers such as `(domain tag, cell index, trial index)`. ChaCha is
//! counter based, so streams are identical on every platform and for any
//! thread count. Seed 0 is a valid seed.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub type StreamRng = ChaCha20Rng;

/// Domain tags keep independent uses of one seed apart.
pub mod tag {
    pub const WINDOW: u64 = 0x5749_4e44;
    pub const MONTE_CARLO: u64 = 0x4d43_5249;
    pub const TRUTH: u64 = 0x5452_5554;
    pub const NOISE: u64 = 0x4e4f_4953;
    pub const SWEEP: u64 = 0x5357_4550;
    pub const PROBE: u64 = 0x5052_4f42;
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn stream_id(path: &[u64]) -> u64 {
    path.iter()
        .fold(0x6a09_e667_f3bc_c908, |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

/// Deterministic substream for `seed` addressed by `path`.
pub fn substream(seed: u64, path: &[u64]) -> StreamRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream_id(path));
    rng
}

/// Derive a child seed, e.g. the seed of one sweep trial.
pub fn derive_seed(seed: u64, path: &[u64]) -> u64 {
    splitmix64(seed ^ stream_id(path))
}
