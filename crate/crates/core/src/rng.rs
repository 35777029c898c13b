//! Seed-addressable random streams.
//!
//! Every consumer draws from a ChaCha8 stream identified by `(seed, domain,
//! index)`. The key is derived from the seed and domain, the 64-bit ChaCha
//! stream id is the index, so results never depend on evaluation order or on
//! how work is split across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream domains. Distinct consumers never share a key.
pub mod domain {
    pub const HAAR_STATES: u64 = 0x5354_4154;
    pub const THEOREM_TRIALS: u64 = 0x5448_524d;
    pub const BRUTEFORCE: u64 = 0x4252_5554;
    pub const PSO: u64 = 0x5053_4f00;
    pub const SEPARABLE_TARGETS: u64 = 0x5345_5041;
}

/// splitmix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Returns the generator for substream `index` of `domain` under `seed`.
pub fn substream(seed: u64, domain: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    let words = [mix(seed), mix(seed ^ domain), mix(domain), mix(seed.rotate_left(32) ^ !domain)];
    for (chunk, w) in key.chunks_exact_mut(8).zip(words) {
        chunk.copy_from_slice(&w.to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

/// Derives a child seed, used to give each restart or trial its own seed space.
pub fn derive_seed(seed: u64, domain: u64, index: u64) -> u64 {
    mix(mix(seed ^ domain).wrapping_add(index))
}
