//! Seeded random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used by every search; reports echo [`RNG_ALGORITHM`].
pub type SearchRng = ChaCha8Rng;

pub const RNG_ALGORITHM: &str = "chacha8";

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent stream for `(seed, a, b)`, e.g. `(seed, shuffle, memeplex)`.
pub fn derive_rng(seed: u64, a: u64, b: u64) -> SearchRng {
    let s = splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b.rotate_left(32));
    SearchRng::seed_from_u64(s)
}

pub fn seeded(seed: u64) -> SearchRng {
    SearchRng::seed_from_u64(seed)
}
