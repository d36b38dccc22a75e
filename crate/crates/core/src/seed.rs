//! Seed derivation for independent random streams.
//!
//! Every random stream in the crate is a `ChaCha8Rng` seeded from a 64-bit
//! value derived by hashing a base seed together with a path of indices
//! (scenario row, replicate, method, bootstrap draw, ...). Streams therefore
//! depend only on their position in the experiment, never on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used for every random stream.
pub type StreamRng = ChaCha8Rng;

/// Identifier recorded in experiment metadata so results can be tied to the
/// exact sampling algorithms.
pub const RNG_ALGORITHM: &str =
    "chacha8 (rand_chacha 0.9); normal: ziggurat, chi-square: gamma (rand_distr 0.5); seeds: splitmix64 chain";

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes `path` into `base`, one component at a time.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(base), |acc, &p| splitmix64(acc ^ splitmix64(p.wrapping_add(0x5851_F42D_4C95_7F2D))))
}

pub fn rng_from_seed(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn derived_rng(base: u64, path: &[u64]) -> StreamRng {
    rng_from_seed(derive_seed(base, path))
}

/// Stream labels, so the same numeric path under different purposes never
/// collides.
pub(crate) mod label {
    pub const DIP_NULL: u64 = 0xD1B0;
    pub const SILVERMAN: u64 = 0x5117;
    pub const HOPKINS: u64 = 0x40B5;
    pub const METHOD: u64 = 0x3E7D;
    pub const DATASET: u64 = 0xDA7A;
    pub const ASSESS: u64 = 0xA55E;
}
