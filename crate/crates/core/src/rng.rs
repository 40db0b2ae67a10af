use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Default number of attempts for every seeded randomized search.
pub const RETRY_BUDGET: usize = 20;

/// Mixes a master seed with a counter into an independent-looking seed.
pub fn derive_seed(master: u64, counter: u64) -> u64 {
    let mut z = master ^ counter.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
