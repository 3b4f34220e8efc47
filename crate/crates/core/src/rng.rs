use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Derives an independent, reproducible random stream from a run seed and a
/// stream name (`"generator"`, `"weights"`, `"shuffle"`, `"random-cut"`, ...).
///
/// Components that draw from different names never perturb each other, so
/// e.g. changing the edge order does not change the generated graph.
pub fn seed_stream(seed: u64, name: &str) -> ChaCha8Rng {
    // FNV-1a over the name, folded into the seed, then one splitmix64 round.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut z = seed ^ h;
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^= z >> 31;
    ChaCha8Rng::seed_from_u64(z)
}
