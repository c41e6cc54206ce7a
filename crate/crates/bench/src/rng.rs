//! Keyed random streams.
//!
//! Every unit of work draws from its own ChaCha8 generator seeded by a hash
//! of the run seed and a textual key, so results do not depend on how work
//! is split across threads. The key layout is part of the reproducibility
//! contract:
//!
//! - `S{id}/n{n}/sample/r{rep}` for replicate data (shared by all measures)
//! - `S{id}/oracle/c{chunk}` for truth-oracle reference draws

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(bytes: &[u8], mut h: u64) -> u64 {
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn stream_seed(seed: u64, key: &str) -> u64 {
    let h = fnv1a(&seed.to_le_bytes(), FNV_OFFSET);
    splitmix64(fnv1a(key.as_bytes(), h))
}

pub fn stream(seed: u64, key: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(seed, key))
}

pub fn sample_key(scenario: u8, n: usize, replicate: usize) -> String {
    format!("S{scenario}/n{n}/sample/r{replicate}")
}

pub fn oracle_key(scenario: u8, chunk: usize) -> String {
    format!("S{scenario}/oracle/c{chunk}")
}
