//! Seed derivation for reproducible substreams.
//!
//! Every random stream in a sweep (per load point, per seed index, per
//! episode, per agent) is keyed by mixing the master seed with a fixed
//! sequence of tags. The mix is splitmix64, so derived seeds do not
//! depend on platform hashers and are stable across runs and thread
//! schedules.

use rand_chacha::ChaCha12Rng;

pub const STREAM_TRAFFIC: u64 = 0x7452_4146;
pub const STREAM_AGENT: u64 = 0x4147_4e54;
pub const STREAM_EPISODE: u64 = 0x4550_4953;
pub const STREAM_SEED_INDEX: u64 = 0x5345_4544;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a substream seed from a master seed and a tag sequence.
pub fn substream(master: u64, tags: &[u64]) -> u64 {
    let mut state = splitmix64(master);
    for &tag in tags {
        state = splitmix64(state ^ tag);
    }
    state
}

/// Seed a deterministic generator for one substream.
pub fn stream_rng(master: u64, tags: &[u64]) -> ChaCha12Rng {
    use rand::SeedableRng;
    ChaCha12Rng::seed_from_u64(substream(master, tags))
}
