//! Per-trial random streams.
//!
//! Trial `i` at sweep point `p` always draws from the same ChaCha8 stream,
//! keyed by `(master_seed, p)` with stream id `i`. Scheduling order and worker
//! count therefore cannot change any sample.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Key for all trials of one sweep point.
pub fn point_key(master_seed: u64, point_index: u64) -> [u8; 32] {
    let mut state = master_seed;
    let mixed = splitmix64(&mut state) ^ point_index.wrapping_mul(0xd1b5_4a32_d192_ed03);
    let mut state = mixed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    key
}

pub fn trial_rng_from_key(key: [u8; 32], trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial_index);
    rng
}

pub fn trial_rng(master_seed: u64, point_index: u64, trial_index: u64) -> ChaCha8Rng {
    trial_rng_from_key(point_key(master_seed, point_index), trial_index)
}
