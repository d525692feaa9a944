#![allow(dead_code)]

use ifccr::gauss::ChannelGains;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0xC0FFEE;

pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

/// Gains in [0, 4], real cross gains in [-4, 4].
pub fn random_channel(rng: &mut ChaCha8Rng) -> ChannelGains {
    ChannelGains::real(
        rng.gen_range(0.0..4.0),
        rng.gen_range(-4.0..4.0),
        rng.gen_range(-4.0..4.0),
        rng.gen_range(0.0..4.0),
        rng.gen_range(0.0..4.0),
        rng.gen_range(0.0..4.0),
    )
    .unwrap()
}
