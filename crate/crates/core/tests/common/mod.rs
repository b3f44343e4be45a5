#![allow(dead_code)]

use proptest::test_runner::{Config, RngSeed};

pub const DEFAULT_SEED: u64 = 0x5eed_2_adc;

/// `RBCM_SEED` if set, else a fixed default, so every run is reproducible.
pub fn seed() -> u64 {
    std::env::var("RBCM_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED)
}

pub fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(seed()), failure_persistence: None, ..Config::default() }
}
