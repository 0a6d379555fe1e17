//! Seeded, splittable randomness. Nothing in the crate draws from ambient
//! entropy.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::C64;

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `k` of the generator seeded with `seed`.
pub fn stream(seed: u64, k: u64) -> Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(k);
    r
}

/// Draws a fresh seed from `rng`, for handing to a child computation.
pub fn split(rng: &mut Rng) -> u64 {
    rng.random()
}

/// Standard complex normal sample (E|z|² = 1).
pub fn complex_normal(rng: &mut Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn uniform(rng: &mut Rng) -> f64 {
    rng.random()
}

pub fn normal(rng: &mut Rng) -> f64 {
    rng.sample(StandardNormal)
}
