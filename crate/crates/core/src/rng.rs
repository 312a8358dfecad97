//! Seeded, counter-based random streams.
//!
//! Every random draw in the crate comes from `stream(seed, label, index)`: the
//! 64-bit run seed is mixed with a stable hash of a label (the suite or module
//! name) and the trial index selects a ChaCha stream. A trial therefore sees
//! the same numbers no matter how trials are partitioned across threads.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// 64-bit FNV-1a; stable across platforms and releases, unlike `std`'s hasher.
pub fn label_hash(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Independent generator for trial `index` of the run labelled `label`.
pub fn stream(seed: u64, label: &str, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ label_hash(label)));
    rng.set_stream(index);
    rng
}

/// Standard complex Gaussian (independent N(0, 1/2) real and imaginary parts).
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}
