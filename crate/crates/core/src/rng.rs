//! Deterministic random source for fuzz corpora and decomposition search.
//!
//! The generator is ChaCha8 (`rand_chacha::ChaCha8Rng`), seeded from a `u64`
//! through `SeedableRng::seed_from_u64`. Its output stream is specified
//! independently of platform and word size, so a seed reproduces the same
//! states everywhere. Normal deviates come from the Marsaglia polar method,
//! which consumes uniform pairs and yields Gaussian pairs.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::real::Real;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Two independent standard normal deviates (Marsaglia polar transform).
pub fn gaussian_pair<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    loop {
        let u: f64 = rng.gen_range(-1.0..1.0);
        let v: f64 = rng.gen_range(-1.0..1.0);
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            let f = (-2.0 * s.ln() / s).sqrt();
            return (u * f, v * f);
        }
    }
}

/// Complex number with independent standard normal real and imaginary parts.
pub fn complex_gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let (re, im) = gaussian_pair(rng);
    Complex::new(T::lit(re), T::lit(im))
}
