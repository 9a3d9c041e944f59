#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use wavetrain::{PeriodicGrid, Profile};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random trigonometric polynomial with `modes` harmonics and decaying
/// coefficients; `offset` is added as the mean.
pub fn smooth_profile(
    rng: &mut impl Rng,
    grid: PeriodicGrid,
    modes: usize,
    offset: f64,
) -> Profile {
    let coeffs: Vec<(f64, f64)> = (1..=modes)
        .map(|m| {
            let s = 1.0 / (m * m) as f64;
            (rng.gen_range(-1.0..1.0) * s, rng.gen_range(-1.0..1.0) * s)
        })
        .collect();
    Profile::from_fn(grid, |phi: f64| {
        offset
            + coeffs
                .iter()
                .enumerate()
                .map(|(i, &(a, b))| {
                    let w = TAU * (i + 1) as f64 * phi;
                    a * w.cos() + b * w.sin()
                })
                .sum::<f64>()
    })
}

/// Random profile without any smoothness.
pub fn rough_profile(rng: &mut impl Rng, grid: PeriodicGrid) -> Profile {
    Profile::new(
        grid,
        (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect(),
    )
    .unwrap()
}

/// Random even profile (cosine modes only).
pub fn even_profile(rng: &mut impl Rng, grid: PeriodicGrid, modes: usize) -> Profile {
    let coeffs: Vec<f64> = (1..=modes)
        .map(|m| rng.gen_range(-1.0..1.0) / (m * m) as f64)
        .collect();
    Profile::from_fn(grid, |phi: f64| {
        coeffs
            .iter()
            .enumerate()
            .map(|(i, &a)| a * (TAU * (i + 1) as f64 * phi).cos())
            .sum::<f64>()
    })
}
