//! Periodic travelling waves (wave trains) of Klein-Gordon chains
//!
//! ```text
//! y_j'' = y_{j+1} + y_{j-1} - 2 y_j - Psi'(y_j),      y_j(t) = Y(k j - omega t)
//! ```
//!
//! with a convex on-site potential `Psi`. Wave trains are computed as fixed
//! points of an improvement operator that maximizes the reduced potential
//! energy on the sphere `1/2 |X'|^2 = gamma`; the squared frequency appears
//! as the Lagrange multiplier.
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` / `*32` aliases below fix the precision.

// `!(x > 0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod energy;
pub mod error;
pub mod grid;
pub mod potential;
pub mod scalar;
pub mod solver;
pub mod validate;

pub use energy::EnergyBreakdown;
pub use error::{Error, Result};
pub use grid::{Norms, PeriodicGrid, Profile, WaveNumber};
pub use potential::{OnSitePotential, Potential};
pub use scalar::Scalar;
pub use solver::{
    solve, solve_observed, InitialProfile, IterationRecord, Solution, SolveConfig, Status,
    WaveTrain,
};
pub use validate::{ChainReport, ChainRun, K0Report, Trace};

pub type Profile64 = Profile<f64>;
pub type Profile32 = Profile<f32>;
pub type Potential64 = Potential<f64>;
pub type Potential32 = Potential<f32>;
pub type SolveConfig64 = SolveConfig<f64, Potential<f64>>;
pub type SolveConfig32 = SolveConfig<f32, Potential<f32>>;
pub type WaveTrain64 = WaveTrain<f64>;
pub type WaveTrain32 = WaveTrain<f32>;
pub type Solution64 = Solution<f64>;
pub type Solution32 = Solution<f32>;
pub type Trace64 = Trace<f64>;
pub type Trace32 = Trace<f32>;
