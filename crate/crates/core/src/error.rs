use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grid size must be even and at least 8, got N = {0}")]
    GridSize(usize),

    #[error("wave number k = {k} is not a multiple of 1/N for N = {n} (k*N must be an integer)")]
    Misaligned { k: f64, n: usize },

    #[error("wave number k = {k} lies outside [-1/2, 1/2]")]
    WaveNumberRange { k: f64 },

    #[error("half shift k/2 is not grid aligned: shift count p = {p} is odd")]
    HalfShiftMisaligned { p: usize },

    #[error("profile has {got} samples but the grid has {expected} nodes")]
    LengthMismatch { expected: usize, got: usize },

    #[error("profile samples must be finite")]
    NonFinite,

    #[error(
        "profile is not mean-zero (mean = {mean:e}); its antiderivative would not be periodic"
    )]
    NotMeanZero { mean: f64 },

    #[error("improvement operator is undefined at {0}")]
    Degenerate(&'static str),

    #[error("could not bracket {0}")]
    Bracket(&'static str),

    #[error(
        "unknown potential `{0}` (expected harmonic:c=<value>, exp_decay, quartic or saturating)"
    )]
    UnknownPotential(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
