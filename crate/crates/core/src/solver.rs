//! Improvement operator and the fixed-point iteration for wave trains.
//!
//! One step maps a mean-zero profile `X` on the sphere `Gamma(X) = gamma` to
//!
//! ```text
//! x_hat = argmin_x integral Psi(x + X)
//! Z     = -laplacian_k X + Psi'(x_hat + X)
//! U     = -I I Z                      (I: mean-zero periodic antiderivative)
//! w2    = |U'|_2 / sqrt(2 gamma)
//! X_new = U / w2
//! ```
//!
//! so that `w2 X_new'' = laplacian_k X - Psi'(x_hat + X)` and
//! `Gamma(X_new) = gamma`. Fixed points are wave trains with squared
//! frequency `w2`. The reduced energy `P_k(x_hat(X) + X)` does not decrease
//! along the iteration.

use crate::energy::{self, EnergyBreakdown};
use crate::error::{Error, Result};
use crate::grid::{PeriodicGrid, Profile, WaveNumber};
use crate::potential::{OnSitePotential, Potential};
use crate::scalar::Scalar;

pub const DEFAULT_TOL_FIXEDPOINT: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 5000;

#[derive(Debug, Clone, PartialEq)]
pub enum InitialProfile<T = f64> {
    /// `(sqrt(gamma) / pi) cos(2 pi phi)`.
    Cosine,
    Given(Profile<T>),
}

#[derive(Debug, Clone)]
pub struct SolveConfig<T = f64, P = Potential<T>> {
    /// Constraint level: iterates satisfy `1/2 |X'|^2 = gamma`.
    pub gamma: T,
    pub k: WaveNumber,
    pub grid: PeriodicGrid,
    pub potential: P,
    /// Stop once `|X_{i+1} - X_i|_{H1} <= tol_fixedpoint * sqrt(2 gamma)`.
    pub tol_fixedpoint: T,
    pub tol_xhat: T,
    pub max_iter: usize,
    pub initial: InitialProfile<T>,
}

impl<T: Scalar, P: OnSitePotential<T>> SolveConfig<T, P> {
    /// Config with default tolerances, `max_iter` and cosine initial data.
    pub fn new(gamma: T, k: f64, nodes: usize, potential: P) -> Result<Self> {
        let grid = PeriodicGrid::new(nodes)?;
        let k = WaveNumber::new(k, grid)?;
        let cfg = Self {
            gamma,
            k,
            grid,
            potential,
            tol_fixedpoint: T::lit(DEFAULT_TOL_FIXEDPOINT),
            tol_xhat: T::lit(energy::DEFAULT_XHAT_TOL),
            max_iter: DEFAULT_MAX_ITER,
            initial: InitialProfile::Cosine,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_tol(mut self, tol_fixedpoint: T) -> Self {
        self.tol_fixedpoint = tol_fixedpoint;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_initial(mut self, initial: Profile<T>) -> Self {
        self.initial = InitialProfile::Given(initial);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: T| v > T::zero() && v.is_finite();
        if !positive(self.gamma) {
            return Err(Error::InvalidParameter(format!(
                "gamma must be positive, got {}",
                self.gamma
            )));
        }
        if !positive(self.tol_fixedpoint) || !positive(self.tol_xhat) {
            return Err(Error::InvalidParameter(
                "tolerances must be positive".into(),
            ));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter(
                "max_iter must be at least 1".into(),
            ));
        }
        if self.k.grid_len() != self.grid.len() {
            return Err(Error::InvalidParameter(
                "wave number was built for a different grid".into(),
            ));
        }
        if let InitialProfile::Given(x) = &self.initial {
            check_initial(x, self.grid)?;
        }
        Ok(())
    }

    pub fn initial_profile(&self) -> Profile<T> {
        match &self.initial {
            InitialProfile::Cosine => Profile::cosine(self.grid, self.gamma.sqrt() / T::PI()),
            InitialProfile::Given(x) => x.clone(),
        }
    }
}

fn check_initial<T: Scalar>(x: &Profile<T>, grid: PeriodicGrid) -> Result<()> {
    if x.grid() != grid {
        return Err(Error::LengthMismatch {
            expected: grid.len(),
            got: x.len(),
        });
    }
    let sup = x.sup_norm();
    if sup == T::zero() {
        return Err(Error::Degenerate("the zero profile"));
    }
    let mean = x.mean();
    let slack = T::lit(1e-12).max(T::lit(1e2) * T::epsilon());
    if mean.abs() > slack * (T::one() + sup) {
        return Err(Error::NotMeanZero {
            mean: mean.to_f64().unwrap_or(f64::NAN),
        });
    }
    if !x.in_curvature_cone() {
        return Err(Error::InvalidParameter(
            "initial profile must have an even, unimodal negated second derivative".into(),
        ));
    }
    Ok(())
}

/// One application of the improvement operator.
#[derive(Debug, Clone)]
pub struct Improvement<T = f64> {
    pub profile: Profile<T>,
    pub omega2: T,
    /// `x_hat` of the input profile.
    pub xhat: T,
    /// Reduced energy `P_k(x_hat + X)` of the input profile.
    pub reduced_energy: T,
    /// `|I Z|_2 / sqrt(2 gamma)`: the same multiplier measured through the
    /// first antiderivative, equal to `omega2` up to `O(N^-2)`.
    pub omega2_integral: T,
}

pub fn improve<T: Scalar, P: OnSitePotential<T>>(
    x: &Profile<T>,
    cfg: &SolveConfig<T, P>,
) -> Result<Improvement<T>> {
    if x.sup_norm() == T::zero() {
        return Err(Error::Degenerate("the zero profile"));
    }
    let xhat = energy::solve_xhat(x, &cfg.potential, cfg.tol_xhat)?;
    let reduced_energy = energy::potential_energy(xhat, x, cfg.k, &cfg.potential).total;
    let z = energy::gradient(xhat, x, cfg.k, &cfg.potential);
    if z.sup_norm() == T::zero() {
        return Err(Error::Degenerate("a vanishing energy gradient"));
    }
    let first = z.cumulative()?;
    let u = -&first.cumulative()?;
    let sphere = (T::lit(2.0) * cfg.gamma).sqrt();
    let omega2 = u.derivative().l2_norm() / sphere;
    if !(omega2 > T::zero()) {
        return Err(Error::Degenerate("a vanishing multiplier"));
    }
    Ok(Improvement {
        profile: &u * omega2.recip(),
        omega2,
        xhat,
        reduced_energy,
        omega2_integral: first.l2_norm() / sphere,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord<T = f64> {
    pub index: usize,
    /// `P_k(x_hat(X_i) + X_i)` of the iterate fed into this step.
    pub reduced_energy: T,
    pub omega2: T,
    pub xhat: T,
    /// `Gamma(X_{i+1})`.
    pub gamma: T,
    /// `|X_{i+1} - X_i|_{H1}`.
    pub step: T,
}

/// View handed to solve observers after every step.
#[derive(Debug, Clone, Copy)]
pub struct Iterate<'a, T = f64> {
    pub record: &'a IterationRecord<T>,
    /// The new iterate `X_{i+1}`.
    pub profile: &'a Profile<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    MaxIterations,
}

/// A (possibly unconverged) periodic travelling wave `Y = x_hat + X`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveTrain<T = f64> {
    /// Mean-zero part `X`.
    pub profile: Profile<T>,
    pub xhat: T,
    pub omega2: T,
    pub residual_sup: T,
    pub energy: EnergyBreakdown<T>,
    pub iterations: usize,
    pub in_cone: bool,
    pub gamma_actual: T,
    pub gamma: T,
    pub k: WaveNumber,
}

impl<T: Scalar> WaveTrain<T> {
    /// Assembles a wave train from a profile and multiplier, filling in the
    /// derived diagnostics.
    pub fn assemble<P: OnSitePotential<T>>(
        profile: Profile<T>,
        xhat: T,
        omega2: T,
        gamma: T,
        k: WaveNumber,
        iterations: usize,
        potential: &P,
    ) -> Self {
        let energy = energy::potential_energy(xhat, &profile, k, potential);
        let mut wave = Self {
            in_cone: profile.in_curvature_cone(),
            gamma_actual: energy.kinetic_factor,
            profile,
            xhat,
            omega2,
            residual_sup: T::zero(),
            energy,
            iterations,
            gamma,
            k,
        };
        wave.residual_sup = residual(&wave, potential).sup_norm();
        wave
    }

    pub fn omega(&self) -> T {
        self.omega2.sqrt()
    }

    /// Velocity profile `V = -omega X'`.
    pub fn velocity(&self) -> Profile<T> {
        &self.profile.derivative() * (-self.omega())
    }
}

#[derive(Debug, Clone)]
pub struct Solution<T = f64> {
    pub wave: WaveTrain<T>,
    pub status: Status,
    pub history: Vec<IterationRecord<T>>,
}

impl<T: Scalar> Solution<T> {
    pub fn converged(&self) -> bool {
        self.status == Status::Converged
    }

    /// Reduced energies of `X_0, ..., X_final`.
    pub fn energy_history(&self) -> Vec<T> {
        self.history
            .iter()
            .map(|r| r.reduced_energy)
            .chain(std::iter::once(self.wave.energy.total))
            .collect()
    }
}

pub fn solve<T: Scalar, P: OnSitePotential<T>>(cfg: &SolveConfig<T, P>) -> Result<Solution<T>> {
    solve_observed(cfg, |_| {})
}

/// Runs the fixed-point iteration, calling `observer` after every step.
///
/// Hitting `max_iter` is reported through [`Status::MaxIterations`] together
/// with the last iterate; it is not an error.
pub fn solve_observed<T: Scalar, P: OnSitePotential<T>>(
    cfg: &SolveConfig<T, P>,
    mut observer: impl FnMut(Iterate<'_, T>),
) -> Result<Solution<T>> {
    cfg.validate()?;
    let threshold = cfg.tol_fixedpoint * (T::lit(2.0) * cfg.gamma).sqrt();
    let mut x = cfg.initial_profile();
    let mut history = Vec::new();
    let mut status = Status::MaxIterations;
    let mut omega2 = T::zero();
    for index in 0..cfg.max_iter {
        let step = improve(&x, cfg)?;
        let next = step.profile;
        let record = IterationRecord {
            index,
            reduced_energy: step.reduced_energy,
            omega2: step.omega2,
            xhat: step.xhat,
            gamma: energy::kinetic_gamma(&next),
            step: (&next - &x).derivative().l2_norm(),
        };
        observer(Iterate {
            record: &record,
            profile: &next,
        });
        history.push(record);
        x = next;
        omega2 = step.omega2;
        if record.step <= threshold {
            status = Status::Converged;
            break;
        }
    }
    let xhat = energy::solve_xhat(&x, &cfg.potential, cfg.tol_xhat)?;
    let wave = WaveTrain::assemble(
        x,
        xhat,
        omega2,
        cfg.gamma,
        cfg.k,
        history.len(),
        &cfg.potential,
    );
    Ok(Solution {
        wave,
        status,
        history,
    })
}

/// `omega^2 X'' - laplacian_k X + Psi'(x_hat + X)` with the compact second
/// difference for `X''`.
pub fn residual<T: Scalar, P: OnSitePotential<T>>(
    wave: &WaveTrain<T>,
    potential: &P,
) -> Profile<T> {
    let x = &wave.profile;
    let curvature = x.second_difference();
    let lap = x.laplacian(wave.k);
    let omega2 = wave.omega2;
    let xhat = wave.xhat;
    let samples = x
        .samples()
        .iter()
        .zip(curvature.samples())
        .zip(lap.samples())
        .map(|((&v, &c), &l)| omega2 * c - l + potential.dpsi(xhat + v))
        .collect();
    Profile::new(x.grid(), samples).expect("residual of a finite wave train is finite")
}

/// Squared dispersion relation of the harmonic chain:
/// `omega^2 = (4 sin^2(pi k) + c) / (4 pi^2)`.
pub fn harmonic_omega2<T: Scalar>(c: T, k: T) -> T {
    let s = (T::PI() * k).sin();
    (T::lit(4.0) * s * s + c) / (T::lit(4.0) * T::PI() * T::PI())
}
