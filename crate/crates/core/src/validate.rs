//! Independent checks of computed wave trains: the oscillator time map for
//! `k = 0`, direct simulation of the lattice, and phase-plane traces.

use crate::error::{Error, Result};
use crate::grid::WaveNumber;
use crate::potential::OnSitePotential;
use crate::scalar::Scalar;
use crate::solver::WaveTrain;

/// Default number of Gauss-Chebyshev nodes for [`time_map`].
pub const DEFAULT_QUAD_NODES: usize = 256;

/// Solves `Psi(y) = energy` on the half line in direction `dir` (+1 or -1).
fn turning_point<T: Scalar, P: OnSitePotential<T>>(energy: T, potential: &P, dir: T) -> Result<T> {
    let mut inner = T::zero();
    let mut outer = dir;
    let mut tries = 0;
    while potential.psi(outer) < energy {
        inner = outer;
        outer = outer * T::lit(2.0);
        tries += 1;
        if tries > 1100 || !outer.is_finite() {
            return Err(Error::Bracket("a turning point"));
        }
    }
    loop {
        let mid = (inner + outer) * T::lit(0.5);
        if mid == inner || mid == outer {
            return Ok(
                if (potential.psi(outer) - energy).abs() < (potential.psi(inner) - energy).abs() {
                    outer
                } else {
                    inner
                },
            );
        }
        if potential.psi(mid) < energy {
            inner = mid;
        } else {
            outer = mid;
        }
    }
}

/// Period of `y'' = -Psi'(y)` at energy `E = y'^2/2 + Psi(y)`:
///
/// ```text
/// T(E) = sqrt(2) * integral_{y-}^{y+} dy / sqrt(E - Psi(y))
/// ```
///
/// Writing `E - Psi(y) = (y+ - y)(y - y-) g(y)` leaves a smooth factor
/// `g^{-1/2}` against the Chebyshev weight, which Gauss-Chebyshev integrates
/// without touching the endpoint singularities.
pub fn time_map<T: Scalar, P: OnSitePotential<T>>(
    energy: T,
    potential: &P,
    quad_nodes: usize,
) -> Result<T> {
    if !(energy > T::zero()) || !energy.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "time map needs a positive energy, got {energy}"
        )));
    }
    if quad_nodes == 0 {
        return Err(Error::InvalidParameter(
            "time map needs at least one quadrature node".into(),
        ));
    }
    let upper = turning_point(energy, potential, T::one())?;
    let lower = turning_point(energy, potential, -T::one())?;
    let mid = (upper + lower) * T::lit(0.5);
    let half = (upper - lower) * T::lit(0.5);
    let n = T::from_usize_lossy(quad_nodes);
    let sum: T = (1..=quad_nodes)
        .map(|i| {
            let theta =
                T::PI() * (T::lit(2.0) * T::from_usize_lossy(i) - T::one()) / (T::lit(2.0) * n);
            let y = mid + half * theta.cos();
            let g = (energy - potential.psi(y)) / ((upper - y) * (y - lower));
            g.max(T::min_positive_value()).sqrt().recip()
        })
        .sum();
    Ok(T::lit(2.0).sqrt() * T::PI() / n * sum)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct K0Report<T = f64> {
    /// Mean of `E(phi) = omega^2 X'^2 / 2 + Psi(x_hat + X)` over the grid.
    pub energy: T,
    /// `(max E - min E) / mean E`.
    pub energy_variation: T,
    /// Oscillator period `T(E)` at the mean energy.
    pub period: T,
    /// `|omega T(E) - 1|`.
    pub period_mismatch: T,
}

/// Compares a `k = 0` wave train with the oscillator it must reduce to.
pub fn check_k0<T: Scalar, P: OnSitePotential<T>>(
    wave: &WaveTrain<T>,
    potential: &P,
) -> Result<K0Report<T>> {
    if !wave.k.is_zero() {
        return Err(Error::InvalidParameter(
            "the time-map check requires k = 0".into(),
        ));
    }
    let omega2 = wave.omega2;
    let half = T::lit(0.5);
    let slope = wave.profile.derivative();
    let energies: Vec<T> = wave
        .profile
        .samples()
        .iter()
        .zip(slope.samples())
        .map(|(&x, &dx)| half * omega2 * dx * dx + potential.psi(wave.xhat + x))
        .collect();
    let mean = energies.iter().copied().sum::<T>() / T::from_usize_lossy(energies.len());
    let (lo, hi) = energies
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &e| {
            (lo.min(e), hi.max(e))
        });
    let period = time_map(mean, potential, DEFAULT_QUAD_NODES)?;
    Ok(K0Report {
        energy: mean,
        energy_variation: (hi - lo) / mean,
        period,
        period_mismatch: (wave.omega() * period - T::one()).abs(),
    })
}

/// Periodic chain `y_j'' = y_{j+1} + y_{j-1} - 2 y_j - Psi'(y_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainState<T = f64> {
    pub y: Vec<T>,
    pub v: Vec<T>,
    pub t: T,
}

impl<T: Scalar> ChainState<T> {
    pub fn new(y: Vec<T>, v: Vec<T>) -> Result<Self> {
        if y.len() < 2 || y.len() != v.len() {
            return Err(Error::InvalidParameter(
                "a chain needs at least two particles with matching velocities".into(),
            ));
        }
        Ok(Self { y, v, t: T::zero() })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn accelerations<P: OnSitePotential<T>>(&self, potential: &P, out: &mut [T]) {
        let n = self.y.len();
        let two = T::lit(2.0);
        for (j, a) in out.iter_mut().enumerate().take(n) {
            let left = self.y[(j + n - 1) % n];
            let right = self.y[(j + 1) % n];
            *a = left + right - two * self.y[j] - potential.dpsi(self.y[j]);
        }
    }

    /// `sum_j v_j^2/2 + (y_{j+1} - y_j)^2/2 + Psi(y_j)`.
    pub fn energy<P: OnSitePotential<T>>(&self, potential: &P) -> T {
        let n = self.y.len();
        let half = T::lit(0.5);
        (0..n)
            .map(|j| {
                let stretch = self.y[(j + 1) % n] - self.y[j];
                half * self.v[j] * self.v[j] + half * stretch * stretch + potential.psi(self.y[j])
            })
            .sum()
    }
}

/// Velocity-Verlet integrator for [`ChainState`].
pub struct VelocityVerlet<'p, T, P> {
    state: ChainState<T>,
    acc: Vec<T>,
    potential: &'p P,
}

impl<'p, T: Scalar, P: OnSitePotential<T>> VelocityVerlet<'p, T, P> {
    pub fn new(state: ChainState<T>, potential: &'p P) -> Self {
        let mut acc = vec![T::zero(); state.len()];
        state.accelerations(potential, &mut acc);
        Self {
            state,
            acc,
            potential,
        }
    }

    pub fn state(&self) -> &ChainState<T> {
        &self.state
    }

    pub fn into_state(self) -> ChainState<T> {
        self.state
    }

    pub fn step(&mut self, dt: T) {
        let half_dt = dt * T::lit(0.5);
        let s = &mut self.state;
        for ((v, y), a) in s.v.iter_mut().zip(s.y.iter_mut()).zip(&self.acc) {
            *v = *v + half_dt * *a;
            *y = *y + dt * *v;
        }
        s.accelerations(self.potential, &mut self.acc);
        for (v, a) in s.v.iter_mut().zip(&self.acc) {
            *v = *v + half_dt * *a;
        }
        s.t = s.t + dt;
    }

    /// Reverses all velocities; the cached accelerations stay valid.
    pub fn reverse(&mut self) {
        for v in &mut self.state.v {
            *v = -*v;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainRun<T = f64> {
    pub particles: usize,
    pub t_end: T,
    pub dt: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainReport<T = f64> {
    /// `max_{t, j} |y_j(t) - Y(k j - omega t)|`.
    pub max_deviation: T,
    /// `max_t |E(t) - E(0)| / |E(0)|` (absolute when `E(0) = 0`).
    pub energy_drift: T,
    pub steps: usize,
}

/// Largest time step accepted by [`simulate_chain`]: at least 20 steps per
/// temporal period and `dt * omega_max <= 1`, where `omega_max^2 = 4 + max Psi''`
/// bounds the linearized chain frequencies.
pub fn max_stable_dt<T: Scalar, P: OnSitePotential<T>>(wave: &WaveTrain<T>, potential: &P) -> T {
    let sup = wave.profile.sup_norm();
    let (_, stiff) = potential.bounds_on(wave.xhat - sup, wave.xhat + sup);
    let stability = (T::lit(4.0) + stiff).sqrt().recip();
    let omega = wave.omega();
    if omega > T::zero() {
        stability.min(T::lit(0.05) / omega)
    } else {
        stability
    }
}

/// Evolves the lattice from the travelling-wave initial data
/// `y_j(0) = Y(k j)`, `v_j(0) = -omega Y'(k j)` and measures how far the
/// motion drifts from `Y(k j - omega t)`.
pub fn simulate_chain<T: Scalar, P: OnSitePotential<T>>(
    wave: &WaveTrain<T>,
    potential: &P,
    run: ChainRun<T>,
) -> Result<ChainReport<T>> {
    let j_count = run.particles;
    if j_count < 2 {
        return Err(Error::InvalidParameter(
            "the chain needs at least two particles".into(),
        ));
    }
    if !(wave.k.shift() * j_count).is_multiple_of(wave.k.grid_len()) {
        return Err(Error::InvalidParameter(format!(
            "k * J must be an integer for a periodic chain (k = {}, J = {j_count})",
            wave.k.k::<f64>()
        )));
    }
    if !(run.t_end >= T::zero()) || !run.t_end.is_finite() {
        return Err(Error::InvalidParameter("t_end must be non-negative".into()));
    }
    let limit = max_stable_dt(wave, potential);
    if !(run.dt > T::zero()) || run.dt > limit {
        return Err(Error::InvalidParameter(format!(
            "time step {} outside (0, {limit}]",
            run.dt
        )));
    }

    let k: T = wave.k.k();
    let omega = wave.omega();
    let exact = |j: usize, t: T| -> (T, T) {
        let (x, dx) = wave
            .profile
            .interpolate(k * T::from_usize_lossy(j) - omega * t);
        (wave.xhat + x, -omega * dx)
    };
    let (y, v): (Vec<T>, Vec<T>) = (0..j_count).map(|j| exact(j, T::zero())).unzip();
    let mut verlet = VelocityVerlet::new(ChainState::new(y, v)?, potential);
    let e0 = verlet.state().energy(potential);

    let steps = (run.t_end / run.dt).ceil().to_usize().unwrap_or(0);
    let dt = if steps > 0 {
        run.t_end / T::from_usize_lossy(steps)
    } else {
        T::zero()
    };
    let mut max_deviation = T::zero();
    let mut max_energy_error = T::zero();
    for _ in 0..steps {
        verlet.step(dt);
        let s = verlet.state();
        for (j, &yj) in s.y.iter().enumerate() {
            max_deviation = max_deviation.max((yj - exact(j, s.t).0).abs());
        }
        max_energy_error = max_energy_error.max((s.energy(potential) - e0).abs());
    }
    let energy_drift = if e0 != T::zero() {
        max_energy_error / e0.abs()
    } else {
        max_energy_error
    };
    Ok(ChainReport {
        max_deviation,
        energy_drift,
        steps,
    })
}

/// Closed phase-plane curve `phi -> (X(phi), V(phi))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace<T = f64> {
    pub points: Vec<(T, T)>,
    pub gamma: T,
    pub k: WaveNumber,
}

impl<T: Scalar> Trace<T> {
    /// Shoelace area enclosed by the curve.
    pub fn area(&self) -> T {
        let n = self.points.len();
        let twice: T = (0..n)
            .map(|i| {
                let (x0, y0) = self.points[i];
                let (x1, y1) = self.points[(i + 1) % n];
                x0 * y1 - x1 * y0
            })
            .sum();
        (twice * T::lit(0.5)).abs()
    }

    /// Largest violation of the reflection symmetry `(X, V)(-phi) = (X, -V)(phi)`.
    pub fn symmetry_defect(&self) -> T {
        let n = self.points.len();
        (0..n).fold(T::zero(), |m, j| {
            let (x, v) = self.points[j];
            let (xm, vm) = self.points[(n - j) % n];
            m.max((x - xm).abs()).max((v + vm).abs())
        })
    }

    fn diameter(&self) -> T {
        self.points
            .iter()
            .fold(T::zero(), |m, &(x, v)| m.max(x.abs()).max(v.abs()))
    }
}

pub fn build_trace<T: Scalar>(wave: &WaveTrain<T>) -> Trace<T> {
    let x = wave.profile.samples();
    let v = wave.velocity();
    Trace {
        points: x.iter().copied().zip(v.samples().iter().copied()).collect(),
        gamma: wave.gamma,
        k: wave.k,
    }
}

const GEOMETRY_EPS: f64 = 1e-12;

fn cross<T: Scalar>(o: (T, T), a: (T, T), b: (T, T)) -> T {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn segment_distance<T: Scalar>(p: (T, T), a: (T, T), b: (T, T)) -> T {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > T::zero() {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2)
            .max(T::zero())
            .min(T::one())
    } else {
        T::zero()
    };
    let (qx, qy) = (a.0 + t * dx - p.0, a.1 + t * dy - p.1);
    (qx * qx + qy * qy).sqrt()
}

fn strictly_inside<T: Scalar>(p: (T, T), polygon: &[(T, T)], eps: T) -> bool {
    let n = polygon.len();
    let mut inside = false;
    for i in 0..n {
        let a = polygon[i];
        let b = polygon[(i + 1) % n];
        if segment_distance(p, a, b) <= eps {
            return false;
        }
        if (a.1 > p.1) != (b.1 > p.1) {
            let x_cross = a.0 + (p.1 - a.1) * (b.0 - a.0) / (b.1 - a.1);
            if p.0 < x_cross {
                inside = !inside;
            }
        }
    }
    inside
}

fn segments_intersect<T: Scalar>(a: (T, T), b: (T, T), c: (T, T), d: (T, T), eps: T) -> bool {
    let (lo_x, hi_x) = (a.0.min(b.0), a.0.max(b.0));
    let (lo_y, hi_y) = (a.1.min(b.1), a.1.max(b.1));
    if c.0.max(d.0) < lo_x - eps
        || c.0.min(d.0) > hi_x + eps
        || c.1.max(d.1) < lo_y - eps
        || c.1.min(d.1) > hi_y + eps
    {
        return false;
    }
    let d1 = cross(a, b, c);
    let d2 = cross(a, b, d);
    let d3 = cross(c, d, a);
    let d4 = cross(c, d, b);
    let straddles = |u: T, w: T| (u <= eps && w >= -eps) || (u >= -eps && w <= eps);
    straddles(d1, d2) && straddles(d3, d4)
}

/// Whether the traces, ordered by `gamma`, form strictly nested closed
/// curves: every point of each trace lies strictly inside the next larger
/// one and no two adjacent curves intersect.
pub fn check_nesting<T: Scalar>(traces: &[Trace<T>]) -> Result<bool> {
    if traces.len() < 2 {
        return Err(Error::InvalidParameter(
            "nesting needs at least two traces".into(),
        ));
    }
    if traces.iter().any(|t| t.k != traces[0].k) {
        return Err(Error::InvalidParameter(
            "traces were computed for different wave numbers".into(),
        ));
    }
    if traces.iter().any(|t| t.points.len() < 3) {
        return Err(Error::InvalidParameter(
            "a trace needs at least three points".into(),
        ));
    }
    let mut order: Vec<&Trace<T>> = traces.iter().collect();
    order.sort_by(|a, b| {
        a.gamma
            .partial_cmp(&b.gamma)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    for pair in order.windows(2) {
        let (inner, outer) = (pair[0], pair[1]);
        let eps = T::lit(GEOMETRY_EPS) * (T::one() + outer.diameter());
        if !inner
            .points
            .iter()
            .all(|&p| strictly_inside(p, &outer.points, eps))
        {
            return Ok(false);
        }
        let (ni, no) = (inner.points.len(), outer.points.len());
        for i in 0..ni {
            let (a, b) = (inner.points[i], inner.points[(i + 1) % ni]);
            for j in 0..no {
                if segments_intersect(a, b, outer.points[j], outer.points[(j + 1) % no], eps) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
