//! Potential and kinetic functionals of a profile, the energy gradient and
//! the inner minimization over the constant shift `x`.
//!
//! The coupling energy `1/2 |nabla_k Y|^2` is evaluated as
//! `-1/2 <laplacian_k Y, Y>`, which is available for every grid-aligned `k`
//! (odd shift counts included).

use crate::error::{Error, Result};
use crate::grid::{Profile, WaveNumber};
use crate::potential::OnSitePotential;
use crate::scalar::Scalar;

/// Default absolute tolerance on `h * sum_j Psi'(x + X[j])`.
pub const DEFAULT_XHAT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown<T = f64> {
    /// `1/2 |nabla_k Y|^2`.
    pub coupling: T,
    /// `integral of Psi(Y)`.
    pub onsite: T,
    /// `coupling + onsite`.
    pub total: T,
    /// `Gamma(Y) = 1/2 integral of Y'^2`.
    pub kinetic_factor: T,
}

impl<T: Scalar> EnergyBreakdown<T> {
    /// Lagrangian `omega^2 Gamma - P_k`.
    pub fn lagrangian(&self, omega2: T) -> T {
        omega2 * self.kinetic_factor - self.total
    }
}

/// `Gamma(X) = 1/2 |X'|^2` with the centred difference.
pub fn kinetic_gamma<T: Scalar>(x: &Profile<T>) -> T {
    let d = x.derivative();
    T::lit(0.5) * d.inner(&d)
}

fn coupling<T: Scalar>(x: &Profile<T>, k: WaveNumber) -> T {
    -T::lit(0.5) * x.laplacian(k).inner(x)
}

/// Coupling energy through `nabla_k` directly; only defined for even shift counts.
pub fn coupling_direct<T: Scalar>(x: &Profile<T>, k: WaveNumber) -> Result<T> {
    let d = x.nabla(k)?;
    Ok(T::lit(0.5) * d.inner(&d))
}

/// `P_k(x + X)` split into coupling and on-site parts.
pub fn potential_energy<T: Scalar, P: OnSitePotential<T>>(
    shift: T,
    x: &Profile<T>,
    k: WaveNumber,
    potential: &P,
) -> EnergyBreakdown<T> {
    let coupling = coupling(x, k);
    let onsite = x.map(|v| potential.psi(shift + v)).integrate();
    EnergyBreakdown {
        coupling,
        onsite,
        total: coupling + onsite,
        kinetic_factor: kinetic_gamma(x),
    }
}

/// `Z = -laplacian_k X + Psi'(x + X)`.
pub fn gradient<T: Scalar, P: OnSitePotential<T>>(
    shift: T,
    x: &Profile<T>,
    k: WaveNumber,
    potential: &P,
) -> Profile<T> {
    let lap = x.laplacian(k);
    x.zip_map(&lap, |v, l| potential.dpsi(shift + v) - l)
}

/// Unique minimizer `x_hat` of `x -> integral of Psi(x + X)`, i.e. the root of
/// `h * sum_j Psi'(x + X[j])`.
///
/// Safeguarded Newton: a sign-change bracket is maintained and any Newton
/// step leaving it is replaced by bisection.
pub fn solve_xhat<T: Scalar, P: OnSitePotential<T>>(
    x: &Profile<T>,
    potential: &P,
    tol: T,
) -> Result<T> {
    if !(tol > T::zero()) {
        return Err(Error::InvalidParameter(
            "x_hat tolerance must be positive".into(),
        ));
    }
    if x.samples().iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let h: T = x.grid().spacing();
    let condition = |s: T| -> (T, T) {
        x.samples()
            .iter()
            .fold((T::zero(), T::zero()), |(f, df), &v| {
                (f + potential.dpsi(s + v), df + potential.ddpsi(s + v))
            })
    };
    let value = |s: T| {
        let (f, df) = condition(s);
        (f * h, df * h)
    };

    let radius = x.sup_norm() + T::one();
    let (mut lo, mut hi) = (-radius, radius);
    let mut f_lo = value(lo).0;
    let mut f_hi = value(hi).0;
    let mut widen = 0;
    while f_lo > T::zero() {
        lo = lo - (hi - lo);
        f_lo = value(lo).0;
        widen += 1;
        if widen > 200 || !f_lo.is_finite() {
            return Err(Error::Bracket("x_hat from below"));
        }
    }
    while f_hi < T::zero() {
        hi = hi + (hi - lo);
        f_hi = value(hi).0;
        widen += 1;
        if widen > 200 || !f_hi.is_finite() {
            return Err(Error::Bracket("x_hat from above"));
        }
    }
    if f_lo == T::zero() {
        return Ok(lo);
    }
    if f_hi == T::zero() {
        return Ok(hi);
    }

    let two = T::lit(2.0);
    let mut s = T::zero().max(lo).min(hi);
    for _ in 0..500 {
        let (f, df) = value(s);
        if f.abs() <= tol {
            return Ok(s);
        }
        if f < T::zero() {
            lo = s;
        } else {
            hi = s;
        }
        let newton = s - f / df;
        let next = if df > T::zero() && newton > lo && newton < hi {
            newton
        } else {
            (lo + hi) / two
        };
        if next == s || hi - lo <= T::epsilon() * (T::one() + s.abs()) {
            return Ok(next);
        }
        s = next;
    }
    Ok(s)
}

/// Reduced energy `P_k(x_hat(X) + X)` together with `x_hat`.
pub fn reduced_energy<T: Scalar, P: OnSitePotential<T>>(
    x: &Profile<T>,
    k: WaveNumber,
    potential: &P,
    tol: T,
) -> Result<(T, T)> {
    let shift = solve_xhat(x, potential, tol)?;
    Ok((potential_energy(shift, x, k, potential).total, shift))
}
