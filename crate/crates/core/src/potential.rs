//! Convex on-site potentials `Psi` with `Psi(0) = Psi'(0) = 0`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A twice differentiable, uniformly convex on-site potential normalized to
/// `Psi(0) = Psi'(0) = 0`.
pub trait OnSitePotential<T: Scalar>: Send + Sync {
    fn psi(&self, x: T) -> T;
    fn dpsi(&self, x: T) -> T;
    fn ddpsi(&self, x: T) -> T;

    /// Lower and upper bounds `(m, M)` of `Psi''` on `[lo, hi]`, estimated by
    /// dense sampling plus the endpoints (and `x = 0` when it lies inside).
    fn bounds_on(&self, lo: T, hi: T) -> (T, T) {
        const SAMPLES: usize = 1024;
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let mut m = self.ddpsi(lo).min(self.ddpsi(hi));
        let mut big_m = self.ddpsi(lo).max(self.ddpsi(hi));
        if lo < T::zero() && hi > T::zero() {
            let v = self.ddpsi(T::zero());
            m = m.min(v);
            big_m = big_m.max(v);
        }
        let step = (hi - lo) / T::from_usize_lossy(SAMPLES - 1);
        for i in 1..SAMPLES - 1 {
            let v = self.ddpsi(lo + step * T::from_usize_lossy(i));
            m = m.min(v);
            big_m = big_m.max(v);
        }
        (m, big_m)
    }
}

/// The built-in potentials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Potential<T = f64> {
    /// `Psi(x) = c x^2 / 2`.
    Harmonic { c: T },
    /// `Psi''(x) = exp(-x)`.
    ExpDecay,
    /// `Psi''(x) = 1 + x^2`.
    Quartic,
    /// `Psi''(x) = exp(-max(x, 0)^2)`.
    Saturating,
}

impl<T: Scalar> Potential<T> {
    pub fn harmonic(c: T) -> Result<Self> {
        if !(c > T::zero()) || !c.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "harmonic stiffness must be positive, got c = {c}"
            )));
        }
        Ok(Self::Harmonic { c })
    }

    /// Looks up a built-in by name; `c` is only used (and required) for `harmonic`.
    pub fn builtin(name: &str, c: Option<T>) -> Result<Self> {
        match name {
            "harmonic" => Self::harmonic(c.unwrap_or_else(T::one)),
            "exp_decay" => Ok(Self::ExpDecay),
            "quartic" => Ok(Self::Quartic),
            "saturating" => Ok(Self::Saturating),
            other => Err(Error::UnknownPotential(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Harmonic { .. } => "harmonic",
            Self::ExpDecay => "exp_decay",
            Self::Quartic => "quartic",
            Self::Saturating => "saturating",
        }
    }

    /// Parses `harmonic:c=<value>`, `exp_decay`, `quartic` or `saturating`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (name, params) = match spec.split_once(':') {
            Some((n, p)) => (n.trim(), Some(p.trim())),
            None => (spec, None),
        };
        match (name, params) {
            ("harmonic", None) => Self::harmonic(T::one()),
            ("harmonic", Some(p)) => {
                let value = p
                    .strip_prefix("c=")
                    .and_then(|v| v.trim().parse::<f64>().ok())
                    .ok_or_else(|| Error::UnknownPotential(spec.to_string()))?;
                Self::harmonic(T::lit(value))
            }
            (_, Some(_)) => Err(Error::UnknownPotential(spec.to_string())),
            (other, None) => Self::builtin(other, None),
        }
    }
}

impl<T: Scalar> FromStr for Potential<T> {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl<T: Scalar> fmt::Display for Potential<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Harmonic { c } => write!(f, "harmonic:c={c}"),
            other => f.write_str(other.name()),
        }
    }
}

impl<T: Scalar> OnSitePotential<T> for Potential<T> {
    fn psi(&self, x: T) -> T {
        let half = T::lit(0.5);
        match *self {
            Self::Harmonic { c } => half * c * x * x,
            // x - 1 + e^{-x}, written to avoid cancellation near 0
            Self::ExpDecay => (-x).exp_m1() + x,
            Self::Quartic => half * x * x + x.powi(4) / T::lit(12.0),
            Self::Saturating => {
                if x <= T::zero() {
                    half * x * x
                } else {
                    half * T::PI().sqrt() * x * x.erf() + half * (-x * x).exp_m1()
                }
            }
        }
    }

    fn dpsi(&self, x: T) -> T {
        match *self {
            Self::Harmonic { c } => c * x,
            Self::ExpDecay => -(-x).exp_m1(),
            Self::Quartic => x + x.powi(3) / T::lit(3.0),
            Self::Saturating => {
                if x <= T::zero() {
                    x
                } else {
                    T::lit(0.5) * T::PI().sqrt() * x.erf()
                }
            }
        }
    }

    fn ddpsi(&self, x: T) -> T {
        match *self {
            Self::Harmonic { c } => c,
            Self::ExpDecay => (-x).exp(),
            Self::Quartic => T::one() + x * x,
            Self::Saturating => {
                let y = x.max(T::zero());
                (-y * y).exp()
            }
        }
    }
}

impl<T: Scalar, P: OnSitePotential<T> + ?Sized> OnSitePotential<T> for &P {
    fn psi(&self, x: T) -> T {
        (**self).psi(x)
    }
    fn dpsi(&self, x: T) -> T {
        (**self).dpsi(x)
    }
    fn ddpsi(&self, x: T) -> T {
        (**self).ddpsi(x)
    }
    fn bounds_on(&self, lo: T, hi: T) -> (T, T) {
        (**self).bounds_on(lo, hi)
    }
}
