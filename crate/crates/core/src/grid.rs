//! Uniform periodic grid on the unit cell `[-1/2, 1/2)` and the discrete
//! calculus acting on sampled profiles.
//!
//! Node `j` sits at `phi_j = -1/2 + j/N`. Since `N` is even, `phi = 0` is the
//! node `N/2` and the reflection `phi -> -phi` is the exact index pairing
//! `j <-> (N - j) mod N`. Shift-type operators (`shift`, `laplacian`, `nabla`)
//! are pure index arithmetic; derivatives use centred differences and
//! integrals the periodic rectangle/trapezoid rule.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Uniform discretization of the unit cell with `N` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PeriodicGrid {
    n: usize,
}

impl PeriodicGrid {
    pub const MIN_NODES: usize = 8;

    pub fn new(n: usize) -> Result<Self> {
        if n < Self::MIN_NODES || !n.is_multiple_of(2) {
            return Err(Error::GridSize(n));
        }
        Ok(Self { n })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Node spacing `h = 1/N`.
    #[inline]
    pub fn spacing<T: Scalar>(&self) -> T {
        T::one() / T::from_usize_lossy(self.n)
    }

    /// Phase of node `j`.
    #[inline]
    pub fn node<T: Scalar>(&self, j: usize) -> T {
        (T::from_usize_lossy(j) - T::from_usize_lossy(self.n / 2)) / T::from_usize_lossy(self.n)
    }

    pub fn nodes<T: Scalar>(&self) -> Vec<T> {
        (0..self.n).map(|j| self.node(j)).collect()
    }

    /// Index of the node at `phi = 0`.
    #[inline]
    pub fn origin(&self) -> usize {
        self.n / 2
    }

    /// Index of the node at `-phi_j`.
    #[inline]
    pub fn mirror(&self, j: usize) -> usize {
        (self.n - j) % self.n
    }

    #[inline]
    fn offset(&self, j: usize, s: isize) -> usize {
        (j as isize + s).rem_euclid(self.n as isize) as usize
    }
}

/// Wave number `k = p/N`, folded into `[0, 1/2]`.
///
/// The discrete Laplacian only depends on `|k|`, so negative wave numbers are
/// stored by their absolute value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WaveNumber {
    p: usize,
    n: usize,
}

impl WaveNumber {
    /// Relative slack when checking that `k * N` is an integer.
    const ALIGN_TOL: f64 = 1e-9;

    pub fn new(k: f64, grid: PeriodicGrid) -> Result<Self> {
        if !k.is_finite() || k.abs() > 0.5 + Self::ALIGN_TOL {
            return Err(Error::WaveNumberRange { k });
        }
        let n = grid.len();
        let scaled = k.abs() * n as f64;
        let p = scaled.round();
        if (scaled - p).abs() > Self::ALIGN_TOL * (1.0 + scaled) {
            return Err(Error::Misaligned { k, n });
        }
        Ok(Self { p: p as usize, n })
    }

    pub fn from_shift(p: usize, grid: PeriodicGrid) -> Result<Self> {
        let n = grid.len();
        if p > n / 2 {
            return Err(Error::WaveNumberRange {
                k: p as f64 / n as f64,
            });
        }
        Ok(Self { p, n })
    }

    #[inline]
    pub fn k<T: Scalar>(&self) -> T {
        T::from_usize_lossy(self.p) / T::from_usize_lossy(self.n)
    }

    /// Shift count `p = k N`.
    #[inline]
    pub fn shift(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn grid_len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.p == 0
    }

    /// Whether `k/2` is a grid multiple, i.e. `nabla` and `averaging` are available.
    #[inline]
    pub fn half_aligned(&self) -> bool {
        self.p.is_multiple_of(2)
    }

    fn half_shift(&self) -> Result<usize> {
        if self.half_aligned() {
            Ok(self.p / 2)
        } else {
            Err(Error::HalfShiftMisaligned { p: self.p })
        }
    }
}

/// `L2`, sup and `H1`-seminorm of a profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms<T> {
    pub l2: T,
    pub sup: T,
    pub h1_semi: T,
}

/// Samples of a 1-periodic function on a [`PeriodicGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Profile<T = f64> {
    grid: PeriodicGrid,
    samples: Vec<T>,
}

impl<T: Scalar> Profile<T> {
    pub fn new(grid: PeriodicGrid, samples: Vec<T>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: samples.len(),
            });
        }
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { grid, samples })
    }

    /// Samples `f(phi_j)` at every node.
    pub fn from_fn(grid: PeriodicGrid, f: impl Fn(T) -> T) -> Self {
        let samples = (0..grid.len()).map(|j| f(grid.node(j))).collect();
        Self { grid, samples }
    }

    pub fn constant(grid: PeriodicGrid, c: T) -> Self {
        Self {
            grid,
            samples: vec![c; grid.len()],
        }
    }

    pub fn zeros(grid: PeriodicGrid) -> Self {
        Self::constant(grid, T::zero())
    }

    /// `a cos(2 pi phi)`.
    pub fn cosine(grid: PeriodicGrid, amplitude: T) -> Self {
        let two_pi = T::TAU();
        Self::from_fn(grid, |phi| amplitude * (two_pi * phi).cos())
    }

    #[inline]
    pub fn grid(&self) -> PeriodicGrid {
        self.grid
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    #[inline]
    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<T> {
        self.samples
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            grid: self.grid,
            samples: self.samples.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        assert_eq!(self.grid, other.grid, "profiles live on different grids");
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self {
            grid: self.grid,
            samples,
        }
    }

    fn indexed(&self, f: impl Fn(usize) -> T) -> Self {
        Self {
            grid: self.grid,
            samples: (0..self.len()).map(f).collect(),
        }
    }

    /// `result[j] = X[(j + s) mod N]`.
    pub fn shift(&self, s: isize) -> Self {
        let g = self.grid;
        self.indexed(|j| self.samples[g.offset(j, s)])
    }

    /// `X(phi + k) + X(phi - k) - 2 X(phi)`.
    pub fn laplacian(&self, k: WaveNumber) -> Self {
        self.check_wave_number(k);
        let p = k.shift() as isize;
        let g = self.grid;
        let two = T::lit(2.0);
        self.indexed(|j| {
            self.samples[g.offset(j, p)] + self.samples[g.offset(j, -p)] - two * self.samples[j]
        })
    }

    /// `X(phi + k/2) - X(phi - k/2)`; requires an even shift count.
    pub fn nabla(&self, k: WaveNumber) -> Result<Self> {
        self.check_wave_number(k);
        let q = k.half_shift()? as isize;
        let g = self.grid;
        Ok(self.indexed(|j| self.samples[g.offset(j, q)] - self.samples[g.offset(j, -q)]))
    }

    /// Trapezoid approximation of the window integral over `[phi - k/2, phi + k/2]`.
    pub fn averaging(&self, k: WaveNumber) -> Result<Self> {
        self.check_wave_number(k);
        let q = k.half_shift()? as isize;
        let g = self.grid;
        let h: T = g.spacing();
        let half = T::lit(0.5);
        Ok(self.indexed(|j| {
            if q == 0 {
                return T::zero();
            }
            let ends = half * (self.samples[g.offset(j, -q)] + self.samples[g.offset(j, q)]);
            let inner: T = (-q + 1..q).map(|i| self.samples[g.offset(j, i)]).sum();
            h * (ends + inner)
        }))
    }

    /// Centred first difference `(X[j+1] - X[j-1]) / 2h`.
    pub fn derivative(&self) -> Self {
        let g = self.grid;
        let scale = T::from_usize_lossy(g.len()) * T::lit(0.5);
        self.indexed(|j| (self.samples[g.offset(j, 1)] - self.samples[g.offset(j, -1)]) * scale)
    }

    /// Compact second difference `(X[j+1] - 2 X[j] + X[j-1]) / h^2`.
    pub fn second_difference(&self) -> Self {
        let g = self.grid;
        let n = T::from_usize_lossy(g.len());
        let inv_h2 = n * n;
        let two = T::lit(2.0);
        self.indexed(|j| {
            (self.samples[g.offset(j, 1)] - two * self.samples[j] + self.samples[g.offset(j, -1)])
                * inv_h2
        })
    }

    /// Riemann sum `h * sum_j X[j]`.
    pub fn integrate(&self) -> T {
        self.samples.iter().copied().sum::<T>() * self.grid.spacing()
    }

    /// Mean over the unit cell (equal to [`Profile::integrate`]).
    pub fn mean(&self) -> T {
        self.integrate()
    }

    /// `integrate(X * Y)`.
    pub fn inner(&self, other: &Self) -> T {
        assert_eq!(self.grid, other.grid, "profiles live on different grids");
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(&a, &b)| a * b)
            .sum::<T>()
            * self.grid.spacing()
    }

    /// Subtracts the Riemann mean.
    pub fn mean_projected(&self) -> Self {
        let m = self.mean();
        self.map(|x| x - m)
    }

    /// Mean-zero periodic antiderivative: trapezoid cumulative integral from
    /// `phi = 0`, projected to zero mean.
    ///
    /// Integration runs outward from the origin in both directions so that
    /// odd inputs give even outputs (and vice versa) sample by sample.
    pub fn cumulative(&self) -> Result<Self> {
        let mean = self.mean();
        let slack = T::lit(1e-10).max(T::lit(1e3) * T::epsilon());
        if mean.abs() > slack * (T::one() + self.sup_norm()) {
            return Err(Error::NotMeanZero {
                mean: mean.to_f64().unwrap_or(f64::NAN),
            });
        }
        let x: Vec<T> = self.samples.iter().map(|&v| v - mean).collect();
        let n = self.len();
        let o = self.grid.origin();
        let half_h = self.grid.spacing::<T>() * T::lit(0.5);
        let mut c = vec![T::zero(); n];
        // forward over (0, 1/2], ending on the wrapped node phi = -1/2
        let mut acc = T::zero();
        for m in 1..=n / 2 {
            let (a, b) = ((o + m - 1) % n, (o + m) % n);
            acc = acc + half_h * (x[a] + x[b]);
            c[b] = acc;
        }
        // backward over (-1/2, 0)
        let mut acc = T::zero();
        for m in 1..n / 2 {
            let (a, b) = (o - m + 1, o - m);
            acc = acc - half_h * (x[a] + x[b]);
            c[b] = acc;
        }
        Ok(Self {
            grid: self.grid,
            samples: c,
        }
        .mean_projected())
    }

    pub fn sup_norm(&self) -> T {
        self.samples.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
    }

    pub fn l2_norm(&self) -> T {
        self.inner(self).sqrt()
    }

    pub fn norms(&self) -> Norms<T> {
        Norms {
            l2: self.l2_norm(),
            sup: self.sup_norm(),
            h1_semi: self.derivative().l2_norm(),
        }
    }

    /// Default slack `1e-8 (1 + sup)` for [`Profile::is_unimodal_even`].
    pub fn default_shape_tol(&self) -> T {
        T::lit(1e-8) * (T::one() + self.sup_norm())
    }

    /// Largest violation of `X[j] = X[(N-j) mod N]`.
    pub fn evenness_defect(&self) -> T {
        let g = self.grid;
        (0..self.len()).fold(T::zero(), |m, j| {
            m.max((self.samples[j] - self.samples[g.mirror(j)]).abs())
        })
    }

    /// Largest violation of `X[j] = -X[(N-j) mod N]`.
    pub fn oddness_defect(&self) -> T {
        let g = self.grid;
        (0..self.len()).fold(T::zero(), |m, j| {
            m.max((self.samples[j] + self.samples[g.mirror(j)]).abs())
        })
    }

    /// Membership in the cone of even profiles that are non-increasing on
    /// `[0, 1/2]`, up to slack `tol`.
    pub fn is_unimodal_even(&self, tol: T) -> bool {
        if self.evenness_defect() > tol {
            return false;
        }
        let n = self.len();
        // nodes phi = 0, h, ..., 1/2 - h, then phi = 1/2 (wrapped index 0)
        let path = (self.grid.origin()..n).chain(std::iter::once(0));
        let mut prev: Option<T> = None;
        for j in path {
            let v = self.samples[j];
            if let Some(p) = prev {
                if v > p + tol {
                    return false;
                }
            }
            prev = Some(v);
        }
        true
    }

    /// Cone `C`: `-X''` (compact second difference) is even and unimodal.
    pub fn in_curvature_cone(&self) -> bool {
        let curvature = -&self.second_difference();
        let tol = curvature.default_shape_tol();
        curvature.is_unimodal_even(tol)
    }

    /// Periodic four-point (cubic Lagrange) interpolation at an arbitrary
    /// phase. Returns the value and its derivative with respect to `phi`.
    pub fn interpolate(&self, phi: T) -> (T, T) {
        let n = self.len();
        let nf = T::from_usize_lossy(n);
        // position in index units, wrapped into [0, N)
        let mut s = (phi + T::lit(0.5)) * nf;
        s = s - (s / nf).floor() * nf;
        let base = s.floor();
        let t = s - base;
        let i1 = base.to_usize().unwrap_or(0) % n;
        let g = self.grid;
        let y0 = self.samples[g.offset(i1, -1)];
        let y1 = self.samples[i1];
        let y2 = self.samples[g.offset(i1, 1)];
        let y3 = self.samples[g.offset(i1, 2)];
        let one = T::one();
        let two = T::lit(2.0);
        let six = T::lit(6.0);
        // Lagrange basis on nodes -1, 0, 1, 2
        let l0 = -t * (t - one) * (t - two) / six;
        let l1 = (t + one) * (t - one) * (t - two) / two;
        let l2 = -(t + one) * t * (t - two) / two;
        let l3 = (t + one) * t * (t - one) / six;
        let value = l0 * y0 + l1 * y1 + l2 * y2 + l3 * y3;
        let d0 = -(T::lit(3.0) * t * t - T::lit(6.0) * t + two) / six;
        let d1 = (T::lit(3.0) * t * t - T::lit(4.0) * t - one) / two;
        let d2 = -(T::lit(3.0) * t * t - T::lit(2.0) * t - two) / two;
        let d3 = (T::lit(3.0) * t * t - one) / six;
        let slope = (d0 * y0 + d1 * y1 + d2 * y2 + d3 * y3) * nf;
        (value, slope)
    }

    fn check_wave_number(&self, k: WaveNumber) {
        assert_eq!(
            k.grid_len(),
            self.len(),
            "wave number built for a different grid"
        );
    }
}

impl<T: Scalar> Add for &Profile<T> {
    type Output = Profile<T>;
    fn add(self, rhs: Self) -> Profile<T> {
        self.zip_map(rhs, |a, b| a + b)
    }
}

impl<T: Scalar> Sub for &Profile<T> {
    type Output = Profile<T>;
    fn sub(self, rhs: Self) -> Profile<T> {
        self.zip_map(rhs, |a, b| a - b)
    }
}

impl<T: Scalar> Mul<T> for &Profile<T> {
    type Output = Profile<T>;
    fn mul(self, rhs: T) -> Profile<T> {
        self.map(|a| a * rhs)
    }
}

impl<T: Scalar> Neg for &Profile<T> {
    type Output = Profile<T>;
    fn neg(self) -> Profile<T> {
        self.map(|a| -a)
    }
}
