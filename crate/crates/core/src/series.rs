//! Truncated power series with complex coefficients.
//!
//! A [`PowerSeries`] of order `N` holds the coefficients `c_0..=c_N`. Binary
//! operations on series of different orders truncate to the smaller one.
//! Products and reciprocals skip trailing zero coefficients, so series of
//! rational functions built from low-degree polynomials stay linear in `N`.

use std::f64::consts::TAU;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 128;

/// Threshold below which a constant term is treated as zero by [`PowerSeries::reciprocal`].
pub const RECIPROCAL_EPS: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    /// Builds a series of order `coeffs.len() - 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a power series needs at least c_0");
        PowerSeries { coeffs }
    }

    /// Builds a series of the given order from polynomial coefficients,
    /// padding with zeros or truncating as needed.
    pub fn from_poly(poly: &[Complex64], order: usize) -> Self {
        let mut coeffs = vec![ZERO; order + 1];
        for (dst, src) in coeffs.iter_mut().zip(poly) {
            *dst = *src;
        }
        PowerSeries { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Complex64) -> Self {
        PowerSeries {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn zero(order: usize) -> Self {
        PowerSeries {
            coeffs: vec![ZERO; order + 1],
        }
    }

    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(ONE, order)
    }

    /// The series `z`.
    pub fn z(order: usize) -> Self {
        Self::monomial(ONE, 1, order)
    }

    /// `c·z^k`, truncated.
    pub fn monomial(c: Complex64, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// `Σ_{n≥start} (q)^(n-start) z^n`, i.e. `z^start / (1 - q z)`.
    pub fn geometric(q: Complex64, start: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        let mut p = ONE;
        for c in s.coeffs.iter_mut().skip(start) {
            *c = p;
            p *= q;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or(ZERO)
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Index of the last nonzero coefficient (0 for the zero series).
    fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| *c != ZERO).unwrap_or(0)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_poly(&self.coeffs[..=order.min(self.order())], order)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_fn(n, |k| self.coeffs[k] + other.coeffs[k])
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_fn(n, |k| self.coeffs[k] - other.coeffs[k])
    }

    pub fn scale(&self, c: Complex64) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Cauchy product, truncated to the smaller order.
    pub fn multiply(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let ds = self.degree().min(n);
        let dt = other.degree().min(n);
        let mut out = vec![ZERO; n + 1];
        for i in 0..=ds {
            let si = self.coeffs[i];
            if si == ZERO {
                continue;
            }
            for j in 0..=dt.min(n - i) {
                out[i + j] += si * other.coeffs[j];
            }
        }
        PowerSeries { coeffs: out }
    }

    /// Multiplicative inverse via the coefficient recurrence
    /// `b_n = -(1/c_0) Σ_{k=1}^{n} c_k b_{n-k}`.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = self.coeffs[0];
        if c0.norm() <= RECIPROCAL_EPS {
            return Err(Error::NearZeroConstantTerm { modulus: c0.norm() });
        }
        let n = self.order();
        let d = self.degree();
        let inv0 = c0.inv();
        let mut b = vec![ZERO; n + 1];
        b[0] = inv0;
        for m in 1..=n {
            let mut acc = ZERO;
            for k in 1..=m.min(d) {
                acc += self.coeffs[k] * b[m - k];
            }
            b[m] = -acc * inv0;
        }
        Ok(PowerSeries { coeffs: b })
    }

    /// Quotient `self / other` by long division; the order is the smaller of the two.
    pub fn divide(&self, other: &Self) -> Result<Self> {
        let c0 = other.coeffs[0];
        if c0.norm() <= RECIPROCAL_EPS {
            return Err(Error::NearZeroConstantTerm { modulus: c0.norm() });
        }
        let n = self.order().min(other.order());
        let d = other.degree().min(n);
        let inv0 = c0.inv();
        let mut q = vec![ZERO; n + 1];
        for m in 0..=n {
            let mut acc = self.coeffs[m];
            for k in 1..=m.min(d) {
                acc -= other.coeffs[k] * q[m - k];
            }
            q[m] = acc * inv0;
        }
        Ok(PowerSeries { coeffs: q })
    }

    /// Termwise derivative; the order drops by one (order 0 stays order 0).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self::from_fn(self.order() - 1, |k| self.coeffs[k + 1] * (k as f64 + 1.0))
    }

    /// Termwise antiderivative with zero constant term; the order rises by one.
    pub fn antiderivative(&self) -> Self {
        Self::from_fn(self.order() + 1, |k| {
            if k == 0 {
                ZERO
            } else {
                self.coeffs[k - 1] / k as f64
            }
        })
    }

    /// Coefficientwise (Hadamard) product.
    pub fn hadamard(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_fn(n, |k| self.coeffs[k] * other.coeffs[k])
    }

    /// The series of `z ↦ s(e^{iφ} z)`.
    pub fn rotate(&self, phi: f64) -> Self {
        let phi = phi.rem_euclid(TAU);
        Self::from_fn(self.order(), |k| {
            self.coeffs[k] * Complex64::from_polar(1.0, (k as f64 * phi).rem_euclid(TAU))
        })
    }

    /// Multiplies by `z^k`, keeping the order.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        Self::from_fn(n, |m| if m >= k { self.coeffs[m - k] } else { ZERO })
    }

    /// Horner evaluation.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
    }

    /// Values at the `m` points `r·e^{2πik/m}`, `k = 0..m`.
    ///
    /// The coefficients are folded modulo `m` and transformed with one FFT, so
    /// the cost is `O(N + m log m)` instead of `O(N m)` for pointwise Horner.
    pub fn evaluate_on_circle(&self, r: f64, m: usize) -> Vec<Complex64> {
        assert!(m > 0, "need at least one sample");
        let mut bins = vec![ZERO; m];
        let mut rn = 1.0;
        for (n, c) in self.coeffs.iter().enumerate() {
            bins[n % m] += c * rn;
            rn *= r;
        }
        let fft = FftPlanner::<f64>::new().plan_fft_inverse(m);
        fft.process(&mut bins);
        bins
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: Self) -> PowerSeries {
        PowerSeries::add(self, rhs)
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: Self) -> PowerSeries {
        PowerSeries::sub(self, rhs)
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: Self) -> PowerSeries {
        self.multiply(rhs)
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        self.scale(-ONE)
    }
}
