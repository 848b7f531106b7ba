//! Zero location relative to the unit circle.
//!
//! [`roots_in_disk_count`] iterates the Cohn reduction
//! `t₁(z) = (conj(c_d) p(z) - c_0 p*(z)) / z`, which is valid while the leading
//! coefficient dominates the constant one. [`brute_force_roots`] is an
//! independent Durand–Kerner oracle.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::convolution::MobiusDilatation;
use crate::error::{Error, Result};

/// Coefficients at or below this modulus are trimmed from the top.
pub const TRIM_EPS: f64 = 1e-12;
/// Dominance margin for a Cohn step and the boundary band for Blaschke zeros.
pub const DOMINANCE_TOL: f64 = 1e-10;
/// Sweep budget for [`brute_force_roots`].
pub const MAX_SWEEPS: usize = 500;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPolynomial {
    coeffs: Vec<Complex64>,
}

impl ComplexPolynomial {
    /// Coefficients `c_0..c_d`; near-zero top coefficients are trimmed.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() <= TRIM_EPS) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        ComplexPolynomial { coeffs }
    }

    /// The monic polynomial `Π (z - r_j)`.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut c = vec![ONE];
        for r in roots {
            let mut next = vec![ZERO; c.len() + 1];
            for (k, ck) in c.iter().enumerate() {
                next[k + 1] += ck;
                next[k] -= ck * r;
            }
            c = next;
        }
        ComplexPolynomial { coeffs: c }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.degree()]
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        if self.degree() == 0 {
            return ComplexPolynomial::new(vec![ZERO]);
        }
        ComplexPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPolynomial::new(out)
    }

    fn scaled_to_unit_max(&self) -> Self {
        let m = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if m == 0.0 {
            return self.clone();
        }
        ComplexPolynomial {
            coeffs: self.coeffs.iter().map(|c| c / m).collect(),
        }
    }

    /// `p(ρz)`, whose zeros are those of `p` divided by `ρ`.
    fn dilated(&self, rho: f64) -> Self {
        let mut scale = 1.0;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let v = c * scale;
                scale *= rho;
                v
            })
            .collect();
        ComplexPolynomial { coeffs }
    }

    /// `p*(z) = z^d conj(p(1/conj(z)))`: coefficients reversed and conjugated.
    pub fn conjugate_reciprocal(&self) -> Self {
        ComplexPolynomial::new(self.coeffs.iter().rev().map(|c| c.conj()).collect())
    }
}

/// One Cohn step `t₁ = (conj(c_d) p - c_0 p*) / z`, of degree `d - 1`.
///
/// When `|c_d| > |c_0|`, `p` has exactly one more zero in `|z| < 1` than `t₁`.
pub fn cohn_reduce(p: &ComplexPolynomial) -> Result<ComplexPolynomial> {
    let d = p.degree();
    if d == 0 {
        return Err(Error::invalid("cannot reduce a constant polynomial"));
    }
    let c = p.coeffs();
    let (lead, c0) = (c[d], c[0]);
    if lead.norm() <= c0.norm() + DOMINANCE_TOL {
        return Err(Error::InconclusiveBoundary {
            leading: lead.norm(),
            constant: c0.norm(),
        });
    }
    let reduced = (0..d)
        .map(|k| lead.conj() * c[k + 1] - c0 * c[d - k - 1].conj())
        .collect();
    Ok(ComplexPolynomial::new(reduced))
}

/// Number of zeros in `|z| < 1`, counted with multiplicity.
///
/// When the constant coefficient dominates instead, the count is taken from
/// `p*`, whose zeros are the reflections of those of `p`. When neither
/// dominates, zeros are counted inside the radii `1 ± TIE_RADIUS_SHIFT`;
/// equal counts mean no zero lies near the circle and the count is returned.
pub fn roots_in_disk_count(p: &ComplexPolynomial) -> Result<usize> {
    count_inside(p, true)
}

/// Relative radius perturbation used to break a tie `|c_0| = |c_d|`.
pub const TIE_RADIUS_SHIFT: f64 = 1e-7;

fn count_inside(p: &ComplexPolynomial, allow_shift: bool) -> Result<usize> {
    let p = p.scaled_to_unit_max();
    let d = p.degree();
    if d == 0 {
        if p.coeffs[0] == ZERO {
            return Err(Error::invalid(
                "the zero polynomial has no finite root count",
            ));
        }
        return Ok(0);
    }
    let lead = p.leading().norm();
    let c0 = p.coeffs[0].norm();
    if lead > c0 + DOMINANCE_TOL {
        Ok(1 + count_inside(&cohn_reduce(&p)?, allow_shift)?)
    } else if c0 > lead + DOMINANCE_TOL {
        Ok(d - count_inside(&p.conjugate_reciprocal(), allow_shift)?)
    } else if allow_shift {
        let outer = count_inside(&p.dilated(1.0 + TIE_RADIUS_SHIFT), false);
        let inner = count_inside(&p.dilated(1.0 - TIE_RADIUS_SHIFT), false);
        match (outer, inner) {
            (Ok(o), Ok(i)) if o == i => Ok(o),
            _ => Err(Error::InconclusiveBoundary {
                leading: lead,
                constant: c0,
            }),
        }
    } else {
        Err(Error::InconclusiveBoundary {
            leading: lead,
            constant: c0,
        })
    }
}

/// All roots by Durand–Kerner iteration from points on a circle, then Newton polishing.
pub fn brute_force_roots(p: &ComplexPolynomial) -> Result<Vec<Complex64>> {
    let d = p.degree();
    if d == 0 {
        return Err(Error::invalid("root finding needs degree >= 1"));
    }
    let scale = p.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let lead = p.leading();
    let monic: Vec<Complex64> = p.coeffs.iter().map(|c| c / lead).collect();
    let monic = ComplexPolynomial { coeffs: monic };
    // Cauchy bound on the root moduli
    let radius = 1.0
        + monic.coeffs[..d]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
    let mut roots: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius * 0.5 + 0.1, TAU * k as f64 / d as f64 + 0.4))
        .collect();

    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        let mut max_step: f64 = 0.0;
        for i in 0..d {
            let zi = roots[i];
            let mut denom = ONE;
            for (j, zj) in roots.iter().enumerate() {
                if j != i {
                    denom *= zi - zj;
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(1e-12, 1e-12);
            }
            let step = monic.evaluate(zi) / denom;
            roots[i] = zi - step;
            max_step = max_step.max(step.norm() / (1.0 + zi.norm()));
        }
        if max_step < 1e-15 {
            break;
        }
    }

    let dp = monic.derivative();
    for r in roots.iter_mut() {
        for _ in 0..5 {
            let dv = dp.evaluate(*r);
            if dv.norm() == 0.0 {
                break;
            }
            let next = *r - monic.evaluate(*r) / dv;
            if p.evaluate(next).norm() <= p.evaluate(*r).norm() {
                *r = next;
            } else {
                break;
            }
        }
    }

    let residual = roots
        .iter()
        .map(|r| p.evaluate(*r).norm())
        .fold(0.0, f64::max);
    if residual >= 1e-8 * scale {
        return Err(Error::NoConvergence { sweeps, residual });
    }
    Ok(roots)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BlaschkeClass {
    BoundedByOne,
    Unbounded,
    Boundary,
}

/// Classifies `unimodular · z^k · Π (z+A_j)/(1+Ā_j z)` by the moduli of its `A_j`.
pub fn classify_blaschke(m: &MobiusDilatation) -> BlaschkeClass {
    let max = m.zeros.iter().map(|a| a.norm()).fold(0.0, f64::max);
    if max > 1.0 + DOMINANCE_TOL {
        BlaschkeClass::Unbounded
    } else if max >= 1.0 - DOMINANCE_TOL {
        BlaschkeClass::Boundary
    } else {
        BlaschkeClass::BoundedByOne
    }
}
