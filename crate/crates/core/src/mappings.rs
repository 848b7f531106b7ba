//! Named harmonic mappings `f = h + conj(g)` of the unit disk.
//!
//! Every constructor returns series with `h(0) = g(0) = 0` and `h'(0) = 1`.
//! Shear constructors solve for `h'` from an analytic combination of `h` and
//! `g` plus a prescribed dilatation `ω = g'/h'`, then integrate.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::CheckReport;
use crate::series::PowerSeries;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Tolerance for checking that a dilatation is compatible with `h'(0) = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-12;

fn cis(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t)
}

fn reduce_angle(t: f64) -> f64 {
    t.rem_euclid(TAU)
}

fn check_a(a: f64) -> Result<()> {
    if a.is_finite() && a.abs() < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("a = {a} must lie in (-1, 1)")))
    }
}

fn check_finite(name: &str, t: f64) -> Result<()> {
    if t.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} = {t} is not finite")))
    }
}

/// Prescribed dilatation `ω = g'/h'` of a mapping.
#[derive(Debug, Clone, PartialEq)]
pub enum DilatationSpec {
    /// `e^{2iγ} (z e^{iθ} + a) / (1 + a z e^{iθ})`
    MobiusShifted { a: f64, theta: f64, gamma: f64 },
    /// `e^{iθ} z^n`
    Monomial { theta: f64, n: u32 },
    /// `-e^{2iγ} (e^{iγ} z - a) / (1 - a e^{iγ} z)`
    ReflectedMobius { a: f64, gamma: f64 },
    /// Arbitrary analytic dilatation given by its series.
    SeriesGiven(PowerSeries),
}

impl DilatationSpec {
    pub fn mobius(a: f64, theta: f64, gamma: f64) -> Result<Self> {
        check_a(a)?;
        check_finite("theta", theta)?;
        check_finite("gamma", gamma)?;
        Ok(DilatationSpec::MobiusShifted {
            a,
            theta: reduce_angle(theta),
            gamma: reduce_angle(gamma),
        })
    }

    pub fn monomial(theta: f64, n: u32) -> Result<Self> {
        check_finite("theta", theta)?;
        if n == 0 {
            return Err(Error::invalid("monomial dilatation needs n >= 1"));
        }
        Ok(DilatationSpec::Monomial {
            theta: reduce_angle(theta),
            n,
        })
    }

    pub fn reflected(a: f64, gamma: f64) -> Result<Self> {
        check_a(a)?;
        check_finite("gamma", gamma)?;
        Ok(DilatationSpec::ReflectedMobius {
            a,
            gamma: reduce_angle(gamma),
        })
    }

    /// Wraps a series after checking `|ω| < 1` on rings up to radius 0.9.
    pub fn from_series(s: PowerSeries) -> Result<Self> {
        for j in 1..=9 {
            let r = 0.1 * j as f64;
            if let Some(w) = s
                .evaluate_on_circle(r, 64)
                .into_iter()
                .find(|w| w.norm() >= 1.0)
            {
                return Err(Error::invalid(format!(
                    "series dilatation reaches |ω| = {} on |z| = {r}",
                    w.norm()
                )));
            }
        }
        Ok(DilatationSpec::SeriesGiven(s))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match *self {
            DilatationSpec::MobiusShifted { a, theta, gamma } => {
                let w = cis(theta) * z;
                cis(2.0 * gamma) * (w + a) / (a * w + 1.0)
            }
            DilatationSpec::Monomial { theta, n } => cis(theta) * z.powu(n),
            DilatationSpec::ReflectedMobius { a, gamma } => {
                let w = cis(gamma) * z;
                -cis(2.0 * gamma) * (w - a) / (1.0 - a * w)
            }
            DilatationSpec::SeriesGiven(ref s) => s.evaluate(z),
        }
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        match *self {
            DilatationSpec::MobiusShifted { a, theta, gamma } => {
                let w = cis(theta) * z;
                let d = a * w + 1.0;
                cis(2.0 * gamma + theta) * (1.0 - a * a) / (d * d)
            }
            DilatationSpec::Monomial { theta, n } => cis(theta) * f64::from(n) * z.powu(n - 1),
            DilatationSpec::ReflectedMobius { a, gamma } => {
                let w = cis(gamma) * z;
                let d = 1.0 - a * w;
                -cis(3.0 * gamma) * (1.0 - a * a) / (d * d)
            }
            DilatationSpec::SeriesGiven(ref s) => s.derivative().evaluate(z),
        }
    }

    /// `ω = P/Q` with `Q(0) = 1`, both as series of the given order.
    pub fn rational_parts(&self, order: usize) -> (PowerSeries, PowerSeries) {
        let poly = |c: &[Complex64]| PowerSeries::from_poly(c, order);
        match *self {
            DilatationSpec::MobiusShifted { a, theta, gamma } => (
                poly(&[cis(2.0 * gamma) * a, cis(2.0 * gamma + theta)]),
                poly(&[ONE, cis(theta) * a]),
            ),
            DilatationSpec::Monomial { theta, n } => (
                PowerSeries::monomial(cis(theta), n as usize, order),
                PowerSeries::one(order),
            ),
            DilatationSpec::ReflectedMobius { a, gamma } => (
                poly(&[cis(2.0 * gamma) * a, -cis(3.0 * gamma)]),
                poly(&[ONE, -cis(gamma) * a]),
            ),
            DilatationSpec::SeriesGiven(ref s) => (s.truncate(order), PowerSeries::one(order)),
        }
    }

    pub fn series(&self, order: usize) -> PowerSeries {
        let (p, q) = self.rational_parts(order);
        // Q(0) = 1 for every kind.
        p.multiply(&q.reciprocal().expect("Q(0) = 1"))
    }
}

impl fmt::Display for DilatationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DilatationSpec::MobiusShifted { a, theta, gamma } => {
                write!(f, "mobius(a={a},theta={theta},gamma={gamma})")
            }
            DilatationSpec::Monomial { theta, n } => write!(f, "monomial(theta={theta},n={n})"),
            DilatationSpec::ReflectedMobius { a, gamma } => {
                write!(f, "reflected(a={a},gamma={gamma})")
            }
            DilatationSpec::SeriesGiven(s) => write!(f, "series(order={})", s.order()),
        }
    }
}

/// Parameters a mapping was built from; unused ones stay `None`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MapParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
}

/// A harmonic mapping `f = h + conj(g)` given by truncated series.
#[derive(Debug, Clone)]
pub struct HarmonicMap {
    pub h: PowerSeries,
    pub g: PowerSeries,
    /// Construction provenance, written in the map-spec syntax where possible.
    pub label: String,
    pub params: MapParams,
    pub dilatation: Option<DilatationSpec>,
}

impl HarmonicMap {
    pub fn order(&self) -> usize {
        self.h.order().min(self.g.order())
    }

    /// `h(z) + conj(g(z))`
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.h.evaluate(z) + self.g.evaluate(z).conj()
    }

    /// Series of `g'/h'`, exact in its first `order()` coefficients.
    pub fn dilatation_series(&self) -> Result<PowerSeries> {
        self.g.derivative().divide(&self.h.derivative())
    }

    /// `g'(z)/h'(z)` evaluated through [`HarmonicMap::dilatation_series`].
    ///
    /// The quotient has bounded coefficients whenever `|ω| < 1`, so its
    /// truncation error is far smaller than that of `g'` and `h'` separately.
    pub fn series_dilatation(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.dilatation_series()?.evaluate(z))
    }

    /// `|h'(z)|² - |g'(z)|²` from the series.
    pub fn jacobian(&self, z: Complex64) -> f64 {
        self.h.derivative().evaluate(z).norm_sqr() - self.g.derivative().evaluate(z).norm_sqr()
    }

    /// True when `g'(0) = 0` as well.
    pub fn is_class_h0(&self) -> bool {
        self.g.coeff(1).norm() <= NORMALIZATION_TOL
    }

    /// Class normalization `h(0) = g(0) = 0`, `h'(0) = 1`.
    pub fn is_normalized(&self) -> bool {
        self.h.coeff(0) == ZERO
            && self.g.coeff(0) == ZERO
            && (self.h.coeff(1) - ONE).norm() <= NORMALIZATION_TOL
    }
}

/// `h = z`, `g = 0`.
pub fn identity(order: usize) -> HarmonicMap {
    HarmonicMap {
        h: PowerSeries::z(order),
        g: PowerSeries::zero(order),
        label: "identity".into(),
        params: MapParams::default(),
        dilatation: None,
    }
}

/// Shear of a slanted half-plane mapping: `h + e^{-2iγ} g = (1+a) z / (1 - e^{iγ} z)`
/// with dilatation `ω`.
///
/// `h' = (1+a) / ((1 + e^{-2iγ} ω)(1 - e^{iγ} z)²)` and `g' = ω h'`.
pub fn shear_slanted(
    gamma: f64,
    a: f64,
    omega: &DilatationSpec,
    order: usize,
) -> Result<HarmonicMap> {
    check_a(a)?;
    check_finite("gamma", gamma)?;
    if order < 1 {
        return Err(Error::invalid("order must be at least 1"));
    }
    let gamma = reduce_angle(gamma);
    let required = cis(2.0 * gamma) * a;
    let found = omega.eval(ZERO);
    if (found - required).norm() > NORMALIZATION_TOL {
        return Err(Error::NormalizationMismatch { found, required });
    }

    let k = cis(-2.0 * gamma);
    let (p, q) = omega.rational_parts(order - 1);
    let pole = PowerSeries::from_poly(&[ONE, -2.0 * cis(gamma), cis(2.0 * gamma)], order - 1);
    let denom = q.add(&p.scale(k)).multiply(&pole);
    let inv = denom.reciprocal()?.scale(Complex64::from(1.0 + a));
    let mut h = q.multiply(&inv).antiderivative().into_coeffs();
    let g = p.multiply(&inv).antiderivative();
    h[1] = ONE;

    Ok(HarmonicMap {
        h: PowerSeries::from_coeffs(h),
        g,
        label: format!("shear(gamma={gamma},a={a},{omega})"),
        params: MapParams {
            gamma: Some(gamma),
            a: Some(a),
            ..omega_params(omega)
        },
        dilatation: Some(omega.clone()),
    })
}

fn omega_params(omega: &DilatationSpec) -> MapParams {
    match *omega {
        DilatationSpec::MobiusShifted { theta, .. } => MapParams {
            theta: Some(theta),
            ..Default::default()
        },
        DilatationSpec::Monomial { theta, n } => MapParams {
            theta: Some(theta),
            n: Some(n),
            ..Default::default()
        },
        _ => MapParams::default(),
    }
}

/// The half-plane mapping `f₀` with `h₀ + g₀ = z/(1-z)` and `ω₀(z) = -z`.
pub fn f0(order: usize) -> HarmonicMap {
    let h = PowerSeries::from_fn(order, |n| {
        if n == 0 {
            ZERO
        } else {
            Complex64::from((n as f64 + 1.0) / 2.0)
        }
    });
    let g = PowerSeries::from_fn(order, |n| {
        if n == 0 {
            ZERO
        } else {
            Complex64::from((1.0 - n as f64) / 2.0)
        }
    });
    HarmonicMap {
        h,
        g,
        label: "f0".into(),
        params: MapParams {
            gamma: Some(0.0),
            a: Some(0.0),
            ..Default::default()
        },
        dilatation: Some(DilatationSpec::Monomial { theta: PI, n: 1 }),
    }
}

/// `f^a_γ` from its closed form in terms of `I_γ(z) = z/(1 - e^{iγ} z)`:
/// `h = [(1+a) I_γ + (1-a) z I_γ'] / 2`, `g = e^{2iγ} [(1+a) I_γ - (1-a) z I_γ'] / 2`.
pub fn f_a_gamma(a: f64, gamma: f64, order: usize) -> Result<HarmonicMap> {
    check_a(a)?;
    check_finite("gamma", gamma)?;
    let gamma = reduce_angle(gamma);
    let rot = cis(2.0 * gamma);
    let coeff = |n: usize, sign: f64| {
        let nf = n as f64;
        cis((nf - 1.0) * gamma) * (((1.0 + a) + sign * (1.0 - a) * nf) / 2.0)
    };
    let h = PowerSeries::from_fn(order, |n| match n {
        0 => ZERO,
        1 => ONE,
        _ => coeff(n, 1.0),
    });
    let g = PowerSeries::from_fn(order, |n| if n == 0 { ZERO } else { rot * coeff(n, -1.0) });
    Ok(HarmonicMap {
        h,
        g,
        label: format!("fa(a={a},gamma={gamma})"),
        params: MapParams {
            gamma: Some(gamma),
            a: Some(a),
            ..Default::default()
        },
        dilatation: Some(DilatationSpec::ReflectedMobius { a, gamma }),
    })
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 && beta < PI {
        Ok(())
    } else {
        Err(Error::invalid(format!("beta = {beta} must lie in (0, pi)")))
    }
}

/// Coefficients of `ψ(z) = log((1 + z e^{iβ}) / (1 + z e^{-iβ})) / (2i sin β)`:
/// `ψ_n = (-1)^{n+1} sin(nβ) / (n sin β)`.
pub fn psi_series(beta: f64, order: usize) -> Result<PowerSeries> {
    check_beta(beta)?;
    let sb = beta.sin();
    Ok(PowerSeries::from_fn(order, |n| {
        if n == 0 {
            return ZERO;
        }
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        Complex64::from(sign * (n as f64 * beta).sin() / (n as f64 * sb))
    }))
}

/// Real-part bounds `((β-π)/(2 sin β), β/(2 sin β))` of the strip `Ω_β`.
pub fn strip_bounds(beta: f64) -> (f64, f64) {
    let s = 2.0 * beta.sin();
    ((beta - PI) / s, beta / s)
}

/// Shear onto the asymmetric vertical strip `Ω_β` with `h + g = ψ`:
/// `h' = 1/((1+ω)(1 + z e^{iβ})(1 + z e^{-iβ}))`, `g' = ω h'`.
pub fn strip_map(beta: f64, omega: &DilatationSpec, order: usize) -> Result<HarmonicMap> {
    check_beta(beta)?;
    if order < 1 {
        return Err(Error::invalid("order must be at least 1"));
    }
    let found = omega.eval(ZERO);
    if found.norm() > NORMALIZATION_TOL {
        return Err(Error::NormalizationMismatch {
            found,
            required: ZERO,
        });
    }
    let (p, q) = omega.rational_parts(order - 1);
    let quad = PowerSeries::from_poly(&[ONE, Complex64::from(2.0 * beta.cos()), ONE], order - 1);
    let inv = q.add(&p).multiply(&quad).reciprocal()?;
    let mut h = q.multiply(&inv).antiderivative().into_coeffs();
    let g = p.multiply(&inv).antiderivative();
    h[1] = ONE;
    Ok(HarmonicMap {
        h: PowerSeries::from_coeffs(h),
        g,
        label: format!("strip(beta={beta},{omega})"),
        params: MapParams {
            beta: Some(beta),
            ..omega_params(omega)
        },
        dilatation: Some(omega.clone()),
    })
}

/// Checks whether `h + g` and `ω` can belong to one mapping with `h'(0) = 1`.
///
/// Since `g'(0) = ω(0) h'(0)`, the pair is consistent iff `(h+g)'(0) = 1 + ω(0)`.
pub fn validate_normalization(h_plus_g: &PowerSeries, omega: &DilatationSpec) -> CheckReport {
    validate_normalization_slanted(h_plus_g, 0.0, omega)
}

/// As [`validate_normalization`] for the combination `h + e^{-2iγ} g`.
pub fn validate_normalization_slanted(
    combination: &PowerSeries,
    gamma: f64,
    omega: &DilatationSpec,
) -> CheckReport {
    let slope = combination.coeff(1);
    let required = ONE + cis(-2.0 * gamma) * omega.eval(ZERO);
    let gap = (slope - required).norm();
    let offset = combination.coeff(0).norm();
    let value = gap.max(offset);
    CheckReport {
        name: "normalization".into(),
        pass: value < NORMALIZATION_TOL,
        max_value: value,
        witness: slope,
        samples: 1,
        tolerance: NORMALIZATION_TOL,
        notes: format!(
            "combination'(0) = {slope}, 1 + e^(-2i gamma) omega(0) = {required}; consistent iff the gap is < tolerance"
        ),
    }
}
