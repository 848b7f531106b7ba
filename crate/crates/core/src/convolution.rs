//! Harmonic convolution and closed-form dilatations of convolutions.
//!
//! Each closed form is a pointwise evaluator. The matching oracle is the
//! series quotient `(g-part)'/(h-part)'` of the actual convolution, built
//! with [`harmonic_convolve`] and evaluated by [`SeriesQuotient`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mappings::{self, DilatationSpec, HarmonicMap, MapParams};
use crate::rootcheck::ComplexPolynomial;
use crate::series::PowerSeries;

/// Closed-form denominators below this modulus raise [`Error::DenominatorVanishes`].
pub const DENOMINATOR_EPS: f64 = 1e-12;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn cis(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t)
}

fn check_a(a: f64) -> Result<()> {
    if a.is_finite() && a.abs() < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("a = {a} must lie in (-1, 1)")))
    }
}

fn guarded_div(num: Complex64, den: Complex64, at: Complex64) -> Result<Complex64> {
    if den.norm() < DENOMINATOR_EPS {
        Err(Error::DenominatorVanishes { at })
    } else {
        Ok(num / den)
    }
}

/// A complex function of one complex variable that may fail at some points.
pub trait PointwiseMap: Sync {
    fn eval(&self, z: Complex64) -> Result<Complex64>;
}

impl<F> PointwiseMap for F
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        self(z)
    }
}

/// `(f ∗ F) = (h ∗ H) + conj(g ∗ G)`, truncated to the smaller order.
pub fn harmonic_convolve(f: &HarmonicMap, other: &HarmonicMap) -> HarmonicMap {
    HarmonicMap {
        h: f.h.hadamard(&other.h),
        g: f.g.hadamard(&other.g),
        label: format!("conv({}, {})", f.label, other.label),
        params: MapParams::default(),
        dilatation: None,
    }
}

/// `g'(z)/h'(z)` of a mapping, evaluated from its series.
#[derive(Debug, Clone)]
pub struct SeriesQuotient {
    quotient: PowerSeries,
}

impl SeriesQuotient {
    pub fn of(f: &HarmonicMap) -> Result<Self> {
        Ok(SeriesQuotient {
            quotient: f.dilatation_series()?,
        })
    }

    pub fn series(&self) -> &PowerSeries {
        &self.quotient
    }
}

impl PointwiseMap for SeriesQuotient {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.quotient.evaluate(z))
    }
}

/// Dilatation of `f₀ ∗ f` for `f` in a slanted half-plane class with dilatation `ω`:
///
/// `ω̃ = -z e^{-iγ} (ω² + e^{2iγ}[ω - ½zω'] + ½e^{iγ}ω') / (1 + e^{-2iγ}[ω - ½zω'] + ½e^{-iγ}z²ω')`
#[derive(Debug, Clone)]
pub struct F0StarDilatation {
    pub omega: DilatationSpec,
    pub gamma: f64,
}

impl PointwiseMap for F0StarDilatation {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        let w = self.omega.eval(z);
        let dw = self.omega.derivative(z);
        let g = self.gamma;
        let mid = w - 0.5 * z * dw;
        let num = w * w + cis(2.0 * g) * mid + 0.5 * cis(g) * dw;
        let den = ONE + cis(-2.0 * g) * mid + 0.5 * cis(-g) * z * z * dw;
        Ok(-z * cis(-g) * guarded_div(num, den, z)?)
    }
}

/// Closed form and series oracle for the dilatation of `f₀ ∗ f`.
///
/// `f` must carry its dilatation (as every shear constructor does).
pub fn dilatation_f0_star(
    f: &HarmonicMap,
    gamma: f64,
    a: f64,
) -> Result<(F0StarDilatation, SeriesQuotient)> {
    check_a(a)?;
    let omega = f
        .dilatation
        .clone()
        .ok_or_else(|| Error::invalid(format!("{} carries no dilatation", f.label)))?;
    let conv = harmonic_convolve(&mappings::f0(f.order()), f);
    Ok((
        F0StarDilatation { omega, gamma },
        SeriesQuotient::of(&conv)?,
    ))
}

/// `unimodular · z^k · Π_j (z + A_j)/(1 + conj(A_j) z)`
#[derive(Debug, Clone, PartialEq)]
pub struct MobiusDilatation {
    pub unimodular_factor: Complex64,
    pub z_power: u32,
    pub zeros: Vec<Complex64>,
}

impl MobiusDilatation {
    /// The numerator polynomial `Π (z + A_j)`.
    pub fn numerator(&self) -> ComplexPolynomial {
        ComplexPolynomial::from_roots(&self.zeros.iter().map(|a| -a).collect::<Vec<_>>())
    }

    /// The denominator polynomial `Π (1 + conj(A_j) z)`.
    pub fn denominator(&self) -> ComplexPolynomial {
        self.zeros
            .iter()
            .fold(ComplexPolynomial::new(vec![ONE]), |acc, a| {
                acc.multiply(&ComplexPolynomial::new(vec![ONE, a.conj()]))
            })
    }
}

impl PointwiseMap for MobiusDilatation {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        let mut acc = self.unimodular_factor * z.powu(self.z_power);
        for a in &self.zeros {
            acc *= guarded_div(z + a, ONE + a.conj() * z, z)?;
        }
        Ok(acc)
    }
}

/// `t(z) = z² + ((3a+1)/2) e^{-iθ} z + a e^{-2iθ} + ((1-a)/2) e^{-iγ} e^{-iθ}`.
pub fn mobius_case_polynomial(a: f64, theta: f64, gamma: f64) -> ComplexPolynomial {
    let a0 = a * cis(-2.0 * theta) + 0.5 * (1.0 - a) * cis(-gamma - theta);
    let a1 = 0.5 * (3.0 * a + 1.0) * cis(-theta);
    ComplexPolynomial::new(vec![a0, a1, ONE])
}

/// Roots of `z² + b z + c`, computed without cancellation.
pub(crate) fn monic_quadratic_roots(b: Complex64, c: Complex64) -> (Complex64, Complex64) {
    let disc = (b * b - 4.0 * c).sqrt();
    // pick the sign that makes |b + s| large
    let s = if (b + disc).norm() >= (b - disc).norm() {
        disc
    } else {
        -disc
    };
    let q = -0.5 * (b + s);
    if q.norm() == 0.0 {
        return (q, q);
    }
    (q, c / q)
}

/// Dilatation of `f₀ ∗ f` for the shifted Möbius dilatation, in product form
/// `-e^{3iγ} e^{2iθ} z (z+A)(z+B) / ((1+Āz)(1+B̄z))` where `-A, -B` are the roots of
/// [`mobius_case_polynomial`].
pub fn dilatation_mobius_case(a: f64, theta: f64, gamma: f64) -> Result<MobiusDilatation> {
    check_a(a)?;
    let t = mobius_case_polynomial(a, theta, gamma);
    let c = t.coeffs();
    let (r1, r2) = monic_quadratic_roots(c[1], c[0]);
    Ok(MobiusDilatation {
        unimodular_factor: -cis(3.0 * gamma + 2.0 * theta),
        z_power: 1,
        zeros: vec![-r1, -r2],
    })
}

/// The pair `(u(a), v(a))` whose quotient is the root of the reduced
/// polynomial `t₁` in the Möbius case:
/// `u = (3a+1)(e^{-iγ} - 2e^{-iθ})`, `v = a(5 - 4cos(θ-γ)) + 3`.
pub fn reduced_root_parts(a: f64, theta: f64, gamma: f64) -> (Complex64, f64) {
    let u = (3.0 * a + 1.0) * (cis(-gamma) - 2.0 * cis(-theta));
    let v = a * (5.0 - 4.0 * (theta - gamma).cos()) + 3.0;
    (u, v)
}

/// Dilatation of `f^a_γ ∗ f` from the derivatives of `f` at `ζ = z e^{iγ}`:
///
/// `ω̃ = e^{2iγ} (2a g'(ζ) - (1-a) ζ g''(ζ)) / (2h'(ζ) + (1-a) ζ h''(ζ))`
///
/// Accuracy is limited by the truncation of `f`: `h''` and `g''` are summed
/// directly, so `f` needs a higher order than its convolution oracle.
#[derive(Debug, Clone)]
pub struct FaStarDilatation {
    dh: PowerSeries,
    d2h: PowerSeries,
    dg: PowerSeries,
    d2g: PowerSeries,
    a: f64,
    gamma: f64,
}

impl PointwiseMap for FaStarDilatation {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        let zeta = z * cis(self.gamma);
        let b = 1.0 - self.a;
        let num = 2.0 * self.a * self.dg.evaluate(zeta) - b * zeta * self.d2g.evaluate(zeta);
        let den = 2.0 * self.dh.evaluate(zeta) + b * zeta * self.d2h.evaluate(zeta);
        Ok(cis(2.0 * self.gamma) * guarded_div(num, den, z)?)
    }
}

pub fn dilatation_fa_star(f: &HarmonicMap, a: f64, gamma: f64) -> Result<FaStarDilatation> {
    check_a(a)?;
    if !gamma.is_finite() {
        return Err(Error::invalid("gamma is not finite"));
    }
    let dh = f.h.derivative();
    let dg = f.g.derivative();
    Ok(FaStarDilatation {
        d2h: dh.derivative(),
        d2g: dg.derivative(),
        dh,
        dg,
        a,
        gamma,
    })
}

/// Values from the reduction of `|ω̃| < 1` to a sign condition on `T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SValues {
    /// `S(z)`
    pub s: Complex64,
    /// `u[h(z)] = z h''(z)/h'(z)`
    pub u: Complex64,
    /// `Re u`
    pub x: f64,
    /// `[2+(1-a)X]² - [2a-(1-a)n-(1-a)X]²`
    pub t_expanded: f64,
    /// `(1-a)[2(1+a)-(1-a)n][2+n+2X]`
    pub t_factored: f64,
}

/// `S = e^{i(2γ+θ)} zⁿ (2a - (1-a)n - (1-a)u) / (2 + (1-a)u)` and both forms of `T`.
pub fn s_from_u(
    z: Complex64,
    u: Complex64,
    n: u32,
    theta: f64,
    gamma: f64,
    a: f64,
) -> Result<SValues> {
    check_a(a)?;
    let b = 1.0 - a;
    let nf = f64::from(n);
    let num = 2.0 * a - b * nf - b * u;
    let den = 2.0 + b * u;
    let s = cis(2.0 * gamma + theta) * z.powu(n) * guarded_div(num, den, z)?;
    let x = u.re;
    let t_expanded = (2.0 + b * x).powi(2) - (2.0 * a - b * nf - b * x).powi(2);
    let t_factored = b * (2.0 * (1.0 + a) - b * nf) * (2.0 + nf + 2.0 * x);
    Ok(SValues {
        s,
        u,
        x,
        t_expanded,
        t_factored,
    })
}

/// `u[h]` for the half-plane mapping with `h + e^{-2iγ₁} g = z/(1 - e^{iγ₁} z)` and
/// `ω = e^{iθ} zⁿ`:
/// `u = 2z e^{iγ₁}/(1 - z e^{iγ₁}) - n e^{i(θ-2γ₁)} zⁿ / (1 + e^{i(θ-2γ₁)} zⁿ)`.
pub fn u_halfplane(z: Complex64, n: u32, theta: f64, gamma1: f64) -> Result<Complex64> {
    let p = z * cis(gamma1);
    let q = cis(theta - 2.0 * gamma1) * z.powu(n);
    Ok(2.0 * guarded_div(p, ONE - p, z)? - f64::from(n) * guarded_div(q, ONE + q, z)?)
}

/// `S`, `X` and `T` for `f ∗ f^a_γ` where `f` is the half-plane mapping above.
pub fn s_halfplane(
    z: Complex64,
    n: u32,
    theta: f64,
    gamma1: f64,
    gamma: f64,
    a: f64,
) -> Result<SValues> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let u = u_halfplane(z, n, theta, gamma1)?;
    s_from_u(z, u, n, theta, gamma, a)
}

/// `u[h]` for the strip mapping onto `Ω_β` with `ω = e^{iθ} zⁿ`:
/// `u = -e^{-iβ}z/(1+e^{-iβ}z) - e^{iβ}z/(1+e^{iβ}z) - n e^{iθ}zⁿ/(1+e^{iθ}zⁿ)`.
///
/// Returns `(u, Re u)`.
pub fn u_strip(z: Complex64, beta: f64, theta: f64, n: u32) -> Result<(Complex64, f64)> {
    let terms = strip_u_terms(z, beta, theta, n)?;
    let u = terms[0] + terms[1] + terms[2];
    Ok((u, u.re))
}

/// The three summands of [`u_strip`] separately.
pub fn strip_u_terms(z: Complex64, beta: f64, theta: f64, n: u32) -> Result<[Complex64; 3]> {
    let m = |w: Complex64| guarded_div(w, ONE + w, z);
    let wm = cis(-beta) * z;
    let wp = cis(beta) * z;
    let wn = cis(theta) * z.powu(n);
    Ok([-m(wm)?, -m(wp)?, -f64::from(n) * m(wn)?])
}

/// `S`, `X` and `T` for `f ∗ f^a_γ` where `f` is the strip mapping above.
pub fn s_strip(z: Complex64, n: u32, theta: f64, beta: f64, gamma: f64, a: f64) -> Result<SValues> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let (u, _) = u_strip(z, beta, theta, n)?;
    s_from_u(z, u, n, theta, gamma, a)
}
