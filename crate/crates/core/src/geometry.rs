//! Sampled geometric checks: dilatation bounds and Jacobian sign on polar
//! grids, boundary curves `f(r e^{iφ})`, and convexity in a direction.
//!
//! All sampled checks are witnesses at finite resolution, not proofs.

use std::f64::consts::{PI, TAU};
use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::convolution::PointwiseMap;
use crate::error::{Error, Result};
use crate::mappings::HarmonicMap;
use crate::series::DEFAULT_ORDER;

/// Minimum number of samples on a [`BoundaryCurve`].
pub const MIN_CURVE_POINTS: usize = 64;
/// Sign dead-band used when counting level crossings.
pub const CROSSING_DEADBAND: f64 = 1e-12;

pub const DEFAULT_N_LINES: usize = 200;

fn serialize_complex<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

/// Outcome of one verification. `pass` holds iff `max_value < tolerance`
/// unless the notes say otherwise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    pub max_value: f64,
    #[serde(serialize_with = "serialize_complex")]
    pub witness: Complex64,
    pub samples: usize,
    pub tolerance: f64,
    pub notes: String,
}

/// Smallest truncation order at which the tail of a series with coefficients
/// growing like `n³` is below `1e-12` on `|z| = r`.
pub fn required_order(r: f64) -> usize {
    assert!(r > 0.0 && r < 1.0, "radius must lie in (0, 1)");
    let mut n = DEFAULT_ORDER;
    loop {
        let nf = n as f64;
        if 3.0 * nf.ln() + nf * r.ln() - (1.0 - r).ln() < (1e-12f64).ln() {
            return n;
        }
        n += 64;
    }
}

/// The origin followed by rings `r_j = (j/n_r) r_max`, `j = 1..=n_r`, each with
/// `n_phi` points at angles `2πk/n_phi`.
pub fn polar_grid(r_max: f64, n_r: usize, n_phi: usize) -> Vec<Complex64> {
    let mut pts = Vec::with_capacity(1 + n_r * n_phi);
    pts.push(Complex64::new(0.0, 0.0));
    for j in 1..=n_r {
        let r = r_max * j as f64 / n_r as f64;
        for k in 0..n_phi {
            pts.push(Complex64::from_polar(r, TAU * k as f64 / n_phi as f64));
        }
    }
    pts
}

pub fn check_grid(r_max: f64, n_r: usize, n_phi: usize) -> Result<()> {
    if !(r_max > 0.0 && r_max < 1.0) {
        return Err(Error::invalid(format!(
            "r_max = {r_max} must lie in (0, 1)"
        )));
    }
    if n_r == 0 || n_phi == 0 {
        return Err(Error::invalid("grid needs n_r >= 1 and n_phi >= 1"));
    }
    Ok(())
}

/// Largest value with its index; ties go to the lowest index and NaN counts as +∞.
fn argmax(values: impl Iterator<Item = f64>) -> (usize, f64) {
    values
        .map(|v| if v.is_nan() { f64::INFINITY } else { v })
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, v)| {
            if v > best.1 {
                (i, v)
            } else {
                best
            }
        })
}

/// Report for `values[i]` sampled at `points[i]`, passing iff the largest is
/// below `threshold`. The witness is the lowest-index maximizer.
pub fn max_report(
    name: &str,
    points: &[Complex64],
    values: &[f64],
    threshold: f64,
    notes: String,
) -> CheckReport {
    let (i, max) = argmax(values.iter().copied());
    CheckReport {
        name: name.into(),
        pass: max < threshold,
        max_value: max,
        witness: points.get(i).copied().unwrap_or_default(),
        samples: values.len(),
        tolerance: threshold,
        notes,
    }
}

/// `max |eval(z)|` over the polar grid `r_j e^{iφ_k}`, passing iff it is below `threshold`.
pub fn grid_max_modulus_below(
    eval: &dyn PointwiseMap,
    r_max: f64,
    n_r: usize,
    n_phi: usize,
    threshold: f64,
) -> Result<CheckReport> {
    check_grid(r_max, n_r, n_phi)?;
    let pts = polar_grid(r_max, n_r, n_phi);
    let values: Vec<Result<f64>> = pts
        .par_iter()
        .map(|z| eval.eval(*z).map(|w| w.norm()))
        .collect();
    let values = values.into_iter().collect::<Result<Vec<f64>>>()?;
    let (i, max) = argmax(values.iter().copied());
    Ok(CheckReport {
        name: "grid_max_modulus".into(),
        pass: max < threshold,
        max_value: max,
        witness: pts[i],
        samples: pts.len(),
        tolerance: threshold,
        notes: format!("max |w| over polar grid r <= {r_max}; pass iff max < {threshold}"),
    })
}

/// `max |eval(z)|` over the polar grid, passing iff it is below 1.
pub fn grid_max_modulus(
    eval: &dyn PointwiseMap,
    r_max: f64,
    n_r: usize,
    n_phi: usize,
) -> Result<CheckReport> {
    grid_max_modulus_below(eval, r_max, n_r, n_phi, 1.0)
}

/// Sign of `J_f = |h'|² - |g'|²` on the polar grid, from the series.
///
/// The reported value is `max(-J)`, so the check passes iff it is negative.
pub fn jacobian_positive(
    f: &HarmonicMap,
    r_max: f64,
    n_r: usize,
    n_phi: usize,
) -> Result<CheckReport> {
    check_grid(r_max, n_r, n_phi)?;
    let dh = f.h.derivative();
    let dg = f.g.derivative();
    let mut values = vec![dg.coeff(0).norm_sqr() - dh.coeff(0).norm_sqr()];
    let rings: Vec<Vec<f64>> = (1..=n_r)
        .into_par_iter()
        .map(|j| {
            let r = r_max * j as f64 / n_r as f64;
            let hs = dh.evaluate_on_circle(r, n_phi);
            let gs = dg.evaluate_on_circle(r, n_phi);
            hs.iter()
                .zip(&gs)
                .map(|(a, b)| b.norm_sqr() - a.norm_sqr())
                .collect()
        })
        .collect();
    values.extend(rings.into_iter().flatten());
    let pts = polar_grid(r_max, n_r, n_phi);
    let (i, max) = argmax(values.iter().copied());
    let tail = truncation_estimate(f, r_max);
    Ok(CheckReport {
        name: "jacobian_positive".into(),
        pass: max < 0.0,
        max_value: max,
        witness: pts[i],
        samples: pts.len(),
        tolerance: 0.0,
        notes: format!(
            "max of -(|h'|^2 - |g'|^2) over polar grid r <= {r_max}; pass iff < 0; order {}, tail estimate {tail:.3e}",
            f.order()
        ),
    })
}

/// Rough size of the last retained terms of `h'` and `g'` at radius `r`.
fn truncation_estimate(f: &HarmonicMap, r: f64) -> f64 {
    let n = f.order();
    let last = f.h.coeff(n).norm().max(f.g.coeff(n).norm()) * n as f64;
    last * r.powi(n as i32) / (1.0 - r)
}

/// Closed sampled curve `w_k = f(r e^{2πik/M})`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    radius: f64,
    points: Vec<Complex64>,
}

impl BoundaryCurve {
    /// Takes samples at equally spaced angles `2πk/M`.
    pub fn from_points(radius: f64, points: Vec<Complex64>) -> Result<Self> {
        if points.len() < MIN_CURVE_POINTS {
            return Err(Error::invalid(format!(
                "a boundary curve needs at least {MIN_CURVE_POINTS} points, got {}",
                points.len()
            )));
        }
        Ok(BoundaryCurve { radius, points })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn phi(&self, k: usize) -> f64 {
        TAU * k as f64 / self.points.len() as f64
    }

    /// The same curve multiplied by `e^{iφ}`.
    pub fn rotate_points(&self, phi: f64) -> Self {
        let rot = Complex64::from_polar(1.0, phi);
        BoundaryCurve {
            radius: self.radius,
            points: self.points.iter().map(|w| w * rot).collect(),
        }
    }

    /// CSV with header `phi,re_w,im_w` and 17 significant digits.
    pub fn write_csv(&self, out: &mut impl Write) -> io::Result<()> {
        writeln!(out, "phi,re_w,im_w")?;
        for (k, w) in self.points.iter().enumerate() {
            writeln!(out, "{:.16e},{:.16e},{:.16e}", self.phi(k), w.re, w.im)?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("ascii")
    }
}

pub fn boundary_curve(f: &HarmonicMap, r: f64, m: usize) -> Result<BoundaryCurve> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::invalid(format!("r = {r} must lie in (0, 1)")));
    }
    if m < MIN_CURVE_POINTS {
        return Err(Error::invalid(format!(
            "need at least {MIN_CURVE_POINTS} points"
        )));
    }
    let hs = f.h.evaluate_on_circle(r, m);
    let gs = f.g.evaluate_on_circle(r, m);
    let points = hs.iter().zip(&gs).map(|(h, g)| h + g.conj()).collect();
    BoundaryCurve::from_points(r, points)
}

/// Circle of radius `r` with `m` samples.
pub fn circle_curve(r: f64, m: usize) -> Result<BoundaryCurve> {
    BoundaryCurve::from_points(
        r,
        (0..m)
            .map(|k| Complex64::from_polar(r, TAU * k as f64 / m as f64))
            .collect(),
    )
}

/// Outline of the half annulus `1/2 < |w| < 1`, `Im w >= 0`.
///
/// Horizontal lines with `0 < Im w < 1/2` meet it in two intervals.
pub fn crescent_fixture() -> BoundaryCurve {
    let outer = 160;
    let inner = 96;
    let mut pts: Vec<Complex64> = (0..outer)
        .map(|k| Complex64::from_polar(1.0, PI * k as f64 / (outer - 1) as f64))
        .collect();
    pts.extend(
        (0..inner).map(|k| Complex64::from_polar(0.5, PI - PI * k as f64 / (inner - 1) as f64)),
    );
    BoundaryCurve::from_points(1.0, pts).expect("fixture has enough points")
}

/// Crossings of the level `c` by `ys` read as a closed polygon.
fn crossings(ys: &[f64], c: f64) -> Vec<usize> {
    let sign = |y: f64| {
        let d = y - c;
        if d > CROSSING_DEADBAND {
            Some(true)
        } else if d < -CROSSING_DEADBAND {
            Some(false)
        } else {
            None
        }
    };
    let Some(start) = ys.iter().position(|y| sign(*y).is_some()) else {
        return Vec::new();
    };
    let n = ys.len();
    let mut prev = sign(ys[start]).expect("start is outside the dead-band");
    let mut out = Vec::new();
    for step in 1..=n {
        let k = (start + step) % n;
        if let Some(s) = sign(ys[k]) {
            if s != prev {
                out.push(k);
                prev = s;
            }
        }
    }
    out
}

/// Number of crossings for each of `n_lines` levels parallel to `e^{iα}`.
///
/// Levels avoid the extremes of the rotated curve by one sample gap. Returns
/// the levels with their crossing indices.
pub fn crossing_profile(
    curve: &BoundaryCurve,
    alpha: f64,
    n_lines: usize,
) -> Result<Vec<(f64, Vec<usize>)>> {
    let rot = Complex64::from_polar(1.0, -alpha);
    let ys: Vec<f64> = curve.points.iter().map(|w| (w * rot).im).collect();
    if ys.iter().any(|y| !y.is_finite()) {
        return Err(Error::DegenerateCurve { extent: f64::NAN });
    }
    let n = ys.len();
    let (i_max, y_max) = argmax(ys.iter().copied());
    let (i_min, neg_min) = argmax(ys.iter().map(|y| -y));
    let y_min = -neg_min;
    let extent = y_max - y_min;
    if extent.is_nan() || extent < 1e-9 {
        return Err(Error::DegenerateCurve { extent });
    }
    let gap = |i: usize| {
        let prev = ys[(i + n - 1) % n];
        let next = ys[(i + 1) % n];
        (ys[i] - prev).abs().max((ys[i] - next).abs())
    };
    // one sample gap at each extreme, capped at a fraction of the range
    let cap = extent / (2.0 * (n_lines + 1) as f64);
    let lo = y_min + gap(i_min).min(cap);
    let hi = y_max - gap(i_max).min(cap);
    if lo.is_nan() || hi.is_nan() || lo >= hi || n_lines == 0 {
        return Err(Error::DegenerateCurve {
            extent: (hi - lo).max(0.0),
        });
    }
    Ok((0..n_lines)
        .map(|l| {
            let c = lo + (hi - lo) * (l + 1) as f64 / (n_lines + 1) as f64;
            (c, crossings(&ys, c))
        })
        .collect())
}

/// Sampled test that every line parallel to `e^{iα}` meets the curve's
/// interior in one interval, i.e. crosses the closed curve exactly twice.
pub fn convex_in_direction_check(
    curve: &BoundaryCurve,
    alpha: f64,
    n_lines: usize,
) -> Result<CheckReport> {
    let profile = crossing_profile(curve, alpha, n_lines)?;
    let mut worst = 0usize;
    let mut witness = Complex64::new(0.0, 0.0);
    let mut bad_levels = 0;
    for (_, idx) in &profile {
        if idx.len() != 2 {
            bad_levels += 1;
        }
        if idx.len() > worst {
            worst = idx.len();
            witness = curve.points[idx[idx.len().min(3) - 1]];
        }
    }
    let pass = bad_levels == 0;
    Ok(CheckReport {
        name: "convex_in_direction".into(),
        pass,
        max_value: worst as f64,
        witness,
        samples: curve.len(),
        tolerance: 3.0,
        notes: format!(
            "direction alpha = {alpha} (lines parallel to e^(i alpha)); {} levels, {bad_levels} without exactly 2 crossings; sampled at r = {}, a witness not a proof",
            profile.len(),
            curve.radius
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convolution::{dilatation_mobius_case, harmonic_convolve, F0StarDilatation};
    use crate::mappings::{f0, identity, shear_slanted, strip_bounds, strip_map, DilatationSpec};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn max_modulus_of_identity_is_r_max() {
        let id = |z: Complex64| -> Result<Complex64> { Ok(z) };
        let rep = grid_max_modulus(&id, 0.9, 10, 32).unwrap();
        assert!((rep.max_value - 0.9).abs() < 1e-15);
        assert!(rep.pass);
        assert_eq!(rep.samples, 1 + 10 * 32);
    }

    #[test]
    fn max_modulus_for_f0_star_f0() {
        let eval = F0StarDilatation {
            omega: DilatationSpec::monomial(PI, 1).unwrap(),
            gamma: 0.0,
        };
        let rep = grid_max_modulus(&eval, 0.99, 60, 240).unwrap();
        assert!(rep.pass);
        // ω̃ = z(2z+1)/(z+2) peaks on the positive axis
        let r = 0.99;
        assert!((rep.max_value - r * (2.0 * r + 1.0) / (r + 2.0)).abs() < 1e-12);
    }

    #[test]
    fn max_modulus_monotone_in_radius() {
        let m = dilatation_mobius_case(0.3, PI / 2.0, 0.0).unwrap();
        let a = grid_max_modulus(&m, 0.9, 60, 240).unwrap();
        let b = grid_max_modulus(&m, 0.99, 60, 240).unwrap();
        assert!(a.max_value <= b.max_value);
        assert!(b.pass);
    }

    #[test]
    fn max_modulus_propagates_errors() {
        let bad = |z: Complex64| -> Result<Complex64> {
            if z.norm() > 0.5 {
                Err(Error::DenominatorVanishes { at: z })
            } else {
                Ok(z)
            }
        };
        assert!(matches!(
            grid_max_modulus(&bad, 0.9, 4, 8),
            Err(Error::DenominatorVanishes { .. })
        ));
    }

    #[test]
    fn jacobian_examples() {
        let r = 0.99;
        let f = f0(required_order(r));
        assert!(jacobian_positive(&f, r, 60, 240).unwrap().pass);

        let mut degenerate = identity(32);
        degenerate.g = degenerate.h.clone();
        assert!(!jacobian_positive(&degenerate, 0.9, 10, 32).unwrap().pass);

        let w = DilatationSpec::mobius(0.5, PI, 0.0).unwrap();
        let n = required_order(r);
        let g = shear_slanted(0.0, 0.5, &w, n).unwrap();
        let conv = harmonic_convolve(&f0(n), &g);
        assert!(jacobian_positive(&conv, r, 60, 240).unwrap().pass);
    }

    #[test]
    fn f0_boundary_stays_right_of_half_plane_edge() {
        let r = 0.99;
        let curve = boundary_curve(&f0(required_order(r)), r, 1024).unwrap();
        assert!(curve.points().iter().all(|w| w.re > -0.55));
    }

    #[test]
    fn identity_curve_is_circle() {
        let curve = boundary_curve(&identity(8), 0.7, 128).unwrap();
        for (k, w) in curve.points().iter().enumerate() {
            assert!((w - Complex64::from_polar(0.7, curve.phi(k))).norm() < 1e-14);
        }
    }

    #[test]
    fn strip_curve_respects_bounds() {
        let r = 0.99;
        let w = DilatationSpec::monomial(0.0, 1).unwrap();
        let f = strip_map(PI / 2.0, &w, required_order(r)).unwrap();
        let (lo, hi) = strip_bounds(PI / 2.0);
        assert!((hi - PI / 4.0).abs() < 1e-15 && (lo + PI / 4.0).abs() < 1e-15);
        let curve = boundary_curve(&f, r, 1024).unwrap();
        assert!(curve.points().iter().all(|w| w.re.abs() < PI / 4.0 + 0.05));
    }

    #[test]
    fn short_curves_rejected() {
        assert!(BoundaryCurve::from_points(0.5, vec![c(0.0, 0.0); 63]).is_err());
        assert!(boundary_curve(&identity(8), 0.5, 32).is_err());
    }

    #[test]
    fn circle_is_convex_in_every_direction() {
        let circle = circle_curve(0.8, 256).unwrap();
        for k in 0..8 {
            let rep = convex_in_direction_check(&circle, PI * k as f64 / 8.0, 200).unwrap();
            assert!(rep.pass, "{rep:?}");
        }
    }

    #[test]
    fn crescent_fails_horizontally() {
        let rep = convex_in_direction_check(&crescent_fixture(), 0.0, 200).unwrap();
        assert!(!rep.pass);
        assert_eq!(rep.max_value, 4.0);
        // vertical lines meet the half annulus in one interval each
        assert!(
            convex_in_direction_check(&crescent_fixture(), PI / 2.0, 200)
                .unwrap()
                .pass
        );
    }

    #[test]
    fn rotation_equivariance_and_parity() {
        for curve in [circle_curve(1.0, 128).unwrap(), crescent_fixture()] {
            for alpha in [0.0, 0.7, 2.0] {
                for phi in [0.3, -1.1] {
                    let a = convex_in_direction_check(&curve, alpha, 200).unwrap();
                    let b = convex_in_direction_check(&curve.rotate_points(phi), alpha + phi, 200)
                        .unwrap();
                    assert_eq!(a.pass, b.pass);
                }
                for (_, idx) in crossing_profile(&curve, alpha, 200).unwrap() {
                    assert_eq!(idx.len() % 2, 0);
                }
            }
        }
    }

    #[test]
    fn degenerate_curve_rejected() {
        let flat =
            BoundaryCurve::from_points(0.5, (0..64).map(|k| c(k as f64, 0.0)).collect()).unwrap();
        assert!(matches!(
            convex_in_direction_check(&flat, 0.0, 10),
            Err(Error::DegenerateCurve { .. })
        ));
    }

    #[test]
    fn csv_format() {
        let curve = circle_curve(0.5, 64).unwrap();
        let s = curve.to_csv_string();
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some("phi,re_w,im_w"));
        assert_eq!(
            lines.next(),
            Some("0.0000000000000000e0,5.0000000000000000e-1,0.0000000000000000e0")
        );
        assert_eq!(s.lines().count(), 65);
    }

    #[test]
    fn required_order_grows_toward_boundary() {
        assert_eq!(required_order(0.5), DEFAULT_ORDER);
        let n = required_order(0.995);
        let nf = n as f64;
        assert!(nf.powi(3) * 0.995f64.powf(nf) / 0.005 < 1e-12);
        assert!(required_order(0.99) < n);
    }
}
