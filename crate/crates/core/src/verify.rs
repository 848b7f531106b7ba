//! End-to-end verification of the three convolution results and the
//! parameter sweeps around them.
//!
//! Each pipeline decides whether the hypotheses hold, runs every check
//! regardless, and returns a [`Report`]. A failed check under satisfied
//! hypotheses yields [`Verdict::Contradiction`](crate::report::Verdict).

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::convolution::{
    dilatation_f0_star, dilatation_fa_star, dilatation_mobius_case, harmonic_convolve, s_halfplane,
    s_strip, PointwiseMap, SValues, SeriesQuotient,
};
use crate::error::{Error, Result};
use crate::geometry::{
    boundary_curve, check_grid, convex_in_direction_check, grid_max_modulus, jacobian_positive,
    max_report, polar_grid, required_order, CheckReport, DEFAULT_N_LINES,
};
use crate::mappings::{f0, f_a_gamma, shear_slanted, strip_map, DilatationSpec};
use crate::report::{params, Hypothesis, Report, SweepCell};
use crate::rootcheck::{
    brute_force_roots, classify_blaschke, roots_in_disk_count, BlaschkeClass, ComplexPolynomial,
};
use crate::series::DEFAULT_ORDER;

/// Slack allowed on `|S| ≤ 1`, `T ≥ 0` and the agreement of the two forms of `T`.
pub const S_TOL: f64 = 1e-9;
/// Tolerance for deciding that a parameter sits exactly on a hypothesis boundary.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Sampling and truncation settings shared by the pipelines.
#[derive(Debug, Clone, PartialEq)]
pub struct GridParams {
    /// Requested series order; raised automatically when too small for `curve_r`.
    pub order: usize,
    pub r_max: f64,
    pub n_r: usize,
    pub n_phi: usize,
    /// Radius of the boundary curve used for the convexity test.
    pub curve_r: f64,
    /// Samples on the boundary curve.
    pub curve_m: usize,
    pub n_lines: usize,
}

impl Default for GridParams {
    fn default() -> Self {
        GridParams {
            order: DEFAULT_ORDER,
            r_max: 0.99,
            n_r: 60,
            n_phi: 240,
            curve_r: 0.995,
            curve_m: 1024,
            n_lines: DEFAULT_N_LINES,
        }
    }
}

impl GridParams {
    pub fn validate(&self) -> Result<()> {
        check_grid(self.r_max, self.n_r, self.n_phi)?;
        if !(self.curve_r > 0.0 && self.curve_r < 1.0) {
            return Err(Error::invalid(format!(
                "curve radius {} must lie in (0, 1)",
                self.curve_r
            )));
        }
        if self.order == 0 || self.n_lines == 0 {
            return Err(Error::invalid("order and n_lines must be positive"));
        }
        Ok(())
    }

    /// Order used for series work: at least [`required_order`] of the largest radius sampled.
    pub fn effective_order(&self) -> usize {
        self.order.max(required_order(self.r_max.max(self.curve_r)))
    }

    fn insert_into(&self, m: &mut Map<String, Value>) {
        m.insert("order".into(), json!(self.order));
        m.insert("effective_order".into(), json!(self.effective_order()));
        m.insert("r_max".into(), json!(self.r_max));
        m.insert("n_r".into(), json!(self.n_r));
        m.insert("n_phi".into(), json!(self.n_phi));
        m.insert("curve_r".into(), json!(self.curve_r));
        m.insert("curve_m".into(), json!(self.curve_m));
        m.insert("n_lines".into(), json!(self.n_lines));
    }
}

fn check_a(a: f64) -> Result<()> {
    if a.is_finite() && a.abs() < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("a = {a} must lie in (-1, 1)")))
    }
}

fn check_angles(angles: &[(&str, f64)]) -> Result<()> {
    for (name, t) in angles {
        if !t.is_finite() {
            return Err(Error::invalid(format!("{name} = {t} is not finite")));
        }
    }
    Ok(())
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta < PI {
        Ok(())
    } else {
        Err(Error::invalid(format!("beta = {beta} must lie in (0, pi)")))
    }
}

/// A vanishing denominator inside a check becomes a failed check at that point.
fn guarded(name: &str, tolerance: f64, r: Result<CheckReport>) -> Result<CheckReport> {
    match r {
        Err(Error::DenominatorVanishes { at }) => Ok(CheckReport {
            name: name.into(),
            pass: false,
            max_value: f64::INFINITY,
            witness: at,
            samples: 0,
            tolerance,
            notes: format!("denominator vanishes near z = {at}"),
        }),
        other => other,
    }
}

/// Which case of the Möbius-dilatation result applies: `"1"`, `"2"` or `"none"`.
pub fn mobius_hypothesis(a: f64, theta: f64, gamma: f64) -> (&'static str, bool) {
    let c = (theta - gamma).cos();
    if (c + 1.0).abs() < BOUNDARY_TOL {
        if a >= -1.0 / 3.0 - BOUNDARY_TOL {
            ("1", true)
        } else {
            ("none", false)
        }
    } else if a * a < 1.0 / (5.0 - 4.0 * c) {
        ("2", true)
    } else {
        ("none", false)
    }
}

/// Whether `a ≥ (n-2)/(n+2)`: `"interior"`, `"boundary"` (equality) or `"none"`.
pub fn fa_star_hypothesis(n: u32, a: f64) -> (&'static str, bool) {
    let nf = f64::from(n);
    let lo = (nf - 2.0) / (nf + 2.0);
    if (a - lo).abs() <= BOUNDARY_TOL {
        ("boundary", true)
    } else if a > lo {
        ("interior", true)
    } else {
        ("none", false)
    }
}

fn convexity(
    f: &crate::mappings::HarmonicMap,
    alpha: f64,
    grid: &GridParams,
    note: &str,
) -> Result<CheckReport> {
    let curve = boundary_curve(f, grid.curve_r, grid.curve_m)?;
    match convex_in_direction_check(&curve, alpha, grid.n_lines) {
        Ok(mut rep) => {
            rep.notes = format!("{}; {note}", rep.notes);
            Ok(rep)
        }
        Err(e @ Error::DegenerateCurve { .. }) => Ok(CheckReport {
            name: "convex_in_direction".into(),
            pass: false,
            max_value: f64::INFINITY,
            witness: Complex64::new(0.0, 0.0),
            samples: curve.len(),
            tolerance: 3.0,
            notes: format!("{e}; {note}"),
        }),
        Err(e) => Err(e),
    }
}

const DIRECTION_NOTE: &str =
    "direction -t is read as lines parallel to the line through 0 and e^(-it)";

/// Convolution of `f₀` with the half-plane mapping whose dilatation is the
/// shifted Möbius map `e^{2iγ}(z e^{iθ} + a)/(1 + a z e^{iθ})`.
pub fn verify_mobius(a: f64, theta: f64, gamma: f64, grid: &GridParams) -> Result<Report> {
    check_a(a)?;
    check_angles(&[("theta", theta), ("gamma", gamma)])?;
    grid.validate()?;
    let (case, satisfied) = mobius_hypothesis(a, theta, gamma);
    let mut p = params([
        ("a", json!(a)),
        ("theta", json!(theta)),
        ("gamma", json!(gamma)),
        ("direction", json!(-gamma)),
    ]);
    grid.insert_into(&mut p);
    let mut report = Report::new(
        "verify-t1",
        p,
        Hypothesis {
            case: case.into(),
            satisfied,
        },
    );

    let m = dilatation_mobius_case(a, theta, gamma)?;
    let class = classify_blaschke(&m);
    let (i, max_zero) = m
        .zeros
        .iter()
        .map(|z| z.norm())
        .enumerate()
        .fold((0, 0.0), |b, (i, v)| if v > b.1 { (i, v) } else { b });
    report.checks.push(CheckReport {
        name: "blaschke_class".into(),
        pass: class != BlaschkeClass::Unbounded,
        max_value: max_zero,
        witness: m.zeros[i],
        samples: m.zeros.len(),
        tolerance: 1.0 + crate::rootcheck::DOMINANCE_TOL,
        notes: format!("{class:?}; largest |A_j| of the factors (z+A_j)/(1+conj(A_j) z)"),
    });
    report.checks.push(guarded(
        "grid_max_modulus",
        1.0,
        grid_max_modulus(&m, grid.r_max, grid.n_r, grid.n_phi),
    )?);

    let order = grid.effective_order();
    let omega = DilatationSpec::mobius(a, theta, gamma)?;
    let f = shear_slanted(gamma, a, &omega, order)?;
    let conv = harmonic_convolve(&f0(order), &f);
    report
        .checks
        .push(jacobian_positive(&conv, grid.r_max, grid.n_r, grid.n_phi)?);
    report
        .checks
        .push(convexity(&conv, -gamma, grid, DIRECTION_NOTE)?);
    report.conclude();
    Ok(report)
}

/// Checks on `S`, `T` and `X` over the polar grid.
fn s_checks(
    values: Result<Vec<SValues>>,
    pts: &[Complex64],
    n: u32,
    case: &str,
) -> Vec<CheckReport> {
    let values = match values {
        Ok(v) => v,
        Err(Error::DenominatorVanishes { at }) => {
            return vec![guarded(
                "s_modulus",
                1.0 + S_TOL,
                Err(Error::DenominatorVanishes { at }),
            )
            .expect("converted to a failed check")];
        }
        Err(e) => {
            return vec![CheckReport {
                name: "s_modulus".into(),
                pass: false,
                max_value: f64::INFINITY,
                witness: Complex64::new(0.0, 0.0),
                samples: 0,
                tolerance: 1.0 + S_TOL,
                notes: e.to_string(),
            }];
        }
    };
    let nf = f64::from(n);
    let s: Vec<f64> = values.iter().map(|v| v.s.norm()).collect();
    let t: Vec<f64> = values
        .iter()
        .map(|v| -v.t_expanded.min(v.t_factored))
        .collect();
    let dt: Vec<f64> = values
        .iter()
        .map(|v| (v.t_expanded - v.t_factored).abs())
        .collect();
    let x: Vec<f64> = values.iter().map(|v| -(v.x + 1.0 + nf / 2.0)).collect();
    let boundary = if case == "boundary" {
        "; a = (n-2)/(n+2) is a boundary parameter where T vanishes identically"
    } else {
        ""
    };
    vec![
        max_report(
            "s_modulus",
            pts,
            &s,
            1.0 + S_TOL,
            format!("max |S(z)| over the grid{boundary}"),
        ),
        max_report(
            "t_nonnegative",
            pts,
            &t,
            S_TOL,
            "max of -T over both forms of T".into(),
        ),
        max_report(
            "t_forms_agree",
            pts,
            &dt,
            S_TOL,
            "max |expanded T - factored T|".into(),
        ),
        max_report(
            "x_lower_bound",
            pts,
            &x,
            0.0,
            format!("max of -(X + 1 + n/2) with n = {n}; pass iff X > -1 - n/2 everywhere"),
        ),
    ]
}

/// Convolution of `f^a_γ` with the half-plane mapping of direction `γ₁` and
/// dilatation `e^{iθ} zⁿ`.
pub fn verify_half_plane(
    n: u32,
    theta: f64,
    gamma1: f64,
    gamma: f64,
    a: f64,
    grid: &GridParams,
) -> Result<Report> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    check_a(a)?;
    check_angles(&[("theta", theta), ("gamma1", gamma1), ("gamma", gamma)])?;
    grid.validate()?;
    let (case, satisfied) = fa_star_hypothesis(n, a);
    let mut p = params([
        ("n", json!(n)),
        ("theta", json!(theta)),
        ("gamma1", json!(gamma1)),
        ("gamma", json!(gamma)),
        ("a", json!(a)),
        ("direction", json!(-(gamma1 + gamma))),
    ]);
    grid.insert_into(&mut p);
    let mut report = Report::new(
        "verify-t2",
        p,
        Hypothesis {
            case: case.into(),
            satisfied,
        },
    );

    let pts = polar_grid(grid.r_max, grid.n_r, grid.n_phi);
    let values = pts
        .par_iter()
        .map(|z| s_halfplane(*z, n, theta, gamma1, gamma, a))
        .collect::<Result<Vec<_>>>();
    report.checks.extend(s_checks(values, &pts, n, case));

    let order = grid.effective_order();
    let f = shear_slanted(gamma1, 0.0, &DilatationSpec::monomial(theta, n)?, order)?;
    let conv = harmonic_convolve(&f, &f_a_gamma(a, gamma, order)?);
    report
        .checks
        .push(jacobian_positive(&conv, grid.r_max, grid.n_r, grid.n_phi)?);
    report
        .checks
        .push(convexity(&conv, -(gamma1 + gamma), grid, DIRECTION_NOTE)?);
    report.conclude();
    Ok(report)
}

/// Convolution of `f^a_γ` with the strip mapping onto `Ω_β` with dilatation `e^{iθ} zⁿ`.
pub fn verify_strip(
    n: u32,
    theta: f64,
    beta: f64,
    gamma: f64,
    a: f64,
    grid: &GridParams,
) -> Result<Report> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    check_beta(beta)?;
    check_a(a)?;
    check_angles(&[("theta", theta), ("gamma", gamma)])?;
    grid.validate()?;
    let (case, satisfied) = fa_star_hypothesis(n, a);
    let mut p = params([
        ("n", json!(n)),
        ("theta", json!(theta)),
        ("beta", json!(beta)),
        ("gamma", json!(gamma)),
        ("a", json!(a)),
        ("direction", json!(-gamma)),
    ]);
    grid.insert_into(&mut p);
    let mut report = Report::new(
        "verify-t3",
        p,
        Hypothesis {
            case: case.into(),
            satisfied,
        },
    );

    let pts = polar_grid(grid.r_max, grid.n_r, grid.n_phi);
    let values = pts
        .par_iter()
        .map(|z| s_strip(*z, n, theta, beta, gamma, a))
        .collect::<Result<Vec<_>>>();
    report.checks.extend(s_checks(values, &pts, n, case));

    let order = grid.effective_order();
    let f = strip_map(beta, &DilatationSpec::monomial(theta, n)?, order)?;
    let conv = harmonic_convolve(&f, &f_a_gamma(a, gamma, order)?);
    report
        .checks
        .push(jacobian_positive(&conv, grid.r_max, grid.n_r, grid.n_phi)?);
    report
        .checks
        .push(convexity(&conv, -gamma, grid, DIRECTION_NOTE)?);
    report.conclude();
    Ok(report)
}

/// `steps` values from `min` to `max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl SweepRange {
    pub fn new(min: f64, max: f64, steps: usize) -> Self {
        SweepRange { min, max, steps }
    }

    fn validate(&self, name: &str) -> Result<()> {
        if self.steps < 2 || !(self.min.is_finite() && self.max.is_finite()) || self.min >= self.max
        {
            return Err(Error::invalid(format!(
                "{name} range needs finite min < max and at least 2 steps"
            )));
        }
        Ok(())
    }

    /// Both endpoints included.
    pub fn closed(&self) -> Vec<f64> {
        let d = (self.max - self.min) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.max
                } else {
                    self.min + d * k as f64
                }
            })
            .collect()
    }

    /// `min` excluded, `max` included: `min + (max-min)(k+1)/steps`.
    pub fn half_open(&self) -> Vec<f64> {
        let d = (self.max - self.min) / self.steps as f64;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.max
                } else {
                    self.min + d * (k + 1) as f64
                }
            })
            .collect()
    }

    fn to_json(self) -> Value {
        json!({"min": self.min, "max": self.max, "steps": self.steps})
    }
}

/// Parameter sweep over `a` (closed range) and an angle (half-open range).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub a_range: SweepRange,
    /// `θ - γ` for the Möbius sweep, `θ` for the other two.
    pub angle_range: SweepRange,
    pub gamma: f64,
    /// Half-plane direction of the mapping convolved in the second sweep.
    pub gamma1: f64,
    pub n: Vec<u32>,
    pub beta: f64,
    pub grid: GridParams,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            a_range: SweepRange::new(-0.95, 0.95, 41),
            angle_range: SweepRange::new(-PI, PI, 41),
            gamma: 0.0,
            gamma1: 0.0,
            n: (1..=6).collect(),
            beta: PI / 2.0,
            grid: GridParams::default(),
        }
    }
}

impl SweepConfig {
    fn validate(&self) -> Result<()> {
        self.a_range.validate("a")?;
        self.angle_range.validate("angle")?;
        if self.a_range.min <= -1.0 || self.a_range.max >= 1.0 {
            return Err(Error::invalid("a range must lie inside (-1, 1)"));
        }
        check_angles(&[("gamma", self.gamma), ("gamma1", self.gamma1)])?;
        check_grid(self.grid.r_max, self.grid.n_r, self.grid.n_phi)
    }

    fn params(&self, extra: &[(&str, Value)]) -> Map<String, Value> {
        let mut p = params([
            ("a_range", self.a_range.to_json()),
            ("angle_range", self.angle_range.to_json()),
            ("gamma", json!(self.gamma)),
            ("r_max", json!(self.grid.r_max)),
            ("n_r", json!(self.grid.n_r)),
            ("n_phi", json!(self.grid.n_phi)),
        ]);
        for (k, v) in extra {
            p.insert((*k).into(), v.clone());
        }
        p
    }
}

/// Largest value with its point; NaN counts as +∞ and ties keep the first.
fn sampled_max(
    pts: &[Complex64],
    f: impl Fn(Complex64) -> Result<f64>,
) -> Result<(f64, Complex64)> {
    let mut best = (f64::NEG_INFINITY, Complex64::new(0.0, 0.0));
    for z in pts {
        let v = f(*z)?;
        let v = if v.is_nan() { f64::INFINITY } else { v };
        if v > best.0 {
            best = (v, *z);
        }
    }
    Ok(best)
}

fn summary_check(
    name: &str,
    cells: &[SweepCell],
    value: impl Fn(&SweepCell) -> f64,
    tolerance: f64,
    notes: String,
) -> CheckReport {
    let held: Vec<&SweepCell> = cells.iter().filter(|c| c.satisfied).collect();
    let (i, max) = held
        .iter()
        .map(|c| {
            let v = value(c);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        })
        .enumerate()
        .fold(
            (0, f64::NEG_INFINITY),
            |b, (i, v)| if v > b.1 { (i, v) } else { b },
        );
    let witness = held
        .get(i)
        .map(|c| Complex64::new(c.a, c.angle))
        .unwrap_or_default();
    CheckReport {
        name: name.into(),
        pass: held.iter().all(|c| c.consistent) && (held.is_empty() || max < tolerance),
        max_value: if held.is_empty() { 0.0 } else { max },
        witness,
        samples: held.len(),
        tolerance,
        notes,
    }
}

/// Sweep of the Möbius case over `(a, θ - γ)`: hypothesis flags, Blaschke
/// class and sampled `max |ω̃|` per cell.
pub fn sweep_mobius(cfg: &SweepConfig) -> Result<Report> {
    cfg.validate()?;
    let pts = polar_grid(cfg.grid.r_max, cfg.grid.n_r, cfg.grid.n_phi);
    let a_vals = cfg.a_range.closed();
    let angles = cfg.angle_range.half_open();
    let jobs: Vec<(f64, f64)> = a_vals
        .iter()
        .flat_map(|a| angles.iter().map(move |t| (*a, *t)))
        .collect();
    let cells: Vec<SweepCell> = jobs
        .par_iter()
        .map(|&(a, angle)| {
            let theta = cfg.gamma + angle;
            let (case, satisfied) = mobius_hypothesis(a, theta, cfg.gamma);
            let m = dilatation_mobius_case(a, theta, cfg.gamma)?;
            let class = classify_blaschke(&m);
            let (max, w) = match sampled_max(&pts, |z| m.eval(z).map(|v| v.norm())) {
                Ok(v) => v,
                Err(Error::DenominatorVanishes { at }) => (f64::INFINITY, at),
                Err(e) => return Err(e),
            };
            let bounded = class != BlaschkeClass::Unbounded && max < 1.0;
            Ok(SweepCell {
                a,
                angle,
                n: None,
                case: case.into(),
                satisfied,
                blaschke: Some(class),
                max_modulus: max,
                witness: [w.re, w.im],
                min_t: None,
                min_x_margin: None,
                consistent: !satisfied || bounded,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let held = cells.iter().filter(|c| c.satisfied).count();
    let empirical = cells.iter().filter(|c| c.max_modulus < 1.0).count();
    let beyond = cells
        .iter()
        .filter(|c| !c.satisfied && c.max_modulus < 1.0)
        .count();
    let mut report = Report::new(
        "sweep-t1",
        cfg.params(&[]),
        Hypothesis {
            case: "per_cell".into(),
            satisfied: held > 0,
        },
    );
    report.checks.push(summary_check(
        "hypothesis_cells_bounded",
        &cells,
        |c| c.max_modulus,
        1.0,
        format!(
            "{held} of {} cells satisfy a hypothesis; witness is (a, theta - gamma); {empirical} cells have sampled max |w| < 1, {beyond} of them outside the hypotheses",
            cells.len()
        ),
    ));
    report.checks.push(summary_check(
        "hypothesis_cells_blaschke",
        &cells,
        |c| {
            if c.blaschke == Some(BlaschkeClass::Unbounded) {
                1.0
            } else {
                0.0
            }
        },
        0.5,
        "1 marks a cell whose Blaschke factors are unbounded".into(),
    ));
    report.cells = Some(cells);
    report.conclude();
    Ok(report)
}

fn sweep_s(
    command: &str,
    cfg: &SweepConfig,
    extra: &[(&str, Value)],
    s: impl Fn(Complex64, u32, f64, f64) -> Result<SValues> + Sync,
) -> Result<Report> {
    cfg.validate()?;
    if cfg.n.is_empty() || cfg.n.contains(&0) {
        return Err(Error::invalid("n values must be positive"));
    }
    let pts = polar_grid(cfg.grid.r_max, cfg.grid.n_r, cfg.grid.n_phi);
    let a_vals = cfg.a_range.closed();
    let angles = cfg.angle_range.half_open();
    let mut jobs = Vec::new();
    for &n in &cfg.n {
        for &a in &a_vals {
            for &t in &angles {
                jobs.push((n, a, t));
            }
        }
    }
    let cells: Vec<SweepCell> = jobs
        .par_iter()
        .map(|&(n, a, theta)| {
            let (case, satisfied) = fa_star_hypothesis(n, a);
            let nf = f64::from(n);
            let mut max = (f64::NEG_INFINITY, Complex64::new(0.0, 0.0));
            let mut min_t = f64::INFINITY;
            let mut min_x = f64::INFINITY;
            let mut max_dt: f64 = 0.0;
            for z in &pts {
                match s(*z, n, theta, a) {
                    Ok(v) => {
                        let m = v.s.norm();
                        if m > max.0 || m.is_nan() {
                            max = (if m.is_nan() { f64::INFINITY } else { m }, *z);
                        }
                        min_t = min_t.min(v.t_expanded.min(v.t_factored));
                        min_x = min_x.min(v.x + 1.0 + nf / 2.0);
                        max_dt = max_dt.max((v.t_expanded - v.t_factored).abs());
                    }
                    Err(Error::DenominatorVanishes { at }) => {
                        max = (f64::INFINITY, at);
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            let ok = max.0 < 1.0 + S_TOL && min_t > -S_TOL && min_x > 0.0 && max_dt < S_TOL;
            Ok(SweepCell {
                a,
                angle: theta,
                n: Some(n),
                case: case.into(),
                satisfied,
                blaschke: None,
                max_modulus: max.0,
                witness: [max.1.re, max.1.im],
                min_t: Some(min_t),
                min_x_margin: Some(min_x),
                consistent: !satisfied || ok,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let held = cells.iter().filter(|c| c.satisfied).count();
    let beyond = cells
        .iter()
        .filter(|c| !c.satisfied && c.max_modulus < 1.0)
        .count();
    let mut p = cfg.params(extra);
    p.insert("n".into(), json!(cfg.n));
    let mut report = Report::new(
        command,
        p,
        Hypothesis {
            case: "per_cell".into(),
            satisfied: held > 0,
        },
    );
    report.checks.push(summary_check(
        "hypothesis_cells_s_modulus",
        &cells,
        |c| c.max_modulus,
        1.0 + S_TOL,
        format!(
            "{held} of {} cells satisfy a >= (n-2)/(n+2); witness is (a, theta); {beyond} cells outside it still have sampled max |S| < 1",
            cells.len()
        ),
    ));
    report.checks.push(summary_check(
        "hypothesis_cells_t_nonnegative",
        &cells,
        |c| -c.min_t.unwrap_or(f64::NEG_INFINITY),
        S_TOL,
        "max of -min T over hypothesis cells".into(),
    ));
    report.checks.push(summary_check(
        "hypothesis_cells_x_lower_bound",
        &cells,
        |c| -c.min_x_margin.unwrap_or(f64::NEG_INFINITY),
        0.0,
        "max of -(X + 1 + n/2) over hypothesis cells".into(),
    ));
    report.cells = Some(cells);
    report.conclude();
    Ok(report)
}

/// Sweep of `S` for the half-plane family over `(n, a, θ)`.
pub fn sweep_half_plane(cfg: &SweepConfig) -> Result<Report> {
    let (g1, g) = (cfg.gamma1, cfg.gamma);
    sweep_s(
        "sweep-t2",
        cfg,
        &[("gamma1", json!(g1))],
        |z, n, theta, a| s_halfplane(z, n, theta, g1, g, a),
    )
}

/// Sweep of `S` for the strip family over `(n, a, θ)`.
pub fn sweep_strip(cfg: &SweepConfig) -> Result<Report> {
    check_beta(cfg.beta)?;
    let (beta, g) = (cfg.beta, cfg.gamma);
    sweep_s(
        "sweep-t3",
        cfg,
        &[("beta", json!(beta))],
        |z, n, theta, a| s_strip(z, n, theta, beta, g, a),
    )
}

fn random_point(rng: &mut impl Rng, r_max: f64) -> Complex64 {
    Complex64::from_polar(
        r_max * rng.gen::<f64>().sqrt(),
        rng.gen_range(0.0..2.0 * PI),
    )
}

/// Random `(a, θ, γ)` inside one of the two Möbius hypothesis cases, where the
/// quotient series of `f₀ ∗ f` converges on the disk.
fn admissible_mobius(rng: &mut impl Rng) -> (f64, f64, f64) {
    let gamma = rng.gen_range(0.0..2.0 * PI);
    if rng.gen_bool(0.2) {
        return (rng.gen_range(-1.0 / 3.0..0.9), gamma + PI, gamma);
    }
    let d = rng.gen_range(-PI..PI);
    let bound = (1.0 / (5.0 - 4.0 * d.cos())).sqrt();
    (rng.gen_range(-bound..bound), gamma + d, gamma)
}

/// Randomized cross-checks between closed forms and their oracles.
pub fn selftest(seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new(
        "selftest",
        params([("seed", json!(seed))]),
        Hypothesis {
            case: "oracles".into(),
            satisfied: true,
        },
    );

    // root counts against Durand-Kerner on well-separated roots
    let mut mismatches = 0usize;
    let cases = 200;
    for _ in 0..cases {
        let d = rng.gen_range(1..=5);
        let roots: Vec<Complex64> = (0..d)
            .map(|_| loop {
                let z =
                    Complex64::from_polar(rng.gen_range(0.0..2.5), rng.gen_range(0.0..2.0 * PI));
                if (z.norm() - 1.0).abs() > 1e-3 {
                    break z;
                }
            })
            .collect();
        let lead = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..2.0 * PI));
        let p = ComplexPolynomial::from_roots(&roots);
        let p = ComplexPolynomial::new(p.coeffs().iter().map(|c| c * lead).collect());
        let expect = brute_force_roots(&p)?
            .iter()
            .filter(|z| z.norm() < 1.0)
            .count();
        if roots_in_disk_count(&p).ok() != Some(expect) {
            mismatches += 1;
        }
    }
    report.checks.push(CheckReport {
        name: "root_count_oracle".into(),
        pass: mismatches == 0,
        max_value: mismatches as f64,
        witness: Complex64::new(0.0, 0.0),
        samples: cases,
        tolerance: 0.5,
        notes: "count of random polynomials where the Cohn count and the brute-force count differ"
            .into(),
    });

    // closed-form dilatation of f0 * f against the series quotient
    let mut worst: f64 = 0.0;
    let mut witness = Complex64::new(0.0, 0.0);
    for _ in 0..10 {
        let (a, theta, gamma) = admissible_mobius(&mut rng);
        let omega = DilatationSpec::mobius(a, theta, gamma)?;
        let f = shear_slanted(gamma, a, &omega, DEFAULT_ORDER)?;
        let (closed, oracle) = dilatation_f0_star(&f, gamma, a)?;
        let product = dilatation_mobius_case(a, theta, gamma)?;
        for _ in 0..100 {
            let z = random_point(&mut rng, 0.85);
            let c = closed.eval(z)?;
            let d = (c - oracle.eval(z)?)
                .norm()
                .max((c - product.eval(z)?).norm());
            if d > worst {
                worst = d;
                witness = z;
            }
        }
    }
    report.checks.push(CheckReport {
        name: "f0_star_oracle".into(),
        pass: worst < 1e-8,
        max_value: worst,
        witness,
        samples: 1000,
        tolerance: 1e-8,
        notes: "closed form vs series quotient and product form, parameters inside the hypotheses, |z| <= 0.85".into(),
    });

    // closed-form dilatation of f^a_γ * f for strip maps
    let mut worst: f64 = 0.0;
    let mut witness = Complex64::new(0.0, 0.0);
    for _ in 0..5 {
        let beta = rng.gen_range(0.2..3.0);
        let n = rng.gen_range(1..=4);
        let theta = rng.gen_range(0.0..2.0 * PI);
        let a = rng.gen_range((f64::from(n) - 2.0) / (f64::from(n) + 2.0)..0.9);
        let gamma = rng.gen_range(0.0..2.0 * PI);
        let f = strip_map(beta, &DilatationSpec::monomial(theta, n)?, 512)?;
        let closed = dilatation_fa_star(&f, a, gamma)?;
        let conv = harmonic_convolve(&f_a_gamma(a, gamma, DEFAULT_ORDER)?, &f);
        let oracle = SeriesQuotient::of(&conv)?;
        for _ in 0..100 {
            let z = random_point(&mut rng, 0.85);
            let c = closed.eval(z)?;
            let s = s_strip(
                z * Complex64::from_polar(1.0, gamma),
                n,
                theta,
                beta,
                gamma,
                a,
            )?
            .s;
            let d = (c - oracle.eval(z)?).norm().max((c - s).norm());
            if d > worst {
                worst = d;
                witness = z;
            }
        }
    }
    report.checks.push(CheckReport {
        name: "fa_star_oracle".into(),
        pass: worst < 1e-8,
        max_value: worst,
        witness,
        samples: 500,
        tolerance: 1e-8,
        notes: "closed form vs series quotient and S(e^(i gamma) z), strip maps, a >= (n-2)/(n+2), |z| <= 0.85".into(),
    });
    report.conclude();
    Ok(report)
}
