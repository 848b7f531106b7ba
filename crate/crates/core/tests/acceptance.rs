//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use harmconv::convolution::{
    dilatation_f0_star, dilatation_mobius_case, mobius_case_polynomial, reduced_root_parts,
    PointwiseMap,
};
use harmconv::geometry::{
    circle_curve, convex_in_direction_check, crescent_fixture, BoundaryCurve, DEFAULT_N_LINES,
};
use harmconv::mappings::{f0, shear_slanted, validate_normalization};
use harmconv::rootcheck::{brute_force_roots, roots_in_disk_count};
use harmconv::verify::{sweep_mobius, verify_half_plane, verify_strip, GridParams, SweepConfig};
use harmconv::{BlaschkeClass, ComplexPolynomial, DilatationSpec, PowerSeries};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn random_point(rng: &mut impl Rng, r_max: f64) -> Complex64 {
    Complex64::from_polar(r_max * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU))
}

fn f0_coefficients() -> Outcome {
    let order = 128;
    let start = Instant::now();
    let f = f0(order);
    let elapsed = start.elapsed();
    // (1-z)^{-2} as the square of the geometric series
    let geo = PowerSeries::geometric(ONE, 0, order);
    let inv_sq = geo.multiply(&geo);
    let h = PowerSeries::from_poly(&[c(0.0), c(1.0), c(-0.5)], order).multiply(&inv_sq);
    let g = PowerSeries::from_poly(&[c(0.0), c(0.0), c(-0.5)], order).multiply(&inv_sq);
    let mut worst: f64 = 0.0;
    for n in 1..=order {
        let nf = n as f64;
        worst = worst
            .max((f.h.coeff(n) - h.coeff(n)).norm())
            .max((f.g.coeff(n) - g.coeff(n)).norm())
            .max((f.h.coeff(n) - c((nf + 1.0) / 2.0)).norm())
            .max((f.g.coeff(n) - c((1.0 - nf) / 2.0)).norm());
    }
    let sum = f.h.add(&f.g);
    let target = PowerSeries::geometric(ONE, 1, order);
    let sum_err = sum
        .coeffs()
        .iter()
        .zip(target.coeffs())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    outcome(
        worst < 1e-12 && sum_err < 1e-12 && elapsed < Duration::from_millis(1),
        format!("max coefficient error {worst:.1e}, |h+g - z/(1-z)| {sum_err:.1e}, built in {elapsed:?}"),
    )
}

/// Random `(a, θ, γ)` satisfying one of the two hypothesis cases.
fn admissible(rng: &mut impl Rng) -> (f64, f64, f64) {
    let gamma = rng.gen_range(0.0..TAU);
    if rng.gen_bool(0.2) {
        (rng.gen_range(-1.0 / 3.0..0.99), gamma + PI, gamma)
    } else {
        let d = rng.gen_range(-PI..PI);
        let bound = (1.0 / (5.0 - 4.0 * d.cos())).sqrt();
        (rng.gen_range(-bound..bound), gamma + d, gamma)
    }
}

fn f0_star_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let (a, theta, gamma) = admissible(&mut rng);
        let omega = DilatationSpec::mobius(a, theta, gamma).unwrap();
        let f = shear_slanted(gamma, a, &omega, 128).unwrap();
        let (closed, oracle) = dilatation_f0_star(&f, gamma, a).unwrap();
        for _ in 0..100 {
            let z = random_point(&mut rng, 0.85);
            worst = worst.max((closed.eval(z).unwrap() - oracle.eval(z).unwrap()).norm());
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst < 1e-8 && elapsed < Duration::from_secs(5),
        format!("max |closed - series| {worst:.2e} over 5000 points, {elapsed:.2?}"),
    )
}

fn mobius_structure() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut recon, mut vieta): (f64, f64) = (0.0, 0.0);
    for _ in 0..200 {
        let a = rng.gen_range(-0.99..0.99);
        let theta = rng.gen_range(0.0..TAU);
        let gamma = rng.gen_range(0.0..TAU);
        let t = mobius_case_polynomial(a, theta, gamma);
        let m = dilatation_mobius_case(a, theta, gamma).unwrap();
        let star = t.conjugate_reciprocal();
        let den = m.denominator();
        for k in 0..=2 {
            recon = recon.max((star.coeffs()[k] - den.coeffs()[k]).norm());
        }
        let (za, zb) = (m.zeros[0], m.zeros[1]);
        let sum = 0.5 * (3.0 * a + 1.0) * Complex64::from_polar(1.0, -theta);
        vieta = vieta
            .max((za * zb - t.coeffs()[0]).norm())
            .max((za + zb - sum).norm());
    }
    outcome(
        recon < 1e-10 && vieta < 1e-10,
        format!("t* reconstruction {recon:.1e}, Vieta {vieta:.1e} over 200 draws"),
    )
}

fn algebraic_identities() -> Outcome {
    let (mut e1, mut e2): (f64, f64) = (0.0, 0.0);
    let gamma = 0.7;
    for i in 0..41 {
        let a = -0.95 + 1.9 * i as f64 / 40.0;
        for j in 0..41 {
            let d = -PI + TAU * (j + 1) as f64 / 41.0;
            let theta = gamma + d;
            let cos = d.cos();
            let t = mobius_case_polynomial(a, theta, gamma);
            let lhs = t.coeffs()[2].norm_sqr() - t.coeffs()[0].norm_sqr();
            e1 = e1.max((lhs - (1.0 - a) / 4.0 * (a * (5.0 - 4.0 * cos) + 3.0)).abs());
            let (u, v) = reduced_root_parts(a, theta, gamma);
            let lhs = v * v - u.norm_sqr();
            e2 = e2.max((lhs - 4.0 * (1.0 + cos) * (1.0 - a * a * (5.0 - 4.0 * cos))).abs());
        }
    }
    outcome(
        e1 < 1e-10 && e2 < 1e-10,
        format!("leading-minus-constant identity {e1:.1e}, |v|^2-|u|^2 identity {e2:.1e} on 41x41"),
    )
}

fn region_sweep() -> Outcome {
    let start = Instant::now();
    let report = sweep_mobius(&SweepConfig::default()).unwrap();
    let elapsed = start.elapsed();
    let cells = report.cells.as_ref().unwrap();
    let held: Vec<_> = cells.iter().filter(|c| c.satisfied).collect();
    let violations = held
        .iter()
        .filter(|c| {
            c.blaschke == Some(BlaschkeClass::Unbounded)
                || c.max_modulus.is_nan()
                || c.max_modulus >= 1.0
        })
        .count();
    let worst = held.iter().map(|c| c.max_modulus).fold(0.0, f64::max);
    outcome(
        cells.len() == 41 * 41
            && !held.is_empty()
            && violations == 0
            && elapsed < Duration::from_secs(30),
        format!(
            "{} hypothesis cells of {}, {violations} violations, max |w| {worst:.6}, {elapsed:.2?}",
            held.len(),
            cells.len()
        ),
    )
}

fn case1_roots() -> Outcome {
    let mut worst: f64 = 0.0;
    let gamma = 0.4;
    let theta = gamma + PI;
    for a in [-1.0 / 3.0, 0.0, 0.5, 0.9] {
        let m = dilatation_mobius_case(a, theta, gamma).unwrap();
        let e = Complex64::from_polar(1.0, -theta);
        let (ea, eb) = (e, 0.5 * (3.0 * a - 1.0) * e);
        let (x, y) = (m.zeros[0], m.zeros[1]);
        let d = ((x - ea).norm().max((y - eb).norm())).min((x - eb).norm().max((y - ea).norm()));
        worst = worst.max(d);
    }
    outcome(worst < 1e-10, format!("max root error {worst:.1e}"))
}

fn pipeline(
    label: &str,
    run: impl Fn(u32, f64, &mut ChaCha8Rng) -> harmconv::report::Report,
    seed: u64,
    repeat: usize,
) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = Instant::now();
    let mut runs = 0;
    let mut failures = Vec::new();
    let (mut worst_s, mut worst_dt): (f64, f64) = (0.0, 0.0);
    for n in 1..=6u32 {
        let lo = (f64::from(n) - 2.0) / (f64::from(n) + 2.0);
        for a in [lo, 0.5 * (lo + 0.9), 0.9] {
            for _ in 0..repeat {
                let r = run(n, a, &mut rng);
                runs += 1;
                for ch in &r.checks {
                    match ch.name.as_str() {
                        "s_modulus" => worst_s = worst_s.max(ch.max_value),
                        "t_forms_agree" => worst_dt = worst_dt.max(ch.max_value),
                        _ => {}
                    }
                    if !ch.pass {
                        failures.push(format!("{} at n={n}, a={a:.4}, {}", ch.name, angles(&r)));
                    }
                }
                if !r.hypothesis.satisfied {
                    failures.push(format!("hypothesis rejected for n={n}, a={a}"));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let detail = format!(
        "{label}: {runs} runs, max |S| {worst_s:.6}, max T mismatch {worst_dt:.1e}, {} failed checks{}, {elapsed:.2?}",
        failures.len(),
        if failures.is_empty() { String::new() } else { format!(" [{}]", failures.join("; ")) }
    );
    outcome(failures.is_empty(), detail)
}

fn angles(r: &harmconv::report::Report) -> String {
    ["theta", "gamma1", "gamma"]
        .iter()
        .filter_map(|k| {
            r.params
                .get(*k)
                .and_then(|v| v.as_f64())
                .map(|v| format!("{k}={v:.6}"))
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn halfplane_pipeline() -> Outcome {
    let grid = GridParams::default();
    pipeline(
        "half-plane",
        |n, a, rng| {
            let theta = rng.gen_range(0.0..TAU);
            let gamma1 = rng.gen_range(0.0..TAU);
            let gamma = rng.gen_range(0.0..TAU);
            verify_half_plane(n, theta, gamma1, gamma, a, &grid).unwrap()
        },
        7,
        3,
    )
}

fn strip_pipeline() -> Outcome {
    let grid = GridParams::default();
    let mut all = Vec::new();
    for (k, beta) in [PI / 4.0, PI / 2.0, 3.0 * PI / 4.0].into_iter().enumerate() {
        all.push(pipeline(
            &format!("beta={beta:.4}"),
            |n, a, rng| {
                let theta = rng.gen_range(0.0..TAU);
                let gamma = rng.gen_range(0.0..TAU);
                verify_strip(n, theta, beta, gamma, a, &grid).unwrap()
            },
            80 + k as u64,
            3,
        ));
    }
    outcome(
        all.iter().all(|o| o.pass),
        all.iter()
            .map(|o| o.detail.as_str())
            .collect::<Vec<_>>()
            .join("; "),
    )
}

fn root_counts() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let start = Instant::now();
    let mut agree = 0;
    let mut total = 0;
    while total < 1000 {
        let d = rng.gen_range(1..=5);
        let coeffs: Vec<Complex64> = (0..=d)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let p = ComplexPolynomial::new(coeffs);
        if p.degree() != d {
            continue;
        }
        let roots = brute_force_roots(&p).unwrap();
        if roots.iter().any(|z| (z.norm() - 1.0).abs() < 1e-3) {
            continue;
        }
        total += 1;
        let expect = roots.iter().filter(|z| z.norm() < 1.0).count();
        if roots_in_disk_count(&p).ok() == Some(expect) {
            agree += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        agree == total && elapsed < Duration::from_secs(10),
        format!("{agree}/{total} agree, {elapsed:.2?}"),
    )
}

fn normalization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut ok = 0;
    for _ in 0..20 {
        let a = loop {
            let a: f64 = rng.gen_range(-0.95..0.95);
            if a.abs() > 1e-3 {
                break a;
            }
        };
        let omega = DilatationSpec::reflected(a, 0.0).unwrap();
        let plain = PowerSeries::geometric(ONE, 1, 16);
        let corrected = plain.scale(c(1.0 + a));
        let flagged = !validate_normalization(&plain, &omega).pass;
        let accepted = validate_normalization(&corrected, &omega).pass;
        if flagged && accepted {
            ok += 1;
        }
    }
    outcome(
        ok == 20,
        format!("{ok}/20 values of a: z/(1-z) flagged, (1+a)z/(1-z) accepted"),
    )
}

fn convexity_fixtures() -> Outcome {
    let circle = circle_curve(0.8, 256).unwrap();
    let crescent = crescent_fixture();
    let directions: Vec<f64> = (0..8).map(|k| PI * k as f64 / 8.0).collect();
    let circle_ok = directions.iter().all(|&al| {
        convex_in_direction_check(&circle, al, DEFAULT_N_LINES)
            .unwrap()
            .pass
    });
    let crescent_fails = !convex_in_direction_check(&crescent, 0.0, DEFAULT_N_LINES)
        .unwrap()
        .pass;
    let equivariant = |curve: &BoundaryCurve| {
        directions.iter().all(|&al| {
            [0.3, 1.0, 2.5, -0.7].iter().all(|&phi| {
                let a = convex_in_direction_check(curve, al, DEFAULT_N_LINES).unwrap();
                let b =
                    convex_in_direction_check(&curve.rotate_points(phi), al + phi, DEFAULT_N_LINES)
                        .unwrap();
                a.pass == b.pass && a.max_value == b.max_value
            })
        })
    };
    let eq = equivariant(&circle) && equivariant(&crescent);
    outcome(
        circle_ok && crescent_fails && eq,
        format!("circle passes 8 directions: {circle_ok}, fixture fails at 0: {crescent_fails}, rotation equivariance: {eq}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("f0 coefficients", f0_coefficients),
        ("f0 convolution dilatation vs series oracle", f0_star_oracle),
        ("Mobius-case factor structure", mobius_structure),
        ("Mobius-case algebraic identities", algebraic_identities),
        ("Mobius-case region sweep", region_sweep),
        ("antipodal-case roots", case1_roots),
        ("half-plane convolution pipeline", halfplane_pipeline),
        ("strip convolution pipeline", strip_pipeline),
        ("root count vs brute force", root_counts),
        ("normalization inconsistency detection", normalization),
        ("convexity fixtures", convexity_fixtures),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} ({})",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            name,
            o.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
