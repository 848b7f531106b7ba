use std::f64::consts::PI;

use harmconv::report::Verdict;
use harmconv::verify::{
    sweep_half_plane, sweep_mobius, sweep_strip, verify_half_plane, verify_mobius, verify_strip,
    GridParams, SweepConfig, SweepRange,
};
use harmconv::BlaschkeClass;

fn assert_all_pass(r: &harmconv::report::Report) {
    for c in &r.checks {
        assert!(c.pass, "{} failed: {} ({})", c.name, c.max_value, c.notes);
    }
    assert_eq!(r.verdict, Verdict::Consistent);
}

#[test]
fn mobius_case_examples() {
    let grid = GridParams::default();
    let r = verify_mobius(0.5, PI, 0.0, &grid).unwrap();
    assert_eq!(r.hypothesis.case, "1");
    assert_all_pass(&r);
    let r = verify_mobius(0.3, PI / 2.0, 0.0, &grid).unwrap();
    assert_eq!(r.hypothesis.case, "2");
    assert_all_pass(&r);
    let r = verify_mobius(0.9, PI / 2.0, 0.0, &grid).unwrap();
    assert!(!r.hypothesis.satisfied);
    assert_eq!(r.verdict, Verdict::HypothesesNotSatisfied);
    assert_eq!(r.exit_code(), 0);
    assert_eq!(r.checks.len(), 4);
}

#[test]
fn half_plane_examples() {
    let grid = GridParams::default();
    assert_all_pass(&verify_half_plane(1, 0.0, 0.0, 0.0, 0.0, &grid).unwrap());
    let r = verify_half_plane(4, 0.0, 0.0, 0.0, 1.0 / 3.0, &grid).unwrap();
    assert_eq!(r.hypothesis.case, "boundary");
    assert_all_pass(&r);
    assert_all_pass(&verify_half_plane(3, 0.0, PI / 4.0, PI / 6.0, 0.5, &grid).unwrap());
}

#[test]
fn strip_examples() {
    let grid = GridParams::default();
    assert_all_pass(&verify_strip(1, 0.0, PI / 2.0, 0.0, 0.0, &grid).unwrap());
    assert_all_pass(&verify_strip(5, 0.0, PI / 3.0, 0.0, 0.6, &grid).unwrap());
    assert!(verify_strip(1, 0.0, 0.0, 0.0, 0.0, &grid).is_err());
    assert!(verify_strip(1, 0.0, PI, 0.0, 0.0, &grid).is_err());
}

#[test]
fn outside_hypotheses_is_reported_not_errored() {
    let grid = GridParams::default();
    let r = verify_half_plane(6, 0.3, 0.0, 0.0, 0.0, &grid).unwrap();
    assert!(!r.hypothesis.satisfied);
    assert_eq!(r.verdict, Verdict::HypothesesNotSatisfied);
    assert!(r.checks.iter().any(|c| !c.pass));
}

#[test]
fn invalid_parameters() {
    let grid = GridParams::default();
    assert!(verify_mobius(1.0, 0.0, 0.0, &grid).is_err());
    assert!(verify_half_plane(0, 0.0, 0.0, 0.0, 0.0, &grid).is_err());
    let bad = GridParams {
        r_max: 1.0,
        ..GridParams::default()
    };
    assert!(verify_mobius(0.0, PI, 0.0, &bad).is_err());
}

#[test]
fn full_mobius_sweep_bounded_in_second_case() {
    let r = sweep_mobius(&SweepConfig::default()).unwrap();
    let cells = r.cells.as_ref().unwrap();
    assert_eq!(cells.len(), 41 * 41);
    let second: Vec<_> = cells.iter().filter(|c| c.case == "2").collect();
    assert!(!second.is_empty());
    assert!(second
        .iter()
        .all(|c| c.blaschke == Some(BlaschkeClass::BoundedByOne)));
    assert_eq!(r.verdict, Verdict::Consistent);
}

#[test]
fn degenerate_sweep_is_well_formed() {
    let cfg = SweepConfig {
        a_range: SweepRange::new(-0.5, 0.5, 2),
        angle_range: SweepRange::new(-PI, PI, 2),
        ..SweepConfig::default()
    };
    let r = sweep_mobius(&cfg).unwrap();
    assert_eq!(r.cells.as_ref().unwrap().len(), 4);
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(v["cells"].as_array().unwrap().len(), 4);
}

#[test]
fn antipodal_column_at_threshold_is_boundary() {
    let cfg = SweepConfig {
        a_range: SweepRange::new(-1.0 / 3.0, 0.5, 5),
        angle_range: SweepRange::new(-PI, PI, 4),
        ..SweepConfig::default()
    };
    let r = sweep_mobius(&cfg).unwrap();
    let cells = r.cells.unwrap();
    let first = cells
        .iter()
        .find(|c| c.a == -1.0 / 3.0 && c.angle == PI)
        .expect("cell at a = -1/3, angle = pi");
    assert_eq!(first.case, "1");
    assert!(first.satisfied);
    assert_eq!(first.blaschke, Some(BlaschkeClass::Boundary));
    for c in cells.iter().filter(|c| c.angle == PI) {
        assert_eq!(c.case, "1");
        assert_eq!(c.blaschke, Some(BlaschkeClass::Boundary));
    }
}

#[test]
fn small_half_plane_and_strip_sweeps() {
    let cfg = SweepConfig {
        a_range: SweepRange::new(-0.5, 0.8, 3),
        angle_range: SweepRange::new(-PI, PI, 3),
        n: vec![1, 5],
        ..SweepConfig::default()
    };
    for r in [sweep_half_plane(&cfg).unwrap(), sweep_strip(&cfg).unwrap()] {
        let cells = r.cells.as_ref().unwrap();
        assert_eq!(cells.len(), 2 * 3 * 3);
        assert!(cells.iter().all(|c| c.n.is_some()));
        assert!(cells.iter().filter(|c| c.satisfied).all(|c| c.consistent));
        assert_eq!(r.verdict, Verdict::Consistent);
    }
}
