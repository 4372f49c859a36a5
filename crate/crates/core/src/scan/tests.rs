use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use super::*;
use crate::qcore::random::{haar_state, rng};
use crate::states::{ghz, product_zero, w_state};

fn seq() -> ScanOptions {
    ScanOptions {
        exec: Execution::Sequential,
        ..ScanOptions::default()
    }
}

#[test]
fn float_format() {
    let cases = [
        (1.0, "1"),
        (0.1, "0.1"),
        (1.0 / 3.0, "0.333333333"),
        (-2.5, "-2.5"),
        (123456789.123, "123456789"),
        (1e-7, "1e-07"),
        (1.5e10, "1.5e+10"),
        (0.00001234567891, "1.23456789e-05"),
        (0.0001234567891, "0.000123456789"),
        (0.0, "0"),
        (999999999.7, "1e+09"),
        (0.00012345678949, "0.000123456789"),
    ];
    for (x, s) in cases {
        assert_eq!(format_float(x), s, "{x}");
    }
}

#[test]
fn pure_scores_match_report() {
    let mut r = rng(80, 0);
    for _ in 0..10 {
        let psi = haar_state(&mut r, vec![2, 2, 2]);
        let s = pure_scores(&psi, "A", &SearchConfig::default(), false).unwrap();
        let rep = crate::monogamy::delta_d(&psi.clone().into(), "A", &Default::default()).unwrap();
        assert!((s.delta_d - rep.delta_d).abs() < 1e-9);
        assert!((s.delta_c - rep.delta_c.unwrap()).abs() < 1e-12);
        assert!((s.d_ab - rep.d_ab).abs() < 1e-9);
    }
    let w = pure_scores(&w_state(), "B", &SearchConfig::default(), true).unwrap();
    let w_full = pure_scores(&w_state(), "B", &SearchConfig::default(), false).unwrap();
    assert!((w.delta_d - w_full.delta_d).abs() < 1e-12);
}

#[test]
fn axis_values() {
    assert_eq!(Axis::new(0.0, 1.0, 5).values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    assert_eq!(Axis::point(0.3).values(), vec![0.3]);
    assert_eq!(Axis::new(0.0, FRAC_PI_2, 7).values()[6], FRAC_PI_2);
}

#[test]
fn grid_is_row_major_and_echoes_parameters() {
    let axes = [Axis::new(0.2, 0.4, 2), Axis::new(0.0, 1.0, 3), Axis::point(1.0)];
    let rows = grid_scan(Family::SymmetricGhz, &axes, &seq()).unwrap();
    let params: Vec<Vec<f64>> = rows.iter().map(|r| r.params.clone()).collect();
    let mut expected = Vec::new();
    for t in [0.2, 0.4] {
        for k in [0.0, 0.5, 1.0] {
            expected.push(vec![t, k, 1.0]);
        }
    }
    assert_eq!(params, expected);
}

#[test]
fn grid_errors() {
    assert!(grid_scan(Family::SymmetricGhz, &[Axis::point(0.1)], &seq()).is_err());
    let empty = [Axis::new(0.1, 0.2, 0), Axis::point(0.0), Axis::point(1.0)];
    assert!(matches!(
        grid_scan(Family::SymmetricGhz, &empty, &seq()),
        Err(Error::Scan(_))
    ));
}

#[test]
fn ghz_point() {
    let opts = ScanOptions {
        mk: Some(MkSearch::default()),
        ..seq()
    };
    let axes = [Axis::point(FRAC_PI_4), Axis::point(0.0), Axis::point(FRAC_PI_2)];
    let rows = grid_scan(Family::SymmetricGhz, &axes, &opts).unwrap();
    let r = &rows[0];
    assert!((r.delta_d - 1.0).abs() < 1e-6);
    assert!((r.ggm - 0.5).abs() < 1e-9);
    assert!((r.mk.unwrap() - 2.0).abs() < 1e-4);
    assert!((r.symmetric_residual.unwrap() - 0.5).abs() < 1e-6);
}

#[test]
fn degenerate_face_is_in_band() {
    let axes = [Axis::point(0.0), Axis::new(0.0, 6.0, 4), Axis::new(0.1, 1.5, 4)];
    for r in grid_scan(Family::SymmetricGhz, &axes, &seq()).unwrap() {
        assert!(r.delta_d.abs() < 1e-9 && r.zero_band && r.ggm.abs() < 1e-9);
    }
}

#[test]
fn ggm_rises_along_alpha_at_maximal_theta() {
    let axes = [Axis::point(FRAC_PI_4), Axis::point(0.2), Axis::new(0.05, FRAC_PI_2, 12)];
    let g: Vec<f64> = grid_scan(Family::SymmetricGhz, &axes, &seq())
        .unwrap()
        .iter()
        .map(|r| r.ggm)
        .collect();
    assert!(g.windows(2).all(|w| w[1] >= w[0] - 1e-12));
    assert!((g[11] - 0.5).abs() < 1e-9);
}

#[test]
fn csv_output() {
    let axes = [Axis::point(0.4), Axis::point(1.0), Axis::new(0.5, 1.0, 2)];
    let rows = grid_scan(Family::SymmetricGhz, &axes, &seq()).unwrap();
    let mut buf = Vec::new();
    write_records(&mut buf, Family::SymmetricGhz, &rows).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "family,p1,p2,p3,delta_D,delta_C,ggm,mk,zero_band");
    assert_eq!(lines.len(), 3);
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields[0], "symmetric_ghz");
    assert_eq!(fields[1], "0.4");
    assert_eq!(fields[7], "");
    assert_eq!(
        fields[4].parse::<f64>().unwrap(),
        format_float(rows[0].delta_d).parse::<f64>().unwrap()
    );
}

#[test]
fn line_spec_validation() {
    assert!(LineSpec::new(Family::SymmetricGhz, vec![0.4, 1.0], 2, 0.0, 1.0).is_err());
    assert!(LineSpec::new(Family::SymmetricGhz, vec![0.4, 1.0, 0.0], 3, 0.0, 1.0).is_err());
    assert!(LineSpec::new(Family::SymmetricGhz, vec![0.4, 1.0, 0.0], 2, 1.0, 1.0).is_err());
    assert!(LineSpec::path(Family::WClass).is_err());
}

#[test]
fn crossing_on_fixed_line() {
    let line = LineSpec::new(Family::SymmetricGhz, vec![0.4, 1.0, 0.0], 2, 0.0, FRAC_PI_2).unwrap();
    let c = find_zero_crossings(&line, &CrossingOptions::default(), &seq()).unwrap();
    assert_eq!(c.len(), 1);
    let c = &c[0];
    assert!(c.rising && c.width <= 1e-6);
    assert!(c.delta_low < 0.0 && c.delta_high > 0.0);
    assert!(c.delta_at.abs() < DEFAULT_EPSILON);
    assert!((c.location - 0.4732).abs() < 1e-3);
}

#[test]
fn no_sign_change_gives_no_crossing() {
    // the tri-separable face θ = 0
    let line = LineSpec::new(Family::SymmetricGhz, vec![0.0, 1.0, 0.0], 2, 0.0, FRAC_PI_2).unwrap();
    let cross = CrossingOptions {
        presample: 20,
        ..Default::default()
    };
    assert!(find_zero_crossings(&line, &cross, &seq()).unwrap().is_empty());
}

#[test]
fn path_crossing_counts() {
    let cross = CrossingOptions::default();
    let ghz_path = find_zero_crossings(&LineSpec::path(Family::PathGhz).unwrap(), &cross, &seq()).unwrap();
    assert_eq!(ghz_path.len(), 3);
    assert_eq!(
        ghz_path.iter().map(|c| c.rising).collect::<Vec<_>>(),
        [true, false, true]
    );
    let w_path = find_zero_crossings(&LineSpec::path(Family::PathWGhz).unwrap(), &cross, &seq()).unwrap();
    assert_eq!(w_path.len(), 1);
}

#[test]
fn surface_matches_line_and_closed_form() {
    let cross = CrossingOptions {
        presample: 100,
        ..Default::default()
    };
    let pts = surface_zero(Axis::point(0.4), Axis::point(1.0), &cross, &seq()).unwrap();
    assert_eq!(pts.len(), 1);
    assert!((pts[0].alpha - 0.4732).abs() < 1e-3);
    assert!(pts[0].closed_form_residual.unwrap().abs() < 1e-4);
    // below the surface the score is negative, above it positive
    let below = evaluate(Family::SymmetricGhz, &[0.4, 1.0, pts[0].alpha - 0.05], &seq()).unwrap();
    let above = evaluate(Family::SymmetricGhz, &[0.4, 1.0, pts[0].alpha + 0.05], &seq()).unwrap();
    assert!(below.delta_d < 0.0 && above.delta_d > 0.0);
}

#[test]
fn surface_condition_at_ghz() {
    // 2·0 − H(½)
    assert!((surface_condition_residual(FRAC_PI_4, 0.0, FRAC_PI_2).unwrap() + 1.0).abs() < 1e-12);
}

#[test]
fn path_trace_endpoints() {
    let opts = ScanOptions {
        mk: Some(MkSearch {
            restarts: 10,
            ..MkSearch::default()
        }),
        ..seq()
    };
    let rows = path_trace(Family::PathGhz, 3, &opts).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].delta_d < 0.0);
    assert!((rows[2].delta_d - 1.0).abs() < 1e-6 && (rows[2].ggm - 0.5).abs() < 1e-9);
    assert!((rows[2].mk.unwrap() - 2.0).abs() < 1e-4);
    let w = path_trace(Family::PathWGhz, 2, &opts).unwrap();
    assert!((w[1].ggm - 0.5).abs() < 1e-9);
    assert!(path_trace(Family::PathGhz, 1, &opts).is_err());
    assert!(path_trace(Family::SymmetricGhz, 5, &opts).is_err());
}

#[test]
fn sampling_is_deterministic() {
    let a = sample_experiment(40, 9, SAMPLE_EPSILON, &seq()).unwrap();
    let b = sample_experiment(
        40,
        9,
        SAMPLE_EPSILON,
        &ScanOptions {
            exec: Execution::Parallel,
            ..ScanOptions::default()
        },
    )
    .unwrap();
    let bits = |r: &SampleRun| {
        r.records
            .iter()
            .map(|x| (x.delta_d.to_bits(), x.ggm.to_bits()))
            .collect::<Vec<_>>()
    };
    assert_eq!(bits(&a), bits(&b));
    assert_eq!(a.summary.ggm_histogram.iter().sum::<usize>(), 40);
    let c = sample_experiment(40, 10, SAMPLE_EPSILON, &seq()).unwrap();
    assert_ne!(bits(&a), bits(&c));
}

#[test]
fn single_sample_summary() {
    let run = sample_experiment(1, 3, SAMPLE_EPSILON, &seq()).unwrap();
    let r = &run.records[0];
    let s = &run.summary;
    assert_eq!(s.n, 1);
    assert_eq!(s.max_ggm, r.ggm);
    assert_eq!(s.min_delta_d, r.delta_d);
    assert_eq!(s.max_delta_d, r.delta_d);
    assert_eq!(s.in_band, usize::from(r.zero_band));
    let psi = haar_random(3, 0);
    assert!((ggm(&psi).unwrap() - r.ggm).abs() < 1e-15);
    assert!(sample_experiment(0, 3, SAMPLE_EPSILON, &seq()).is_err());
    let mut buf = Vec::new();
    write_samples(&mut buf, &run.records).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 2);
}

#[test]
fn prop4_examples() {
    let z = prop4_check(&product_zero(), &seq()).unwrap();
    assert!(z.lhs.abs() < 1e-12 && z.rhs.abs() < 1e-12 && z.satisfied && z.precondition_met);
    assert!(z.symmetric_equality_residual.unwrap() < 1e-12);
    let g = prop4_check(&ghz(), &seq()).unwrap();
    assert!(!g.precondition_met && !g.satisfied);
    assert!(g.lhs.abs() < 1e-9 && (g.rhs - 1.0).abs() < 1e-12);
    assert!(g.symmetric_equality_residual.is_none());
}

#[test]
fn zero_score_states_are_in_band() {
    let states = zero_score_states(6, 11, "A", Execution::Sequential).unwrap();
    for psi in &states {
        let s = pure_scores(psi, "A", &SearchConfig::default(), false).unwrap();
        assert!(s.delta_d.abs() < 1e-6, "{}", s.delta_d);
        assert!(s.ggm > 0.0);
    }
    let again = zero_score_states(6, 11, "A", Execution::Parallel).unwrap();
    assert_eq!(states, again);
}

#[test]
fn violation_region_small_grid() {
    let v = violation_region(6, &seq()).unwrap();
    assert_eq!(v.points, 216);
    assert!(v.violating > 0 && v.violating < 216);
    assert!(v.min_delta_d.is_some());
}

proptest::proptest! {
    #[test]
    fn formatted_floats_round_trip(x in proptest::num::f64::NORMAL) {
        let back: f64 = format_float(x).parse().unwrap();
        proptest::prop_assert!(((back - x) / x).abs() <= 5e-9);
    }

    #[test]
    fn axis_endpoints_are_exact(start in -10.0f64..10.0, len in 0.0f64..10.0, steps in 2usize..500) {
        let v = Axis::new(start, start + len, steps).values();
        proptest::prop_assert_eq!(v.len(), steps);
        proptest::prop_assert_eq!(v[0], start);
        proptest::prop_assert_eq!(v[steps - 1], start + len);
    }
}
