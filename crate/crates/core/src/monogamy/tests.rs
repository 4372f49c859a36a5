use super::*;
use crate::measures::eof_two_qubit;
use crate::qcore::random::{haar_state, rng};
use crate::states::{ghz, phi_ghz, product_zero, symmetric_ghz, w_state};

fn cfg() -> MonogamyConfig {
    MonogamyConfig::default()
}

fn pure(re: &[f64]) -> PureState {
    PureState::qubits_from_real(re).unwrap()
}

fn report(psi: &PureState, nodal: &str) -> MonogamyReport {
    delta_d(&QuantumState::Pure(psi.clone()), nodal, &cfg()).unwrap()
}

/// `S_A − E^f_AB − E^f_AC`, using only Wootters' formula and spectra.
fn delta_d_oracle(psi: &PureState) -> f64 {
    let s_a = vn_entropy(&psi.reduced(&["A"]).unwrap()).unwrap();
    s_a - eof_two_qubit(&psi.reduced(&["A", "B"]).unwrap()).unwrap()
        - eof_two_qubit(&psi.reduced(&["A", "C"]).unwrap()).unwrap()
}

#[test]
fn ghz_scores() {
    let r = report(&ghz(), "A");
    assert!((r.delta_d - 1.0).abs() < 1e-6);
    assert!((r.delta_c.unwrap() - 1.0).abs() < 1e-12);
    assert!((r.d_a_bc - 1.0).abs() < 1e-12);
    assert!(r.d_ab.abs() < 1e-6 && r.d_ac.abs() < 1e-6);
    // measuring B in the computational basis fixes A
    assert!(r.s_cond_ab.abs() < 1e-6 && r.s_cond_ac.abs() < 1e-6);
    assert!((r.prop1_slack + 1.0).abs() < 1e-6);
    assert!(!r.prop1_satisfied);
    assert!((r.prop2_residual.unwrap() - 1.0).abs() < 1e-6);
    assert!(!r.heuristic && !r.zero_band);
}

#[test]
fn w_scores() {
    let r = report(&w_state(), "A");
    assert!((r.delta_d - delta_d_oracle(&w_state())).abs() < 1e-6);
    assert!(r.delta_d < -0.18 && r.delta_d > -0.19);
    assert!(r.delta_c.unwrap().abs() < 1e-12);
    assert!((r.c_ab - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn product_scores_vanish() {
    for nodal in ["A", "B", "C"] {
        let r = report(&product_zero(), nodal);
        assert!(r.delta_d.abs() < 1e-9 && r.delta_c.unwrap().abs() < 1e-12);
        assert!(r.zero_band);
    }
}

#[test]
fn bi_separable_states_have_zero_score_for_every_nodal_party() {
    let mut r = rng(60, 0);
    for _ in 0..20 {
        let one = haar_state(&mut r, vec![2]);
        let two = haar_state(&mut r, vec![2, 2]);
        for psi in [one.tensor(&two), two.tensor(&one)] {
            for nodal in ["A", "B", "C"] {
                let d = report(&psi, nodal).delta_d;
                assert!(d.abs() < 1e-6, "nodal {nodal}: {d}");
            }
        }
    }
}

#[test]
fn prop2_sign_matches_independent_delta_d() {
    let mut r = rng(61, 0);
    let search = SearchConfig::default();
    let mut both_signs = (false, false);
    for _ in 0..100 {
        let psi = haar_state(&mut r, vec![2, 2, 2]);
        let residual = prop2_residual(&psi, "A", &search).unwrap();
        let oracle = delta_d_oracle(&psi);
        assert!((residual - oracle).abs() < 1e-6, "{residual} vs {oracle}");
        if oracle.abs() > 1e-4 {
            assert_eq!(residual > 0.0, oracle > 0.0);
            if oracle > 0.0 {
                both_signs.0 = true;
            } else {
                both_signs.1 = true;
            }
        }
    }
    assert!(both_signs.0 && both_signs.1);
}

#[test]
fn report_delta_d_matches_oracle() {
    let mut r = rng(62, 0);
    for _ in 0..30 {
        let psi = haar_state(&mut r, vec![2, 2, 2]);
        let rep = report(&psi, "A");
        assert!((rep.delta_d - delta_d_oracle(&psi)).abs() < 1e-6);
        assert!((delta_d_koashi_winter(&psi, "A").unwrap() - delta_d_oracle(&psi)).abs() < 1e-12);
        assert!((rep.prop2_residual.unwrap() - rep.delta_d).abs() < 1e-9);
    }
}

#[test]
fn delta_c_nonnegative_on_haar_states() {
    let mut r = rng(63, 0);
    for _ in 0..10_000 {
        let psi = haar_state(&mut r, vec![2, 2, 2]);
        assert!(delta_c(&psi, "A").unwrap() >= -1e-10);
    }
}

#[test]
fn delta_c_is_nodal_independent_for_pure_states() {
    let mut r = rng(64, 0);
    for _ in 0..200 {
        let psi = haar_state(&mut r, vec![2, 2, 2]);
        let a = delta_c(&psi, "A").unwrap();
        for nodal in ["B", "C"] {
            let b = delta_c(&psi, nodal).unwrap();
            // concurrence carries ~1e-8 noise from square roots of vanishing eigenvalues
            assert!((b - a).abs() < 1e-7, "{a} vs {b}");
        }
    }
}

#[test]
fn pure_state_identities() {
    let mut r = rng(65, 0);
    let search = SearchConfig::default();
    for _ in 0..50 {
        let psi = haar_state(&mut r, vec![2, 2, 2]);
        assert!(kw_residual(&psi, "A", &search).unwrap().abs() < 1e-6);
        assert!(discord_eof_pure_identity(&psi, "B", &search).unwrap().abs() < 1e-6);
        let (lo, hi) = cond_entropy_bounds(&psi, "A").unwrap();
        let rep = report(&psi, "A");
        let sum = rep.s_cond_ab + rep.s_cond_ac;
        assert!(lo - 1e-9 <= sum && sum <= hi + 1e-9, "{lo} <= {sum} <= {hi}");
        assert!(rep.bounds.unwrap() == (lo, hi));
    }
}

#[test]
fn prop1_holds_on_zero_score_states() {
    let labels = ["A", "B", "C"];
    let bisep = pure(&[1., 0.]).tensor(&pure(&[0.6, 0., 0., 0.8]));
    let state = QuantumState::Pure(bisep);
    for nodal in labels {
        let (ok, slack) = prop1_check(&state, nodal, &SearchConfig::default()).unwrap();
        assert!(ok, "nodal {nodal}: {slack}");
    }
}

#[test]
fn symmetric_residual() {
    let search = SearchConfig::default();
    // S_A = 1 and S_{A|B} = 0
    assert!((symmetric_condition_residual(&ghz(), "A", &search).unwrap() - 0.5).abs() < 1e-6);
    let sym = symmetric_ghz(0.4, 1.0, 0.7, false).unwrap();
    let res = symmetric_condition_residual(&sym, "A", &search).unwrap();
    let rep = report(&sym, "A");
    assert!((2.0 * res - rep.delta_d).abs() < 1e-6);
    assert!(matches!(
        symmetric_condition_residual(&phi_ghz(), "A", &search),
        Err(Error::NotSymmetric(_))
    ));
}

#[test]
fn interaction_information_examples() {
    let mut r = rng(66, 0);
    for _ in 0..20 {
        let psi = haar_state(&mut r, vec![2, 2, 2]);
        assert!(interaction_information(&QuantumState::Pure(psi)).unwrap().abs() < 1e-9);
    }
    let zero = PureState::basis(vec![2, 2, 2], &[0, 0, 0]).unwrap().density();
    let one = PureState::basis(vec![2, 2, 2], &[1, 1, 1]).unwrap().density();
    let classical = DensityMatrix::mixture(&[(0.5, &zero), (0.5, &one)]).unwrap();
    let i = interaction_information(&QuantumState::Mixed(classical)).unwrap();
    assert!((i - 1.0).abs() < 1e-9);
}

#[test]
fn mixed_input_report() {
    let zero = PureState::basis(vec![2, 2, 2], &[0, 0, 0]).unwrap().density();
    let one = PureState::basis(vec![2, 2, 2], &[1, 1, 1]).unwrap().density();
    let classical = DensityMatrix::mixture(&[(0.5, &zero), (0.5, &one)]).unwrap();
    let rep = delta_d(&QuantumState::Mixed(classical), "A", &cfg()).unwrap();
    assert!(rep.heuristic);
    assert!(rep.delta_c.is_none() && rep.prop2_residual.is_none() && rep.bounds.is_none());
    assert!(rep.delta_d.abs() < 1e-6);
    assert!((rep.j_ab - 1.0).abs() < 1e-6);
}

#[test]
fn nodal_relabels_roles() {
    let psi = haar_state(&mut rng(67, 0), vec![2, 2, 2]);
    let moved = psi.permuted(&["B", "A", "C"]).unwrap();
    let a = report(&psi, "B");
    let b = report(&moved, "B");
    assert_eq!(a.others, ["A".to_string(), "C".to_string()]);
    assert!((a.delta_d - b.delta_d).abs() < 1e-6);
}

#[test]
fn rejects_bad_inputs() {
    assert!(matches!(
        delta_d(&QuantumState::Pure(ghz()), "X", &cfg()),
        Err(Error::UnknownLabel(_))
    ));
    let two = pure(&[1., 0., 0., 1.]);
    assert!(matches!(delta_c(&two, "A"), Err(Error::UnsupportedDimension(_))));
}

#[test]
fn serialization() {
    let rep = report(&w_state(), "C");
    assert_eq!(rep.csv_record().len(), MonogamyReport::CSV_COLUMNS.len());
    let v: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
    assert_eq!(v["nodal"], "C");
    assert!(v["delta_D"].as_f64().unwrap() < 0.0);
}
