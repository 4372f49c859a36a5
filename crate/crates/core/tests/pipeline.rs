use qmono_core::bell::{mk_optimize, MkSearch};
use qmono_core::exec::Execution;
use qmono_core::monogamy::{delta_d, MonogamyConfig};
use qmono_core::qcore::io::{parse_state, state_to_json};
use qmono_core::qcore::QuantumState;
use qmono_core::scan::{grid_scan, sample_experiment, Axis, ScanOptions};
use qmono_core::states::{self, Family};

#[test]
fn json_round_trip_keeps_the_report() {
    let w: QuantumState = states::w_state().into();
    let again = parse_state(&state_to_json(&w)).unwrap();
    let cfg = MonogamyConfig::default();
    let a = delta_d(&w, "B", &cfg).unwrap();
    let b = delta_d(&again, "B", &cfg).unwrap();
    assert!((a.delta_d - b.delta_d).abs() < 1e-12);
    assert!(a.delta_d < 0.0);
}

#[test]
fn ghz_end_to_end() {
    let ghz: QuantumState = states::ghz().into();
    let rep = delta_d(&ghz, "A", &MonogamyConfig::default()).unwrap();
    assert!((rep.delta_d - 1.0).abs() < 1e-9);
    let mk = mk_optimize(
        &ghz,
        &MkSearch {
            restarts: 5,
            ..MkSearch::default()
        },
    )
    .unwrap();
    assert!((mk.value - 2.0).abs() < 1e-6);
}

#[test]
fn execution_mode_does_not_change_results() {
    let par = ScanOptions::default();
    let seq = ScanOptions {
        exec: Execution::Sequential,
        ..ScanOptions::default()
    };
    let a = sample_experiment(24, 3, 1e-3, &par).unwrap();
    let b = sample_experiment(24, 3, 1e-3, &seq).unwrap();
    assert_eq!(a.summary.line(), b.summary.line());

    let axes = [Axis::point(0.6), Axis::new(0.0, 3.0, 3), Axis::new(0.2, 1.5, 4)];
    let ga = grid_scan(Family::SymmetricGhz, &axes, &par).unwrap();
    let gb = grid_scan(Family::SymmetricGhz, &axes, &seq).unwrap();
    assert_eq!(ga.len(), 12);
    for (x, y) in ga.iter().zip(&gb) {
        assert_eq!(x.params, y.params);
        assert_eq!(x.delta_d.to_bits(), y.delta_d.to_bits());
    }
}
