//! JSON state files.
//!
//! Pure: `{"dims":[2,2,2], "labels":["A","B","C"], "amplitudes":[[re,im], …]}`
//! Mixed: `{"dims":[…], "labels":[…], "matrix":[[[re,im], …], …]}`
//!
//! `labels` is optional and defaults to `A, B, C, …`. Amplitudes follow the
//! party-A-most-significant index convention.

use serde::{Deserialize, Serialize};

use super::matrix::{CMatrix, C64};
use super::state::{default_labels, DensityMatrix, PureState, QuantumState};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<[f64; 2]>>>,
}

fn to_c(p: &[f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

pub fn parse_state(text: &str) -> Result<QuantumState> {
    let file: StateFile = serde_json::from_str(text)?;
    let labels = file.labels.unwrap_or_else(|| default_labels(file.dims.len()));
    match (file.amplitudes, file.matrix) {
        (Some(amps), None) => Ok(QuantumState::Pure(PureState::with_labels(
            amps.iter().map(to_c).collect(),
            file.dims,
            labels,
        )?)),
        (None, Some(rows)) => {
            let m = CMatrix::from_rows(rows.iter().map(|r| r.iter().map(to_c).collect()).collect())?;
            Ok(QuantumState::Mixed(DensityMatrix::with_labels(m, file.dims, labels)?))
        }
        _ => Err(Error::Format(
            "exactly one of `amplitudes` or `matrix` must be present".into(),
        )),
    }
}

pub fn state_to_json(state: &QuantumState) -> String {
    let file = match state {
        QuantumState::Pure(p) => StateFile {
            dims: p.dims().to_vec(),
            labels: Some(p.labels().to_vec()),
            amplitudes: Some(p.amplitudes().iter().map(|z| [z.re, z.im]).collect()),
            matrix: None,
        },
        QuantumState::Mixed(m) => StateFile {
            dims: m.dims().to_vec(),
            labels: Some(m.labels().to_vec()),
            amplitudes: None,
            matrix: Some(
                m.matrix()
                    .rows()
                    .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
                    .collect(),
            ),
        },
    };
    serde_json::to_string(&file).expect("state files always serialize")
}

pub fn read_state(path: &std::path::Path) -> Result<QuantumState> {
    parse_state(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_file_uses_index_convention() {
        let text = r#"{"dims":[2,2,2],"amplitudes":[[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[1,0]]}"#;
        let QuantumState::Pure(p) = parse_state(text).unwrap() else {
            panic!("expected pure state")
        };
        assert_eq!(p.labels(), ["A", "B", "C"]);
        assert!((p.amplitudes()[7].re - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn mixed_file_validates() {
        let ok = r#"{"dims":[2],"matrix":[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]}"#;
        assert!(matches!(parse_state(ok).unwrap(), QuantumState::Mixed(_)));
        let not_psd = r#"{"dims":[2],"matrix":[[[1.5,0],[0,0]],[[0,0],[-0.5,0]]]}"#;
        assert!(matches!(parse_state(not_psd), Err(Error::NotPsd(_))));
    }

    #[test]
    fn rejects_both_or_neither_payload() {
        assert!(parse_state(r#"{"dims":[2]}"#).is_err());
        assert!(parse_state(r#"{"dims":[2],"amplitudes":[[1,0],[0,0]],"matrix":[]}"#).is_err());
        assert!(parse_state(r#"{"dims":[2],"amplitudes":[[1,0],[0,0]],"extra":1}"#).is_err());
    }

    #[test]
    fn json_round_trip() {
        let psi = PureState::new(vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)], vec![2]).unwrap();
        let back = parse_state(&state_to_json(&psi.clone().into())).unwrap();
        assert_eq!(back, QuantumState::Pure(psi));
    }
}
