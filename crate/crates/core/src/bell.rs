//! Mermin–Klyshko Bell operators.
//!
//! `B_1 = σ_{a_1}` and
//! `B_k = ½ B_{k−1} ⊗ (σ_{a_k} + σ_{a'_k}) + ½ B'_{k−1} ⊗ (σ_{a_k} − σ_{a'_k})`,
//! where `B'` swaps every `a_j` with `a'_j`. Local realism bounds `|⟨B_N⟩|` by 1.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::optimize::NelderMead;
use crate::qcore::matrix::{pauli_dot, CMatrix, C64, ZERO};
use crate::qcore::random::rng;
use crate::qcore::QuantumState;

pub const MAX_PARTIES: usize = 6;
const UNIT_TOL: f64 = 1e-10;

/// Two measurement directions per party.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MKSettings {
    a: Vec<[f64; 3]>,
    a_prime: Vec<[f64; 3]>,
}

fn unit(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

impl MKSettings {
    pub fn new(a: Vec<[f64; 3]>, a_prime: Vec<[f64; 3]>) -> Result<Self> {
        if a.is_empty() || a.len() != a_prime.len() {
            return Err(Error::Shape(format!(
                "need matching nonempty direction lists, got {} and {}",
                a.len(),
                a_prime.len()
            )));
        }
        for v in a.iter().chain(&a_prime) {
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > UNIT_TOL {
                return Err(Error::OutOfRange(format!("direction {v:?} has norm {norm}")));
            }
        }
        Ok(Self { a, a_prime })
    }

    /// Same direction pair for every party.
    pub fn uniform(parties: usize, a: [f64; 3], a_prime: [f64; 3]) -> Result<Self> {
        Self::new(vec![a; parties], vec![a_prime; parties])
    }

    /// Spherical angles `(θ_a, φ_a, θ_a', φ_a')` per party.
    pub fn from_angles(angles: &[f64]) -> Result<Self> {
        if angles.is_empty() || !angles.len().is_multiple_of(4) {
            return Err(Error::Shape(format!(
                "expected 4 angles per party, got {}",
                angles.len()
            )));
        }
        let (a, a_prime) = angles.chunks(4).map(|c| (unit(c[0], c[1]), unit(c[2], c[3]))).unzip();
        Ok(Self { a, a_prime })
    }

    pub fn parties(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[[f64; 3]] {
        &self.a
    }

    pub fn a_prime(&self) -> &[[f64; 3]] {
        &self.a_prime
    }

    fn swapped(&self) -> Self {
        Self {
            a: self.a_prime.clone(),
            a_prime: self.a.clone(),
        }
    }
}

fn check_parties(n: usize) -> Result<()> {
    if n == 0 || n > MAX_PARTIES {
        return Err(Error::UnsupportedDimension(format!(
            "MK operator needs 1 to {MAX_PARTIES} parties, got {n}"
        )));
    }
    Ok(())
}

fn literal(s: &MKSettings, k: usize) -> CMatrix {
    if k == 1 {
        return pauli_dot(s.a[0]);
    }
    let prev = literal(s, k - 1);
    let prev_swapped = literal(&s.swapped(), k - 1);
    let sa = pauli_dot(s.a[k - 1]);
    let sb = pauli_dot(s.a_prime[k - 1]);
    let plus = &sa + &sb;
    let minus = &sa - &sb;
    (&prev.kron(&plus) + &prev_swapped.kron(&minus)).scale_real(0.5)
}

/// The `2^N × 2^N` operator for the first `n` parties of `settings`.
pub fn mk_operator(settings: &MKSettings, n: usize) -> Result<CMatrix> {
    check_parties(n)?;
    if n > settings.parties() {
        return Err(Error::Shape(format!(
            "settings cover {} parties, operator needs {n}",
            settings.parties()
        )));
    }
    Ok(literal(settings, n))
}

fn qubit_count(state: &QuantumState) -> Result<usize> {
    if state.dims().iter().any(|&d| d != 2) {
        return Err(Error::UnsupportedDimension(format!(
            "qubits required, got {:?}",
            state.dims()
        )));
    }
    Ok(state.dims().len())
}

/// `tr(B_N ρ)` from the explicit operator.
pub fn mk_expectation(state: &QuantumState, settings: &MKSettings) -> Result<f64> {
    let n = qubit_count(state)?;
    if n != settings.parties() {
        return Err(Error::Shape(format!(
            "state has {n} qubits, settings cover {}",
            settings.parties()
        )));
    }
    let b = mk_operator(settings, n)?;
    Ok(match state {
        QuantumState::Pure(psi) => b.expectation(psi.amplitudes()).re,
        QuantumState::Mixed(rho) => (&b * rho.matrix()).trace().re,
    })
}

/// Coefficients of `B_N` and `B'_N` over the `2^N` choices of `a` (bit 0) or
/// `a'` (bit 1) per party, party 0 most significant.
fn expansion(n: usize) -> Vec<f64> {
    let (mut b, mut bp) = (vec![1.0, 0.0], vec![0.0, 1.0]);
    for _ in 1..n {
        let mut nb = Vec::with_capacity(2 * b.len());
        let mut nbp = Vec::with_capacity(2 * b.len());
        for (x, y) in b.iter().zip(&bp) {
            nb.extend([0.5 * (x + y), 0.5 * (x - y)]);
            nbp.extend([0.5 * (y - x), 0.5 * (y + x)]);
        }
        b = nb;
        bp = nbp;
    }
    b
}

/// `⟨σ_{i_1} ⊗ … ⊗ σ_{i_N}⟩` for all `3^N` Pauli strings, first index most
/// significant.
pub fn correlation_tensor(state: &QuantumState) -> Result<Vec<f64>> {
    let n = qubit_count(state)?;
    check_parties(n)?;
    let rho = state.density();
    let m = rho.matrix();
    let dim = 1usize << n;
    let mut out = Vec::with_capacity(3usize.pow(n as u32));
    let mut digits = vec![0usize; n];
    for _ in 0..3usize.pow(n as u32) {
        // each Pauli string maps column c to one row with a phase
        let mut total = ZERO;
        for c in 0..dim {
            let mut r = c;
            let mut v = C64::new(1.0, 0.0);
            for (q, &p) in digits.iter().enumerate() {
                let bit = (c >> (n - 1 - q)) & 1;
                match p {
                    0 => r ^= 1 << (n - 1 - q),
                    1 => {
                        r ^= 1 << (n - 1 - q);
                        v *= if bit == 0 {
                            C64::new(0.0, 1.0)
                        } else {
                            C64::new(0.0, -1.0)
                        };
                    }
                    _ => {
                        if bit == 1 {
                            v = -v;
                        }
                    }
                }
            }
            total += m[(c, r)] * v;
        }
        out.push(total.re);
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < 3 {
                break;
            }
            *d = 0;
        }
    }
    Ok(out)
}

/// Evaluates `⟨B_N⟩` by contracting the correlation tensor, without building
/// the operator.
#[derive(Clone, Debug)]
pub struct MkEvaluator {
    n: usize,
    tensor: Vec<f64>,
    coefficients: Vec<f64>,
}

impl MkEvaluator {
    pub fn new(state: &QuantumState) -> Result<Self> {
        let tensor = correlation_tensor(state)?;
        let n = state.dims().len();
        Ok(Self {
            n,
            tensor,
            coefficients: expansion(n),
        })
    }

    pub fn parties(&self) -> usize {
        self.n
    }

    pub fn value(&self, settings: &MKSettings) -> f64 {
        assert_eq!(settings.parties(), self.n, "settings party count");
        let mut total = 0.0;
        for (choice, &coef) in self.coefficients.iter().enumerate() {
            if coef == 0.0 {
                continue;
            }
            let dirs: Vec<&[f64; 3]> = (0..self.n)
                .map(|q| {
                    if (choice >> (self.n - 1 - q)) & 1 == 0 {
                        &settings.a[q]
                    } else {
                        &settings.a_prime[q]
                    }
                })
                .collect();
            total += coef * contract(&self.tensor, &dirs);
        }
        total
    }
}

fn contract(tensor: &[f64], dirs: &[&[f64; 3]]) -> f64 {
    // fold the last party into the tensor repeatedly
    let mut cur: Vec<f64> = tensor.to_vec();
    for d in dirs.iter().rev() {
        cur = cur.chunks(3).map(|t| t[0] * d[0] + t[1] * d[1] + t[2] * d[2]).collect();
    }
    cur[0]
}

/// Multistart settings search.
#[derive(Clone, Copy, Debug)]
pub struct MkSearch {
    pub restarts: usize,
    pub seed: u64,
    pub refine: NelderMead,
}

impl Default for MkSearch {
    fn default() -> Self {
        Self {
            restarts: 100,
            seed: 0xbe11,
            refine: NelderMead {
                f_tol: 1e-12,
                max_iter: 4000,
                initial_step: 0.3,
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MkOptimum {
    /// Largest `|⟨B_N⟩|` found; a lower bound on the true maximum.
    pub value: f64,
    pub settings: MKSettings,
    pub restarts: usize,
    pub evaluations: usize,
}

impl MkOptimum {
    pub fn violates(&self) -> bool {
        self.value > 1.0
    }
}

/// Maximizes `|⟨B_N⟩|` over all directions. The `k`-th start depends only on
/// `(seed, k)`, so more restarts never lower the result.
pub fn mk_optimize(state: &QuantumState, search: &MkSearch) -> Result<MkOptimum> {
    let eval = MkEvaluator::new(state)?;
    let n_angles = 4 * eval.parties();
    let mut objective = |x: &[f64]| -> f64 {
        let s = MKSettings::from_angles(x).expect("angle count");
        -eval.value(&s).abs()
    };
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut evaluations = 0;
    for k in 0..search.restarts.max(1) {
        let mut r = rng(search.seed, k as u64);
        let start: Vec<f64> = (0..n_angles)
            .map(|i| {
                if i % 2 == 0 {
                    r.random::<f64>().mul_add(2.0, -1.0).acos()
                } else {
                    r.random_range(0.0..std::f64::consts::TAU)
                }
            })
            .collect();
        let mut m = search.refine.minimize(&mut objective, &start);
        evaluations += m.evaluations;
        // a second pass escapes early simplex collapse
        let again = search.refine.minimize(&mut objective, &m.x);
        evaluations += again.evaluations;
        if again.value <= m.value {
            m = again;
        }
        if best.as_ref().is_none_or(|b| m.value < b.0) {
            best = Some((m.value, m.x));
        }
    }
    let (value, x) = best.expect("at least one restart");
    Ok(MkOptimum {
        value: -value,
        settings: MKSettings::from_angles(&x)?,
        restarts: search.restarts.max(1),
        evaluations,
    })
}

/// Printed expectation for the symmetric GHZ-class family.
pub fn mk_symmetric_closed_form(theta: f64, alpha: f64, kappa: f64, nu: f64) -> f64 {
    let (st, ct) = theta.sin_cos();
    let sa = alpha.sin();
    let ca = alpha.cos();
    4.0 * sa.powi(3) * st * (nu.cos() * (ct * kappa.cos() + ca.powi(3) * st) + ct * nu.sin() * kappa.sin())
}
