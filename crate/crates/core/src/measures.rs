//! Bipartite correlation measures: concurrence, entanglement of formation,
//! mutual information, measured conditional entropy and discord.
//!
//! Discord conditions the unmeasured side (side one of a cut) on rank-1
//! projective measurements of side two. The minimum over measurement bases is
//! found numerically: a Bloch-sphere grid plus Nelder–Mead refinement for a
//! measured qubit, seeded multistart Nelder–Mead over a Givens-rotation
//! parametrization of `U(4)` for a measured pair of qubits.

use std::f64::consts::PI;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::optimize::NelderMead;
use crate::qcore::matrix::{eig_hermitian, eigvals_2x2, pauli_y, CMatrix, C64, ZERO};
use crate::qcore::state::{Bipartition, DensityMatrix, PureState, QuantumState};
use crate::qcore::{binary_entropy, entropy_of_spectrum, random, vn_entropy};

/// A complete set of orthogonal rank-1 projectors on the measured side.
#[derive(Clone, Debug, Serialize)]
pub struct MeasurementBasis {
    pub subsystem: Vec<String>,
    /// Basis vectors `|u_i⟩`; the projectors are `|u_i⟩⟨u_i|`.
    #[serde(skip)]
    pub vectors: Vec<Vec<C64>>,
    /// Bloch angles `(θ, φ)` for a qubit, twelve Givens angles for a
    /// four-level system, empty for a Schmidt basis.
    pub parameters: Vec<f64>,
}

impl MeasurementBasis {
    /// `|u₀⟩ = (cos θ/2, e^{iφ} sin θ/2)` and its orthogonal complement.
    pub fn qubit(subsystem: Vec<String>, theta: f64, phi: f64) -> Self {
        Self {
            subsystem,
            vectors: qubit_vectors(theta, phi).iter().map(|v| v.to_vec()).collect(),
            parameters: vec![theta, phi],
        }
    }

    pub fn from_givens(subsystem: Vec<String>, dim: usize, angles: &[f64]) -> Self {
        let u = givens_unitary(dim, angles);
        Self {
            subsystem,
            vectors: (0..dim).map(|j| (0..dim).map(|i| u[(i, j)]).collect()).collect(),
            parameters: angles.to_vec(),
        }
    }

    pub fn projectors(&self) -> Vec<CMatrix> {
        self.vectors.iter().map(|v| CMatrix::outer(v)).collect()
    }

    /// `max |Σ Π_i − 𝕀|`
    pub fn completeness_error(&self) -> f64 {
        let d = self.vectors.len();
        let sum = self.projectors().iter().fold(CMatrix::zeros(d), |acc, p| &acc + p);
        sum.max_abs_diff(&CMatrix::identity(d))
    }

    /// `max |Π_i Π_j − δ_ij Π_i|`
    pub fn orthogonality_error(&self) -> f64 {
        let ps = self.projectors();
        let d = ps.len();
        let mut worst: f64 = 0.0;
        for (i, pi) in ps.iter().enumerate() {
            for (j, pj) in ps.iter().enumerate() {
                let prod = pi * pj;
                let target = if i == j { pi.clone() } else { CMatrix::zeros(d) };
                worst = worst.max(prod.max_abs_diff(&target));
            }
        }
        worst
    }
}

fn qubit_vectors(theta: f64, phi: f64) -> [[C64; 2]; 2] {
    let (s, c) = (0.5 * theta).sin_cos();
    let e = C64::from_polar(1.0, phi);
    [[C64::new(c, 0.0), e * s], [C64::new(s, 0.0), -e * c]]
}

/// Product of complex Givens rotations over every index pair, two angles
/// per pair. For `dim = 4` this is twelve angles and reaches every
/// orthonormal basis up to column phases.
pub fn givens_unitary(dim: usize, angles: &[f64]) -> CMatrix {
    let mut u = CMatrix::identity(dim);
    let mut k = 0;
    for p in 0..dim {
        for q in (p + 1)..dim {
            let (s, c) = angles[k].sin_cos();
            let e = C64::from_polar(1.0, angles[k + 1]);
            k += 2;
            // u ← u · G_pq
            for row in 0..dim {
                let up = u[(row, p)];
                let uq = u[(row, q)];
                u[(row, p)] = up * c + uq * e * s;
                u[(row, q)] = -up * e.conj() * s + uq * c;
            }
        }
    }
    u
}

pub fn givens_angle_count(dim: usize) -> usize {
    dim * (dim - 1)
}

/// Evidence that the basis search converged.
#[derive(Clone, Debug, Serialize)]
pub struct OptimizerTrace {
    /// Local refinements run (grid cells or random starts).
    pub restarts: usize,
    pub evaluations: usize,
    /// Second-best minus best refined value; a small gap with a consistent
    /// basis indicates the same basin was found repeatedly.
    pub second_best_gap: f64,
    /// `false` for the exact pure-state path.
    pub heuristic: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionalEntropy {
    pub value: f64,
    pub basis: MeasurementBasis,
    pub trace: OptimizerTrace,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscordResult {
    pub discord: f64,
    pub mutual_information: f64,
    pub classical_correlation: f64,
    pub conditional_entropy: f64,
    pub best_basis: MeasurementBasis,
    pub optimizer_trace: OptimizerTrace,
}

/// Basis-search settings.
#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    /// Bloch-angle grid resolution (θ points, φ points) for a measured qubit.
    pub grid: (usize, usize),
    /// Grid cells refined by Nelder–Mead.
    pub refine_from: usize,
    /// Random starts for a four-level measured side.
    pub random_starts: usize,
    pub seed: u64,
    pub qubit_refine: NelderMead,
    pub ququart_refine: NelderMead,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            grid: (32, 64),
            refine_from: 5,
            random_starts: 64,
            seed: 0x5eed,
            qubit_refine: NelderMead {
                f_tol: 1e-9,
                max_iter: 200,
                initial_step: PI / 32.0,
            },
            ququart_refine: NelderMead {
                f_tol: 1e-9,
                max_iter: 2400,
                initial_step: 0.2,
            },
        }
    }
}

impl SearchConfig {
    /// Same search with twice the restarts; the original starts are a prefix.
    pub fn doubled(&self) -> Self {
        Self {
            refine_from: self.refine_from * 2,
            random_starts: self.random_starts * 2,
            ..*self
        }
    }
}

/// `ρ` reordered so that side one is the most significant factor.
fn arranged(rho: &DensityMatrix, cut: &Bipartition) -> Result<(CMatrix, usize, usize)> {
    let order: Vec<&str> = cut.side_one().into_iter().chain(cut.side_two()).collect();
    let side_dim = |side: Vec<&str>| -> Result<usize> {
        side.iter().try_fold(1, |acc, l| {
            let k = rho
                .labels()
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::UnknownLabel(l.to_string()))?;
            Ok(acc * rho.dims()[k])
        })
    };
    let d1 = side_dim(cut.side_one())?;
    let d2 = side_dim(cut.side_two())?;
    let m = rho.permuted(&order)?.matrix().clone();
    Ok((m, d1, d2))
}

/// `Σ_i p_i S(ρ_{1|i})` for measurement vectors on side two.
struct MeasuredEntropy<'a> {
    rho: &'a CMatrix,
    d1: usize,
    d2: usize,
}

impl MeasuredEntropy<'_> {
    fn outcome(&self, u: &[C64]) -> f64 {
        let (d1, d2) = (self.d1, self.d2);
        let entry = |a: usize, b: usize| -> C64 {
            let mut acc = ZERO;
            for (x, ux) in u.iter().enumerate() {
                let row = a * d2 + x;
                let mut inner = ZERO;
                for (y, uy) in u.iter().enumerate() {
                    inner += self.rho[(row, b * d2 + y)] * uy;
                }
                acc += ux.conj() * inner;
            }
            acc
        };
        if d1 == 2 {
            let s00 = entry(0, 0).re;
            let s11 = entry(1, 1).re;
            let p = s00 + s11;
            if p <= 1e-15 {
                return 0.0;
            }
            let [l0, l1] = eigvals_2x2(s00 / p, s11 / p, entry(0, 1) / p);
            let h = |x: f64| if x > 1e-12 { -x * x.log2() } else { 0.0 };
            p * (h(l0) + h(l1))
        } else {
            let sigma = CMatrix::from_fn(d1, entry);
            let p = sigma.trace().re;
            if p <= 1e-15 {
                return 0.0;
            }
            let vals = eig_hermitian(&sigma.scale_real(1.0 / p))
                .map(|e| e.values)
                .unwrap_or_default();
            p * entropy_of_spectrum(&vals.iter().map(|v| v.max(0.0)).collect::<Vec<_>>()).unwrap_or(f64::INFINITY)
        }
    }

    fn qubit(&self, theta: f64, phi: f64) -> f64 {
        qubit_vectors(theta, phi).iter().map(|u| self.outcome(u)).sum()
    }

    fn givens(&self, angles: &[f64]) -> f64 {
        let u = givens_unitary(self.d2, angles);
        (0..self.d2)
            .map(|j| {
                let col: Vec<C64> = (0..self.d2).map(|i| u[(i, j)]).collect();
                self.outcome(&col)
            })
            .sum()
    }
}

fn gap_of(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    if values.len() < 2 {
        0.0
    } else {
        values[1] - values[0]
    }
}

/// Minimal measured conditional entropy `S(ρ_{1|2})` of side one given
/// projective measurements on side two of `cut`.
///
/// The returned value is attained by the returned basis, so it is an upper
/// bound on the true minimum.
pub fn conditional_entropy_min(
    rho: &DensityMatrix,
    cut: &Bipartition,
    cfg: &SearchConfig,
) -> Result<ConditionalEntropy> {
    let (m, d1, d2) = arranged(rho, cut)?;
    let subsystem: Vec<String> = cut.side_two().iter().map(|s| s.to_string()).collect();
    let obj = MeasuredEntropy { rho: &m, d1, d2 };
    match d2 {
        2 => Ok(search_qubit(&obj, subsystem, cfg)),
        4 => Ok(search_ququart(&obj, subsystem, cfg)),
        d => Err(Error::UnsupportedDimension(format!(
            "measured side has dimension {d}; 2 or 4 supported"
        ))),
    }
}

fn search_qubit(obj: &MeasuredEntropy, subsystem: Vec<String>, cfg: &SearchConfig) -> ConditionalEntropy {
    let (nt, np) = cfg.grid;
    let mut cells: Vec<(f64, f64, f64)> = Vec::with_capacity(nt * np);
    for i in 0..nt {
        let theta = if nt > 1 { PI * i as f64 / (nt - 1) as f64 } else { 0.0 };
        for j in 0..np {
            let phi = 2.0 * PI * j as f64 / np as f64;
            cells.push((obj.qubit(theta, phi), theta, phi));
        }
    }
    let mut evaluations = cells.len();
    // stable order keeps ties deterministic
    cells.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut best = (cells[0].0, cells[0].1, cells[0].2);
    let mut refined = Vec::with_capacity(cfg.refine_from);
    for &(_, t0, p0) in cells.iter().take(cfg.refine_from.max(1)) {
        let mut f = |x: &[f64]| obj.qubit(x[0], x[1]);
        let m = cfg.qubit_refine.minimize(&mut f, &[t0, p0]);
        evaluations += m.evaluations;
        refined.push(m.value);
        if m.value < best.0 {
            best = (m.value, m.x[0], m.x[1]);
        }
    }
    ConditionalEntropy {
        value: best.0.max(0.0),
        basis: MeasurementBasis::qubit(subsystem, best.1, best.2),
        trace: OptimizerTrace {
            restarts: refined.len(),
            evaluations,
            second_best_gap: gap_of(refined),
            heuristic: true,
        },
    }
}

fn search_ququart(obj: &MeasuredEntropy, subsystem: Vec<String>, cfg: &SearchConfig) -> ConditionalEntropy {
    let n_angles = givens_angle_count(obj.d2);
    let mut rng = random::rng(cfg.seed, 0);
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut refined = Vec::with_capacity(cfg.random_starts);
    let mut evaluations = 0;
    for _ in 0..cfg.random_starts.max(1) {
        let start: Vec<f64> = (0..n_angles).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
        let mut f = |x: &[f64]| obj.givens(x);
        let m = cfg.ququart_refine.minimize(&mut f, &start);
        evaluations += m.evaluations;
        refined.push(m.value);
        if best.as_ref().is_none_or(|b| m.value < b.0) {
            best = Some((m.value, m.x));
        }
    }
    let (value, angles) = best.expect("at least one start");
    ConditionalEntropy {
        value: value.max(0.0),
        basis: MeasurementBasis::from_givens(subsystem, obj.d2, &angles),
        trace: OptimizerTrace {
            restarts: refined.len(),
            evaluations,
            second_best_gap: gap_of(refined),
            heuristic: true,
        },
    }
}

fn spectrum_entropy(rho: &DensityMatrix) -> Result<f64> {
    vn_entropy(rho)
}

/// `I = S(ρ₁) + S(ρ₂) − S(ρ₁₂)` across `cut`.
pub fn mutual_information(state: &QuantumState, cut: &Bipartition) -> Result<f64> {
    let s1 = spectrum_entropy(&state.reduced(&cut.side_one())?)?;
    let s2 = spectrum_entropy(&state.reduced(&cut.side_two())?)?;
    let s12 = match state {
        QuantumState::Pure(_) => 0.0,
        QuantumState::Mixed(m) => vn_entropy(m)?,
    };
    Ok(s1 + s2 - s12)
}

/// Quantum discord `D = I − J` with side two measured.
///
/// Pure inputs take the exact path `D = S(ρ₁)`, with the measured side's
/// Schmidt basis as the optimal measurement.
pub fn discord(state: &QuantumState, cut: &Bipartition, cfg: &SearchConfig) -> Result<DiscordResult> {
    let s1 = spectrum_entropy(&state.reduced(&cut.side_one())?)?;
    let mutual_information = mutual_information(state, cut)?;
    let (conditional_entropy, best_basis, optimizer_trace) = match state {
        QuantumState::Pure(psi) => {
            let measured = psi.reduced(&cut.side_two())?;
            let eig = eig_hermitian(measured.matrix())?;
            let basis = MeasurementBasis {
                subsystem: cut.side_two().iter().map(|s| s.to_string()).collect(),
                vectors: (0..measured.dim()).map(|k| eig.vector(k)).collect(),
                parameters: Vec::new(),
            };
            let trace = OptimizerTrace {
                restarts: 0,
                evaluations: 0,
                second_best_gap: 0.0,
                heuristic: false,
            };
            (0.0, basis, trace)
        }
        QuantumState::Mixed(rho) => {
            let ce = conditional_entropy_min(rho, cut, cfg)?;
            (ce.value, ce.basis, ce.trace)
        }
    };
    let classical_correlation = s1 - conditional_entropy;
    Ok(DiscordResult {
        discord: mutual_information - classical_correlation,
        mutual_information,
        classical_correlation,
        conditional_entropy,
        best_basis,
        optimizer_trace,
    })
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dims() != [2, 2] {
        return Err(Error::UnsupportedDimension(format!(
            "two-qubit state required, got dims {:?}",
            rho.dims()
        )));
    }
    Ok(())
}

/// Wootters concurrence `max{0, λ₁−λ₂−λ₃−λ₄}`, with `λ_i` the square roots
/// of the eigenvalues of `ρρ̃`, computed as the spectrum of the Hermitian
/// `√ρ ρ̃ √ρ`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let m = rho.matrix();
    let yy = pauli_y().kron(&pauli_y());
    let tilde = &(&yy * &m.conj()) * &yy;

    let eig = eig_hermitian(m)?;
    let sqrt_vals: Vec<f64> = eig.values.iter().map(|v| v.max(0.0).sqrt()).collect();
    let sqrt_rho = EigenSqrt {
        vectors: &eig.vectors,
        values: &sqrt_vals,
    }
    .matrix();
    let r = &(&sqrt_rho * &tilde) * &sqrt_rho;
    let r = CMatrix::from_fn(4, |i, j| (r[(i, j)] + r[(j, i)].conj()) * 0.5);
    let lambdas: Vec<f64> = eig_hermitian(&r)?.values.iter().map(|v| v.max(0.0).sqrt()).collect();
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0))
}

struct EigenSqrt<'a> {
    vectors: &'a CMatrix,
    values: &'a [f64],
}

impl EigenSqrt<'_> {
    fn matrix(&self) -> CMatrix {
        let n = self.vectors.dim();
        CMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| self.vectors[(i, k)] * self.values[k] * self.vectors[(j, k)].conj())
                .sum()
        })
    }
}

/// `E^f = H((1 + √(1 − C²))/2)`.
pub fn eof_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    binary_entropy(0.5 * (1.0 + (1.0 - c * c).max(0.0).sqrt()))
}

/// Entanglement of formation of a two-qubit state via its concurrence.
pub fn eof_two_qubit(rho: &DensityMatrix) -> Result<f64> {
    Ok(eof_from_concurrence(concurrence(rho)?))
}

/// Entanglement of formation of a pure state across `cut`: entropy of side one.
pub fn eof_pure(psi: &PureState, cut: &Bipartition) -> Result<f64> {
    vn_entropy(&psi.reduced(&cut.side_one())?)
}
