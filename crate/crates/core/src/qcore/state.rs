//! Pure states, density matrices and bipartitions over labelled tensor
//! factors.
//!
//! Basis ordering is row-major over parties in label order: the first party
//! is the most significant digit, so for three parties the index of
//! `|i_A i_B i_C⟩` is `(i_A * d_B + i_B) * d_C + i_C`.

use std::collections::BTreeSet;

use super::matrix::{eig_hermitian, CMatrix, C64, ZERO};
use crate::error::{Error, Result};

pub const NORM_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-9;

pub fn default_labels(n: usize) -> Vec<String> {
    const NAMES: &str = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";
    (0..n)
        .map(|k| {
            NAMES
                .chars()
                .nth(k)
                .map(String::from)
                .unwrap_or_else(|| format!("P{k}"))
        })
        .collect()
}

fn check_layout(dims: &[usize], labels: &[String], total: usize) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::Shape(format!("invalid subsystem dims {dims:?}")));
    }
    let product: usize = dims.iter().product();
    if product != total {
        return Err(Error::Shape(format!(
            "dims {dims:?} imply dimension {product}, got {total}"
        )));
    }
    if labels.len() != dims.len() {
        return Err(Error::Shape(format!(
            "{} labels for {} subsystems",
            labels.len(),
            dims.len()
        )));
    }
    let unique: BTreeSet<&String> = labels.iter().collect();
    if unique.len() != labels.len() {
        return Err(Error::Shape(format!("duplicate labels in {labels:?}")));
    }
    Ok(())
}

fn merged_labels(a: &[String], b: &[String]) -> Vec<String> {
    let mut labels: Vec<String> = a.iter().chain(b).cloned().collect();
    let unique: BTreeSet<&String> = labels.iter().collect();
    if unique.len() != labels.len() {
        labels = default_labels(labels.len());
    }
    labels
}

/// Maps full basis indices to (kept, traced) indices for a party selection.
struct Split {
    kept: Vec<usize>,
    traced: Vec<usize>,
    kept_dim: usize,
}

impl Split {
    fn new(dims: &[usize], keep_mask: &[bool]) -> Self {
        let total: usize = dims.iter().product();
        let kept_dim = dims.iter().zip(keep_mask).filter(|(_, &k)| k).map(|(d, _)| d).product();
        let mut kept = Vec::with_capacity(total);
        let mut traced = Vec::with_capacity(total);
        for idx in 0..total {
            let mut rem = idx;
            let mut digits = vec![0usize; dims.len()];
            for (slot, &d) in digits.iter_mut().zip(dims).rev() {
                *slot = rem % d;
                rem /= d;
            }
            let (mut k, mut t) = (0, 0);
            for ((&digit, &d), &keep) in digits.iter().zip(dims).zip(keep_mask) {
                if keep {
                    k = k * d + digit;
                } else {
                    t = t * d + digit;
                }
            }
            kept.push(k);
            traced.push(t);
        }
        Self { kept, traced, kept_dim }
    }
}

fn keep_mask(labels: &[String], keep: &[&str]) -> Result<Vec<bool>> {
    if keep.is_empty() {
        return Err(Error::InvalidSelection("empty party set".into()));
    }
    let mut mask = vec![false; labels.len()];
    for name in keep {
        let pos = labels
            .iter()
            .position(|l| l == name)
            .ok_or_else(|| Error::UnknownLabel((*name).to_string()))?;
        mask[pos] = true;
    }
    Ok(mask)
}

fn select<T: Clone>(items: &[T], mask: &[bool]) -> Vec<T> {
    items
        .iter()
        .zip(mask)
        .filter(|(_, &k)| k)
        .map(|(x, _)| x.clone())
        .collect()
}

/// Normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl PureState {
    /// Normalizes `amplitudes`; labels default to `A, B, C, …`.
    pub fn new(amplitudes: Vec<C64>, dims: Vec<usize>) -> Result<Self> {
        let labels = default_labels(dims.len());
        Self::with_labels(amplitudes, dims, labels)
    }

    pub fn with_labels(amplitudes: Vec<C64>, dims: Vec<usize>, labels: Vec<String>) -> Result<Self> {
        check_layout(&dims, &labels, amplitudes.len())?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm <= 1e-300 {
            return Err(Error::ZeroNorm);
        }
        let amplitudes = amplitudes.into_iter().map(|a| a / norm).collect();
        Ok(Self {
            amplitudes,
            dims,
            labels,
        })
    }

    /// Qubit register from real amplitudes.
    pub fn qubits_from_real(amplitudes: &[f64]) -> Result<Self> {
        let n = amplitudes.len().trailing_zeros() as usize;
        if 1usize << n != amplitudes.len() {
            return Err(Error::Shape("length is not a power of two".into()));
        }
        Self::new(amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect(), vec![2; n])
    }

    /// Computational basis state `|digits⟩`.
    pub fn basis(dims: Vec<usize>, digits: &[usize]) -> Result<Self> {
        if digits.len() != dims.len() || digits.iter().zip(&dims).any(|(x, d)| x >= d) {
            return Err(Error::Shape(format!("basis digits {digits:?} for dims {dims:?}")));
        }
        let index = digits.iter().zip(&dims).fold(0, |acc, (x, d)| acc * d + x);
        let mut amps = vec![ZERO; dims.iter().product()];
        amps[index] = C64::new(1.0, 0.0);
        Self::new(amps, dims)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        let dims = self.dims.iter().chain(&other.dims).copied().collect();
        Self {
            amplitudes,
            dims,
            labels: merged_labels(&self.labels, &other.labels),
        }
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: CMatrix::outer(&self.amplitudes),
            dims: self.dims.clone(),
            labels: self.labels.clone(),
        }
    }

    /// Reduced density matrix on `keep`, computed directly from amplitudes.
    pub fn reduced(&self, keep: &[&str]) -> Result<DensityMatrix> {
        let mask = keep_mask(&self.labels, keep)?;
        let split = Split::new(&self.dims, &mask);
        let mut m = CMatrix::zeros(split.kept_dim);
        let d = self.dim();
        for i in 0..d {
            let ai = self.amplitudes[i];
            if ai == ZERO {
                continue;
            }
            for j in 0..d {
                if split.traced[i] == split.traced[j] {
                    m[(split.kept[i], split.kept[j])] += ai * self.amplitudes[j].conj();
                }
            }
        }
        Ok(DensityMatrix {
            matrix: m,
            dims: select(&self.dims, &mask),
            labels: select(&self.labels, &mask),
        })
    }

    /// Reorders tensor factors so that `order` lists the labels from most to
    /// least significant.
    pub fn permuted(&self, order: &[&str]) -> Result<Self> {
        let perm = permutation(&self.labels, order)?;
        let new_dims: Vec<usize> = perm.iter().map(|&p| self.dims[p]).collect();
        let map = permute_indices(&self.dims, &perm);
        let mut amps = vec![ZERO; self.dim()];
        for (old, &new) in map.iter().enumerate() {
            amps[new] = self.amplitudes[old];
        }
        Ok(Self {
            amplitudes: amps,
            dims: new_dims,
            labels: perm.iter().map(|&p| self.labels[p].clone()).collect(),
        })
    }

    pub fn apply_local(&self, party: usize, u: &CMatrix) -> Self {
        let d = self.dims[party];
        assert_eq!(u.dim(), d, "local operator dimension");
        let inner: usize = self.dims[party + 1..].iter().product();
        let mut out = vec![ZERO; self.dim()];
        for (idx, slot) in out.iter_mut().enumerate() {
            let digit = (idx / inner) % d;
            let base = idx - digit * inner;
            *slot = (0..d).map(|k| u[(digit, k)] * self.amplitudes[base + k * inner]).sum();
        }
        Self {
            amplitudes: out,
            dims: self.dims.clone(),
            labels: self.labels.clone(),
        }
    }
}

fn permutation(labels: &[String], order: &[&str]) -> Result<Vec<usize>> {
    if order.len() != labels.len() {
        return Err(Error::InvalidSelection(format!(
            "ordering {order:?} must list every party of {labels:?}"
        )));
    }
    let mut perm = Vec::with_capacity(order.len());
    for name in order {
        let pos = labels
            .iter()
            .position(|l| l == name)
            .ok_or_else(|| Error::UnknownLabel((*name).to_string()))?;
        if perm.contains(&pos) {
            return Err(Error::InvalidSelection(format!("label `{name}` repeated")));
        }
        perm.push(pos);
    }
    Ok(perm)
}

/// For each old basis index, its index after moving factor `perm[k]` to slot `k`.
fn permute_indices(dims: &[usize], perm: &[usize]) -> Vec<usize> {
    let total: usize = dims.iter().product();
    (0..total)
        .map(|idx| {
            let mut rem = idx;
            let mut digits = vec![0usize; dims.len()];
            for (slot, &d) in digits.iter_mut().zip(dims).rev() {
                *slot = rem % d;
                rem /= d;
            }
            perm.iter().fold(0, |acc, &p| acc * dims[p] + digits[p])
        })
        .collect()
}

/// Unit-trace positive semidefinite Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl DensityMatrix {
    /// Validates Hermiticity, trace and positivity.
    pub fn new(matrix: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let labels = default_labels(dims.len());
        Self::with_labels(matrix, dims, labels)
    }

    pub fn with_labels(matrix: CMatrix, dims: Vec<usize>, labels: Vec<String>) -> Result<Self> {
        check_layout(&dims, &labels, matrix.dim())?;
        let dev = matrix.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::Trace(tr));
        }
        let spectrum = eig_hermitian(&matrix)?;
        let min = spectrum.values.last().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::NotPsd(min));
        }
        Ok(Self { matrix, dims, labels })
    }

    /// Skips validation; callers guarantee the invariants by construction.
    #[cfg(test)]
    pub(crate) fn from_parts(matrix: CMatrix, dims: Vec<usize>, labels: Vec<String>) -> Self {
        Self { matrix, dims, labels }
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let d: usize = dims.iter().product();
        let labels = default_labels(dims.len());
        Self {
            matrix: CMatrix::identity(d).scale_real(1.0 / d as f64),
            dims,
            labels,
        }
    }

    /// Convex combination `Σ w_k ρ_k` of same-layout states; weights are
    /// renormalized.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::Shape("empty mixture".into()))?.1;
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        let mut m = CMatrix::zeros(first.dim());
        for (w, rho) in parts {
            if rho.dims != first.dims {
                return Err(Error::Shape("mixture components differ in dims".into()));
            }
            m = &m + &rho.matrix.scale_real(w / total);
        }
        Self::with_labels(m, first.dims.clone(), first.labels.clone())
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix.kron(&other.matrix),
            dims: self.dims.iter().chain(&other.dims).copied().collect(),
            labels: merged_labels(&self.labels, &other.labels),
        }
    }

    /// Keeps the parties in `keep`, in their original relative order.
    pub fn partial_trace(&self, keep: &[&str]) -> Result<Self> {
        let mask = keep_mask(&self.labels, keep)?;
        let split = Split::new(&self.dims, &mask);
        let d = self.dim();
        let mut m = CMatrix::zeros(split.kept_dim);
        for i in 0..d {
            for j in 0..d {
                if split.traced[i] == split.traced[j] {
                    m[(split.kept[i], split.kept[j])] += self.matrix[(i, j)];
                }
            }
        }
        Ok(Self {
            matrix: m,
            dims: select(&self.dims, &mask),
            labels: select(&self.labels, &mask),
        })
    }

    pub fn permuted(&self, order: &[&str]) -> Result<Self> {
        let perm = permutation(&self.labels, order)?;
        let map = permute_indices(&self.dims, &perm);
        let mut m = CMatrix::zeros(self.dim());
        for (i, &ni) in map.iter().enumerate() {
            for (j, &nj) in map.iter().enumerate() {
                m[(ni, nj)] = self.matrix[(i, j)];
            }
        }
        Ok(Self {
            matrix: m,
            dims: perm.iter().map(|&p| self.dims[p]).collect(),
            labels: perm.iter().map(|&p| self.labels[p].clone()).collect(),
        })
    }

    pub fn conjugate_by(&self, u: &CMatrix) -> Self {
        Self {
            matrix: self.matrix.conjugate_by(u),
            dims: self.dims.clone(),
            labels: self.labels.clone(),
        }
    }

    /// `tr(ρ²)`
    pub fn purity(&self) -> f64 {
        let m = &self.matrix;
        let n = m.dim();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| (m[(i, j)] * m[(j, i)]).re)
            .sum()
    }
}

/// A two-sided split of a state's parties.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    side_one: Vec<String>,
    side_two: Vec<String>,
}

impl Bipartition {
    pub fn new(side_one: &[&str], side_two: &[&str], labels: &[String]) -> Result<Self> {
        if side_one.is_empty() || side_two.is_empty() {
            return Err(Error::InvalidSelection("both sides must be nonempty".into()));
        }
        let one: BTreeSet<&str> = side_one.iter().copied().collect();
        let two: BTreeSet<&str> = side_two.iter().copied().collect();
        if one.len() != side_one.len() || two.len() != side_two.len() {
            return Err(Error::InvalidSelection("repeated label in a side".into()));
        }
        if !one.is_disjoint(&two) {
            return Err(Error::InvalidSelection("sides overlap".into()));
        }
        for l in one.iter().chain(&two) {
            if !labels.iter().any(|x| x == l) {
                return Err(Error::UnknownLabel((*l).to_string()));
            }
        }
        if one.len() + two.len() != labels.len() {
            return Err(Error::InvalidSelection(format!("sides must cover all of {labels:?}")));
        }
        Ok(Self {
            side_one: side_one.iter().map(|s| s.to_string()).collect(),
            side_two: side_two.iter().map(|s| s.to_string()).collect(),
        })
    }

    /// `party : everyone else`
    pub fn singleton(party: &str, labels: &[String]) -> Result<Self> {
        let rest: Vec<&str> = labels.iter().map(String::as_str).filter(|l| *l != party).collect();
        Self::new(&[party], &rest, labels)
    }

    pub fn side_one(&self) -> Vec<&str> {
        self.side_one.iter().map(String::as_str).collect()
    }

    pub fn side_two(&self) -> Vec<&str> {
        self.side_two.iter().map(String::as_str).collect()
    }

    /// Every unordered bipartition of `labels`, each listed once with the
    /// first label on side one.
    pub fn all(labels: &[String]) -> Vec<Self> {
        let n = labels.len();
        if n < 2 {
            return Vec::new();
        }
        // subsets of labels[1..] joined with labels[0], excluding the full set
        (0..(1usize << (n - 1)) - 1)
            .map(|mask| {
                let mut one = vec![labels[0].clone()];
                let mut two = Vec::new();
                for (k, l) in labels.iter().enumerate().skip(1) {
                    if mask >> (k - 1) & 1 == 1 {
                        one.push(l.clone());
                    } else {
                        two.push(l.clone());
                    }
                }
                Self {
                    side_one: one,
                    side_two: two,
                }
            })
            .collect()
    }
}

/// Either kind of state, for operations that accept both.
#[derive(Clone, Debug, PartialEq)]
pub enum QuantumState {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl QuantumState {
    pub fn dims(&self) -> &[usize] {
        match self {
            Self::Pure(p) => p.dims(),
            Self::Mixed(m) => m.dims(),
        }
    }

    pub fn labels(&self) -> &[String] {
        match self {
            Self::Pure(p) => p.labels(),
            Self::Mixed(m) => m.labels(),
        }
    }

    pub fn density(&self) -> DensityMatrix {
        match self {
            Self::Pure(p) => p.density(),
            Self::Mixed(m) => m.clone(),
        }
    }

    pub fn reduced(&self, keep: &[&str]) -> Result<DensityMatrix> {
        match self {
            Self::Pure(p) => p.reduced(keep),
            Self::Mixed(m) => m.partial_trace(keep),
        }
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Self::Pure(a), Self::Pure(b)) => Ok(Self::Pure(a.tensor(b))),
            (Self::Mixed(a), Self::Mixed(b)) => Ok(Self::Mixed(a.tensor(b))),
            _ => Err(Error::MixedKinds),
        }
    }
}

impl From<PureState> for QuantumState {
    fn from(p: PureState) -> Self {
        Self::Pure(p)
    }
}

impl From<DensityMatrix> for QuantumState {
    fn from(m: DensityMatrix) -> Self {
        Self::Mixed(m)
    }
}
