//! Dense complex matrices for Hilbert spaces of dimension at most 16, and a
//! cyclic Jacobi eigensolver for Hermitian input.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Tolerance on `max |M - M†|` accepted by the eigensolver, scaled by the
/// largest entry magnitude when that exceeds one.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Square complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Shape("matrix has no rows".into()));
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Shape(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            data.extend(row);
        }
        Ok(Self { n, data })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// `|v⟩⟨v|`
    pub fn outer(v: &[C64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[C64]> {
        self.data.chunks(self.n)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Kronecker product with `self` as the most significant factor.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.n, other.n);
        Self::from_fn(n * m, |i, j| self[(i / m, j / m)] * other[(i % m, j % m)])
    }

    pub fn mat_vec(&self, v: &[C64]) -> Vec<C64> {
        self.rows()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `⟨v|M|v⟩`
    pub fn expectation(&self, v: &[C64]) -> C64 {
        let mv = self.mat_vec(v);
        v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol * self.max_abs().max(1.0)
    }

    /// Unitary conjugation `U M U†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(u * self) * &u.adjoint()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Eigenvalues in descending order with matching orthonormal eigenvectors
/// stored as the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct EigenSpectrum {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl EigenSpectrum {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.vectors.dim()).map(|i| self.vectors[(i, k)]).collect()
    }

    /// `V Λ V†`
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.vectors.dim();
        CMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| self.vectors[(i, k)] * self.values[k] * self.vectors[(j, k)].conj())
                .sum()
        })
    }
}

fn check_hermitian(m: &CMatrix) -> Result<()> {
    let dev = m.hermitian_deviation();
    if dev > HERMITIAN_TOL * m.max_abs().max(1.0) {
        return Err(Error::NotHermitian(dev));
    }
    Ok(())
}

const MAX_SWEEPS: usize = 64;

/// Full eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
pub fn eig_hermitian(m: &CMatrix) -> Result<EigenSpectrum> {
    check_hermitian(m)?;
    let n = m.dim();
    // work on the exactly Hermitian part
    let mut a = CMatrix::from_fn(n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let mut v = CMatrix::identity(n);
    let scale = a.max_abs().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let h = a[(p, q)];
                let g = h.norm();
                if g <= 1e-300 {
                    continue;
                }
                let phase = h / g;
                let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
                let tau = (aqq - app) / (2.0 * g);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // R = diag(1, conj(phase)) * [[c, s], [-s, c]]
                let r_pp = C64::new(c, 0.0);
                let r_pq = C64::new(s, 0.0);
                let r_qp = -phase.conj() * s;
                let r_qq = phase.conj() * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * r_pp + akq * r_qp;
                    a[(k, q)] = akp * r_pq + akq * r_qq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = r_pp.conj() * apk + r_qp.conj() * aqk;
                    a[(q, k)] = r_pq.conj() * apk + r_qq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * r_pp + vkq * r_qp;
                    v[(k, q)] = vkp * r_pq + vkq * r_qq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(y, y)].re.total_cmp(&a[(x, x)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = CMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(EigenSpectrum { values, vectors })
}

/// Eigenvalues only, descending. Closed form for 1×1 and 2×2 input.
pub fn eigvals_hermitian(m: &CMatrix) -> Result<Vec<f64>> {
    match m.dim() {
        1 => Ok(vec![m[(0, 0)].re]),
        2 => {
            check_hermitian(m)?;
            Ok(eigvals_2x2(m[(0, 0)].re, m[(1, 1)].re, m[(0, 1)]).to_vec())
        }
        _ => Ok(eig_hermitian(m)?.values),
    }
}

/// Spectrum of `[[a, h], [h*, b]]`, descending.
#[inline]
pub fn eigvals_2x2(a: f64, b: f64, h: C64) -> [f64; 2] {
    let mean = 0.5 * (a + b);
    let half = 0.5 * (a - b);
    let r = (half * half + h.norm_sqr()).sqrt();
    [mean + r, mean - r]
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_fn(2, |i, j| if i != j { ONE } else { ZERO })
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_rows(vec![vec![ZERO, -I], vec![I, ZERO]]).expect("2x2")
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_real_diagonal(&[1.0, -1.0])
}

/// `n·σ` for a real 3-vector `n`.
pub fn pauli_dot(n: [f64; 3]) -> CMatrix {
    CMatrix::from_rows(vec![
        vec![C64::new(n[2], 0.0), C64::new(n[0], -n[1])],
        vec![C64::new(n[0], n[1]), C64::new(-n[2], 0.0)],
    ])
    .expect("2x2")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_hermitian(n: usize, seed: u64) -> CMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let m = CMatrix::from_fn(n, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        &m + &m.adjoint()
    }

    #[test]
    fn identity_spectrum() {
        let e = eig_hermitian(&CMatrix::identity(2)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0]);
    }

    #[test]
    fn half_diagonal_spectrum() {
        let e = eig_hermitian(&CMatrix::from_real_diagonal(&[0.5, 0.5])).unwrap();
        assert!((e.values[0] - 0.5).abs() < 1e-15 && (e.values[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn pauli_x_spectrum() {
        let e = eig_hermitian(&pauli_x()).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn pauli_y_two_by_two_closed_form_agrees() {
        let vals = eigvals_hermitian(&pauli_y()).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-15 && (vals[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = CMatrix::identity(3);
        m[(0, 2)] = C64::new(0.3, 0.0);
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn reconstruction_and_orthonormality_up_to_16() {
        for (seed, n) in [(1, 3), (2, 4), (3, 8), (4, 16), (5, 5), (6, 2)] {
            let m = random_hermitian(n, seed);
            let e = eig_hermitian(&m).unwrap();
            assert!(e.reconstruct().max_abs_diff(&m) <= 1e-9, "n={n}");
            let vtv = &e.vectors.adjoint() * &e.vectors;
            assert!(vtv.max_abs_diff(&CMatrix::identity(n)) <= 1e-10, "n={n}");
            assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn degenerate_spectrum_keeps_orthonormal_vectors() {
        // U diag(1,1,1,-2) U† with a non-trivial unitary from a Hermitian eigenbasis
        let u = eig_hermitian(&random_hermitian(4, 9)).unwrap().vectors;
        let m = CMatrix::from_real_diagonal(&[1.0, 1.0, 1.0, -2.0]).conjugate_by(&u);
        let e = eig_hermitian(&m).unwrap();
        assert!(e.reconstruct().max_abs_diff(&m) <= 1e-9);
        let vtv = &e.vectors.adjoint() * &e.vectors;
        assert!(vtv.max_abs_diff(&CMatrix::identity(4)) <= 1e-10);
    }

    #[test]
    fn kron_ordering_is_first_factor_major() {
        let a = CMatrix::from_real_diagonal(&[1.0, 2.0]);
        let b = CMatrix::from_real_diagonal(&[1.0, 10.0]);
        let k = a.kron(&b);
        let d: Vec<f64> = (0..4).map(|i| k[(i, i)].re).collect();
        assert_eq!(d, vec![1.0, 10.0, 2.0, 20.0]);
    }
}
