//! Seeded random states and unitaries. Each call owns its generator, so
//! results depend only on `(seed, stream)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::{CMatrix, C64};
use super::state::{DensityMatrix, PureState};

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Haar-distributed pure state: normalized vector of i.i.d. complex Gaussians.
pub fn haar_state<R: Rng + ?Sized>(rng: &mut R, dims: Vec<usize>) -> PureState {
    let d: usize = dims.iter().product();
    let amps = (0..d).map(|_| complex_gaussian(rng)).collect();
    PureState::new(amps, dims).expect("gaussian vector has nonzero norm")
}

/// Haar-distributed unitary from Gram–Schmidt on a Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<C64> = (0..n).map(|_| complex_gaussian(rng)).collect();
        for c in &cols {
            let proj: C64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(c) {
                *x -= proj * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    CMatrix::from_fn(n, |i, j| cols[j][i])
}

/// Normalized Wishart matrix `G G† / tr(G G†)` with a square Ginibre `G`.
pub fn wishart_state<R: Rng + ?Sized>(rng: &mut R, dims: Vec<usize>) -> DensityMatrix {
    let d: usize = dims.iter().product();
    let g = CMatrix::from_fn(d, |_, _| complex_gaussian(rng));
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    let m = w.scale_real(1.0 / tr);
    let m = CMatrix::from_fn(d, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    DensityMatrix::new(m, dims).expect("Wishart matrices are valid states")
}
