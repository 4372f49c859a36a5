//! Linear algebra and state primitives shared by every other module.

pub mod io;
pub mod matrix;
pub mod random;
pub mod state;

pub use matrix::{eig_hermitian, eigvals_hermitian, CMatrix, EigenSpectrum, C64};
pub use state::{Bipartition, DensityMatrix, PureState, QuantumState};

use crate::error::{Error, Result};

/// Eigenvalues below this contribute nothing to an entropy.
pub const ENTROPY_CUTOFF: f64 = 1e-12;
/// Eigenvalues in `[-CLAMP_TOL, 0)` are numerical noise and clamped to zero.
pub const CLAMP_TOL: f64 = 1e-9;

/// Shannon entropy in bits of a probability vector given by eigenvalues.
pub fn entropy_of_spectrum(values: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &v in values {
        if v < -CLAMP_TOL {
            return Err(Error::NotPsd(v));
        }
        if v > ENTROPY_CUTOFF {
            s -= v * v.log2();
        }
    }
    Ok(s.max(0.0))
}

/// Binary entropy `H(p)` in bits; `H(0) = H(1) = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x > ENTROPY_CUTOFF { -x * x.log2() } else { 0.0 };
    term(p) + term(1.0 - p)
}

/// Von Neumann entropy `-tr(ρ log₂ ρ)`.
pub fn vn_entropy(rho: &DensityMatrix) -> Result<f64> {
    entropy_of_spectrum(&eigvals_hermitian(rho.matrix())?)
}

/// Entropy of the reduced state on `keep`.
pub fn marginal_entropy(state: &QuantumState, keep: &[&str]) -> Result<f64> {
    vn_entropy(&state.reduced(keep)?)
}

/// Largest eigenvalue of the reduced state on side one of `cut`, i.e. the
/// largest squared Schmidt coefficient across the cut.
pub fn schmidt_sq_max(psi: &PureState, cut: &Bipartition) -> Result<f64> {
    let one = psi.reduced(&cut.side_one())?;
    let two_dim: usize = psi
        .labels()
        .iter()
        .zip(psi.dims())
        .filter(|(l, _)| cut.side_two().contains(&l.as_str()))
        .map(|(_, d)| d)
        .product();
    // the smaller side has the cheaper spectrum; both share nonzero eigenvalues
    let reduced = if two_dim < one.dim() {
        psi.reduced(&cut.side_two())?
    } else {
        one
    };
    Ok(eigvals_hermitian(reduced.matrix())?[0].min(1.0))
}
