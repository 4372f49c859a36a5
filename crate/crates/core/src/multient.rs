//! Generalized geometric measure of genuine multipartite entanglement.

use crate::error::{Error, Result};
use crate::qcore::{schmidt_sq_max, Bipartition, PureState};

/// `1 − max_cuts λ²_max`, the largest squared Schmidt coefficient taken over
/// every bipartition. Zero exactly when the state is a product across some
/// cut.
pub fn ggm(psi: &PureState) -> Result<f64> {
    if psi.parties() < 2 {
        return Err(Error::UnsupportedDimension("GGM needs at least two parties".into()));
    }
    if psi.parties() > 4 {
        return Err(Error::UnsupportedDimension("GGM supports at most four parties".into()));
    }
    let mut best: f64 = 0.0;
    for cut in Bipartition::all(psi.labels()) {
        best = best.max(schmidt_sq_max(psi, &cut)?);
    }
    Ok((1.0 - best).max(0.0))
}
