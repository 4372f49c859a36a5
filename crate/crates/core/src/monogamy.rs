//! Monogamy scores for three-party states and the conditions, identities and
//! bounds that characterize a vanishing discord monogamy score.
//!
//! With nodal observer `A` and the other parties `B`, `C` (in label order):
//!
//! * `δ_D = D(A:BC) − D(AB) − D(AC)`, discords measured on the side away from
//!   `A`;
//! * `δ_C = C²(A:BC) − C²(AB) − C²(AC)`, with `C(A:BC) = √(4 det ρ_A)` for
//!   pure states.
//!
//! For pure states `δ_D = S_A − S_{A|B} − S_{A|C}` exactly, which is what
//! [`prop2_residual`] evaluates.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{concurrence, discord, eof_from_concurrence, DiscordResult, SearchConfig};
use crate::qcore::{vn_entropy, Bipartition, DensityMatrix, PureState, QuantumState};

pub const DEFAULT_ZERO_BAND: f64 = 1e-4;
/// Tolerance on the inequality of [`prop1_check`].
pub const PROP1_TOL: f64 = 1e-6;
const SYMMETRY_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug)]
pub struct MonogamyConfig {
    pub search: SearchConfig,
    /// `|δ_D| < zero_band` counts as a vanishing score.
    pub zero_band: f64,
}

impl Default for MonogamyConfig {
    fn default() -> Self {
        Self {
            search: SearchConfig::default(),
            zero_band: DEFAULT_ZERO_BAND,
        }
    }
}

/// Every term of both monogamy scores for one state and nodal observer.
#[derive(Clone, Debug, Serialize)]
pub struct MonogamyReport {
    pub nodal: String,
    pub others: [String; 2],
    #[serde(rename = "delta_D")]
    pub delta_d: f64,
    /// Pure inputs only.
    #[serde(rename = "delta_C")]
    pub delta_c: Option<f64>,
    #[serde(rename = "D_A_BC")]
    pub d_a_bc: f64,
    #[serde(rename = "D_AB")]
    pub d_ab: f64,
    #[serde(rename = "D_AC")]
    pub d_ac: f64,
    #[serde(rename = "C_AB")]
    pub c_ab: f64,
    #[serde(rename = "C_AC")]
    pub c_ac: f64,
    /// Pure inputs only.
    #[serde(rename = "C_A_BC")]
    pub c_a_bc: Option<f64>,
    #[serde(rename = "S_A")]
    pub s_a: f64,
    #[serde(rename = "S_cond_AB")]
    pub s_cond_ab: f64,
    #[serde(rename = "S_cond_AC")]
    pub s_cond_ac: f64,
    #[serde(rename = "J_AB")]
    pub j_ab: f64,
    #[serde(rename = "J_AC")]
    pub j_ac: f64,
    #[serde(rename = "I_ABC")]
    pub interaction_information: f64,
    pub prop1_satisfied: bool,
    pub prop1_slack: f64,
    /// `S_A − S_{A|B} − S_{A|C}`, pure inputs only.
    pub prop2_residual: Option<f64>,
    /// `(lower, upper)` on `S_{A|B} + S_{A|C}`, pure inputs only.
    pub bounds: Option<(f64, f64)>,
    pub zero_band: bool,
    /// `D(A:BC)` came from the numerical four-level search.
    pub heuristic: bool,
}

impl MonogamyReport {
    pub const CSV_COLUMNS: [&'static str; 23] = [
        "nodal",
        "delta_D",
        "delta_C",
        "D_A_BC",
        "D_AB",
        "D_AC",
        "C_AB",
        "C_AC",
        "C_A_BC",
        "S_A",
        "S_cond_AB",
        "S_cond_AC",
        "J_AB",
        "J_AC",
        "I_ABC",
        "prop1_satisfied",
        "prop1_slack",
        "prop2_residual",
        "bound_lower",
        "bound_upper",
        "zero_band",
        "heuristic",
        "others",
    ];

    /// One CSV row in [`Self::CSV_COLUMNS`] order; absent values are empty.
    pub fn csv_record(&self) -> Vec<String> {
        let f = |x: f64| crate::scan::format_float(x);
        let o = |x: Option<f64>| x.map(f).unwrap_or_default();
        vec![
            self.nodal.clone(),
            f(self.delta_d),
            o(self.delta_c),
            f(self.d_a_bc),
            f(self.d_ab),
            f(self.d_ac),
            f(self.c_ab),
            f(self.c_ac),
            o(self.c_a_bc),
            f(self.s_a),
            f(self.s_cond_ab),
            f(self.s_cond_ac),
            f(self.j_ab),
            f(self.j_ac),
            f(self.interaction_information),
            self.prop1_satisfied.to_string(),
            f(self.prop1_slack),
            o(self.prop2_residual),
            o(self.bounds.map(|b| b.0)),
            o(self.bounds.map(|b| b.1)),
            self.zero_band.to_string(),
            self.heuristic.to_string(),
            format!("{}{}", self.others[0], self.others[1]),
        ]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// The nodal observer and the two other parties, in label order.
struct Roles {
    a: String,
    b: String,
    c: String,
}

impl Roles {
    fn new(labels: &[String], nodal: &str) -> Result<Self> {
        if labels.len() != 3 {
            return Err(Error::UnsupportedDimension(format!(
                "three parties required, got {}",
                labels.len()
            )));
        }
        if !labels.iter().any(|l| l == nodal) {
            return Err(Error::UnknownLabel(nodal.to_string()));
        }
        let mut rest = labels.iter().filter(|l| *l != nodal).cloned();
        Ok(Self {
            a: nodal.to_string(),
            b: rest.next().expect("three labels"),
            c: rest.next().expect("three labels"),
        })
    }
}

fn require_qubits(dims: &[usize]) -> Result<()> {
    if dims.iter().any(|&d| d != 2) {
        return Err(Error::UnsupportedDimension(format!(
            "qubits required, got dims {dims:?}"
        )));
    }
    Ok(())
}

/// Discord of the `A`–`X` marginal with `X` measured.
fn pair_discord(
    state: &QuantumState,
    a: &str,
    x: &str,
    search: &SearchConfig,
) -> Result<(DiscordResult, DensityMatrix)> {
    let rho = state.reduced(&[a, x])?;
    let cut = Bipartition::new(&[a], &[x], rho.labels())?;
    Ok((discord(&QuantumState::Mixed(rho.clone()), &cut, search)?, rho))
}

/// Measured conditional entropies `S_{A|B}` and `S_{A|C}`.
fn conditional_pair(
    state: &QuantumState,
    roles: &Roles,
    search: &SearchConfig,
) -> Result<(DiscordResult, DiscordResult)> {
    let (ab, _) = pair_discord(state, &roles.a, &roles.b, search)?;
    let (ac, _) = pair_discord(state, &roles.a, &roles.c, search)?;
    Ok((ab, ac))
}

fn det2(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    m[(0, 0)].re * m[(1, 1)].re - m[(0, 1)].norm_sqr()
}

/// `C(A:BC) = √(4 det ρ_A)` for a pure three-qubit state.
pub fn concurrence_one_vs_rest(psi: &PureState, nodal: &str) -> Result<f64> {
    require_qubits(psi.dims())?;
    Ok((4.0 * det2(&psi.reduced(&[nodal])?)).max(0.0).sqrt())
}

/// Full discord and entanglement monogamy report.
pub fn delta_d(state: &QuantumState, nodal: &str, cfg: &MonogamyConfig) -> Result<MonogamyReport> {
    let roles = Roles::new(state.labels(), nodal)?;
    require_qubits(state.dims())?;
    let (a, b, c) = (roles.a.as_str(), roles.b.as_str(), roles.c.as_str());

    let cut_a_bc = Bipartition::new(&[a], &[b, c], state.labels())?;
    let a_bc = discord(state, &cut_a_bc, &cfg.search)?;
    let (ab, rho_ab) = pair_discord(state, a, b, &cfg.search)?;
    let (ac, rho_ac) = pair_discord(state, a, c, &cfg.search)?;

    let c_ab = concurrence(&rho_ab)?;
    let c_ac = concurrence(&rho_ac)?;

    let s = |keep: &[&str]| -> Result<f64> { vn_entropy(&state.reduced(keep)?) };
    let s_a = s(&[a])?;
    let (s_b, s_c) = (s(&[b])?, s(&[c])?);
    let (s_ab, s_ac, s_bc) = (s(&[a, b])?, s(&[a, c])?, s(&[b, c])?);
    let s_abc = match state {
        QuantumState::Pure(_) => 0.0,
        QuantumState::Mixed(m) => vn_entropy(m)?,
    };
    let interaction_information = s_a + s_b + s_c - s_ab - s_bc - s_ac + s_abc;

    let s_cond_ab = ab.conditional_entropy;
    let s_cond_ac = ac.conditional_entropy;
    let delta = a_bc.discord - ab.discord - ac.discord;
    let prop1_slack = s_cond_ab + s_cond_ac - a_bc.discord;

    let (delta_c, c_a_bc, prop2_residual, bounds) = match state {
        QuantumState::Pure(psi) => {
            let c_a_bc = concurrence_one_vs_rest(psi, a)?;
            let delta_c = c_a_bc * c_a_bc - c_ab * c_ab - c_ac * c_ac;
            let bounds = bounds_from_entropies(s_a, s_b, s_c, s_ab, s_ac);
            (
                Some(delta_c),
                Some(c_a_bc),
                Some(s_a - s_cond_ab - s_cond_ac),
                Some(bounds),
            )
        }
        QuantumState::Mixed(_) => (None, None, None, None),
    };

    Ok(MonogamyReport {
        nodal: a.to_string(),
        others: [b.to_string(), c.to_string()],
        delta_d: delta,
        delta_c,
        d_a_bc: a_bc.discord,
        d_ab: ab.discord,
        d_ac: ac.discord,
        c_ab,
        c_ac,
        c_a_bc,
        s_a,
        s_cond_ab,
        s_cond_ac,
        j_ab: ab.classical_correlation,
        j_ac: ac.classical_correlation,
        interaction_information,
        prop1_satisfied: prop1_slack >= -PROP1_TOL,
        prop1_slack,
        prop2_residual,
        bounds,
        zero_band: delta.abs() < cfg.zero_band,
        heuristic: a_bc.optimizer_trace.heuristic,
    })
}

/// Entanglement monogamy score `C²(A:BC) − C²(AB) − C²(AC)`.
pub fn delta_c(psi: &PureState, nodal: &str) -> Result<f64> {
    let roles = Roles::new(psi.labels(), nodal)?;
    let c_a_bc = concurrence_one_vs_rest(psi, &roles.a)?;
    let c_ab = concurrence(&psi.reduced(&[&roles.a, &roles.b])?)?;
    let c_ac = concurrence(&psi.reduced(&[&roles.a, &roles.c])?)?;
    Ok(c_a_bc * c_a_bc - c_ab * c_ab - c_ac * c_ac)
}

pub fn delta_c_of(state: &QuantumState, nodal: &str) -> Result<f64> {
    match state {
        QuantumState::Pure(psi) => delta_c(psi, nodal),
        QuantumState::Mixed(_) => Err(Error::PureRequired("C(A:BC) is defined here for pure states")),
    }
}

/// Necessary condition for `δ_D = 0`: `D(A:BC) ≤ S_{A|B} + S_{A|C}`.
/// Returns `(satisfied, slack)` with `slack = S_{A|B} + S_{A|C} − D(A:BC)`.
pub fn prop1_check(state: &QuantumState, nodal: &str, search: &SearchConfig) -> Result<(bool, f64)> {
    let roles = Roles::new(state.labels(), nodal)?;
    require_qubits(state.dims())?;
    let cut = Bipartition::new(&[&roles.a], &[&roles.b, &roles.c], state.labels())?;
    let d_a_bc = discord(state, &cut, search)?.discord;
    let (ab, ac) = conditional_pair(state, &roles, search)?;
    let slack = ab.conditional_entropy + ac.conditional_entropy - d_a_bc;
    Ok((slack >= -PROP1_TOL, slack))
}

/// `S_A − S_{A|B} − S_{A|C}`; zero exactly when a pure state has `δ_D = 0`.
pub fn prop2_residual(psi: &PureState, nodal: &str, search: &SearchConfig) -> Result<f64> {
    let roles = Roles::new(psi.labels(), nodal)?;
    require_qubits(psi.dims())?;
    let state = QuantumState::Pure(psi.clone());
    let s_a = vn_entropy(&psi.reduced(&[nodal])?)?;
    let (ab, ac) = conditional_pair(&state, &roles, search)?;
    Ok(s_a - ab.conditional_entropy - ac.conditional_entropy)
}

/// Largest amplitude deviation under the five nontrivial party permutations.
pub fn symmetry_deviation(psi: &PureState) -> Result<f64> {
    let l: Vec<&str> = psi.labels().iter().map(String::as_str).collect();
    if l.len() != 3 {
        return Err(Error::UnsupportedDimension("three parties required".into()));
    }
    let orders = [
        [l[0], l[2], l[1]],
        [l[1], l[0], l[2]],
        [l[1], l[2], l[0]],
        [l[2], l[0], l[1]],
        [l[2], l[1], l[0]],
    ];
    let mut worst: f64 = 0.0;
    for o in orders {
        let q = psi.permuted(&o)?;
        for (x, y) in psi.amplitudes().iter().zip(q.amplitudes()) {
            worst = worst.max((x - y).norm());
        }
    }
    Ok(worst)
}

/// `½ S_A − S_{A|B}` for a permutation-symmetric pure state.
pub fn symmetric_condition_residual(psi: &PureState, nodal: &str, search: &SearchConfig) -> Result<f64> {
    let dev = symmetry_deviation(psi)?;
    if dev > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(dev));
    }
    let roles = Roles::new(psi.labels(), nodal)?;
    require_qubits(psi.dims())?;
    let state = QuantumState::Pure(psi.clone());
    let s_a = vn_entropy(&psi.reduced(&[nodal])?)?;
    let (ab, _) = pair_discord(&state, &roles.a, &roles.b, search)?;
    Ok(0.5 * s_a - ab.conditional_entropy)
}

/// `S_A + S_B + S_C − S_AB − S_BC − S_CA + S_ABC`.
pub fn interaction_information(state: &QuantumState) -> Result<f64> {
    let l: Vec<&str> = state.labels().iter().map(String::as_str).collect();
    if l.len() != 3 {
        return Err(Error::UnsupportedDimension("three parties required".into()));
    }
    let s = |keep: &[&str]| -> Result<f64> { vn_entropy(&state.reduced(keep)?) };
    let s_abc = match state {
        QuantumState::Pure(_) => 0.0,
        QuantumState::Mixed(m) => vn_entropy(m)?,
    };
    Ok(s(&[l[0]])? + s(&[l[1]])? + s(&[l[2]])? - s(&[l[0], l[1]])? - s(&[l[1], l[2]])? - s(&[l[2], l[0]])? + s_abc)
}

/// `E^f_AB + J_AC − S_A`, which vanishes for pure states. The two terms come
/// from independent routes: the concurrence closed form and the measured
/// conditional entropy search.
pub fn kw_residual(psi: &PureState, nodal: &str, search: &SearchConfig) -> Result<f64> {
    let roles = Roles::new(psi.labels(), nodal)?;
    require_qubits(psi.dims())?;
    let state = QuantumState::Pure(psi.clone());
    let eof_ab = eof_from_concurrence(concurrence(&psi.reduced(&[&roles.a, &roles.b])?)?);
    let (ac, _) = pair_discord(&state, &roles.a, &roles.c, search)?;
    let s_a = vn_entropy(&psi.reduced(&[nodal])?)?;
    Ok(eof_ab + ac.classical_correlation - s_a)
}

fn bounds_from_entropies(s_a: f64, s_b: f64, s_c: f64, s_ab: f64, s_ac: f64) -> (f64, f64) {
    let upper = s_a.min(s_b) + s_a.min(s_c);
    let lower = (s_a - s_ab).max(s_b - s_ab).max(0.0) + (s_a - s_ac).max(s_c - s_ac).max(0.0);
    (lower, upper)
}

/// Entropic bounds `(lower, upper)` on `S_{A|B} + S_{A|C}` for a pure state.
pub fn cond_entropy_bounds(psi: &PureState, nodal: &str) -> Result<(f64, f64)> {
    let roles = Roles::new(psi.labels(), nodal)?;
    let s = |keep: &[&str]| -> Result<f64> { vn_entropy(&psi.reduced(keep)?) };
    let (a, b, c) = (roles.a.as_str(), roles.b.as_str(), roles.c.as_str());
    Ok(bounds_from_entropies(
        s(&[a])?,
        s(&[b])?,
        s(&[c])?,
        s(&[a, b])?,
        s(&[a, c])?,
    ))
}

/// `(D_AB + D_AC) − (E^f_AB + E^f_AC)`, zero for pure three-qubit states.
pub fn discord_eof_pure_identity(psi: &PureState, nodal: &str, search: &SearchConfig) -> Result<f64> {
    let roles = Roles::new(psi.labels(), nodal)?;
    require_qubits(psi.dims())?;
    let state = QuantumState::Pure(psi.clone());
    let (ab, rho_ab) = pair_discord(&state, &roles.a, &roles.b, search)?;
    let (ac, rho_ac) = pair_discord(&state, &roles.a, &roles.c, search)?;
    let eof = eof_from_concurrence(concurrence(&rho_ab)?) + eof_from_concurrence(concurrence(&rho_ac)?);
    Ok(ab.discord + ac.discord - eof)
}

/// `S_A − E^f_AB − E^f_AC`: the pure-state score through the Koashi–Winter
/// identity, using only spectra and the two-qubit concurrence.
pub fn delta_d_koashi_winter(psi: &PureState, nodal: &str) -> Result<f64> {
    let roles = Roles::new(psi.labels(), nodal)?;
    require_qubits(psi.dims())?;
    let s_a = vn_entropy(&psi.reduced(&[nodal])?)?;
    let eof = |x: &str| -> Result<f64> { Ok(eof_from_concurrence(concurrence(&psi.reduced(&[&roles.a, x])?)?)) };
    Ok(s_a - eof(&roles.b)? - eof(&roles.c)?)
}

#[cfg(test)]
mod tests;
