//! Three-qubit state families: GHZ class (general and symmetric), the
//! four-term W class, superposition paths toward GHZ, and Haar sampling.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::matrix::{C64, ZERO};
use crate::qcore::random;
use crate::qcore::PureState;

const RANGE_SLACK: f64 = 1e-12;

/// `(|000⟩ + |111⟩)/√2`
pub fn ghz() -> PureState {
    PureState::qubits_from_real(&[1., 0., 0., 0., 0., 0., 0., 1.]).expect("valid")
}

/// `(|001⟩ + |010⟩ + |100⟩)/√3`
pub fn w_state() -> PureState {
    PureState::qubits_from_real(&[0., 1., 1., 0., 1., 0., 0., 0.]).expect("valid")
}

pub fn product_zero() -> PureState {
    PureState::basis(vec![2, 2, 2], &[0, 0, 0]).expect("valid")
}

/// Parameters of `cos θ |000⟩ + e^{iκ} sin θ |φ₁φ₂φ₃⟩` with
/// `|φ_j⟩ = cos α_j |0⟩ + sin α_j |1⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GhzClassParams {
    pub theta: f64,
    pub kappa: f64,
    pub alpha: [f64; 3],
    /// Accept the `θ = 0` and `α_j = 0` faces, where the state is not
    /// genuinely tripartite entangled.
    pub allow_degenerate: bool,
}

impl GhzClassParams {
    pub fn new(theta: f64, kappa: f64, alpha: [f64; 3]) -> Self {
        Self {
            theta,
            kappa,
            alpha,
            allow_degenerate: false,
        }
    }

    pub fn symmetric(theta: f64, kappa: f64, alpha: f64) -> Self {
        Self::new(theta, kappa, [alpha; 3])
    }

    pub fn degenerate(self) -> Self {
        Self {
            allow_degenerate: true,
            ..self
        }
    }

    /// True when a parameter sits on a `θ = 0` or `α_j = 0` face.
    pub fn is_degenerate(&self) -> bool {
        self.theta.abs() <= RANGE_SLACK || self.alpha.iter().any(|a| a.abs() <= RANGE_SLACK)
    }

    pub fn validate(&self) -> Result<()> {
        let open_low = |x: f64| {
            if self.allow_degenerate {
                x >= -RANGE_SLACK
            } else {
                x > RANGE_SLACK
            }
        };
        if !(open_low(self.theta) && self.theta <= FRAC_PI_4 + RANGE_SLACK) {
            return Err(Error::OutOfRange(format!("theta = {} not in (0, π/4]", self.theta)));
        }
        if !(-RANGE_SLACK..=2.0 * PI + RANGE_SLACK).contains(&self.kappa) {
            return Err(Error::OutOfRange(format!("kappa = {} not in [0, 2π]", self.kappa)));
        }
        for (j, &a) in self.alpha.iter().enumerate() {
            if !(open_low(a) && a <= FRAC_PI_2 + RANGE_SLACK) {
                return Err(Error::OutOfRange(format!("alpha{} = {a} not in (0, π/2]", j + 1)));
            }
        }
        Ok(())
    }

    /// Squared norm of the unnormalized superposition,
    /// `1 + sin 2θ cos α₁ cos α₂ cos α₃ cos κ`.
    pub fn norm_sq(&self) -> f64 {
        1.0 + (2.0 * self.theta).sin() * self.alpha.iter().map(|a| a.cos()).product::<f64>() * self.kappa.cos()
    }
}

fn ghz_class_amplitudes(p: &GhzClassParams) -> Vec<C64> {
    let phis: Vec<[f64; 2]> = p.alpha.iter().map(|a| [a.cos(), a.sin()]).collect();
    let weight = C64::from_polar(p.theta.sin(), p.kappa);
    let mut amps = vec![ZERO; 8];
    for (idx, amp) in amps.iter_mut().enumerate() {
        let bits = [(idx >> 2) & 1, (idx >> 1) & 1, idx & 1];
        let prod: f64 = bits.iter().zip(&phis).map(|(&b, phi)| phi[b]).product();
        *amp = weight * prod;
    }
    amps[0] += C64::new(p.theta.cos(), 0.0);
    amps
}

/// Normalized GHZ-class state.
pub fn ghz_class(p: &GhzClassParams) -> Result<PureState> {
    p.validate()?;
    PureState::new(ghz_class_amplitudes(p), vec![2, 2, 2])
}

/// GHZ-class state with `α₁ = α₂ = α₃ = α`.
pub fn symmetric_ghz(theta: f64, kappa: f64, alpha: f64, allow_degenerate: bool) -> Result<PureState> {
    let mut p = GhzClassParams::symmetric(theta, kappa, alpha);
    p.allow_degenerate = allow_degenerate;
    ghz_class(&p)
}

/// Closed-form concurrence of any two-qubit marginal of the symmetric
/// GHZ-class state: `C = √λ₁ − √λ₂` with `λ₁,₂ = (a ± b) c`,
/// `a = 3 + cos 2α`, `b = 4 cos α` and
/// `c = sin⁴α sin²2θ / (8 (1 + cos³α cos κ sin 2θ)²)`.
///
/// `λ₁,₂` are the eigenvalues of `ρρ̃` for the rank-two marginal, so a
/// negative `λ₂` (impossible up to rounding) is reported instead of clamped.
pub fn symmetric_concurrence_closed_form(theta: f64, kappa: f64, alpha: f64) -> Result<f64> {
    let (a, b, c) = symmetric_concurrence_coefficients(theta, kappa, alpha);
    let (l1, l2) = ((a + b) * c, (a - b) * c);
    if l2 < 0.0 || !l1.is_finite() {
        return Err(Error::OutOfDomain(format!(
            "lambda2 = {l2:e} at (theta, kappa, alpha) = ({theta}, {kappa}, {alpha})"
        )));
    }
    Ok(l1.sqrt() - l2.sqrt())
}

pub fn symmetric_concurrence_coefficients(theta: f64, kappa: f64, alpha: f64) -> (f64, f64, f64) {
    let a = 3.0 + (2.0 * alpha).cos();
    let b = 4.0 * alpha.cos();
    let s2t = (2.0 * theta).sin();
    let denom = 1.0 + alpha.cos().powi(3) * kappa.cos() * s2t;
    let c = alpha.sin().powi(4) * s2t * s2t / (8.0 * denom * denom);
    (a, b, c)
}

/// Parameters of the four-term W-class state
/// `s₁s₂c₃ e^{iφ₁}|001⟩ + s₁s₂s₃ e^{iφ₂}|010⟩ + s₁c₂ e^{iφ₃}|100⟩ + c₁|000⟩`
/// with `s_k = sin(θ_k/2)`, `c_k = cos(θ_k/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WClassParams {
    pub theta: [f64; 3],
    pub phi: [f64; 3],
}

pub fn w_class(p: &WClassParams) -> Result<PureState> {
    let [s1, s2, s3] = p.theta.map(|t| (0.5 * t).sin());
    let [c1, c2, c3] = p.theta.map(|t| (0.5 * t).cos());
    let mut amps = vec![ZERO; 8];
    amps[0b000] = C64::new(c1, 0.0);
    amps[0b001] = C64::from_polar(s1 * s2 * c3, p.phi[0]);
    amps[0b010] = C64::from_polar(s1 * s2 * s3, p.phi[1]);
    amps[0b100] = C64::from_polar(s1 * c2, p.phi[2]);
    PureState::new(amps, vec![2, 2, 2])
}

/// Non-symmetric GHZ-class starting point of the GHZ path.
pub fn phi_ghz() -> PureState {
    ghz_class(&GhzClassParams::new(0.7, 3.06, [0.55, 0.56, 0.63])).expect("in range")
}

pub const PHI_W_PARAMS: WClassParams = WClassParams {
    theta: [3.25, 4.38, 11.02],
    phi: [4.16, 3.98, 2.45],
};

/// Non-symmetric W-class starting point of the W→GHZ path.
pub fn phi_w() -> PureState {
    w_class(&PHI_W_PARAMS).expect("nonzero norm")
}

/// `cos t |start⟩ + sin t |end⟩` for normalized endpoints, renormalized.
pub fn superpose(start: &PureState, end: &PureState, t: f64) -> Result<PureState> {
    if !(-RANGE_SLACK..=FRAC_PI_2 + RANGE_SLACK).contains(&t) {
        return Err(Error::OutOfRange(format!("path parameter {t} not in [0, π/2]")));
    }
    let (s, c) = t.sin_cos();
    let amps = start
        .amplitudes()
        .iter()
        .zip(end.amplitudes())
        .map(|(a, b)| a * c + b * s)
        .collect();
    PureState::new(amps, start.dims().to_vec())
}

/// `cos μ |φ^GHZ⟩ + sin μ |GHZ⟩`, `μ ∈ [0, π/2]`.
pub fn path_ghz(mu: f64) -> Result<PureState> {
    superpose(&phi_ghz(), &ghz(), mu)
}

/// `cos τ |φ^W⟩ + sin τ |GHZ⟩`, `τ ∈ [0, π/2]`.
pub fn path_w_ghz(tau: f64) -> Result<PureState> {
    superpose(&phi_w(), &ghz(), tau)
}

/// Haar-random three-qubit pure state determined by `(seed, stream)`.
pub fn haar_random(seed: u64, stream: u64) -> PureState {
    random::haar_state(&mut random::rng(seed, stream), vec![2, 2, 2])
}

/// A named state family with its parameter list, as used by scans and the
/// command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `(θ, κ, α)`
    SymmetricGhz,
    /// `(θ, κ, α₁, α₂, α₃)`
    GhzClass,
    /// `(θ₁, θ₂, θ₃, φ₁, φ₂, φ₃)`
    WClass,
    /// `(μ)`
    PathGhz,
    /// `(τ)`
    PathWGhz,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::SymmetricGhz,
        Family::GhzClass,
        Family::WClass,
        Family::PathGhz,
        Family::PathWGhz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::SymmetricGhz => "symmetric_ghz",
            Self::GhzClass => "ghz_class",
            Self::WClass => "w_class",
            Self::PathGhz => "path_ghz",
            Self::PathWGhz => "path_w_ghz",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == name)
            .ok_or_else(|| Error::Scan(format!("unknown family `{name}`")))
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Self::SymmetricGhz => &["theta", "kappa", "alpha"],
            Self::GhzClass => &["theta", "kappa", "alpha1", "alpha2", "alpha3"],
            Self::WClass => &["theta1", "theta2", "theta3", "phi1", "phi2", "phi3"],
            Self::PathGhz => &["mu"],
            Self::PathWGhz => &["tau"],
        }
    }

    pub fn arity(self) -> usize {
        self.param_names().len()
    }

    /// Builds the state; GHZ-class faces are accepted.
    pub fn state(self, params: &[f64]) -> Result<PureState> {
        if params.len() != self.arity() {
            return Err(Error::Scan(format!(
                "{} takes {} parameters, got {}",
                self.name(),
                self.arity(),
                params.len()
            )));
        }
        match self {
            Self::SymmetricGhz => symmetric_ghz(params[0], params[1], params[2], true),
            Self::GhzClass => {
                ghz_class(&GhzClassParams::new(params[0], params[1], [params[2], params[3], params[4]]).degenerate())
            }
            Self::WClass => w_class(&WClassParams {
                theta: [params[0], params[1], params[2]],
                phi: [params[3], params[4], params[5]],
            }),
            Self::PathGhz => path_ghz(params[0]),
            Self::PathWGhz => path_w_ghz(params[0]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::concurrence;

    fn close(a: &PureState, b: &PureState, tol: f64) -> bool {
        a.amplitudes()
            .iter()
            .zip(b.amplitudes())
            .all(|(x, y)| (x - y).norm() <= tol)
    }

    /// All six permutations of three qubits.
    fn permutations(psi: &PureState) -> Vec<PureState> {
        [
            ["A", "B", "C"],
            ["A", "C", "B"],
            ["B", "A", "C"],
            ["B", "C", "A"],
            ["C", "A", "B"],
            ["C", "B", "A"],
        ]
        .iter()
        .map(|o| psi.permuted(o).unwrap())
        .collect()
    }

    #[test]
    fn ghz_class_corners() {
        let g = ghz_class(&GhzClassParams::symmetric(FRAC_PI_4, 0.0, FRAC_PI_2)).unwrap();
        assert!(close(&g, &ghz(), 1e-15));
        let p = ghz_class(&GhzClassParams::symmetric(0.3, 1.0, 0.0).degenerate()).unwrap();
        assert!((p.inner(&product_zero()).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ghz_class_range_checks() {
        assert!(ghz_class(&GhzClassParams::symmetric(0.0, 1.0, 0.5)).is_err());
        assert!(ghz_class(&GhzClassParams::symmetric(0.0, 1.0, 0.5).degenerate()).is_ok());
        assert!(ghz_class(&GhzClassParams::symmetric(0.9, 1.0, 0.5)).is_err());
        assert!(ghz_class(&GhzClassParams::symmetric(0.5, 7.0, 0.5)).is_err());
        assert!(ghz_class(&GhzClassParams::new(0.5, 1.0, [0.5, 1.7, 0.5])).is_err());
        assert!(GhzClassParams::symmetric(0.0, 1.0, 0.5).is_degenerate());
    }

    #[test]
    fn ghz_class_norm_formula() {
        let p = GhzClassParams::new(0.7, 3.06, [0.55, 0.56, 0.63]);
        let raw = ghz_class_amplitudes(&p);
        let n2: f64 = raw.iter().map(|a| a.norm_sqr()).sum();
        assert!((n2 - p.norm_sq()).abs() < 1e-14);
    }

    #[test]
    fn symmetric_matches_general_exactly() {
        let a = symmetric_ghz(0.4, 1.0, 0.9, false).unwrap();
        let b = ghz_class(&GhzClassParams::new(0.4, 1.0, [0.9; 3])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn symmetric_states_are_permutation_invariant() {
        for (t, k, a) in [(0.4, 1.0, 0.9), (0.1, 5.0, 1.4), (FRAC_PI_4, 2.2, 0.3)] {
            let psi = symmetric_ghz(t, k, a, false).unwrap();
            for q in permutations(&psi) {
                assert!(close(&psi, &q, 1e-15));
            }
        }
    }

    #[test]
    fn symmetric_tri_separable_point() {
        let psi = symmetric_ghz(0.4, 1.0, 0.0, true).unwrap();
        assert!((psi.inner(&product_zero()).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn closed_form_concurrence_examples() {
        // α = π/2: marginals of GHZ-like states are separable
        assert!(symmetric_concurrence_closed_form(0.5, 1.0, FRAC_PI_2).unwrap().abs() < 1e-12);
        let m = symmetric_ghz(0.5, 1.0, FRAC_PI_2, false)
            .unwrap()
            .reduced(&["A", "B"])
            .unwrap();
        assert!(concurrence(&m).unwrap().abs() < 1e-9);
        // C ∝ sin²α near the α = 0 face
        assert!(symmetric_concurrence_closed_form(0.5, 1.0, 1e-4).unwrap().abs() < 1e-7);
    }

    #[test]
    fn closed_form_concurrence_matches_wootters() {
        let mut r = random::rng(31, 0);
        use rand::Rng;
        for _ in 0..500 {
            let t = r.random_range(1e-3..FRAC_PI_4);
            let k = r.random_range(0.0..2.0 * PI);
            let a = r.random_range(1e-3..FRAC_PI_2);
            let psi = symmetric_ghz(t, k, a, false).unwrap();
            let wootters = concurrence(&psi.reduced(&["A", "B"]).unwrap()).unwrap();
            let closed = symmetric_concurrence_closed_form(t, k, a).unwrap();
            assert!(
                (wootters - closed).abs() < 1e-6,
                "({t},{k},{a}): {wootters} vs {closed}"
            );
        }
    }

    #[test]
    fn w_class_examples() {
        // θ₁ = 0 leaves only |000⟩
        let p = w_class(&WClassParams {
            theta: [0.0, 1.0, 2.0],
            phi: [0.3, 0.2, 0.1],
        })
        .unwrap();
        assert!((p.inner(&product_zero()).norm() - 1.0).abs() < 1e-15);

        // equal excited weights: s₁c₂ = s₁s₂c₃ = s₁s₂s₃ with θ₁ = π
        // → c₂ = 1/√3, and s₃ = c₃ = 1/√2
        let theta2 = 2.0 * (1.0 / 3f64.sqrt()).acos();
        let w = w_class(&WClassParams {
            theta: [PI, theta2, FRAC_PI_2],
            phi: [0.0; 3],
        })
        .unwrap();
        assert!(close(&w, &w_state(), 1e-14));
    }

    #[test]
    fn path_endpoints() {
        assert!(close(&path_ghz(0.0).unwrap(), &phi_ghz(), 1e-15));
        assert!(close(&path_ghz(FRAC_PI_2).unwrap(), &ghz(), 1e-15));
        assert!((path_ghz(FRAC_PI_4).unwrap().norm() - 1.0).abs() < 1e-12);
        assert!(close(&path_w_ghz(0.0).unwrap(), &phi_w(), 1e-15));
        assert!(close(&path_w_ghz(FRAC_PI_2).unwrap(), &ghz(), 1e-15));
        assert!(path_ghz(-0.1).is_err());
        assert!(path_w_ghz(1.7).is_err());
    }

    #[test]
    fn haar_is_seed_deterministic_and_normalized() {
        assert_eq!(haar_random(5, 9), haar_random(5, 9));
        assert_ne!(haar_random(5, 9), haar_random(5, 10));
        for s in 0..100 {
            assert!((haar_random(1, s).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn haar_mean_purity_against_second_stream() {
        // Monte Carlo estimate of E[tr ρ_A²]; the same estimate from an
        // independent generator family (SplitMix-seeded Box–Muller) serves as
        // the oracle, and both must agree with each other within noise.
        let n = 10_000;
        let purity = |psi: &PureState| psi.reduced(&["A"]).unwrap().purity();
        let mean: f64 = (0..n).map(|i| purity(&haar_random(77, i))).sum::<f64>() / n as f64;

        let mut state = 0x9e37_79b9_7f4a_7c15u64;
        let mut next_uniform = || {
            state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            z ^= z >> 31;
            ((z >> 11) as f64 + 0.5) / (1u64 << 53) as f64
        };
        let mut oracle = 0.0;
        for _ in 0..n {
            let amps: Vec<C64> = (0..8)
                .map(|_| {
                    let (u1, u2) = (next_uniform(), next_uniform());
                    let r = (-2.0 * u1.ln()).sqrt();
                    C64::new(r * (2.0 * PI * u2).cos(), r * (2.0 * PI * u2).sin())
                })
                .collect();
            oracle += purity(&PureState::new(amps, vec![2, 2, 2]).unwrap());
        }
        oracle /= n as f64;
        // purity of a qubit marginal of a Haar 2x4 state has sd ≈ 0.1
        assert!((mean - oracle).abs() < 0.01, "{mean} vs {oracle}");
    }

    #[test]
    fn family_dispatch() {
        assert_eq!(Family::parse("path_w_ghz").unwrap(), Family::PathWGhz);
        assert!(Family::parse("nope").is_err());
        assert!(Family::SymmetricGhz.state(&[0.4, 1.0]).is_err());
        assert!(Family::SymmetricGhz.state(&[0.0, 1.0, 0.3]).is_ok());
        for f in Family::ALL {
            assert_eq!(Family::parse(f.name()).unwrap(), f);
        }
    }
}
