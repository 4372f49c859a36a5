//! Experiment drivers: grid sweeps, zero-score root finding along lines and
//! over the symmetric surface, interpolation path traces and Haar sampling.
//!
//! All drivers use the exact pure-state route: `D(A:BC) = S_A`, pairwise
//! discords from the qubit basis search.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};
use std::io::Write;

use serde::Serialize;

use crate::bell::{mk_optimize, mk_symmetric_closed_form, MkSearch};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::measures::{concurrence, conditional_entropy_min, eof_from_concurrence, SearchConfig};
use crate::monogamy::{concurrence_one_vs_rest, delta_d_koashi_winter, symmetry_deviation};
use crate::multient::ggm;
use crate::qcore::{binary_entropy, eigvals_hermitian, vn_entropy, Bipartition, PureState};
use crate::states::{haar_random, superpose, symmetric_concurrence_closed_form, symmetric_ghz, Family};

/// Band for analytic families.
pub const DEFAULT_EPSILON: f64 = 1e-4;
/// Band for Haar sampling.
pub const SAMPLE_EPSILON: f64 = 1e-3;
/// Tolerance of the Proposition IV inequality.
pub const PROP4_TOL: f64 = 1e-6;

/// `%.9g`-style formatting: 9 significant digits, trailing zeros trimmed.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // the exponent after rounding to 9 digits decides the notation, as in C
    let sci = format!("{x:.8e}");
    let (mantissa, e) = sci.split_once('e').expect("exponent");
    let exp: i32 = e.parse().expect("exponent digits");
    if !(-4..9).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs());
    }
    let decimals = (8 - exp) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Scores of a pure three-qubit state for one nodal observer.
#[derive(Clone, Debug, Serialize)]
pub struct PureScores {
    pub delta_d: f64,
    pub delta_c: f64,
    pub ggm: f64,
    pub s_a: f64,
    pub s_cond_ab: f64,
    pub s_cond_ac: f64,
    pub d_ab: f64,
    pub d_ac: f64,
}

impl PureScores {
    /// `S_{A|B} + S_{A|C} − D(A:BC)`.
    pub fn prop1_slack(&self) -> f64 {
        self.s_cond_ab + self.s_cond_ac - self.s_a
    }
}

/// Scores through the pure-state route. With `symmetric`, the `C` marginal
/// is taken equal to the `B` marginal, which is exact for permutation
/// symmetric states.
pub fn pure_scores(psi: &PureState, nodal: &str, search: &SearchConfig, symmetric: bool) -> Result<PureScores> {
    let labels = psi.labels();
    if labels.len() != 3 || psi.dims().iter().any(|&d| d != 2) {
        return Err(Error::UnsupportedDimension("three qubits required".into()));
    }
    let mut others = labels.iter().filter(|l| *l != nodal).map(String::as_str);
    let (b, c) = match (others.next(), others.next()) {
        (Some(b), Some(c)) => (b, c),
        _ => return Err(Error::UnknownLabel(nodal.to_string())),
    };
    let s = |keep: &[&str]| -> Result<f64> { vn_entropy(&psi.reduced(keep)?) };
    let s_a = s(&[nodal])?;
    // for a pure state S_AX equals the entropy of the remaining party
    let (s_b, s_c) = (s(&[b])?, s(&[c])?);
    let pair = |x: &str| -> Result<(f64, f64)> {
        let rho = psi.reduced(&[nodal, x])?;
        let cut = Bipartition::new(&[nodal], &[x], rho.labels())?;
        let cond = conditional_entropy_min(&rho, &cut, search)?.value;
        Ok((cond, concurrence(&rho)?))
    };
    let (s_cond_ab, c_ab) = pair(b)?;
    let (s_cond_ac, c_ac) = if symmetric { (s_cond_ab, c_ab) } else { pair(c)? };
    // D_AX = I_AX − J_AX with I_AX = S_A + S_X − S_AX and J_AX = S_A − S_{A|X}
    let d_ab = (s_a + s_b - s_c) - (s_a - s_cond_ab);
    let d_ac = (s_a + s_c - s_b) - (s_a - s_cond_ac);
    let c_a_bc = concurrence_one_vs_rest(psi, nodal)?;
    Ok(PureScores {
        delta_d: s_a - d_ab - d_ac,
        delta_c: c_a_bc * c_a_bc - c_ab * c_ab - c_ac * c_ac,
        ggm: ggm(psi)?,
        s_a,
        s_cond_ab,
        s_cond_ac,
        d_ab,
        d_ac,
    })
}

#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub nodal: String,
    pub search: SearchConfig,
    pub epsilon: f64,
    /// Optimized MK value per record when set.
    pub mk: Option<MkSearch>,
    pub exec: Execution,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            nodal: "A".into(),
            search: SearchConfig::default(),
            epsilon: DEFAULT_EPSILON,
            mk: None,
            exec: Execution::default(),
        }
    }
}

/// One evaluated family point.
#[derive(Clone, Debug, Serialize)]
pub struct ScanRecord {
    pub family: Family,
    pub params: Vec<f64>,
    pub delta_d: f64,
    pub delta_c: f64,
    pub ggm: f64,
    pub mk: Option<f64>,
    pub prop1_slack: f64,
    /// `½ S_A − S_{A|B}`, symmetric family only.
    pub symmetric_residual: Option<f64>,
    pub zero_band: bool,
}

pub fn evaluate(family: Family, params: &[f64], opts: &ScanOptions) -> Result<ScanRecord> {
    let psi = family.state(params)?;
    let symmetric = family == Family::SymmetricGhz;
    let scores = pure_scores(&psi, &opts.nodal, &opts.search, symmetric)?;
    let mk = match &opts.mk {
        Some(search) => Some(mk_optimize(&psi.into(), search)?.value),
        None => None,
    };
    let record = ScanRecord {
        family,
        params: params.to_vec(),
        delta_d: scores.delta_d,
        delta_c: scores.delta_c,
        ggm: scores.ggm,
        mk,
        prop1_slack: scores.prop1_slack(),
        symmetric_residual: symmetric.then_some(0.5 * scores.s_a - scores.s_cond_ab),
        zero_band: scores.delta_d.abs() < opts.epsilon,
    };
    let finite = [record.delta_d, record.delta_c, record.ggm, record.prop1_slack]
        .into_iter()
        .chain(record.mk)
        .all(f64::is_finite);
    if !finite {
        return Err(Error::Scan(format!("non-finite result at {params:?}")));
    }
    Ok(record)
}

/// CSV header for a family: `family,p1,…,pk,delta_D,delta_C,ggm,mk,zero_band`.
pub fn csv_header(family: Family) -> Vec<String> {
    let mut h = vec!["family".to_string()];
    h.extend((1..=family.arity()).map(|i| format!("p{i}")));
    h.extend(["delta_D", "delta_C", "ggm", "mk", "zero_band"].map(String::from));
    h
}

pub fn write_records<W: Write>(out: W, family: Family, records: &[ScanRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(csv_header(family))?;
    for r in records {
        let mut row = vec![r.family.name().to_string()];
        row.extend(r.params.iter().map(|&p| format_float(p)));
        row.extend([format_float(r.delta_d), format_float(r.delta_c), format_float(r.ggm)]);
        row.push(r.mk.map(format_float).unwrap_or_default());
        row.push(r.zero_band.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Inclusive evenly spaced range; one step means `start` alone.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Axis {
    pub start: f64,
    pub end: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(start: f64, end: f64, steps: usize) -> Self {
        Self { start, end, steps }
    }

    pub fn point(value: f64) -> Self {
        Self::new(value, value, 1)
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.steps <= 1 {
            self.start
        } else if i + 1 == self.steps {
            self.end
        } else {
            self.start + (self.end - self.start) * i as f64 / (self.steps - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.value(i)).collect()
    }

    fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::Scan("axis with zero steps".into()));
        }
        if !self.start.is_finite() || !self.end.is_finite() {
            return Err(Error::Scan("axis bounds must be finite".into()));
        }
        Ok(())
    }
}

/// Row-major sweep over `axes` (last axis fastest), one axis per parameter.
pub fn grid_scan(family: Family, axes: &[Axis], opts: &ScanOptions) -> Result<Vec<ScanRecord>> {
    if axes.len() != family.arity() {
        return Err(Error::Scan(format!(
            "{} takes {} axes, got {}",
            family.name(),
            family.arity(),
            axes.len()
        )));
    }
    for a in axes {
        a.validate()?;
    }
    let total: usize = axes.iter().map(|a| a.steps).product();
    opts.exec.try_map(total, |mut k| {
        let mut params = vec![0.0; axes.len()];
        for (p, a) in params.iter_mut().zip(axes).rev() {
            *p = a.value(k % a.steps);
            k /= a.steps;
        }
        evaluate(family, &params, opts)
    })
}

/// A family line: all parameters fixed except `axis`, swept over
/// `[start, end]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineSpec {
    pub family: Family,
    pub base: Vec<f64>,
    pub axis: usize,
    pub start: f64,
    pub end: f64,
}

impl LineSpec {
    pub fn new(family: Family, base: Vec<f64>, axis: usize, start: f64, end: f64) -> Result<Self> {
        if base.len() != family.arity() || axis >= base.len() {
            return Err(Error::Scan(format!(
                "line needs {} parameters and an axis below that, got {} and {axis}",
                family.arity(),
                base.len()
            )));
        }
        if start.is_nan() || end.is_nan() || start >= end {
            return Err(Error::Scan(format!("empty line range [{start}, {end}]")));
        }
        Ok(Self {
            family,
            base,
            axis,
            start,
            end,
        })
    }

    /// The full `[0, π/2]` range of a path family.
    pub fn path(family: Family) -> Result<Self> {
        if !matches!(family, Family::PathGhz | Family::PathWGhz) {
            return Err(Error::Scan(format!("{} is not a path", family.name())));
        }
        Self::new(family, vec![0.0], 0, 0.0, FRAC_PI_2)
    }

    pub fn params_at(&self, x: f64) -> Vec<f64> {
        let mut p = self.base.clone();
        p[self.axis] = x;
        p
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CrossingOptions {
    /// Evenly spaced samples used to bracket sign changes.
    pub presample: usize,
    /// Final bracket width.
    pub tolerance: f64,
    /// Samples with `|δ_D|` below this carry no sign; this keeps the
    /// degenerate zero-score faces out of the count.
    pub noise_floor: f64,
}

impl Default for CrossingOptions {
    fn default() -> Self {
        Self {
            presample: 400,
            tolerance: 1e-6,
            noise_floor: 1e-7,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroCrossing {
    pub line: LineSpec,
    pub location: f64,
    pub width: f64,
    /// `δ_D` at the lower and upper bracket ends.
    pub delta_low: f64,
    pub delta_high: f64,
    pub delta_at: f64,
    pub ggm_at: f64,
    /// `δ_D` goes from negative to positive.
    pub rising: bool,
}

fn line_score(line: &LineSpec, x: f64, opts: &ScanOptions) -> Result<PureScores> {
    let psi = line.family.state(&line.params_at(x))?;
    pure_scores(&psi, &opts.nodal, &opts.search, line.family == Family::SymmetricGhz)
}

fn sign(v: f64, floor: f64) -> i8 {
    if v > floor {
        1
    } else if v < -floor {
        -1
    } else {
        0
    }
}

/// Interior sign changes of `δ_D` along `line`, each refined by bisection.
pub fn find_zero_crossings(line: &LineSpec, cross: &CrossingOptions, opts: &ScanOptions) -> Result<Vec<ZeroCrossing>> {
    if cross.presample < 2 {
        return Err(Error::Scan("presample needs at least two points".into()));
    }
    let xs = Axis::new(line.start, line.end, cross.presample).values();
    let deltas = opts
        .exec
        .try_map(xs.len(), |i| line_score(line, xs[i], opts).map(|s| s.delta_d))?;

    let signed: Vec<(f64, f64, i8)> = xs
        .iter()
        .zip(&deltas)
        .map(|(&x, &d)| (x, d, sign(d, cross.noise_floor)))
        .filter(|t| t.2 != 0)
        .collect();
    let brackets: Vec<_> = signed
        .windows(2)
        .filter(|w| w[0].2 != w[1].2)
        .map(|w| (w[0], w[1]))
        .collect();

    let mut out = Vec::with_capacity(brackets.len());
    for ((mut lo, mut d_lo, s_lo), (mut hi, mut d_hi, _)) in brackets {
        let mut mid_scores = None;
        while hi - lo > cross.tolerance {
            let mid = 0.5 * (lo + hi);
            let sc = line_score(line, mid, opts)?;
            let d = sc.delta_d;
            mid_scores = Some((mid, sc));
            if d == 0.0 {
                lo = mid;
                hi = mid;
                d_lo = d;
                d_hi = d;
                break;
            }
            if (d > 0.0) == (s_lo > 0) {
                lo = mid;
                d_lo = d;
            } else {
                hi = mid;
                d_hi = d;
            }
        }
        let location = 0.5 * (lo + hi);
        let at = match mid_scores {
            Some((m, sc)) if m == location => sc,
            _ => line_score(line, location, opts)?,
        };
        out.push(ZeroCrossing {
            line: line.clone(),
            location,
            width: hi - lo,
            delta_low: d_lo,
            delta_high: d_hi,
            delta_at: at.delta_d,
            ggm_at: at.ggm,
            rising: s_lo < 0,
        });
    }
    Ok(out)
}

/// `2 E^f_AB − S_A` from the closed-form concurrence and the single-site
/// spectrum; zero on the symmetric zero-score surface.
pub fn surface_condition_residual(theta: f64, kappa: f64, alpha: f64) -> Result<f64> {
    let c = symmetric_concurrence_closed_form(theta, kappa, alpha)?;
    let h = (1.0 + (1.0 - c * c).max(0.0).sqrt()) / 2.0;
    let psi = symmetric_ghz(theta, kappa, alpha, true)?;
    let e1 = eigvals_hermitian(psi.reduced(&["A"])?.matrix())?[0];
    Ok(2.0 * binary_entropy(h) - binary_entropy(e1))
}

#[derive(Clone, Debug, Serialize)]
pub struct SurfacePoint {
    pub theta: f64,
    pub kappa: f64,
    pub alpha: f64,
    pub crossing: ZeroCrossing,
    /// `None` where the closed-form concurrence is out of its domain.
    pub closed_form_residual: Option<f64>,
}

/// Interior zero-score crossings along `α ∈ (0, π/2]` for every `(θ, κ)`.
pub fn surface_zero(
    thetas: Axis,
    kappas: Axis,
    cross: &CrossingOptions,
    opts: &ScanOptions,
) -> Result<Vec<SurfacePoint>> {
    thetas.validate()?;
    kappas.validate()?;
    let inner = ScanOptions {
        exec: Execution::Sequential,
        ..opts.clone()
    };
    let lines = opts.exec.try_map(thetas.steps * kappas.steps, |k| {
        let (theta, kappa) = (thetas.value(k / kappas.steps), kappas.value(k % kappas.steps));
        let line = LineSpec::new(Family::SymmetricGhz, vec![theta, kappa, FRAC_PI_2], 2, 0.0, FRAC_PI_2)?;
        let crossings = find_zero_crossings(&line, cross, &inner)?;
        crossings
            .into_iter()
            .map(|c| {
                let residual = match surface_condition_residual(theta, kappa, c.location) {
                    Ok(r) => Some(r),
                    Err(Error::OutOfDomain(_)) => None,
                    Err(e) => return Err(e),
                };
                Ok(SurfacePoint {
                    theta,
                    kappa,
                    alpha: c.location,
                    crossing: c,
                    closed_form_residual: residual,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(lines.into_iter().flatten().collect())
}

/// Evenly spaced records over `[0, π/2]` with optimized MK values.
pub fn path_trace(path: Family, resolution: usize, opts: &ScanOptions) -> Result<Vec<ScanRecord>> {
    LineSpec::path(path)?;
    if resolution < 2 {
        return Err(Error::Scan("path resolution must be at least 2".into()));
    }
    let opts = ScanOptions {
        mk: Some(opts.mk.unwrap_or_default()),
        ..opts.clone()
    };
    grid_scan(path, &[Axis::new(0.0, FRAC_PI_2, resolution)], &opts)
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleRecord {
    pub index: u64,
    pub delta_d: f64,
    pub delta_c: f64,
    pub ggm: f64,
    pub s_a: f64,
    pub s_cond_ab: f64,
    pub s_cond_ac: f64,
    pub zero_band: bool,
}

pub const HISTOGRAM_BINS: usize = 25;

#[derive(Clone, Debug, Serialize)]
pub struct SampleSummary {
    pub n: usize,
    pub seed: u64,
    pub epsilon: f64,
    pub in_band: usize,
    pub max_ggm_in_band: Option<f64>,
    pub max_ggm: f64,
    pub negative: usize,
    pub min_delta_d: f64,
    pub max_delta_d: f64,
    /// GGM counts over `[0, 0.5]` in equal bins, all samples.
    pub ggm_histogram: Vec<usize>,
    /// Same bins, in-band samples only.
    pub ggm_histogram_in_band: Vec<usize>,
}

impl SampleSummary {
    pub fn line(&self) -> String {
        format!(
            "n={} seed={} epsilon={} in_band={} max_ggm_in_band={} max_ggm={} negative_fraction={}",
            self.n,
            self.seed,
            format_float(self.epsilon),
            self.in_band,
            self.max_ggm_in_band.map(format_float).unwrap_or_else(|| "none".into()),
            format_float(self.max_ggm),
            format_float(self.negative as f64 / self.n as f64),
        )
    }
}

#[derive(Clone, Debug)]
pub struct SampleRun {
    pub summary: SampleSummary,
    pub records: Vec<SampleRecord>,
}

fn bin(g: f64) -> usize {
    ((g / 0.5 * HISTOGRAM_BINS as f64) as usize).min(HISTOGRAM_BINS - 1)
}

/// Haar-random pure states; sample `i` depends only on `(seed, i)`.
pub fn sample_experiment(n: usize, seed: u64, epsilon: f64, opts: &ScanOptions) -> Result<SampleRun> {
    if n == 0 {
        return Err(Error::Scan("sample count must be positive".into()));
    }
    let records = opts.exec.try_map(n, |i| {
        let psi = haar_random(seed, i as u64);
        let s = pure_scores(&psi, &opts.nodal, &opts.search, false)?;
        Ok::<_, Error>(SampleRecord {
            index: i as u64,
            delta_d: s.delta_d,
            delta_c: s.delta_c,
            ggm: s.ggm,
            s_a: s.s_a,
            s_cond_ab: s.s_cond_ab,
            s_cond_ac: s.s_cond_ac,
            zero_band: s.delta_d.abs() < epsilon,
        })
    })?;
    let mut summary = SampleSummary {
        n,
        seed,
        epsilon,
        in_band: 0,
        max_ggm_in_band: None,
        max_ggm: 0.0,
        negative: 0,
        min_delta_d: f64::INFINITY,
        max_delta_d: f64::NEG_INFINITY,
        ggm_histogram: vec![0; HISTOGRAM_BINS],
        ggm_histogram_in_band: vec![0; HISTOGRAM_BINS],
    };
    for r in &records {
        summary.max_ggm = summary.max_ggm.max(r.ggm);
        summary.min_delta_d = summary.min_delta_d.min(r.delta_d);
        summary.max_delta_d = summary.max_delta_d.max(r.delta_d);
        summary.ggm_histogram[bin(r.ggm)] += 1;
        if r.delta_d < 0.0 {
            summary.negative += 1;
        }
        if r.zero_band {
            summary.in_band += 1;
            summary.ggm_histogram_in_band[bin(r.ggm)] += 1;
            summary.max_ggm_in_band = Some(summary.max_ggm_in_band.map_or(r.ggm, |m| m.max(r.ggm)));
        }
    }
    Ok(SampleRun { summary, records })
}

pub const SAMPLE_COLUMNS: [&str; 8] = [
    "index",
    "delta_D",
    "delta_C",
    "ggm",
    "S_A",
    "S_cond_AB",
    "S_cond_AC",
    "zero_band",
];

pub fn write_samples<W: Write>(out: W, records: &[SampleRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SAMPLE_COLUMNS)?;
    for r in records {
        w.write_record([
            r.index.to_string(),
            format_float(r.delta_d),
            format_float(r.delta_c),
            format_float(r.ggm),
            format_float(r.s_a),
            format_float(r.s_cond_ab),
            format_float(r.s_cond_ac),
            r.zero_band.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct Prop4Check {
    /// `E^f_AB + E^f_AC`.
    pub lhs: f64,
    /// Binary entropy of the GGM.
    pub rhs: f64,
    pub satisfied: bool,
    pub delta_d: f64,
    /// `|δ_D| < ε`; the inequality is only claimed under this condition.
    pub precondition_met: bool,
    /// `|lhs − rhs|` for symmetric inputs meeting the precondition.
    pub symmetric_equality_residual: Option<f64>,
}

pub fn prop4_check(psi: &PureState, opts: &ScanOptions) -> Result<Prop4Check> {
    let scores = pure_scores(psi, &opts.nodal, &opts.search, false)?;
    let nodal = opts.nodal.as_str();
    let others: Vec<&str> = psi
        .labels()
        .iter()
        .map(String::as_str)
        .filter(|l| *l != nodal)
        .collect();
    let eof = |x: &str| -> Result<f64> { Ok(eof_from_concurrence(concurrence(&psi.reduced(&[nodal, x])?)?)) };
    let lhs = eof(others[0])? + eof(others[1])?;
    let rhs = binary_entropy(scores.ggm);
    let precondition_met = scores.delta_d.abs() < opts.epsilon;
    let symmetric = symmetry_deviation(psi)? <= 1e-8;
    Ok(Prop4Check {
        lhs,
        rhs,
        satisfied: lhs >= rhs - PROP4_TOL,
        delta_d: scores.delta_d,
        precondition_met,
        symmetric_equality_residual: (symmetric && precondition_met).then(|| (lhs - rhs).abs()),
    })
}

/// Random zero-score states: for each, a Haar state with `δ_D < 0` and one
/// with `δ_D > 0` are joined by the arc `cos t |neg⟩ + sin t |pos⟩`, which is
/// bisected for `δ_D = 0`. Screening and bisection use the Koashi–Winter form
/// of the pure-state score, so no basis search is needed. State `k` depends
/// only on `(seed, k)`.
pub fn zero_score_states(count: usize, seed: u64, nodal: &str, exec: Execution) -> Result<Vec<PureState>> {
    const MARGIN: f64 = 1e-3;
    exec.try_map(count, |k| {
        let mut stream = (k as u64) << 20;
        let mut draw = |want_negative: bool| -> Result<PureState> {
            loop {
                let psi = haar_random(seed, stream);
                stream += 1;
                let d = delta_d_koashi_winter(&psi, nodal)?;
                if (want_negative && d < -MARGIN) || (!want_negative && d > MARGIN) {
                    return Ok(psi);
                }
            }
        };
        let (neg, pos) = (draw(true)?, draw(false)?);
        let (mut lo, mut hi) = (0.0, FRAC_PI_2);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if delta_d_koashi_winter(&superpose(&neg, &pos, mid)?, nodal)? < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        superpose(&neg, &pos, 0.5 * (lo + hi))
    })
}

/// Closed-form MK violation against the zero-score sign on a symmetric grid.
#[derive(Clone, Debug, Serialize)]
pub struct ViolationRegion {
    pub points: usize,
    pub violating: usize,
    /// Smallest `δ_D` among violating points.
    pub min_delta_d: Option<f64>,
    /// Violating points with `δ_D ≤ 0`.
    pub not_positive: usize,
    /// Violating points with `δ_D ≤ −ε`.
    pub below_band: usize,
}

/// `n³` grid with `θ = k π/(4n)`, `α = k π/(2n)` for `k = 1..=n` and `κ`
/// spanning `[0, 2π]`; `δ_D` is evaluated where the closed-form MK value
/// with `ν = 0` exceeds 1.
pub fn violation_region(n: usize, opts: &ScanOptions) -> Result<ViolationRegion> {
    if n == 0 {
        return Err(Error::Scan("grid size must be positive".into()));
    }
    let kappa = Axis::new(0.0, TAU, n);
    let point = |k: usize| {
        let (i, j, l) = (k / (n * n), (k / n) % n, k % n);
        let theta = FRAC_PI_4 * (i + 1) as f64 / n as f64;
        let alpha = FRAC_PI_2 * (j + 1) as f64 / n as f64;
        (theta, kappa.value(l), alpha)
    };
    let violating: Vec<usize> = (0..n * n * n)
        .filter(|&k| {
            let (t, kap, a) = point(k);
            mk_symmetric_closed_form(t, a, kap, 0.0) > 1.0
        })
        .collect();
    let deltas = opts.exec.try_map(violating.len(), |i| {
        let (t, kap, a) = point(violating[i]);
        let psi = symmetric_ghz(t, kap, a, true)?;
        pure_scores(&psi, &opts.nodal, &opts.search, true).map(|s| s.delta_d)
    })?;
    Ok(ViolationRegion {
        points: n * n * n,
        violating: violating.len(),
        min_delta_d: deltas.iter().copied().reduce(f64::min),
        not_positive: deltas.iter().filter(|&&d| d <= 0.0).count(),
        below_band: deltas.iter().filter(|&&d| d <= -opts.epsilon).count(),
    })
}

#[cfg(test)]
mod tests;
