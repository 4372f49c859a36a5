mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qmono_core::bell::{mk_optimize, mk_symmetric_closed_form, MkSearch};
use qmono_core::exec::with_jobs;
use qmono_core::measures::SearchConfig;
use qmono_core::monogamy::{self, MonogamyConfig, MonogamyReport};
use qmono_core::qcore::io::read_state;
use qmono_core::scan::{
    self, format_float, grid_scan, path_trace, sample_experiment, surface_zero, write_records, write_samples, Axis,
    CrossingOptions, ScanOptions, ScanRecord,
};
use qmono_core::states::Family;

use config::{parse_axis, parse_real, RunConfig};

#[derive(Parser)]
#[command(
    name = "qmono",
    version,
    about = "Discord and entanglement monogamy of three-qubit states"
)]
struct Cli {
    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for every stochastic step.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// `key = value` settings file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print the merged global and config-file settings, then exit.
    #[arg(long, global = true)]
    show_config: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monogamy report for a state file.
    Measures(MeasuresArgs),
    /// Grid sweep over a state family.
    Scan(ScanArgs),
    /// Zero-score surface of the symmetric GHZ family.
    Surface(SurfaceArgs),
    /// Trace along an interpolation path.
    Path(PathArgs),
    /// Haar-random sampling experiment.
    Sample(SampleArgs),
    /// Mermin–Klyshko values.
    Bell(BellArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Self::Measures(_) => "measures",
            Self::Scan(_) => "scan",
            Self::Surface(_) => "surface",
            Self::Path(_) => "path",
            Self::Sample(_) => "sample",
            Self::Bell(_) => "bell",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct MeasuresArgs {
    /// JSON state file.
    #[arg(long)]
    state: Option<PathBuf>,
    #[arg(long)]
    nodal: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    /// symmetric_ghz, ghz_class, w_class, path_ghz or path_w_ghz.
    #[arg(long)]
    family: Option<String>,
    /// One per parameter, in order: `value` or `start:end:steps`.
    #[arg(long = "axis", allow_hyphen_values = true)]
    axes: Vec<String>,
    #[arg(long)]
    epsilon: Option<String>,
    /// Add the optimized MK value to every row.
    #[arg(long)]
    mk: bool,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    nodal: Option<String>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SurfaceArgs {
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<String>,
    /// Samples per α line before bisection.
    #[arg(long)]
    presample: Option<usize>,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PathArgs {
    /// `ghz` or `w-ghz`.
    #[arg(long)]
    id: Option<String>,
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(short)]
    n: Option<usize>,
    #[arg(long)]
    epsilon: Option<String>,
    /// Per-sample CSV.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BellArgs {
    /// JSON state file; the value is optimized over all settings.
    #[arg(long, conflicts_with = "closed_form")]
    state: Option<PathBuf>,
    /// `theta,alpha,kappa,nu` for the symmetric-family expression.
    #[arg(long, allow_hyphen_values = true)]
    closed_form: Option<String>,
    #[arg(long)]
    restarts: Option<usize>,
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<qmono_core::Error> for Failure {
    fn from(e: qmono_core::Error) -> Self {
        Failure::Numeric(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Numeric(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Resolved run settings: flag, then config file, then default.
struct Ctx {
    file: RunConfig,
    seed: u64,
}

impl Ctx {
    fn epsilon(&self, flag: &Option<String>, default: f64) -> Result<f64, Failure> {
        let v = match flag {
            Some(s) => parse_real(s).map_err(usage)?,
            None => self.file.epsilon.unwrap_or(default),
        };
        if v <= 0.0 {
            return Err(usage(format!("epsilon must be positive, got {v}")));
        }
        Ok(v)
    }

    fn nodal(&self, flag: &Option<String>) -> String {
        flag.clone()
            .or_else(|| self.file.nodal.clone())
            .unwrap_or_else(|| "A".into())
    }

    fn output(&self, flag: &Option<PathBuf>) -> Option<PathBuf> {
        flag.clone().or_else(|| self.file.output.clone())
    }

    fn search(&self) -> SearchConfig {
        SearchConfig {
            seed: self.seed,
            ..SearchConfig::default()
        }
    }

    fn mk(&self, restarts: Option<usize>) -> MkSearch {
        let d = MkSearch::default();
        MkSearch {
            restarts: restarts.or(self.file.restarts).unwrap_or(d.restarts),
            seed: self.seed,
            ..d
        }
    }
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::Numeric(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn need<T>(v: Option<T>, what: &str) -> Result<T, Failure> {
    v.ok_or_else(|| usage(format!("missing {what}")))
}

fn measures(ctx: &Ctx, a: &MeasuresArgs) -> Result<(), Failure> {
    let path = need(a.state.clone().or_else(|| ctx.file.state.clone()), "--state")?;
    let state = read_state(&path)?;
    let nodal = ctx.nodal(&a.nodal);
    if !state.labels().contains(&nodal) {
        return Err(usage(format!("nodal party `{nodal}` is not a label of the state")));
    }
    let cfg = MonogamyConfig {
        search: ctx.search(),
        ..MonogamyConfig::default()
    };
    let rep = monogamy::delta_d(&state, &nodal, &cfg)?;
    let mut out = sink(&ctx.output(&a.output))?;
    match a.format {
        Format::Json => writeln!(out, "{}", rep.to_json())?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(MonogamyReport::CSV_COLUMNS)
                .map_err(|e| Failure::Numeric(e.to_string()))?;
            w.write_record(rep.csv_record())
                .map_err(|e| Failure::Numeric(e.to_string()))?;
            w.flush()?;
        }
    }
    Ok(())
}

fn family(name: &str) -> Result<Family, Failure> {
    Family::parse(name).map_err(|e| usage(e.to_string()))
}

fn scan_cmd(ctx: &Ctx, a: &ScanArgs) -> Result<(), Failure> {
    let fam = family(&need(a.family.clone().or_else(|| ctx.file.family.clone()), "--family")?)?;
    let axes: Vec<Axis> = if a.axes.is_empty() {
        need(ctx.file.axes.clone(), "--axis")?
    } else {
        a.axes
            .iter()
            .map(|s| parse_axis(s).map_err(usage))
            .collect::<Result<_, _>>()?
    };
    if axes.len() != fam.arity() {
        return Err(usage(format!(
            "{} needs {} axes ({}), got {}",
            fam.name(),
            fam.arity(),
            fam.param_names().join(", "),
            axes.len()
        )));
    }
    let opts = ScanOptions {
        nodal: ctx.nodal(&a.nodal),
        search: ctx.search(),
        epsilon: ctx.epsilon(&a.epsilon, scan::DEFAULT_EPSILON)?,
        mk: a.mk.then(|| ctx.mk(a.restarts)),
        ..ScanOptions::default()
    };
    let rows = grid_scan(fam, &axes, &opts)?;
    write_records(sink(&ctx.output(&a.output))?, fam, &rows)?;
    Ok(())
}

fn surface_cmd(ctx: &Ctx, a: &SurfaceArgs) -> Result<(), Failure> {
    let axis = |flag: &Option<String>, file: &Option<Axis>, name: &str| -> Result<Axis, Failure> {
        match flag {
            Some(s) => parse_axis(s).map_err(usage),
            None => need(*file, name),
        }
    };
    let theta = axis(&a.theta, &ctx.file.theta, "--theta")?;
    let kappa = axis(&a.kappa, &ctx.file.kappa, "--kappa")?;
    let cross = CrossingOptions {
        presample: a.presample.or(ctx.file.presample).unwrap_or(100),
        ..CrossingOptions::default()
    };
    if cross.presample < 2 {
        return Err(usage("presample must be at least 2"));
    }
    let opts = ScanOptions {
        search: ctx.search(),
        epsilon: ctx.epsilon(&a.epsilon, scan::DEFAULT_EPSILON)?,
        ..ScanOptions::default()
    };
    let pts = surface_zero(theta, kappa, &cross, &opts)?;
    let mut w = csv::Writer::from_writer(sink(&ctx.output(&a.output))?);
    let err = |e: csv::Error| Failure::Numeric(e.to_string());
    w.write_record([
        "theta",
        "kappa",
        "alpha",
        "delta_D",
        "ggm",
        "width",
        "closed_form_residual",
        "zero_band",
    ])
    .map_err(err)?;
    for p in &pts {
        w.write_record([
            format_float(p.theta),
            format_float(p.kappa),
            format_float(p.alpha),
            format_float(p.crossing.delta_at),
            format_float(p.crossing.ggm_at),
            format_float(p.crossing.width),
            p.closed_form_residual.map(format_float).unwrap_or_default(),
            (p.crossing.delta_at.abs() < opts.epsilon).to_string(),
        ])
        .map_err(err)?;
    }
    w.flush()?;
    Ok(())
}

/// Sign changes of `δ_D` along a trace, ignoring values inside the band.
fn sign_changes(rows: &[ScanRecord], floor: f64) -> usize {
    let signs: Vec<bool> = rows
        .iter()
        .filter(|r| r.delta_d.abs() > floor)
        .map(|r| r.delta_d > 0.0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

fn path_cmd(ctx: &Ctx, a: &PathArgs) -> Result<(), Failure> {
    let id = need(a.id.clone().or_else(|| ctx.file.id.clone()), "--id")?;
    let fam = match id.as_str() {
        "ghz" => Family::PathGhz,
        "w-ghz" | "w_ghz" => Family::PathWGhz,
        other => return Err(usage(format!("unknown path `{other}`; use `ghz` or `w-ghz`"))),
    };
    let resolution = a.resolution.or(ctx.file.resolution).unwrap_or(200);
    if resolution < 2 {
        return Err(usage("resolution must be at least 2"));
    }
    let opts = ScanOptions {
        search: ctx.search(),
        epsilon: ctx.epsilon(&a.epsilon, scan::DEFAULT_EPSILON)?,
        mk: Some(ctx.mk(a.restarts)),
        ..ScanOptions::default()
    };
    let rows = path_trace(fam, resolution, &opts)?;
    let output = ctx.output(&a.output);
    let summary = format!(
        "rows={} sign_changes={} zero_band_rows={}",
        rows.len(),
        sign_changes(&rows, CrossingOptions::default().noise_floor),
        rows.iter().filter(|r| r.zero_band).count()
    );
    write_records(sink(&output)?, fam, &rows)?;
    if output.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

fn sample_cmd(ctx: &Ctx, a: &SampleArgs) -> Result<(), Failure> {
    let n = a.n.or(ctx.file.n).unwrap_or(100_000);
    if n == 0 {
        return Err(usage("-n must be positive"));
    }
    let opts = ScanOptions {
        search: ctx.search(),
        ..ScanOptions::default()
    };
    let eps = ctx.epsilon(&a.epsilon, scan::SAMPLE_EPSILON)?;
    let run = sample_experiment(n, ctx.seed, eps, &opts)?;
    if let Some(p) = ctx.output(&a.output) {
        write_samples(sink(&Some(p))?, &run.records)?;
    }
    println!("{}", run.summary.line());
    Ok(())
}

fn bell_cmd(ctx: &Ctx, a: &BellArgs) -> Result<(), Failure> {
    let value = if let Some(spec) = &a.closed_form {
        let v: Vec<f64> = spec
            .split(',')
            .map(parse_real)
            .collect::<Result<_, _>>()
            .map_err(usage)?;
        let [theta, alpha, kappa, nu] = v[..] else {
            return Err(usage("--closed-form takes theta,alpha,kappa,nu"));
        };
        let b = mk_symmetric_closed_form(theta, alpha, kappa, nu);
        json!({ "theta": theta, "alpha": alpha, "kappa": kappa, "nu": nu, "value": b, "violates": b.abs() > 1.0 })
    } else {
        let path = need(
            a.state.clone().or_else(|| ctx.file.state.clone()),
            "--state or --closed-form",
        )?;
        let state = read_state(&path)?;
        let best = mk_optimize(&state, &ctx.mk(a.restarts))?;
        json!({
            "value": best.value,
            "violates": best.violates(),
            "restarts": best.restarts,
            "evaluations": best.evaluations,
            "settings": best.settings,
        })
    };
    println!("{}", serde_json::to_string_pretty(&value).expect("json value"));
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let file = match &cli.config {
        Some(p) => RunConfig::read(p).map_err(usage)?,
        None => RunConfig::default(),
    };
    if let Some(c) = &file.command {
        if c != cli.command.name() {
            return Err(usage(format!(
                "config file is for `{c}`, invoked `{}`",
                cli.command.name()
            )));
        }
    }
    if cli.show_config {
        let mut shown = file.clone();
        shown.command = Some(cli.command.name().into());
        shown.seed = cli.seed.or(file.seed);
        shown.jobs = cli.jobs.or(file.jobs);
        print!("{}", shown.canonical());
        return Ok(());
    }
    let ctx = Ctx {
        seed: cli.seed.or(file.seed).unwrap_or(0),
        file,
    };
    let jobs = cli.jobs.or(ctx.file.jobs).unwrap_or(0);
    with_jobs(jobs, || match &cli.command {
        Command::Measures(a) => measures(&ctx, a),
        Command::Scan(a) => scan_cmd(&ctx, a),
        Command::Surface(a) => surface_cmd(&ctx, a),
        Command::Path(a) => path_cmd(&ctx, a),
        Command::Sample(a) => sample_cmd(&ctx, a),
        Command::Bell(a) => bell_cmd(&ctx, a),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("qmono: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("qmono: {msg}");
            ExitCode::from(1)
        }
    }
}
