//! `key = value` run configuration files and value syntax shared with flags.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;

use qmono_core::scan::Axis;

/// Settings that may come from a config file. Command-line flags override
/// every field.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunConfig {
    pub command: Option<String>,
    pub family: Option<String>,
    pub axes: Option<Vec<Axis>>,
    pub theta: Option<Axis>,
    pub kappa: Option<Axis>,
    pub id: Option<String>,
    pub resolution: Option<usize>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub epsilon: Option<f64>,
    pub restarts: Option<usize>,
    pub presample: Option<usize>,
    pub nodal: Option<String>,
    pub state: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

pub const KEYS: [&str; 16] = [
    "axes",
    "command",
    "epsilon",
    "family",
    "id",
    "jobs",
    "kappa",
    "n",
    "nodal",
    "output",
    "presample",
    "resolution",
    "restarts",
    "seed",
    "state",
    "theta",
];

fn bad(key: &str, value: &str, why: impl std::fmt::Display) -> String {
    format!("invalid value `{value}` for `{key}`: {why}")
}

/// A real number, `pi`, or a multiple or fraction of it such as `3pi/2`.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if let Some(idx) = t.find("pi") {
        let coef = t[..idx].trim().trim_end_matches('*').trim();
        let rest = t[idx + 2..].trim();
        let coef = match coef {
            "" => 1.0,
            "-" => -1.0,
            c => c.parse::<f64>().map_err(|e| format!("`{s}`: {e}"))?,
        };
        let denom = match rest.strip_prefix('/') {
            Some(d) => d.trim().parse::<f64>().map_err(|e| format!("`{s}`: {e}"))?,
            None if rest.is_empty() => 1.0,
            None => return Err(format!("`{s}` is not a number")),
        };
        return Ok(coef * PI / denom);
    }
    let v: f64 = t.parse().map_err(|e| format!("`{s}`: {e}"))?;
    if !v.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok(v)
}

/// `value` (a single point) or `start:end:steps`.
pub fn parse_axis(s: &str) -> Result<Axis, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(Axis::point(parse_real(v)?)),
        [a, b, n] => {
            let steps: usize = n.trim().parse().map_err(|e| format!("steps `{n}`: {e}"))?;
            if steps == 0 {
                return Err(format!("axis `{s}` has zero steps"));
            }
            Ok(Axis::new(parse_real(a)?, parse_real(b)?, steps))
        }
        _ => Err(format!("axis `{s}` is neither `value` nor `start:end:steps`")),
    }
}

fn format_axis(a: &Axis) -> String {
    if a.steps == 1 {
        format!("{:?}", a.start)
    } else {
        format!("{:?}:{:?}:{}", a.start, a.end, a.steps)
    }
}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| bad(key, value, e))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut seen = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `key = value`", lineno + 1))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(format!("line {}: unknown key `{key}`", lineno + 1));
            }
            if seen.insert(key.to_string(), value.to_string()).is_some() {
                return Err(format!("line {}: duplicate key `{key}`", lineno + 1));
            }
        }
        let mut c = Self::default();
        for (key, value) in &seen {
            let v = value.as_str();
            match key.as_str() {
                "command" => c.command = Some(v.to_string()),
                "family" => c.family = Some(v.to_string()),
                "axes" => {
                    c.axes = Some(
                        v.split(';')
                            .map(|a| parse_axis(a).map_err(|e| bad(key, v, e)))
                            .collect::<Result<_, _>>()?,
                    )
                }
                "theta" => c.theta = Some(parse_axis(v).map_err(|e| bad(key, v, e))?),
                "kappa" => c.kappa = Some(parse_axis(v).map_err(|e| bad(key, v, e))?),
                "id" => c.id = Some(v.to_string()),
                "resolution" => c.resolution = Some(number(key, v)?),
                "n" => c.n = Some(number(key, v)?),
                "seed" => c.seed = Some(number(key, v)?),
                "jobs" => c.jobs = Some(number(key, v)?),
                "epsilon" => c.epsilon = Some(parse_real(v).map_err(|e| bad(key, v, e))?),
                "restarts" => c.restarts = Some(number(key, v)?),
                "presample" => c.presample = Some(number(key, v)?),
                "nodal" => c.nodal = Some(v.to_string()),
                "state" => c.state = Some(PathBuf::from(v)),
                "output" => c.output = Some(PathBuf::from(v)),
                _ => unreachable!("keys are checked above"),
            }
        }
        Ok(c)
    }

    pub fn read(path: &std::path::Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text)
    }

    /// One `key = value` line per set field, keys sorted, floats written so
    /// that they parse back to the same bits.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                let _ = writeln!(out, "{k} = {v}");
            }
        };
        put(
            "axes",
            self.axes
                .as_ref()
                .map(|a| a.iter().map(format_axis).collect::<Vec<_>>().join(";")),
        );
        put("command", self.command.clone());
        put("epsilon", self.epsilon.map(|e| format!("{e:?}")));
        put("family", self.family.clone());
        put("id", self.id.clone());
        put("jobs", self.jobs.map(|v| v.to_string()));
        put("kappa", self.kappa.as_ref().map(format_axis));
        put("n", self.n.map(|v| v.to_string()));
        put("nodal", self.nodal.clone());
        put("output", self.output.as_ref().map(|p| p.display().to_string()));
        put("presample", self.presample.map(|v| v.to_string()));
        put("resolution", self.resolution.map(|v| v.to_string()));
        put("restarts", self.restarts.map(|v| v.to_string()));
        put("seed", self.seed.map(|v| v.to_string()));
        put("state", self.state.as_ref().map(|p| p.display().to_string()));
        put("theta", self.theta.as_ref().map(format_axis));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals() {
        assert_eq!(parse_real("0.25").unwrap(), 0.25);
        assert_eq!(parse_real("pi").unwrap(), PI);
        assert_eq!(parse_real("pi/4").unwrap(), PI / 4.0);
        assert_eq!(parse_real("3pi/2").unwrap(), 3.0 * PI / 2.0);
        assert_eq!(parse_real("2*pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_real("-pi").unwrap(), -PI);
        assert!(parse_real("pie").is_err());
        assert!(parse_real("nan").is_err());
        assert!(parse_real("").is_err());
    }

    #[test]
    fn axes() {
        assert_eq!(parse_axis("0.4").unwrap(), Axis::point(0.4));
        assert_eq!(parse_axis("0:pi/2:5").unwrap(), Axis::new(0.0, PI / 2.0, 5));
        assert!(parse_axis("0:1").is_err());
        assert!(parse_axis("0:1:0").is_err());
    }

    #[test]
    fn parses_comments_and_rejects_unknown_keys() {
        let c = RunConfig::parse("# sampling\nn = 100 # count\nseed=7\n\nepsilon = 1e-3\n").unwrap();
        assert_eq!(c.n, Some(100));
        assert_eq!(c.seed, Some(7));
        assert_eq!(c.epsilon, Some(1e-3));
        assert!(RunConfig::parse("sead = 7").unwrap_err().contains("unknown key"));
        assert!(RunConfig::parse("seed").is_err());
        assert!(RunConfig::parse("seed = 1\nseed = 2")
            .unwrap_err()
            .contains("duplicate"));
        assert!(RunConfig::parse("n = many").is_err());
    }

    #[test]
    fn canonical_round_trip() {
        let text = "family = symmetric_ghz\naxes = pi/4; 0:2pi:13 ;0.1:pi/2:7\nseed = 9\nepsilon = 1e-4\n\
                    output = out.csv\nrestarts = 20\ntheta=0.1:0.7:3\nkappa = 1\nnodal = B\nn = 5\njobs = 2\n\
                    id = ghz\nresolution = 40\npresample = 100\nstate = s.json\ncommand = scan\n";
        let c = RunConfig::parse(text).unwrap();
        let canon = c.canonical();
        let again = RunConfig::parse(&canon).unwrap();
        assert_eq!(c, again);
        assert_eq!(canon, again.canonical());
        let keys: Vec<&str> = canon.lines().map(|l| l.split(" = ").next().unwrap()).collect();
        assert_eq!(keys, KEYS);
    }
}
