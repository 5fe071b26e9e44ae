//! Run configuration: config-file grammar, flag overrides and value parsers.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use graph_uncertainty::experiment::{EXPERIMENT_THETA, SensorParams};
use graph_uncertainty::PairKind;

use crate::args::CommonArgs;
use crate::error::{CliError, Result};

pub const DEFAULT_TOL: f64 = 1e-4;
pub const DEFAULT_K_MAX: usize = 512;
pub const DEFAULT_SAMPLES: usize = 20_000;
pub const DEFAULT_POINT_RADIUS: f64 = 1.0 / 6.0;

/// Angle in radians: a number, or a multiple of pi such as `9pi/20`, `pi/4`, `2pi`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let t = text.trim().replace(' ', "");
    let bad = || CliError::usage(format!("invalid angle `{text}`"));
    if let Ok(v) = t.parse::<f64>() {
        return if v.is_finite() { Ok(v) } else { Err(bad()) };
    }
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a, b.parse::<f64>().map_err(|_| bad())?),
        None => (t.as_str(), 1.0),
    };
    let coeff = match num.strip_suffix("pi") {
        Some("") => 1.0,
        Some("-") => -1.0,
        Some(c) => c.parse::<f64>().map_err(|_| bad())?,
        None => return Err(bad()),
    };
    let v = coeff * PI / den;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    Sensor(SensorParams),
    Fixture(String),
    /// Point cloud CSV or edge list; the format is detected from the content.
    File(PathBuf),
}

impl GraphSource {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some(rest) = text.strip_prefix("sensor:") {
            let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
            let bad = || CliError::usage(format!("expected sensor:n,R,seed, got `{text}`"));
            if parts.len() != 3 {
                return Err(bad());
            }
            let n = parts[0].parse::<usize>().map_err(|_| bad())?;
            let radius = parse_fraction(parts[1]).ok_or_else(bad)?;
            let seed = parts[2].parse::<u64>().map_err(|_| bad())?;
            return Ok(GraphSource::Sensor(SensorParams { n, radius, seed }));
        }
        if text == "sensor" {
            return Ok(GraphSource::Sensor(SensorParams::default()));
        }
        if let Some(name) = text.strip_prefix("fixture:") {
            return match name {
                "bipartite4" | "complete4" => Ok(GraphSource::Fixture(name.to_string())),
                _ => Err(CliError::usage(format!(
                    "unknown fixture `{name}` (available: bipartite4, complete4)"
                ))),
            };
        }
        if text.is_empty() {
            return Err(CliError::usage("empty graph source"));
        }
        Ok(GraphSource::File(PathBuf::from(text)))
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            GraphSource::Sensor(p) => Some(p.seed),
            _ => None,
        }
    }
}

impl fmt::Display for GraphSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSource::Sensor(p) => write!(f, "sensor:{},{},{}", p.n, p.radius, p.seed),
            GraphSource::Fixture(name) => write!(f, "fixture:{name}"),
            GraphSource::File(path) => write!(f, "{}", path.display()),
        }
    }
}

fn parse_fraction(text: &str) -> Option<f64> {
    match text.split_once('/') {
        Some((a, b)) => Some(a.trim().parse::<f64>().ok()? / b.trim().parse::<f64>().ok()?),
        None => text.trim().parse().ok(),
    }
}

/// Which filter family to build, and its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum PairChoice {
    Kind(PairKind),
    /// The pair stored with a fixture graph.
    Fixture,
}

pub const PAIR_KEYS: [&str; 10] = [
    "center", "radius", "bandwidth", "alpha", "beta", "nodes", "band", "f", "g", "dual",
];

/// `<kind>[:key=value,...]`, e.g. `distance-projection:bandwidth=100,center=12`
/// or `custom:f=1/0/1/0,g=1/0/1/0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSpec {
    pub choice: PairChoice,
    pub params: BTreeMap<String, String>,
}

impl PairSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (label, rest) = match text.split_once(':') {
            Some((l, r)) => (l.trim(), r.trim()),
            None => (text, ""),
        };
        let choice = if label == "fixture" {
            PairChoice::Fixture
        } else {
            PairChoice::Kind(PairKind::from_label(label).ok_or_else(|| {
                let labels: Vec<&str> = PairKind::ALL.iter().map(|k| k.label()).collect();
                CliError::usage(format!(
                    "unknown pair kind `{label}` (expected fixture or one of {})",
                    labels.join(", ")
                ))
            })?)
        };
        let mut params = BTreeMap::new();
        for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("expected key=value in pair spec, got `{item}`")))?;
            let key = match k.trim() {
                "N" => "bandwidth",
                "w" => "center",
                "r" => "radius",
                other => other,
            };
            if !PAIR_KEYS.contains(&key) {
                return Err(CliError::usage(format!(
                    "unknown pair parameter `{key}` (expected one of {})",
                    PAIR_KEYS.join(", ")
                )));
            }
            params.insert(key.to_string(), v.trim().to_string());
        }
        Ok(Self { choice, params })
    }

    pub fn default_for(source: &GraphSource) -> Self {
        let choice = match source {
            GraphSource::Fixture(_) => PairChoice::Fixture,
            _ => PairChoice::Kind(PairKind::DistanceProjection),
        };
        Self {
            choice,
            params: BTreeMap::new(),
        }
    }

    pub fn number(&self, key: &str) -> Result<Option<f64>> {
        self.params
            .get(key)
            .map(|v| {
                parse_fraction(v)
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| CliError::usage(format!("pair parameter {key}: `{v}` is not a number")))
            })
            .transpose()
    }

    pub fn index(&self, key: &str) -> Result<Option<usize>> {
        self.params
            .get(key)
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| CliError::usage(format!("pair parameter {key}: `{v}` is not an index")))
            })
            .transpose()
    }

    /// Slash-separated list, e.g. `nodes=0/2/5`.
    pub fn list<T: std::str::FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        self.params
            .get(key)
            .map(|v| {
                v.split('/')
                    .map(|x| {
                        x.trim().parse::<T>().map_err(|_| {
                            CliError::usage(format!("pair parameter {key}: cannot parse `{x}`"))
                        })
                    })
                    .collect()
            })
            .transpose()
    }

    pub fn flag(&self, key: &str) -> Result<Option<bool>> {
        self.params
            .get(key)
            .map(|v| match v.as_str() {
                "true" | "1" | "yes" => Ok(true),
                "false" | "0" | "no" => Ok(false),
                _ => Err(CliError::usage(format!("pair parameter {key}: `{v}` is not a boolean"))),
            })
            .transpose()
    }
}

impl fmt::Display for PairSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.choice {
            PairChoice::Fixture => f.write_str("fixture")?,
            PairChoice::Kind(k) => f.write_str(k.label())?,
        }
        if !self.params.is_empty() {
            let items: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, ":{}", items.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngleSchedule {
    Uniform(usize),
    Adaptive { tol: f64, k_max: usize },
}

impl AngleSchedule {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = || CliError::usage(format!("expected uniform:K or adaptive:tol,Kmax, got `{text}`"));
        if let Some(k) = text.strip_prefix("uniform:") {
            let k = k.trim().parse::<usize>().map_err(|_| bad())?;
            if k < 3 {
                return Err(CliError::usage(format!("uniform schedule needs K >= 3, got {k}")));
            }
            return Ok(AngleSchedule::Uniform(k));
        }
        if text == "adaptive" {
            return Ok(AngleSchedule::default());
        }
        if let Some(rest) = text.strip_prefix("adaptive:") {
            let (tol, k_max) = rest.split_once(',').ok_or_else(bad)?;
            let tol = tol.trim().parse::<f64>().map_err(|_| bad())?;
            let k_max = k_max.trim().parse::<usize>().map_err(|_| bad())?;
            return Ok(AngleSchedule::Adaptive { tol, k_max });
        }
        Err(bad())
    }
}

impl Default for AngleSchedule {
    fn default() -> Self {
        AngleSchedule::Adaptive {
            tol: DEFAULT_TOL,
            k_max: DEFAULT_K_MAX,
        }
    }
}

impl fmt::Display for AngleSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AngleSchedule::Uniform(k) => write!(f, "uniform:{k}"),
            AngleSchedule::Adaptive { tol, k_max } => write!(f, "adaptive:{tol},{k_max}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Formats {
    pub svg: bool,
    pub csv: bool,
    pub json: bool,
}

impl Formats {
    pub fn parse(text: &str) -> Result<Self> {
        let mut f = Formats {
            svg: false,
            csv: false,
            json: false,
        };
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item {
                "svg" => f.svg = true,
                "csv" => f.csv = true,
                "json" => f.json = true,
                other => return Err(CliError::usage(format!("unknown format `{other}` (svg, csv, json)"))),
            }
        }
        if !(f.svg || f.csv || f.json) {
            return Err(CliError::usage("no output format selected"));
        }
        Ok(f)
    }
}

impl Default for Formats {
    fn default() -> Self {
        Formats {
            svg: true,
            csv: true,
            json: true,
        }
    }
}

/// Flat `section.key -> value` map read from a config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

pub const CONFIG_KEYS: [&str; 13] = [
    "graph.source",
    "graph.radius",
    "graph.basis",
    "pair.spec",
    "pair.kind",
    "angles.schedule",
    "analysis.theta",
    "analysis.samples",
    "analysis.seed",
    "output.dir",
    "output.format",
    "eigvec.k",
    "eigvec.operator",
];

impl ConfigFile {
    /// Grammar: `[section]` headers, `key = value` lines, `#` or `;` comment
    /// lines, and trailing comments introduced by whitespace then `#`.
    /// In `[pair]`, keys other than `spec` and `kind` are pair parameters.
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        let mut section = String::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            let err = |msg: &str| CliError::usage(format!("config line {}: {msg}", no + 1));
            if let Some(name) = line.strip_prefix('[') {
                section = name
                    .strip_suffix(']')
                    .ok_or_else(|| err("unterminated section header"))?
                    .trim()
                    .to_string();
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| err("expected key = value"))?;
            let value = strip_inline_comment(value);
            if section.is_empty() {
                return Err(err("key outside of a section"));
            }
            let full = format!("{section}.{}", key.trim());
            let is_pair_param = section == "pair" && PAIR_KEYS.contains(&key.trim());
            if !CONFIG_KEYS.contains(&full.as_str()) && !is_pair_param {
                return Err(err(&format!("unknown key `{full}`")));
            }
            if values.insert(full.clone(), value.trim().to_string()).is_some() {
                return Err(err(&format!("duplicate key `{full}`")));
            }
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Pair spec assembled from `pair.spec`, or `pair.kind` plus parameter keys.
    fn pair_spec(&self) -> Option<String> {
        if let Some(spec) = self.get("pair.spec") {
            return Some(spec.to_string());
        }
        let kind = self.get("pair.kind")?;
        let params: Vec<String> = self
            .values
            .iter()
            .filter_map(|(k, v)| {
                let key = k.strip_prefix("pair.")?;
                PAIR_KEYS.contains(&key).then(|| format!("{key}={v}"))
            })
            .collect();
        Some(if params.is_empty() {
            kind.to_string()
        } else {
            format!("{kind}:{}", params.join(","))
        })
    }
}

fn strip_inline_comment(value: &str) -> &str {
    let cut = value
        .char_indices()
        .find(|&(i, ch)| ch == '#' && value[..i].ends_with(char::is_whitespace))
        .map_or(value.len(), |(i, _)| i);
    &value[..cut]
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub graph: GraphSource,
    /// Connection radius for point-cloud inputs.
    pub radius: f64,
    pub basis: Option<PathBuf>,
    pub pair: PairSpec,
    pub angles: AngleSchedule,
    pub theta: f64,
    pub out: PathBuf,
    pub formats: Formats,
    pub samples: usize,
    pub sample_seed: u64,
}

impl RunConfig {
    /// Reads `--config` if given and applies flag overrides on top.
    pub fn resolve(args: &CommonArgs) -> Result<Self> {
        let file = match &args.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        Self::from_parts(&file, args)
    }

    pub fn from_parts(file: &ConfigFile, args: &CommonArgs) -> Result<Self> {
        let pick = |flag: &Option<String>, key: &str| flag.clone().or_else(|| file.get(key).map(String::from));
        let graph = match pick(&args.graph, "graph.source") {
            Some(s) => GraphSource::parse(&s)?,
            None => return Err(CliError::usage("no graph source given (--graph or [graph] source)")),
        };
        let radius = match args.radius {
            Some(r) => r,
            None => match file.get("graph.radius") {
                Some(v) => parse_fraction(v)
                    .ok_or_else(|| CliError::usage(format!("graph.radius: `{v}` is not a number")))?,
                None => DEFAULT_POINT_RADIUS,
            },
        };
        let basis = args
            .basis
            .clone()
            .or_else(|| file.get("graph.basis").map(PathBuf::from));
        let pair = match args.pair.clone().or_else(|| file.pair_spec()) {
            Some(s) => PairSpec::parse(&s)?,
            None => PairSpec::default_for(&graph),
        };
        let angles = match pick(&args.angles, "angles.schedule") {
            Some(s) => AngleSchedule::parse(&s)?,
            None => AngleSchedule::default(),
        };
        let theta = match pick(&args.theta, "analysis.theta") {
            Some(s) => parse_angle(&s)?,
            None => EXPERIMENT_THETA,
        };
        let out = args
            .out
            .clone()
            .or_else(|| file.get("output.dir").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        let formats = match pick(&args.format, "output.format") {
            Some(s) => Formats::parse(&s)?,
            None => Formats::default(),
        };
        let samples = match args.samples {
            Some(s) => s,
            None => match file.get("analysis.samples") {
                Some(v) => v
                    .parse()
                    .map_err(|_| CliError::usage(format!("analysis.samples: `{v}` is not a count")))?,
                None => DEFAULT_SAMPLES,
            },
        };
        let sample_seed = match args.sample_seed {
            Some(s) => s,
            None => match file.get("analysis.seed") {
                Some(v) => v
                    .parse()
                    .map_err(|_| CliError::usage(format!("analysis.seed: `{v}` is not an integer")))?,
                None => 1,
            },
        };
        Ok(Self {
            graph,
            radius,
            basis,
            pair,
            angles,
            theta,
            out,
            formats,
            samples,
            sample_seed,
        })
    }

    /// One-line provenance written into every output file.
    pub fn provenance(&self) -> String {
        let mut s = format!("graph={} pair={}", self.graph, self.pair);
        if let Some(seed) = self.graph.seed() {
            s.push_str(&format!(" seed={seed}"));
        }
        s
    }
}
