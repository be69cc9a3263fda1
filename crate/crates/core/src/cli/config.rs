//! Line-oriented experiment configuration.
//!
//! ```text
//! # comment
//! [experiment]
//! kind = orbit-scan
//! seed = 7
//!
//! [norm]
//! p = 1, 4
//! ```
//!
//! Sections are `experiment`, `rep`, `norm`, `grid`, `scan`, `frames` and
//! `output`. Lists are comma separated. Every key is optional except
//! `experiment.kind`, and `experiment.seed` for randomized kinds.

use std::fmt;
use std::str::FromStr;

use crate::coorbit::{Method, NormSpec};
use crate::groups::Group;
use crate::numerics::GridSpec;
use crate::representations::RepSpec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    /// 1-based line; 0 when the problem is not tied to a line.
    pub line: usize,
    pub key: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, key `{}`: {}",
            self.line, self.key, self.message
        )
    }
}

impl std::error::Error for ConfigError {}

fn err(line: usize, key: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        key: key.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    VerifyGaussian,
    OrbitScan,
    CoorbitNorm,
    FrameSweep,
    Density,
    RepSelftest,
}

pub const ALL_KINDS: [ExperimentKind; 6] = [
    ExperimentKind::VerifyGaussian,
    ExperimentKind::OrbitScan,
    ExperimentKind::CoorbitNorm,
    ExperimentKind::FrameSweep,
    ExperimentKind::Density,
    ExperimentKind::RepSelftest,
];

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::VerifyGaussian => "verify-gaussian",
            Self::OrbitScan => "orbit-scan",
            Self::CoorbitNorm => "coorbit-norm",
            Self::FrameSweep => "frame-sweep",
            Self::Density => "density",
            Self::RepSelftest => "rep-selftest",
        }
    }

    /// Whether `(lambda, mu)` are used.
    fn uses_rep_params(self) -> bool {
        !matches!(self, Self::VerifyGaussian | Self::Density)
    }

    pub fn randomized(self) -> bool {
        !matches!(self, Self::OrbitScan)
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        ALL_KINDS
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = ALL_KINDS.iter().map(|k| k.name()).collect();
                format!(
                    "unknown experiment kind `{s}` (expected one of {})",
                    names.join(", ")
                )
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanFamily {
    /// `N_u φ` on `ℝ`.
    Chirp,
    /// `N_{C_u} φ` on `ℝ²` with the cross chirp.
    CrossChirp,
    /// `π(exp(u X_axis)) φ` for the configured group.
    Curve,
}

impl ScanFamily {
    pub fn name(self) -> &'static str {
        match self {
            Self::Chirp => "chirp",
            Self::CrossChirp => "cross-chirp",
            Self::Curve => "curve",
        }
    }
}

impl FromStr for ScanFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "chirp" => Ok(Self::Chirp),
            "cross-chirp" => Ok(Self::CrossChirp),
            "curve" => Ok(Self::Curve),
            _ => Err(format!(
                "unknown scan family `{s}` (expected chirp, cross-chirp or curve)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepConfig {
    /// Empty means every group.
    pub groups: Vec<Group>,
    /// Zipped with `mu`.
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
}

impl RepConfig {
    pub fn groups(&self) -> Vec<Group> {
        if self.groups.is_empty() {
            crate::groups::ALL_GROUPS.to_vec()
        } else {
            self.groups.clone()
        }
    }

    pub fn params(&self) -> Vec<(f64, f64)> {
        self.lambda
            .iter()
            .copied()
            .zip(self.mu.iter().copied())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormConfig {
    pub p: Vec<f64>,
    pub q: Option<f64>,
    /// Exponent of `(1 + |x|)^s`; 0 is the unit weight.
    pub weight: f64,
    pub weight_coords: Option<Vec<usize>>,
    pub half_width: f64,
    pub step: f64,
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub length: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub family: ScanFamily,
    pub axis: usize,
    pub u_min: f64,
    pub u_max: f64,
    pub points: usize,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FramesConfig {
    pub epsilons: Vec<f64>,
    pub degrees: Vec<usize>,
    pub margin: f64,
    pub range: usize,
    pub density_radii: Vec<f64>,
    pub density_centers: usize,
    pub samples: usize,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub seed: Option<u64>,
    /// Random draws per suite.
    pub samples: usize,
    pub rep: RepConfig,
    pub norm: NormConfig,
    pub grid: GridConfig,
    pub scan: ScanConfig,
    pub frames: FramesConfig,
    pub output: String,
}

impl ExperimentConfig {
    /// Defaults for `kind`.
    pub fn new(kind: ExperimentKind) -> Self {
        let samples = match kind {
            ExperimentKind::VerifyGaussian => 1000,
            ExperimentKind::RepSelftest => 500,
            ExperimentKind::CoorbitNorm => 3,
            _ => 0,
        };
        let (lambda, mu) = match kind {
            ExperimentKind::CoorbitNorm => (vec![1.0, 2.0], vec![0.0, 1.0]),
            ExperimentKind::RepSelftest => (vec![1.3], vec![-0.7]),
            _ => (vec![1.0], vec![0.0]),
        };
        let mut c = Self {
            kind,
            seed: None,
            samples,
            rep: RepConfig {
                groups: vec![],
                lambda,
                mu,
            },
            norm: NormConfig {
                p: vec![1.0],
                q: None,
                weight: 0.0,
                weight_coords: None,
                half_width: 8.0,
                step: 0.125,
                method: Method::Hybrid,
            },
            grid: GridConfig {
                length: 16.0,
                points: 512,
            },
            scan: ScanConfig {
                family: ScanFamily::Chirp,
                axis: 3,
                u_min: 10.0,
                u_max: 320.0,
                points: 6,
                tolerance: 0.02,
            },
            frames: FramesConfig {
                epsilons: vec![0.5, 0.9, 1.1, 2.0],
                degrees: vec![50, 100],
                margin: 3.0,
                range: 3,
                density_radii: vec![5.0, 10.0, 20.0],
                density_centers: 16,
                samples: 10_000,
                radius: 4.0,
            },
            output: "out".into(),
        };
        match kind {
            ExperimentKind::OrbitScan => {
                c.rep.groups = vec![Group::G53];
                c.norm.p = vec![1.0, 2.0, 4.0];
            }
            ExperimentKind::CoorbitNorm => {
                c.norm.p = vec![1.0, 2.0];
                c.norm.half_width = 6.0;
                c.norm.step = 0.0625;
            }
            ExperimentKind::FrameSweep => c.rep.groups = vec![Group::Heisenberg(1)],
            ExperimentKind::Density => {
                c.frames.epsilons = vec![0.7, 1.0];
                c.frames.range = 4;
                c.frames.density_radii = vec![2.0, 4.0];
                c.frames.density_centers = 4;
            }
            _ => {}
        }
        c
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn grid_spec(&self) -> GridSpec {
        GridSpec::new(1, self.grid.length, self.grid.points).expect("validated at parse time")
    }
}

type Entries = Vec<(&'static str, Vec<(&'static str, String)>)>;

fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Hybrid => "hybrid",
        Method::FullGrid => "full-grid",
    }
}

/// Canonical `(section, [(key, value)])` listing of every resolved field.
pub fn entries(c: &ExperimentConfig) -> Entries {
    let mut experiment = vec![("kind", c.kind.to_string())];
    if let Some(s) = c.seed {
        experiment.push(("seed", s.to_string()));
    }
    experiment.push(("samples", c.samples.to_string()));
    let groups = if c.rep.groups.is_empty() {
        "all".to_string()
    } else {
        join(&c.rep.groups)
    };
    let mut norm = vec![("p", join(&c.norm.p))];
    if let Some(q) = c.norm.q {
        norm.push(("q", q.to_string()));
    }
    norm.push(("weight", c.norm.weight.to_string()));
    if let Some(w) = &c.norm.weight_coords {
        norm.push(("weight_coords", join(w)));
    }
    norm.extend([
        ("half_width", c.norm.half_width.to_string()),
        ("step", c.norm.step.to_string()),
        ("method", method_name(c.norm.method).to_string()),
    ]);
    vec![
        ("experiment", experiment),
        (
            "rep",
            vec![
                ("group", groups),
                ("lambda", join(&c.rep.lambda)),
                ("mu", join(&c.rep.mu)),
            ],
        ),
        ("norm", norm),
        (
            "grid",
            vec![
                ("length", c.grid.length.to_string()),
                ("points", c.grid.points.to_string()),
            ],
        ),
        (
            "scan",
            vec![
                ("family", c.scan.family.name().to_string()),
                ("axis", c.scan.axis.to_string()),
                ("u_min", c.scan.u_min.to_string()),
                ("u_max", c.scan.u_max.to_string()),
                ("points", c.scan.points.to_string()),
                ("tolerance", c.scan.tolerance.to_string()),
            ],
        ),
        (
            "frames",
            vec![
                ("epsilons", join(&c.frames.epsilons)),
                ("degrees", join(&c.frames.degrees)),
                ("margin", c.frames.margin.to_string()),
                ("range", c.frames.range.to_string()),
                ("density_radii", join(&c.frames.density_radii)),
                ("density_centers", c.frames.density_centers.to_string()),
                ("samples", c.frames.samples.to_string()),
                ("radius", c.frames.radius.to_string()),
            ],
        ),
        ("output", vec![("dir", c.output.clone())]),
    ]
}

/// Canonical text: every section and key in fixed order.
pub fn serialize(c: &ExperimentConfig) -> String {
    let mut out = String::new();
    for (i, (section, kv)) in entries(c).iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("[{section}]\n"));
        for (k, v) in kv {
            out.push_str(&format!("{k} = {v}\n"));
        }
    }
    out
}

struct Line<'a> {
    no: usize,
    section: &'a str,
    key: &'a str,
    value: &'a str,
}

fn tokenize(text: &str) -> Result<Vec<Line<'_>>, ConfigError> {
    let mut section: Option<&str> = None;
    let mut out: Vec<Line> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| err(no, line, "unterminated section header"))?
                .trim();
            if !SECTIONS.contains(&name) {
                return Err(err(
                    no,
                    name,
                    format!("unknown section (expected one of {})", SECTIONS.join(", ")),
                ));
            }
            section = Some(name);
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(no, line, "expected `key = value`"))?;
        let key = key.trim();
        let section = section.ok_or_else(|| err(no, key, "key outside of any section"))?;
        if out.iter().any(|l| l.section == section && l.key == key) {
            return Err(err(no, format!("{section}.{key}"), "duplicate key"));
        }
        out.push(Line {
            no,
            section,
            key,
            value: value.trim(),
        });
    }
    Ok(out)
}

const SECTIONS: [&str; 7] = [
    "experiment",
    "rep",
    "norm",
    "grid",
    "scan",
    "frames",
    "output",
];

fn scalar<T: FromStr>(l: &Line, what: &str) -> Result<T, ConfigError> {
    l.value.parse().map_err(|_| {
        err(
            l.no,
            full_key(l),
            format!("type mismatch: expected {what}, got `{}`", l.value),
        )
    })
}

fn list<T: FromStr>(l: &Line, what: &str) -> Result<Vec<T>, ConfigError> {
    if l.value.is_empty() {
        return Err(err(l.no, full_key(l), format!("expected a list of {what}")));
    }
    l.value
        .split(',')
        .map(|s| {
            s.trim().parse().map_err(|_| {
                err(
                    l.no,
                    full_key(l),
                    format!(
                        "type mismatch: expected a list of {what}, got `{}`",
                        s.trim()
                    ),
                )
            })
        })
        .collect()
}

fn full_key(l: &Line) -> String {
    format!("{}.{}", l.section, l.key)
}

fn positive(l: &Line, v: f64) -> Result<f64, ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(err(
            l.no,
            full_key(l),
            format!("must be positive and finite, got {v}"),
        ))
    }
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    parse_config_with_seed(text, None)
}

/// As [`parse_config`], with `seed` taking precedence over `experiment.seed`.
pub fn parse_config_with_seed(
    text: &str,
    seed: Option<u64>,
) -> Result<ExperimentConfig, ConfigError> {
    let lines = tokenize(text)?;
    let kind_line = lines
        .iter()
        .find(|l| l.section == "experiment" && l.key == "kind")
        .ok_or_else(|| err(0, "experiment.kind", "missing required key"))?;
    let kind: ExperimentKind = kind_line
        .value
        .parse()
        .map_err(|m| err(kind_line.no, "experiment.kind", m))?;
    let mut c = ExperimentConfig::new(kind);
    // validation errors point at the key if present, else at `kind`
    let at = |key: &str| {
        lines
            .iter()
            .find(|l| full_key(l) == key)
            .map_or(kind_line.no, |l| l.no)
    };

    for l in &lines {
        match (l.section, l.key) {
            ("experiment", "kind") => {}
            ("experiment", "seed") => c.seed = Some(scalar(l, "an unsigned integer")?),
            ("experiment", "samples") => c.samples = scalar(l, "an unsigned integer")?,
            ("rep", "group") => {
                c.rep.groups = if l.value == "all" {
                    vec![]
                } else {
                    l.value
                        .split(',')
                        .map(|s| {
                            s.trim()
                                .parse::<Group>()
                                .map_err(|e| err(l.no, full_key(l), e.to_string()))
                        })
                        .collect::<Result<_, _>>()?
                }
            }
            ("rep", "lambda") => c.rep.lambda = list(l, "numbers")?,
            ("rep", "mu") => c.rep.mu = list(l, "numbers")?,
            ("norm", "p") => c.norm.p = list(l, "numbers")?,
            ("norm", "q") => c.norm.q = Some(scalar(l, "a number")?),
            ("norm", "weight") => c.norm.weight = scalar(l, "a number")?,
            ("norm", "weight_coords") => {
                c.norm.weight_coords = Some(list(l, "coordinate indices")?)
            }
            ("norm", "half_width") => c.norm.half_width = positive(l, scalar(l, "a number")?)?,
            ("norm", "step") => c.norm.step = positive(l, scalar(l, "a number")?)?,
            ("norm", "method") => {
                c.norm.method = match l.value {
                    "hybrid" => Method::Hybrid,
                    "full-grid" => Method::FullGrid,
                    v => {
                        return Err(err(
                            l.no,
                            full_key(l),
                            format!("unknown method `{v}` (expected hybrid or full-grid)"),
                        ))
                    }
                }
            }
            ("grid", "length") => c.grid.length = positive(l, scalar(l, "a number")?)?,
            ("grid", "points") => {
                c.grid.points = scalar(l, "an unsigned integer")?;
                GridSpec::new(1, 1.0, c.grid.points)
                    .map_err(|e| err(l.no, full_key(l), e.to_string()))?;
            }
            ("scan", "family") => {
                c.scan.family = l.value.parse().map_err(|m| err(l.no, full_key(l), m))?
            }
            ("scan", "axis") => c.scan.axis = scalar(l, "an unsigned integer")?,
            ("scan", "u_min") => c.scan.u_min = positive(l, scalar(l, "a number")?)?,
            ("scan", "u_max") => c.scan.u_max = positive(l, scalar(l, "a number")?)?,
            ("scan", "points") => c.scan.points = scalar(l, "an unsigned integer")?,
            ("scan", "tolerance") => c.scan.tolerance = positive(l, scalar(l, "a number")?)?,
            ("frames", "epsilons") => {
                c.frames.epsilons = list(l, "numbers")?;
                for &e in &c.frames.epsilons {
                    positive(l, e)?;
                }
            }
            ("frames", "degrees") => c.frames.degrees = list(l, "unsigned integers")?,
            ("frames", "margin") => c.frames.margin = positive(l, scalar(l, "a number")?)?,
            ("frames", "range") => c.frames.range = scalar(l, "an unsigned integer")?,
            ("frames", "density_radii") => {
                c.frames.density_radii = list(l, "numbers")?;
                for &r in &c.frames.density_radii {
                    positive(l, r)?;
                }
            }
            ("frames", "density_centers") => {
                c.frames.density_centers = scalar(l, "an unsigned integer")?
            }
            ("frames", "samples") => c.frames.samples = scalar(l, "an unsigned integer")?,
            ("frames", "radius") => c.frames.radius = positive(l, scalar(l, "a number")?)?,
            ("output", "dir") => c.output = l.value.to_string(),
            _ => return Err(err(l.no, full_key(l), "unknown key")),
        }
    }

    if seed.is_some() {
        c.seed = seed;
    }
    if kind.randomized() && c.seed.is_none() {
        return Err(err(
            kind_line.no,
            "experiment.seed",
            format!("missing required key for randomized experiment `{kind}`"),
        ));
    }
    for &p in &c.norm.p {
        let spec = match c.norm.q {
            Some(q) => NormSpec::mixed(p, q),
            None => NormSpec::new(p),
        };
        if let Err(e) = spec {
            let key = if NormSpec::new(p).is_ok() {
                "norm.q"
            } else {
                "norm.p"
            };
            return Err(err(
                at(key),
                key,
                format!("violates the NormSpec invariant: {e}"),
            ));
        }
    }
    if c.rep.lambda.len() != c.rep.mu.len() {
        return Err(err(
            at("rep.mu"),
            "rep.mu",
            format!(
                "{} lambda values but {} mu values",
                c.rep.lambda.len(),
                c.rep.mu.len()
            ),
        ));
    }
    // pairs a group rejects are skipped, but every group needs one valid pair
    let rep_groups = if kind.uses_rep_params() {
        c.rep.groups()
    } else {
        vec![]
    };
    for group in rep_groups {
        let errors: Vec<String> = c
            .rep
            .params()
            .into_iter()
            .filter_map(|(l, m)| RepSpec::new(group, l, m).err().map(|e| e.to_string()))
            .collect();
        if errors.len() == c.rep.params().len() {
            return Err(err(
                at("rep.lambda"),
                "rep.lambda",
                format!(
                    "no valid (lambda, mu) pair for {group}: {}",
                    errors.join("; ")
                ),
            ));
        }
    }
    if c.scan.u_max <= c.scan.u_min || c.scan.points < 2 {
        return Err(err(
            at("scan.u_max"),
            "scan.u_max",
            "need u_min < u_max and at least 2 points",
        ));
    }
    if c.kind == ExperimentKind::OrbitScan
        && c.scan.family == ScanFamily::Curve
        && c.rep.groups.len() != 1
    {
        return Err(err(
            at("rep.group"),
            "rep.group",
            "curve scans need exactly one group",
        ));
    }
    if c.frames.degrees.is_empty() || c.frames.degrees.contains(&0) {
        return Err(err(
            at("frames.degrees"),
            "frames.degrees",
            "need positive degrees",
        ));
    }
    Ok(c)
}
