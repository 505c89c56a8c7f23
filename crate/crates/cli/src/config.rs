//! Command-line flags, the optional `key=value` config file, and the merged
//! [`RunConfig`].

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use log::warn;

/// Environment variable selecting the worker thread count.
pub const THREADS_ENV: &str = "QTRANS_THREADS";

pub const MAX_N: usize = 3;
pub const MAX_GRID_POINTS: usize = 1024;
pub const MAX_CURVE_NODES: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    ReprCheck,
    TransformCheck,
    IntertwineCheck,
    Independence,
    Counterexample,
    DecayFit,
    ZeroScan,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::ReprCheck => "repr-check",
            Command::TransformCheck => "transform-check",
            Command::IntertwineCheck => "intertwine-check",
            Command::Independence => "independence",
            Command::Counterexample => "counterexample",
            Command::DecayFit => "decay-fit",
            Command::ZeroScan => "zero-scan",
        }
    }

    fn default_levels(self) -> usize {
        match self {
            Command::Counterexample | Command::DecayFit => 256,
            _ => 64,
        }
    }

    fn default_grid_points(self) -> usize {
        match self {
            Command::ZeroScan => 256,
            _ => 96,
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Operator used by `independence` and `decay-fit`.
#[derive(Clone, Debug, PartialEq)]
pub enum OperatorChoice {
    /// Ground-state projector `P_0`.
    GroundState,
    /// Seeded random rank-3 operator.
    Rank3,
    /// Weyl transform of a seeded random bump in `[−1, 1]^{2n}`.
    Bump,
    /// Operator dump written by `--dump`.
    File(PathBuf),
}

impl FromStr for OperatorChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "p0" => OperatorChoice::GroundState,
            "rank3" => OperatorChoice::Rank3,
            "bump" => OperatorChoice::Bump,
            "" => return Err("empty operator name".into()),
            path => OperatorChoice::File(PathBuf::from(path)),
        })
    }
}

impl fmt::Display for OperatorChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorChoice::GroundState => f.write_str("p0"),
            OperatorChoice::Rank3 => f.write_str("rank3"),
            OperatorChoice::Bump => f.write_str("bump"),
            OperatorChoice::File(p) => write!(f, "{}", p.display()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qtrans", version, about = "Verification suites for quantum translates and Weyl transforms")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Phase-space half dimension.
    #[arg(long)]
    pub n: Option<usize>,
    /// Fock levels per mode.
    #[arg(long = "N")]
    pub levels: Option<usize>,
    /// Side length of the phase-space grid.
    #[arg(long = "L")]
    pub side: Option<f64>,
    /// Grid points per axis (sign-scan resolution for zero-scan).
    #[arg(long = "M")]
    pub grid_points: Option<usize>,
    /// Curve nodes for the counterexample measure.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Comma-separated Schatten exponents.
    #[arg(long = "p-list", value_delimiter = ',')]
    pub p_list: Option<Vec<f64>>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory for the report and its sidecar files.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Boundary-mass warnings and unknown config keys become errors.
    #[arg(long)]
    pub strict: bool,
    /// `key=value` file; flags given on the command line override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Points CSV for `independence`.
    #[arg(long)]
    pub points: Option<PathBuf>,
    /// p0, rank3, bump, or the path of an operator dump.
    #[arg(long)]
    pub operator: Option<OperatorChoice>,
    /// Also write the operator built by the command.
    #[arg(long)]
    pub dump: bool,
}

/// Fully resolved parameters of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub n: usize,
    pub levels: usize,
    pub side: f64,
    pub grid_points: usize,
    pub curve_nodes: usize,
    pub p_list: Vec<f64>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub strict: bool,
    pub points: Option<PathBuf>,
    pub operator: OperatorChoice,
    pub dump: bool,
}

impl RunConfig {
    pub fn defaults(command: Command) -> Self {
        Self {
            command,
            n: 1,
            levels: command.default_levels(),
            side: 12.0,
            grid_points: command.default_grid_points(),
            curve_nodes: 4000,
            p_list: vec![2.0, 3.0, 4.0, 5.0, 8.0],
            seed: 1,
            out: None,
            strict: false,
            points: None,
            operator: OperatorChoice::GroundState,
            dump: false,
        }
    }

    /// Defaults, then the config file, then explicit flags.
    pub fn from_cli(cli: Cli) -> Result<Self, ConfigError> {
        let mut cfg = Self::defaults(cli.command);
        if let Some(path) = &cli.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError::new(format!("{}: {e}", path.display())))?;
            cfg.apply_file(path, &text, cli.strict)?;
        }
        cfg.strict |= cli.strict;
        if let Some(v) = cli.n {
            cfg.n = v;
        }
        if let Some(v) = cli.levels {
            cfg.levels = v;
        }
        if let Some(v) = cli.side {
            cfg.side = v;
        }
        if let Some(v) = cli.grid_points {
            cfg.grid_points = v;
        }
        if let Some(v) = cli.nodes {
            cfg.curve_nodes = v;
        }
        if let Some(v) = cli.p_list {
            cfg.p_list = v;
        }
        if let Some(v) = cli.seed {
            cfg.seed = v;
        }
        if cli.out.is_some() {
            cfg.out = cli.out;
        }
        if cli.points.is_some() {
            cfg.points = cli.points;
        }
        if let Some(v) = cli.operator {
            cfg.operator = v;
        }
        cfg.dump |= cli.dump;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Applies `key=value` lines; `#` starts a comment. Unknown keys are
    /// errors when `strict` is set on the command line or in the file.
    pub fn apply_file(&mut self, path: &Path, text: &str, strict_flag: bool) -> Result<(), ConfigError> {
        let mut unknown = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |msg: String| ConfigError::new(format!("{}:{}: {msg}", path.display(), idx + 1));
            let (key, value) = line.split_once('=').ok_or_else(|| at(format!("expected key=value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |e: &dyn fmt::Display| at(format!("bad value for {key}: {e}"));
            match key {
                "n" => self.n = value.parse().map_err(|e| bad(&e))?,
                "N" => self.levels = value.parse().map_err(|e| bad(&e))?,
                "L" => self.side = value.parse().map_err(|e| bad(&e))?,
                "M" => self.grid_points = value.parse().map_err(|e| bad(&e))?,
                "nodes" => self.curve_nodes = value.parse().map_err(|e| bad(&e))?,
                "p-list" => {
                    self.p_list = value
                        .split(',')
                        .map(|s| s.trim().parse::<f64>())
                        .collect::<Result<_, _>>()
                        .map_err(|e| bad(&e))?
                }
                "seed" => self.seed = value.parse().map_err(|e| bad(&e))?,
                "out" => self.out = Some(PathBuf::from(value)),
                "strict" => self.strict = value.parse().map_err(|e| bad(&e))?,
                "points" => self.points = Some(PathBuf::from(value)),
                "operator" => self.operator = value.parse().map_err(|e: String| bad(&e))?,
                "dump" => self.dump = value.parse().map_err(|e| bad(&e))?,
                _ => unknown.push((idx + 1, key.to_string())),
            }
        }
        for (line, key) in unknown {
            if strict_flag || self.strict {
                return Err(ConfigError::new(format!("{}:{line}: unknown key {key:?}", path.display())));
            }
            warn!("{}:{line}: ignoring unknown key {key:?}", path.display());
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |msg: String| Err(ConfigError::new(msg));
        if self.n == 0 || self.n > MAX_N {
            return fail(format!("--n must be in 1..={MAX_N}, got {}", self.n));
        }
        if self.levels < 2 {
            return fail(format!("--N must be >= 2, got {}", self.levels));
        }
        if !(self.side > 0.0 && self.side <= 200.0) {
            return fail(format!("--L must be in (0, 200], got {}", self.side));
        }
        if self.grid_points < 8 || self.grid_points > MAX_GRID_POINTS || self.grid_points % 2 != 0 {
            return fail(format!("--M must be even and in 8..={MAX_GRID_POINTS}, got {}", self.grid_points));
        }
        if self.curve_nodes < 64 || self.curve_nodes > MAX_CURVE_NODES || self.curve_nodes % 2 != 0 {
            return fail(format!("--nodes must be even and in 64..={MAX_CURVE_NODES}, got {}", self.curve_nodes));
        }
        if self.p_list.is_empty() || self.p_list.iter().any(|p| !(*p >= 1.0)) {
            return fail("--p-list needs one or more exponents >= 1".into());
        }
        match self.command {
            Command::Counterexample | Command::DecayFit | Command::ZeroScan if self.n != 1 => {
                return fail(format!("{} is only defined for --n 1", self.command))
            }
            Command::Counterexample if self.levels < 128 => {
                return fail("counterexample compares N with N/2 and needs --N >= 128".into())
            }
            Command::DecayFit if self.levels < 64 && !matches!(self.operator, OperatorChoice::File(_)) => {
                return fail("decay-fit needs --N >= 64".into())
            }
            Command::TransformCheck | Command::IntertwineCheck if self.n != 1 => {
                return fail(format!("{} runs on the plane; use --n 1", self.command))
            }
            _ => {}
        }
        Ok(())
    }
}

/// Usage-level failure: bad flag value, bad config file, unknown key.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl ConfigError {
    fn new(msg: String) -> Self {
        Self(msg)
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}
