use clap::{Args, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Deserialize;

use super::output::{Cell, Row};
use crate::dimension::DimensionFunction;
use crate::error::{Error, Result};
use crate::horn::{horn_asymptotic_bounds, horn_bracket, HornDomain};
use crate::minkowski::{dimension_scan, minkowski_content, Probe};
use crate::string_spectrum::{
    asymptotic_count, count_with, oscillating_count, pi_p, zeta_cached, Algorithm, FractalString,
    TailLaw, TailMode,
};
use crate::summation::zeta_extended;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Count,
    Asym,
    Content,
    Dimension,
    Horn,
    Oscillate,
    Zeta,
    Pip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    /// Bare result values, one per line.
    Plain,
}

fn one() -> f64 {
    1.0
}
fn one_u64() -> u64 {
    1
}
fn exact_mode() -> String {
    "exact".into()
}
fn hyperbola() -> String {
    "hyperbola".into()
}
fn two() -> Vec<f64> {
    vec![2.0]
}

/// `2^-4, 2^-5, …, 2^-20`.
pub fn default_eps_grid() -> Vec<f64> {
    (4..=20).map(|k| 2f64.powi(-k)).collect()
}

/// `0.05, 0.10, …, 0.95`.
pub fn default_d_grid() -> Vec<f64> {
    (1..=19).map(|i| i as f64 / 20.0).collect()
}

/// A complete batch job, as given on the command line or in a `--job` file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    /// Tail law (`power:d=…`, `powerlog:d=…,a=…`, `powerloglog:d=…,a=…`) or `finite`.
    #[serde(default)]
    pub string: Option<String>,
    #[serde(rename = "L", default = "one")]
    pub scale: f64,
    #[serde(default)]
    pub prefix: Vec<f64>,
    #[serde(default = "exact_mode")]
    pub mode: String,
    #[serde(default)]
    pub c1: Option<f64>,
    #[serde(default)]
    pub c2: Option<f64>,
    #[serde(default = "one_u64")]
    pub start: u64,
    #[serde(default = "two")]
    pub p: Vec<f64>,
    #[serde(default)]
    pub lambda: Vec<f64>,
    #[serde(default = "hyperbola")]
    pub algo: String,
    #[serde(default = "default_eps_grid")]
    pub eps: Vec<f64>,
    #[serde(default)]
    pub probe: Option<String>,
    #[serde(default = "default_d_grid")]
    pub d_grid: Vec<f64>,
    #[serde(default)]
    pub m: Option<u64>,
    #[serde(default)]
    pub n: Option<u64>,
    #[serde(default)]
    pub d: Vec<f64>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub out: Option<Format>,
    #[serde(default)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct StringArgs {
    /// Tail law, e.g. power:d=0.5, or `finite` for prefix-only strings.
    #[arg(long)]
    string: String,
    /// Length scale L of the tail.
    #[arg(long = "L", default_value_t = 1.0, allow_negative_numbers = true)]
    scale: f64,
    /// Leading interval lengths, largest first.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    prefix: Vec<f64>,
    /// exact | asymptotic | twosided
    #[arg(long, default_value = "exact")]
    mode: String,
    /// Lower length constant of a two-sided tail.
    #[arg(long, allow_negative_numbers = true)]
    c1: Option<f64>,
    /// Upper length constant of a two-sided tail.
    #[arg(long, allow_negative_numbers = true)]
    c2: Option<f64>,
    /// Argument of g for the first tail interval.
    #[arg(long, default_value_t = 1)]
    start: u64,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Output format (plain for zeta and pip, json otherwise).
    #[arg(long, value_enum)]
    out: Option<Format>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Absolute tolerance for zeta evaluations.
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct LambdaArgs {
    /// Spectral parameter grid (comma separated, ascending).
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true, allow_negative_numbers = true)]
    lambda: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct PArgs {
    /// p-Laplacian exponent(s).
    #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "2", allow_negative_numbers = true)]
    p: Vec<f64>,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Exact eigenvalue counts N(λ).
    Count {
        #[command(flatten)]
        s: StringArgs,
        #[command(flatten)]
        p: PArgs,
        #[command(flatten)]
        lambda: LambdaArgs,
        /// naive | hyperbola
        #[arg(long, default_value = "hyperbola")]
        algo: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Leading-order asymptotics of N(λ).
    Asym {
        #[command(flatten)]
        s: StringArgs,
        #[command(flatten)]
        p: PArgs,
        #[command(flatten)]
        lambda: LambdaArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Scaled tubular-neighbourhood measures.
    Content {
        #[command(flatten)]
        s: StringArgs,
        /// Decreasing epsilon grid.
        #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
        eps: Vec<f64>,
        /// Exponent d, or a dimension function such as powerlog:d=0.5,a=1.
        #[arg(long, allow_negative_numbers = true)]
        probe: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Minkowski dimension by probe scan.
    Dimension {
        #[command(flatten)]
        s: StringArgs,
        #[arg(long = "d-grid", value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
        d_grid: Vec<f64>,
        #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
        eps: Vec<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Dirichlet–Neumann bracket for a horn.
    Horn {
        /// Horn profile law, d > 1.
        #[arg(long)]
        string: String,
        #[arg(long = "L", default_value_t = 1.0, allow_negative_numbers = true)]
        scale: f64,
        #[command(flatten)]
        lambda: LambdaArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Counts for the self-similar string with m^k intervals of length n^(1-k).
    Oscillate {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        p: PArgs,
        #[command(flatten)]
        lambda: LambdaArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Riemann zeta at real d > 0, d != 1.
    Zeta {
        #[arg(required = true, num_args = 1.., allow_negative_numbers = true)]
        d: Vec<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// The constant π_p.
    Pip {
        #[command(flatten)]
        p: PArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
}

impl JobSpec {
    fn blank(command: Command, common: CommonArgs) -> Self {
        JobSpec {
            command,
            string: None,
            scale: 1.0,
            prefix: Vec::new(),
            mode: exact_mode(),
            c1: None,
            c2: None,
            start: 1,
            p: two(),
            lambda: Vec::new(),
            algo: hyperbola(),
            eps: default_eps_grid(),
            probe: None,
            d_grid: default_d_grid(),
            m: None,
            n: None,
            d: Vec::new(),
            tol: common.tol,
            out: common.out,
            threads: common.threads,
        }
    }

    fn with_string(mut self, s: StringArgs) -> Self {
        self.string = Some(s.string);
        self.scale = s.scale;
        self.prefix = s.prefix;
        self.mode = s.mode;
        self.c1 = s.c1;
        self.c2 = s.c2;
        self.start = s.start;
        self
    }
}

impl CliCommand {
    pub fn into_job(self) -> JobSpec {
        match self {
            CliCommand::Count { s, p, lambda, algo, common } => JobSpec {
                p: p.p,
                lambda: lambda.lambda,
                algo,
                ..JobSpec::blank(Command::Count, common).with_string(s)
            },
            CliCommand::Asym { s, p, lambda, common } => JobSpec {
                p: p.p,
                lambda: lambda.lambda,
                ..JobSpec::blank(Command::Asym, common).with_string(s)
            },
            CliCommand::Content { s, eps, probe, common } => {
                let job = JobSpec::blank(Command::Content, common).with_string(s);
                JobSpec { eps: if eps.is_empty() { job.eps.clone() } else { eps }, probe: Some(probe), ..job }
            }
            CliCommand::Dimension { s, d_grid, eps, common } => {
                let job = JobSpec::blank(Command::Dimension, common).with_string(s);
                JobSpec {
                    eps: if eps.is_empty() { job.eps.clone() } else { eps },
                    d_grid: if d_grid.is_empty() { job.d_grid.clone() } else { d_grid },
                    ..job
                }
            }
            CliCommand::Horn { string, scale, lambda, common } => JobSpec {
                string: Some(string),
                scale,
                lambda: lambda.lambda,
                ..JobSpec::blank(Command::Horn, common)
            },
            CliCommand::Oscillate { m, n, p, lambda, common } => JobSpec {
                m: Some(m),
                n: Some(n),
                p: p.p,
                lambda: lambda.lambda,
                ..JobSpec::blank(Command::Oscillate, common)
            },
            CliCommand::Zeta { d, common } => JobSpec { d, ..JobSpec::blank(Command::Zeta, common) },
            CliCommand::Pip { p, common } => JobSpec { p: p.p, ..JobSpec::blank(Command::Pip, common) },
        }
    }
}

fn ascending(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] <= w[1])
}

impl JobSpec {
    pub fn format(&self) -> Format {
        self.out.unwrap_or(match self.command {
            Command::Zeta | Command::Pip => Format::Plain,
            _ => Format::Json,
        })
    }

    /// Checks the job's shape; failures are usage errors.
    pub fn validate(&self) -> std::result::Result<(), String> {
        use Command::*;
        if self.threads == Some(0) {
            return Err("--threads must be at least 1".into());
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(format!("--tol must be positive, got {t}"));
            }
        }
        if self.p.is_empty() || self.p.iter().any(|p| !p.is_finite()) {
            return Err("--p needs finite values".into());
        }
        if matches!(self.command, Count | Asym | Content | Dimension | Horn) {
            let spec = self.string.as_deref().ok_or("--string is required")?;
            if spec != "finite" {
                spec.parse::<DimensionFunction>().map_err(|e| format!("--string: {e}"))?;
            } else if self.command == Horn {
                return Err("a horn needs a profile law".into());
            }
            if !(self.scale > 0.0 && self.scale.is_finite()) {
                return Err(format!("--L must be positive, got {}", self.scale));
            }
            if !matches!(self.mode.as_str(), "exact" | "asymptotic" | "twosided") {
                return Err(format!("unknown --mode {:?}", self.mode));
            }
            if self.mode == "twosided" && (self.c1.is_none() || self.c2.is_none()) {
                return Err("--mode twosided needs --c1 and --c2".into());
            }
        }
        if matches!(self.command, Count | Asym | Horn | Oscillate) {
            if self.lambda.is_empty() {
                return Err("--lambda grid is empty".into());
            }
            let min_ok = |l: f64| if self.command == Count { l >= 0.0 } else { l > 0.0 };
            if self.lambda.iter().any(|&l| !(l.is_finite() && min_ok(l))) {
                return Err("--lambda values must be finite and positive".into());
            }
            if !ascending(&self.lambda) {
                return Err("--lambda grid must be ascending".into());
            }
        }
        match self.command {
            Count => {
                self.algo.parse::<Algorithm>().map_err(|e| e.to_string())?;
            }
            Content | Dimension => {
                if self.eps.is_empty() || self.eps.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
                    return Err("--eps values must be positive".into());
                }
                if self.eps.windows(2).any(|w| w[1] >= w[0]) {
                    return Err("--eps grid must be strictly decreasing".into());
                }
                if self.command == Content {
                    let probe = self.probe.as_deref().ok_or("--probe is required")?;
                    parse_probe(probe).map_err(|e| format!("--probe: {e}"))?;
                } else {
                    if self.d_grid.is_empty() || self.d_grid.iter().any(|&d| !(d > 0.0 && d < 1.0)) {
                        return Err("--d-grid values must lie in (0, 1)".into());
                    }
                    if self.d_grid.windows(2).any(|w| w[1] <= w[0]) {
                        return Err("--d-grid must be strictly increasing".into());
                    }
                }
            }
            Oscillate if self.m.is_none() || self.n.is_none() => {
                return Err("--m and --n are required".into());
            }
            Zeta if self.d.is_empty() => {
                return Err("zeta needs at least one argument".into());
            }
            _ => {}
        }
        Ok(())
    }

    fn fractal_string(&self) -> Result<FractalString> {
        let spec = self.string.as_deref().unwrap_or("finite");
        if spec == "finite" {
            return FractalString::finite(self.prefix.clone());
        }
        let df: DimensionFunction = spec.parse()?;
        let mode = match self.mode.as_str() {
            "asymptotic" => TailMode::Asymptotic,
            "twosided" => TailMode::TwoSided {
                lower: self.c1.unwrap_or(self.scale),
                upper: self.c2.unwrap_or(self.scale),
            },
            _ => TailMode::Exact,
        };
        let tail = TailLaw { df, mode, scale: self.scale, start: self.start };
        FractalString::new(self.prefix.clone(), Some(tail))
    }

    fn string_echo(&self) -> Row {
        let prefix = self.prefix.iter().map(|v| Cell::Float(*v).to_text()).collect::<Vec<_>>().join(";");
        vec![
            ("spec", Cell::Str(self.string.clone().unwrap_or_default())),
            ("L", Cell::Float(self.scale)),
            ("mode", Cell::Str(self.mode.clone())),
            ("prefix", Cell::Str(prefix)),
        ]
    }

    fn p_lambda_grid(&self) -> Vec<(f64, f64)> {
        self.p.iter().flat_map(|&p| self.lambda.iter().map(move |&l| (p, l))).collect()
    }

    /// Rows in grid order, plus the first error (rows after it are dropped).
    pub fn execute(&self) -> (Vec<Row>, Option<Error>) {
        let batches: Vec<Result<Vec<Row>>> = match self.command {
            Command::Count | Command::Asym => match self.fractal_string() {
                Err(e) => vec![Err(e)],
                Ok(s) => {
                    let algo: Algorithm = self.algo.parse().unwrap_or(Algorithm::Hyperbola);
                    self.p_lambda_grid()
                        .into_par_iter()
                        .map(|(p, lambda)| {
                            let c = if self.command == Command::Count {
                                count_with(&s, p, lambda, algo)?
                            } else {
                                asymptotic_count(&s, p, lambda)?
                            };
                            let mut row = self.string_echo();
                            row.extend([
                                ("p", Cell::Float(p)),
                                ("lambda", Cell::Float(lambda)),
                                ("exact", c.exact.map_or(Cell::Null, Cell::Int)),
                                ("weyl", Cell::opt(c.weyl_term)),
                                ("boundary", Cell::opt(c.boundary_term)),
                                ("residual", Cell::opt(c.residual)),
                                ("bracket_lower", Cell::opt(c.bracket.map(|b| b.0))),
                                ("bracket_upper", Cell::opt(c.bracket.map(|b| b.1))),
                                ("cutoff_j", Cell::Int(c.cutoff_j)),
                                ("algorithm", Cell::Str(algorithm_name(c.algorithm).into())),
                                ("terms_evaluated", Cell::Int(c.terms_evaluated)),
                            ]);
                            Ok(vec![row])
                        })
                        .collect()
                }
            },
            Command::Content => vec![self.fractal_string().and_then(|s| {
                let probe_text = self.probe.clone().unwrap_or_default();
                let c = minkowski_content(&s, &parse_probe(&probe_text)?, &self.eps)?;
                Ok((0..c.eps_grid.len())
                    .map(|i| {
                        let mut row = self.string_echo();
                        row.extend([
                            ("probe", Cell::Str(probe_text.clone())),
                            ("eps", Cell::Float(c.eps_grid[i])),
                            ("tubular_measure", Cell::Float(c.tubular[i])),
                            ("scaled_value", Cell::Float(c.values[i])),
                            ("upper", Cell::Float(c.upper)),
                            ("lower", Cell::Float(c.lower)),
                            ("measurable", Cell::Bool(c.measurable)),
                        ]);
                        row
                    })
                    .collect())
            })],
            Command::Dimension => vec![self.fractal_string().and_then(|s| {
                let d = dimension_scan(&s, &self.d_grid, &self.eps)?;
                let mut row = self.string_echo();
                row.extend([
                    ("d_grid_min", Cell::Float(self.d_grid[0])),
                    ("d_grid_max", Cell::Float(*self.d_grid.last().expect("nonempty"))),
                    ("eps_max", Cell::Float(self.eps[0])),
                    ("eps_min", Cell::Float(*self.eps.last().expect("nonempty"))),
                    ("dimension", Cell::Float(d)),
                ]);
                Ok(vec![row])
            })],
            Command::Horn => {
                let horn = self
                    .string
                    .as_deref()
                    .unwrap_or_default()
                    .parse::<DimensionFunction>()
                    .and_then(|df| HornDomain::new(df, self.scale));
                match horn {
                    Err(e) => vec![Err(e)],
                    Ok(horn) => self
                        .lambda
                        .par_iter()
                        .map(|&lambda| {
                            let b = horn_bracket(&horn, lambda)?;
                            let (lo, hi) = horn_asymptotic_bounds(&horn, lambda)?;
                            Ok(vec![vec![
                                ("spec", Cell::Str(self.string.clone().unwrap_or_default())),
                                ("L", Cell::Float(self.scale)),
                                ("lambda", Cell::Float(lambda)),
                                ("lower", Cell::Int(b.lower)),
                                ("upper", Cell::Int(b.upper)),
                                ("lower_pred", Cell::Float(lo)),
                                ("upper_pred", Cell::Float(hi)),
                                ("j_max_lower", Cell::Int(b.j_max_lower)),
                                ("j_max_upper", Cell::Int(b.j_max_upper)),
                            ]])
                        })
                        .collect(),
                }
            }
            Command::Oscillate => {
                let (m, n) = (self.m.unwrap_or(0), self.n.unwrap_or(0));
                self.p_lambda_grid()
                    .into_par_iter()
                    .map(|(p, lambda)| {
                        let o = oscillating_count(m, n, p, lambda)?;
                        Ok(vec![vec![
                            ("m", Cell::Int(m)),
                            ("n", Cell::Int(n)),
                            ("p", Cell::Float(p)),
                            ("lambda", Cell::Float(lambda)),
                            ("exact", Cell::Int(o.exact)),
                            ("s_value", Cell::Float(o.s_value)),
                        ]])
                    })
                    .collect()
            }
            Command::Zeta => self
                .d
                .par_iter()
                .map(|&d| {
                    let z = match self.tol {
                        Some(tol) => zeta_extended(d, tol)?,
                        None => zeta_cached(d)?,
                    };
                    Ok(vec![vec![("d", Cell::Float(d)), ("zeta", Cell::Float(z))]])
                })
                .collect(),
            Command::Pip => self
                .p
                .par_iter()
                .map(|&p| Ok(vec![vec![("p", Cell::Float(p)), ("pi_p", Cell::Float(pi_p(p)?))]]))
                .collect(),
        };
        let mut rows = Vec::new();
        for batch in batches {
            match batch {
                Ok(b) => rows.extend(b),
                Err(e) => return (rows, Some(e)),
            }
        }
        (rows, None)
    }
}

fn algorithm_name(a: Algorithm) -> &'static str {
    match a {
        Algorithm::Naive => "naive",
        Algorithm::Hyperbola => "hyperbola",
        Algorithm::AsymptoticOnly => "asymptotic",
    }
}

fn parse_probe(text: &str) -> Result<Probe> {
    if let Ok(d) = text.trim().parse::<f64>() {
        if !(d > 0.0 && d < 1.0) {
            return Err(Error::DomainError(format!("probe exponent must lie in (0, 1), got {d}")));
        }
        return Ok(Probe::Exponent(d));
    }
    Ok(Probe::Function(text.parse()?))
}
