//! Run configuration: command-line flags layered over an optional `key = value` file.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::Args;
use wgfem::mesh::{MeshFamily, MAX_LEVEL};
use wgfem::poly::{KappaMatrix, Poly2};
use wgfem::study::{CaseName, ModelCase, StudyConfig, STUDY_LEVELS};
use wgfem::system::SolverKind;
use wgfem::weakops::LiftDegrees;
use wgfem::{Error, Result};

/// Options shared by every subcommand. Anything left unset falls back to the config file,
/// then to built-in defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Mesh family: tri or pent
    #[arg(long)]
    pub family: Option<String>,
    /// Refinement level of a single mesh
    #[arg(long)]
    pub level: Option<usize>,
    /// Level range A:B for convergence studies
    #[arg(long)]
    pub levels: Option<String>,
    /// Polynomial order
    #[arg(long)]
    pub k: Option<usize>,
    /// Diffusion tensor entries "a b c" of [[a, b], [b, c]]
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<String>,
    /// Reaction coefficient
    #[arg(long)]
    pub mu: Option<f64>,
    /// Test case: s1, s2 or custom
    #[arg(long)]
    pub case: Option<String>,
    /// Exact solution of a custom case as "a,b,coeff;..." terms of x^a y^b
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<String>,
    /// Degree of the elliptic lift space (default k + 4)
    #[arg(long)]
    pub r1: Option<usize>,
    /// Degree of the gradient lift space (default k + 2)
    #[arg(long)]
    pub r2: Option<usize>,
    /// Linear solver: direct or cg
    #[arg(long)]
    pub solver: Option<String>,
    /// Eliminate element-interior unknowns before solving
    #[arg(long)]
    pub condense: bool,
    /// Output file
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format for convergence studies: table or csv
    #[arg(long)]
    pub format: Option<String>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    pub threads: Option<usize>,
    /// Write the assembled matrix to this path and the right-hand side next to it
    #[arg(long)]
    pub dump_system: Option<PathBuf>,
    /// Read defaults from a `key = value` file
    #[arg(long)]
    pub config: Option<PathBuf>,
}

const KEYS: &[&str] = &[
    "family", "level", "levels", "k", "kappa", "mu", "case", "u", "r1", "r2", "solver", "condense", "out", "format",
    "threads", "dump-system",
];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("config line {}: expected key = value", n + 1)))?;
        let key = key.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(Error::Config(format!("config line {}: unknown key '{key}'", n + 1)));
        }
        map.insert(key, value.trim().trim_matches('"').to_string());
    }
    Ok(map)
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Config(format!("invalid value '{v}' for {key}")))
}

impl Options {
    /// Fills unset options from a config file map.
    pub fn merge_file(mut self, file: &BTreeMap<String, String>) -> Result<Self> {
        for (key, v) in file {
            match key.as_str() {
                "family" => self.family = self.family.or(Some(v.clone())),
                "level" => self.level = self.level.or(Some(parse_value(key, v)?)),
                "levels" => self.levels = self.levels.or(Some(v.clone())),
                "k" => self.k = self.k.or(Some(parse_value(key, v)?)),
                "kappa" => self.kappa = self.kappa.or(Some(v.clone())),
                "mu" => self.mu = self.mu.or(Some(parse_value(key, v)?)),
                "case" => self.case = self.case.or(Some(v.clone())),
                "u" => self.u = self.u.or(Some(v.clone())),
                "r1" => self.r1 = self.r1.or(Some(parse_value(key, v)?)),
                "r2" => self.r2 = self.r2.or(Some(parse_value(key, v)?)),
                "solver" => self.solver = self.solver.or(Some(v.clone())),
                "condense" => self.condense |= parse_value::<bool>(key, v)?,
                "out" => self.out = self.out.or(Some(v.into())),
                "format" => self.format = self.format.or(Some(v.clone())),
                "threads" => self.threads = self.threads.or(Some(parse_value(key, v)?)),
                "dump-system" => self.dump_system = self.dump_system.or(Some(v.into())),
                _ => unreachable!("keys are checked when the file is parsed"),
            }
        }
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Table,
    Csv,
}

/// Fully validated settings for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub family: MeshFamily,
    pub level: usize,
    pub levels: RangeInclusive<usize>,
    pub k: usize,
    pub case: ModelCase,
    pub study: StudyConfig,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub threads: Option<usize>,
    pub dump_system: Option<PathBuf>,
}

pub fn parse_kappa(s: &str) -> Result<KappaMatrix> {
    let vals: Vec<f64> = s
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| parse_value::<f64>("kappa", t))
        .collect::<Result<_>>()?;
    if vals.len() != 3 {
        return Err(Error::Config(format!("kappa needs three entries \"a b c\", got '{s}'")));
    }
    KappaMatrix::new(vals[0], vals[1], vals[2])
}

pub fn parse_levels(s: &str) -> Result<RangeInclusive<usize>> {
    let (a, b) = s.split_once(':').unwrap_or((s, s));
    let (a, b): (usize, usize) = (parse_value("levels", a.trim())?, parse_value("levels", b.trim())?);
    if a > b {
        return Err(Error::Config(format!("levels {a}:{b} must be ascending")));
    }
    Ok(a..=b)
}

/// Level ranges of the published tables for each order.
pub fn default_levels(k: usize) -> RangeInclusive<usize> {
    match k {
        2 => 4..=6,
        3 => 3..=5,
        _ => 2..=4,
    }
}

impl RunConfig {
    pub fn resolve(opts: &Options) -> Result<Self> {
        let family: MeshFamily = opts.family.as_deref().unwrap_or("tri").parse()?;
        let level = opts.level.unwrap_or(1);
        if !(1..=MAX_LEVEL).contains(&level) {
            return Err(Error::Config(format!("level {level} outside the valid range 1..={MAX_LEVEL}")));
        }
        let k = opts.k.unwrap_or(2);
        if !(2..=6).contains(&k) {
            return Err(Error::Config(format!("k = {k} outside the valid range 2..=6")));
        }
        let levels = match &opts.levels {
            Some(s) => parse_levels(s)?,
            None => default_levels(k),
        };
        if !STUDY_LEVELS.contains(levels.start()) || !STUDY_LEVELS.contains(levels.end()) {
            return Err(Error::Config(format!(
                "levels {}:{} outside the valid range {}:{}",
                levels.start(),
                levels.end(),
                STUDY_LEVELS.start(),
                STUDY_LEVELS.end()
            )));
        }

        let kappa = opts.kappa.as_deref().map(parse_kappa).transpose()?;
        if let Some(mu) = opts.mu {
            if !(mu >= 0.0 && mu.is_finite()) {
                return Err(Error::Config(format!("mu = {mu} must be a nonnegative number")));
            }
        }
        let case_name: CaseName = opts.case.as_deref().unwrap_or("s1").parse()?;
        let case = match case_name {
            CaseName::Custom => {
                let u: Poly2 = opts
                    .u
                    .as_deref()
                    .ok_or_else(|| Error::Config("--case custom needs --u".into()))?
                    .parse()?;
                ModelCase::custom(u, kappa.unwrap_or_else(KappaMatrix::identity), opts.mu.unwrap_or(1.0))?
            }
            named => {
                if kappa.is_some() || opts.mu.is_some() || opts.u.is_some() {
                    return Err(Error::Config(format!(
                        "--kappa, --mu and --u apply only to --case custom (case {named} fixes them)"
                    )));
                }
                if named == CaseName::S1 {
                    ModelCase::s1()
                } else {
                    ModelCase::s2()
                }
            }
        };

        let degrees = LiftDegrees { r1: opts.r1, r2: opts.r2 };
        degrees.check(k)?;
        let solver: SolverKind = opts.solver.as_deref().unwrap_or("direct").parse()?;
        let format = match opts.format.as_deref().unwrap_or("table") {
            "table" => OutputFormat::Table,
            "csv" => OutputFormat::Csv,
            other => return Err(Error::Config(format!("unknown format '{other}' (expected table or csv)"))),
        };
        if opts.threads == Some(0) {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        Ok(Self {
            family,
            level,
            levels,
            k,
            case,
            study: StudyConfig { degrees, solver, condense: opts.condense },
            out: opts.out.clone(),
            format,
            threads: opts.threads,
            dump_system: opts.dump_system.clone(),
        })
    }
}
