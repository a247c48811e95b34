//! Seeded property suites over the library and their reports.
//!
//! A [`SuiteConfig`] names a tower, a suite, a range of levels and a trial
//! budget; [`run_suite`] turns it into a [`SuiteReport`]. Each trial draws its
//! inputs from a stream seeded by `(seed, suite, trial index)`, so the report
//! does not depend on thread count or scheduling. The JSON form of a report
//! has the fixed top-level fields
//! `{suite, config, checks: [{id, trials, failures, max_residual, counterexample}], pass, duration_ms}`.

mod sample;
mod suites;
mod trials;

pub use sample::{evaluate_sample, SAMPLE_OPS};
pub use trials::CheckRecord;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Rational, DEFAULT_TOL};
use crate::tower::{EuclideanTower, Fault, FaultyTower, SphereTower, TowerKind};

/// Process exit status for a run.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const FAIL: i32 = 1;
    pub const CONFIG: i32 = 2;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Group,
    Functorial,
    Charts,
    Cocycle,
    Diagram,
    Tangency,
    Roundtrip,
    Derivative,
    All,
}

impl Suite {
    /// Every concrete suite, in the order `all` runs them.
    pub const CONCRETE: [Suite; 8] = [
        Suite::Group,
        Suite::Functorial,
        Suite::Charts,
        Suite::Cocycle,
        Suite::Diagram,
        Suite::Tangency,
        Suite::Roundtrip,
        Suite::Derivative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Group => "group",
            Suite::Functorial => "functorial",
            Suite::Charts => "charts",
            Suite::Cocycle => "cocycle",
            Suite::Diagram => "diagram",
            Suite::Tangency => "tangency",
            Suite::Roundtrip => "roundtrip",
            Suite::Derivative => "derivative",
            Suite::All => "all",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Suite::Group => "GL(inf) group axioms, embeddings, action and canonical blocks",
            Suite::Functorial => "bonding laws of R^n, GL(R^n) and tangent coordinates; limit equivalence",
            Suite::Charts => "chart compatibility across levels and chart round trips",
            Suite::Cocycle => "fiber transition cocycle for three charts with distinct poles (sphere)",
            Suite::Diagram => "trivialization square, lift compatibility, projection square, fiber linearity",
            Suite::Tangency => "ambient tangents are orthogonal to the foot; chart changes keep the class (sphere)",
            Suite::Roundtrip => "limit of tangent bundles versus tangent bundle of the limit, both directions",
            Suite::Derivative => "closed-form differentials against central differences (sphere, float)",
            Suite::All => "every suite applicable to the selected tower",
        }
    }

    /// Suites that need stereographic charts.
    pub fn sphere_only(self) -> bool {
        matches!(self, Suite::Cocycle | Suite::Tangency | Suite::Derivative)
    }

    /// Suites that always run in float mode.
    pub fn float_only(self) -> bool {
        matches!(self, Suite::Derivative)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::CONCRETE
            .into_iter()
            .chain([Suite::All])
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Rational,
    Float,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(Mode::Rational),
            "float" => Ok(Mode::Float),
            other => Err(Error::ConfigInvalid(format!("unknown mode `{other}` (rational | float)"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Rational => "rational",
            Mode::Float => "float",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => Err(Error::ConfigInvalid(format!("unknown format `{other}` (text | json)"))),
        }
    }
}

/// An inclusive range of tower levels, written `min..max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Dims {
    pub min: usize,
    pub max: usize,
}

impl Dims {
    pub fn new(min: usize, max: usize) -> Self {
        Dims { min, max }
    }
}

impl FromStr for Dims {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ConfigInvalid(format!("dims `{s}` is not of the form MIN..MAX"));
        let (a, b) = s.split_once("..").ok_or_else(bad)?;
        let b = b.strip_prefix('=').unwrap_or(b);
        let min = a.trim().parse().map_err(|_| bad())?;
        let max = b.trim().parse().map_err(|_| bad())?;
        Ok(Dims { min, max })
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.min, self.max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub tower: TowerKind,
    pub suite: Suite,
    pub dims: Dims,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub mode: Mode,
    pub format: Format,
    /// A deliberate defect injected into the tower, if any.
    pub fault: Option<Fault>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            tower: TowerKind::Sphere,
            suite: Suite::All,
            dims: Dims::new(2, 12),
            trials: 500,
            seed: 0,
            tol: DEFAULT_TOL,
            mode: Mode::Rational,
            format: Format::Text,
            fault: None,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::ConfigInvalid(msg));
        if self.trials == 0 {
            return invalid("trials must be at least 1".into());
        }
        if self.dims.min == 0 {
            return invalid("levels start at 1".into());
        }
        if self.dims.max < self.dims.min {
            return invalid(format!("empty dims range {}", self.dims));
        }
        if self.tower == TowerKind::Sphere && self.dims.max < 2 {
            return invalid("the sphere tower needs dims reaching at least 2".into());
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return invalid(format!("tol must be positive and finite, got {}", self.tol));
        }
        if self.tower != TowerKind::Sphere && self.suite.sphere_only() {
            return invalid(format!("suite {} needs the sphere tower", self.suite));
        }
        Ok(())
    }

    /// The concrete suites this config runs.
    pub fn suites(&self) -> Vec<Suite> {
        match self.suite {
            Suite::All => Suite::CONCRETE
                .into_iter()
                .filter(|s| self.tower == TowerKind::Sphere || !s.sphere_only())
                .collect(),
            s => vec![s],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub config: SuiteConfig,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
    pub duration_ms: u64,
}

impl SuiteReport {
    pub fn failures(&self) -> usize {
        self.checks.iter().map(|c| c.failures).sum()
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            exit::PASS
        } else {
            exit::FAIL
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn render(&self) -> String {
        match self.config.format {
            Format::Text => self.to_string(),
            Format::Json => self.to_json(),
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        write!(
            f,
            "suite {} | tower {} | dims {} | trials {} | seed {} | tol {:e} | mode {}",
            self.suite, c.tower, c.dims, c.trials, c.seed, c.tol, c.mode
        )?;
        if let Some(fault) = c.fault {
            write!(f, " | fault {fault}")?;
        }
        writeln!(f)?;
        let width = self.checks.iter().map(|r| r.id.len()).max().unwrap_or(0);
        for r in &self.checks {
            let residual = r.max_residual.map_or_else(|| "-".to_string(), |x| format!("{x:.3e}"));
            writeln!(
                f,
                "  {} {:width$}  {:>6} trials  {:>5} failures  max residual {}",
                if r.failures == 0 { "PASS" } else { "FAIL" },
                r.id,
                r.trials,
                r.failures,
                residual,
            )?;
            if let Some(ce) = &r.counterexample {
                writeln!(f, "       first counterexample: {ce}")?;
            }
        }
        write!(
            f,
            "{}: {} checks, {} failures, {} ms",
            if self.pass { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.failures(),
            self.duration_ms
        )
    }
}

/// Runs the configured suites and collects their checks.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    config.validate()?;
    let start = Instant::now();
    let mut checks = Vec::new();
    for suite in config.suites() {
        checks.extend(match config.mode {
            Mode::Rational => dispatch::<Rational>(config, suite)?,
            Mode::Float => dispatch::<f64>(config, suite)?,
        });
    }
    let pass = checks.iter().all(|c| c.failures == 0);
    Ok(SuiteReport {
        suite: config.suite,
        config: config.clone(),
        checks,
        pass,
        duration_ms: start.elapsed().as_millis() as u64,
    })
}

fn dispatch<S: suites::HarnessScalar>(config: &SuiteConfig, suite: Suite) -> Result<Vec<CheckRecord>> {
    let max = config.dims.max;
    match (config.tower, config.fault) {
        (TowerKind::Sphere, None) => suites::run::<S, _>(config, suite, &SphereTower::new(max)),
        (TowerKind::Sphere, Some(f)) => {
            suites::run::<S, _>(config, suite, &FaultyTower::new(SphereTower::new(max), f))
        }
        (TowerKind::Euclidean, None) => suites::run::<S, _>(config, suite, &EuclideanTower::new(max)),
        (TowerKind::Euclidean, Some(f)) => {
            suites::run::<S, _>(config, suite, &FaultyTower::new(EuclideanTower::new(max), f))
        }
    }
}

/// `(name, description)` of every suite, for `list-suites`.
pub fn list_suites() -> Vec<(&'static str, &'static str)> {
    Suite::CONCRETE
        .into_iter()
        .chain([Suite::All])
        .map(|s| (s.name(), s.description()))
        .collect()
}
