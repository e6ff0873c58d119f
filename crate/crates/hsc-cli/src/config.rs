//! Experiment configuration: TOML file, command-line overrides and the
//! validated job description.
//!
//! Every key is optional in the file. A flag given on the command line
//! replaces the file value, and keys that the chosen experiment does not
//! read are rejected rather than ignored.

use std::fmt;
use std::path::{Path, PathBuf};

use hsc_core::fock::OperatorOptions;
use hsc_core::generation::NbarVariant;
use hsc_core::loss::Code;
use serde::{Deserialize, Serialize};

use crate::grid::parse_grid;
use crate::CliError;

/// Which table to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    /// Generation probability against beam-splitter transmittance.
    GenSweep,
    /// Squeezing that maximizes the hybrid Bell measurement.
    BellOptimal,
    /// Loss-compensation success, hybrid against squeezed-cat code.
    LossComp,
    /// Codeword properties at given amplitudes.
    StateInfo,
}

impl Experiment {
    /// Subcommand name.
    pub fn name(self) -> &'static str {
        match self {
            Experiment::GenSweep => "gen-sweep",
            Experiment::BellOptimal => "bell-optimal",
            Experiment::LossComp => "loss-comp",
            Experiment::StateInfo => "state-info",
        }
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            Experiment::GenSweep => &["nbar", "xi", "t", "nbar_variant"],
            Experiment::BellOptimal => &["nbar", "xi_grid"],
            Experiment::LossComp => &["nbar", "codes", "eta", "xi_grid"],
            Experiment::StateInfo => &["nbar", "alpha", "xi"],
        }
    }

    fn default_cutoff(self) -> usize {
        match self {
            Experiment::GenSweep => 30,
            _ => 40,
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A grid in a config file: a number, an array or a range string.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum GridValue {
    /// One point.
    Number(f64),
    /// Explicit points.
    List(Vec<f64>),
    /// `start:stop:step` or `a,b,c`.
    Text(String),
}

impl GridValue {
    fn points(&self, key: &str) -> Result<Vec<f64>, CliError> {
        let v = match self {
            GridValue::Number(x) => vec![*x],
            GridValue::List(v) => v.clone(),
            GridValue::Text(s) => parse_grid(s).map_err(|e| CliError::Usage(format!("{key}: {e}")))?,
        };
        if v.is_empty() {
            return Err(CliError::Usage(format!("{key}: grid is empty")));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(CliError::Usage(format!("{key}: grid values must be finite")));
        }
        Ok(v)
    }
}

/// Code names, either `"hsc,sc"` or `["hsc", "sc"]`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum CodeList {
    /// Comma-separated names.
    Text(String),
    /// One name per entry.
    List(Vec<String>),
}

impl CodeList {
    fn codes(&self) -> Result<Vec<Code>, CliError> {
        let names: Vec<String> = match self {
            CodeList::Text(s) => s.split(',').map(|x| x.trim().to_string()).collect(),
            CodeList::List(v) => v.clone(),
        };
        let codes = names
            .iter()
            .map(|n| match n.as_str() {
                "hsc" => Ok(Code::Hsc),
                "sc" => Ok(Code::Sc),
                other => Err(CliError::Usage(format!("codes: unknown code `{other}` (expected hsc or sc)"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if codes.is_empty() {
            return Err(CliError::Usage("codes: list is empty".into()));
        }
        Ok(codes)
    }
}

/// Raw settings, as read from a file or collected from flags.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub experiment: Option<Experiment>,
    pub nbar: Option<GridValue>,
    pub alpha: Option<GridValue>,
    pub xi: Option<GridValue>,
    pub xi_grid: Option<GridValue>,
    pub t: Option<GridValue>,
    pub eta: Option<GridValue>,
    pub codes: Option<CodeList>,
    pub nbar_variant: Option<String>,
    pub cutoff: Option<usize>,
    pub guard: Option<usize>,
    pub tail_tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub plot: Option<PathBuf>,
}

impl RawConfig {
    /// Reads a TOML file; unknown keys are an error.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    /// Parses TOML text.
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(e.message().to_string()))
    }

    /// `self` wins wherever it has a value.
    pub fn over(self, base: RawConfig) -> RawConfig {
        RawConfig {
            experiment: self.experiment.or(base.experiment),
            nbar: self.nbar.or(base.nbar),
            alpha: self.alpha.or(base.alpha),
            xi: self.xi.or(base.xi),
            xi_grid: self.xi_grid.or(base.xi_grid),
            t: self.t.or(base.t),
            eta: self.eta.or(base.eta),
            codes: self.codes.or(base.codes),
            nbar_variant: self.nbar_variant.or(base.nbar_variant),
            cutoff: self.cutoff.or(base.cutoff),
            guard: self.guard.or(base.guard),
            tail_tol: self.tail_tol.or(base.tail_tol),
            out: self.out.or(base.out),
            plot: self.plot.or(base.plot),
        }
    }

    fn present(&self) -> Vec<&'static str> {
        let mut keys = Vec::new();
        let mut mark = |set: bool, k| {
            if set {
                keys.push(k)
            }
        };
        mark(self.nbar.is_some(), "nbar");
        mark(self.alpha.is_some(), "alpha");
        mark(self.xi.is_some(), "xi");
        mark(self.xi_grid.is_some(), "xi_grid");
        mark(self.t.is_some(), "t");
        mark(self.eta.is_some(), "eta");
        mark(self.codes.is_some(), "codes");
        mark(self.nbar_variant.is_some(), "nbar_variant");
        keys
    }

    /// Checks every value and fills defaults for `experiment`.
    pub fn resolve(&self, experiment: Experiment) -> Result<Config, CliError> {
        if let Some(e) = self.experiment {
            if e != experiment {
                return Err(CliError::Usage(format!("config is for `{e}`, not `{experiment}`")));
            }
        }
        if let Some(k) = self.present().into_iter().find(|k| !experiment.keys().contains(k)) {
            return Err(CliError::Usage(format!("`{k}` does not apply to {experiment}")));
        }
        let cutoff = self.cutoff.unwrap_or(experiment.default_cutoff());
        if cutoff < 2 {
            return Err(CliError::Usage("cutoff must be at least 2".into()));
        }
        let defaults = OperatorOptions::default();
        let opts = OperatorOptions {
            guard: self.guard.unwrap_or(defaults.guard),
            tail_tol: self.tail_tol.unwrap_or(defaults.tail_tol),
        };
        if !(opts.tail_tol > 0.0 && opts.tail_tol < 1.0) {
            return Err(CliError::Usage("tail_tol must lie in (0, 1)".into()));
        }
        let grid = |v: &Option<GridValue>, key: &str, default: &str| match v {
            Some(g) => g.points(key),
            None => parse_grid(default),
        };
        let nonneg = |v: Vec<f64>, key: &str| {
            if v.iter().any(|&x| x < 0.0) {
                return Err(CliError::Usage(format!("{key}: values must be non-negative")));
            }
            Ok(v)
        };
        let job = match experiment {
            Experiment::GenSweep => {
                let nbar = nonneg(grid(&self.nbar, "nbar", "2.0")?, "nbar")?;
                let [nbar] = nbar.as_slice() else {
                    return Err(CliError::Usage("nbar: gen-sweep takes a single value".into()));
                };
                let t = grid(&self.t, "t", "0.05:0.95:0.05")?;
                if t.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
                    return Err(CliError::Usage("t: transmittances must lie in (0, 1)".into()));
                }
                let variant = match self.nbar_variant.as_deref().unwrap_or("initial") {
                    "initial" => NbarVariant::Initial,
                    "final" => NbarVariant::Final,
                    other => return Err(CliError::Usage(format!("nbar_variant: `{other}` is not initial or final"))),
                };
                Job::GenSweep { nbar: *nbar, xi: nonneg(grid(&self.xi, "xi", "0,0.25,0.5")?, "xi")?, t, variant }
            }
            Experiment::BellOptimal => Job::BellOptimal {
                nbar: nonneg(grid(&self.nbar, "nbar", "0.2:3.0:0.1")?, "nbar")?,
                xi_grid: nonneg(grid(&self.xi_grid, "xi_grid", "0:0.4:0.01")?, "xi_grid")?,
            },
            Experiment::LossComp => {
                let eta = grid(&self.eta, "eta", "0.99,0.90")?;
                if eta.iter().any(|&x| !(x > 0.0 && x <= 1.0)) {
                    return Err(CliError::Usage("eta: transmissivities must lie in (0, 1]".into()));
                }
                let codes = match &self.codes {
                    Some(c) => c.codes()?,
                    None => vec![Code::Hsc, Code::Sc],
                };
                Job::LossComp {
                    nbar: nonneg(grid(&self.nbar, "nbar", "0.5:3.0:0.25")?, "nbar")?,
                    codes,
                    eta,
                    xi_grid: nonneg(grid(&self.xi_grid, "xi_grid", "0:0.6:0.02")?, "xi_grid")?,
                }
            }
            Experiment::StateInfo => {
                let amplitude = match (&self.nbar, &self.alpha) {
                    (Some(_), Some(_)) => return Err(CliError::Usage("give either nbar or alpha, not both".into())),
                    (None, Some(a)) => Amplitude::Alpha(nonneg(a.points("alpha")?, "alpha")?),
                    (n, None) => Amplitude::Nbar(nonneg(grid(n, "nbar", "1.0")?, "nbar")?),
                };
                Job::StateInfo { amplitude, xi: nonneg(grid(&self.xi, "xi", "0")?, "xi")? }
            }
        };
        Ok(Config { experiment, cutoff, opts, out: self.out.clone(), plot: self.plot.clone(), job })
    }
}

/// How state-info picks its amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub enum Amplitude {
    /// Given directly.
    Alpha(Vec<f64>),
    /// Solved from the mean photon number of the even codeword.
    Nbar(Vec<f64>),
}

/// Experiment-specific grids.
#[derive(Debug, Clone, PartialEq)]
pub enum Job {
    /// See [`Experiment::GenSweep`].
    GenSweep { nbar: f64, xi: Vec<f64>, t: Vec<f64>, variant: NbarVariant },
    /// See [`Experiment::BellOptimal`].
    BellOptimal { nbar: Vec<f64>, xi_grid: Vec<f64> },
    /// See [`Experiment::LossComp`].
    LossComp { nbar: Vec<f64>, codes: Vec<Code>, eta: Vec<f64>, xi_grid: Vec<f64> },
    /// See [`Experiment::StateInfo`].
    StateInfo { amplitude: Amplitude, xi: Vec<f64> },
}

/// A validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub experiment: Experiment,
    pub cutoff: usize,
    pub opts: OperatorOptions,
    /// CSV destination; standard output when absent.
    pub out: Option<PathBuf>,
    /// Optional SVG destination.
    pub plot: Option<PathBuf>,
    pub job: Job,
}
