//! Command-line experiment runner for `hsc-core`.
//!
//! Each subcommand evaluates one sweep, writes a CSV table (to a file or
//! standard output), a `<out>.meta.toml` record of the resolved settings and
//! amplitudes, and optionally an SVG plot. Exit status is 0 on success,
//! 1 when a point fails numerically and 2 for usage errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

pub mod config;
pub mod experiments;
pub mod grid;
pub mod plot;

use config::{Config, Experiment, GridValue, Job, RawConfig};
use experiments::Point;
use plot::{Figure, Panel, Series};

/// Mean photon numbers refer to the squeezed-cat mode alone.
pub const NBAR_CONVENTION: &str = "mean photon number of the even squeezed-cat mode; the polarization photon is not counted";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hsc", version, about = "Hybrid squeezed-cat qubit experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Heralding probability of the hybrid entangled state against transmittance.
    GenSweep(GenSweepArgs),
    /// Squeezing that maximizes the hybrid Bell measurement at fixed n̄.
    BellOptimal(BellOptimalArgs),
    /// Loss compensation success, hybrid against squeezed-cat code.
    LossComp(LossCompArgs),
    /// Codeword properties at given amplitudes.
    StateInfo(StateInfoArgs),
    /// Runs the experiment named by `experiment` in a config file.
    Run(RunArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// TOML file with default values; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Fock cutoff per bosonic mode.
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Extra levels used while exponentiating generators.
    #[arg(long)]
    pub guard: Option<usize>,
    /// Largest probability allowed beyond the cutoff.
    #[arg(long)]
    pub tail_tol: Option<f64>,
    /// CSV path; standard output if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// SVG plot path.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GenSweepArgs {
    #[command(flatten)]
    pub common: Common,
    /// Mean photon number fixing α_i.
    #[arg(long)]
    pub nbar: Option<String>,
    /// Squeezing values, e.g. `0,0.25,0.5`.
    #[arg(long)]
    pub xi: Option<String>,
    /// Transmittances, e.g. `0.05:0.95:0.05`.
    #[arg(long)]
    pub t: Option<String>,
    /// Whether n̄ fixes the input cat (`initial`) or the output cat (`final`).
    #[arg(long)]
    pub nbar_variant: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct BellOptimalArgs {
    #[command(flatten)]
    pub common: Common,
    /// Mean photon numbers.
    #[arg(long)]
    pub nbar: Option<String>,
    /// Squeezing grid searched at each n̄.
    #[arg(long)]
    pub xi_grid: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct LossCompArgs {
    #[command(flatten)]
    pub common: Common,
    /// Mean photon numbers.
    #[arg(long)]
    pub nbar: Option<String>,
    /// Codes to compare: `hsc`, `sc`.
    #[arg(long)]
    pub codes: Option<String>,
    /// Transmissivities.
    #[arg(long)]
    pub eta: Option<String>,
    /// Squeezing grid searched at each point.
    #[arg(long)]
    pub xi_grid: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct StateInfoArgs {
    #[command(flatten)]
    pub common: Common,
    /// Mean photon numbers of the even codeword.
    #[arg(long, conflicts_with = "alpha")]
    pub nbar: Option<String>,
    /// Amplitudes.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Squeezing values.
    #[arg(long)]
    pub xi: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub common: Common,
}

fn text(v: &Option<String>) -> Option<GridValue> {
    v.clone().map(GridValue::Text)
}

impl Common {
    fn raw(&self) -> RawConfig {
        RawConfig {
            cutoff: self.cutoff,
            guard: self.guard,
            tail_tol: self.tail_tol,
            out: self.out.clone(),
            plot: self.plot.clone(),
            ..Default::default()
        }
    }
}

impl Command {
    /// Flags as a raw config plus the experiment they select.
    fn flags(&self) -> (Option<Experiment>, &Common, RawConfig) {
        match self {
            Command::GenSweep(a) => (
                Some(Experiment::GenSweep),
                &a.common,
                RawConfig {
                    nbar: text(&a.nbar),
                    xi: text(&a.xi),
                    t: text(&a.t),
                    nbar_variant: a.nbar_variant.clone(),
                    ..a.common.raw()
                },
            ),
            Command::BellOptimal(a) => (
                Some(Experiment::BellOptimal),
                &a.common,
                RawConfig { nbar: text(&a.nbar), xi_grid: text(&a.xi_grid), ..a.common.raw() },
            ),
            Command::LossComp(a) => (
                Some(Experiment::LossComp),
                &a.common,
                RawConfig {
                    nbar: text(&a.nbar),
                    codes: a.codes.clone().map(config::CodeList::Text),
                    eta: text(&a.eta),
                    xi_grid: text(&a.xi_grid),
                    ..a.common.raw()
                },
            ),
            Command::StateInfo(a) => (
                Some(Experiment::StateInfo),
                &a.common,
                RawConfig { nbar: text(&a.nbar), alpha: text(&a.alpha), xi: text(&a.xi), ..a.common.raw() },
            ),
            Command::Run(a) => (None, &a.common, a.common.raw()),
        }
    }

    /// Merges flags over the config file and validates the result.
    pub fn resolve(&self) -> Result<Config, CliError> {
        let (experiment, common, flags) = self.flags();
        let file = match &common.config {
            Some(p) => RawConfig::from_file(p)?,
            None if experiment.is_none() => return Err(CliError::Usage("run needs --config".into())),
            None => RawConfig::default(),
        };
        let merged = flags.over(file);
        let experiment = experiment
            .or(merged.experiment)
            .ok_or_else(|| CliError::Usage("config file must name an `experiment`".into()))?;
        merged.resolve(experiment)
    }
}

/// Settings and amplitudes written next to the CSV.
#[derive(Debug, Serialize)]
struct Meta {
    experiment: &'static str,
    version: &'static str,
    nbar_convention: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    nbar_variant: Option<&'static str>,
    cutoff: usize,
    guard: usize,
    tail_tol: f64,
    rows: Vec<MetaRow>,
}

#[derive(Debug, Default, Serialize)]
struct MetaRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    nbar: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    code: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<f64>,
    xi: f64,
    alpha: f64,
    status: String,
}

/// Rendered outputs of one run.
#[derive(Debug)]
pub struct Rendered {
    pub csv: Vec<u8>,
    pub meta: String,
    pub figure: Figure,
    /// `(point, error)` for every spoiled row.
    pub problems: Vec<(String, hsc_core::Error)>,
}

fn status(e: &Option<hsc_core::Error>) -> String {
    match e {
        None => "ok".into(),
        Some(hsc_core::Error::InfeasibleTarget { .. }) => "infeasible".into(),
        Some(e) => format!("failed: {e}"),
    }
}

fn table<R: Serialize>(points: &[Point<R>]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for p in points {
        w.serialize(&p.row)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.into_error()))
}

/// Evaluates a validated config.
pub fn evaluate(cfg: &Config) -> Result<Rendered, CliError> {
    let (cutoff, opts) = (cfg.cutoff, cfg.opts);
    let mut problems = Vec::new();
    let mut rows = Vec::new();
    let mut variant = None;
    let (csv, figure) = match &cfg.job {
        Job::GenSweep { nbar, xi, t, variant: v } => {
            variant = Some(match v {
                hsc_core::generation::NbarVariant::Initial => "initial",
                hsc_core::generation::NbarVariant::Final => "final",
            });
            let pts = experiments::gen_sweep(*nbar, xi, t, *v, cutoff, opts);
            for p in &pts {
                if let Some(e) = &p.error {
                    problems.push((format!("t={} xi={}", p.row.t, p.row.xi), e.clone()));
                }
                rows.push(MetaRow {
                    nbar: Some(*nbar),
                    t: Some(p.row.t),
                    xi: p.row.xi,
                    alpha: p.row.alpha_i,
                    status: status(&p.error),
                    ..Default::default()
                });
            }
            let series = xi
                .iter()
                .map(|&x| Series {
                    label: format!("ξ = {x}"),
                    points: pts.iter().filter(|p| p.row.xi == x).map(|p| (p.row.t, p.row.p_total)).collect(),
                })
                .collect();
            let fig = Figure {
                title: format!("Heralding probability, n̄ = {nbar}"),
                panels: vec![Panel { x_label: "t".into(), y_label: "P_total".into(), series }],
            };
            (table(&pts)?, fig)
        }
        Job::BellOptimal { nbar, xi_grid } => {
            let pts = experiments::bell_optimal(nbar, xi_grid, cutoff, opts);
            for p in &pts {
                if let Some(e) = &p.error {
                    problems.push((format!("nbar={}", p.row.nbar), e.clone()));
                }
                rows.push(MetaRow {
                    nbar: Some(p.row.nbar),
                    xi: p.row.xi_star,
                    alpha: p.row.alpha,
                    status: status(&p.error),
                    ..Default::default()
                });
            }
            let line = |f: fn(&experiments::BellOptimalRow) -> f64, label: &str| Series {
                label: label.into(),
                points: pts.iter().map(|p| (p.row.nbar, f(&p.row))).collect(),
            };
            let fig = Figure {
                title: "Optimal squeezing for the hybrid Bell measurement".into(),
                panels: vec![
                    Panel { x_label: "n̄".into(), y_label: "ξ*".into(), series: vec![line(|r| r.xi_star, "ξ*")] },
                    Panel { x_label: "n̄".into(), y_label: "P*".into(), series: vec![line(|r| r.p_star, "P*")] },
                ],
            };
            (table(&pts)?, fig)
        }
        Job::LossComp { nbar, codes, eta, xi_grid } => {
            let pts = experiments::loss_comp(nbar, codes, eta, xi_grid, cutoff, opts);
            for p in &pts {
                if let Some(e) = &p.error {
                    problems.push((format!("nbar={} code={} eta={}", p.row.nbar, p.row.code, p.row.eta), e.clone()));
                }
                rows.push(MetaRow {
                    nbar: Some(p.row.nbar),
                    code: Some(p.row.code),
                    eta: Some(p.row.eta),
                    xi: p.row.xi_star,
                    alpha: p.row.alpha,
                    status: status(&p.error),
                    ..Default::default()
                });
            }
            let mut series = Vec::new();
            for c in codes {
                for &e in eta {
                    series.push(Series {
                        label: format!("{} η = {e}", c.name()),
                        points: pts
                            .iter()
                            .filter(|p| p.row.code == c.name() && p.row.eta == e)
                            .map(|p| (p.row.nbar, p.row.p_success))
                            .collect(),
                    });
                }
            }
            let fig = Figure {
                title: "Loss compensation success".into(),
                panels: vec![Panel { x_label: "n̄".into(), y_label: "P_success".into(), series }],
            };
            (table(&pts)?, fig)
        }
        Job::StateInfo { amplitude, xi } => {
            let pts = experiments::state_info(amplitude, xi, cutoff, opts);
            for p in &pts {
                if let Some(e) = &p.error {
                    problems.push((format!("alpha={} nbar={} xi={}", p.row.alpha, p.row.nbar, p.row.xi), e.clone()));
                }
                rows.push(MetaRow {
                    nbar: Some(p.row.nbar),
                    xi: p.row.xi,
                    alpha: p.row.alpha,
                    status: status(&p.error),
                    ..Default::default()
                });
            }
            let series = xi
                .iter()
                .map(|&x| Series {
                    label: format!("ξ = {x}"),
                    points: pts.iter().filter(|p| p.row.xi == x).map(|p| (p.row.alpha, p.row.nbar)).collect(),
                })
                .collect();
            let fig = Figure {
                title: "Mean photon number of the even codeword".into(),
                panels: vec![Panel { x_label: "α".into(), y_label: "n̄".into(), series }],
            };
            (table(&pts)?, fig)
        }
    };
    let meta = Meta {
        experiment: cfg.experiment.name(),
        version: env!("CARGO_PKG_VERSION"),
        nbar_convention: NBAR_CONVENTION,
        nbar_variant: variant,
        cutoff,
        guard: opts.guard,
        tail_tol: opts.tail_tol,
        rows,
    };
    let meta = toml::to_string(&meta).map_err(|e| CliError::Numerical(format!("metadata: {e}")))?;
    Ok(Rendered { csv, meta, figure, problems })
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

/// `<out>.meta.toml`.
pub fn meta_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.toml");
    PathBuf::from(s)
}

/// Parses, evaluates and writes; returns the process status.
pub fn execute(command: &Command) -> Result<(), CliError> {
    let cfg = command.resolve()?;
    let r = evaluate(&cfg)?;
    match &cfg.out {
        Some(path) => {
            write_atomic(path, &r.csv)?;
            write_atomic(&meta_path(path), r.meta.as_bytes())?;
        }
        None => std::io::stdout().write_all(&r.csv)?,
    }
    if let Some(path) = &cfg.plot {
        write_atomic(path, r.figure.to_svg().as_bytes())?;
    }
    let mut failed = 0;
    for (point, e) in &r.problems {
        let kind = if matches!(e, hsc_core::Error::InfeasibleTarget { .. }) { "flagged" } else { "failed" };
        eprintln!("hsc: {kind} {point}: {e}");
        if kind == "failed" {
            failed += 1;
        }
    }
    if failed > 0 {
        return Err(CliError::Numerical(format!("{failed} point(s) failed; their rows hold NaN")));
    }
    Ok(())
}

/// Entry point shared by the binary and the tests.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hsc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
