//! Experiment suites. Each experiment produces check rows plus data
//! quantities; experiments of a suite run in parallel and are merged in a
//! fixed order, so outputs depend only on the configuration.

mod fourier;
mod geometry;
mod renewal;
mod spectral;
mod stationary;
mod walk;

use crate::config::{ConfigInvalid, ExperimentConfig};
use crate::report::{CheckRow, Report};
use furstenberg::rng::SeedKey;
use furstenberg::walk::StepDistribution;
use rayon::prelude::*;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Geometry,
    Walk,
    Stationary,
    Fourier,
    Renewal,
    Spectral,
    All,
}

impl Suite {
    pub const MODULES: [Suite; 6] =
        [Suite::Geometry, Suite::Walk, Suite::Stationary, Suite::Fourier, Suite::Renewal, Suite::Spectral];

    pub fn name(self) -> &'static str {
        match self {
            Self::Geometry => "geometry",
            Self::Walk => "walk",
            Self::Stationary => "stationary",
            Self::Fourier => "fourier",
            Self::Renewal => "renewal",
            Self::Spectral => "spectral",
            Self::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::MODULES
            .into_iter()
            .chain([Self::All])
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

/// What one experiment hands back.
#[derive(Debug, Default)]
pub(crate) struct Outcome {
    pub rows: Vec<CheckRow>,
    /// `(quantity, value)` lines for the module data CSV.
    pub data: Vec<(String, f64)>,
    /// Extra tables written verbatim as `<name>.csv`.
    pub tables: Vec<(String, String)>,
}

impl Outcome {
    pub fn row(&mut self, row: CheckRow) -> &mut Self {
        self.rows.push(row);
        self
    }

    pub fn datum(&mut self, quantity: impl Into<String>, value: f64) -> &mut Self {
        self.data.push((quantity.into(), value));
        self
    }
}

type ExperimentFn<'a> = Box<dyn Fn() -> furstenberg::Result<Outcome> + Send + Sync + 'a>;

/// A named experiment with the criterion its checks belong to.
pub(crate) struct Experiment<'a> {
    pub id: &'static str,
    pub criterion: &'static str,
    pub run: ExperimentFn<'a>,
}

impl<'a> Experiment<'a> {
    pub fn new(
        id: &'static str,
        criterion: &'static str,
        run: impl Fn() -> furstenberg::Result<Outcome> + Send + Sync + 'a,
    ) -> Self {
        Self { id, criterion, run: Box::new(run) }
    }
}

/// Shared inputs of every suite.
pub(crate) struct Context<'a> {
    pub cfg: &'a ExperimentConfig,
    pub mu: StepDistribution,
}

impl Context<'_> {
    pub fn key(&self, module: &str, experiment: &str) -> SeedKey {
        SeedKey::derive(self.cfg.general.seed, module, experiment)
    }

    pub fn scaled(&self, n: usize) -> usize {
        self.cfg.scaled(n, 1)
    }
}

/// Result of running a suite: the check report, the data CSVs, and any
/// experiment errors (each also recorded as a failing check).
#[derive(Debug, Clone, Default)]
pub struct SuiteOutput {
    pub report: Report,
    /// `(file name, contents)`, in a fixed order.
    pub files: Vec<(String, String)>,
    pub errors: Vec<String>,
    /// `(criterion, wall milliseconds)` per experiment.
    pub timings: Vec<(&'static str, u64)>,
}

impl SuiteOutput {
    /// The outputs that must be reproducible: every data CSV verbatim and
    /// the report with its runtime column blanked.
    pub fn deterministic_files(&self) -> Vec<(String, String)> {
        let mut files = self.files.clone();
        files.push(("summary.csv".into(), self.report.to_csv_without_runtime()));
        files
    }
}

fn run_module(module: Suite, ctx: &Context) -> SuiteOutput {
    let experiments = match module {
        Suite::Geometry => geometry::experiments(ctx),
        Suite::Walk => walk::experiments(ctx),
        Suite::Stationary => stationary::experiments(ctx),
        Suite::Fourier => fourier::experiments(ctx),
        Suite::Renewal => renewal::experiments(ctx),
        Suite::Spectral => spectral::experiments(ctx),
        Suite::All => unreachable!("`all` is a union of modules"),
    };
    let results: Vec<(Result<Outcome, String>, u64)> = experiments
        .par_iter()
        .map(|e| {
            let start = Instant::now();
            let out = (e.run)().map_err(|err| format!("{}: {err}", e.id));
            (out, start.elapsed().as_millis() as u64)
        })
        .collect();

    let mut rows = Vec::new();
    let mut errors = Vec::new();
    let mut data = String::from("experiment,quantity,value\n");
    let mut files = Vec::new();
    let mut timings = Vec::new();
    for (e, (out, ms)) in experiments.iter().zip(results) {
        timings.push((e.criterion, ms));
        match out {
            Ok(out) => {
                rows.extend(out.rows.into_iter().map(|mut r| {
                    r.runtime_ms = ms;
                    r
                }));
                for (q, v) in out.data {
                    let _ = writeln!(data, "{},{q},{v:.16e}", e.id);
                }
                files.extend(out.tables.into_iter().map(|(name, body)| (format!("{name}.csv"), body)));
            }
            Err(msg) => {
                let mut row = CheckRow::failed(e.id, e.criterion);
                row.runtime_ms = ms;
                rows.push(row);
                errors.push(msg);
            }
        }
    }
    files.insert(0, (format!("{}.csv", module.name()), data));
    SuiteOutput { report: Report::new(rows), files, errors, timings }
}

fn run_modules(suite: Suite, ctx: &Context) -> SuiteOutput {
    let modules: Vec<Suite> = if suite == Suite::All { Suite::MODULES.to_vec() } else { vec![suite] };
    let outputs: Vec<SuiteOutput> = modules.par_iter().map(|&m| run_module(m, ctx)).collect();
    let mut merged = SuiteOutput::default();
    let mut reports = Vec::new();
    for out in outputs {
        reports.push(out.report);
        merged.files.extend(out.files);
        merged.errors.extend(out.errors);
        merged.timings.extend(out.timings);
    }
    merged.report = Report::merge(reports);
    merged
}

/// Wall-time budget in seconds per criterion.
const BUDGETS: [(&str, f64); 13] = [
    ("AC01", 60.0),
    ("AC02", 120.0),
    ("AC03", 120.0),
    ("AC04", 180.0),
    ("AC05", 180.0),
    ("AC06", 1.0),
    ("AC07", 180.0),
    ("AC08", 180.0),
    ("AC09", 300.0),
    ("AC10", 120.0),
    ("AC11", 180.0),
    ("AC12", 10.0),
    ("AC13", 60.0),
];

/// One `runtime.<criterion>` check per criterion that ran: the summed wall
/// time of its experiments against the budget.
fn budget_rows(timings: &[(&'static str, u64)]) -> Vec<CheckRow> {
    BUDGETS
        .iter()
        .filter_map(|&(criterion, budget)| {
            let ms: u64 = timings.iter().filter(|t| t.0 == criterion).map(|t| t.1).sum();
            timings.iter().any(|t| t.0 == criterion).then(|| {
                let mut row = CheckRow::below(&format!("runtime.{criterion}"), criterion, ms as f64 / 1000.0, budget);
                row.runtime_ms = ms;
                row
            })
        })
        .collect()
}

/// Run a suite and add a runtime check per criterion. For `all`, the module
/// suites are run a second time with the same configuration and every
/// deterministic output is compared byte for byte; the comparison and the
/// wall time of the first run are reported as additional checks. Timing rows
/// are left out of the comparison.
pub fn run_experiment(cfg: &ExperimentConfig, suite: Suite) -> Result<SuiteOutput, ConfigInvalid> {
    cfg.validate()?;
    let ctx = Context { cfg, mu: cfg.general.measure.build()? };
    let start = Instant::now();
    let mut out = run_modules(suite, &ctx);
    let elapsed = start.elapsed();
    let mut extra = budget_rows(&out.timings);
    if suite == Suite::All {
        let rerun_start = Instant::now();
        let rerun = run_modules(suite, &ctx);
        let rerun_ms = rerun_start.elapsed().as_millis() as u64;

        let first = out.deterministic_files();
        let second = rerun.deterministic_files();
        let differing = first.len().abs_diff(second.len())
            + first.iter().zip(&second).filter(|(a, b)| a != b).count();
        let mut identical = CheckRow::at_most("all.rerun_identical", "AC14", differing as f64, 0.0, 0.0);
        identical.runtime_ms = rerun_ms;
        let mut runtime = CheckRow::below("all.runtime_seconds", "AC14", elapsed.as_secs_f64(), 1800.0);
        runtime.runtime_ms = elapsed.as_millis() as u64;
        extra.extend([identical, runtime]);
    }
    out.report = Report::merge([out.report, Report::new(extra)]);
    Ok(out)
}

/// Burn-in for stationary sampling under `mu`, from a short Lyapunov pilot.
/// Walks with a tiny or negative exponent are clamped at `σ̂ = 0.05`.
pub(crate) fn pilot_burn_in(mu: &StepDistribution, key: SeedKey) -> usize {
    let pilot = furstenberg::walk::lyapunov_estimate(mu, 2_000, 64, key);
    furstenberg::stationary::default_burn_in(pilot.value.max(0.05))
}
