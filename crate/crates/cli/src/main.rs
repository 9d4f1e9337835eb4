use clap::Parser;
use furstenberg_cli::{exit_code, run_experiment, write_outputs, ExperimentConfig, Suite, EXIT_CONFIG};
use std::path::PathBuf;
use std::process::ExitCode;

/// Run a suite of acceptance experiments and write CSV/JSON reports.
#[derive(Debug, Parser)]
#[command(name = "furstenberg", version)]
struct Cli {
    /// geometry, walk, stationary, fourier, renewal, spectral or all.
    suite: Suite,
    /// Configuration file (`[section]` headers and `key = value` lines).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory; overrides the config, defaults to `results`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Base seed; overrides the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Multiplier for every path and sample count (e.g. 0.1 for a quick run).
    #[arg(long)]
    paths: Option<f64>,
}

fn load(cli: &Cli) -> Result<ExperimentConfig, String> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            ExperimentConfig::parse(&text).map_err(|e| e.to_string())?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.general.seed = seed;
    }
    if let Some(scale) = cli.paths {
        cfg.general.paths_scale = scale;
    }
    if let Some(out) = &cli.out {
        cfg.general.out = Some(out.clone());
    }
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn init_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("FURSTENBERG_THREADS") else {
        return Ok(());
    };
    let n: usize = value.parse().ok().filter(|&n| n > 0).ok_or(format!("FURSTENBERG_THREADS={value:?} is not a positive integer"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match init_threads().and_then(|()| load(&cli)) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    let out = match run_experiment(&cfg, cli.suite) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    let dir = cfg.general.out.clone().unwrap_or_else(|| PathBuf::from("results"));
    if let Err(e) = write_outputs(&out, &dir) {
        eprintln!("error: cannot write {}: {e}", dir.display());
        return ExitCode::from(EXIT_CONFIG as u8);
    }
    for msg in &out.errors {
        eprintln!("experiment error: {msg}");
    }
    for row in &out.report.rows {
        let verdict = if row.pass { "pass" } else { "FAIL" };
        println!("{verdict}  {:<40} lhs={:.6e} rhs={:.6e} tol={:.3e}", row.check_id, row.lhs, row.rhs, row.tolerance);
    }
    ExitCode::from(exit_code(&out.report) as u8)
}
