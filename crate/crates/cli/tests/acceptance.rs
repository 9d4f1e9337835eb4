//! Full acceptance run at the default configuration. Prints one pass/fail line
//! per criterion, then the failing checks and experiment errors, if any. Runs
//! without the libtest harness so the lines are shown even when all pass.

use furstenberg_cli::{run_experiment, ExperimentConfig, Suite};
use std::collections::{BTreeMap, HashSet};

const CRITERIA: [(&str, &str); 14] = [
    ("AC01", "projective geometry identities"),
    ("AC02", "Lyapunov exponent consistency"),
    ("AC03", "stationary measure"),
    ("AC04", "Fourier coefficient decay"),
    ("AC05", "oscillatory integral decay"),
    ("AC06", "Pisot negative control"),
    ("AC07", "renewal limit"),
    ("AC08", "renewal regularity"),
    ("AC09", "residue processes"),
    ("AC10", "stopping identity"),
    ("AC11", "phase approximation"),
    ("AC12", "oscillatory bound"),
    ("AC13", "non-arithmeticity"),
    ("AC14", "determinism and total runtime"),
];

fn main() {
    let out = run_experiment(&ExperimentConfig::default(), Suite::All).expect("default configuration is valid");
    let rows = &out.report.rows;

    let mut seen = HashSet::new();
    let duplicates: Vec<&str> = rows.iter().filter(|r| !seen.insert(&r.check_id)).map(|r| r.check_id.as_str()).collect();

    let mut by_criterion: BTreeMap<&str, Vec<_>> = BTreeMap::new();
    for row in rows {
        by_criterion.entry(row.paper_ref.as_str()).or_default().push(row);
    }

    let mut failed = Vec::new();
    for (id, title) in CRITERIA {
        let checks = by_criterion.get(id).map(Vec::as_slice).unwrap_or(&[]);
        let pass = !checks.is_empty() && checks.iter().all(|r| r.pass);
        println!("{id} {} ({} checks) {title}", if pass { "pass" } else { "FAIL" }, checks.len());
        if !pass {
            failed.push(id);
        }
    }
    for row in rows.iter().filter(|r| !r.pass) {
        println!("  failing {}: lhs={:e} rhs={:e} tol={:e}", row.check_id, row.lhs, row.rhs, row.tolerance);
    }
    for err in &out.errors {
        println!("  error {err}");
    }

    let unknown: Vec<&str> = by_criterion.keys().copied().filter(|k| !CRITERIA.iter().any(|c| c.0 == *k)).collect();
    if !duplicates.is_empty() {
        println!("  duplicate check ids {duplicates:?}");
    }
    if !unknown.is_empty() {
        println!("  checks under unknown criteria {unknown:?}");
    }
    let ok = duplicates.is_empty() && unknown.is_empty() && out.errors.is_empty() && failed.is_empty();
    println!("acceptance: {}/{} criteria pass", CRITERIA.len() - failed.len(), CRITERIA.len());
    if !ok {
        std::process::exit(1);
    }
}
