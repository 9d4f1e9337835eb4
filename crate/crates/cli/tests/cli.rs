use furstenberg_cli::Report;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], config: Option<&str>, dir: &Path) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_furstenberg"));
    cmd.args(args).arg("--out").arg(dir.join("out"));
    if let Some(text) = config {
        let path = dir.join("run.toml");
        std::fs::write(&path, text).unwrap();
        cmd.arg("--config").arg(path);
    }
    cmd.output().unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join("out").join(name)).unwrap()
}

#[test]
fn geometry_suite_writes_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&["geometry", "--paths", "0.05"], None, tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let csv = read(tmp.path(), "summary.csv");
    assert!(csv.starts_with("check_id,paper_ref,lhs,rhs,tolerance,pass,runtime_ms\n"));
    assert!(csv.contains("geometry.cocycle_additivity,AC01,"));
    assert!(read(tmp.path(), "geometry.csv").starts_with("experiment,quantity,value\n"));

    let report = Report::from_json(&read(tmp.path(), "summary.json")).unwrap();
    assert_eq!(report.to_csv(), csv);
    assert!(report.all_pass());
}

#[test]
fn bad_config_names_the_field() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&["geometry"], Some("[renewal]\npaths = many\n"), tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("renewal.paths"));

    let out = run(&["geometry"], Some("[general]\nmeasure = no-such-measure\n"), tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("general.measure"));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(run(&["nonsense"], None, tmp.path()).status.code(), Some(2));
}

#[test]
fn failing_check_exits_with_one() {
    let tmp = tempfile::tempdir().unwrap();
    // No Bernoulli transform reaches 1 along the scan.
    let out = run(&["fourier", "--paths", "0.01"], Some("[fourier]\npisot_threshold = 1.0\n"), tmp.path());
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.lines().any(|l| l.starts_with("FAIL") && l.contains("fourier.pisot_no_decay")));
}

#[test]
fn identical_runs_give_identical_data() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["stationary", "--paths", "0.05", "--seed", "17"];
    for dir in [a.path(), b.path()] {
        assert_eq!(run(&args, None, dir).status.code(), Some(0));
    }
    for name in ["stationary.csv", "stationary_ulam.csv"] {
        assert_eq!(read(a.path(), name), read(b.path(), name), "{name}");
    }
    let c = tempfile::tempdir().unwrap();
    run(&["stationary", "--paths", "0.05", "--seed", "18"], None, c.path());
    assert_ne!(read(a.path(), "stationary.csv"), read(c.path(), "stationary.csv"));
}
