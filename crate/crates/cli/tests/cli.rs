use std::process::{Command, Output};

fn treelaws(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treelaws"))
        .args(args)
        .env_remove("TREELAWS_OUT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn laws_eval_prints_a_number() {
    let o = treelaws(&["laws", "eval", "duration-laplace", "2"]);
    assert_eq!(o.status.code(), Some(0));
    // N_0(1 - e^{-2 sigma}) = 1
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 1.0).abs() < 1e-15);
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(treelaws(&["laws", "eval", "pair-laplace", "1"]).status.code(), Some(2));
    assert_eq!(treelaws(&["laws", "eval", "local-time-density", "-1"]).status.code(), Some(2));
    assert_eq!(treelaws(&["run", "--group", "nonsense"]).status.code(), Some(2));
    assert_eq!(treelaws(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn series_dump_has_exact_coefficients() {
    let o = treelaws(&["series", "dump", "--order", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,coef_f,coef_fplus");
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[2], "1,1/1,0/1 + 4/9*sqrt2");
    assert!(lines[3].starts_with("2,-1/6,"));
}

#[test]
fn series_check_passes() {
    let o = treelaws(&["series", "check", "--order", "10", "--product-max", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 failed"));
}

#[test]
fn run_writes_reports_to_env_dir() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_treelaws"))
        .args(["run", "--group", "closed-form"])
        .env("TREELAWS_OUT", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    for f in ["report.csv", "report.json", "report.sha256", "config.txt"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
}

#[test]
fn failing_check_exits_one() {
    // a tolerance that no Monte Carlo gate can meet
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = treelaws(&[
        "run", "--group", "mc-slow", "--out", out, "--set", "n_edges=50", "--set", "n_trees=100",
        "--set", "n_paths=100", "--set", "n_lamperti=5", "--set", "dt=0.01", "--set", "ks_tol=1e-9",
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn mc_csv_is_seeded() {
    let a = treelaws(&["mc", "stable", "--n", "5", "--seed", "3"]);
    let b = treelaws(&["mc", "stable", "--n", "5", "--seed", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    assert_eq!(out.lines().count(), 6);
    assert!(out.starts_with("value,law,seed\n"));
}
