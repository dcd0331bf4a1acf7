use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use specidx_cli::RunConfig;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_specidx"))
}

fn run_in(dir: &Path, args: &[&str], threads: Option<&str>) -> Output {
    let mut c = bin();
    c.current_dir(dir).args(args);
    match threads {
        Some(t) => c.env("SPECIDX_THREADS", t),
        None => c.env_remove("SPECIDX_THREADS"),
    };
    c.output().expect("binary runs")
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Integer and text fields must match exactly, floats to a relative 1e-9.
fn assert_csv_matches(got: &str, want: &str) {
    let got: Vec<&str> = got.lines().collect();
    let want: Vec<&str> = want.lines().collect();
    assert_eq!(got.len(), want.len());
    assert_eq!(got[0], want[0], "header");
    for (g, w) in got.iter().zip(&want).skip(1) {
        let gf: Vec<&str> = g.split(',').collect();
        let wf: Vec<&str> = w.split(',').collect();
        assert_eq!(gf.len(), wf.len());
        for (a, b) in gf.iter().zip(&wf) {
            let float = |s: &str| if s.contains('e') { s.parse::<f64>().ok() } else { None };
            match (float(a), float(b)) {
                (Some(x), Some(y)) => assert!((x - y).abs() <= 1e-9 * y.abs().max(1e-12), "{g} vs {w}"),
                _ => assert_eq!(a, b, "{g} vs {w}"),
            }
        }
    }
}

const XI_ARGS: [&str; 15] = [
    "xi-curve",
    "--potential",
    "square-well",
    "--depth",
    "4",
    "--half-width",
    "1.5",
    "--lam-min",
    "0.1",
    "--lam-max",
    "10",
    "--npoints",
    "8",
    "--nquad",
    "32",
];

#[test]
fn xi_curve_matches_golden() {
    let dir = TempDir::new().unwrap();
    let mut args = XI_ARGS.to_vec();
    args.extend(["--output", "out.csv"]);
    let out = run_in(dir.path(), &args, None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let got = fs::read_to_string(dir.path().join("out.csv")).unwrap();
    assert_csv_matches(&got, &fs::read_to_string(golden("xi_square_well.csv")).unwrap());

    let side: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("out.json")).unwrap()).unwrap();
    let jumps = side["jumps"].as_array().unwrap();
    assert_eq!(jumps.len(), 2);
    for j in jumps {
        assert_eq!(j["right"].as_i64().unwrap() - j["left"].as_i64().unwrap(), 1);
        assert!(j["hi"].as_f64().unwrap() - j["lo"].as_f64().unwrap() <= 1.0001e-4);
    }
    assert_eq!(side["bound_violations"].as_array().unwrap().len(), 0);
}

#[test]
fn krein_demo_matches_golden() {
    let dir = TempDir::new().unwrap();
    let args = ["krein-demo", "--lam-min", "0.2", "--lam-max", "0.8", "--npoints", "3", "--output", "k.csv"];
    let out = run_in(dir.path(), &args, None);
    assert!(out.status.success());
    let got = fs::read_to_string(dir.path().join("k.csv")).unwrap();
    assert_csv_matches(&got, &fs::read_to_string(golden("krein.csv")).unwrap());
    let side: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("k.json")).unwrap()).unwrap();
    assert!(side["max_one_plus_a0"].as_f64().unwrap() < 1e-3);
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let mut args = XI_ARGS.to_vec();
    args.extend(["--output", "out.csv"]);
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    assert!(run_in(a.path(), &args, Some("1")).status.success());
    assert!(run_in(b.path(), &args, Some("4")).status.success());
    for f in ["out.csv", "out.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn flow_is_deterministic_and_agrees_with_xi() {
    let args = ["flow", "--npoints", "4", "--output", "flow.csv"];
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    assert!(run_in(a.path(), &args, Some("1")).status.success());
    assert!(run_in(b.path(), &args, Some("3")).status.success());
    for f in ["flow.csv", "flow.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    let side: serde_json::Value = serde_json::from_str(&fs::read_to_string(a.path().join("flow.json")).unwrap()).unwrap();
    let mu = side["mu_minus_one"].as_i64().unwrap();
    assert_eq!(side["xi_at_lam0"].as_i64(), Some(-mu));
    assert_eq!(mu, 2);
    let csv = fs::read_to_string(a.path().join("flow.csv")).unwrap();
    assert!(csv.starts_with("lambda,phase_1,phase_2,crossings_so_far\n"));
    let last: i64 = csv.lines().last().unwrap().rsplit(',').next().unwrap().parse().unwrap();
    assert_eq!(last, -mu);
}

#[test]
fn bs_spectrum_lists_both_operators() {
    let dir = TempDir::new().unwrap();
    let args = ["bs-spectrum", "--npoints", "2", "--nquad", "32", "--output", "s.csv"];
    assert!(run_in(dir.path(), &args, None).status.success());
    let csv = fs::read_to_string(dir.path().join("s.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    let dim = rows.iter().filter(|r| r.contains(",A0,")).count() / 2;
    assert!(dim >= 32);
    assert_eq!(rows.len(), 2 * 2 * dim);
}

#[test]
fn config_round_trips() {
    let dir = TempDir::new().unwrap();
    let args = ["flow", "--potential", "exponential", "--gamma", "2", "--lam-min", "0.3", "--seed", "9", "--print-config"];
    let out = run_in(dir.path(), &args, None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let cfg: RunConfig = serde_json::from_str(&text).unwrap();
    assert_eq!(cfg.seed, 9);
    assert_eq!(cfg.lam_window.min, 0.3);
    fs::write(dir.path().join("c.json"), &text).unwrap();
    let again = run_in(dir.path(), &["flow", "--config", "c.json", "--print-config"], None);
    assert_eq!(String::from_utf8(again.stdout).unwrap(), text);
    assert_eq!(serde_json::from_str::<RunConfig>(&cfg.to_json()).unwrap(), cfg);
}

#[test]
fn flags_override_config_file() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("c.json"), RunConfig::default().to_json()).unwrap();
    let out = run_in(dir.path(), &["xi-curve", "--config", "c.json", "--nquad", "48", "--print-config"], None);
    let cfg: RunConfig = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cfg.nquad, 48);
    assert_eq!(cfg.lam_window, RunConfig::default().lam_window);
}

#[test]
fn custom_table_is_read_from_csv() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("v.csv"), "x,v\n-1,0\n0,-2\n1,0\n").unwrap();
    let out = run_in(
        dir.path(),
        &["xi-curve", "--potential", "custom-table", "--table", "v.csv", "--npoints", "3", "--print-config"],
        None,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let cfg: RunConfig = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        cfg.potential,
        specidx::potential::BuiltinPotential::CustomTable {
            points: vec![(-1.0, 0.0), (0.0, -2.0), (1.0, 0.0)]
        }
    );
}

#[test]
fn configuration_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("bad.json"), "{ not json").unwrap();
    let cases: [&[&str]; 7] = [
        &["xi-curve", "--unknown-flag"],
        &["xi-curve", "--lam-min", "-1"],
        &["xi-curve", "--lam-min", "5", "--lam-max", "1"],
        &["xi-curve", "--nquad", "4"],
        &["flow", "--potential", "zero", "--depth", "3"],
        &["krein-demo", "--lam-max", "2"],
        &["xi-curve", "--config", "bad.json"],
    ];
    for args in cases {
        let out = run_in(dir.path(), args, None);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let out = run_in(dir.path(), &["xi-curve", "--npoints", "2"], Some("zero"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_3() {
    let dir = TempDir::new().unwrap();
    let args = ["flow", "--potential", "square-well", "--depth", "400", "--half-width", "3"];
    let out = run_in(dir.path(), &args, None);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("numerical failure"));
}

#[test]
fn negative_control_fails_validation() {
    let dir = TempDir::new().unwrap();
    let out = run_in(
        dir.path(),
        &["validate", "--criteria", "2", "--negative-control", "--output", "r.json"],
        None,
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("criterion is 2 (resolvent identity)"));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["first_failure"], 2);
    assert_eq!(report["passed"], 0);
}

#[test]
fn validate_subset_passes() {
    let dir = TempDir::new().unwrap();
    let out = run_in(dir.path(), &["validate", "--criteria", "2,9", "--output", "r.json"], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], 2);
    assert!(report["first_failure"].is_null());
    let unknown = run_in(dir.path(), &["validate", "--criteria", "99"], None);
    assert_eq!(unknown.status.code(), Some(2));
}
