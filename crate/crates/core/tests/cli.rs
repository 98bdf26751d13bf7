use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;
use std::time::{Duration, Instant};

use covmod::character::{Character, Phase};
use covmod::covariant::CovariantFunction;
use covmod::function::GroupFunction;
use covmod::group::{FiniteGroup, QuotientGroup, Subgroup};
use covmod::json::{self, CovariantJson, FunctionJson, GroupJson, SubgroupJson};
use num_complex::Complex64;

fn covmod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covmod")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

struct Z4Files {
    _dir: tempfile::TempDir,
    group: PathBuf,
    normal: PathBuf,
    f: PathBuf,
    psi: PathBuf,
}

/// `Z_4` with `N = {0, 2}`, `f = (1, 2, 3, 4)` and the covariant function
/// with section `(1, 2i)` for the sign character of `N`.
fn z4_files() -> Z4Files {
    let dir = tempfile::tempdir().unwrap();
    let g = Arc::new(FiniteGroup::cyclic(4).unwrap());
    let n = Subgroup::new(g.clone(), [0, 2]).unwrap();
    let sign = Character::from_fn(n.clone(), |s| Phase::new((s / 2) as i64, 2)).unwrap();
    let q = Arc::new(QuotientGroup::new(&n).unwrap());
    let psi =
        CovariantFunction::from_section(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)], sign, q).unwrap();
    let f = GroupFunction::new(g.clone(), (1..=4).map(|v| Complex64::new(v as f64, 0.0)).collect()).unwrap();
    Z4Files {
        group: write(dir.path(), "g.json", &json::to_string(&GroupJson::from_group(&g)).unwrap()),
        normal: write(dir.path(), "n.json", &json::to_string(&SubgroupJson::from_subgroup(&n)).unwrap()),
        f: write(dir.path(), "f.json", &json::to_string(&FunctionJson::from_function(&f)).unwrap()),
        psi: write(dir.path(), "psi.json", &json::to_string(&CovariantJson::from_covariant(&psi)).unwrap()),
        _dir: dir,
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_builtin_corpus_exits_zero_quickly() {
    let start = Instant::now();
    let out = covmod(&["verify", "--seed", "42", "--trials", "50"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(start.elapsed() < Duration::from_secs(60));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["seed"], 42);
    assert_eq!(report["passed"], true);
}

#[test]
fn verify_with_zero_tolerance_fails_and_lists_residuals() {
    let out = covmod(&["verify", "--seed", "42", "--trials", "5", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL"));
}

#[test]
fn verify_output_is_deterministic() {
    let a = covmod(&["verify", "--seed", "9", "--trials", "4"]);
    let b = covmod(&["verify", "--seed", "9", "--trials", "4"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn missing_and_unparseable_files_exit_two() {
    let out = covmod(&["verify", "--corpus", "/nonexistent/corpus.json"]);
    assert_eq!(out.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{not json");
    assert_eq!(covmod(&["verify", "--corpus", s(&bad)]).status.code(), Some(2));
    assert_eq!(covmod(&["group", "show", s(&bad)]).status.code(), Some(2));
}

#[test]
#[allow(clippy::excessive_precision)]
fn norm_of_the_one_two_i_section() {
    let z = z4_files();
    let out = covmod(&["norm", "--group", s(&z.group), "--p", "2", "--psi", s(&z.psi)]);
    assert_eq!(out.status.code(), Some(0));
    let value: f64 = stdout(&out).trim().parse().unwrap();
    assert_eq!(value, 2.2360679774997896);
    assert_eq!(value, 5f64.sqrt());
}

#[test]
fn conflicting_flags_are_usage_errors() {
    let z = z4_files();
    let out = covmod(&["norm", "--group", s(&z.group), "--p", "2", "--psi", s(&z.psi), "--f", s(&z.f)]);
    assert_eq!(out.status.code(), Some(2));
    let out = covmod(&[
        "txi",
        "--group",
        s(&z.group),
        "--normal",
        s(&z.normal),
        "--char",
        "1",
        "--char-file",
        s(&z.psi),
        "--f",
        s(&z.f),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn txi_then_modact_round_trip_through_files() {
    let z = z4_files();
    let chars = covmod(&["chars", "list", "--group", s(&z.group), "--normal", s(&z.normal)]);
    assert_eq!(chars.status.code(), Some(0));
    let listed: serde_json::Value = serde_json::from_str(&stdout(&chars)).unwrap();
    assert_eq!(listed["characters"].as_array().unwrap().len(), 2);

    // Character 1 is the sign character; T_xi f(x) = f(x) - f(x + 2).
    let out = covmod(&["txi", "--group", s(&z.group), "--normal", s(&z.normal), "--char", "1", "--f", s(&z.f)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let g = Arc::new(FiniteGroup::cyclic(4).unwrap());
    let psi = json::from_str::<CovariantJson>(&stdout(&out)).unwrap().to_covariant(&g).unwrap();
    let full: Vec<f64> = psi.to_full().values().iter().map(|z| z.re).collect();
    assert_eq!(full, vec![-2.0, -2.0, 2.0, 2.0]);

    let dir = tempfile::tempdir().unwrap();
    let psi_path = write(dir.path(), "txi.json", &stdout(&out));
    let out = covmod(&["modact", "--group", s(&z.group), "--f", s(&z.f), "--psi", s(&psi_path)]);
    assert_eq!(out.status.code(), Some(0));
    // Convolving with f = delta_0 + 2 delta_1 + 3 delta_2 + 4 delta_3 by hand.
    let expected: Vec<f64> = (0..4).map(|x| (0..4).map(|y| (y + 1) as f64 * full[(x + 4 - y) % 4]).sum()).collect();
    let out = json::from_str::<CovariantJson>(&stdout(&out)).unwrap().to_covariant(&g).unwrap();
    let got: Vec<f64> = out.to_full().values().iter().map(|z| z.re).collect();
    assert_eq!(got, expected);
}

#[test]
fn group_make_and_show() {
    let out = covmod(&["group", "make", "heisenberg", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "heis.json", &stdout(&out));
    let out = covmod(&["group", "show", s(&path)]);
    let summary: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(summary["order"], 27);
    assert_eq!(summary["abelian"], false);
    assert_eq!(summary["center"].as_array().unwrap().len(), 3);

    assert_eq!(covmod(&["group", "make", "weyl-heisenberg", "3", "4"]).status.code(), Some(2));
}

#[test]
fn invalid_thread_count_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_covmod"))
        .args(["group", "make", "cyclic", "3"])
        .env("COVMOD_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
