//! End-to-end tests of the `bosons` binary: exit codes, file parsing, and
//! byte-level determinism of reports.

use std::path::Path;
use std::process::{Command, Output};

fn bosons(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bosons"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(path: &Path, content: &str) {
    std::fs::write(path, content).unwrap();
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// Value of the first report row whose statistic matches.
fn stat_value(text: &str, statistic: &str) -> f64 {
    let line = text
        .lines()
        .find(|l| l.split_whitespace().next() == Some(statistic))
        .unwrap_or_else(|| panic!("row '{statistic}' missing in:\n{text}"));
    line.split_whitespace().nth(1).unwrap().parse().unwrap()
}

#[test]
fn entangle_product_state_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("product.symtensor");
    write(
        &file,
        "symtensor n=2 m=3 basis=orthonormal\n1 1 1 1e0 0e0\n",
    );
    let out = bosons(&["entangle", "--file", file.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let value = stat_value(&text, "entanglement");
    assert!(value.abs() < 1e-7, "E = {value}");
}

#[test]
fn entangle_balanced_basis_state_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("balanced.symtensor");
    write(&file, "symtensor n=2 m=2 basis=orthonormal\n1 2 1e0 0e0\n");
    let out = bosons(&["entangle", "--file", file.to_str().unwrap()]);
    assert!(out.status.success());
    let value = stat_value(&stdout(&out), "entanglement");
    assert!((value - 1.0).abs() < 1e-7, "E = {value}");
}

#[test]
fn entangle_rejects_malformed_file_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.symtensor");
    write(&file, "symtensor n=2 m=2 basis=orthonormal\n2 1 1e0 0e0\n");
    let out = bosons(&["entangle", "--file", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn entangle_requires_normalize_for_non_unit_input() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("scaled.symtensor");
    write(&file, "symtensor n=2 m=2 basis=orthonormal\n1 2 2e0 0e0\n");
    let out = bosons(&["entangle", "--file", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let out = bosons(&["entangle", "--file", file.to_str().unwrap(), "--normalize"]);
    assert!(out.status.success());
    let value = stat_value(&stdout(&out), "entanglement");
    assert!((value - 1.0).abs() < 1e-7);
}

#[test]
fn sample_csv_is_reproducible_byte_for_byte() {
    let args = [
        "sample", "--n", "2", "--m", "6", "--samples", "40", "--restarts", "8", "--seed", "7",
        "--format", "csv",
    ];
    let a = bosons(&args);
    let b = bosons(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("experiment,n,m,param,statistic,value,stderr,bound,verdict"));
}

#[test]
fn sample_csv_identical_across_thread_counts() {
    let base = [
        "sample", "--n", "2", "--m", "6", "--samples", "40", "--restarts", "8", "--format", "csv",
    ];
    let mut one = base.to_vec();
    one.extend(["--threads", "1"]);
    let mut four = base.to_vec();
    four.extend(["--threads", "4"]);
    let a = bosons(&one);
    let b = bosons(&four);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn table_reports_the_qubit_feasibility_onset() {
    let out = bosons(&["table", "--n", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("qubit_alpha8_onset_m"));
    assert!(text.contains("4.3e1"));
    assert!(text.contains("m > 42"));
}

#[test]
fn net_command_validates_cardinality_and_covering() {
    let out = bosons(&["net", "--n", "2", "--eps", "0.2", "--probes", "2000"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("cardinality"));
    assert!(text.contains("covering_failures"));
    assert!(text.contains("# overall: pass"));
}

#[test]
fn net_resource_guard_exits_4() {
    let out = bosons(&["net", "--n", "3", "--eps", "0.2", "--max-points", "100"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn net_cache_reused_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap().to_owned();
    let args = [
        "net", "--n", "2", "--eps", "0.3", "--probes", "500", "--net-cache-dir", &cache,
        "--format", "csv",
    ];
    let a = bosons(&args);
    assert!(a.status.success());
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(entries.len(), 1);
    let b = bosons(&args);
    assert!(b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn certify_small_run_passes() {
    let out = bosons(&[
        "certify", "--n", "2", "--m", "20", "--epsilon", "0.9", "--samples", "5", "--restarts",
        "8",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("contradictions"));
    assert!(text.contains("# overall: pass"));
}

#[test]
fn sphere_tail_mode() {
    let out = bosons(&[
        "tail", "--sphere-d", "4", "--epsilons", "0.3,0.5", "--samples", "4000",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("printed_bound"));
}

#[test]
fn boson_tail_requires_n_and_m() {
    let out = bosons(&["tail", "--epsilons", "0.5", "--samples", "10"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = bosons(&[
        "verify-schur", "--n", "2", "--m", "2", "--samples", "500", "--tensors", "2", "--format",
        "csv", "--output", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let content = std::fs::read_to_string(&path).unwrap();
    assert!(content.contains("schur_average"));
}
