use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use oneshot_qit::cli::argv_from_document;
use oneshot_qit::cq::CQState;
use oneshot_qit::random::random_cq_state;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tempfile::TempDir;

struct Files {
    _dir: TempDir,
    bitpair: PathBuf,
    antipodal: PathBuf,
    quantum: PathBuf,
}

fn files() -> Files {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, s: &CQState| {
        let path = dir.path().join(name);
        std::fs::write(&path, s.to_json()).unwrap();
        path
    };
    let bitpair = write("bitpair.json", &CQState::uniform_bit());
    let antipodal = write("antipodal.json", &CQState::antipodal_bit());
    let quantum = write("quantum.json", &random_cq_state(3, 2, &mut ChaCha8Rng::seed_from_u64(5)));
    Files { _dir: dir, bitpair, antipodal, quantum }
}

fn run<S: AsRef<std::ffi::OsStr>>(args: &[S]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oneshot-qit")).args(args).output().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn simulate_bit_pair_exact() {
    let f = files();
    let out = run(&["simulate", "--task", "pa", "--state", p(&f.bitpair), "--size", "2", "--method", "exact"]);
    let doc = json(&out);
    assert!(out.stderr.is_empty());
    assert_eq!(doc["schema"], "oneshot-qit/1");
    assert_eq!(doc["log_base"], 2);
    assert_eq!(doc["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(doc["seed"], 0);
    assert_eq!(doc["params"]["size"], 2);
    assert!((doc["result"]["value"].as_f64().unwrap() - 0.25).abs() < 1e-12);
}

#[test]
fn hypothesis_testing_divergence_of_identical_files() {
    let f = files();
    let out =
        run(&["divergence", "--kind", "dh", "--state-a", p(&f.quantum), "--state-b", p(&f.quantum), "--eps", "0.3"]);
    let v = json(&out)["result"]["value_bits"].as_f64().unwrap();
    assert!((v + 0.7f64.log2()).abs() < 1e-9, "{v}");
}

#[test]
fn domain_violation_exits_2_with_diagnostic() {
    let f = files();
    let out = run(&[
        "bounds",
        "--task",
        "covering",
        "--state",
        p(&f.bitpair),
        "--eps",
        "0.3",
        "--delta",
        "0.12",
        "--c",
        "0.05",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("delta must be < eps/3"));
}

#[test]
fn unknown_flag_and_missing_file_exit_2() {
    let f = files();
    let out = run(&["simulate", "--task", "pa", "--state", p(&f.bitpair), "--size", "2", "--bogus", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());

    let missing = f.bitpair.with_file_name("nope.json");
    let out = run(&["search", "--task", "pa", "--state", p(&missing), "--eps", "0.3", "--cap", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.json"));
}

#[test]
fn help_documents_csv_columns() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("schema") && text.contains("param."), "{text}");
}

fn round_trip_commands(f: &Files) -> Vec<Vec<String>> {
    let a = p(&f.quantum).to_string();
    let b = p(&f.antipodal).to_string();
    let mut cmds: Vec<Vec<String>> = Vec::new();
    let mut push = |xs: &[&str]| cmds.push(xs.iter().map(|s| s.to_string()).collect());
    for kind in ["ds", "dh"] {
        push(&["divergence", "--kind", kind, "--state-a", &a, "--state-b", &a, "--eps", "0.25"]);
    }
    for kind in ["d2", "kl", "var"] {
        push(&["divergence", "--kind", kind, "--state-a", &a, "--state-b", &a]);
    }
    push(&["rates", "--task", "pa", "--state", &a, "--eps", "0.2", "--n-list", "10,100"]);
    push(&["rates", "--task", "covering", "--state", &b, "--eps", "0.2", "--n", "50"]);
    push(&["bounds", "--task", "pa", "--state", &a, "--eps", "0.4", "--delta", "0.1", "--c", "0.05"]);
    push(&["bounds", "--task", "covering", "--state", &b, "--eps", "0.3", "--delta", "0.09", "--c", "0.04"]);
    push(&["simulate", "--task", "covering", "--state", &a, "--size", "3", "--method", "exact"]);
    push(&[
        "simulate",
        "--task",
        "pa",
        "--state",
        &a,
        "--size",
        "2",
        "--method",
        "mc",
        "--samples",
        "2000",
        "--seed",
        "9",
        "--workers",
        "3",
    ]);
    push(&["search", "--task", "pa", "--state", &a, "--eps", "0.3", "--cap", "4"]);
    push(&["search", "--task", "covering", "--state", &b, "--eps", "0.3", "--cap", "4"]);
    push(&["sweep", "--regime", "second", "--p", "0.3,0.7", "--q", "0.5,0.5", "--eps", "0.2", "--n-list", "10,40"]);
    push(&["sweep", "--regime", "moderate", "--p", "0.3,0.7", "--q", "0.5,0.5", "--t", "0.3", "--n-list", "16,64"]);
    cmds
}

#[test]
fn json_documents_rerun_to_identical_results() {
    let f = files();
    for cmd in round_trip_commands(&f) {
        let first = json(&run(&cmd));
        let argv = argv_from_document(&first).unwrap();
        let second = json(&run(&argv[1..]));
        assert_eq!(first["params"], second["params"], "{cmd:?}");
        assert_eq!(first["result"], second["result"], "{cmd:?} rebuilt as {argv:?}");
    }
}

#[test]
fn csv_output_has_stable_header_and_one_row_per_record() {
    let f = files();
    let out =
        run(&["--format", "csv", "search", "--task", "pa", "--state", p(&f.bitpair), "--eps", "0.3", "--cap", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(&header[..3], ["schema", "version", "log_base"]);
    assert!(header.iter().any(|h| h == "param.cap"));
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert!(!rows.is_empty());
    for r in &rows {
        assert_eq!(&r[0], "oneshot-qit/1");
        assert_eq!(&r[2], "2");
    }

    let out = run(&[
        "--format",
        "csv",
        "sweep",
        "--regime",
        "moderate",
        "--p",
        "0.3,0.7",
        "--q",
        "0.5,0.5",
        "--t",
        "0.3",
        "--n-list",
        "16,64,256",
    ]);
    let rows = csv::Reader::from_reader(out.stdout.as_slice()).records().count();
    assert_eq!(rows, 6, "both directions for three blocklengths");
}

#[test]
fn quiet_runs_keep_stderr_empty() {
    let f = files();
    for cmd in round_trip_commands(&f) {
        let mut args = vec!["--quiet".to_string()];
        args.extend(cmd);
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stderr.is_empty(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn warnings_go_to_stderr_and_quiet_silences_them() {
    let f = files();
    let args = ["search", "--task", "covering", "--state", p(&f.antipodal), "--eps", "0.1", "--cap", "2"];
    let loud = run(&args);
    let doc = json(&loud);
    assert!(doc["result"]["m"].is_null());
    assert!(String::from_utf8_lossy(&loud.stderr).contains("warning: no codebook size up to 2"));

    let mut quiet_args = vec!["--quiet"];
    quiet_args.extend(args);
    let quiet = run(&quiet_args);
    assert!(quiet.stderr.is_empty());
    assert_eq!(quiet.stdout, loud.stdout);
}
