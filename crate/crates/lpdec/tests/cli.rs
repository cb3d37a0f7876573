use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lpdec::{load_alist, read_csv};
use lpdec_core::{decode_standard, enumerate_codewords, DecoderInput, OutcomeKind};
use lpdec_oracles::ml_decode;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lpdec"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn field<'a>(report: &'a str, key: &str) -> &'a str {
    report
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
        .unwrap_or_else(|| panic!("no {key} in {report}"))
}

#[test]
fn noiseless_llr_file_decodes_to_zero_word() {
    let dir = tempfile::tempdir().unwrap();
    let llr = dir.path().join("llr.txt");
    std::fs::write(&llr, ["2.0"; 12].join(" ")).unwrap();
    let o = run(&[
        "decode",
        "--alist",
        fixture("pseudo12.alist").to_str().unwrap(),
        "--llr",
        llr.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let out = stdout(&o);
    assert_eq!(field(&out, "outcome"), "integral");
    assert_eq!(field(&out, "codeword"), "000");
    assert_eq!(field(&out, "iterations"), "1");
}

#[test]
fn stored_instance_ends_on_a_pseudo_codeword() {
    let alist = fixture("pseudo12.alist");
    let llr_path = fixture("pseudo12.llr");
    let o = run(&["decode", "--alist", alist.to_str().unwrap(), "--llr", llr_path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{o:?}");
    let out = stdout(&o);
    assert_eq!(field(&out, "outcome"), "fractional");
    assert_eq!(field(&out, "integer_coordinates"), "7 of 12");

    // the full relaxation agrees, and the optimum lies strictly below the ML cost
    let code = load_alist(&std::fs::read_to_string(&alist).unwrap()).unwrap();
    let llr: Vec<f64> = std::fs::read_to_string(&llr_path)
        .unwrap()
        .split_whitespace()
        .map(|t| t.parse().unwrap())
        .collect();
    let full = decode_standard(&DecoderInput::new(&code, llr.clone()).unwrap()).unwrap();
    assert_eq!(full.kind, OutcomeKind::Fractional);
    let objective: f64 = field(&out, "objective").parse().unwrap();
    assert!((objective - full.objective).abs() <= 1e-5 * (1.0 + objective.abs()));
    let (ml, _) = ml_decode(&enumerate_codewords(&code).unwrap(), &llr);
    assert!(full.objective < ml - 1e-6);
}

#[test]
fn missing_code_source_is_a_usage_error() {
    let o = run(&["decode", "--snr-db", "1.0", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--alist"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let o = run(&["decode", "--bogus"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn conflicting_code_sources_are_rejected() {
    let o = run(&["inspect", "--alist", "x", "--random", "12,3,4"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bad_alist_exits_one_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.alist");
    std::fs::write(&path, "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 9\n").unwrap();
    let o = run(&["inspect", "--alist", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 9"));
}

#[test]
fn help_lists_every_flag() {
    let o = run(&["experiment", "--help"]);
    assert_eq!(o.status.code(), Some(0));
    let help = stdout(&o);
    for flag in [
        "--alist", "--random", "--snr-db", "--channel", "--variant", "--cmax", "--trials", "--seed", "--jobs", "--out",
        "--preset",
    ] {
        assert!(help.contains(flag), "{flag} missing from help");
    }
}

#[test]
fn omitted_seed_is_printed() {
    let o = run(&["decode", "--random", "12,3,4", "--snr-db", "2"]);
    assert!(matches!(o.status.code(), Some(0) | Some(2)));
    let err = String::from_utf8_lossy(&o.stderr);
    let seed: u64 = err
        .lines()
        .find_map(|l| l.strip_prefix("seed: "))
        .expect("seed printed")
        .parse()
        .unwrap();
    let again = run(&["decode", "--random", "12,3,4", "--snr-db", "2", "--seed", &seed.to_string()]);
    assert_eq!(stdout(&o), stdout(&again));
}

#[test]
fn gen_code_round_trips_through_inspect() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.alist");
    let o = run(&["gen-code", "--random", "24,3,6", "--seed", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let code = load_alist(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!((code.n(), code.m()), (24, 12));
    let o = run(&["inspect", "--alist", path.to_str().unwrap()]);
    let out = stdout(&o);
    assert_eq!(field(&out, "variable_degrees"), "3:24");
    assert_eq!(field(&out, "check_degrees"), "6:12");
}

#[test]
fn fig2_preset_has_four_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig2.csv");
    let o = run(&[
        "experiment", "--preset", "fig2", "--trials", "2", "--seed", "1", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let rows = read_csv(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(
        rows.iter().map(|r| r.sweep_value).collect::<Vec<_>>(),
        vec![30.0, 60.0, 120.0, 240.0]
    );
}

#[test]
fn same_seed_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let go = |name: &str| {
        let path = dir.path().join(name);
        let o = run(&[
            "experiment", "--random", "20,3,4", "--snr-db", "1,2", "--trials", "30", "--variant", "rpc", "--cmax",
            "5,50", "--seed", "9", "--out", path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{o:?}");
        std::fs::read(path).unwrap()
    };
    let (a, b) = (go("a.csv"), go("b.csv"));
    assert_eq!(a, b);
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 5);
}

#[test]
fn fig4_preset_reports_wer_and_bound_per_budget() {
    let o = run(&["experiment", "--preset", "fig4", "--trials", "20", "--seed", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = read_csv(o.stdout.as_slice()).unwrap();
    assert_eq!(rows.len(), 12);
    let variants: Vec<&str> = rows[..4].iter().map(|r| r.variant.as_str()).collect();
    assert_eq!(variants, ["adaptive", "rpc:10", "rpc:100", "rpc:1000"]);
    for r in &rows {
        assert_eq!(r.sweep_var, "snr_db");
        assert!(r.ml_lower_bound <= r.wer);
    }
}

#[test]
fn invalid_sweep_exits_one() {
    let o = run(&["experiment", "--random", "7,3,4", "--snr-db", "1", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["experiment", "--preset", "fig9", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bsc_decode_runs() {
    let o = run(&["decode", "--random", "24,3,6", "--channel", "bsc", "--crossover", "0.02", "--seed", "4"]);
    assert!(matches!(o.status.code(), Some(0) | Some(2)), "{o:?}");
    assert!(stdout(&o).contains("outcome: "));
}
