use std::process::Command;

use gabor_cs::cli::run;
use gabor_cs::table::Table;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("gabor-cs").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn exit_codes() {
    let cases: &[(&[&str], i32)] = &[
        (&["coherence", "--window", "alltop", "--n", "7"], 0),
        (&["gen-window", "--window", "rademacher", "--n", "4", "--seed", "1"], 0),
        (&["verify-identities", "--n", "2,5"], 0),
        (&["--help"], 0),
        (&["coherence", "--help"], 0),
        (&["--version"], 0),
        (&[], 2),
        (&["no-such-command"], 2),
        (&["coherence", "--window", "hann", "--n", "8"], 2),
        (&["coherence", "--window", "rademacher"], 2),
        (&["coherence", "--window", "rademacher", "--n", "8", "--format", "xml"], 2),
        (&["rip-estimate", "--window", "rademacher", "--n", "8", "--s", "2", "--jobs", "0"], 2),
        (&["gen-window", "--window", "alltop", "--n", "4"], 1),
        (&["gen-window", "--window", "steinhaus", "--n", "1"], 1),
        (&["rip-exact", "--window", "rademacher", "--n", "4", "--s", "17"], 1),
        (&["recover", "--window", "rademacher", "--n", "8", "--s", "2", "--noise=-1"], 1),
        (&["apply", "--window", "rademacher", "--n", "4", "--input", "/no/such/file.csv"], 1),
    ];
    for (args, want) in cases {
        let (code, _, err) = call(args);
        assert_eq!(code, *want, "{args:?}: {err}");
    }
}

#[test]
fn domain_errors_are_one_csv_line() {
    let (code, out, err) = call(&["gen-window", "--window", "alltop", "--n", "9"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error,invalid_parameter,"), "{err}");
}

#[test]
fn coherence_output() {
    let (_, csv, _) = call(&["coherence", "--window", "alltop", "--n", "5"]);
    assert_eq!(csv, "metric,value\nmu,0.447214\nwelch,0.408248\n");
    let (_, json, _) = call(&["coherence", "--window", "alltop", "--n", "5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v[0]["metric"], "mu");
    assert!((v[0]["value"].as_f64().unwrap() - 0.2f64.sqrt()).abs() < 1e-15);
}

#[test]
fn csv_round_trips_through_the_table_reader() {
    for args in [
        &["rip-exact", "--window", "steinhaus", "--n", "4", "--s", "2,3", "--seed", "2"][..],
        &["phase-transition", "--n", "8", "--s", "1,2", "--algo", "omp,htp", "--trials", "3"],
        &["channel-sim", "--window", "rademacher", "--n", "8", "--s", "2", "--algo", "omp", "--trials", "3"],
        &["verify-identities", "--n", "3"],
    ] {
        let (code, csv, err) = call(args);
        assert_eq!(code, 0, "{err}");
        let table = Table::from_csv(&csv).unwrap();
        assert!(!table.is_empty());
        assert_eq!(table.to_csv(), csv, "{args:?}");
    }
}

#[test]
fn apply_then_adjoint_matches_frame_identity() {
    let dir = tempfile::tempdir().unwrap();
    let x_path = dir.path().join("x.csv");
    let y_path = dir.path().join("y.csv");
    let z_path = dir.path().join("z.csv");
    std::fs::write(&x_path, "index,re,im\n0,1,0\n7,0,-1\n13,0.5,0.5\n").unwrap();
    let w = ["--window", "steinhaus", "--n", "4", "--seed", "9"];
    let with = |cmd: &str, input: &std::path::Path, out: &std::path::Path| {
        let mut a = vec![cmd];
        a.extend(w);
        a.extend(["--input", input.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        let (code, stdout, err) = call(&a);
        assert_eq!(code, 0, "{err}");
        assert!(stdout.is_empty());
    };
    with("apply", &x_path, &y_path);
    with("adjoint", &y_path, &z_path);
    let y = Table::from_csv(&std::fs::read_to_string(&y_path).unwrap()).unwrap();
    let z = Table::from_csv(&std::fs::read_to_string(&z_path).unwrap()).unwrap();
    assert_eq!(y.len(), 4);
    assert_eq!(z.len(), 16);
    // ‖Ψx‖² = ⟨Ψ*Ψx, x⟩ with x real-imag pairs from the file.
    let x = [(0, 1.0, 0.0), (7, 0.0, -1.0), (13, 0.5, 0.5)];
    let (zr, zi) = (z.column_f64("re").unwrap(), z.column_f64("im").unwrap());
    let lhs: f64 = y.column_f64("re").unwrap().iter().zip(y.column_f64("im").unwrap()).map(|(a, b)| a * a + b * b).sum();
    let rhs: f64 = x.iter().map(|&(i, re, im)| zr[i] * re + zi[i] * im).sum();
    // The CSV carries six significant digits.
    assert!((lhs - rhs).abs() < 1e-5 * lhs, "{lhs} vs {rhs}");
}

#[test]
fn dense_apply_prints_the_matrix() {
    let (code, csv, _) = call(&["apply", "--window", "alltop", "--n", "5", "--dense"]);
    assert_eq!(code, 0);
    let t = Table::from_csv(&csv).unwrap();
    assert_eq!(t.columns(), ["row", "col", "re", "im"]);
    assert_eq!(t.len(), 125);
}

#[test]
fn recover_from_measurements() {
    let dir = tempfile::tempdir().unwrap();
    let x_path = dir.path().join("x.csv");
    let y_path = dir.path().join("y.csv");
    std::fs::write(&x_path, "index,re,im\n3,1,0\n40,0,2\n").unwrap();
    let w = ["--window", "rademacher", "--n", "16", "--seed", "4"];
    let mut a = vec!["apply"];
    a.extend(w);
    a.extend(["--input", x_path.to_str().unwrap(), "--out", y_path.to_str().unwrap()]);
    assert_eq!(call(&a).0, 0);
    let mut a = vec!["recover"];
    a.extend(w);
    a.extend(["--s", "2", "--algo", "omp", "--input", y_path.to_str().unwrap()]);
    let (code, csv, err) = call(&a);
    assert_eq!(code, 0, "{err}");
    let t = Table::from_csv(&csv).unwrap();
    let (re, im) = (t.column_f64("re").unwrap(), t.column_f64("im").unwrap());
    assert_eq!(re.len(), 256);
    for (i, (r, m)) in re.iter().zip(&im).enumerate() {
        let (wr, wm) = match i {
            3 => (1.0, 0.0),
            40 => (0.0, 2.0),
            _ => (0.0, 0.0),
        };
        assert!((r - wr).abs() < 1e-5 && (m - wm).abs() < 1e-5, "entry {i}");
    }
}

#[test]
fn plot_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("pt.csv");
    let svg = dir.path().join("pt.svg");
    let (code, _, _) = call(&["phase-transition", "--n", "8", "--s", "1,2,3", "--trials", "4", "--out", data.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, _, err) = call(&["plot", "--input", data.to_str().unwrap(), "--x", "s", "--y", "success_rate", "--out", svg.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("r=\"3.5\"").count(), 3);
    let (code, _, _) = call(&["plot", "--input", data.to_str().unwrap(), "--x", "s", "--y", "nope", "--out", svg.to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn binary_reads_jobs_from_the_environment() {
    let bin = env!("CARGO_BIN_EXE_gabor-cs");
    let args = ["rip-estimate", "--window", "steinhaus", "--n", "16", "--s", "2,3", "--trials", "64", "--seed", "3"];
    let one = Command::new(bin).args(args).env("GABOR_RIP_JOBS", "1").output().unwrap();
    let four = Command::new(bin).args(args).env("GABOR_RIP_JOBS", "4").output().unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    let zero = Command::new(bin).args(args).env("GABOR_RIP_JOBS", "0").output().unwrap();
    assert_eq!(zero.status.code(), Some(2));
    let bad = Command::new(bin).args(["gen-window", "--window", "alltop", "--n", "6"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("error,"));
}
