//! Command-line interface: output formats, exit codes and environment.

use std::process::Command;

use approx::assert_relative_eq;
use fracineq::cli::run;
use fracineq::funcmodel::{DomainKind, Piece, PiecewiseFunction};
use fracineq::special::gamma;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("fracineq").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = call(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn binary() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fracineq"));
    cmd.env_remove("FRACINEQ_TOL");
    cmd
}

#[test]
fn constant_accepts_inf_and_reports_additive_coefficients() {
    let v = json(&["constant", "--domain", "r+", "--r", "2", "--k", "0.5", "--p", "inf", "--q", "inf", "--s", "inf", "--h", "2"]);
    let oracle = 2f64.powf(1.5) / gamma(2.5).unwrap();
    assert_relative_eq!(v["K"].as_f64().unwrap(), oracle, max_relative = 1e-8);
    let (a, b) = (v["additive"]["A"].as_f64().unwrap(), v["additive"]["B"].as_f64().unwrap());
    // Dilation x -> x / h scales the coefficients by h^-k and h^(r-k).
    assert_relative_eq!(a, v["A1"].as_f64().unwrap() * 2f64.powf(-0.5), max_relative = 1e-12);
    assert_relative_eq!(b, v["B1"].as_f64().unwrap() * 2f64.powf(1.5), max_relative = 1e-12);

    let (code, out, _) = call(&["--output", "text", "constant", "--domain", "r", "--r", "2", "--k", "1.5", "--p", "inf", "--q", "inf", "--s", "\u{221e}"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("K = 1.47120165"));
}

#[test]
fn derivative_reads_a_function_file() {
    let f = PiecewiseFunction::new(DomainKind::HalfLine, vec![1.0], vec![Piece::poly(1.0, vec![0.0, 0.0, 1.0]), Piece::zero()]).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    std::fs::write(&path, serde_json::to_string(&f).unwrap()).unwrap();
    let p = path.to_str().unwrap();
    let oracle = 2.0 / gamma(2.5).unwrap() * 0.7f64.powf(1.5);
    for method in ["def", "rep"] {
        let v = json(&["derivative", "--fn", p, "--k", "0.5", "--method", method, "--n", "2", "--at", "0.3", "2"]);
        assert_relative_eq!(v[0]["value"].as_f64().unwrap(), oracle, max_relative = 1e-8);
        assert!(v[1]["value"].as_f64().unwrap().abs() < 1e-10);
    }
    let (code, _, err) = call(&["derivative", "--fn", "/nonexistent/f.json", "--k", "0.5", "--at", "0"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn extremal_plot_carries_the_figure_caption() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig.csv");
    let v = json(&["extremal", "--case", "r2-halfline-high", "--k", "1.5", "--s", "inf", "--plot", path.to_str().unwrap(), "--points", "51"]);
    assert!(v.is_object());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    let caption = lines.next().unwrap();
    assert!(caption.starts_with("# Figure 1"), "{caption}");
    assert_eq!(lines.next().unwrap(), "x,kernel,omega1,tau,phi");
    assert_eq!(lines.count(), 51);

    let (code, out, _) = call(&["--output", "csv", "extremal", "--case", "r2-fullline-high", "--k", "1.5", "--s", "inf", "--points", "11"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("# Figure 3"));
}

#[test]
fn solve_returns_parameters_or_a_validation_error() {
    let v = json(&["solve", "--case", "r2-halfline-high", "--k", "1.5", "--s", "inf"]);
    let text = v.to_string();
    assert!(text.contains("0.7071067"), "{text}");
    let (code, _, _) = call(&["solve", "--case", "stein-r1", "--k", "0.5", "--s", "1"]);
    assert_eq!(code, 2);
}

#[test]
fn dual_problems_from_the_command_line() {
    let k = json(&["constant", "--domain", "r+", "--r", "1", "--k", "0.3", "--p", "inf", "--q", "inf", "--s", "inf"]);
    let (big_k, lambda) = (k["K"].as_f64().unwrap(), k["lambda"].as_f64().unwrap());
    let e = json(&["stechkin", "--case", "r1-halfline", "--k", "0.3", "--s", "inf", "--N", "2"]);
    let oracle = (0..=200_000)
        .map(|i| {
            let d = 10.0 * i as f64 / 200_000.0;
            big_k * d.powf(1.0 - lambda) - 2.0 * d
        })
        .fold(f64::NEG_INFINITY, f64::max);
    assert_relative_eq!(e["E_N"].as_f64().unwrap(), oracle, max_relative = 1e-6);
    let r = json(&["recover", "--case", "r1-halfline", "--k", "0.3", "--s", "inf", "--delta", "0.01"]);
    assert_relative_eq!(r["error"].as_f64().unwrap(), big_k * 0.01f64.powf(1.0 - lambda), max_relative = 1e-12);

    let (code, out, _) = call(&["--output", "text", "three-numbers", "--case", "r2-fullline-high", "--k", "1.5", "--s", "inf", "--M0", "1", "--Mk", "0.5", "--Mr", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "Feasible");
    let (code, out, _) = call(&["--output", "text", "three-numbers", "--case", "r2-fullline-high", "--k", "1.5", "--s", "inf", "--M0", "1", "--Mk", "1.5", "--Mr", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "Infeasible");
    let (code, _, _) = call(&["three-numbers", "--case", "r1-halfline", "--k", "0.3", "--s", "inf", "--M0", "1", "--Mk", "0.5", "--Mr", "1"]);
    assert_eq!(code, 2);
}

#[test]
fn exit_codes() {
    let args = ["verify", "--case", "r1-halfline", "--k", "0.3", "--s", "4", "--batch", "10", "--check", "relation8"];
    let ok = binary()
        .args(args)
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["pass"], Value::Bool(true));

    // A coarse quadrature tolerance makes the dual representation check fail.
    let loose = binary()
        .env("FRACINEQ_TOL", "1e-1")
        .args(args)
        .output()
        .unwrap();
    assert_eq!(loose.status.code(), Some(1));

    let bad_env = binary().env("FRACINEQ_TOL", "abc").args(["stechkin", "--case", "r1-halfline", "--k", "0.3", "--s", "inf", "--N", "2"]).output().unwrap();
    assert_eq!(bad_env.status.code(), Some(2));

    let invalid = binary().args(["constant", "--domain", "r", "--r", "2", "--k", "2.5", "--p", "inf", "--q", "inf", "--s", "inf"]).output().unwrap();
    assert_eq!(invalid.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&invalid.stderr).contains("k must lie"));

    let unknown = binary().args(["extremal", "--case", "nope", "--k", "0.5", "--s", "inf"]).output().unwrap();
    assert_eq!(unknown.status.code(), Some(2));

    let help = binary().arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}
