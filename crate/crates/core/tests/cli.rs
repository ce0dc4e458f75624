use std::process::{Command, Output};

use serde_json::Value;

fn qplane(args: &[&str]) -> Output {
    qplane_env(args, None)
}

fn qplane_env(args: &[&str], format: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qplane"));
    cmd.args(args).env_remove("QPLANE_FORMAT");
    if let Some(f) = format {
        cmd.env("QPLANE_FORMAT", f);
    }
    cmd.output().expect("run qplane")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

fn failure(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let o = qplane(&full);
    assert_eq!(o.status.code(), Some(1), "{args:?}");
    serde_json::from_slice(&o.stderr).unwrap()
}

#[test]
fn mul_normal_orders() {
    assert_eq!(stdout(&qplane(&["mul", "--q", "2", "tb", "t"])), "1/2 t tb\n");
    assert_eq!(stdout(&qplane(&["mul", "--q", "2", "tb", "t", "t"])), "1/4 t^2 tb\n");
    let v = json(&qplane(&["mul", "--q", "3+i", "tb", "t", "--format", "json"]));
    assert_eq!(v["q"], "(3+i)");
    assert_eq!(v["terms"][0]["re"], "3/10");
    assert_eq!(v["terms"][0]["im"], "-1/10");
}

#[test]
fn star_and_probe() {
    assert_eq!(stdout(&qplane(&["star", "(1+2i) t tb^2"])), "(1-2i) t^2 tb\n");
    assert_eq!(stdout(&qplane(&["star", "--q", "i", "tb", "t"])), "false\n");
    assert_eq!(stdout(&qplane(&["star", "--q", "i", "t", "tb"])), "true\n");
}

#[test]
fn inner_and_gram() {
    let out = stdout(&qplane(&["inner", "--weights", "factorial", "t^2 tb^2", "t tb"]));
    assert_eq!(out, "6\n");
    let v = json(&qplane(&[
        "gram", "--weights", "table:[1,2,1]", "1", "t tb", "--format", "json",
    ]));
    assert_eq!(v["matrix"], serde_json::json!([["1", "2"], ["2", "1"]]));
    let csv = stdout(&qplane(&["gram", "--weights", "factorial", "1", "t", "--format", "csv"]));
    assert_eq!(csv, "1,0\n0,1\n");
}

#[test]
fn project() {
    let out = stdout(&qplane(&["project", "--weights", "factorial", "t^2 tb + tb"]));
    assert_eq!(out, "2 t\n");
}

#[test]
fn toeplitz_formats() {
    let human = stdout(&qplane(&["toeplitz", "--weights", "factorial", "--dim", "3", "tb"]));
    assert_eq!(human, "0  1   0\n0  0  √2\n0  0   0\n");
    let human = stdout(&qplane(&["toeplitz", "--weights", "constant:2", "--dim", "2", "-3/4 t"]));
    assert_eq!(human, "   0  0\n-3/4  0\n");
    let v = json(&qplane(&["toeplitz", "--weights", "factorial", "--dim", "3", "t", "--format", "json"]));
    assert_eq!(v["dim"], 3);
    assert_eq!(v["weights"], "factorial");
    assert_eq!(v["symbol"]["terms"][0]["j"], 1);
    let e = v["entries_row_major"].as_array().unwrap();
    assert_eq!(e.len(), 9);
    assert!((e[3][0].as_f64().unwrap() - 1.0).abs() < 1e-15);
    assert!((e[7][0].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-15);
    let csv = stdout(&qplane(&["toeplitz", "--weights", "factorial", "--dim", "3", "t tb", "--format", "csv"]));
    assert_eq!(csv, "offset,column,re,im\n0,0,1,0\n0,1,2,0\n0,2,3,0\n");
}

#[test]
fn compose_and_commutator() {
    let args = [
        "compose", "--q", "1/2", "--weights", "qfactorial:q=1/2:w0=1", "--dim", "6", "tb", "t",
        "--commutator", "2", "--format", "json",
    ];
    let v = json(&qplane(&args));
    assert_eq!(v["interior_columns"], 4);
    let m = v["monomial_basis_row_major"].as_array().unwrap();
    for b in 0..6 {
        for a in 0..4 {
            let want = if a == b { "1" } else { "0" };
            assert_eq!(m[b * 6 + a][0], want);
        }
    }
}

#[test]
fn adjoint_reports_agreement() {
    let v = json(&qplane(&[
        "adjoint", "--q", "1/2", "--weights", "factorial", "--dim", "5", "(1+i) t^2 tb", "--format",
        "json",
    ]));
    assert_eq!(v["matches_star_symbol"], true);
    assert_eq!(v["symbol"]["terms"][0]["j"], 1);
    assert_eq!(v["symbol"]["terms"][0]["k"], 2);
}

#[test]
fn ccr_check() {
    let v = json(&qplane(&["ccr-check", "--q", "3/4", "--dim", "20", "--format", "json"]));
    assert_eq!(v, serde_json::json!({"residual": "0"}));
    let v = json(&qplane(&["ccr-check", "--q", "0.5", "--dim", "8", "--format", "json"]));
    let r: f64 = v["residual"].as_str().unwrap().parse().unwrap();
    assert!(r < 1e-12);
}

#[test]
fn degeneracy_warns_on_short_horizon() {
    let o = qplane(&["degeneracy", "--weights", "factorial", "--mmax", "0", "--rmax", "3", "--smax", "1"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn definiteness() {
    let v = json(&qplane(&["definiteness", "--weights", "table:[1,2,1]", "--maxdeg", "1", "--format", "json"]));
    assert!(v["min_eigenvalue"].as_f64().unwrap() < 0.0);
    assert!(v["witness_self_pairing"].as_f64().unwrap() < 0.0);
    let v = json(&qplane(&["definiteness", "--weights", "factorial", "--maxdeg", "2", "--format", "json"]));
    assert!(v["witness"].is_null());
    assert_eq!(v["dim"], 9);
}

#[test]
fn norm_and_compact() {
    let v = json(&qplane(&["norm", "--weights", "factorial", "--i", "1", "--j", "0", "--amax", "16", "--format", "json"]));
    assert_eq!(v["verdict"], "DIVERGING");
    assert_eq!(v["c_squared"][15], "16");
    let csv = stdout(&qplane(&["norm", "--weights", "constant:2", "--i", "0", "--j", "1", "--amax", "4", "--format", "csv"]));
    assert_eq!(csv.lines().next(), Some("a,c_a,c_a^2"));
    assert_eq!(csv.lines().nth(1), Some("0,0,0"));
    let out = stdout(&qplane(&["compact", "--weights", "constant:1", "--i", "1", "--j", "0"]));
    assert_eq!(out, "NOT_COMPACT_CANDIDATE\n");
}

#[test]
fn env_selects_format_and_flag_overrides() {
    let o = qplane_env(&["mul", "t", "tb"], Some("json"));
    assert!(stdout(&o).starts_with("{\"q\":\"1\""));
    let o = qplane_env(&["mul", "t", "tb", "--format", "human"], Some("json"));
    assert_eq!(stdout(&o), "t tb\n");
}

#[test]
fn structured_errors() {
    assert_eq!(failure(&["mul", "t +", "t"])["error"]["kind"], "syntax");
    assert_eq!(failure(&["inner", "--weights", "bogus", "1", "1"])["error"]["kind"], "weight_spec");
    assert_eq!(
        failure(&["ccr-check", "--q", "-1", "--dim", "4"])["error"]["kind"],
        "positivity_violation"
    );
    assert_eq!(
        failure(&["toeplitz", "--weights", "factorial", "--dim", "0", "t"])["error"]["kind"],
        "domain"
    );
    assert_eq!(
        failure(&["toeplitz", "--weights", "table:[1,2]", "--dim", "4", "t"])["error"]["kind"],
        "weight_out_of_range"
    );
    assert_eq!(failure(&["mul", "0.5 t", "t"])["error"]["kind"], "backend_mismatch");
    assert_eq!(failure(&["mul", "--q", "0", "t", "t"])["error"]["kind"], "zero_deformation");

    let o = qplane(&["mul", "t ^", "t"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error[syntax]"));
    assert_eq!(qplane(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(qplane(&["--help"]).status.code(), Some(0));
}

#[test]
fn float_backend_from_decimal_q() {
    let out = stdout(&qplane(&["mul", "--q", "0.5", "tb", "0.25 t"]));
    assert_eq!(out, "0.5 t tb\n");
}
