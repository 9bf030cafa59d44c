use std::path::PathBuf;
use std::process::{Command, Output};

fn floorsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_floorsum"))
        .args(args)
        .env_remove("FLOORSUM_MAX_POINT")
        .env_remove("FLOORSUM_MAX_TABLE_LEN")
        .env_remove("FLOORSUM_MAX_TAU_R")
        .output()
        .expect("binary runs")
}

fn stdout_json(args: &[&str]) -> serde_json::Value {
    let out = floorsum(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn stderr_kind(out: &Output) -> String {
    assert!(!out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stderr).expect("json error");
    v["error"]["kind"].as_str().unwrap().to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("floorsum-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn sum_fast_matches_naive() {
    let fast = stdout_json(&["sum", "--function", "tau2", "--x", "1000000", "--method", "fast"]);
    let naive = stdout_json(&["sum", "--function", "tau2", "--x", "1000000", "--method", "naive"]);
    assert_eq!(fast["sum"], naive["sum"]);
    assert!(fast["sum"].is_i64());
}

#[test]
fn pairs_exponent_lambda() {
    let v = stdout_json(&["pairs", "exponent", "--target", "lambda", "--pair", "13/84,55/84"]);
    assert_eq!(v["exponent"], "97/203");
    let v = stdout_json(&["pairs", "exponent", "--target", "tau:3", "--pair", "13/194,76/97"]);
    assert_eq!(v["exponent"], "283/574");
    let v = stdout_json(&["pairs", "exponent", "--target", "lambda", "--pair", "1/2,1/2"]);
    assert_eq!(v["status"], "infeasible");
}

#[test]
fn pairs_derive_and_search() {
    let v = stdout_json(&["pairs", "derive", "--word", "BA", "--seed", "bourgain"]);
    assert_eq!(v["k"], "55/194");
    assert_eq!(v["l"], "55/97");
    let v = stdout_json(&["pairs", "search", "--target", "2omega", "--depth", "4", "--seeds", "classic,bourgain,hb:5..7"]);
    let e: floorsum_core::pairs_opt::Rational = v["exponent"].as_str().unwrap().parse().unwrap();
    assert!(e <= floorsum_core::pairs_opt::q(97, 202));
}

#[test]
fn pairs_balance_from_file() {
    let path = scratch("problem.json");
    std::fs::write(
        &path,
        r#"{"free": "N", "terms": [{"N": "1"}, {"x": "1", "N": "-1"}]}"#,
    )
    .unwrap();
    let v = stdout_json(&["pairs", "balance", "--spec", path.to_str().unwrap()]);
    assert_eq!(v["nu_star"], "1/2");
    assert_eq!(v["value"], "1/2");
}

#[test]
fn verify_is_deterministic() {
    let a = floorsum(&["verify", "vaughan-lambda", "--trials", "5", "--seed", "1"]);
    let b = floorsum(&["verify", "vaughan-lambda", "--trials", "5", "--seed", "1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["trials"].as_array().unwrap().len(), 5);
    assert!(v["max_relative"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn errors_are_json() {
    assert_eq!(stderr_kind(&floorsum(&["nonsense"])), "usage");
    assert_eq!(
        stderr_kind(&floorsum(&["pairs", "exponent", "--target", "lambda", "--pair", "0.1,0.5"])),
        "parse"
    );
    assert_eq!(
        stderr_kind(&floorsum(&["expsum", "check", "--case", "lambda", "--z", "1e6", "--R", "20000"])),
        "window"
    );
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_floorsum"))
        .args(["sum", "--function", "tau", "--x", "10000"])
        .env("FLOORSUM_MAX_POINT", "1000")
        .output()
        .unwrap();
    assert_eq!(stderr_kind(&out), "budget");
}

#[test]
fn config_file_supplies_flags() {
    let path = scratch("run.conf");
    std::fs::write(&path, "# sum run\nfunction = mu\nx = 100000\nmethod = naive\n").unwrap();
    let v = stdout_json(&["sum", "--config", path.to_str().unwrap()]);
    assert_eq!(v["kind"], "mu");
    assert_eq!(v["method"], "naive");
    // the command line wins over the file
    let v = stdout_json(&["sum", "--config", path.to_str().unwrap(), "--x", "10"]);
    assert_eq!(v["x"], 10);
    let bad = scratch("budget.conf");
    std::fs::write(&bad, "max_point = 5\n").unwrap();
    let out = floorsum(&["sum", "--function", "one", "--x", "10", "--config", bad.to_str().unwrap()]);
    assert_eq!(stderr_kind(&out), "budget");
}

#[test]
fn sieve_and_scan_csv() {
    let out = floorsum(&["sieve", "--function", "mu", "--lo", "1", "--hi", "6"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "n,value\n1,1\n2,-1\n3,-1\n4,0\n5,-1\n6,1\n");
    let path = scratch("scan.csv");
    let out = floorsum(&["scan", "--function", "mu2", "--grid", "1000:100000:5", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,sum,main_term,residual"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn psi_and_constant() {
    let v = stdout_json(&["psi", "--H", "5", "--grid", "10000"]);
    assert!(v["max_violation"].as_f64().unwrap() <= 1e-9);
    let v = stdout_json(&["psi", "--H", "5", "--grid", "10000", "--report"]);
    assert!(v["mean_envelope"].is_f64());
    let v = stdout_json(&["constant", "--function", "one", "--cutoff", "1000"]);
    assert!((v["completed"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn expsum_commands() {
    let v = stdout_json(&["expsum", "check", "--case", "lambda", "--z", "1e6", "--R", "3981", "--pair", "1/6,2/3", "--json"]);
    assert_eq!(v["parameters"]["k"], "1/6");
    assert!(v["ratio"].as_f64().unwrap() >= 0.0);
    let v = stdout_json(&["expsum", "eval", "--function", "one", "--z", "0", "--R", "10", "--R1", "20"]);
    assert_eq!(v["re"], 10.0);
}

#[test]
fn help_names_formulas() {
    let out = floorsum(&["--help"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("f(⌊x/n⌋)"));
    let out = floorsum(&["pairs", "exponent", "--help"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("14(k+1)/(29k−ℓ+30)"));
}
