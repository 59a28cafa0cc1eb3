use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn aop() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_aop"));
    c.env_remove("AOP_SEED");
    c
}

fn operators(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../operators").join(name)
}

fn run(c: &mut Command) -> (i32, String, String) {
    let o = c.output().expect("binary runs");
    (o.status.code().unwrap(), String::from_utf8(o.stdout).unwrap(), String::from_utf8(o.stderr).unwrap())
}

fn json(c: &mut Command) -> Value {
    let (code, out, err) = run(c);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn row<'a>(text: &'a str, label: &str) -> &'a str {
    text.lines().find(|l| l.trim_start().starts_with(&format!("{label} "))).unwrap_or_else(|| panic!("{label} in {text}"))
}

#[test]
fn delbar_text_verdicts() {
    let (code, out, _) = run(aop().args(["classify", "--builtin", "delbar"]));
    assert_eq!(code, 0);
    assert!(row(&out, "elliptic").contains("✓"));
    assert!(row(&out, "C-elliptic").contains("✗"));
    assert!(row(&out, "cancelling").contains("✗"));
    assert!(row(&out, "FDN").contains("✗"));
}

#[test]
fn three_dimensional_laplacian() {
    let v = json(aop().args(["classify", "--builtin", "laplacian", "--n", "3", "--json"]));
    let verdict = &v["result"]["verdict"];
    assert_eq!(verdict["elliptic"]["kind"], "numeric_true");
    assert_eq!(verdict["fdn"]["kind"], "exact_false");
    assert_eq!(verdict["cancelling"]["kind"], "exact_false");
    assert_eq!(v["result"]["n"], 3);
}

#[test]
fn exact_only_exit_codes() {
    let (code, _, err) = run(aop().args(["classify", "--builtin", "laplacian", "--n", "3", "--exact-only"]));
    assert_eq!(code, 3);
    assert!(err.contains("not exact"));
    let (code, _, _) = run(aop().args(["classify", "--builtin", "delbar", "--exact-only"]));
    assert_eq!(code, 0);
}

#[test]
fn malformed_document_reports_its_location() {
    let (code, out, err) = run(aop().arg("classify").arg(operators("bad.opspec.json")));
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("bad.opspec.json:5:5:"), "{err}");
}

#[test]
fn file_and_builtin_inputs_agree() {
    let a = json(aop().arg("classify").arg(operators("delbar.opspec.json")).arg("--json"));
    let b = json(aop().args(["classify", "--builtin", "delbar", "--json"]));
    assert_eq!(a["result"]["verdict"], b["result"]["verdict"]);
    assert_ne!(a["input_digest"], b["input_digest"]);
    let bytes = std::fs::read(operators("delbar.opspec.json")).unwrap();
    assert_eq!(a["input_digest"], aop_cli::report::digest(&bytes));
}

#[test]
fn unknown_flags_and_missing_inputs_are_rejected() {
    assert_eq!(run(aop().args(["classify", "--builtin", "delbar", "--verbose"])).0, 2);
    assert_eq!(run(aop().args(["classify"])).0, 2);
    assert_eq!(run(aop().args(["lab", "bergman", "--cap", "7"])).0, 2);
    assert_eq!(run(aop().args(["lab", "heat"])).0, 2);
    assert_eq!(run(aop().args(["classify", "--builtin", "nabla"])).0, 2);
    assert_eq!(run(aop().arg("classify").arg(operators("delbar.opspec.json")).args(["--n", "3"])).0, 2);
}

#[test]
fn envelope_and_seed() {
    let v = json(aop().args(["nullspace", "--builtin", "sym_grad", "--json"]));
    assert_eq!(v["schema"], 1);
    assert_eq!(v["tool"], "aop");
    assert_eq!(v["seed"], 0);
    assert!(v.get("wall_time").is_none());
    assert_eq!(v["result"]["dimension"], 3);
    let v = json(aop().env("AOP_SEED", "5").args(["nullspace", "--builtin", "sym_grad", "--json"]));
    assert_eq!(v["seed"], 5);
    let v = json(aop().env("AOP_SEED", "5").args(["--seed", "9", "nullspace", "--builtin", "sym_grad", "--json"]));
    assert_eq!(v["seed"], 9);
    assert_eq!(run(aop().env("AOP_SEED", "x").args(["nullspace", "--builtin", "sym_grad"])).0, 2);
}

#[test]
fn delbar_null_space_never_plateaus() {
    let v = json(aop().args(["nullspace", "--builtin", "delbar", "--max-degree", "5", "--json"]));
    let dims: Vec<u64> = v["result"]["profile"]["dims"].as_array().unwrap().iter().map(|d| d.as_u64().unwrap()).collect();
    assert_eq!(dims, [2, 4, 6, 8, 10, 12]);
    assert!(v["result"]["dimension"].is_null());
}

#[test]
fn small_table_is_reproducible() {
    let args = ["table", "--n", "2", "--N", "1", "--k", "1..2", "--samples", "10", "--json"];
    let (c1, a, _) = run(aop().args(args));
    let (c2, b, _) = run(aop().args(args));
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    let cells = v["result"]["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 2);
    assert_eq!(cells[0]["observed"], "E=>FDN");
    assert_eq!(cells[1]["observed"], "EC=>FDN");
    assert_eq!(run(aop().args(["table", "--n", "2..4"])).0, 2);
}

#[test]
fn decomposition_dump() {
    let v = json(aop().args(["decompose", "--cap", "7", "--json"]));
    let r = &v["result"];
    let records = r["records"].as_array().unwrap();
    assert_eq!(records.len() as u64, r["cubes"].as_u64().unwrap());
    assert_eq!(r["violations"], 0);
    let small: Vec<&Value> = records.iter().filter(|c| c["role"] == "small_exterior").collect();
    assert_eq!(small.len() as u64, r["small_cubes"].as_u64().unwrap());
    assert!(small.iter().all(|c| c["reflected_to"].is_object()));
    assert!(records.iter().filter(|c| c["role"] != "small_exterior").all(|c| c["reflected_to"].is_null()));
    assert_eq!(run(aop().args(["decompose", "--cap", "3"])).0, 1);
}

#[test]
fn lab_reports() {
    let v = json(aop().args(["lab", "bergman", "--op", "delbar", "--beta", "1.5", "--levels", "64,128", "--json"]));
    let row = &v["result"]["rows"][0];
    assert_eq!(row["beta"], 1.5);
    assert_eq!(row["l2_divergent"], true);
    let v = json(aop().args(["lab", "multiplier", "--op", "sym_grad", "--size", "64", "--json"]));
    assert!(v["result"]["relative_error"].as_f64().unwrap() < 1e-8);
    let v = json(aop().args(["lab", "poincare", "--op", "sym_grad", "--trials", "5", "--json"]));
    assert_eq!(v["result"]["all_finite"], true);
    assert_eq!(run(aop().args(["lab", "poincare", "--op", "laplacian"])).0, 1);
}
