use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropehrhart")).args(args).output().expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn err_json(args: &[&str], code: i32) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}");
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    assert_eq!(v["error"]["exit_code"], code);
    v
}

#[test]
fn fano_chi_total() {
    let v = ok_json(&["chi", "--bundle", &fixture("fano.json")]);
    assert_eq!(v["chi_total"], 27);
    let parts: Vec<i64> = v["by_codim_total"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
    assert_eq!(parts[0] - parts[1] + parts[2], 27);
}

#[test]
fn fano_alpha_agrees() {
    let v = ok_json(&["alpha-eval", "--bundle", &fixture("fano.json")]);
    assert_eq!(v["alpha_lattice_sum"], 27);
    assert_eq!(v["agree"], true);
    assert!(v["first_mismatch"].is_null());
}

#[test]
fn hrr_report_shape() {
    let v = ok_json(&["hrr", "--bundle", &fixture("fano.json")]);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["equal", "lhs", "rhs"]);
    assert_eq!(v["lhs"], "27/1");
    assert_eq!(v["rhs"], 27);
    assert_eq!(v["equal"], true);
}

#[test]
fn taut_check_u23() {
    let v = ok_json(&["taut-check", "--matroid", &fixture("u23.json")]);
    assert_eq!(v["all_equal"], true);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    assert!(v["checked"].as_u64().unwrap() > 0);
    assert_eq!(v["matroid"]["m"], 3);
    assert_eq!(v["verified_box"]["lo"].as_array().unwrap().len(), 3);
    assert_eq!(v["at_u"]["by_codim"], serde_json::json!([10, 11, 2]));
    assert_eq!(v["at_u"]["chi"], 1);
    assert_eq!(v["at_u"]["h0"], 1);
}

#[test]
fn bad_row_names_level_set() {
    let v = err_json(&["validate", "--bundle", &fixture("bad_row.json")], 2);
    assert_eq!(v["error"]["level_set"], serde_json::json!([1, 2]));
    assert_eq!(v["error"]["ray"], 1);
}

#[test]
fn schema_error_has_path() {
    let v = err_json(&["validate", "--bundle", &fixture("schema_error.json")], 2);
    assert_eq!(v["error"]["kind"], "schema");
    assert_eq!(v["error"]["path"], "diagram[1][1]");
}

#[test]
fn ragged_diagram_is_validation_error() {
    let v = err_json(&["h0", "--bundle", &fixture("ragged.json")], 2);
    assert_eq!(v["error"]["row"], 2);
}

#[test]
fn missing_file_and_bad_arguments() {
    err_json(&["chi", "--bundle", "/nonexistent/bundle.json"], 2);
    err_json(&["chi", "--bundle", &fixture("fano.json"), "--u", "1"], 2);
    err_json(&["chi", "--bundle", &fixture("fano.json"), "--box", "1,1:0,0"], 2);
    err_json(&["flag-sum", "--m", "17"], 2);
    err_json(&["resolve", "--bundle", &fixture("u23_bundle.json"), "--f", "0,0,0"], 2);
}

#[test]
fn invalid_thread_count() {
    let out = Command::new(env!("CARGO_BIN_EXE_tropehrhart"))
        .args(["flag-sum", "--m", "3"])
        .env("TROPEHRHART_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_tropehrhart"))
        .args(["flag-sum", "--m", "3"])
        .env("TROPEHRHART_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn output_is_deterministic() {
    let f = fixture("fano.json");
    for args in [
        vec!["chi", "--bundle", f.as_str()],
        vec!["resolve", "--bundle", f.as_str()],
        vec!["validate", "--bundle", f.as_str()],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn reports_reparse_as_json() {
    let f = fixture("u23_bundle.json");
    for args in [
        vec!["validate", "--bundle", f.as_str()],
        vec!["h0", "--bundle", f.as_str(), "--u", "0,0"],
        vec!["h0", "--bundle", f.as_str()],
        vec!["chi", "--bundle", f.as_str(), "--u", "1,1"],
        vec!["resolve", "--bundle", f.as_str()],
        vec!["alpha-eval", "--bundle", f.as_str(), "--u", "0,0"],
    ] {
        let v = ok_json(&args);
        let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(v, again);
    }
}

#[test]
fn resolution_identity_holds() {
    let v = ok_json(&["resolve", "--bundle", &fixture("u23_bundle.json")]);
    assert_eq!(v["k_class_identity"], true);
    let ranks: Vec<u64> = v["parts"].as_array().unwrap().iter().map(|p| p["rank"].as_u64().unwrap()).collect();
    assert_eq!(ranks.len(), 3);
}

#[test]
fn chain_lattice_sum() {
    // Triangle with legs 2 has six lattice points; the origin is subtracted once.
    let v = ok_json(&["alpha-eval", "--chain", &fixture("chain.json")]);
    assert_eq!(v["lattice_sum"], 5);
    let v = ok_json(&["alpha-eval", "--chain", &fixture("chain.json"), "--u", "0,0"]);
    assert_eq!(v["value"], 0);
}

#[test]
fn line_bundle_sections_on_p1() {
    let v = ok_json(&["h0", "--bundle", &fixture("o2_p1.json")]);
    assert_eq!(v["h0_total"], 3);
}

#[test]
fn flag_sum_parity() {
    for m in 1..=6 {
        let v = ok_json(&["flag-sum", "--m", &m.to_string()]);
        assert_eq!(v["sum"], if m % 2 == 0 { 1 } else { -1 });
    }
}

#[test]
fn table_output() {
    let out = run(&["chi", "--bundle", &fixture("u23_bundle.json"), "--u", "0,0", "--table"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("chi at (0,0) = 6 − 6 + 2 = 2"), "{text}");
    let out = run(&["--output", "table", "taut-check", "--matroid", &fixture("u23.json")]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("all equal: true"), "{text}");
    assert!(text.contains("chi at (1,0,0) = 10 − 11 + 2 = 1, h0 = 1"), "{text}");
}
