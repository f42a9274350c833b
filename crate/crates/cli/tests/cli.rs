use orbifloer_cli::reproduce::{first_difference, NAMES};
use orbifloer_cli::run_args;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run_args(std::iter::once("orbifloer").chain(args.iter().copied()));
    let text = if code == 0 { out } else { err };
    (code, serde_json::from_str(&text).unwrap_or(Value::String(text)))
}

#[test]
fn box_lists_six_sectors() {
    let (code, v) = run(&["box", "--preset", "wp:1,3,5"]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 6);
    assert_eq!(v["sectors"][0]["nu"], serde_json::json!(["0", "-1"]));
    assert_eq!(v["sectors"][0]["area"], "4/5 - u2");
}

#[test]
fn teardrop_region_interval() {
    let (code, v) = run(&["region", "--preset", "teardrop:3", "--closure"]);
    assert_eq!(code, 0);
    assert_eq!(v["union"][0]["text"], "(-1/3, 1/3]");
    for p in v["pieces"].as_array().unwrap() {
        assert_eq!(p["certificate"]["status"], "SolvableCertified");
    }
}

#[test]
fn conebasis_is_unimodular() {
    let (code, v) = run(&["conebasis", "--cone", "1,0;1,2"]);
    assert_eq!(code, 0);
    assert_eq!(v["unimodular"], true);
    assert_eq!(v["multiplicities"], serde_json::json!(["2", "1"]));
}

#[test]
fn validation_errors_exit_two() {
    for args in [
        &["box"][..],
        &["box", "--preset", "wp:2,3"],
        &["box", "--preset", "nosuch"],
        &["potential", "--preset", "teardrop:3", "--u", "2"],
        &["potential", "--preset", "teardrop:3", "--u", "1/2,0"],
        &["potential", "--preset", "teardrop:3", "--u", "x"],
        &["critical", "--preset", "teardrop:3"],
        &["conebasis", "--cone", "1,0;2,0"],
        &["reproduce", "nosuch"],
        &["box", "--preset", "teardrop:3", "--model", "m.json"],
    ] {
        let (code, v) = run(args);
        assert_eq!(code, 2, "{args:?}");
        assert_eq!(v["error"]["kind"], "validation", "{args:?}");
    }
}

#[test]
fn model_and_bulk_files() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model.json");
    std::fs::write(
        &model,
        r#"{"facets":[{"normal":[1],"label":3,"offset":"-1"},{"normal":[-1],"label":1,"offset":"-1"}]}"#,
    )
    .unwrap();
    let bulk = dir.path().join("bulk.json");
    std::fs::write(&bulk, r#"{"sectors":[{"nu":[1],"c":"-3","lambda":"1/6"}]}"#).unwrap();
    let m = model.to_str().unwrap();
    let b = bulk.to_str().unwrap();
    let (code, v) = run(&["potential", "--model", m, "--u", "-1/4", "--bulk", b]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["terms"].as_array().unwrap().len(), 3);
    let (code, v) = run(&["lte", "--model", m, "--u", "-1/4", "--bulk", b]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"]["status"], "SolvableCertified");
    let (code, _) = run(&["potential", "--model", dir.path().join("missing").to_str().unwrap(), "--u", "0"]);
    assert_eq!(code, 2);
}

#[test]
fn critical_points() {
    let (code, v) = run(&["critical", "--preset", "teardrop:2", "--u", "0"]);
    assert_eq!(code, 0);
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts.len(), 3);
    assert!(pts.iter().all(|p| p["residual"].as_f64().unwrap() < 1e-12));
    let (code, v) = run(&["critical", "--preset", "wp:1,1,2"]);
    assert_eq!(code, 0);
    assert!((v["lambda"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-10);
}

#[test]
fn svg_and_grid() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("r.svg");
    let (code, _) = run(&["region", "--preset", "wp:1,2,2", "--svg", svg.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.contains("width=\"800\""));
    let (code, out, _) = run_args(["orbifloer", "region", "--preset", "teardrop:3", "--grid", "8"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "u1,member,pieces");
    // cell midpoints of [-1/3, 1]; those below 1/3 are members
    assert!(rows.contains(&"-1/4,true,1;4;7;8"));
    assert!(rows.iter().any(|r| r.starts_with("5/12,false")));
    let (code, _) = run(&["region", "--preset", "teardrop:3", "--svg", svg.to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn region_queries() {
    let (code, v) = run(&["region", "--preset", "teardrop:3", "--query", "1/2", "--query", "0", "--query", "5"]);
    assert_eq!(code, 0);
    let q = v["queries"].as_array().unwrap();
    assert_eq!(q[0]["member"], false);
    assert_eq!(q[1]["member"], true);
    assert_eq!(q[2]["member"], false);
}

#[test]
fn reproduce_matches_stored_outputs() {
    for name in NAMES {
        let (code, v) = run(&["reproduce", name]);
        assert_eq!(code, 0, "{name}: {v}");
    }
}

#[test]
fn difference_reporting() {
    let a = serde_json::json!({"x": [1.0, {"y": "1/2"}], "z": 0.1});
    let mut b = a.clone();
    assert_eq!(first_difference(&a, &b, 1e-9), None);
    b["z"] = serde_json::json!(0.1 + 1e-12);
    assert_eq!(first_difference(&a, &b, 1e-9), None);
    b["x"][1]["y"] = serde_json::json!("1/3");
    assert_eq!(first_difference(&a, &b, 1e-9).unwrap(), "$.x[1].y: \"1/2\" vs \"1/3\"");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_orbifloer");
    let out = std::process::Command::new(bin).args(["box", "--preset", "teardrop:3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["count"], 2);
    let out = std::process::Command::new(bin).args(["region", "--preset", "wp:1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["error"]["kind"], "validation");
}
