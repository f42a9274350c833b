//! Worked examples with stored outputs.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use orbifloer_core::ltsolver::{build_lts, solve, stratify, SolveOptions};
use orbifloer_core::potential::bulk_leading_potential;
use orbifloer_core::region::{nondisplaceable_region, query_point, ScenarioFamily};
use orbifloer_core::report::{rats, BoxReport, CriticalReport, DiscsReport, RegionReport};
use orbifloer_core::{BulkParam, FiberRegion, RationalVector, RegionOptions, StackyModel};

use crate::{membership, CliError, ErrorKind, Output};

pub const NAMES: [&str; 6] = ["teardrop-a3", "wp-1-3-5-box", "p1aa-a2", "p11a-a3", "p135-region", "allnon-demo"];

/// Absolute tolerance for floating point fields when comparing outputs.
pub const FLOAT_TOL: f64 = 1e-9;

pub fn expected(name: &str) -> Option<&'static str> {
    Some(match name {
        "teardrop-a3" => include_str!("../expected/teardrop-a3.json"),
        "wp-1-3-5-box" => include_str!("../expected/wp-1-3-5-box.json"),
        "p1aa-a2" => include_str!("../expected/p1aa-a2.json"),
        "p11a-a3" => include_str!("../expected/p11a-a3.json"),
        "p135-region" => include_str!("../expected/p135-region.json"),
        "allnon-demo" => include_str!("../expected/allnon-demo.json"),
        _ => return None,
    })
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn point(c: &[(i64, i64)]) -> RationalVector {
    RationalVector(c.iter().map(|&(n, d)| q(n, d)).collect())
}

fn preset(name: &str) -> Result<StackyModel, CliError> {
    Ok(StackyModel::preset(name)?)
}

fn region(m: &StackyModel, closure: bool, seed: u64, jobs: usize) -> Result<FiberRegion, CliError> {
    Ok(nondisplaceable_region(m, &RegionOptions { max_levels: 2, closure, seed, jobs })?)
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn region_with_queries(
    preset_name: &str,
    closure: bool,
    points: &[RationalVector],
    seed: u64,
    jobs: usize,
) -> Result<Value, CliError> {
    let m = preset(preset_name)?;
    let r = region(&m, closure, seed, jobs)?;
    let queries = points.iter().map(|u| membership(&m, &r, u).map(|x| to_value(&x))).collect::<Result<Vec<_>, _>>()?;
    Ok(json!({
        "model": preset_name,
        "region": to_value(&RegionReport::new(&m, &r)),
        "queries": queries,
    }))
}

/// Runs one example and returns its JSON output.
pub fn output(name: &str, seed: u64, jobs: usize) -> Result<Value, CliError> {
    match name {
        "teardrop-a3" => {
            let m = preset("teardrop:3")?;
            let r = region(&m, true, seed, jobs)?;
            let u = point(&[(0, 1)]);
            let bp = BulkParam::none();
            let pot = bulk_leading_potential(&m, &u, &bp)?;
            let lts = build_lts(&stratify(&m, &u, &bp)?)?;
            let v = solve(&lts, &SolveOptions::for_model(&m, seed));
            Ok(json!({
                "model": "teardrop:3",
                "region": to_value(&RegionReport::new(&m, &r)),
                "critical": to_value(&CriticalReport::new(&pot, &lts, &v, 0.5)?),
            }))
        }
        "wp-1-3-5-box" => {
            let m = preset("wp:1,3,5")?;
            Ok(json!({
                "model": "wp:1,3,5",
                "box": to_value(&BoxReport::new(&m)),
                "discs": to_value(&DiscsReport::new(&m, None)),
            }))
        }
        "p1aa-a2" => region_with_queries("wp:1,2,2", false, &[point(&[(-1, 12), (-1, 12)]), point(&[(-1, 4), (-1, 4)])], seed, jobs),
        "p11a-a3" => region_with_queries("wp:1,1,3", false, &[point(&[(-1, 2), (1, 3)])], seed, jobs),
        "p135-region" => region_with_queries(
            "wp:1,3,5",
            false,
            &[
                point(&[(1, 20), (0, 1)]),
                point(&[(-1, 10), (1, 100)]),
                point(&[(0, 1), (-1, 20)]),
                point(&[(1, 2), (1, 10)]),
                point(&[(3, 20), (1, 10)]),
            ],
            seed,
            jobs,
        ),
        "allnon-demo" => {
            let interval = region_with_queries("interval:2,2", false, &[point(&[(1, 3)]), point(&[(5, 7)])], seed, jobs)?;
            let m = preset("square:2,2,2,2")?;
            let r = region(&m, false, seed, jobs)?;
            let mut samples = Vec::new();
            for k in 1..=20i64 {
                let u = point(&[((7 * k) % 22 + 1, 23), ((11 * k) % 28 + 1, 29)]);
                let qm = query_point(&m, &r, &u)?;
                let matched = qm.pieces.iter().map(|&(i, _)| &r.pieces[i]).find(|p| p.scenario.family == ScenarioFamily::LabelMatched);
                samples.push(json!({
                    "u": rats(&u.0),
                    "member": qm.member,
                    "label_matched": matched.map(|p| json!({
                        "scenario": p.scenario.label(),
                        "exact_zero": p.verdict.certificate.as_ref().is_some_and(|c| c.exact_zero),
                        "y_exact": p.verdict.certificate.as_ref().and_then(|c| c.y_exact.as_ref()).map(|ys| ys.iter().map(orbifloer_core::series::render_gauss).collect::<Vec<_>>()),
                    })),
                }));
            }
            let label_matched = r.pieces.iter().filter(|p| p.scenario.family == ScenarioFamily::LabelMatched).count();
            Ok(json!({
                "interval": interval,
                "square": {
                    "model": "square:2,2,2,2",
                    "scenarios_examined": r.scenarios_examined,
                    "scenarios_feasible": r.scenarios_feasible,
                    "pieces": r.pieces.len(),
                    "label_matched_pieces": label_matched,
                    "samples": samples,
                },
            }))
        }
        _ => Err(CliError::validation(format!("unknown example {name:?}; expected one of {} or all", NAMES.join(", ")))),
    }
}

/// First place where `a` and `b` differ, numbers compared with `tol`.
pub fn first_difference(a: &Value, b: &Value, tol: f64) -> Option<String> {
    fn walk(a: &Value, b: &Value, tol: f64, path: &mut String) -> Option<String> {
        match (a, b) {
            (Value::Number(x), Value::Number(y)) => {
                let (x, y) = (x.as_f64()?, y.as_f64()?);
                ((x - y).abs() > tol).then(|| format!("{path}: {x} vs {y}"))
            }
            (Value::Array(xs), Value::Array(ys)) => {
                if xs.len() != ys.len() {
                    return Some(format!("{path}: length {} vs {}", xs.len(), ys.len()));
                }
                xs.iter().zip(ys).enumerate().find_map(|(i, (x, y))| {
                    let n = path.len();
                    path.push_str(&format!("[{i}]"));
                    let d = walk(x, y, tol, path);
                    path.truncate(n);
                    d
                })
            }
            (Value::Object(xs), Value::Object(ys)) => {
                if let Some(k) = xs.keys().chain(ys.keys()).find(|k| !xs.contains_key(*k) || !ys.contains_key(*k)) {
                    return Some(format!("{path}.{k}: present on one side only"));
                }
                xs.iter().find_map(|(k, x)| {
                    let n = path.len();
                    path.push_str(&format!(".{k}"));
                    let d = walk(x, &ys[k], tol, path);
                    path.truncate(n);
                    d
                })
            }
            _ => (a != b).then(|| format!("{path}: {a} vs {b}")),
        }
    }
    walk(a, b, tol, &mut String::from("$"))
}

pub fn run(name: &str, seed: u64, jobs: usize, print_only: bool) -> Result<Output, CliError> {
    let names: Vec<&str> = if name == "all" { NAMES.to_vec() } else { vec![name] };
    let mut outputs = serde_json::Map::new();
    let mut mismatches = Vec::new();
    for n in names {
        let got = output(n, seed, jobs)?;
        if !print_only {
            let want: Value = serde_json::from_str(expected(n).expect("known example"))
                .map_err(|e| CliError::internal(format!("stored output for {n} is not JSON: {e}")))?;
            if let Some(d) = first_difference(&got, &want, FLOAT_TOL) {
                mismatches.push(json!({ "example": n, "difference": d }));
            }
        }
        outputs.insert(n.to_string(), got);
    }
    if !mismatches.is_empty() {
        return Err(CliError {
            kind: ErrorKind::Mismatch,
            message: format!("{} example(s) differ from the stored output", mismatches.len()),
            detail: Some(Value::Array(mismatches)),
        });
    }
    Ok(Output::Json(if name == "all" { Value::Object(outputs) } else { outputs.remove(name).expect("just inserted") }))
}
