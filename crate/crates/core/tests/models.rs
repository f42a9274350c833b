use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use orbifloer_core::ltsolver::{build_lts, solve, stratify, SolveOptions};
use orbifloer_core::potential::{smooth_leading_potential, wp_central_critical};
use orbifloer_core::report::{BoxReport, DiscsReport, ModelReport, RegionReport};
use orbifloer_core::region::nondisplaceable_region;
use orbifloer_core::{BulkParam, LatticeVector, RationalVector, RegionOptions, SolveStatus, StackyModel};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rv(c: &[(i64, i64)]) -> RationalVector {
    RationalVector(c.iter().map(|&(n, d)| q(n, d)).collect())
}

#[test]
fn teardrop_central_roots() {
    for a in [2u64, 3, 5] {
        let m = StackyModel::preset(&format!("teardrop:{a}")).unwrap();
        let u = rv(&[(0, 1)]);
        let strat = stratify(&m, &u, &BulkParam::none()).unwrap();
        let lts = build_lts(&strat).unwrap();
        let v = solve(&lts, &SolveOptions::default());
        assert_eq!(v.status, SolveStatus::SolvableCertified);
        let roots = &v.level_roots[0];
        assert_eq!(roots.len(), a as usize + 1, "a = {a}");
        let pot = smooth_leading_potential(&m, &u).unwrap();
        let target = Complex64::new(1.0 / a as f64, 0.0);
        let mut seen: Vec<Complex64> = Vec::new();
        for r in roots {
            let y = lts.to_original_coords(r);
            assert!((y[0].powu(a as u32 + 1) - target).norm() < 1e-12);
            let res = pot.critical_residual(&y, 0.5, &BTreeMap::new()).unwrap();
            assert!(res < 1e-12, "residual {res}");
            assert!(seen.iter().all(|s| (s - y[0]).norm() > 1e-6), "repeated root");
            seen.push(y[0]);
        }
    }
}

#[test]
fn p135_sectors() {
    let m = StackyModel::preset("wp:1,3,5").unwrap();
    let nus: Vec<LatticeVector> = m.sectors().iter().map(|e| e.nu.clone()).collect();
    let expect: Vec<LatticeVector> = [[0, -1], [-1, -2], [-1, -3], [-2, -4], [-1, -1], [-2, -3]]
        .iter()
        .map(|c| LatticeVector::from_i64(c))
        .collect();
    assert_eq!(nus, expect);
    // ℓ_ν1 = 4/5 - u2, ℓ_ν2 = 3/5 - u1 - 2u2
    let l1 = m.sector_ell_form(&m.sectors()[0]);
    let l2 = m.sector_ell_form(&m.sectors()[1]);
    for (u1, u2) in [(0, 0), (1, 0), (0, 1), (3, -7)] {
        let u = rv(&[(u1, 10), (u2, 10)]);
        assert_eq!(l1.eval(&u), q(4, 5) - q(u2, 10));
        assert_eq!(l2.eval(&u), q(3, 5) - q(u1, 10) - q(2 * u2, 10));
    }
}

#[test]
fn weighted_projective_central_fibers() {
    for w in [[1u64, 1, 2].as_slice(), &[1, 2, 3], &[1, 1, 1, 2]] {
        let c = wp_central_critical(w).unwrap();
        assert!(c.residual < 1e-10);
        for (i, y) in c.y.iter().enumerate() {
            assert!((y - w[i + 1] as f64 * c.lambda).abs() < 1e-9);
        }
    }
    let c = wp_central_critical(&[1, 1, 2]).unwrap();
    assert!((c.lambda - 0.5f64.sqrt()).abs() < 1e-10);
}

#[test]
fn reports_round_trip_through_json() {
    let m = StackyModel::preset("wp:1,3,5").unwrap();
    let b = BoxReport::new(&m);
    let s = serde_json::to_string(&b).unwrap();
    assert_eq!(serde_json::from_str::<BoxReport>(&s).unwrap(), b);
    let mr = ModelReport::new(&m);
    assert_eq!(serde_json::from_str::<ModelReport>(&serde_json::to_string(&mr).unwrap()).unwrap(), mr);
    let d = DiscsReport::new(&m, Some(&rv(&[(1, 20), (0, 1)])));
    assert_eq!(serde_json::from_str::<DiscsReport>(&serde_json::to_string(&d).unwrap()).unwrap(), d);
    // rationals are strings, never floats
    let v: serde_json::Value = serde_json::to_value(&b).unwrap();
    assert!(v["sectors"][0]["iota"].is_string());

    let t = StackyModel::preset("teardrop:3").unwrap();
    let r = nondisplaceable_region(&t, &RegionOptions { closure: true, ..Default::default() }).unwrap();
    let rep = RegionReport::new(&t, &r);
    let s = serde_json::to_string_pretty(&rep).unwrap();
    assert_eq!(serde_json::from_str::<RegionReport>(&s).unwrap(), rep);
}
