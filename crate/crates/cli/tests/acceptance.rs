//! Acceptance checks AC01..AC12. Prints one line per criterion and exits
//! nonzero if any fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use orbifloer_cli::run_args;
use orbifloer_core::disc::{intersections_of, maslov_cw, maslov_cw_raw, maslov_de, maslov_de_raw, DiscDescriptor};
use orbifloer_core::lattice::{
    integral_basis_in_cone_traced, saturate_flag, smith_normal_form, IntMatrix, LatticeVector, RationalVector,
    SimplicialCone,
};
use orbifloer_core::ltsolver::{build_lts, solve, stratify, GenRef, SolveOptions};
use orbifloer_core::potential::{smooth_leading_potential, wp_central_critical};
use orbifloer_core::region::{nondisplaceable_region, query_point, FiberRegion, ScenarioFamily};
use orbifloer_core::{BulkParam, RegionOptions, SolveStatus, StackyModel};

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn pt(c: &[(i64, i64)]) -> RationalVector {
    RationalVector(c.iter().map(|&(n, d)| q(n, d)).collect())
}

fn cli(args: &[&str]) -> Result<Value, String> {
    let (code, out, err) = run_args(std::iter::once("orbifloer").chain(args.iter().copied()));
    ensure!(code == 0, "{args:?} exited {code}: {err}");
    serde_json::from_str(&out).map_err(|e| e.to_string())
}

fn region(preset: &str, closure: bool) -> (StackyModel, FiberRegion) {
    let m = StackyModel::preset(preset).unwrap();
    let r = nondisplaceable_region(&m, &RegionOptions { closure, ..Default::default() }).unwrap();
    (m, r)
}

fn member(m: &StackyModel, r: &FiberRegion, u: &RationalVector) -> bool {
    query_point(m, r, u).map(|x| x.member).unwrap_or(false)
}

// exact linear algebra for the oracles

fn to_q(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

fn det(m: &[Vec<BigInt>]) -> BigRational {
    let mut a: Vec<Vec<BigRational>> = m.iter().map(|r| r.iter().map(to_q).collect()).collect();
    let n = a.len();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return BigRational::zero() };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            let pr = a[c].clone();
            for (x, y) in a[i].iter_mut().zip(&pr) {
                *x -= &f * y;
            }
        }
    }
    d
}

/// `x` with `Σ x_i basis_i = v`, when `v` is in the rational span.
fn coords(basis: &[LatticeVector], v: &LatticeVector) -> Option<Vec<BigRational>> {
    let r = basis.len();
    let n = v.0.len();
    let mut a: Vec<Vec<BigRational>> =
        (0..n).map(|i| basis.iter().map(|b| to_q(&b.0[i])).chain([to_q(&v.0[i])]).collect()).collect();
    let mut row = 0;
    let mut piv = Vec::new();
    for c in 0..r {
        let p = (row..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(row, p);
        let inv = a[row][c].recip();
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != row && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pr = a[row].clone();
                for (x, y) in a[i].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        piv.push(row);
        row += 1;
    }
    if (row..n).any(|i| !a[i][r].is_zero()) {
        return None;
    }
    Some(piv.iter().map(|&i| a[i][r].clone()).collect())
}

fn in_z_span(basis: &[LatticeVector], v: &LatticeVector) -> bool {
    coords(basis, v).is_some_and(|x| x.iter().all(|c| c.is_integer()))
}

fn nested(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    m.row_vectors().into_iter().map(|v| v.0).collect()
}

fn matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    a.iter()
        .map(|row| (0..b[0].len()).map(|j| row.iter().zip(b).map(|(x, br)| x * &br[j]).sum()).collect())
        .collect()
}

// criteria

fn ac01() -> Check {
    for a in [2i64, 3, 5] {
        let v = cli(&["region", "--preset", &format!("teardrop:{a}"), "--closure"])?;
        let union = v["union"].as_array().ok_or("no union")?;
        ensure!(union.len() == 1, "a={a}: {} intervals", union.len());
        let iv = &union[0];
        let lo = q(-1, a);
        let hi = (q(1, 1) - q(1, a)) / q(2, 1);
        ensure!(iv["lower"] == lo.to_string() && iv["lower_closed"] == false, "a={a}: lower {}", iv["text"]);
        ensure!(iv["upper"] == hi.to_string() && iv["upper_closed"] == true, "a={a}: upper {}", iv["text"]);
    }
    Ok("(-1/2, 1/4], (-1/3, 1/3], (-1/5, 2/5]".into())
}

fn ac02() -> Check {
    let mut worst = 0.0f64;
    for a in [2u32, 3, 5] {
        let m = StackyModel::preset(&format!("teardrop:{a}")).unwrap();
        let u = pt(&[(0, 1)]);
        let lts = build_lts(&stratify(&m, &u, &BulkParam::none()).unwrap()).unwrap();
        let v = solve(&lts, &SolveOptions::default());
        ensure!(v.status == SolveStatus::SolvableCertified, "a={a}: {:?}", v.status);
        let roots = &v.level_roots[0];
        ensure!(roots.len() == a as usize + 1, "a={a}: {} roots", roots.len());
        let pot = smooth_leading_potential(&m, &u).unwrap();
        let mut seen: Vec<Complex64> = Vec::new();
        for r in roots {
            let y = lts.to_original_coords(r)[0];
            ensure!((y.powu(a + 1) - Complex64::new(1.0 / a as f64, 0.0)).norm() < 1e-12, "a={a}: {y} is not a root");
            ensure!(seen.iter().all(|s| (s - y).norm() > 1e-8), "a={a}: repeated root");
            seen.push(y);
            let res = pot.critical_residual(&[y], 0.5, &BTreeMap::new()).unwrap();
            worst = worst.max(res);
            ensure!(res < 1e-12, "a={a}: residual {res:e}");
        }
    }
    Ok(format!("3/4/6 roots, max residual {worst:.1e}"))
}

fn ac03() -> Check {
    let m = StackyModel::preset("wp:1,3,5").unwrap();
    let got: Vec<Vec<BigInt>> = m.sectors().iter().map(|e| e.nu.0.clone()).collect();
    let want: Vec<Vec<BigInt>> = [[0, -1], [-1, -2], [-1, -3], [-2, -4], [-1, -1], [-2, -3]]
        .iter()
        .map(|c| c.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    ensure!(got == want, "sectors {got:?}");
    // affine functions agree iff they agree on an affine basis
    let l1 = m.sector_ell_form(&m.sectors()[0]);
    let l2 = m.sector_ell_form(&m.sectors()[1]);
    for u in [pt(&[(0, 1), (0, 1)]), pt(&[(1, 1), (0, 1)]), pt(&[(0, 1), (1, 1)])] {
        let (u1, u2) = (&u.0[0], &u.0[1]);
        ensure!(l1.eval(&u) == q(4, 5) - u2, "l_nu1 at {u}");
        ensure!(l2.eval(&u) == q(3, 5) - u1 - q(2, 1) * u2, "l_nu2 at {u}");
    }
    Ok(format!("l_nu1 = {l1}, l_nu2 = {l2}"))
}

/// Some single piece contains every sampled point of the open segment
/// `start + t (end - start)`, `0 < t < 1`, and neither endpoint.
fn segment_piece(r: &FiberRegion, start: &[BigRational], end: &[BigRational]) -> Option<usize> {
    let on = |t: BigRational| -> Vec<BigRational> {
        start.iter().zip(end).map(|(s, e)| s + (e - s) * &t).collect()
    };
    r.pieces.iter().position(|p| {
        (1..100).all(|k| p.region.contains(&on(q(k, 100))))
            && !p.region.contains(&on(q(0, 1)))
            && !p.region.contains(&on(q(1, 1)))
    })
}

fn ac04() -> Check {
    let (m, r) = region("wp:1,2,2", false);
    let seg = segment_piece(&r, &[q(-1, 6), q(-1, 6)], &[q(0, 1), q(0, 1)]).ok_or("no piece on the segment")?;
    ensure!(member(&m, &r, &pt(&[(0, 1), (0, 1)])), "center is not a member");
    ensure!(member(&m, &r, &pt(&[(-1, 12), (-1, 12)])), "(-1/12, -1/12) is not a member");
    ensure!(!member(&m, &r, &pt(&[(-1, 4), (-1, 4)])), "(-1/4, -1/4) is a member");
    Ok(format!("segment piece {}", r.pieces[seg].scenario.label()))
}

fn ac05() -> Check {
    let (m, r) = region("wp:1,1,3", false);
    let seg = segment_piece(&r, &[q(-1, 1), q(2, 3)], &[q(0, 1), q(0, 1)]).ok_or("no piece on the segment")?;
    ensure!(member(&m, &r, &pt(&[(-1, 2), (1, 3)])), "(-1/2, 1/3) is not a member");
    Ok(format!("segment piece {}", r.pieces[seg].scenario.label()))
}

/// Case-by-case description of the P(1,3,5) region, written with the areas
/// `ℓ_0 = 1 - 3u1 - 5u2`, `ℓ_1 = 1 + u1`, `ℓ_2 = 1 + u2`,
/// `ℓ_ν1 = 4/5 - u2`, `ℓ_ν2 = 3/5 - u1 - 2u2`, plus the open triangle.
fn p135_oracle(x: &BigRational, y: &BigRational) -> bool {
    let l0 = q(1, 1) - q(3, 1) * x - q(5, 1) * y;
    let l1 = q(1, 1) + x;
    let l2 = q(1, 1) + y;
    let n1 = q(4, 5) - y;
    let n2 = q(3, 5) - x - q(2, 1) * y;
    let case1 = l0 < l1 && l0 < l2 && n1 < l0 && n2 < l0;
    let case2 = l1 < l0 && l1 < l2 && n1 < l1 && n2 < l1;
    let case3 = l0 == l1 && l0 < l2 && n1 < l0;
    let triangle = y > &q(-1, 10) && y < x && y < &(q(-1, 2) * x);
    case1 || case2 || case3 || triangle
}

fn ac06() -> Check {
    let (m, r) = region("wp:1,3,5", false);
    let members = [pt(&[(1, 20), (0, 1)]), pt(&[(-1, 10), (1, 100)]), pt(&[(0, 1), (-1, 20)])];
    let non_members = [pt(&[(1, 2), (1, 10)]), pt(&[(3, 20), (1, 10)])];
    for (u, want) in members.iter().map(|u| (u, true)).chain(non_members.iter().map(|u| (u, false))) {
        let got = member(&m, &r, u);
        ensure!(got == want, "{u}: artifact says {got}");
        ensure!(p135_oracle(&u.0[0], &u.0[1]) == want, "{u}: oracle says {}", !want);
    }
    // grid sweep; on the lines u1 = u2 and u1 = -2u2 the artifact certifies extra points
    let (mut agree, mut extra) = (0, 0);
    for i in -40..=40 {
        for j in -40..=40 {
            let u = pt(&[(i, 40), (j, 40)]);
            if !m.is_interior(&u) {
                continue;
            }
            let got = member(&m, &r, &u);
            let want = p135_oracle(&u.0[0], &u.0[1]);
            if i == j || i == -2 * j {
                ensure!(got || !want, "{u}: oracle member missing");
                extra += usize::from(got && !want);
            } else {
                ensure!(got == want, "{u}: artifact {got}, oracle {want}");
                agree += 1;
            }
        }
    }
    Ok(format!("battery ok; grid {agree} points agree, {extra} extra on two segments"))
}

fn ac07() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut total = 0;
    for preset in ["interval:2,2", "square:2,2,2,2"] {
        let (m, r) = region(preset, false);
        let mut checked = 0;
        while checked < 200 {
            let u = RationalVector(
                (0..m.dim())
                    .map(|_| {
                        let d = rng.random_range(2..60i64);
                        q(rng.random_range(1..d), d)
                    })
                    .collect(),
            );
            let ells: Vec<BigRational> = (0..m.num_facets()).map(|j| m.ell(j, &u)).collect();
            if !m.is_interior(&u) || (0..ells.len()).any(|a| (0..a).any(|b| ells[a] == ells[b])) {
                continue;
            }
            let hit = query_point(&m, &r, &u).map_err(|e| e.to_string())?;
            ensure!(hit.member, "{preset} {u} is not a member");
            let piece = hit
                .pieces
                .iter()
                .map(|&(i, _)| &r.pieces[i])
                .find(|p| p.scenario.family == ScenarioFamily::LabelMatched)
                .ok_or_else(|| format!("{preset} {u}: no label-matched piece"))?;
            // each level pairs b_j with ν = b_j / c_j and coefficient -c_j,
            // i.e. y^{c_j} - c_j y in the variable y^ν
            for level in &piece.scenario.levels {
                let [GenRef::Facet(j), GenRef::Sector(k)] = level.as_slice() else {
                    return Err(format!("{preset}: unexpected level {level:?}"));
                };
                let c = m.facets()[*j].label.clone();
                ensure!(m.sectors()[*k].nu.scale(&c) == m.stacky_vector(*j), "{preset}: ν is not b/c");
                let coeff = &piece.scenario.fixed_coeffs[k];
                ensure!(coeff.re == -to_q(&c) && coeff.im.is_zero(), "{preset}: coefficient {coeff}");
            }
            let cert = piece.verdict.certificate.as_ref().ok_or("no certificate")?;
            ensure!(cert.exact_zero, "{preset} {u}: residual not exactly zero");
            let ys = cert.y_exact.as_ref().ok_or("no exact point")?;
            ensure!(ys.iter().all(|y| y.re.is_one() && y.im.is_zero()), "{preset} {u}: y != 1");
            checked += 1;
        }
        total += checked;
    }
    Ok(format!("{total} points, all exact at y = 1"))
}

fn random_model(rng: &mut ChaCha8Rng) -> StackyModel {
    let desc = match rng.random_range(0..4) {
        0 => format!("teardrop:{}", rng.random_range(1..8)),
        1 => format!("wp:1,{},{}", rng.random_range(1..7), rng.random_range(1..7)),
        2 => {
            let c: Vec<String> = (0..4).map(|_| rng.random_range(1..5).to_string()).collect();
            format!("square:{}", c.join(","))
        }
        _ => format!("interval:{},{}", rng.random_range(1..6), rng.random_range(1..6)),
    };
    StackyModel::preset(&desc).unwrap()
}

/// `ι(ν)`: coefficient sum of `ν` over the stacky vectors of the first top
/// cone where all coefficients lie in `[0, 1)`.
fn iota_oracle(m: &StackyModel, nu: &LatticeVector) -> BigRational {
    for cone in m.cones() {
        let gens: Vec<LatticeVector> = cone.facets.iter().map(|&j| m.stacky_vector(j)).collect();
        if let Some(c) = coords(&gens, nu) {
            if c.iter().all(|x| !x.is_negative() && x < &BigRational::one()) {
                return c.into_iter().sum();
            }
        }
    }
    panic!("{nu} is in no cone box");
}

fn ac08() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut orbi = 0;
    for _ in 0..1000 {
        let m = random_model(&mut rng);
        let ns = m.sectors().len();
        let d = DiscDescriptor {
            smooth: (0..m.num_facets()).map(|_| rng.random_range(0..4)).collect(),
            orb_points: if ns == 0 { Vec::new() } else { (0..rng.random_range(0..4)).map(|_| rng.random_range(0..ns)).collect() },
            k_boundary: rng.random_range(0..3),
            l_interior_smooth: rng.random_range(0..2),
        };
        orbi += d.orb_points.len();
        let iota: BigRational = d.orb_points.iter().map(|&k| iota_oracle(&m, &m.sectors()[k].nu)).sum();
        let de = maslov_de(&m, &d);
        let cw = maslov_cw(&m, &d);
        ensure!(cw == BigRational::from_integer(de.into()) + q(2, 1) * &iota, "descriptor {d:?}");
        let pts = intersections_of(&m, &d);
        ensure!(maslov_de_raw(&pts) == de && maslov_cw_raw(&pts) == cw, "local data disagree for {d:?}");
        ensure!(de % 2 == 0, "odd desingularized index {de}");
    }
    Ok(format!("1000 descriptors, {orbi} orbifold points"))
}

fn ac09() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut done, mut longest) = (0, Vec::new());
    while done < 200 {
        let n = rng.random_range(2..=3);
        let gens: Vec<LatticeVector> =
            (0..n).map(|_| LatticeVector((0..n).map(|_| BigInt::from(rng.random_range(-7..=7))).collect())).collect();
        let mult = det(&gens.iter().map(|g| g.0.clone()).collect::<Vec<_>>()).abs();
        if mult.is_zero() || mult > q(50, 1) {
            continue;
        }
        let sub = integral_basis_in_cone_traced(&SimplicialCone::new(gens.clone()).unwrap());
        let b = det(&sub.basis.iter().map(|g| g.0.clone()).collect::<Vec<_>>()).abs();
        ensure!(b.is_one(), "{gens:?}: basis determinant {b}");
        for v in &sub.basis {
            let c = coords(&gens, v).ok_or("basis vector outside the span")?;
            ensure!(c.iter().all(|x| !x.is_negative()), "{gens:?}: {v} outside the cone");
        }
        ensure!(to_q(&sub.multiplicities[0]) == mult, "{gens:?}: starts at {}", sub.multiplicities[0]);
        ensure!(sub.multiplicities.windows(2).all(|w| w[1] < w[0]), "{gens:?}: {:?}", sub.multiplicities);
        if sub.multiplicities.len() > longest.len() {
            longest = sub.multiplicities.clone();
        }
        done += 1;
    }
    let seq: Vec<String> = longest.iter().map(|x| x.to_string()).collect();
    Ok(format!("200 cones, longest multiplicity chain {}", seq.join(" > ")))
}

fn ac10() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..500 {
        let (rows, cols) = (rng.random_range(1..=5), rng.random_range(1..=5));
        let a: Vec<Vec<BigInt>> =
            (0..rows).map(|_| (0..cols).map(|_| BigInt::from(rng.random_range(-9..=9))).collect()).collect();
        let am = IntMatrix::from_row_vectors(&a.iter().cloned().map(LatticeVector).collect::<Vec<_>>());
        let s = smith_normal_form(&am);
        let d = nested(&s.d);
        ensure!(matmul(&matmul(&nested(&s.u), &a), &nested(&s.v)) == d, "U A V != D for {a:?}");
        ensure!(det(&nested(&s.u)).abs().is_one() && det(&nested(&s.v)).abs().is_one(), "U or V not unimodular");
        let diag: Vec<BigInt> = (0..rows.min(cols)).map(|i| d[i][i].clone()).collect();
        for i in 0..rows {
            for j in 0..cols {
                ensure!(i == j || d[i][j].is_zero(), "D not diagonal for {a:?}");
            }
        }
        for w in diag.windows(2) {
            ensure!(!w[0].is_negative(), "negative invariant factor");
            ensure!(if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() }, "chain broken: {diag:?}");
        }

        // saturation oracle: the first r rows of V^{-1} span sat(A)
        let vs: Vec<LatticeVector> = a.iter().cloned().map(LatticeVector).collect();
        if vs.iter().all(|v| v.0.iter().all(Zero::is_zero)) {
            continue;
        }
        // cumulative prefixes at random cut points where the rank grows
        let mut flag: Vec<Vec<LatticeVector>> = Vec::new();
        let mut last = 0;
        for k in 1..=rows {
            let r = smith_normal_form(&IntMatrix::from_row_vectors(&vs[..k])).rank();
            if r > last && (k == rows || rng.random_bool(0.5)) {
                flag.push(vs[..k].to_vec());
                last = r;
            }
        }
        if flag.is_empty() {
            flag.push(vs.clone());
        }
        let w = saturate_flag(&flag).map_err(|e| e.to_string())?;
        ensure!(det(&w.iter().map(|v| v.0.clone()).collect::<Vec<_>>()).abs().is_one(), "adapted basis not unimodular");
        for level in &flag {
            let sl = smith_normal_form(&IntMatrix::from_row_vectors(level));
            let r = sl.rank();
            let vinv = sl.v.inverse_unimodular().map_err(|e| e.to_string())?;
            let sat: Vec<LatticeVector> = vinv.row_vectors()[..r].to_vec();
            let prefix = &w[..r];
            ensure!(prefix.iter().all(|v| in_z_span(&sat, v)), "prefix not in saturation");
            ensure!(sat.iter().all(|v| in_z_span(prefix, v)), "saturation not in prefix span");
        }
    }
    Ok("500 matrices".into())
}

fn ac11() -> Check {
    let mut notes = Vec::new();
    for w in [[1u64, 1, 2].as_slice(), &[1, 2, 3], &[1, 1, 1, 2]] {
        let c = wp_central_critical(w).map_err(|e| e.to_string())?;
        ensure!(c.residual < 1e-10, "{w:?}: residual {:e}", c.residual);
        notes.push(format!("{:?}: {:.1e}", &w[1..], c.residual));
    }
    let c = wp_central_critical(&[1, 1, 2]).unwrap();
    let err = (c.lambda - 0.5f64.sqrt()).abs();
    ensure!(err < 1e-10, "lambda {} off by {err:e}", c.lambda);
    Ok(format!("residuals {}; |lambda - 2^-1/2| = {err:.1e}", notes.join(", ")))
}

fn ac12() -> Check {
    let run = || run_args(["orbifloer", "reproduce", "all", "--seed", "0"]);
    let (c1, a, e1) = run();
    let (c2, b, _) = run();
    ensure!(c1 == 0 && c2 == 0, "reproduce failed: {e1}");
    ensure!(a == b, "outputs differ");
    Ok(format!("{} bytes identical", a.len()))
}

fn main() {
    let checks: [(&str, &str, fn() -> Check); 12] = [
        ("AC01", "teardrop regions", ac01),
        ("AC02", "teardrop central critical points", ac02),
        ("AC03", "P(1,3,5) twisted sectors", ac03),
        ("AC04", "P(1,2,2) diagonal segment", ac04),
        ("AC05", "P(1,1,3) segment", ac05),
        ("AC06", "P(1,3,5) point battery", ac06),
        ("AC07", "all labels >= 2", ac07),
        ("AC08", "index identity", ac08),
        ("AC09", "cone basis", ac09),
        ("AC10", "Smith form and saturation", ac10),
        ("AC11", "weighted projective central fibers", ac11),
        ("AC12", "determinism of reproduce", ac12),
    ];
    let mut failed = 0;
    for (id, name, f) in checks {
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(note) => println!("{id} {name} ... PASS ({note}) [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("{id} {name} ... FAIL: {why} [{secs:.1}s]");
            }
        }
    }
    println!("{} passed, {failed} failed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
