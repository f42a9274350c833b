use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lts::{LeadingTermSystem, LtsLevel};
use crate::lattice::rank;
use crate::potential::exact_log_residual;
use crate::series::{gauss, gauss_pow, gauss_real, gauss_to_c64, GaussRat, LaurentPoly};
use crate::stacky::StackyModel;

/// Residual below which a numeric solution is accepted.
pub const CERT_TOL: f64 = 1e-10;
/// Coordinates must stay this far from zero (and from infinity).
pub const MIN_MODULUS: f64 = 1e-8;
const MAX_BRANCHES: usize = 8;
const NEWTON_SEEDS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    SolvableCertified,
    UnknownLikelyUnsolvable,
    UnsolvableProven,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::SolvableCertified => "SolvableCertified",
            SolveStatus::UnknownLikelyUnsolvable => "UnknownLikelyUnsolvable",
            SolveStatus::UnsolvableProven => "UnsolvableProven",
        }
    }
}

/// A checked solution of the leading term equations.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    /// Values chosen for the free sector coefficients.
    pub symbol_values: BTreeMap<String, GaussRat>,
    /// Solution in the adapted coordinates.
    pub y_adapted: Vec<Complex64>,
    /// The same point in the original coordinates `y_1..y_n`.
    pub y: Vec<Complex64>,
    /// Exact adapted coordinates, when every level was solved exactly.
    pub y_exact: Option<Vec<GaussRat>>,
    /// Largest `|y ∂_y|` of any level equation at the solution.
    pub residual: f64,
    /// True when the residual was verified to be exactly zero.
    pub exact_zero: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolvabilityVerdict {
    pub status: SolveStatus,
    pub certificate: Option<Certificate>,
    /// Solutions found at each level along the certified branch.
    pub level_roots: Vec<Vec<Vec<Complex64>>>,
    /// Reason for a proven verdict.
    pub proof: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub seed: u64,
    /// Values tried first for every free coefficient.
    pub special_values: Vec<GaussRat>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { seed: 0, special_values: vec![gauss_real(BigRational::one()), gauss_real(-BigRational::one())] }
    }
}

impl SolveOptions {
    /// Adds `-c` for every facet label `c >= 2`.
    pub fn for_model(m: &StackyModel, seed: u64) -> Self {
        let mut o = SolveOptions { seed, ..Default::default() };
        for f in m.facets() {
            if f.label > BigInt::one() {
                let v = gauss_real(-BigRational::from_integer(f.label.clone()));
                if !o.special_values.contains(&v) {
                    o.special_values.push(v);
                }
            }
        }
        o
    }
}

/// Generic nonzero Gaussian rationals used for free coefficients.
pub fn generic_palette() -> Vec<GaussRat> {
    (0..16i64)
        .map(|k| {
            let re = BigRational::new(BigInt::from((7 * k + 3) % 17 - 8), BigInt::from(5));
            let im = BigRational::new(BigInt::from((11 * k + 5) % 13 - 6), BigInt::from(4));
            gauss(re, im)
        })
        .collect()
}

#[derive(Debug, Clone)]
struct Value {
    num: Complex64,
    exact: Option<GaussRat>,
}

impl Value {
    fn exact(z: GaussRat) -> Self {
        Value { num: gauss_to_c64(&z), exact: Some(z) }
    }
    fn numeric(z: Complex64) -> Self {
        Value { num: z, exact: None }
    }
}

/// Terms of a level with symbols bound: `(exponent, coefficient)`.
type BoundTerms = Vec<(Vec<i64>, GaussRat)>;

struct Group {
    p: Vec<i64>,
    num: Complex64,
    exact: Option<GaussRat>,
}

/// Solves the system level by level. Only the exact structural test can
/// return `UnsolvableProven`; numeric failure gives `UnknownLikelyUnsolvable`.
pub fn solve(lts: &LeadingTermSystem, opts: &SolveOptions) -> SolvabilityVerdict {
    for (l, level) in lts.levels.iter().enumerate() {
        if let Some(reason) = isolated_group(level) {
            return SolvabilityVerdict {
                status: SolveStatus::UnsolvableProven,
                certificate: None,
                level_roots: Vec::new(),
                proof: Some(format!("level {}: {reason}", l + 1)),
            };
        }
    }

    let symbols: Vec<String> = {
        let mut s: Vec<String> = lts.levels.iter().flat_map(|l| l.poly.symbols()).collect();
        s.sort();
        s.dedup();
        s
    };
    let mut candidates = Vec::new();
    if !symbols.is_empty() {
        candidates.extend(unit_point_assignment(lts, &symbols));
    }
    candidates.extend(assignments(&symbols, opts));
    for (ai, assignment) in candidates.into_iter().enumerate() {
        let bound: Vec<BoundTerms> = lts.levels.iter().map(|l| bind_terms(&l.poly, &assignment)).collect();
        let mut values: Vec<Value> = Vec::with_capacity(lts.dim);
        let mut roots = Vec::new();
        if dfs(lts, &bound, 0, &mut values, &mut roots, opts.seed, ai) {
            if let Some(cert) = certify(lts, &assignment, &values) {
                return SolvabilityVerdict {
                    status: SolveStatus::SolvableCertified,
                    certificate: Some(cert),
                    level_roots: roots,
                    proof: None,
                };
            }
        }
    }
    SolvabilityVerdict {
        status: SolveStatus::UnknownLikelyUnsolvable,
        certificate: None,
        level_roots: Vec::new(),
        proof: None,
    }
}

/// A term group (same exponent in this level's variables) consisting of a
/// single monomial whose exponent lies outside the span of all other
/// exponents can never cancel in the log-derivative equations.
fn isolated_group(level: &LtsLevel) -> Option<String> {
    if level.vars.is_empty() {
        return None;
    }
    let mut groups: BTreeMap<Vec<i64>, Vec<(Vec<i64>, usize)>> = BTreeMap::new();
    for (e, s) in level.poly.terms() {
        let p = e[level.vars.clone()].to_vec();
        let c = s.strip_t();
        groups.entry(p).or_default().push((e.clone(), c.num_terms()));
    }
    let keys: Vec<Vec<i64>> = groups.keys().filter(|p| p.iter().any(|&x| x != 0)).cloned().collect();
    for (p, entries) in &groups {
        if p.iter().all(|&x| x == 0) || entries.len() != 1 || entries[0].1 != 1 {
            continue;
        }
        let others: Vec<Vec<BigRational>> =
            keys.iter().filter(|q| *q != p).map(|q| q.iter().map(|&x| rat_i(x)).collect()).collect();
        let mut with = others.clone();
        with.push(p.iter().map(|&x| rat_i(x)).collect());
        let r_others = if others.is_empty() { 0 } else { rank(&others) };
        if rank(&with) > r_others {
            return Some(format!("monomial with exponent {p:?} cannot cancel"));
        }
    }
    None
}

/// At `y = 1` the level equations are linear in the free coefficients.
/// Returns coefficients, all nonzero, making `y = 1` a solution.
fn unit_point_assignment(lts: &LeadingTermSystem, symbols: &[String]) -> Option<BTreeMap<String, GaussRat>> {
    let ns = symbols.len();
    let mut rows: Vec<Vec<GaussRat>> = Vec::new();
    for level in &lts.levels {
        for i in level.vars.clone() {
            let mut row = vec![GaussRat::zero(); ns + 1];
            for (e, sc) in level.poly.terms() {
                if e[i] == 0 {
                    continue;
                }
                let w = gauss_real(rat_i(e[i]));
                for (syms, z) in sc.strip_t().terms() {
                    let col = match syms.as_slice() {
                        [] => ns,
                        [one] => symbols.iter().position(|x| x == one)?,
                        _ => return None,
                    };
                    row[col] += &w * z;
                }
            }
            rows.push(row);
        }
    }
    let (pivots, reduced) = rref(rows, ns);
    // inconsistent: a row reading 0 = nonzero
    if reduced.iter().any(|r| r[..ns].iter().all(Zero::is_zero) && !r[ns].is_zero()) {
        return None;
    }
    let free: Vec<usize> = (0..ns).filter(|c| !pivots.contains(c)).collect();
    for attempt in 0..32usize {
        let mut x = vec![GaussRat::zero(); ns];
        for (k, &f) in free.iter().enumerate() {
            x[f] = gauss_real(rat_i(1 + ((attempt + 3 * k) % 7) as i64));
        }
        for (r, &pc) in pivots.iter().enumerate() {
            // x_pc + Σ_free a x_free + const = 0
            let mut v = -reduced[r][ns].clone();
            for &f in &free {
                v -= &reduced[r][f] * &x[f];
            }
            x[pc] = v;
        }
        if x.iter().all(|z| !z.is_zero()) {
            return Some(symbols.iter().cloned().zip(x).collect());
        }
    }
    None
}

/// Reduced row echelon form over the first `ncols` columns; returns pivot
/// columns and the nonzero rows.
fn rref(mut rows: Vec<Vec<GaussRat>>, ncols: usize) -> (Vec<usize>, Vec<Vec<GaussRat>>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = gauss_real(BigRational::one()) / rows[r][c].clone();
        rows[r] = rows[r].iter().map(|z| z * &inv).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (a, b) in rows[i].iter_mut().zip(&pivot_row) {
                    *a -= &f * b;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (pivots, rows)
}

fn rat_i(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn assignments(symbols: &[String], opts: &SolveOptions) -> Vec<BTreeMap<String, GaussRat>> {
    if symbols.is_empty() {
        return vec![BTreeMap::new()];
    }
    let mut out: Vec<BTreeMap<String, GaussRat>> = opts
        .special_values
        .iter()
        .map(|v| symbols.iter().map(|s| (s.clone(), v.clone())).collect())
        .collect();
    let palette = generic_palette();
    for k in 0..palette.len() {
        out.push(symbols.iter().enumerate().map(|(i, s)| (s.clone(), palette[(k + 5 * i) % palette.len()].clone())).collect());
    }
    out
}

fn bind_terms(poly: &LaurentPoly, values: &BTreeMap<String, GaussRat>) -> BoundTerms {
    poly.terms()
        .filter_map(|(e, s)| {
            let z = s.strip_t().substitute(values).ok()?;
            (!z.is_zero()).then(|| (e.clone(), z))
        })
        .collect()
}

fn dfs(
    lts: &LeadingTermSystem,
    bound: &[BoundTerms],
    l: usize,
    values: &mut Vec<Value>,
    roots: &mut Vec<Vec<Vec<Complex64>>>,
    seed: u64,
    assignment_index: usize,
) -> bool {
    if l == lts.levels.len() {
        return true;
    }
    let vars = lts.levels[l].vars.clone();
    let candidates: Vec<Vec<Value>> = if vars.is_empty() {
        vec![Vec::new()]
    } else {
        let groups = collect_groups(&bound[l], vars.start, vars.len(), values);
        if vars.len() == 1 {
            univariate_roots(&groups).into_iter().map(|v| vec![v]).collect()
        } else {
            let level_seed = seed ^ ((assignment_index as u64) << 32) ^ ((l as u64) << 48);
            multivariate_roots(&groups, vars.len(), level_seed)
        }
    };
    let found: Vec<Vec<Complex64>> = candidates.iter().map(|c| c.iter().map(|v| v.num).collect()).collect();
    for cand in candidates.into_iter().take(MAX_BRANCHES) {
        let keep = values.len();
        values.extend(cand);
        roots.push(found.clone());
        if dfs(lts, bound, l + 1, values, roots, seed, assignment_index) {
            return true;
        }
        roots.pop();
        values.truncate(keep);
    }
    false
}

/// Substitutes earlier-level values and groups by exponent in the current
/// variables, dropping the constant group.
fn collect_groups(terms: &BoundTerms, start: usize, d: usize, values: &[Value]) -> Vec<Group> {
    let mut map: BTreeMap<Vec<i64>, (Complex64, Option<GaussRat>)> = BTreeMap::new();
    for (e, c) in terms {
        let p = e[start..start + d].to_vec();
        let mut num = gauss_to_c64(c);
        let mut exact = Some(c.clone());
        for (j, &k) in e[..start].iter().enumerate() {
            if k == 0 {
                continue;
            }
            num *= c64_pow(values[j].num, k);
            exact = match (exact, &values[j].exact) {
                (Some(x), Some(v)) => Some(x * gauss_pow(v, k)),
                _ => None,
            };
        }
        let slot = map.entry(p).or_insert((Complex64::zero(), Some(GaussRat::zero())));
        slot.0 += num;
        slot.1 = match (slot.1.take(), exact) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
    }
    map.into_iter()
        .filter(|(p, _)| p.iter().any(|&x| x != 0))
        .filter(|(_, (num, exact))| match exact {
            Some(z) => !z.is_zero(),
            None => num.norm() > 1e-13,
        })
        .map(|(p, (num, exact))| Group { p, num, exact })
        .collect()
}

fn c64_pow(z: Complex64, k: i64) -> Complex64 {
    if k >= 0 {
        z.powu(k as u32)
    } else {
        z.inv().powu(k.unsigned_abs() as u32)
    }
}

/// Nonzero roots of `Σ p A_p y^p = 0`.
fn univariate_roots(groups: &[Group]) -> Vec<Value> {
    if groups.is_empty() {
        return vec![Value::exact(gauss_real(BigRational::one()))];
    }
    if groups.len() == 1 {
        return Vec::new();
    }
    let pmin = groups.iter().map(|g| g.p[0]).min().expect("nonempty");
    let pmax = groups.iter().map(|g| g.p[0]).max().expect("nonempty");
    let deg = (pmax - pmin) as usize;
    let mut q = vec![Complex64::zero(); deg + 1];
    for g in groups {
        q[(g.p[0] - pmin) as usize] += g.num * g.p[0] as f64;
    }

    let raw: Vec<Complex64> = if groups.len() == 2 {
        // binomial: y^deg = -q_0 / q_deg
        let r = -q[0] / q[deg];
        let (modulus, arg) = r.to_polar();
        (0..deg)
            .map(|j| Complex64::from_polar(modulus.powf(1.0 / deg as f64), (arg + 2.0 * PI * j as f64) / deg as f64))
            .collect()
    } else {
        companion_roots(&q)
    };

    let log_derivative = |y: Complex64| -> Complex64 {
        groups.iter().fold(Complex64::zero(), |acc, g| acc + g.num * g.p[0] as f64 * c64_pow(y, g.p[0]))
    };
    let mut out: Vec<Value> = Vec::new();
    for y0 in raw {
        let y = polish(&q, y0);
        if !(MIN_MODULUS..1.0 / MIN_MODULUS).contains(&y.norm()) || log_derivative(y).norm() >= CERT_TOL {
            continue;
        }
        if out.iter().any(|v| (v.num - y).norm() < 1e-7) {
            continue;
        }
        let exact = snap(y).filter(|z| exact_univariate_zero(groups, z));
        out.push(match exact {
            Some(z) => Value::exact(z),
            None => Value::numeric(y),
        });
    }
    out.sort_by(|a, b| root_order(a.num, b.num));
    out
}

fn exact_univariate_zero(groups: &[Group], y: &GaussRat) -> bool {
    let mut acc = GaussRat::zero();
    for g in groups {
        let Some(a) = &g.exact else { return false };
        acc += a * gauss_real(rat_i(g.p[0])) * gauss_pow(y, g.p[0]);
    }
    acc.is_zero()
}

/// Positive reals first, then by argument in `[0, 2π)`, then by modulus.
fn root_order(a: Complex64, b: Complex64) -> Ordering {
    let key = |z: Complex64| {
        let positive_real = z.im.abs() < 1e-12 && z.re > 0.0;
        let mut arg = z.arg();
        if arg < -1e-12 {
            arg += 2.0 * PI;
        }
        (!positive_real, arg.max(0.0), z.norm())
    };
    let (ka, kb) = (key(a), key(b));
    ka.0.cmp(&kb.0)
        .then(ka.1.partial_cmp(&kb.1).unwrap_or(Ordering::Equal))
        .then(ka.2.partial_cmp(&kb.2).unwrap_or(Ordering::Equal))
}

/// Eigenvalues of the companion matrix of `Σ q_k y^k`.
fn companion_roots(q: &[Complex64]) -> Vec<Complex64> {
    let deg = q.len() - 1;
    let lead = q[deg];
    let mut c = DMatrix::<Complex64>::zeros(deg, deg);
    for i in 1..deg {
        c[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..deg {
        c[(i, deg - 1)] = -q[i] / lead;
    }
    nalgebra::Schur::try_new(c, 1e-15, 10_000)
        .and_then(|s| s.eigenvalues())
        .map(|v| v.iter().copied().collect())
        .unwrap_or_else(|| durand_kerner(q))
}

/// Simultaneous iteration for all roots, used when the QR iteration stalls.
fn durand_kerner(q: &[Complex64]) -> Vec<Complex64> {
    let deg = q.len() - 1;
    let monic: Vec<Complex64> = q.iter().map(|c| c / q[deg]).collect();
    let eval = |y: Complex64| monic.iter().rev().fold(Complex64::zero(), |acc, &c| acc * y + c);
    let radius = 1.0 + monic[..deg].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> =
        (0..deg).map(|k| Complex64::from_polar(radius * 0.5, 0.4 + 2.0 * PI * k as f64 / deg as f64)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..deg {
            let denom = (0..deg).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            if denom.norm() == 0.0 {
                continue;
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

fn polish(q: &[Complex64], mut y: Complex64) -> Complex64 {
    for _ in 0..20 {
        let (mut f, mut df) = (Complex64::zero(), Complex64::zero());
        for &c in q.iter().rev() {
            df = df * y + f;
            f = f * y + c;
        }
        if df.norm() == 0.0 {
            break;
        }
        let step = f / df;
        y -= step;
        if step.norm() < 1e-17 * y.norm().max(1.0) {
            break;
        }
    }
    y
}

/// Nearest Gaussian rational with denominator at most 12, if very close.
fn snap(y: Complex64) -> Option<GaussRat> {
    let part = |x: f64| -> Option<BigRational> {
        (1..=12i64).find_map(|q| {
            let p = (x * q as f64).round();
            ((x - p / q as f64).abs() < 1e-9).then(|| BigRational::new(BigInt::from(p as i64), BigInt::from(q)))
        })
    };
    Some(gauss(part(y.re)?, part(y.im)?))
}

/// Damped Newton in logarithmic coordinates from deterministic seeds.
fn multivariate_roots(groups: &[Group], d: usize, seed: u64) -> Vec<Vec<Value>> {
    if groups.is_empty() {
        return vec![vec![Value::exact(gauss_real(BigRational::one())); d]];
    }
    let eval = |x: &DVector<Complex64>| -> (DVector<Complex64>, DMatrix<Complex64>) {
        let mut f = DVector::<Complex64>::zeros(d);
        let mut j = DMatrix::<Complex64>::zeros(d, d);
        for g in groups {
            let px: Complex64 = g.p.iter().zip(x.iter()).map(|(&p, xi)| xi * p as f64).sum();
            let t = g.num * px.exp();
            for s in 0..d {
                f[s] += t * g.p[s] as f64;
                for r in 0..d {
                    j[(s, r)] += t * (g.p[s] * g.p[r]) as f64;
                }
            }
        }
        (f, j)
    };
    let amax = |v: &DVector<Complex64>| v.iter().map(|z| z.norm()).fold(0.0, f64::max);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Vec<Value>> = Vec::new();
    for s in 0..NEWTON_SEEDS {
        let mut x = if s == 0 {
            DVector::<Complex64>::zeros(d)
        } else {
            DVector::from_fn(d, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-PI..PI)))
        };
        let mut converged = false;
        for _ in 0..100 {
            let (f, j) = eval(&x);
            let norm = amax(&f);
            if norm < 1e-13 {
                converged = true;
                break;
            }
            let Some(step) = j.lu().solve(&(-&f)) else { break };
            let mut t = 1.0;
            let mut moved = false;
            while t > 1e-6 {
                let cand = &x + &step * Complex64::new(t, 0.0);
                let fc = eval(&cand).0;
                if cand.iter().all(|z| z.re.is_finite() && z.im.is_finite()) && amax(&fc) < norm {
                    x = cand;
                    moved = true;
                    break;
                }
                t *= 0.5;
            }
            if !moved {
                converged = norm < CERT_TOL * 1e-2;
                break;
            }
        }
        if !converged {
            continue;
        }
        let y: Vec<Complex64> = x.iter().map(|z| z.exp()).collect();
        if y.iter().any(|z| !(MIN_MODULUS..1.0 / MIN_MODULUS).contains(&z.norm())) || amax(&eval(&x).0) >= CERT_TOL {
            continue;
        }
        if out.iter().any(|v| v.iter().zip(&y).all(|(a, b)| (a.num - b).norm() < 1e-7)) {
            continue;
        }
        let snapped: Option<Vec<GaussRat>> = y.iter().map(|&z| snap(z)).collect();
        let values = match snapped.filter(|z| exact_multivariate_zero(groups, z)) {
            Some(z) => z.into_iter().map(Value::exact).collect(),
            None => y.into_iter().map(Value::numeric).collect(),
        };
        out.push(values);
        if out.len() >= MAX_BRANCHES {
            break;
        }
    }
    out
}

fn exact_multivariate_zero(groups: &[Group], y: &[GaussRat]) -> bool {
    let d = y.len();
    (0..d).all(|s| {
        let mut acc = GaussRat::zero();
        for g in groups {
            let Some(a) = &g.exact else { return false };
            let mono = g.p.iter().zip(y).fold(gauss_real(BigRational::one()), |m, (&k, z)| m * gauss_pow(z, k));
            acc += a * gauss_real(rat_i(g.p[s])) * mono;
        }
        acc.is_zero()
    })
}

/// Re-checks every level equation at the full solution.
fn certify(
    lts: &LeadingTermSystem,
    assignment: &BTreeMap<String, GaussRat>,
    values: &[Value],
) -> Option<Certificate> {
    let y_adapted: Vec<Complex64> = values.iter().map(|v| v.num).collect();
    if y_adapted.len() != lts.dim {
        return None;
    }
    let numeric_symbols: BTreeMap<String, Complex64> =
        assignment.iter().map(|(k, v)| (k.clone(), gauss_to_c64(v))).collect();
    let mut residual = 0.0f64;
    for level in &lts.levels {
        for i in level.vars.clone() {
            let v = level.poly.log_partial(i).eval(&y_adapted, 1.0, &numeric_symbols).ok()?;
            residual = residual.max(v.norm());
        }
    }
    if residual >= CERT_TOL || y_adapted.iter().any(|z| z.norm() <= MIN_MODULUS) {
        return None;
    }
    let y_exact: Option<Vec<GaussRat>> = values.iter().map(|v| v.exact.clone()).collect();
    let exact_zero = y_exact.as_ref().is_some_and(|ye| {
        lts.levels.iter().all(|level| {
            matches!(exact_log_residual(&level.poly, ye, assignment), Ok(Some(r))
                if level.vars.clone().all(|i| r[i].is_zero()))
        })
    });
    let y = lts.to_original_coords(&y_adapted);
    Some(Certificate {
        symbol_values: assignment.clone(),
        y_adapted,
        y,
        y_exact,
        residual: if exact_zero { 0.0 } else { residual },
        exact_zero,
    })
}

impl Certificate {
    /// Residual of all level equations recomputed from the stored values.
    pub fn recheck(&self, lts: &LeadingTermSystem) -> f64 {
        let numeric_symbols: BTreeMap<String, Complex64> =
            self.symbol_values.iter().map(|(k, v)| (k.clone(), gauss_to_c64(v))).collect();
        let mut worst = 0.0f64;
        for level in &lts.levels {
            for i in level.vars.clone() {
                match level.poly.log_partial(i).eval(&self.y_adapted, 1.0, &numeric_symbols) {
                    Ok(v) => worst = worst.max(v.norm()),
                    Err(_) => return f64::INFINITY,
                }
            }
        }
        worst
    }
}
