//! Scenarios of energy levels and the polyhedral regions of fibers whose
//! leading term equations have a certified solution.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::lattice::{lattice_rank, LatticeVector, RationalVector};
use crate::ltsolver::{build_lts, from_levels, solve, GenRef, Member, SolvabilityVerdict, SolveOptions, SolveStatus};
use crate::polyhedron::{Constraint, Polyhedron, Relation};
use crate::series::{gauss_real, Coeff, GaussRat};
use crate::stacky::{AffineForm, StackyModel};
use crate::{Error, Result};

/// Upper bound on the number of raw level assignments examined.
pub const SCENARIO_LIMIT: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioFamily {
    /// Sector coefficients are free symbols `c_nu{k}`.
    Generic,
    /// Every level is `{b_i, ν_i}` with `ν_i = b_i / c_i` and sector
    /// coefficient `-c_i`.
    LabelMatched,
}

/// Generators placed on energy levels `S_1 < ... < S_K`. Facets not listed
/// lie strictly above `S_K`; sectors not listed carry no bulk term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub serial: usize,
    pub levels: Vec<Vec<GenRef>>,
    pub family: ScenarioFamily,
    /// Fixed sector coefficients (label-matched family only).
    pub fixed_coeffs: BTreeMap<usize, GaussRat>,
}

impl Scenario {
    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    /// E.g. `S1:{b1,nu1} S2:{b0}`.
    pub fn label(&self) -> String {
        self.levels
            .iter()
            .enumerate()
            .map(|(l, g)| format!("S{}:{{{}}}", l + 1, g.iter().map(GenRef::name).collect::<Vec<_>>().join(",")))
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn coeff(&self, g: GenRef) -> Coeff {
        match g {
            GenRef::Facet(_) => Coeff::one(),
            GenRef::Sector(k) => match self.fixed_coeffs.get(&k) {
                Some(z) => Coeff::number(z.clone()),
                None => Coeff::symbol(&format!("c_{}", StackyModel::sector_name(k))),
            },
        }
    }
}

fn generator_vector(m: &StackyModel, g: GenRef) -> LatticeVector {
    match g {
        GenRef::Facet(j) => m.stacky_vector(j),
        GenRef::Sector(k) => m.sectors()[k].nu.clone(),
    }
}

fn generator_form(m: &StackyModel, g: GenRef) -> AffineForm {
    match g {
        GenRef::Facet(j) => m.ell_form(j),
        GenRef::Sector(k) => m.sector_ell_form(&m.sectors()[k]),
    }
}

/// All level assignments with at most `max_levels` levels in which every
/// level raises the span, holds at least one more member than it adds
/// dimensions, and the last level reaches full rank.
pub fn enumerate_scenarios(m: &StackyModel, max_levels: usize) -> Result<Vec<Scenario>> {
    let mut gens: Vec<GenRef> = (0..m.num_facets()).map(GenRef::Facet).collect();
    gens.extend((0..m.sectors().len()).map(GenRef::Sector));
    let g = gens.len() as u32;
    let total: u128 = (1..=max_levels as u128).map(|k| (k + 1).saturating_pow(g)).fold(0u128, u128::saturating_add);
    if total > SCENARIO_LIMIT || g >= 64 {
        return Err(Error::TooManyScenarios(total));
    }
    let vectors: Vec<LatticeVector> = gens.iter().map(|&x| generator_vector(m, x)).collect();
    let mut out = Vec::new();
    for k in 1..=max_levels {
        let mut levels = Vec::with_capacity(k);
        let all = if g == 0 { 0 } else { u64::MAX >> (64 - g) };
        extend_levels(m.dim(), k, &gens, &vectors, all, &[], 0, &mut levels, &mut out);
    }
    Ok(out)
}

/// Chooses the next level among the generators in `remaining`.
#[allow(clippy::too_many_arguments)]
fn extend_levels(
    n: usize,
    k: usize,
    gens: &[GenRef],
    vectors: &[LatticeVector],
    remaining: u64,
    below: &[LatticeVector],
    prev_rank: usize,
    levels: &mut Vec<Vec<GenRef>>,
    out: &mut Vec<Scenario>,
) {
    let last = levels.len() + 1 == k;
    // nonempty submasks of `remaining` in increasing order
    let mut sub: u64 = 0;
    loop {
        sub = sub.wrapping_sub(remaining) & remaining;
        if sub == 0 {
            break;
        }
        let members: Vec<usize> = (0..gens.len()).filter(|&i| sub >> i & 1 == 1).collect();
        let mut cumulative = below.to_vec();
        cumulative.extend(members.iter().map(|&i| vectors[i].clone()));
        let r = lattice_rank(&cumulative);
        let d = r - prev_rank;
        if d == 0 || members.len() < d + 1 || (last != (r == n)) {
            continue;
        }
        levels.push(members.iter().map(|&i| gens[i]).collect());
        if last {
            out.push(Scenario {
                serial: out.len(),
                levels: levels.clone(),
                family: ScenarioFamily::Generic,
                fixed_coeffs: BTreeMap::new(),
            });
        } else {
            extend_levels(n, k, gens, vectors, remaining & !sub, &cumulative, r, levels, out);
        }
        levels.pop();
    }
}

/// Orderings of facets, each facet paired with its sector `b_i / c_i`, cut
/// off at the first level where the span becomes full. Empty unless every
/// label is at least 2.
pub fn label_matched_scenarios(m: &StackyModel, first_serial: usize) -> Vec<Scenario> {
    let two = BigInt::from(2);
    if m.facets().iter().any(|f| f.label < two) {
        return Vec::new();
    }
    let partner: Option<Vec<usize>> = m
        .facets()
        .iter()
        .map(|f| m.sectors().iter().position(|e| e.nu == f.normal))
        .collect();
    let Some(partner) = partner else { return Vec::new() };
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    extend_orderings(m, &partner, &mut prefix, &mut out, first_serial);
    out
}

fn extend_orderings(m: &StackyModel, partner: &[usize], prefix: &mut Vec<usize>, out: &mut Vec<Scenario>, first: usize) {
    let vectors: Vec<LatticeVector> = prefix.iter().map(|&j| m.stacky_vector(j)).collect();
    if !prefix.is_empty() && lattice_rank(&vectors) == m.dim() {
        let levels = prefix.iter().map(|&j| vec![GenRef::Facet(j), GenRef::Sector(partner[j])]).collect();
        let fixed_coeffs = prefix
            .iter()
            .map(|&j| (partner[j], gauss_real(-BigRational::from_integer(m.facets()[j].label.clone()))))
            .collect();
        out.push(Scenario { serial: first + out.len(), levels, family: ScenarioFamily::LabelMatched, fixed_coeffs });
        return;
    }
    for j in 0..m.num_facets() {
        if !prefix.contains(&j) {
            prefix.push(j);
            extend_orderings(m, partner, prefix, out, first);
            prefix.pop();
        }
    }
}

fn form_in(f: &AffineForm, nvars: usize) -> (Vec<BigRational>, BigRational) {
    let mut c = f.linear.0.clone();
    c.resize(nvars, BigRational::zero());
    (c, f.constant.clone())
}

fn level_var(n: usize, k: usize, l: usize) -> (Vec<BigRational>, BigRational) {
    let mut c = vec![BigRational::zero(); n + k];
    c[n + l] = BigRational::one();
    (c, BigRational::zero())
}

/// The polyhedron in `(u, S_1..S_K)` cut out by a scenario.
pub fn scenario_system(m: &StackyModel, s: &Scenario) -> Polyhedron {
    let n = m.dim();
    let k = s.num_levels();
    let nv = n + k;
    let mut p = Polyhedron::new(nv);
    let zero = (vec![BigRational::zero(); nv], BigRational::zero());
    for j in 0..m.num_facets() {
        let l = form_in(&m.ell_form(j), nv);
        p.push(Constraint::greater((&l.0, &l.1), (&zero.0, &zero.1), true));
    }
    let mut assigned = vec![false; m.num_facets()];
    for (l, lvl) in s.levels.iter().enumerate() {
        let sl = level_var(n, k, l);
        for &g in lvl {
            let f = form_in(&generator_form(m, g), nv);
            match g {
                GenRef::Facet(j) => {
                    assigned[j] = true;
                    p.push(Constraint::equal((&f.0, &f.1), (&sl.0, &sl.1)));
                }
                GenRef::Sector(_) => p.push(Constraint::greater((&sl.0, &sl.1), (&f.0, &f.1), true)),
            }
        }
        if l + 1 < k {
            let next = level_var(n, k, l + 1);
            p.push(Constraint::greater((&next.0, &next.1), (&sl.0, &sl.1), true));
        }
    }
    let top = level_var(n, k, k - 1);
    for j in (0..m.num_facets()).filter(|&j| !assigned[j]) {
        let f = form_in(&m.ell_form(j), nv);
        p.push(Constraint::greater((&f.0, &f.1), (&top.0, &top.1), true));
    }
    p
}

/// Region in `u` realizing a scenario with a witness point, or `None`.
pub fn scenario_region(m: &StackyModel, s: &Scenario) -> Option<(Polyhedron, RationalVector, Vec<BigRational>)> {
    let sys = scenario_system(m, s);
    let w = sys.witness()?;
    let n = m.dim();
    let region = sys.project(n).without_redundant();
    let levels = w[n..].to_vec();
    Some((region, RationalVector(w[..n].to_vec()), levels))
}

/// Leading term system of a scenario, with energies taken at the witness.
pub fn scenario_verdict(m: &StackyModel, s: &Scenario, u: &RationalVector, energies: &[BigRational], seed: u64) -> Result<SolvabilityVerdict> {
    let groups = s
        .levels
        .iter()
        .zip(energies)
        .map(|(lvl, e)| {
            let members =
                lvl.iter().map(|&g| Member { generator: g, vector: generator_vector(m, g), coeff: s.coeff(g) }).collect();
            (e.clone(), members)
        })
        .collect();
    let strat = from_levels(m.dim(), u.clone(), groups)?;
    let lts = build_lts(&strat)?;
    Ok(solve(&lts, &SolveOptions::for_model(m, seed)))
}

/// Bulk exponents `λ_ν = S_l - ℓ_ν(u)` realizing a scenario at `u`.
pub fn bulk_exponents(m: &StackyModel, s: &Scenario, u: &RationalVector, energies: &[BigRational]) -> BTreeMap<usize, BigRational> {
    let mut out = BTreeMap::new();
    for (lvl, e) in s.levels.iter().zip(energies) {
        for &g in lvl {
            if let GenRef::Sector(k) = g {
                out.insert(k, e - generator_form(m, g).eval(u));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionPiece {
    pub scenario: Scenario,
    /// Constraints on `u` only.
    pub region: Polyhedron,
    pub witness: RationalVector,
    /// Level energies `S_l` at the witness.
    pub energies: Vec<BigRational>,
    pub verdict: SolvabilityVerdict,
}

impl RegionPiece {
    pub fn equalities(&self) -> Vec<&Constraint> {
        self.region.constraints.iter().filter(|c| c.rel == Relation::Eq).collect()
    }

    pub fn inequalities(&self) -> Vec<&Constraint> {
        self.region.constraints.iter().filter(|c| c.rel != Relation::Eq).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiberRegion {
    pub dim: usize,
    pub pieces: Vec<RegionPiece>,
    /// Closures of pieces (within the interior of `P`) count as members.
    pub closure: bool,
    /// Scenarios examined and how many had a nonempty region.
    pub scenarios_examined: usize,
    pub scenarios_feasible: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionOptions {
    pub max_levels: usize,
    pub closure: bool,
    pub seed: u64,
    pub jobs: usize,
}

impl Default for RegionOptions {
    fn default() -> Self {
        RegionOptions { max_levels: 2, closure: false, seed: 0, jobs: 1 }
    }
}

/// Union of the regions of all scenarios whose leading term equations have
/// a certified solution. Pieces are ordered by scenario serial number.
pub fn nondisplaceable_region(m: &StackyModel, opts: &RegionOptions) -> Result<FiberRegion> {
    let mut scenarios = enumerate_scenarios(m, opts.max_levels.max(1))?;
    let next = scenarios.len();
    scenarios.extend(label_matched_scenarios(m, next));
    let mut filter = Prefilter::new(m);
    let examined = scenarios.len();
    let scenarios: Vec<Scenario> = scenarios.into_iter().filter(|s| filter.passes(s)).collect();
    let examine = |s: &Scenario| -> Result<Option<RegionPiece>> {
        let Some((region, witness, energies)) = scenario_region(m, s) else { return Ok(None) };
        let verdict = scenario_verdict(m, s, &witness, &energies, opts.seed.wrapping_add(s.serial as u64))?;
        Ok(Some(RegionPiece { scenario: s.clone(), region, witness, energies, verdict }))
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidModel(format!("worker pool: {e}")))?;
    let results: Vec<Result<Option<RegionPiece>>> = pool.install(|| scenarios.par_iter().map(examine).collect());
    let mut feasible = 0;
    let mut pieces = Vec::new();
    for r in results {
        if let Some(piece) = r? {
            feasible += 1;
            if piece.verdict.status == SolveStatus::SolvableCertified {
                pieces.push(piece);
            }
        }
    }
    Ok(FiberRegion { dim: m.dim(), pieces, closure: opts.closure, scenarios_examined: examined, scenarios_feasible: feasible })
}

/// Rejects scenarios containing an infeasible sub-scenario: the facets
/// alone, or the facets with a single sector. Results are memoized.
struct Prefilter<'a> {
    m: &'a StackyModel,
    cache: HashMap<(Vec<Vec<GenRef>>, Option<GenRef>), bool>,
}

impl<'a> Prefilter<'a> {
    fn new(m: &'a StackyModel) -> Self {
        Prefilter { m, cache: HashMap::new() }
    }

    fn passes(&mut self, s: &Scenario) -> bool {
        let skeleton: Vec<Vec<GenRef>> =
            s.levels.iter().map(|l| l.iter().copied().filter(|g| matches!(g, GenRef::Facet(_))).collect()).collect();
        if !self.feasible(&skeleton, None) {
            return false;
        }
        s.levels.iter().enumerate().all(|(l, lvl)| {
            lvl.iter().filter(|g| matches!(g, GenRef::Sector(_))).all(|&g| {
                let mut sub = skeleton.clone();
                sub[l].push(g);
                self.feasible(&sub, Some(g))
            })
        })
    }

    fn feasible(&mut self, levels: &[Vec<GenRef>], extra: Option<GenRef>) -> bool {
        let key = (levels.to_vec(), extra);
        if let Some(&v) = self.cache.get(&key) {
            return v;
        }
        let sub = Scenario { serial: 0, levels: levels.to_vec(), family: ScenarioFamily::Generic, fixed_coeffs: BTreeMap::new() };
        let v = !scenario_system(self.m, &sub).is_empty();
        self.cache.insert(key, v);
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Containment {
    Open,
    /// Only in the closure of the piece.
    Closure,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Membership {
    pub u: RationalVector,
    pub member: bool,
    /// `(index into pieces, how)`.
    pub pieces: Vec<(usize, Containment)>,
}

/// Which pieces contain `u`.
pub fn query_point(m: &StackyModel, r: &FiberRegion, u: &RationalVector) -> Result<Membership> {
    m.check_interior(u)?;
    let mut hits = Vec::new();
    for (i, p) in r.pieces.iter().enumerate() {
        if p.region.contains(&u.0) {
            hits.push((i, Containment::Open));
        } else if r.closure && p.region.closure().contains(&u.0) {
            hits.push((i, Containment::Closure));
        }
    }
    Ok(Membership { u: u.clone(), member: !hits.is_empty(), pieces: hits })
}

/// Endpoint `(value, closed)`; `None` when unbounded.
pub type Endpoint = Option<(BigRational, bool)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Endpoint,
    pub hi: Endpoint,
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.lo {
            Some((v, c)) => write!(f, "{}{}", if *c { '[' } else { '(' }, v)?,
            None => write!(f, "(-inf")?,
        }
        match &self.hi {
            Some((v, c)) => write!(f, ", {}{}", v, if *c { ']' } else { ')' }),
            None => write!(f, ", inf)"),
        }
    }
}

/// For a one-dimensional model, the union of all pieces as disjoint
/// intervals. With `closure`, endpoints interior to `P` become closed.
pub fn union_1d(m: &StackyModel, r: &FiberRegion) -> Vec<Interval> {
    assert_eq!(r.dim, 1, "union_1d needs a one-dimensional region");
    let mut ivs: Vec<Interval> = r
        .pieces
        .iter()
        .filter_map(|p| p.region.interval())
        .map(|(lo, hi)| {
            let close = |e: Endpoint| {
                e.map(|(v, c)| {
                    let inside = m.is_interior(&RationalVector(vec![v.clone()]));
                    (v, c || (r.closure && inside))
                })
            };
            Interval { lo: close(lo), hi: close(hi) }
        })
        .collect();
    ivs.sort_by_key(|iv| lower_key(&iv.lo));
    let mut out: Vec<Interval> = Vec::new();
    for iv in ivs {
        if let Some(last) = out.last_mut() {
            if touches(&last.hi, &iv.lo) {
                if upper_key(&iv.hi) > upper_key(&last.hi) {
                    last.hi = iv.hi;
                }
                continue;
            }
        }
        out.push(iv);
    }
    out
}

/// Sort key for lower endpoints: `-inf` first; at equal values closed first.
fn lower_key(e: &Endpoint) -> (bool, Option<BigRational>, bool) {
    match e {
        None => (false, None, false),
        Some((v, c)) => (true, Some(v.clone()), !*c),
    }
}

/// Sort key for upper endpoints: `+inf` last; at equal values open first.
fn upper_key(e: &Endpoint) -> (bool, Option<BigRational>, bool) {
    match e {
        None => (true, None, true),
        Some((v, c)) => (false, Some(v.clone()), *c),
    }
}

fn touches(hi: &Endpoint, lo: &Endpoint) -> bool {
    match (hi, lo) {
        (None, _) | (_, None) => true,
        (Some((h, hc)), Some((l, lc))) => l < h || (l == h && (*hc || *lc)),
    }
}
