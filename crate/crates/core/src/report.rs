//! JSON-facing summaries of the computations. Rationals are written as
//! `"p/q"` strings and complex numbers as `{"re", "im"}` floats.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::disc::{area_form, basic_orbi_discs, basic_smooth_discs, boundary, maslov_cw, maslov_de, virtual_dimension};
use crate::lattice::{ConeSubdivision, LatticeVector, RationalVector};
use crate::ltsolver::{EnergyStratification, LeadingTermSystem, SolvabilityVerdict};
use crate::potential::{PotentialAtFiber, WpCritical};
use crate::region::{union_1d, FiberRegion, Interval, Membership, RegionPiece, ScenarioFamily};
use crate::series::{gauss_to_c64, render_gauss, GaussRat};
use crate::stacky::StackyModel;

pub fn rat_str(q: &BigRational) -> String {
    q.to_string()
}

pub fn rats(v: &[BigRational]) -> Vec<String> {
    v.iter().map(rat_str).collect()
}

fn ints(v: &LatticeVector) -> Vec<String> {
    v.0.iter().map(|x| x.to_string()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        ComplexJson { re: z.re, im: z.im }
    }
}

fn cvec(v: &[Complex64]) -> Vec<ComplexJson> {
    v.iter().map(|&z| z.into()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacetReport {
    pub name: String,
    pub normal: Vec<String>,
    pub label: String,
    pub offset: String,
    pub stacky: Vec<String>,
    pub area: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexReport {
    pub point: Vec<String>,
    pub facets: Vec<String>,
    pub local_group_order: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelReport {
    pub dim: usize,
    pub facets: Vec<FacetReport>,
    pub vertices: Vec<VertexReport>,
}

impl ModelReport {
    pub fn new(m: &StackyModel) -> Self {
        let facets = m
            .facets()
            .iter()
            .enumerate()
            .map(|(j, f)| FacetReport {
                name: StackyModel::facet_name(j),
                normal: ints(&f.normal),
                label: f.label.to_string(),
                offset: rat_str(&f.offset),
                stacky: ints(&f.stacky()),
                area: m.ell_form(j).to_string(),
            })
            .collect();
        let vertices = m
            .vertices()
            .iter()
            .map(|v| {
                let ci = m.cones().iter().position(|c| c.facets == v.facets).unwrap_or(0);
                VertexReport {
                    point: rats(&v.point.0),
                    facets: v.facets.iter().map(|&j| StackyModel::facet_name(j)).collect(),
                    local_group_order: m.local_group_order(ci).to_string(),
                }
            })
            .collect();
        ModelReport { dim: m.dim(), facets, vertices }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorReport {
    pub name: String,
    pub nu: Vec<String>,
    /// Facets of the minimal cone with their coefficients.
    pub expansion: BTreeMap<String, String>,
    pub order: String,
    pub iota: String,
    pub area: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxReport {
    pub model: ModelReport,
    pub count: usize,
    pub sectors: Vec<SectorReport>,
}

impl BoxReport {
    pub fn new(m: &StackyModel) -> Self {
        let sectors: Vec<SectorReport> = m
            .sectors()
            .iter()
            .enumerate()
            .map(|(k, e)| SectorReport {
                name: StackyModel::sector_name(k),
                nu: ints(&e.nu),
                expansion: e.terms().map(|(j, c)| (StackyModel::facet_name(j), rat_str(c))).collect(),
                order: e.order.to_string(),
                iota: rat_str(&e.iota),
                area: m.sector_ell_form(e).to_string(),
            })
            .collect();
        BoxReport { model: ModelReport::new(m), count: sectors.len(), sectors }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscReport {
    pub label: String,
    pub kind: String,
    pub boundary: Vec<String>,
    pub area: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub area_at_u: Option<String>,
    pub maslov_de: i64,
    pub maslov_cw: String,
    pub virtual_dimension: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscsReport {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub u: Option<Vec<String>>,
    pub discs: Vec<DiscReport>,
}

impl DiscsReport {
    pub fn new(m: &StackyModel, u: Option<&RationalVector>) -> Self {
        let smooth = basic_smooth_discs(m).into_iter().enumerate().map(|(j, d)| (StackyModel::facet_name(j), "smooth", d));
        let orbi = basic_orbi_discs(m).into_iter().enumerate().map(|(k, d)| (StackyModel::sector_name(k), "orbi", d));
        let discs = smooth
            .chain(orbi)
            .map(|(name, kind, d)| {
                let area = area_form(m, &d);
                DiscReport {
                    label: format!("beta_{name}"),
                    kind: kind.to_string(),
                    boundary: ints(&boundary(m, &d)),
                    area_at_u: u.map(|u| rat_str(&area.eval(u))),
                    area: area.to_string(),
                    maslov_de: maslov_de(m, &d),
                    maslov_cw: rat_str(&maslov_cw(m, &d)),
                    virtual_dimension: virtual_dimension(m, &d),
                }
            })
            .collect();
        DiscsReport { u: u.map(|u| rats(&u.0)), discs }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermReport {
    pub source: String,
    pub coeff: String,
    pub t_exponent: String,
    pub exponent: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialReport {
    pub u: Vec<String>,
    pub terms: Vec<TermReport>,
    pub potential: String,
}

impl PotentialReport {
    pub fn new(p: &PotentialAtFiber) -> Self {
        let terms = p
            .terms
            .iter()
            .map(|t| TermReport {
                source: t.source.name(),
                coeff: t.coeff.to_string(),
                t_exponent: rat_str(&t.t_exponent),
                exponent: ints(&t.exponent),
            })
            .collect();
        PotentialReport { u: rats(&p.u.0), terms, potential: p.poly.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub proof: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<CertificateReport>,
    /// Solutions found on each level along the certified branch, adapted coordinates.
    pub level_roots: Vec<Vec<Vec<ComplexJson>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub coefficients: BTreeMap<String, String>,
    pub y: Vec<ComplexJson>,
    pub y_adapted: Vec<ComplexJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub y_exact: Option<Vec<String>>,
    pub residual: f64,
    pub exact_zero: bool,
}

fn gauss_str(z: &GaussRat) -> String {
    render_gauss(z)
}

impl VerdictReport {
    pub fn new(v: &SolvabilityVerdict) -> Self {
        let certificate = v.certificate.as_ref().map(|c| CertificateReport {
            coefficients: c.symbol_values.iter().map(|(k, z)| (k.clone(), gauss_str(z))).collect(),
            y: cvec(&c.y),
            y_adapted: cvec(&c.y_adapted),
            y_exact: c.y_exact.as_ref().map(|ys| ys.iter().map(gauss_str).collect()),
            residual: c.residual,
            exact_zero: c.exact_zero,
        });
        VerdictReport {
            status: v.status.as_str().to_string(),
            proof: v.proof.clone(),
            certificate,
            level_roots: v.level_roots.iter().map(|l| l.iter().map(|r| cvec(r)).collect()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    pub energy: String,
    pub members: Vec<String>,
    pub d: usize,
    pub cumulative_rank: usize,
    pub polynomial: String,
    pub equations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LteReport {
    pub u: Vec<String>,
    pub adapted_basis: Vec<Vec<String>>,
    pub levels: Vec<LevelReport>,
    pub verdict: VerdictReport,
}

impl LteReport {
    pub fn new(strat: &EnergyStratification, lts: &LeadingTermSystem, v: &SolvabilityVerdict) -> Self {
        let levels = strat
            .active_levels()
            .iter()
            .zip(&lts.levels)
            .map(|(s, l)| LevelReport {
                energy: rat_str(&s.energy),
                members: s.members.iter().map(|m| m.generator.name()).collect(),
                d: s.d,
                cumulative_rank: s.cumulative_rank,
                polynomial: l.poly.to_string(),
                equations: l.equations.iter().map(|e| e.to_string()).collect(),
            })
            .collect();
        LteReport {
            u: rats(&strat.u.0),
            adapted_basis: strat.adapted_basis.iter().map(ints).collect(),
            levels,
            verdict: VerdictReport::new(v),
        }
    }
}

/// A critical point of the leading potential found level by level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalReport {
    pub u: Vec<String>,
    pub t_value: f64,
    pub status: String,
    /// Critical points in the original coordinates, when the first level
    /// already spans (all roots of that level).
    pub points: Vec<CriticalPoint>,
    pub verdict: VerdictReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub y: Vec<ComplexJson>,
    pub residual: f64,
}

impl CriticalReport {
    /// When the first level already spans, lists every root of that level in
    /// the original coordinates with its residual against the leading
    /// potential at `T = t_value`. Deeper systems only balance level by
    /// level, so for them the verdict alone is reported.
    pub fn new(
        pot: &PotentialAtFiber,
        lts: &LeadingTermSystem,
        v: &SolvabilityVerdict,
        t_value: f64,
    ) -> crate::Result<Self> {
        let values: BTreeMap<String, Complex64> = v
            .certificate
            .as_ref()
            .map(|c| c.symbol_values.iter().map(|(k, z)| (k.clone(), gauss_to_c64(z))).collect())
            .unwrap_or_default();
        let mut points = Vec::new();
        if lts.levels.len() == 1 {
            for root in v.level_roots.first().into_iter().flatten() {
                let y = lts.to_original_coords(root);
                let residual = pot.critical_residual(&y, t_value, &values)?;
                points.push(CriticalPoint { y: cvec(&y), residual });
            }
        }
        Ok(CriticalReport {
            u: rats(&pot.u.0),
            t_value,
            status: v.status.as_str().to_string(),
            points,
            verdict: VerdictReport::new(v),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WpCriticalReport {
    pub weights: Vec<u64>,
    pub y: Vec<f64>,
    pub lambda: f64,
    pub lambda_closed_form: f64,
    pub residual: f64,
    pub iterations: usize,
}

impl WpCriticalReport {
    pub fn new(c: &WpCritical, closed_form: f64) -> Self {
        WpCriticalReport {
            weights: c.weights.clone(),
            y: c.y.clone(),
            lambda: c.lambda,
            lambda_closed_form: closed_form,
            residual: c.residual,
            iterations: c.iterations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceReport {
    pub serial: usize,
    pub scenario: String,
    pub family: String,
    pub levels: Vec<Vec<String>>,
    pub equalities: Vec<String>,
    pub inequalities: Vec<String>,
    pub witness: Vec<String>,
    pub energies: Vec<String>,
    pub bulk_exponents: BTreeMap<String, String>,
    pub certificate: VerdictReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalReport {
    pub lower: Option<String>,
    pub lower_closed: bool,
    pub upper: Option<String>,
    pub upper_closed: bool,
    pub text: String,
}

impl From<&Interval> for IntervalReport {
    fn from(iv: &Interval) -> Self {
        IntervalReport {
            lower: iv.lo.as_ref().map(|(v, _)| rat_str(v)),
            lower_closed: iv.lo.as_ref().is_some_and(|(_, c)| *c),
            upper: iv.hi.as_ref().map(|(v, _)| rat_str(v)),
            upper_closed: iv.hi.as_ref().is_some_and(|(_, c)| *c),
            text: iv.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionReport {
    pub dim: usize,
    pub closure: bool,
    pub scenarios_examined: usize,
    pub scenarios_feasible: usize,
    pub pieces: Vec<PieceReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub union: Option<Vec<IntervalReport>>,
}

impl RegionReport {
    pub fn new(m: &StackyModel, r: &FiberRegion) -> Self {
        let pieces = r.pieces.iter().map(|p| piece_report(m, p)).collect();
        let union = (r.dim == 1).then(|| union_1d(m, r).iter().map(IntervalReport::from).collect());
        RegionReport {
            dim: r.dim,
            closure: r.closure,
            scenarios_examined: r.scenarios_examined,
            scenarios_feasible: r.scenarios_feasible,
            pieces,
            union,
        }
    }
}

fn piece_report(m: &StackyModel, p: &RegionPiece) -> PieceReport {
    let bulk = crate::region::bulk_exponents(m, &p.scenario, &p.witness, &p.energies);
    PieceReport {
        serial: p.scenario.serial,
        scenario: p.scenario.label(),
        family: match p.scenario.family {
            ScenarioFamily::Generic => "generic",
            ScenarioFamily::LabelMatched => "label-matched",
        }
        .to_string(),
        levels: p.scenario.levels.iter().map(|l| l.iter().map(|g| g.name()).collect()).collect(),
        equalities: p.equalities().iter().map(|c| c.render("u")).collect(),
        inequalities: p.inequalities().iter().map(|c| c.render("u")).collect(),
        witness: rats(&p.witness.0),
        energies: rats(&p.energies),
        bulk_exponents: bulk.iter().map(|(k, v)| (StackyModel::sector_name(*k), rat_str(v))).collect(),
        certificate: VerdictReport::new(&p.verdict),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub u: Vec<String>,
    pub member: bool,
    pub pieces: Vec<MembershipHit>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipHit {
    pub serial: usize,
    pub scenario: String,
    pub closure_only: bool,
}

impl MembershipReport {
    pub fn new(r: &FiberRegion, q: &Membership) -> Self {
        MembershipReport {
            u: rats(&q.u.0),
            member: q.member,
            pieces: q
                .pieces
                .iter()
                .map(|&(i, how)| MembershipHit {
                    serial: r.pieces[i].scenario.serial,
                    scenario: r.pieces[i].scenario.label(),
                    closure_only: how == crate::region::Containment::Closure,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeBasisReport {
    pub cone: Vec<Vec<String>>,
    pub multiplicity: String,
    pub basis: Vec<Vec<String>>,
    pub multiplicities: Vec<String>,
    pub unimodular: bool,
}

impl ConeBasisReport {
    pub fn new(generators: &[LatticeVector], sub: &ConeSubdivision, unimodular: bool) -> Self {
        ConeBasisReport {
            cone: generators.iter().map(ints).collect(),
            multiplicity: sub.multiplicities.first().map(|m| m.to_string()).unwrap_or_default(),
            basis: sub.basis.iter().map(ints).collect(),
            multiplicities: sub.multiplicities.iter().map(|m| m.to_string()).collect(),
            unimodular,
        }
    }
}
