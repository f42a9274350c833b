//! Labeled polytopes, their stacky fans and twisted sectors.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::lattice::{
    parse_rational, rat_int, solve_rational, LatticeVector, RationalVector, SimplicialCone,
};
use crate::polyhedron::{Constraint, Polyhedron, Relation};
use crate::{Error, Result};

/// Affine function `u ↦ <linear, u> + constant` on `M_R`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineForm {
    pub linear: RationalVector,
    pub constant: BigRational,
}

impl AffineForm {
    pub fn zero(dim: usize) -> Self {
        AffineForm { linear: RationalVector::zero(dim), constant: BigRational::zero() }
    }

    pub fn eval(&self, u: &RationalVector) -> BigRational {
        self.linear.dot(u) + &self.constant
    }

    pub fn add(&self, other: &AffineForm) -> AffineForm {
        AffineForm {
            linear: RationalVector(self.linear.0.iter().zip(&other.linear.0).map(|(a, b)| a + b).collect()),
            constant: &self.constant + &other.constant,
        }
    }

    pub fn scale(&self, k: &BigRational) -> AffineForm {
        AffineForm {
            linear: RationalVector(self.linear.0.iter().map(|a| a * k).collect()),
            constant: &self.constant * k,
        }
    }

    pub fn sub(&self, other: &AffineForm) -> AffineForm {
        self.add(&other.scale(&-BigRational::one()))
    }
}

impl fmt::Display for AffineForm {
    /// Renders as e.g. `3/5 - u1 - 2*u2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        if !self.constant.is_zero() {
            out.push_str(&self.constant.to_string());
        }
        for (i, c) in self.linear.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let body = if mag.is_one() { format!("u{}", i + 1) } else { format!("{mag}*u{}", i + 1) };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
                out.push_str(&body);
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
                out.push_str(&body);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// A facet of the labeled polytope: `<u, label·normal> >= offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub normal: LatticeVector,
    pub label: BigInt,
    pub offset: BigRational,
}

impl Facet {
    pub fn new(normal: LatticeVector, label: u64, offset: BigRational) -> Self {
        Facet { normal, label: BigInt::from(label), offset }
    }

    /// Splits a stacky vector into primitive normal and label.
    pub fn from_stacky(b: LatticeVector, offset: BigRational) -> Result<Self> {
        let g = b.content();
        if g.is_zero() {
            return Err(Error::InvalidModel("zero stacky vector".into()));
        }
        Ok(Facet { normal: b.div_exact(&g), label: g, offset })
    }

    pub fn stacky(&self) -> LatticeVector {
        self.normal.scale(&self.label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub point: RationalVector,
    /// Incident facets, sorted.
    pub facets: Vec<usize>,
}

/// A top-dimensional cone of the stacky fan, one per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopCone {
    /// Facet indices, sorted; the cone generators are their stacky vectors in this order.
    pub facets: Vec<usize>,
    pub cone: SimplicialCone,
}

/// A validated labeled polytope with its stacky fan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StackyModel {
    dim: usize,
    facets: Vec<Facet>,
    vertices: Vec<Vertex>,
    cones: Vec<TopCone>,
    sectors: Vec<BoxElement>,
}

/// A nonzero twisted sector `ν = Σ c_k b_{i_k}` with `c_k ∈ [0,1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxElement {
    pub nu: LatticeVector,
    /// First top cone (in model order) containing `ν`.
    pub cone_index: usize,
    /// Facets of that cone, aligned with `coeffs`.
    pub facets: Vec<usize>,
    pub coeffs: Vec<BigRational>,
    /// Order of `ν` in the local group.
    pub order: BigInt,
    /// Degree shift `Σ c_k`.
    pub iota: BigRational,
}

impl BoxElement {
    /// Facets with a nonzero coefficient: the minimal cone containing `ν`.
    pub fn support(&self) -> Vec<usize> {
        self.facets.iter().zip(&self.coeffs).filter(|(_, c)| !c.is_zero()).map(|(&f, _)| f).collect()
    }

    /// `(facet, coefficient)` pairs with nonzero coefficient.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigRational)> {
        self.facets.iter().zip(&self.coeffs).filter(|(_, c)| !c.is_zero()).map(|(&f, c)| (f, c))
    }
}

impl StackyModel {
    /// Validates the facet data and computes vertices and top cones.
    pub fn new(facets: Vec<Facet>) -> Result<Self> {
        let dim = facets.first().map(|f| f.normal.dim()).ok_or_else(|| Error::InvalidModel("no facets".into()))?;
        if dim == 0 {
            return Err(Error::InvalidModel("dimension must be positive".into()));
        }
        for (j, f) in facets.iter().enumerate() {
            if f.normal.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: f.normal.dim() });
            }
            if !f.normal.is_primitive() {
                return Err(Error::NonPrimitiveNormal(j));
            }
            if !f.label.is_positive() {
                return Err(Error::InvalidModel(format!("label of facet {j} must be positive")));
            }
        }
        let proto = StackyModel { dim, facets, vertices: Vec::new(), cones: Vec::new(), sectors: Vec::new() };

        if proto.interior_polyhedron().is_empty() {
            return Err(Error::EmptyInterior);
        }
        if proto.is_unbounded() {
            return Err(Error::Unbounded);
        }

        let stacky: Vec<Vec<BigRational>> = proto.facets.iter().map(|f| f.stacky().to_rational().0).collect();
        let mut vertices: Vec<Vertex> = Vec::new();
        for subset in (0..proto.facets.len()).combinations(dim) {
            let a: Vec<Vec<BigRational>> = subset.iter().map(|&j| stacky[j].clone()).collect();
            let b: Vec<BigRational> = subset.iter().map(|&j| proto.facets[j].offset.clone()).collect();
            let Some(u) = solve_rational(&a, &b) else { continue };
            let u = RationalVector(u);
            if vertices.iter().any(|v| v.point == u) {
                continue;
            }
            let values: Vec<BigRational> = (0..proto.facets.len()).map(|j| proto.ell(j, &u)).collect();
            if values.iter().any(Signed::is_negative) {
                continue;
            }
            let tight: Vec<usize> = (0..values.len()).filter(|&j| values[j].is_zero()).collect();
            if tight.len() != dim {
                return Err(Error::NotSimple(u.to_string()));
            }
            vertices.push(Vertex { point: u, facets: tight });
        }
        vertices.sort_by(|a, b| a.facets.cmp(&b.facets));
        for j in 0..proto.facets.len() {
            if !vertices.iter().any(|v| v.facets.contains(&j)) {
                return Err(Error::InvalidModel(format!("facet {j} is redundant")));
            }
        }
        let cones = vertices
            .iter()
            .map(|v| {
                let gens = v.facets.iter().map(|&j| proto.facets[j].stacky()).collect();
                Ok(TopCone { facets: v.facets.clone(), cone: SimplicialCone::new(gens)? })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut model = StackyModel { vertices, cones, ..proto };
        model.sectors = model.compute_box();
        Ok(model)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn stacky_vector(&self, j: usize) -> LatticeVector {
        self.facets[j].stacky()
    }

    pub fn stacky_vectors(&self) -> Vec<LatticeVector> {
        self.facets.iter().map(Facet::stacky).collect()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn cones(&self) -> &[TopCone] {
        &self.cones
    }

    /// `ℓ_j` as an affine form: `<u, b_j> - λ_j`.
    pub fn ell_form(&self, j: usize) -> AffineForm {
        AffineForm { linear: self.facets[j].stacky().to_rational(), constant: -&self.facets[j].offset }
    }

    pub fn ell(&self, j: usize, u: &RationalVector) -> BigRational {
        self.ell_form(j).eval(u)
    }

    /// `ℓ_ν = Σ c_k ℓ_{i_k}`.
    pub fn sector_ell_form(&self, e: &BoxElement) -> AffineForm {
        e.terms().fold(AffineForm::zero(self.dim), |acc, (j, c)| acc.add(&self.ell_form(j).scale(c)))
    }

    pub fn is_interior(&self, u: &RationalVector) -> bool {
        u.dim() == self.dim && (0..self.facets.len()).all(|j| self.ell(j, u).is_positive())
    }

    pub fn check_interior(&self, u: &RationalVector) -> Result<()> {
        if u.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: u.dim() });
        }
        if !self.is_interior(u) {
            return Err(Error::PointNotInterior(u.to_string()));
        }
        Ok(())
    }

    /// `{u : ℓ_j(u) > 0 ∀j}`.
    pub fn interior_polyhedron(&self) -> Polyhedron {
        let cs = (0..self.facets.len())
            .map(|j| {
                let l = self.ell_form(j);
                Constraint::new(l.linear.0, l.constant, Relation::Gt)
            })
            .collect();
        Polyhedron::with_constraints(self.dim, cs)
    }

    fn is_unbounded(&self) -> bool {
        // nonzero d with <d, b_j> >= 0 for all j
        let base: Vec<Constraint> = self
            .facets
            .iter()
            .map(|f| Constraint::new(f.stacky().to_rational().0, BigRational::zero(), Relation::Ge))
            .collect();
        (0..self.dim).any(|i| {
            [1i64, -1].iter().any(|&s| {
                let mut cs = base.clone();
                let mut e = vec![BigRational::zero(); self.dim];
                e[i] = BigRational::from_integer(BigInt::from(s));
                cs.push(Constraint::new(e, BigRational::zero(), Relation::Gt));
                !Polyhedron::with_constraints(self.dim, cs).is_empty()
            })
        })
    }

    /// Order of the local group of a top cone: `|det|` of its stacky generators.
    pub fn local_group_order(&self, cone_index: usize) -> BigInt {
        self.cones[cone_index].cone.multiplicity()
    }

    /// Nonzero twisted sectors (Box′), each reported once. Cones are visited
    /// in model order; within a cone, elements are sorted by coefficient vector.
    pub fn enumerate_box(&self) -> Vec<BoxElement> {
        self.sectors.clone()
    }

    /// Borrowed view of [`enumerate_box`](Self::enumerate_box).
    pub fn sectors(&self) -> &[BoxElement] {
        &self.sectors
    }

    fn compute_box(&self) -> Vec<BoxElement> {
        let mut out: Vec<BoxElement> = Vec::new();
        for (ci, tc) in self.cones.iter().enumerate() {
            let mut pts = tc.cone.box_points();
            pts.sort_by(|a, b| a.1.cmp(&b.1));
            for (nu, coeffs) in pts {
                if nu.is_zero() || out.iter().any(|e| e.nu == nu) {
                    continue;
                }
                let order = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
                let iota = coeffs.iter().fold(BigRational::zero(), |acc, c| acc + c);
                out.push(BoxElement { nu, cone_index: ci, facets: tc.facets.clone(), coeffs, order, iota });
            }
        }
        out
    }

    /// Parses a preset name such as `teardrop:3`, `wp:1,3,5`, `square`,
    /// `square:2,2,2,2` or `interval:2,2`.
    pub fn preset(spec: &str) -> Result<Self> {
        let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
        let nums = || -> Result<Vec<u64>> {
            if args.trim().is_empty() {
                return Ok(Vec::new());
            }
            args.split(',')
                .map(|s| s.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad preset argument {s:?}"))))
                .collect()
        };
        match name {
            "teardrop" => match nums()?.as_slice() {
                [a] => teardrop(*a),
                _ => Err(Error::Parse("teardrop takes one label, e.g. teardrop:3".into())),
            },
            "wp" | "weighted_projective" => weighted_projective(&nums()?),
            "square" => match nums()?.as_slice() {
                [] => square([1, 1, 1, 1]),
                [a, b, c, d] => square([*a, *b, *c, *d]),
                _ => Err(Error::Parse("square takes four labels".into())),
            },
            "interval" => match nums()?.as_slice() {
                [a, b] => interval(*a, *b),
                _ => Err(Error::Parse("interval takes two labels".into())),
            },
            _ => Err(Error::Parse(format!("unknown preset {name:?}"))),
        }
    }

    /// Reads a model from its JSON description.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if let Some(p) = v.get("preset").and_then(Value::as_str) {
            return match p {
                "weighted_projective" => weighted_projective(&json_u64s(v.get("weights"))?),
                "teardrop" => teardrop(
                    v.get("a").and_then(Value::as_u64).ok_or_else(|| Error::Parse("teardrop needs \"a\"".into()))?,
                ),
                other => Self::preset(other),
            };
        }
        let facets = v
            .get("facets")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"facets\"".into()))?;
        let facets = facets
            .iter()
            .map(|f| {
                let offset = json_rational(f.get("offset"))?;
                if let Some(b) = f.get("stacky") {
                    return Facet::from_stacky(json_lattice(Some(b))?, offset);
                }
                let normal = json_lattice(f.get("normal"))?;
                let label = match f.get("label") {
                    None => 1,
                    Some(l) => l.as_u64().ok_or_else(|| Error::Parse("label must be a positive integer".into()))?,
                };
                Ok(Facet::new(normal, label, offset))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(d) = v.get("dim").and_then(Value::as_u64) {
            if let Some(f) = facets.iter().find(|f| f.normal.dim() as u64 != d) {
                return Err(Error::DimensionMismatch { expected: d as usize, got: f.normal.dim() });
            }
        }
        Self::new(facets)
    }

    pub fn facet_name(j: usize) -> String {
        format!("b{j}")
    }

    pub fn sector_name(k: usize) -> String {
        format!("nu{}", k + 1)
    }
}

fn json_u64s(v: Option<&Value>) -> Result<Vec<u64>> {
    v.and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("expected an integer array".into()))?
        .iter()
        .map(|x| x.as_u64().ok_or_else(|| Error::Parse("expected a nonnegative integer".into())))
        .collect()
}

fn json_lattice(v: Option<&Value>) -> Result<LatticeVector> {
    let arr = v.and_then(Value::as_array).ok_or_else(|| Error::Parse("expected an integer array".into()))?;
    arr.iter()
        .map(|x| match x {
            Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| Error::Parse(format!("bad integer {n}"))),
            Value::String(s) => s.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad integer {s:?}"))),
            _ => Err(Error::Parse("expected an integer".into())),
        })
        .collect::<Result<Vec<_>>>()
        .map(LatticeVector)
}

/// Accepts `"p/q"` strings and JSON integers.
pub fn json_rational(v: Option<&Value>) -> Result<BigRational> {
    match v {
        Some(Value::String(s)) => parse_rational(s),
        Some(Value::Number(n)) => n
            .as_i64()
            .map(|i| BigRational::from_integer(BigInt::from(i)))
            .ok_or_else(|| Error::Parse(format!("non-integer number {n}; use a \"p/q\" string"))),
        _ => Err(Error::Parse("expected a rational".into())),
    }
}

fn minus_one() -> BigRational {
    -BigRational::one()
}

/// Teardrop with cone point of order `a`: `P = [-1/a, 1]`.
pub fn teardrop(a: u64) -> Result<StackyModel> {
    StackyModel::new(vec![
        Facet::new(LatticeVector::from_i64(&[1]), a, minus_one()),
        Facet::new(LatticeVector::from_i64(&[-1]), 1, minus_one()),
    ])
}

/// Weighted projective space `P(1, a_1, ..., a_n)` with
/// `b_0 = (-a_1, ..., -a_n)`, `b_i = e_i` and all offsets `-1`.
pub fn weighted_projective(weights: &[u64]) -> Result<StackyModel> {
    match weights {
        [1, rest @ ..] if !rest.is_empty() => {
            let n = rest.len();
            let b0 = LatticeVector(rest.iter().map(|&a| -BigInt::from(a)).collect());
            let mut facets = vec![Facet::from_stacky(b0, minus_one())?];
            for i in 0..n {
                let mut e = vec![0i64; n];
                e[i] = 1;
                facets.push(Facet::new(LatticeVector::from_i64(&e), 1, minus_one()));
            }
            StackyModel::new(facets)
        }
        _ => Err(Error::InvalidModel("weights must be 1, a_1, ..., a_n with n >= 1".into())),
    }
}

/// Unit square with labels on the facets `u1 >= 0`, `u2 >= 0`, `u1 <= 1`, `u2 <= 1`.
pub fn square(labels: [u64; 4]) -> Result<StackyModel> {
    let normals: [[i64; 2]; 4] = [[1, 0], [0, 1], [-1, 0], [0, -1]];
    let facets = normals
        .iter()
        .zip(labels)
        .enumerate()
        .map(|(j, (v, c))| {
            let offset = if j < 2 { BigRational::zero() } else { -rat_int(&BigInt::from(c)) };
            Facet::new(LatticeVector::from_i64(v), c, offset)
        })
        .collect();
    StackyModel::new(facets)
}

/// `[0, 1]` with labels on its two endpoints.
pub fn interval(c1: u64, c2: u64) -> Result<StackyModel> {
    StackyModel::new(vec![
        Facet::new(LatticeVector::from_i64(&[1]), c1, BigRational::zero()),
        Facet::new(LatticeVector::from_i64(&[-1]), c2, -rat_int(&BigInt::from(c2))),
    ])
}

/// Convenience for reports: coordinates as `i64` where they fit.
pub fn small_coords(v: &LatticeVector) -> Vec<i64> {
    v.0.iter().map(|c| c.to_i64().unwrap_or(i64::MAX)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rat;

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(c)
    }

    #[test]
    fn teardrop_data() {
        let m = teardrop(3).unwrap();
        assert_eq!(m.stacky_vectors(), vec![lv(&[3]), lv(&[-1])]);
        let pts: Vec<_> = m.vertices().iter().map(|v| v.point.clone()).collect();
        assert!(pts.contains(&RationalVector(vec![rat(-1, 3)])));
        assert!(pts.contains(&RationalVector(vec![rat(1, 1)])));
        let b = m.enumerate_box();
        assert_eq!(b.len(), 2);
        assert_eq!(b[0].nu, lv(&[1]));
        assert_eq!(b[0].iota, rat(1, 3));
        assert_eq!(b[1].iota, rat(2, 3));
        let c0 = m.cones().iter().position(|c| c.facets == vec![0]).unwrap();
        assert_eq!(m.local_group_order(c0), BigInt::from(3));
    }

    #[test]
    fn p135_box_in_reference_order() {
        let m = weighted_projective(&[1, 3, 5]).unwrap();
        assert_eq!(m.stacky_vectors(), vec![lv(&[-3, -5]), lv(&[1, 0]), lv(&[0, 1])]);
        let nus: Vec<_> = m.enumerate_box().into_iter().map(|e| e.nu).collect();
        let want = [[0, -1], [-1, -2], [-1, -3], [-2, -4], [-1, -1], [-2, -3]];
        assert_eq!(nus, want.iter().map(|w| lv(w)).collect::<Vec<_>>());
        let b = m.enumerate_box();
        assert_eq!(m.sector_ell_form(&b[0]).to_string(), "4/5 - u2");
        assert_eq!(m.sector_ell_form(&b[1]).to_string(), "3/5 - u1 - 2*u2");
        assert_eq!(m.local_group_order(0), BigInt::from(5));
    }

    #[test]
    fn smooth_square_has_no_sectors() {
        let m = square([1, 1, 1, 1]).unwrap();
        assert_eq!(m.cones().len(), 4);
        assert!(m.cones().iter().all(|c| c.cone.multiplicity().is_one()));
        assert!(m.enumerate_box().is_empty());
    }

    #[test]
    fn validation_errors() {
        let bad = vec![
            Facet::new(lv(&[2, 0]), 1, rat(0, 1)),
            Facet::new(lv(&[0, 1]), 1, rat(0, 1)),
            Facet::new(lv(&[-1, -1]), 1, rat(-1, 1)),
        ];
        assert_eq!(StackyModel::new(bad), Err(Error::NonPrimitiveNormal(0)));
        let half = vec![Facet::new(lv(&[1]), 1, rat(0, 1))];
        assert_eq!(StackyModel::new(half), Err(Error::Unbounded));
        let empty = vec![Facet::new(lv(&[1]), 1, rat(0, 1)), Facet::new(lv(&[-1]), 1, rat(0, 1))];
        assert_eq!(StackyModel::new(empty), Err(Error::EmptyInterior));
        // a square pyramid apex is not simple
        let pyramid = vec![
            Facet::new(lv(&[0, 0, 1]), 1, rat(0, 1)),
            Facet::new(lv(&[1, 0, -1]), 1, rat(-1, 1)),
            Facet::new(lv(&[-1, 0, -1]), 1, rat(-1, 1)),
            Facet::new(lv(&[0, 1, -1]), 1, rat(-1, 1)),
            Facet::new(lv(&[0, -1, -1]), 1, rat(-1, 1)),
        ];
        assert!(matches!(StackyModel::new(pyramid), Err(Error::NotSimple(_))));
    }

    #[test]
    fn json_and_presets_agree() {
        let a = StackyModel::from_json(r#"{"preset":"weighted_projective","weights":[1,3,5]}"#).unwrap();
        let b = StackyModel::preset("wp:1,3,5").unwrap();
        assert_eq!(a, b);
        let c = StackyModel::from_json(
            r#"{"dim":1,"facets":[{"normal":[1],"label":3,"offset":"-1"},{"stacky":[-1],"offset":-1}]}"#,
        )
        .unwrap();
        assert_eq!(c, teardrop(3).unwrap());
        assert!(StackyModel::preset("wp:2,3").is_err());
    }
}
