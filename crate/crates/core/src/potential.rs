//! Leading-order smooth and bulk potentials at a torus fiber.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::Value;

use crate::lattice::{parse_rational, LatticeVector, RationalVector};
use crate::series::{gauss, Coeff, GaussRat, LaurentPoly, NovikovScalar};
use crate::stacky::{json_rational, weighted_projective, StackyModel};
use crate::{Error, Result};

/// Leading part `c · T^λ` of the bulk parameter on one twisted sector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorBulk {
    pub coeff: Coeff,
    pub exponent: BigRational,
}

/// Bulk deformation data. Divisor parameters are carried along but do not
/// enter any leading-order formula.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BulkParam {
    /// Keyed by index into the model's Box′.
    pub sectors: BTreeMap<usize, SectorBulk>,
    pub divisors: BTreeMap<usize, NovikovScalar>,
}

impl BulkParam {
    pub fn none() -> Self {
        BulkParam::default()
    }

    pub fn with_sector(mut self, sector: usize, coeff: Coeff, exponent: BigRational) -> Self {
        self.sectors.insert(sector, SectorBulk { coeff, exponent });
        self
    }

    /// Reads `{"sectors": [{"nu": [..], "c": "1", "lambda": "p/q"}, ...]}`.
    /// `c` may be a rational string, a complex `"(re+imi)"` string, an object
    /// `{"re": .., "im": ..}` of rationals, or a symbol name.
    pub fn from_json(m: &StackyModel, text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut bp = BulkParam::none();
        let Some(list) = v.get("sectors") else { return Ok(bp) };
        let list = list.as_array().ok_or_else(|| Error::Parse("\"sectors\" must be an array".into()))?;
        for item in list {
            let nu = item
                .get("nu")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("sector entry needs \"nu\"".into()))?
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| Error::Parse("bad nu coordinate".into())))
                .collect::<Result<Vec<_>>>()?;
            let nu = LatticeVector::from_i64(&nu);
            let k = m
                .sectors()
                .iter()
                .position(|e| e.nu == nu)
                .ok_or_else(|| Error::InvalidModel(format!("{nu} is not a twisted sector")))?;
            let coeff = match item.get("c") {
                None => Coeff::one(),
                Some(c) => parse_coeff(c)?,
            };
            let exponent = json_rational(item.get("lambda"))?;
            bp.sectors.insert(k, SectorBulk { coeff, exponent });
        }
        Ok(bp)
    }
}

fn parse_coeff(v: &Value) -> Result<Coeff> {
    match v {
        Value::Object(_) => {
            let re = json_rational(v.get("re"))?;
            let im = json_rational(v.get("im"))?;
            Ok(Coeff::number(gauss(re, im)))
        }
        Value::Number(_) => Ok(Coeff::rational(json_rational(Some(v))?)),
        Value::String(s) => {
            if let Ok(q) = parse_rational(s) {
                return Ok(Coeff::rational(q));
            }
            let poly = LaurentPoly::parse(s, 0)?;
            let single = match poly.terms().next() {
                Some((_, scalar)) if poly.num_terms() == 1 && scalar.num_terms() == 1 => {
                    scalar.leading().map(|(e, c)| (e.clone(), c.clone()))
                }
                _ => None,
            };
            match single {
                Some((e, c)) if e.is_zero() => Ok(c),
                Some(_) => Err(Error::Parse("bulk coefficient must not contain T".into())),
                None => Err(Error::Parse(format!("bad bulk coefficient {s:?}"))),
            }
        }
        _ => Err(Error::Parse("bad bulk coefficient".into())),
    }
}

/// Where a potential term comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermSource {
    Facet(usize),
    Sector(usize),
}

impl TermSource {
    pub fn name(&self) -> String {
        match *self {
            TermSource::Facet(j) => StackyModel::facet_name(j),
            TermSource::Sector(k) => StackyModel::sector_name(k),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PotentialTerm {
    pub source: TermSource,
    pub coeff: Coeff,
    pub t_exponent: BigRational,
    pub exponent: LatticeVector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PotentialAtFiber {
    pub u: RationalVector,
    pub poly: LaurentPoly,
    pub terms: Vec<PotentialTerm>,
}

impl PotentialAtFiber {
    fn from_terms(u: RationalVector, terms: Vec<PotentialTerm>) -> Result<Self> {
        let n = u.dim();
        let mut poly = LaurentPoly::zero(n);
        for t in &terms {
            let e = t
                .exponent
                .to_i64()
                .ok_or_else(|| Error::InvalidModel("exponent overflow".into()))?;
            poly = poly.add(&LaurentPoly::monomial(e, NovikovScalar::term(t.coeff.clone(), t.t_exponent.clone())));
        }
        Ok(PotentialAtFiber { u, poly, terms })
    }

    pub fn critical_residual(&self, y: &[Complex64], t_value: f64, values: &BTreeMap<String, Complex64>) -> Result<f64> {
        critical_residual(&self.poly, y, t_value, values)
    }
}

/// `Σ_j T^{ℓ_j(u)} y^{b_j}`.
pub fn smooth_leading_potential(m: &StackyModel, u: &RationalVector) -> Result<PotentialAtFiber> {
    bulk_leading_potential(m, u, &BulkParam::none())
}

/// Smooth part plus `Σ_ν c_ν T^{λ_ν + ℓ_ν(u)} y^ν` over the active sectors.
pub fn bulk_leading_potential(m: &StackyModel, u: &RationalVector, bp: &BulkParam) -> Result<PotentialAtFiber> {
    m.check_interior(u)?;
    let mut terms: Vec<PotentialTerm> = (0..m.num_facets())
        .map(|j| PotentialTerm {
            source: TermSource::Facet(j),
            coeff: Coeff::one(),
            t_exponent: m.ell(j, u),
            exponent: m.stacky_vector(j),
        })
        .collect();
    for (&k, sb) in &bp.sectors {
        if !sb.exponent.is_positive() {
            return Err(Error::NonPositiveBulkExponent(k));
        }
        let e = m
            .sectors()
            .get(k)
            .ok_or_else(|| Error::InvalidModel(format!("no twisted sector with index {k}")))?;
        if sb.coeff.is_zero() {
            continue;
        }
        terms.push(PotentialTerm {
            source: TermSource::Sector(k),
            coeff: sb.coeff.clone(),
            t_exponent: &sb.exponent + m.sector_ell_form(e).eval(u),
            exponent: e.nu.clone(),
        });
    }
    PotentialAtFiber::from_terms(u.clone(), terms)
}

/// `max_i |y_i ∂p/∂y_i|` at `(y, T = t_value)`.
pub fn critical_residual(
    p: &LaurentPoly,
    y: &[Complex64],
    t_value: f64,
    values: &BTreeMap<String, Complex64>,
) -> Result<f64> {
    if let Some(i) = y.iter().position(|z| z.is_zero()) {
        return Err(Error::ZeroCoordinate(i));
    }
    let mut worst = 0.0f64;
    for i in 0..p.nvars() {
        let v = p.log_partial(i).eval(y, t_value, values)?;
        worst = worst.max(v.norm());
    }
    Ok(worst)
}

/// Exact values of `y_i ∂p/∂y_i` for a `T`-free polynomial; `None` when `T`
/// occurs.
pub fn exact_log_residual(
    p: &LaurentPoly,
    y: &[GaussRat],
    values: &BTreeMap<String, GaussRat>,
) -> Result<Option<Vec<GaussRat>>> {
    (0..p.nvars())
        .map(|i| p.log_partial(i).eval_exact(y, values))
        .collect::<Result<Option<Vec<_>>>>()
}

/// Positive real critical point of the central fiber of `P(1, a_1..a_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WpCritical {
    pub weights: Vec<u64>,
    pub y: Vec<f64>,
    /// `Π y_j^{-a_j}`, equal to every `y_i / a_i` at the solution.
    pub lambda: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Solves `y_i = a_i Π y_j^{-a_j}` at `u = 0` by damped Newton in the
/// logarithmic coordinates `y = e^x`, restarting from a few seeds.
pub fn wp_central_critical(weights: &[u64]) -> Result<WpCritical> {
    let model = weighted_projective(weights)?;
    let a: Vec<f64> = weights[1..].iter().map(|&w| w as f64).collect();
    let n = a.len();
    let u0 = RationalVector::zero(n);
    let level = smooth_leading_potential(&model, &u0)?.poly.strip_t();
    let no_symbols = BTreeMap::new();

    let f = |x: &DVector<f64>| -> DVector<f64> {
        let s = (-a.iter().zip(x.iter()).map(|(ai, xi)| ai * xi).sum::<f64>()).exp();
        DVector::from_iterator(n, (0..n).map(|i| -a[i] * s + x[i].exp()))
    };
    let jac = |x: &DVector<f64>| -> DMatrix<f64> {
        let s = (-a.iter().zip(x.iter()).map(|(ai, xi)| ai * xi).sum::<f64>()).exp();
        DMatrix::from_fn(n, n, |i, j| a[i] * a[j] * s + if i == j { x[i].exp() } else { 0.0 })
    };

    let seeds = [0.0, -1.0, 1.0, -3.0, 3.0];
    for &seed in &seeds {
        let mut x = DVector::from_element(n, seed);
        for it in 0..200 {
            let fx = f(&x);
            let norm = fx.amax();
            if norm < 1e-14 {
                let y: Vec<f64> = x.iter().map(|v| v.exp()).collect();
                let yc: Vec<Complex64> = y.iter().map(|&v| Complex64::new(v, 0.0)).collect();
                let residual = critical_residual(&level, &yc, 1.0, &no_symbols)?;
                if residual < 1e-10 {
                    let lambda = y.iter().zip(&a).map(|(yi, ai)| yi.powf(-ai)).product();
                    return Ok(WpCritical { weights: weights.to_vec(), y, lambda, residual, iterations: it });
                }
                break;
            }
            let Some(step) = jac(&x).lu().solve(&(-&fx)) else { break };
            // backtrack until the residual decreases
            let mut t = 1.0;
            let mut accepted = false;
            while t > 1e-8 {
                let cand = &x + &step * t;
                if cand.iter().all(|v| v.is_finite()) && f(&cand).amax() < norm {
                    x = cand;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                break;
            }
        }
    }
    Err(Error::NoConvergence(format!("central fiber of P{weights:?}")))
}

/// `λ` predicted by eliminating `y_i = a_i λ` from `λ = Π y_j^{-a_j}`:
/// `λ^{1 + Σa} = Π a_j^{-a_j}`.
pub fn wp_lambda_closed_form(weights: &[u64]) -> f64 {
    let a = &weights[1..];
    let log_rhs: f64 = a.iter().map(|&x| -(x as f64) * (x as f64).ln()).sum();
    let total: f64 = 1.0 + a.iter().map(|&x| x as f64).sum::<f64>();
    (log_rhs / total).exp()
}
