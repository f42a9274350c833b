use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::coeff::{gauss, gauss_pow, gauss_real, Coeff, GaussRat};
use super::novikov::NovikovScalar;
use crate::lattice::{parse_rational, IntMatrix};
use crate::{Error, Result};

/// Laurent polynomial in `y_1..y_n` with Novikov scalar coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, NovikovScalar>,
}

fn c64_pow(z: Complex64, k: i64) -> Complex64 {
    if k >= 0 {
        z.powu(k as u32)
    } else {
        z.inv().powu(k.unsigned_abs() as u32)
    }
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    /// `s · y^e`.
    pub fn monomial(exponent: Vec<i64>, s: NovikovScalar) -> Self {
        let mut p = Self::zero(exponent.len());
        p.insert(exponent, s);
        p
    }

    pub fn constant(nvars: usize, s: NovikovScalar) -> Self {
        Self::monomial(vec![0; nvars], s)
    }

    fn insert(&mut self, e: Vec<i64>, s: NovikovScalar) {
        debug_assert_eq!(e.len(), self.nvars);
        if s.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&e) {
            Some(prev) => prev.add(&s),
            None => s,
        };
        if !sum.is_zero() {
            self.terms.insert(e, sum);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &NovikovScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, e: &[i64]) -> Option<&NovikovScalar> {
        self.terms.get(e)
    }

    /// Indices of variables occurring with a nonzero exponent.
    pub fn variables_used(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.terms.keys().any(|e| e[i] != 0)).collect()
    }

    /// True when every coefficient has only `T^0` terms.
    pub fn is_t_free(&self) -> bool {
        self.terms.values().all(|s| s.terms().all(|(e, _)| e.is_zero()))
    }

    pub fn symbols(&self) -> Vec<String> {
        let mut out: Vec<String> =
            self.terms.values().flat_map(|s| s.terms().flat_map(|(_, c)| c.symbols())).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, s) in &other.terms {
            out.insert(e.clone(), s.clone());
        }
        out
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, s)| (e.clone(), s.neg())).collect() }
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = LaurentPoly::zero(self.nvars);
        for (ea, sa) in &self.terms {
            for (eb, sb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert(e, sa.mul(sb));
            }
        }
        out
    }

    /// `∂/∂y_i`.
    pub fn partial(&self, i: usize) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.nvars);
        for (e, s) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.insert(e2, s.scale(&gauss_real(BigRational::from_integer(BigInt::from(e[i])))));
        }
        out
    }

    /// `y_i ∂/∂y_i`, the derivative in the logarithmic coordinate `x_i`.
    pub fn log_partial(&self, i: usize) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.nvars);
        for (e, s) in &self.terms {
            if e[i] != 0 {
                out.insert(e.clone(), s.scale(&gauss_real(BigRational::from_integer(BigInt::from(e[i])))));
            }
        }
        out
    }

    pub fn bind(&self, values: &BTreeMap<String, GaussRat>) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.nvars);
        for (e, s) in &self.terms {
            out.insert(e.clone(), s.bind(values));
        }
        out
    }

    /// Replaces each coefficient by its value at `T = 1`.
    pub fn strip_t(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.nvars);
        for (e, s) in &self.terms {
            out.insert(e.clone(), NovikovScalar::constant(s.strip_t()));
        }
        out
    }

    /// Numeric value at `(y, T = t)`.
    pub fn eval(&self, y: &[Complex64], t: f64, values: &BTreeMap<String, Complex64>) -> Result<Complex64> {
        if y.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: y.len() });
        }
        if let Some(i) = y.iter().position(|z| z.is_zero()) {
            return Err(Error::ZeroCoordinate(i));
        }
        let mut acc = Complex64::zero();
        for (e, s) in &self.terms {
            let mono = e.iter().zip(y).fold(Complex64::new(1.0, 0.0), |m, (&k, &z)| m * c64_pow(z, k));
            acc += s.eval_c64(t, values)? * mono;
        }
        Ok(acc)
    }

    /// Exact value of a `T`-free polynomial at Gaussian rational `y`;
    /// `Ok(None)` when some coefficient carries a nonzero `T` power.
    pub fn eval_exact(&self, y: &[GaussRat], values: &BTreeMap<String, GaussRat>) -> Result<Option<GaussRat>> {
        if y.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: y.len() });
        }
        if let Some(i) = y.iter().position(Zero::is_zero) {
            return Err(Error::ZeroCoordinate(i));
        }
        if !self.is_t_free() {
            return Ok(None);
        }
        let mut acc = GaussRat::zero();
        for (e, s) in &self.terms {
            let c = s.strip_t().substitute(values)?;
            let mono = e.iter().zip(y).fold(gauss_real(BigRational::from_integer(1.into())), |m, (&k, z)| {
                &m * &gauss_pow(z, k)
            });
            acc += c * mono;
        }
        Ok(Some(acc))
    }

    /// Substitutes `y_i = Π_j y'_j^{M[i][j]}`: the exponent row vector `e`
    /// becomes `e · M`.
    pub fn monomial_rewrite(&self, m: &IntMatrix) -> Result<LaurentPoly> {
        if m.rows() != self.nvars || m.cols() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: m.rows() });
        }
        if !m.is_unimodular() {
            return Err(Error::NotUnimodular);
        }
        let mut out = LaurentPoly::zero(self.nvars);
        for (e, s) in &self.terms {
            let e2 = (0..self.nvars)
                .map(|j| {
                    let v = (0..self.nvars).fold(BigInt::zero(), |acc, i| acc + m.get(i, j) * e[i]);
                    v.to_i64().ok_or_else(|| Error::InvalidModel("exponent overflow".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            out.insert(e2, s.clone());
        }
        Ok(out)
    }

    /// Parses the format produced by `Display`, in `nvars` variables.
    pub fn parse(text: &str, nvars: usize) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero(nvars);
        let text = text.trim();
        if text == "0" {
            return Ok(out);
        }
        for term in text.split(" + ") {
            let (e, s) = parse_term(term.trim(), nvars)?;
            out.insert(e, s);
        }
        Ok(out)
    }
}

fn parse_term(term: &str, nvars: usize) -> Result<(Vec<i64>, NovikovScalar)> {
    let bad = |why: &str| Error::Parse(format!("{why} in term {term:?}"));
    let mut num: Option<GaussRat> = None;
    let mut symbols = Vec::new();
    let mut t_exp = BigRational::zero();
    let mut e = vec![0i64; nvars];
    for factor in term.split('*') {
        let f = factor.trim();
        if f.is_empty() {
            return Err(bad("empty factor"));
        }
        let first = f.chars().next().expect("nonempty");
        if first == '(' || first == '-' || first.is_ascii_digit() {
            if num.is_some() {
                return Err(bad("two numeric factors"));
            }
            num = Some(parse_gauss(f).ok_or_else(|| bad("bad number"))?);
        } else if let Some(rest) = f.strip_prefix("T") {
            t_exp += match rest {
                "" => BigRational::from_integer(1.into()),
                _ => {
                    let inner = rest
                        .strip_prefix("^{")
                        .and_then(|r| r.strip_suffix('}'))
                        .or_else(|| rest.strip_prefix('^'))
                        .ok_or_else(|| bad("bad T power"))?;
                    parse_rational(inner)?
                }
            };
        } else if let Some((i, k)) = parse_var(f) {
            if i == 0 || i > nvars {
                return Err(bad("variable out of range"));
            }
            e[i - 1] += k;
        } else if f.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') && !first.is_ascii_digit() {
            symbols.push(f.to_string());
        } else {
            return Err(bad("unrecognised factor"));
        }
    }
    let z = num.unwrap_or_else(|| gauss_real(BigRational::from_integer(1.into())));
    Ok((e, NovikovScalar::term(Coeff::monomial(symbols, z), t_exp)))
}

/// `y3` or `y3^-2`.
fn parse_var(f: &str) -> Option<(usize, i64)> {
    let rest = f.strip_prefix('y')?;
    let (idx, pow) = match rest.split_once('^') {
        Some((a, b)) => (a, b.parse::<i64>().ok()?),
        None => (rest, 1),
    };
    if idx.is_empty() || !idx.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    Some((idx.parse().ok()?, pow))
}

/// `p/q` or `(re+imi)` / `(re-imi)`.
fn parse_gauss(s: &str) -> Option<GaussRat> {
    let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix("i)")) else {
        return parse_rational(s).ok().map(gauss_real);
    };
    let split = inner.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(i, _)| i).last()?;
    let re = parse_rational(&inner[..split]).ok()?;
    let im = parse_rational(&inner[split + 1..]).ok()?;
    let im = if &inner[split..=split] == "-" { -im } else { im };
    Some(gauss(re, im))
}

impl fmt::Display for LaurentPoly {
    /// Terms joined by `" + "`, each `number[*symbol...][*T^{p/q}][*yi^e...]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (e, s) in &self.terms {
            let mut mono = String::new();
            for (i, &k) in e.iter().enumerate() {
                if k != 0 {
                    mono.push_str(&format!("*y{}^{}", i + 1, k));
                }
            }
            for p in s.render_parts() {
                parts.push(format!("{p}{mono}"));
            }
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}
