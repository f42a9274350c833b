use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::coeff::{render_gauss, Coeff, GaussRat};
use crate::Result;

/// `T`-adic valuation: the least exponent, `+∞` for zero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(BigRational),
    Infinity,
}

impl Valuation {
    pub fn add(&self, other: &Valuation) -> Valuation {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(q) => write!(f, "{q}"),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

/// Which Novikov subring a scalar belongs to (the most specific one).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LambdaClass {
    /// Valuation zero with a symbolic leading coefficient.
    Lambda0,
    /// Positive valuation (including zero itself).
    LambdaPlus,
    /// Valuation zero with an invertible numeric leading coefficient.
    Units,
    /// Negative valuation.
    Neither,
}

/// A finite sum `Σ a_k T^{λ_k}` with rational exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct NovikovScalar {
    terms: BTreeMap<BigRational, Coeff>,
}

impl NovikovScalar {
    pub fn zero() -> Self {
        NovikovScalar::default()
    }

    /// `c · T^λ`.
    pub fn term(c: Coeff, exponent: BigRational) -> Self {
        let mut s = NovikovScalar::zero();
        s.insert(exponent, c);
        s
    }

    pub fn one() -> Self {
        Self::term(Coeff::one(), BigRational::zero())
    }

    pub fn constant(c: Coeff) -> Self {
        Self::term(c, BigRational::zero())
    }

    fn insert(&mut self, exponent: BigRational, c: Coeff) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&exponent) {
            Some(prev) => prev.add(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(exponent, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigRational, &Coeff)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn valuation(&self) -> Valuation {
        self.terms.keys().next().map_or(Valuation::Infinity, |q| Valuation::Finite(q.clone()))
    }

    /// Lowest-order term.
    pub fn leading(&self) -> Option<(&BigRational, &Coeff)> {
        self.terms.iter().next()
    }

    pub fn lambda_membership(&self) -> LambdaClass {
        match self.leading() {
            None => LambdaClass::LambdaPlus,
            Some((e, _)) if e.is_negative() => LambdaClass::Neither,
            Some((e, _)) if e.is_positive() => LambdaClass::LambdaPlus,
            Some((_, c)) => {
                if c.is_numeric() {
                    LambdaClass::Units
                } else {
                    LambdaClass::Lambda0
                }
            }
        }
    }

    pub fn add(&self, other: &NovikovScalar) -> NovikovScalar {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> NovikovScalar {
        NovikovScalar { terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect() }
    }

    pub fn mul(&self, other: &NovikovScalar) -> NovikovScalar {
        let mut out = NovikovScalar::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.insert(ea + eb, ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, z: &GaussRat) -> NovikovScalar {
        let mut out = NovikovScalar::zero();
        for (e, c) in &self.terms {
            out.insert(e.clone(), c.scale(z));
        }
        out
    }

    /// Multiplies by `T^λ`.
    pub fn shift(&self, lambda: &BigRational) -> NovikovScalar {
        NovikovScalar { terms: self.terms.iter().map(|(e, c)| (e + lambda, c.clone())).collect() }
    }

    /// Drops the `T` factors, summing coefficients: the value at `T = 1`.
    pub fn strip_t(&self) -> Coeff {
        self.terms.values().fold(Coeff::zero(), |acc, c| acc.add(c))
    }

    pub fn bind(&self, values: &BTreeMap<String, GaussRat>) -> NovikovScalar {
        let mut out = NovikovScalar::zero();
        for (e, c) in &self.terms {
            out.insert(e.clone(), c.bind(values));
        }
        out
    }

    /// Numeric value at `T = t`.
    pub fn eval_c64(&self, t: f64, values: &BTreeMap<String, Complex64>) -> Result<Complex64> {
        let mut acc = Complex64::zero();
        for (e, c) in &self.terms {
            acc += c.eval_c64(values)? * t.powf(e.to_f64().unwrap_or(f64::NAN));
        }
        Ok(acc)
    }

    /// Rendered factors for each monomial, used by the Laurent renderer.
    pub(crate) fn render_parts(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (e, c) in &self.terms {
            for (syms, z) in c.terms() {
                let mut s = render_gauss(z);
                for sym in syms {
                    s.push('*');
                    s.push_str(sym);
                }
                if !e.is_zero() {
                    s.push_str(&format!("*T^{{{e}}}"));
                }
                out.push(s);
            }
        }
        out
    }
}

impl fmt::Display for NovikovScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.render_parts();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}
