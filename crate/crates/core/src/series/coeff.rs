use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Exact Gaussian rational `p + q i`.
pub type GaussRat = Complex<BigRational>;

pub fn gauss(re: BigRational, im: BigRational) -> GaussRat {
    Complex::new(re, im)
}

pub fn gauss_real(re: BigRational) -> GaussRat {
    Complex::new(re, BigRational::zero())
}

pub fn gauss_to_c64(z: &GaussRat) -> Complex64 {
    Complex64::new(z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN))
}

/// `z^k` for any integer `k` (`z ≠ 0` when `k < 0`).
pub fn gauss_pow(z: &GaussRat, k: i64) -> GaussRat {
    let mut base = if k < 0 { gauss_inv(z) } else { z.clone() };
    let mut e = k.unsigned_abs();
    let mut acc = gauss_real(BigRational::one());
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

pub fn gauss_inv(z: &GaussRat) -> GaussRat {
    let n = &z.re * &z.re + &z.im * &z.im;
    Complex::new(&z.re / &n, -&z.im / &n)
}

/// Renders `p/q` or `(re+imi)`.
pub fn render_gauss(z: &GaussRat) -> String {
    if z.im.is_zero() {
        z.re.to_string()
    } else {
        let sign = if z.im.is_negative() { "-" } else { "+" };
        format!("({}{}{}i)", z.re, sign, z.im.abs())
    }
}

/// Polynomial in opaque symbols (free bulk parameters) with Gaussian
/// rational coefficients. Keys are sorted symbol multisets; the empty key is
/// the numeric part.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Coeff {
    terms: BTreeMap<Vec<String>, GaussRat>,
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff::default()
    }

    pub fn one() -> Self {
        Self::number(gauss_real(BigRational::one()))
    }

    pub fn number(z: GaussRat) -> Self {
        let mut c = Coeff::default();
        c.insert(Vec::new(), z);
        c
    }

    pub fn rational(q: BigRational) -> Self {
        Self::number(gauss_real(q))
    }

    pub fn integer(k: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(k)))
    }

    pub fn symbol(name: &str) -> Self {
        let mut c = Coeff::default();
        c.insert(vec![name.to_string()], gauss_real(BigRational::one()));
        c
    }

    /// A single monomial `z · Π symbols`.
    pub fn monomial(mut symbols: Vec<String>, z: GaussRat) -> Self {
        symbols.sort();
        let mut c = Coeff::default();
        c.insert(symbols, z);
        c
    }

    fn insert(&mut self, key: Vec<String>, z: GaussRat) {
        if z.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_insert_with(GaussRat::zero);
        *slot += z;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<String>, &GaussRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The value when no symbols occur.
    pub fn as_number(&self) -> Option<GaussRat> {
        match self.terms.len() {
            0 => Some(GaussRat::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn is_numeric(&self) -> bool {
        self.as_number().is_some()
    }

    pub fn symbols(&self) -> Vec<String> {
        let mut s: Vec<String> = self.terms.keys().flatten().cloned().collect();
        s.sort();
        s.dedup();
        s
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.insert(k.clone(), v.clone());
        }
        out
    }

    pub fn neg(&self) -> Coeff {
        Coeff { terms: self.terms.iter().map(|(k, v)| (k.clone(), -v.clone())).collect() }
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        let mut out = Coeff::zero();
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                let mut key: Vec<String> = ka.iter().chain(kb).cloned().collect();
                key.sort();
                out.insert(key, va * vb);
            }
        }
        out
    }

    pub fn scale(&self, z: &GaussRat) -> Coeff {
        let mut out = Coeff::zero();
        for (k, v) in &self.terms {
            out.insert(k.clone(), v * z);
        }
        out
    }

    /// Replaces bound symbols by their values; unbound ones stay symbolic.
    pub fn bind(&self, values: &BTreeMap<String, GaussRat>) -> Coeff {
        let mut out = Coeff::zero();
        for (k, v) in &self.terms {
            let mut z = v.clone();
            let mut rest = Vec::new();
            for s in k {
                match values.get(s) {
                    Some(x) => z = &z * x,
                    None => rest.push(s.clone()),
                }
            }
            out.insert(rest, z);
        }
        out
    }

    pub fn substitute(&self, values: &BTreeMap<String, GaussRat>) -> Result<GaussRat> {
        let bound = self.bind(values);
        bound.as_number().ok_or_else(|| Error::UnboundSymbol(bound.symbols().join(",")))
    }

    pub fn eval_c64(&self, values: &BTreeMap<String, Complex64>) -> Result<Complex64> {
        let mut acc = Complex64::zero();
        for (k, v) in &self.terms {
            let mut z = gauss_to_c64(v);
            for s in k {
                z *= values.get(s).ok_or_else(|| Error::UnboundSymbol(s.clone()))?;
            }
            acc += z;
        }
        Ok(acc)
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, v)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            f.write_str(&render_gauss(v))?;
            for s in k {
                write!(f, "*{s}")?;
            }
        }
        Ok(())
    }
}
