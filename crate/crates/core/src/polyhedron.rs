//! Exact rational polyhedra with strict and non-strict inequalities, handled
//! by Fourier–Motzkin elimination.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// How `coeffs · x + constant` compares with zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "=")]
    Eq,
}

/// `coeffs · x + constant  REL  0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub constant: BigRational,
    pub rel: Relation,
}

impl Constraint {
    pub fn new(coeffs: Vec<BigRational>, constant: BigRational, rel: Relation) -> Self {
        Constraint { coeffs, constant, rel }
    }

    /// `lhs > rhs` for affine forms given as `(coeffs, constant)`.
    pub fn greater(lhs: (&[BigRational], &BigRational), rhs: (&[BigRational], &BigRational), strict: bool) -> Self {
        let coeffs = lhs.0.iter().zip(rhs.0).map(|(a, b)| a - b).collect();
        let rel = if strict { Relation::Gt } else { Relation::Ge };
        Constraint { coeffs, constant: lhs.1 - rhs.1, rel }
    }

    /// `lhs = rhs` for affine forms.
    pub fn equal(lhs: (&[BigRational], &BigRational), rhs: (&[BigRational], &BigRational)) -> Self {
        let mut c = Self::greater(lhs, rhs, false);
        c.rel = Relation::Eq;
        c
    }

    pub fn value(&self, x: &[BigRational]) -> BigRational {
        self.coeffs.iter().zip(x).fold(self.constant.clone(), |acc, (a, b)| acc + a * b)
    }

    pub fn holds(&self, x: &[BigRational]) -> bool {
        let v = self.value(x);
        match self.rel {
            Relation::Ge => !v.is_negative(),
            Relation::Gt => v.is_positive(),
            Relation::Eq => v.is_zero(),
        }
    }

    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn trivially_true(&self) -> bool {
        self.is_trivial() && self.holds(&[])
    }

    /// Scales so the first nonzero coefficient has absolute value 1; an
    /// equality is additionally made to have a positive leading coefficient.
    fn normalized(mut self) -> Self {
        let lead = self
            .coeffs
            .iter()
            .find(|c| !c.is_zero())
            .cloned()
            .unwrap_or_else(|| if self.constant.is_zero() { BigRational::one() } else { self.constant.abs() });
        let scale = if self.rel == Relation::Eq { lead.recip() } else { lead.abs().recip() };
        for c in self.coeffs.iter_mut() {
            *c *= &scale;
        }
        self.constant *= &scale;
        self
    }

    fn negated_complement(&self) -> Vec<Constraint> {
        let neg = || Constraint {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            constant: -&self.constant,
            rel: Relation::Gt,
        };
        match self.rel {
            Relation::Ge => vec![neg()],
            Relation::Gt => {
                let mut c = neg();
                c.rel = Relation::Ge;
                vec![c]
            }
            Relation::Eq => vec![neg(), Constraint { rel: Relation::Gt, ..self.clone() }],
        }
    }
}

impl Constraint {
    /// Renders with variables named `{var}1, {var}2, ...`, e.g. `u1 - 1/2*u2 - 3 > 0`.
    pub fn render(&self, var: &str) -> String {
        let mut out = String::new();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => out.push('-'),
                (true, false) => {}
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
            }
            if !mag.is_one() {
                out.push_str(&format!("{mag}*"));
            }
            out.push_str(&format!("{var}{}", i + 1));
            first = false;
        }
        if first {
            out.push_str(&self.constant.to_string());
        } else if !self.constant.is_zero() {
            let sign = if self.constant.is_negative() { "-" } else { "+" };
            out.push_str(&format!(" {sign} {}", self.constant.abs()));
        }
        let rel = match self.rel {
            Relation::Ge => ">=",
            Relation::Gt => ">",
            Relation::Eq => "=",
        };
        format!("{out} {rel} 0")
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

/// Intersection of finitely many constraints in `dim` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyhedron {
    pub dim: usize,
    pub constraints: Vec<Constraint>,
}

enum Step {
    /// `x_j = expr(x_0..x_{j-1})`
    Substituted(Constraint),
    /// The constraints mentioning `x_j` at the moment it was eliminated.
    Bounded(Vec<Constraint>),
}

impl Polyhedron {
    pub fn new(dim: usize) -> Self {
        Polyhedron { dim, constraints: Vec::new() }
    }

    pub fn with_constraints(dim: usize, constraints: Vec<Constraint>) -> Self {
        Polyhedron { dim, constraints }
    }

    pub fn push(&mut self, c: Constraint) {
        debug_assert_eq!(c.coeffs.len(), self.dim);
        self.constraints.push(c);
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        self.constraints.iter().all(|c| c.holds(x))
    }

    /// Strict inequalities relaxed to non-strict ones.
    pub fn closure(&self) -> Polyhedron {
        let constraints = self
            .constraints
            .iter()
            .map(|c| {
                let mut c = c.clone();
                if c.rel == Relation::Gt {
                    c.rel = Relation::Ge;
                }
                c
            })
            .collect();
        Polyhedron { dim: self.dim, constraints }
    }

    /// Eliminates variables `j >= keep`, returning the projection onto the
    /// first `keep` coordinates.
    pub fn project(&self, keep: usize) -> Polyhedron {
        let mut sys = clean(self.constraints.clone());
        for j in (keep..self.dim).rev() {
            let (next, _) = eliminate(sys, j);
            sys = clean(next);
        }
        let constraints = sys.into_iter().map(|mut c| {
            c.coeffs.truncate(keep);
            c
        });
        Polyhedron { dim: keep, constraints: constraints.collect() }
    }

    pub fn is_empty(&self) -> bool {
        self.witness().is_none()
    }

    /// An exact point of the polyhedron, preferring small denominators.
    pub fn witness(&self) -> Option<Vec<BigRational>> {
        let mut sys = clean(self.constraints.clone());
        let mut steps = Vec::with_capacity(self.dim);
        for j in (0..self.dim).rev() {
            if sys.iter().any(|c| c.is_trivial() && !c.holds(&[])) {
                return None;
            }
            let (next, step) = eliminate(sys, j);
            steps.push(step);
            sys = clean(next);
        }
        if sys.iter().any(|c| !c.holds(&[])) {
            return None;
        }
        steps.reverse();
        let mut x = vec![BigRational::zero(); self.dim];
        for (j, step) in steps.into_iter().enumerate() {
            x[j] = match step {
                Step::Substituted(eq) => {
                    // a x_j + rest = 0
                    let a = eq.coeffs[j].clone();
                    let mut e = eq;
                    e.coeffs[j] = BigRational::zero();
                    -e.value(&x) / a
                }
                Step::Bounded(cs) => pick_value(&cs, &x, j)?,
            };
        }
        debug_assert!(self.contains(&x));
        Some(x)
    }

    /// Drops constraints implied by the others and duplicate equalities.
    pub fn without_redundant(&self) -> Polyhedron {
        let mut kept: Vec<Constraint> = clean(self.constraints.clone());
        let mut i = 0;
        while i < kept.len() {
            let others: Vec<Constraint> =
                kept.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, c)| c.clone()).collect();
            let implied = kept[i].negated_complement().into_iter().all(|neg| {
                let mut sys = others.clone();
                sys.push(neg);
                Polyhedron::with_constraints(self.dim, sys).is_empty()
            });
            if implied {
                kept.remove(i);
            } else {
                i += 1;
            }
        }
        Polyhedron { dim: self.dim, constraints: kept }
    }

    /// For a one-dimensional polyhedron: `(lower, upper)` bounds, each
    /// `(value, closed)`, `None` when unbounded on that side. Returns `None`
    /// overall when empty.
    #[allow(clippy::type_complexity)]
    pub fn interval(&self) -> Option<(Option<(BigRational, bool)>, Option<(BigRational, bool)>)> {
        assert_eq!(self.dim, 1, "interval() needs a one-dimensional polyhedron");
        self.witness()?;
        let (lo, hi) = bounds(&clean(self.constraints.clone()), &[], 0);
        Some((lo, hi))
    }
}

impl fmt::Display for Polyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.constraints.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

fn clean(cs: Vec<Constraint>) -> Vec<Constraint> {
    let mut out: Vec<Constraint> = cs
        .into_iter()
        .map(Constraint::normalized)
        .filter(|c| !c.trivially_true())
        .collect();
    out.sort();
    out.dedup();
    // among parallel inequalities keep the tightest
    let mut pruned: Vec<Constraint> = Vec::with_capacity(out.len());
    for c in out {
        if c.rel == Relation::Eq || c.is_trivial() {
            pruned.push(c);
            continue;
        }
        if let Some(p) = pruned.iter_mut().find(|p| p.rel != Relation::Eq && p.coeffs == c.coeffs) {
            let tighter = c.constant < p.constant || (c.constant == p.constant && c.rel == Relation::Gt);
            if tighter {
                *p = c;
            }
        } else {
            pruned.push(c);
        }
    }
    pruned
}

fn eliminate(sys: Vec<Constraint>, j: usize) -> (Vec<Constraint>, Step) {
    if let Some(k) = sys.iter().position(|c| c.rel == Relation::Eq && !c.coeffs[j].is_zero()) {
        let eq = sys[k].clone();
        let a = eq.coeffs[j].clone();
        let next = sys
            .into_iter()
            .enumerate()
            .filter(|&(i, _)| i != k)
            .map(|(_, c)| {
                if c.coeffs[j].is_zero() {
                    return c;
                }
                let f = &c.coeffs[j] / &a;
                let coeffs = c.coeffs.iter().zip(&eq.coeffs).map(|(x, y)| x - &f * y).collect();
                Constraint { coeffs, constant: &c.constant - &f * &eq.constant, rel: c.rel }
            })
            .collect();
        return (next, Step::Substituted(eq));
    }

    let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
    for c in sys {
        if c.coeffs[j].is_positive() {
            pos.push(c);
        } else if c.coeffs[j].is_negative() {
            neg.push(c);
        } else {
            rest.push(c);
        }
    }
    for p in &pos {
        for q in &neg {
            let (a, b) = (p.coeffs[j].clone(), -&q.coeffs[j]);
            let coeffs = p.coeffs.iter().zip(&q.coeffs).map(|(x, y)| x / &a + y / &b).collect();
            let rel = if p.rel == Relation::Gt || q.rel == Relation::Gt { Relation::Gt } else { Relation::Ge };
            rest.push(Constraint { coeffs, constant: &p.constant / &a + &q.constant / &b, rel });
        }
    }
    let mut touched = pos;
    touched.extend(neg);
    (rest, Step::Bounded(touched))
}

#[allow(clippy::type_complexity)]
fn bounds(
    cs: &[Constraint],
    x: &[BigRational],
    j: usize,
) -> (Option<(BigRational, bool)>, Option<(BigRational, bool)>) {
    let mut lo: Option<(BigRational, bool)> = None;
    let mut hi: Option<(BigRational, bool)> = None;
    for c in cs {
        let a = &c.coeffs[j];
        if a.is_zero() {
            continue;
        }
        let rest = c.coeffs[..j].iter().zip(x).fold(c.constant.clone(), |acc, (p, q)| acc + p * q);
        let bound = -rest / a;
        let closed = c.rel != Relation::Gt;
        let eq = c.rel == Relation::Eq;
        if (eq || a.is_positive()) && lo.as_ref().is_none_or(|(v, cl)| bound > *v || (bound == *v && *cl && !closed)) {
            lo = Some((bound.clone(), closed));
        }
        if (eq || a.is_negative()) && hi.as_ref().is_none_or(|(v, cl)| bound < *v || (bound == *v && *cl && !closed)) {
            hi = Some((bound, closed));
        }
    }
    (lo, hi)
}

fn pick_value(cs: &[Constraint], x: &[BigRational], j: usize) -> Option<BigRational> {
    let (lo, hi) = bounds(cs, x, j);
    let above = |v: &BigRational| lo.as_ref().is_none_or(|(b, closed)| if *closed { v >= b } else { v > b });
    let below = |v: &BigRational| hi.as_ref().is_none_or(|(b, closed)| if *closed { v <= b } else { v < b });
    let zero = BigRational::zero();
    if above(&zero) && below(&zero) {
        return Some(zero);
    }
    match (&lo, &hi) {
        (None, None) => Some(zero),
        (Some((b, closed)), None) => {
            Some(if *closed && b.is_integer() { b.clone() } else { BigRational::from_integer(b.floor().to_integer() + 1) })
        }
        (None, Some((b, closed))) => {
            Some(if *closed && b.is_integer() { b.clone() } else { BigRational::from_integer(b.ceil().to_integer() - 1) })
        }
        (Some((l, _)), Some((h, _))) => {
            if l > h {
                return None;
            }
            for q in 1..=64i64 {
                let q = BigInt::from(q);
                let qr = BigRational::from_integer(q.clone());
                let start = (l * &qr).floor().to_integer();
                let end = (h * &qr).ceil().to_integer();
                let mut best: Option<BigRational> = None;
                let mut p = start;
                while p <= end {
                    let v = BigRational::new(p.clone(), q.clone());
                    if above(&v) && below(&v) && best.as_ref().is_none_or(|b| v.abs() < b.abs()) {
                        best = Some(v);
                    }
                    p += 1;
                }
                if best.is_some() {
                    return best;
                }
            }
            let mid = (l + h) / BigRational::from_integer(BigInt::from(2));
            (above(&mid) && below(&mid)).then_some(mid)
        }
    }
}
