use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{frac, rat_int, rational_inverse, smith_normal_form, IntMatrix, LatticeVector, RationalVector};
use crate::{Error, Result};

/// A full-dimensional simplicial cone spanned by `n` independent lattice vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialCone {
    generators: Vec<LatticeVector>,
    /// Rows of `B^{-1}`, i.e. the dual basis.
    dual: Vec<RationalVector>,
}

impl SimplicialCone {
    pub fn new(generators: Vec<LatticeVector>) -> Result<Self> {
        let dual = dual_rational_basis(&generators)?;
        Ok(SimplicialCone { generators, dual })
    }

    pub fn generators(&self) -> &[LatticeVector] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn dual_basis(&self) -> &[RationalVector] {
        &self.dual
    }

    /// `|det B|` with the generators as columns.
    pub fn multiplicity(&self) -> BigInt {
        IntMatrix::from_column_vectors(&self.generators)
            .determinant()
            .expect("square by construction")
            .abs()
    }

    /// Coefficients `t` with `v = Σ t_i g_i`.
    pub fn coefficients(&self, v: &LatticeVector) -> Vec<BigRational> {
        self.dual.iter().map(|u| v.pair(u)).collect()
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        self.coefficients(v).iter().all(|t| !t.is_negative())
    }

    /// All lattice points `Σ t_i g_i` with every `t_i ∈ [0,1)`, including zero,
    /// as `(point, coefficients)`. Enumerated over coset representatives of
    /// `N / (Σ Z g_i)` read off the Smith form, so exactly `multiplicity` points.
    pub fn box_points(&self) -> Vec<(LatticeVector, Vec<BigRational>)> {
        let n = self.dim();
        let b = IntMatrix::from_column_vectors(&self.generators);
        let snf = smith_normal_form(&b);
        let u_inv = snf.u.inverse_unimodular().expect("smith transform is unimodular");
        let diag = snf.diagonal();

        let mut out = Vec::new();
        let mut k = vec![BigInt::zero(); n];
        loop {
            let x = u_inv.apply(&LatticeVector(k.clone()));
            let t: Vec<BigRational> = self.coefficients(&x).iter().map(frac).collect();
            let nu = combine(&self.generators, &t);
            out.push((nu, t));

            // odometer over Π [0, d_i)
            let mut i = 0;
            loop {
                if i == n {
                    out.sort();
                    return out;
                }
                k[i] += 1;
                if k[i] < diag[i] {
                    break;
                }
                k[i] = BigInt::zero();
                i += 1;
            }
        }
    }
}

fn combine(gens: &[LatticeVector], t: &[BigRational]) -> LatticeVector {
    let n = gens[0].dim();
    let mut acc = vec![BigRational::zero(); n];
    for (g, ti) in gens.iter().zip(t) {
        for (a, c) in acc.iter_mut().zip(&g.0) {
            *a += ti * rat_int(c);
        }
    }
    RationalVector(acc).to_lattice().expect("box point is integral")
}

/// Dual basis `u_1..u_n` with `<g_k, u_l> = δ_kl`, exact.
pub fn dual_rational_basis(gens: &[LatticeVector]) -> Result<Vec<RationalVector>> {
    let n = gens.len();
    if n == 0 || gens.iter().any(|g| g.dim() != n) {
        return Err(Error::DegenerateCone);
    }
    // rows of B^{-1} where B has the generators as columns
    let b = IntMatrix::from_column_vectors(gens).to_rational();
    let inv = rational_inverse(&b).ok_or(Error::DegenerateCone)?;
    Ok(inv.into_iter().map(RationalVector).collect())
}

/// Output of [`integral_basis_in_cone_traced`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeSubdivision {
    pub basis: Vec<LatticeVector>,
    /// Multiplicity of each cone visited, starting with the input cone and
    /// ending with 1.
    pub multiplicities: Vec<BigInt>,
}

/// A Z-basis of `N` contained in the cone.
pub fn integral_basis_in_cone(c: &SimplicialCone) -> Vec<LatticeVector> {
    integral_basis_in_cone_traced(c).basis
}

/// Repeatedly replaces one generator by a primitive box point, always moving
/// to the sub-cone of smallest multiplicity (ties broken lexicographically on
/// the new generator list) until the cone is unimodular.
pub fn integral_basis_in_cone_traced(c: &SimplicialCone) -> ConeSubdivision {
    let mut cone = c.clone();
    let mut mult = cone.multiplicity();
    let mut multiplicities = vec![mult.clone()];
    while !mult.is_one() {
        let mut best: Option<(BigInt, Vec<LatticeVector>)> = None;
        for (nu, t) in cone.box_points() {
            if nu.is_zero() {
                continue;
            }
            let d = nu.content();
            let w = nu.div_exact(&d);
            for (i, ti) in t.iter().enumerate() {
                if ti.is_zero() {
                    continue;
                }
                // |det| scales by the coefficient of w on the replaced generator
                let m = (ti / rat_int(&d) * rat_int(&mult)).to_integer();
                let mut gens = cone.generators.clone();
                gens[i] = w.clone();
                let better = match &best {
                    None => true,
                    Some((bm, bg)) => (&m, &gens) < (bm, bg),
                };
                if better {
                    best = Some((m, gens));
                }
            }
        }
        let (m, gens) = best.expect("a cone of multiplicity > 1 has a nonzero box point");
        cone = SimplicialCone::new(gens).expect("sub-cone stays full-dimensional");
        debug_assert_eq!(cone.multiplicity(), m);
        mult = m;
        multiplicities.push(mult.clone());
    }
    let mut basis = cone.generators;
    basis.sort();
    ConeSubdivision { basis, multiplicities }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rat;

    fn cone(gens: &[&[i64]]) -> SimplicialCone {
        SimplicialCone::new(gens.iter().map(|g| LatticeVector::from_i64(g)).collect()).unwrap()
    }

    #[test]
    fn multiplicities() {
        assert_eq!(cone(&[&[1, 0], &[0, 1]]).multiplicity(), BigInt::from(1));
        assert_eq!(cone(&[&[1, 0], &[1, 2]]).multiplicity(), BigInt::from(2));
        assert_eq!(cone(&[&[3, 0], &[0, 5]]).multiplicity(), BigInt::from(15));
        let dep = SimplicialCone::new(vec![LatticeVector::from_i64(&[1, 2]), LatticeVector::from_i64(&[2, 4])]);
        assert_eq!(dep, Err(Error::DegenerateCone));
    }

    #[test]
    fn dual_bases() {
        let d = dual_rational_basis(&[LatticeVector::from_i64(&[1, 0]), LatticeVector::from_i64(&[1, 2])]).unwrap();
        assert_eq!(d[0].0, vec![rat(1, 1), rat(-1, 2)]);
        assert_eq!(d[1].0, vec![rat(0, 1), rat(1, 2)]);
        let d = dual_rational_basis(&[LatticeVector::from_i64(&[2, 0]), LatticeVector::from_i64(&[0, 2])]).unwrap();
        assert_eq!(d[0].0, vec![rat(1, 2), rat(0, 1)]);
        assert_eq!(d[1].0, vec![rat(0, 1), rat(1, 2)]);
    }

    #[test]
    fn box_of_stacky_corner() {
        let c = cone(&[&[-3, -5], &[1, 0]]);
        let pts = c.box_points();
        assert_eq!(pts.len(), 5);
        let nus: Vec<_> = pts.iter().map(|(p, _)| p.clone()).collect();
        for want in [[0, 0], [0, -1], [-1, -2], [-1, -3], [-2, -4]] {
            assert!(nus.contains(&LatticeVector::from_i64(&want)));
        }
        for (_, t) in &pts {
            assert!(t.iter().all(|x| !x.is_negative() && x < &rat(1, 1)));
        }
    }

    #[test]
    fn cone_basis_examples() {
        let b = integral_basis_in_cone(&cone(&[&[1, 0], &[1, 2]]));
        assert_eq!(b, vec![LatticeVector::from_i64(&[1, 0]), LatticeVector::from_i64(&[1, 1])]);
        let c = cone(&[&[1, 0], &[2, 5]]);
        let tr = integral_basis_in_cone_traced(&c);
        assert!(IntMatrix::from_row_vectors(&tr.basis).is_unimodular());
        assert!(tr.basis.iter().all(|v| c.contains(v)));
        assert!(tr.multiplicities.windows(2).all(|w| w[1] < w[0]));
    }
}
