use std::ops::Range;

use num_complex::Complex64;
use num_rational::BigRational;

use super::stratify::{EnergyStratification, Member};
use crate::lattice::{IntMatrix, LatticeVector};
use crate::series::{LaurentPoly, NovikovScalar};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LtsLevel {
    pub energy: BigRational,
    pub members: Vec<Member>,
    /// Level polynomial in the adapted variables, with the common `T`
    /// power removed.
    pub poly: LaurentPoly,
    /// Adapted variables introduced at this level.
    pub vars: Range<usize>,
    /// `∂ poly / ∂ y_{l,s}` for the variables of this level.
    pub equations: Vec<LaurentPoly>,
}

/// The leading term equations, level by level, in adapted coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeadingTermSystem {
    pub dim: usize,
    /// Adapted basis `e*_{l,s}` (rows).
    pub basis: Vec<LatticeVector>,
    /// `y_i = Π_j y'_j^{to_original[i][j]}`, i.e. the rows of the inverse basis matrix.
    pub to_original: IntMatrix,
    pub levels: Vec<LtsLevel>,
}

impl LeadingTermSystem {
    /// `y_i = Π_j y'_j^{to_original[i][j]}`.
    pub fn to_original_coords(&self, y_adapted: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim).fold(Complex64::new(1.0, 0.0), |acc, j| {
                    let k = i64::try_from(self.to_original.get(i, j)).unwrap_or(0);
                    let z = y_adapted[j];
                    acc * if k >= 0 { z.powu(k as u32) } else { z.inv().powu(k.unsigned_abs() as u32) }
                })
            })
            .collect()
    }
}

/// Rewrites each active level in the adapted basis.
pub fn build_lts(strat: &EnergyStratification) -> Result<LeadingTermSystem> {
    let n = strat.dim;
    let w = IntMatrix::from_row_vectors(&strat.adapted_basis);
    let w_inv = w.inverse_unimodular()?;
    let mut levels = Vec::with_capacity(strat.k_full);
    let mut offset = 0;
    for lvl in strat.active_levels() {
        let mut poly = LaurentPoly::zero(n);
        for m in &lvl.members {
            let e = m.vector.to_i64().ok_or_else(|| Error::InvalidModel("exponent overflow".into()))?;
            poly = poly.add(&LaurentPoly::monomial(e, NovikovScalar::constant(m.coeff.clone())));
        }
        let poly = poly.monomial_rewrite(&w_inv)?;
        let vars = offset..lvl.cumulative_rank;
        debug_assert!(poly.variables_used().iter().all(|&i| i < lvl.cumulative_rank));
        let equations = vars.clone().map(|i| poly.partial(i)).collect();
        levels.push(LtsLevel { energy: lvl.energy.clone(), members: lvl.members.clone(), poly, vars, equations });
        offset = lvl.cumulative_rank;
    }
    Ok(LeadingTermSystem { dim: n, basis: strat.adapted_basis.clone(), to_original: w_inv, levels })
}
