//! Holomorphic (orbi-)disc classes: basic discs, Maslov indices, areas.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::lattice::{LatticeVector, RationalVector};
use crate::stacky::{AffineForm, StackyModel};
use crate::Result;

/// Homology-level description of a disc: Blaschke factor counts per facet and
/// one twisted sector (index into the model's Box′) per orbifold marked point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DiscDescriptor {
    pub smooth: Vec<u64>,
    pub orb_points: Vec<usize>,
    pub k_boundary: u64,
    pub l_interior_smooth: u64,
}

impl DiscDescriptor {
    pub fn smooth_basic(num_facets: usize, j: usize) -> Self {
        let mut smooth = vec![0; num_facets];
        smooth[j] = 1;
        DiscDescriptor { smooth, ..Default::default() }
    }

    pub fn orbi_basic(num_facets: usize, sector: usize) -> Self {
        DiscDescriptor { smooth: vec![0; num_facets], orb_points: vec![sector], ..Default::default() }
    }

    /// Adds multiplicities and concatenates orbifold points.
    pub fn combine(&self, other: &DiscDescriptor) -> DiscDescriptor {
        DiscDescriptor {
            smooth: self.smooth.iter().zip(&other.smooth).map(|(a, b)| a + b).collect(),
            orb_points: self.orb_points.iter().chain(&other.orb_points).copied().collect(),
            k_boundary: self.k_boundary + other.k_boundary,
            l_interior_smooth: self.l_interior_smooth + other.l_interior_smooth,
        }
    }

    pub fn is_smooth(&self) -> bool {
        self.orb_points.is_empty()
    }

    fn check(&self, m: &StackyModel) {
        assert_eq!(self.smooth.len(), m.num_facets(), "one multiplicity per facet");
        assert!(self.orb_points.iter().all(|&k| k < m.sectors().len()), "orbifold point outside Box′");
    }
}

/// An interior intersection point of a disc with the toric divisors: a point
/// of local group order `order` meeting divisor `j` with multiplicity
/// `multiplicities[j] / order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalIntersection {
    pub order: u64,
    pub multiplicities: Vec<u64>,
}

/// Class data of a disc: boundary, area as a function of `u`, indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscClass {
    pub label: String,
    pub boundary: LatticeVector,
    pub area: AffineForm,
    pub mu_de: i64,
    pub mu_cw: BigRational,
}

/// One Maslov-index-two disc per facet.
pub fn basic_smooth_discs(m: &StackyModel) -> Vec<DiscDescriptor> {
    (0..m.num_facets()).map(|j| DiscDescriptor::smooth_basic(m.num_facets(), j)).collect()
}

/// One orbi-disc with a single orbifold point per element of Box′.
pub fn basic_orbi_discs(m: &StackyModel) -> Vec<DiscDescriptor> {
    (0..m.sectors().len()).map(|k| DiscDescriptor::orbi_basic(m.num_facets(), k)).collect()
}

/// `2 Σ d_j`; orbifold points of a descriptor carry exponents in `[0,1)` and
/// contribute nothing.
pub fn maslov_de(m: &StackyModel, d: &DiscDescriptor) -> i64 {
    d.check(m);
    2 * d.smooth.iter().map(|&x| x as i64).sum::<i64>()
}

/// `μ^de + 2 Σ ι(ν)` over the orbifold points.
pub fn maslov_cw(m: &StackyModel, d: &DiscDescriptor) -> BigRational {
    let shift = d.orb_points.iter().fold(BigRational::zero(), |acc, &k| acc + &m.sectors()[k].iota);
    BigRational::from_integer(BigInt::from(maslov_de(m, d))) + shift * BigRational::from_integer(BigInt::from(2))
}

/// `2 Σ_i Σ_j ⌊m_ij / m_i⌋` from raw local intersection data.
pub fn maslov_de_raw(points: &[LocalIntersection]) -> i64 {
    2 * points
        .iter()
        .flat_map(|p| p.multiplicities.iter().map(move |&mij| (mij / p.order) as i64))
        .sum::<i64>()
}

/// `2 Σ_i Σ_j m_ij / m_i` from raw local intersection data.
pub fn maslov_cw_raw(points: &[LocalIntersection]) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    points.iter().fold(BigRational::zero(), |acc, p| {
        p.multiplicities.iter().fold(acc, |acc, &mij| {
            acc + &two * BigRational::new(BigInt::from(mij), BigInt::from(p.order))
        })
    })
}

/// Local intersection data of a descriptor: each Blaschke factor is a smooth
/// point meeting its divisor once, and an orbifold point with sector
/// `ν = Σ c_k b_{i_k}` meets divisor `i_k` with multiplicity `c_k`.
pub fn intersections_of(m: &StackyModel, d: &DiscDescriptor) -> Vec<LocalIntersection> {
    d.check(m);
    let nf = m.num_facets();
    let mut out = Vec::new();
    for (j, &dj) in d.smooth.iter().enumerate() {
        for _ in 0..dj {
            let mut mult = vec![0; nf];
            mult[j] = 1;
            out.push(LocalIntersection { order: 1, multiplicities: mult });
        }
    }
    for &k in &d.orb_points {
        let e = &m.sectors()[k];
        let order = e.order.to_u64().expect("local group order fits in u64");
        let mut mult = vec![0; nf];
        for (j, c) in e.terms() {
            let scaled = c * BigRational::from_integer(e.order.clone());
            mult[j] = scaled.to_integer().to_u64().expect("nonnegative multiplicity");
        }
        out.push(LocalIntersection { order, multiplicities: mult });
    }
    out
}

/// `∂β = Σ d_j b_j + Σ ν`.
pub fn boundary(m: &StackyModel, d: &DiscDescriptor) -> LatticeVector {
    d.check(m);
    let mut acc = LatticeVector::zero(m.dim());
    for (j, &dj) in d.smooth.iter().enumerate() {
        acc = &acc + &m.stacky_vector(j).scale(&BigInt::from(dj));
    }
    for &k in &d.orb_points {
        acc = &acc + &m.sectors()[k].nu;
    }
    acc
}

/// Area (in units of `2π`) as an affine function of `u`.
pub fn area_form(m: &StackyModel, d: &DiscDescriptor) -> AffineForm {
    d.check(m);
    let mut acc = AffineForm::zero(m.dim());
    for (j, &dj) in d.smooth.iter().enumerate() {
        if dj > 0 {
            acc = acc.add(&m.ell_form(j).scale(&BigRational::from_integer(BigInt::from(dj))));
        }
    }
    for &k in &d.orb_points {
        acc = acc.add(&m.sector_ell_form(&m.sectors()[k]));
    }
    acc
}

/// `Σ d_j ℓ_j(u) + Σ ℓ_ν(u)` for `u` in the interior of the polytope.
pub fn area(m: &StackyModel, d: &DiscDescriptor, u: &RationalVector) -> Result<BigRational> {
    m.check_interior(u)?;
    Ok(area_form(m, d).eval(u))
}

/// `n + μ^de + k + 2l - 3` with `l` counting every interior marked point.
pub fn virtual_dimension(m: &StackyModel, d: &DiscDescriptor) -> i64 {
    let l = d.orb_points.len() as i64 + d.l_interior_smooth as i64;
    m.dim() as i64 + maslov_de(m, d) + d.k_boundary as i64 + 2 * l - 3
}

/// Generators `β_j` (one per facet) and `β_ν` (one per twisted sector) of
/// `H_2(X, L)`.
pub fn h2_generators(m: &StackyModel) -> Vec<DiscClass> {
    let smooth = basic_smooth_discs(m).into_iter().enumerate().map(|(j, d)| (StackyModel::facet_name(j), d));
    let orbi = basic_orbi_discs(m).into_iter().enumerate().map(|(k, d)| (StackyModel::sector_name(k), d));
    smooth
        .chain(orbi)
        .map(|(name, d)| DiscClass {
            label: format!("beta_{name}"),
            boundary: boundary(m, &d),
            area: area_form(m, &d),
            mu_de: maslov_de(m, &d),
            mu_cw: maslov_cw(m, &d),
        })
        .collect()
}
