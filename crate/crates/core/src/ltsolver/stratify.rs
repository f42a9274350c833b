use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Signed;

use crate::lattice::{lattice_rank, saturate_flag, LatticeVector, RationalVector};
use crate::potential::BulkParam;
use crate::series::Coeff;
use crate::stacky::StackyModel;
use crate::{Error, Result};

/// A generator of the potential: a facet or an active twisted sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenRef {
    Facet(usize),
    Sector(usize),
}

impl GenRef {
    pub fn name(&self) -> String {
        match *self {
            GenRef::Facet(j) => StackyModel::facet_name(j),
            GenRef::Sector(k) => StackyModel::sector_name(k),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Member {
    pub generator: GenRef,
    pub vector: LatticeVector,
    pub coeff: Coeff,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergyLevel {
    pub energy: BigRational,
    pub members: Vec<Member>,
    /// Rank of all members up to and including this level.
    pub cumulative_rank: usize,
    /// Increase of the rank at this level.
    pub d: usize,
}

/// Generators of the leading bulk potential grouped by `T`-exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergyStratification {
    pub dim: usize,
    pub u: RationalVector,
    /// All levels in increasing energy; only the first `k_full` matter.
    pub levels: Vec<EnergyLevel>,
    /// Number of levels up to and including the first one whose
    /// cumulative members span `N_R`.
    pub k_full: usize,
    /// Basis of `N` adapted to the flag of cumulative spans (rows).
    pub adapted_basis: Vec<LatticeVector>,
    /// Number of generators on levels `1..=k_full`.
    pub generator_count: usize,
}

impl EnergyStratification {
    pub fn active_levels(&self) -> &[EnergyLevel] {
        &self.levels[..self.k_full]
    }
}

/// Groups the generators by energy `ℓ_j(u)` (facets) and `λ_ν + ℓ_ν(u)`
/// (active sectors) and computes the adapted basis.
pub fn stratify(m: &StackyModel, u: &RationalVector, bp: &BulkParam) -> Result<EnergyStratification> {
    m.check_interior(u)?;
    let mut by_energy: BTreeMap<BigRational, Vec<Member>> = BTreeMap::new();
    for j in 0..m.num_facets() {
        by_energy.entry(m.ell(j, u)).or_default().push(Member {
            generator: GenRef::Facet(j),
            vector: m.stacky_vector(j),
            coeff: Coeff::one(),
        });
    }
    for (&k, sb) in &bp.sectors {
        if !sb.exponent.is_positive() {
            return Err(Error::NonPositiveBulkExponent(k));
        }
        if sb.coeff.is_zero() {
            continue;
        }
        let e = m
            .sectors()
            .get(k)
            .ok_or_else(|| Error::InvalidModel(format!("no twisted sector with index {k}")))?;
        let energy = &sb.exponent + m.sector_ell_form(e).eval(u);
        by_energy.entry(energy).or_default().push(Member {
            generator: GenRef::Sector(k),
            vector: e.nu.clone(),
            coeff: sb.coeff.clone(),
        });
    }
    from_levels(m.dim(), u.clone(), by_energy.into_iter().collect())
}

/// Builds a stratification from explicitly given levels (sorted by energy).
pub fn from_levels(
    dim: usize,
    u: RationalVector,
    groups: Vec<(BigRational, Vec<Member>)>,
) -> Result<EnergyStratification> {
    let mut levels = Vec::with_capacity(groups.len());
    let mut cumulative: Vec<LatticeVector> = Vec::new();
    let mut flag: Vec<Vec<LatticeVector>> = Vec::new();
    let mut prev_rank = 0;
    let mut k_full = None;
    for (energy, members) in groups {
        cumulative.extend(members.iter().map(|m| m.vector.clone()));
        let r = lattice_rank(&cumulative);
        if k_full.is_none() {
            flag.push(cumulative.clone());
        }
        levels.push(EnergyLevel { energy, members, cumulative_rank: r, d: r - prev_rank });
        prev_rank = r;
        if r == dim && k_full.is_none() {
            k_full = Some(levels.len());
        }
    }
    let k_full = k_full.ok_or(Error::SpanNeverFull)?;
    let adapted_basis = saturate_flag(&flag)?;
    let generator_count = levels[..k_full].iter().map(|l| l.members.len()).sum();
    Ok(EnergyStratification { dim, u, levels, k_full, adapted_basis, generator_count })
}
