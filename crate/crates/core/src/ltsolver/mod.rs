//! Energy stratification, leading term equations in adapted coordinates,
//! and their level-by-level solution.

mod lts;
mod solve;
mod stratify;

pub use lts::{build_lts, LeadingTermSystem, LtsLevel};
pub use solve::{
    generic_palette, solve, Certificate, SolvabilityVerdict, SolveOptions, SolveStatus, CERT_TOL, MIN_MODULUS,
};
pub use stratify::{from_levels, stratify, EnergyLevel, EnergyStratification, GenRef, Member};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{rat, LatticeVector, RationalVector};
    use crate::potential::BulkParam;
    use crate::series::Coeff;
    use crate::stacky::StackyModel;

    fn member(g: GenRef, v: &[i64], c: Coeff) -> Member {
        Member { generator: g, vector: LatticeVector::from_i64(v), coeff: c }
    }

    fn system(dim: usize, groups: Vec<Vec<Member>>) -> LeadingTermSystem {
        let groups = groups.into_iter().enumerate().map(|(i, m)| (rat(i as i64, 1), m)).collect();
        build_lts(&from_levels(dim, RationalVector::zero(dim), groups).unwrap()).unwrap()
    }

    #[test]
    fn teardrop_boundary_point_has_four_roots() {
        // y^-1 + c y^3 at c = 1
        let lts = system(
            1,
            vec![vec![member(GenRef::Facet(0), &[-1], Coeff::one()), member(GenRef::Sector(0), &[3], Coeff::one())]],
        );
        let v = solve(&lts, &SolveOptions::default());
        assert_eq!(v.status, SolveStatus::SolvableCertified);
        let roots = &v.level_roots[0];
        assert_eq!(roots.len(), 4);
        for r in roots {
            let y = r[0];
            assert!((-y.inv() + y.powu(3) * 3.0).norm() < 1e-12);
        }
        let c = v.certificate.unwrap();
        assert!(c.recheck(&lts) < CERT_TOL);
    }

    #[test]
    fn balanced_pair_is_solved_exactly() {
        let lts = system(
            1,
            vec![vec![member(GenRef::Facet(0), &[1], Coeff::one()), member(GenRef::Facet(1), &[-1], Coeff::one())]],
        );
        let v = solve(&lts, &SolveOptions::default());
        let c = v.certificate.unwrap();
        assert!(c.exact_zero);
        assert_eq!(v.level_roots[0].len(), 2);
        assert!((c.y[0].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn lone_monomial_is_proven_unsolvable() {
        let lts = system(1, vec![vec![member(GenRef::Facet(0), &[1], Coeff::one())]]);
        let v = solve(&lts, &SolveOptions::default());
        assert_eq!(v.status, SolveStatus::UnsolvableProven);
        assert!(v.proof.is_some());
    }

    #[test]
    fn two_dimensional_level() {
        let lts = system(
            2,
            vec![vec![
                member(GenRef::Facet(0), &[1, 0], Coeff::one()),
                member(GenRef::Facet(1), &[0, 1], Coeff::one()),
                member(GenRef::Facet(2), &[-1, -1], Coeff::one()),
            ]],
        );
        let v = solve(&lts, &SolveOptions { seed: 7, ..Default::default() });
        let c = v.certificate.unwrap();
        let (a, b) = (c.y[0], c.y[1]);
        assert!((a - b).norm() < 1e-9);
        assert!((a.powu(3) - 1.0).norm() < 1e-9);
        let again = solve(&lts, &SolveOptions { seed: 7, ..Default::default() });
        assert_eq!(again.certificate.unwrap().y, c.y);
    }

    #[test]
    fn teardrop_lts_through_the_model() {
        let m = StackyModel::preset("teardrop:3").unwrap();
        let bp = BulkParam::none().with_sector(0, Coeff::symbol("c_nu1"), rat(2, 3));
        // at u = 0 all three generators have energy 1
        let strat = stratify(&m, &RationalVector(vec![rat(0, 1)]), &bp).unwrap();
        assert_eq!(strat.k_full, 1);
        let lts = build_lts(&strat).unwrap();
        let v = solve(&lts, &SolveOptions::for_model(&m, 0));
        assert_eq!(v.status, SolveStatus::SolvableCertified);
    }
}
