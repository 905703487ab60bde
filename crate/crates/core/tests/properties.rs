//! Property tests for the invariants the library promises: canonical
//! rational form, exact Gram–Schmidt orthogonality, lattice preservation,
//! oracle admissibility, and the lifting residue bound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use latk_core::hnf::lattices_equal;
use latk_core::lattice::{
    complete_basis, is_elementary, is_member, lift_candidate, make_elementary, project_basis_perp,
    LatticeBasis, LatticeVector,
};
use latk_core::linalg::{
    gram_schmidt, inner_product, norm_sq, perp_component, solve_linear, RatMatrix, RatVector,
};
use latk_core::lll::{is_size_reduced, lll, satisfies_lovasz, LllParams};
use latk_core::rational::{ratio, Rational};
use latk_core::reference::{brute_cvp, successive_minima, EnumerationBudget};
use latk_core::svp::{enumerate_shortest, oracle_query, OracleSpec};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=8).prop_map(|(num, den)| Rational::new(BigInt::from(num), BigInt::from(den)))
}

fn rat_vector(dim: usize) -> impl Strategy<Value = RatVector> {
    prop::collection::vec(small_rational(), dim).prop_map(RatVector::new)
}

fn int_vector(dim: usize, bound: i64) -> impl Strategy<Value = RatVector> {
    prop::collection::vec(-bound..=bound, dim).prop_map(|v| RatVector::from_i64(&v))
}

/// Random full-rank integer basis, n columns in dimension m.
fn int_basis(n: usize, m: usize, bound: i64) -> impl Strategy<Value = LatticeBasis> {
    prop::collection::vec(prop::collection::vec(-bound..=bound, m), n)
        .prop_filter_map("independent columns", |cols| {
            let cols: Vec<RatVector> = cols.iter().map(|c| RatVector::from_i64(c)).collect();
            LatticeBasis::new(RatMatrix::new(cols)).ok()
        })
}

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=3).prop_flat_map(|n| (Just(n), n..=4))
}

fn is_canonical(x: &Rational) -> bool {
    x.denom().is_positive() && x.numer().gcd(x.denom()).is_one()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn arithmetic_stays_canonical(a in small_rational(), b in small_rational()) {
        prop_assert!(is_canonical(&(&a + &b)));
        prop_assert!(is_canonical(&(&a - &b)));
        prop_assert!(is_canonical(&(&a * &b)));
        if !b.is_zero() {
            prop_assert!(is_canonical(&(&a / &b)));
        }
    }

    #[test]
    fn gram_schmidt_orthogonality_and_monotonicity(basis in dims().prop_flat_map(|(n, m)| int_basis(n, m, 9))) {
        let g = gram_schmidt(basis.matrix()).unwrap();
        for i in 0..g.num_columns() {
            for j in 0..i {
                prop_assert_eq!(inner_product(g.column(i), g.column(j)).unwrap(), Rational::zero());
            }
            prop_assert!(norm_sq(g.column(i)) <= norm_sq(basis.column(i)));
            for e in g.column(i).entries() {
                prop_assert!(is_canonical(e));
            }
        }
    }

    #[test]
    fn solve_linear_roundtrips(basis in dims().prop_flat_map(|(n, m)| int_basis(n, m, 9)),
                               coeffs in prop::collection::vec(-9i64..=9, 3)) {
        let x: Vec<Rational> = coeffs.iter().take(basis.n())
            .map(|&c| Rational::new(BigInt::from(c), BigInt::from(3)))
            .collect();
        if x.len() < basis.n() { return Ok(()); }
        let y = basis.matrix().mul_vector(&x);
        let solved = solve_linear(basis.matrix(), &y).unwrap().unwrap();
        prop_assert_eq!(&solved, &x);
        prop_assert_eq!(basis.matrix().mul_vector(&solved), y);
    }

    #[test]
    fn make_elementary_idempotent_and_parallel(basis in int_basis(3, 3, 6),
                                               coeffs in prop::collection::vec(-6i64..=6, 3)) {
        prop_assume!(coeffs.iter().any(|&c| c != 0));
        let w = basis.vector_i64(&coeffs);
        let once = make_elementary(&basis, &w).unwrap();
        prop_assert!(is_elementary(&once));
        prop_assert_eq!(&make_elementary(&basis, &once).unwrap(), &once);
        // Parallel: original = gcd * elementary.
        let g: BigInt = coeffs.iter().fold(BigInt::zero(), |acc, &c| acc.gcd(&BigInt::from(c)));
        prop_assert_eq!(w.coords(), &once.coords().scale(&Rational::from_integer(g)));
    }

    #[test]
    fn completion_preserves_lattice(basis in dims().prop_flat_map(|(n, m)| int_basis(n, m, 8)),
                                    coeffs in prop::collection::vec(-5i64..=5, 4)) {
        prop_assume!(basis.n() >= 2);
        let coeffs: Vec<i64> = coeffs.into_iter().take(basis.n()).collect();
        prop_assume!(coeffs.len() == basis.n());
        prop_assume!(coeffs.iter().any(|&c| c != 0));
        let v = make_elementary(&basis, &basis.vector_i64(&coeffs)).unwrap();
        let rest = complete_basis(&v, &basis).unwrap();
        let mut cols = vec![v.coords().clone()];
        cols.extend(rest.iter().map(|b| b.coords().clone()));
        let rebuilt = LatticeBasis::new(RatMatrix::new(cols)).unwrap();
        prop_assert!(lattices_equal(&rebuilt, &basis).unwrap());
    }

    #[test]
    fn projected_minima_interlace(basis in int_basis(3, 3, 4),
                                  coeffs in prop::collection::vec(-3i64..=3, 3)) {
        // lambda_i of the projected lattice never exceeds lambda_{i+1} of the
        // original.
        prop_assume!(coeffs.iter().any(|&c| c != 0));
        let v = make_elementary(&basis, &basis.vector_i64(&coeffs)).unwrap();
        let rest = complete_basis(&v, &basis).unwrap();
        let projected = project_basis_perp(&rest, v.coords()).unwrap();
        let budget = EnumerationBudget::default();
        let original = successive_minima(&basis, &budget).unwrap();
        let proj = successive_minima(&projected, &budget).unwrap();
        for i in 0..proj.len() {
            prop_assert!(proj[i] <= original[i + 1]);
        }
    }

    #[test]
    fn perp_projection_never_lengthens(w in rat_vector(3), v in int_vector(3, 6)) {
        prop_assume!(!v.is_zero());
        let p = perp_component(&w, &v).unwrap();
        prop_assert!(norm_sq(&p) <= norm_sq(&w));
        prop_assert_eq!(inner_product(&p, &v).unwrap(), Rational::zero());
    }

    #[test]
    fn lll_contract(basis in dims().prop_flat_map(|(n, m)| int_basis(n, m, 12))) {
        let params = LllParams::default();
        let reduced = lll(&basis, &params).unwrap();
        prop_assert!(lattices_equal(&basis, &reduced).unwrap());
        prop_assert!(is_size_reduced(&reduced).unwrap());
        prop_assert!(satisfies_lovasz(&reduced, &params).unwrap());
        // First-vector quality against the independent enumeration.
        let lambda1_sq = successive_minima(&basis, &EnumerationBudget::default()).unwrap()[0].clone();
        let factor = Rational::from_integer(BigInt::one() << (basis.n() - 1));
        prop_assert!(norm_sq(reduced.column(0)) <= factor * lambda1_sq);
    }

    #[test]
    fn oracle_results_admissible(basis in int_basis(3, 3, 6), seed in 0u64..64) {
        let budget = EnumerationBudget::default();
        let lambda1_sq = successive_minima(&basis, &budget).unwrap()[0].clone();
        for spec in [
            OracleSpec::exact(),
            OracleSpec::lll(),
            OracleSpec::adversarial(ratio(3, 2), seed).unwrap(),
            OracleSpec::adversarial(ratio(2, 1), seed).unwrap(),
        ] {
            let r = oracle_query(&spec, &basis).unwrap();
            prop_assert!(!r.vector.is_zero());
            prop_assert!(is_elementary(&r.vector));
            prop_assert!(is_member(&basis, r.vector.coords()).unwrap().is_some());
            prop_assert!(r.vector.norm_sq() <= &r.gamma_sq * &lambda1_sq);
        }
        // The exact oracle is exactly lambda_1.
        let exact = oracle_query(&OracleSpec::exact(), &basis).unwrap();
        prop_assert_eq!(exact.vector.norm_sq(), lambda1_sq);
    }

    #[test]
    fn lift_residue_holds(basis in int_basis(3, 3, 5),
                          vcoeffs in prop::collection::vec(-3i64..=3, 3),
                          zcoeffs in prop::collection::vec(-4i64..=4, 2),
                          t in rat_vector(3)) {
        prop_assume!(vcoeffs.iter().any(|&c| c != 0));
        let v = make_elementary(&basis, &basis.vector_i64(&vcoeffs)).unwrap();
        let rest = complete_basis(&v, &basis).unwrap();
        let projected = project_basis_perp(&rest, v.coords()).unwrap();
        let z_proj = LatticeVector::new(&projected, zcoeffs.iter().map(|&c| BigInt::from(c)).collect());
        let z2 = lift_candidate(&basis, &v, &rest, z_proj.coords(), &t).unwrap();
        let t_perp = perp_component(&t, v.coords()).unwrap();
        let bound = z_proj.dist_sq(&t_perp) + norm_sq(v.coords()) / ratio(4, 1);
        prop_assert!(z2.dist_sq(&t) <= bound);
    }

    #[test]
    fn cross_enumeration_consistency(basis in dims().prop_flat_map(|(n, m)| int_basis(n, m, 8))) {
        let lambda1_enum = enumerate_shortest(&basis).unwrap().norm_sq();
        let minima = successive_minima(&basis, &EnumerationBudget::default()).unwrap();
        prop_assert_eq!(lambda1_enum, minima[0].clone());
    }

    #[test]
    fn brute_cvp_beats_any_heuristic(basis in int_basis(2, 2, 6), t in rat_vector(2),
                                     coeffs in prop::collection::vec(-4i64..=4, 2)) {
        let brute = brute_cvp(&basis, &t, &EnumerationBudget::default()).unwrap();
        let heuristic = basis.vector_i64(&coeffs);
        prop_assert!(brute.dist_sq(&t) <= heuristic.dist_sq(&t));
    }
}
