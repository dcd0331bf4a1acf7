use nalgebra::DVector;
use proptest::prelude::*;
use specidx::lattice::{bs_count_difference, build_h, build_h0, xi_birman_schwinger, xi_counting, xi_direct, Grid1D};
use specidx::potential::PotentialSpec;
use specidx::projpair::{index_pair, make_projection, trace_index_check};
use specidx::scatter1d::{arc_count, eigenphases, smatrix};
use specidx::xindex::xi_essential;

fn vectors(dim: usize, count: usize) -> impl Strategy<Value = Vec<DVector<f64>>> {
    prop::collection::vec(prop::collection::vec(-1.0..1.0f64, dim), count)
        .prop_map(|vs| vs.into_iter().map(DVector::from_vec).collect())
}

fn pair() -> impl Strategy<Value = (usize, Vec<DVector<f64>>, Vec<DVector<f64>>)> {
    (3usize..9).prop_flat_map(|n| (Just(n), 0..=n, 0..=n)).prop_flat_map(|(n, r, s)| (Just(n), vectors(n, r), vectors(n, s)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn index_is_antisymmetric_and_equals_rank_difference((n, a, b) in pair()) {
        let (Ok(p), Ok(q)) = (make_projection(n, &a), make_projection(n, &b)) else {
            return Err(TestCaseError::reject("degenerate basis"));
        };
        let (Ok(pq), Ok(qp)) = (index_pair(&p, &q, 1e-9, 1e-8), index_pair(&q, &p, 1e-9, 1e-8)) else {
            return Err(TestCaseError::reject("spectrum in the ambiguous band"));
        };
        prop_assert_eq!(pq.value, -qp.value);
        prop_assert_eq!(pq.value, p.rank() as i64 - q.rank() as i64);
        prop_assert_eq!(index_pair(&p, &p, 1e-9, 1e-8).unwrap().value, 0);
    }

    #[test]
    fn trace_of_difference_is_the_index((n, a, b) in pair()) {
        let (Ok(p), Ok(q)) = (make_projection(n, &a), make_projection(n, &b)) else {
            return Err(TestCaseError::reject("degenerate basis"));
        };
        if let Ok(t) = trace_index_check(&p, &q, 1e-9) {
            prop_assert!(t.agree, "{:?}", t);
        }
    }

    #[test]
    fn arc_counts_add_over_adjacent_arcs(
        phases in prop::collection::vec(0.0..std::f64::consts::TAU, 0..6),
        t in prop::array::uniform3(0.0..std::f64::consts::TAU),
    ) {
        let [a, b, c] = t;
        prop_assert_eq!(arc_count(&phases, a, b) + arc_count(&phases, b, c), arc_count(&phases, a, c));
        prop_assert_eq!(arc_count(&phases, a, b), -arc_count(&phases, b, a));
    }

    #[test]
    fn lattice_routes_agree(depth in -6.0..6.0f64, width in 0.3..1.2f64, lam in 0.05..3.0f64) {
        let grid = Grid1D::new(-8.0, 8.0, 80).unwrap();
        let v = PotentialSpec::gaussian(depth, width).unwrap();
        let h0 = build_h0(&grid);
        let h = build_h(&grid, &v).unwrap();
        let (Ok(direct), Ok(count), Ok(bs)) =
            (xi_direct(&h0, &h, lam), xi_counting(&h0, &h, lam), xi_birman_schwinger(&h0, &v, lam))
        else {
            return Err(TestCaseError::reject("threshold at an eigenvalue"));
        };
        prop_assert_eq!(direct, count);
        prop_assert_eq!(count, bs);
        prop_assert_eq!(bs_count_difference(&h0, &v, lam).unwrap(), -bs);
    }

    #[test]
    fn sign_of_potential_fixes_sign_of_xi(depth in 0.1..10.0f64, width in 0.3..2.0f64, lam in 0.05..10.0f64) {
        let attractive = PotentialSpec::gaussian(depth, width).unwrap();
        if let Some(x) = xi_essential(lam, &attractive, 48).unwrap().xi.value() {
            prop_assert!(x <= 0);
        }
        if let Some(x) = xi_essential(lam, &attractive.negated(), 48).unwrap().xi.value() {
            prop_assert!(x >= 0);
        }
    }

    #[test]
    fn scattering_matrix_is_unitary(depth in -5.0..5.0f64, width in 0.3..2.0f64, lam in 0.01..50.0f64) {
        let v = PotentialSpec::gaussian(depth, width).unwrap();
        let s = smatrix(lam, &v, 1e-10).unwrap();
        prop_assert!(s.unitarity_residual < 1e-6);
        prop_assert!((s.t().norm_sqr() + s.r_left().norm_sqr() - 1.0).abs() < 1e-6);
        let phases = eigenphases(&s).unwrap();
        prop_assert!(phases.iter().all(|p| (0.0..std::f64::consts::TAU).contains(p)));
    }
}
