//! Property tests for the model invariants.

use latitude::{
    matmul, maxtimes_product, mixed_product, mixed_product_with_alpha, sigmoid,
    DenseMatrix, MixedFactorization, ParamVectors,
};
use proptest::prelude::*;

fn nonneg_matrix(rows: usize, cols: usize) -> impl Strategy<Value = DenseMatrix> {
    prop::collection::vec(0.0f64..1.0, rows * cols)
        .prop_map(move |v| DenseMatrix::from_vec(rows, cols, v).unwrap())
}

fn dims_and_rank() -> impl Strategy<Value = (usize, usize, usize)> {
    (2usize..6, 2usize..6, 1usize..=8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sandwich_bound((n, m, k) in dims_and_rank(), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let b = DenseMatrix::from_vec(n, k, (0..n * k).map(|_| rng.gen()).collect()).unwrap();
        let c = DenseMatrix::from_vec(k, m, (0..k * m).map(|_| rng.gen()).collect()).unwrap();
        let alpha = DenseMatrix::from_vec(n, m, (0..n * m).map(|_| rng.gen()).collect()).unwrap();
        let mixed = mixed_product_with_alpha(&b, &c, &alpha).unwrap();
        let mt = maxtimes_product(&b, &c).unwrap();
        let st = matmul(&b, &c).unwrap();
        for i in 0..n {
            for j in 0..m {
                prop_assert!(mt.get(i, j) <= st.get(i, j) + 1e-12);
                prop_assert!(mixed.get(i, j) >= mt.get(i, j) - 1e-12);
                prop_assert!(mixed.get(i, j) <= st.get(i, j) + 1e-12);
            }
        }
    }

    #[test]
    fn alpha_monotonicity(b in nonneg_matrix(3, 4), c in nonneg_matrix(4, 3),
                          a1 in 0.0f64..1.0, a2 in 0.0f64..1.0) {
        // Increasing one mixing weight never increases that entry.
        let (lo, hi) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
        let mut alpha_lo = DenseMatrix::zeros(3, 3);
        let mut alpha_hi = DenseMatrix::zeros(3, 3);
        alpha_lo.set(1, 1, lo);
        alpha_hi.set(1, 1, hi);
        let p_lo = mixed_product_with_alpha(&b, &c, &alpha_lo).unwrap();
        let p_hi = mixed_product_with_alpha(&b, &c, &alpha_hi).unwrap();
        prop_assert!(p_hi.get(1, 1) <= p_lo.get(1, 1) + 1e-12);
    }

    #[test]
    fn rank_one_collapse(b in nonneg_matrix(4, 1), c in nonneg_matrix(1, 5),
                         co in prop::collection::vec(-5.0f64..5.0, 4),
                         ro in prop::collection::vec(-5.0f64..5.0, 5)) {
        let st = matmul(&b, &c).unwrap();
        prop_assert_eq!(&maxtimes_product(&b, &c).unwrap(), &st);
        let params = ParamVectors::new(co, ro, 5.0).unwrap();
        let fact = MixedFactorization::new(b, c, params).unwrap();
        prop_assert_eq!(&mixed_product(&fact).unwrap(), &st);
    }

    #[test]
    fn proposition_one_round_trip(values in prop::collection::vec(1.0f64..2.0, 12)) {
        let a = DenseMatrix::from_vec(3, 4, values).unwrap();
        let v = 3f64.sqrt() / 2.0;
        let b = DenseMatrix::from_vec(3, 4, vec![v; 12]).unwrap();
        let c = DenseMatrix::from_vec(4, 4, vec![v; 16]).unwrap();
        let alpha = latitude::constant_factor_alpha(&a, &b, &c).unwrap();
        let rebuilt = mixed_product_with_alpha(&b, &c, &alpha).unwrap();
        for (x, y) in a.values().iter().zip(rebuilt.values()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn endpoint_limits(b in nonneg_matrix(4, 3), c in nonneg_matrix(3, 4)) {
        // With all parameters clamped to -M (resp. +M) the mixed product is
        // within sigma(-2M) (resp. 1 - sigma(2M)) of the corresponding pure
        // product, entrywise relative to the product gap.
        let bound = 5.0;
        let st = matmul(&b, &c).unwrap();
        let mt = maxtimes_product(&b, &c).unwrap();
        let gate = sigmoid(-2.0 * bound);

        let low = ParamVectors::all_clamped_low(4, 4, bound).unwrap();
        let fact = MixedFactorization::new(b.clone(), c.clone(), low).unwrap();
        let p = mixed_product(&fact).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let gap = st.get(i, j) - mt.get(i, j);
                prop_assert!((p.get(i, j) - st.get(i, j)).abs() <= gate * gap + 1e-12);
            }
        }

        let high = ParamVectors::new(vec![bound; 4], vec![bound; 4], bound).unwrap();
        let fact = MixedFactorization::new(b, c, high).unwrap();
        let p = mixed_product(&fact).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let gap = st.get(i, j) - mt.get(i, j);
                prop_assert!((p.get(i, j) - mt.get(i, j)).abs() <= gate * gap + 1e-12);
            }
        }
    }

    #[test]
    fn csv_round_trip(values in prop::collection::vec(-1e6f64..1e6, 12)) {
        let m = DenseMatrix::from_vec(3, 4, values).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        latitude::io::save_matrix_csv(&path, &m).unwrap();
        let loaded = latitude::io::load_csv(&path).unwrap();
        prop_assert_eq!(loaded.matrix.values(), m.values());
    }
}
