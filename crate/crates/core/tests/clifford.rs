use cdirac_core::clifford::build_clifford;
use cdirac_core::linalg::{cmax_abs, CMat};
use nalgebra::Complex;
use proptest::prelude::*;

#[test]
fn relations_and_module_dimension() {
    for n in 1..=10 {
        let ctx = build_clifford(n);
        assert!(ctx.anticommutator_residual() < 1e-12, "n = {n}");
        assert_eq!(ctx.delta_dim, 1 << (n / 2), "n = {n}");
        assert_eq!(ctx.gammas.len(), n);
    }
}

#[test]
fn triple_products_independent_from_three() {
    for n in 3..=8 {
        assert!(build_clifford(n).monomial_independence().unwrap(), "n = {n}");
    }
    assert!(build_clifford(2).monomial_independence().is_err());
}

#[test]
fn three_dimensional_generators() {
    let g = build_clifford(3).dense_gammas();
    let (o, i, one) = (Complex::new(0.0, 0.0), Complex::new(0.0, 1.0), Complex::new(1.0, 0.0));
    assert_eq!(g[0], CMat::from_row_slice(2, 2, &[i, o, o, -i]));
    assert_eq!(g[1], CMat::from_row_slice(2, 2, &[o, i, i, o]));
    assert_eq!(g[2], CMat::from_row_slice(2, 2, &[o, -one, one, o]));
}

proptest! {
    /// `X . X = -|X|^2` for every vector.
    #[test]
    fn vectors_square_to_minus_norm(n in 1usize..9, raw in proptest::collection::vec(-3.0f64..3.0, 8)) {
        let ctx = build_clifford(n);
        let x = &raw[..n];
        let v = ctx.embed_vector(x).unwrap();
        let sq = v.mul(&v).unwrap().to_dense();
        let norm2: f64 = x.iter().map(|a| a * a).sum();
        let want = CMat::identity(ctx.delta_dim, ctx.delta_dim) * Complex::new(-norm2, 0.0);
        prop_assert!(cmax_abs(&(sq - want)) < 1e-10 * norm2.max(1.0));
    }

    /// Sparse products agree with dense matrix products.
    #[test]
    fn sparse_matches_dense(n in 2usize..9, i in 0usize..8, j in 0usize..8, k in 0usize..8) {
        let ctx = build_clifford(n);
        let (i, j, k) = (i % n, j % n, k % n);
        let g = ctx.dense_gammas();
        let dense = &g[i] * &g[j] * &g[k];
        prop_assert!(cmax_abs(&(ctx.triple(i, j, k).to_dense() - dense)) < 1e-14);
    }
}
