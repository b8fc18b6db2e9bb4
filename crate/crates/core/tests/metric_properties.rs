mod common;

use std::sync::OnceLock;

use cdirac_core::dirac::{is_simplest_dirac, ConnectionTable};
use cdirac_core::linalg::Mat;
use cdirac_core::metric::{
    criterion_residual, cyclic_residual, cyclic_residual_ordered, diagonal_metric, is_cyclic,
    mixed_structure_constant, MetricBlock,
};
use common::{cases, Case, TOL};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn all_cases() -> &'static [Case] {
    static CASES: OnceLock<Vec<Case>> = OnceLock::new();
    CASES.get_or_init(cases)
}

#[test]
fn cases_cover_the_dimension_range() {
    for c in all_cases() {
        let d = c.dim_m();
        assert!((3..=7).contains(&d), "{}: dim m = {d}", c.name);
    }
}

fn random_change(rng: &mut ChaCha8Rng, n: usize) -> Mat {
    loop {
        let m = Mat::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0)) + Mat::identity(n, n) * 1.5;
        if m.determinant() > 0.1 {
            return m;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn criterion_matches_brute_force(idx in 0usize..8, seed in any::<u64>()) {
        let case = &all_cases()[idx];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let blocks = case.random_blocks(&mut rng);
        let g = &case.built.algebra;
        let crit = criterion_residual(g, &case.k, &blocks, TOL).unwrap();
        let metric = diagonal_metric(g, &case.k, blocks, TOL).unwrap();
        prop_assert_eq!(crit.passes(TOL), is_cyclic(&metric, TOL), "{}", case.name);
    }

    #[test]
    fn zero_order_vanishes_iff_traceless_cyclic(idx in 0usize..8, seed in any::<u64>()) {
        let case = &all_cases()[idx];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let metric = diagonal_metric(&case.built.algebra, &case.k, case.random_blocks(&mut rng), TOL).unwrap();
        let v = is_simplest_dirac(&metric, TOL).unwrap();
        prop_assert_eq!(v.verdict_a, v.verdict_b);
    }

    #[test]
    fn verdict_is_frame_independent(idx in 0usize..8, seed in any::<u64>()) {
        let case = &all_cases()[idx];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let metric = diagonal_metric(&case.built.algebra, &case.k, case.random_blocks(&mut rng), TOL).unwrap();
        let change = random_change(&mut rng, metric.dim());
        let moved = metric.rebased(&change, TOL).unwrap();
        let a = is_simplest_dirac(&metric, TOL).unwrap();
        let b = is_simplest_dirac(&moved, TOL).unwrap();
        prop_assert_eq!(a.verdict_a, b.verdict_a);
    }

    #[test]
    fn connection_is_skew(idx in 0usize..8, seed in any::<u64>()) {
        let case = &all_cases()[idx];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let metric = diagonal_metric(&case.built.algebra, &case.k, case.random_blocks(&mut rng), TOL).unwrap();
        let t = ConnectionTable::new(&metric, TOL).unwrap();
        prop_assert!(t.skew_residual() < 1e-10 * t.scale());
    }

    #[test]
    fn cyclic_residual_ignores_triple_order(idx in 0usize..8, seed in any::<u64>()) {
        let case = &all_cases()[idx];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let metric = diagonal_metric(&case.built.algebra, &case.k, case.random_blocks(&mut rng), TOL).unwrap();
        let (a, b) = (cyclic_residual(&metric), cyclic_residual_ordered(&metric));
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }

    #[test]
    fn compact_torus_never_cyclic(mus in proptest::collection::vec(0.01f64..100.0, 3)) {
        let case = all_cases().iter().find(|c| c.name.starts_with("su(3) / 2")).unwrap();
        let blocks: Vec<MetricBlock> = case
            .blocks
            .iter()
            .zip(&mus)
            .map(|(b, mu)| MetricBlock::new(b.label.clone(), b.subspace.clone(), -mu))
            .collect();
        let crit = criterion_residual(&case.built.algebra, &case.k, &blocks, TOL).unwrap();
        prop_assert!(!crit.passes(TOL));
    }
}

#[test]
fn symmetric_cases_are_cyclic_for_every_weight() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in all_cases().iter().filter(|c| c.blocks.len() == 1) {
        for _ in 0..5 {
            let metric = diagonal_metric(&case.built.algebra, &case.k, case.random_blocks(&mut rng), TOL).unwrap();
            assert!(is_cyclic(&metric, TOL), "{}", case.name);
        }
    }
}

#[test]
fn torus_has_a_mixed_constant() {
    let case = all_cases().iter().find(|c| c.name.starts_with("su(3) / 2")).unwrap();
    assert_eq!(case.blocks.len(), 3);
    let c = mixed_structure_constant(&case.built.algebra, &case.k, &case.blocks, TOL).unwrap();
    assert!(c > 0.1, "mixed constant {c}");
}

#[test]
fn both_outcomes_occur() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut seen = [false; 2];
    for case in all_cases().iter().filter(|c| c.blocks.len() > 1) {
        for _ in 0..40 {
            let metric = diagonal_metric(&case.built.algebra, &case.k, case.random_blocks(&mut rng), TOL).unwrap();
            seen[is_cyclic(&metric, TOL) as usize] = true;
        }
    }
    assert_eq!(seen, [true, true]);
}
