use cdirac_core::classical::build;
use cdirac_core::linalg::Mat;
use cdirac_core::osla::{classify_seeded, symmetric_residual, OslaInput, OslaType};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

const PAIRS: [(&str, &str, OslaType); 5] = [
    ("su(2)", "torus", OslaType::S1),
    ("so(3)+so(3)", "full+[so(2)+so(1)]", OslaType::S2),
    ("u(2)", "derived", OslaType::NS0),
    ("u(2)", "torus", OslaType::NS1),
    ("R+su(2)+su(2)", "full+full+torus", OslaType::NS2),
];

fn invertible(rng: &mut ChaCha8Rng, n: usize) -> Mat {
    loop {
        let m = Mat::from_fn(n, n, |_, _| rng.gen_range(-2.0..2.0));
        if m.determinant().abs() > 0.2 {
            return m;
        }
    }
}

#[test]
fn reference_types() {
    for (l, k, want) in PAIRS {
        let b = build(l).unwrap();
        let input = OslaInput::new(&b.algebra, b.embed(k, TOL).unwrap(), TOL).unwrap();
        assert!(symmetric_residual(&input) < 1e-10, "{l} / {k}");
        assert_eq!(classify_seeded(&input, TOL, 1).unwrap().kind, want, "{l} / {k}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn type_survives_recombination(idx in 0usize..PAIRS.len(), seed in any::<u64>()) {
        let (l, k, want) = PAIRS[idx];
        let b = build(l).unwrap();
        let input = OslaInput::new(&b.algebra, b.embed(k, TOL).unwrap(), TOL).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kc = invertible(&mut rng, input.k.dim());
        let fc = invertible(&mut rng, input.f.dim());
        let moved = input.recombined(&kc, &fc, TOL).unwrap();
        prop_assert_eq!(classify_seeded(&moved, TOL, seed).unwrap().kind, want);
    }
}

#[test]
fn torus_of_su3_is_not_symmetric() {
    let b = build("su(3)").unwrap();
    let input = OslaInput::new(&b.algebra, b.embed("torus", TOL).unwrap(), TOL).unwrap();
    assert_eq!(classify_seeded(&input, TOL, 3).unwrap().kind, OslaType::NotSymmetric);
}
