use cdirac_core::classical::build;
use cdirac_core::decomp::ReductiveDecomposition;
use cdirac_core::dirac::levi_civita_left_invariant;
use cdirac_core::linalg::{Mat, Vector};
use cdirac_core::metric::InvariantMetric;
use cdirac_core::Subspace;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;
const SPECS: [&str; 5] = ["su(2)", "sl(2,R)", "so(4)", "su(3)", "R+su(2)"];

fn random_gram(rng: &mut ChaCha8Rng, n: usize) -> Mat {
    let a = Mat::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    a.transpose() * &a + Mat::identity(n, n) * 0.5
}

fn unit(n: usize, i: usize) -> Vector {
    let mut v = Vector::zeros(n);
    v[i] = 1.0;
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// `nabla_X Y - nabla_Y X = [X, Y]` and `<nabla_X Y, Z> + <Y, nabla_X Z> = 0`.
    #[test]
    fn torsion_free_and_metric(idx in 0usize..SPECS.len(), seed in any::<u64>()) {
        let g = build(SPECS[idx]).unwrap().algebra;
        let n = g.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gram = random_gram(&mut rng, n);
        let d = ReductiveDecomposition::new(&g, Subspace::zero(n), Subspace::full(n), TOL).unwrap();
        let metric = InvariantMetric::new(d, gram.clone(), TOL).unwrap();
        let nabla = levi_civita_left_invariant(&metric).unwrap();
        let scale = g.max_structure_constant().max(1.0) * gram.amax().max(1.0);
        for i in 0..n {
            for j in 0..n {
                let lhs = nabla[i].column(j) - nabla[j].column(i);
                let br = g.bracket(&unit(n, i), &unit(n, j)).unwrap();
                prop_assert!((lhs - br).amax() < 1e-10 * scale);
                for k in 0..n {
                    let a = (nabla[i].column(j).transpose() * &gram * unit(n, k))[(0, 0)];
                    let b = (unit(n, j).transpose() * &gram * nabla[i].column(k))[(0, 0)];
                    prop_assert!((a + b).abs() < 1e-10 * scale);
                }
            }
        }
    }
}
