#![allow(dead_code)]

use cdirac_core::classical::{build, Built};
use cdirac_core::decomp::{b_orthogonal_complement, fibration_split};
use cdirac_core::linalg::{self, Mat};
use cdirac_core::metric::{refine_blocks, MetricBlock};
use cdirac_core::Subspace;
use rand::Rng;

pub const TOL: f64 = 1e-9;

#[derive(Clone, Copy)]
pub enum Scheme {
    /// `k = 0`, one block per Killing-orthogonal basis vector.
    Lines,
    /// `f` and `p` from the Cartan involution, refined.
    Fibration,
    /// Killing complement of `k`, refined.
    Complement,
}

pub struct Case {
    pub name: String,
    pub built: Built,
    pub k: Subspace,
    pub blocks: Vec<MetricBlock>,
    /// Sign of the Killing form on each block.
    pub signs: Vec<f64>,
}

impl Case {
    pub fn new(spec: &str, k: &str, scheme: Scheme) -> Case {
        let built = build(spec).unwrap();
        let g = &built.algebra;
        let k = built.embed(k, TOL).unwrap();
        let kill = g.killing_matrix();
        let coarse: Vec<MetricBlock> = match scheme {
            Scheme::Lines => {
                let basis = linalg::diagonalize_form(&Mat::identity(g.dim(), g.dim()), &kill, TOL).unwrap();
                (0..basis.ncols())
                    .map(|i| {
                        let s = Subspace::from_basis(basis.columns(i, 1).into_owned()).unwrap();
                        MetricBlock::new(format!("b{}", i + 1), s, 1.0)
                    })
                    .collect()
            }
            Scheme::Fibration => {
                let split = fibration_split(g, &built.theta, &k, TOL).unwrap();
                [("f", split.f), ("p", split.p)]
                    .into_iter()
                    .filter(|(_, s)| s.dim() > 0)
                    .map(|(n, s)| MetricBlock::new(n, s, 1.0))
                    .collect()
            }
            Scheme::Complement => vec![MetricBlock::new("m", b_orthogonal_complement(g, &k, TOL).unwrap(), 1.0)],
        };
        let blocks = refine_blocks(g, &k, coarse, TOL).unwrap();
        let signs = blocks
            .iter()
            .map(|b| {
                let r = b.subspace.basis().transpose() * &kill * b.subspace.basis();
                let (pos, neg, zero) = linalg::signature(&r, TOL);
                assert_eq!(zero, 0);
                assert!(pos == 0 || neg == 0, "Killing form indefinite on a block of {spec}");
                if pos > 0 {
                    1.0
                } else {
                    -1.0
                }
            })
            .collect();
        let name = format!("{spec} / {}", k.dim());
        Case { name, built, k, blocks, signs }
    }

    pub fn dim_m(&self) -> usize {
        self.blocks.iter().map(|b| b.subspace.dim()).sum()
    }

    /// Positive-definite weights: `lambda_a = sign_a * mu_a * s` with small
    /// integers `mu_a`, so coincidences making the metric cyclic occur.
    pub fn random_blocks<R: Rng>(&self, rng: &mut R) -> Vec<MetricBlock> {
        let top = if rng.gen_bool(0.5) { 2 } else { 4 };
        let s: f64 = rng.gen_range(0.5..2.0);
        self.blocks
            .iter()
            .zip(&self.signs)
            .map(|(b, sg)| {
                let mu = rng.gen_range(1..=top) as f64;
                MetricBlock::new(b.label.clone(), b.subspace.clone(), sg * mu * s)
            })
            .collect()
    }
}

/// Decompositions of so(4), so(5), su(3), sl(2,R), sl(3,R) with 3 <= dim m <= 7.
pub fn cases() -> Vec<Case> {
    vec![
        Case::new("so(4)", "0", Scheme::Lines),
        Case::new("so(5)", "so(3)+so(1)+so(1)", Scheme::Complement),
        Case::new("so(5)", "so(3)+so(2)", Scheme::Complement),
        Case::new("su(3)", "torus", Scheme::Complement),
        Case::new("su(3)", "so(3)", Scheme::Complement),
        Case::new("sl(2,R)", "0", Scheme::Lines),
        Case::new("sl(3,R)", "so(2)+so(1)", Scheme::Fibration),
        Case::new("sl(3,R)", "so(3)", Scheme::Fibration),
    ]
}
