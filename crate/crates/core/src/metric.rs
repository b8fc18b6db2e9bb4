//! Invariant metrics on `m` and the cyclic / traceless-cyclic conditions.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::decomp::{FibrationSplit, ReductiveDecomposition};
use crate::error::{input_err, Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{self, Mat, Vector};
use crate::subspace::Subspace;

/// A summand of `m` carrying the metric `lambda * B`.
#[derive(Debug, Clone)]
pub struct MetricBlock {
    pub label: String,
    /// Basis in `g`-coordinates.
    pub subspace: Subspace,
    pub lambda: f64,
}

impl MetricBlock {
    pub fn new(label: impl Into<String>, subspace: Subspace, lambda: f64) -> Self {
        MetricBlock { label: label.into(), subspace, lambda }
    }
}

/// `Ad(K)`-invariant inner product on `m`, as a Gram matrix on `m`'s basis.
#[derive(Debug, Clone)]
pub struct InvariantMetric<'g> {
    pub decomp: ReductiveDecomposition<'g>,
    pub gram: Mat,
    pub blocks: Option<Vec<MetricBlock>>,
}

impl<'g> InvariantMetric<'g> {
    pub fn new(decomp: ReductiveDecomposition<'g>, gram: Mat, tol: f64) -> Result<Self> {
        let d = decomp.dim_m();
        if gram.shape() != (d, d) {
            return Err(input_err!("Gram matrix must be {d}x{d}"));
        }
        let asym = linalg::max_abs(&(&gram - gram.transpose()));
        let sc = linalg::max_abs(&gram).max(1.0);
        if asym > 1e-12 * sc {
            return Err(input_err!("Gram matrix is not symmetric"));
        }
        let ev = linalg::sym_eigenvalues(&gram);
        if let Some(&lo) = ev.first() {
            if lo <= tol * sc {
                return Err(Error::IndefiniteMetric(format!("smallest eigenvalue {lo}")));
            }
        }
        let m = InvariantMetric { decomp, gram, blocks: None };
        let r = m.invariance_residual();
        if r > 1e-9 * m.scale() {
            return Err(input_err!("metric is not ad(k)-invariant (residual {r:e})"));
        }
        Ok(m)
    }

    pub fn g(&self) -> &'g LieAlgebra {
        self.decomp.g
    }

    pub fn dim(&self) -> usize {
        self.decomp.dim_m()
    }

    /// `max(1, max |C|, max |gram|)`, the divisor used before tolerance tests.
    pub fn scale(&self) -> f64 {
        self.g().max_structure_constant().max(linalg::max_abs(&self.gram)).max(1.0)
    }

    /// `max |<[z,x]_m, y> + <x, [z,y]_m>|` over basis `z` in `k`, `x, y` in `m`.
    pub fn invariance_residual(&self) -> f64 {
        self.decomp
            .k_action()
            .iter()
            .map(|a| linalg::max_abs(&(a.transpose() * &self.gram + &self.gram * a)))
            .fold(0.0, f64::max)
    }

    pub fn inner(&self, x: &Vector, y: &Vector) -> f64 {
        (x.transpose() * &self.gram * y)[(0, 0)]
    }

    /// `p[(a*d + b)*d + c] = <[m_a, m_b]_m, m_c>`.
    pub fn bracket_pairings(&self) -> Vec<f64> {
        let d = self.dim();
        let t = self.decomp.m_tensor();
        let mut p = alloc::vec![0.0; d * d * d];
        for a in 0..d {
            for b in 0..d {
                let row = &t[(a * d + b) * d..(a * d + b + 1) * d];
                if row.iter().all(|x| *x == 0.0) {
                    continue;
                }
                for c in 0..d {
                    let mut s = 0.0;
                    for e in 0..d {
                        s += row[e] * self.gram[(e, c)];
                    }
                    p[(a * d + b) * d + c] = s;
                }
            }
        }
        p
    }

    /// Same metric expressed in the basis `m.basis * change`.
    pub fn rebased(&self, change: &Mat, tol: f64) -> Result<Self> {
        let decomp = self.decomp.rebased(change, tol)?;
        let gram = change.transpose() * &self.gram * change;
        let gram = (&gram + gram.transpose()) * 0.5;
        let mut m = InvariantMetric::new(decomp, gram, tol)?;
        m.blocks = self.blocks.clone();
        Ok(m)
    }
}

fn cyclic_sum(p: &[f64], d: usize, a: usize, b: usize, c: usize) -> f64 {
    p[(a * d + b) * d + c] + p[(b * d + c) * d + a] + p[(c * d + a) * d + b]
}

/// Raw `max |S <[X,Y]_m, Z>|` over basis triples `a <= b <= c`.
pub fn cyclic_residual(metric: &InvariantMetric<'_>) -> f64 {
    let d = metric.dim();
    let p = metric.bracket_pairings();
    let mut worst = 0.0f64;
    for a in 0..d {
        for b in a..d {
            for c in b..d {
                worst = worst.max(cyclic_sum(&p, d, a, b, c).abs());
            }
        }
    }
    worst
}

/// The same maximum taken over all ordered triples.
pub fn cyclic_residual_ordered(metric: &InvariantMetric<'_>) -> f64 {
    let d = metric.dim();
    let p = metric.bracket_pairings();
    let mut worst = 0.0f64;
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                worst = worst.max(cyclic_sum(&p, d, a, b, c).abs());
            }
        }
    }
    worst
}

pub fn is_cyclic(metric: &InvariantMetric<'_>, tol: f64) -> bool {
    cyclic_residual(metric) / metric.scale() < tol
}

pub fn is_traceless_cyclic(metric: &InvariantMetric<'_>, tol: f64) -> bool {
    is_cyclic(metric, tol) && metric.g().is_unimodular(tol)
}

fn check_blocks(g: &LieAlgebra, k: &Subspace, blocks: &[MetricBlock], tol: f64) -> Result<()> {
    let b = g.killing_form();
    let sc = g.max_structure_constant().max(1.0);
    for (i, x) in blocks.iter().enumerate() {
        if x.subspace.ambient_dim() != g.dim() {
            return Err(input_err!("block {} has the wrong ambient dimension", x.label));
        }
        let bk = linalg::max_abs(&(k.basis().transpose() * &b.matrix * x.subspace.basis()));
        if bk > tol * sc * sc {
            return Err(input_err!("block {} is not Killing-orthogonal to k", x.label));
        }
        for y in &blocks[i + 1..] {
            let r = linalg::max_abs(&(x.subspace.basis().transpose() * &b.matrix * y.subspace.basis()));
            if r > tol * sc * sc {
                return Err(input_err!("blocks {} and {} are not Killing-orthogonal", x.label, y.label));
            }
        }
        let inv = g.bracket_residual(k, &x.subspace, &x.subspace);
        if inv > tol * sc {
            return Err(input_err!("block {} is not ad(k)-invariant", x.label));
        }
    }
    Ok(())
}

fn assemble<'g>(
    g: &'g LieAlgebra,
    k: &Subspace,
    blocks: &[MetricBlock],
    tol: f64,
) -> Result<ReductiveDecomposition<'g>> {
    let parts: Vec<&Mat> = blocks.iter().map(|b| b.subspace.basis()).collect();
    let m = if parts.is_empty() {
        Subspace::zero(g.dim())
    } else {
        Subspace::from_basis(linalg::hcat(&parts))?
    };
    ReductiveDecomposition::new(g, k.clone(), m, tol)
}

/// `sum_a lambda_a B|block_a`, with `m` the concatenation of the blocks.
pub fn diagonal_metric<'g>(
    g: &'g LieAlgebra,
    k: &Subspace,
    blocks: Vec<MetricBlock>,
    tol: f64,
) -> Result<InvariantMetric<'g>> {
    let b = g.killing_form();
    for x in &blocks {
        if x.lambda == 0.0 || !x.lambda.is_finite() {
            return Err(Error::IndefiniteMetric(format!("lambda = {} on block {}", x.lambda, x.label)));
        }
        let r = b.restrict(&x.subspace) * x.lambda;
        let (pos, _, _) = linalg::signature(&r, tol);
        if pos != x.subspace.dim() {
            return Err(Error::IndefiniteMetric(format!(
                "lambda = {} has the wrong sign for block {}",
                x.lambda, x.label
            )));
        }
    }
    check_blocks(g, k, &blocks, tol)?;
    let decomp = assemble(g, k, &blocks, tol)?;
    let grams: Vec<Mat> = blocks.iter().map(|x| b.restrict(&x.subspace) * x.lambda).collect();
    let gram = linalg::block_diag(&grams);
    let gram = (&gram + gram.transpose()) * 0.5;
    let mut m = InvariantMetric::new(decomp, gram, tol)?;
    m.blocks = Some(blocks);
    Ok(m)
}

/// `-2 B` on `f` and `B` on `p`.
pub fn adapted_metric<'g>(split: &FibrationSplit<'g>, tol: f64) -> Result<InvariantMetric<'g>> {
    let mut blocks = Vec::new();
    if split.f.dim() > 0 {
        blocks.push(MetricBlock::new("f1", split.f.clone(), -2.0));
    }
    if split.p.dim() > 0 {
        blocks.push(MetricBlock::new("p1", split.p.clone(), 1.0));
    }
    diagonal_metric(split.base.g, &split.k, blocks, tol)
}

/// Split each block into the eigenspaces of a Killing-symmetric operator on
/// `g` commuting with `ad(k)`: a generic `sum w_i ad(k_i)^2` when `k` is
/// abelian, the Casimir of `k` otherwise. Pieces keep the block's lambda and
/// are labelled `label.1`, `label.2`, ... when a block splits.
pub fn refine_blocks(g: &LieAlgebra, k: &Subspace, blocks: Vec<MetricBlock>, tol: f64) -> Result<Vec<MetricBlock>> {
    check_blocks(g, k, &blocks, tol)?;
    if k.dim() == 0 {
        return Ok(blocks);
    }
    let b = g.killing_form();
    let n = g.dim();
    let kb = linalg::diagonalize_form(k.basis(), &b.matrix, tol)
        .ok_or_else(|| Error::ComplementUndefined("Killing form is degenerate on k".into()))?;
    let abelian = g.bracket_residual(k, k, &Subspace::zero(n)) <= tol * g.max_structure_constant().max(1.0);
    let mut op = Mat::zeros(n, n);
    for i in 0..kb.ncols() {
        let x: Vector = kb.column(i).into_owned();
        let eps = (x.transpose() * &b.matrix * &x)[(0, 0)].signum();
        let w = if abelian { libm::sqrt(2.0 + i as f64) + 0.37 * i as f64 } else { eps };
        let a = g.ad(&x);
        op += &a * &a * w;
    }
    let mut out = Vec::new();
    for x in blocks {
        let v = linalg::diagonalize_form(x.subspace.basis(), &b.matrix, tol).ok_or_else(|| {
            Error::ComplementUndefined(format!("Killing form is degenerate on block {}", x.label))
        })?;
        let sign = (v.column(0).transpose() * &b.matrix * v.column(0))[(0, 0)].signum();
        // In a basis orthonormal for sign * B the restriction is symmetric.
        let a = v.transpose() * &b.matrix * &op * &v * sign;
        let eig = ((&a + a.transpose()) * 0.5).symmetric_eigen();
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let scale = eig.eigenvalues.iter().fold(1.0f64, |m, e| m.max(e.abs()));
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for &i in &order {
            match groups.last_mut() {
                Some(grp) if (eig.eigenvalues[i] - eig.eigenvalues[grp[0]]).abs() <= 1e-6 * scale => grp.push(i),
                _ => groups.push(alloc::vec![i]),
            }
        }
        if groups.len() == 1 {
            out.push(x);
            continue;
        }
        for (gi, grp) in groups.iter().enumerate() {
            let cols: Vec<Vector> = grp.iter().map(|&i| &v * eig.eigenvectors.column(i)).collect();
            let sub = Subspace::from_vectors(n, &cols)?;
            out.push(MetricBlock::new(format!("{}.{}", x.label, gi + 1), sub, x.lambda));
        }
    }
    check_blocks(g, k, &out, tol)?;
    Ok(out)
}

/// Criterion residual together with its scale `max(1, max |c|, max |lambda|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionResidual {
    pub residual: f64,
    pub scale: f64,
}

impl CriterionResidual {
    pub fn passes(&self, tol: f64) -> bool {
        self.residual / self.scale < tol
    }
}

/// Structure constants `c_ij^k` of the `m`-part in a Killing-orthonormal
/// basis adapted to the blocks, with the block owning each basis vector.
fn adapted_constants(
    g: &LieAlgebra,
    k: &Subspace,
    blocks: &[MetricBlock],
    tol: f64,
) -> Result<(usize, Vec<f64>, Vec<usize>)> {
    let b = g.killing_form();
    check_blocks(g, k, blocks, tol)?;
    let mut adapted = Vec::new();
    let mut owner = Vec::new();
    for (i, x) in blocks.iter().enumerate() {
        let basis = linalg::diagonalize_form(x.subspace.basis(), &b.matrix, tol).ok_or_else(|| {
            Error::ComplementUndefined(format!("Killing form is degenerate on block {}", x.label))
        })?;
        owner.extend(core::iter::repeat_n(i, basis.ncols()));
        adapted.push(MetricBlock::new(x.label.clone(), Subspace::from_basis(basis)?, x.lambda));
    }
    let decomp = assemble(g, k, &adapted, tol)?;
    Ok((decomp.dim_m(), decomp.m_tensor(), owner))
}

/// `max |c_ij^k (lambda_a + lambda_b + lambda_c)|` in a Killing-orthonormal
/// basis adapted to the blocks. The lambdas may have any sign.
pub fn criterion_residual(
    g: &LieAlgebra,
    k: &Subspace,
    blocks: &[MetricBlock],
    tol: f64,
) -> Result<CriterionResidual> {
    let (d, t, owner) = adapted_constants(g, k, blocks, tol)?;
    let mut worst = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            for kk in 0..d {
                let cijk = t[(i * d + j) * d + kk];
                if cijk == 0.0 {
                    continue;
                }
                let s = blocks[owner[i]].lambda + blocks[owner[j]].lambda + blocks[owner[kk]].lambda;
                worst = worst.max((cijk * s).abs());
            }
        }
    }
    let lmax = blocks.iter().fold(0.0f64, |a, x| a.max(x.lambda.abs()));
    let cmax = linalg::max_abs_slice(&t);
    Ok(CriterionResidual { residual: worst, scale: cmax.max(lmax).max(1.0) })
}

/// Largest `|c_ij^k|` with `i`, `j`, `k` in three different blocks. When it
/// is nonzero and every `lambda` has the same sign, the criterion cannot vanish.
pub fn mixed_structure_constant(g: &LieAlgebra, k: &Subspace, blocks: &[MetricBlock], tol: f64) -> Result<f64> {
    let (d, t, owner) = adapted_constants(g, k, blocks, tol)?;
    let mut worst = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            for kk in 0..d {
                if owner[i] != owner[j] && owner[j] != owner[kk] && owner[i] != owner[kk] {
                    worst = worst.max(t[(i * d + j) * d + kk].abs());
                }
            }
        }
    }
    Ok(worst)
}
