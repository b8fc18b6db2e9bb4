//! Real Lie algebras given by structure constants.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{input_err, Result};
use crate::linalg::{self, Mat, Vector, RANK_TOL};
use crate::subspace::{BilinearForm, Subspace};

/// A finite-dimensional real Lie algebra with `[e_i, e_j] = sum_k c[i][j][k] e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    name: String,
    labels: Vec<String>,
    dim: usize,
    c: Vec<f64>,
    nz: Vec<Vec<(usize, f64)>>,
}

impl LieAlgebra {
    /// Build from a dense tensor indexed `c[(i * n + j) * n + k]`.
    /// Fails unless the tensor is antisymmetric in `(i, j)`.
    pub fn new(name: impl Into<String>, labels: Vec<String>, mut c: Vec<f64>) -> Result<Self> {
        let n = labels.len();
        if c.len() != n * n * n {
            return Err(input_err!("structure tensor has {} entries, expected {}", c.len(), n * n * n));
        }
        if c.iter().any(|x| !x.is_finite()) {
            return Err(input_err!("structure constants must be finite"));
        }
        let scale = linalg::max_abs_slice(&c).max(1.0);
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let a = c[(i * n + j) * n + k];
                    let b = c[(j * n + i) * n + k];
                    if (a + b).abs() > 1e-12 * scale {
                        return Err(input_err!(
                            "bracket not antisymmetric at ({i},{j},{k}): {a} vs {b}"
                        ));
                    }
                    let v = if i == j { 0.0 } else { a };
                    c[(i * n + j) * n + k] = v;
                    c[(j * n + i) * n + k] = -v;
                }
            }
        }
        let nz = (0..n * n)
            .map(|ij| {
                (0..n)
                    .filter_map(|k| {
                        let v = c[ij * n + k];
                        (v != 0.0).then_some((k, v))
                    })
                    .collect()
            })
            .collect();
        Ok(LieAlgebra { name: name.into(), labels, dim: n, c, nz })
    }

    /// Build from the brackets `[e_i, e_j]` with `i < j`; the rest are implied.
    pub fn from_brackets(
        name: impl Into<String>,
        labels: Vec<String>,
        brackets: &[(usize, usize, Vec<(usize, f64)>)],
    ) -> Result<Self> {
        let n = labels.len();
        let mut c = vec![0.0; n * n * n];
        for (i, j, coeffs) in brackets {
            let (i, j) = (*i, *j);
            if i >= n || j >= n {
                return Err(input_err!("bracket index out of range: ({i},{j})"));
            }
            if i == j {
                if coeffs.iter().any(|(_, v)| *v != 0.0) {
                    return Err(input_err!("[e_{i}, e_{i}] must vanish"));
                }
                continue;
            }
            for &(k, v) in coeffs {
                if k >= n {
                    return Err(input_err!("coefficient index out of range: {k}"));
                }
                c[(i * n + j) * n + k] += v;
                c[(j * n + i) * n + k] -= v;
            }
        }
        Self::new(name, labels, c)
    }

    pub fn abelian(n: usize) -> Self {
        let labels = (0..n).map(|i| format!("e{}", i + 1)).collect();
        let name = match n {
            0 => "0".to_string(),
            1 => "R".to_string(),
            _ => format!("R^{n}"),
        };
        Self::new(name, labels, vec![0.0; n * n * n]).expect("zero tensor")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tensor(&self) -> &[f64] {
        &self.c
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> f64 {
        let n = self.dim;
        self.c[(i * n + j) * n + k]
    }

    /// Nonzero coefficients of `[e_i, e_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, f64)] {
        &self.nz[i * self.dim + j]
    }

    pub fn max_structure_constant(&self) -> f64 {
        linalg::max_abs_slice(&self.c)
    }

    pub fn bracket(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(input_err!("vector length does not match algebra dimension {}", self.dim));
        }
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &Vector, y: &Vector) -> Vector {
        let n = self.dim;
        let mut out = Vector::zeros(n);
        for i in 0..n {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            for j in 0..n {
                let yj = y[j];
                if yj == 0.0 || i == j {
                    continue;
                }
                let f = xi * yj;
                for &(k, v) in &self.nz[i * n + j] {
                    out[k] += f * v;
                }
            }
        }
        out
    }

    /// Matrix of `ad_x` acting on coordinate columns.
    pub fn ad(&self, x: &Vector) -> Mat {
        let n = self.dim;
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            for l in 0..n {
                for &(k, v) in &self.nz[i * n + l] {
                    m[(k, l)] += xi * v;
                }
            }
        }
        m
    }

    pub fn ad_basis(&self, i: usize) -> Mat {
        let mut e = Vector::zeros(self.dim);
        e[i] = 1.0;
        self.ad(&e)
    }

    /// `max |[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]|` over `i<j<k`.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        let mut acc = vec![0.0; n];
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    acc.iter_mut().for_each(|a| *a = 0.0);
                    for &(a, b, cc) in &[(i, j, k), (j, k, i), (k, i, j)] {
                        for &(m, v) in &self.nz[a * n + b] {
                            for &(r, w) in &self.nz[m * n + cc] {
                                acc[r] += v * w;
                            }
                        }
                    }
                    worst = worst.max(linalg::max_abs_slice(&acc));
                }
            }
        }
        worst
    }

    pub fn killing_matrix(&self) -> Mat {
        let n = self.dim;
        let ads: Vec<Mat> = (0..n).map(|i| self.ad_basis(i)).collect();
        let mut b = Mat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = ads[i].component_mul(&ads[j].transpose()).sum();
                b[(i, j)] = v;
                b[(j, i)] = v;
            }
        }
        b
    }

    pub fn killing_form(&self) -> BilinearForm {
        BilinearForm::new(self.killing_matrix())
    }

    pub fn trace_ad_basis(&self, i: usize) -> f64 {
        (0..self.dim).map(|k| self.structure_constant(i, k, k)).sum()
    }

    pub fn trace_ad(&self, x: &Vector) -> f64 {
        (0..self.dim).map(|i| x[i] * self.trace_ad_basis(i)).sum()
    }

    pub fn unimodular_residual(&self) -> f64 {
        (0..self.dim).fold(0.0, |a, i| a.max(self.trace_ad_basis(i).abs()))
    }

    pub fn is_unimodular(&self, tol: f64) -> bool {
        self.unimodular_residual() <= tol * self.max_structure_constant().max(1.0)
    }

    pub fn center(&self, tol: f64) -> Subspace {
        let n = self.dim;
        if n == 0 {
            return Subspace::zero(0);
        }
        // x is central iff ad_{e_i} x = 0 for all i.
        let blocks: Vec<Mat> = (0..n).map(|i| self.ad_basis(i)).collect();
        let refs: Vec<&Mat> = blocks.iter().collect();
        let m = linalg::vcat(&refs);
        Subspace::span(&linalg::null_space(&m, tol), tol)
    }

    pub fn derived_ideal(&self, tol: f64) -> Subspace {
        let n = self.dim;
        let mut cols = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut v = Vector::zeros(n);
                for &(k, c) in &self.nz[i * n + j] {
                    v[k] = c;
                }
                if v.iter().any(|x| *x != 0.0) {
                    cols.push(v);
                }
            }
        }
        if cols.is_empty() {
            return Subspace::zero(n);
        }
        Subspace::span(&Mat::from_columns(&cols), tol)
    }

    /// Non-degeneracy of the Killing form. The zero algebra counts as semisimple.
    pub fn is_semisimple(&self, tol: f64) -> bool {
        let b = self.killing_matrix();
        linalg::rank(&b, tol) == self.dim
    }

    /// Largest ideal of the algebra contained in `k`.
    pub fn maximal_ideal_in(&self, k: &Subspace, tol: f64) -> Result<Subspace> {
        let n = self.dim;
        if k.ambient_dim() != n {
            return Err(input_err!("subspace ambient dimension mismatch"));
        }
        let ads: Vec<Mat> = (0..n).map(|i| self.ad_basis(i)).collect();
        let mut u = k.orthonormal();
        loop {
            let d = u.ncols();
            if d == 0 {
                return Ok(Subspace::zero(n));
            }
            let perp = Mat::identity(n, n) - &u * u.transpose();
            let blocks: Vec<Mat> = ads.iter().map(|a| &perp * a * &u).collect();
            let refs: Vec<&Mat> = blocks.iter().collect();
            let ker = linalg::null_space(&linalg::vcat(&refs), tol);
            let next = linalg::column_space(&(&u * ker), tol);
            if next.ncols() == d {
                return Ok(Subspace::span(&next, tol));
            }
            u = next;
        }
    }

    /// `max` distance of `[a_i, b_j]` from the span of `c`, over basis pairs.
    pub fn bracket_residual(&self, a: &Subspace, b: &Subspace, c: &Subspace) -> f64 {
        let mut worst = 0.0f64;
        let p = c.projector();
        let bs = b.vectors();
        for x in a.vectors() {
            for y in &bs {
                let z = self.bracket_unchecked(&x, y);
                worst = worst.max(p.distance(&z));
            }
        }
        worst
    }

    pub fn is_subalgebra(&self, k: &Subspace, tol: f64) -> bool {
        self.bracket_residual(k, k, k) <= tol * self.max_structure_constant().max(1.0)
    }

    pub fn is_ideal(&self, k: &Subspace, tol: f64) -> bool {
        self.bracket_residual(&Subspace::full(self.dim), k, k)
            <= tol * self.max_structure_constant().max(1.0)
    }

    /// The subalgebra spanned by `k`, with structure constants in `k`'s basis.
    pub fn subalgebra(&self, k: &Subspace, name: impl Into<String>, tol: f64) -> Result<LieAlgebra> {
        let d = k.dim();
        let vs = k.vectors();
        let pinv = linalg::pinv(k.basis());
        let mut c = vec![0.0; d * d * d];
        let scale = self.max_structure_constant().max(1.0);
        for a in 0..d {
            for b in a + 1..d {
                let z = self.bracket_unchecked(&vs[a], &vs[b]);
                let co = &pinv * &z;
                let resid = (k.basis() * &co - &z).norm();
                if resid > tol * scale * z.norm().max(1.0) {
                    return Err(input_err!("subspace is not closed under the bracket"));
                }
                for cc in 0..d {
                    let v = clean(co[cc]);
                    c[(a * d + b) * d + cc] = v;
                    c[(b * d + a) * d + cc] = -v;
                }
            }
        }
        let labels = (0..d).map(|i| format!("v{}", i + 1)).collect();
        LieAlgebra::new(name, labels, c)
    }

    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        let (n1, n2) = (self.dim, other.dim);
        let n = n1 + n2;
        let mut c = vec![0.0; n * n * n];
        for i in 0..n1 {
            for j in 0..n1 {
                for &(k, v) in self.bracket_basis(i, j) {
                    c[(i * n + j) * n + k] = v;
                }
            }
        }
        for i in 0..n2 {
            for j in 0..n2 {
                for &(k, v) in other.bracket_basis(i, j) {
                    c[((i + n1) * n + j + n1) * n + k + n1] = v;
                }
            }
        }
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        let name = match (n1, n2) {
            (0, _) => other.name.clone(),
            (_, 0) => self.name.clone(),
            _ => format!("{}+{}", self.name, other.name),
        };
        LieAlgebra::new(name, labels, c).expect("direct sum of valid algebras")
    }

    /// Killing-form rank using the crate default tolerance.
    pub fn killing_rank(&self) -> usize {
        linalg::rank(&self.killing_matrix(), RANK_TOL)
    }
}

fn clean(v: f64) -> f64 {
    if v.abs() < 1e-14 {
        0.0
    } else {
        v
    }
}

/// Jacobi residual of a raw tensor over all index triples; no antisymmetry
/// assumption is made, so this works on tensors rejected by [`LieAlgebra::new`].
pub fn jacobi_residual_of(n: usize, c: &[f64]) -> f64 {
    assert_eq!(c.len(), n * n * n, "tensor size");
    let at = |i: usize, j: usize, k: usize| c[(i * n + j) * n + k];
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for r in 0..n {
                    let mut s = 0.0;
                    for m in 0..n {
                        s += at(i, j, m) * at(m, k, r)
                            + at(j, k, m) * at(m, i, r)
                            + at(k, i, m) * at(m, j, r);
                    }
                    worst = worst.max(s.abs());
                }
            }
        }
    }
    worst
}
