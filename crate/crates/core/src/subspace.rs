//! Linear subspaces of a coordinate space, stored by a basis of columns.

use alloc::vec::Vec;

use crate::error::{input_err, Result};
use crate::linalg::{self, Mat, Vector, RANK_TOL};

#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient: usize,
    basis: Mat,
}

impl Subspace {
    /// Subspace with the given columns as basis; they must be independent.
    pub fn from_basis(basis: Mat) -> Result<Self> {
        let k = basis.ncols();
        if linalg::rank(&basis, RANK_TOL) != k {
            return Err(input_err!("basis vectors are linearly dependent"));
        }
        Ok(Subspace { ambient: basis.nrows(), basis })
    }

    pub fn from_vectors(ambient: usize, vectors: &[Vector]) -> Result<Self> {
        Self::from_basis(stack(ambient, vectors)?)
    }

    /// Span of arbitrary (possibly dependent) columns; orthonormal basis.
    pub fn span(columns: &Mat, tol: f64) -> Self {
        Subspace { ambient: columns.nrows(), basis: linalg::column_space(columns, tol) }
    }

    pub fn span_vectors(ambient: usize, vectors: &[Vector], tol: f64) -> Result<Self> {
        Ok(Self::span(&stack(ambient, vectors)?, tol))
    }

    /// Span keeping the given columns in order, dropping only dependent ones.
    pub fn span_ordered(columns: &Mat, tol: f64) -> Self {
        let mut kept: Vec<Vector> = Vec::new();
        let mut r = 0;
        for c in 0..columns.ncols() {
            let mut trial = kept.clone();
            trial.push(columns.column(c).into_owned());
            let m = Mat::from_columns(&trial);
            let nr = linalg::rank(&m, tol);
            if nr > r {
                r = nr;
                kept = trial;
            }
        }
        let basis = if kept.is_empty() {
            Mat::zeros(columns.nrows(), 0)
        } else {
            Mat::from_columns(&kept)
        };
        Subspace { ambient: columns.nrows(), basis }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Mat::zeros(ambient, 0) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: Mat::identity(ambient, ambient) }
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn vector(&self, i: usize) -> Vector {
        self.basis.column(i).into_owned()
    }

    pub fn vectors(&self) -> Vec<Vector> {
        (0..self.dim()).map(|i| self.vector(i)).collect()
    }

    /// Least-squares coordinates of `x` in this basis and the residual norm.
    pub fn coords(&self, x: &Vector) -> (Vector, f64) {
        if self.dim() == 0 {
            return (Vector::zeros(0), x.norm());
        }
        linalg::lstsq(&self.basis, x)
    }

    /// Coordinate map reusable across many vectors.
    pub fn projector(&self) -> Projector<'_> {
        let pinv = if self.dim() == 0 { Mat::zeros(0, self.ambient) } else { linalg::pinv(&self.basis) };
        Projector { basis: &self.basis, pinv }
    }

    pub fn distance(&self, x: &Vector) -> f64 {
        self.coords(x).1
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.distance(x) <= tol * x.norm().max(1.0)
    }

    pub fn contains_subspace(&self, other: &Subspace, tol: f64) -> bool {
        let p = self.projector();
        (0..other.dim()).all(|i| {
            let x = other.vector(i);
            p.coords(&x).1 <= tol * x.norm().max(1.0)
        })
    }

    pub fn equals(&self, other: &Subspace, tol: f64) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other, tol)
    }

    /// Orthonormal basis of the same subspace.
    pub fn orthonormal(&self) -> Mat {
        linalg::column_space(&self.basis, RANK_TOL)
    }

    pub fn sum(&self, other: &Subspace, tol: f64) -> Subspace {
        Subspace::span(&linalg::hcat(&[&self.basis, &other.basis]), tol)
    }

    pub fn intersection(&self, other: &Subspace, tol: f64) -> Subspace {
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.ambient);
        }
        let a = self.orthonormal();
        let b = other.orthonormal();
        let neg_b = -&b;
        let m = linalg::hcat(&[&a, &neg_b]);
        let ker = linalg::null_space(&m, tol);
        let top = ker.rows(0, a.ncols()).into_owned();
        Subspace::span(&(a * top), tol)
    }

    /// Express this subspace in the coordinates of `frame` (which must contain it).
    pub fn coords_in(&self, frame: &Subspace, tol: f64) -> Result<Subspace> {
        let mut cols = Vec::with_capacity(self.dim());
        let p = frame.projector();
        for v in self.vectors() {
            let (c, r) = p.coords(&v);
            if r > tol * v.norm().max(1.0) {
                return Err(input_err!("subspace is not contained in the frame"));
            }
            cols.push(c);
        }
        Subspace::from_vectors(frame.dim(), &cols)
    }

    /// Map coordinates relative to `frame` back to ambient coordinates.
    pub fn lift(&self, frame: &Subspace) -> Subspace {
        Subspace { ambient: frame.ambient, basis: frame.basis() * &self.basis }
    }

    /// Change basis to `self.basis * change` (change must be invertible).
    pub fn rebased(&self, change: &Mat) -> Result<Subspace> {
        Subspace::from_basis(&self.basis * change)
    }
}

pub struct Projector<'a> {
    basis: &'a Mat,
    pinv: Mat,
}

impl Projector<'_> {
    /// Least-squares coordinates and residual norm, as [`Subspace::coords`].
    pub fn coords(&self, x: &Vector) -> (Vector, f64) {
        let c = &self.pinv * x;
        let r = (self.basis * &c - x).norm();
        (c, r)
    }

    pub fn distance(&self, x: &Vector) -> f64 {
        self.coords(x).1
    }
}

fn stack(ambient: usize, vectors: &[Vector]) -> Result<Mat> {
    if vectors.iter().any(|v| v.len() != ambient) {
        return Err(input_err!("vector length does not match ambient dimension {ambient}"));
    }
    if vectors.is_empty() {
        return Ok(Mat::zeros(ambient, 0));
    }
    Ok(Mat::from_columns(vectors))
}

/// Symmetric bilinear form on a coordinate space.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearForm {
    pub matrix: Mat,
}

impl BilinearForm {
    pub fn new(matrix: Mat) -> Self {
        BilinearForm { matrix }
    }

    pub fn eval(&self, x: &Vector, y: &Vector) -> f64 {
        (x.transpose() * &self.matrix * y)[(0, 0)]
    }

    /// Gram matrix of the form on the basis of `s`.
    pub fn restrict(&self, s: &Subspace) -> Mat {
        s.basis().transpose() * &self.matrix * s.basis()
    }

    pub fn signature(&self, tol: f64) -> (usize, usize, usize) {
        linalg::signature(&self.matrix, tol)
    }

    /// Complement of `s` with respect to the form: `{x : B(x, s) = 0}`.
    pub fn orthogonal_complement(&self, s: &Subspace, tol: f64) -> Subspace {
        let m = s.basis().transpose() * &self.matrix;
        Subspace::span(&linalg::null_space(&m, tol), tol)
    }

    /// Complement of `s` inside `within`.
    pub fn orthogonal_complement_in(&self, s: &Subspace, within: &Subspace, tol: f64) -> Subspace {
        let w = within.basis();
        let m = s.basis().transpose() * &self.matrix * w;
        let ker = linalg::null_space(&m, tol);
        Subspace::span(&(w * ker), tol)
    }
}
