//! Classical real matrix Lie algebras with canonical bases and Cartan involutions.
//!
//! Every family is cut out of `gl(N, C)` by real-linear conditions. The kernel
//! is split into the skew-Hermitian (compact) and Hermitian (noncompact) parts,
//! each part is brought to reduced row-echelon form in the realified
//! coordinates `(row, col, re/im)` ordered lexicographically, and the basis is
//! listed compact part first. The Cartan involution is `X -> -X^*`, which is
//! therefore `diag(+1, .., +1, -1, .., -1)` in algebra coordinates.

mod embed;
mod spec;

pub use embed::*;
pub use spec::{parse_spec, Family, FamilySpec};

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{self, CMat, Mat, Vector, C64, RANK_TOL};
use crate::subspace::Subspace;

/// Concrete matrix model of an algebra: basis element `i` is `basis[i]`.
#[derive(Debug, Clone)]
pub struct MatrixRealization {
    pub family: String,
    pub matrix_dim: usize,
    pub basis: Vec<CMat>,
}

/// Linear involution on the algebra, in algebra coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct CartanInvolution {
    pub theta: Mat,
}

impl CartanInvolution {
    pub fn identity(n: usize) -> Self {
        CartanInvolution { theta: Mat::identity(n, n) }
    }

    /// `max |theta^2 - I|`.
    pub fn involution_residual(&self) -> f64 {
        let n = self.theta.nrows();
        linalg::max_abs(&(&self.theta * &self.theta - Mat::identity(n, n)))
    }

    /// `max |theta[x,y] - [theta x, theta y]|` over basis pairs.
    pub fn automorphism_residual(&self, g: &LieAlgebra) -> f64 {
        let n = g.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                let mut z = Vector::zeros(n);
                for &(k, v) in g.bracket_basis(i, j) {
                    z[k] = v;
                }
                let lhs = &self.theta * z;
                let rhs = g.bracket_unchecked(
                    &self.theta.column(i).into_owned(),
                    &self.theta.column(j).into_owned(),
                );
                worst = worst.max((lhs - rhs).amax());
            }
        }
        worst
    }
}

/// One simple (or abelian) summand of a built algebra.
#[derive(Debug, Clone)]
pub struct Summand {
    pub spec: FamilySpec,
    /// Offset and size of the summand's block in the defining matrices.
    pub matrix_offset: usize,
    pub matrix_size: usize,
    /// Indices of the summand's basis elements in the algebra basis.
    pub basis_range: Range<usize>,
    /// Number of compact basis elements of the summand (listed first).
    pub compact_dim: usize,
}

/// Algebra together with its matrix model and Cartan involution.
#[derive(Debug, Clone)]
pub struct Built {
    pub algebra: LieAlgebra,
    pub realization: MatrixRealization,
    pub theta: CartanInvolution,
    pub summands: Vec<Summand>,
}

type Constraint<'a> = Box<dyn Fn(&CMat) -> CMat + 'a>;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn ci(im: f64) -> C64 {
    C64::new(0.0, im)
}

/// `(row, col, re/im)`-ordered real coordinates of a complex matrix.
pub fn realify(m: &CMat) -> Vector {
    let n = m.nrows();
    let mut v = Vector::zeros(2 * n * m.ncols());
    let mut idx = 0;
    for r in 0..n {
        for col in 0..m.ncols() {
            v[idx] = m[(r, col)].re;
            v[idx + 1] = m[(r, col)].im;
            idx += 2;
        }
    }
    v
}

pub fn unrealify(v: &Vector, n: usize) -> CMat {
    CMat::from_fn(n, n, |r, col| {
        let i = 2 * (r * n + col);
        C64::new(v[i], v[i + 1])
    })
}

fn adjoint(m: &CMat) -> CMat {
    m.adjoint()
}

fn diag_real(d: &[f64]) -> CMat {
    let n = d.len();
    CMat::from_fn(n, n, |r, col| if r == col { c(d[r]) } else { c(0.0) })
}

/// `[[0, I], [-I, 0]]` of size `2n`.
pub fn omega(n: usize) -> CMat {
    let mut m = CMat::zeros(2 * n, 2 * n);
    for i in 0..n {
        m[(i, n + i)] = c(1.0);
        m[(n + i, i)] = c(-1.0);
    }
    m
}

fn signature_diag(p: usize, q: usize) -> CMat {
    let mut d = vec![1.0; p];
    d.extend(core::iter::repeat_n(-1.0, q));
    diag_real(&d)
}

fn trace_constraint<'a>() -> Constraint<'a> {
    Box::new(|x: &CMat| CMat::from_element(1, 1, x.trace()))
}

fn real_constraint<'a>() -> Constraint<'a> {
    Box::new(|x: &CMat| x.map(|z| ci(z.im)))
}

fn form_constraint<'a>(j: CMat, hermitian: bool) -> Constraint<'a> {
    Box::new(move |x: &CMat| {
        let xt = if hermitian { adjoint(x) } else { x.transpose() };
        &xt * &j + &j * x
    })
}

/// Kernel of the real-linear constraints, split into compact and noncompact
/// parts, each in canonical reduced form.
fn solve(n: usize, constraints: &[Constraint<'_>]) -> (Vec<CMat>, usize) {
    let dim = 2 * n * n;
    let mut columns: Vec<Vector> = Vec::with_capacity(dim);
    for idx in 0..dim {
        let mut e = Vector::zeros(dim);
        e[idx] = 1.0;
        let x = unrealify(&e, n);
        let mut parts: Vec<f64> = Vec::new();
        for con in constraints {
            parts.extend(realify(&con(&x)).iter());
        }
        columns.push(Vector::from_vec(parts));
    }
    let base = Mat::from_columns(&columns);
    let part = |sign: f64| {
        // sign = +1: X^* + X = 0 (compact); sign = -1: X^* - X = 0.
        let mut cols: Vec<Vector> = Vec::with_capacity(dim);
        for idx in 0..dim {
            let mut e = Vector::zeros(dim);
            e[idx] = 1.0;
            let x = unrealify(&e, n);
            let y = adjoint(&x) + x.map(|z| z * sign);
            cols.push(realify(&y));
        }
        let extra = Mat::from_columns(&cols);
        let full = linalg::vcat(&[&base, &extra]);
        let ker = linalg::elimination_null_space(&full, RANK_TOL);
        let rref = linalg::rref_columns(&ker, 1e-9);
        (0..rref.ncols())
            .map(|k| unrealify(&rref.column(k).into_owned(), n))
            .collect::<Vec<_>>()
    };
    let mut comp = part(1.0);
    let k = comp.len();
    comp.extend(part(-1.0));
    (comp, k)
}

fn family_basis(spec: &FamilySpec) -> Result<(usize, Vec<CMat>, usize)> {
    let (p, q) = (spec.p, spec.q);
    let n = spec.matrix_dim();
    let mut cons: Vec<Constraint<'_>> = Vec::new();
    match spec.family {
        Family::Abelian => {
            let basis = (0..p)
                .map(|i| {
                    let mut m = CMat::zeros(p, p);
                    m[(i, i)] = ci(1.0);
                    m
                })
                .collect();
            return Ok((p, basis, p));
        }
        Family::SlR => {
            cons.push(real_constraint());
            cons.push(trace_constraint());
        }
        Family::SlC => cons.push(trace_constraint()),
        Family::Su => {
            cons.push(form_constraint(CMat::identity(n, n), true));
            cons.push(trace_constraint());
        }
        Family::SuPq => {
            cons.push(form_constraint(signature_diag(p, q), true));
            cons.push(trace_constraint());
        }
        Family::U => cons.push(form_constraint(CMat::identity(n, n), true)),
        Family::So => {
            cons.push(real_constraint());
            cons.push(form_constraint(CMat::identity(n, n), false));
        }
        Family::SoPq => {
            cons.push(real_constraint());
            cons.push(form_constraint(signature_diag(p, q), false));
        }
        Family::SoC => cons.push(form_constraint(CMat::identity(n, n), false)),
        Family::SoStar => {
            let h = p / 2;
            cons.push(form_constraint(signature_diag(h, h), true));
            let mut k = CMat::zeros(n, n);
            for i in 0..h {
                k[(i, h + i)] = c(1.0);
                k[(h + i, i)] = c(1.0);
            }
            cons.push(form_constraint(k, false));
        }
        Family::SpR => {
            cons.push(real_constraint());
            cons.push(form_constraint(omega(p), false));
        }
        Family::SpCompact => {
            cons.push(form_constraint(CMat::identity(n, n), true));
            cons.push(form_constraint(omega(p), false));
        }
        Family::SpC => cons.push(form_constraint(omega(p), false)),
        Family::SpPq => {
            let mut d = vec![1.0; p];
            d.extend(core::iter::repeat_n(-1.0, q));
            let dd: Vec<f64> = d.iter().chain(d.iter()).copied().collect();
            cons.push(form_constraint(diag_real(&dd), true));
            cons.push(form_constraint(omega(p + q), false));
        }
        Family::SuStar => {
            return Err(Error::Unsupported(format!("{spec} is not constructed")));
        }
    }
    let (basis, k) = solve(n, &cons);
    Ok((n, basis, k))
}

fn commutator_constants(name: &str, labels: Vec<String>, basis: &[CMat]) -> Result<LieAlgebra> {
    let d = basis.len();
    if d == 0 {
        return LieAlgebra::new(name, labels, Vec::new());
    }
    let cols: Vec<Vector> = basis.iter().map(realify).collect();
    let r = Mat::from_columns(&cols);
    // The basis has small rational entries, so its Gram matrix is well
    // conditioned and the normal equations are accurate.
    let gram = r.transpose() * &r;
    let chol = nalgebra::Cholesky::new(gram)
        .ok_or_else(|| Error::Consistency(format!("{name}: basis matrices are linearly dependent")))?;
    let mut tensor = vec![0.0; d * d * d];
    for i in 0..d {
        for j in i + 1..d {
            let comm = realify(&linalg::commutator(&basis[i], &basis[j]));
            let co = chol.solve(&(r.transpose() * &comm));
            let resid = (&r * &co - &comm).amax();
            if resid > 1e-10 * comm.amax().max(1.0) {
                return Err(Error::Consistency(format!(
                    "{name}: commutator of basis {i},{j} leaves the span (residual {resid:e})"
                )));
            }
            for k in 0..d {
                let v = linalg::snap_rational(co[k]);
                let v = if v.abs() < 1e-13 { 0.0 } else { v };
                tensor[(i * d + j) * d + k] = v;
                tensor[(j * d + i) * d + k] = -v;
            }
        }
    }
    LieAlgebra::new(name, labels, tensor)
}

fn place(block: &CMat, offset: usize, n: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    m.view_mut((offset, offset), block.shape()).copy_from(block);
    m
}

/// Build a (possibly direct-sum) algebra from parsed specs.
pub fn build_specs(specs: &[FamilySpec]) -> Result<Built> {
    let mut parts = Vec::new();
    for s in specs {
        s.validate()?;
        parts.push((s.clone(), family_basis(s)?));
    }
    let total_n: usize = parts.iter().map(|(_, (n, _, _))| *n).sum();
    let mut basis = Vec::new();
    let mut theta_diag = Vec::new();
    let mut labels = Vec::new();
    let mut summands = Vec::new();
    let mut offset = 0;
    for (idx, (s, (n, b, k))) in parts.iter().enumerate() {
        let start = basis.len();
        for (j, m) in b.iter().enumerate() {
            basis.push(place(m, offset, total_n));
            theta_diag.push(if j < *k { 1.0 } else { -1.0 });
            let prefix = if parts.len() > 1 { format!("{}.", idx + 1) } else { String::new() };
            labels.push(if j < *k {
                format!("{prefix}k{}", j + 1)
            } else {
                format!("{prefix}p{}", j - k + 1)
            });
        }
        summands.push(Summand {
            spec: s.clone(),
            matrix_offset: offset,
            matrix_size: *n,
            basis_range: start..basis.len(),
            compact_dim: *k,
        });
        offset += n;
    }
    let name = spec::display_specs(specs);
    let algebra = commutator_constants(&name, labels, &basis)?;
    let theta = CartanInvolution { theta: Mat::from_diagonal(&Vector::from_vec(theta_diag)) };
    Ok(Built {
        algebra,
        realization: MatrixRealization { family: name, matrix_dim: total_n, basis },
        theta,
        summands,
    })
}

/// Build from a constructor string such as `"sl(3,R)"` or `"R+su(2)"`.
pub fn build(spec: &str) -> Result<Built> {
    build_specs(&parse_spec(spec)?)
}

/// `sl(2,R)` in the parametrised basis `X1 = a[[0,1],[1,0]]`,
/// `X2 = b[[1,0],[0,-1]]`, `X3 = ab/sqrt(a^2+b^2) [[0,1],[-1,0]]`.
pub fn build_sl2_ab(a: f64, b: f64) -> Result<Built> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::Input(format!("a and b must be positive, got ({a}, {b})")));
    }
    let n3 = a * b / libm::sqrt(a * a + b * b);
    let m = |e: [f64; 4], s: f64| CMat::from_row_slice(2, 2, &e.map(|x| c(x * s)));
    let basis = vec![
        m([0.0, 1.0, 1.0, 0.0], a),
        m([1.0, 0.0, 0.0, -1.0], b),
        m([0.0, 1.0, -1.0, 0.0], n3),
    ];
    let labels = vec!["X1".to_string(), "X2".to_string(), "X3".to_string()];
    let d = basis.len();
    let cols: Vec<Vector> = basis.iter().map(realify).collect();
    let r = Mat::from_columns(&cols);
    let pinv = linalg::pinv(&r);
    let mut tensor = vec![0.0; d * d * d];
    for i in 0..d {
        for j in i + 1..d {
            let co = &pinv * realify(&linalg::commutator(&basis[i], &basis[j]));
            for k in 0..d {
                let v = if co[k].abs() < 1e-14 { 0.0 } else { co[k] };
                tensor[(i * d + j) * d + k] = v;
                tensor[(j * d + i) * d + k] = -v;
            }
        }
    }
    let algebra = LieAlgebra::new("sl(2,R)", labels, tensor)?;
    let spec = FamilySpec { family: Family::SlR, p: 2, q: 0 };
    Ok(Built {
        algebra,
        realization: MatrixRealization { family: "sl(2,R)".into(), matrix_dim: 2, basis },
        theta: CartanInvolution {
            theta: Mat::from_diagonal(&Vector::from_vec(vec![-1.0, -1.0, 1.0])),
        },
        summands: vec![Summand {
            spec,
            matrix_offset: 0,
            matrix_size: 2,
            basis_range: 0..3,
            compact_dim: 1,
        }],
    })
}

/// Direct sum of two abstract algebras (block structure constants).
pub fn direct_sum(a: &LieAlgebra, b: &LieAlgebra) -> LieAlgebra {
    a.direct_sum(b)
}

struct CoordSolver {
    r: Mat,
    chol: nalgebra::Cholesky<f64, nalgebra::Dyn>,
}

impl CoordSolver {
    fn solve(&self, m: &CMat) -> Result<Vector> {
        let b = realify(m);
        let x = self.chol.solve(&(self.r.transpose() * &b));
        let resid = (&self.r * &x - &b).amax();
        if resid > 1e-9 * linalg::cmax_abs(m).max(1.0) {
            return Err(Error::Input(format!("matrix is not in the algebra (residual {resid:e})")));
        }
        Ok(x)
    }
}

impl Built {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Max commutator-versus-structure-constant residual.
    pub fn realization_residual(&self) -> f64 {
        let b = &self.realization.basis;
        let d = b.len();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i + 1..d {
                let comm = linalg::commutator(&b[i], &b[j]);
                let mut rebuilt = CMat::zeros(comm.nrows(), comm.ncols());
                for &(k, v) in self.algebra.bracket_basis(i, j) {
                    rebuilt += &b[k] * c(v);
                }
                worst = worst.max(linalg::cmax_abs(&(comm - rebuilt)));
            }
        }
        worst
    }

    /// `theta`-fixed subalgebra `l`.
    pub fn fixed_set(&self) -> Subspace {
        let n = self.dim();
        let m = &self.theta.theta - Mat::identity(n, n);
        Subspace::span(&linalg::null_space(&m, RANK_TOL), RANK_TOL)
    }

    pub fn matrix_of(&self, x: &Vector) -> CMat {
        let n = self.realization.matrix_dim;
        let mut m = CMat::zeros(n, n);
        for (i, b) in self.realization.basis.iter().enumerate() {
            if x[i] != 0.0 {
                m += b * c(x[i]);
            }
        }
        m
    }

    fn coord_solver(&self) -> Result<CoordSolver> {
        let cols: Vec<Vector> = self.realization.basis.iter().map(realify).collect();
        let r = Mat::from_columns(&cols);
        let chol = nalgebra::Cholesky::new(r.transpose() * &r)
            .ok_or_else(|| Error::Consistency("realization basis is linearly dependent".into()))?;
        Ok(CoordSolver { r, chol })
    }

    /// Coordinates of a defining-representation matrix in the algebra basis.
    pub fn coords_of(&self, m: &CMat) -> Result<Vector> {
        if self.realization.basis.is_empty() {
            return if linalg::cmax_abs(m) < 1e-12 {
                Ok(Vector::zeros(0))
            } else {
                Err(Error::Input("matrix is not in the algebra".into()))
            };
        }
        self.coord_solver()?.solve(m)
    }

    /// Span of the given defining-representation matrices.
    pub fn span_of(&self, mats: &[CMat], tol: f64) -> Result<Subspace> {
        if self.realization.basis.is_empty() {
            let vs = mats.iter().map(|m| self.coords_of(m)).collect::<Result<Vec<_>>>()?;
            return Subspace::span_vectors(self.dim(), &vs, tol);
        }
        let solver = self.coord_solver()?;
        let vs = mats.iter().map(|m| solver.solve(m)).collect::<Result<Vec<_>>>()?;
        Subspace::span_vectors(self.dim(), &vs, tol)
    }

    /// Elements of `within` commuting with each given matrix.
    pub fn centralizer_in(&self, within: &Subspace, mats: &[CMat], tol: f64) -> Subspace {
        let w = within.vectors();
        if w.is_empty() || mats.is_empty() {
            return within.clone();
        }
        let wm: Vec<CMat> = w.iter().map(|x| self.matrix_of(x)).collect();
        let mut blocks: Vec<Mat> = Vec::new();
        for a in mats {
            let cols: Vec<Vector> = wm.iter().map(|x| realify(&linalg::commutator(x, a))).collect();
            blocks.push(Mat::from_columns(&cols));
        }
        let refs: Vec<&Mat> = blocks.iter().collect();
        let ker = linalg::null_space(&linalg::vcat(&refs), tol);
        Subspace::span(&(within.basis() * ker), tol)
    }
}
