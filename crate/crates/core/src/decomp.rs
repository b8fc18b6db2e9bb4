//! Cartan and reductive decompositions, the fibration split `m = f + p`, and
//! the isotropy irreducibility test.

use alloc::format;
use alloc::vec::Vec;

use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classical::CartanInvolution;
use crate::error::{input_err, Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{self, Mat, Vector, RANK_TOL};
use crate::subspace::{BilinearForm, Subspace};

/// Seed used by randomized checks unless the caller overrides it.
pub const DEFAULT_SEED: u64 = 0x5eed_d1ac;

/// Default number of random probes for [`isotropy_irreducible`].
pub const DEFAULT_TRIALS: usize = 16;

fn scale(g: &LieAlgebra) -> f64 {
    g.max_structure_constant().max(1.0)
}

/// `g = l + p` with `l`, `p` the `+1`, `-1` eigenspaces of a Cartan involution.
#[derive(Debug, Clone)]
pub struct CartanDecomposition<'g> {
    pub g: &'g LieAlgebra,
    pub l: Subspace,
    pub p: Subspace,
    /// Largest violation among `[l,l] < l`, `[l,p] < p`, `[p,p] < l`.
    pub inclusion_residual: f64,
}

pub fn cartan_decompose<'g>(
    g: &'g LieAlgebra,
    theta: &CartanInvolution,
    tol: f64,
) -> Result<CartanDecomposition<'g>> {
    let n = g.dim();
    if theta.theta.shape() != (n, n) {
        return Err(Error::NotCartanInvolution("matrix size does not match the algebra".into()));
    }
    let inv = theta.involution_residual();
    if inv > 1e-10 {
        return Err(Error::NotCartanInvolution(format!("theta^2 - I has residual {inv:e}")));
    }
    let aut = theta.automorphism_residual(g);
    if aut > 1e-10 * scale(g) {
        return Err(Error::NotCartanInvolution(format!("not an automorphism (residual {aut:e})")));
    }
    let id = Mat::identity(n, n);
    let l = Subspace::span(&linalg::null_space(&(&theta.theta - &id), RANK_TOL), RANK_TOL);
    let p = Subspace::span(&linalg::null_space(&(&theta.theta + &id), RANK_TOL), RANK_TOL);
    if l.dim() + p.dim() != n {
        return Err(Error::NotCartanInvolution("eigenspaces do not span the algebra".into()));
    }
    let res = g
        .bracket_residual(&l, &l, &l)
        .max(g.bracket_residual(&l, &p, &p))
        .max(g.bracket_residual(&p, &p, &l));
    let b = g.killing_form();
    let neg = (-&b.matrix).clone();
    let bl = BilinearForm::new(neg).restrict(&l);
    let bp = b.restrict(&p);
    let (pos_l, _, _) = linalg::signature(&bl, tol);
    let (pos_p, _, _) = linalg::signature(&bp, tol);
    if pos_l != l.dim() {
        return Err(Error::NotCartanInvolution("Killing form is not negative definite on l".into()));
    }
    if pos_p != p.dim() {
        return Err(Error::NotCartanInvolution("Killing form is not positive definite on p".into()));
    }
    Ok(CartanDecomposition { g, l, p, inclusion_residual: res })
}

/// `{x : B(x, k) = 0}`; requires `B` nondegenerate on `k`.
pub fn b_orthogonal_complement(g: &LieAlgebra, k: &Subspace, tol: f64) -> Result<Subspace> {
    let b = g.killing_form();
    let bk = b.restrict(k);
    if linalg::rank(&bk, tol) != k.dim() {
        return Err(Error::ComplementUndefined("Killing form is degenerate on k".into()));
    }
    Ok(b.orthogonal_complement(k, tol))
}

/// `g = k + m` with `k` a subalgebra and `[k, m] < m`.
#[derive(Debug, Clone)]
pub struct ReductiveDecomposition<'g> {
    pub g: &'g LieAlgebra,
    pub k: Subspace,
    pub m: Subspace,
    /// Rows `dim k..` map `g`-coordinates to `m`-coordinates along `k`.
    proj: Mat,
    /// Largest violation of `[k,k] < k` and `[k,m] < m`.
    pub residual: f64,
}

impl<'g> ReductiveDecomposition<'g> {
    pub fn new(g: &'g LieAlgebra, k: Subspace, m: Subspace, tol: f64) -> Result<Self> {
        let n = g.dim();
        if k.ambient_dim() != n || m.ambient_dim() != n {
            return Err(input_err!("subspace ambient dimension mismatch"));
        }
        if k.dim() + m.dim() != n {
            return Err(input_err!("dim k + dim m = {} but dim g = {n}", k.dim() + m.dim()));
        }
        let km = linalg::hcat(&[k.basis(), m.basis()]);
        if linalg::rank(&km, RANK_TOL) != n {
            return Err(input_err!("k and m do not span g"));
        }
        let proj = km.try_inverse().ok_or_else(|| input_err!("k + m is singular"))?;
        let residual = g.bracket_residual(&k, &k, &k).max(g.bracket_residual(&k, &m, &m));
        if residual > tol * scale(g) {
            return Err(input_err!("not reductive: bracket inclusion residual {residual:e}"));
        }
        Ok(ReductiveDecomposition { g, k, m, proj, residual })
    }

    pub fn dim_m(&self) -> usize {
        self.m.dim()
    }

    /// `m`-coordinates of the `m`-component of `x`.
    pub fn m_coords(&self, x: &Vector) -> Vector {
        let dk = self.k.dim();
        self.proj.rows(dk, self.m.dim()) * x
    }

    /// `[x, y]_m` for `x`, `y` in `m`-coordinates.
    pub fn bracket_m(&self, x: &Vector, y: &Vector) -> Vector {
        let a = self.m.basis() * x;
        let b = self.m.basis() * y;
        self.m_coords(&self.g.bracket_unchecked(&a, &b))
    }

    /// `t[(a*d + b)*d + c]` = coefficient of `m_c` in `[m_a, m_b]_m`.
    pub fn m_tensor(&self) -> Vec<f64> {
        let d = self.m.dim();
        let vs = self.m.vectors();
        let mut t = alloc::vec![0.0; d * d * d];
        for a in 0..d {
            for b in a + 1..d {
                let z = self.m_coords(&self.g.bracket_unchecked(&vs[a], &vs[b]));
                for c in 0..d {
                    t[(a * d + b) * d + c] = z[c];
                    t[(b * d + a) * d + c] = -z[c];
                }
            }
        }
        t
    }

    /// Matrices of `ad(z)|m` in `m`-coordinates, one per `k` basis vector.
    pub fn k_action(&self) -> Vec<Mat> {
        let d = self.m.dim();
        let vs = self.m.vectors();
        self.k
            .vectors()
            .iter()
            .map(|z| {
                let cols: Vec<Vector> =
                    vs.iter().map(|v| self.m_coords(&self.g.bracket_unchecked(z, v))).collect();
                if cols.is_empty() {
                    Mat::zeros(0, 0)
                } else {
                    Mat::from_columns(&cols).resize(d, d, 0.0)
                }
            })
            .collect()
    }

    /// Same decomposition with `m`'s basis replaced by `m.basis * change`.
    pub fn rebased(&self, change: &Mat, tol: f64) -> Result<Self> {
        Self::new(self.g, self.k.clone(), self.m.rebased(change)?, tol)
    }
}

/// `l = k + f` inside a Cartan decomposition, with `m = f + p`.
#[derive(Debug, Clone)]
pub struct FibrationSplit<'g> {
    pub base: CartanDecomposition<'g>,
    pub k: Subspace,
    /// Basis orthonormal for `-B`.
    pub f: Subspace,
    /// Basis orthonormal for `B`.
    pub p: Subspace,
    pub decomp: ReductiveDecomposition<'g>,
    /// Largest violation of `[k,f] < f`, `[f,p] < p`, `[p,p]_m < f`.
    pub residual: f64,
}

pub fn fibration_split<'g>(
    g: &'g LieAlgebra,
    theta: &CartanInvolution,
    k: &Subspace,
    tol: f64,
) -> Result<FibrationSplit<'g>> {
    let base = cartan_decompose(g, theta, tol)?;
    if !base.l.contains_subspace(k, tol) {
        return Err(input_err!("k is not contained in the fixed set of theta"));
    }
    if !g.is_subalgebra(k, tol) {
        return Err(input_err!("k is not a subalgebra"));
    }
    let b = g.killing_form();
    let f_raw = b.orthogonal_complement_in(k, &base.l, tol);
    if f_raw.dim() + k.dim() != base.l.dim() {
        return Err(Error::ComplementUndefined("Killing form is degenerate on k".into()));
    }
    let f = Subspace::from_basis(
        linalg::diagonalize_form(f_raw.basis(), &b.matrix, tol)
            .ok_or_else(|| Error::ComplementUndefined("f is degenerate".into()))?,
    )?;
    let p = Subspace::from_basis(
        linalg::diagonalize_form(base.p.basis(), &b.matrix, tol)
            .ok_or_else(|| Error::NotCartanInvolution("p is degenerate".into()))?,
    )?;
    let m = Subspace::from_basis(linalg::hcat(&[f.basis(), p.basis()]))?;
    let decomp = ReductiveDecomposition::new(g, k.clone(), m, tol)?;
    let mut residual = g.bracket_residual(k, &f, &f).max(g.bracket_residual(&f, &p, &p));
    // [p,p] lies in l = k + f, so its m-component lies in f.
    let kf = k.sum(&f, tol);
    residual = residual.max(g.bracket_residual(&p, &p, &kf));
    if residual > tol * scale(g) {
        return Err(Error::Consistency(format!("fibration split inclusions fail ({residual:e})")));
    }
    Ok(FibrationSplit { base, k: k.clone(), f, p, decomp, residual })
}

/// Outcome of the isotropy irreducibility test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    Reducible,
    Inconclusive,
}

impl Irreducibility {
    pub fn as_str(&self) -> &'static str {
        match self {
            Irreducibility::Irreducible => "irreducible",
            Irreducibility::Reducible => "reducible",
            Irreducibility::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone)]
pub struct IrreducibilityReport {
    pub verdict: Irreducibility,
    /// Proper invariant subspace (ambient coordinates) when reducible.
    pub witness: Option<Subspace>,
    pub commutant_dim: usize,
    pub seed: u64,
    pub trials: usize,
}

/// Operators of `ad(k)` on `module`, in module coordinates.
pub fn module_action(g: &LieAlgebra, k: &Subspace, module: &Subspace, tol: f64) -> Result<Vec<Mat>> {
    let d = module.dim();
    let vs = module.vectors();
    let mut out = Vec::with_capacity(k.dim());
    let proj = module.projector();
    for z in k.vectors() {
        let mut m = Mat::zeros(d, d);
        for (b, v) in vs.iter().enumerate() {
            let w = g.bracket_unchecked(&z, v);
            let (c, r) = proj.coords(&w);
            if r > tol * scale(g) * w.norm().max(1.0) {
                return Err(input_err!("module is not invariant under k (residual {r:e})"));
            }
            m.set_column(b, &c);
        }
        out.push(m);
    }
    Ok(out)
}

fn krylov_closure(ops: &[Mat], v: &Vector, tol: f64) -> Mat {
    let mut q = linalg::column_space(&Mat::from_columns(core::slice::from_ref(v)), tol);
    loop {
        let mut parts: Vec<Mat> = alloc::vec![q.clone()];
        for a in ops {
            parts.push(a * &q);
        }
        let refs: Vec<&Mat> = parts.iter().collect();
        let next = linalg::column_space(&linalg::hcat(&refs), tol);
        if next.ncols() == q.ncols() {
            return q;
        }
        q = next;
    }
}

/// Basis of `{X : A X = X A for all A in ops}` as `d x d` matrices.
pub fn commutant(ops: &[Mat], d: usize, tol: f64) -> Vec<Mat> {
    if d == 0 {
        return Vec::new();
    }
    let id = Mat::identity(d, d);
    let blocks: Vec<Mat> = ops.iter().map(|a| id.kronecker(a) - a.transpose().kronecker(&id)).collect();
    let ker = if blocks.is_empty() {
        Mat::identity(d * d, d * d)
    } else {
        let refs: Vec<&Mat> = blocks.iter().collect();
        linalg::null_space(&linalg::vcat(&refs), tol)
    };
    (0..ker.ncols()).map(|c| Mat::from_column_slice(d, d, ker.column(c).as_slice())).collect()
}

/// A nonzero singular polynomial in `t`, if `t` is not a scalar or a
/// complex-structure-like element: `t - x` for a real eigenvalue `x`, or
/// `t^2 - 2 Re(x) t + |x|^2` for a complex one.
fn singular_polynomial(t: &Mat) -> Option<Mat> {
    let d = t.nrows();
    let id = Mat::identity(d, d);
    let sc = linalg::max_abs(t).max(1e-300);
    if linalg::max_abs(&(t - &id * t[(0, 0)])) <= 1e-9 * sc {
        return None;
    }
    let schur = nalgebra::linalg::Schur::try_new(t.clone(), 1e-15, 5000)?;
    let eig: Vec<Complex<f64>> = schur.complex_eigenvalues().iter().copied().collect();
    for x in eig {
        let s = if x.im.abs() <= 1e-8 * sc {
            t - &id * x.re
        } else {
            t * t - t * (2.0 * x.re) + &id * (x.re * x.re + x.im * x.im)
        };
        if linalg::max_abs(&s) > 1e-6 * sc.max(sc * sc) {
            return Some(s);
        }
    }
    None
}

fn witness_from_kernel(s: &Mat, module: &Subspace) -> Option<Subspace> {
    let sc = linalg::max_abs(s).max(1e-300);
    let ker = linalg::null_space(&(s / sc), 1e-6);
    let d = s.nrows();
    if ker.ncols() == 0 || ker.ncols() == d {
        return None;
    }
    Some(Subspace::span(&(module.basis() * ker), RANK_TOL))
}

/// Decide whether `ad(k)` acts irreducibly on `module`.
///
/// With an invariant positive-definite `form` on the module (matrix in module
/// coordinates) the answer is exact: irreducible iff the self-adjoint part of
/// the commutant is one-dimensional. Without it, random cyclic subspaces and
/// singular commutant elements detect reducibility, and a commutant of
/// dimension 1, 2 or 4 with no singular element is reported irreducible.
pub fn isotropy_irreducible(
    g: &LieAlgebra,
    k: &Subspace,
    module: &Subspace,
    trials: usize,
    seed: u64,
    form: Option<&Mat>,
    tol: f64,
) -> Result<IrreducibilityReport> {
    let d = module.dim();
    let ops = module_action(g, k, module, tol)?;
    let report = |verdict, witness, commutant_dim| IrreducibilityReport {
        verdict,
        witness,
        commutant_dim,
        seed,
        trials,
    };
    if d <= 1 {
        return Ok(report(Irreducibility::Irreducible, None, d));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let v = Vector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0));
        let q = krylov_closure(&ops, &v, 1e-8);
        if q.ncols() < d {
            let w = Subspace::span(&(module.basis() * q), RANK_TOL);
            let cd = commutant(&ops, d, 1e-8).len();
            return Ok(report(Irreducibility::Reducible, Some(w), cd));
        }
    }
    let comm = commutant(&ops, d, 1e-8);
    let cd = comm.len();
    if let Some(q) = form {
        if q.shape() != (d, d) {
            return Err(input_err!("form size does not match the module"));
        }
        // Self-adjoint elements: Q X = X^T Q.
        let cols: Vec<Vector> = comm
            .iter()
            .map(|x| {
                let s = q * x - x.transpose() * q;
                Vector::from_column_slice(s.as_slice())
            })
            .collect();
        let m = Mat::from_columns(&cols);
        let ker = linalg::null_space(&m, 1e-8);
        if ker.ncols() <= 1 {
            return Ok(report(Irreducibility::Irreducible, None, cd));
        }
        // Two independent self-adjoint elements: one is not scalar.
        for c in 0..ker.ncols() {
            let mut x = Mat::zeros(d, d);
            for (i, b) in comm.iter().enumerate() {
                x += b * ker[(i, c)];
            }
            if let Some(s) = singular_polynomial(&x) {
                let w = witness_from_kernel(&s, module);
                return Ok(report(Irreducibility::Reducible, w, cd));
            }
        }
        return Ok(report(Irreducibility::Reducible, None, cd));
    }
    let mut probes: Vec<Mat> = comm.clone();
    for _ in 0..trials {
        let mut x = Mat::zeros(d, d);
        for b in &comm {
            x += b * rng.gen_range(-1.0..1.0);
        }
        probes.push(x);
    }
    for t in &probes {
        if let Some(s) = singular_polynomial(t) {
            let w = witness_from_kernel(&s, module);
            return Ok(report(Irreducibility::Reducible, w, cd));
        }
    }
    let verdict = if matches!(cd, 1 | 2 | 4) {
        Irreducibility::Irreducible
    } else {
        Irreducibility::Inconclusive
    };
    Ok(report(verdict, None, cd))
}

/// Invariant inner product on a compact-type `l`: `-B` on `[l,l]`, the
/// coordinate inner product on the center, center orthogonal to `[l,l]`.
pub fn compact_inner_product(l: &LieAlgebra, tol: f64) -> Result<Mat> {
    let n = l.dim();
    if n == 0 {
        return Ok(Mat::zeros(0, 0));
    }
    let z = l.center(tol);
    let dl = l.derived_ideal(tol);
    if z.dim() + dl.dim() != n {
        return Err(input_err!("l is not reductive: center and derived ideal do not span"));
    }
    let b = l.killing_form();
    let bd = -b.restrict(&dl);
    if linalg::signature(&bd, tol).0 != dl.dim() {
        return Err(input_err!("l is not of compact type: -B is not positive definite on [l,l]"));
    }
    let zo = z.orthonormal();
    let p = linalg::hcat(&[&zo, dl.basis()]);
    let q_adapted = linalg::block_diag(&[Mat::identity(z.dim(), z.dim()), bd]);
    let pinv = p.try_inverse().ok_or_else(|| input_err!("center + derived is singular"))?;
    let q = pinv.transpose() * q_adapted * &pinv;
    Ok((&q + q.transpose()) * 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::build;

    const TOL: f64 = 1e-9;

    #[test]
    fn sl3_cartan_dims() {
        let b = build("sl(3,R)").unwrap();
        let c = cartan_decompose(&b.algebra, &b.theta, TOL).unwrap();
        assert_eq!((c.l.dim(), c.p.dim()), (3, 5));
        assert!(c.inclusion_residual < 1e-10);
    }

    #[test]
    fn compact_has_no_p() {
        let b = build("su(3)").unwrap();
        let c = cartan_decompose(&b.algebra, &b.theta, TOL).unwrap();
        assert_eq!((c.l.dim(), c.p.dim()), (8, 0));
    }

    #[test]
    fn bad_involution_rejected() {
        let b = build("sl(2,R)").unwrap();
        let theta = CartanInvolution::identity(3);
        assert!(matches!(
            cartan_decompose(&b.algebra, &theta, TOL),
            Err(Error::NotCartanInvolution(_))
        ));
    }

    #[test]
    fn complement_of_so3_in_sl3() {
        let b = build("sl(3,R)").unwrap();
        let k = b.embed("full", TOL).unwrap();
        let m = b_orthogonal_complement(&b.algebra, &k, TOL).unwrap();
        assert_eq!(m.dim(), 5);
        let bf = b.algebra.killing_form();
        for x in k.vectors() {
            for y in m.vectors() {
                assert!(bf.eval(&x, &y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn degenerate_complement_rejected() {
        let b = build("sl(2,R)").unwrap();
        // A null vector of the Killing form: S + A.
        let v = Vector::from_vec(alloc::vec![1.0, 0.0, 1.0]);
        let k = Subspace::from_vectors(3, &[v]).unwrap();
        assert!(matches!(
            b_orthogonal_complement(&b.algebra, &k, TOL),
            Err(Error::ComplementUndefined(_))
        ));
    }

    #[test]
    fn fibration_split_sl3_so2() {
        let b = build("sl(3,R)").unwrap();
        let k = b.embed("so(2)+so(1)", TOL).unwrap();
        let s = fibration_split(&b.algebra, &b.theta, &k, TOL).unwrap();
        assert_eq!((s.f.dim(), s.p.dim(), s.decomp.dim_m()), (2, 5, 7));
    }

    #[test]
    fn fibration_split_su11_trivial_k() {
        let b = build("su(1,1)").unwrap();
        let s = fibration_split(&b.algebra, &b.theta, &Subspace::zero(3), TOL).unwrap();
        assert_eq!((s.f.dim(), s.p.dim()), (1, 2));
    }

    #[test]
    fn spin_two_module_is_irreducible() {
        let b = build("sl(3,R)").unwrap();
        let c = cartan_decompose(&b.algebra, &b.theta, TOL).unwrap();
        let r = isotropy_irreducible(&b.algebra, &c.l, &c.p, 16, DEFAULT_SEED, None, TOL).unwrap();
        assert_eq!(r.verdict, Irreducibility::Irreducible);
        assert_eq!(r.commutant_dim, 1);
    }

    #[test]
    fn so4_torus_module_is_reducible() {
        let b = build("so(4)").unwrap();
        let k = b.embed("so(2)+so(2)", TOL).unwrap();
        let m = b_orthogonal_complement(&b.algebra, &k, TOL).unwrap();
        let r = isotropy_irreducible(&b.algebra, &k, &m, 16, DEFAULT_SEED, None, TOL).unwrap();
        assert_eq!(r.verdict, Irreducibility::Reducible);
        let w = r.witness.unwrap();
        assert!(w.dim() > 0 && w.dim() < 4);
        assert!(b.algebra.bracket_residual(&k, &w, &w) < 1e-8);
    }

    #[test]
    fn trivial_k_is_reducible() {
        let b = build("su(2)").unwrap();
        let r = isotropy_irreducible(&b.algebra, &Subspace::zero(3), &Subspace::full(3), 4, 1, None, TOL)
            .unwrap();
        assert_eq!(r.verdict, Irreducibility::Reducible);
    }

    #[test]
    fn complex_structure_commutant_is_irreducible() {
        // u(1) acting on the 2-dim complement in su(2): commutant is C.
        let b = build("su(2)").unwrap();
        let k = b.embed("torus", TOL).unwrap();
        let m = b_orthogonal_complement(&b.algebra, &k, TOL).unwrap();
        let r = isotropy_irreducible(&b.algebra, &k, &m, 16, 3, None, TOL).unwrap();
        assert_eq!(r.verdict, Irreducibility::Irreducible);
        assert_eq!(r.commutant_dim, 2);
    }

    #[test]
    fn compact_form_on_u2() {
        let b = build("u(2)").unwrap();
        let q = compact_inner_product(&b.algebra, TOL).unwrap();
        assert_eq!(linalg::signature(&q, TOL), (4, 0, 0));
    }
}
