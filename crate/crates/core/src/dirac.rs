//! Levi-Civita data in an orthonormal frame, the spin connection, the
//! zero-order term of the Dirac operator, and the simplest-form verdict.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::Complex;

use crate::classical::build_sl2_ab;
use crate::clifford::{build_clifford, CliffordContext, CliffordElement};
use crate::decomp::ReductiveDecomposition;
use crate::error::{input_err, Error, Result};
use crate::linalg::{self, CMat, Mat};
use crate::metric::{cyclic_residual, is_cyclic, InvariantMetric};
use crate::subspace::Subspace;

/// Upper-triangular change `C` with positive diagonal and `C^T G C = I`,
/// i.e. Gram-Schmidt over the stored basis order of `m`.
pub fn orthonormalize(metric: &InvariantMetric<'_>) -> Result<Mat> {
    let d = metric.dim();
    if d == 0 {
        return Ok(Mat::zeros(0, 0));
    }
    let ch = nalgebra::Cholesky::new(metric.gram.clone())
        .ok_or_else(|| Error::IndefiniteMetric("Gram matrix is not positive definite".into()))?;
    let l = ch.l();
    let inv = l
        .solve_lower_triangular(&Mat::identity(d, d))
        .ok_or_else(|| Error::IndefiniteMetric("singular Cholesky factor".into()))?;
    Ok(inv.transpose())
}

/// Connection data of an invariant metric in its orthonormal frame.
#[derive(Debug, Clone)]
pub struct ConnectionTable<'g> {
    /// The metric re-expressed in the orthonormal frame (Gram = I).
    pub metric: InvariantMetric<'g>,
    /// Columns: orthonormal frame in the original `m` coordinates.
    pub frame: Mat,
    /// `p[(i*n + j)*n + k] = <[X_i, X_j]_m, X_k>`.
    pub pairings: Vec<f64>,
    /// `coeffs[l][(i, j)] = c_ij(X_l)`.
    pub coeffs: Vec<Mat>,
}

impl<'g> ConnectionTable<'g> {
    pub fn new(metric: &InvariantMetric<'g>, tol: f64) -> Result<Self> {
        let frame = orthonormalize(metric)?;
        let on = metric.rebased(&frame, tol)?;
        let n = on.dim();
        let pairings = on.bracket_pairings();
        let p = |i: usize, j: usize, k: usize| pairings[(i * n + j) * n + k];
        let coeffs = (0..n)
            .map(|l| Mat::from_fn(n, n, |i, j| 0.5 * (-p(i, l, j) + p(j, i, l) + p(j, l, i))))
            .collect();
        Ok(ConnectionTable { metric: on, frame, pairings, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn pairing(&self, i: usize, j: usize, k: usize) -> f64 {
        let n = self.dim();
        self.pairings[(i * n + j) * n + k]
    }

    /// `c_ij(X)` for `X` given in orthonormal-frame coordinates.
    pub fn connection_coeffs(&self, x: &[f64]) -> Result<Mat> {
        let n = self.dim();
        if x.len() != n {
            return Err(input_err!("vector of length {} for dim m = {n}", x.len()));
        }
        let mut out = Mat::zeros(n, n);
        for (c, &w) in self.coeffs.iter().zip(x) {
            out += c * w;
        }
        Ok(out)
    }

    /// `max |c_ij(X_l) + c_ji(X_l)|`.
    pub fn skew_residual(&self) -> f64 {
        self.coeffs.iter().map(|c| linalg::max_abs(&(c + c.transpose()))).fold(0.0, f64::max)
    }

    /// `tr ad(X_i)` on `g` for each frame vector.
    pub fn traces(&self) -> Vec<f64> {
        let g = self.metric.g();
        let m = self.metric.decomp.m.basis();
        (0..self.dim()).map(|i| g.trace_ad(&m.column(i).into_owned())).collect()
    }

    /// Largest `|<[X_i, X_j]_m, X_k>|`, the natural scale of the zero-order term.
    pub fn scale(&self) -> f64 {
        linalg::max_abs_slice(&self.pairings).max(1.0)
    }
}

/// `nabla[i]` has column `j` equal to `nabla_{e_i} e_j` in the stored basis,
/// from the Koszul formula for left-invariant fields.
pub fn levi_civita_left_invariant(metric: &InvariantMetric<'_>) -> Result<Vec<Mat>> {
    if metric.decomp.k.dim() != 0 {
        return Err(input_err!("k is not zero; use the connection coefficients of the homogeneous space"));
    }
    let n = metric.dim();
    let p = metric.bracket_pairings();
    let pp = |i: usize, j: usize, k: usize| p[(i * n + j) * n + k];
    let ginv = metric
        .gram
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::IndefiniteMetric("singular Gram matrix".into()))?;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let low = Mat::from_fn(n, n, |k, j| 0.5 * (pp(i, j, k) - pp(j, k, i) + pp(k, i, j)));
        out.push(&ginv * low);
    }
    Ok(out)
}

/// `omega_l = 1/4 sum_{i,j} c_ij(X_l) gamma_i gamma_j`.
pub fn spin_connection_matrices(table: &ConnectionTable<'_>, ctx: &CliffordContext) -> Result<Vec<CliffordElement>> {
    let n = table.dim();
    if ctx.n != n {
        return Err(input_err!("Clifford dimension {} for dim m = {n}", ctx.n));
    }
    let pairs = gamma_pairs(ctx);
    let mut out = Vec::with_capacity(n);
    for c in &table.coeffs {
        let mut w = CliffordElement::zero(n);
        for i in 0..n {
            for j in 0..n {
                let v = c[(i, j)];
                if v != 0.0 {
                    w = w.add(&pairs[i * n + j].scale_real(0.25 * v))?;
                }
            }
        }
        out.push(w);
    }
    Ok(out)
}

fn gamma_pairs(ctx: &CliffordContext) -> Vec<CliffordElement> {
    let n = ctx.n;
    let mut v = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            v.push(ctx.gamma(i).mul(ctx.gamma(j)).expect("same context"));
        }
    }
    v
}

/// `1/4 ( sum_{i<j<k} S_ijk gamma_i gamma_j gamma_k - 2 sum_i tr ad(X_i) gamma_i )`
/// with `S_ijk` the cyclic sum of `<[X_i, X_j]_m, X_k>`.
pub fn baer_zero_order(table: &ConnectionTable<'_>, ctx: &CliffordContext) -> Result<CliffordElement> {
    let n = table.dim();
    if ctx.n != n {
        return Err(input_err!("Clifford dimension {} for dim m = {n}", ctx.n));
    }
    let mut z = CliffordElement::zero(n);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let s = table.pairing(i, j, k) + table.pairing(j, k, i) + table.pairing(k, i, j);
                if s != 0.0 {
                    z = z.add(&ctx.triple(i, j, k).scale_real(0.25 * s))?;
                }
            }
        }
    }
    for (i, tr) in table.traces().into_iter().enumerate() {
        if tr != 0.0 {
            z = z.add(&ctx.gamma(i).scale_real(-0.5 * tr))?;
        }
    }
    Ok(z)
}

/// Coefficients of the Dirac operator `D = sum gamma_i X_i + Z`.
#[derive(Debug, Clone)]
pub struct DiracSymbol {
    pub context: CliffordContext,
    pub first_order: Vec<CliffordElement>,
    pub spin_connection: Vec<CliffordElement>,
    pub zero_order: CliffordElement,
    /// `max` coefficient of `Z - sum gamma_i omega_i`.
    pub cross_check: f64,
}

pub fn dirac_symbol(table: &ConnectionTable<'_>) -> Result<DiracSymbol> {
    let ctx = build_clifford(table.dim());
    let omegas = spin_connection_matrices(table, &ctx)?;
    let z = baer_zero_order(table, &ctx)?;
    let mut alt = CliffordElement::zero(ctx.n);
    for (i, w) in omegas.iter().enumerate() {
        alt = alt.add(&ctx.gamma(i).mul(w)?)?;
    }
    let cross_check = z.sub(&alt)?.max_coefficient();
    Ok(DiracSymbol {
        first_order: ctx.gammas.clone(),
        context: ctx,
        spin_connection: omegas,
        zero_order: z,
        cross_check,
    })
}

#[derive(Debug, Clone)]
pub struct SimplestDirac {
    pub dim_m: usize,
    /// Largest Pauli coefficient of `Z`.
    pub z_norm: f64,
    pub z_scale: f64,
    pub cross_check: f64,
    pub cyclic_residual: f64,
    pub unimodular_residual: f64,
    /// `Z = 0`.
    pub verdict_a: bool,
    /// Traceless cyclic.
    pub verdict_b: bool,
}

impl SimplestDirac {
    pub fn simplest(&self) -> bool {
        self.verdict_a
    }
}

/// Decide whether the zero-order term vanishes, and cross-check against the
/// traceless-cyclic condition. A disagreement is a consistency error.
pub fn is_simplest_dirac(metric: &InvariantMetric<'_>, tol: f64) -> Result<SimplestDirac> {
    let n = metric.dim();
    if n < 2 {
        return Err(input_err!("dim m = {n}; the verdict needs dim m >= 2"));
    }
    let table = ConnectionTable::new(metric, tol)?;
    let sym = dirac_symbol(&table)?;
    let z_norm = sym.zero_order.max_coefficient();
    let z_scale = table.scale();
    if sym.cross_check > 1e-9 * z_scale {
        return Err(Error::Consistency(format!(
            "zero-order term disagrees with sum gamma_i omega_i by {:e}",
            sym.cross_check
        )));
    }
    let g = metric.g();
    let verdict_a = z_norm / z_scale < tol;
    let verdict_b = is_cyclic(metric, tol) && g.is_unimodular(tol);
    let out = SimplestDirac {
        dim_m: n,
        z_norm,
        z_scale,
        cross_check: sym.cross_check,
        cyclic_residual: cyclic_residual(metric),
        unimodular_residual: g.unimodular_residual(),
        verdict_a,
        verdict_b,
    };
    if verdict_a != verdict_b {
        return Err(Error::Consistency(format!(
            "Z = 0 is {verdict_a} but traceless cyclic is {verdict_b} (|Z| = {z_norm:e}, cyclic residual {:e})",
            out.cyclic_residual
        )));
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct StepCheck {
    pub name: String,
    pub residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct Sl2rReport {
    pub a: f64,
    pub b: f64,
    pub tolerance: f64,
    /// Bracket coefficients read off the computed structure constants.
    pub r: f64,
    pub s: f64,
    pub t: f64,
    pub steps: Vec<StepCheck>,
}

impl Sl2rReport {
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.passed)
    }

    pub fn failed_step(&self) -> Option<&StepCheck> {
        self.steps.iter().find(|s| !s.passed)
    }
}

/// `(r, s, t)` in closed form.
pub fn sl2r_rst(a: f64, b: f64) -> (f64, f64, f64) {
    let h = libm::sqrt(a * a + b * b);
    (2.0 * b * b / h, 2.0 * a * a / h, -2.0 * h)
}

/// Seven-step check of the left-invariant metric on `sl(2,R)` making
/// `X1 = a[[0,1],[1,0]]`, `X2 = b[[1,0],[0,-1]]`, `X3 = ab/sqrt(a^2+b^2)[[0,1],[-1,0]]`
/// orthonormal.
pub fn verify_sl2r(a: f64, b: f64, tol: f64) -> Result<Sl2rReport> {
    let built = build_sl2_ab(a, b)?;
    let g = &built.algebra;
    let (r0, s0, t0) = sl2r_rst(a, b);
    let mut steps = Vec::new();
    let mut push = |name: &str, residual: f64| {
        steps.push(StepCheck { name: name.into(), residual, passed: residual < tol });
    };

    let x = &built.realization.basis;
    let comm = |i: usize, j: usize| linalg::commutator(&x[i], &x[j]);
    let dev = |m: CMat, k: usize, c: f64| linalg::cmax_abs(&(m - &x[k] * Complex::new(c, 0.0)));
    let step1 = dev(comm(1, 2), 0, r0).max(dev(comm(2, 0), 1, s0)).max(dev(comm(0, 1), 2, t0));
    push("bracket_coefficients", step1);

    let (r, s, t) = (g.structure_constant(1, 2, 0), g.structure_constant(2, 0, 1), g.structure_constant(0, 1, 2));
    push("r_plus_s_plus_t", (r + s + t).abs());

    let kill = g.killing_matrix();
    let mut off = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                off = off.max(kill[(i, j)].abs());
            }
        }
    }
    push("killing_orthogonal", off);

    let decomp = ReductiveDecomposition::new(g, Subspace::zero(3), Subspace::full(3), tol)?;
    let metric = InvariantMetric::new(decomp, Mat::identity(3, 3), tol)?;
    let nabla = levi_civita_left_invariant(&metric)?;
    // expected[i] column j = nabla_{X_i} X_j
    let mut expected = vec![Mat::zeros(3, 3), Mat::zeros(3, 3), Mat::zeros(3, 3)];
    expected[0][(2, 1)] = -r0;
    expected[0][(1, 2)] = r0;
    expected[1][(2, 0)] = s0;
    expected[1][(0, 2)] = -s0;
    expected[2][(1, 0)] = -t0;
    expected[2][(0, 1)] = t0;
    let lc = nabla
        .iter()
        .zip(&expected)
        .map(|(n, e)| linalg::max_abs(&(n - e)))
        .fold(0.0, f64::max);
    push("levi_civita_table", lc);

    let mut tr = 0.0f64;
    for i in 0..3 {
        let mut sum = 0.0;
        for j in 0..3 {
            sum += g.structure_constant(j, i, j);
        }
        tr = tr.max(sum.abs());
    }
    push("traceless", tr);

    let table = ConnectionTable::new(&metric, tol)?;
    let sym = dirac_symbol(&table)?;
    let gam = sym.context.dense_gammas();
    let om = [(r0, 0usize), (s0, 1), (t0, 2)]
        .iter()
        .zip(&sym.spin_connection)
        .map(|((c, i), w)| linalg::cmax_abs(&(w.to_dense() - &gam[*i] * Complex::new(-0.5 * c, 0.0))))
        .fold(0.0, f64::max);
    push("spin_connection", om);

    push("zero_order_term", sym.zero_order.max_coefficient().max(sym.cross_check));

    Ok(Sl2rReport { a, b, tolerance: tol, r, s, t, steps })
}
