//! End-to-end checks for a concrete pair: a fibration `L/K -> G/K -> G/L`
//! of a noncompact `g`, or a compact symmetric pair `(l, k)`.
//!
//! ```
//! use cdirac_core::pipeline::{verify_fibration, PipelineOptions};
//!
//! let rep = verify_fibration("sl(3,R)", "so(2)+so(1)", None, &PipelineOptions::default());
//! assert_eq!(rep.simplest, Some(true));
//! ```

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::classical::{build, Built};
use crate::decomp::{self, fibration_split, Irreducibility, DEFAULT_SEED, DEFAULT_TRIALS};
use crate::dirac::is_simplest_dirac;
use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::metric::{adapted_metric, cyclic_residual, diagonal_metric, MetricBlock};
use crate::osla::{classify_seeded, symmetric_residual, OslaInput, OslaType};
use crate::subspace::Subspace;

/// Tolerance for the symmetric-pair controls.
pub const SYMMETRIC_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineOptions {
    pub tol: f64,
    /// Seed of the randomized irreducibility probe.
    pub seed: u64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { tol: 1e-9, seed: DEFAULT_SEED }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Informational only; never affects the status.
    Info(String),
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: Option<f64>,
    pub verdict: Verdict,
    pub tolerance: Option<f64>,
    pub detail: Option<String>,
}

impl Check {
    pub fn residual(name: &str, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            residual: Some(residual),
            verdict: Verdict::from_bool(residual < tolerance),
            tolerance: Some(tolerance),
            detail: None,
        }
    }

    pub fn boolean(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), residual: None, verdict: Verdict::from_bool(ok), tolerance: None, detail: Some(detail.into()) }
    }

    pub fn info(name: &str, value: impl Into<String>) -> Self {
        Check { name: name.into(), residual: None, verdict: Verdict::Info(value.into()), tolerance: None, detail: None }
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Unsupported,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unsupported => "unsupported",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct PairDims {
    pub g: usize,
    pub l: usize,
    pub k: usize,
    pub f: usize,
    pub p: usize,
}

#[derive(Debug, Clone)]
pub struct PairReport {
    pub g_spec: String,
    pub k_pattern: String,
    pub dims: PairDims,
    pub checks: Vec<Check>,
    pub classified: Option<OslaType>,
    pub expected: Option<OslaType>,
    pub simplest: Option<bool>,
    pub status: Status,
    pub error: Option<String>,
}

impl PairReport {
    fn new(g_spec: &str, k_pattern: &str, expected: Option<OslaType>) -> Self {
        PairReport {
            g_spec: g_spec.into(),
            k_pattern: k_pattern.into(),
            dims: PairDims::default(),
            checks: Vec::new(),
            classified: None,
            expected,
            simplest: None,
            status: Status::Fail,
            error: None,
        }
    }

    fn finish(mut self, outcome: Result<()>) -> Self {
        match outcome {
            Ok(()) => {
                self.status = if self.checks.iter().any(Check::failed) { Status::Fail } else { Status::Pass };
            }
            Err(Error::Unsupported(m)) => {
                self.status = Status::Unsupported;
                self.error = Some(m);
            }
            Err(e) => {
                self.status = Status::Fail;
                self.error = Some(e.to_string());
            }
        }
        self
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn jacobi_check(g: &LieAlgebra) -> Check {
    let sc = g.max_structure_constant().max(1.0);
    Check::residual("jacobi", g.jacobi_residual() / (sc * sc), 1e-10)
}

fn restrict_pair(l_in_g: &Subspace, g: &LieAlgebra, k: &Subspace, f: &Subspace, tol: f64) -> Result<(LieAlgebra, Subspace, Subspace)> {
    let l = g.subalgebra(l_in_g, "l", tol)?;
    Ok((l, k.coords_in(l_in_g, tol)?, f.coords_in(l_in_g, tol)?))
}

/// Cartan data, fibration split, fibre classification, adapted metric and the
/// Dirac verdict for `g` (noncompact, with its Cartan involution) and `k`.
pub fn verify_fibration(g_spec: &str, k_pattern: &str, expected: Option<OslaType>, opts: &PipelineOptions) -> PairReport {
    let mut rep = PairReport::new(g_spec, k_pattern, expected);
    let outcome = (|| -> Result<()> {
        let built = build(g_spec)?;
        run_fibration(&built, k_pattern, opts, &mut rep)
    })();
    rep.finish(outcome)
}

/// Same pipeline for an already constructed algebra.
pub fn verify_fibration_built(
    built: &Built,
    k_pattern: &str,
    expected: Option<OslaType>,
    opts: &PipelineOptions,
) -> PairReport {
    let mut rep = PairReport::new(built.algebra.name(), k_pattern, expected);
    let outcome = run_fibration(built, k_pattern, opts, &mut rep);
    rep.finish(outcome)
}

fn run_fibration(built: &Built, k_pattern: &str, opts: &PipelineOptions, rep: &mut PairReport) -> Result<()> {
    let tol = opts.tol;
    let g = &built.algebra;
    rep.dims.g = g.dim();
    rep.checks.push(jacobi_check(g));
    let base = decomp::cartan_decompose(g, &built.theta, tol)?;
    rep.checks.push(Check::residual("cartan", base.inclusion_residual / g.max_structure_constant().max(1.0), tol));
    let k = built.embed(k_pattern, tol)?;
    let split = fibration_split(g, &built.theta, &k, tol)?;
    rep.dims.l = base.l.dim();
    rep.dims.k = k.dim();
    rep.dims.f = split.f.dim();
    rep.dims.p = split.p.dim();
    rep.checks.push(Check::boolean(
        "dimensions",
        rep.dims.k + rep.dims.f == rep.dims.l && rep.dims.l + rep.dims.p == rep.dims.g && base.l.contains_subspace(&k, tol),
        format!("k {} < l {} < g {}", rep.dims.k, rep.dims.l, rep.dims.g),
    ));
    rep.checks.push(Check::residual(
        "reductive",
        split.decomp.residual / g.max_structure_constant().max(1.0),
        tol,
    ));

    let (l, kl, fl) = restrict_pair(&base.l, g, &k, &split.f, tol)?;
    classify_into(&l, kl, fl, opts, rep)?;

    let metric = adapted_metric(&split, tol)?;
    let cyc = cyclic_residual(&metric);
    rep.checks.push(Check::residual("adapted_cyclic", cyc / metric.scale(), tol));
    let sd = is_simplest_dirac(&metric, tol)?;
    rep.simplest = Some(sd.verdict_a);
    rep.checks.push(Check {
        name: "simplest_dirac".into(),
        residual: Some(sd.z_norm / sd.z_scale),
        verdict: Verdict::from_bool(sd.verdict_a),
        tolerance: Some(tol),
        detail: Some(format!("traceless cyclic: {}", sd.verdict_b)),
    });
    Ok(())
}

fn classify_into(l: &LieAlgebra, k: Subspace, f: Subspace, opts: &PipelineOptions, rep: &mut PairReport) -> Result<()> {
    let tol = opts.tol;
    let input = OslaInput::with_complement(l, k, f, tol)?;
    rep.checks.push(Check::residual(
        "symmetric",
        symmetric_residual(&input) / l.max_structure_constant().max(1.0),
        SYMMETRIC_TOL,
    ));
    let q = decomp::compact_inner_product(l, tol)?;
    let fq = input.f.basis().transpose() * &q * input.f.basis();
    let irr = decomp::isotropy_irreducible(l, &input.k, &input.f, DEFAULT_TRIALS, opts.seed, Some(&fq), tol)?;
    rep.checks.push(Check::boolean(
        "isotropy_irreducible",
        irr.verdict == Irreducibility::Irreducible,
        format!("{} (commutant dimension {})", irr.verdict.as_str(), irr.commutant_dim),
    ));
    if irr.verdict != Irreducibility::Irreducible {
        return Ok(());
    }
    let v = classify_seeded(&input, tol, opts.seed)?;
    rep.classified = Some(v.kind);
    match rep.expected {
        Some(e) => rep.checks.push(Check::boolean(
            "type",
            e == v.kind,
            format!("classified {}, expected {}", v.kind.as_str(), e.as_str()),
        )),
        None => rep.checks.push(Check::info("type", v.kind.as_str())),
    }
    Ok(())
}

/// Symmetric-pair control for a compact `l` and `k`: `[f,f] < k`, the fibre
/// type when irreducible, and the Dirac verdict of `-B` on `f`.
pub fn verify_compact_pair(l_spec: &str, k_pattern: &str, opts: &PipelineOptions) -> PairReport {
    let mut rep = PairReport::new(l_spec, k_pattern, None);
    let tol = opts.tol;
    let outcome = (|| -> Result<()> {
        let built = build(l_spec)?;
        let l = &built.algebra;
        rep.dims.g = l.dim();
        rep.dims.l = l.dim();
        rep.checks.push(jacobi_check(l));
        let k = built.embed(k_pattern, tol)?;
        let input = OslaInput::new(l, k.clone(), tol)?;
        rep.dims.k = k.dim();
        rep.dims.f = input.f.dim();
        let sym = symmetric_residual(&input) / l.max_structure_constant().max(1.0);
        rep.checks.push(Check::residual("symmetric", sym, SYMMETRIC_TOL));
        match classify_seeded(&input, tol, opts.seed) {
            Ok(v) => {
                rep.classified = Some(v.kind);
                rep.checks.push(Check::info("type", v.kind.as_str()));
            }
            Err(e) => rep.checks.push(Check::info("type", e.to_string())),
        }
        if input.f.dim() >= 2 && l.is_semisimple(tol) {
            let m = diagonal_metric(l, &k, vec![MetricBlock::new("f1", input.f.clone(), -1.0)], tol)?;
            rep.checks.push(Check::residual("minus_killing_cyclic", cyclic_residual(&m) / m.scale(), SYMMETRIC_TOL));
            let sd = is_simplest_dirac(&m, tol)?;
            rep.simplest = Some(sd.verdict_a);
            rep.checks.push(Check::boolean("simplest_dirac", sd.verdict_a, format!("|Z| = {:e}", sd.z_norm)));
        }
        Ok(())
    })();
    rep.finish(outcome)
}
