//! One function per subcommand, each returning a finished report.

use std::path::PathBuf;

use cdirac_core::clifford::{CliffordElement, PauliString};
use cdirac_core::dirac::{dirac_symbol, is_simplest_dirac, verify_sl2r as run_sl2r, ConnectionTable};
use cdirac_core::linalg::{CMat, Mat};
use cdirac_core::metric::{criterion_residual, cyclic_residual, diagonal_metric, MetricBlock};
use cdirac_core::osla::{classify_seeded, OslaInput, OslaType};
use cdirac_core::pipeline::PipelineOptions;
use cdirac_core::subspace::Subspace;
use cdirac_core::Error as CoreError;
use serde_json::{json, Map, Value};

use crate::catalog::{self, CatalogEntry, RowReport, RowStatus};
use crate::report::{CheckOut, Report};
use crate::target::Target;
use crate::{parse_int_params, parse_lambdas, CliError};

/// Tolerance for the skew-symmetry of connection coefficients.
pub const SKEW_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub tol: f64,
    pub seed: u64,
}

impl Settings {
    fn pipeline(&self) -> PipelineOptions {
        PipelineOptions { tol: self.tol, seed: self.seed }
    }
}

#[derive(Debug, Clone)]
pub enum Source {
    Spec(String),
    File(PathBuf),
}

impl Source {
    fn load(&self) -> Result<Target, CliError> {
        match self {
            Source::Spec(s) => Target::from_spec(s),
            Source::File(p) => Target::from_file(p),
        }
    }

    fn echo(&self) -> Value {
        match self {
            Source::Spec(s) => json!({ "spec": s }),
            Source::File(p) => json!({ "file": p.display().to_string() }),
        }
    }
}

fn run(mut rep: Report, settings: &Settings, body: impl FnOnce(&mut Report) -> Result<(), CliError>) -> Report {
    rep.input("tol", settings.tol);
    match body(&mut rep) {
        Ok(()) => rep.finalize(),
        Err(e) => rep.fail_with(e),
    }
}

fn scaled(residual: f64, scale: f64) -> f64 {
    residual / scale.max(1.0)
}

pub fn verify_sl2r(a: f64, b: f64, settings: &Settings) -> Report {
    let mut rep = Report::new("verify-sl2r", settings.seed);
    rep.input("a", a);
    rep.input("b", b);
    run(rep, settings, |rep| {
        let r = run_sl2r(a, b, settings.tol)?;
        for s in &r.steps {
            rep.push(CheckOut::residual(&s.name, s.residual, r.tolerance));
        }
        rep.result = Some(json!({ "r": r.r, "s": r.s, "t": r.t }));
        Ok(())
    })
}

fn lambdas_value(l: &[(String, f64)]) -> Value {
    Value::Object(l.iter().map(|(k, v)| (k.clone(), json!(v))).collect())
}

fn blocks_value(blocks: &[MetricBlock]) -> Value {
    Value::Array(
        blocks.iter().map(|b| json!({ "label": b.label, "dim": b.subspace.dim(), "lambda": b.lambda })).collect(),
    )
}

fn resolve(
    t: &Target,
    k: &str,
    lambdas: Option<&str>,
    tol: f64,
) -> Result<(Subspace, Vec<(String, f64)>, Vec<MetricBlock>), CliError> {
    let k = t.subalgebra(k, tol)?;
    let l = match lambdas {
        Some(s) => parse_lambdas(s)?,
        None => t.default_lambdas(&k, tol),
    };
    let blocks = t.blocks(&k, &l, tol)?;
    Ok((k, l, blocks))
}

pub fn check_cyclic(src: &Source, k: &str, lambdas: Option<&str>, settings: &Settings) -> Report {
    let mut rep = Report::new("check-cyclic", settings.seed);
    rep.input("g", src.echo());
    rep.input("k", k);
    let tol = settings.tol;
    run(rep, settings, |rep| {
        let t = src.load()?;
        let (k, l, blocks) = resolve(&t, k, lambdas, tol)?;
        rep.input("lambdas", lambdas_value(&l));
        let crit = criterion_residual(&t.algebra, &k, &blocks, tol)?;
        rep.push(CheckOut::residual("criterion", crit.residual / crit.scale, tol));
        let mut result = Map::new();
        result.insert("criterion_residual".into(), json!(crit.residual));
        result.insert("criterion_scale".into(), json!(crit.scale));
        result.insert("blocks".into(), blocks_value(&blocks));
        match diagonal_metric(&t.algebra, &k, blocks, tol) {
            Ok(m) => {
                rep.push(CheckOut::boolean("positive_definite", true));
                let cyc = cyclic_residual(&m) / m.scale();
                rep.push(CheckOut::residual("cyclic", cyc, tol));
                let uni = scaled(t.algebra.unimodular_residual(), t.algebra.max_structure_constant());
                let traceless = cyc < tol && uni < tol;
                rep.push(CheckOut {
                    name: "unimodular".into(),
                    residual: Some(uni),
                    verdict: Value::String(if uni < tol { "true" } else { "false" }.into()),
                    tolerance: Some(tol),
                    detail: None,
                });
                result.insert("cyclic".into(), json!(cyc < tol));
                result.insert("traceless_cyclic".into(), json!(traceless));
            }
            Err(CoreError::IndefiniteMetric(msg)) => {
                rep.push(CheckOut::boolean("positive_definite", false).with_detail(msg));
                result.insert("cyclic".into(), Value::Null);
                result.insert("traceless_cyclic".into(), Value::Null);
            }
            Err(e) => return Err(e.into()),
        }
        rep.result = Some(Value::Object(result));
        Ok(())
    })
}

fn witness_dim(s: &Option<Subspace>) -> Value {
    s.as_ref().map_or(Value::Null, |s| json!(s.dim()))
}

pub fn classify(src: &Source, k: &str, settings: &Settings) -> Report {
    let mut rep = Report::new("classify", settings.seed);
    rep.input("l", src.echo());
    rep.input("k", k);
    let tol = settings.tol;
    let outcome = (|| -> Result<(), CliError> {
        let t = src.load()?;
        let k = t.subalgebra(k, tol)?;
        let input = OslaInput::new(&t.algebra, k, tol)?;
        let v = classify_seeded(&input, tol, settings.seed)?;
        let sc = t.algebra.max_structure_constant();
        rep.push(CheckOut::residual("symmetric", scaled(v.residual, sc), tol));
        if let Some(irr) = v.irreducibility {
            rep.push(CheckOut::boolean("isotropy_irreducible", true).with_detail(irr.as_str()));
        }
        let w = &v.witnesses;
        let mut result = json!({
            "symmetric": v.symmetric,
            "type": v.kind.as_str(),
            "witness_dims": {
                "maximal_ideal": witness_dim(&w.maximal_ideal),
                "reduced_ideal": witness_dim(&w.reduced_ideal),
                "center": witness_dim(&w.center),
                "derived": witness_dim(&w.derived),
            },
            "dims": { "l": t.algebra.dim(), "k": input.k.dim(), "f": input.f.dim() },
        });
        if let Some(n) = &v.note {
            result["note"] = json!(n);
        }
        rep.result = Some(result);
        Ok(())
    })();
    rep.input("tol", tol);
    match outcome {
        Ok(()) => rep.finalize(),
        Err(e) => {
            if e.kind() == crate::report::ErrorKind::Unsupported {
                rep.result = Some(json!({ "symmetric": Value::Null, "type": OslaType::Unsupported.as_str() }));
            }
            rep.fail_with(e)
        }
    }
}

/// `I`, `X`, `Y`, `Z` per qubit, qubit 0 first.
pub fn pauli_label(p: &PauliString, qubits: usize) -> String {
    (0..qubits)
        .map(|q| match ((p.x >> q) & 1, (p.z >> q) & 1) {
            (0, 0) => 'I',
            (1, 0) => 'X',
            (0, 1) => 'Z',
            _ => 'Y',
        })
        .collect()
}

fn element_value(e: &CliffordElement, qubits: usize) -> Value {
    Value::Array(
        e.terms()
            .map(|(p, c)| json!({ "pauli": pauli_label(p, qubits), "re": c.re, "im": c.im }))
            .collect(),
    )
}

/// Round to 12 significant digits, printed in shortest form.
pub fn fmt12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let r: f64 = format!("{x:.11e}").parse().expect("formatted floats parse");
    format!("{r}")
}

fn dense_value(m: &CMat) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| {
                Value::Array(
                    (0..m.ncols())
                        .map(|j| {
                            let z = m[(i, j)];
                            let im = fmt12(z.im.abs());
                            let sign = if z.im < 0.0 { "-" } else { "+" };
                            Value::String(format!("{}{sign}{im}i", fmt12(z.re)))
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

fn matrix_value(m: &Mat) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| json!(m[(i, j)])).collect())).collect())
}

pub fn bar_symbol(src: &Source, k: &str, lambdas: Option<&str>, dense: bool, settings: &Settings) -> Report {
    let mut rep = Report::new("bar-symbol", settings.seed);
    rep.input("g", src.echo());
    rep.input("k", k);
    rep.input("dense", dense);
    let tol = settings.tol;
    run(rep, settings, |rep| {
        let t = src.load()?;
        let (k, l, blocks) = resolve(&t, k, lambdas, tol)?;
        rep.input("lambdas", lambdas_value(&l));
        let metric = diagonal_metric(&t.algebra, &k, blocks.clone(), tol)?;
        let table = ConnectionTable::new(&metric, tol)?;
        let sym = dirac_symbol(&table)?;
        let sd = is_simplest_dirac(&metric, tol)?;
        rep.push(CheckOut::residual("connection_skew", table.skew_residual() / table.scale(), SKEW_TOL));
        rep.push(CheckOut::residual("cross_check", sym.cross_check / table.scale(), tol));
        rep.push(
            CheckOut::residual("zero_order", sd.z_norm / sd.z_scale, tol)
                .with_detail(format!("traceless cyclic: {}", sd.verdict_b)),
        );
        let qubits = sym.context.delta_dim.trailing_zeros() as usize;
        let frame = metric.decomp.m.basis() * &table.frame;
        let mut result = json!({
            "dim_m": sd.dim_m,
            "delta_dim": sym.context.delta_dim,
            "blocks": blocks_value(&blocks),
            "frame": matrix_value(&frame.transpose()),
            "gamma": "gamma_2j = i Z^j X_j, gamma_2j+1 = i Z^j Y_j on qubits 0..; odd n adds -i Z..Z",
            "zero_order": element_value(&sym.zero_order, qubits),
            "zero_order_norm": sd.z_norm,
            "spin_connection": sym.spin_connection.iter().map(|w| element_value(w, qubits)).collect::<Vec<_>>(),
            "simplest": sd.verdict_a,
            "traceless_cyclic": sd.verdict_b,
        });
        if dense {
            result["zero_order_dense"] = dense_value(&sym.zero_order.to_dense());
            result["gamma_dense"] = Value::Array(sym.context.dense_gammas().iter().map(dense_value).collect());
        }
        rep.result = Some(result);
        Ok(())
    })
}

#[derive(Debug, Clone)]
pub enum Selection {
    All,
    Table(u8),
    Row { table: u8, row: u32, params: Option<String> },
}

fn load_entries(path: Option<&PathBuf>) -> Result<Vec<CatalogEntry>, CliError> {
    match path {
        Some(p) => catalog::load_catalog(p),
        None => catalog::parse_catalog(catalog::BUILTIN),
    }
}

fn row_check(r: &RowReport) -> CheckOut {
    let verdict = match r.status {
        RowStatus::Pass => Value::Bool(true),
        RowStatus::Fail => Value::Bool(false),
        RowStatus::Unsupported => Value::String("unsupported".into()),
    };
    let mut detail = format!("{} / {} / {}", r.triple[0], r.triple[1], r.triple[2]);
    if let (Some(c), Some(e)) = (&r.classified_type, &r.expected_type) {
        detail.push_str(&format!("; type {c} (expected {e})"));
    }
    if let Some(e) = &r.error {
        detail.push_str(&format!("; {e}"));
    }
    CheckOut { name: r.id.clone(), residual: None, verdict, tolerance: None, detail: Some(detail) }
}

pub fn catalog_verify(path: Option<&PathBuf>, sel: &Selection, settings: &Settings) -> Report {
    let mut rep = Report::new("catalog verify", settings.seed);
    if let Some(p) = path {
        rep.input("catalog", p.display().to_string());
    }
    run(rep, settings, |rep| {
        let entries = load_entries(path)?;
        let opts = settings.pipeline();
        match sel {
            Selection::All | Selection::Table(_) => {
                let table = match sel {
                    Selection::Table(t) => {
                        rep.input("table", *t);
                        Some(*t)
                    }
                    _ => {
                        rep.input("all", true);
                        None
                    }
                };
                let rows = catalog::verify_all(&entries, table, &opts);
                if rows.is_empty() {
                    return Err(CliError::Input("no catalog rows selected".into()));
                }
                let count = |s: RowStatus| rows.iter().filter(|r| r.status == s).count();
                for r in &rows {
                    rep.push(row_check(r));
                }
                rep.result = Some(json!({
                    "executed": rows.len() - count(RowStatus::Unsupported),
                    "passed": count(RowStatus::Pass),
                    "failed": count(RowStatus::Fail),
                    "unsupported": count(RowStatus::Unsupported),
                    "rows": rows,
                }));
                Ok(())
            }
            Selection::Row { table, row, params } => {
                rep.input("table", *table);
                rep.input("row", *row);
                let e = catalog::find_row(&entries, *table, *row)?;
                let p = match params {
                    Some(s) => {
                        rep.input("params", s.as_str());
                        Some(parse_int_params(s)?.into_iter().collect())
                    }
                    None => None,
                };
                if let Some(p) = &p {
                    catalog::instantiate(e, p)?;
                } else if !e.supported {
                    return Err(CliError::Unsupported(format!("{} ({} / {} / {})", e.id, e.g, e.l, e.k)));
                }
                let r = catalog::verify_row(e, p.as_ref(), &opts);
                rep.checks.extend(r.checks.iter().cloned());
                if r.status == RowStatus::Fail && !r.checks.iter().any(CheckOut::failed) {
                    rep.push(row_check(&r));
                }
                let unsupported = r.status == RowStatus::Unsupported;
                let msg = r.error.clone();
                rep.result = Some(serde_json::to_value(&r).expect("row reports serialize"));
                if unsupported {
                    return Err(CliError::Unsupported(msg.unwrap_or_else(|| e.id.clone())));
                }
                Ok(())
            }
        }
    })
}

pub fn algebra_info(src: &Source, structure: bool, settings: &Settings) -> Report {
    let mut rep = Report::new("algebra info", settings.seed);
    rep.input("g", src.echo());
    let tol = settings.tol;
    run(rep, settings, |rep| {
        let t = src.load()?;
        let g = &t.algebra;
        let sc = g.max_structure_constant().max(1.0);
        rep.push(CheckOut::residual("jacobi", g.jacobi_residual() / (sc * sc), 1e-10));
        let (pos, neg, zero) = g.killing_form().signature(tol);
        let mut result = json!({
            "name": g.name(),
            "dim": g.dim(),
            "basis_labels": g.labels(),
            "killing_signature": { "positive": pos, "negative": neg, "zero": zero },
            "semisimple": g.is_semisimple(tol),
            "compact_semisimple": neg == g.dim() && g.dim() > 0,
            "unimodular": g.is_unimodular(tol),
            "center_dim": g.center(tol).dim(),
            "derived_dim": g.derived_ideal(tol).dim(),
        });
        if let Some(b) = &t.built {
            result["cartan"] = json!({
                "compact_dim": b.theta.theta.diagonal().iter().filter(|&&x| x > 0.0).count(),
                "noncompact_dim": b.theta.theta.diagonal().iter().filter(|&&x| x < 0.0).count(),
            });
        }
        if structure {
            result["structure"] = serde_json::to_value(crate::algebra_doc::AlgebraDoc::from_algebra(g))
                .expect("algebra documents serialize");
        }
        rep.result = Some(result);
        Ok(())
    })
}
