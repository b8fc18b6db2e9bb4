//! Machine-readable classification tables and the per-row pipeline.
//!
//! The catalog is a JSON array of [`CatalogEntry`]. Constructor strings are
//! templates: `{expr}` is replaced by the integer value of `expr` in the row
//! parameters, e.g. `"sl({n},R)"` or `"u({n/2})"`. Constraints are boolean
//! expressions over the same parameters.

use std::collections::BTreeMap;
use std::path::Path;

use cdirac_core::classical::build;
use cdirac_core::osla::OslaType;
use cdirac_core::pipeline::{verify_compact_pair, verify_fibration, PairDims, PairReport, PipelineOptions, Status};
use evalexpr::{ContextWithMutableVariables, HashMapContext, Value};
use serde::{Deserialize, Serialize};

use crate::report::CheckOut;
use crate::CliError;

/// The built-in catalog.
pub const BUILTIN: &str = include_str!("../data/catalog.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpinFlag {
    #[serde(rename = "star")]
    Star,
    #[serde(rename = "no")]
    No,
    #[serde(rename = "conditional")]
    Conditional,
    #[serde(rename = "n/a")]
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Spin {
    pub flag: SpinFlag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub id: String,
    pub table: u8,
    pub row: u32,
    /// Group-level (or algebra-level) names as printed in the table.
    pub g: String,
    pub l: String,
    pub k: String,
    #[serde(default)]
    pub params: Vec<String>,
    #[serde(default)]
    pub constraints: Vec<String>,
    /// Human-readable form of the constraints, quoted in errors.
    #[serde(default)]
    pub constraint_text: String,
    /// Noncompact `g`; absent for compact symmetric pairs.
    #[serde(default)]
    pub g_spec: Option<String>,
    #[serde(default)]
    pub l_spec: Option<String>,
    #[serde(default)]
    pub k_spec: Option<String>,
    #[serde(default)]
    pub sample: BTreeMap<String, i64>,
    #[serde(default)]
    pub expected_type: Option<String>,
    pub spin: Spin,
    /// Id of the compact symmetric pair listing the fibre `L/K`, if any.
    #[serde(default)]
    pub fibre_ref: Option<String>,
    pub supported: bool,
    #[serde(default)]
    pub note: Option<String>,
}

impl CatalogEntry {
    pub fn expected(&self) -> Result<Option<OslaType>, CliError> {
        match &self.expected_type {
            None => Ok(None),
            Some(s) => OslaType::parse(s)
                .map(Some)
                .ok_or_else(|| CliError::Parse(format!("{}: unknown type '{s}'", self.id))),
        }
    }

    pub fn is_compact_pair(&self) -> bool {
        self.g_spec.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub params: BTreeMap<String, i64>,
    pub g_spec: Option<String>,
    pub l_spec: String,
    pub k_spec: String,
}

pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>, CliError> {
    let entries: Vec<CatalogEntry> =
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("catalog: {e}")))?;
    let mut seen = std::collections::BTreeSet::new();
    for e in &entries {
        if !seen.insert(e.id.as_str()) {
            return Err(CliError::Parse(format!("catalog: duplicate id {}", e.id)));
        }
        if !(1..=4).contains(&e.table) {
            return Err(CliError::Parse(format!("catalog: {} has table {}", e.id, e.table)));
        }
        e.expected()?;
        if e.supported && (e.l_spec.is_none() || e.k_spec.is_none()) {
            return Err(CliError::Parse(format!("catalog: supported entry {} lacks l_spec or k_spec", e.id)));
        }
        for p in e.sample.keys() {
            if !e.params.contains(p) {
                return Err(CliError::Parse(format!("catalog: {} samples undeclared parameter {p}", e.id)));
            }
        }
    }
    Ok(entries)
}

pub fn load_catalog(path: &Path) -> Result<Vec<CatalogEntry>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_catalog(&text)
}

pub fn builtin_catalog() -> Vec<CatalogEntry> {
    parse_catalog(BUILTIN).expect("the built-in catalog is valid")
}

fn context(params: &BTreeMap<String, i64>) -> Result<HashMapContext, CliError> {
    let mut ctx = HashMapContext::new();
    for (k, v) in params {
        ctx.set_value(k.clone(), Value::Int(*v)).map_err(|e| CliError::Input(e.to_string()))?;
    }
    Ok(ctx)
}

/// Replace every `{expr}` by its integer value.
pub fn render(template: &str, params: &BTreeMap<String, i64>) -> Result<String, CliError> {
    let ctx = context(params)?;
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let close = rest[open..]
            .find('}')
            .ok_or_else(|| CliError::Parse(format!("unclosed '{{' in template '{template}'")))?
            + open;
        let expr = &rest[open + 1..close];
        let v = evalexpr::eval_int_with_context(expr, &ctx)
            .map_err(|e| CliError::Input(format!("template '{template}': {expr}: {e}")))?;
        out.push_str(&v.to_string());
        rest = &rest[close + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

/// Constraint expressions that fail for `params`.
pub fn violated_constraints(entry: &CatalogEntry, params: &BTreeMap<String, i64>) -> Result<Vec<String>, CliError> {
    let ctx = context(params)?;
    let mut bad = Vec::new();
    for c in &entry.constraints {
        let ok = evalexpr::eval_boolean_with_context(c, &ctx)
            .map_err(|e| CliError::Parse(format!("{}: constraint '{c}': {e}", entry.id)))?;
        if !ok {
            bad.push(c.clone());
        }
    }
    Ok(bad)
}

pub fn instantiate(entry: &CatalogEntry, params: &BTreeMap<String, i64>) -> Result<Instance, CliError> {
    if !entry.supported {
        return Err(CliError::Unsupported(format!("{} ({} / {} / {})", entry.id, entry.g, entry.l, entry.k)));
    }
    for p in &entry.params {
        if !params.contains_key(p) {
            return Err(CliError::Input(format!("{}: parameter {p} is missing", entry.id)));
        }
    }
    for p in params.keys() {
        if !entry.params.contains(p) {
            return Err(CliError::Input(format!("{}: unknown parameter {p}; expected {:?}", entry.id, entry.params)));
        }
    }
    let bad = violated_constraints(entry, params)?;
    if !bad.is_empty() {
        return Err(CliError::Input(format!(
            "{}: parameters violate {} (failed: {})",
            entry.id,
            entry.constraint_text,
            bad.join(", ")
        )));
    }
    let l_spec = entry.l_spec.as_deref().unwrap_or_default();
    let k_spec = entry.k_spec.as_deref().unwrap_or_default();
    Ok(Instance {
        params: params.clone(),
        g_spec: entry.g_spec.as_deref().map(|g| render(g, params)).transpose()?,
        l_spec: render(l_spec, params)?,
        k_spec: render(k_spec, params)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Pass,
    Fail,
    Unsupported,
}

#[derive(Debug, Clone, Serialize)]
pub struct DimsOut {
    pub g: usize,
    pub l: usize,
    pub k: usize,
    pub f: usize,
    pub p: usize,
}

impl From<&PairDims> for DimsOut {
    fn from(d: &PairDims) -> Self {
        DimsOut { g: d.g, l: d.l, k: d.k, f: d.f, p: d.p }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RowReport {
    pub id: String,
    pub table: u8,
    pub row: u32,
    pub triple: [String; 3],
    pub params: BTreeMap<String, i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<Instance>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dims: Option<DimsOut>,
    pub checks: Vec<CheckOut>,
    pub classified_type: Option<String>,
    pub expected_type: Option<String>,
    pub simplest_dirac: Option<bool>,
    pub spin: Spin,
    pub status: RowStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl RowReport {
    fn new(entry: &CatalogEntry, params: &BTreeMap<String, i64>) -> Self {
        RowReport {
            id: entry.id.clone(),
            table: entry.table,
            row: entry.row,
            triple: [entry.g.clone(), entry.l.clone(), entry.k.clone()],
            params: params.clone(),
            instance: None,
            dims: None,
            checks: Vec::new(),
            classified_type: None,
            expected_type: entry.expected_type.clone(),
            simplest_dirac: None,
            spin: entry.spin.clone(),
            status: RowStatus::Fail,
            error: None,
        }
    }
}

fn spin_info(entry: &CatalogEntry) -> CheckOut {
    let flag = match entry.spin.flag {
        SpinFlag::Star => "star",
        SpinFlag::No => "no",
        SpinFlag::Conditional => "conditional",
        SpinFlag::NotApplicable => "n/a",
    };
    let mut detail = Vec::new();
    if let Some(c) = &entry.spin.condition {
        detail.push(format!("condition: {c}"));
    }
    if let Some(r) = &entry.fibre_ref {
        detail.push(format!("fibre listed as {r}"));
    }
    let c = CheckOut::info("spin", flag);
    if detail.is_empty() {
        c
    } else {
        c.with_detail(detail.join("; "))
    }
}

/// Run the row pipeline at `params` (the stored sample when `None`).
pub fn verify_row(entry: &CatalogEntry, params: Option<&BTreeMap<String, i64>>, opts: &PipelineOptions) -> RowReport {
    let params = params.unwrap_or(&entry.sample);
    let mut rep = RowReport::new(entry, params);
    let inst = match instantiate(entry, params) {
        Ok(i) => i,
        Err(e) => {
            rep.status = match e {
                CliError::Unsupported(_) => RowStatus::Unsupported,
                _ => RowStatus::Fail,
            };
            rep.error = Some(e.to_string());
            return rep;
        }
    };
    let expected = match entry.expected() {
        Ok(x) => x,
        Err(e) => {
            rep.error = Some(e.to_string());
            return rep;
        }
    };
    let pair: PairReport = match &inst.g_spec {
        Some(g) => verify_fibration(g, &inst.k_spec, expected, opts),
        None => verify_compact_pair(&inst.l_spec, &inst.k_spec, opts),
    };
    rep.checks = pair.checks.iter().map(CheckOut::from).collect();
    if inst.g_spec.is_some() && pair.error.is_none() {
        match build(&inst.l_spec) {
            Ok(l) => rep.checks.push(
                CheckOut::boolean("l_dimension", l.algebra.dim() == pair.dims.l)
                    .with_detail(format!("{} has dimension {}", inst.l_spec, l.algebra.dim())),
            ),
            Err(e) => rep.checks.push(CheckOut::boolean("l_dimension", false).with_detail(e.to_string())),
        }
    }
    rep.checks.push(spin_info(entry));
    rep.dims = Some(DimsOut::from(&pair.dims));
    rep.classified_type = pair.classified.map(|t| t.as_str().to_string());
    rep.simplest_dirac = pair.simplest;
    rep.error = pair.error.clone();
    rep.status = match pair.status {
        Status::Unsupported => RowStatus::Unsupported,
        Status::Fail => RowStatus::Fail,
        Status::Pass if rep.checks.iter().any(CheckOut::failed) => RowStatus::Fail,
        Status::Pass => RowStatus::Pass,
    };
    rep.instance = Some(inst);
    rep
}

/// Rows of `table` (all tables when `None`), each at its stored sample.
pub fn verify_all(entries: &[CatalogEntry], table: Option<u8>, opts: &PipelineOptions) -> Vec<RowReport> {
    let selected: Vec<&CatalogEntry> = entries.iter().filter(|e| table.is_none_or(|t| e.table == t)).collect();
    let mut out: Vec<Option<RowReport>> = vec![None; selected.len()];
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
    let next = std::sync::atomic::AtomicUsize::new(0);
    let results = std::sync::Mutex::new(&mut out);
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let Some(e) = selected.get(i) else { break };
                let r = verify_row(e, None, opts);
                results.lock().expect("no worker panics while holding the lock")[i] = Some(r);
            });
        }
    });
    out.into_iter().map(|r| r.expect("every row is verified")).collect()
}

pub fn find_row(entries: &[CatalogEntry], table: u8, row: u32) -> Result<&CatalogEntry, CliError> {
    entries
        .iter()
        .find(|e| e.table == table && e.row == row)
        .ok_or_else(|| CliError::Input(format!("no row {row} in table {table}")))
}
