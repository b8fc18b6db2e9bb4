use std::collections::BTreeSet;

use cdirac::algebra_doc::{algebra_to_json, parse_algebra};
use cdirac::catalog::{builtin_catalog, parse_catalog, BUILTIN};
use cdirac::cdirac_core::classical::build;
use cdirac::cdirac_core::LieAlgebra;
use cdirac::report::{CheckOut, Report};
use cdirac::CliError;
use proptest::prelude::*;
use serde_json::Value;

const SPECS: [&str; 6] = ["su(2)", "sl(2,R)", "so(4)", "su(2,1)", "u(2)", "sp(1,R)"];

fn same(a: &LieAlgebra, b: &LieAlgebra) -> bool {
    a.dim() == b.dim() && a.labels() == b.labels() && a.tensor() == b.tensor()
}

#[test]
fn constructor_algebras_round_trip_exactly() {
    for s in SPECS {
        let g = build(s).unwrap().algebra;
        let back = parse_algebra(&algebra_to_json(&g)).unwrap();
        assert!(same(&g, &back), "{s}");
    }
}

proptest! {
    /// Rescaled structure constants survive the text format bit for bit.
    #[test]
    fn scaled_structure_round_trips(idx in 0usize..SPECS.len(), scale in -1e6f64..1e6) {
        prop_assume!(scale.abs() > 1e-6);
        let g = build(SPECS[idx]).unwrap().algebra;
        let c: Vec<f64> = g.tensor().iter().map(|x| x * scale).collect();
        let h = LieAlgebra::new("scaled", g.labels().to_vec(), c).unwrap();
        let back = parse_algebra(&algebra_to_json(&h)).unwrap();
        prop_assert!(same(&h, &back));
    }

    #[test]
    fn garbage_is_rejected(text in "\\PC{0,64}") {
        prop_assert!(parse_algebra(&text).is_err());
    }
}

#[test]
fn unknown_fields_rejected() {
    let g = build("su(2)").unwrap().algebra;
    let mut v: Value = serde_json::from_str(&algebra_to_json(&g)).unwrap();
    v["extra"] = Value::Bool(true);
    assert!(parse_algebra(&v.to_string()).is_err());
}

#[test]
fn report_schema() {
    let mut r = Report::new("verify-sl2r", 7);
    r.input("a", 1.0);
    r.push(CheckOut::residual("step", 1e-16, 1e-9));
    r.push(CheckOut::boolean("flag", true).with_detail("fine"));
    let v: Value = serde_json::from_str(&r.finalize().to_json(false)).unwrap();
    let keys: BTreeSet<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    for k in ["schema", "tool_version", "command", "inputs", "checks", "status", "seed"] {
        assert!(keys.contains(k), "{k}");
    }
    assert_eq!(v["status"], "pass");
    assert_eq!(v["checks"][0]["residual"], 1e-16);

    let e = Report::new("classify", 7).fail_with(CliError::Unsupported("x".into()));
    assert_eq!(e.exit_code(), 3);
    let v: Value = serde_json::from_str(&e.to_json(true)).unwrap();
    assert_eq!(v["status"], "error");
    assert_eq!(v["error"]["kind"], "unsupported");
}

#[test]
fn builtin_catalog_is_well_formed() {
    let rows = builtin_catalog();
    assert_eq!(rows.len(), 111);
    let per_table = |t: u8| rows.iter().filter(|r| r.table == t).count();
    assert_eq!([per_table(1), per_table(2), per_table(3), per_table(4)], [38, 19, 35, 19]);
    for r in rows.iter().filter(|r| r.supported) {
        assert!(!r.sample.is_empty() || r.params.is_empty(), "{}", r.id);
    }
    let text = serde_json::to_string(&rows).unwrap();
    assert_eq!(parse_catalog(&text).unwrap(), rows);
}

#[test]
fn catalog_validation() {
    let mut rows: Vec<Value> = serde_json::from_str(BUILTIN).unwrap();
    rows.push(rows[0].clone());
    assert!(parse_catalog(&Value::Array(rows.clone()).to_string()).is_err());
    rows.pop();
    rows[0]["table"] = Value::from(9);
    assert!(parse_catalog(&Value::Array(rows).to_string()).is_err());
}
