//! JSON document for structure constants.
//!
//! ```json
//! {"name": "su(2)", "dim": 3, "basis_labels": ["k1", "k2", "k3"],
//!  "brackets": [{"i": 0, "j": 1, "coeffs": [[2, 2.0]]}]}
//! ```
//!
//! Indices are zero-based. Only pairs `i < j` with a nonzero bracket are
//! stored; `[e_j, e_i]` is implied by antisymmetry.

use cdirac_core::lie::LieAlgebra;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub name: String,
    pub dim: usize,
    pub basis_labels: Vec<String>,
    pub brackets: Vec<BracketDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketDoc {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<(usize, f64)>,
}

impl AlgebraDoc {
    pub fn from_algebra(g: &LieAlgebra) -> Self {
        let n = g.dim();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let coeffs: Vec<(usize, f64)> = (0..n)
                    .map(|k| (k, g.structure_constant(i, j, k)))
                    .filter(|&(_, v)| v != 0.0)
                    .collect();
                if !coeffs.is_empty() {
                    brackets.push(BracketDoc { i, j, coeffs });
                }
            }
        }
        AlgebraDoc { name: g.name().to_string(), dim: n, basis_labels: g.labels().to_vec(), brackets }
    }

    pub fn to_algebra(&self) -> Result<LieAlgebra, CliError> {
        if self.basis_labels.len() != self.dim {
            return Err(CliError::Parse(format!(
                "dim is {} but {} basis labels are given",
                self.dim,
                self.basis_labels.len()
            )));
        }
        let mut triples = Vec::with_capacity(self.brackets.len());
        for b in &self.brackets {
            if b.i >= b.j {
                return Err(CliError::Parse(format!("bracket ({}, {}) must have i < j", b.i, b.j)));
            }
            if b.coeffs.iter().any(|(_, v)| !v.is_finite()) {
                return Err(CliError::Parse(format!("bracket ({}, {}) has a non-finite coefficient", b.i, b.j)));
            }
            triples.push((b.i, b.j, b.coeffs.clone()));
        }
        Ok(LieAlgebra::from_brackets(self.name.clone(), self.basis_labels.clone(), &triples)?)
    }
}

pub fn parse_algebra(text: &str) -> Result<LieAlgebra, CliError> {
    let doc: AlgebraDoc = serde_json::from_str(text).map_err(|e| CliError::Parse(format!("algebra document: {e}")))?;
    doc.to_algebra()
}

pub fn algebra_to_json(g: &LieAlgebra) -> String {
    serde_json::to_string(&AlgebraDoc::from_algebra(g)).expect("algebra documents serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use cdirac_core::classical::build;

    #[test]
    fn round_trip_preserves_constants() {
        for spec in ["su(2)", "sl(3,R)", "R+su(2)", "so(3,2)"] {
            let g = build(spec).unwrap().algebra;
            let back = parse_algebra(&algebra_to_json(&g)).unwrap();
            assert_eq!(back.tensor(), g.tensor(), "{spec}");
            assert_eq!(back.labels(), g.labels());
            assert_eq!(back.name(), g.name());
        }
    }

    #[test]
    fn only_upper_pairs_stored() {
        let g = build("su(2)").unwrap().algebra;
        let doc = AlgebraDoc::from_algebra(&g);
        assert_eq!(doc.brackets.len(), 3);
        assert!(doc.brackets.iter().all(|b| b.i < b.j && !b.coeffs.is_empty()));
    }

    #[test]
    fn malformed_documents_rejected() {
        let bad_order = r#"{"name":"x","dim":2,"basis_labels":["a","b"],"brackets":[{"i":1,"j":0,"coeffs":[[0,1.0]]}]}"#;
        assert!(matches!(parse_algebra(bad_order), Err(CliError::Parse(_))));
        let bad_dim = r#"{"name":"x","dim":3,"basis_labels":["a","b"],"brackets":[]}"#;
        assert!(matches!(parse_algebra(bad_dim), Err(CliError::Parse(_))));
        let bad_index = r#"{"name":"x","dim":2,"basis_labels":["a","b"],"brackets":[{"i":0,"j":1,"coeffs":[[5,1.0]]}]}"#;
        assert!(parse_algebra(bad_index).is_err());
        assert!(parse_algebra("{").is_err());
    }
}
