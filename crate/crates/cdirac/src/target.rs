//! Turning command-line strings into an algebra, a subalgebra `k` and the
//! metric blocks of `m`.

use std::path::Path;

use cdirac_core::classical::{build, Built};
use cdirac_core::decomp::{b_orthogonal_complement, fibration_split};
use cdirac_core::lie::LieAlgebra;
use cdirac_core::linalg::{self, Mat, Vector};
use cdirac_core::metric::MetricBlock;
use cdirac_core::subspace::Subspace;

use crate::algebra_doc::parse_algebra;
use crate::CliError;

/// An algebra, with its matrix model when it came from a constructor string.
pub struct Target {
    pub algebra: LieAlgebra,
    pub built: Option<Built>,
}

impl Target {
    pub fn from_spec(spec: &str) -> Result<Self, CliError> {
        let built = build(spec)?;
        Ok(Target { algebra: built.algebra.clone(), built: Some(built) })
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Ok(Target { algebra: parse_algebra(&text)?, built: None })
    }

    /// `k` from `0`, a JSON list of coordinate vectors, a comma list of basis
    /// labels, or (for constructor strings) a named embedding pattern.
    pub fn subalgebra(&self, k: &str, tol: f64) -> Result<Subspace, CliError> {
        let n = self.algebra.dim();
        let t = k.trim();
        let sub = if t == "0" {
            Subspace::zero(n)
        } else if t.starts_with("[[") || t == "[]" {
            let rows: Vec<Vec<f64>> =
                serde_json::from_str(t).map_err(|e| CliError::Parse(format!("k coordinate vectors: {e}")))?;
            let mut vs = Vec::with_capacity(rows.len());
            for r in rows {
                if r.len() != n {
                    return Err(CliError::Input(format!("k vector has length {}, algebra has dimension {n}", r.len())));
                }
                vs.push(Vector::from_vec(r));
            }
            Subspace::span_vectors(n, &vs, tol)?
        } else if let Some(b) = &self.built {
            b.embed(t, tol)?
        } else {
            let labels = self.algebra.labels();
            let mut vs = Vec::new();
            for name in t.split(',').map(str::trim) {
                let i = labels
                    .iter()
                    .position(|l| l == name)
                    .ok_or_else(|| CliError::Input(format!("unknown basis label '{name}'")))?;
                let mut v = Vector::zeros(n);
                v[i] = 1.0;
                vs.push(v);
            }
            Subspace::span_vectors(n, &vs, tol)?
        };
        if !self.algebra.is_subalgebra(&sub, tol) {
            return Err(CliError::Input(format!("'{t}' does not span a subalgebra")));
        }
        Ok(sub)
    }

    fn has_cartan_split(&self) -> bool {
        self.built.as_ref().is_some_and(|b| b.theta.theta.diagonal().iter().any(|&x| x < 0.0))
    }

    /// Default block weights: the adapted metric `f1=-2, p1=1` for a
    /// noncompact constructor with `k` in the fixed set, otherwise `m1=-1`.
    pub fn default_lambdas(&self, k: &Subspace, tol: f64) -> Vec<(String, f64)> {
        if self.has_cartan_split() {
            if let Ok(split) = self.split(k, tol) {
                let mut v = Vec::new();
                if split.0.dim() > 0 {
                    v.push(("f1".to_string(), -2.0));
                }
                v.push(("p1".to_string(), 1.0));
                return v;
            }
        }
        vec![("m1".to_string(), -1.0)]
    }

    fn split(&self, k: &Subspace, tol: f64) -> Result<(Subspace, Subspace), CliError> {
        let b = self
            .built
            .as_ref()
            .ok_or_else(|| CliError::Input("blocks f1/p1 need a constructor string with a Cartan involution".into()))?;
        let s = fibration_split(&self.algebra, &b.theta, k, tol)?;
        Ok((s.f, s.p))
    }

    /// Blocks named `f1`/`p1` (fibration split), `m1` (all of `m`), or
    /// `b1..bN` (the vectors of a Killing-orthogonal basis of `m`; the stored
    /// basis of `g` when `k = 0`). Every block must get a weight.
    pub fn blocks(&self, k: &Subspace, lambdas: &[(String, f64)], tol: f64) -> Result<Vec<MetricBlock>, CliError> {
        if lambdas.is_empty() {
            return Err(CliError::Input("no block weights given".into()));
        }
        let names: Vec<&str> = lambdas.iter().map(|(n, _)| n.as_str()).collect();
        let available: Vec<(String, Subspace)> = if names.iter().all(|n| *n == "f1" || *n == "p1") {
            let (f, p) = self.split(k, tol)?;
            [("f1", f), ("p1", p)].into_iter().filter(|(_, s)| s.dim() > 0).map(|(n, s)| (n.to_string(), s)).collect()
        } else if names == ["m1"] {
            vec![("m1".to_string(), self.complement(k, tol)?)]
        } else if names.iter().all(|n| n.starts_with('b')) {
            let m = self.complement(k, tol)?;
            let basis: Mat = if k.dim() == 0 {
                Mat::identity(self.algebra.dim(), self.algebra.dim())
            } else {
                linalg::diagonalize_form(m.basis(), &self.algebra.killing_matrix(), tol)
                    .ok_or_else(|| CliError::Input("Killing form is degenerate on m".into()))?
            };
            (0..basis.ncols())
                .map(|i| Ok((format!("b{}", i + 1), Subspace::from_basis(basis.columns(i, 1).into_owned())?)))
                .collect::<Result<_, CliError>>()?
        } else {
            return Err(CliError::Input(format!(
                "block names {names:?} mix schemes; use f1/p1, m1, or b1..bN"
            )));
        };
        let mut blocks = Vec::with_capacity(available.len());
        for (name, sub) in &available {
            let lambda = lambdas
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, l)| *l)
                .ok_or_else(|| CliError::Input(format!("no weight for block {name}")))?;
            blocks.push(MetricBlock::new(name.clone(), sub.clone(), lambda));
        }
        for (n, _) in lambdas {
            if !available.iter().any(|(a, _)| a == n) {
                let list: Vec<&str> = available.iter().map(|(a, _)| a.as_str()).collect();
                return Err(CliError::Input(format!("unknown block {n}; blocks are {list:?}")));
            }
        }
        Ok(blocks)
    }

    fn complement(&self, k: &Subspace, tol: f64) -> Result<Subspace, CliError> {
        let m = b_orthogonal_complement(&self.algebra, k, tol)?;
        if m.dim() + k.dim() != self.algebra.dim() {
            return Err(CliError::Input("Killing form is degenerate; give the blocks explicitly".into()));
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-9;

    #[test]
    fn k_forms_agree() {
        let t = Target::from_spec("su(2)").unwrap();
        assert_eq!(t.subalgebra("0", TOL).unwrap().dim(), 0);
        assert_eq!(t.subalgebra("[[1,0,0]]", TOL).unwrap().dim(), 1);
        assert_eq!(t.subalgebra("torus", TOL).unwrap().dim(), 1);
        assert!(t.subalgebra("[[1,0]]", TOL).is_err());
        assert!(t.subalgebra("[[1,0,0],[0,1,0]]", TOL).is_err());
    }

    #[test]
    fn label_lists_for_documents() {
        let g = build("su(2)").unwrap().algebra;
        let t = Target { algebra: g.clone(), built: None };
        let first = g.labels()[0].clone();
        assert_eq!(t.subalgebra(&first, TOL).unwrap().dim(), 1);
        assert!(t.subalgebra("nope", TOL).is_err());
    }

    #[test]
    fn block_schemes() {
        let t = Target::from_spec("su(2)").unwrap();
        let k = t.subalgebra("0", TOL).unwrap();
        let b = t.blocks(&k, &[("b1".into(), 1.0), ("b2".into(), 1.0), ("b3".into(), 2.0)], TOL).unwrap();
        assert_eq!(b.len(), 3);
        assert!(t.blocks(&k, &[("b1".into(), 1.0)], TOL).is_err());
        assert!(t.blocks(&k, &[("m1".into(), 1.0), ("b1".into(), 1.0)], TOL).is_err());
        assert_eq!(t.default_lambdas(&k, TOL), vec![("m1".to_string(), -1.0)]);

        let t = Target::from_spec("sl(3,R)").unwrap();
        let k = t.subalgebra("so(2)+so(1)", TOL).unwrap();
        let d = t.default_lambdas(&k, TOL);
        assert_eq!(d, vec![("f1".to_string(), -2.0), ("p1".to_string(), 1.0)]);
        let b = t.blocks(&k, &d, TOL).unwrap();
        assert_eq!(b.iter().map(|x| x.subspace.dim()).collect::<Vec<_>>(), vec![2, 5]);
    }
}
