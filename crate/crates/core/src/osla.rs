//! Orthogonal symmetric pairs `(l, k)` with irreducible isotropy on `f`, and
//! their five types S1, S2, NS0, NS1, NS2.

use alloc::format;
use alloc::string::String;

use crate::decomp::{self, Irreducibility, DEFAULT_SEED, DEFAULT_TRIALS};
use crate::error::{input_err, Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{self, Mat, Vector};
use crate::subspace::{BilinearForm, Subspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OslaType {
    S1,
    S2,
    NS0,
    NS1,
    NS2,
    NotSymmetric,
    Unsupported,
}

impl OslaType {
    pub fn as_str(&self) -> &'static str {
        match self {
            OslaType::S1 => "S1",
            OslaType::S2 => "S2",
            OslaType::NS0 => "NS0",
            OslaType::NS1 => "NS1",
            OslaType::NS2 => "NS2",
            OslaType::NotSymmetric => "not_symmetric",
            OslaType::Unsupported => "unsupported",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "S1" => OslaType::S1,
            "S2" => OslaType::S2,
            "NS0" => OslaType::NS0,
            "NS1" => OslaType::NS1,
            "NS2" => OslaType::NS2,
            "not_symmetric" => OslaType::NotSymmetric,
            "unsupported" => OslaType::Unsupported,
            _ => return None,
        })
    }
}

/// `l = k + f` with `f` the complement of `k` for an invariant inner product.
#[derive(Debug, Clone)]
pub struct OslaInput<'l> {
    pub l: &'l LieAlgebra,
    pub k: Subspace,
    pub f: Subspace,
}

impl<'l> OslaInput<'l> {
    /// Takes `f` orthogonal to `k` for `-B` on `[l,l]` plus the coordinate
    /// inner product on the center.
    pub fn new(l: &'l LieAlgebra, k: Subspace, tol: f64) -> Result<Self> {
        let q = decomp::compact_inner_product(l, tol)?;
        let form = BilinearForm::new(q.clone());
        let f = form.orthogonal_complement(&k, tol);
        let f = if f.dim() == 0 {
            f
        } else {
            let b = linalg::gram_schmidt_form(f.basis(), &q, tol)
                .ok_or_else(|| Error::ComplementUndefined("invariant form is degenerate on f".into()))?;
            Subspace::from_basis(b)?
        };
        OslaInput::with_complement(l, k, f, tol)
    }

    pub fn with_complement(l: &'l LieAlgebra, k: Subspace, f: Subspace, tol: f64) -> Result<Self> {
        let n = l.dim();
        if k.ambient_dim() != n || f.ambient_dim() != n {
            return Err(input_err!("k and f must live in l"));
        }
        if k.dim() + f.dim() != n || k.sum(&f, tol).dim() != n {
            return Err(input_err!("l is not the direct sum of k and f"));
        }
        if !l.is_subalgebra(&k, tol) {
            return Err(input_err!("k is not a subalgebra of l"));
        }
        let sc = l.max_structure_constant().max(1.0);
        let r = l.bracket_residual(&k, &f, &f);
        if r > 1e-10 * sc {
            return Err(input_err!("[k,f] is not contained in f (residual {r:e})"));
        }
        Ok(OslaInput { l, k, f })
    }

    /// Same pair after replacing the stored bases by `basis * change`.
    pub fn recombined(&self, k_change: &Mat, f_change: &Mat, tol: f64) -> Result<Self> {
        OslaInput::with_complement(self.l, self.k.rebased(k_change)?, self.f.rebased(f_change)?, tol)
    }
}

/// Largest `f`-component of `[X, Y]` over basis pairs of `f`.
pub fn symmetric_residual(input: &OslaInput<'_>) -> f64 {
    let d = input.f.dim();
    if d == 0 {
        return 0.0;
    }
    let frame = linalg::hcat(&[input.k.basis(), input.f.basis()]);
    let inv = match frame.try_inverse() {
        Some(m) => m,
        None => return f64::INFINITY,
    };
    let kd = input.k.dim();
    let fv = input.f.vectors();
    let mut worst = 0.0f64;
    for a in 0..d {
        for b in a + 1..d {
            let w = input.l.bracket_unchecked(&fv[a], &fv[b]);
            let c = &inv * w;
            let fpart = Vector::from_fn(d, |i, _| c[kd + i]);
            worst = worst.max((input.f.basis() * fpart).norm());
        }
    }
    worst
}

#[derive(Debug, Clone, Default)]
pub struct OslaWitnesses {
    /// Maximal ideal of `l` inside `k`.
    pub maximal_ideal: Option<Subspace>,
    /// Irreducible ideal carrying `f` (S2 and NS2).
    pub reduced_ideal: Option<Subspace>,
    pub center: Option<Subspace>,
    pub derived: Option<Subspace>,
}

impl OslaWitnesses {
    fn lifted(self, frame: &Subspace) -> Self {
        let up = |s: Option<Subspace>| s.map(|s| s.lift(frame));
        OslaWitnesses {
            maximal_ideal: up(self.maximal_ideal),
            reduced_ideal: up(self.reduced_ideal),
            center: up(self.center),
            derived: up(self.derived),
        }
    }
}

#[derive(Debug, Clone)]
pub struct OslaVerdict {
    pub symmetric: bool,
    pub kind: OslaType,
    pub residual: f64,
    pub irreducibility: Option<Irreducibility>,
    pub witnesses: OslaWitnesses,
    pub note: Option<String>,
}

fn scale(l: &LieAlgebra) -> f64 {
    l.max_structure_constant().max(1.0)
}

pub fn classify(input: &OslaInput<'_>, tol: f64) -> Result<OslaVerdict> {
    classify_seeded(input, tol, DEFAULT_SEED)
}

/// `classify` with an explicit seed for the randomized irreducibility probe.
pub fn classify_seeded(input: &OslaInput<'_>, tol: f64, seed: u64) -> Result<OslaVerdict> {
    let l = input.l;
    let z = l.center(tol);
    if z.dim() > 1 {
        return Err(input_err!("hypothesis failed: dim z(l) = {} exceeds 1", z.dim()));
    }
    let residual = symmetric_residual(input);
    if residual.is_nan() || residual / scale(l) >= tol {
        return Ok(OslaVerdict {
            symmetric: false,
            kind: OslaType::NotSymmetric,
            residual,
            irreducibility: None,
            witnesses: OslaWitnesses::default(),
            note: None,
        });
    }
    let q = decomp::compact_inner_product(l, tol)?;
    let fq = input.f.basis().transpose() * &q * input.f.basis();
    let rep = decomp::isotropy_irreducible(l, &input.k, &input.f, DEFAULT_TRIALS, seed, Some(&fq), tol)?;
    if rep.verdict != Irreducibility::Irreducible {
        return Err(input_err!(
            "hypothesis failed: ad(k) on f is {} (commutant dimension {})",
            rep.verdict.as_str(),
            rep.commutant_dim
        ));
    }
    let mut v = classify_symmetric(input, tol)?;
    v.residual = residual;
    v.irreducibility = Some(rep.verdict);
    Ok(v)
}

fn verdict(kind: OslaType, witnesses: OslaWitnesses) -> OslaVerdict {
    OslaVerdict { symmetric: true, kind, residual: 0.0, irreducibility: None, witnesses, note: None }
}

fn classify_symmetric(input: &OslaInput<'_>, tol: f64) -> Result<OslaVerdict> {
    let l = input.l;
    let u = l.maximal_ideal_in(&input.k, tol)?;
    if l.is_semisimple(tol) {
        if u.dim() == 0 {
            return Ok(verdict(OslaType::S1, OslaWitnesses { maximal_ideal: Some(u), ..Default::default() }));
        }
        let tilde = l.killing_form().orthogonal_complement(&u, tol);
        if !tilde.contains_subspace(&input.f, tol) {
            return Err(Error::Consistency("f is not contained in the complement of the maximal ideal".into()));
        }
        return Ok(verdict(
            OslaType::S2,
            OslaWitnesses { maximal_ideal: Some(u), reduced_ideal: Some(tilde), ..Default::default() },
        ));
    }
    let z = l.center(tol);
    let lm = l.derived_ideal(tol);
    // f is ad(k)-irreducible, so it lies in z(l) or in [l,l].
    if z.contains_subspace(&input.f, tol) {
        let mut v = verdict(
            OslaType::NS0,
            OslaWitnesses { maximal_ideal: Some(u.clone()), center: Some(z.clone()), derived: Some(lm), ..Default::default() },
        );
        if !(input.f.dim() == 1 && z.equals(&input.f, tol)) {
            return Err(Error::Consistency(format!(
                "f lies in the center but dim f = {} and dim z = {}",
                input.f.dim(),
                z.dim()
            )));
        }
        if u.dim() > 0 {
            v.note = Some(format!("k contains an ideal of dimension {}; type taken from l / u", u.dim()));
        }
        return Ok(v);
    }
    if !lm.contains_subspace(&input.f, tol) {
        return Err(Error::Consistency("f meets neither the center nor [l,l] cleanly".into()));
    }
    if u.dim() == 0 {
        return Err(Error::Consistency("effective pair with f inside [l,l]".into()));
    }
    let sub = l.subalgebra(&lm, format!("[{0},{0}]", l.name()), tol)?;
    let k_m = input.k.intersection(&lm, tol).coords_in(&lm, tol)?;
    let f_m = input.f.coords_in(&lm, tol)?;
    let inner = OslaInput::with_complement(&sub, k_m, f_m, tol)?;
    let v = classify_symmetric(&inner, tol)?;
    let kind = match v.kind {
        OslaType::S1 => OslaType::NS1,
        OslaType::S2 => OslaType::NS2,
        other => {
            return Err(Error::Consistency(format!("[l,l] classified as {}", other.as_str())));
        }
    };
    let mut w = OslaWitnesses { reduced_ideal: v.witnesses.reduced_ideal, ..Default::default() }.lifted(&lm);
    w.maximal_ideal = Some(u);
    w.center = Some(z);
    w.derived = Some(lm);
    Ok(verdict(kind, w))
}
