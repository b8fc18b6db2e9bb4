//! Subalgebras of the compact part `l`: generator sets, centralizers and the
//! named patterns used by the tables' `K` columns.

use alloc::format;
use alloc::vec::Vec;

use super::spec::{split_top, Family};
use super::{c, ci, place, Built, Summand};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, Vector, C64};
use crate::subspace::Subspace;

fn unit(n: usize, r: usize, col: usize, v: C64) -> CMat {
    let mut m = CMat::zeros(n, n);
    m[(r, col)] = v;
    m
}

/// `E_ij - E_ji`, `i < j`.
pub fn so_gens(n: usize) -> Vec<CMat> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(unit(n, i, j, c(1.0)) + unit(n, j, i, c(-1.0)));
        }
    }
    out
}

/// Real-skew, imaginary-symmetric and imaginary traceless diagonal generators.
pub fn su_gens(n: usize) -> Vec<CMat> {
    let mut out = so_gens(n);
    for i in 0..n {
        for j in i + 1..n {
            out.push(unit(n, i, j, ci(1.0)) + unit(n, j, i, ci(1.0)));
        }
    }
    for k in 0..n.saturating_sub(1) {
        out.push(unit(n, k, k, ci(1.0)) + unit(n, k + 1, k + 1, ci(-1.0)));
    }
    out
}

pub fn u_gens(n: usize) -> Vec<CMat> {
    let mut out = su_gens(n);
    if n > 0 {
        out.push(CMat::identity(n, n) * ci(1.0));
    }
    out
}

/// Compact `sp(m)` in `2m x 2m` matrices `[[A, B], [-conj(B), conj(A)]]`.
pub fn sp_gens(m: usize) -> Vec<CMat> {
    let mut out: Vec<CMat> = u_gens(m).iter().map(conj_pair).collect();
    let n = 2 * m;
    for i in 0..m {
        for j in i..m {
            let mut s = CMat::zeros(n, n);
            s[(i, m + j)] = c(1.0);
            s[(j, m + i)] = c(1.0);
            s[(m + i, j)] = c(-1.0);
            s[(m + j, i)] = c(-1.0);
            out.push(s);
            let mut t = CMat::zeros(n, n);
            t[(i, m + j)] = ci(1.0);
            t[(j, m + i)] = ci(1.0);
            t[(m + i, j)] = ci(1.0);
            t[(m + j, i)] = ci(1.0);
            out.push(t);
        }
    }
    out
}

/// `diag(Z, conj(Z))`.
pub fn conj_pair(z: &CMat) -> CMat {
    let n = z.nrows();
    let mut m = CMat::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(z);
    m.view_mut((n, n), (n, n)).copy_from(&z.map(|x| x.conj()));
    m
}

/// Real form `[[Re Z, -Im Z], [Im Z, Re Z]]` of a complex matrix.
pub fn complex_to_real(z: &CMat) -> CMat {
    let n = z.nrows();
    let mut m = CMat::zeros(2 * n, 2 * n);
    for r in 0..n {
        for col in 0..n {
            let v = z[(r, col)];
            m[(r, col)] = c(v.re);
            m[(r, n + col)] = c(-v.im);
            m[(n + r, col)] = c(v.im);
            m[(n + r, n + col)] = c(v.re);
        }
    }
    m
}

/// `[[0, -I], [I, 0]]` of size `2m`.
pub fn j_matrix(m: usize) -> CMat {
    let mut j = CMat::zeros(2 * m, 2 * m);
    for i in 0..m {
        j[(i, m + i)] = c(-1.0);
        j[(m + i, i)] = c(1.0);
    }
    j
}

pub fn diag_labels(d: &[f64]) -> CMat {
    let n = d.len();
    CMat::from_fn(n, n, |r, col| if r == col { c(d[r]) } else { c(0.0) })
}

pub fn embed_block(block: &CMat, offset: usize, n: usize) -> CMat {
    place(block, offset, n)
}

/// Place a `2m x 2m` quaternionic-form matrix on indices
/// `offset..offset+m` and `half+offset..half+offset+m` of a `2 half` matrix.
pub fn place_quaternionic(g: &CMat, offset: usize, half: usize) -> CMat {
    let m = g.nrows() / 2;
    let idx = |a: usize| if a < m { offset + a } else { half + offset + a - m };
    let mut out = CMat::zeros(2 * half, 2 * half);
    for r in 0..2 * m {
        for col in 0..2 * m {
            out[(idx(r), idx(col))] = g[(r, col)];
        }
    }
    out
}

impl Built {
    /// Compact part of one summand (its leading basis elements).
    pub fn summand_compact(&self, s: &Summand) -> Subspace {
        let n = self.dim();
        let vs: Vec<Vector> = (0..s.compact_dim)
            .map(|i| {
                let mut v = Vector::zeros(n);
                v[s.basis_range.start + i] = 1.0;
                v
            })
            .collect();
        Subspace::from_vectors(n, &vs).expect("unit vectors")
    }

    fn matrices(&self, s: &Subspace) -> Vec<CMat> {
        s.vectors().iter().map(|v| self.matrix_of(v)).collect()
    }

    pub fn center_of(&self, s: &Subspace, tol: f64) -> Subspace {
        let mats = self.matrices(s);
        self.centralizer_in(s, &mats, tol)
    }

    pub fn derived_of(&self, s: &Subspace, tol: f64) -> Result<Subspace> {
        let mats = self.matrices(s);
        let mut comms = Vec::new();
        for i in 0..mats.len() {
            for j in i + 1..mats.len() {
                let cm = linalg::commutator(&mats[i], &mats[j]);
                if linalg::cmax_abs(&cm) > 1e-12 {
                    comms.push(cm);
                }
            }
        }
        if comms.is_empty() {
            return Ok(Subspace::zero(self.dim()));
        }
        self.span_of(&comms, tol)
    }

    /// Centralizer in `s` of a fixed generic element of `s`: a maximal torus.
    pub fn torus_of(&self, s: &Subspace, tol: f64) -> Subspace {
        if s.dim() == 0 {
            return s.clone();
        }
        let mut x = Vector::zeros(self.dim());
        for (i, v) in s.vectors().iter().enumerate() {
            let w = libm::sqrt(2.0 + i as f64) + 0.1 * (i as f64);
            x += v * w;
        }
        let m = self.matrix_of(&x);
        self.centralizer_in(s, &[m], tol)
    }

    fn diagonal_pair(&self) -> Result<Subspace> {
        let n = self.dim();
        if self.summands.len() != 2 || self.summands[0].spec != self.summands[1].spec {
            return Err(Error::Input("diagonal embedding needs two equal summands".into()));
        }
        let (a, b) = (&self.summands[0], &self.summands[1]);
        let vs: Vec<Vector> = (0..a.compact_dim)
            .map(|i| {
                let mut v = Vector::zeros(n);
                v[a.basis_range.start + i] = 1.0;
                v[b.basis_range.start + i] = 1.0;
                v
            })
            .collect();
        Subspace::from_vectors(n, &vs)
    }

    /// Named subalgebra of the `theta`-fixed part. Patterns: `0`, `full`,
    /// `center`, `derived`, `torus`, `diag`, a `+`-list with one entry per
    /// summand (group multi-block entries as `[so(2)+so(1)]`), or a family-specific block pattern such as `so(2)+so(1)`,
    /// `u(2)`, `s(u(2)+u(1))`, `su(2)+su(1)`, `sp(1)+sp(1)`.
    pub fn embed(&self, pattern: &str, tol: f64) -> Result<Subspace> {
        let l = self.fixed_set();
        let p = pattern.trim();
        match p {
            "0" => return Ok(Subspace::zero(self.dim())),
            "full" | "l" => return Ok(l),
            "center" => return Ok(self.center_of(&l, tol)),
            "derived" => return self.derived_of(&l, tol),
            "torus" => return Ok(self.torus_of(&l, tol)),
            "diag" => return self.diagonal_pair(),
            _ => {}
        }
        let expanded = normalize_pattern(p);
        let terms = split_top(&expanded);
        if self.summands.len() > 1 {
            if terms.len() != self.summands.len() {
                return Err(Error::Input(format!(
                    "pattern '{p}' needs one entry per summand ({})",
                    self.summands.len()
                )));
            }
            let mut acc = Subspace::zero(self.dim());
            for (s, t) in self.summands.iter().zip(terms.iter()) {
                let t = t.strip_prefix('[').and_then(|t| t.strip_suffix(']')).unwrap_or(t);
                let sub = self.embed_in_summand(s, &split_top(t), tol)?;
                acc = acc.sum(&sub, tol);
            }
            return Ok(acc);
        }
        match self.summands.first() {
            Some(s) => self.embed_in_summand(s, &terms, tol),
            None => Err(Error::Input(format!("pattern '{p}' in the zero algebra"))),
        }
    }

    /// Patterns inside a compact part isomorphic to `u(N)` or `su(N)`: a
    /// `+`-list of `u(a)`, `su(a)`, `so(a)`, `sp(a)`, `dsu(a)`, `dso(a)`
    /// blocks along the diagonal, plus `R` for the center of `l`.
    fn unitary_pattern(&self, s: &Summand, terms: &[&str], tol: f64) -> Result<Subspace> {
        use Family::*;
        let ls = self.summand_compact(s);
        let n = self.realization.matrix_dim;
        let off = s.matrix_offset;
        let rank = match s.spec.family {
            SoStar => s.matrix_size / 2,
            SpR => s.spec.p,
            _ => s.matrix_size,
        };
        let (gens, center) = unitary_generators(terms, rank)?;
        let traceless = matches!(s.spec.family, Su | SuPq | SlC);
        let mats: Vec<CMat> = gens
            .iter()
            .map(|g| {
                let g = if traceless {
                    let t = g.trace() / c(rank as f64);
                    g - CMat::identity(rank, rank) * t
                } else {
                    g.clone()
                };
                let g = match s.spec.family {
                    SoStar => conj_pair(&g),
                    SpR => complex_to_real(&g),
                    _ => g,
                };
                place(&g, off, n)
            })
            .filter(|m| linalg::cmax_abs(m) > 1e-14)
            .collect();
        let mut sub = if mats.is_empty() { Subspace::zero(self.dim()) } else { self.span_of(&mats, tol)? };
        if center {
            sub = sub.sum(&self.center_of(&ls, tol), tol);
        }
        self.check_subalgebra(&ls, sub, terms, tol)
    }

    fn diagonal_block(&self, s: &Summand, kind: &str, k: usize, tol: f64) -> Result<Subspace> {
        let ls = self.summand_compact(s);
        let n = self.realization.matrix_dim;
        let off = s.matrix_offset;
        let size = s.matrix_size;
        let mats: Vec<CMat> = match kind {
            "dso" if 2 * k == size => so_gens(k).iter().map(|g| place(&block_pair(g), off, n)).collect(),
            "dsp" if 4 * k == size => {
                let half = size / 2;
                sp_gens(k)
                    .iter()
                    .map(|g| place(&(place_quaternionic(g, 0, half) + place_quaternionic(g, k, half)), off, n))
                    .collect()
            }
            _ => {
                return Err(Error::Unsupported(format!("embedding '{kind}({k})' in {}", s.spec)));
            }
        };
        let sub = self.span_of(&mats, tol)?;
        self.check_subalgebra(&ls, sub, &[kind], tol)
    }

    fn check_subalgebra(&self, ls: &Subspace, sub: Subspace, terms: &[&str], tol: f64) -> Result<Subspace> {
        if !ls.contains_subspace(&sub, tol) {
            return Err(Error::Input(format!("pattern '{}' leaves the compact part", terms.join("+"))));
        }
        if !self.algebra.is_subalgebra(&sub, tol) {
            return Err(Error::Input(format!("pattern '{}' does not give a subalgebra", terms.join("+"))));
        }
        Ok(sub)
    }

    fn embed_in_summand(&self, s: &Summand, terms: &[&str], tol: f64) -> Result<Subspace> {
        let ls = self.summand_compact(s);
        let n = self.realization.matrix_dim;
        let off = s.matrix_offset;
        if terms.len() == 1 {
            match terms[0] {
                "0" => return Ok(Subspace::zero(self.dim())),
                "full" => return Ok(ls),
                "center" | "R" | "u(1)" if !matches!(s.spec.family, Family::Su | Family::SlC) => {
                    return Ok(self.center_of(&ls, tol))
                }
                "derived" => return self.derived_of(&ls, tol),
                "torus" => return Ok(self.torus_of(&ls, tol)),
                _ => {}
            }
        }
        let unsupported =
            || Error::Unsupported(format!("embedding '{}' in {}", terms.join("+"), s.spec));
        let size = s.matrix_size;
        if matches!(s.spec.family, Family::Su | Family::SuPq | Family::U | Family::SlC | Family::SoStar | Family::SpR) {
            return self.unitary_pattern(s, terms, tol);
        }
        if let [single] = terms {
            if let Ok((kind @ ("dso" | "dsp"), k)) = parse_block(single) {
                return self.diagonal_block(s, kind, k, tol);
            }
        }
        let parsed: Vec<(&str, usize)> = terms.iter().map(|t| parse_block(t)).collect::<Result<_>>()?;
        use Family::*;
        match s.spec.family {
            SlR | So | SoPq | SoC => {
                let mut d = CMat::zeros(size, size);
                let mut at = 0;
                for (idx, (kind, k)) in parsed.iter().enumerate() {
                    let label = c(1.0 + idx as f64);
                    let width = match *kind {
                        "so" => *k,
                        "u" => 2 * k,
                        _ => return Err(unsupported()),
                    };
                    if at + width > size {
                        return Err(Error::Input(format!("blocks exceed {}", s.spec)));
                    }
                    let block = if *kind == "so" {
                        CMat::identity(width, width) * label
                    } else {
                        j_matrix(*k) * label
                    };
                    d.view_mut((at, at), (width, width)).copy_from(&block);
                    at += width;
                }
                let mut next = parsed.len() as f64 + 1.0;
                while at < size {
                    d[(at, at)] = c(next);
                    next += 1.0;
                    at += 1;
                }
                Ok(self.centralizer_in(&ls, &[place(&d, off, n)], tol))
            }
            Su | SuPq | U | SlC | SoStar | SpR => self.unitary_pattern(s, terms, tol),
            SpCompact | SpC | SpPq => {
                let half = size / 2;
                let mut first = Vec::new();
                let mut second = Vec::new();
                for (idx, (kind, k)) in parsed.iter().enumerate() {
                    let lab = 1.0 + idx as f64;
                    let sign = match *kind {
                        "sp" => 1.0,
                        "u" => -1.0,
                        _ => return Err(unsupported()),
                    };
                    first.extend(core::iter::repeat_n(lab, *k));
                    second.extend(core::iter::repeat_n(sign * lab, *k));
                }
                if first.len() != half {
                    return Err(Error::Input(format!("block sizes must add up to {half}")));
                }
                first.extend(second);
                Ok(self.centralizer_in(&ls, &[place(&diag_labels(&first), off, n)], tol))
            }
            _ => Err(unsupported()),
        }
    }
}

fn block_pair(g: &CMat) -> CMat {
    let k = g.nrows();
    let mut m = CMat::zeros(2 * k, 2 * k);
    m.view_mut((0, 0), (k, k)).copy_from(g);
    m.view_mut((k, k), (k, k)).copy_from(g);
    m
}

/// Generators in `u(size)` for a block list, and whether `R` was requested.
fn unitary_generators(terms: &[&str], size: usize) -> Result<(Vec<CMat>, bool)> {
    let mut gens = Vec::new();
    let mut center = false;
    let mut at = 0;
    for t in terms {
        let t = t.trim();
        if t == "R" {
            center = true;
            continue;
        }
        let (kind, k) = parse_block(t)?;
        let (blocks, width) = match kind {
            "u" => (u_gens(k), k),
            "su" => (su_gens(k), k),
            "so" => (so_gens(k), k),
            "sp" => (sp_gens(k), 2 * k),
            "dsu" => (su_gens(k).iter().map(block_pair).collect(), 2 * k),
            "dso" => (so_gens(k).iter().map(block_pair).collect(), 2 * k),
            _ => return Err(Error::Unsupported(format!("block '{t}' in a unitary compact part"))),
        };
        if at + width > size {
            return Err(Error::Input(format!("blocks exceed size {size}")));
        }
        gens.extend(blocks.iter().map(|m| place(m, at, size)));
        at += width;
    }
    if at != size {
        return Err(Error::Input(format!("block sizes must add up to {size}")));
    }
    Ok((gens, center))
}


/// `"so(3)" -> ("so", 3)`.
fn parse_block(t: &str) -> Result<(&str, usize)> {
    let t = t.trim();
    let open = t.find('(').ok_or_else(|| Error::Parse(format!("unrecognised block '{t}'")))?;
    let head = &t[..open];
    let arg = t[open + 1..].trim_end_matches(')');
    let k = arg
        .trim()
        .parse::<usize>()
        .map_err(|_| Error::Parse(format!("unrecognised block '{t}'")))?;
    Ok((head, k))
}

/// Expand `s(u(a)+u(b)+...)` into `u(a)+u(b)+...`; other patterns unchanged.
pub fn normalize_pattern(p: &str) -> alloc::string::String {
    let t = p.trim();
    if let Some(inner) = t.strip_prefix("s(").and_then(|x| x.strip_suffix(')')) {
        return inner.into();
    }
    t.into()
}

#[cfg(test)]
mod tests {
    use super::super::build;
    use super::*;

    const TOL: f64 = 1e-9;

    #[test]
    fn sl3_so2() {
        let g = build("sl(3,R)").unwrap();
        let k = g.embed("so(2)+so(1)", TOL).unwrap();
        assert_eq!(k.dim(), 1);
        assert!(g.algebra.is_subalgebra(&k, TOL));
        assert!(g.fixed_set().contains_subspace(&k, TOL));
    }

    #[test]
    fn full_is_fixed_set() {
        let g = build("su(2,1)").unwrap();
        assert_eq!(g.embed("full", TOL).unwrap().dim(), 4);
        assert_eq!(g.embed("center", TOL).unwrap().dim(), 1);
        assert_eq!(g.embed("derived", TOL).unwrap().dim(), 3);
    }

    #[test]
    fn diagonal_su2() {
        let g = build("su(2)+su(2)").unwrap();
        let d = g.embed("diag", TOL).unwrap();
        assert_eq!(d.dim(), 3);
        assert!(g.algebra.is_subalgebra(&d, TOL));
    }

    #[test]
    fn unitary_and_symplectic_patterns() {
        let g = build("so(6)").unwrap();
        assert_eq!(g.embed("u(3)", TOL).unwrap().dim(), 9);
        let s = build("sp(2)").unwrap();
        assert_eq!(s.embed("u(2)", TOL).unwrap().dim(), 4);
        assert_eq!(s.embed("sp(1)+sp(1)", TOL).unwrap().dim(), 6);
        let su = build("su(3)").unwrap();
        assert_eq!(su.embed("s(u(2)+u(1))", TOL).unwrap().dim(), 4);
        assert_eq!(su.embed("su(2)+su(1)", TOL).unwrap().dim(), 3);
        assert_eq!(su.embed("so(3)", TOL).unwrap().dim(), 3);
        assert_eq!(su.embed("torus", TOL).unwrap().dim(), 2);
        let su4 = build("su(4)").unwrap();
        assert_eq!(su4.embed("sp(2)", TOL).unwrap().dim(), 10);
    }

    #[test]
    fn per_summand_lists() {
        let g = build("R+su(2)+su(2)").unwrap();
        let k = g.embed("full+full+torus", TOL).unwrap();
        assert_eq!(k.dim(), 5);
        assert!(g.algebra.is_subalgebra(&k, TOL));
    }

    #[test]
    fn sp_gens_are_compact_symplectic() {
        let g = build("sp(2)").unwrap();
        for m in sp_gens(2) {
            assert!(g.coords_of(&m).is_ok());
        }
        assert_eq!(sp_gens(2).len(), 10);
    }
}
