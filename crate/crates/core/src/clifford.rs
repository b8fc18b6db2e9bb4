//! Complex Clifford algebra of an `n`-dimensional Euclidean space acting on
//! spinors `C^(2^floor(n/2))`.
//!
//! Elements are stored as sums of Pauli strings over `floor(n/2)` qubits,
//! which keeps products cheap for large `n`; dense matrices are produced on
//! request. Generators, with `Z^j` the string of `Z` on the first `j` qubits:
//!
//! * `gamma_{2j}   = i Z^j X_j`
//! * `gamma_{2j+1} = i Z^j Y_j`
//! * `gamma_{n-1}  = -i Z^(n/2)` for odd `n`.
//!
//! For `n = 3` every Pauli letter is relabelled `X -> Z`, `Y -> X`, `Z -> Y`,
//! giving `gamma = (diag(i,-i), [[0,i],[i,0]], [[0,-1],[1,0]])`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use nalgebra::{ComplexField, Complex};

use crate::error::{input_err, Result};
use crate::linalg::{self, CMat, C64};

/// Tensor product of single-qubit Paulis: qubit `q` carries `I`, `X`, `Z`
/// or `Y` for `(x_q, z_q)` = `(0,0)`, `(1,0)`, `(0,1)`, `(1,1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString {
    pub x: u64,
    pub z: u64,
}

impl PauliString {
    pub const IDENTITY: PauliString = PauliString { x: 0, z: 0 };

    /// `self * other = i^phase * PauliString`.
    pub fn mul(self, other: PauliString) -> (u32, PauliString) {
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let e = (self.x & self.z).count_ones() as i64
            + (other.x & other.z).count_ones() as i64
            + 2 * (self.z & other.x).count_ones() as i64
            - (x & z).count_ones() as i64;
        (e.rem_euclid(4) as u32, PauliString { x, z })
    }

    pub fn weight(self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn to_dense(self, qubits: usize) -> CMat {
        let one = Complex::new(1.0, 0.0);
        let zero = Complex::new(0.0, 0.0);
        let i = Complex::new(0.0, 1.0);
        let mut out = CMat::from_element(1, 1, one);
        for q in 0..qubits {
            let p = match ((self.x >> q) & 1, (self.z >> q) & 1) {
                (0, 0) => CMat::from_row_slice(2, 2, &[one, zero, zero, one]),
                (1, 0) => CMat::from_row_slice(2, 2, &[zero, one, one, zero]),
                (0, 1) => CMat::from_row_slice(2, 2, &[one, zero, zero, -one]),
                _ => CMat::from_row_slice(2, 2, &[zero, -i, i, zero]),
            };
            out = out.kronecker(&p);
        }
        out
    }
}

fn i_pow(k: u32) -> C64 {
    match k % 4 {
        0 => Complex::new(1.0, 0.0),
        1 => Complex::new(0.0, 1.0),
        2 => Complex::new(-1.0, 0.0),
        _ => Complex::new(0.0, -1.0),
    }
}

/// An endomorphism of the spinor space as a combination of Pauli strings.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordElement {
    n: usize,
    terms: BTreeMap<PauliString, C64>,
}

impl CliffordElement {
    pub fn zero(n: usize) -> Self {
        CliffordElement { n, terms: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        CliffordElement::scalar(n, Complex::new(1.0, 0.0))
    }

    pub fn scalar(n: usize, c: C64) -> Self {
        let mut e = CliffordElement::zero(n);
        e.add_term(PauliString::IDENTITY, c);
        e
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliString, &C64)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, p: PauliString, c: C64) {
        if c.re == 0.0 && c.im == 0.0 {
            return;
        }
        let e = self.terms.entry(p).or_insert(Complex::new(0.0, 0.0));
        *e += c;
        if e.re == 0.0 && e.im == 0.0 {
            self.terms.remove(&p);
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(input_err!("Clifford elements from dimensions {} and {}", self.n, other.n));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(*p, *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Self {
        CliffordElement { n: self.n, terms: self.terms.iter().map(|(p, c)| (*p, c * s)).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex::new(s, 0.0))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = CliffordElement::zero(self.n);
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                let (ph, r) = p.mul(*q);
                out.add_term(r, a * b * i_pow(ph));
            }
        }
        Ok(out)
    }

    /// Largest coefficient modulus in the Pauli expansion.
    pub fn max_coefficient(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.modulus()))
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_coefficient() < tol
    }

    pub fn to_dense(&self) -> CMat {
        let q = self.n / 2;
        let d = 1usize << q;
        let mut out = CMat::zeros(d, d);
        for (p, c) in &self.terms {
            out += p.to_dense(q) * *c;
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct CliffordContext {
    pub n: usize,
    pub delta_dim: usize,
    pub gammas: Vec<CliffordElement>,
}

fn relabel_n3(p: PauliString) -> PauliString {
    // X -> Z, Y -> X, Z -> Y on one qubit.
    match (p.x & 1, p.z & 1) {
        (1, 0) => PauliString { x: 0, z: 1 },
        (1, 1) => PauliString { x: 1, z: 0 },
        (0, 1) => PauliString { x: 1, z: 1 },
        _ => p,
    }
}

pub fn build_clifford(n: usize) -> CliffordContext {
    assert!(n < 128, "Clifford dimension {n} too large");
    let qubits = n / 2;
    let i = Complex::new(0.0, 1.0);
    let mut gammas = Vec::with_capacity(n);
    for j in 0..qubits {
        let zs = (1u64 << j) - 1;
        let bit = 1u64 << j;
        for (x, z) in [(bit, zs), (bit, zs | bit)] {
            let mut e = CliffordElement::zero(n);
            e.add_term(PauliString { x, z }, i);
            gammas.push(e);
        }
    }
    if n % 2 == 1 {
        let zs = if qubits == 0 { 0 } else { (1u64 << qubits) - 1 };
        let mut e = CliffordElement::zero(n);
        e.add_term(PauliString { x: 0, z: zs }, -i);
        gammas.push(e);
    }
    if n == 3 {
        for g in &mut gammas {
            g.terms = g.terms.iter().map(|(p, c)| (relabel_n3(*p), *c)).collect();
        }
    }
    CliffordContext { n, delta_dim: 1usize << qubits, gammas }
}

impl CliffordContext {
    pub fn gamma(&self, i: usize) -> &CliffordElement {
        &self.gammas[i]
    }

    pub fn identity(&self) -> CliffordElement {
        CliffordElement::identity(self.n)
    }

    /// `sum x_i gamma_i` for coordinates in an orthonormal basis.
    pub fn embed_vector(&self, x: &[f64]) -> Result<CliffordElement> {
        if x.len() != self.n {
            return Err(input_err!("vector of length {} in a Clifford algebra of dimension {}", x.len(), self.n));
        }
        let mut out = CliffordElement::zero(self.n);
        for (g, &c) in self.gammas.iter().zip(x) {
            for (p, v) in &g.terms {
                out.add_term(*p, v * c);
            }
        }
        Ok(out)
    }

    /// `gamma_i gamma_j gamma_k`.
    pub fn triple(&self, i: usize, j: usize, k: usize) -> CliffordElement {
        let ij = self.gammas[i].mul(&self.gammas[j]).expect("same context");
        ij.mul(&self.gammas[k]).expect("same context")
    }

    pub fn dense_gammas(&self) -> Vec<CMat> {
        self.gammas.iter().map(CliffordElement::to_dense).collect()
    }

    /// `max |gamma_i gamma_j + gamma_j gamma_i + 2 delta_ij I|` on dense matrices.
    pub fn anticommutator_residual(&self) -> f64 {
        let g = self.dense_gammas();
        let id = CMat::identity(self.delta_dim, self.delta_dim);
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i..self.n {
                let mut a = &g[i] * &g[j] + &g[j] * &g[i];
                if i == j {
                    a += &id * Complex::new(2.0, 0.0);
                }
                worst = worst.max(linalg::cmax_abs(&a));
            }
        }
        worst
    }

    /// Whether the `gamma_i` and the `gamma_i gamma_j gamma_k` (`i<j<k`) are
    /// linearly independent endomorphisms.
    pub fn monomial_independence(&self) -> Result<bool> {
        if self.n < 3 {
            return Err(input_err!("degenerate for n = {}; n = 2 is handled separately", self.n));
        }
        let mut family: Vec<CMat> = self.dense_gammas();
        for i in 0..self.n {
            for j in i + 1..self.n {
                for k in j + 1..self.n {
                    family.push(self.triple(i, j, k).to_dense());
                }
            }
        }
        let d2 = self.delta_dim * self.delta_dim;
        let mut flat = CMat::zeros(d2, family.len());
        for (c, m) in family.iter().enumerate() {
            for (r, v) in m.iter().enumerate() {
                flat[(r, c)] = *v;
            }
        }
        Ok(linalg::crank(&flat, 1e-9) == family.len())
    }
}
