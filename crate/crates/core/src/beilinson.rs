//! Exterior algebra over `F_p` with wedge and contraction, and the terms of
//! the Beilinson monad of a sheaf read off its cohomology table.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::chernrr::ChernVector;
use crate::error::{Error, Result};
use crate::exactfield::{binom, rank, subsets, Field, FieldElem, Matrix};
use crate::freecomplex::chi_line;
use crate::sheafcoh::CohTable;

/// Homogeneous element of `Λ^grade` of a `dim`-dimensional space, keyed by
/// the bitmask of its basis indices. The same type serves for the dual space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtElement {
    dim: usize,
    grade: usize,
    coeffs: BTreeMap<u64, FieldElem>,
}

fn mask_of(idx: &[usize]) -> u64 {
    idx.iter().fold(0, |m, &i| m | (1 << i))
}

/// Sign of concatenating the sorted index sets `a` and `b` into sorted order.
fn shuffle_sign(a: u64, b: u64) -> bool {
    let mut inversions = 0u32;
    let mut rest = a;
    while rest != 0 {
        let i = rest.trailing_zeros();
        inversions += (b & ((1u64 << i) - 1)).count_ones();
        rest &= rest - 1;
    }
    inversions % 2 == 1
}

fn submasks_of_size(m: u64, k: usize) -> impl Iterator<Item = u64> {
    let bits: Vec<usize> = (0..64).filter(|&i| m >> i & 1 == 1).collect();
    subsets(bits.len(), k).into_iter().map(move |s| s.iter().fold(0u64, |acc, &j| acc | (1 << bits[j])))
}

impl ExtElement {
    pub fn zero(dim: usize, grade: usize) -> Self {
        assert!(dim < 64, "dimension must be below 64");
        ExtElement { dim, grade, coeffs: BTreeMap::new() }
    }

    /// `e_{i_1} ∧ … ∧ e_{i_k}` in the given (not necessarily sorted) order.
    pub fn basis(f: Field, dim: usize, idx: &[usize]) -> Result<Self> {
        let mut out = ExtElement::zero(dim, idx.len());
        if idx.iter().any(|&i| i >= dim) {
            return Err(Error::Domain(format!("index outside 0..{dim}")));
        }
        let mut v = idx.to_vec();
        let mut odd = false;
        for i in 0..v.len() {
            for j in 0..v.len() - 1 - i {
                if v[j] > v[j + 1] {
                    v.swap(j, j + 1);
                    odd = !odd;
                }
            }
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Ok(out);
        }
        out.coeffs.insert(mask_of(&v), if odd { f.neg(1) } else { 1 });
        Ok(out)
    }

    pub fn random<R: Rng>(f: Field, dim: usize, grade: usize, rng: &mut R) -> Self {
        let mut out = ExtElement::zero(dim, grade);
        for s in subsets(dim, grade) {
            let c = rng.gen_range(0..f.p());
            if c != 0 {
                out.coeffs.insert(mask_of(&s), c);
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `e_S` for sorted `S`.
    pub fn coeff(&self, idx: &[usize]) -> FieldElem {
        self.coeffs.get(&mask_of(idx)).copied().unwrap_or(0)
    }

    /// Sorted index sets with their nonzero coefficients.
    pub fn terms(&self) -> Vec<(Vec<usize>, FieldElem)> {
        self.coeffs.iter().map(|(&m, &c)| ((0..self.dim).filter(|&i| m >> i & 1 == 1).collect(), c)).collect()
    }

    fn insert_add(&mut self, f: Field, m: u64, c: FieldElem) {
        let e = self.coeffs.entry(m).or_insert(0);
        *e = f.add(*e, c);
        if *e == 0 {
            self.coeffs.remove(&m);
        }
    }

    fn check_dims(&self, other: &ExtElement) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::Shape(format!("exterior algebras of dimension {} and {}", self.dim, other.dim)));
        }
        Ok(())
    }

    pub fn add(&self, f: Field, other: &ExtElement) -> Result<ExtElement> {
        self.check_dims(other)?;
        if self.grade != other.grade {
            return Err(Error::Grade(format!("adding grades {} and {}", self.grade, other.grade)));
        }
        let mut out = self.clone();
        for (&m, &c) in &other.coeffs {
            out.insert_add(f, m, c);
        }
        Ok(out)
    }

    pub fn scale(&self, f: Field, c: FieldElem) -> ExtElement {
        let mut out = ExtElement::zero(self.dim, self.grade);
        for (&m, &v) in &self.coeffs {
            out.insert_add(f, m, f.mul(v, c));
        }
        out
    }

    pub fn wedge(&self, f: Field, other: &ExtElement) -> Result<ExtElement> {
        self.check_dims(other)?;
        let mut out = ExtElement::zero(self.dim, self.grade + other.grade);
        for (&a, &x) in &self.coeffs {
            for (&b, &y) in &other.coeffs {
                if a & b != 0 {
                    continue;
                }
                let v = f.mul(x, y);
                out.insert_add(f, a | b, if shuffle_sign(a, b) { f.neg(v) } else { v });
            }
        }
        Ok(out)
    }
}

/// `φ·ω` for `φ ∈ Λ^{p+q} V*` and `ω ∈ Λ^p V`, an element of `Λ^q V*`:
/// the transpose of `ω ∧ −`.
pub fn contract(f: Field, phi: &ExtElement, omega: &ExtElement) -> Result<ExtElement> {
    phi.check_dims(omega)?;
    if phi.grade < omega.grade {
        return Err(Error::Grade(format!("contracting grade {} by grade {}", phi.grade, omega.grade)));
    }
    let p = omega.grade;
    let mut out = ExtElement::zero(phi.dim, phi.grade - p);
    for (&s, &c) in &phi.coeffs {
        for s1 in submasks_of_size(s, p) {
            let Some(&w) = omega.coeffs.get(&s1) else { continue };
            let s2 = s & !s1;
            let v = f.mul(c, w);
            out.insert_add(f, s2, if shuffle_sign(s1, s2) { f.neg(v) } else { v });
        }
    }
    Ok(out)
}

/// Matrix of `ω ∧ −: Λ^q → Λ^{q+grade ω}` in the lexicographic subset bases.
pub fn wedge_matrix(f: Field, omega: &ExtElement, q: usize) -> Matrix {
    let n = omega.dim;
    let src = subsets(n, q);
    let tgt = subsets(n, q + omega.grade);
    let row_of: BTreeMap<u64, usize> = tgt.iter().enumerate().map(|(i, s)| (mask_of(s), i)).collect();
    let mut m = Matrix::zeros(tgt.len(), src.len());
    for (j, s) in src.iter().enumerate() {
        let x = ExtElement::basis(f, n, s).expect("indices in range");
        let img = omega.wedge(f, &x).expect("same dimension");
        for (&mask, &c) in &img.coeffs {
            m.set(row_of[&mask], j, c);
        }
    }
    m
}

pub fn wedge_map_rank(f: Field, omega: &ExtElement, q: usize) -> usize {
    rank(f, &wedge_matrix(f, omega, q))
}

/// Rank of the skew-symmetric matrix of `ω ∈ Λ^2 V`.
pub fn skew_rank(f: Field, omega: &ExtElement) -> Result<usize> {
    if omega.grade != 2 {
        return Err(Error::Grade(format!("skew rank needs grade 2, got {}", omega.grade)));
    }
    let n = omega.dim;
    let mut m = Matrix::zeros(n, n);
    for (idx, c) in omega.terms() {
        m.set(idx[0], idx[1], c);
        m.set(idx[1], idx[0], f.neg(c));
    }
    Ok(rank(f, &m))
}

/// Terms `C^p = ⊕ h·Ω^i(i)` of a monad, as `(multiplicity, i)` per position.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MonadShape {
    pub n: usize,
    pub terms: BTreeMap<i64, Vec<(i64, usize)>>,
}

impl MonadShape {
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn rank_at(&self, p: i64) -> i64 {
        self.terms.get(&p).map_or(0, |ts| ts.iter().map(|&(h, i)| h * binom(self.n as i64, i as i64)).sum())
    }

    /// `Σ_p (−1)^p χ(C^p(l))`.
    pub fn chi(&self, l: i64) -> i128 {
        let mut acc = 0;
        for (&p, ts) in &self.terms {
            let sign = if p.rem_euclid(2) == 0 { 1 } else { -1 };
            for &(h, i) in ts {
                acc += sign * h as i128 * omega_chi(self.n, i, l);
            }
        }
        acc
    }

    /// Chern classes of the alternating sum of the terms.
    pub fn chern(&self) -> ChernVector {
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for (&p, ts) in &self.terms {
            for &(h, i) in ts {
                for j in 0..=i {
                    let mult = h * binom(self.n as i64 + 1, (i - j) as i64);
                    let side = if (p + j as i64).rem_euclid(2) == 0 { &mut pos } else { &mut neg };
                    side.extend(std::iter::repeat(j as i64).take(mult as usize));
                }
            }
        }
        ChernVector::line_sum(self.n, &pos).kernel_of(&ChernVector::line_sum(self.n, &neg))
    }
}

fn term_text(h: i64, i: usize) -> String {
    let base = if i == 0 { "O".to_string() } else { format!("Ω^{i}({i})") };
    if h == 1 {
        base
    } else {
        format!("{base}^{h}")
    }
}

impl fmt::Display for MonadShape {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        let parts: Vec<String> = self
            .terms
            .values()
            .map(|ts| ts.iter().map(|&(h, i)| term_text(h, i)).collect::<Vec<_>>().join(" ⊕ "))
            .collect();
        write!(out, "{}", parts.join(" → "))
    }
}

/// `χ(Ω^i(i) ⊗ O(l))` on `P^n`, from `[Ω^i(i)] = Σ_j (−1)^j C(n+1, i−j) [O(j)]`.
pub fn omega_chi(n: usize, i: usize, l: i64) -> i128 {
    (0..=i)
        .map(|j| {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * binom(n as i64 + 1, (i - j) as i64) as i128 * chi_line(n as i64, j as i64 + l)
        })
        .sum()
}

/// Beilinson terms of `F = E(twist)` where `table` is the table of `E`:
/// `C^p = ⊕_{j ≥ p} H^j(F(p − j)) ⊗ Ω^{j−p}(j−p)`.
pub fn beilinson_terms(table: &CohTable, twist: i64) -> Result<MonadShape> {
    let n = table.n as i64;
    let mut shape = MonadShape { n: table.n, terms: BTreeMap::new() };
    for p in -n..=n {
        let mut ts = Vec::new();
        for j in p.max(0)..=n.min(p + n) {
            let l = twist + p - j;
            let cell = table
                .cell(j as usize, l)
                .ok_or_else(|| Error::Table(format!("h^{j}(E({l})) is outside the window {:?}", table.window)))?;
            let h = cell
                .value()
                .ok_or_else(|| Error::Table(format!("h^{j}(E({l})) is only known to lie in [{}, {}]", cell.lo, cell.hi)))?;
            if h > 0 {
                ts.push((h, (j - p) as usize));
            }
        }
        if !ts.is_empty() {
            ts.sort_by(|a, b| b.1.cmp(&a.1));
            shape.terms.insert(p, ts);
        }
    }
    Ok(shape)
}

/// Restriction of `Ω^p_{P^n}(p)` to a linear `P^{n'}`: pairs `(i, C(n − n', p − i))`.
pub fn omega_restriction(p: usize, n: usize, n_sub: usize) -> Result<Vec<(usize, u64)>> {
    if p > n || n_sub >= n {
        return Err(Error::Domain(format!("need p ≤ n and n' < n, got p={p}, n={n}, n'={n_sub}")));
    }
    let codim = n - n_sub;
    Ok((p.saturating_sub(codim)..=p.min(n_sub)).rev().map(|i| (i, binom(codim as i64, (p - i) as i64) as u64)).collect())
}
