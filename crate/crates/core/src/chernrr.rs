//! Chern classes modulo `H^{n+1}`, Riemann–Roch on low-dimensional projective
//! spaces and the numerical constraints on globally generated bundles.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freecomplex::{chi_line, FreeComplex};

type Q = Ratio<i128>;

/// Rank and Chern classes `c_1..c_n` of a (virtual) sheaf on `P^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChernVector {
    pub n: usize,
    pub rank: i64,
    pub c: Vec<i64>,
}

impl ChernVector {
    /// Pads or truncates `c` to length `n`.
    pub fn new(n: usize, rank: i64, mut c: Vec<i64>) -> Self {
        c.resize(n, 0);
        ChernVector { n, rank, c }
    }

    pub fn trivial(n: usize, rank: i64) -> Self {
        ChernVector::new(n, rank, Vec::new())
    }

    pub fn line(n: usize, a: i64) -> Self {
        ChernVector::new(n, 1, vec![a])
    }

    pub fn line_sum(n: usize, twists: &[i64]) -> Self {
        twists.iter().fold(ChernVector::trivial(n, 0), |acc, &a| acc.sum(&ChernVector::line(n, a)))
    }

    /// `c_i`, with `c_0 = 1` and zero beyond `n`.
    pub fn ci(&self, i: usize) -> i64 {
        match i {
            0 => 1,
            i if i <= self.n => self.c[i - 1],
            _ => 0,
        }
    }

    /// Total Chern class `[1, c_1, …, c_n]`.
    pub fn total(&self) -> Vec<i64> {
        (0..=self.n).map(|i| self.ci(i)).collect()
    }

    fn from_total(n: usize, rank: i64, t: &[i64]) -> Self {
        ChernVector::new(n, rank, t[1..].to_vec())
    }

    /// Whitney sum.
    pub fn sum(&self, other: &ChernVector) -> ChernVector {
        let t = trunc_mul(&self.total(), &other.total());
        ChernVector::from_total(self.n, self.rank + other.rank, &t)
    }

    /// The class `A` with `0 → A → self → b → 0`.
    pub fn kernel_of(&self, b: &ChernVector) -> ChernVector {
        let t = trunc_mul(&self.total(), &trunc_inv(&b.total()));
        ChernVector::from_total(self.n, self.rank - b.rank, &t)
    }

    /// The class `C` with `0 → a → self → C → 0`.
    pub fn quotient_by(&self, a: &ChernVector) -> ChernVector {
        self.kernel_of(a)
    }

    pub fn dual(&self) -> ChernVector {
        let c = self.c.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { -x } else { x }).collect();
        ChernVector { n: self.n, rank: self.rank, c }
    }

    /// `c_k(E(l)) = Σ_i C(r−i, k−i) c_i l^{k−i}` with the polynomial binomial,
    /// valid for virtual classes.
    pub fn twist(&self, l: i64) -> ChernVector {
        let c = (1..=self.n)
            .map(|k| {
                (0..=k)
                    .map(|i| poly_binom(self.rank - i as i64, (k - i) as i64) * self.ci(i) as i128 * (l as i128).pow((k - i) as u32))
                    .sum::<i128>() as i64
            })
            .collect();
        ChernVector { n: self.n, rank: self.rank, c }
    }

    /// Chern character components `ch_0..ch_n`.
    pub fn chern_character(&self) -> Vec<Q> {
        // Newton: p_k = Σ_{i=1}^{k−1} (−1)^{i−1} e_i p_{k−i} + (−1)^{k−1} k e_k
        let mut p: Vec<Q> = vec![Q::from_integer(self.rank as i128)];
        for k in 1..=self.n {
            let mut s = Q::from_integer(0);
            for i in 1..k {
                let term = p[k - i] * Q::from_integer(self.ci(i) as i128);
                s = if i % 2 == 1 { s + term } else { s - term };
            }
            let last = Q::from_integer(k as i128 * self.ci(k) as i128);
            s = if k % 2 == 1 { s + last } else { s - last };
            p.push(s);
        }
        let mut fact: i128 = 1;
        p.iter()
            .enumerate()
            .map(|(k, &v)| {
                if k > 0 {
                    fact *= k as i128;
                }
                v / Q::from_integer(fact)
            })
            .collect()
    }
}

/// `C(m, k)` for any integer `m` (falling factorial over `k!`), `k ≥ 0`.
fn poly_binom(m: i64, k: i64) -> i128 {
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for j in 0..k {
        num *= (m - j) as i128;
        den *= (j + 1) as i128;
    }
    num / den
}

fn trunc_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let n = a.len();
    let mut out = vec![0; n];
    for i in 0..n {
        for j in 0..n - i {
            out[i + j] += a[i] * b[j];
        }
    }
    out
}

/// Inverse of a truncated series with constant term 1.
fn trunc_inv(a: &[i64]) -> Vec<i64> {
    debug_assert_eq!(a[0], 1);
    let n = a.len();
    let mut out = vec![0; n];
    out[0] = 1;
    for k in 1..n {
        out[k] = -(1..=k).map(|i| a[i] * out[k - i]).sum::<i64>();
    }
    out
}

/// `c(C) = Π_{p even} c(C^p) / Π_{p odd} c(C^p)`, the class of the
/// alternating sum of the terms.
pub fn chern_of_complex(c: &FreeComplex) -> ChernVector {
    let n = c.nvars() - 1;
    let mut acc = ChernVector::trivial(n, 0);
    for p in c.lo()..=c.hi() {
        let t = ChernVector::line_sum(n, c.term(p));
        acc = if p.rem_euclid(2) == 0 { acc.sum(&t) } else { acc.kernel_of(&t) };
    }
    acc
}

/// Chern classes of `P(E)` of rank `new_rank`: `c(P(E)) = (1/c(E))^∨`.
pub fn p_chern(c: &ChernVector, new_rank: i64) -> ChernVector {
    let inv = trunc_inv(&c.total());
    ChernVector::from_total(c.n, new_rank, &inv).dual()
}

/// Congruence `c_3 ≡ c_1 c_2 (mod 2)` on `P^3`.
pub fn parity_ok(c: &ChernVector) -> bool {
    (c.ci(3) - c.ci(1) * c.ci(2)).rem_euclid(2) == 0
}

/// `(2c_1+3)(c_3−c_1c_2) + c_2^2 + c_2 − 2c_4 (mod 12)`, and whether it vanishes.
pub fn schwarzenberger_ok(c: &ChernVector) -> (bool, i64) {
    let (c1, c2, c3, c4) = (c.ci(1), c.ci(2), c.ci(3), c.ci(4));
    let r = ((2 * c1 + 3) * (c3 - c1 * c2) + c2 * c2 + c2 - 2 * c4).rem_euclid(12);
    (r == 0, r)
}

/// `χ(E(l))` from the closed formulas on `P^2`, `P^3`, `P^4`; other
/// dimensions fall back to [`hrr_chi`].
pub fn rr_chi(c: &ChernVector, l: i64) -> Result<i128> {
    let n = c.n as i64;
    let (r, c1, c2, c3, c4) = (c.rank, c.ci(1) as i128, c.ci(2) as i128, c.ci(3) as i128, c.ci(4) as i128);
    let l128 = l as i128;
    let base = (r - 1) as i128 * chi_line(n, l) + chi_line(n, l + c.ci(1));
    match c.n {
        2 => Ok(base - c2),
        3 => {
            if !parity_ok(c) {
                return Err(Error::Congruence(format!("c3 = {c3} and c1*c2 = {} differ in parity", c1 * c2)));
            }
            Ok(base - (l128 + 2) * c2 + (c3 - c1 * c2) / 2)
        }
        4 => {
            let (ok, res) = schwarzenberger_ok(c);
            if !ok {
                return Err(Error::Congruence(format!("Schwarzenberger residue {res} (mod 12)")));
            }
            let q = (l128 + 2) * (l128 + 3) * c2;
            let s = (l128 + 2) * (c3 - c1 * c2);
            let t = (2 * c1 + 3) * (c3 - c1 * c2) + c2 * c2 + c2 - 2 * c4;
            let num = -6 * q + 6 * s + t;
            if num % 12 != 0 {
                return Err(Error::Congruence(format!("c3 = {c3} and c1*c2 = {} differ in parity", c1 * c2)));
            }
            Ok(base + num / 12)
        }
        _ => {
            let v = hrr_chi(c, l);
            if !v.is_integer() {
                return Err(Error::Congruence(format!("Riemann-Roch gives the non-integer {v}")));
            }
            Ok(v.to_integer())
        }
    }
}

/// Hirzebruch–Riemann–Roch on `P^n`: degree-`n` part of `ch(E(l))·td(P^n)`.
pub fn hrr_chi(c: &ChernVector, l: i64) -> Q {
    let n = c.n;
    let ch = c.chern_character();
    // e^{lh}
    let mut exp_l = vec![Q::from_integer(1)];
    for k in 1..=n {
        exp_l.push(exp_l[k - 1] * Q::from_integer(l as i128) / Q::from_integer(k as i128));
    }
    let ch_l = series_mul(&ch, &exp_l, n);
    // td = (h / (1 − e^{−h}))^{n+1}
    let mut b = Vec::with_capacity(n + 1);
    let mut fact: i128 = 1;
    for k in 0..=n {
        fact *= (k + 1) as i128;
        let v = Q::new(1, fact);
        b.push(if k % 2 == 0 { v } else { -v });
    }
    let g = series_inv(&b, n);
    let mut td = vec![Q::from_integer(0); n + 1];
    td[0] = Q::from_integer(1);
    for _ in 0..=n {
        td = series_mul(&td, &g, n);
    }
    let prod = series_mul(&ch_l, &td, n);
    prod[n]
}

fn series_mul(a: &[Q], b: &[Q], n: usize) -> Vec<Q> {
    let mut out = vec![Q::from_integer(0); n + 1];
    for (i, &x) in a.iter().enumerate().take(n + 1) {
        for (j, &y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn series_inv(a: &[Q], n: usize) -> Vec<Q> {
    let mut out = vec![Q::from_integer(0); n + 1];
    out[0] = Q::from_integer(1) / a[0];
    for k in 1..=n {
        let s: Q = (1..=k).map(|i| a[i] * out[k - i]).sum();
        out[k] = -s / a[0];
    }
    out
}

/// Numerical invariants of a smooth surface in `P^4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceInvariants {
    pub d: i64,
    pub pi: i64,
    pub q: i64,
    pub pg: i64,
}

impl SurfaceInvariants {
    pub fn new(d: i64, pi: i64, q: i64, pg: i64) -> Result<Self> {
        if d < 1 || pi < 0 || q < 0 || pg < 0 {
            return Err(Error::Domain(format!("invalid surface invariants ({d}, {pi}, {q}, {pg})")));
        }
        Ok(SurfaceInvariants { d, pi, q, pg })
    }
}

/// `(C+K)^2 = (d−3)(d−4)/2 + 1 − π − 6q + 6p_g`.
pub fn double_point(s: &SurfaceInvariants) -> i64 {
    (s.d - 3) * (s.d - 4) / 2 + 1 - s.pi - 6 * s.q + 6 * s.pg
}

/// `(r, c_2, c_3, c_4)` of the bundle attached to the surface.
pub fn surface_bundle_data(s: &SurfaceInvariants) -> (i64, i64, i64, i64) {
    (1 + s.pi - s.q + s.pg, s.d, 2 * s.pi - 2, double_point(s))
}

/// `π − d + 3 = h^1(O_Y(1)) − q + p_g`.
pub fn sectional_relation_ok(s: &SurfaceInvariants, h1_oy1: i64) -> bool {
    s.pi - s.d + 3 == h1_oy1 - s.q + s.pg
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    /// `c_i < 0`
    Negative(usize),
    /// `c_2 > c_1^2`
    C2AboveC1Squared,
    /// rank 2 on `P^3` with `c_2 > c_1^2/2`
    RankTwoBound,
    /// `c_1 = 4`, `5 ≤ c_2 ≤ 8` on `P^4` with `c_3 < 2c_2 − 8`
    C3LowerBound,
    /// `c_1 ≥ 2`, `c_2 > 0` with `c_2 < c_1 − 1`
    C2BelowC1MinusOne,
}

/// Numerical conditions a globally generated bundle must satisfy; an empty
/// list means none is violated.
pub fn gg_constraints(c: &ChernVector) -> Vec<Violation> {
    let mut out = Vec::new();
    let (c1, c2, c3) = (c.ci(1), c.ci(2), c.ci(3));
    for i in 1..=c.n {
        if c.ci(i) < 0 {
            out.push(Violation::Negative(i));
        }
    }
    if c.n >= 2 && c2 > c1 * c1 {
        out.push(Violation::C2AboveC1Squared);
    }
    if c.n == 3 && c.rank == 2 && 2 * c2 > c1 * c1 {
        out.push(Violation::RankTwoBound);
    }
    if c.n == 4 && c1 == 4 && (5..=8).contains(&c2) && c3 < 2 * c2 - 8 {
        out.push(Violation::C3LowerBound);
    }
    if c.n >= 2 && c1 >= 2 && c2 > 0 && c2 < c1 - 1 {
        out.push(Violation::C2BelowC1MinusOne);
    }
    out
}

/// Chern classes of a sheaf node, from its presentation.
pub fn chern_of_node(f: crate::exactfield::Field, node: &crate::sheafcoh::SheafNode) -> Result<ChernVector> {
    Ok(chern_of_complex(&node.presentation(f)?))
}
