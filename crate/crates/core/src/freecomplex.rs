//! Bounded complexes of sums of line bundles.
//!
//! Positions increase along the differential: `d^p : C^p → C^{p+1}`.
//! Koszul complexes sit in positions `−m..0`.

use std::collections::BTreeMap;

use crate::exactfield::{basis_len, rank, solve, subsets, Field, Form, GradedMatrix, Matrix, MonomialIndex, PointP};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeComplex {
    nvars: usize,
    lo: i64,
    terms: Vec<Vec<i64>>,
    diffs: Vec<GradedMatrix>,
}

/// Chain map given by its components at each position (missing = zero).
#[derive(Clone, Debug, Default)]
pub struct ChainMap {
    pub maps: BTreeMap<i64, GradedMatrix>,
}

/// Homology dimensions of graded strands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessReport {
    /// `(position, degree, homology dimension)`
    pub cells: Vec<(i64, i64, usize)>,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.cells.iter().all(|c| c.2 == 0)
    }

    pub fn is_exact_at(&self, pos: i64) -> bool {
        self.cells.iter().filter(|c| c.0 == pos).all(|c| c.2 == 0)
    }

    pub fn failures(&self) -> Vec<(i64, i64, usize)> {
        self.cells.iter().copied().filter(|c| c.2 != 0).collect()
    }
}

impl FreeComplex {
    pub fn new(nvars: usize, lo: i64, terms: Vec<Vec<i64>>, diffs: Vec<GradedMatrix>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Shape("complex without terms".into()));
        }
        if diffs.len() + 1 != terms.len() {
            return Err(Error::Shape(format!(
                "{} terms need {} differentials, got {}",
                terms.len(),
                terms.len() - 1,
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.src() != terms[k].as_slice() || d.tgt() != terms[k + 1].as_slice() || d.nvars() != nvars {
                return Err(Error::Shape(format!("differential at position {} does not match terms", lo + k as i64)));
            }
        }
        Ok(FreeComplex { nvars, lo, terms, diffs })
    }

    /// One-term complex `O(twists)` at `pos`.
    pub fn single(nvars: usize, pos: i64, twists: Vec<i64>) -> Self {
        FreeComplex { nvars, lo: pos, terms: vec![twists], diffs: Vec::new() }
    }

    /// Two-term complex `src → tgt` with the source at `pos`.
    pub fn from_map(pos: i64, m: GradedMatrix) -> Self {
        FreeComplex {
            nvars: m.nvars(),
            lo: pos,
            terms: vec![m.src().to_vec(), m.tgt().to_vec()],
            diffs: vec![m],
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn term(&self, p: i64) -> &[i64] {
        if p < self.lo || p > self.hi() {
            &[]
        } else {
            &self.terms[(p - self.lo) as usize]
        }
    }

    /// `d^p : C^p → C^{p+1}` (a zero map outside the stored range).
    pub fn diff(&self, p: i64) -> GradedMatrix {
        if p >= self.lo && p < self.hi() {
            self.diffs[(p - self.lo) as usize].clone()
        } else {
            GradedMatrix::zero(self.nvars, self.term(p).to_vec(), self.term(p + 1).to_vec())
        }
    }

    pub fn diff_ref(&self, p: i64) -> Option<&GradedMatrix> {
        if p >= self.lo && p < self.hi() {
            Some(&self.diffs[(p - self.lo) as usize])
        } else {
            None
        }
    }

    /// Alternating sum of ranks, `Σ (−1)^p rank C^p`.
    pub fn euler_rank(&self) -> i64 {
        (self.lo..=self.hi())
            .map(|p| if p.rem_euclid(2) == 0 { 1 } else { -1 } * self.term(p).len() as i64)
            .sum()
    }

    pub fn all_twists(&self) -> impl Iterator<Item = i64> + '_ {
        self.terms.iter().flatten().copied()
    }

    /// Verify `d^{p+1} ∘ d^p = 0` symbolically.
    pub fn check_d2(&self, f: Field) -> Result<()> {
        for p in self.lo..self.hi() - 1 {
            let dd = self.diff(p + 1).compose(f, &self.diff(p))?;
            if !dd.is_zero() {
                return Err(Error::Shape(format!("d∘d ≠ 0 at position {p}")));
            }
        }
        Ok(())
    }

    /// Drop empty terms at both ends.
    fn stripped(mut self) -> Self {
        while self.terms.len() > 1 && self.terms[0].is_empty() {
            self.terms.remove(0);
            self.diffs.remove(0);
            self.lo += 1;
        }
        while self.terms.len() > 1 && self.terms.last().unwrap().is_empty() {
            self.terms.pop();
            self.diffs.pop();
        }
        self
    }

    pub fn twist(&self, l: i64) -> FreeComplex {
        FreeComplex {
            nvars: self.nvars,
            lo: self.lo,
            terms: self.terms.iter().map(|t| t.iter().map(|a| a + l).collect()).collect(),
            diffs: self.diffs.iter().map(|d| d.twist(l)).collect(),
        }
    }

    /// `C[k]^p = C^{p+k}` with differential `(−1)^k d`.
    pub fn shift(&self, f: Field, k: i64) -> FreeComplex {
        FreeComplex {
            nvars: self.nvars,
            lo: self.lo - k,
            terms: self.terms.clone(),
            diffs: if k % 2 == 0 { self.diffs.clone() } else { self.diffs.iter().map(|d| d.neg(f)).collect() },
        }
    }

    /// `(C^∨)^p = (C^{−p})^∨` with transposed differentials.
    pub fn dual(&self) -> FreeComplex {
        let terms: Vec<Vec<i64>> = self.terms.iter().rev().map(|t| t.iter().map(|a| -a).collect()).collect();
        let diffs: Vec<GradedMatrix> = self.diffs.iter().rev().map(|d| d.dual()).collect();
        FreeComplex { nvars: self.nvars, lo: -self.hi(), terms, diffs }
    }

    pub fn direct_sum(&self, other: &FreeComplex) -> Result<FreeComplex> {
        if self.nvars != other.nvars {
            return Err(Error::Shape("direct sum over different spaces".into()));
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let terms: Vec<Vec<i64>> = (lo..=hi).map(|p| [self.term(p), other.term(p)].concat()).collect();
        let mut diffs = Vec::new();
        for p in lo..hi {
            let a = self.diff(p);
            let b = other.diff(p);
            let z1 = GradedMatrix::zero(self.nvars, b.src().to_vec(), a.tgt().to_vec());
            let z2 = GradedMatrix::zero(self.nvars, a.src().to_vec(), b.tgt().to_vec());
            diffs.push(GradedMatrix::block(&a, &z1, &z2, &b)?);
        }
        FreeComplex::new(self.nvars, lo, terms, diffs)
    }

    /// Total complex of the tensor product, `d(x⊗y) = dx⊗y + (−1)^p x⊗dy`.
    pub fn tensor(&self, f: Field, other: &FreeComplex) -> Result<FreeComplex> {
        if self.nvars != other.nvars {
            return Err(Error::Shape("tensor over different spaces".into()));
        }
        let n = self.nvars;
        let lo = self.lo + other.lo;
        let hi = self.hi() + other.hi();
        // summand layout per total position: (p, i, j)
        let layout = |k: i64| -> Vec<(i64, usize, usize, i64)> {
            let mut v = Vec::new();
            for p in self.lo..=self.hi() {
                let q = k - p;
                for (i, &a) in self.term(p).iter().enumerate() {
                    for (j, &b) in other.term(q).iter().enumerate() {
                        v.push((p, i, j, a + b));
                    }
                }
            }
            v
        };
        let layouts: Vec<_> = (lo..=hi).map(layout).collect();
        let terms: Vec<Vec<i64>> = layouts.iter().map(|l| l.iter().map(|x| x.3).collect()).collect();
        let mut diffs = Vec::new();
        for k in lo..hi {
            let src = &layouts[(k - lo) as usize];
            let tgt = &layouts[(k + 1 - lo) as usize];
            let mut m = GradedMatrix::zero(n, terms[(k - lo) as usize].clone(), terms[(k + 1 - lo) as usize].clone());
            let tindex: BTreeMap<(i64, usize, usize), usize> =
                tgt.iter().enumerate().map(|(r, x)| ((x.0, x.1, x.2), r)).collect();
            for (c, &(p, i, j, _)) in src.iter().enumerate() {
                let q = k - p;
                if let Some(dc) = self.diff_ref(p) {
                    for i2 in 0..dc.nrows() {
                        let e = dc.entry(i2, i);
                        if !e.is_zero() {
                            let r = tindex[&(p + 1, i2, j)];
                            m.set_entry(r, c, e.clone())?;
                        }
                    }
                }
                if let Some(dd) = other.diff_ref(q) {
                    for j2 in 0..dd.nrows() {
                        let e = dd.entry(j2, j);
                        if !e.is_zero() {
                            let r = tindex[&(p, i, j2)];
                            let e = if p.rem_euclid(2) == 1 { e.neg(f) } else { e.clone() };
                            m.set_entry(r, c, e)?;
                        }
                    }
                }
            }
            diffs.push(m);
        }
        FreeComplex::new(n, lo, terms, diffs)
    }

    /// Substitute variables in every differential (e.g. restriction to a line).
    pub fn substitute(&self, f: Field, images: &[Form]) -> FreeComplex {
        let e = images.iter().map(|g| g.degree()).max().unwrap_or(1) as i64;
        FreeComplex {
            nvars: images[0].nvars(),
            lo: self.lo,
            terms: self.terms.iter().map(|t| t.iter().map(|a| a * e).collect()).collect(),
            diffs: self.diffs.iter().map(|d| d.substitute(f, images)).collect(),
        }
    }

    /// Fiber complex at a point.
    pub fn evaluate(&self, f: Field, x: &PointP) -> Vec<Matrix> {
        self.diffs.iter().map(|d| d.evaluate(f, x)).collect()
    }

    /// Pointwise homology dimensions of the fiber complex at `x`, by position.
    pub fn fiber_homology(&self, f: Field, x: &PointP) -> BTreeMap<i64, usize> {
        let ranks: Vec<usize> = self.evaluate(f, x).iter().map(|m| rank(f, m)).collect();
        let mut out = BTreeMap::new();
        for p in self.lo..=self.hi() {
            let k = (p - self.lo) as usize;
            let into = if k == 0 { 0 } else { ranks[k - 1] };
            let out_r = if k < ranks.len() { ranks[k] } else { 0 };
            out.insert(p, self.term(p).len() - into - out_r);
        }
        out
    }

    /// Dimension of `C^p` in degree `l`.
    pub fn piece_dim(&self, p: i64, l: i64) -> usize {
        self.term(p).iter().map(|&a| basis_len(self.nvars, l + a)).sum()
    }

    /// Ranks of every differential in degree `l`, indexed by source position.
    pub fn strand_ranks(&self, f: Field, l: i64, idx: &mut MonomialIndex) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for p in self.lo..self.hi() {
            let d = &self.diffs[(p - self.lo) as usize];
            let m = d.graded_piece_with(f, l, idx);
            out.insert(p, rank(f, &m));
        }
        out
    }

    /// Homology dimension of the degree-`l` strand at every position.
    pub fn strand_homology(&self, f: Field, l: i64, idx: &mut MonomialIndex) -> BTreeMap<i64, usize> {
        let bad = self.non_complex_positions(f);
        self.strand_homology_inner(f, l, idx, &bad)
    }

    /// Source positions `p` with `d^{p+1} ∘ d^p ≠ 0`, paired with the composite.
    fn non_complex_positions(&self, f: Field) -> BTreeMap<i64, GradedMatrix> {
        let mut out = BTreeMap::new();
        for p in self.lo..self.hi() - 1 {
            if let Ok(dd) = self.diff(p + 1).compose(f, &self.diff(p)) {
                if !dd.is_zero() {
                    out.insert(p, dd);
                }
            }
        }
        out
    }

    // dim ker d^p − dim(im d^{p−1} ∩ ker d^p), which is the usual homology
    // when d∘d = 0 and stays meaningful for a corrupted differential.
    fn strand_homology_inner(
        &self,
        f: Field,
        l: i64,
        idx: &mut MonomialIndex,
        bad: &BTreeMap<i64, GradedMatrix>,
    ) -> BTreeMap<i64, usize> {
        let ranks = self.strand_ranks(f, l, idx);
        (self.lo..=self.hi())
            .map(|p| {
                let dim = self.piece_dim(p, l);
                let r_out = ranks.get(&p).copied().unwrap_or(0);
                let r_in = ranks.get(&(p - 1)).copied().unwrap_or(0);
                let r_comp = bad.get(&(p - 1)).map_or(0, |dd| rank(f, &dd.graded_piece_with(f, l, idx)));
                (p, dim - r_out - (r_in - r_comp))
            })
            .collect()
    }

    /// Homology of the graded strands over a window of degrees.
    pub fn verify_exact(&self, f: Field, window: (i64, i64), positions: &[i64]) -> ExactnessReport {
        let bad = self.non_complex_positions(f);
        let mut idx = MonomialIndex::new(self.nvars);
        let mut cells = Vec::new();
        for l in window.0..=window.1 {
            let h = self.strand_homology_inner(f, l, &mut idx, &bad);
            for &p in positions {
                cells.push((p, l, h.get(&p).copied().unwrap_or(0)));
            }
        }
        ExactnessReport { cells }
    }

    /// Positions strictly between the first and last term.
    pub fn inner_positions(&self) -> Vec<i64> {
        (self.lo + 1..self.hi()).collect()
    }

    /// Default window `[−(n+1)·maxdeg, (n+1)·maxdeg]`, `maxdeg` the largest
    /// entry degree (at least 1).
    pub fn default_window(&self) -> (i64, i64) {
        let maxdeg = self
            .diffs
            .iter()
            .flat_map(|d| d.entries().iter().flatten().map(|e| e.degree() as i64))
            .max()
            .unwrap_or(1)
            .max(1);
        let w = self.nvars as i64 * maxdeg;
        (-w, w)
    }

    /// Cancel unit entries between adjacent terms until none remain.
    pub fn trim(&self, f: Field) -> FreeComplex {
        let mut c = self.clone();
        'outer: loop {
            for k in 0..c.diffs.len() {
                let d = &c.diffs[k];
                for i in 0..d.nrows() {
                    for j in 0..d.ncols() {
                        let e = d.entry(i, j);
                        if d.tgt()[i] == d.src()[j] && !e.is_zero() {
                            c = c.cancel(f, k, i, j);
                            continue 'outer;
                        }
                    }
                }
            }
            break;
        }
        c.stripped()
    }

    /// Gaussian elimination of the unit entry `(i, j)` of `diffs[k]`.
    fn cancel(&self, f: Field, k: usize, i: usize, j: usize) -> FreeComplex {
        let d = &self.diffs[k];
        let u = d.entry(i, j).coeff(&vec![0; self.nvars]);
        let uinv = f.inv(u);
        let rows: Vec<usize> = (0..d.nrows()).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..d.ncols()).filter(|&c| c != j).collect();
        let mut nd = d.select(&rows, &cols);
        for (ri, &r) in rows.iter().enumerate() {
            let delta = d.entry(r, j);
            if delta.is_zero() {
                continue;
            }
            for (ci, &cc) in cols.iter().enumerate() {
                let gamma = d.entry(i, cc);
                if gamma.is_zero() {
                    continue;
                }
                let corr = delta.mul(f, gamma).scale(f, uinv);
                let v = nd.entry(ri, ci).sub(f, &corr);
                nd.set_entry(ri, ci, v).expect("degrees are consistent");
            }
        }
        let mut out = self.clone();
        out.terms[k] = cols.iter().map(|&c| d.src()[c]).collect();
        out.terms[k + 1] = rows.iter().map(|&r| d.tgt()[r]).collect();
        out.diffs[k] = nd;
        if k > 0 {
            let prev = &self.diffs[k - 1];
            let all: Vec<usize> = (0..prev.ncols()).collect();
            out.diffs[k - 1] = prev.select(&cols, &all);
        }
        if k + 1 < self.diffs.len() {
            let next = &self.diffs[k + 1];
            let all: Vec<usize> = (0..next.nrows()).collect();
            out.diffs[k + 1] = next.select(&all, &rows);
        }
        out
    }

    /// Hilbert-polynomial value `Σ (−1)^p χ(C^p(l))` on `P^{nvars−1}`.
    pub fn euler_char(&self, l: i64) -> i128 {
        let n = self.nvars as i64 - 1;
        (self.lo..=self.hi())
            .map(|p| {
                let s: i128 = self.term(p).iter().map(|&a| chi_line(n, a + l)).sum();
                if p.rem_euclid(2) == 0 {
                    s
                } else {
                    -s
                }
            })
            .sum()
    }
}

/// `χ(O_{P^n}(m)) = C(m+n, n)` extended polynomially to all `m`.
pub fn chi_line(n: i64, m: i64) -> i128 {
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for k in 1..=n {
        num *= (m + k) as i128;
        den *= k as i128;
    }
    num / den
}

impl ChainMap {
    pub fn new() -> Self {
        ChainMap::default()
    }

    pub fn with(mut self, p: i64, m: GradedMatrix) -> Self {
        self.maps.insert(p, m);
        self
    }

    fn at(&self, src: &FreeComplex, tgt: &FreeComplex, p: i64) -> GradedMatrix {
        self.maps
            .get(&p)
            .cloned()
            .unwrap_or_else(|| GradedMatrix::zero(src.nvars, src.term(p).to_vec(), tgt.term(p).to_vec()))
    }

    /// Check shapes and `d_D f^p = f^{p+1} d_C` at every position.
    pub fn verify(&self, f: Field, src: &FreeComplex, tgt: &FreeComplex) -> Result<()> {
        for (&p, m) in &self.maps {
            if m.src() != src.term(p) || m.tgt() != tgt.term(p) {
                return Err(Error::Shape(format!("chain map component at {p} has wrong twists")));
            }
        }
        let lo = src.lo.min(tgt.lo) - 1;
        let hi = src.hi().max(tgt.hi()) + 1;
        for p in lo..hi {
            let a = tgt.diff(p).compose(f, &self.at(src, tgt, p))?;
            let b = self.at(src, tgt, p + 1).compose(f, &src.diff(p))?;
            if a != b && !a.add(f, &b.neg(f))?.is_zero() {
                return Err(Error::Shape(format!("not a chain map at position {p}")));
            }
        }
        Ok(())
    }
}

/// Mapping cone: `cone^p = C^{p+1} ⊕ D^p`, `d = [[−d_C, 0], [φ, d_D]]`.
pub fn cone(f: Field, src: &FreeComplex, tgt: &FreeComplex, phi: &ChainMap) -> Result<FreeComplex> {
    phi.verify(f, src, tgt)?;
    let n = src.nvars;
    let lo = (src.lo - 1).min(tgt.lo);
    let hi = (src.hi() - 1).max(tgt.hi());
    let terms: Vec<Vec<i64>> = (lo..=hi).map(|p| [src.term(p + 1), tgt.term(p)].concat()).collect();
    let mut diffs = Vec::new();
    for p in lo..hi {
        let a = src.diff(p + 1).neg(f);
        let b = GradedMatrix::zero(n, tgt.term(p).to_vec(), src.term(p + 2).to_vec());
        let c = phi.at(src, tgt, p + 1);
        let d = tgt.diff(p);
        diffs.push(GradedMatrix::block(&a, &b, &c, &d)?);
    }
    Ok(FreeComplex::new(n, lo, terms, diffs)?.stripped())
}

/// Shifted cone `cone(φ)[−1]`; for an epimorphism onto the homology of the
/// target it presents the kernel at the source's positions.
pub fn cocone(f: Field, src: &FreeComplex, tgt: &FreeComplex, phi: &ChainMap) -> Result<FreeComplex> {
    Ok(cone(f, src, tgt, phi)?.shift(f, -1))
}

/// Koszul complex of `f_1..f_m` in positions `−m..0`, basis `e_I` by lex
/// subsets, `δ(e_I) = Σ_j (−1)^j f_{i_j} e_{I∖i_j}`.
pub fn koszul(f: Field, forms: &[Form]) -> Result<FreeComplex> {
    let m = forms.len();
    if m == 0 {
        return Err(Error::Shape("Koszul complex of no forms".into()));
    }
    let nvars = forms[0].nvars();
    if forms.iter().any(|g| g.is_zero() || g.nvars() != nvars) {
        return Err(Error::Shape("Koszul forms must be nonzero in a common ring".into()));
    }
    let degs: Vec<i64> = forms.iter().map(|g| g.degree() as i64).collect();
    let sets: Vec<Vec<Vec<usize>>> = (0..=m).map(|k| subsets(m, k)).collect();
    let twist = |s: &Vec<usize>| -> i64 { -s.iter().map(|&i| degs[i]).sum::<i64>() };
    // position −k holds subsets of size k
    let terms: Vec<Vec<i64>> = (0..=m).rev().map(|k| sets[k].iter().map(twist).collect()).collect();
    let mut diffs = Vec::new();
    for k in (1..=m).rev() {
        let src = &sets[k];
        let tgt = &sets[k - 1];
        let index: BTreeMap<&Vec<usize>, usize> = tgt.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut mat = GradedMatrix::zero(nvars, src.iter().map(twist).collect(), tgt.iter().map(twist).collect());
        for (c, s) in src.iter().enumerate() {
            for (j, &ij) in s.iter().enumerate() {
                let rest: Vec<usize> = s.iter().copied().filter(|&x| x != ij).collect();
                let r = index[&rest];
                let e = if j % 2 == 0 { forms[ij].clone() } else { forms[ij].neg(f) };
                mat.set_entry(r, c, e)?;
            }
        }
        diffs.push(mat);
    }
    FreeComplex::new(nvars, -(m as i64), terms, diffs)
}

/// Solve `d ∘ h = g` for `h` column by column in the appropriate degrees.
pub fn lift(f: Field, d: &GradedMatrix, g: &GradedMatrix) -> Result<GradedMatrix> {
    if d.tgt() != g.tgt() {
        return Err(Error::Shape("lift: targets differ".into()));
    }
    let n = d.nvars();
    let mut idx = MonomialIndex::new(n);
    let mut h = GradedMatrix::zero(n, g.src().to_vec(), d.src().to_vec());
    for (j, &z) in g.src().iter().enumerate() {
        let l = -z;
        let piece = d.graded_piece_with(f, l, &mut idx);
        let mut rhs = Vec::with_capacity(piece.rows());
        for (k, &y) in d.tgt().iter().enumerate() {
            let e = g.entry(k, j);
            let len = basis_len(n, l + y);
            if e.is_zero() {
                rhs.extend(std::iter::repeat(0).take(len));
            } else {
                rhs.extend(e.coefficients(&mut idx));
            }
        }
        let x = solve(f, &piece, &rhs)
            .ok_or_else(|| Error::LiftNotFound(format!("column {j} (twist {z}) is not in the image")))?;
        let mut off = 0;
        for (i, &a) in d.src().iter().enumerate() {
            let deg = l + a;
            let len = basis_len(n, deg);
            if len > 0 {
                let form = Form::from_coefficients(n, deg as u32, &x[off..off + len]);
                h.set_entry(i, j, form)?;
            }
            off += len;
        }
    }
    Ok(h)
}

/// Ferrand liaison. `res` is `L → F → O` in positions `−2..0` resolving
/// `O_Y`; `a`, `b` are forms vanishing on `Y`. Returns
/// `F^∨ → L^∨ ⊕ O(a) ⊕ O(b) → O(a+b)` in positions `−2..0`, whose last map has
/// image `I_{Y'}(a+b)` for the residual scheme `Y'`.
pub fn ferrand_liaison(f: Field, res: &FreeComplex, a: &Form, b: &Form) -> Result<FreeComplex> {
    if res.lo() != -2 || res.hi() != 0 || res.term(0) != [0] {
        return Err(Error::Shape("liaison input must be L → F → O in positions −2..0".into()));
    }
    let k = koszul(f, &[a.clone(), b.clone()])?;
    let alpha1 = lift(f, &res.diff(-1), &k.diff(-1))?;
    let rhs = alpha1.compose(f, &k.diff(-2))?;
    let alpha2 = lift(f, &res.diff(-2), &rhs)?;
    let phi = ChainMap::new()
        .with(0, GradedMatrix::identity(f, res.nvars(), vec![0]))
        .with(-1, alpha1)
        .with(-2, alpha2);
    let c = cone(f, &k, res, &phi)?.trim(f);
    let d = c.dual();
    Ok(d.shift(f, d.hi()))
}

/// Degree of the scheme resolved by `c` (homology `O_Y` at position 0) of
/// dimension `dim`, from the Hilbert polynomial's `dim`-th difference.
pub fn degree_from_resolution(c: &FreeComplex, dim: usize, twist: i64) -> i128 {
    let vals: Vec<i128> = (0..=dim as i64).map(|l| c.euler_char(l + twist)).collect();
    let mut v = vals;
    for _ in 0..dim {
        v = v.windows(2).map(|w| w[1] - w[0]).collect();
    }
    v[0]
}
