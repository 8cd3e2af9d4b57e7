//! Sheaf expressions over `P^n` and their cohomology.
//!
//! Every node is flattened to a complex of sums of line bundles whose only
//! sheaf homology sits in position 0. Cohomology of twists is read off the
//! two-row hypercohomology spectral sequence: row 0 from the strands of the
//! complex, row `n` from the strands of its dual.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactfield::{basis_len, kernel_basis, Field, FieldElem, Form, GradedMatrix, Matrix, MonomialIndex, PointP};
use crate::freecomplex::{cocone, cone, ChainMap, FreeComplex};
use crate::geomtests::{epi_certificate, random_point};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SheafNode {
    /// `⊕ O(a_j)` on `P^{nvars−1}`.
    LineSum { nvars: usize, twists: Vec<i64> },
    /// Kernel of an epimorphism of line-bundle sums.
    KerEpi(GradedMatrix),
    /// Kernel of an epimorphism from a line-bundle sum onto `target`; the
    /// matrix lands in position 0 of the target's presentation.
    KerInto { map: GradedMatrix, target: Box<SheafNode> },
    /// Cokernel of a monomorphism from a line-bundle sum into `target`.
    SubQuot { map: GradedMatrix, target: Box<SheafNode> },
    Twist { node: Box<SheafNode>, l: i64 },
    Sum(Vec<SheafNode>),
    /// Homology of a complex (e.g. a monad) at `pos`.
    Homology { complex: FreeComplex, pos: i64 },
    /// Dual of a vector bundle.
    Dual(Box<SheafNode>),
    /// `P(E) = Ker(H^0(E) ⊗ O → E)^∨`.
    P(Box<SheafNode>),
}

impl SheafNode {
    pub fn line_sum(nvars: usize, twists: Vec<i64>) -> Self {
        SheafNode::LineSum { nvars, twists }
    }

    pub fn twist(self, l: i64) -> Self {
        SheafNode::Twist { node: Box::new(self), l }
    }

    pub fn dual(self) -> Self {
        SheafNode::Dual(Box::new(self))
    }

    pub fn p(self) -> Self {
        SheafNode::P(Box::new(self))
    }

    pub fn nvars(&self) -> usize {
        match self {
            SheafNode::LineSum { nvars, .. } => *nvars,
            SheafNode::KerEpi(m) => m.nvars(),
            SheafNode::KerInto { map, .. } | SheafNode::SubQuot { map, .. } => map.nvars(),
            SheafNode::Twist { node, .. } | SheafNode::Dual(node) | SheafNode::P(node) => node.nvars(),
            SheafNode::Sum(v) => v.first().map_or(1, |x| x.nvars()),
            SheafNode::Homology { complex, .. } => complex.nvars(),
        }
    }

    /// Dimension `n` of the ambient projective space.
    pub fn n(&self) -> usize {
        self.nvars() - 1
    }

    /// Complex of line-bundle sums quasi-isomorphic to the sheaf.
    pub fn presentation(&self, f: Field) -> Result<FreeComplex> {
        match self {
            SheafNode::LineSum { nvars, twists } => Ok(FreeComplex::single(*nvars, 0, twists.clone())),
            SheafNode::KerEpi(m) => Ok(FreeComplex::from_map(0, m.clone())),
            SheafNode::KerInto { map, target } => {
                let (a, p, phi) = map_into(f, map, target)?;
                cocone(f, &a, &p, &phi)
            }
            SheafNode::SubQuot { map, target } => {
                let (a, p, phi) = map_into(f, map, target)?;
                cone(f, &a, &p, &phi)
            }
            SheafNode::Twist { node, l } => Ok(node.presentation(f)?.twist(*l)),
            SheafNode::Sum(v) => {
                let mut it = v.iter();
                let first = it.next().ok_or_else(|| Error::Shape("empty direct sum".into()))?;
                let mut acc = first.presentation(f)?;
                for x in it {
                    acc = acc.direct_sum(&x.presentation(f)?)?;
                }
                Ok(acc)
            }
            SheafNode::Homology { complex, pos } => Ok(complex.shift(f, *pos)),
            SheafNode::Dual(node) => Ok(node.presentation(f)?.dual()),
            SheafNode::P(node) => {
                let pres = node.presentation(f)?;
                let model = sections_of(f, &pres, 0)?;
                let map = model.as_map(f)?;
                let a = FreeComplex::single(pres.nvars(), 0, map.src().to_vec());
                let phi = ChainMap::new().with(0, map);
                Ok(cocone(f, &a, &pres, &phi)?.dual())
            }
        }
    }

    /// Rank, as the alternating sum of the presentation's ranks.
    pub fn rank(&self, f: Field) -> Result<i64> {
        Ok(self.presentation(f)?.euler_rank())
    }
}

fn map_into(f: Field, map: &GradedMatrix, target: &SheafNode) -> Result<(FreeComplex, FreeComplex, ChainMap)> {
    let p = target.presentation(f)?;
    if map.tgt() != p.term(0) {
        return Err(Error::Shape(format!(
            "map target twists {:?} differ from the presentation term {:?}",
            map.tgt(),
            p.term(0)
        )));
    }
    if !p.diff(0).compose(f, map)?.is_zero() {
        return Err(Error::Shape("map does not land in the kernel of the presentation".into()));
    }
    let a = FreeComplex::single(map.nvars(), 0, map.src().to_vec());
    Ok((a, p, ChainMap::new().with(0, map.clone())))
}

/// Closed interval of possible values; exact when `lo == hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CohCell {
    pub lo: i64,
    pub hi: i64,
}

impl CohCell {
    pub fn exact(v: i64) -> Self {
        CohCell { lo: v, hi: v }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn value(&self) -> Option<i64> {
        self.is_exact().then_some(self.lo)
    }
}

/// `h^i(E(l))` for `0 ≤ i ≤ n` and `l` in the window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohTable {
    pub n: usize,
    pub window: (i64, i64),
    /// `cells[l − window.0][i]`
    pub cells: Vec<Vec<CohCell>>,
}

impl CohTable {
    pub fn cell(&self, i: usize, l: i64) -> Option<CohCell> {
        if l < self.window.0 || l > self.window.1 || i > self.n {
            return None;
        }
        Some(self.cells[(l - self.window.0) as usize][i])
    }

    /// Exact value of `h^i(E(l))`; `None` outside the window or when undetermined.
    pub fn h(&self, i: usize, l: i64) -> Option<i64> {
        self.cell(i, l).and_then(|c| c.value())
    }

    pub fn column_exact(&self, l: i64) -> bool {
        (0..=self.n).all(|i| self.cell(i, l).is_some_and(|c| c.is_exact()))
    }

    pub fn all_exact(&self) -> bool {
        self.cells.iter().flatten().all(|c| c.is_exact())
    }

    /// `Σ (−1)^i h^i(E(l))` when the column is exact.
    pub fn chi(&self, l: i64) -> Option<i128> {
        if !self.column_exact(l) {
            return None;
        }
        Some((0..=self.n).map(|i| if i % 2 == 0 { 1 } else { -1 } * self.h(i, l).unwrap() as i128).sum())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("l");
        for i in 0..=self.n {
            s.push_str(&format!("\th^{i}"));
        }
        s.push('\n');
        for l in self.window.0..=self.window.1 {
            s.push_str(&l.to_string());
            for i in 0..=self.n {
                let c = self.cell(i, l).unwrap();
                if c.is_exact() {
                    s.push_str(&format!("\t{}", c.lo));
                } else {
                    s.push_str(&format!("\t[{},{}]", c.lo, c.hi));
                }
            }
            s.push('\n');
        }
        s
    }

    /// Exact table that is zero except for the listed `(i, l, h)`.
    pub fn from_values(n: usize, window: (i64, i64), values: &[(usize, i64, i64)]) -> Result<CohTable> {
        if window.0 > window.1 {
            return Err(Error::Domain(format!("empty window [{}, {}]", window.0, window.1)));
        }
        let width = (window.1 - window.0 + 1) as usize;
        let mut cells = vec![vec![CohCell::exact(0); n + 1]; width];
        for &(i, l, h) in values {
            if i > n || l < window.0 || l > window.1 || h < 0 {
                return Err(Error::Table(format!("cell h^{i}(E({l})) = {h} does not fit the table")));
            }
            cells[(l - window.0) as usize][i] = CohCell::exact(h);
        }
        Ok(CohTable { n, window, cells })
    }

    /// Inverse of [`CohTable::to_text`]; rows must be consecutive in `l`.
    pub fn from_text(text: &str) -> Result<CohTable> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty table".into()))?;
        let ncols = header.split_whitespace().count();
        if ncols < 2 {
            return Err(Error::Parse("table header needs l and at least h^0".into()));
        }
        let n = ncols - 2;
        let mut rows: Vec<(i64, Vec<CohCell>)> = Vec::new();
        for line in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != ncols {
                return Err(Error::Parse(format!("row `{line}` has {} fields, expected {ncols}", parts.len())));
            }
            let l: i64 = parts[0].parse().map_err(|_| Error::Parse(format!("bad twist `{}`", parts[0])))?;
            let cells = parts[1..].iter().map(|s| parse_cell(s)).collect::<Result<Vec<_>>>()?;
            if let Some(prev) = rows.last() {
                if l != prev.0 + 1 {
                    return Err(Error::Parse(format!("twist {l} does not follow {}", prev.0)));
                }
            }
            rows.push((l, cells));
        }
        let (Some(first), Some(last)) = (rows.first(), rows.last()) else {
            return Err(Error::Parse("table has no rows".into()));
        };
        let window = (first.0, last.0);
        Ok(CohTable { n, window, cells: rows.into_iter().map(|r| r.1).collect() })
    }
}

fn parse_cell(s: &str) -> Result<CohCell> {
    let bad = || Error::Parse(format!("bad cell `{s}`"));
    if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        let lo = a.trim().parse().map_err(|_| bad())?;
        let hi = b.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        Ok(CohCell { lo, hi })
    } else {
        Ok(CohCell::exact(s.parse().map_err(|_| bad())?))
    }
}

pub fn default_window(n: usize) -> (i64, i64) {
    (-(n as i64) - 3, 4)
}

pub fn coh_table(f: Field, node: &SheafNode, window: (i64, i64)) -> Result<CohTable> {
    coh_table_of_complex(f, &node.presentation(f)?, window)
}

/// Cohomology of the sheaf presented by `pres` (homology concentrated in
/// position 0).
pub fn coh_table_of_complex(f: Field, pres: &FreeComplex, window: (i64, i64)) -> Result<CohTable> {
    if window.0 > window.1 {
        return Err(Error::Domain(format!("empty window [{}, {}]", window.0, window.1)));
    }
    let n = pres.nvars() - 1;
    let dual = pres.dual();
    let mut idx = MonomialIndex::new(pres.nvars());
    let mut cells = Vec::new();
    for l in window.0..=window.1 {
        let row0 = pres.strand_homology(f, l, &mut idx);
        let topd = dual.strand_homology(f, -l - n as i64 - 1, &mut idx);
        let rown: BTreeMap<i64, usize> = topd.into_iter().map(|(p, d)| (-p, d)).collect();
        cells.push(splice(n, &row0, &rown)?);
    }
    Ok(CohTable { n, window, cells })
}

/// Combine the two rows; `d_{n+1} : E^{p,n} → E^{p+n+1,0}` is the only
/// possible differential. Its rank is forced wherever a total degree outside
/// `[0, n]` must die, and otherwise left as an interval.
fn splice(n: usize, row0: &BTreeMap<i64, usize>, rown: &BTreeMap<i64, usize>) -> Result<Vec<CohCell>> {
    let n = n as i64;
    let a = |p: i64| row0.get(&p).copied().unwrap_or(0) as i64;
    let b = |p: i64| rown.get(&p).copied().unwrap_or(0) as i64;
    let positions: Vec<i64> = row0.keys().chain(rown.keys()).copied().collect();
    let (pmin, pmax) = match (positions.iter().min(), positions.iter().max()) {
        (Some(&x), Some(&y)) => (x, y),
        _ => return Ok(vec![CohCell::exact(0); n as usize + 1]),
    };
    // rank bounds of d from (p, n)
    let mut bounds: BTreeMap<i64, (i64, i64)> = BTreeMap::new();
    for p in pmin - n - 1..=pmax {
        let m = b(p).min(a(p + n + 1));
        bounds.insert(p, (0, m));
    }
    let mut force = |p: i64, v: i64| -> Result<()> {
        let e = bounds.entry(p).or_insert((0, 0));
        if v < e.0 || v > e.1 {
            return Err(Error::Degenerate(format!(
                "presentation has homology outside [0, n] (differential from position {p} needs rank {v})"
            )));
        }
        *e = (v, v);
        Ok(())
    };
    for p in pmin..=pmax {
        // (p, 0) has total degree p
        if (p < 0 || p > n) && a(p) > 0 {
            force(p - n - 1, a(p))?;
        }
        // (p, n) has total degree p + n
        if (p + n < 0 || p + n > n) && b(p) > 0 {
            force(p, b(p))?;
        }
    }
    let r = |p: i64| bounds.get(&p).copied().unwrap_or((0, 0));
    Ok((0..=n)
        .map(|k| {
            let total = a(k) + b(k - n);
            let (in_lo, in_hi) = r(k - n - 1);
            let (out_lo, out_hi) = r(k - n);
            CohCell { lo: total - in_hi - out_hi, hi: total - in_lo - out_lo }
        })
        .collect())
}

/// Explicit basis of `H^0(E(l))` as vectors of forms in position 0 of the
/// presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionModel {
    pub l: i64,
    pub nvars: usize,
    /// Twists of the ambient sum (position 0 of the presentation, untwisted).
    pub twists: Vec<i64>,
    /// `sections[j][i]` has degree `l + twists[i]`.
    pub sections: Vec<Vec<Form>>,
}

impl SectionModel {
    pub fn len(&self) -> usize {
        self.sections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sections.is_empty()
    }

    /// Matrix with the sections as columns (rows: ambient summands).
    pub fn evaluate(&self, f: Field, x: &PointP) -> Matrix {
        let cols: Vec<Vec<FieldElem>> =
            self.sections.iter().map(|s| s.iter().map(|g| g.eval(f, x.coords())).collect()).collect();
        Matrix::from_cols(&cols, self.twists.len())
    }

    /// The evaluation map `O(−l)^{h^0} → ⊕ O(a_i)`.
    pub fn as_map(&self, _f: Field) -> Result<GradedMatrix> {
        let entries = (0..self.twists.len())
            .map(|i| self.sections.iter().map(|s| s[i].clone()).collect())
            .collect();
        GradedMatrix::new(self.nvars, vec![-self.l; self.sections.len()], self.twists.clone(), entries)
    }
}

pub fn h0_basis(f: Field, node: &SheafNode, l: i64) -> Result<SectionModel> {
    sections_of(f, &node.presentation(f)?, l)
}

/// Kernel of `d^0` in degree `l` modulo the image of `d^{−1}`.
pub fn sections_of(f: Field, pres: &FreeComplex, l: i64) -> Result<SectionModel> {
    let n = pres.nvars() - 1;
    let dual = pres.dual();
    let mut idx = MonomialIndex::new(pres.nvars());
    // the top row can feed H^0 only through positions −n and −n−1
    let top = dual.strand_homology(f, -l - n as i64 - 1, &mut idx);
    if top.get(&(n as i64)).copied().unwrap_or(0) > 0 || top.get(&(n as i64 + 1)).copied().unwrap_or(0) > 0 {
        return Err(Error::Degenerate("H^0 is not modelled by the bottom row of this presentation".into()));
    }
    let d0 = pres.diff(0).graded_piece_with(f, l, &mut idx);
    let dm = pres.diff(-1).graded_piece_with(f, l, &mut idx);
    let dim = pres.piece_dim(0, l);
    let mut ech = Echelon::new(f, dim);
    for j in 0..dm.cols() {
        ech.insert(dm.col(j));
    }
    let mut chosen = Vec::new();
    let kernel = if pres.term(1).is_empty() { identity_vectors(dim) } else { kernel_basis(f, &d0) };
    for v in kernel {
        if ech.insert(v.clone()) {
            chosen.push(v);
        }
    }
    let twists = pres.term(0).to_vec();
    let sections = chosen
        .iter()
        .map(|v| {
            let mut off = 0;
            twists
                .iter()
                .map(|&a| {
                    let deg = l + a;
                    let len = basis_len(pres.nvars(), deg);
                    let g = if len == 0 {
                        Form::zero(pres.nvars(), 0)
                    } else {
                        Form::from_coefficients(pres.nvars(), deg as u32, &v[off..off + len])
                    };
                    off += len;
                    g
                })
                .collect()
        })
        .collect();
    Ok(SectionModel { l, nvars: pres.nvars(), twists, sections })
}

fn identity_vectors(dim: usize) -> Vec<Vec<FieldElem>> {
    (0..dim)
        .map(|i| {
            let mut v = vec![0; dim];
            v[i] = 1;
            v
        })
        .collect()
}

/// Incrementally maintained row-echelon basis.
struct Echelon {
    f: Field,
    rows: Vec<(usize, Vec<FieldElem>)>,
    dim: usize,
}

impl Echelon {
    fn new(f: Field, dim: usize) -> Self {
        Echelon { f, rows: Vec::new(), dim }
    }

    /// Adds `v` if it is independent of the current span; returns whether it was.
    fn insert(&mut self, mut v: Vec<FieldElem>) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        let f = self.f;
        for (piv, row) in &self.rows {
            let c = v[*piv];
            if c != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    if r != 0 {
                        *x = f.sub(*x, f.mul(c, r));
                    }
                }
            }
        }
        match v.iter().position(|&x| x != 0) {
            None => false,
            Some(piv) => {
                let inv = f.inv(v[piv]);
                for x in v.iter_mut() {
                    *x = f.mul(*x, inv);
                }
                self.rows.push((piv, v));
                true
            }
        }
    }
}

/// Top cohomology model: the dual strand homology at position 0 in degree
/// `−l−n−1`, as vectors in the monomial bases dual to `⊕ H^n(O(a_i + l))`.
pub fn hn_dual_basis(f: Field, node: &SheafNode, l: i64) -> Result<SectionModel> {
    let pres = node.presentation(f)?;
    let n = pres.nvars() as i64 - 1;
    sections_of(f, &pres.dual(), -l - n - 1)
}

/// Settings for certifying composite nodes.
#[derive(Clone, Copy, Debug)]
pub struct CertOptions {
    /// Number of consecutive high degrees where strands off position 0 must vanish.
    pub high_degrees: usize,
    /// Random points where the fiber complex must be exact off position 0.
    pub points: usize,
    pub seed: u64,
}

impl Default for CertOptions {
    fn default() -> Self {
        CertOptions { high_degrees: 2, points: 12, seed: 1 }
    }
}

/// What was checked for a node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Certificate {
    Split,
    /// Maximal-minor ideal contains all forms of this degree.
    Epi { degree: i64 },
    /// Strand and fiber checks passed.
    Windowed { degrees: (i64, i64), points: usize },
    Composite(Vec<Certificate>),
}

/// Check the node's well-formedness certificates recursively.
pub fn certify(f: Field, node: &SheafNode, opts: CertOptions) -> Result<Certificate> {
    match node {
        SheafNode::LineSum { .. } => Ok(Certificate::Split),
        SheafNode::KerEpi(m) => {
            let bound = epi_degree_bound(m);
            match epi_certificate(f, m, bound) {
                Some(degree) => Ok(Certificate::Epi { degree }),
                None => Err(Error::Uncertified(format!("map is not an epimorphism (checked up to degree {bound})"))),
            }
        }
        SheafNode::Twist { node, .. } => certify(f, node, opts),
        SheafNode::Sum(v) => Ok(Certificate::Composite(v.iter().map(|x| certify(f, x, opts)).collect::<Result<_>>()?)),
        SheafNode::KerInto { target, .. }
        | SheafNode::SubQuot { target, .. }
        | SheafNode::Dual(target)
        | SheafNode::P(target) => {
            let inner = certify(f, target, opts)?;
            let own = windowed(f, node, opts)?;
            Ok(Certificate::Composite(vec![inner, own]))
        }
        SheafNode::Homology { .. } => windowed(f, node, opts),
    }
}

/// Degree `(n+1)(δ−1)+1` beyond which an ideal generated in degrees `≤ δ` with
/// no zeros must contain every form.
pub fn epi_degree_bound(m: &GradedMatrix) -> i64 {
    let n = m.nvars() as i64 - 1;
    let t = m.nrows();
    let mut src: Vec<i64> = m.src().to_vec();
    src.sort_unstable();
    // largest minor degree: the t smallest source twists
    let delta: i64 = m.tgt().iter().sum::<i64>() - src.iter().take(t).sum::<i64>();
    (n + 1) * (delta - 1).max(0) + 1
}

fn windowed(f: Field, node: &SheafNode, opts: CertOptions) -> Result<Certificate> {
    let pres = node.presentation(f)?;
    let off: Vec<i64> = (pres.lo()..=pres.hi()).filter(|&p| p != 0).collect();
    let top = pres.all_twists().map(|a| a.abs()).max().unwrap_or(0) + 1;
    let degrees = (top, top + opts.high_degrees as i64 - 1);
    let rep = pres.verify_exact(f, degrees, &off);
    if let Some((p, l, d)) = rep.failures().first() {
        return Err(Error::Uncertified(format!("homology {d} at position {p} in degree {l}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let rank = pres.euler_rank();
    for _ in 0..opts.points {
        let x = random_point(f, pres.nvars(), &mut rng);
        let h = pres.fiber_homology(f, &x);
        if h.iter().any(|(&p, &d)| p != 0 && d != 0) || h.get(&0).copied().unwrap_or(0) as i64 != rank {
            return Err(Error::Uncertified(format!("fiber complex not exact off position 0 at {:?}", x.coords())));
        }
    }
    Ok(Certificate::Windowed { degrees, points: opts.points })
}

/// `P(E)` after checking global generation by sampling.
pub fn p_transform(f: Field, node: &SheafNode, trials: usize, seed: u64) -> Result<SheafNode> {
    let verdict = crate::geomtests::is_globally_generated(f, node, trials, seed, &[])?;
    if let Some(w) = verdict.witness() {
        return Err(Error::NotGenerated(w));
    }
    Ok(node.clone().p())
}
