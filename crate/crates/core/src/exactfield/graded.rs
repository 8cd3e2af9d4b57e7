use super::field::{Field, FieldElem};
use super::form::{basis_len, Form, MonomialIndex, PointP};
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Map of sums of line bundles `⊕_j O(src_j) → ⊕_i O(tgt_i)`.
///
/// Entry `(i, j)` is a form of degree `tgt_i − src_j`; it must vanish when
/// that difference is negative. In degree `l` the map acts as
/// `⊕_j S_{l+src_j} → ⊕_i S_{l+tgt_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMatrix {
    nvars: usize,
    src: Vec<i64>,
    tgt: Vec<i64>,
    entries: Vec<Vec<Form>>,
}

impl GradedMatrix {
    pub fn new(nvars: usize, src: Vec<i64>, tgt: Vec<i64>, entries: Vec<Vec<Form>>) -> Result<Self> {
        if entries.len() != tgt.len() || entries.iter().any(|r| r.len() != src.len()) {
            return Err(Error::Shape(format!(
                "entries are not {}x{}",
                tgt.len(),
                src.len()
            )));
        }
        let mut entries = entries;
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                let d = tgt[i] - src[j];
                if e.nvars() != nvars {
                    return Err(Error::Shape(format!("entry ({i},{j}) has wrong variable count")));
                }
                if e.is_zero() {
                    *e = Form::zero(nvars, d.max(0) as u32);
                } else if d < 0 || e.degree() as i64 != d {
                    return Err(Error::Degree(format!(
                        "entry ({i},{j}) has degree {} but twists require {d}",
                        e.degree()
                    )));
                }
            }
        }
        Ok(GradedMatrix { nvars, src, tgt, entries })
    }

    pub fn zero(nvars: usize, src: Vec<i64>, tgt: Vec<i64>) -> Self {
        let entries = tgt
            .iter()
            .map(|&b| src.iter().map(|&a| Form::zero(nvars, (b - a).max(0) as u32)).collect())
            .collect();
        GradedMatrix { nvars, src, tgt, entries }
    }

    pub fn identity(f: Field, nvars: usize, twists: Vec<i64>) -> Self {
        let mut m = GradedMatrix::zero(nvars, twists.clone(), twists);
        for i in 0..m.tgt.len() {
            m.entries[i][i] = Form::constant(f, nvars, 1);
        }
        m
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn src(&self) -> &[i64] {
        &self.src
    }

    pub fn tgt(&self) -> &[i64] {
        &self.tgt
    }

    pub fn nrows(&self) -> usize {
        self.tgt.len()
    }

    pub fn ncols(&self) -> usize {
        self.src.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Form {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<Form>] {
        &self.entries
    }

    pub fn set_entry(&mut self, i: usize, j: usize, e: Form) -> Result<()> {
        let d = self.tgt[i] - self.src[j];
        if e.is_zero() {
            self.entries[i][j] = Form::zero(self.nvars, d.max(0) as u32);
            return Ok(());
        }
        if e.degree() as i64 != d {
            return Err(Error::Degree(format!("entry ({i},{j}) needs degree {d}")));
        }
        self.entries[i][j] = e;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|e| e.is_zero())
    }

    /// Matrix of the induced map in degree `l`, in monomial-basis coordinates.
    pub fn graded_piece(&self, f: Field, l: i64) -> Matrix {
        let mut idx = MonomialIndex::new(self.nvars);
        self.graded_piece_with(f, l, &mut idx)
    }

    pub fn graded_piece_with(&self, f: Field, l: i64, idx: &mut MonomialIndex) -> Matrix {
        let col_dims: Vec<usize> = self.src.iter().map(|&a| basis_len(self.nvars, l + a)).collect();
        let row_dims: Vec<usize> = self.tgt.iter().map(|&b| basis_len(self.nvars, l + b)).collect();
        let col_off = offsets(&col_dims);
        let row_off = offsets(&row_dims);
        let mut m = Matrix::zeros(row_off[row_dims.len()], col_off[col_dims.len()]);
        for j in 0..self.src.len() {
            if col_dims[j] == 0 {
                continue;
            }
            let basis: Vec<Vec<u32>> = idx.basis(l + self.src[j]).to_vec();
            for i in 0..self.tgt.len() {
                let e = &self.entries[i][j];
                if e.is_zero() || row_dims[i] == 0 {
                    continue;
                }
                for (k, mono) in basis.iter().enumerate() {
                    for (te, &c) in e.terms() {
                        let prod: Vec<u32> = mono.iter().zip(te).map(|(a, b)| a + b).collect();
                        let r = row_off[i] + idx.index_of(&prod);
                        let col = col_off[j] + k;
                        let v = f.add(m.get(r, col), c);
                        m.set(r, col, v);
                    }
                }
            }
        }
        m
    }

    /// Entrywise evaluation at a point.
    pub fn evaluate(&self, f: Field, x: &PointP) -> Matrix {
        let mut m = Matrix::zeros(self.nrows(), self.ncols());
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                m.set(i, j, self.entries[i][j].eval(f, x.coords()));
            }
        }
        m
    }

    /// `self ∘ other`.
    pub fn compose(&self, f: Field, other: &GradedMatrix) -> Result<GradedMatrix> {
        if self.src != other.tgt {
            return Err(Error::Shape(format!(
                "cannot compose: source {:?} vs target {:?}",
                self.src, other.tgt
            )));
        }
        let mut out = GradedMatrix::zero(self.nvars, other.src.clone(), self.tgt.clone());
        for i in 0..self.nrows() {
            for j in 0..other.ncols() {
                let mut acc = Form::zero(self.nvars, (self.tgt[i] - other.src[j]).max(0) as u32);
                for k in 0..self.ncols() {
                    let a = &self.entries[i][k];
                    let b = &other.entries[k][j];
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(f, &a.mul(f, b));
                }
                out.entries[i][j] = acc;
            }
        }
        Ok(out)
    }

    pub fn add(&self, f: Field, other: &GradedMatrix) -> Result<GradedMatrix> {
        if self.src != other.src || self.tgt != other.tgt {
            return Err(Error::Shape("adding matrices with different twists".into()));
        }
        let mut out = self.clone();
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                out.entries[i][j] = self.entries[i][j].add(f, &other.entries[i][j]);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, f: Field, c: FieldElem) -> GradedMatrix {
        let mut out = self.clone();
        for row in out.entries.iter_mut() {
            for e in row.iter_mut() {
                *e = e.scale(f, c);
            }
        }
        out
    }

    pub fn neg(&self, f: Field) -> GradedMatrix {
        self.scale(f, f.neg(1))
    }

    /// Dual map: transpose with negated twists.
    pub fn dual(&self) -> GradedMatrix {
        let src: Vec<i64> = self.tgt.iter().map(|t| -t).collect();
        let tgt: Vec<i64> = self.src.iter().map(|t| -t).collect();
        let entries = (0..self.ncols())
            .map(|j| (0..self.nrows()).map(|i| self.entries[i][j].clone()).collect())
            .collect();
        GradedMatrix { nvars: self.nvars, src, tgt, entries }
    }

    pub fn twist(&self, l: i64) -> GradedMatrix {
        GradedMatrix {
            nvars: self.nvars,
            src: self.src.iter().map(|a| a + l).collect(),
            tgt: self.tgt.iter().map(|b| b + l).collect(),
            entries: self.entries.clone(),
        }
    }

    /// Block matrix `[[a, b], [c, d]]`; the blocks must share twists.
    pub fn block(a: &GradedMatrix, b: &GradedMatrix, c: &GradedMatrix, d: &GradedMatrix) -> Result<GradedMatrix> {
        if a.tgt != b.tgt || c.tgt != d.tgt || a.src != c.src || b.src != d.src {
            return Err(Error::Shape("incompatible blocks".into()));
        }
        let src = [a.src.clone(), b.src.clone()].concat();
        let tgt = [a.tgt.clone(), c.tgt.clone()].concat();
        let mut entries = Vec::new();
        for i in 0..a.nrows() {
            entries.push([a.entries[i].clone(), b.entries[i].clone()].concat());
        }
        for i in 0..c.nrows() {
            entries.push([c.entries[i].clone(), d.entries[i].clone()].concat());
        }
        Ok(GradedMatrix { nvars: a.nvars, src, tgt, entries })
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> GradedMatrix {
        GradedMatrix {
            nvars: self.nvars,
            src: cols.iter().map(|&j| self.src[j]).collect(),
            tgt: rows.iter().map(|&i| self.tgt[i]).collect(),
            entries: rows
                .iter()
                .map(|&i| cols.iter().map(|&j| self.entries[i][j].clone()).collect())
                .collect(),
        }
    }

    /// Substitute each variable by a form of common degree `e` in `m` new
    /// variables; twists are multiplied by `e` (linear substitutions keep them).
    pub fn substitute(&self, f: Field, images: &[Form]) -> GradedMatrix {
        let m = images[0].nvars();
        let e = images.iter().map(|g| g.degree()).max().unwrap_or(1) as i64;
        let entries = self
            .entries
            .iter()
            .map(|row| row.iter().map(|x| x.substitute(f, images)).collect())
            .collect();
        GradedMatrix {
            nvars: m,
            src: self.src.iter().map(|a| a * e).collect(),
            tgt: self.tgt.iter().map(|b| b * e).collect(),
            entries,
        }
    }

    /// All maximal minors (size `min(rows, cols)`), rows/cols in lex order.
    pub fn maximal_minors(&self, f: Field) -> Vec<Form> {
        let t = self.nrows().min(self.ncols());
        let rows_sets = subsets(self.nrows(), t);
        let cols_sets = subsets(self.ncols(), t);
        let mut out = Vec::new();
        for rs in &rows_sets {
            for cs in &cols_sets {
                out.push(self.minor(f, rs, cs));
            }
        }
        out
    }

    /// Determinant of the submatrix on the given rows and columns.
    pub fn minor(&self, f: Field, rows: &[usize], cols: &[usize]) -> Form {
        let deg: i64 = rows.iter().map(|&i| self.tgt[i]).sum::<i64>() - cols.iter().map(|&j| self.src[j]).sum::<i64>();
        let mut out = Form::zero(self.nvars, deg.max(0) as u32);
        if rows.is_empty() {
            return Form::constant(f, self.nvars, 1);
        }
        // Laplace expansion along the first row
        let i0 = rows[0];
        for (k, &j) in cols.iter().enumerate() {
            let a = &self.entries[i0][j];
            if a.is_zero() {
                continue;
            }
            let rest_cols: Vec<usize> = cols.iter().copied().filter(|&c| c != j).collect();
            let sub = self.minor(f, &rows[1..], &rest_cols);
            if sub.is_zero() {
                continue;
            }
            let mut t = a.mul(f, &sub);
            if k % 2 == 1 {
                t = t.neg(f);
            }
            out = out.add(f, &t);
        }
        if out.is_zero() {
            Form::zero(self.nvars, deg.max(0) as u32)
        } else {
            out
        }
    }
}

pub(crate) fn offsets(dims: &[usize]) -> Vec<usize> {
    let mut off = vec![0; dims.len() + 1];
    for (i, d) in dims.iter().enumerate() {
        off[i + 1] = off[i] + d;
    }
    off
}

/// `k`-element subsets of `0..n` in lex order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}
