use super::field::{Field, FieldElem};

/// Dense row-major matrix over a prime field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<FieldElem>], cols: usize) -> Self {
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols);
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_cols(cols: &[Vec<FieldElem>], rows: usize) -> Self {
        let mut m = Matrix::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, f: Field, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let v = f.add(out.get(i, j), f.mul(a, b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, f: Field, v: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Matrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j));
            }
        }
        m
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let rows: Vec<Vec<FieldElem>> = idx.iter().map(|&i| self.row(i).to_vec()).collect();
        Matrix::from_rows(&rows, self.cols)
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (jj, &j) in idx.iter().enumerate() {
                m.set(i, jj, self.get(i, j));
            }
        }
        m
    }

    /// Gaussian elimination in place. Returns pivot columns. With `reduce`
    /// the result is the reduced row echelon form, otherwise only echelon.
    fn eliminate(&mut self, f: Field, reduce: bool) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        let mut nz: Vec<usize> = Vec::with_capacity(cols);
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for k in c..cols {
                    self.data.swap(pr * cols + k, r * cols + k);
                }
            }
            let inv = f.inv(self.data[r * cols + c]);
            nz.clear();
            for k in c..cols {
                let v = self.data[r * cols + k];
                if v != 0 {
                    self.data[r * cols + k] = f.mul(v, inv);
                    nz.push(k);
                }
            }
            let start = if reduce { 0 } else { r + 1 };
            for i in start..rows {
                if i == r {
                    continue;
                }
                let a = self.data[i * cols + c];
                if a == 0 {
                    continue;
                }
                let na = f.neg(a);
                for &k in &nz {
                    let idx = i * cols + k;
                    self.data[idx] = f.add(self.data[idx], f.mul(na, self.data[r * cols + k]));
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }
}

/// Reduced row echelon form and its pivot columns.
pub fn rref(f: Field, m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let piv = a.eliminate(f, true);
    (a, piv)
}

pub fn rank(f: Field, m: &Matrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    // eliminate along the shorter side
    let mut a = if m.rows > m.cols { m.transpose() } else { m.clone() };
    a.eliminate(f, false).len()
}

/// Basis of the right kernel, one vector per free column of the reduced
/// echelon form (with a 1 in that column). Deterministic.
pub fn kernel_basis(f: Field, m: &Matrix) -> Vec<Vec<FieldElem>> {
    let (r, piv) = rref(f, m);
    let cols = m.cols;
    let mut is_piv = vec![false; cols];
    for &c in &piv {
        is_piv[c] = true;
    }
    let mut out = Vec::new();
    for free in (0..cols).filter(|&c| !is_piv[c]) {
        let mut v = vec![0; cols];
        v[free] = 1;
        for (row, &pc) in piv.iter().enumerate() {
            v[pc] = f.neg(r.get(row, free));
        }
        out.push(v);
    }
    out
}

/// Some solution of `m x = b`, or `None` when the system is inconsistent.
pub fn solve(f: Field, m: &Matrix, b: &[FieldElem]) -> Option<Vec<FieldElem>> {
    assert_eq!(m.rows, b.len());
    let bm = Matrix::from_cols(&[b.to_vec()], m.rows);
    let aug = m.hstack(&bm);
    let (r, piv) = rref(f, &aug);
    if piv.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![0; m.cols];
    for (row, &pc) in piv.iter().enumerate() {
        x[pc] = r.get(row, m.cols);
    }
    Some(x)
}

/// Basis (in echelon form) of the span of the given vectors.
pub fn span_basis(f: Field, vecs: &[Vec<FieldElem>], dim: usize) -> Vec<Vec<FieldElem>> {
    if vecs.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_rows(vecs, dim);
    let (r, piv) = rref(f, &m);
    (0..piv.len()).map(|i| r.row(i).to_vec()).collect()
}

/// Determinant of a square matrix.
pub fn det(f: Field, m: &Matrix) -> FieldElem {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut a = m.clone();
    let mut d = 1;
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| a.get(i, c) != 0) else {
            return 0;
        };
        if pr != c {
            for k in 0..n {
                let t = a.get(pr, k);
                a.set(pr, k, a.get(c, k));
                a.set(c, k, t);
            }
            d = f.neg(d);
        }
        let pv = a.get(c, c);
        d = f.mul(d, pv);
        let inv = f.inv(pv);
        for i in c + 1..n {
            let factor = f.mul(a.get(i, c), inv);
            if factor == 0 {
                continue;
            }
            for k in c..n {
                let v = f.sub(a.get(i, k), f.mul(factor, a.get(c, k)));
                a.set(i, k, v);
            }
        }
    }
    d
}
