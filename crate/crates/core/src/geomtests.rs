//! Geometric predicates: epimorphism certificates, Cayley–Bacharach,
//! splitting types on lines and global generation.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactfield::{
    basis_len, det, ideal_piece, monomial_basis, rank, BinaryForm, Field, FieldElem, Form, GradedMatrix, Matrix,
    PointP,
};
use crate::freecomplex::FreeComplex;
use crate::sheafcoh::{coh_table_of_complex, sections_of, SheafNode};

/// Uniform point of `P^{nvars−1}(F_p)` (rejection of the zero vector).
pub fn random_point<R: Rng>(f: Field, nvars: usize, rng: &mut R) -> PointP {
    loop {
        let c: Vec<FieldElem> = (0..nvars).map(|_| rng.gen_range(0..f.p())).collect();
        if let Ok(p) = PointP::new(c) {
            return p;
        }
    }
}

/// Smallest `d ≤ max_degree` with `S_d` inside the maximal-minor ideal.
pub fn epi_certificate(f: Field, m: &GradedMatrix, max_degree: i64) -> Option<i64> {
    if m.nrows() == 0 {
        return Some(0);
    }
    if m.ncols() < m.nrows() {
        return None;
    }
    let minors: Vec<Form> = m.maximal_minors(f).into_iter().filter(|g| !g.is_zero()).collect();
    let lowest = minors.iter().map(|g| g.degree() as i64).min()?;
    (lowest..=max_degree).find(|&d| ideal_piece(f, &minors, d).len() == basis_len(m.nvars(), d))
}

/// Whether every degree-`d` form through all points but one also passes
/// through the remaining one.
pub fn cayley_bacharach(f: Field, points: &[PointP], d: i64) -> Result<bool> {
    let normalized: Vec<PointP> = points.iter().map(|p| p.normalized(f)).collect();
    for i in 0..normalized.len() {
        if normalized[i + 1..].contains(&normalized[i]) {
            return Err(Error::Degenerate("repeated point".into()));
        }
    }
    if points.is_empty() || d < 0 {
        return Ok(true);
    }
    let nvars = points[0].nvars();
    let mons = monomial_basis(nvars, d);
    let eval_rows = |pts: &[&PointP]| -> Matrix {
        let rows: Vec<Vec<FieldElem>> = pts
            .iter()
            .map(|p| mons.iter().map(|e| Form::monomial(f, e.clone(), 1).eval(f, p.coords())).collect())
            .collect();
        Matrix::from_rows(&rows, mons.len())
    };
    let all: Vec<&PointP> = points.iter().collect();
    let r_all = rank(f, &eval_rows(&all));
    for i in 0..points.len() {
        let rest: Vec<&PointP> = points.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p).collect();
        if rank(f, &eval_rows(&rest)) != r_all {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Line spanned by two points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineParam {
    p: Vec<FieldElem>,
    q: Vec<FieldElem>,
}

impl LineParam {
    pub fn new(f: Field, p: &PointP, q: &PointP) -> Result<Self> {
        let m = Matrix::from_rows(&[p.coords().to_vec(), q.coords().to_vec()], p.nvars());
        if p.nvars() != q.nvars() || rank(f, &m) != 2 {
            return Err(Error::Degenerate("points do not span a line".into()));
        }
        Ok(LineParam { p: p.coords().to_vec(), q: q.coords().to_vec() })
    }

    pub fn from_ints(f: Field, p: &[i64], q: &[i64]) -> Result<Self> {
        LineParam::new(f, &PointP::from_ints(f, p)?, &PointP::from_ints(f, q)?)
    }

    pub fn points(&self) -> (&[FieldElem], &[FieldElem]) {
        (&self.p, &self.q)
    }

    /// `X_i ↦ p_i T_0 + q_i T_1`.
    pub fn images(&self, f: Field) -> Vec<Form> {
        self.p
            .iter()
            .zip(&self.q)
            .map(|(&a, &b)| Form::from_terms(f, 2, 1, vec![(vec![1, 0], a), (vec![0, 1], b)]).expect("linear form"))
            .collect()
    }

    /// `u·p + v·q`.
    pub fn point_at(&self, f: Field, u: FieldElem, v: FieldElem) -> PointP {
        PointP::new(self.p.iter().zip(&self.q).map(|(&a, &b)| f.add(f.mul(u, a), f.mul(v, b))).collect())
            .expect("independent spanning points")
    }
}

/// Splitting degrees of `E|_L`, descending.
pub fn splitting_type_on_line(f: Field, node: &SheafNode, line: &LineParam) -> Result<Vec<i64>> {
    let pres = node.presentation(f)?;
    splitting_of_complex(f, &pres, line)
}

pub fn splitting_of_complex(f: Field, pres: &FreeComplex, line: &LineParam) -> Result<Vec<i64>> {
    let restricted = pres.substitute(f, &line.images(f));
    let rank_e = restricted.euler_rank();
    let c1: i64 = (restricted.lo()..=restricted.hi())
        .map(|p| if p.rem_euclid(2) == 0 { 1 } else { -1 } * restricted.term(p).iter().sum::<i64>())
        .sum();
    let bound = restricted.all_twists().map(|a| a.abs()).sum::<i64>() + 2;
    let off: Vec<i64> = (restricted.lo()..=restricted.hi()).filter(|&p| p != 0).collect();
    if !restricted.verify_exact(f, (bound, bound + 1), &off).is_exact() {
        return Err(degenerate_restriction(f, pres, line));
    }
    let table = coh_table_of_complex(f, &restricted, (-bound - 1, bound))
        .map_err(|_| degenerate_restriction(f, pres, line))?;
    let h0 = |l: i64| table.h(0, l);
    let mut out = Vec::new();
    // #{b_i ≥ −l} = h0(l) − h0(l−1)
    let mut prev_count = 0;
    for l in -bound..=bound {
        let (Some(a), Some(b)) = (h0(l), h0(l - 1)) else {
            return Err(degenerate_restriction(f, pres, line));
        };
        let count = a - b;
        for _ in prev_count..count {
            out.push(-l);
        }
        prev_count = count.max(prev_count);
    }
    if out.len() as i64 != rank_e || out.iter().sum::<i64>() != c1 {
        return Err(degenerate_restriction(f, pres, line));
    }
    Ok(out)
}

fn degenerate_restriction(f: Field, pres: &FreeComplex, line: &LineParam) -> Error {
    let mut msg = String::from("restriction to the line is not a vector bundle");
    if pres.lo() == 0 && pres.hi() == 1 {
        let m = pres.diff(0).substitute(f, &line.images(f));
        let minors: Vec<BinaryForm> = m.maximal_minors(f).iter().map(BinaryForm::from_form).collect();
        if let Some(g) = BinaryForm::gcd(f, &minors) {
            msg.push_str(&format!("; degeneracy divisor {}", g.to_form(f).to_string(f)));
        }
    }
    Error::Degenerate(msg)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GgHint {
    Point(PointP),
    Line(LineParam),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GgStatus {
    GeneratedUpToSampling,
    NotGeneratedAtPoint(Vec<FieldElem>),
    NotGeneratedOnLine { line: LineParam, splitting: Vec<i64> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GgVerdict {
    pub status: GgStatus,
    pub trials: usize,
    pub seed: u64,
}

impl GgVerdict {
    pub fn is_generated(&self) -> bool {
        self.status == GgStatus::GeneratedUpToSampling
    }

    pub fn witness(&self) -> Option<String> {
        match &self.status {
            GgStatus::GeneratedUpToSampling => None,
            GgStatus::NotGeneratedAtPoint(x) => Some(format!("sections do not span the fiber at {x:?}")),
            GgStatus::NotGeneratedOnLine { line, splitting } => {
                let (p, q) = line.points();
                Some(format!("splitting type {splitting:?} on the line through {p:?} and {q:?}"))
            }
        }
    }
}

/// Whether global sections span the fiber at `x`: `rank[s(x) | d^{−1}(x)]`
/// equals `dim ker d^0(x)`.
pub fn generated_at(f: Field, pres: &FreeComplex, sections: &Matrix, x: &PointP) -> bool {
    let d0 = pres.diff(0).evaluate(f, x);
    let fiber = pres.term(0).len() - rank(f, &d0);
    let m = if pres.term(-1).is_empty() {
        sections.clone()
    } else {
        sections.hstack(&pres.diff(-1).evaluate(f, x))
    };
    rank(f, &m) == fiber
}

/// Sampling test for global generation, with exact negative witnesses.
pub fn is_globally_generated(f: Field, node: &SheafNode, trials: usize, seed: u64, hints: &[GgHint]) -> Result<GgVerdict> {
    let pres = node.presentation(f)?;
    let model = sections_of(f, &pres, 0)?;
    let verdict = |status| GgVerdict { status, trials, seed };
    for h in hints {
        if let GgHint::Line(line) = h {
            let splitting = splitting_of_complex(f, &pres, line)?;
            if splitting.iter().any(|&b| b < 0) {
                return Ok(verdict(GgStatus::NotGeneratedOnLine { line: line.clone(), splitting }));
            }
        }
    }
    let mut points: Vec<PointP> = hints
        .iter()
        .filter_map(|h| match h {
            GgHint::Point(x) => Some(x.clone()),
            GgHint::Line(_) => None,
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    points.extend((0..trials).map(|_| random_point(f, pres.nvars(), &mut rng)));
    for x in points {
        if !generated_at(f, &pres, &model.evaluate(f, &x), &x) {
            return Ok(verdict(GgStatus::NotGeneratedAtPoint(x.coords().to_vec())));
        }
    }
    Ok(verdict(GgStatus::GeneratedUpToSampling))
}

/// Re-check a negative verdict from scratch.
pub fn verify_witness(f: Field, node: &SheafNode, verdict: &GgVerdict) -> Result<bool> {
    match &verdict.status {
        GgStatus::GeneratedUpToSampling => Ok(false),
        GgStatus::NotGeneratedAtPoint(x) => {
            let pres = node.presentation(f)?;
            let model = sections_of(f, &pres, 0)?;
            let x = PointP::new(x.clone())?;
            Ok(!generated_at(f, &pres, &model.evaluate(f, &x), &x))
        }
        GgStatus::NotGeneratedOnLine { line, .. } => {
            Ok(splitting_type_on_line(f, node, line)?.iter().any(|&b| b < 0))
        }
    }
}

/// Whether the line through `p`, `q` avoids the six edges of the
/// tetrahedron with vertices `z`.
pub fn edge_avoidance(f: Field, line: &LineParam, z: &[PointP; 4]) -> Result<bool> {
    if line.p.len() != 4 || z.iter().any(|x| x.nvars() != 4) {
        return Err(Error::Degenerate("edge avoidance lives in P^3".into()));
    }
    let tet = Matrix::from_rows(&z.iter().map(|x| x.coords().to_vec()).collect::<Vec<_>>(), 4);
    if det(f, &tet) == 0 {
        return Err(Error::Degenerate("the four points are coplanar".into()));
    }
    for x in z {
        let m = Matrix::from_rows(&[line.p.clone(), line.q.clone(), x.coords().to_vec()], 4);
        if rank(f, &m) < 3 {
            return Err(Error::Degenerate("the line passes through a vertex".into()));
        }
    }
    for i in 0..4 {
        for j in i + 1..4 {
            let m = Matrix::from_rows(
                &[line.p.clone(), line.q.clone(), z[i].coords().to_vec(), z[j].coords().to_vec()],
                4,
            );
            if det(f, &m) == 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Bidegree `(1,3)` forms are stored as coefficient vectors over
/// `u_a v_0^{3−b} v_1^b`, index `4a + b`.
pub type Bidegree13 = [FieldElem; 8];

/// Whether no nonzero element of `span(lambda)` is divisible by a
/// `(1,0)`-form, decided by the gcd of the 7×7 minors as quartics in the
/// pencil parameter.
pub fn quadric_line_component_test(f: Field, lambda: &[Bidegree13]) -> Result<bool> {
    let lm = Matrix::from_cols(&lambda.iter().map(|c| c.to_vec()).collect::<Vec<_>>(), 8);
    if lambda.len() != 3 || rank(f, &lm) != 3 {
        return Err(Error::Degenerate("the subspace must be 3-dimensional".into()));
    }
    // columns: (s u_0 + t u_1) v-cubics, then the basis of the subspace
    let build = |s: FieldElem, t: FieldElem| -> Matrix {
        let mut cols = Vec::with_capacity(7);
        for b in 0..4 {
            let mut c = vec![0; 8];
            c[b] = s;
            c[4 + b] = t;
            cols.push(c);
        }
        cols.extend(lambda.iter().map(|c| c.to_vec()));
        Matrix::from_cols(&cols, 8)
    };
    let samples = BinaryForm::sample_points(4);
    let mut quartics = Vec::with_capacity(8);
    for drop in 0..8 {
        let rows: Vec<usize> = (0..8).filter(|&r| r != drop).collect();
        let vals: Vec<FieldElem> =
            samples.iter().map(|&(s, t)| det(f, &build(s, t).select_rows(&rows))).collect();
        quartics.push(BinaryForm::interpolate(f, 4, &vals));
    }
    Ok(match BinaryForm::gcd(f, &quartics) {
        None => false,
        Some(g) => g.degree() == 0,
    })
}
