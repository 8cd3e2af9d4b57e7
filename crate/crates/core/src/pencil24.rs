//! Stability and orbit classification of 2×4 matrices of linear forms in four
//! variables, through the associated 4×4 pencil of binary linear forms.

use crate::exactfield::*;
use crate::{Error, Result};
use serde::Serialize;

/// A map `O^4 → O(1)^2` on `P^3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMatrix2x4(GradedMatrix);

impl LinearMatrix2x4 {
    pub fn new(m: GradedMatrix) -> Result<Self> {
        if m.nvars() != 4 || m.nrows() != 2 || m.ncols() != 4 {
            return Err(Error::Shape("expected a 2x4 matrix in four variables".into()));
        }
        if m.src().iter().any(|&a| a != 0) || m.tgt().iter().any(|&b| b != 1) {
            return Err(Error::Degree("expected source O^4 and target O(1)^2".into()));
        }
        Ok(LinearMatrix2x4(m))
    }

    pub fn from_strs(f: Field, rows: [[&str; 4]; 2]) -> Result<Self> {
        let entries = rows
            .iter()
            .map(|r| r.iter().map(|s| Form::parse(f, s, 4, 1)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        LinearMatrix2x4::new(GradedMatrix::new(4, vec![0; 4], vec![1, 1], entries)?)
    }

    /// Two non-empty lines of four comma-separated linear forms.
    pub fn parse(f: Field, text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
        if lines.len() != 2 {
            return Err(Error::Parse(format!("expected 2 rows, found {}", lines.len())));
        }
        let mut rows = [[""; 4]; 2];
        for (r, line) in lines.iter().enumerate() {
            let parts: Vec<&str> = line.split(',').map(str::trim).collect();
            if parts.len() != 4 {
                return Err(Error::Parse(format!("row {r} has {} entries", parts.len())));
            }
            rows[r].copy_from_slice(&parts);
        }
        LinearMatrix2x4::from_strs(f, rows)
    }

    pub fn matrix(&self) -> &GradedMatrix {
        &self.0
    }

    /// Coefficient of `X_i` in entry `(r, j)`.
    pub fn coeff(&self, r: usize, j: usize, i: usize) -> FieldElem {
        let mut e = vec![0; 4];
        e[i] = 1;
        self.0.entry(r, j).coeff(&e)
    }

    /// `g2 · A(g_s x) · g4` for invertible 2×2, 4×4 and 4×4 matrices; `g_s`
    /// acts on the variables.
    pub fn act(&self, f: Field, g2: &Matrix, gs: &Matrix, g4: &Matrix) -> Result<Self> {
        let lin = |row: &[FieldElem]| {
            Form::from_terms(f, 4, 1, (0..4).filter(|&k| row[k] != 0).map(|k| (unit(k), row[k]))).expect("linear form")
        };
        let images: Vec<Form> = (0..4).map(|i| lin(gs.row(i))).collect();
        let a = self.0.substitute(f, &images);
        let left = constant_matrix(f, g2, vec![1, 1], vec![1, 1]);
        let right = constant_matrix(f, g4, vec![0; 4], vec![0; 4]);
        LinearMatrix2x4::new(left.compose(f, &a)?.compose(f, &right)?)
    }

    /// Rows of `A` as coefficient vectors in `k^2 ⊗ S_1`, one per column.
    fn columns(&self) -> Matrix {
        let cols: Vec<Vec<FieldElem>> =
            (0..4).map(|j| (0..2).flat_map(|r| (0..4).map(move |i| (r, i))).map(|(r, i)| self.coeff(r, j, i)).collect()).collect();
        Matrix::from_cols(&cols, 8)
    }
}

fn unit(k: usize) -> Exps {
    let mut e = vec![0; 4];
    e[k] = 1;
    e
}

fn constant_matrix(f: Field, m: &Matrix, src: Vec<i64>, tgt: Vec<i64>) -> GradedMatrix {
    let entries = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| Form::constant(f, 4, f.signed(m.get(i, j)))).collect())
        .collect();
    GradedMatrix::new(4, src, tgt, entries).expect("constant matrix")
}

/// The pencil `ψ`: entry `(i, j)` is `c0·T0 + c1·T1` where `c_r` is the
/// coefficient of `X_i` in row `r`, column `j` of `A`.
pub fn to_pencil(f: Field, a: &LinearMatrix2x4) -> GradedMatrix {
    let entries = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    let (c0, c1) = (a.coeff(0, j, i), a.coeff(1, j, i));
                    Form::from_terms(f, 2, 1, [(vec![1, 0], c0), (vec![0, 1], c1)].into_iter().filter(|t| t.1 != 0))
                        .expect("binary linear form")
                })
                .collect()
        })
        .collect();
    GradedMatrix::new(2, vec![0; 4], vec![1; 4], entries).expect("pencil shape")
}

/// `det ψ`, a binary quartic (zero when `ψ` drops rank generically).
pub fn pencil_det(f: Field, a: &LinearMatrix2x4) -> BinaryForm {
    let psi = to_pencil(f, a);
    let d = psi.minor(f, &[0, 1, 2, 3], &[0, 1, 2, 3]);
    if d.is_zero() {
        BinaryForm::zero(4)
    } else {
        BinaryForm::from_form(&d)
    }
}

fn is_injective(f: Field, a: &LinearMatrix2x4) -> bool {
    rank(f, &a.columns()) == 4
}

fn has_rank3_everywhere(f: Field, psi: &GradedMatrix) -> bool {
    let mut minors = Vec::new();
    for rs in subsets(4, 3) {
        for cs in subsets(4, 3) {
            let m = psi.minor(f, &rs, &cs);
            if !m.is_zero() {
                minors.push(BinaryForm::from_form(&m));
            }
        }
    }
    BinaryForm::gcd(f, &minors).is_some_and(|g| g.is_unit())
}

pub fn is_stable(f: Field, a: &LinearMatrix2x4) -> bool {
    is_injective(f, a) && has_rank3_everywhere(f, &to_pencil(f, a))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PencilTag {
    NotInjective,
    NotStable,
    Case(u8),
}

/// `None` when `A` is stable.
pub fn instability(f: Field, a: &LinearMatrix2x4) -> Option<PencilTag> {
    if !is_injective(f, a) {
        Some(PencilTag::NotInjective)
    } else if !has_rank3_everywhere(f, &to_pencil(f, a)) {
        Some(PencilTag::NotStable)
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degeneracy {
    pub text: String,
    /// The 2×2 minors of `A`.
    pub minors: Vec<Form>,
    /// Rational points of the support (all of it for Cases 6–8 only through
    /// the span below).
    pub points: Vec<PointP>,
    /// Linear equations of the linear span of the support, when known.
    pub span_equations: Vec<Form>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilClass {
    pub tag: PencilTag,
    /// Root multiplicities of `det ψ` (Cases 1–5).
    pub partition: Option<Vec<usize>>,
    /// Degree of `Coker ψ` (Cases 6–8).
    pub m: Option<u32>,
    /// Degree of the minimal syzygy of `ψ` (Cases 6–8).
    pub e: Option<u32>,
    pub canonical: Option<LinearMatrix2x4>,
    /// Why no canonical form was produced.
    pub canonical_note: Option<String>,
    pub degeneracy: Degeneracy,
}

fn case_of_partition(p: &[usize]) -> Option<u8> {
    match p {
        [1, 1, 1, 1] => Some(1),
        [2, 1, 1] => Some(2),
        [2, 2] => Some(3),
        [3, 1] => Some(4),
        [4] => Some(5),
        _ => None,
    }
}

const CANONICAL: [[[&str; 4]; 2]; 9] = [
    [["0"; 4], ["0"; 4]],
    [["x0", "x1", "x2", "x3"], ["0", "0", "x2", "0"]],
    [["x0", "x1", "x2", "x3"], ["0", "x1", "x3", "0"]],
    [["x0", "x1", "x2", "x3"], ["x0+x1", "x1", "x3", "0"]],
    [["x0", "x1", "x2", "x3"], ["x0", "x2", "x3", "0"]],
    [["x0", "x1", "x2", "x3"], ["x1", "x2", "x3", "0"]],
    [["x0", "x1", "x2", "0"], ["0", "x0", "x1", "x2"]],
    [["x0", "x1", "0", "x2"], ["0", "x0", "x1", "x3"]],
    [["x0", "0", "x1", "x2"], ["0", "x0", "x2", "x3"]],
];

/// Canonical representative of a case; `a` supplies `(a0, a1)` for Case 1 and
/// `a0` for Case 2.
pub fn canonical_matrix(f: Field, case: u8, a: &[FieldElem]) -> Result<LinearMatrix2x4> {
    if !(1..=8).contains(&case) {
        return Err(Error::Domain(format!("no case {case}")));
    }
    let mut m = LinearMatrix2x4::from_strs(f, CANONICAL[case as usize])?.0;
    let need = match case {
        1 => 2,
        2 => 1,
        _ => 0,
    };
    if a.len() != need {
        return Err(Error::Shape(format!("case {case} takes {need} parameters")));
    }
    for (j, &v) in a.iter().enumerate() {
        m.set_entry(1, j, Form::var(4, j).scale(f, v))?;
    }
    LinearMatrix2x4::new(m)
}

fn bracket(f: Field, p: (FieldElem, FieldElem), q: (FieldElem, FieldElem)) -> FieldElem {
    f.sub(f.mul(p.0, q.1), f.mul(p.1, q.0))
}

/// Value at `x` of the Möbius map taking `zero ↦ (0:1)`, `minus_one ↦ (−1:1)`
/// and `w ↦ (1:0)`, as the parameter `a` with image `(−a:1)`.
fn moebius_param(
    f: Field,
    x: (FieldElem, FieldElem),
    zero: (FieldElem, FieldElem),
    minus_one: (FieldElem, FieldElem),
    w: (FieldElem, FieldElem),
) -> FieldElem {
    let num = f.mul(bracket(f, x, zero), bracket(f, minus_one, w));
    let den = f.mul(bracket(f, x, w), bracket(f, minus_one, zero));
    f.div(num, den)
}

/// A rational point of `P^1` outside `roots`.
fn spare_point(f: Field, roots: &[(FieldElem, FieldElem)]) -> (FieldElem, FieldElem) {
    std::iter::once((0, 1))
        .chain((0..f.p()).map(|t| (1, t)))
        .find(|&r| roots.iter().all(|&q| bracket(f, r, q) != 0))
        .expect("P^1(F_p) has more than four points")
}

fn evaluate_pencil(f: Field, psi: &GradedMatrix, t: (FieldElem, FieldElem)) -> Matrix {
    psi.evaluate(f, &PointP::new(vec![t.0, t.1]).expect("nonzero"))
}

/// Smallest `e` with a nonzero `v` of binary forms of degree `e` and
/// `ψ v = 0`, with a basis of such `v` (coefficients per entry).
pub fn min_syzygy(f: Field, psi: &GradedMatrix, max_e: usize) -> Option<(usize, Vec<Vec<BinaryForm>>)> {
    let (rows, cols) = (psi.nrows(), psi.ncols());
    for e in 0..=max_e {
        let mut sys = Matrix::zeros(rows * (e + 2), cols * (e + 1));
        for i in 0..rows {
            for j in 0..cols {
                let ent = psi.entry(i, j);
                let (c0, c1) = (ent.coeff(&[1, 0]), ent.coeff(&[0, 1]));
                for k in 0..=e {
                    let col = j * (e + 1) + k;
                    let r0 = i * (e + 2) + k;
                    sys.set(r0, col, f.add(sys.get(r0, col), c0));
                    sys.set(r0 + 1, col, f.add(sys.get(r0 + 1, col), c1));
                }
            }
        }
        let ker = kernel_basis(f, &sys);
        if !ker.is_empty() {
            let vs = ker
                .iter()
                .map(|v| (0..cols).map(|j| BinaryForm::new(e, v[j * (e + 1)..(j + 1) * (e + 1)].to_vec())).collect())
                .collect();
            return Some((e, vs));
        }
    }
    None
}

fn transpose(psi: &GradedMatrix) -> GradedMatrix {
    let entries = (0..psi.ncols()).map(|j| (0..psi.nrows()).map(|i| psi.entry(i, j).clone()).collect()).collect();
    GradedMatrix::new(2, vec![0; psi.nrows()], vec![1; psi.ncols()], entries).expect("transpose shape")
}

fn minors_2x2(f: Field, a: &LinearMatrix2x4) -> Vec<Form> {
    subsets(4, 2).iter().map(|cs| a.0.minor(f, &[0, 1], cs)).collect()
}

fn point_text(f: Field, p: &PointP) -> String {
    let c: Vec<String> = p.normalized(f).coords().iter().map(|&c| f.signed(c).to_string()).collect();
    format!("({})", c.join(","))
}

fn equations_of_span(f: Field, span: &[Vec<FieldElem>]) -> Vec<Form> {
    let m = Matrix::from_rows(span, 4);
    kernel_basis(f, &m)
        .into_iter()
        .map(|v| Form::from_terms(f, 4, 1, (0..4).filter(|&k| v[k] != 0).map(|k| (unit(k), v[k]))).expect("linear form"))
        .collect()
}

pub fn classify(f: Field, a: &LinearMatrix2x4) -> Result<PencilClass> {
    if instability(f, a).is_some() {
        return Err(Error::NotStable);
    }
    let psi = to_pencil(f, a);
    let det = pencil_det(f, a);
    let minors = minors_2x2(f, a);
    if !det.is_zero() {
        classify_generic(f, &psi, &det, minors)
    } else {
        classify_rank3(f, &psi, minors)
    }
}

fn classify_generic(f: Field, psi: &GradedMatrix, det: &BinaryForm, minors: Vec<Form>) -> Result<PencilClass> {
    let partition = det.root_partition(f).expect("nonzero determinant");
    let case = case_of_partition(&partition)
        .ok_or_else(|| Error::Degenerate(format!("determinant has root multiplicities {partition:?}")))?;
    let roots = det.rational_roots(f);
    let split = roots.iter().map(|r| r.1).sum::<usize>() == 4;
    let points: Vec<PointP> = roots
        .iter()
        .filter_map(|&(t, _)| {
            let ev = evaluate_pencil(f, psi, t).transpose();
            kernel_basis(f, &ev).into_iter().next().and_then(|v| PointP::new(v).ok()).map(|p| p.normalized(f))
        })
        .collect();
    let canonical = if split {
        let rs: Vec<(FieldElem, FieldElem)> = roots.iter().map(|r| r.0).collect();
        let w = spare_point(f, &rs);
        let of_mult = |m: usize| roots.iter().filter(|r| r.1 == m).map(|r| r.0).collect::<Vec<_>>();
        let params = match case {
            1 => {
                let s = of_mult(1);
                let a0 = moebius_param(f, s[0], s[3], s[2], w);
                let a1 = moebius_param(f, s[1], s[3], s[2], w);
                vec![a0, a1]
            }
            2 => {
                let (d, s) = (of_mult(2), of_mult(1));
                vec![moebius_param(f, s[0], d[0], s[1], w)]
            }
            _ => vec![],
        };
        Some(canonical_matrix(f, case, &params)?)
    } else {
        None
    };
    let text = match case {
        1 => "four simple points",
        2 => "two simple points and a double point",
        3 => "two double points",
        4 => "a simple point and a triple point on a conic",
        _ => "a quadruple point on a twisted cubic",
    };
    let pts: Vec<String> = points.iter().map(|p| point_text(f, p)).collect();
    let text = if pts.is_empty() { text.to_string() } else { format!("{text}; rational support {}", pts.join(" ")) };
    Ok(PencilClass {
        tag: PencilTag::Case(case),
        partition: Some(partition),
        m: None,
        e: None,
        canonical_note: (!split).then(|| "roots of det do not split over the base field".to_string()),
        canonical,
        degeneracy: Degeneracy { text, minors, points, span_equations: Vec::new() },
    })
}

fn classify_rank3(f: Field, psi: &GradedMatrix, minors: Vec<Form>) -> Result<PencilClass> {
    let (e, _) = min_syzygy(f, psi, 4).ok_or_else(|| Error::Degenerate("no syzygy of the pencil up to degree 4".into()))?;
    if !(1..=3).contains(&e) {
        return Err(Error::Degenerate(format!("syzygy degree {e} outside 1..=3")));
    }
    let m = 4 - e as u32;
    let case = 5 + m as u8;
    // the support of D(φ) is swept by the left kernel of ψ
    let (_, left) = min_syzygy(f, &transpose(psi), 4).ok_or_else(|| Error::Degenerate("no left syzygy".into()))?;
    let y = &left[0];
    let deg = y[0].degree();
    let mut samples: Vec<Vec<FieldElem>> = Vec::new();
    for t in std::iter::once((0, 1)).chain((0..=deg as u64 + 1).map(|k| (1, k))) {
        let v: Vec<FieldElem> = y.iter().map(|b| b.eval(f, t.0, t.1)).collect();
        if v.iter().any(|&c| c != 0) {
            samples.push(v);
        }
    }
    let span = span_basis(f, &samples, 4);
    let eqs = equations_of_span(f, &span);
    let eq_text = eqs.iter().map(|g| g.to_string(f)).collect::<Vec<_>>().join(", ");
    let mut points = Vec::new();
    let text = match case {
        6 => {
            let x = PointP::new(span[0].clone())?.normalized(f);
            let t = format!("fat point I_x^2 at {}", point_text(f, &x));
            points.push(x);
            t
        }
        7 => format!("line {{{eq_text}}} with coker O_L(2)"),
        _ => format!("conic in the plane {{{eq_text}}} with coker O_P1(3)"),
    };
    Ok(PencilClass {
        tag: PencilTag::Case(case),
        partition: None,
        m: Some(m),
        e: Some(e as u32),
        canonical: Some(canonical_matrix(f, case, &[])?),
        canonical_note: None,
        degeneracy: Degeneracy { text, minors, points, span_equations: eqs },
    })
}

/// Whether the ideal of 2×2 minors of `A` and the ideal of `gens` agree in
/// every degree up to `degree_bound`.
pub fn minor_ideal_equals(f: Field, a: &LinearMatrix2x4, gens: &[Form], degree_bound: i64) -> bool {
    let minors = minors_2x2(f, a);
    (0..=degree_bound).all(|d| {
        let x = ideal_piece(f, &minors, d);
        let y = ideal_piece(f, gens, d);
        if x.len() != y.len() {
            return false;
        }
        let mut both = x.clone();
        both.extend(y);
        span_basis(f, &both, basis_len(4, d)).len() == x.len()
    })
}
