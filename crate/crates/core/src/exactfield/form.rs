use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use super::field::{Field, FieldElem};
use crate::error::{Error, Result};

pub type Exps = Vec<u32>;

/// Graded reverse lexicographic comparison of two exponent vectors of equal
/// total degree; `Greater` means `a` comes first.
pub fn grevlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    if da != db {
        return da.cmp(&db);
    }
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

/// All exponent vectors of total degree `d` in `nvars` variables, grevlex
/// descending (so `x0^d` comes first).
pub fn monomial_basis(nvars: usize, d: i64) -> Vec<Exps> {
    let mut out = Vec::new();
    if d < 0 || nvars == 0 {
        if d == 0 && nvars == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut cur = vec![0u32; nvars];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Exps>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, d as u32, &mut cur, &mut out);
    out.sort_by(|a, b| grevlex_cmp(b, a));
    out
}

/// `C(n, k)` for small nonnegative arguments, 0 when `k` is out of range.
pub fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Dimension of the space of degree `d` forms in `nvars` variables.
pub fn basis_len(nvars: usize, d: i64) -> usize {
    if d < 0 {
        0
    } else {
        binom(d + nvars as i64 - 1, nvars as i64 - 1) as usize
    }
}

/// Monomial basis with a reverse index, built once per degree.
#[derive(Debug, Default)]
pub struct MonomialIndex {
    nvars: usize,
    cache: HashMap<i64, (Vec<Exps>, HashMap<Exps, usize>)>,
}

impl MonomialIndex {
    pub fn new(nvars: usize) -> Self {
        MonomialIndex { nvars, cache: HashMap::new() }
    }

    fn ensure(&mut self, d: i64) {
        let nvars = self.nvars;
        self.cache.entry(d).or_insert_with(|| {
            let b = monomial_basis(nvars, d);
            let idx = b.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
            (b, idx)
        });
    }

    pub fn basis(&mut self, d: i64) -> &[Exps] {
        self.ensure(d);
        &self.cache[&d].0
    }

    pub fn index_of(&mut self, e: &[u32]) -> usize {
        let d: u32 = e.iter().sum();
        self.ensure(d as i64);
        self.cache[&(d as i64)].1[e]
    }
}

/// A homogeneous form over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Form {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Exps, FieldElem>,
}

impl Form {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        Form { nvars, degree, terms: BTreeMap::new() }
    }

    pub fn constant(f: Field, nvars: usize, c: i64) -> Self {
        Form::monomial(f, vec![0; nvars], c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, 1);
        Form { nvars, degree: 1, terms }
    }

    pub fn monomial(f: Field, exps: Exps, c: i64) -> Self {
        let degree = exps.iter().sum();
        let nvars = exps.len();
        let mut terms = BTreeMap::new();
        let c = f.elem(c);
        if c != 0 {
            terms.insert(exps, c);
        }
        Form { nvars, degree, terms }
    }

    /// Build from (exponents, coefficient) pairs; all exponents must have the
    /// same total degree. Repeated exponents are summed.
    pub fn from_terms(
        f: Field,
        nvars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Exps, FieldElem)>,
    ) -> Result<Self> {
        let mut out = Form::zero(nvars, degree);
        for (e, c) in terms {
            if e.len() != nvars || e.iter().sum::<u32>() != degree {
                return Err(Error::Degree(format!("term {e:?} not of degree {degree}")));
            }
            out.add_term(f, e, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, f: Field, e: Exps, c: FieldElem) {
        if c == 0 {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &FieldElem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u32]) -> FieldElem {
        self.terms.get(e).copied().unwrap_or(0)
    }

    /// Same polynomial, declared degree changed (only allowed for zero).
    pub fn with_degree(mut self, degree: u32) -> Self {
        assert!(self.is_zero() || self.degree == degree);
        self.degree = degree;
        self
    }

    pub fn add(&self, f: Field, other: &Form) -> Form {
        assert_eq!(self.nvars, other.nvars);
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(f, e.clone(), c);
        }
        out
    }

    pub fn sub(&self, f: Field, other: &Form) -> Form {
        self.add(f, &other.neg(f))
    }

    pub fn neg(&self, f: Field) -> Form {
        self.scale(f, f.neg(1))
    }

    pub fn scale(&self, f: Field, c: FieldElem) -> Form {
        if c == 0 {
            return Form::zero(self.nvars, self.degree);
        }
        Form {
            nvars: self.nvars,
            degree: self.degree,
            terms: self.terms.iter().map(|(e, &v)| (e.clone(), f.mul(v, c))).collect(),
        }
    }

    pub fn mul(&self, f: Field, other: &Form) -> Form {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Form::zero(self.nvars, self.degree + other.degree);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let e: Exps = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(f, e, f.mul(ca, cb));
            }
        }
        out
    }

    pub fn eval(&self, f: Field, x: &[FieldElem]) -> FieldElem {
        assert_eq!(x.len(), self.nvars);
        let mut acc = 0;
        for (e, &c) in &self.terms {
            let mut t = c;
            for (xi, &ei) in x.iter().zip(e) {
                if ei > 0 {
                    t = f.mul(t, f.pow(*xi, ei as u64));
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Coefficients in `monomial_basis(nvars, degree)` order.
    pub fn coefficients(&self, idx: &mut MonomialIndex) -> Vec<FieldElem> {
        let n = basis_len(self.nvars, self.degree as i64);
        let mut v = vec![0; n];
        for (e, &c) in &self.terms {
            v[idx.index_of(e)] = c;
        }
        v
    }

    pub fn from_coefficients(nvars: usize, degree: u32, coeffs: &[FieldElem]) -> Form {
        let basis = monomial_basis(nvars, degree as i64);
        assert_eq!(basis.len(), coeffs.len());
        let terms = basis
            .into_iter()
            .zip(coeffs)
            .filter(|(_, &c)| c != 0)
            .map(|(e, &c)| (e, c))
            .collect();
        Form { nvars, degree, terms }
    }

    /// Substitute `X_i -> images[i]`; images share one degree `e` and a
    /// common variable count.
    pub fn substitute(&self, f: Field, images: &[Form]) -> Form {
        assert_eq!(images.len(), self.nvars);
        let m = images[0].nvars;
        let e = images.iter().map(|g| g.degree).max().unwrap_or(0);
        let mut out = Form::zero(m, self.degree * e);
        // powers are cached per variable
        let mut pows: Vec<Vec<Form>> = images.iter().map(|g| vec![Form::constant(f, m, 1), g.clone()]).collect();
        for (ex, &c) in &self.terms {
            let mut t = Form::constant(f, m, c as i64);
            for (i, &k) in ex.iter().enumerate() {
                while pows[i].len() <= k as usize {
                    let next = pows[i].last().unwrap().mul(f, &images[i]);
                    pows[i].push(next);
                }
                t = t.mul(f, &pows[i][k as usize]);
            }
            if !t.is_zero() {
                out = out.add(f, &t);
            }
        }
        out.with_degree_fix(self.degree * e)
    }

    fn with_degree_fix(mut self, d: u32) -> Self {
        if self.is_zero() {
            self.degree = d;
        }
        self
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, f: Field, i: usize) -> Form {
        let mut out = Form::zero(self.nvars, self.degree.saturating_sub(1));
        for (e, &c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(f, e2, f.mul(c, f.elem(e[i] as i64)));
            }
        }
        out
    }

    /// Terms in grevlex descending order.
    pub fn sorted_terms(&self) -> Vec<(Exps, FieldElem)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, &c)| (e.clone(), c)).collect();
        v.sort_by(|a, b| grevlex_cmp(&b.0, &a.0));
        v
    }

    /// Text in variables `x0..x{n-1}`, coefficients in symmetric range.
    pub fn to_string(&self, f: Field) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let c = f.signed(c);
            let neg = c < 0;
            let a = c.unsigned_abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| if x == 1 { format!("x{i}") } else { format!("x{i}^{x}") })
                .collect();
            if mono.is_empty() {
                let _ = write!(s, "{a}");
            } else if a == 1 {
                s.push_str(&mono.join("*"));
            } else {
                let _ = write!(s, "{a}*{}", mono.join("*"));
            }
        }
        s
    }

    /// Parse text such as `x0^2 - 3*x1*x2 + x3` (or `X0`, implicit products).
    /// The zero form gets degree `zero_degree`.
    pub fn parse(f: Field, text: &str, nvars: usize, zero_degree: u32) -> Result<Form> {
        let err = |m: &str| Error::Parse(format!("{m} in form '{text}'"));
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(err("empty"));
        }
        let mut terms: Vec<(Exps, FieldElem)> = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let mut sign = 1i64;
            while i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                if chars[i] == '-' {
                    sign = -sign;
                }
                i += 1;
            }
            let mut coef: i64 = 1;
            let mut exps = vec![0u32; nvars];
            let mut any = false;
            loop {
                if i >= chars.len() || chars[i] == '+' || chars[i] == '-' {
                    break;
                }
                if chars[i] == '*' {
                    i += 1;
                    continue;
                }
                if chars[i].is_ascii_digit() {
                    let st = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let v: String = chars[st..i].iter().collect();
                    let v: i64 = v.parse().map_err(|_| err("bad number"))?;
                    coef = f.mul(f.elem(coef), f.elem(v)) as i64;
                    any = true;
                } else if chars[i] == 'x' || chars[i] == 'X' {
                    i += 1;
                    let st = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if st == i {
                        return Err(err("variable without index"));
                    }
                    let v: String = chars[st..i].iter().collect();
                    let vi: usize = v.parse().map_err(|_| err("bad index"))?;
                    if vi >= nvars {
                        return Err(err(&format!("variable x{vi} out of range")));
                    }
                    let mut pw = 1u32;
                    if i < chars.len() && chars[i] == '^' {
                        i += 1;
                        let st = i;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                        let v: String = chars[st..i].iter().collect();
                        pw = v.parse().map_err(|_| err("bad exponent"))?;
                    }
                    exps[vi] += pw;
                    any = true;
                } else {
                    return Err(err(&format!("unexpected '{}'", chars[i])));
                }
            }
            if !any {
                return Err(err("empty term"));
            }
            terms.push((exps, f.elem(sign * coef)));
        }
        let degrees: Vec<u32> = terms.iter().map(|(e, _)| e.iter().sum()).collect();
        let deg = degrees[0];
        if degrees.iter().any(|&d| d != deg) {
            return Err(err("not homogeneous"));
        }
        let form = Form::from_terms(f, nvars, deg, terms)?;
        Ok(if form.is_zero() { Form::zero(nvars, zero_degree) } else { form })
    }
}

/// A point of projective space, coordinates up to scalar.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointP {
    coords: Vec<FieldElem>,
}

impl PointP {
    pub fn new(coords: Vec<FieldElem>) -> Result<Self> {
        if coords.iter().all(|&c| c == 0) {
            return Err(Error::Degenerate("point with all coordinates zero".into()));
        }
        Ok(PointP { coords })
    }

    pub fn from_ints(f: Field, coords: &[i64]) -> Result<Self> {
        PointP::new(coords.iter().map(|&c| f.elem(c)).collect())
    }

    pub fn coords(&self) -> &[FieldElem] {
        &self.coords
    }

    pub fn nvars(&self) -> usize {
        self.coords.len()
    }

    /// Scaled so the first nonzero coordinate is 1.
    pub fn normalized(&self, f: Field) -> PointP {
        let lead = *self.coords.iter().find(|&&c| c != 0).unwrap();
        let inv = f.inv(lead);
        PointP { coords: self.coords.iter().map(|&c| f.mul(c, inv)).collect() }
    }
}
