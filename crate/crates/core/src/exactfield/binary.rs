use super::field::{Field, FieldElem};
use super::form::Form;

/// Dense univariate polynomial, lowest coefficient first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<FieldElem>);

impl Poly {
    pub fn new(mut c: Vec<FieldElem>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, f: Field, t: FieldElem) -> FieldElem {
        self.0.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, t), c))
    }

    pub fn derivative(&self, f: Field) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(c, f.elem(i as i64)))
                .collect(),
        )
    }

    pub fn monic(&self, f: Field) -> Poly {
        match self.0.last() {
            None => self.clone(),
            Some(&lead) => {
                let inv = f.inv(lead);
                Poly(self.0.iter().map(|&c| f.mul(c, inv)).collect())
            }
        }
    }

    pub fn mul(&self, f: Field, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly(Vec::new());
        }
        let mut c = vec![0; self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in o.0.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Poly::new(c)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, f: Field, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = f.inv(d.0[dd]);
        let mut r = self.0.clone();
        if r.len() < d.0.len() {
            return (Poly(Vec::new()), self.clone());
        }
        let mut q = vec![0; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = f.mul(r[k + dd], inv);
            q[k] = c;
            if c != 0 {
                for (i, &dc) in d.0.iter().enumerate() {
                    r[k + i] = f.sub(r[k + i], f.mul(c, dc));
                }
            }
        }
        (Poly::new(q), Poly::new(r))
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, f: Field, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// Yun's squarefree factorization: `(multiplicity, factor)` pairs with
    /// nonconstant squarefree factors. Requires degree below the characteristic.
    pub fn squarefree(&self, f: Field) -> Vec<(usize, Poly)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let a = self.monic(f);
        let da = a.derivative(f);
        let b = a.gcd(f, &da);
        let mut c = a.divrem(f, &b).0;
        let mut d = da.divrem(f, &b).0.sub(f, &c.derivative(f));
        let mut i = 1;
        loop {
            if c.degree() == Some(0) {
                break;
            }
            let g = c.gcd(f, &d);
            if g.degree().unwrap_or(0) > 0 {
                out.push((i, g.clone()));
            }
            let c2 = c.divrem(f, &g).0;
            d = d.divrem(f, &g).0.sub(f, &c2.derivative(f));
            c = c2;
            i += 1;
        }
        out
    }

    pub fn sub(&self, f: Field, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new(
            (0..n)
                .map(|i| f.sub(*self.0.get(i).unwrap_or(&0), *o.0.get(i).unwrap_or(&0)))
                .collect(),
        )
    }
}

/// Binary form `Σ c_i T0^{d−i} T1^i` of declared degree `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    degree: usize,
    coeffs: Vec<FieldElem>,
}

impl BinaryForm {
    pub fn new(degree: usize, coeffs: Vec<FieldElem>) -> Self {
        assert_eq!(coeffs.len(), degree + 1);
        BinaryForm { degree, coeffs }
    }

    pub fn zero(degree: usize) -> Self {
        BinaryForm { degree, coeffs: vec![0; degree + 1] }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Nonzero constant (degree 0 and not zero).
    pub fn is_unit(&self) -> bool {
        self.degree == 0 && self.coeffs[0] != 0
    }

    pub fn from_form(f: &Form) -> Self {
        assert_eq!(f.nvars(), 2);
        let d = f.degree() as usize;
        let mut c = vec![0; d + 1];
        for (e, &v) in f.terms() {
            c[e[1] as usize] = v;
        }
        BinaryForm { degree: d, coeffs: c }
    }

    pub fn to_form(&self, fld: Field) -> Form {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (vec![(self.degree - i) as u32, i as u32], c));
        Form::from_terms(fld, 2, self.degree as u32, terms).expect("binary form terms")
    }

    pub fn eval(&self, f: Field, t0: FieldElem, t1: FieldElem) -> FieldElem {
        let mut acc = 0;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                let t = f.mul(f.pow(t0, (self.degree - i) as u64), f.pow(t1, i as u64));
                acc = f.add(acc, f.mul(c, t));
            }
        }
        acc
    }

    /// Interpolate a degree-`d` form from its values at `(1, k)`, `k = 0..=d`.
    /// Requires `d < p`.
    pub fn interpolate(f: Field, d: usize, values: &[FieldElem]) -> Self {
        assert_eq!(values.len(), d + 1);
        // Newton divided differences at nodes 0..=d
        let nodes: Vec<FieldElem> = (0..=d as u64).collect();
        let mut coef = values.to_vec();
        for j in 1..=d {
            for i in (j..=d).rev() {
                let num = f.sub(coef[i], coef[i - 1]);
                let den = f.sub(nodes[i], nodes[i - j]);
                coef[i] = f.div(num, den);
            }
        }
        let mut poly = Poly::new(vec![coef[d]]);
        for k in (0..d).rev() {
            poly = poly.mul(f, &Poly(vec![f.neg(nodes[k]), 1]));
            let mut v = poly.0.clone();
            if v.is_empty() {
                v.push(0);
            }
            v[0] = f.add(v[0], coef[k]);
            poly = Poly::new(v);
        }
        let mut c = poly.0;
        c.resize(d + 1, 0);
        BinaryForm { degree: d, coeffs: c }
    }

    /// Sample points `(1, k)` used with [`BinaryForm::interpolate`].
    pub fn sample_points(d: usize) -> Vec<(FieldElem, FieldElem)> {
        (0..=d as u64).map(|k| (1, k)).collect()
    }

    /// Affine part in `t = T1/T0`.
    pub fn affine(&self) -> Poly {
        Poly::new(self.coeffs.clone())
    }

    /// Multiplicity of the root `(0:1)`, i.e. the power of `T0` dividing the form.
    pub fn order_at_infinity(&self) -> usize {
        self.degree - self.affine().degree().unwrap_or(0)
    }

    /// Homogeneous gcd, normalized to be monic in the affine chart.
    pub fn gcd(f: Field, forms: &[BinaryForm]) -> Option<BinaryForm> {
        let nz: Vec<&BinaryForm> = forms.iter().filter(|b| !b.is_zero()).collect();
        if nz.is_empty() {
            return None;
        }
        let mut g = Poly(Vec::new());
        let mut inf = usize::MAX;
        for b in &nz {
            g = g.gcd(f, &b.affine());
            inf = inf.min(b.order_at_infinity());
        }
        let gd = g.degree().unwrap_or(0);
        let degree = gd + inf;
        let mut c = g.0.clone();
        c.resize(degree + 1, 0);
        Some(BinaryForm { degree, coeffs: c })
    }

    /// Multiplicities of the distinct roots over the algebraic closure, sorted
    /// descending. Empty for nonzero constants; `None` for the zero form.
    pub fn root_partition(&self, f: Field) -> Option<Vec<usize>> {
        if self.is_zero() {
            return None;
        }
        let mut parts = Vec::new();
        let inf = self.order_at_infinity();
        if inf > 0 {
            parts.push(inf);
        }
        for (m, fac) in self.affine().squarefree(f) {
            for _ in 0..fac.degree().unwrap_or(0) {
                parts.push(m);
            }
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Some(parts)
    }

    /// Roots in `P^1(F_p)` as `(T0, T1)` with multiplicities, by exhaustive
    /// evaluation of the affine part; `(0, 1)` listed first when present.
    pub fn rational_roots(&self, f: Field) -> Vec<((FieldElem, FieldElem), usize)> {
        let mut out = Vec::new();
        let inf = self.order_at_infinity();
        if inf > 0 {
            out.push(((0, 1), inf));
        }
        let mut p = self.affine();
        if p.degree().unwrap_or(0) == 0 {
            return out;
        }
        for t in 0..f.p() {
            let mut m = 0;
            while p.degree().unwrap_or(0) > 0 && p.eval(f, t) == 0 {
                p = p.divrem(f, &Poly(vec![f.neg(t), 1])).0;
                m += 1;
            }
            if m > 0 {
                out.push(((1, t), m));
            }
            if p.degree().unwrap_or(0) == 0 {
                break;
            }
        }
        out
    }
}
