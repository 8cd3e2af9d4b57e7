//! Prime-field arithmetic, homogeneous forms and graded matrices.

mod binary;
mod field;
mod form;
mod graded;
mod matrix;

pub use binary::{BinaryForm, Poly};
pub use field::{Field, FieldElem, DEFAULT_PRIME};
pub use form::{basis_len, binom, grevlex_cmp, monomial_basis, Exps, Form, MonomialIndex, PointP};
pub use graded::{subsets, GradedMatrix};
pub use matrix::{det, kernel_basis, rank, rref, solve, span_basis, Matrix};



/// Echelon basis of the degree-`d` piece of the ideal generated by `gens`.
pub fn ideal_piece(f: Field, gens: &[Form], d: i64) -> Vec<Vec<FieldElem>> {
    let Some(first) = gens.first() else {
        return Vec::new();
    };
    let nvars = first.nvars();
    let mut idx = MonomialIndex::new(nvars);
    let mut vecs = Vec::new();
    for g in gens {
        if g.is_zero() || (g.degree() as i64) > d {
            continue;
        }
        let mult = monomial_basis(nvars, d - g.degree() as i64);
        for m in mult {
            let prod = g.mul(f, &Form::monomial(f, m, 1));
            vecs.push(prod.coefficients(&mut idx));
        }
    }
    span_basis(f, &vecs, basis_len(nvars, d))
}
