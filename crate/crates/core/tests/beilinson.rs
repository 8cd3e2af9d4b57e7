use bundlekit::beilinson::*;
use bundlekit::chernrr::ChernVector;
use bundlekit::exactfield::*;
use bundlekit::sheafcoh::{coh_table, CohCell, CohTable, SheafNode};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fld() -> Field {
    Field::default()
}

fn e(dim: usize, idx: &[usize]) -> ExtElement {
    ExtElement::basis(fld(), dim, idx).unwrap()
}

fn sum(parts: &[ExtElement]) -> ExtElement {
    parts.iter().skip(1).fold(parts[0].clone(), |a, b| a.add(fld(), b).unwrap())
}

/// `(φ·ω)_T = ⟨φ, ω ∧ e_T⟩`, the defining property of the contraction.
fn contract_oracle(f: Field, phi: &ExtElement, omega: &ExtElement) -> ExtElement {
    let dim = phi.dim();
    let q = phi.grade() - omega.grade();
    let mut out = ExtElement::zero(dim, q);
    for t in subsets(dim, q) {
        let w = omega.wedge(f, &e(dim, &t)).unwrap();
        let pairing = w.terms().iter().fold(0, |acc, (s, c)| f.add(acc, f.mul(*c, phi.coeff(s))));
        out = out.add(f, &e(dim, &t).scale(f, pairing)).unwrap();
    }
    out
}

#[test]
fn contraction_on_basis_vectors() {
    let f = fld();
    let f01 = e(4, &[0, 1]);
    assert_eq!(contract(f, &f01, &e(4, &[0])).unwrap(), e(4, &[1]));
    assert_eq!(contract(f, &f01, &e(4, &[1])).unwrap(), e(4, &[0]).scale(f, f.neg(1)));
    assert!(contract(f, &f01, &e(4, &[2])).unwrap().is_zero());
    assert!(contract(f, &f01, &ExtElement::zero(4, 1)).unwrap().is_zero());
    assert!(contract(f, &e(4, &[0]), &f01).is_err());
    assert!(contract(f, &f01, &e(5, &[0])).is_err());
    // full contraction is the determinant pairing
    assert_eq!(contract(f, &e(4, &[0, 2]), &e(4, &[2, 0])).unwrap().terms(), vec![(vec![], f.neg(1))]);
}

#[test]
fn basis_signs() {
    let f = fld();
    assert_eq!(e(3, &[1, 0]), e(3, &[0, 1]).scale(f, f.neg(1)));
    assert!(e(3, &[1, 1]).is_zero());
    assert_eq!(e(3, &[0]).wedge(f, &e(3, &[1])).unwrap(), e(3, &[0, 1]));
    assert_eq!(e(3, &[1]).wedge(f, &e(3, &[0])).unwrap(), e(3, &[1, 0]));
}

#[test]
fn contraction_laws_on_random_triples() {
    let f = fld();
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    for _ in 0..1000 {
        let dim = rng.gen_range(1..=6);
        let p = rng.gen_range(0..=dim);
        let q = rng.gen_range(0..=dim - p);
        let r = rng.gen_range(0..=dim - p - q);
        let phi = ExtElement::random(f, dim, p + q + r, &mut rng);
        let omega = ExtElement::random(f, dim, p, &mut rng);
        let eta = ExtElement::random(f, dim, q, &mut rng);
        // (φ·ω)·η = φ·(ω∧η)
        let lhs = contract(f, &contract(f, &phi, &omega).unwrap(), &eta).unwrap();
        let rhs = contract(f, &phi, &omega.wedge(f, &eta).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        // composition corresponds to (−1)^{pq} η∧ω
        let sign = if (p * q) % 2 == 1 { f.neg(1) } else { 1 };
        let twisted = eta.wedge(f, &omega).unwrap().scale(f, sign);
        assert_eq!(lhs, contract(f, &phi, &twisted).unwrap());
        assert_eq!(contract(f, &phi, &omega).unwrap(), contract_oracle(f, &phi, &omega));
    }
}

#[test]
fn koszul_square_commutes_up_to_sign() {
    // (ξ·v)·ω = (−1)^p (ξ·ω)·v for v of grade 1 and ω of grade p
    let f = fld();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let dim = rng.gen_range(2..=6);
        let p = rng.gen_range(0..dim);
        let q = rng.gen_range(0..dim - p);
        let xi = ExtElement::random(f, dim, p + q + 1, &mut rng);
        let v = ExtElement::random(f, dim, 1, &mut rng);
        let omega = ExtElement::random(f, dim, p, &mut rng);
        let a = contract(f, &contract(f, &xi, &v).unwrap(), &omega).unwrap();
        let b = contract(f, &contract(f, &xi, &omega).unwrap(), &v).unwrap();
        let sign = if p % 2 == 1 { f.neg(1) } else { 1 };
        assert_eq!(a, b.scale(f, sign));
    }
}

#[test]
fn skew_ranks_and_wedge_maps() {
    let f = fld();
    assert_eq!(skew_rank(f, &e(6, &[0, 1])).unwrap(), 2);
    let w4 = sum(&[e(6, &[0, 1]), e(6, &[2, 3])]);
    assert_eq!(skew_rank(f, &w4).unwrap(), 4);
    let w6 = sum(&[e(6, &[0, 1]), e(6, &[2, 3]), e(6, &[4, 5])]);
    assert_eq!(skew_rank(f, &w6).unwrap(), 6);
    assert_eq!(wedge_map_rank(f, &w6, 2), 15);
    // lower ranks do not give an isomorphism Λ^2 → Λ^4
    assert!(wedge_map_rank(f, &w4, 2) < 15);
    assert!(wedge_map_rank(f, &e(6, &[0, 1]), 2) < 15);
    assert!(skew_rank(f, &e(6, &[0])).is_err());
}

#[test]
fn cokernel_of_the_symplectic_map_has_the_expected_chern_polynomial() {
    // E' = Coker(Ω^4(4) → Ω^2(2)) on P^5 has c_t = 1 + 2t^2 − 3t^4
    let shape = MonadShape { n: 5, terms: [(-1, vec![(1, 4)]), (0, vec![(1, 2)])].into_iter().collect() };
    let c = shape.chern();
    assert_eq!(c, ChernVector::new(5, 10 - 5, vec![0, 2, 0, -3, 0]));
}

fn shape(n: usize, terms: &[(i64, &[(i64, usize)])]) -> MonadShape {
    MonadShape { n, terms: terms.iter().map(|(p, t)| (*p, t.to_vec())).collect() }
}

#[test]
fn monad_terms_from_tables() {
    // P^4: h^1(E(−3)) = 3, h^1(E(−2)) = 5, h^2(E(−5)) = 1, read for E(−2)
    let t = CohTable::from_values(4, (-8, 2), &[(1, -3, 3), (1, -2, 5), (2, -5, 1)]).unwrap();
    let s = beilinson_terms(&t, -2).unwrap();
    assert_eq!(s, shape(4, &[(-1, &[(1, 3)]), (0, &[(3, 1)]), (1, &[(5, 0)])]));
    assert_eq!(s.to_string(), "Ω^3(3) → Ω^1(1)^3 → O^5");
    // P^5, read for E(−1)
    let t = CohTable::from_values(5, (-8, 1), &[(1, -1, 1), (2, -3, 1), (3, -5, 1)]).unwrap();
    let s = beilinson_terms(&t, -1).unwrap();
    assert_eq!(s.to_string(), "Ω^4(4) → Ω^2(2) → O");
    assert_eq!(s.terms.keys().copied().collect::<Vec<_>>(), vec![-1, 0, 1]);
    let zero = CohTable::from_values(3, (-4, 0), &[]).unwrap();
    assert!(beilinson_terms(&zero, 0).unwrap().is_empty());
}

#[test]
fn insufficient_tables_are_rejected() {
    let t = CohTable::from_values(3, (-2, 0), &[]).unwrap();
    assert!(matches!(beilinson_terms(&t, 0), Err(bundlekit::Error::Table(_))));
    let mut t = CohTable::from_values(3, (-4, 0), &[]).unwrap();
    t.cells[2][1] = CohCell { lo: 0, hi: 1 };
    assert!(matches!(beilinson_terms(&t, 0), Err(bundlekit::Error::Table(_))));
    assert!(CohTable::from_values(3, (-4, 0), &[(4, 0, 1)]).is_err());
}

#[test]
fn table_text_round_trip() {
    let t = CohTable::from_values(4, (-8, 2), &[(1, -3, 3), (1, -2, 5), (2, -5, 1)]).unwrap();
    assert_eq!(CohTable::from_text(&t.to_text()).unwrap(), t);
    assert!(CohTable::from_text("l\th^0\n0\t1\n2\t1\n").is_err());
}

#[test]
fn line_bundle_shapes() {
    let f = fld();
    for n in 2..=4usize {
        let o = coh_table(f, &SheafNode::line_sum(n + 1, vec![0]), (-(n as i64) - 1, 1)).unwrap();
        assert_eq!(beilinson_terms(&o, 0).unwrap(), shape(n, &[(0, &[(1, 0)])]));
        let o1 = coh_table(f, &SheafNode::line_sum(n + 1, vec![1]), (-(n as i64) - 1, 1)).unwrap();
        assert_eq!(beilinson_terms(&o1, 0).unwrap(), shape(n, &[(-1, &[(1, 1)]), (0, &[(n as i64 + 1, 0)])]));
    }
}

#[test]
fn omega_restrictions() {
    assert_eq!(omega_restriction(4, 5, 3).unwrap(), vec![(3, 2), (2, 1)]);
    assert_eq!(omega_restriction(0, 5, 3).unwrap(), vec![(0, 1)]);
    assert_eq!(omega_restriction(2, 5, 2).unwrap(), vec![(2, 1), (1, 3), (0, 3)]);
    assert!(omega_restriction(6, 5, 3).is_err());
    for n in 1..=6usize {
        for n_sub in 0..n {
            for p in 0..=n {
                let total: u64 = omega_restriction(p, n, n_sub).unwrap().iter().map(|&(i, m)| m * binom(n_sub as i64, i as i64) as u64).sum();
                assert_eq!(total, binom(n as i64, p as i64) as u64, "p={p} n={n} n'={n_sub}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn skew_rank_is_even(dim in 1usize..8, seed in 0u64..10_000) {
        let f = fld();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut w = ExtElement::zero(dim, 2);
        for _ in 0..rng.gen_range(0..4) {
            let a = ExtElement::random(f, dim, 1, &mut rng);
            let b = ExtElement::random(f, dim, 1, &mut rng);
            w = w.add(f, &a.wedge(f, &b).unwrap()).unwrap();
        }
        let r = skew_rank(f, &w).unwrap();
        prop_assert_eq!(r % 2, 0);
        prop_assert!(r <= dim);
    }

    #[test]
    fn beilinson_terms_recover_line_sums(nvars in 3usize..5, twists in proptest::collection::vec(-2i64..3, 1..3), l in -3i64..3) {
        let f = fld();
        let n = nvars - 1;
        let node = SheafNode::line_sum(nvars, twists.clone());
        let t = coh_table(f, &node, (-(n as i64) - 6, 4)).unwrap();
        let s = beilinson_terms(&t, 0).unwrap();
        let rank: i64 = s.terms.keys().map(|&p| if p.rem_euclid(2) == 0 { 1 } else { -1 } * s.rank_at(p)).sum();
        prop_assert_eq!(rank, twists.len() as i64);
        prop_assert_eq!(Some(s.chi(l)), t.chi(l));
        prop_assert_eq!(s.chern(), ChernVector::line_sum(n, &twists));
    }
}
