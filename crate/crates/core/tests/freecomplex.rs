use bundlekit::exactfield::*;
use bundlekit::freecomplex::*;
use proptest::prelude::*;

fn fld() -> Field {
    Field::default()
}

fn form(s: &str, n: usize) -> Form {
    Form::parse(fld(), s, n, 0).unwrap()
}

fn forms(list: &[&str], n: usize) -> Vec<Form> {
    list.iter().map(|s| form(s, n)).collect()
}

fn sorted(mut v: Vec<i64>) -> Vec<i64> {
    v.sort_unstable();
    v
}

#[test]
fn koszul_mixed_degrees_on_p4() {
    let f = fld();
    let k = koszul(f, &forms(&["x0", "x1", "x2", "x3", "x4^2"], 5)).unwrap().twist(4);
    assert_eq!(sorted(k.term(-4).to_vec()), vec![-1, -1, -1, -1, 0]);
    assert_eq!(sorted(k.term(-3).to_vec()), vec![0, 0, 0, 0, 0, 0, 1, 1, 1, 1]);
    k.check_d2(f).unwrap();
}

#[test]
fn koszul_single_form() {
    let f = fld();
    let k = koszul(f, &forms(&["x0"], 3)).unwrap();
    assert_eq!((k.lo(), k.hi()), (-1, 0));
    assert_eq!(k.term(-1), &[-1]);
    assert_eq!(k.term(0), &[0]);
}

#[test]
fn koszul_with_a_quadric_on_p3() {
    let f = fld();
    let k = koszul(f, &forms(&["x0", "x1", "x2", "x3^2"], 4)).unwrap();
    assert_eq!(k.term(0), &[0]);
    assert_eq!(sorted(k.term(-1).to_vec()), vec![-2, -1, -1, -1]);
    assert_eq!(sorted(k.term(-2).to_vec()), vec![-3, -3, -3, -2, -2, -2]);
    assert_eq!(sorted(k.term(-3).to_vec()), vec![-4, -4, -4, -3]);
    assert_eq!(k.term(-4), &[-5]);
    k.check_d2(f).unwrap();
    assert!(k.verify_exact(f, (0, 6), &k.inner_positions()).is_exact());
}

#[test]
fn koszul_linear_on_p3_is_exact_inside() {
    let f = fld();
    let k = koszul(f, &forms(&["x0", "x1", "x2", "x3"], 4)).unwrap();
    let rep = k.verify_exact(f, (0, 6), &k.inner_positions());
    assert!(rep.is_exact());
    assert_eq!(rep.cells.len(), 7 * 3);
    // the end is not exact: the cokernel is the residue field in degree 0
    let end = k.verify_exact(f, (0, 2), &[0]);
    assert_eq!(end.failures(), vec![(0, 0, 1)]);
}

#[test]
fn corrupted_differential_is_flagged() {
    let f = fld();
    let k = koszul(f, &forms(&["x0", "x1", "x2"], 3)).unwrap();
    let mut d = k.diff(-2);
    d.set_entry(0, 0, Form::zero(3, 1)).unwrap();
    let bad = FreeComplex::new(3, -3, vec![k.term(-3).to_vec(), k.term(-2).to_vec(), k.term(-1).to_vec(), k.term(0).to_vec()],
        vec![k.diff(-3), d, k.diff(-1)]).unwrap();
    assert!(bad.check_d2(f).is_err());
    assert!(!bad.verify_exact(f, (0, 5), &bad.inner_positions()).is_exact());
}

#[test]
fn dual_is_an_involution_and_twist_reaches_the_end() {
    let f = fld();
    let k = koszul(f, &forms(&["x0", "x1", "x2^2", "x3"], 4)).unwrap();
    assert_eq!(k.dual().dual(), k);
    assert_eq!(k.dual().lo(), 0);
    assert_eq!(k.twist(4).term(0), &[4]);
    k.dual().check_d2(f).unwrap();
}

#[test]
fn tensor_of_koszul_pieces() {
    let f = fld();
    let a = koszul(f, &forms(&["x0", "x1"], 4)).unwrap();
    let b = koszul(f, &forms(&["x2^2", "x3^2"], 4)).unwrap();
    let t = a.tensor(f, &b).unwrap();
    t.check_d2(f).unwrap();
    assert_eq!(t.term(-1), &[-1, -1, -2, -2]);
    assert_eq!(sorted(t.term(-2).to_vec()), vec![-4, -3, -3, -3, -3, -2]);
    assert_eq!(t.term(-4), &[-6]);
    let k = koszul(f, &forms(&["x0", "x1", "x2^2", "x3^2"], 4)).unwrap();
    for p in -4..=0 {
        assert_eq!(sorted(t.term(p).to_vec()), sorted(k.term(p).to_vec()));
    }
    assert!(t.verify_exact(f, (-2, 6), &t.inner_positions()).is_exact());
}

#[test]
fn cone_of_identity_is_acyclic() {
    let f = fld();
    let k = koszul(f, &forms(&["x0", "x1"], 3)).unwrap();
    let mut phi = ChainMap::new();
    for p in k.lo()..=k.hi() {
        phi = phi.with(p, GradedMatrix::identity(f, 3, k.term(p).to_vec()));
    }
    let c = cone(f, &k, &k, &phi).unwrap();
    c.check_d2(f).unwrap();
    let all: Vec<i64> = (c.lo()..=c.hi()).collect();
    assert!(c.verify_exact(f, (-3, 4), &all).is_exact());
    let t = c.trim(f);
    assert!(t.all_twists().next().is_none());
}

#[test]
fn bad_chain_map_is_rejected() {
    let f = fld();
    let k = koszul(f, &forms(&["x0", "x1"], 3)).unwrap();
    let phi = ChainMap::new().with(0, GradedMatrix::identity(f, 3, vec![0]));
    assert!(cone(f, &k, &k, &phi).is_err());
}

fn check_liaison(res: &FreeComplex, a: &Form, b: &Form, dim: usize, deg_y: i128) -> FreeComplex {
    let f = fld();
    let out = ferrand_liaison(f, res, a, b).unwrap();
    out.check_d2(f).unwrap();
    assert_eq!((out.lo(), out.hi()), (-2, 0));
    let ab = (a.degree() * b.degree()) as i128;
    let shift = (a.degree() + b.degree()) as i64;
    assert_eq!(degree_from_resolution(res, dim, 0), deg_y);
    let deg_res = degree_from_resolution(&out, dim, -shift);
    assert_eq!(deg_y + deg_res, ab);
    out
}

#[test]
fn liaison_of_a_point_by_two_conics() {
    let f = fld();
    let res = koszul(f, &forms(&["x1", "x2"], 3)).unwrap();
    let out = check_liaison(&res, &form("x0*x1 - x2^2", 3), &form("x0*x2 - x1^2 + x1*x2", 3), 0, 1);
    assert_eq!(out.term(-2), &[1, 1]);
    assert_eq!(out.term(-1), &[2, 2, 2]);
    assert_eq!(out.term(0), &[4]);
    let iz2 = out.twist(-2);
    assert_eq!(iz2.term(-2), &[-1, -1]);
    assert_eq!(iz2.term(-1), &[0, 0, 0]);
    assert!(iz2.verify_exact(f, (0, 6), &[-2, -1]).is_exact());
}

#[test]
fn liaison_of_a_line_by_two_quadrics() {
    let f = fld();
    let res = koszul(f, &forms(&["x2", "x3"], 4)).unwrap();
    let out = check_liaison(&res, &form("x0*x2 + x1*x3", 4), &form("x1*x2 + x0*x3 + x2^2", 4), 1, 1);
    let iz2 = out.twist(-2);
    assert_eq!(iz2.term(-2), &[-1, -1]);
    assert_eq!(iz2.term(-1), &[0, 0, 0]);
    assert!(iz2.verify_exact(f, (0, 6), &[-2, -1]).is_exact());
}

#[test]
fn liaison_rejects_forms_outside_the_ideal() {
    let f = fld();
    let res = koszul(f, &forms(&["x1", "x2"], 3)).unwrap();
    let err = ferrand_liaison(f, &res, &form("x0^2", 3), &form("x1*x2", 3));
    assert!(matches!(err, Err(bundlekit::Error::LiftNotFound(_))));
}

fn random_form(n: usize, d: i64, seed: &mut u64) -> Form {
    let f = fld();
    let terms: Vec<_> = monomial_basis(n, d)
        .into_iter()
        .map(|e| {
            *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (e, (*seed >> 33) % 5)
        })
        .collect();
    Form::from_terms(f, n, d as u32, terms).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn euler_characteristic_of_strands(seed in 0u64..10_000, degs in proptest::collection::vec(1i64..3, 1..4), l in -2i64..5) {
        let f = fld();
        let mut s = seed;
        let fs: Vec<Form> = degs.iter().map(|&d| random_form(3, d, &mut s)).collect();
        prop_assume!(fs.iter().all(|g| !g.is_zero()));
        let k = koszul(f, &fs).unwrap();
        let mut idx = MonomialIndex::new(3);
        let h = k.strand_homology(f, l, &mut idx);
        let sign = |p: i64| if p.rem_euclid(2) == 0 { 1i64 } else { -1 };
        let lhs: i64 = (k.lo()..=k.hi()).map(|p| sign(p) * k.piece_dim(p, l) as i64).sum();
        let rhs: i64 = h.iter().map(|(&p, &d)| sign(p) * d as i64).sum();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn twist_commutes_with_cone(seed in 0u64..10_000, l in -3i64..4) {
        let f = fld();
        let mut s = seed;
        let a = random_form(3, 1, &mut s);
        let b = random_form(3, 2, &mut s);
        prop_assume!(!a.is_zero() && !b.is_zero());
        let k = koszul(f, &[a.clone(), b.clone()]).unwrap();
        let c = 3u64;
        let mut phi = ChainMap::new();
        for p in k.lo()..=k.hi() {
            phi = phi.with(p, GradedMatrix::identity(f, 3, k.term(p).to_vec()).scale(f, c));
        }
        let mut tphi = ChainMap::new();
        for (&p, m) in &phi.maps {
            tphi = tphi.with(p, m.twist(l));
        }
        let lhs = cone(f, &k.twist(l), &k.twist(l), &tphi).unwrap();
        let rhs = cone(f, &k, &k, &phi).unwrap().twist(l);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn regular_koszul_is_exact_inside(seed in 0u64..10_000) {
        let f = fld();
        let mut s = seed;
        let fs: Vec<Form> = (0..3).map(|_| random_form(3, 1, &mut s)).collect();
        let m = Matrix::from_rows(&fs.iter().map(|g| g.coefficients(&mut MonomialIndex::new(3))).collect::<Vec<_>>(), 3);
        prop_assume!(rank(f, &m) == 3);
        let k = koszul(f, &fs).unwrap();
        prop_assert!(k.verify_exact(f, (-1, 4), &k.inner_positions()).is_exact());
        prop_assert_eq!(k.dual().dual(), k);
    }
}
