use bundlekit::chernrr::*;
use bundlekit::exactfield::{Field, Form, GradedMatrix};
use bundlekit::freecomplex::{chi_line, FreeComplex};
use proptest::prelude::*;

fn cv(n: usize, r: i64, c: &[i64]) -> ChernVector {
    ChernVector::new(n, r, c.to_vec())
}

fn kernel_complex(n: usize, src: &[i64], tgt: &[i64], rows: &[&[&str]]) -> FreeComplex {
    let f = Field::default();
    let entries = rows.iter().map(|r| r.iter().map(|s| Form::parse(f, s, n, 0).unwrap()).collect()).collect();
    FreeComplex::from_map(0, GradedMatrix::new(n, src.to_vec(), tgt.to_vec(), entries).unwrap())
}

#[test]
fn chern_of_kernel_presentations() {
    let iv = kernel_complex(4, &[2, 2, 2, 1], &[3], &[&["x0", "x1", "x2", "x3^2"]]);
    assert_eq!(chern_of_complex(&iv), cv(3, 3, &[4, 6, 2]));
    let vi = kernel_complex(
        4,
        &[2; 5],
        &[3, 3],
        &[&["x0", "x1", "x2", "x3", "0"], &["0", "x0", "x1", "x2", "x3"]],
    );
    assert_eq!(chern_of_complex(&vi), cv(3, 3, &[4, 7, 2]));
    let split = FreeComplex::single(4, 0, vec![1; 4]);
    assert_eq!(chern_of_complex(&split), cv(3, 4, &[4, 6, 4]));
}

#[test]
fn p_transform_values() {
    assert_eq!(p_chern(&cv(3, 5, &[4, 8, 8]), 5).c, vec![4, 8, 8]);
    assert_eq!(p_chern(&cv(3, 2, &[4, 5, 0]), 6).c, vec![4, 11, 24]);
    // explicit polynomial formula
    let c = cv(3, 3, &[3, 4, 2]);
    let (c1, c2, c3) = (3, 4, 2);
    assert_eq!(p_chern(&c, 1).c, vec![c1, c1 * c1 - c2, c3 + c1 * (c1 * c1 - 2 * c2)]);
}

#[test]
fn riemann_roch_examples_on_p3() {
    // dual data (rank r; −4, c2, −c3) at l = 0 gives r − 2 − c3/2
    for (r, c2, c3) in [(3, 6, 2), (5, 8, 6), (4, 7, 4)] {
        assert_eq!(rr_chi(&cv(3, r, &[-4, c2, -c3]), 0).unwrap(), (r - 2 - c3 / 2) as i128);
    }
    assert_eq!(rr_chi(&cv(3, 2, &[0, 2, 2]), 0).unwrap(), -1);
    assert_eq!(rr_chi(&cv(3, 1, &[2, 0, 0]), 0).unwrap(), 10);
    assert!(matches!(rr_chi(&cv(3, 2, &[1, 1, 0]), 0), Err(bundlekit::Error::Congruence(_))));
}

#[test]
fn riemann_roch_on_p2_and_p4() {
    // c1 = 0 rank 2 on the plane: χ = 2 − c2
    assert_eq!(rr_chi(&cv(2, 2, &[0, 3]), 0).unwrap(), -1);
    assert_eq!(rr_chi(&cv(4, 1, &[3]), 1).unwrap(), chi_line(4, 4));
    assert!(rr_chi(&cv(4, 2, &[5, 8, 0, 0]), 0).is_err());
}

#[test]
fn schwarzenberger_cases() {
    assert_eq!(schwarzenberger_ok(&cv(4, 2, &[5, 8, 0, 0])), (false, 8));
    assert_eq!(schwarzenberger_ok(&cv(4, 3, &[0, 0, 0, 0])), (true, 0));
    // Ω(2) on P^4 from the Euler sequence 0 → Ω(2) → O(1)^5 → O(2) → 0
    let omega2 = ChernVector::line_sum(4, &[1; 5]).kernel_of(&ChernVector::line(4, 2));
    assert_eq!(omega2, cv(4, 4, &[3, 4, 2, 1]));
    assert!(schwarzenberger_ok(&omega2).0);
}

#[test]
fn surface_formulas() {
    let s = SurfaceInvariants::new(8, 5, 1, 0).unwrap();
    assert_eq!(double_point(&s), 0);
    assert_eq!(surface_bundle_data(&s), (5, 8, 8, 0));
    assert_eq!(double_point(&SurfaceInvariants::new(8, 4, 1, 0).unwrap()), 1);
    assert_eq!(double_point(&SurfaceInvariants::new(7, 2, 0, 0).unwrap()), 5);
    assert_eq!(surface_bundle_data(&SurfaceInvariants::new(3, 0, 0, 0).unwrap()).0, 1);
    assert!(sectional_relation_ok(&SurfaceInvariants::new(8, 5, 1, 0).unwrap(), 1));
    assert!(SurfaceInvariants::new(0, 0, 0, 0).is_err());
}

#[test]
fn gg_constraint_examples() {
    assert_eq!(gg_constraints(&cv(3, 2, &[4, 9, 0])), vec![Violation::RankTwoBound]);
    assert!(gg_constraints(&cv(4, 3, &[4, 5, 0, 0])).contains(&Violation::C3LowerBound));
    assert!(gg_constraints(&cv(4, 3, &[0, 0, 0, 0])).is_empty());
    assert!(gg_constraints(&cv(3, 5, &[4, 8, 8])).is_empty());
    assert!(gg_constraints(&cv(3, 3, &[4, 2, 0])).contains(&Violation::C2BelowC1MinusOne));
    assert!(gg_constraints(&cv(3, 3, &[2, -1, 0])).contains(&Violation::Negative(2)));
}

#[test]
fn whitney_and_kernel_agree_on_split_sums() {
    let a = ChernVector::line_sum(3, &[1, 2]);
    let b = ChernVector::line_sum(3, &[3]);
    let ab = a.sum(&b);
    assert_eq!(ab, ChernVector::line_sum(3, &[1, 2, 3]));
    assert_eq!(ab.kernel_of(&b), a);
    assert_eq!(ab.quotient_by(&a), b);
}

fn twists() -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-3i64..4, 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_forms_match_hrr(n in 2usize..5, a in twists(), b in twists(), l in -4i64..5) {
        let c = ChernVector::line_sum(n, &a).kernel_of(&ChernVector::line_sum(n, &b));
        let hrr = hrr_chi(&c, l);
        prop_assert!(hrr.is_integer());
        prop_assert_eq!(rr_chi(&c, l).unwrap(), hrr.to_integer());
        // direct oracle: alternating sum over the line bundles
        let direct: i128 = a.iter().map(|&t| chi_line(n as i64, t + l)).sum::<i128>()
            - b.iter().map(|&t| chi_line(n as i64, t + l)).sum::<i128>();
        prop_assert_eq!(hrr.to_integer(), direct);
    }

    #[test]
    fn twist_matches_line_sums(n in 2usize..6, a in twists(), l in -3i64..4) {
        let c = ChernVector::line_sum(n, &a);
        let shifted: Vec<i64> = a.iter().map(|x| x + l).collect();
        prop_assert_eq!(c.twist(l), ChernVector::line_sum(n, &shifted));
    }

    #[test]
    fn twist_of_virtual_classes(n in 2usize..5, a in twists(), b in twists(), l in -3i64..4) {
        let c = ChernVector::line_sum(n, &a).kernel_of(&ChernVector::line_sum(n, &b));
        let ta: Vec<i64> = a.iter().map(|x| x + l).collect();
        let tb: Vec<i64> = b.iter().map(|x| x + l).collect();
        let expect = ChernVector::line_sum(n, &ta).kernel_of(&ChernVector::line_sum(n, &tb));
        prop_assert_eq!(c.twist(l), expect);
    }

    #[test]
    fn p_transform_is_an_involution(c1 in -6i64..7, c2 in -10i64..11, c3 in -10i64..11) {
        let c = cv(3, 4, &[c1, c2, c3]);
        prop_assert_eq!(p_chern(&p_chern(&c, 7), 4), c);
    }

    #[test]
    fn parity_holds_for_presented_classes(a in twists(), b in twists()) {
        let c = ChernVector::line_sum(3, &a).kernel_of(&ChernVector::line_sum(3, &b));
        prop_assert!(parity_ok(&c));
    }
}
