use bundlekit::spectra::*;
use proptest::prelude::*;

fn sp(k: &[i64]) -> Spectrum {
    Spectrum::new(k.to_vec()).unwrap()
}

fn vals(v: &[Spectrum]) -> Vec<Vec<i64>> {
    v.iter().map(|s| s.values().to_vec()).collect()
}

#[test]
fn length_two_with_nonnegative_c3() {
    let opts = SpectrumOptions { c3_nonneg: true, ..Default::default() };
    let out = enumerate_spectra(2, -2, 1, opts).unwrap();
    assert_eq!(vals(&out), vec![vec![0, 0], vec![0, -1], vec![-1, -1]]);
}

#[test]
fn spectrum2_excludes_double_descent() {
    let base = SpectrumOptions::default();
    let with = SpectrumOptions { spectrum2: true, ..base };
    let plain = enumerate_spectra(4, -3, 1, base).unwrap();
    let strict = enumerate_spectra(4, -3, 1, with).unwrap();
    let bad = sp(&[0, -1, -2, -2]);
    assert!(plain.contains(&bad));
    assert!(!strict.contains(&bad));
    assert_eq!(check_rules(&bad, with), Some(SpectrumRule::Spectrum2));
    assert!(strict.contains(&sp(&[0, -1, -2, -3])));
}

#[test]
fn length_one() {
    for (lo, hi) in [(0, 0), (-3, 3), (-1, 1)] {
        let out = enumerate_spectra(1, lo, hi, SpectrumOptions::default()).unwrap();
        assert_eq!(vals(&out), vec![vec![0]]);
    }
}

#[test]
fn cohomology_from_spectra() {
    assert_eq!(h1_from_spectrum(&sp(&[0, 0, -1]), -1).unwrap(), 2);
    assert_eq!(h1_from_spectrum(&sp(&[0, -1, -1, -1]), -1).unwrap(), 1);
    assert_eq!(h1_from_spectrum(&sp(&[1, 0, 0, -1]), -5).unwrap(), 0);
    assert_eq!(h2_from_spectrum(&sp(&[0, -1, -2]), -1).unwrap(), 1);
    assert_eq!(h2_from_spectrum(&sp(&[0, 0, 0, 0]), -2).unwrap(), 0);
    assert_eq!(h2_from_spectrum(&sp(&[0, -1, -2, -3]), 0).unwrap(), 1);
    assert!(h1_from_spectrum(&sp(&[0]), 0).is_err());
    assert!(h2_from_spectrum(&sp(&[0]), -4).is_err());
}

#[test]
fn c3_and_genus() {
    assert_eq!(c3_from_spectrum(&sp(&[-1, -1, -2, -2])), 12);
    assert_eq!(c3_from_spectrum(&sp(&[0, 0, 0])), 0);
    assert_eq!(genus_from_c3(0).unwrap(), 1);
    assert_eq!(c3_from_spectrum(&sp(&[0, 0, -1])), 2);
    assert_eq!(genus_from_c3(2).unwrap(), 2);
    assert!(genus_from_c3(3).is_err());
}

#[test]
fn bad_sequences_are_rejected() {
    assert!(Spectrum::new(vec![-1, 0]).is_err());
    let o = SpectrumOptions::default();
    assert_eq!(check_rules(&sp(&[1, 1]), o), Some(SpectrumRule::PositiveGap));
    assert_eq!(check_rules(&sp(&[0, -2]), o), Some(SpectrumRule::NegativeGap));
    assert_eq!(check_rules(&sp(&[-1, -2]), o), Some(SpectrumRule::NoZeroSingleMinusOne));
}

fn opts() -> impl Strategy<Value = SpectrumOptions> {
    (any::<bool>(), any::<bool>(), any::<bool>(), any::<bool>()).prop_map(|(a, b, c, d)| SpectrumOptions {
        spectrum2: a,
        symmetric: b,
        c3_nonneg: c,
        exclude_ge_1: d,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn output_is_closed_under_rules(c in 1usize..6, lo in -4i64..1, hi in 0i64..3, o in opts()) {
        let out = enumerate_spectra(c, lo, hi, o).unwrap();
        for s in &out {
            prop_assert!(check_rules(s, o).is_none());
            prop_assert_eq!(s.len(), c);
            if o.symmetric {
                let mut neg: Vec<i64> = s.values().iter().map(|v| -v).collect();
                neg.sort_unstable_by(|a, b| b.cmp(a));
                prop_assert_eq!(&neg[..], s.values());
            }
            // breaking a gap rule by pushing the minimum further down
            let mut k = s.values().to_vec();
            let last = k.len() - 1;
            k[last] = k[last].min(-1) - 2;
            let broken = Spectrum::new(k).unwrap();
            prop_assert!(check_rules(&broken, o).is_some());
        }
        let mut sorted = out.clone();
        sorted.sort_by(|a, b| b.cmp(a));
        prop_assert_eq!(sorted, out);
    }

    #[test]
    fn h1_at_minus_two_detects_positive_entries(c in 1usize..6, o in opts()) {
        for s in enumerate_spectra(c, -4, 2, o).unwrap() {
            let pos = s.values().iter().any(|&k| k >= 1);
            prop_assert_eq!(h1_from_spectrum(&s, -2).unwrap() == 0, !pos);
        }
    }
}
