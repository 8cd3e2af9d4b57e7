use bundlekit::catalog::*;
use bundlekit::exactfield::Field;
use bundlekit::sheafcoh::{coh_table, SheafNode};
use std::path::PathBuf;

fn catalog_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../catalog")
}

fn opts() -> VerifyOptions {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    VerifyOptions { threads, ..Default::default() }
}

fn shipped() -> Vec<CatalogEntry> {
    Catalog::load(&catalog_dir()).unwrap().entries.into_iter().map(|e| e.unwrap()).collect()
}

fn entry(id: &str) -> CatalogEntry {
    shipped().into_iter().find(|e| e.id == id).unwrap()
}

#[test]
fn shipped_catalog_verifies() {
    let cat = Catalog::load(&catalog_dir()).unwrap();
    assert!(cat.entries.len() >= 20);
    let rep = verify_all(Field::default(), &cat, opts());
    assert!(rep.passed(), "{}", rep.to_text());
    // reports are sorted by id and every entry ran its gg check
    let ids: Vec<&str> = rep.entries.iter().map(|e| e.id.as_str()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    assert!(rep.entries.iter().all(|e| e.check("gg").is_some() && e.check("riemann-roch").is_some()));
}

#[test]
fn computed_strings_for_selected_entries() {
    let f = Field::default();
    let rep = verify_entry(f, &entry("kernel-linear-linear-linear-quadric"), VerifyOptions::default());
    assert!(rep.pass);
    assert_eq!(rep.check("chern").unwrap().computed, "rank 3 c [4, 6, 2]");
    assert!(rep.check("h1(-3)").unwrap().pass);
    let rep = verify_entry(f, &entry("kernel-2x5-linear"), VerifyOptions::default());
    assert!(rep.pass && rep.check("regularity").unwrap().pass);
    assert_eq!(rep.check("chern").unwrap().computed, "rank 3 c [4, 7, 2]");
    let rep = verify_entry(f, &entry("nullcorrelation-twist"), VerifyOptions::default());
    assert_eq!(rep.check("chern").unwrap().computed, "rank 2 c [4, 5, 0]");
    let rep = verify_entry(f, &entry("instanton2-twist"), VerifyOptions::default());
    assert!(rep.pass);
    assert_eq!(rep.check("chern").unwrap().computed, "rank 2 c [4, 6, 0]");
}

#[test]
fn instanton_monad_is_a_monad() {
    let f = Field::default();
    let NodeExpr::Twist { node, .. } = entry("instanton2-twist").construction else { panic!() };
    let NodeExpr::Homology { complex, .. } = *node else { panic!() };
    let c = complex.build(f, 4).unwrap();
    // B·A = 0 and the complex is exact off the middle
    assert!(c.diff(0).compose(f, &c.diff(-1)).unwrap().is_zero());
    assert!(c.verify_exact(f, (-1, 6), &[-1]).is_exact());
    assert!(c.verify_exact(f, (1, 6), &[1]).is_exact());
    // F = E(−2) is stable: h^0(F) = 0, and h^1(F(−2)) = 0
    let e = entry("instanton2-twist").construction.build(f, 4).unwrap();
    let t = coh_table(f, &e, (-4, -2)).unwrap();
    assert_eq!(t.h(0, -2), Some(0));
    assert_eq!(t.h(1, -4), Some(0));
}

#[test]
fn corrupted_chern_gives_exactly_one_failure() {
    let mut entries = shipped();
    let k = entries.iter().position(|e| e.id == "kernel-2x5-linear").unwrap();
    entries[k].expected.chern[1] = 8;
    let cat = Catalog::parse(&to_json(&entries)).unwrap();
    let rep = verify_all(Field::default(), &cat, opts());
    assert_eq!(rep.failures(), vec![("kernel-2x5-linear".to_string(), "chern".to_string())]);
    assert!(!rep.passed());
}

#[test]
fn empty_catalog_passes() {
    let cat = Catalog::parse(r#"{"entries": []}"#).unwrap();
    let rep = verify_all(Field::default(), &cat, VerifyOptions::default());
    assert!(rep.passed() && rep.entries.is_empty());
}

#[test]
fn parse_errors_stay_with_their_entry() {
    let text = r#"{"entries": [
        {"id": "bad", "n": 3},
        {"id": "bad-form", "n": 3, "description": "", "construction": {"ker": {"src": [0], "tgt": [1], "rows": [["x0 +"]]}},
         "expected": {"rank": 0, "chern": [1, 0, 0], "gg": "generated"}},
        {"id": "ok", "n": 2, "description": "", "construction": {"sum": [1]}, "expected": {"rank": 1, "chern": [1, 0], "gg": "generated"}}
    ]}"#;
    let cat = Catalog::parse(text).unwrap();
    let rep = verify_all(Field::default(), &cat, VerifyOptions::default());
    assert!(rep.entry("ok").unwrap().pass);
    assert!(rep.entry("bad").unwrap().error.as_ref().unwrap().starts_with("parse"));
    assert!(rep.entry("bad-form").unwrap().error.is_some());
    assert!(Catalog::parse("[1, 2]").is_err());
}

#[test]
fn catalog_files_round_trip() {
    for f in std::fs::read_dir(catalog_dir()).unwrap() {
        let path = f.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let entries: Vec<CatalogEntry> = Catalog::parse(&text).unwrap().entries.into_iter().map(|e| e.unwrap()).collect();
        let again = to_json(&entries);
        let a: serde_json::Value = serde_json::from_str(&text).unwrap();
        let b: serde_json::Value = serde_json::from_str(&again).unwrap();
        assert_eq!(a, b, "{}", path.display());
        assert_eq!(again.trim_end(), text.trim_end(), "{} is not normalized", path.display());
    }
}

#[test]
fn p4_entry_matches_its_builder() {
    let f = Field::default();
    let built = p4_koszul_kernel_complex(f, 7).unwrap();
    let NodeExpr::Homology { complex, pos } = entry("koszul-quotient-kernel-p4").construction else { panic!() };
    assert_eq!(pos, 0);
    assert_eq!(complex, ComplexExpr::from_complex(f, &built));
    assert!(built.check_d2(f).is_ok());
}

#[test]
fn omega_nodes_match_euler_sequence() {
    let f = Field::default();
    for nvars in 3..=5usize {
        let n = nvars as i64 - 1;
        let omega = NodeExpr::Omega { i: 1, twist: 2 }.build(f, nvars).unwrap();
        let vars: Vec<String> = (0..nvars).map(|i| format!("x{i}")).collect();
        let euler = SheafNode::KerEpi(
            MatrixExpr { src: vec![1; nvars], tgt: vec![2], rows: vec![vars] }.build(f, nvars).unwrap(),
        );
        let w = (-n - 2, 2);
        assert_eq!(coh_table(f, &omega, w).unwrap(), coh_table(f, &euler, w).unwrap());
    }
    // Ω^n = O(−n−1)
    let top = NodeExpr::Omega { i: 2, twist: 0 }.build(f, 3).unwrap();
    assert_eq!(coh_table(f, &top, (-2, 3)).unwrap(), coh_table(f, &SheafNode::line_sum(3, vec![-3]), (-2, 3)).unwrap());
    assert!(NodeExpr::Omega { i: 3, twist: 0 }.build(f, 3).is_err());
}
