use super::*;
use crate::witt::{WittOps, WittVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn names(reports: &[CheckReport]) -> Vec<String> {
    reports.iter().map(|r| r.name.clone()).collect()
}

#[test]
fn registry_is_sorted() {
    let n = check_names();
    let mut sorted = n.clone();
    sorted.sort();
    assert_eq!(n, sorted);
}

#[test]
fn default_run_passes() {
    let reports = run_all(HarnessConfig::default()).unwrap();
    for r in &reports {
        assert!(r.passed(), "{}", r.to_json_line());
    }
    let mut seen = names(&reports);
    seen.dedup();
    assert_eq!(seen, check_names());
}

#[test]
fn reruns_are_identical() {
    let lines = |seed| {
        let cfg = HarnessConfig { seed, ..HarnessConfig::default() };
        run_all(cfg).unwrap().iter().map(|r| r.to_json_line()).collect::<Vec<_>>().join("\n")
    };
    assert_eq!(lines(11), lines(11));
    assert_ne!(lines(11), lines(12));
}

#[test]
fn empty_selection_is_empty() {
    let cfg = HarnessConfig { checks: Some(vec![]), ..HarnessConfig::default() };
    let reports = run_all(cfg).unwrap();
    assert!(reports.is_empty());
    assert_eq!(failures(&reports), 0);
    assert!(summary_table(&reports).ends_with("0 checks, 0 failed\n"));
}

#[test]
fn unknown_check_is_rejected() {
    let cfg = HarnessConfig { checks: Some(vec!["nope".into()]), ..HarnessConfig::default() };
    assert!(matches!(run_all(cfg), Err(Error::UnsupportedQuery(_))));
    let h = Harness::new(HarnessConfig::default()).unwrap();
    assert!(h.run("nope").is_err());
    assert!(h.run("group_law").unwrap().iter().all(|r| r.passed()));
}

fn corrupted() -> HarnessConfig {
    let table = WittPolynomialTable::shared(2).unwrap();
    // the sum polynomial without its carry term -a0 b0
    let poly = &table.a(1) + &table.b(1);
    HarnessConfig { corruption: Some(Corruption { p: 2, op: WittOp::Sum, index: 1, poly }), ..HarnessConfig::default() }
}

#[test]
fn corrupted_sum_is_caught() {
    let reports = run_all(corrupted()).unwrap();
    let failed: Vec<&CheckReport> = reports.iter().filter(|r| !r.passed()).collect();
    assert!(!failed.is_empty());
    for r in &failed {
        assert!(r.witness.is_object() && !r.witness.as_object().unwrap().is_empty());
    }
    let ghost = failed.iter().find(|r| r.name == "witt_ghost_identities").expect("ghost check fails");
    assert_eq!(ghost.witness["op"], "sum");
    assert_eq!(ghost.witness["index"], 1);
    assert!(failed.iter().any(|r| r.name == "witt_operator_identities"));
    // p = 3 instances still pass
    assert!(reports.iter().filter(|r| r.instance.starts_with("p = 3")).all(|r| r.passed()));
}

#[test]
fn summary_table_marks_failures() {
    let reports = run_all(corrupted()).unwrap();
    let table = summary_table(&reports);
    assert!(table.contains("FAIL"));
    assert!(table.lines().next().unwrap().starts_with("check"));
}

#[test]
fn square_zero_preconditions() {
    let ops = WittOps::shared(2).unwrap();
    let r = crate::base_rings::parse_spec("F_2[x]/(x^3)", Precision::default()).unwrap();
    let x = RingElem::var(&r, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let err = check_witt_square_zero(&ops, &r, std::slice::from_ref(&x), 2, 1 << 10, &mut rng);
    assert!(matches!(err, Err(Error::NotSquareZeroInput(_))));
    let x2 = x.pow(2);
    let rep = check_witt_square_zero(&ops, &r, &[x2], 3, 1 << 10, &mut rng).unwrap();
    assert!(rep.passed());
    assert_eq!(rep.witness["ideal_size"], 2);
}

#[test]
fn other_preconditions() {
    let ops = WittOps::shared(2).unwrap();
    let z4 = crate::base_rings::parse_spec("Z/4", Precision::default().with_digits(2).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    assert!(matches!(check_kernel_nilpotent(&ops, &z4, 1, 1 << 10, &mut rng), Err(Error::NotCharP(_))));
    let f2 = crate::base_rings::parse_spec("F_2", Precision::default()).unwrap();
    let v1 = WittVector::one(&f2, 3).verschiebung();
    assert!(matches!(check_p_squared_hodge_tate(&ops, &v1, "V(1)"), Err(Error::NotAUnit(_))));
    let z = crate::base_rings::RingSpec::integers(Precision::default()).unwrap();
    let ring = crate::delta::DeltaRing::free(1, 1, &z).unwrap();
    assert!(matches!(check_adjunction_roundtrip(&ring, &f2, 3, 2, &mut rng), Err(Error::DepthExceeded(_))));
}

#[test]
fn json_lines_have_no_runtime() {
    let h = Harness::new(HarnessConfig::default()).unwrap();
    let r = &h.run("frobenius_torsor").unwrap()[0];
    let v: serde_json::Value = serde_json::from_str(&r.to_json_line()).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["check", "instance", "verdict", "witness"]);
}
