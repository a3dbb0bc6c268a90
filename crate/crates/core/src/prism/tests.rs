use super::*;
use crate::base_rings::{parse_polynomial, parse_spec};
use crate::delta::DeltaLift;
use crate::witt::WittVector;

fn prec(p: u64, n: u32, m: u32) -> Precision {
    Precision::for_prime(p).unwrap().with_digits(n).unwrap().with_series_order(m).unwrap()
}

fn el(r: &Arc<RingSpec>, s: &str) -> RingElem {
    parse_polynomial(s, r).unwrap()
}

fn bk(p: u64, e: &str, n: u32, m: u32) -> Result<PrismSpec> {
    PrismSpec::new(&CatalogEntry::BreuilKisin(Eisenstein::parse(e)?), prec(p, n, m))
}

#[test]
fn eisenstein_parsing_and_checks() {
    let e = Eisenstein::parse("u^2-2").unwrap();
    assert_eq!(e, Eisenstein::parse("1,0,-2").unwrap());
    assert_eq!(e.degree(), 2);
    assert!(e.check(2).is_ok());
    assert!(matches!(Eisenstein::parse("u^2").unwrap().check(2), Err(Error::NotEisenstein(_))));
    assert!(matches!(Eisenstein::parse("u^2-4").unwrap().check(2), Err(Error::NotEisenstein(_))));
    assert!(matches!(Eisenstein::parse("u^2+u-2").unwrap().check(2), Err(Error::NotEisenstein(_))));
    assert!(Eisenstein::parse("u^3+3*u+3").unwrap().check(3).is_ok());
}

#[test]
fn catalog_names_parse() {
    assert_eq!("crystalline".parse::<CatalogEntry>().unwrap(), CatalogEntry::Crystalline);
    assert_eq!("qdr".parse::<CatalogEntry>().unwrap(), CatalogEntry::QDeRham);
    assert_eq!("perfectoid:2".parse::<CatalogEntry>().unwrap(), CatalogEntry::Perfectoid(2));
    assert!("bk".parse::<CatalogEntry>().is_err());
    assert!("nonsense".parse::<CatalogEntry>().is_err());
}

#[test]
fn crystalline_prism() {
    let pr = PrismSpec::new(&CatalogEntry::Crystalline, prec(3, 3, 8)).unwrap();
    assert_eq!(pr.carrier().id(), "Z/27");
    let v = pr.check().unwrap();
    assert!(v.by_ideal() && v.by_delta());
    let (a, b) = v.witness.unwrap();
    let d = pr.orientation();
    assert_eq!(&(&a * d) + &(&b * &pr.ring().phi(d).unwrap()), RingElem::from_int(pr.carrier(), 3));
}

#[test]
fn breuil_kisin_prism() {
    let pr = bk(2, "u^2-2", 3, 8).unwrap();
    assert_eq!(pr.carrier().id(), "Z/8[[u]]+O(9)");
    let v = pr.check().unwrap();
    assert!(v.by_ideal() && v.by_delta());
    assert!(matches!(bk(2, "u^2", 3, 8), Err(Error::NotEisenstein(_))));
    assert!(matches!(bk(2, "u^2-2", 3, 4), Err(Error::BadPrecision(_))));
}

#[test]
fn distinguished_verdicts_on_examples() {
    let z8 = RingSpec::z_mod_pn(prec(2, 3, 8)).unwrap();
    let ring = DeltaRing::new(&z8, vec![]).unwrap();
    let four = is_distinguished(&ring, &RingElem::from_int(&z8, 4)).unwrap();
    assert!(!four.by_ideal() && !four.by_delta());
    let unit = is_distinguished(&ring, &RingElem::from_int(&z8, 3)).unwrap();
    assert!(!unit.in_radical && !unit.by_ideal() && !unit.by_delta());
    assert!(unit.ideal_member);

    let a = parse_spec("Z/8[[u]]+O(9)", prec(2, 3, 8)).unwrap();
    let ring = DeltaRing::new(&a, vec![RingElem::zero(&a)]).unwrap();
    let v = is_distinguished(&ring, &el(&a, "u-2")).unwrap();
    assert!(v.by_ideal() && v.by_delta());
    let (x, y) = v.witness.unwrap();
    let d = el(&a, "u-2");
    assert_eq!(&(&x * &d) + &(&y * &ring.phi(&d).unwrap()), RingElem::from_int(&a, 2));
    for s in ["u^2", "4+u", "u^3-4", "2*u-4"] {
        let v = is_distinguished(&ring, &el(&a, s)).unwrap();
        assert!(!v.by_ideal() && !v.by_delta(), "{s}");
    }
}

#[test]
fn criteria_agree_on_every_small_element() {
    let a = parse_spec("Z/4[[u]]+O(3)", prec(2, 2, 2)).unwrap();
    let ring = DeltaRing::new(&a, vec![RingElem::zero(&a)]).unwrap();
    for d in a.elements(1 << 10).unwrap() {
        let v = is_distinguished(&ring, &d).unwrap();
        assert!(v.agree(), "{d}");
        if let Some((x, y)) = v.witness {
            assert_eq!(&(&x * &d) + &(&y * &ring.phi(&d).unwrap()), RingElem::from_int(&a, 2));
        }
    }
}

#[test]
fn catalog_prisms_are_distinguished() {
    let entries = [
        CatalogEntry::Crystalline,
        CatalogEntry::QDeRham,
        CatalogEntry::Perfectoid(1),
        CatalogEntry::BreuilKisin(Eisenstein::parse("u-2").unwrap()),
    ];
    for p in [2, 3] {
        for e in &entries {
            let e = match (e, p) {
                (CatalogEntry::BreuilKisin(_), 3) => CatalogEntry::BreuilKisin(Eisenstein::parse("u^2-3").unwrap()),
                _ => e.clone(),
            };
            let pr = PrismSpec::new(&e, prec(p, 2, 9)).unwrap();
            assert!(pr.check().unwrap().agree());
        }
    }
}

#[test]
fn q_de_rham_orientation_at_three() {
    let pr = PrismSpec::new(&CatalogEntry::QDeRham, prec(3, 2, 8)).unwrap();
    assert_eq!(pr.orientation(), &el(pr.carrier(), "3+3*t+t^2"));
    let t = el(pr.carrier(), "t");
    // φ(q) = q^p with q = 1 + t
    let q = &RingElem::one(pr.carrier()) + &t;
    assert_eq!(&RingElem::one(pr.carrier()) + &pr.ring().phi(&t).unwrap(), q.pow(3));
}

#[test]
fn hodge_tate_quotients() {
    let pr = PrismSpec::new(&CatalogEntry::Crystalline, prec(5, 3, 8)).unwrap();
    let ht = pr.hodge_tate_quotient().unwrap();
    assert_eq!(ht.spec.id(), "F_5");

    let pr = bk(2, "u^2-2", 3, 8).unwrap();
    let ht = pr.hodge_tate_quotient().unwrap();
    assert_eq!(ht.spec.id(), "Z/8[pi]/(pi^2-2)");
    let img = ht.reduction.apply(&el(pr.carrier(), "u^2")).unwrap();
    assert_eq!(img, RingElem::from_int(&ht.spec, 2));
    assert!(ht.reduction.apply(pr.orientation()).unwrap().is_zero());
}

#[test]
fn prism_json_shape() {
    let pr = bk(2, "u^2-2", 2, 4).unwrap();
    let j = serde_json::to_value(pr.to_json()).unwrap();
    assert_eq!(j["catalog"], "bk");
    assert_eq!(j["carrier"], "Z/4[[u]]+O(5)");
    assert_eq!(j["distinguished"], true);
}

#[test]
fn envelope_of_the_orientation_is_trivial() {
    let pr = bk(2, "u-2", 3, 4).unwrap();
    let env = EnvelopePresentation::new(&pr, &[pr.orientation().clone()], 2).unwrap();
    assert!(env.relations().iter().all(|r| r.orientation == Orientation::Quotient));
    let c = env.carrier();
    assert_eq!(env.normal_form(&env.fraction_var(0, 0)).unwrap(), RingElem::one(c));
    assert!(env.reduces_to_zero(&env.fraction_var(0, 1)).unwrap());
    assert!(env.reduces_to_zero(&env.fraction_var(0, 2)).unwrap());
    let diag = env.diagnostics().unwrap();
    assert!(diag.locally_confluent && diag.unoriented == 0);
}

#[test]
fn envelope_quotient_rule_on_multiples() {
    let pr = bk(2, "u-2", 3, 4).unwrap();
    let x = el(pr.carrier(), "u^2-2*u");
    let env = EnvelopePresentation::new(&pr, &[x], 1).unwrap();
    let c = env.carrier();
    assert_eq!(env.normal_form(&env.fraction_var(0, 0)).unwrap(), el(c, "u"));
    // δ(u) = 0
    assert!(env.reduces_to_zero(&env.fraction_var(0, 1)).unwrap());
    assert!(env.diagnostics().unwrap().locally_confluent);
}

#[test]
fn envelope_of_a_free_variable_is_unoriented() {
    let pr = PrismSpec::new(&CatalogEntry::Crystalline, prec(2, 3, 8)).unwrap().with_free_vars(&["t"], 2).unwrap();
    let t = el(pr.carrier(), "t");
    let env = EnvelopePresentation::new(&pr, &[t], 2).unwrap();
    assert_eq!(env.relations().len(), 3);
    // the coefficient of δ^k f is φ^k(d) = 2, never a unit
    for r in env.relations() {
        assert_eq!(r.orientation, Orientation::Unoriented);
        assert_eq!(r.lead, RingElem::from_int(r.lead.spec(), 2));
    }
    let diag = env.diagnostics().unwrap();
    assert_eq!(diag.unoriented, 3);
    assert!(diag.residues.iter().all(|r| !r.reduces_to_zero));
    let j = serde_json::to_value(env.to_json().unwrap()).unwrap();
    assert_eq!(j["relations"].as_array().unwrap().len(), 3);
}

#[test]
fn two_numerators_with_equal_fractions() {
    let pr = bk(2, "u-2", 3, 4).unwrap();
    let d = pr.orientation().clone();
    let env = EnvelopePresentation::new(&pr, &[d.clone(), d], 1).unwrap();
    let diff = &env.fraction_var(0, 0) - &env.fraction_var(1, 0);
    assert!(env.reduces_to_zero(&diff).unwrap());
    let pr = pr.with_free_vars(&["t"], 1).unwrap();
    let t = el(pr.carrier(), "t");
    let env = EnvelopePresentation::new(&pr, &[t.clone(), t], 1).unwrap();
    let diff = &env.fraction_var(0, 0) - &env.fraction_var(1, 0);
    assert!(!env.reduces_to_zero(&diff).unwrap());
}

#[test]
fn envelope_rejects_foreign_numerators() {
    let pr = bk(2, "u-2", 3, 4).unwrap();
    let other = parse_spec("Z/8[x]", prec(2, 3, 4)).unwrap();
    assert!(EnvelopePresentation::new(&pr, &[el(&other, "x")], 1).is_err());
    assert!(EnvelopePresentation::new(&pr, &[], 1).is_err());
}

fn f2() -> Arc<RingSpec> {
    RingSpec::prime_field(prec(2, 1, 4)).unwrap()
}

#[test]
fn crystalline_points_are_units() {
    let pr = PrismSpec::new(&CatalogEntry::Crystalline, prec(2, 2, 4)).unwrap();
    let env = EnvelopePresentation::new(&pr, &[pr.orientation().clone()], 1).unwrap();
    let s = f2();
    let base = DeltaLift::new(pr.ring(), &s, vec![], 2).unwrap();
    let pts = envelope_points(&env, &base, 1 << 10).unwrap();
    assert_eq!(pts.candidates, 4);
    let units: Vec<Vec<WittVector>> = [[1, 0], [1, 1]]
        .iter()
        .map(|c| vec![WittVector::new(&s, c.iter().map(|&x| RingElem::from_int(&s, x)).collect()).unwrap()])
        .collect();
    assert_eq!(pts.set_a, units);
    assert!(pts.equal());
}

#[test]
fn free_variable_points_agree() {
    let pr = PrismSpec::new(&CatalogEntry::Crystalline, prec(2, 2, 4)).unwrap().with_free_vars(&["t"], 2).unwrap();
    let s = parse_spec("F_2[e]/(e^2)", prec(2, 1, 4)).unwrap();
    let t = el(pr.carrier(), "t");
    let env = EnvelopePresentation::new(&pr, &[t], 2).unwrap();
    for img in ["0", "1", "e", "1+e"] {
        let assignment = vec![el(&s, img), el(&s, "e"), RingElem::zero(&s)];
        let base = DeltaLift::new(pr.ring(), &s, assignment, 2).unwrap();
        let pts = envelope_points(&env, &base, 1 << 12).unwrap();
        assert!(pts.equal(), "t -> {img}");
    }
}

#[test]
fn breuil_kisin_points_agree() {
    let pr = bk(2, "u-2", 2, 4).unwrap();
    let s = parse_spec("F_2[e]/(e^2)", prec(2, 1, 4)).unwrap();
    let x = el(pr.carrier(), "u^2");
    let env = EnvelopePresentation::new(&pr, &[x], 1).unwrap();
    for img in ["0", "e"] {
        let base = DeltaLift::new(pr.ring(), &s, vec![el(&s, img)], 2).unwrap();
        let pts = envelope_points(&env, &base, 1 << 12).unwrap();
        assert!(pts.equal(), "u -> {img}");
    }
}

#[test]
fn degenerate_orientation_image() {
    // u -> 0 sends d = u - 2 to 2, whose image in W_1(F_2) vanishes
    let pr = bk(2, "u-2", 2, 4).unwrap().with_free_vars(&["t"], 1).unwrap();
    let s = f2();
    let t = el(pr.carrier(), "t");
    let env = EnvelopePresentation::new(&pr, &[t], 1).unwrap();
    let zero = DeltaLift::new(pr.ring(), &s, vec![RingElem::zero(&s); 3], 1).unwrap();
    let pts = envelope_points(&env, &zero, 16).unwrap();
    assert_eq!(pts.set_a.len(), 2);
    assert!(pts.equal());
    let one =
        DeltaLift::new(pr.ring(), &s, vec![RingElem::zero(&s), RingElem::one(&s), RingElem::zero(&s)], 1).unwrap();
    let pts = envelope_points(&env, &one, 16).unwrap();
    assert!(pts.set_a.is_empty() && pts.equal());
}

#[test]
fn two_numerators_points_agree() {
    let pr = PrismSpec::new(&CatalogEntry::Crystalline, prec(2, 2, 4)).unwrap();
    let d = pr.orientation().clone();
    let env = EnvelopePresentation::new(&pr, &[d.clone(), d], 1).unwrap();
    let s = f2();
    let base = DeltaLift::new(pr.ring(), &s, vec![], 2).unwrap();
    let pts = envelope_points(&env, &base, 1 << 10).unwrap();
    assert_eq!(pts.set_a.len(), 4);
    assert!(pts.equal());
}

#[test]
fn points_at_three() {
    let pr = PrismSpec::new(&CatalogEntry::Crystalline, prec(3, 2, 4)).unwrap().with_free_vars(&["t"], 1).unwrap();
    let s = RingSpec::prime_field(prec(3, 1, 4)).unwrap();
    let t = el(pr.carrier(), "t");
    let env = EnvelopePresentation::new(&pr, &[t], 1).unwrap();
    for (a, b) in [(0, 0), (0, 1), (1, 2)] {
        let base =
            DeltaLift::new(pr.ring(), &s, vec![RingElem::from_int(&s, a), RingElem::from_int(&s, b)], 2).unwrap();
        let pts = envelope_points(&env, &base, 1 << 10).unwrap();
        assert!(pts.equal(), "t -> ({a}, {b})");
    }
}

#[test]
fn budget_is_enforced() {
    let pr = PrismSpec::new(&CatalogEntry::Crystalline, prec(2, 2, 4)).unwrap();
    let env = EnvelopePresentation::new(&pr, &[pr.orientation().clone()], 1).unwrap();
    let s = f2();
    let base = DeltaLift::new(pr.ring(), &s, vec![], 3).unwrap();
    assert!(matches!(envelope_points(&env, &base, 4), Err(Error::EnumerationBudgetExceeded { .. })));
}
