use super::*;
use crate::base_rings::{parse_polynomial, parse_spec, Precision};
use crate::witt::WittVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn prec(p: u64) -> Precision {
    Precision::for_prime(p).unwrap()
}

fn z(p: u64) -> Arc<RingSpec> {
    RingSpec::integers(prec(p)).unwrap()
}

fn el(r: &Arc<RingSpec>, s: &str) -> RingElem {
    parse_polynomial(s, r).unwrap()
}

/// Independent oracle: `δ(a) = (φ(a) - a^p) / p` with `φ` the ring map
/// fixed by its values on generators.
fn oracle_delta(ring: &DeltaRing, a: &RingElem) -> RingElem {
    let lift = ring.lift();
    let images = (0..lift.nvars())
        .map(|i| {
            let x = RingElem::var(lift, i);
            let d = ring.rule(i).map(|d| d.coerce(lift).unwrap()).unwrap_or_else(|| RingElem::zero(lift));
            &x.pow(ring.p()) + &d.scale(&lift.prime())
        })
        .collect();
    let phi = RingHom::new(lift, lift, images).unwrap();
    let a = a.coerce(lift).unwrap();
    let num = &phi.apply(&a).unwrap() - &a.pow(ring.p());
    num.div_exact_by_p(1).unwrap().value
}

#[test]
fn free_ring_frobenius_on_generators() {
    let r = DeltaRing::free(1, 2, &z(2)).unwrap();
    let c = r.carrier();
    assert_eq!(c.vars(), ["x", "dx", "d2x"]);
    assert_eq!(r.phi(&el(c, "x")).unwrap(), el(c, "x^2+2*dx"));
    assert_eq!(r.phi(&el(c, "dx")).unwrap(), el(c, "dx^2+2*d2x"));
    assert!(r.delta(&RingElem::one(c)).unwrap().value.is_zero());
    assert!(r.delta(&el(c, "x*dx")).is_ok());
    assert!(matches!(r.delta(&el(c, "d2x")), Err(Error::DepthExceeded(v)) if v == "d2x"));
}

#[test]
fn generator_count() {
    let r = DeltaRing::free(3, 2, &z(3)).unwrap();
    assert_eq!(r.carrier().nvars(), 9);
}

#[test]
fn sum_and_product_rules_p2() {
    let r = DeltaRing::free(2, 2, &z(2)).unwrap();
    let c = r.carrier();
    assert_eq!(r.delta(&el(c, "x1+x2")).unwrap().value, el(c, "dx1+dx2-x1*x2"));
    assert_eq!(r.delta(&el(c, "x1^2")).unwrap().value, el(c, "2*x1^2*dx1+2*dx1^2"));
}

#[test]
fn constants() {
    let r = DeltaRing::new(&z(3), vec![]).unwrap();
    let three = RingElem::from_int(&z(3), 3);
    assert_eq!(r.delta(&three).unwrap().value, RingElem::from_int(&z(3), -8));
    assert_eq!(delta_of_integer(&BigInt::from(5), 5), BigInt::from(1 - 625));
}

#[test]
fn structural_recursion_matches_phi_oracle() {
    for p in [2u64, 3] {
        let r = DeltaRing::free(2, 2, &z(p)).unwrap();
        let names = ["x1", "x2", "dx1", "dx2"];
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        for _ in 0..25 {
            let mut a = RingElem::zero(r.carrier());
            for _ in 0..4 {
                let m =
                    format!("{}*{}*{}", rng.gen_range(-5..=5), names[rng.gen_range(0..4)], names[rng.gen_range(0..4)]);
                a = &a + &el(r.carrier(), &m);
            }
            a = &a + &RingElem::from_int(r.carrier(), rng.gen_range(-9..=9));
            assert_eq!(r.delta(&a).unwrap().value, oracle_delta(&r, &a));
        }
    }
}

#[test]
fn phi_is_multiplicative_and_congruent() {
    let r = DeltaRing::free(2, 2, &z(3)).unwrap();
    let c = r.carrier();
    let a = el(c, "x1+2*x2^2-1");
    let b = el(c, "3*x1*x2+dx1");
    let ab = &a * &b;
    assert_eq!(r.phi(&ab).unwrap(), &r.phi(&a).unwrap() * &r.phi(&b).unwrap());
    assert_eq!(r.phi(&(&a + &b)).unwrap(), &r.phi(&a).unwrap() + &r.phi(&b).unwrap());
    let diff = &r.phi(&a).unwrap() - &a.pow(3);
    assert!(diff.div_exact_by_p(1).is_ok());
}

#[test]
fn breuil_kisin_rule() {
    let bk = parse_spec("Z/16[[u]]+O(9)", prec(2)).unwrap();
    let r = DeltaRing::new(&bk, vec![RingElem::zero(&bk)]).unwrap();
    assert_eq!(r.phi(&el(&bk, "u")).unwrap(), el(&bk, "u^2"));
    let d = r.delta(&el(&bk, "u^2-2")).unwrap();
    assert_eq!(d.lost_digits, 1);
    assert_eq!(d.value, oracle_delta(&r, &el(&bk, "u^2-2")).coerce(&bk).unwrap());
    // δ(u^2) = 0 and δ(-2) = -3, with sum correction 2u^2
    assert!(d.value.eq_mod_p_power(&el(&bk, "2*u^2-3"), 4 - d.lost_digits));
}

#[test]
fn finite_carrier_delta_is_well_defined_mod_p_n_minus_1() {
    let r = DeltaRing::free(1, 1, &parse_spec("Z/27", prec(3)).unwrap()).unwrap();
    let lift = r.lift().clone();
    let a = el(r.carrier(), "5*x+2");
    let shifted = &a.coerce(&lift).unwrap() + &el(&lift, "27*x+54");
    let d1 = r.delta(&a).unwrap();
    let d2 = r.delta_in_lift(&shifted).unwrap().coerce(r.carrier()).unwrap();
    assert!(d1.value.eq_mod_p_power(&d2, 3 - d1.lost_digits));
    assert_eq!(r.phi(&a).unwrap(), r.phi_in_lift(&shifted).unwrap().coerce(r.carrier()).unwrap());
}

#[test]
fn incompatible_rule_is_rejected() {
    let c = parse_spec("Z/9[u]/(u^3)", prec(3)).unwrap();
    let e = DeltaRing::new(&c, vec![RingElem::one(&c)]);
    assert!(matches!(e, Err(Error::UnsupportedCarrier(_))));
}

#[test]
fn witt_delta_basics() {
    let zt = parse_spec("Z[t]/(t^3)", prec(2)).unwrap();
    let t = el(&zt, "1+t");
    assert!(delta_on_witt(&WittVector::teichmuller(&t, 3)).unwrap().is_zero());
    for p in [2u64, 3, 5] {
        let zz = z(p);
        let pv = WittVector::from_integer(&zz, 3, &BigInt::from(p)).unwrap();
        let expect = BigInt::from(1) - BigInt::from(p).pow(p as u32 - 1);
        assert_eq!(delta_on_witt(&pv).unwrap(), WittVector::from_integer(&zz, 2, &expect).unwrap());
    }
}

#[test]
fn witt_frobenius_is_the_frobenius_lift() {
    let zt = parse_spec("Z[t]/(t^3)", prec(3)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..15 {
        let x = WittVector::random(&zt, 3, &mut rng);
        let lhs = x
            .restriction()
            .unwrap()
            .pow(3)
            .unwrap()
            .add(&delta_on_witt(&x).unwrap().scale(&BigInt::from(3)).unwrap())
            .unwrap();
        assert_eq!(lhs, x.frobenius().unwrap());
    }
}

#[test]
fn lift_of_p_is_v1() {
    for p in [2u64, 3] {
        let zz = z(p);
        let a = DeltaRing::new(&zz, vec![]).unwrap();
        let fp = RingSpec::prime_field(prec(p)).unwrap();
        let lift = DeltaLift::new(&a, &fp, vec![], 2).unwrap();
        let img = lift.apply_via_ghost(&RingElem::from_int(&zz, p as i64)).unwrap();
        assert_eq!(img, WittVector::one(&fp, 2).verschiebung());
        assert_eq!(lift.apply(&RingElem::from_int(&zz, p as i64)).unwrap(), img);
    }
}

#[test]
fn lift_restricts_to_assignment_and_is_equivariant() {
    let p = 3;
    let a = DeltaRing::free(1, 4, &z(p)).unwrap();
    let s = parse_spec("Z/27", prec(p)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let assignment: Vec<RingElem> = (0..5).map(|_| RingElem::random(&s, &mut rng)).collect();
        let lift = DeltaLift::new(&a, &s, assignment.clone(), 3).unwrap();
        let c = a.carrier();
        let x = el(c, "x^2+2*x*dx-1");
        let img = lift.apply(&x).unwrap();
        assert_eq!(img, lift.apply_via_ghost(&x).unwrap());
        assert_eq!(*img.component(0), lift.base_map().apply(&x.coerce(a.lift()).unwrap()).unwrap());
        assert_eq!(lift.apply(&a.phi(&x).unwrap()).unwrap().truncate(2).unwrap(), img.frobenius().unwrap());
        let dx = a.delta_in_lift(&x.coerce(a.lift()).unwrap()).unwrap();
        assert_eq!(lift.apply(&dx).unwrap().truncate(2).unwrap(), delta_on_witt(&img).unwrap());
    }
}

/// `W_n(F_p) = Z/p^n` via `(a_i) -> sum p^i a_i^(p^(n-1))`.
fn witt_fp_to_int(x: &WittVector) -> u64 {
    let p = x.p();
    let n = x.len() as u32;
    let m = p.pow(n);
    let mut acc = 0u64;
    for (i, a) in x.components().iter().enumerate() {
        let a: u64 = a.constant_term().try_into().unwrap();
        let teich = (0..p.pow(n - 1)).fold(1u64, |t, _| t * a % m);
        acc = (acc + p.pow(i as u32) * teich) % m;
    }
    acc
}

#[test]
fn lift_into_witt_of_fp_matches_integer_oracle() {
    for p in [2u64, 3] {
        let n = 3;
        let a = DeltaRing::free(1, 2, &z(p)).unwrap();
        let fp = RingSpec::prime_field(prec(p)).unwrap();
        for code in 0..p.pow(3) {
            let vals: Vec<u64> = (0..3).map(|j| code / p.pow(j) % p).collect();
            let assignment = vals.iter().map(|&v| RingElem::from_int(&fp, v as i64)).collect();
            let lift = DeltaLift::new(&a, &fp, assignment, n).unwrap();
            let got = witt_fp_to_int(lift.generator_image(0).unwrap());
            let m = p.pow(n as u32) as i128;
            let oracle: Vec<u64> = (0..p.pow(n as u32))
                .filter(|&x| {
                    let mut y = x as i128;
                    (0..n).all(|j| {
                        let ok = y.rem_euclid(p as i128) == vals[j] as i128;
                        y = (y - y.pow(p as u32)).div_euclid(p as i128).rem_euclid(m);
                        ok
                    })
                })
                .collect();
            assert_eq!(oracle, vec![got], "p={p} values {vals:?}");
        }
    }
}

#[test]
fn lift_is_unique_over_w2_f2() {
    let a = DeltaRing::free(1, 1, &z(2)).unwrap();
    let f2 = RingSpec::prime_field(prec(2)).unwrap();
    let elems = f2.elements(2).unwrap();
    for fx in &elems {
        for fdx in &elems {
            let lift = DeltaLift::new(&a, &f2, vec![fx.clone(), fdx.clone()], 2).unwrap();
            let mut hits = Vec::new();
            for h0 in &elems {
                for h1 in &elems {
                    let h = WittVector::new(&f2, vec![h0.clone(), h1.clone()]).unwrap();
                    let dh = delta_on_witt(&h).unwrap();
                    if h.component(0) == fx && dh.component(0) == fdx {
                        hits.push(h);
                    }
                }
            }
            assert_eq!(hits, vec![lift.generator_image(0).unwrap().clone()]);
            assert!(matches!(lift.generator_image(1), Err(Error::DepthExceeded(_))));
        }
    }
}

#[test]
fn json_shape() {
    let r = DeltaRing::free(1, 1, &z(2)).unwrap();
    let j = r.to_json();
    assert_eq!(j.vars, ["x", "dx"]);
    assert_eq!(j.rule_table[1].1, None);
    assert_eq!(j.rule_table[0].1.as_ref().unwrap().terms[0].monomial, vec![("dx".to_string(), 1)]);
}

#[test]
fn json_round_trip() {
    let r = DeltaRing::free(2, 2, &z(3)).unwrap();
    let text = serde_json::to_string(&r.to_json()).unwrap();
    let back: DeltaJson = serde_json::from_str(&text).unwrap();
    let r2 = back.into_ring(prec(3)).unwrap();
    assert_eq!(r2.to_json(), r.to_json());
    let c = r2.carrier();
    assert_eq!(
        r2.delta(&el(c, "x1*x2")).unwrap().value,
        r.delta(&el(r.carrier(), "x1*x2")).unwrap().value.coerce(c).unwrap()
    );

    let a = parse_spec("Z/8[[u]]+O(9)", prec(2).with_digits(3).unwrap()).unwrap();
    let bk = DeltaRing::new(&a, vec![RingElem::zero(&a)]).unwrap();
    let back = bk.to_json().into_ring(prec(2)).unwrap();
    assert_eq!(back.carrier().id(), a.id());

    let mut bad = r.to_json();
    bad.rule_table.swap(0, 1);
    assert!(matches!(bad.into_ring(prec(3)), Err(Error::Parse(_))));
}
