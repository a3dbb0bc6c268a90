use super::*;
use crate::base_rings::{parse_polynomial, parse_spec, Precision};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn spec(s: &str, p: u64) -> Arc<RingSpec> {
    parse_spec(s, Precision::for_prime(p).unwrap()).unwrap()
}

fn vec_of(r: &Arc<RingSpec>, xs: &[&str]) -> WittVector {
    WittVector::new(r, xs.iter().map(|s| parse_polynomial(s, r).unwrap()).collect()).unwrap()
}

#[test]
fn symbolic_sum_length_two() {
    let r = spec("Z[a0,a1,b0,b1]", 2);
    let x = vec_of(&r, &["a0", "a1"]);
    let y = vec_of(&r, &["b0", "b1"]);
    assert_eq!(x.add(&y).unwrap(), vec_of(&r, &["a0+b0", "a1+b1-a0*b0"]));
}

#[test]
fn identities_for_zero_and_one() {
    let r = spec("Z/27[t]/(t^3)", 3);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10 {
        let x = WittVector::random(&r, 3, &mut rng);
        assert_eq!(x.add(&WittVector::zero(&r, 3)).unwrap(), x);
        assert_eq!(WittVector::one(&r, 3).mul(&x).unwrap(), x);
        assert!(x.add(&x.neg().unwrap()).unwrap().is_zero());
    }
}

#[test]
fn teichmuller_is_multiplicative_over_f3() {
    let r = spec("F_3", 3);
    for a in r.elements(9).unwrap() {
        for b in r.elements(9).unwrap() {
            let lhs = WittVector::teichmuller(&(&a * &b), 3);
            let rhs = WittVector::teichmuller(&a, 3).mul(&WittVector::teichmuller(&b, 3)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn restriction_commutes_with_verschiebung() {
    let r = spec("Z/8[x]", 2);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let x = WittVector::random(&r, 4, &mut rng);
    assert_eq!(x.verschiebung().restriction().unwrap(), x.restriction().unwrap().verschiebung());
    assert!(matches!(WittVector::zero(&r, 1).restriction(), Err(Error::LengthUnderflow(_))));
}

#[test]
fn p_is_v_of_one_in_char_p() {
    for p in [2u64, 3, 5] {
        let r = spec(&format!("F_{p}"), p);
        let pv = WittVector::from_integer(&r, 3, &BigInt::from(p)).unwrap();
        assert_eq!(pv, WittVector::one(&r, 3).verschiebung());
        let scaled = WittVector::one(&r, 3).scale(&BigInt::from(p)).unwrap();
        assert_eq!(scaled, pv);
    }
}

#[test]
fn minus_one_over_f2() {
    let r = spec("F_2", 2);
    let m = WittVector::from_integer(&r, 4, &BigInt::from(-1)).unwrap();
    assert_eq!(m, vec_of(&r, &["1", "1", "1", "1"]));
    assert_eq!(WittVector::one(&r, 4).neg().unwrap(), m);
}

#[test]
fn frobenius_of_teichmuller() {
    let r = spec("Z[t]", 3);
    let t = RingElem::var(&r, 0);
    let f = WittVector::teichmuller(&t, 3).frobenius().unwrap();
    assert_eq!(f, WittVector::teichmuller(&t.pow(3), 2));
}

#[test]
fn char_p_frobenius_matches_universal_polynomials() {
    let r = spec("F_2[x,y]/(x,y)^3", 2);
    let ops = WittOps::shared(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let x = WittVector::random(&r, 4, &mut rng);
        assert_eq!(ops.frobenius(&x).unwrap(), ops.frobenius_universal(&x).unwrap());
    }
}

#[test]
fn ghost_round_trip_and_multiplicativity_over_z() {
    let r = spec("Z[t]", 2);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let x = WittVector::random(&r, 3, &mut rng);
        let y = WittVector::random(&r, 3, &mut rng);
        assert_eq!(WittVector::from_ghost(&x.ghost(), &r).unwrap().vector, x);
        let gxy = x.mul(&y).unwrap().ghost();
        for ((g, a), b) in gxy.iter().zip(x.ghost()).zip(y.ghost()) {
            assert_eq!(*g, &a * &b);
        }
    }
}

#[test]
fn ghost_of_length_two() {
    let r = spec("Z[a0,a1]", 5);
    let x = vec_of(&r, &["a0", "a1"]);
    assert_eq!(x.ghost()[1], parse_polynomial("a0^5+5*a1", &r).unwrap());
}

#[test]
fn from_ghost_reports_losses() {
    let r = spec("Z/27", 3);
    let x = vec_of(&r, &["2", "5", "1"]);
    let inv = WittVector::from_ghost(&x.ghost(), &r).unwrap();
    assert_eq!(inv.lost_digits, vec![0, 1, 2]);
    for (m, (a, b)) in inv.vector.components().iter().zip(x.components()).enumerate() {
        assert!(a.eq_mod_p_power(b, 3 - m as u32));
    }
    let f3 = spec("F_3", 3);
    let g = vec![RingElem::one(&f3), RingElem::one(&f3)];
    assert!(matches!(WittVector::from_ghost(&g, &f3), Err(Error::PrecisionExhausted(_))));
    let z = spec("Z", 3);
    let bad = vec![RingElem::from_int(&z, 1), RingElem::from_int(&z, 2)];
    assert!(matches!(WittVector::from_ghost(&bad, &z), Err(Error::NonIntegralGhost(_))));
}

#[test]
fn ga_sharp_in_w2_f2() {
    let r = spec("F_2", 2);
    let elems = r.elements(2).unwrap();
    let mut kernel = Vec::new();
    for a in &elems {
        for b in &elems {
            let x = WittVector::new(&r, vec![a.clone(), b.clone()]).unwrap();
            if x.is_ga_sharp().unwrap() {
                kernel.push(x.to_string());
            }
        }
    }
    assert_eq!(kernel, vec!["(0, 0)", "(0, 1)"]);
    assert!(WittVector::one(&r, 2).is_gm_sharp().unwrap());
    let ft = spec("F_2[t]", 2);
    let t = WittVector::teichmuller(&RingElem::var(&ft, 0), 3);
    assert!(!t.is_ga_sharp().unwrap());
}

#[test]
fn units_invert() {
    let r = spec("Z/9[t]/(t^2)", 3);
    let u = vec_of(&r, &["1+t", "3*t", "2"]);
    let v = u.invert().unwrap();
    assert_eq!(u.mul(&v).unwrap(), WittVector::one(&r, 3));
    let nu = vec_of(&r, &["3", "1", "0"]);
    assert!(matches!(nu.invert(), Err(Error::NotAUnit(_))));
}

#[test]
fn json_round_trip() {
    let r = spec("Z/4[x,y]/(x,y)^2", 2);
    let x = vec_of(&r, &["1+x", "3*y", "0"]);
    let j = serde_json::to_string(&x.to_json()).unwrap();
    let back: WittJson = serde_json::from_str(&j).unwrap();
    assert_eq!(back.into_vector(Precision::default()).unwrap(), x);
}
