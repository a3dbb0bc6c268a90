use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::Rng;
use serde_json::{json, Value};

use super::{CheckReport, Harness, EXHAUSTIVE_LIMIT};
use crate::base_rings::{parse_polynomial, parse_spec, Monomial, Precision, RingElem, RingSpec};
use crate::delta::{delta_on_witt, product_rule, sum_correction, DeltaLift, DeltaRing};
use crate::error::{Error, Result};
use crate::hodge_tate::{
    exp_g, integrality_profile, log_argument_product, log_g, prismatic_log, star_product, terms_needed,
    FrobeniusEquation, GroupLawSeries,
};
use crate::prism::{envelope_points as points, CatalogEntry, Eisenstein, EnvelopePresentation, PrismSpec};
use crate::witt::{WittOp, WittOps, WittVector};

fn prec(p: u64, n: u32) -> Precision {
    Precision::new(p, n, 3, 2, 8).expect("valid precision")
}

fn spec(s: &str, p: u64, n: u32) -> Result<Arc<RingSpec>> {
    parse_spec(s, prec(p, n))
}

fn wj(v: &WittVector) -> Value {
    serde_json::to_value(v.to_json()).expect("serializes")
}

fn ej(a: &RingElem) -> Value {
    serde_json::to_value(a.to_json()).expect("serializes")
}

/// All pairs when the space is small, otherwise `samples` seeded draws.
fn pairs<T: Clone>(pool: &[T], samples: usize, rng: &mut impl Rng) -> (Vec<(T, T)>, &'static str) {
    let total = (pool.len() as u128).pow(2);
    if total <= EXHAUSTIVE_LIMIT {
        let mut out = Vec::with_capacity(total as usize);
        for x in pool {
            for y in pool {
                out.push((x.clone(), y.clone()));
            }
        }
        (out, "exhaustive")
    } else {
        let out = (0..samples)
            .map(|_| (pool[rng.gen_range(0..pool.len())].clone(), pool[rng.gen_range(0..pool.len())].clone()))
            .collect();
        (out, "sampled")
    }
}

/// Vectors of length `n` whose components all lie in `comps`.
fn vectors_over(spec: &Arc<RingSpec>, comps: &[RingElem], n: usize) -> Vec<WittVector> {
    let total = comps.len().pow(n as u32);
    (0..total)
        .map(|mut code| {
            let v = (0..n)
                .map(|_| {
                    let c = comps[code % comps.len()].clone();
                    code /= comps.len();
                    c
                })
                .collect();
            WittVector::new(spec, v).expect("same carrier")
        })
        .collect()
}

/// Elements of the ideal generated by `gens` in a finite ring.
fn ideal_elements(spec: &Arc<RingSpec>, gens: &[RingElem], budget: u128) -> Result<Vec<RingElem>> {
    let ring = spec.elements(budget)?;
    let mut set: BTreeSet<String> = BTreeSet::new();
    let mut out = vec![RingElem::zero(spec)];
    set.insert(out[0].to_string());
    let multiples: Vec<RingElem> = gens.iter().flat_map(|g| ring.iter().map(move |r| r * g)).collect();
    let mut frontier = out.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for m in &multiples {
                let s = a + m;
                if set.insert(s.to_string()) {
                    next.push(s.clone());
                    out.push(s);
                }
            }
        }
        frontier = next;
    }
    out.sort();
    Ok(out)
}

/// `x y = 0` in `W_n(R)` whenever every component of `x` and `y` lies in
/// the square-zero ideal `J = (gens)`. Replays `V^i[a] V^j[b] = 0` for
/// generators first, then all (or sampled) pairs of vectors over `J`.
pub fn check_witt_square_zero(
    ops: &WittOps,
    ring: &Arc<RingSpec>,
    gens: &[RingElem],
    n: usize,
    budget: u128,
    rng: &mut impl Rng,
) -> Result<CheckReport> {
    let name = "witt_square_zero";
    let instance =
        format!("W_{n}({}), J = ({})", ring.id(), gens.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", "));
    for g in gens {
        for h in gens {
            if !(g * h).is_zero() {
                return Err(Error::NotSquareZeroInput(format!("{g} * {h} = {}", g * h)));
            }
        }
    }
    let zero = WittVector::zero(ring, n);
    let mut replayed = 0;
    for a in gens {
        for b in gens {
            for i in 0..n {
                for j in 0..n {
                    let x = WittVector::teichmuller(a, n - i).verschiebung_lift(i);
                    let y = WittVector::teichmuller(b, n - j).verschiebung_lift(j);
                    let prod = ops.mul(&x, &y)?;
                    replayed += 1;
                    if prod != zero {
                        return Ok(CheckReport::new(
                            name,
                            instance,
                            false,
                            json!({
                                "step": format!("V^{i}[a] V^{j}[b]"), "a": ej(a), "b": ej(b), "product": wj(&prod),
                            }),
                        ));
                    }
                }
            }
        }
    }
    let ideal = ideal_elements(ring, gens, budget)?;
    let vectors = vectors_over(ring, &ideal, n);
    let (todo, mode) = pairs(&vectors, 4096, rng);
    for (x, y) in &todo {
        let prod = ops.mul(x, y)?;
        if prod != zero {
            return Ok(CheckReport::new(
                name,
                instance,
                false,
                json!({
                    "x": wj(x), "y": wj(y), "product": wj(&prod),
                }),
            ));
        }
    }
    Ok(CheckReport::new(
        name,
        instance,
        true,
        json!({
            "ideal_size": ideal.len(), "teichmuller_products": replayed, "pairs": todo.len(), "mode": mode,
        }),
    ))
}

/// `V^n(a) V^n(b)` has its first `n + 1` components zero in `W_{n+2}(R)`
/// for an `F_p`-algebra `R`.
pub fn check_kernel_nilpotent(
    ops: &WittOps,
    ring: &Arc<RingSpec>,
    n: usize,
    budget: u128,
    rng: &mut impl Rng,
) -> Result<CheckReport> {
    let name = "kernel_nilpotent";
    if !ring.is_char_p() {
        return Err(Error::NotCharP(ring.id().into()));
    }
    let instance = format!("V^{n} in W_{}({})", n + 2, ring.id());
    let short = WittVector::enumerate(ring, 2, budget)?;
    let (todo, mode) = pairs(&short, 1024, rng);
    for (a, b) in &todo {
        let prod = ops.mul(&a.verschiebung_lift(n), &b.verschiebung_lift(n))?;
        if prod.components()[..=n].iter().any(|c| !c.is_zero()) {
            return Ok(CheckReport::new(
                name,
                instance,
                false,
                json!({
                    "a": wj(a), "b": wj(b), "product": wj(&prod),
                }),
            ));
        }
    }
    Ok(CheckReport::new(name, instance, true, json!({ "pairs": todo.len(), "mode": mode })))
}

/// `p^2 = V(u^-1) V(u)` in `W_n(R)`, replaying `F(V(u^-1)) = p u^-1`.
pub fn check_p_squared_hodge_tate(ops: &WittOps, u: &WittVector, label: &str) -> Result<CheckReport> {
    let name = "p_squared_hodge_tate";
    let ring = u.spec();
    if !ring.is_char_p() {
        return Err(Error::NotCharP(ring.id().into()));
    }
    if !u.is_unit()? {
        return Err(Error::NotAUnit(u.to_string()));
    }
    let n = u.len();
    let instance = format!("W_{n}({}), u = {label}", ring.id());
    let p = BigInt::from(ring.p());
    let uinv = ops.invert(u)?;
    let x = uinv.verschiebung();
    let fx = ops.frobenius_universal(&x)?;
    let p_uinv = ops.mul(&WittVector::from_integer(ring, n, &p)?, &uinv)?.truncate(n - 1)?;
    if fx != p_uinv {
        return Ok(CheckReport::new(
            name,
            instance,
            false,
            json!({
                "step": "F(V(u^-1)) = p u^-1", "u": wj(u), "lhs": wj(&fx), "rhs": wj(&p_uinv),
            }),
        ));
    }
    let prod = ops.mul(&x, &u.verschiebung())?;
    let p2 = WittVector::from_integer(ring, n, &(&p * &p))?;
    Ok(CheckReport::new(
        name,
        instance,
        prod == p2,
        json!({
            "u": wj(u), "u_inverse": wj(&uinv), "product": wj(&prod), "p_squared": wj(&p2),
        }),
    ))
}

/// Random polynomial in the depth-0 generators of `ring`.
fn random_base_poly(ring: &DeltaRing, rng: &mut impl Rng) -> RingElem {
    let carrier = ring.carrier();
    let step = ring.depth().map(|d| d + 1).unwrap_or(1);
    let mut acc = RingElem::from_int(carrier, rng.gen_range(-3..=3));
    for i in (0..carrier.nvars()).step_by(step) {
        let x = RingElem::var(carrier, i);
        acc = &acc + &x.scale(&BigInt::from(rng.gen_range(-3..=3)));
        acc = &acc + &x.pow(2).scale(&BigInt::from(rng.gen_range(-2..=2)));
    }
    acc
}

/// The lift `A -> W_n(S)` of an assignment restricts to the assignment and
/// commutes with `δ`.
pub fn check_adjunction_roundtrip(
    ring: &DeltaRing,
    target: &Arc<RingSpec>,
    n: usize,
    samples: usize,
    rng: &mut impl Rng,
) -> Result<CheckReport> {
    let name = "adjunction_roundtrip";
    let depth = ring.depth().unwrap_or(usize::MAX);
    if depth + 1 < n {
        return Err(Error::DepthExceeded(format!("depth {depth} < n - 1 = {}", n - 1)));
    }
    let instance = format!("{} -> W_{n}({})", ring.carrier().id(), target.id());
    let k = ring.carrier().nvars();
    for s in 0..samples {
        let assignment: Vec<RingElem> = if s == 0 {
            vec![RingElem::zero(target); k]
        } else {
            (0..k).map(|_| RingElem::random(target, rng)).collect()
        };
        let lift = DeltaLift::new(ring, target, assignment.clone(), n)?;
        let fail = |what: &str, data: Value| {
            let assigned: Vec<Value> = assignment.iter().map(ej).collect();
            Ok(CheckReport::new(
                name,
                instance.clone(),
                false,
                json!({ "step": what, "assignment": assigned, "data": data }),
            ))
        };
        for (i, img) in lift.generator_images().iter().enumerate() {
            if let Some(v) = img {
                if v.components()[0] != assignment[i] {
                    return fail("restriction", json!({ "generator": i, "image": wj(v) }));
                }
            }
        }
        if s == 0 {
            for img in lift.generator_images().iter().flatten() {
                if !img.is_zero() {
                    return fail("zero assignment", wj(img));
                }
            }
        }
        let a = random_base_poly(ring, rng);
        let la = lift.apply(&a)?;
        if la != lift.apply_via_ghost(&a)? {
            return fail("ghost image", ej(&a));
        }
        if la.components()[0] != lift.base_map().apply(&a.coerce(ring.lift())?)? {
            return fail("restriction", ej(&a));
        }
        if n >= 2 {
            let da = ring.delta_exact(&a)?;
            let lhs = lift.apply_truncated(&da, n - 1)?;
            let rhs = delta_on_witt(&la)?;
            if lhs != rhs {
                return fail("delta equivariance", json!({ "a": ej(&a), "lhs": wj(&lhs), "rhs": wj(&rhs) }));
            }
        }
    }
    Ok(CheckReport::new(name, instance, true, json!({ "samples": samples })))
}

pub(super) fn adjunction_roundtrip(h: &Harness, name: &str) -> Result<Vec<CheckReport>> {
    let mut rng = h.rng(name);
    let z2 = RingSpec::integers(prec(2, 4))?;
    let z3 = RingSpec::integers(prec(3, 4))?;
    let f2 = spec("F_2", 2, 1)?;
    let mut out = vec![
        check_adjunction_roundtrip(&DeltaRing::free(1, 3, &z2)?, &f2, 3, 16, &mut rng)?,
        check_adjunction_roundtrip(&DeltaRing::free(1, 2, &z3)?, &spec("Z/27", 3, 3)?, 3, 100, &mut rng)?,
        check_adjunction_roundtrip(&DeltaRing::free(2, 2, &z3)?, &spec("F_3[t]/(t^2)", 3, 1)?, 2, 20, &mut rng)?,
    ];
    for r in &mut out {
        if let Some(obj) = r.witness.as_object_mut() {
            obj.insert("seed".into(), json!(h.config().seed));
        }
    }
    Ok(out)
}

pub(super) fn witt_square_zero(h: &Harness, _name: &str) -> Result<Vec<CheckReport>> {
    let mut rng = h.rng("witt_square_zero");
    let budget = h.config().budget;
    let r = spec("F_2[x,y]/(x,y)^2", 2, 1)?;
    let gens = vec![parse_polynomial("x", &r)?, parse_polynomial("y", &r)?];
    let z4 = spec("Z/4", 2, 2)?;
    let z9 = spec("Z/9", 3, 2)?;
    Ok(vec![
        check_witt_square_zero(&h.ops(2)?, &r, &gens, 3, budget, &mut rng)?,
        check_witt_square_zero(&h.ops(2)?, &r, &[], 3, budget, &mut rng)?,
        check_witt_square_zero(&h.ops(2)?, &z4, &[RingElem::from_int(&z4, 2)], 3, budget, &mut rng)?,
        check_witt_square_zero(&h.ops(3)?, &z9, &[RingElem::from_int(&z9, 3)], 2, budget, &mut rng)?,
    ])
}

pub(super) fn kernel_nilpotent(h: &Harness, name: &str) -> Result<Vec<CheckReport>> {
    let mut rng = h.rng(name);
    let budget = h.config().budget;
    Ok(vec![
        check_kernel_nilpotent(&h.ops(2)?, &spec("F_2[t]/(t^3)", 2, 1)?, 1, budget, &mut rng)?,
        check_kernel_nilpotent(&h.ops(2)?, &spec("F_2[t]/(t^2)", 2, 1)?, 2, budget, &mut rng)?,
        check_kernel_nilpotent(&h.ops(3)?, &spec("F_3", 3, 1)?, 2, budget, &mut rng)?,
    ])
}

pub(super) fn p_squared_hodge_tate(h: &Harness, _name: &str) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for p in [2, 3, 5] {
        let f = spec(&format!("F_{p}"), p, 1)?;
        out.push(check_p_squared_hodge_tate(&h.ops(p)?, &WittVector::one(&f, 3), "1")?);
    }
    let f5 = spec("F_5", 5, 1)?;
    out.push(check_p_squared_hodge_tate(&h.ops(5)?, &WittVector::teichmuller(&RingElem::from_int(&f5, 2), 3), "[2]")?);
    let r = spec("F_2[t]/(t^2)", 2, 1)?;
    let ops = h.ops(2)?;
    let t = WittVector::teichmuller(&RingElem::var(&r, 0), 3);
    let u = ops.add(&t, &WittVector::one(&r, 3))?;
    out.push(check_p_squared_hodge_tate(&ops, &u, "[t] + 1")?);
    let r3 = spec("F_3[t]/(t^2)", 3, 1)?;
    let ops3 = h.ops(3)?;
    let comps = vec![RingElem::from_int(&r3, 2), RingElem::var(&r3, 0), RingElem::one(&r3)];
    out.push(check_p_squared_hodge_tate(&ops3, &WittVector::new(&r3, comps)?, "(2, t, 1)")?);
    Ok(out)
}

pub(super) fn witt_ghost_identities(h: &Harness, _name: &str) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for (p, max) in [(2u64, 3usize), (3, 2), (5, 1)] {
        let ops = h.ops(p)?;
        let mut failed = None;
        'outer: for op in WittOp::ALL {
            for i in 0..=max {
                if !ops.table().ghost_identity_holds(op, i)? {
                    failed = Some(json!({
                        "op": op.name(), "index": i, "polynomial": ej(&ops.table().get(op, i)?),
                    }));
                    break 'outer;
                }
            }
        }
        let instance = format!("p = {p}, indices <= {max}");
        out.push(match failed {
            Some(w) => CheckReport::new("witt_ghost_identities", instance, false, w),
            None => CheckReport::new("witt_ghost_identities", instance, true, json!({ "ops": 4, "indices": max + 1 })),
        });
    }
    Ok(out)
}

pub(super) fn witt_operator_identities(h: &Harness, name: &str) -> Result<Vec<CheckReport>> {
    let mut rng = h.rng(name);
    let mut out = Vec::new();
    for (p, id, digits) in [(2, "Z/8[t]/(t^2)", 3), (2, "F_2[t]/(t^3)", 1), (3, "Z/27", 3), (3, "F_3[t]/(t^2)", 1)] {
        let r = spec(id, p, digits)?;
        let ops = h.ops(p)?;
        let n = 3;
        let pv = WittVector::from_integer(&r, n, &BigInt::from(p))?;
        let p_short = pv.truncate(n - 1)?;
        let p_multiples: BTreeSet<WittVector> = WittVector::enumerate(&r, n - 1, h.config().budget)?
            .iter()
            .map(|y| ops.mul(&p_short, y))
            .collect::<Result<_>>()?;
        let mut failure = None;
        for _ in 0..25 {
            let x = WittVector::random(&r, n, &mut rng);
            let y = WittVector::random(&r, n, &mut rng);
            let fx = ops.frobenius_universal(&x)?;
            let fy = ops.frobenius_universal(&y)?;
            let y1 = y.truncate(n - 1)?;
            let checks: [(&str, WittVector, WittVector); 5] = [
                ("FV = p", ops.frobenius_universal(&x.verschiebung())?, ops.mul(&pv, &x)?.truncate(n - 1)?),
                ("x V(y) = V(F(x) y)", ops.mul(&x, &y.verschiebung())?, ops.mul(&fx, &y1)?.verschiebung_lift(1)),
                ("F additive", ops.frobenius_universal(&ops.add(&x, &y)?)?, ops.add(&fx, &fy)?),
                ("F multiplicative", ops.frobenius_universal(&ops.mul(&x, &y)?)?, ops.mul(&fx, &fy)?),
                ("F(x) = x^p mod p", ops.sub(&fx, &ops.pow(&x, p)?.truncate(n - 1)?)?, WittVector::zero(&r, n - 1)),
            ];
            for (what, lhs, rhs) in checks {
                let ok = if what.ends_with("mod p") { p_multiples.contains(&lhs) } else { lhs == rhs };
                if !ok {
                    failure =
                        Some(json!({ "identity": what, "x": wj(&x), "y": wj(&y), "lhs": wj(&lhs), "rhs": wj(&rhs) }));
                    break;
                }
            }
            if failure.is_some() {
                break;
            }
        }
        let instance = format!("W_{n}({id})");
        out.push(match failure {
            Some(w) => CheckReport::new(name, instance, false, w),
            None => CheckReport::new(name, instance, true, json!({ "samples": 25, "seed": h.config().seed })),
        });
    }
    Ok(out)
}

pub(super) fn frobenius_shortcut(h: &Harness, name: &str) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for (p, id, n) in [(2, "F_2[t]/(t^2)", 3), (3, "F_3", 3), (5, "F_5[t]/(t^2)", 2)] {
        let r = spec(id, p, 1)?;
        let ops = h.ops(p)?;
        let all = WittVector::enumerate(&r, n, h.config().budget)?;
        let mut failure = None;
        for x in &all {
            let fast = ops.frobenius(x)?;
            let slow = ops.frobenius_universal(x)?;
            if fast != slow {
                failure = Some(json!({ "x": wj(x), "componentwise": wj(&fast), "universal": wj(&slow) }));
                break;
            }
        }
        let instance = format!("W_{n}({id})");
        out.push(match failure {
            Some(w) => CheckReport::new(name, instance, false, w),
            None => CheckReport::new(name, instance, true, json!({ "vectors": all.len() })),
        });
    }
    Ok(out)
}

pub(super) fn delta_identities(h: &Harness, name: &str) -> Result<Vec<CheckReport>> {
    let mut rng = h.rng(name);
    let mut out = Vec::new();
    for p in [2u64, 3] {
        let z = RingSpec::integers(prec(p, 4))?;
        let ring = DeltaRing::free(2, 2, &z)?;
        let c = ring.carrier();
        // polynomials in x1, dx1, x2, dx2
        let low: Vec<usize> = (0..c.nvars()).filter(|i| i % 3 < 2).collect();
        let random = |rng: &mut rand_chacha::ChaCha8Rng| {
            let mut acc = RingElem::from_int(c, rng.gen_range(-4..=4));
            for _ in 0..3 {
                let mut m = vec![0u32; c.nvars()];
                for _ in 0..rng.gen_range(1..=2) {
                    m[low[rng.gen_range(0..low.len())]] += 1;
                }
                acc = &acc + &RingElem::from_terms(c, [(Monomial(m), BigInt::from(rng.gen_range(-4..=4)))]);
            }
            acc
        };
        let mut failure = None;
        for _ in 0..20 {
            let a = random(&mut rng);
            let b = random(&mut rng);
            let (da, db) = (ring.delta(&a)?.value, ring.delta(&b)?.value);
            let sum_ok = ring.delta(&(&a + &b))?.value == &(&da + &db) - &sum_correction(&a, &b, p);
            let prod_ok = ring.delta(&(&a * &b))?.value == product_rule(&a, &da, &b, &db, p);
            let (pa, pb) = (ring.phi(&a)?, ring.phi(&b)?);
            let phi_ok = ring.phi(&(&a * &b))? == &pa * &pb && ring.phi(&(&a + &b))? == &pa + &pb;
            let frob_ok = pa == &a.pow(p) + &da.scale(&BigInt::from(p));
            if !(sum_ok && prod_ok && phi_ok && frob_ok) {
                failure = Some(json!({
                    "a": ej(&a), "b": ej(&b),
                    "sum_rule": sum_ok, "product_rule": prod_ok, "phi_homomorphism": phi_ok, "frobenius_lift": frob_ok,
                }));
                break;
            }
        }
        let instance = format!("Z{{x1, x2}} depth 2, p = {p}");
        out.push(match failure {
            Some(w) => CheckReport::new(name, instance, false, w),
            None => CheckReport::new(name, instance, true, json!({ "pairs": 20, "seed": h.config().seed })),
        });
    }
    Ok(out)
}

fn catalog(p: u64) -> Result<Vec<CatalogEntry>> {
    Ok(vec![
        CatalogEntry::Crystalline,
        CatalogEntry::QDeRham,
        CatalogEntry::Perfectoid(1),
        CatalogEntry::BreuilKisin(Eisenstein::parse(&format!("u-{p}"))?),
        CatalogEntry::BreuilKisin(Eisenstein::parse(&format!("u^2-{p}"))?),
        CatalogEntry::BreuilKisin(Eisenstein::parse(&format!("u^2+{p}*u+{p}"))?),
    ])
}

pub(super) fn distinguished_catalog(_h: &Harness, name: &str) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for p in [2u64, 3] {
        for entry in catalog(p)? {
            let precision = Precision::new(p, 3, 3, 2, 9)?;
            let prism = PrismSpec::new(&entry, precision)?;
            let v = prism.check()?;
            let d = prism.orientation();
            let witness_ok = match &v.witness {
                Some((a, b)) => {
                    &(a * d) + &(b * &prism.ring().phi(d)?) == RingElem::from_int(prism.carrier(), p as i64)
                }
                None => false,
            };
            let pass = v.by_ideal() && v.by_delta() && witness_ok;
            let instance = format!("{} d = {d} in {}", entry.name(), prism.carrier().id());
            let witness = match &v.witness {
                Some((a, b)) => json!({ "a": ej(a), "b": ej(b), "delta_unit": v.delta_unit }),
                None => json!({ "d": ej(d), "delta_unit": v.delta_unit, "in_radical": v.in_radical }),
            };
            out.push(CheckReport::new(name, instance, pass, witness));
        }
    }
    Ok(out)
}

pub(super) fn frobenius_torsor(h: &Harness, name: &str) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for id in ["F_2", "F_2[t]/(t^2)"] {
        let r = spec(id, 2, 1)?;
        for n in [2, 3] {
            for m in 0..=2 {
                let sol = FrobeniusEquation::new(&r, n, m)?.solve(h.config().budget)?;
                let instance = format!("F(x) = 2^{m} in W_{n}({id})");
                let witness = json!({
                    "particular": wj(&sol.particular),
                    "solutions": sol.solutions.len(),
                    "kernel": sol.kernel.len(),
                });
                out.push(CheckReport::new(name, instance, sol.torsor, witness));
            }
        }
    }
    Ok(out)
}

pub(super) fn group_law(_h: &Harness, name: &str) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    let r = parse_spec("Z[a,b,d,c]", prec(2, 4))?;
    let v = |s: &str| parse_polynomial(s, &r);
    let (a, b, d, c) = (v("a")?, v("b")?, v("d")?, v("c")?);
    let left = star_product(&star_product(&a, &b, &c)?, &d, &c)?;
    let right = star_product(&a, &star_product(&b, &d, &c)?, &c)?;
    let unit = star_product(&a, &RingElem::zero(&r), &c)? == a;
    out.push(CheckReport::new(
        name,
        "star associativity in Z[a,b,d,c]",
        left == right && unit,
        json!({ "expansion": ej(&left) }),
    ));

    let m = 10;
    let x = GroupLawSeries::x(false, m);
    let le = log_g(m).compose(&exp_g(m))?;
    out.push(CheckReport::new(name, "log_G(exp_G(x)) = x to order 10", le == x, json!({ "series": le.to_string() })));
    let el = exp_g(m).compose(&log_g(m))?;
    out.push(CheckReport::new(name, "exp_G(log_G(x)) = x to order 10", el == x, json!({ "series": el.to_string() })));
    let xb = GroupLawSeries::x(true, m);
    let y = GroupLawSeries::y(m);
    let lhs = exp_g(m).compose(&xb.add(&y)?)?;
    let rhs = exp_g(m).compose(&xb)?.star(&exp_g(m).compose(&y)?)?;
    out.push(CheckReport::new(
        name,
        "exp_G(x + y) = exp_G(x) * exp_G(y) to order 10",
        lhs == rhs,
        json!({ "terms": lhs.to_json().terms.len() }),
    ));
    let e = Eisenstein::parse("u^2-5")?;
    let prof = integrality_profile(&e, 5, m)?;
    out.push(CheckReport::new(name, "integrality of u^2-5 at p = 5 to order 10", prof.all_integral(), prof.to_json()));
    Ok(out)
}

pub(super) fn prismatic_log_additivity(h: &Harness, name: &str) -> Result<Vec<CheckReport>> {
    let mut rng = h.rng(name);
    let r = spec("Z/729", 3, 6)?;
    let k = terms_needed(3, 6);
    let mut failure = None;
    for _ in 0..50 {
        let z1 = RingElem::random(&r, &mut rng);
        let z2 = RingElem::random(&r, &mut rng);
        let l1 = prismatic_log(&z1, k)?;
        let l2 = prismatic_log(&z2, k)?;
        let l12 = prismatic_log(&log_argument_product(&z1, &z2)?, k)?;
        let digits = l1.digits.min(l2.digits).min(l12.digits);
        if !l12.value.eq_mod_p_power(&(&l1.value + &l2.value), digits) {
            failure = Some(
                json!({ "z1": ej(&z1), "z2": ej(&z2), "product": ej(&l12.value), "sum": ej(&(&l1.value + &l2.value)) }),
            );
            break;
        }
    }
    let instance = "p = 3, N = 6".to_string();
    Ok(vec![match failure {
        Some(w) => CheckReport::new(name, instance, false, w),
        None => CheckReport::new(name, instance, true, json!({ "pairs": 50, "terms": k, "seed": h.config().seed })),
    }])
}

pub(super) fn envelope_points(h: &Harness, name: &str) -> Result<Vec<CheckReport>> {
    let budget = h.config().budget;
    let f2 = spec("F_2", 2, 1)?;
    let f3 = spec("F_3", 3, 1)?;
    let dual = spec("F_2[e]/(e^2)", 2, 1)?;
    let el = |s: &str, r: &Arc<RingSpec>| parse_polynomial(s, r);
    let crys2 = PrismSpec::new(&CatalogEntry::Crystalline, Precision::new(2, 2, 2, 2, 4)?)?;
    let bk = PrismSpec::new(&CatalogEntry::BreuilKisin(Eisenstein::parse("u-2")?), Precision::new(2, 2, 2, 2, 4)?)?;
    let crys3 = PrismSpec::new(&CatalogEntry::Crystalline, Precision::new(3, 2, 2, 2, 4)?)?;

    let mut instances: Vec<(String, EnvelopePresentation, DeltaLift)> = Vec::new();
    {
        let d = crys2.orientation().clone();
        let env = EnvelopePresentation::new(&crys2, std::slice::from_ref(&d), 1)?;
        instances.push(("Z/4 {2/2} -> W_2(F_2)".into(), env, DeltaLift::new(crys2.ring(), &f2, vec![], 2)?));
        let env = EnvelopePresentation::new(&crys2, &[d.clone(), d], 1)?;
        instances.push(("Z/4 {2/2, 2/2} -> W_2(F_2)".into(), env, DeltaLift::new(crys2.ring(), &f2, vec![], 2)?));
    }
    {
        let pr = crys2.with_free_vars(&["t"], 2)?;
        let t = el("t", pr.carrier())?;
        for img in ["0", "1", "e", "1+e"] {
            let env = EnvelopePresentation::new(&pr, std::slice::from_ref(&t), 2)?;
            let assignment = vec![el(img, &dual)?, el("e", &dual)?, RingElem::zero(&dual)];
            let base = DeltaLift::new(pr.ring(), &dual, assignment, 2)?;
            instances.push((format!("Z/4{{t}} {{t/2}}, t -> {img} in W_2(F_2[e]/(e^2))"), env, base));
        }
    }
    for img in ["0", "e"] {
        let x = el("u^2", bk.carrier())?;
        let env = EnvelopePresentation::new(&bk, &[x], 1)?;
        let base = DeltaLift::new(bk.ring(), &dual, vec![el(img, &dual)?], 2)?;
        instances.push((format!("Z/4[[u]] {{u^2/(u-2)}}, u -> {img} in W_2(F_2[e]/(e^2))"), env, base));
    }
    {
        let pr = bk.with_free_vars(&["t"], 1)?;
        let t = el("t", pr.carrier())?;
        for (label, timg) in [("x = 0", 0), ("x != 0", 1)] {
            let env = EnvelopePresentation::new(&pr, std::slice::from_ref(&t), 1)?;
            let assignment = vec![RingElem::zero(&f2), RingElem::from_int(&f2, timg), RingElem::zero(&f2)];
            let base = DeltaLift::new(pr.ring(), &f2, assignment, 1)?;
            instances.push((format!("degenerate d = 0 in W_1(F_2), {label}"), env, base));
        }
    }
    {
        let pr = crys3.with_free_vars(&["t"], 1)?;
        let t = el("t", pr.carrier())?;
        for (a, b) in [(0, 0), (0, 1), (1, 2)] {
            let env = EnvelopePresentation::new(&pr, std::slice::from_ref(&t), 1)?;
            let base = DeltaLift::new(pr.ring(), &f3, vec![RingElem::from_int(&f3, a), RingElem::from_int(&f3, b)], 2)?;
            instances.push((format!("Z/9{{t}} {{t/3}}, (t, dt) -> ({a}, {b}) in W_2(F_3)"), env, base));
        }
    }
    instances
        .into_iter()
        .map(|(label, env, base)| {
            let pts = points(&env, &base, budget)?;
            let witness = json!({
                "candidates": pts.candidates.to_string(),
                "set_a": pts.set_a.len(),
                "set_b": pts.set_b.len(),
                "points": pts.set_a.iter().map(|t| t.iter().map(wj).collect::<Vec<_>>()).collect::<Vec<_>>(),
            });
            Ok(CheckReport::new(name, label, pts.equal(), witness))
        })
        .collect()
}
