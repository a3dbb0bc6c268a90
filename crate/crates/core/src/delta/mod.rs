//! Delta-rings as presented carriers together with a rule giving `δ` on
//! each generator.
//!
//! All computations happen in the integral lift of the carrier, which is
//! p-torsion-free, and are reduced afterwards. On `Z/p^N`-based carriers a
//! value of `δ` is then only determined modulo `p^(N-1)`, which is reported
//! through [`Divided::lost_digits`]; `φ` loses nothing.

mod lift;

pub use lift::{delta_on_witt, DeltaLift};

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use serde::{Deserialize, Serialize};

use crate::base_rings::{parse_spec, Divided, ElemJson, Monomial, Precision, Relations, RingElem, RingHom, RingSpec};
use crate::error::{Error, Result};

/// A carrier with `δ` prescribed on its generators. A missing entry marks
/// a generator at the top of a truncated free presentation.
#[derive(Debug, Clone)]
pub struct DeltaRing {
    carrier: Arc<RingSpec>,
    lift: Arc<RingSpec>,
    rule: Vec<Option<RingElem>>,
    depth: Option<usize>,
}

/// Serialized presentation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaJson {
    pub carrier: String,
    pub vars: Vec<String>,
    pub depth: Option<usize>,
    pub rule_table: Vec<(String, Option<ElemJson>)>,
}

impl DeltaJson {
    /// Rebuild the presentation. Rule entries may be written in the carrier
    /// or in its integral lift.
    pub fn into_ring(&self, ctx: Precision) -> Result<DeltaRing> {
        let carrier = parse_spec(&self.carrier, ctx)?;
        if carrier.vars() != self.vars.as_slice() || self.rule_table.len() != self.vars.len() {
            return Err(Error::Parse(format!("rule table does not match the generators of {}", carrier.id())));
        }
        let rule = self
            .rule_table
            .iter()
            .zip(&self.vars)
            .map(|((v, e), want)| {
                if v != want {
                    return Err(Error::Parse(format!("rule for {v} listed where {want} was expected")));
                }
                e.as_ref().map(|e| e.into_elem_parsed(ctx)).transpose()
            })
            .collect::<Result<Vec<_>>>()?;
        DeltaRing::with_rule(&carrier, rule, self.depth)
    }
}

/// Name of the carrier variable holding `δ^j` of generator `base`.
pub fn delta_var_name(base: &str, j: usize) -> String {
    match j {
        0 => base.to_string(),
        1 => format!("d{base}"),
        _ => format!("d{j}{base}"),
    }
}

impl DeltaRing {
    /// A carrier with `δ(x_i) = table[i]`. The rule must make `φ` preserve
    /// the relations of the carrier.
    pub fn new(carrier: &Arc<RingSpec>, table: Vec<RingElem>) -> Result<Self> {
        DeltaRing::with_rule(carrier, table.into_iter().map(Some).collect(), None)
    }

    fn with_rule(carrier: &Arc<RingSpec>, rule: Vec<Option<RingElem>>, depth: Option<usize>) -> Result<Self> {
        if rule.len() != carrier.nvars() {
            return Err(Error::UnsupportedCarrier(format!(
                "{} generators but {} rule entries",
                carrier.nvars(),
                rule.len()
            )));
        }
        if matches!(carrier.relations(), Relations::Monic(_)) {
            return Err(Error::UnsupportedCarrier(format!(
                "{} carries no delta-structure in the catalog",
                carrier.id()
            )));
        }
        let lift = carrier.integral_lift();
        let rule = rule.into_iter().map(|e| e.map(|v| v.coerce(&lift)).transpose()).collect::<Result<Vec<_>>>()?;
        let ring = DeltaRing { carrier: carrier.clone(), lift, rule, depth };
        if ring.rule.iter().all(|r| r.is_some()) {
            ring.phi_hom().map_err(|e| match e {
                Error::RelationViolated(r) => {
                    Error::UnsupportedCarrier(format!("Frobenius lift does not preserve {r}"))
                }
                e => e,
            })?;
        }
        Ok(ring)
    }

    /// The truncated free delta-ring on generators `names` over `base`
    /// (`Z` or `Z/p^N`): a polynomial ring on `δ^j x` for `j <= depth`.
    pub fn free_named(base: &Arc<RingSpec>, names: &[&str], depth: usize) -> Result<Self> {
        if names.is_empty() || depth == 0 {
            return Err(Error::BadPrecision("free delta-rings need k >= 1 and D >= 1".into()));
        }
        let vars: Vec<String> = names.iter().flat_map(|n| (0..=depth).map(move |j| delta_var_name(n, j))).collect();
        let refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        let carrier = RingSpec::poly(&*base.scalar_base()?, &refs, Relations::None)?;
        let rule = (0..vars.len()).map(|i| (i % (depth + 1) < depth).then(|| RingElem::var(&carrier, i + 1))).collect();
        DeltaRing::with_rule(&carrier, rule, Some(depth))
    }

    /// `Z{x_1..x_k}` truncated at depth `D`, generators `x` (for `k = 1`) or
    /// `x1..xk`.
    pub fn free(k: usize, depth: usize, base: &Arc<RingSpec>) -> Result<Self> {
        let names: Vec<String> = if k == 1 { vec!["x".into()] } else { (1..=k).map(|i| format!("x{i}")).collect() };
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        DeltaRing::free_named(base, &refs, depth)
    }

    /// Adjoin free delta-variables `names` up to `depth` to this ring.
    pub fn adjoin_free(&self, names: &[&str], depth: usize) -> Result<Self> {
        let new_vars: Vec<String> = names.iter().flat_map(|n| (0..=depth).map(move |j| delta_var_name(n, j))).collect();
        let carrier = self.carrier.with_extra_vars(&new_vars)?;
        let lift = carrier.integral_lift();
        let old = self.carrier.nvars();
        let mut rule = Vec::with_capacity(carrier.nvars());
        for r in &self.rule {
            rule.push(r.as_ref().map(|v| lift_into(v, &lift)));
        }
        for i in 0..new_vars.len() {
            rule.push((i % (depth + 1) < depth).then(|| RingElem::var(&lift, old + i + 1)));
        }
        DeltaRing::with_rule(&carrier, rule, self.depth.or(Some(depth)))
    }

    pub fn carrier(&self) -> &Arc<RingSpec> {
        &self.carrier
    }

    /// The p-torsion-free lift where `δ` is computed.
    pub fn lift(&self) -> &Arc<RingSpec> {
        &self.lift
    }

    pub fn p(&self) -> u64 {
        self.carrier.p()
    }

    pub fn depth(&self) -> Option<usize> {
        self.depth
    }

    /// `δ` of generator `i`, if known.
    pub fn rule(&self, i: usize) -> Option<RingElem> {
        self.rule[i].as_ref().map(|v| v.coerce(&self.carrier).expect("same variables"))
    }

    /// `δ(a)` in the carrier, with the digits lost to the division by `p`.
    pub fn delta(&self, a: &RingElem) -> Result<Divided> {
        self.delta_iter(a, 1)
    }

    /// `δ^k(a)`.
    pub fn delta_iter(&self, a: &RingElem, k: usize) -> Result<Divided> {
        let mut x = self.to_lift(a)?;
        for _ in 0..k {
            x = self.delta_in_lift(&x)?;
        }
        let lost = if self.carrier.digits().is_some() { k as u32 } else { 0 };
        Ok(Divided { value: x.coerce(&self.carrier)?, lost_digits: lost })
    }

    /// `φ(a) = a^p + p δ(a)`, exact in the carrier.
    pub fn phi(&self, a: &RingElem) -> Result<RingElem> {
        self.phi_iter(a, 1)
    }

    pub fn phi_iter(&self, a: &RingElem, k: usize) -> Result<RingElem> {
        let mut x = self.to_lift(a)?;
        for _ in 0..k {
            x = self.phi_in_lift(&x)?;
        }
        x.coerce(&self.carrier)
    }

    /// `δ(a)` for `a` in the integral lift, exactly.
    pub fn delta_exact(&self, a: &RingElem) -> Result<RingElem> {
        let a = self.to_lift(a)?;
        self.delta_in_lift(&a)
    }

    pub(crate) fn to_lift(&self, a: &RingElem) -> Result<RingElem> {
        if a.spec() != &self.carrier && a.spec() != &self.lift {
            return Err(Error::SpecMismatch(a.spec().id().into(), self.carrier.id().into()));
        }
        a.coerce(&self.lift)
    }

    pub(crate) fn phi_in_lift(&self, a: &RingElem) -> Result<RingElem> {
        let d = self.delta_in_lift(a)?;
        Ok(&a.pow(self.p()) + &d.scale(&self.lift.prime()))
    }

    /// `φ` on the lift as a ring map, defined when every generator has a
    /// rule.
    pub fn phi_hom(&self) -> Result<RingHom> {
        let p = self.lift.prime();
        let images = self
            .rule
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let d = r.as_ref().ok_or_else(|| Error::DepthExceeded(self.lift.vars()[i].clone()))?;
                Ok(&RingElem::var(&self.lift, i).pow(self.p()) + &d.scale(&p))
            })
            .collect::<Result<Vec<_>>>()?;
        RingHom::new(&self.lift, &self.lift, images)
    }

    /// Structural recursion: the sum rule with its binomial correction and
    /// the product rule, down to generators and integer constants.
    pub(crate) fn delta_in_lift(&self, a: &RingElem) -> Result<RingElem> {
        let terms: Vec<(Monomial, BigInt)> = a.terms().iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        let mut memo = HashMap::new();
        Ok(self.delta_of_sum(&terms, &mut memo)?.1)
    }

    fn delta_of_sum(
        &self,
        terms: &[(Monomial, BigInt)],
        memo: &mut HashMap<Monomial, RingElem>,
    ) -> Result<(RingElem, RingElem)> {
        match terms.len() {
            0 => Ok((RingElem::zero(&self.lift), RingElem::zero(&self.lift))),
            1 => {
                let (m, c) = &terms[0];
                let mono = RingElem::from_terms(&self.lift, [(m.clone(), BigInt::from(1))]);
                let dm = self.delta_of_monomial(m, memo)?;
                let dc = delta_of_integer(c, self.p());
                let p = self.lift.prime();
                let cp = c.pow(self.p() as u32);
                let value = mono.scale(c);
                let d = &(&dm.scale(&cp) + &mono.pow(self.p()).scale(&dc)) + &dm.scale(&(&p * &dc));
                Ok((value, d))
            }
            n => {
                let (l, r) = terms.split_at(n / 2);
                let (sl, dl) = self.delta_of_sum(l, memo)?;
                let (sr, dr) = self.delta_of_sum(r, memo)?;
                let corr = sum_correction(&sl, &sr, self.p());
                Ok((&sl + &sr, &(&dl + &dr) - &corr))
            }
        }
    }

    fn delta_of_monomial(&self, m: &Monomial, memo: &mut HashMap<Monomial, RingElem>) -> Result<RingElem> {
        if let Some(d) = memo.get(m) {
            return Ok(d.clone());
        }
        let nonzero: Vec<usize> = (0..m.0.len()).filter(|&i| m.0[i] > 0).collect();
        let d = if nonzero.is_empty() {
            RingElem::zero(&self.lift)
        } else if nonzero.len() == 1 && m.0[nonzero[0]] == 1 {
            let i = nonzero[0];
            self.rule[i].clone().ok_or_else(|| Error::DepthExceeded(self.lift.vars()[i].clone()))?
        } else {
            // split into two factors and apply the product rule
            let (left, right) = split_monomial(m, &nonzero);
            let dl = self.delta_of_monomial(&left, memo)?;
            let dr = self.delta_of_monomial(&right, memo)?;
            let xl = RingElem::from_terms(&self.lift, [(left, BigInt::from(1))]);
            let xr = RingElem::from_terms(&self.lift, [(right, BigInt::from(1))]);
            product_rule(&xl, &dl, &xr, &dr, self.p())
        };
        memo.insert(m.clone(), d.clone());
        Ok(d)
    }

    pub fn to_json(&self) -> DeltaJson {
        DeltaJson {
            carrier: self.carrier.id().to_string(),
            vars: self.carrier.vars().to_vec(),
            depth: self.depth,
            rule_table: self
                .carrier
                .vars()
                .iter()
                .enumerate()
                .map(|(i, v)| (v.clone(), self.rule(i).map(|e| e.to_json())))
                .collect(),
        }
    }
}

/// `δ(c) = (c - c^p) / p` for an integer `c`.
pub fn delta_of_integer(c: &BigInt, p: u64) -> BigInt {
    let (q, r) = (c - c.pow(p as u32)).div_rem(&BigInt::from(p));
    debug_assert!(r == BigInt::from(0), "Fermat");
    q
}

/// `sum_{0<i<p} (C(p,i)/p) s^i t^(p-i)`, so that
/// `δ(s+t) = δ(s) + δ(t) - sum_correction(s, t)`.
pub fn sum_correction(s: &RingElem, t: &RingElem, p: u64) -> RingElem {
    let mut acc = RingElem::zero(s.spec());
    let pb = BigInt::from(p);
    let mut spow = vec![RingElem::one(s.spec())];
    let mut tpow = vec![RingElem::one(s.spec())];
    for i in 1..p as usize {
        spow.push(&spow[i - 1] * s);
        tpow.push(&tpow[i - 1] * t);
    }
    for i in 1..p as usize {
        let c = binomial(pb.clone(), BigInt::from(i)) / &pb;
        acc = &acc + &(&spow[i] * &tpow[p as usize - i]).scale(&c);
    }
    acc
}

/// `δ(xy) = x^p δ(y) + y^p δ(x) + p δ(x) δ(y)`.
pub fn product_rule(x: &RingElem, dx: &RingElem, y: &RingElem, dy: &RingElem, p: u64) -> RingElem {
    let a = &x.pow(p) * dy;
    let b = &y.pow(p) * dx;
    let c = (dx * dy).scale(&BigInt::from(p));
    &(&a + &b) + &c
}

fn split_monomial(m: &Monomial, nonzero: &[usize]) -> (Monomial, Monomial) {
    let mut left = vec![0u32; m.0.len()];
    let mut right = m.0.clone();
    if nonzero.len() == 1 {
        let i = nonzero[0];
        left[i] = m.0[i] / 2;
        right[i] -= left[i];
    } else {
        for &i in &nonzero[..nonzero.len() / 2] {
            left[i] = m.0[i];
            right[i] = 0;
        }
    }
    (Monomial(left), Monomial(right))
}

fn lift_into(v: &RingElem, lift: &Arc<RingSpec>) -> RingElem {
    let n = lift.nvars();
    let terms = v.terms().iter().map(|(m, c)| {
        let mut e = m.0.clone();
        e.resize(n, 0);
        (Monomial(e), c.clone())
    });
    RingElem::from_terms(lift, terms)
}

#[cfg(test)]
mod tests;
