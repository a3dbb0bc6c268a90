use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::base_rings::{ElemJson, RingElem, RingHom, RingSpec};
use crate::delta::{delta_on_witt, delta_var_name, DeltaLift, DeltaRing};
use crate::error::{Error, Result};
use crate::witt::{eval_polynomial, WittVector};

use super::PrismSpec;

/// How a relation `δ^k(d f_i - x_i) = 0` is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    /// `d` divides `x_i = d q`, so `δ^k f_i -> δ^k q`.
    Quotient,
    /// The coefficient `L` of `δ^k f_i` is a unit: `δ^k f_i -> -L^-1 R`.
    Unit,
    /// Kept as a check only.
    Unoriented,
}

#[derive(Debug, Clone)]
pub struct EnvelopeRelation {
    pub index: usize,
    pub order: usize,
    /// `δ^k(d f_i - x_i)` in the integral lift.
    pub relation: RingElem,
    /// Coefficient of `δ^k f_i` in the relation.
    pub lead: RingElem,
    pub orientation: Orientation,
    /// Right-hand side of the rewrite rule for `δ^k f_i`, in the carrier.
    pub rule: Option<RingElem>,
}

/// `A{x_1/d, .., x_r/d}` presented by the delta-variables `δ^j f_i`
/// (`j <= D`) and the relations `δ^k(d f_i - x_i)`.
#[derive(Debug, Clone)]
pub struct EnvelopePresentation {
    prism: PrismSpec,
    ring: DeltaRing,
    numerators: Vec<RingElem>,
    depth: usize,
    relations: Vec<EnvelopeRelation>,
    rewrite: RingHom,
}

impl EnvelopePresentation {
    pub fn new(prism: &PrismSpec, numerators: &[RingElem], depth: usize) -> Result<Self> {
        if numerators.is_empty() {
            return Err(Error::UnsupportedQuery("an envelope needs at least one numerator".into()));
        }
        if depth == 0 {
            return Err(Error::BadPrecision("envelope depth must be at least 1".into()));
        }
        let r = numerators.len();
        let names: Vec<String> = if r == 1 { vec!["f".into()] } else { (1..=r).map(|i| format!("f{i}")).collect() };
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let ring = prism.ring().adjoin_free(&refs, depth)?;
        let carrier = ring.carrier().clone();
        let lift = ring.lift().clone();
        let d = prism.orientation().embed(&carrier)?;
        let xs = numerators
            .iter()
            .map(|x| {
                if x.spec() != prism.carrier() {
                    return Err(Error::SpecMismatch(x.spec().id().into(), prism.carrier().id().into()));
                }
                x.embed(&carrier)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut relations = Vec::new();
        for (i, x) in xs.iter().enumerate() {
            let quotient = x.div_exact(&d);
            let f = RingElem::var_named(&carrier, &names[i])?;
            let mut rel = ring.to_lift(&(&(&d * &f) - x))?;
            for k in 0..=depth {
                if k > 0 {
                    rel = delta_step(&ring, &rel)?;
                }
                let var_name = delta_var_name(&names[i], k);
                let v = lift.var_index(&var_name).expect("adjoined variable");
                if rel.degree_in(v) != 1 {
                    return Err(Error::NonOrientable(format!(
                        "δ^{k}(d·{} - x) = {rel} is not linear in {var_name}",
                        names[i]
                    )));
                }
                let lead = rel.coefficient_in(v, 1);
                let rest = rel.coefficient_in(v, 0);
                let (orientation, rule) = if let Some(q) = &quotient {
                    (Orientation::Quotient, Some(ring.delta_iter(q, k)?.value))
                } else {
                    let lead_c = lead.coerce(&carrier)?;
                    match lead_c.is_unit() {
                        Ok(true) => {
                            let inv = lead_c.invert()?;
                            (Orientation::Unit, Some(-&(&inv * &rest.coerce(&carrier)?)))
                        }
                        _ => (Orientation::Unoriented, None),
                    }
                };
                relations.push(EnvelopeRelation { index: i, order: k, relation: rel.clone(), lead, orientation, rule });
            }
        }
        let mut images: Vec<RingElem> = (0..carrier.nvars()).map(|i| RingElem::var(&carrier, i)).collect();
        for rel in &relations {
            if let Some(rule) = &rel.rule {
                let name = delta_var_name(&names[rel.index], rel.order);
                images[carrier.var_index(&name).expect("adjoined variable")] = rule.clone();
            }
        }
        let rewrite = RingHom::new(&carrier, &carrier, images)?;
        Ok(EnvelopePresentation {
            prism: prism.clone(),
            ring,
            numerators: numerators.to_vec(),
            depth,
            relations,
            rewrite,
        })
    }

    pub fn prism(&self) -> &PrismSpec {
        &self.prism
    }

    pub fn ring(&self) -> &DeltaRing {
        &self.ring
    }

    pub fn carrier(&self) -> &Arc<RingSpec> {
        self.ring.carrier()
    }

    pub fn numerators(&self) -> &[RingElem] {
        &self.numerators
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn relations(&self) -> &[EnvelopeRelation] {
        &self.relations
    }

    /// The adjoined variable `δ^j f_i`.
    pub fn fraction_var(&self, i: usize, j: usize) -> RingElem {
        let base = if self.numerators.len() == 1 { "f".to_string() } else { format!("f{}", i + 1) };
        RingElem::var_named(self.carrier(), &delta_var_name(&base, j)).expect("adjoined variable")
    }

    /// Rewrite with the oriented rules until nothing changes.
    pub fn normal_form(&self, a: &RingElem) -> Result<RingElem> {
        let mut cur = a.clone();
        for _ in 0..=self.depth + 2 {
            let next = self.rewrite.apply(&cur)?;
            if next == cur {
                return Ok(cur);
            }
            cur = next;
        }
        Err(Error::NonOrientable("rewriting did not terminate".into()))
    }

    pub fn reduces_to_zero(&self, a: &RingElem) -> Result<bool> {
        Ok(self.normal_form(a)?.is_zero())
    }

    /// Residues of every relation under the rewrite rules, compared at the
    /// precision that survives `k` divisions by `p`.
    pub fn diagnostics(&self) -> Result<EnvelopeDiagnostics> {
        let n = self.carrier().digits().unwrap_or(u32::MAX);
        let mut residues = Vec::new();
        let mut oriented_ok = true;
        for rel in &self.relations {
            let nf = self.normal_form(&rel.relation.coerce(self.carrier())?)?;
            let digits = n.saturating_sub(rel.order as u32);
            let zero = nf.eq_mod_p_power(&RingElem::zero(self.carrier()), digits);
            if rel.orientation != Orientation::Unoriented {
                oriented_ok &= zero;
            }
            residues.push(RelationResidue {
                index: rel.index,
                order: rel.order,
                orientation: rel.orientation,
                digits,
                reduces_to_zero: zero,
                residue: nf.to_json(),
            });
        }
        Ok(EnvelopeDiagnostics {
            oriented: self.relations.iter().filter(|r| r.orientation != Orientation::Unoriented).count(),
            unoriented: self.relations.iter().filter(|r| r.orientation == Orientation::Unoriented).count(),
            // every rule rewrites a distinct variable, so the only critical
            // pairs are the relations themselves
            locally_confluent: oriented_ok,
            residues,
        })
    }

    pub fn to_json(&self) -> Result<EnvelopeJson> {
        Ok(EnvelopeJson {
            prism: self.prism.carrier().id().to_string(),
            orientation: self.prism.orientation().to_json(),
            numerators: self.numerators.iter().map(|x| x.to_json()).collect(),
            depth: self.depth,
            carrier: self.carrier().id().to_string(),
            relations: self
                .relations
                .iter()
                .map(|r| {
                    Ok(RelationJson {
                        index: r.index,
                        order: r.order,
                        relation: r.relation.coerce(self.carrier())?.to_json(),
                        orientation: r.orientation,
                        rule: r.rule.as_ref().map(|x| x.to_json()),
                    })
                })
                .collect::<Result<_>>()?,
            diagnostics: self.diagnostics()?,
        })
    }
}

fn delta_step(ring: &DeltaRing, a: &RingElem) -> Result<RingElem> {
    ring.delta_exact(a)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationResidue {
    pub index: usize,
    pub order: usize,
    pub orientation: Orientation,
    pub digits: u32,
    pub reduces_to_zero: bool,
    pub residue: ElemJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvelopeDiagnostics {
    pub oriented: usize,
    pub unoriented: usize,
    pub locally_confluent: bool,
    pub residues: Vec<RelationResidue>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationJson {
    pub index: usize,
    pub order: usize,
    pub relation: ElemJson,
    pub orientation: Orientation,
    pub rule: Option<ElemJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvelopeJson {
    pub prism: String,
    pub orientation: ElemJson,
    pub numerators: Vec<ElemJson>,
    pub depth: usize,
    pub carrier: String,
    pub relations: Vec<RelationJson>,
    pub diagnostics: EnvelopeDiagnostics,
}

/// The two descriptions of the `S`-points of an envelope over a base point
/// `A -> W_n(S)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvelopePoints {
    /// Tuples `(h_i)` in `W_n(S)` with `h_i d = x_i`, by brute force.
    pub set_a: Vec<Vec<WittVector>>,
    /// Tuples satisfying every presentation relation, with `δ^j f_i` sent
    /// to `δ^j(h_i)`.
    pub set_b: Vec<Vec<WittVector>>,
    pub candidates: u128,
}

impl EnvelopePoints {
    pub fn equal(&self) -> bool {
        self.set_a == self.set_b
    }
}

/// Enumerate both point sets over every `r`-tuple of `W_n(S)`.
pub fn envelope_points(env: &EnvelopePresentation, base_point: &DeltaLift, budget: u128) -> Result<EnvelopePoints> {
    let target = base_point.target().clone();
    let n = base_point.len();
    let r = env.numerators.len();
    let witt_count = target
        .cardinality()
        .and_then(|c| c.checked_pow(n as u32))
        .ok_or_else(|| Error::UnsupportedCarrier(format!("{} is not finite", target.id())))?;
    let candidates = witt_count.checked_pow(r as u32).unwrap_or(u128::MAX);
    if candidates > budget {
        return Err(Error::EnumerationBudgetExceeded { needed: candidates, budget });
    }
    let witt = WittVector::enumerate(&target, n, budget)?;
    let witt_count = witt.len();

    let base = env.prism.ring();
    let d_bar = base_point.apply(env.prism.orientation())?;
    let x_bar = env.numerators.iter().map(|x| base_point.apply(x)).collect::<Result<Vec<_>>>()?;

    // presentation side: base generators map through the base point, the
    // adjoined δ^j f_i through δ_W^j(h_i)
    let carrier = env.carrier();
    let base_vars = base.carrier().nvars();
    let fvars_per = env.depth + 1;
    let rel_len = |k: usize| n.saturating_sub(k);
    let base_images: Vec<Option<WittVector>> = base_point.generator_images().to_vec();
    let deltas: Vec<Vec<WittVector>> = witt
        .par_iter()
        .map(|h| {
            let mut out = vec![h.clone()];
            for _ in 1..=env.depth.min(n - 1) {
                let next = delta_on_witt(out.last().unwrap())?;
                out.push(next);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let decode = |mut code: usize| -> Vec<usize> {
        (0..r)
            .map(|_| {
                let c = code % witt_count;
                code /= witt_count;
                c
            })
            .collect()
    };
    let total = candidates as usize;

    let mut set_a: Vec<Vec<WittVector>> = (0..total)
        .into_par_iter()
        .map(|code| {
            let idx = decode(code);
            for (i, &j) in idx.iter().enumerate() {
                if witt[j].mul(&d_bar)? != x_bar[i] {
                    return Ok(None);
                }
            }
            Ok(Some(idx.iter().map(|&j| witt[j].clone()).collect::<Vec<_>>()))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    set_a.sort();

    let mut set_b: Vec<Vec<WittVector>> = (0..total)
        .into_par_iter()
        .map(|code| {
            let idx = decode(code);
            let mut images = base_images.clone();
            images.resize(carrier.nvars(), None);
            for (i, &j) in idx.iter().enumerate() {
                for (k, v) in deltas[j].iter().enumerate() {
                    images[base_vars + i * fvars_per + k] = Some(v.clone());
                }
            }
            for rel in &env.relations {
                if rel.order >= n {
                    continue;
                }
                let value = eval_polynomial(&rel.relation, &images, &target, rel_len(rel.order))?;
                if !value.is_zero() {
                    return Ok(None);
                }
            }
            Ok(Some(idx.iter().map(|&j| witt[j].clone()).collect::<Vec<_>>()))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    set_b.sort();

    Ok(EnvelopePoints { set_a, set_b, candidates })
}
