use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{parse_spec, Monomial, Precision, RingElem, RingSpec};
use crate::error::{Error, Result};

/// Canonical JSON form of a ring element. Terms follow the carrier's
/// monomial order and coefficients are decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElemJson {
    pub spec_id: String,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub monomial: Vec<(String, u32)>,
    pub coeff: String,
}

impl RingElem {
    pub fn to_json(&self) -> ElemJson {
        let vars = self.spec().vars();
        let terms = self
            .terms()
            .iter()
            .map(|(m, c)| TermJson {
                monomial: m.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (vars[i].clone(), e)).collect(),
                coeff: c.to_string(),
            })
            .collect();
        ElemJson { spec_id: self.spec().id().to_string(), terms }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("element JSON is always serializable")
    }
}

impl ElemJson {
    /// Read the element into `spec`, which must carry the same id.
    pub fn into_elem(&self, spec: &Arc<RingSpec>) -> Result<RingElem> {
        if spec.id() != self.spec_id {
            return Err(Error::SpecMismatch(self.spec_id.clone(), spec.id().to_string()));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let mut exps = vec![0u32; spec.nvars()];
            for (v, e) in &t.monomial {
                let i =
                    spec.var_index(v).ok_or_else(|| Error::Parse(format!("unknown variable {v} in {}", spec.id())))?;
                exps[i] += e;
            }
            let c: BigInt = t.coeff.parse().map_err(|_| Error::Parse(format!("bad coefficient {:?}", t.coeff)))?;
            terms.push((Monomial(exps), c));
        }
        Ok(RingElem::from_terms(spec, terms))
    }

    /// Read the element, building its carrier from the embedded id.
    pub fn into_elem_parsed(&self, ctx: Precision) -> Result<RingElem> {
        let spec = parse_spec(&self.spec_id, ctx)?;
        self.into_elem(&spec)
    }

    pub fn from_json_str(s: &str) -> Result<ElemJson> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}
