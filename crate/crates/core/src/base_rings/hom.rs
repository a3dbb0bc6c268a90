use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;

use super::{Monomial, Relations, RingElem, RingSpec};
use crate::error::{Error, Result};

/// A ring map out of a presented carrier, given by the images of its
/// generators. Construction checks that every relation (including the
/// coefficient modulus) maps to zero.
#[derive(Debug, Clone)]
pub struct RingHom {
    source: Arc<RingSpec>,
    target: Arc<RingSpec>,
    images: Vec<RingElem>,
}

impl RingHom {
    pub fn new(source: &Arc<RingSpec>, target: &Arc<RingSpec>, images: Vec<RingElem>) -> Result<Self> {
        if images.len() != source.nvars() {
            return Err(Error::RelationViolated(format!("{} generators but {} images", source.nvars(), images.len())));
        }
        for img in &images {
            if img.spec() != target {
                return Err(Error::SpecMismatch(img.spec().id().into(), target.id().into()));
            }
        }
        let hom = RingHom { source: source.clone(), target: target.clone(), images };
        hom.check_relations()?;
        Ok(hom)
    }

    /// The identity map.
    pub fn identity(spec: &Arc<RingSpec>) -> Self {
        let images = (0..spec.nvars()).map(|i| RingElem::var(spec, i)).collect();
        RingHom { source: spec.clone(), target: spec.clone(), images }
    }

    /// Coefficient reduction or integral lift between carriers with the
    /// same variables, e.g. `Z[u]/(u^9) -> Z/16[u]/(u^9)`.
    pub fn coefficient_map(source: &Arc<RingSpec>, target: &Arc<RingSpec>) -> Result<Self> {
        let images = (0..source.nvars()).map(|i| RingElem::var(target, i)).collect();
        RingHom::new(source, target, images)
    }

    pub fn source(&self) -> &Arc<RingSpec> {
        &self.source
    }

    pub fn target(&self) -> &Arc<RingSpec> {
        &self.target
    }

    pub fn images(&self) -> &[RingElem] {
        &self.images
    }

    fn check_relations(&self) -> Result<()> {
        if let Some(m) = self.source.modulus() {
            if !RingElem::from_bigint(&self.target, m).is_zero() {
                return Err(Error::RelationViolated(format!(
                    "{m} = 0 in {} but not in {}",
                    self.source.id(),
                    self.target.id()
                )));
            }
        }
        match self.source.relations() {
            Relations::None => Ok(()),
            Relations::MonomialIdeal(gens) => {
                for g in gens {
                    let img =
                        self.eval_terms([(&Monomial(g.clone()), &BigInt::from(1))].into_iter(), &mut HashMap::new());
                    if !img.is_zero() {
                        return Err(Error::RelationViolated(Monomial(g.clone()).render(self.source.vars())));
                    }
                }
                Ok(())
            }
            Relations::Monic(cs) => {
                let u = &self.images[0];
                let mut img = u.pow(cs.len() as u64);
                for (j, c) in cs.iter().enumerate() {
                    img = &img + &u.pow(j as u64).scale(c);
                }
                if img.is_zero() {
                    Ok(())
                } else {
                    Err(Error::RelationViolated(format!("monic relation of {} maps to {img}", self.source.id())))
                }
            }
        }
    }

    /// Image of `a`.
    pub fn apply(&self, a: &RingElem) -> Result<RingElem> {
        let mut cache = HashMap::new();
        self.apply_cached(a, &mut cache)
    }

    /// Apply to several elements sharing one power cache.
    pub fn apply_many(&self, xs: &[&RingElem]) -> Result<Vec<RingElem>> {
        let mut cache = HashMap::new();
        xs.iter().map(|a| self.apply_cached(a, &mut cache)).collect()
    }

    fn apply_cached(&self, a: &RingElem, cache: &mut HashMap<(usize, u32), RingElem>) -> Result<RingElem> {
        if a.spec() != &self.source {
            return Err(Error::SpecMismatch(a.spec().id().into(), self.source.id().into()));
        }
        Ok(self.eval_terms(a.terms().iter(), cache))
    }

    fn eval_terms<'a>(
        &self,
        terms: impl Iterator<Item = (&'a Monomial, &'a BigInt)>,
        cache: &mut HashMap<(usize, u32), RingElem>,
    ) -> RingElem {
        let mut acc = RingElem::zero(&self.target);
        for (m, c) in terms {
            let mut term = RingElem::from_bigint(&self.target, c);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 || term.is_zero() {
                    continue;
                }
                let pw = cache.entry((i, e)).or_insert_with(|| self.images[i].pow(e as u64)).clone();
                term = &term * &pw;
            }
            acc = &acc + &term;
        }
        acc
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &RingHom) -> Result<RingHom> {
        let images = self.images.iter().map(|x| other.apply(x)).collect::<Result<Vec<_>>>()?;
        RingHom::new(&self.source, &other.target, images)
    }
}
