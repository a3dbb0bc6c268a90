use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use rand::Rng;

use super::{Monomial, RingElem, RingSpec};

impl RingElem {
    /// A random element. Finite carriers are sampled uniformly; otherwise
    /// coefficients lie in `[-9, 9]` on monomials of total degree at most 2
    /// (and below any power-series truncation).
    pub fn random<R: Rng + ?Sized>(spec: &Arc<RingSpec>, rng: &mut R) -> RingElem {
        let basis = spec.standard_monomials().unwrap_or_else(|| low_degree_monomials(spec.nvars(), 2));
        let terms = basis.into_iter().map(|m| {
            let c = match spec.modulus() {
                Some(modulus) => BigInt::from(rng.gen::<u128>()).mod_floor(modulus),
                None => BigInt::from(rng.gen_range(-9i64..=9)),
            };
            (m, c)
        });
        RingElem::from_terms(spec, terms)
    }
}

fn low_degree_monomials(nvars: usize, max: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one(nvars)];
    for _ in 0..max {
        let mut next = Vec::new();
        for m in &out {
            for i in 0..nvars {
                let mut e = m.0.clone();
                e[i] += 1;
                let m = Monomial(e);
                if !out.contains(&m) && !next.contains(&m) {
                    next.push(m);
                }
            }
        }
        out.extend(next);
    }
    out.sort();
    out
}
