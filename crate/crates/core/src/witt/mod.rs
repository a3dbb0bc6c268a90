//! Truncated p-typical Witt vectors `W_n(R)` over catalog carriers.
//!
//! The ring structure comes from universal integer polynomials generated
//! out of the ghost components and memoized per prime in a
//! [`WittPolynomialTable`].

mod table;

pub use table::{WittOp, WittPolynomialTable, DEFAULT_CAP};

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::base_rings::{ElemJson, Precision, RingElem, RingHom, RingSpec};
use crate::error::{Error, Result};

/// An element `(a_0, .., a_{n-1})` of `W_n(R)`.
#[derive(Clone, PartialEq, Eq)]
pub struct WittVector {
    spec: Arc<RingSpec>,
    comps: Vec<RingElem>,
}

/// Output of [`WittVector::from_ghost`]: component `m` is only determined
/// modulo `p^(N - lost_digits[m])` over `Z/p^N`-based carriers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GhostInverse {
    pub vector: WittVector,
    pub lost_digits: Vec<u32>,
}

impl GhostInverse {
    pub fn total_loss(&self) -> u32 {
        self.lost_digits.iter().sum()
    }
}

impl PartialOrd for WittVector {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WittVector {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.comps.cmp(&other.comps)
    }
}

impl std::hash::Hash for WittVector {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.comps.hash(state);
    }
}

impl fmt::Debug for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in W_{}({})", self.len(), self.spec.id())
    }
}

impl fmt::Display for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.comps.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl WittVector {
    pub fn new(spec: &Arc<RingSpec>, comps: Vec<RingElem>) -> Result<Self> {
        if comps.is_empty() {
            return Err(Error::LengthUnderflow("Witt vectors have length at least 1".into()));
        }
        for c in &comps {
            if c.spec() != spec {
                return Err(Error::SpecMismatch(c.spec().id().into(), spec.id().into()));
            }
        }
        Ok(WittVector { spec: spec.clone(), comps })
    }

    pub fn zero(spec: &Arc<RingSpec>, n: usize) -> Self {
        WittVector { spec: spec.clone(), comps: vec![RingElem::zero(spec); n.max(1)] }
    }

    pub fn one(spec: &Arc<RingSpec>, n: usize) -> Self {
        WittVector::teichmuller(&RingElem::one(spec), n)
    }

    /// `[r] = (r, 0, .., 0)`.
    pub fn teichmuller(r: &RingElem, n: usize) -> Self {
        let mut comps = vec![RingElem::zero(r.spec()); n.max(1)];
        comps[0] = r.clone();
        WittVector { spec: r.spec().clone(), comps }
    }

    /// The image of the integer `c`, with components computed over `Z` and
    /// then reduced into `spec`.
    pub fn from_integer(spec: &Arc<RingSpec>, n: usize, c: &BigInt) -> Result<Self> {
        let z = RingSpec::integers(spec.precision())?;
        let ghosts = vec![RingElem::from_bigint(&z, c); n.max(1)];
        let over_z = WittVector::from_ghost(&ghosts, &z)?.vector;
        let comps = over_z
            .comps
            .iter()
            .map(|a| RingElem::from_bigint(spec, &a.as_integer().expect("integer component")))
            .collect();
        WittVector::new(spec, comps)
    }

    pub fn random<R: rand::Rng + ?Sized>(spec: &Arc<RingSpec>, n: usize, rng: &mut R) -> Self {
        let comps = (0..n.max(1)).map(|_| RingElem::random(spec, rng)).collect();
        WittVector { spec: spec.clone(), comps }
    }

    /// Every vector of `W_n(R)` for a finite carrier, in a fixed order
    /// (first component varying fastest).
    pub fn enumerate(spec: &Arc<RingSpec>, n: usize, budget: u128) -> Result<Vec<Self>> {
        let elems = spec.elements(budget)?;
        let count = (elems.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if count > budget {
            return Err(Error::EnumerationBudgetExceeded { needed: count, budget });
        }
        Ok((0..count as usize)
            .map(|mut code| {
                let comps = (0..n)
                    .map(|_| {
                        let c = elems[code % elems.len()].clone();
                        code /= elems.len();
                        c
                    })
                    .collect();
                WittVector { spec: spec.clone(), comps }
            })
            .collect())
    }

    pub fn spec(&self) -> &Arc<RingSpec> {
        &self.spec
    }

    pub fn p(&self) -> u64 {
        self.spec.p()
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn components(&self) -> &[RingElem] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &RingElem {
        &self.comps[i]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// Drop the last component.
    pub fn restriction(&self) -> Result<Self> {
        if self.len() == 1 {
            return Err(Error::LengthUnderflow("restriction of a length-1 vector".into()));
        }
        Ok(WittVector { spec: self.spec.clone(), comps: self.comps[..self.len() - 1].to_vec() })
    }

    /// Keep the first `len` components.
    pub fn truncate(&self, len: usize) -> Result<Self> {
        if len == 0 || len > self.len() {
            return Err(Error::LengthUnderflow(format!("cannot truncate length {} to {len}", self.len())));
        }
        Ok(WittVector { spec: self.spec.clone(), comps: self.comps[..len].to_vec() })
    }

    /// `V(x) = (0, a_0, .., a_{n-2})`, staying in length `n`.
    pub fn verschiebung(&self) -> Self {
        let mut comps = vec![RingElem::zero(&self.spec)];
        comps.extend_from_slice(&self.comps[..self.len() - 1]);
        WittVector { spec: self.spec.clone(), comps }
    }

    /// `V^k` as the map `W_n -> W_{n+k}`.
    pub fn verschiebung_lift(&self, k: usize) -> Self {
        let mut comps = vec![RingElem::zero(&self.spec); k];
        comps.extend_from_slice(&self.comps);
        WittVector { spec: self.spec.clone(), comps }
    }

    /// Reinterpret the components in another carrier with the same
    /// variables (reduction or integral lift).
    pub fn coerce(&self, target: &Arc<RingSpec>) -> Result<Self> {
        let comps = self.comps.iter().map(|c| c.coerce(target)).collect::<Result<_>>()?;
        WittVector::new(target, comps)
    }

    /// Apply a ring map componentwise, `W_n(f)`.
    pub fn map(&self, f: &RingHom) -> Result<Self> {
        let refs: Vec<&RingElem> = self.comps.iter().collect();
        WittVector::new(f.target(), f.apply_many(&refs)?)
    }

    /// Ghost components `w_m = sum_{i <= m} p^i a_i^(p^(m-i))`.
    pub fn ghost(&self) -> Vec<RingElem> {
        let p = self.spec.prime();
        (0..self.len())
            .map(|m| {
                let mut acc = RingElem::zero(&self.spec);
                for i in 0..=m {
                    let t = self.comps[i].pow(self.p().pow((m - i) as u32)).scale(&p.pow(i as u32));
                    acc = &acc + &t;
                }
                acc
            })
            .collect()
    }

    /// Invert the ghost map by the recursion
    /// `a_m = (w_m - sum_{i<m} p^i a_i^(p^(m-i))) / p^m`.
    pub fn from_ghost(ghosts: &[RingElem], spec: &Arc<RingSpec>) -> Result<GhostInverse> {
        if ghosts.is_empty() {
            return Err(Error::LengthUnderflow("empty ghost vector".into()));
        }
        let p = spec.prime();
        let mut comps: Vec<RingElem> = Vec::with_capacity(ghosts.len());
        let mut lost = Vec::with_capacity(ghosts.len());
        for (m, w) in ghosts.iter().enumerate() {
            if w.spec() != spec {
                return Err(Error::SpecMismatch(w.spec().id().into(), spec.id().into()));
            }
            if let Some(n) = spec.digits() {
                if m as u32 >= n {
                    return Err(Error::PrecisionExhausted(format!(
                        "ghost component {m} needs division by p^{m} in {}",
                        spec.id()
                    )));
                }
            }
            let mut rest = w.clone();
            for (i, a) in comps.iter().enumerate() {
                let t = a.pow(spec.p().pow((m - i) as u32)).scale(&p.pow(i as u32));
                rest = &rest - &t;
            }
            let d = rest
                .div_exact_by_p(m as u32)
                .map_err(|_| Error::NonIntegralGhost(format!("component {m}: {rest} not divisible by p^{m}")))?;
            lost.push(if spec.digits().is_some() { d.lost_digits } else { 0 });
            comps.push(d.value);
        }
        Ok(GhostInverse { vector: WittVector { spec: spec.clone(), comps }, lost_digits: lost })
    }

    fn ops(&self) -> Result<WittOps> {
        WittOps::shared(self.p())
    }

    pub fn add(&self, other: &WittVector) -> Result<Self> {
        self.ops()?.add(self, other)
    }

    pub fn sub(&self, other: &WittVector) -> Result<Self> {
        self.ops()?.sub(self, other)
    }

    pub fn neg(&self) -> Result<Self> {
        self.ops()?.neg(self)
    }

    pub fn mul(&self, other: &WittVector) -> Result<Self> {
        self.ops()?.mul(self, other)
    }

    pub fn pow(&self, e: u64) -> Result<Self> {
        self.ops()?.pow(self, e)
    }

    /// `c * x` for an integer `c`.
    pub fn scale(&self, c: &BigInt) -> Result<Self> {
        let c = WittVector::from_integer(&self.spec, self.len(), c)?;
        self.ops()?.mul(&c, self)
    }

    /// `F: W_n -> W_{n-1}`.
    pub fn frobenius(&self) -> Result<Self> {
        self.ops()?.frobenius(self)
    }

    /// Units of `W_n(R)` are the vectors whose first component is a unit.
    pub fn is_unit(&self) -> Result<bool> {
        self.comps[0].is_unit()
    }

    pub fn invert(&self) -> Result<Self> {
        self.ops()?.invert(self)
    }

    /// Membership in `W_n[F]`, the kernel of Frobenius.
    pub fn is_ga_sharp(&self) -> Result<bool> {
        self.require_len(2)?;
        Ok(self.frobenius()?.is_zero())
    }

    /// Membership in `W_n^*[F]`: units with `F(u) = 1`.
    pub fn is_gm_sharp(&self) -> Result<bool> {
        self.require_len(2)?;
        if !self.is_unit()? {
            return Ok(false);
        }
        Ok(self.frobenius()? == WittVector::one(&self.spec, self.len() - 1))
    }

    fn require_len(&self, n: usize) -> Result<()> {
        if self.len() < n {
            return Err(Error::LengthUnderflow(format!("need length at least {n}, got {}", self.len())));
        }
        Ok(())
    }

    pub fn to_json(&self) -> WittJson {
        WittJson {
            spec_id: self.spec.id().to_string(),
            length: self.len(),
            components: self.comps.iter().map(|c| c.to_json()).collect(),
        }
    }
}

/// Evaluate an integer polynomial in `W_len(S)` with variable `i` sent to
/// `images[i]` (truncated to `len`). Variables without an image may not
/// occur in `poly`.
pub fn eval_polynomial(
    poly: &RingElem,
    images: &[Option<WittVector>],
    target: &Arc<RingSpec>,
    len: usize,
) -> Result<WittVector> {
    let mut acc = WittVector::zero(target, len);
    let mut powers: std::collections::HashMap<(usize, u32), WittVector> = Default::default();
    for (m, c) in poly.terms() {
        let mut term = WittVector::from_integer(target, len, c)?;
        for (i, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let pw = match powers.get(&(i, e)) {
                Some(v) => v.clone(),
                None => {
                    let base = images
                        .get(i)
                        .and_then(|x| x.as_ref())
                        .filter(|x| x.len() >= len)
                        .ok_or_else(|| Error::DepthExceeded(poly.spec().vars()[i].clone()))?
                        .truncate(len)?;
                    let v = base.pow(e as u64)?;
                    powers.insert((i, e), v.clone());
                    v
                }
            };
            term = term.mul(&pw)?;
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// Canonical JSON form of a Witt vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WittJson {
    pub spec_id: String,
    pub length: usize,
    pub components: Vec<ElemJson>,
}

impl WittJson {
    pub fn into_vector(&self, ctx: Precision) -> Result<WittVector> {
        let spec = crate::base_rings::parse_spec(&self.spec_id, ctx)?;
        if self.components.len() != self.length {
            return Err(Error::Parse(format!("length {} but {} components", self.length, self.components.len())));
        }
        let comps = self.components.iter().map(|c| c.into_elem(&spec)).collect::<Result<_>>()?;
        WittVector::new(&spec, comps)
    }
}

/// Witt arithmetic driven by a particular polynomial table. The default is
/// the shared table; a custom table (for example a corrupted one) can be
/// injected for negative controls.
#[derive(Debug, Clone)]
pub struct WittOps {
    table: Arc<WittPolynomialTable>,
}

impl WittOps {
    pub fn new(table: Arc<WittPolynomialTable>) -> Self {
        WittOps { table }
    }

    pub fn shared(p: u64) -> Result<Self> {
        Ok(WittOps { table: WittPolynomialTable::shared(p)? })
    }

    pub fn table(&self) -> &Arc<WittPolynomialTable> {
        &self.table
    }

    fn check(&self, x: &WittVector, y: &WittVector) -> Result<()> {
        if x.spec != y.spec {
            return Err(Error::SpecMismatch(x.spec.id().into(), y.spec.id().into()));
        }
        if x.len() != y.len() {
            return Err(Error::SpecMismatch(format!("W_{}", x.len()), format!("W_{}", y.len())));
        }
        if x.p() != self.table.p() {
            return Err(Error::SpecMismatch(format!("p = {}", x.p()), format!("p = {}", self.table.p())));
        }
        Ok(())
    }

    /// Evaluate `op` at indices `0..len` with `a_j -> x_j`, `b_j -> y_j`.
    fn eval(&self, op: WittOp, x: &WittVector, y: Option<&WittVector>, len: usize) -> Result<WittVector> {
        let cap = self.table.cap();
        let polys = self.table.get_all(op, len)?;
        let zero = RingElem::zero(&x.spec);
        let mut images = Vec::with_capacity(2 * cap);
        for j in 0..cap {
            images.push(x.comps.get(j).cloned().unwrap_or_else(|| zero.clone()));
        }
        for j in 0..cap {
            images.push(y.and_then(|y| y.comps.get(j).cloned()).unwrap_or_else(|| zero.clone()));
        }
        let hom = RingHom::new(self.table.ring(), &x.spec, images)?;
        let refs: Vec<&RingElem> = polys.iter().collect();
        WittVector::new(&x.spec, hom.apply_many(&refs)?)
    }

    pub fn add(&self, x: &WittVector, y: &WittVector) -> Result<WittVector> {
        self.check(x, y)?;
        self.eval(WittOp::Sum, x, Some(y), x.len())
    }

    pub fn mul(&self, x: &WittVector, y: &WittVector) -> Result<WittVector> {
        self.check(x, y)?;
        self.eval(WittOp::Product, x, Some(y), x.len())
    }

    pub fn neg(&self, x: &WittVector) -> Result<WittVector> {
        self.check(x, x)?;
        self.eval(WittOp::Negation, x, None, x.len())
    }

    pub fn sub(&self, x: &WittVector, y: &WittVector) -> Result<WittVector> {
        self.add(x, &self.neg(y)?)
    }

    pub fn pow(&self, x: &WittVector, mut e: u64) -> Result<WittVector> {
        let mut base = x.clone();
        let mut acc = WittVector::one(&x.spec, x.len());
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// `F: W_n -> W_{n-1}`. Over characteristic-p carriers this is the
    /// componentwise p-th power followed by restriction.
    pub fn frobenius(&self, x: &WittVector) -> Result<WittVector> {
        self.check(x, x)?;
        if x.len() < 2 {
            return Err(Error::LengthUnderflow("Frobenius needs length at least 2".into()));
        }
        if x.spec.is_char_p() {
            let comps = x.comps[..x.len() - 1].iter().map(|c| c.pow(x.p())).collect();
            return WittVector::new(&x.spec, comps);
        }
        self.frobenius_universal(x)
    }

    /// Frobenius through the universal polynomials on every carrier.
    pub fn frobenius_universal(&self, x: &WittVector) -> Result<WittVector> {
        if x.len() < 2 {
            return Err(Error::LengthUnderflow("Frobenius needs length at least 2".into()));
        }
        self.eval(WittOp::Frobenius, x, None, x.len() - 1)
    }

    /// Inverse of a unit by Newton iteration from `[a_0^-1]`.
    pub fn invert(&self, x: &WittVector) -> Result<WittVector> {
        let a0inv = x.comps[0].invert()?;
        let mut b = WittVector::teichmuller(&a0inv, x.len());
        let one = WittVector::one(&x.spec, x.len());
        let two = self.add(&one, &one)?;
        for _ in 0..64 {
            let ab = self.mul(x, &b)?;
            if ab == one {
                return Ok(b);
            }
            b = self.mul(&b, &self.sub(&two, &ab)?)?;
        }
        Err(Error::NotAUnit(format!("Newton iteration did not converge for {x}")))
    }
}

#[cfg(test)]
mod tests;
