use std::sync::Arc;

use crate::base_rings::{RingElem, RingHom, RingSpec};
use crate::error::{Error, Result};
use crate::witt::{eval_polynomial, WittVector};

use super::DeltaRing;

/// The canonical `δ` on Witt vectors, `W_n(R) -> W_{n-1}(R)`, for which the
/// Witt Frobenius is the Frobenius lift. Computed on ghost components in
/// the integral lift of `R` and reduced; by naturality no precision is lost.
pub fn delta_on_witt(x: &WittVector) -> Result<WittVector> {
    if x.len() < 2 {
        return Err(Error::LengthUnderflow("delta on W_1 has no output".into()));
    }
    let lift = x.spec().integral_lift();
    let g = x.coerce(&lift)?.ghost();
    let p = x.p();
    let mut w = Vec::with_capacity(x.len() - 1);
    for m in 0..x.len() - 1 {
        let num = &g[m + 1] - &g[m].pow(p);
        let d = num.div_exact_by_p(1).map_err(|_| Error::NonIntegralGhost(format!("ghost step {m} of {x}")))?;
        w.push(d.value);
    }
    WittVector::from_ghost(&w, &lift)?.vector.coerce(x.spec())
}

/// The delta-map `A -> W_n(S)` lifting a ring map `f: A -> S`: generator
/// `a` goes to the Witt vector with ghost components
/// `(a, φ(a), .., φ^(n-1)(a))`, pushed forward along `f`.
#[derive(Debug, Clone)]
pub struct DeltaLift {
    ring: DeltaRing,
    hom: RingHom,
    n: usize,
    generators: Vec<Option<WittVector>>,
}

impl DeltaLift {
    pub fn new(ring: &DeltaRing, target: &Arc<RingSpec>, assignment: Vec<RingElem>, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::LengthUnderflow("Witt length must be positive".into()));
        }
        // validates that f is a ring map out of the carrier itself
        RingHom::new(ring.carrier(), target, assignment.clone())?;
        let hom = RingHom::new(ring.lift(), target, assignment)?;
        let mut generators = Vec::with_capacity(ring.lift().nvars());
        for i in 0..ring.lift().nvars() {
            generators.push(push_forward(ring, &hom, &RingElem::var(ring.lift(), i), n)?);
        }
        Ok(DeltaLift { ring: ring.clone(), hom, n, generators })
    }

    pub fn target(&self) -> &Arc<RingSpec> {
        self.hom.target()
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The underlying ring map `f`, on the integral lift of the carrier.
    pub fn base_map(&self) -> &RingHom {
        &self.hom
    }

    /// Image of generator `i`; fails when the presentation is too shallow
    /// to reach `φ^(n-1)` of it.
    pub fn generator_image(&self, i: usize) -> Result<&WittVector> {
        match &self.generators[i] {
            Some(v) if v.len() == self.n => Ok(v),
            _ => Err(Error::DepthExceeded(self.ring.lift().vars()[i].clone())),
        }
    }

    /// Image of `a` through its ghost components directly.
    pub fn apply_via_ghost(&self, a: &RingElem) -> Result<WittVector> {
        let a = self.ring.to_lift(a)?;
        match push_forward(&self.ring, &self.hom, &a, self.n)? {
            Some(v) if v.len() == self.n => Ok(v),
            _ => Err(Error::DepthExceeded(format!("φ^{} of {a}", self.n - 1))),
        }
    }

    /// Image of `a` by evaluating its polynomial expression with Witt
    /// arithmetic in `W_n(S)` on the generator images.
    pub fn apply(&self, a: &RingElem) -> Result<WittVector> {
        self.apply_truncated(a, self.n)
    }

    /// The image of `a` in `W_len(S)` for `len <= n`, which reaches one
    /// step deeper into a truncated presentation per dropped component.
    pub fn apply_truncated(&self, a: &RingElem, len: usize) -> Result<WittVector> {
        if len == 0 || len > self.n {
            return Err(Error::LengthUnderflow(format!("length {len} outside 1..={}", self.n)));
        }
        let a = self.ring.to_lift(a)?;
        eval_polynomial(&a, &self.generators, self.target(), len)
    }

    /// All generator images. Near the top of a truncated presentation an
    /// image may be shorter than `n` (as far as `φ` reaches), or missing.
    pub fn generator_images(&self) -> &[Option<WittVector>] {
        &self.generators
    }
}

/// The Witt vector with ghost components `(a, φ(a), ..)` pushed along `hom`,
/// as long as `φ` can be iterated (up to length `n`). `None` when not even
/// `a` itself is available, which cannot happen for polynomials.
fn push_forward(ring: &DeltaRing, hom: &RingHom, a: &RingElem, n: usize) -> Result<Option<WittVector>> {
    let mut ghosts = Vec::with_capacity(n);
    let mut cur = a.clone();
    for j in 0..n {
        if j > 0 {
            cur = match ring.phi_in_lift(&cur) {
                Ok(c) => c,
                Err(Error::DepthExceeded(_)) => break,
                Err(e) => return Err(e),
            };
        }
        ghosts.push(cur.clone());
    }
    Ok(Some(WittVector::from_ghost(&ghosts, ring.lift())?.vector.map(hom)?))
}
