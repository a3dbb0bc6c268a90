//! Computations on the Hodge–Tate side: the torsor of solutions of
//! `F(x) = p^m`, the group law `a * b = a + b + c a b` with its exponential
//! and logarithm, and the crystalline prismatic logarithm.

mod series;

pub use series::{
    exp_g, integrality_profile, log_g, CPoly, GroupLawSeries, IntegralityProfile, IntegralityRow, SeriesJson,
};

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::base_rings::{RingElem, RingSpec};
use crate::error::{Error, Result};
use crate::witt::WittVector;

/// The equation `F(x) = p^m` on `W_n(R)` for a finite `F_p`-algebra `R`,
/// where `F: W_n(R) -> W_{n-1}(R)`.
#[derive(Debug, Clone)]
pub struct FrobeniusEquation {
    pub ring: Arc<RingSpec>,
    pub length: usize,
    pub exponent: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusSolutions {
    /// `p^m` in `W_n(R)`, a solution by construction.
    pub particular: WittVector,
    /// Every solution, sorted.
    pub solutions: Vec<WittVector>,
    /// `W_n[F](R)`, sorted.
    pub kernel: Vec<WittVector>,
    /// `solutions == particular + kernel` as sets.
    pub torsor: bool,
}

impl FrobeniusEquation {
    pub fn new(ring: &Arc<RingSpec>, length: usize, exponent: u32) -> Result<Self> {
        if length < 2 {
            return Err(Error::LengthUnderflow("F(x) = p^m needs Witt length at least 2".into()));
        }
        if !ring.is_char_p() {
            return Err(Error::NotCharP(ring.id().into()));
        }
        Ok(FrobeniusEquation { ring: ring.clone(), length, exponent })
    }

    pub fn solve(&self, budget: u128) -> Result<FrobeniusSolutions> {
        let n = self.length;
        let pm = BigInt::from(self.ring.p()).pow(self.exponent);
        let particular = WittVector::from_integer(&self.ring, n, &pm)?;
        let rhs = WittVector::from_integer(&self.ring, n - 1, &pm)?;
        let zero = WittVector::zero(&self.ring, n - 1);
        let all = WittVector::enumerate(&self.ring, n, budget)?;
        let images = all.par_iter().map(|x| x.frobenius()).collect::<Result<Vec<_>>>()?;
        let mut solutions = Vec::new();
        let mut kernel = Vec::new();
        for (x, fx) in all.into_iter().zip(images) {
            if fx == rhs {
                solutions.push(x.clone());
            }
            if fx == zero {
                kernel.push(x);
            }
        }
        solutions.sort();
        kernel.sort();
        let mut translate = kernel.iter().map(|k| particular.add(k)).collect::<Result<Vec<_>>>()?;
        translate.sort();
        translate.dedup();
        let torsor = translate == solutions;
        Ok(FrobeniusSolutions { particular, solutions, kernel, torsor })
    }
}

/// `a * b = a + b + c a b`.
pub fn star_product(a: &RingElem, b: &RingElem, c: &RingElem) -> Result<RingElem> {
    let ab = a.try_mul(b)?;
    a.try_add(b)?.try_add(&c.try_mul(&ab)?)
}

/// The inverse `-a / (1 + c a)` for the group law, when `1 + c a` is a unit.
pub fn star_inverse(a: &RingElem, c: &RingElem) -> Result<RingElem> {
    let denom = RingElem::one(a.spec()).try_add(&c.try_mul(a)?)?;
    Ok(-&a.try_mul(&denom.invert()?)?)
}

/// `log(1 + p z) / p` in `Z/p^N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrismaticLog {
    pub value: RingElem,
    /// Digits lost to division by `k` in the series.
    pub loss: u32,
    /// Digits of `value` that are meaningful: `N - loss`.
    pub digits: u32,
    pub terms: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrismaticLogJson {
    pub z: String,
    pub value: String,
    pub modulus: String,
    pub loss: u32,
    pub terms: usize,
}

impl PrismaticLog {
    pub fn to_json(&self, z: &RingElem) -> PrismaticLogJson {
        PrismaticLogJson {
            z: z.to_string(),
            value: self.value.to_string(),
            modulus: format!("{}^{}", self.value.spec().p(), self.digits),
            loss: self.loss,
            terms: self.terms,
        }
    }
}

/// Smallest `K` for which every omitted term `p^(k-1) z^k / k`, `k > K`, is
/// divisible by `p^N`.
pub fn terms_needed(p: u64, digits: u32) -> usize {
    let mut k = 1usize;
    let mut last_bad = 0usize;
    // k - 1 - v_p(k) >= k - 1 - log_p(k), which grows without bound
    while (k as f64 - 1.0 - (k as f64).ln() / (p as f64).ln()) < digits as f64 + 1.0 {
        if tail_valuation(p, k) < digits as i64 {
            last_bad = k;
        }
        k += 1;
    }
    last_bad
}

fn tail_valuation(p: u64, k: usize) -> i64 {
    k as i64 - 1 - crate::base_rings::valuation(&BigInt::from(k), p).unwrap_or(0) as i64
}

/// `Σ_{k=1..K} (-1)^(k-1) p^(k-1) z^k / k`, the series of `log(1 + p z) / p`.
pub fn prismatic_log(z: &RingElem, terms: usize) -> Result<PrismaticLog> {
    let spec = z.spec();
    if spec.nvars() != 0 || !spec.is_finite() {
        return Err(Error::UnsupportedCarrier(format!("prismatic log lives on Z/p^N, not {}", spec.id())));
    }
    let n = spec.digits().expect("finite");
    let p = spec.p();
    let needed = terms_needed(p, n);
    if terms < needed {
        return Err(Error::InsufficientTerms(format!("{terms} terms given, p^{n} needs {needed}")));
    }
    let pb = BigInt::from(p);
    let mut loss = 0u32;
    let mut acc = RingElem::zero(spec);
    let zi = z.constant_term();
    for k in 1..=terms {
        let (vk, unit) = split_p(&BigInt::from(k), &pb);
        let shift = k as i64 - 1 - vk as i64;
        if shift < 0 {
            loss = loss.max((-shift) as u32);
        }
        let num = pb.pow(shift.max(0) as u32) * zi.pow(k as u32);
        let term = &RingElem::from_bigint(spec, &num) * &RingElem::from_bigint(spec, &unit).invert()?;
        acc = if k % 2 == 1 { &acc + &term } else { &acc - &term };
    }
    if loss >= n {
        return Err(Error::PrecisionExhausted(format!("division by p^{loss} in Z/p^{n}")));
    }
    let digits = n - loss;
    Ok(PrismaticLog { value: acc.truncate_digits(digits), loss, digits, terms })
}

fn split_p(k: &BigInt, p: &BigInt) -> (u32, BigInt) {
    let mut v = 0;
    let mut u = k.clone();
    while !u.is_zero() && u.is_multiple_of(p) {
        u /= p;
        v += 1;
    }
    (v, u)
}

/// `z` for the product `(1 + p z1)(1 + p z2) = 1 + p z`.
pub fn log_argument_product(z1: &RingElem, z2: &RingElem) -> Result<RingElem> {
    let p = BigInt::from(z1.spec().p());
    z1.try_add(z2)?.try_add(&z1.try_mul(z2)?.scale(&p))
}

/// `z'` with `(1 + p z)^e = 1 + p z'`.
pub fn log_argument_power(z: &RingElem, e: u32) -> RingElem {
    let p = BigInt::from(z.spec().p());
    let mut acc = RingElem::zero(z.spec());
    // ((1 + p z)^e - 1) / p = Σ_{i>=1} C(e, i) p^(i-1) z^i
    for i in 1..=e {
        let c = num_integer::binomial(BigInt::from(e), BigInt::from(i)) * p.pow(i - 1);
        acc = &acc + &z.pow(i as u64).scale(&c);
    }
    acc
}
