use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::base_rings::valuation;
use crate::error::{Error, Result};
use crate::prism::Eisenstein;

/// A polynomial in the parameter `c` with rational coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CPoly(BTreeMap<u32, BigRational>);

impl CPoly {
    pub fn zero() -> Self {
        CPoly(BTreeMap::new())
    }

    pub fn constant(q: BigRational) -> Self {
        CPoly::monomial(q, 0)
    }

    /// `q c^k`.
    pub fn monomial(q: BigRational, k: u32) -> Self {
        let mut m = BTreeMap::new();
        if !q.is_zero() {
            m.insert(k, q);
        }
        CPoly(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, k: u32) -> BigRational {
        self.0.get(&k).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_assign(&mut self, other: &CPoly) {
        for (k, q) in &other.0 {
            let e = self.0.entry(*k).or_insert_with(BigRational::zero);
            *e += q;
            if e.is_zero() {
                self.0.remove(k);
            }
        }
    }

    fn mul(&self, other: &CPoly) -> CPoly {
        let mut out = CPoly::zero();
        for (i, a) in &self.0 {
            for (j, b) in &other.0 {
                out.add_assign(&CPoly::monomial(a * b, i + j));
            }
        }
        out
    }

    fn neg(&self) -> CPoly {
        CPoly(self.0.iter().map(|(k, q)| (*k, -q)).collect())
    }
}

impl fmt::Display for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (idx, (k, q)) in self.0.iter().enumerate() {
            let sign = if q.is_negative() { "-" } else { "+" };
            if idx == 0 {
                if q.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = q.abs();
            match (*k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => {}
                (_, false) => write!(f, "{a}*")?,
            }
            match *k {
                0 => {}
                1 => write!(f, "c")?,
                k => write!(f, "c^{k}")?,
            }
        }
        Ok(())
    }
}

/// A power series in `x` (and optionally `y`) over `Q[c]`, truncated above
/// total degree `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupLawSeries {
    bivariate: bool,
    order: u32,
    terms: BTreeMap<(u32, u32), CPoly>,
}

impl GroupLawSeries {
    pub fn zero(bivariate: bool, order: u32) -> Self {
        GroupLawSeries { bivariate, order, terms: BTreeMap::new() }
    }

    pub fn x(bivariate: bool, order: u32) -> Self {
        let mut s = GroupLawSeries::zero(bivariate, order);
        s.insert((1, 0), CPoly::constant(BigRational::one()));
        s
    }

    pub fn y(order: u32) -> Self {
        let mut s = GroupLawSeries::zero(true, order);
        s.insert((0, 1), CPoly::constant(BigRational::one()));
        s
    }

    /// The parameter `c` as a constant series.
    pub fn c(bivariate: bool, order: u32) -> Self {
        let mut s = GroupLawSeries::zero(bivariate, order);
        s.insert((0, 0), CPoly::monomial(BigRational::one(), 1));
        s
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_bivariate(&self) -> bool {
        self.bivariate
    }

    pub fn coeff(&self, i: u32, j: u32) -> CPoly {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    fn insert(&mut self, e: (u32, u32), q: CPoly) {
        if e.0 + e.1 > self.order {
            return;
        }
        let entry = self.terms.entry(e).or_default();
        entry.add_assign(&q);
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    fn check(&self, other: &GroupLawSeries) -> Result<()> {
        if self.bivariate != other.bivariate || self.order != other.order {
            return Err(Error::SpecMismatch(self.shape(), other.shape()));
        }
        Ok(())
    }

    fn shape(&self) -> String {
        let vars = if self.bivariate { "x, y" } else { "x" };
        format!("Q[c][[{vars}]]+O({})", self.order + 1)
    }

    pub fn add(&self, other: &GroupLawSeries) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, q) in &other.terms {
            out.insert(*e, q.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for q in out.terms.values_mut() {
            *q = q.neg();
        }
        out
    }

    pub fn mul(&self, other: &GroupLawSeries) -> Result<Self> {
        self.check(other)?;
        let mut out = GroupLawSeries::zero(self.bivariate, self.order);
        for ((i, j), a) in &self.terms {
            for ((k, l), b) in &other.terms {
                if i + j + k + l <= self.order {
                    out.insert((i + k, j + l), a.mul(b));
                }
            }
        }
        Ok(out)
    }

    /// As a series in `x, y` (identity if already bivariate).
    pub fn to_bivariate(&self) -> Self {
        GroupLawSeries { bivariate: true, order: self.order, terms: self.terms.clone() }
    }

    /// `self(inner)` for a univariate `self` and `inner` without constant
    /// term.
    pub fn compose(&self, inner: &GroupLawSeries) -> Result<Self> {
        if self.bivariate || self.order != inner.order {
            return Err(Error::SpecMismatch(self.shape(), inner.shape()));
        }
        if !inner.coeff(0, 0).is_zero() {
            return Err(Error::UnsupportedQuery("substituted series has a constant term".into()));
        }
        let mut out = GroupLawSeries::zero(inner.bivariate, self.order);
        let mut power = GroupLawSeries::zero(inner.bivariate, self.order);
        power.insert((0, 0), CPoly::constant(BigRational::one()));
        for n in 0..=self.order {
            let a = self.coeff(n, 0);
            if !a.is_zero() {
                for (e, q) in &power.terms {
                    out.insert(*e, q.mul(&a));
                }
            }
            power = power.mul(inner)?;
        }
        Ok(out)
    }

    /// `a * b = a + b + c a b`.
    pub fn star(&self, other: &GroupLawSeries) -> Result<Self> {
        let c = GroupLawSeries::c(self.bivariate, self.order);
        self.add(other)?.add(&c.mul(&self.mul(other)?)?)
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            order: self.order,
            bivariate: self.bivariate,
            terms: self.terms.iter().map(|((i, j), q)| (*i, *j, q.to_string())).collect(),
        }
    }
}

impl fmt::Display for GroupLawSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for ((i, j), q) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({q})")?;
            for (v, e) in [("x", *i), ("y", *j)] {
                match e {
                    0 => {}
                    1 => write!(f, "*{v}")?,
                    e => write!(f, "*{v}^{e}")?,
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(deg {})", self.order + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub order: u32,
    pub bivariate: bool,
    /// `(i, j, coefficient)` for the monomial `x^i y^j`.
    pub terms: Vec<(u32, u32, String)>,
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `(e^(c x) - 1) / c = Σ_{n>=1} c^(n-1) x^n / n!`.
pub fn exp_g(order: u32) -> GroupLawSeries {
    let mut s = GroupLawSeries::zero(false, order);
    for n in 1..=order {
        let q = BigRational::new(BigInt::one(), factorial(n));
        s.insert((n, 0), CPoly::monomial(q, n - 1));
    }
    s
}

/// `log(1 + c a) / c = Σ_{n>=1} (-c)^(n-1) a^n / n`.
pub fn log_g(order: u32) -> GroupLawSeries {
    let mut s = GroupLawSeries::zero(false, order);
    for n in 1..=order {
        let sign = if n % 2 == 1 { BigInt::one() } else { -BigInt::one() };
        s.insert((n, 0), CPoly::monomial(BigRational::new(sign, BigInt::from(n)), n - 1));
    }
    s
}

/// Valuations of the exponential and logarithm coefficients once `c` is
/// specialised to `E'(π)`, normalised by `v(p) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralityProfile {
    pub p: u64,
    pub degree: usize,
    /// `v(E'(π))`.
    pub derivative_valuation: Rational64,
    pub derivative_is_unit: bool,
    /// `v(E'(π)) = 1/(p-1)`: verdicts are per term only.
    pub borderline: bool,
    pub rows: Vec<IntegralityRow>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralityRow {
    pub n: u32,
    /// `v(E'(π)^(n-1) / n!)`.
    pub exp_valuation: Rational64,
    /// `v(E'(π)^(n-1) / n)`.
    pub log_valuation: Rational64,
}

impl IntegralityRow {
    pub fn exp_integral(&self) -> bool {
        self.exp_valuation >= Rational64::zero()
    }

    pub fn log_integral(&self) -> bool {
        self.log_valuation >= Rational64::zero()
    }
}

impl IntegralityProfile {
    pub fn all_integral(&self) -> bool {
        self.rows.iter().all(|r| r.exp_integral() && r.log_integral())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.p,
            "degree": self.degree,
            "derivative_valuation": self.derivative_valuation.to_string(),
            "derivative_is_unit": self.derivative_is_unit,
            "borderline": self.borderline,
            "all_integral": self.all_integral(),
            "rows": self.rows.iter().map(|r| serde_json::json!({
                "n": r.n,
                "exp_valuation": r.exp_valuation.to_string(),
                "exp_integral": r.exp_integral(),
                "log_valuation": r.log_valuation.to_string(),
                "log_integral": r.log_integral(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn vp(x: &BigInt, p: u64) -> i64 {
    valuation(x, p).map(|v| v as i64).unwrap_or(i64::MAX / 4)
}

/// Term-by-term integrality of the group law isomorphisms for the
/// Eisenstein polynomial `e`, through order `order`.
pub fn integrality_profile(e: &Eisenstein, p: u64, order: u32) -> Result<IntegralityProfile> {
    e.check(p)?;
    let deg = e.degree();
    if deg == 1 {
        return Err(Error::UnramifiedInput(format!("E = {e}")));
    }
    // v(Σ b_j π^j) = min_j (e v_p(b_j) + j) / e for j < e, all residues distinct
    let der = e.derivative();
    let num = der
        .iter()
        .enumerate()
        .filter(|(_, b)| !b.is_zero())
        .map(|(j, b)| deg as i64 * vp(b, p) + j as i64)
        .min()
        .expect("E' has a nonzero leading term");
    let v = Rational64::new(num, deg as i64);
    let mut rows = Vec::with_capacity(order as usize);
    for n in 1..=order {
        let base = v * Rational64::from_integer(n as i64 - 1);
        rows.push(IntegralityRow {
            n,
            exp_valuation: base - Rational64::from_integer(vp(&factorial(n), p)),
            log_valuation: base - Rational64::from_integer(vp(&BigInt::from(n), p)),
        });
    }
    Ok(IntegralityProfile {
        p,
        degree: deg,
        derivative_valuation: v,
        derivative_is_unit: v.is_zero(),
        borderline: v == Rational64::new(1, p as i64 - 1),
        rows,
    })
}
