use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{valuation, Relations, RingSpec};
use crate::error::{Error, Result};

/// Exponent vector, ordered by total degree first and then
/// lexicographically with the first variable largest, so that
/// `1 < x < y < x^2 < x*y < y^2` in iteration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Monomial(m)
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divisible_by_exps(&self, g: &[u32]) -> bool {
        self.0.iter().zip(g).all(|(a, b)| a >= b)
    }

    pub fn render(&self, vars: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .zip(vars)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, v)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An element of a catalog carrier, always stored in normal form.
#[derive(Clone)]
pub struct RingElem {
    spec: Arc<RingSpec>,
    terms: BTreeMap<Monomial, BigInt>,
}

/// Result of an exact division by `p^k`: the quotient is only meaningful
/// modulo `p^(N - lost_digits)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divided {
    pub value: RingElem,
    pub lost_digits: u32,
}

impl PartialEq for RingElem {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec && self.terms == other.terms
    }
}

impl Eq for RingElem {}

impl PartialOrd for RingElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RingElem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.iter().cmp(other.terms.iter())
    }
}

impl std::hash::Hash for RingElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        for (m, c) in &self.terms {
            m.hash(state);
            c.hash(state);
        }
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.spec.id())
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                f.write_str(&m.render(self.spec.vars()))?;
            } else {
                write!(f, "{a}*{}", m.render(self.spec.vars()))?;
            }
        }
        Ok(())
    }
}

impl RingElem {
    pub fn zero(spec: &Arc<RingSpec>) -> Self {
        RingElem { spec: spec.clone(), terms: BTreeMap::new() }
    }

    pub fn one(spec: &Arc<RingSpec>) -> Self {
        RingElem::from_int(spec, 1)
    }

    pub fn from_int(spec: &Arc<RingSpec>, c: i64) -> Self {
        RingElem::from_bigint(spec, &BigInt::from(c))
    }

    pub fn from_bigint(spec: &Arc<RingSpec>, c: &BigInt) -> Self {
        RingElem::from_terms(spec, [(Monomial::one(spec.nvars()), c.clone())])
    }

    /// The `i`-th generator.
    pub fn var(spec: &Arc<RingSpec>, i: usize) -> Self {
        RingElem::from_terms(spec, [(Monomial::var(spec.nvars(), i), BigInt::one())])
    }

    pub fn var_named(spec: &Arc<RingSpec>, name: &str) -> Result<Self> {
        let i = spec.var_index(name).ok_or_else(|| Error::Parse(format!("no variable {name} in {}", spec.id())))?;
        Ok(RingElem::var(spec, i))
    }

    /// Build from arbitrary (monomial, coefficient) pairs, reducing to
    /// normal form. Repeated monomials are summed.
    pub fn from_terms<I>(spec: &Arc<RingSpec>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigInt)>,
    {
        let mut acc: HashMap<Vec<u32>, BigInt> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.0.len(), spec.nvars(), "monomial arity mismatch");
            *acc.entry(m.0).or_insert_with(BigInt::zero) += c;
        }
        RingElem { spec: spec.clone(), terms: normalize(spec, acc) }
    }

    pub fn spec(&self) -> &Arc<RingSpec> {
        &self.spec
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn constant_term(&self) -> BigInt {
        self.terms.get(&Monomial::one(self.spec.nvars())).cloned().unwrap_or_default()
    }

    /// Integer value of an element with no variable terms.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.terms.keys().all(|m| m.is_one()) {
            Some(self.constant_term())
        } else {
            None
        }
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    fn check_same(&self, other: &RingElem) -> Result<()> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::SpecMismatch(self.spec.id().into(), other.spec.id().into()))
        }
    }

    pub fn try_add(&self, other: &RingElem) -> Result<RingElem> {
        self.check_same(other)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn try_sub(&self, other: &RingElem) -> Result<RingElem> {
        self.check_same(other)?;
        Ok(self.add_unchecked(other, true))
    }

    pub fn try_mul(&self, other: &RingElem) -> Result<RingElem> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &RingElem, negate: bool) -> RingElem {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(BigInt::zero);
            if negate {
                *entry -= c;
            } else {
                *entry += c;
            }
            let reduced = self.spec.reduce_coeff(entry);
            if reduced.is_zero() {
                terms.remove(m);
            } else {
                *terms.get_mut(m).unwrap() = reduced;
            }
        }
        RingElem { spec: self.spec.clone(), terms }
    }

    fn mul_unchecked(&self, other: &RingElem) -> RingElem {
        if self.is_zero() || other.is_zero() {
            return RingElem::zero(&self.spec);
        }
        let gens = match self.spec.relations() {
            Relations::MonomialIdeal(g) => Some(g),
            _ => None,
        };
        let mut acc: HashMap<Vec<u32>, BigInt> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                if let Some(g) = gens {
                    if g.iter().any(|g| m.divisible_by_exps(g)) {
                        continue;
                    }
                }
                let prod = c1 * c2;
                match acc.get_mut(&m.0) {
                    Some(c) => *c += prod,
                    None => {
                        acc.insert(m.0, prod);
                    }
                }
            }
        }
        RingElem { spec: self.spec.clone(), terms: normalize(&self.spec, acc) }
    }

    pub fn scale(&self, c: &BigInt) -> RingElem {
        let terms = self.terms.iter().map(|(m, x)| (m.clone(), x * c));
        RingElem::from_terms(&self.spec, terms)
    }

    pub fn pow(&self, mut e: u64) -> RingElem {
        let mut base = self.clone();
        let mut acc = RingElem::one(&self.spec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
                if base.is_zero() {
                    return base;
                }
            }
        }
        acc
    }

    /// Smallest p-adic valuation among the coefficients (`None` for zero).
    pub fn valuation(&self) -> Option<u32> {
        self.terms.values().filter_map(|c| valuation(c, self.spec.p())).min()
    }

    /// Unit test by residue: in a local carrier `a` is a unit iff its
    /// constant term is nonzero mod `p`.
    pub fn is_unit(&self) -> Result<bool> {
        if !self.spec.is_local() {
            return Err(Error::UnsupportedQuery(format!(
                "unit detection needs a local carrier, {} is not local",
                self.spec.id()
            )));
        }
        Ok(!self.constant_term().is_multiple_of(&self.spec.prime()))
    }

    /// Inverse in a local carrier, by Newton iteration `b <- b (2 - a b)`
    /// seeded with the inverse of the constant term mod `p^N`.
    pub fn invert(&self) -> Result<RingElem> {
        if !self.is_unit()? {
            return Err(Error::NotAUnit(self.to_string()));
        }
        let m = self.spec.modulus().expect("local carriers are finite").clone();
        let c0 = self.constant_term();
        let inv0 = mod_inverse(&c0, &m).ok_or_else(|| Error::NotAUnit(self.to_string()))?;
        let mut b = RingElem::from_bigint(&self.spec, &inv0);
        let two = RingElem::from_int(&self.spec, 2);
        for _ in 0..128 {
            let ab = self.mul_unchecked(&b);
            if ab.is_one() {
                return Ok(b);
            }
            b = b.mul_unchecked(&two.add_unchecked(&ab, true));
        }
        Err(Error::NotAUnit(format!("Newton iteration did not converge for {self}")))
    }

    /// Divide every coefficient by `p^k`. Over `Z/p^N` the quotient is
    /// reported with `lost_digits = k` and reduced modulo `p^(N-k)`.
    pub fn div_exact_by_p(&self, k: u32) -> Result<Divided> {
        let pk = self.spec.prime().pow(k);
        let keep = match self.spec.digits() {
            Some(n) if k < n => Some(self.spec.prime().pow(n - k)),
            Some(_) => Some(BigInt::one()),
            None => None,
        };
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let (q, r) = c.div_rem(&pk);
            if !r.is_zero() {
                return Err(Error::NotDivisible(self.to_string(), k));
            }
            let q = match &keep {
                Some(keep) => q.mod_floor(keep),
                None => q,
            };
            terms.push((m.clone(), q));
        }
        Ok(Divided { value: RingElem::from_terms(&self.spec, terms), lost_digits: k })
    }

    /// Reduce coefficients modulo `p^digits` (a no-op when `digits >= N`).
    pub fn truncate_digits(&self, digits: u32) -> RingElem {
        let m = self.spec.prime().pow(digits);
        let terms = self.terms.iter().map(|(mon, c)| (mon.clone(), c.mod_floor(&m)));
        RingElem::from_terms(&self.spec, terms)
    }

    /// Equality modulo `p^digits`.
    pub fn eq_mod_p_power(&self, other: &RingElem, digits: u32) -> bool {
        self.spec == other.spec && self.add_unchecked(other, true).truncate_digits(digits).is_zero()
    }

    /// Reinterpret the coefficients (as integers) in another carrier with
    /// the same variables. This is the integral lift / reduction map; it
    /// is a ring homomorphism whenever `target`'s coefficients are a
    /// quotient of ours or we are the lift of `target`.
    pub fn coerce(&self, target: &Arc<RingSpec>) -> Result<RingElem> {
        if target.vars() != self.spec.vars() {
            return Err(Error::SpecMismatch(self.spec.id().into(), target.id().into()));
        }
        Ok(RingElem::from_terms(target, self.terms.iter().map(|(m, c)| (m.clone(), c.clone()))))
    }

    /// Exact quotient `self / d` when it exists in the carrier. Supports
    /// divisors that are constants or depend on a single variable over a
    /// monomial-ideal carrier; returns `None` otherwise or when no quotient
    /// exists.
    pub fn div_exact(&self, d: &RingElem) -> Option<RingElem> {
        if self.spec != d.spec || d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_integer() {
            let mut out = Vec::new();
            for (m, x) in &self.terms {
                let (q, r) = x.div_rem(&c);
                if !r.is_zero() {
                    return None;
                }
                out.push((m.clone(), q));
            }
            let q = RingElem::from_terms(&self.spec, out);
            return (q.mul_unchecked(d) == *self).then_some(q);
        }
        if matches!(self.spec.relations(), Relations::Monic(_)) {
            return None;
        }
        // single-variable divisor: group the dividend by the other variables
        let used: Vec<usize> = (0..self.spec.nvars()).filter(|&i| d.terms.keys().any(|m| m.0[i] > 0)).collect();
        if used.len() != 1 {
            return None;
        }
        let u = used[0];
        let bound = match self.spec.relations() {
            Relations::MonomialIdeal(gens) => {
                gens.iter().filter(|g| g.iter().enumerate().all(|(j, &e)| j == u || e == 0)).map(|g| g[u]).min()
            }
            _ => None,
        };
        let dcoef: BTreeMap<u32, BigInt> = d.terms.iter().map(|(m, c)| (m.0[u], c.clone())).collect();
        let (&low, lead) = dcoef.iter().next()?;
        let mut groups: BTreeMap<Vec<u32>, BTreeMap<u32, BigInt>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut rest = m.0.clone();
            let e = rest[u];
            rest[u] = 0;
            groups.entry(rest).or_default().insert(e, c.clone());
        }
        let mut out = Vec::new();
        for (rest, poly) in groups {
            let top = match bound {
                Some(b) => b,
                None => {
                    let maxe = *poly.keys().last().unwrap();
                    maxe + 1
                }
            };
            // q_j = (x_{j+low} - sum_{l<j} q_l d_{j+low-l}) / d_low
            let mut q: Vec<BigInt> = Vec::new();
            for j in 0..top.saturating_sub(low) {
                let mut num = poly.get(&(j + low)).cloned().unwrap_or_default();
                for (l, ql) in q.iter().enumerate() {
                    let idx = j + low - l as u32;
                    if let Some(dc) = dcoef.get(&idx) {
                        num -= ql * dc;
                    }
                }
                let (qq, r) = num.div_rem(lead);
                if !r.is_zero() {
                    return None;
                }
                q.push(qq);
            }
            for (j, c) in q.into_iter().enumerate() {
                let mut m = rest.clone();
                m[u] = j as u32;
                out.push((Monomial(m), c));
            }
        }
        let q = RingElem::from_terms(&self.spec, out);
        (q.mul_unchecked(d) == *self).then_some(q)
    }

    /// Include into a carrier whose variable list extends ours, with the
    /// same relations on the shared variables.
    pub fn embed(&self, target: &Arc<RingSpec>) -> Result<RingElem> {
        let n = self.spec.nvars();
        if target.nvars() < n || target.vars()[..n] != *self.spec.vars() {
            return Err(Error::SpecMismatch(self.spec.id().into(), target.id().into()));
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = m.0.clone();
            e.resize(target.nvars(), 0);
            (Monomial(e), c.clone())
        });
        Ok(RingElem::from_terms(target, terms))
    }

    /// Degree of the element in the given variable.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Coefficient of `var^e` when the element is viewed as a polynomial
    /// in `var`.
    pub fn coefficient_in(&self, var: usize, e: u32) -> RingElem {
        let terms = self.terms.iter().filter(|(m, _)| m.0[var] == e).map(|(m, c)| {
            let mut m = m.clone();
            m.0[var] = 0;
            (m, c.clone())
        });
        RingElem::from_terms(&self.spec, terms)
    }
}

impl<'a> Add<&'a RingElem> for &'a RingElem {
    type Output = RingElem;
    fn add(self, rhs: &'a RingElem) -> RingElem {
        self.try_add(rhs).expect("ring mismatch in +")
    }
}

impl<'a> Sub<&'a RingElem> for &'a RingElem {
    type Output = RingElem;
    fn sub(self, rhs: &'a RingElem) -> RingElem {
        self.try_sub(rhs).expect("ring mismatch in -")
    }
}

impl<'a> Mul<&'a RingElem> for &'a RingElem {
    type Output = RingElem;
    fn mul(self, rhs: &'a RingElem) -> RingElem {
        self.try_mul(rhs).expect("ring mismatch in *")
    }
}

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem::zero(&self.spec).add_unchecked(self, true)
    }
}

impl Add for RingElem {
    type Output = RingElem;
    fn add(self, rhs: RingElem) -> RingElem {
        &self + &rhs
    }
}

impl Sub for RingElem {
    type Output = RingElem;
    fn sub(self, rhs: RingElem) -> RingElem {
        &self - &rhs
    }
}

impl Mul for RingElem {
    type Output = RingElem;
    fn mul(self, rhs: RingElem) -> RingElem {
        &self * &rhs
    }
}

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        -&self
    }
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

fn normalize(spec: &RingSpec, acc: HashMap<Vec<u32>, BigInt>) -> BTreeMap<Monomial, BigInt> {
    match spec.relations() {
        Relations::None => collect_reduced(spec, acc.into_iter()),
        Relations::MonomialIdeal(gens) => collect_reduced(
            spec,
            acc.into_iter().filter(|(m, _)| !gens.iter().any(|g| m.iter().zip(g).all(|(a, b)| a >= b))),
        ),
        Relations::Monic(cs) => {
            let e = cs.len();
            let maxdeg = acc.keys().map(|m| m[0] as usize).max().unwrap_or(0);
            let mut dense = vec![BigInt::zero(); maxdeg.max(e) + 1];
            for (m, c) in acc {
                dense[m[0] as usize] += c;
            }
            // u^e = -(c_0 + ... + c_{e-1} u^{e-1})
            for deg in (e..dense.len()).rev() {
                let top = std::mem::take(&mut dense[deg]);
                let top = spec.reduce_coeff(&top);
                if top.is_zero() {
                    continue;
                }
                for (j, c) in cs.iter().enumerate() {
                    if !c.is_zero() {
                        dense[deg - e + j] -= &top * c;
                    }
                }
            }
            collect_reduced(spec, dense.into_iter().take(e).enumerate().map(|(d, c)| (vec![d as u32], c)))
        }
    }
}

fn collect_reduced(spec: &RingSpec, it: impl Iterator<Item = (Vec<u32>, BigInt)>) -> BTreeMap<Monomial, BigInt> {
    it.filter_map(|(m, c)| {
        let c = spec.reduce_coeff(&c);
        (!c.is_zero()).then_some((Monomial(m), c))
    })
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_rings::{Precision, Relations, RingSpec};

    fn z81() -> Arc<RingSpec> {
        RingSpec::z_mod_pn(Precision::for_prime(3).unwrap()).unwrap()
    }

    fn z9u3() -> Arc<RingSpec> {
        let prec = Precision::for_prime(3).unwrap().with_digits(2).unwrap();
        let base = RingSpec::z_mod_pn(prec).unwrap();
        RingSpec::poly(&base, &["u"], Relations::MonomialIdeal(vec![vec![3]])).unwrap()
    }

    #[test]
    fn add_wraps_mod_81() {
        let r = z81();
        let s = &RingElem::from_int(&r, 40) + &RingElem::from_int(&r, 41);
        assert!(s.is_zero());
    }

    #[test]
    fn xy_vanishes_in_square_zero_quotient() {
        let prec = Precision::new(2, 2, 3, 2, 8).unwrap();
        let base = RingSpec::z_mod_pn(prec).unwrap();
        let r = RingSpec::poly(&base, &["x", "y"], Relations::MonomialIdeal(vec![vec![2, 0], vec![1, 1], vec![0, 2]]))
            .unwrap();
        let x = RingElem::var(&r, 0);
        let y = RingElem::var(&r, 1);
        assert!((&x * &y).is_zero());
    }

    #[test]
    fn one_plus_u_times_one_minus_u() {
        let r = z9u3();
        let u = RingElem::var(&r, 0);
        let one = RingElem::one(&r);
        let prod = &(&one + &u) * &(&one - &u);
        assert_eq!(prod, &one - &u.pow(2));
    }

    #[test]
    fn units_in_z81() {
        let r = z81();
        assert!(!RingElem::from_int(&r, 3).is_unit().unwrap());
        let two = RingElem::from_int(&r, 2);
        assert!(two.is_unit().unwrap());
        assert_eq!(two.invert().unwrap(), RingElem::from_int(&r, 41));
        assert!(matches!(RingElem::from_int(&r, 3).invert(), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn geometric_series_inverse() {
        let r = z9u3();
        let u = RingElem::var(&r, 0);
        let one = RingElem::one(&r);
        let a = &one + &u;
        // oracle: 1/(1+u) = sum (-u)^k, truncated since u^3 = 0
        let mut oracle = RingElem::zero(&r);
        for k in 0..3 {
            oracle = &oracle + &(-&u).pow(k);
        }
        assert_eq!(a.invert().unwrap(), oracle);
        assert!((&a * &oracle).is_one());
    }

    #[test]
    fn non_local_unit_query_is_unsupported() {
        let prec = Precision::for_prime(3).unwrap();
        let z = RingSpec::integers(prec).unwrap();
        assert!(matches!(RingElem::one(&z).is_unit(), Err(Error::UnsupportedQuery(_))));
        let base = RingSpec::z_mod_pn(prec).unwrap();
        let free = RingSpec::poly(&base, &["x"], Relations::None).unwrap();
        assert!(matches!(RingElem::one(&free).is_unit(), Err(Error::UnsupportedQuery(_))));
    }

    #[test]
    fn div_exact_by_p_cases() {
        let r = z81();
        let d = RingElem::from_int(&r, 6).div_exact_by_p(1).unwrap();
        assert_eq!(d.value, RingElem::from_int(&r, 2));
        assert_eq!(d.lost_digits, 1);
        let z = RingElem::zero(&r).div_exact_by_p(3).unwrap();
        assert!(z.value.is_zero());
        assert_eq!(z.lost_digits, 3);
        assert!(matches!(RingElem::from_int(&r, 5).div_exact_by_p(1), Err(Error::NotDivisible(..))));

        // p x + p^2 y in Z/p^4[x,y]
        let prec = Precision::for_prime(3).unwrap();
        let base = RingSpec::z_mod_pn(prec).unwrap();
        let s = RingSpec::poly(&base, &["x", "y"], Relations::None).unwrap();
        let x = RingElem::var(&s, 0);
        let y = RingElem::var(&s, 1);
        let a = &x.scale(&3.into()) + &y.scale(&9.into());
        let d = a.div_exact_by_p(1).unwrap();
        assert_eq!(d.value, &x + &y.scale(&3.into()));
    }

    #[test]
    fn monic_reduction() {
        let prec = Precision::for_prime(2).unwrap();
        let base = RingSpec::z_mod_pn(prec).unwrap();
        let r = RingSpec::poly(&base, &["pi"], Relations::Monic(vec![(-2).into(), 0.into()])).unwrap();
        let pi = RingElem::var(&r, 0);
        assert_eq!(pi.pow(2), RingElem::from_int(&r, 2));
        assert_eq!(pi.pow(3), pi.scale(&2.into()));
        assert!(pi.pow(8).is_zero());
        assert!(!pi.is_unit().unwrap());
    }

    #[test]
    fn exact_division_by_univariate() {
        let prec = Precision::for_prime(2).unwrap();
        let z = RingSpec::integers(prec).unwrap();
        let r = RingSpec::power_series(&z, &["u"], 6).unwrap();
        let u = RingElem::var(&r, 0);
        let e = &u.pow(2) - &RingElem::from_int(&r, 2);
        let q = &u + &RingElem::from_int(&r, 3);
        let x = &e * &q;
        assert_eq!(x.div_exact(&e), Some(q));
        assert_eq!(u.div_exact(&e), None);
        assert_eq!(e.div_exact(&e), Some(RingElem::one(&r)));
    }

    #[test]
    fn monomial_order_is_graded() {
        let mut ms = [Monomial(vec![0, 2]),
            Monomial(vec![1, 0]),
            Monomial(vec![2, 0]),
            Monomial(vec![0, 0]),
            Monomial(vec![1, 1]),
            Monomial(vec![0, 1])];
        ms.sort();
        let rendered: Vec<String> = ms.iter().map(|m| m.render(&["x".into(), "y".into()])).collect();
        assert_eq!(rendered, ["1", "x", "y", "x^2", "x*y", "y^2"]);
    }
}
