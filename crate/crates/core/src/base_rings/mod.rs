//! Exact normal-form arithmetic in a closed catalog of truncated coefficient
//! rings.
//!
//! Every carrier is a quotient `C[x_1..x_k] / I` where the coefficient ring
//! `C` is `Z` or `Z/p^N`, and the ideal `I` is either a monomial ideal or a
//! single monic univariate relation. Both admit a unique normal form, so
//! equality of elements is decidable by comparing term maps.

mod elem;
mod hom;
mod linalg;
mod parse;
mod sample;
mod serial;

pub use elem::{Divided, Monomial, RingElem};
pub use hom::RingHom;
pub use linalg::solve_mod_prime_power;
pub use parse::{parse_polynomial, parse_spec};
pub use serial::{ElemJson, TermJson};

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncation parameters shared by every computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Precision {
    pub p: u64,
    /// `N`: coefficients of finite carriers live in `Z/p^N`.
    pub padic_digits: u32,
    /// `n`: default Witt length.
    pub witt_length: usize,
    /// `D`: depth of free delta-variables.
    pub delta_depth: usize,
    /// `M`: power series are truncated above total degree `M`.
    pub series_order: u32,
}

impl Precision {
    pub fn new(p: u64, padic_digits: u32, witt_length: usize, delta_depth: usize, series_order: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::BadPrecision(format!("{p} is not prime")));
        }
        if padic_digits == 0 || witt_length == 0 || delta_depth == 0 || series_order == 0 {
            return Err(Error::BadPrecision("N, n, D and M must all be at least 1".into()));
        }
        Ok(Precision { p, padic_digits, witt_length, delta_depth, series_order })
    }

    /// Defaults `N = 4, n = 3, D = 2, M = 8` for the given prime.
    pub fn for_prime(p: u64) -> Result<Self> {
        Precision::new(p, 4, 3, 2, 8)
    }

    pub fn with_digits(mut self, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadPrecision("N must be at least 1".into()));
        }
        self.padic_digits = n;
        Ok(self)
    }

    pub fn with_series_order(mut self, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::BadPrecision("M must be at least 1".into()));
        }
        self.series_order = m;
        Ok(self)
    }

    pub fn prime(&self) -> BigInt {
        BigInt::from(self.p)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision { p: 2, padic_digits: 4, witt_length: 3, delta_depth: 2, series_order: 8 }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(x: &BigInt, p: u64) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v = 0;
    let mut x = x.clone();
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        x = q;
        v += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingKind {
    Integers,
    IntegersModPN,
    PrimeField,
    PolyQuotient,
    PowerSeriesTrunc,
}

/// Catalog relation sets. Anything outside this list has no normal form
/// implementation and is rejected by [`RingSpec::new`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Relations {
    None,
    /// Generators of a monomial ideal, as exponent vectors.
    MonomialIdeal(Vec<Vec<u32>>),
    /// `u^e + c_{e-1} u^{e-1} + ... + c_0` in a single variable, stored as
    /// `[c_0, ..., c_{e-1}]`.
    Monic(Vec<BigInt>),
}

/// A presented carrier ring.
#[derive(Debug, Clone)]
pub struct RingSpec {
    kind: RingKind,
    p: u64,
    /// `None` for `Z`, otherwise `N` with coefficients in `Z/p^N`.
    digits: Option<u32>,
    modulus: Option<BigInt>,
    vars: Vec<String>,
    relations: Relations,
    precision: Precision,
    id: String,
}

impl PartialEq for RingSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.id == other.id
    }
}

impl Eq for RingSpec {}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}

impl RingSpec {
    /// Build a catalog carrier. `base` is required for the composite kinds
    /// and must itself be `Z`, `Z/p^N` or `F_p`.
    pub fn new(
        kind: RingKind,
        base: Option<&RingSpec>,
        vars: Vec<String>,
        relations: Relations,
        precision: Precision,
    ) -> Result<Arc<RingSpec>> {
        Precision::new(
            precision.p,
            precision.padic_digits,
            precision.witt_length,
            precision.delta_depth,
            precision.series_order,
        )?;
        let p = precision.p;
        let (digits, vars, relations) = match kind {
            RingKind::Integers | RingKind::IntegersModPN | RingKind::PrimeField => {
                if !vars.is_empty() || relations != Relations::None {
                    return Err(Error::UnsupportedRelationSet("scalar rings take no variables or relations".into()));
                }
                let digits = match kind {
                    RingKind::Integers => None,
                    RingKind::IntegersModPN => Some(precision.padic_digits),
                    _ => Some(1),
                };
                (digits, vars, relations)
            }
            RingKind::PolyQuotient | RingKind::PowerSeriesTrunc => {
                let base = base.ok_or_else(|| Error::UnsupportedRelationSet("composite ring needs a base".into()))?;
                if !base.vars.is_empty() {
                    return Err(Error::UnsupportedRelationSet("composite rings nest only over Z, Z/p^N or F_p".into()));
                }
                if base.p != p {
                    return Err(Error::BadPrecision(format!("base ring has p = {}, precision has p = {p}", base.p)));
                }
                check_var_names(&vars)?;
                let relations = if kind == RingKind::PowerSeriesTrunc {
                    if relations != Relations::None {
                        return Err(Error::UnsupportedRelationSet(
                            "power series carriers are truncated by total degree only".into(),
                        ));
                    }
                    Relations::MonomialIdeal(monomials_of_degree(vars.len(), precision.series_order + 1))
                } else {
                    canonical_relations(relations, vars.len(), base.modulus.as_ref())?
                };
                (base.digits, vars, relations)
            }
        };
        let modulus = digits.map(|d| BigInt::from(p).pow(d));
        let mut spec = RingSpec { kind, p, digits, modulus, vars, relations, precision, id: String::new() };
        spec.id = spec.render_id();
        Ok(Arc::new(spec))
    }

    pub fn integers(precision: Precision) -> Result<Arc<RingSpec>> {
        RingSpec::new(RingKind::Integers, None, vec![], Relations::None, precision)
    }

    /// `Z/p^N` with `N` taken from the precision.
    pub fn z_mod_pn(precision: Precision) -> Result<Arc<RingSpec>> {
        RingSpec::new(RingKind::IntegersModPN, None, vec![], Relations::None, precision)
    }

    pub fn prime_field(precision: Precision) -> Result<Arc<RingSpec>> {
        RingSpec::new(RingKind::PrimeField, None, vec![], Relations::None, precision)
    }

    pub fn poly(base: &RingSpec, vars: &[&str], relations: Relations) -> Result<Arc<RingSpec>> {
        RingSpec::new(
            RingKind::PolyQuotient,
            Some(base),
            vars.iter().map(|s| s.to_string()).collect(),
            relations,
            base.precision,
        )
    }

    /// Truncated power series in `vars` over `base`, killing total degree
    /// above `order`.
    pub fn power_series(base: &RingSpec, vars: &[&str], order: u32) -> Result<Arc<RingSpec>> {
        let precision = base.precision.with_series_order(order)?;
        RingSpec::new(
            RingKind::PowerSeriesTrunc,
            Some(base),
            vars.iter().map(|s| s.to_string()).collect(),
            Relations::None,
            precision,
        )
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn prime(&self) -> BigInt {
        BigInt::from(self.p)
    }

    /// `N` for `Z/p^N`-based carriers, `None` over `Z`.
    pub fn digits(&self) -> Option<u32> {
        self.digits
    }

    pub fn modulus(&self) -> Option<&BigInt> {
        self.modulus.as_ref()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn relations(&self) -> &Relations {
        &self.relations
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn series_order(&self) -> Option<u32> {
        (self.kind == RingKind::PowerSeriesTrunc).then_some(self.precision.series_order)
    }

    /// True when every coefficient is killed by `p`.
    pub fn is_char_p(&self) -> bool {
        self.digits == Some(1)
    }

    /// Local carriers: finite coefficients and every variable nilpotent.
    pub fn is_local(&self) -> bool {
        if self.digits.is_none() {
            return false;
        }
        match &self.relations {
            Relations::None => self.vars.is_empty(),
            Relations::MonomialIdeal(gens) => self.pure_power_bounds(gens).is_some(),
            Relations::Monic(cs) => {
                let p = self.prime();
                cs.iter().all(|c| c.is_multiple_of(&p))
            }
        }
    }

    /// Finitely many elements: finite coefficients and a finite standard
    /// monomial basis.
    pub fn is_finite(&self) -> bool {
        self.digits.is_some() && self.standard_monomials().is_some()
    }

    /// Standard monomials (the `C`-module basis of the carrier), when finite.
    pub fn standard_monomials(&self) -> Option<Vec<Monomial>> {
        let n = self.vars.len();
        match &self.relations {
            Relations::None => (n == 0).then(|| vec![Monomial::one(0)]),
            Relations::Monic(cs) => Some((0..cs.len() as u32).map(|e| Monomial(vec![e])).collect()),
            Relations::MonomialIdeal(gens) => {
                let bounds = self.pure_power_bounds(gens)?;
                let mut out = Vec::new();
                let mut cur = vec![0u32; n];
                loop {
                    let m = Monomial(cur.clone());
                    if !gens.iter().any(|g| m.divisible_by_exps(g)) {
                        out.push(m);
                    }
                    let mut i = 0;
                    loop {
                        if i == n {
                            out.sort();
                            return Some(out);
                        }
                        cur[i] += 1;
                        if cur[i] < bounds[i] {
                            break;
                        }
                        cur[i] = 0;
                        i += 1;
                    }
                }
            }
        }
    }

    fn pure_power_bounds(&self, gens: &[Vec<u32>]) -> Option<Vec<u32>> {
        (0..self.vars.len())
            .map(|i| gens.iter().filter(|g| g.iter().enumerate().all(|(j, &e)| j == i || e == 0)).map(|g| g[i]).min())
            .collect()
    }

    /// Number of elements, if finite.
    pub fn cardinality(&self) -> Option<u128> {
        let basis = self.standard_monomials()?;
        let m = self.modulus.as_ref()?;
        let m: u128 = m.try_into().ok()?;
        m.checked_pow(basis.len() as u32)
    }

    /// All elements in a fixed deterministic order.
    pub fn elements(self: &Arc<Self>, budget: u128) -> Result<Vec<RingElem>> {
        let card = self.cardinality().ok_or_else(|| Error::UnsupportedQuery(format!("{} is not finite", self.id)))?;
        if card > budget {
            return Err(Error::EnumerationBudgetExceeded { needed: card, budget });
        }
        let basis = self.standard_monomials().expect("finite");
        let m: u64 = self.modulus.as_ref().unwrap().try_into().unwrap();
        let mut out = Vec::with_capacity(card as usize);
        let mut digits = vec![0u64; basis.len()];
        loop {
            let terms = basis.iter().zip(&digits).filter(|(_, &c)| c != 0).map(|(b, &c)| (b.clone(), BigInt::from(c)));
            out.push(RingElem::from_terms(self, terms));
            let mut i = 0;
            loop {
                if i == digits.len() {
                    return Ok(out);
                }
                digits[i] += 1;
                if digits[i] < m {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }

    /// Same variables and relations over `Z`. Every catalog carrier has such
    /// a p-torsion-free lift, which is where divisions by `p` are exact.
    pub fn integral_lift(self: &Arc<Self>) -> Arc<RingSpec> {
        if self.digits.is_none() {
            return self.clone();
        }
        let mut spec = (**self).clone();
        spec.digits = None;
        spec.modulus = None;
        spec.kind = match self.kind {
            RingKind::IntegersModPN | RingKind::PrimeField => RingKind::Integers,
            k => k,
        };
        spec.id = spec.render_id();
        Arc::new(spec)
    }

    /// Same carrier with coefficients in `Z/p^digits`.
    pub fn with_digits(self: &Arc<Self>, digits: u32) -> Result<Arc<RingSpec>> {
        if digits == 0 {
            return Err(Error::BadPrecision("N must be at least 1".into()));
        }
        let mut spec = (**self).clone();
        spec.digits = Some(digits);
        spec.modulus = Some(self.prime().pow(digits));
        spec.precision.padic_digits = digits;
        spec.kind = match self.kind {
            RingKind::Integers | RingKind::IntegersModPN | RingKind::PrimeField => {
                if digits == 1 {
                    RingKind::PrimeField
                } else {
                    RingKind::IntegersModPN
                }
            }
            k => k,
        };
        if let Relations::Monic(cs) = &spec.relations {
            spec.relations = Relations::Monic(cs.iter().map(|c| balanced(c, spec.modulus.as_ref())).collect());
        }
        spec.id = spec.render_id();
        Ok(Arc::new(spec))
    }

    /// Append free polynomial variables (no new relations).
    pub fn with_extra_vars(self: &Arc<Self>, names: &[String]) -> Result<Arc<RingSpec>> {
        let relations = match &self.relations {
            Relations::None => Relations::None,
            Relations::MonomialIdeal(gens) => Relations::MonomialIdeal(
                gens.iter()
                    .map(|g| {
                        let mut g = g.clone();
                        g.resize(self.vars.len() + names.len(), 0);
                        g
                    })
                    .collect(),
            ),
            Relations::Monic(_) => {
                return Err(Error::UnsupportedRelationSet("cannot adjoin variables to a monic quotient".into()))
            }
        };
        let mut vars = self.vars.clone();
        vars.extend(names.iter().cloned());
        check_var_names(&vars)?;
        let base = self.scalar_base()?;
        RingSpec::new(RingKind::PolyQuotient, Some(&base), vars, relations, self.precision)
    }

    /// The coefficient ring as a spec of its own.
    pub fn scalar_base(self: &Arc<Self>) -> Result<Arc<RingSpec>> {
        let prec = self.precision;
        match self.digits {
            None => RingSpec::integers(prec),
            Some(1) => RingSpec::prime_field(prec),
            Some(d) => RingSpec::z_mod_pn(prec.with_digits(d)?),
        }
    }

    pub(crate) fn reduce_coeff(&self, c: &BigInt) -> BigInt {
        match &self.modulus {
            Some(m) => c.mod_floor(m),
            None => c.clone(),
        }
    }

    fn render_id(&self) -> String {
        let base = match self.digits {
            None => "Z".to_string(),
            Some(1) => format!("F_{}", self.p),
            Some(_) => format!("Z/{}", self.modulus.as_ref().unwrap()),
        };
        if self.vars.is_empty() {
            return base;
        }
        let vars = self.vars.join(",");
        match (&self.kind, &self.relations) {
            (RingKind::PowerSeriesTrunc, _) => {
                format!("{base}[[{vars}]]+O({})", self.precision.series_order + 1)
            }
            (_, Relations::None) => format!("{base}[{vars}]"),
            (_, Relations::MonomialIdeal(gens)) => {
                let gs: Vec<String> = gens.iter().map(|g| Monomial(g.clone()).render(&self.vars)).collect();
                format!("{base}[{vars}]/({})", gs.join(","))
            }
            (_, Relations::Monic(cs)) => {
                let mut full = cs.clone();
                full.push(BigInt::one());
                format!("{base}[{vars}]/({})", render_univariate(&full, &self.vars[0]))
            }
        }
    }
}

fn check_var_names(vars: &[String]) -> Result<()> {
    for (i, v) in vars.iter().enumerate() {
        let ok = !v.is_empty()
            && v.chars().next().map(|c| c.is_ascii_alphabetic()).unwrap_or(false)
            && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(Error::UnsupportedRelationSet(format!("bad variable name {v:?}")));
        }
        if vars[..i].contains(v) {
            return Err(Error::UnsupportedRelationSet(format!("duplicate variable {v}")));
        }
    }
    Ok(())
}

fn canonical_relations(rel: Relations, nvars: usize, modulus: Option<&BigInt>) -> Result<Relations> {
    match rel {
        Relations::None => Ok(Relations::None),
        Relations::MonomialIdeal(gens) => {
            if gens.is_empty() {
                return Ok(Relations::None);
            }
            for g in &gens {
                if g.len() != nvars {
                    return Err(Error::UnsupportedRelationSet(
                        "monomial generator has the wrong number of exponents".into(),
                    ));
                }
                if g.iter().all(|&e| e == 0) {
                    return Err(Error::UnsupportedRelationSet("the unit ideal is not a catalog relation".into()));
                }
            }
            // keep minimal generators only, in a canonical order
            let mut mins: Vec<Vec<u32>> = Vec::new();
            for g in &gens {
                let redundant =
                    gens.iter().any(|h| h != g && Monomial(g.clone()).divisible_by_exps(h)) || mins.contains(g);
                if !redundant {
                    mins.push(g.clone());
                }
            }
            let mut ms: Vec<Monomial> = mins.into_iter().map(Monomial).collect();
            ms.sort();
            Ok(Relations::MonomialIdeal(ms.into_iter().map(|m| m.0).collect()))
        }
        Relations::Monic(cs) => {
            if nvars != 1 {
                return Err(Error::UnsupportedRelationSet("monic relations are univariate only".into()));
            }
            if cs.is_empty() {
                return Err(Error::UnsupportedRelationSet("degree-0 monic relation gives the zero ring".into()));
            }
            Ok(Relations::Monic(cs.iter().map(|c| balanced(c, modulus)).collect()))
        }
    }
}

/// Representative in `(-m/2, m/2]`.
fn balanced(c: &BigInt, modulus: Option<&BigInt>) -> BigInt {
    match modulus {
        None => c.clone(),
        Some(m) => {
            let r = c.mod_floor(m);
            if (&r * 2u32) > *m {
                r - m
            } else {
                r
            }
        }
    }
}

fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Vec<u32>> {
    fn go(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            go(i + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    go(0, degree, &mut vec![0; nvars], &mut out);
    out
}

/// Render `coeffs[0] + coeffs[1] u + ...` highest degree first.
pub(crate) fn render_univariate(coeffs: &[BigInt], var: &str) -> String {
    let mut s = String::new();
    for (deg, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push(if neg { '-' } else { '+' });
        }
        let mon = match deg {
            0 => String::new(),
            1 => var.to_string(),
            d => format!("{var}^{d}"),
        };
        if mon.is_empty() {
            s.push_str(&a.to_string());
        } else if a.is_one() {
            s.push_str(&mon);
        } else {
            s.push_str(&format!("{a}*{mon}"));
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_rejects_composites_and_zeros() {
        assert!(matches!(Precision::new(4, 1, 1, 1, 1), Err(Error::BadPrecision(_))));
        assert!(matches!(Precision::new(3, 0, 1, 1, 1), Err(Error::BadPrecision(_))));
        assert!(Precision::new(5, 3, 2, 1, 4).is_ok());
    }

    #[test]
    fn z_mod_81() {
        let prec = Precision::for_prime(3).unwrap();
        let r = RingSpec::z_mod_pn(prec).unwrap();
        assert_eq!(r.id(), "Z/81");
        assert_eq!(r.cardinality(), Some(81));
        assert!(r.is_local());
    }

    #[test]
    fn square_of_maximal_ideal() {
        let prec = Precision::new(2, 2, 3, 2, 8).unwrap();
        let base = RingSpec::z_mod_pn(prec).unwrap();
        let r = RingSpec::poly(&base, &["x", "y"], Relations::MonomialIdeal(vec![vec![2, 0], vec![1, 1], vec![0, 2]]))
            .unwrap();
        assert_eq!(r.id(), "Z/4[x,y]/(x^2,x*y,y^2)");
        assert_eq!(r.standard_monomials().unwrap().len(), 3);
        assert_eq!(r.cardinality(), Some(64));
    }

    #[test]
    fn redundant_generators_are_dropped() {
        let prec = Precision::for_prime(2).unwrap();
        let base = RingSpec::prime_field(prec).unwrap();
        let r = RingSpec::poly(&base, &["t"], Relations::MonomialIdeal(vec![vec![3], vec![2]])).unwrap();
        assert_eq!(r.id(), "F_2[t]/(t^2)");
    }

    #[test]
    fn monic_relation_must_be_univariate() {
        let prec = Precision::for_prime(3).unwrap();
        let base = RingSpec::z_mod_pn(prec).unwrap();
        let err = RingSpec::poly(&base, &["u", "v"], Relations::Monic(vec![BigInt::from(-3)]));
        assert!(matches!(err, Err(Error::UnsupportedRelationSet(_))));
        let ok = RingSpec::poly(&base, &["u"], Relations::Monic(vec![BigInt::from(-3), BigInt::zero()])).unwrap();
        assert_eq!(ok.id(), "Z/81[u]/(u^2-3)");
        assert!(ok.is_local());
    }

    #[test]
    fn composite_over_composite_is_rejected() {
        let prec = Precision::for_prime(3).unwrap();
        let base = RingSpec::z_mod_pn(prec).unwrap();
        let r = RingSpec::poly(&base, &["x"], Relations::None).unwrap();
        assert!(RingSpec::poly(&r, &["y"], Relations::None).is_err());
    }

    #[test]
    fn power_series_id() {
        let prec = Precision::for_prime(3).unwrap().with_digits(2).unwrap();
        let base = RingSpec::z_mod_pn(prec).unwrap();
        let r = RingSpec::power_series(&base, &["u"], 2).unwrap();
        assert_eq!(r.id(), "Z/9[[u]]+O(3)");
        assert_eq!(r.cardinality(), Some(729));
    }
}
