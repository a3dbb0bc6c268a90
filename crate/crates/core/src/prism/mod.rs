//! Oriented prisms `(A, (d))` from a small catalog, the distinguishedness
//! criterion, Hodge–Tate quotients, and prismatic envelopes.

mod envelope;

pub use envelope::{envelope_points, EnvelopePoints, EnvelopePresentation, EnvelopeRelation, Orientation};

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::base_rings::{
    solve_mod_prime_power, valuation, ElemJson, Monomial, Precision, Relations, RingElem, RingHom, RingSpec,
};
use crate::delta::{DeltaJson, DeltaRing};
use crate::error::{Error, Result};

/// A monic polynomial `E(u) = u^e + c_{e-1} u^{e-1} + .. + c_0`, stored low
/// degree first including the leading 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eisenstein {
    coeffs: Vec<BigInt>,
}

impl Eisenstein {
    /// From coefficients listed highest degree first, e.g. `[1, 0, -2]`
    /// for `u^2 - 2`.
    pub fn from_high_first(cs: &[BigInt]) -> Self {
        let mut coeffs: Vec<BigInt> = cs.iter().rev().cloned().collect();
        while coeffs.len() > 1 && coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        Eisenstein { coeffs }
    }

    /// Parse `1,0,-2` or an expression such as `u^2-2`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.split(',').all(|t| t.trim().parse::<BigInt>().is_ok()) {
            let cs: Vec<BigInt> = s.split(',').map(|t| t.trim().parse().unwrap()).collect();
            return Ok(Eisenstein::from_high_first(&cs));
        }
        let var = s.chars().find(|c| c.is_ascii_alphabetic()).unwrap_or('u').to_string();
        let z = RingSpec::integers(Precision::default())?;
        let r = RingSpec::poly(&z, &[var.as_str()], Relations::None)?;
        let f = crate::base_rings::parse_polynomial(s, &r)?;
        let e = f.degree_in(0);
        let coeffs = (0..=e).map(|j| f.coeff(&Monomial(vec![j]))).collect();
        Ok(Eisenstein { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients low degree first, leading coefficient included.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Check the Eisenstein conditions at `p`: monic of positive degree,
    /// lower coefficients divisible by `p`, constant term exactly divisible
    /// by `p`.
    pub fn check(&self, p: u64) -> Result<()> {
        let e = self.degree();
        let pb = BigInt::from(p);
        let why = if e == 0 {
            Some("degree 0".to_string())
        } else if !self.coeffs[e].is_one() {
            Some("not monic".to_string())
        } else if self.coeffs[..e].iter().any(|c| !c.is_multiple_of(&pb)) {
            Some(format!("a lower coefficient is not divisible by {p}"))
        } else if valuation(&self.coeffs[0], p) != Some(1) {
            Some(format!("constant term is not {p} times a unit"))
        } else {
            None
        };
        match why {
            Some(w) => Err(Error::NotEisenstein(format!("{self}: {w}"))),
            None => Ok(()),
        }
    }

    /// `E'(u)`, low degree first.
    pub fn derivative(&self) -> Vec<BigInt> {
        self.coeffs.iter().enumerate().skip(1).map(|(j, c)| c * BigInt::from(j)).collect()
    }

    pub fn to_elem(&self, spec: &Arc<RingSpec>, var: usize) -> RingElem {
        let n = spec.nvars();
        let terms = self.coeffs.iter().enumerate().map(|(j, c)| {
            let mut e = vec![0u32; n];
            e[var] = j as u32;
            (Monomial(e), c.clone())
        });
        RingElem::from_terms(spec, terms)
    }
}

impl fmt::Display for Eisenstein {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::base_rings::render_univariate(&self.coeffs, "u"))
    }
}

/// The prism catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogEntry {
    /// `(Z/p^N, (p))`.
    Crystalline,
    /// `(Z/p^N[[u]], (E(u)))` with `δ(u) = 0`.
    BreuilKisin(Eisenstein),
    /// `(Z/p^N[[t]], ([p]_q))` with `t = q - 1` and `φ(q) = q^p`.
    QDeRham,
    /// `(Z/p^N[[s]], (p - s^(p^k)))` with `δ(s) = 0`, a finite-level model of
    /// `(A_inf, ξ)`.
    Perfectoid(u32),
}

impl CatalogEntry {
    pub fn name(&self) -> &'static str {
        match self {
            CatalogEntry::Crystalline => "crystalline",
            CatalogEntry::BreuilKisin(_) => "bk",
            CatalogEntry::QDeRham => "qdr",
            CatalogEntry::Perfectoid(_) => "perfectoid",
        }
    }
}

impl FromStr for CatalogEntry {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "crystalline" | "crys" => Ok(CatalogEntry::Crystalline),
            "qdr" | "q-de-rham" | "qdeRham" => Ok(CatalogEntry::QDeRham),
            "bk" | "breuil-kisin" => Err(Error::Parse("bk needs Eisenstein coefficients".into())),
            _ => match s.strip_prefix("perfectoid") {
                Some(k) => {
                    let k = k.trim_start_matches([':', '-']);
                    let k = if k.is_empty() {
                        1
                    } else {
                        k.parse().map_err(|_| Error::Parse(format!("bad level in {s}")))?
                    };
                    Ok(CatalogEntry::Perfectoid(k))
                }
                None => Err(Error::Parse(format!("unknown catalog entry {s:?}"))),
            },
        }
    }
}

/// Verdicts of the two distinguishedness criteria.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distinguished {
    /// `d` lies in the Jacobson radical (is not a unit).
    pub in_radical: bool,
    /// `p ∈ (d, φ(d))`.
    pub ideal_member: bool,
    /// `(a, b)` with `p = a d + b φ(d)`.
    pub witness: Option<(RingElem, RingElem)>,
    /// `δ(d)` is a unit.
    pub delta_unit: bool,
}

impl Distinguished {
    pub fn by_ideal(&self) -> bool {
        self.in_radical && self.ideal_member
    }

    pub fn by_delta(&self) -> bool {
        self.in_radical && self.delta_unit
    }

    pub fn agree(&self) -> bool {
        self.by_ideal() == self.by_delta()
    }
}

/// Decide whether `d` is distinguished in the local carrier of `ring`,
/// both through `p ∈ (d, φ(d))` and through `δ(d)` being a unit.
pub fn is_distinguished(ring: &DeltaRing, d: &RingElem) -> Result<Distinguished> {
    let carrier = ring.carrier();
    if !carrier.is_local() || !carrier.is_finite() {
        return Err(Error::UnsupportedCarrier(format!(
            "distinguishedness is decided on finite local carriers, not {}",
            carrier.id()
        )));
    }
    let n = carrier.digits().expect("finite");
    if n < 2 {
        return Err(Error::BadPrecision("δ(d) needs at least two p-adic digits".into()));
    }
    let p = carrier.prime();
    let phi_d = ring.phi(d)?;
    let target = RingElem::from_bigint(carrier, &p);
    let witness =
        if carrier.nvars() == 0 { scalar_witness(d, &p, carrier) } else { linear_witness(d, &phi_d, &target)? };
    if let Some((a, b)) = &witness {
        debug_assert_eq!(&(a * d) + &(b * &phi_d), target);
    }
    Ok(Distinguished {
        in_radical: !d.is_unit()?,
        ideal_member: witness.is_some(),
        witness,
        delta_unit: ring.delta(d)?.value.is_unit()?,
    })
}

fn scalar_witness(d: &RingElem, p: &BigInt, carrier: &Arc<RingSpec>) -> Option<(RingElem, RingElem)> {
    // φ = id on Z/p^N, so (d, φ(d)) = (d) and p ∈ (d) iff v(d) <= 1
    let zero = RingElem::zero(carrier);
    let v = d.valuation()?;
    if v > 1 {
        return None;
    }
    let c = d.constant_term();
    let unit = RingElem::from_bigint(carrier, &(c / p.pow(v)));
    let a = &unit.invert().ok()? * &RingElem::from_bigint(carrier, &p.pow(1 - v));
    Some((a, zero))
}

fn linear_witness(d: &RingElem, phi_d: &RingElem, target: &RingElem) -> Result<Option<(RingElem, RingElem)>> {
    let carrier = d.spec();
    let basis = carrier.standard_monomials().expect("finite");
    let k = basis.len();
    let mut columns = Vec::with_capacity(2 * k);
    for g in [d, phi_d] {
        for m in &basis {
            let mono = RingElem::from_terms(carrier, [(m.clone(), BigInt::one())]);
            columns.push(g * &mono);
        }
    }
    let rows: Vec<Vec<BigInt>> = basis.iter().map(|m| columns.iter().map(|c| c.coeff(m)).collect()).collect();
    let rhs: Vec<BigInt> = basis.iter().map(|m| target.coeff(m)).collect();
    let n = carrier.digits().expect("finite");
    let Some(sol) = solve_mod_prime_power(&rows, &rhs, carrier.p(), n) else {
        return Ok(None);
    };
    let build = |xs: &[BigInt]| RingElem::from_terms(carrier, basis.iter().cloned().zip(xs.iter().cloned()));
    Ok(Some((build(&sol[..k]), build(&sol[k..]))))
}

/// An oriented prism from the catalog, truncated to the working precision.
#[derive(Debug, Clone)]
pub struct PrismSpec {
    entry: CatalogEntry,
    ring: DeltaRing,
    d: RingElem,
    /// Degree of the orientation in the series variable (1 for scalars).
    ramification: usize,
}

impl PrismSpec {
    /// Build a catalog prism at precision `N = padic_digits`, series order
    /// `M`; the truncation must satisfy `M + 1 >= e N` so that `A/(d)` is
    /// not cut off.
    pub fn new(entry: &CatalogEntry, precision: Precision) -> Result<Self> {
        let p = precision.p;
        let n = precision.padic_digits;
        if n < 2 {
            return Err(Error::BadPrecision("prisms need at least two p-adic digits".into()));
        }
        let base = RingSpec::z_mod_pn(precision)?;
        let (ring, d, e) = match entry {
            CatalogEntry::Crystalline => {
                let ring = DeltaRing::new(&base, vec![])?;
                let d = RingElem::from_int(&base, p as i64);
                (ring, d, 1)
            }
            CatalogEntry::BreuilKisin(eis) => {
                eis.check(p)?;
                let e = eis.degree();
                let carrier = series_carrier(&base, "u", precision, e)?;
                let ring = DeltaRing::new(&carrier, vec![RingElem::zero(&carrier)])?;
                (ring, eis.to_elem(&carrier, 0), e)
            }
            CatalogEntry::QDeRham => {
                let e = (p - 1) as usize;
                let carrier = series_carrier(&base, "t", precision, e)?;
                let pb = BigInt::from(p);
                let dt = (1..p).map(|i| (Monomial(vec![i as u32]), binomial(pb.clone(), BigInt::from(i)) / &pb));
                let ring = DeltaRing::new(&carrier, vec![RingElem::from_terms(&carrier, dt)])?;
                let d = (1..=p).map(|i| (Monomial(vec![(i - 1) as u32]), binomial(pb.clone(), BigInt::from(i))));
                (ring, RingElem::from_terms(&carrier, d), e)
            }
            CatalogEntry::Perfectoid(k) => {
                let e = p.pow(*k) as usize;
                let carrier = series_carrier(&base, "s", precision, e)?;
                let ring = DeltaRing::new(&carrier, vec![RingElem::zero(&carrier)])?;
                let d = RingElem::from_terms(
                    &carrier,
                    [(Monomial(vec![0]), BigInt::from(p)), (Monomial(vec![e as u32]), BigInt::from(-1))],
                );
                (ring, d, e)
            }
        };
        let prism = PrismSpec { entry: entry.clone(), ring, d, ramification: e };
        let verdict = prism.check()?;
        if !verdict.by_ideal() || !verdict.by_delta() {
            return Err(Error::NotDistinguished(format!("{} in {}", prism.d, prism.carrier().id())));
        }
        Ok(prism)
    }

    pub fn entry(&self) -> &CatalogEntry {
        &self.entry
    }

    pub fn ring(&self) -> &DeltaRing {
        &self.ring
    }

    pub fn carrier(&self) -> &Arc<RingSpec> {
        self.ring.carrier()
    }

    /// The orientation `d`.
    pub fn orientation(&self) -> &RingElem {
        &self.d
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    pub fn check(&self) -> Result<Distinguished> {
        is_distinguished(&self.ring, &self.d)
    }

    /// The same prism with free delta-variables `names` adjoined up to
    /// `depth`, for use as numerators.
    pub fn with_free_vars(&self, names: &[&str], depth: usize) -> Result<Self> {
        let ring = self.ring.adjoin_free(names, depth)?;
        let d = self.d.embed(ring.carrier())?;
        Ok(PrismSpec { entry: self.entry.clone(), ring, d, ramification: self.ramification })
    }

    /// `A/(d)` together with the reduction map.
    pub fn hodge_tate_quotient(&self) -> Result<HodgeTateQuotient> {
        let carrier = self.carrier();
        let prec = carrier.precision();
        if carrier.nvars() == 0 {
            let n = carrier.digits().expect("finite");
            let v = self.d.valuation().unwrap_or(n).min(n);
            if v == 0 {
                return Err(Error::NotDistinguished("orientation is a unit".into()));
            }
            let q = RingSpec::z_mod_pn(prec)?.with_digits(v)?;
            let reduction = RingHom::new(carrier, &q, vec![])?;
            return Ok(HodgeTateQuotient { spec: q, reduction });
        }
        if carrier.nvars() != 1 {
            return Err(Error::UnsupportedCarrier(format!(
                "Hodge–Tate quotient of {} (free variables present)",
                carrier.id()
            )));
        }
        // make d monic in the series variable and use it as the relation
        let e = self.ramification as u32;
        let lead = self.d.coeff(&Monomial(vec![e]));
        let inv = crate::base_rings::RingElem::from_bigint(carrier, &lead).invert()?;
        let monic = &self.d * &inv;
        let cs: Vec<BigInt> = (0..e).map(|j| monic.coeff(&Monomial(vec![j]))).collect();
        let base = carrier.scalar_base()?;
        let q = RingSpec::poly(&base, &["pi"], Relations::Monic(cs))?;
        let reduction = RingHom::new(carrier, &q, vec![RingElem::var(&q, 0)])?;
        Ok(HodgeTateQuotient { spec: q, reduction })
    }

    pub fn to_json(&self) -> PrismJson {
        let verdict = self.check().ok();
        PrismJson {
            catalog: self.entry.name().to_string(),
            carrier: self.carrier().id().to_string(),
            orientation: self.d.to_json(),
            delta: self.ring.to_json(),
            distinguished: verdict.as_ref().map(|v| v.by_ideal()),
            witness: verdict.and_then(|v| v.witness).map(|(a, b)| (a.to_json(), b.to_json())),
        }
    }
}

fn series_carrier(base: &Arc<RingSpec>, var: &str, precision: Precision, e: usize) -> Result<Arc<RingSpec>> {
    let m = precision.series_order;
    let need = e as u32 * precision.padic_digits;
    if m + 1 < need {
        return Err(Error::BadPrecision(format!("series order {m} is too small: need M + 1 >= e N = {need}")));
    }
    RingSpec::power_series(base, &[var], m)
}

/// `A/(d)` and the map `A -> A/(d)`.
#[derive(Debug, Clone)]
pub struct HodgeTateQuotient {
    pub spec: Arc<RingSpec>,
    pub reduction: RingHom,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrismJson {
    pub catalog: String,
    pub carrier: String,
    pub orientation: ElemJson,
    pub delta: DeltaJson,
    pub distinguished: Option<bool>,
    pub witness: Option<(ElemJson, ElemJson)>,
}

#[cfg(test)]
mod tests;
