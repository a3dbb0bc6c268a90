use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use super::{is_prime, Monomial, Precision, Relations, RingElem, RingKind, RingSpec};
use crate::error::{Error, Result};

/// Parse a spec id such as `Z/81`, `F_2[t]/(t^2)`, `Z/4[x,y]/(x,y)^2`,
/// `Z/16[pi]/(pi^2-2)` or `Z/8[[u]]+O(9)`. The prime of a `Z` base and
/// the non-coefficient precision fields come from `ctx`.
pub fn parse_spec(s: &str, ctx: Precision) -> Result<Arc<RingSpec>> {
    let s = s.trim();
    let split = s.find('[').unwrap_or(s.len());
    let (base_str, rest) = s.split_at(split);
    let base = parse_base(base_str.trim(), ctx)?;
    if rest.is_empty() {
        return Ok(base);
    }
    if let Some(inner) = rest.strip_prefix("[[") {
        let close = inner.find("]]").ok_or_else(|| bad(s))?;
        let vars = split_vars(&inner[..close]);
        let tail = inner[close + 2..].trim();
        let order = tail
            .strip_prefix("+O(")
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| bad(s))?
            .trim()
            .parse::<u32>()
            .map_err(|_| bad(s))?;
        if order == 0 {
            return Err(bad(s));
        }
        let refs: Vec<&str> = vars.iter().map(|v| v.as_str()).collect();
        return RingSpec::power_series(&base, &refs, order - 1);
    }
    let inner = rest.strip_prefix('[').ok_or_else(|| bad(s))?;
    let close = inner.find(']').ok_or_else(|| bad(s))?;
    let vars = split_vars(&inner[..close]);
    let refs: Vec<&str> = vars.iter().map(|v| v.as_str()).collect();
    let tail = inner[close + 1..].trim();
    if tail.is_empty() {
        return RingSpec::poly(&base, &refs, Relations::None);
    }
    let rels = tail.strip_prefix('/').ok_or_else(|| bad(s))?.trim();
    let free = RingSpec::poly(&base.integral_lift(), &refs, Relations::None)?;
    let (list, power) = match rels.rfind(")^") {
        Some(i) if rels.starts_with('(') => {
            let k = rels[i + 2..].trim().parse::<u32>().map_err(|_| bad(s))?;
            (&rels[1..i], k)
        }
        _ => {
            let l = rels.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(|| bad(s))?;
            (l, 1)
        }
    };
    let polys = list.split(',').map(|t| parse_polynomial(t, &free)).collect::<Result<Vec<_>>>()?;
    let monomial_gens: Option<Vec<Vec<u32>>> = polys
        .iter()
        .map(|f| {
            (f.terms().len() == 1 && f.terms().values().next().unwrap().is_one())
                .then(|| f.terms().keys().next().unwrap().0.clone())
        })
        .collect();
    let relations = match monomial_gens {
        Some(gens) => {
            let mut cur = vec![vec![0u32; vars.len()]];
            for _ in 0..power {
                let mut next = Vec::new();
                for a in &cur {
                    for g in &gens {
                        next.push(a.iter().zip(g).map(|(x, y)| x + y).collect());
                    }
                }
                cur = next;
            }
            Relations::MonomialIdeal(cur)
        }
        None => {
            if polys.len() != 1 || power != 1 || vars.len() != 1 {
                return Err(Error::UnsupportedRelationSet(format!(
                    "{rels}: only monomial ideals or one monic univariate relation"
                )));
            }
            Relations::Monic(monic_coefficients(&polys[0])?)
        }
    };
    RingSpec::poly(&base, &refs, relations)
}

/// `[c_0, .., c_{e-1}]` of a monic univariate polynomial.
pub(crate) fn monic_coefficients(f: &RingElem) -> Result<Vec<BigInt>> {
    let e = f.degree_in(0);
    let lead = f.coeff(&Monomial(vec![e]));
    if e == 0 || !lead.is_one() {
        return Err(Error::UnsupportedRelationSet(format!("{f} is not monic of positive degree")));
    }
    Ok((0..e).map(|j| f.coeff(&Monomial(vec![j]))).collect())
}

fn parse_base(s: &str, ctx: Precision) -> Result<Arc<RingSpec>> {
    if s == "Z" {
        return RingSpec::integers(ctx);
    }
    if let Some(p) = s.strip_prefix("F_") {
        let p: u64 = p.parse().map_err(|_| bad(s))?;
        let prec = Precision::new(p, 1, ctx.witt_length, ctx.delta_depth, ctx.series_order)?;
        return RingSpec::prime_field(prec);
    }
    if let Some(m) = s.strip_prefix("Z/") {
        let m: u64 = m.parse().map_err(|_| bad(s))?;
        let (p, n) = prime_power(m).ok_or_else(|| Error::Parse(format!("{m} is not a prime power")))?;
        let prec = Precision::new(p, n, ctx.witt_length, ctx.delta_depth, ctx.series_order)?;
        return RingSpec::new(RingKind::IntegersModPN, None, vec![], Relations::None, prec);
    }
    Err(bad(s))
}

fn prime_power(m: u64) -> Option<(u64, u32)> {
    if m < 2 {
        return None;
    }
    let p = (2..=m).find(|d| m.is_multiple_of(*d))?;
    if !is_prime(p) {
        return None;
    }
    let mut n = 0;
    let mut x = m;
    while x.is_multiple_of(p) {
        x /= p;
        n += 1;
    }
    (x == 1).then_some((p, n))
}

fn split_vars(s: &str) -> Vec<String> {
    s.split(',').map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect()
}

fn bad(s: &str) -> Error {
    Error::Parse(format!("cannot parse ring spec {s:?}"))
}

/// Parse a polynomial expression like `u^2-2`, `3*x*y + 2` or `-t` into
/// the given carrier.
pub fn parse_polynomial(s: &str, spec: &Arc<RingSpec>) -> Result<RingElem> {
    let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if src.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut acc = RingElem::zero(spec);
    let mut chars = src.as_str();
    let mut first = true;
    while !chars.is_empty() {
        let mut sign = BigInt::one();
        if let Some(r) = chars.strip_prefix('+') {
            chars = r;
        } else if let Some(r) = chars.strip_prefix('-') {
            chars = r;
            sign = -sign;
        } else if !first {
            return Err(Error::Parse(format!("expected + or - in {s:?}")));
        }
        first = false;
        let end = chars.find(['+', '-']).unwrap_or(chars.len());
        let term = &chars[..end];
        chars = &chars[end..];
        let mut value = RingElem::from_bigint(spec, &sign);
        for factor in term.split('*') {
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => (b, e.parse::<u64>().map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?),
                None => (factor, 1),
            };
            let f = if let Ok(c) = base.parse::<BigInt>() {
                RingElem::from_bigint(spec, &c)
            } else {
                RingElem::var_named(spec, base)?
            };
            value = &value * &f.pow(exp);
        }
        acc = &acc + &value;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_ids() {
        let ctx = Precision::default();
        for id in [
            "Z",
            "Z/81",
            "F_2",
            "F_2[t]/(t^2)",
            "Z/4[x,y]/(x^2,x*y,y^2)",
            "Z/16[pi]/(pi^2-2)",
            "Z/8[[u]]+O(9)",
            "Z[a,b]",
        ] {
            assert_eq!(parse_spec(id, ctx).unwrap().id(), id);
        }
    }

    #[test]
    fn ideal_power_shorthand() {
        let r = parse_spec("Z/4[x,y]/(x,y)^2", Precision::default()).unwrap();
        assert_eq!(r.id(), "Z/4[x,y]/(x^2,x*y,y^2)");
    }

    #[test]
    fn rejects_non_catalog_relations() {
        let e = parse_spec("Z/4[x,y]/(x+y)", Precision::default());
        assert!(matches!(e, Err(Error::UnsupportedRelationSet(_))));
        assert!(parse_spec("Z/12", Precision::default()).is_err());
    }

    #[test]
    fn parse_expressions() {
        let r = parse_spec("Z[u]", Precision::default()).unwrap();
        let f = parse_polynomial("u^2 - 2", &r).unwrap();
        assert_eq!(f.to_string(), "-2 + u^2");
        let g = parse_polynomial("-3*u+1", &r).unwrap();
        assert_eq!(g.to_string(), "1 - 3*u");
        assert!(parse_polynomial("v", &r).is_err());
    }
}
