use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::base_rings::{Precision, Relations, RingElem, RingSpec};
use crate::error::{Error, Result};

/// Largest supported index is `DEFAULT_CAP - 1`.
pub const DEFAULT_CAP: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WittOp {
    Sum,
    Product,
    Negation,
    Frobenius,
}

impl WittOp {
    pub const ALL: [WittOp; 4] = [WittOp::Sum, WittOp::Product, WittOp::Negation, WittOp::Frobenius];

    pub fn name(self) -> &'static str {
        match self {
            WittOp::Sum => "sum",
            WittOp::Product => "product",
            WittOp::Negation => "negation",
            WittOp::Frobenius => "frobenius",
        }
    }
}

impl fmt::Display for WittOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WittOp {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum" | "add" => Ok(WittOp::Sum),
            "product" | "mul" => Ok(WittOp::Product),
            "negation" | "neg" => Ok(WittOp::Negation),
            "frobenius" | "frob" => Ok(WittOp::Frobenius),
            _ => Err(Error::Parse(format!("unknown Witt operation {s:?}"))),
        }
    }
}

type Slot = Arc<OnceLock<Result<RingElem>>>;

/// Memoized universal Witt polynomials for one prime, as elements of
/// `Z[a0..a{cap-1}, b0..b{cap-1}]`.
///
/// Readers share the map; a missing entry is inserted under the write lock
/// and computed exactly once through its `OnceLock`.
pub struct WittPolynomialTable {
    p: u64,
    cap: usize,
    ring: Arc<RingSpec>,
    entries: RwLock<HashMap<(WittOp, usize), Slot>>,
}

impl fmt::Debug for WittPolynomialTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WittPolynomialTable").field("p", &self.p).field("cap", &self.cap).finish()
    }
}

impl WittPolynomialTable {
    pub fn new(p: u64, cap: usize) -> Result<Self> {
        let prec = Precision::for_prime(p)?;
        let names: Vec<String> = ["a", "b"].iter().flat_map(|s| (0..cap).map(move |i| format!("{s}{i}"))).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let ring = RingSpec::poly(&*RingSpec::integers(prec)?, &refs, Relations::None)?;
        Ok(WittPolynomialTable { p, cap, ring, entries: RwLock::new(HashMap::new()) })
    }

    /// The process-wide table for `p` with the default cap.
    pub fn shared(p: u64) -> Result<Arc<WittPolynomialTable>> {
        static TABLES: OnceLock<Mutex<HashMap<u64, Arc<WittPolynomialTable>>>> = OnceLock::new();
        let mut tables = TABLES.get_or_init(Default::default).lock().expect("table registry poisoned");
        if let Some(t) = tables.get(&p) {
            return Ok(t.clone());
        }
        let t = Arc::new(WittPolynomialTable::new(p, DEFAULT_CAP)?);
        tables.insert(p, t.clone());
        Ok(t)
    }

    /// A fresh table whose entry `(op, i)` is replaced by `poly`. Used to
    /// build negative controls.
    pub fn with_override(p: u64, op: WittOp, i: usize, poly: RingElem) -> Result<Self> {
        let t = WittPolynomialTable::new(p, DEFAULT_CAP)?;
        let poly = poly.coerce(&t.ring)?;
        let slot: Slot = Arc::new(OnceLock::new());
        let _ = slot.set(Ok(poly));
        t.entries.write().expect("table poisoned").insert((op, i), slot);
        Ok(t)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// `Z[a0.., b0..]`, the ring the polynomials live in.
    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn a(&self, i: usize) -> RingElem {
        RingElem::var(&self.ring, i)
    }

    pub fn b(&self, i: usize) -> RingElem {
        RingElem::var(&self.ring, self.cap + i)
    }

    /// `sum_{j <= m} p^j v_j^(p^(m-j))` for the variable family `v`.
    pub fn ghost_of(&self, v: &dyn Fn(usize) -> RingElem, m: usize) -> RingElem {
        let p = self.ring.prime();
        let mut acc = RingElem::zero(&self.ring);
        for j in 0..=m {
            let term = v(j).pow(self.p.pow((m - j) as u32)).scale(&p.pow(j as u32));
            acc = &acc + &term;
        }
        acc
    }

    /// The polynomial for `op` at index `i`.
    pub fn get(&self, op: WittOp, i: usize) -> Result<RingElem> {
        let top = if op == WittOp::Frobenius { i + 1 } else { i };
        if top >= self.cap {
            return Err(Error::CapExceeded { index: i, cap: self.cap });
        }
        let slot = {
            let read = self.entries.read().expect("table poisoned");
            read.get(&(op, i)).cloned()
        };
        let slot = match slot {
            Some(s) => s,
            None => {
                let mut write = self.entries.write().expect("table poisoned");
                write.entry((op, i)).or_default().clone()
            }
        };
        slot.get_or_init(|| self.generate(op, i)).clone()
    }

    /// All indices `0..len` of `op`.
    pub fn get_all(&self, op: WittOp, len: usize) -> Result<Vec<RingElem>> {
        (0..len).map(|i| self.get(op, i)).collect()
    }

    fn generate(&self, op: WittOp, i: usize) -> Result<RingElem> {
        let a = |j: usize| self.a(j);
        let b = |j: usize| self.b(j);
        let target = match op {
            WittOp::Sum => &self.ghost_of(&a, i) + &self.ghost_of(&b, i),
            WittOp::Product => &self.ghost_of(&a, i) * &self.ghost_of(&b, i),
            WittOp::Negation if self.p != 2 => return Ok(-&self.a(i)),
            WittOp::Negation => -&self.ghost_of(&a, i),
            WittOp::Frobenius => self.ghost_of(&a, i + 1),
        };
        let p = self.ring.prime();
        let mut rest = target;
        for j in 0..i {
            let lower = self.get(op, j)?;
            let term = lower.pow(self.p.pow((i - j) as u32)).scale(&p.pow(j as u32));
            rest = &rest - &term;
        }
        rest.div_exact_by_p(i as u32).map(|d| d.value).map_err(|_| Error::IntegralityFailure {
            p: self.p,
            op: op.name().into(),
            index: i,
        })
    }

    /// Check the defining ghost identity of `(op, i)` exactly over `Z`:
    /// `ghost_m` of the output equals the ghost-side expression for every
    /// `m <= i`.
    pub fn ghost_identity_holds(&self, op: WittOp, i: usize) -> Result<bool> {
        let polys = self.get_all(op, i + 1)?;
        let out = |j: usize| polys[j].clone();
        let a = |j: usize| self.a(j);
        let b = |j: usize| self.b(j);
        for m in 0..=i {
            let lhs = self.ghost_of(&out, m);
            let rhs = match op {
                WittOp::Sum => &self.ghost_of(&a, m) + &self.ghost_of(&b, m),
                WittOp::Product => &self.ghost_of(&a, m) * &self.ghost_of(&b, m),
                WittOp::Negation => -&self.ghost_of(&a, m),
                WittOp::Frobenius => self.ghost_of(&a, m + 1),
            };
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_rings::parse_polynomial;

    fn poly(t: &WittPolynomialTable, s: &str) -> RingElem {
        parse_polynomial(s, t.ring()).unwrap()
    }

    #[test]
    fn low_index_closed_forms() {
        let t = WittPolynomialTable::new(2, DEFAULT_CAP).unwrap();
        assert_eq!(t.get(WittOp::Sum, 0).unwrap(), poly(&t, "a0+b0"));
        assert_eq!(t.get(WittOp::Sum, 1).unwrap(), poly(&t, "a1+b1-a0*b0"));
        assert_eq!(t.get(WittOp::Product, 0).unwrap(), poly(&t, "a0*b0"));
        assert_eq!(t.get(WittOp::Product, 1).unwrap(), poly(&t, "a0^2*b1+a1*b0^2+2*a1*b1"));
        assert_eq!(t.get(WittOp::Negation, 1).unwrap(), poly(&t, "-a0^2-a1"));
        assert_eq!(t.get(WittOp::Frobenius, 0).unwrap(), poly(&t, "a0^2+2*a1"));
        let t3 = WittPolynomialTable::new(3, DEFAULT_CAP).unwrap();
        assert_eq!(t3.get(WittOp::Sum, 1).unwrap(), parse_polynomial("a1+b1-a0^2*b0-a0*b0^2", t3.ring()).unwrap());
        assert_eq!(t3.get(WittOp::Negation, 2).unwrap(), parse_polynomial("-a2", t3.ring()).unwrap());
    }

    #[test]
    fn ghost_identities_small() {
        for p in [2, 3] {
            let t = WittPolynomialTable::new(p, DEFAULT_CAP).unwrap();
            for op in WittOp::ALL {
                for i in 0..3 {
                    assert!(t.ghost_identity_holds(op, i).unwrap(), "p={p} {op} {i}");
                }
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let t = WittPolynomialTable::new(2, 3).unwrap();
        assert!(matches!(t.get(WittOp::Sum, 3), Err(Error::CapExceeded { index: 3, cap: 3 })));
        assert!(matches!(t.get(WittOp::Frobenius, 2), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn shared_tables_are_reused() {
        let a = WittPolynomialTable::shared(5).unwrap();
        let b = WittPolynomialTable::shared(5).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn override_replaces_one_entry() {
        let t = WittPolynomialTable::new(2, DEFAULT_CAP).unwrap();
        let bad = &t.get(WittOp::Sum, 1).unwrap() + &t.a(0);
        let c = WittPolynomialTable::with_override(2, WittOp::Sum, 1, bad.clone()).unwrap();
        assert_eq!(c.get(WittOp::Sum, 1).unwrap(), bad.coerce(c.ring()).unwrap());
        assert!(!c.ghost_identity_holds(WittOp::Sum, 1).unwrap());
    }
}
