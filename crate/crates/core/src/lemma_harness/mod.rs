//! Named, re-runnable checks of computational lemmas over fixed instance
//! families. Failures are data: every check yields reports, never panics.

mod checks;

pub use checks::{
    check_adjunction_roundtrip, check_kernel_nilpotent, check_p_squared_hodge_tate, check_witt_square_zero,
};

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::base_rings::{Precision, RingElem};
use crate::error::{Error, Result};
use crate::witt::{WittOp, WittOps, WittPolynomialTable};

/// Search spaces up to this size are exhausted; larger ones are sampled.
pub const EXHAUSTIVE_LIMIT: u128 = 1 << 16;

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub instance: String,
    pub verdict: Verdict,
    /// Confirming data on a pass, a concrete counterexample on a fail.
    pub witness: Value,
    pub runtime: Duration,
}

#[derive(Serialize)]
struct ReportLine<'a> {
    check: &'a str,
    instance: &'a str,
    verdict: Verdict,
    witness: &'a Value,
}

impl CheckReport {
    pub(crate) fn new(name: &str, instance: impl Into<String>, pass: bool, witness: Value) -> Self {
        CheckReport {
            name: name.to_string(),
            instance: instance.into(),
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            witness,
            runtime: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// One JSON line, without the runtime so that reruns are identical.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&ReportLine {
            check: &self.name,
            instance: &self.instance,
            verdict: self.verdict,
            witness: &self.witness,
        })
        .expect("report serializes")
    }
}

/// A replaced universal polynomial, for negative controls.
#[derive(Debug, Clone)]
pub struct Corruption {
    pub p: u64,
    pub op: WittOp,
    pub index: usize,
    pub poly: RingElem,
}

#[derive(Debug, Clone)]
pub struct HarnessConfig {
    pub precision: Precision,
    pub seed: u64,
    pub budget: u128,
    /// Restrict to these check names; `None` runs everything.
    pub checks: Option<Vec<String>>,
    pub corruption: Option<Corruption>,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            precision: Precision::default(),
            seed: DEFAULT_SEED,
            budget: 1 << 20,
            checks: None,
            corruption: None,
        }
    }
}

/// Shared state for one run: the Witt tables every check must use.
pub struct Harness {
    config: HarnessConfig,
    ops: BTreeMap<u64, WittOps>,
}

type CheckFn = fn(&Harness, &str) -> Result<Vec<CheckReport>>;

/// Every registered check, sorted by name.
pub const CHECKS: &[(&str, CheckFn)] = &[
    ("adjunction_roundtrip", checks::adjunction_roundtrip),
    ("delta_identities", checks::delta_identities),
    ("distinguished_catalog", checks::distinguished_catalog),
    ("envelope_points", checks::envelope_points),
    ("frobenius_shortcut", checks::frobenius_shortcut),
    ("frobenius_torsor", checks::frobenius_torsor),
    ("group_law", checks::group_law),
    ("kernel_nilpotent", checks::kernel_nilpotent),
    ("p_squared_hodge_tate", checks::p_squared_hodge_tate),
    ("prismatic_log_additivity", checks::prismatic_log_additivity),
    ("witt_ghost_identities", checks::witt_ghost_identities),
    ("witt_operator_identities", checks::witt_operator_identities),
    ("witt_square_zero", checks::witt_square_zero),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

impl Harness {
    pub fn new(config: HarnessConfig) -> Result<Self> {
        if let Some(names) = &config.checks {
            for n in names {
                if !CHECKS.iter().any(|(c, _)| c == n) {
                    return Err(Error::UnsupportedQuery(format!("no check named {n:?}")));
                }
            }
        }
        let mut ops = BTreeMap::new();
        for p in [2, 3, 5] {
            ops.insert(p, WittOps::shared(p)?);
        }
        if let Some(c) = &config.corruption {
            let table = WittPolynomialTable::with_override(c.p, c.op, c.index, c.poly.clone())?;
            ops.insert(c.p, WittOps::new(Arc::new(table)));
        }
        Ok(Harness { config, ops })
    }

    pub fn config(&self) -> &HarnessConfig {
        &self.config
    }

    pub fn ops(&self, p: u64) -> Result<WittOps> {
        match self.ops.get(&p) {
            Some(o) => Ok(o.clone()),
            None => WittOps::shared(p),
        }
    }

    /// A generator seeded by the run seed and the check name, so that each
    /// check sees the same stream whatever else runs.
    pub(crate) fn rng(&self, name: &str) -> ChaCha8Rng {
        let salt = name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
        ChaCha8Rng::seed_from_u64(self.config.seed ^ salt)
    }

    /// Run the selected checks concurrently; reports come back ordered by
    /// check name and then by instance as each check listed them.
    pub fn run_all(&self) -> Vec<CheckReport> {
        let selected: Vec<&(&str, CheckFn)> = CHECKS
            .iter()
            .filter(|(n, _)| self.config.checks.as_ref().is_none_or(|c| c.iter().any(|x| x == n)))
            .collect();
        let mut groups: Vec<(usize, Vec<CheckReport>)> =
            selected.par_iter().enumerate().map(|(i, (name, f))| (i, self.run_one(name, *f))).collect();
        groups.sort_by_key(|(i, _)| *i);
        groups.into_iter().flat_map(|(_, r)| r).collect()
    }

    pub fn run(&self, name: &str) -> Result<Vec<CheckReport>> {
        let (_, f) = CHECKS
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| Error::UnsupportedQuery(format!("no check named {name:?}")))?;
        Ok(self.run_one(name, *f))
    }

    fn run_one(&self, name: &str, f: CheckFn) -> Vec<CheckReport> {
        let start = Instant::now();
        let mut reports = match f(self, name) {
            Ok(r) => r,
            Err(e) => vec![CheckReport::new(
                name,
                "setup",
                false,
                serde_json::json!({ "error": e.name(), "message": e.to_string() }),
            )],
        };
        let each = start.elapsed() / reports.len().max(1) as u32;
        for r in &mut reports {
            r.runtime = each;
        }
        reports
    }
}

/// `run_all` with a fresh harness.
pub fn run_all(config: HarnessConfig) -> Result<Vec<CheckReport>> {
    Ok(Harness::new(config)?.run_all())
}

pub fn failures(reports: &[CheckReport]) -> usize {
    reports.iter().filter(|r| !r.passed()).count()
}

/// Fixed-width summary without timings.
pub fn summary_table(reports: &[CheckReport]) -> String {
    let w1 = reports.iter().map(|r| r.name.len()).max().unwrap_or(5).max(5);
    let w2 = reports.iter().map(|r| r.instance.len()).max().unwrap_or(8).max(8);
    let mut out = String::new();
    let _ = writeln!(out, "{:<w1$}  {:<w2$}  verdict", "check", "instance");
    for r in reports {
        let v = if r.passed() { "pass" } else { "FAIL" };
        let _ = writeln!(out, "{:<w1$}  {:<w2$}  {v}", r.name, r.instance);
    }
    let _ = writeln!(out, "{} checks, {} failed", reports.len(), failures(reports));
    out
}

#[cfg(test)]
mod tests;
