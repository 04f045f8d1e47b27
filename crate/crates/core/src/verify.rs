//! Named verification suites with pass/fail summaries.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arithmetic::{self, ApproxSpec};
use crate::constructions::layered_set;
use crate::cube::VertexSet;
use crate::error::{Error, Result};
use crate::hadamard::recipe_for;
use crate::johnson::{hadamard_to_clique, johnson_graph, max_clique, verify_clique, SearchBudget};
use crate::stats::{distribution, distribution_fast, layered_distribution, LayeredSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Prop31,
    Thm32,
    Approx,
    ThirdLayer,
    CliqueCerts,
    OracleEquivalence,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Prop31,
        Suite::Thm32,
        Suite::Approx,
        Suite::ThirdLayer,
        Suite::CliqueCerts,
        Suite::OracleEquivalence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Prop31 => "prop31",
            Suite::Thm32 => "thm32",
            Suite::Approx => "approx",
            Suite::ThirdLayer => "third-layer",
            Suite::CliqueCerts => "clique-certs",
            Suite::OracleEquivalence => "oracle-equivalence",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: Suite, checks: Vec<Check>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        SuiteReport { suite, passed, checks }
    }
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), passed, detail: detail.into() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Number of random instances for the oracle suite.
    pub instances: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 0, instances: 200 }
    }
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Prop31 => prop31()?,
        Suite::Thm32 => thm32()?,
        Suite::Approx => approx()?,
        Suite::ThirdLayer => vec![check("third_layer_check(30)", arithmetic::third_layer_check(30), "d = 1..=30")],
        Suite::CliqueCerts => clique_certs()?,
        Suite::OracleEquivalence => oracle_equivalence(opts)?,
    };
    Ok(SuiteReport::new(suite, checks))
}

fn prop31() -> Result<Vec<Check>> {
    let mut failures = Vec::new();
    let mut cases = 0;
    for d in 3..=16 {
        for k in 3..=d {
            cases += 1;
            if !arithmetic::verify_prop31(k, d)? {
                failures.push(format!("(k={k}, d={d})"));
            }
        }
    }
    Ok(vec![check(
        "residue sums unequal for 2 < k <= d <= 16",
        failures.is_empty(),
        if failures.is_empty() { format!("{cases} cases") } else { failures.join(", ") },
    )])
}

fn thm32() -> Result<Vec<Check>> {
    (1..=8)
        .map(|k| {
            let report = arithmetic::verify_thm32(k, 1..=16)?;
            Ok(check(
                format!("k={k}, d=1..=16"),
                report.passed(),
                format!("{} constant cases, {} violations", report.constant_cases.len(), report.violations),
            ))
        })
        .collect()
}

fn approx() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for q in 2..=12u64 {
        let mut failures = Vec::new();
        let mut borderline = 0;
        for p in 1..q {
            let spec = ApproxSpec {
                x: p as f64 / q as f64,
                p,
                q,
                residues: (0..p).collect(),
                d_min: 0,
                tol: 0.0,
            };
            for d in 1..=64 {
                let c = arithmetic::check_approx(&spec, d)?;
                if !c.bound_ok {
                    failures.push(format!("p={p} d={d}"));
                }
                borderline += c.borderline as usize;
            }
        }
        let detail = if failures.is_empty() {
            format!("{} cases, {borderline} borderline", (q - 1) * 64)
        } else {
            failures.join(", ")
        };
        checks.push(check(format!("q={q}"), failures.is_empty(), detail));
    }
    Ok(checks)
}

/// Hadamard orders whose clique certificates are checked.
pub const CERT_ORDERS: [u64; 7] = [4, 8, 12, 16, 20, 24, 32];

fn clique_certs() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for order in CERT_ORDERS {
        let recipe = recipe_for(order).ok_or_else(|| Error::Capability(format!("no recipe for {order}")))?;
        let cert = hadamard_to_clique(&recipe.build()?)?;
        let ok = verify_clique(&cert) && cert.size() as u64 == order - 1;
        checks.push(check(format!("order {order}"), ok, format!("{} members via {}", cert.size(), recipe.describe())));
    }
    for s in 1..=2u32 {
        let found = max_clique(&johnson_graph(s)?, &SearchBudget::unlimited());
        let ok = found.optimal && found.certificate.size() as u32 == 4 * s - 1 && verify_clique(&found.certificate);
        checks.push(check(
            format!("search s={s}"),
            ok,
            format!("size {} optimal={} nodes={}", found.certificate.size(), found.optimal, found.nodes),
        ));
    }
    Ok(checks)
}

/// Random set of `Q_n` with a density drawn per instance.
pub fn random_set(rng: &mut ChaCha8Rng, n: u32) -> Result<VertexSet> {
    let density: f64 = rng.gen_range(0.05..0.95);
    VertexSet::from_fn(n, |_| rng.gen_bool(density))
}

fn oracle_equivalence(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (mut fast_bad, mut sym_bad) = (Vec::new(), Vec::new());
    for i in 0..opts.instances {
        let n = rng.gen_range(1..=9);
        let d = rng.gen_range(0..=n);
        let set = random_set(&mut rng, n)?;
        let direct = distribution(&set, d)?;
        if distribution_fast(&set, d)? != direct {
            fast_bad.push(format!("#{i} n={n} d={d}"));
        }
        let comp = distribution(&set.complement(), d)?;
        let full = 1u64 << d;
        if (0..=full).any(|s| direct.count(s) != comp.count(full - s)) {
            sym_bad.push(format!("#{i} n={n} d={d}"));
        }
    }
    let mut layered_bad = Vec::new();
    let mut layered_cases = 0;
    for n in 0..=10u32 {
        for k in 1..=4u64 {
            for mask in 0..1u64 << k {
                let spec = LayeredSpec::new(k, (0..k).filter(|r| (mask >> r) & 1 == 1))?;
                let set = layered_set(n, &spec)?;
                for d in 0..=n {
                    layered_cases += 1;
                    if layered_distribution(n, d, &spec)? != distribution(&set, d)? {
                        layered_bad.push(format!("n={n} k={k} T={:?} d={d}", spec.residues));
                    }
                }
            }
        }
    }
    let summary = |bad: &[String], total: usize| {
        if bad.is_empty() {
            format!("{total} cases")
        } else {
            bad.join(", ")
        }
    };
    Ok(vec![
        check("fast = direct", fast_bad.is_empty(), summary(&fast_bad, opts.instances)),
        check("complement reflection", sym_bad.is_empty(), summary(&sym_bad, opts.instances)),
        check("layered = materialized", layered_bad.is_empty(), summary(&layered_bad, layered_cases)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for suite in Suite::ALL {
            assert_eq!(suite.name().parse::<Suite>().unwrap(), suite);
            assert_eq!(serde_json::to_string(&suite).unwrap(), format!("\"{}\"", suite.name()));
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn quick_suites_pass() {
        let opts = SuiteOptions { seed: 3, instances: 20 };
        for suite in [Suite::Prop31, Suite::ThirdLayer, Suite::CliqueCerts, Suite::OracleEquivalence] {
            let report = run_suite(suite, &opts).unwrap();
            assert!(report.passed, "{suite}: {:?}", report.checks);
        }
    }
}
