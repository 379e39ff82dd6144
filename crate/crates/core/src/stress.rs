//! Seeded stress runs of the extractor against the bound, the trace
//! replayer and, for small n, the exact oracle.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bounds::m_bound;
use crate::colour::Colour;
use crate::colouring::Colouring;
use crate::error::{Error, Result};
use crate::extractor::{replay, Solution};
use crate::generators::random_colouring;
use crate::matching::verify_matching;
use crate::oracle::max_two_coloured;
use crate::vset::VertexSet;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StressConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub count: u64,
    pub seed: u64,
    pub oracle_max_n: Option<usize>,
    pub weights: [f64; 3],
    pub oracle_budget: Option<u64>,
}

impl Default for StressConfig {
    fn default() -> StressConfig {
        StressConfig {
            n_min: 9,
            n_max: 14,
            count: 100,
            seed: 1,
            oracle_max_n: None,
            weights: [1.0; 3],
            oracle_budget: None,
        }
    }
}

/// Seed of instance `index` at size `n`; independent of run order.
pub fn instance_seed(base: u64, n: usize, index: u64) -> u64 {
    // splitmix64 finaliser over the packed coordinates
    let mut z = base
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((n as u64) << 32)
        .wrapping_add(index);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-instance result of a successful check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checked {
    pub size: usize,
    pub bound: usize,
    pub oracle: Option<usize>,
    pub oracle_exact: bool,
    pub restarts: usize,
}

/// Runs `solver` on `c` and checks everything a run must satisfy.
pub fn check_instance<S>(c: &Colouring, solver: &S, oracle_max_n: Option<usize>, oracle_budget: Option<u64>) -> Result<Checked, String>
where
    S: Fn(&Colouring) -> Result<Solution> + ?Sized,
{
    let n = c.n();
    let bound = m_bound(n);
    let sol = solver(c).map_err(|e| format!("solve failed: {e}"))?;
    let report = verify_matching(c, &sol.matching, bound);
    if !report.valid {
        return Err(format!("verification failed: {}", report.violations.join("; ")));
    }
    let rep = replay(c, &sol.trace);
    if !rep.ok() {
        return Err(format!("trace replay failed: {}", rep.problems.join("; ")));
    }
    if sol.restarts > n + 2 {
        return Err(format!("{} restarts exceed n + 2", sol.restarts));
    }
    let mut out = Checked {
        size: sol.matching.len(),
        bound,
        oracle: None,
        oracle_exact: false,
        restarts: sol.restarts,
    };
    if oracle_max_n.is_some_and(|m| n <= m) {
        let (_, r) = max_two_coloured(c, c.vertices(), oracle_budget);
        if r.exact && out.size > r.size() {
            return Err(format!("solve size {} exceeds exact oracle {}", out.size, r.size()));
        }
        out.oracle = Some(r.size());
        out.oracle_exact = r.exact;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StressFailure {
    pub n: usize,
    pub index: u64,
    pub seed: u64,
    pub reason: String,
    /// Smallest failing colouring the minimiser reached, as colour digits.
    pub minimized_n: usize,
    pub minimized_digits: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeStats {
    pub instances: u64,
    pub passed: u64,
    /// Smallest and largest `size − m_bound(n)` among passing runs.
    pub min_gap: Option<usize>,
    pub max_gap: Option<usize>,
    /// Largest `oracle − size` among runs with an exact oracle value.
    pub max_oracle_gap: Option<usize>,
    pub max_restarts: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StressReport {
    pub instances: u64,
    pub passed: u64,
    pub failed: u64,
    pub by_n: BTreeMap<usize, SizeStats>,
    pub failures: Vec<StressFailure>,
}

impl StressReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// Runs the configured suite with `solver`.
pub fn run_stress<S>(cfg: &StressConfig, solver: &S) -> Result<StressReport>
where
    S: Fn(&Colouring) -> Result<Solution> + ?Sized,
{
    if cfg.n_min < 3 || cfg.n_min > cfg.n_max {
        return Err(Error::Input(format!("bad n range {}..{}", cfg.n_min, cfg.n_max)));
    }
    let mut rep = StressReport::default();
    for n in cfg.n_min..=cfg.n_max {
        let stats = rep.by_n.entry(n).or_default();
        for index in 0..cfg.count {
            let seed = instance_seed(cfg.seed, n, index);
            let c = random_colouring(n, seed, cfg.weights)?;
            rep.instances += 1;
            stats.instances += 1;
            match check_instance(&c, solver, cfg.oracle_max_n, cfg.oracle_budget) {
                Ok(ch) => {
                    rep.passed += 1;
                    stats.passed += 1;
                    let gap = ch.size - ch.bound;
                    stats.min_gap = Some(stats.min_gap.map_or(gap, |g| g.min(gap)));
                    stats.max_gap = Some(stats.max_gap.map_or(gap, |g| g.max(gap)));
                    if let (Some(o), true) = (ch.oracle, ch.oracle_exact) {
                        let og = o.saturating_sub(ch.size);
                        stats.max_oracle_gap = Some(stats.max_oracle_gap.map_or(og, |g| g.max(og)));
                    }
                    stats.max_restarts = stats.max_restarts.max(ch.restarts);
                }
                Err(reason) => {
                    rep.failed += 1;
                    let fails = |d: &Colouring| check_instance(d, solver, cfg.oracle_max_n, cfg.oracle_budget).is_err();
                    let small = minimize(&c, fails);
                    rep.failures.push(StressFailure {
                        n,
                        index,
                        seed,
                        reason,
                        minimized_n: small.n(),
                        minimized_digits: small.to_digits(),
                    });
                }
            }
        }
    }
    Ok(rep)
}

/// Shrinks a failing colouring: drops vertices, then recolours triples to
/// colour 1, keeping each change only while `fails` still holds.
pub fn minimize<F: Fn(&Colouring) -> bool>(c: &Colouring, fails: F) -> Colouring {
    let mut cur = c.clone();
    let mut changed = true;
    while changed {
        changed = false;
        for v in (0..cur.n()).rev() {
            if cur.n() <= 3 {
                break;
            }
            let cand = cur.induced(cur.vertices() - VertexSet::single(v));
            if fails(&cand) {
                cur = cand;
                changed = true;
            }
        }
    }
    let ranks: Vec<usize> = (0..cur.table().len()).filter(|&r| cur.table()[r] != Colour::ONE).collect();
    for r in ranks {
        let t = crate::triple::unrank_triple(r, cur.n()).expect("rank in range");
        if let Ok(cand) = cur.with_colour(t, Colour::ONE) {
            if fails(&cand) {
                cur = cand;
            }
        }
    }
    cur
}
