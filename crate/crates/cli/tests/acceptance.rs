//! Acceptance suite. Prints one PASS/FAIL line per criterion and fails if
//! any criterion fails. Time limits are part of each criterion.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use hcg_core::bounds::{m_bound, smallest_n_for};
use hcg_core::colour::Colour;
use hcg_core::colouring::Colouring;
use hcg_core::extractor::{replay, solve, EventKind};
use hcg_core::generators::{fixture, layered_lowest_colour, permute_colours, random_colouring, LayerSpec};
use hcg_core::matching::verify_matching;
use hcg_core::oracle::{afl_guarantee, afl_mono_matching, kozos_perfect_12, max_two_coloured};
use hcg_core::stress::instance_seed;
use hcg_core::structure::{classify_sextuple, WitnessKind};
use hcg_core::triple::Triple;
use hcg_core::vset::VertexSet;
use tempfile::TempDir;

const UNIFORM: [f64; 3] = [1.0, 1.0, 1.0];

struct Outcome {
    ok: bool,
    note: String,
}

fn outcome(ok: bool, note: impl Into<String>) -> Outcome {
    Outcome { ok, note: note.into() }
}

fn hcg(dir: &Path, args: &[&str]) -> (i32, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_hcg"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs");
    (o.status.code().unwrap_or(-1), String::from_utf8_lossy(&o.stdout).into_owned())
}

fn sharpness() -> Outcome {
    let d = TempDir::new().unwrap();
    let mut notes = Vec::new();
    let mut ok = true;
    for k in 2..=5usize {
        let file = format!("s{k}.hcg");
        let (gc, _) = hcg(d.path(), &["generate", "--sharpness", &k.to_string(), "-o", &file]);
        let (oc, out) = hcg(d.path(), &["oracle", &file, "--best-pair", "--json", "--require-exact"]);
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap_or_default();
        let n = doc["n"].as_u64().unwrap_or(0) as usize;
        let size = doc["size"].as_u64().unwrap_or(u64::MAX) as usize;
        ok &= gc == 0 && oc == 0 && n == smallest_n_for(k) - 1 && size == k - 1 && doc["exact"] == true;
        notes.push(format!("k={k}: n={n} max={size}"));
    }
    outcome(ok, notes.join(", "))
}

fn attainment() -> Outcome {
    let c = layered_lowest_colour(LayerSpec::new(1, 3, 9)).unwrap();
    let (_, r) = max_two_coloured(&c, c.vertices(), None);
    let s = solve(&c).unwrap();
    let valid = verify_matching(&c, &s.matching, 4).valid;
    outcome(
        r.exact && r.size() == 4 && m_bound(13) == 4 && s.matching.len() >= 4 && valid,
        format!("oracle={} exact={} solve={}", r.size(), r.exact, s.matching.len()),
    )
}

/// Tallies over the seeded uniform suite, shared by several criteria.
#[derive(Default)]
struct Suite {
    instances: u64,
    unsound: u64,
    faithfulness: u64,
    other_errors: u64,
    replay_failures: u64,
    witnesses: u64,
    bad_witnesses: u64,
    max_restart_excess: i64,
    oracle_checked: u64,
    dominance_violations: u64,
    inexact: u64,
}

fn audit(c: &Colouring, t: &mut Suite, with_oracle: bool) {
    let n = c.n();
    t.instances += 1;
    let s = match solve(c) {
        Ok(s) => s,
        Err(hcg_core::error::Error::Faithfulness(_)) => {
            t.faithfulness += 1;
            return;
        }
        Err(_) => {
            t.other_errors += 1;
            return;
        }
    };
    if !verify_matching(c, &s.matching, m_bound(n)).valid {
        t.unsound += 1;
    }
    if !replay(c, &s.trace).ok() {
        t.replay_failures += 1;
    }
    t.max_restart_excess = t.max_restart_excess.max(s.restarts as i64 - (n as i64 + 2));
    for e in &s.trace.events {
        let universal = match e.kind {
            EventKind::Peel6 | EventKind::Peel13 => Some(e.vertices),
            EventKind::Witness => e
                .witness
                .as_ref()
                .filter(|w| matches!(w.kind, WitnessKind::Universal6 | WitnessKind::Universal13))
                .map(|w| w.vertices),
            _ => None,
        };
        if let Some(x) = universal {
            t.witnesses += 1;
            if !universal_by_enumeration(c, x) {
                t.bad_witnesses += 1;
            }
        }
    }
    if with_oracle {
        let (_, r) = max_two_coloured(c, c.vertices(), None);
        t.oracle_checked += 1;
        if !r.exact {
            t.inexact += 1;
        }
        if s.matching.len() > r.size() {
            t.dominance_violations += 1;
        }
    }
}

/// Every colour avoidable by a near-perfect matching of `x`.
fn universal_by_enumeration(c: &Colouring, x: VertexSet) -> bool {
    fn best(c: &Colouring, vs: &[usize], avoid: Colour) -> usize {
        if vs.len() < 3 {
            return 0;
        }
        let (v, rest) = (vs[0], &vs[1..]);
        let mut b = best(c, rest, avoid);
        for i in 0..rest.len() {
            for j in i + 1..rest.len() {
                if b == vs.len() / 3 {
                    return b;
                }
                if c.get(v, rest[i], rest[j]) != avoid {
                    let left: Vec<usize> =
                        rest.iter().enumerate().filter(|&(p, _)| p != i && p != j).map(|(_, &u)| u).collect();
                    b = b.max(1 + best(c, &left, avoid));
                }
            }
        }
        b
    }
    let vs = x.to_vec();
    matches!(vs.len(), 6 | 13) && Colour::ALL.iter().all(|&g| best(c, &vs, g) == vs.len() / 3)
}

fn random_suite() -> (Suite, Suite) {
    let mut all = Suite::default();
    let mut small = Suite::default();
    for n in 9..=16 {
        for i in 0..500 {
            let c = random_colouring(n, instance_seed(20_240_601, n, i), UNIFORM).unwrap();
            if n <= 14 {
                audit(&c, &mut small, true);
            } else {
                audit(&c, &mut all, false);
            }
        }
    }
    // the oracle-checked runs belong to the overall suite too
    all.instances += small.instances;
    all.unsound += small.unsound;
    all.faithfulness += small.faithfulness;
    all.other_errors += small.other_errors;
    all.replay_failures += small.replay_failures;
    all.witnesses += small.witnesses;
    all.bad_witnesses += small.bad_witnesses;
    all.max_restart_excess = all.max_restart_excess.max(small.max_restart_excess);
    (all, small)
}

fn structured_suite() -> Suite {
    let mut t = Suite::default();
    let profiles = [[1.0, 1.0, 0.0], [6.0, 1.0, 1.0], [1.0, 3.0, 9.0], [1.0, 1.0, 1.0]];
    for n in 9..=24 {
        for (p, w) in profiles.iter().enumerate() {
            for i in 0..40 {
                let c = random_colouring(n, instance_seed(77 + p as u64, n, i), *w).unwrap();
                audit(&c, &mut t, false);
            }
        }
    }
    for a in 0..=4 {
        for b in 0..=6 {
            for cc in 0..=12 {
                if a + b + cc >= 3 {
                    audit(&layered_lowest_colour(LayerSpec::new(a, b, cc)).unwrap(), &mut t, false);
                }
            }
        }
    }
    t
}

fn twelve_vertices() -> Outcome {
    let mut failures = 0;
    let mut wrong_counts = 0;
    let mut not_perfect = 0;
    for i in 0..2000 {
        let c = random_colouring(12, instance_seed(2, 12, i), UNIFORM).unwrap();
        match kozos_perfect_12(&c, c.vertices()) {
            Ok(k) => {
                if k.candidates != 15400 {
                    wrong_counts += 1;
                }
                if k.matching.len() != 4 || k.matching.colours_used(&c).len() > 2 || !k.matching.is_disjoint() {
                    failures += 1;
                }
            }
            Err(_) => failures += 1,
        }
        if solve(&c).map(|s| s.matching.len()).unwrap_or(0) != 4 {
            not_perfect += 1;
        }
    }
    outcome(
        failures == 0 && wrong_counts == 0 && not_perfect == 0,
        format!("2000 instances, {failures} without a perfect matching, {wrong_counts} bad counts, {not_perfect} solves below 4"),
    )
}

fn two_colour_guarantee() -> Outcome {
    let mut below = 0;
    let mut count = 0u64;
    for i in 0..100_000u64 {
        let n = 3 + (i % 8) as usize;
        let c = random_colouring(n, instance_seed(6, n, i), UNIFORM).unwrap();
        // fold the three colours onto a pair that changes with i
        let a = Colour::from_index((i / 8 % 3) as usize);
        let b = a.next();
        let c = permute_colours(&c, [a, b, b]);
        count += 1;
        match afl_mono_matching(&c, c.vertices()) {
            Ok(m) if m.len() >= afl_guarantee(n) && m.colours_used(&c).len() <= 1 => {}
            _ => below += 1,
        }
    }
    let pinned = afl_guarantee(3) == 1 && afl_guarantee(6) == 1 && afl_guarantee(7) == 2;
    outcome(below == 0 && pinned, format!("{count} instances, {below} below floor((|S|+1)/4)"))
}

fn peeling_arithmetic() -> Outcome {
    let bad = (13..=100_000usize)
        .filter(|&n| m_bound(n) - m_bound(n - 6) > 2 || m_bound(n) - m_bound(n - 13) != 4)
        .count();
    outcome(bad == 0, format!("13 <= n <= 100000, {bad} exceptions"))
}

fn structure_fixtures() -> Outcome {
    let six = VertexSet::range(6);
    let a = classify_sextuple(&fixture("FIX-A").unwrap(), six).unwrap();
    let b = classify_sextuple(&fixture("FIX-B").unwrap(), six).unwrap();
    let c = classify_sextuple(&fixture("FIX-C").unwrap(), six).unwrap();
    let spread = |x: &hcg_core::structure::SextupleClass, level| {
        x.spread().is_some_and(|s| s.colour == Colour::ONE && s.level == level) && !x.universal
    };
    let t = |i, j, k| Triple::new(i, j, k);
    let b_ok = b.universal
        && b.avoiding_matchings().is_some_and(|[m1, m2, m3]| {
            m1.triples == [t(0, 1, 3), t(2, 4, 5)]
                && m2.triples == [t(0, 1, 2), t(3, 4, 5)]
                && m3.triples == [t(0, 1, 2), t(3, 4, 5)]
        });
    outcome(
        spread(&a, 1) && spread(&c, 2) && b_ok,
        "FIX-A spread 1/1, FIX-C spread 1/2, FIX-B universal",
    )
}

fn determinism() -> Outcome {
    let d = TempDir::new().unwrap();
    let mut ok = true;
    let inputs = [
        vec!["generate", "--layers", "1,3,9", "-o", "in0.hcg"],
        vec!["generate", "--random", "20", "--seed", "11", "-o", "in1.hcg"],
        vec!["generate", "--random", "26", "--seed", "5", "--weights", "1,3,9", "-o", "in2.hcg"],
    ];
    for (i, g) in inputs.iter().enumerate() {
        ok &= hcg(d.path(), g).0 == 0;
        let input = format!("in{i}.hcg");
        let mut runs = Vec::new();
        for r in 0..2 {
            // same input bytes under a fresh name each time
            let copy = format!("copy{i}_{r}.hcg");
            fs::copy(d.path().join(&input), d.path().join(&copy)).unwrap();
            let (code, _) = hcg(d.path(), &["solve", &copy, "--trace", "t.jsonl", "-o", "m.json"]);
            ok &= code == 0;
            runs.push((fs::read(d.path().join("m.json")).unwrap(), fs::read(d.path().join("t.jsonl")).unwrap()));
        }
        ok &= runs[0] == runs[1] && !runs[0].1.is_empty();
    }
    outcome(ok, "three inputs, two runs each, matching documents and traces compared bytewise")
}

fn scale() -> Outcome {
    let c = random_colouring(30, 30, UNIFORM).unwrap();
    let s = solve(&c);
    let ok = s.as_ref().is_ok_and(|s| verify_matching(&c, &s.matching, m_bound(30)).valid);
    outcome(ok, format!("n=30 size={}", s.map(|s| s.matching.len()).unwrap_or(0)))
}

#[test]
fn acceptance() {
    let mut lines = Vec::new();
    let mut all_ok = true;
    let mut record = |name: &str, limit: Option<Duration>, elapsed: Duration, o: Outcome| {
        let in_time = limit.is_none_or(|l| elapsed <= l);
        let ok = o.ok && in_time;
        all_ok &= ok;
        let limit = limit.map_or(String::new(), |l| format!(" / limit {} s", l.as_secs()));
        let line = format!(
            "{} {name}: {} ({:.2} s{limit})",
            if ok { "PASS" } else { "FAIL" },
            o.note,
            elapsed.as_secs_f64()
        );
        // straight to the stream so the lines survive output capture
        let _ = writeln!(std::io::stderr(), "{line}");
        lines.push(line);
    };
    let secs = |s| Some(Duration::from_secs(s));

    let t = Instant::now();
    let o = sharpness();
    record("sharpness", secs(60), t.elapsed(), o);

    let t = Instant::now();
    let o = attainment();
    record("attainment", secs(10), t.elapsed(), o);

    let t = Instant::now();
    let (suite, small) = random_suite();
    let suite_time = t.elapsed();
    record(
        "random soundness",
        secs(600),
        suite_time,
        outcome(
            suite.instances == 4000 && suite.unsound == 0 && suite.faithfulness == 0 && suite.other_errors == 0,
            format!("{} instances, {} unsound, {} errors", suite.instances, suite.unsound, suite.faithfulness + suite.other_errors),
        ),
    );
    record(
        "oracle dominance",
        None,
        suite_time,
        outcome(
            small.oracle_checked == 3000 && small.dominance_violations == 0 && small.inexact == 0,
            format!(
                "{} oracle runs, {} violations, {} inexact",
                small.oracle_checked, small.dominance_violations, small.inexact
            ),
        ),
    );

    let t = Instant::now();
    let o = twelve_vertices();
    record("twelve-vertex perfect matchings", secs(300), t.elapsed(), o);

    let t = Instant::now();
    let o = two_colour_guarantee();
    record("monochromatic matching in two colours", secs(300), t.elapsed(), o);

    let t = Instant::now();
    let o = peeling_arithmetic();
    record("peeling arithmetic", secs(1), t.elapsed(), o);

    let t = Instant::now();
    let o = structure_fixtures();
    record("structure fixtures", secs(1), t.elapsed(), o);

    let t = Instant::now();
    let extra = structured_suite();
    let witnesses = suite.witnesses + extra.witnesses;
    let bad = suite.bad_witnesses + extra.bad_witnesses;
    let faith = suite.faithfulness + extra.faithfulness;
    let excess = suite.max_restart_excess.max(extra.max_restart_excess);
    let replays = suite.replay_failures + extra.replay_failures;
    record(
        "witness validity",
        None,
        t.elapsed(),
        outcome(
            witnesses > 0 && bad == 0 && faith == 0 && excess <= 0 && replays == 0 && extra.unsound == 0,
            format!(
                "{} runs, {witnesses} universal witnesses rechecked, {bad} invalid, {faith} faithfulness errors, restarts within n+2: {}",
                suite.instances + extra.instances,
                excess <= 0
            ),
        ),
    );

    let t = Instant::now();
    let o = determinism();
    record("determinism", None, t.elapsed(), o);

    let t = Instant::now();
    let o = scale();
    record("scale", secs(30), t.elapsed(), o);

    assert!(all_ok, "failing criteria:\n{}", lines.iter().filter(|l| l.starts_with("FAIL")).cloned().collect::<Vec<_>>().join("\n"));
}
