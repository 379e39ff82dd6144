mod common;

use proptest::prelude::*;

use hcg_core::bounds::m_bound;
use hcg_core::colouring::Colouring;
use hcg_core::extractor::{replay, solve, EventKind, Trace};
use hcg_core::generators::random_colouring;
use hcg_core::matching::verify_matching;
use hcg_core::structure::{classify_sextuple, WitnessKind};

const PROFILES: [[f64; 3]; 5] = [
    [1.0, 1.0, 1.0],
    [1.0, 1.0, 0.0],
    [6.0, 1.0, 1.0],
    [1.0, 3.0, 9.0],
    [1.0, 0.0, 0.0],
];

fn instance() -> impl Strategy<Value = Colouring> {
    (3usize..=30, any::<u64>(), 0..PROFILES.len())
        .prop_map(|(n, seed, p)| random_colouring(n, seed, PROFILES[p]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(160))]

    #[test]
    fn solve_is_sound_and_replays(c in instance()) {
        let s = solve(&c).unwrap();
        let rep = verify_matching(&c, &s.matching, m_bound(c.n()));
        prop_assert!(rep.valid, "{:?}", rep.violations);
        prop_assert!(s.matching.colours_used(&c).len() <= 2);
        if let Some(a) = s.matching.avoided {
            prop_assert!(!s.matching.colours_used(&c).contains(a));
        }
        let r = replay(&c, &s.trace);
        prop_assert!(r.ok(), "{:?}", r.problems);
    }

    #[test]
    fn restarts_are_bounded_and_measured(c in instance()) {
        let s = solve(&c).unwrap();
        prop_assert!(s.restarts <= c.n() + 2);
        let restarts: Vec<_> = s.trace.events.iter().filter(|e| e.kind == EventKind::Restart).collect();
        prop_assert_eq!(restarts.len(), s.restarts);
        for e in restarts {
            prop_assert!(e.measure.unwrap() < e.prior_measure.unwrap());
        }
    }

    #[test]
    fn witnesses_recheck_by_enumeration(c in instance()) {
        let s = solve(&c).unwrap();
        for e in &s.trace.events {
            match e.kind {
                EventKind::Peel6 | EventKind::Peel13 => {
                    prop_assert!(common::naive_universal(&c, &e.vertices.to_vec()));
                }
                EventKind::Witness => {
                    let w = e.witness.as_ref().unwrap();
                    prop_assert!(w.verify(&c));
                    match w.kind {
                        WitnessKind::Universal6 | WitnessKind::Universal13 => {
                            prop_assert!(common::naive_universal(&c, &w.vertices.to_vec()));
                        }
                        WitnessKind::LevelUpgrade => {
                            let class = classify_sextuple(&c, w.vertices).unwrap();
                            prop_assert_eq!(class.spread().map(|sp| sp.level), Some(2));
                        }
                        WitnessKind::ForeignSpread => {
                            prop_assert!(classify_sextuple(&c, w.vertices).unwrap().spread().is_some());
                        }
                        WitnessKind::Faithfulness => prop_assert!(false, "faithfulness witness recorded"),
                    }
                }
                _ => {}
            }
        }
    }

    #[test]
    fn peeling_arithmetic_from_trace(c in instance()) {
        let s = solve(&c).unwrap();
        let p6 = s.trace.count(EventKind::Peel6);
        let p13 = s.trace.count(EventKind::Peel13);
        let rest = c.n() - 6 * p6 - 13 * p13;
        prop_assert!(2 * p6 + 4 * p13 + m_bound(rest) >= m_bound(c.n()));
    }

    #[test]
    fn repeated_runs_are_identical(c in instance()) {
        let a = solve(&c).unwrap();
        let b = solve(&c.clone()).unwrap();
        prop_assert_eq!(&a.matching, &b.matching);
        let text = a.trace.to_jsonl();
        prop_assert_eq!(&text, &b.trace.to_jsonl());
        prop_assert_eq!(Trace::from_jsonl(c.n(), &text).unwrap(), a.trace);
    }

    #[test]
    fn never_beats_the_brute_force_maximum(n in 3usize..=11, seed in any::<u64>(), p in 0..PROFILES.len()) {
        let c = random_colouring(n, seed, PROFILES[p]).unwrap();
        let s = solve(&c).unwrap();
        let all: Vec<usize> = (0..n).collect();
        prop_assert!(s.matching.len() <= common::naive_two_coloured(&c, &all));
    }
}
