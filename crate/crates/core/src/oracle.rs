//! Exact reference solvers.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::colour::{Colour, ColourSet};
use crate::colouring::ColourLookup;
use crate::error::{Error, Result};
use crate::matching::Matching;
use crate::packing::for_each_packing;
use crate::structure::{check_universal_13, classify_sextuple};
use crate::triple::Triple;
use crate::vset::VertexSet;

pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub matching: Matching,
    /// The size is the true maximum; false when the budget ran out.
    pub exact: bool,
    pub explored: u64,
    pub budget_hit: bool,
}

impl OracleResult {
    pub fn size(&self) -> usize {
        self.matching.len()
    }
}

struct Search<'a, C: ?Sized> {
    c: &'a C,
    allowed: ColourSet,
    budget: u64,
    explored: u64,
    goal: usize,
    best: Vec<Triple>,
    cur: Vec<Triple>,
}

impl<C: ColourLookup + ?Sized> Search<'_, C> {
    /// Returns `Break` once the budget is spent or the goal is met.
    fn run(&mut self, remaining: VertexSet) -> ControlFlow<()> {
        self.explored += 1;
        if self.explored > self.budget {
            return ControlFlow::Break(());
        }
        if self.cur.len() > self.best.len() {
            self.best.clone_from(&self.cur);
        }
        if self.best.len() >= self.goal {
            return ControlFlow::Break(());
        }
        if self.cur.len() + remaining.len() / 3 <= self.best.len() {
            return ControlFlow::Continue(());
        }
        let Some(v) = remaining.min() else {
            return ControlFlow::Continue(());
        };
        let rest = remaining.without(v);
        let items = rest.to_vec();
        for (bi, &b) in items.iter().enumerate() {
            for &a in &items[..bi] {
                if self.allowed.contains(self.c.lookup(v, a, b)) {
                    self.cur.push(Triple { i: v, j: a, k: b });
                    let flow = self.run(rest.without(a).without(b));
                    self.cur.pop();
                    flow?;
                }
            }
        }
        self.run(rest)
    }
}

/// Maximum matching on `vertices` whose triples all have a colour in
/// `allowed`, by branch and bound on the lowest uncovered vertex.
pub fn max_matching_in_colours<C: ColourLookup + ?Sized>(
    c: &C,
    vertices: VertexSet,
    allowed: ColourSet,
    budget: Option<u64>,
) -> OracleResult {
    matching_up_to(c, vertices, allowed, vertices.len() / 3, budget)
}

/// Like [`max_matching_in_colours`] but stops as soon as a matching of
/// size `goal` is found. `exact` then means "maximum, or at least `goal`".
pub fn matching_up_to<C: ColourLookup + ?Sized>(
    c: &C,
    vertices: VertexSet,
    allowed: ColourSet,
    goal: usize,
    budget: Option<u64>,
) -> OracleResult {
    let mut s = Search {
        c,
        allowed,
        budget: budget.unwrap_or(DEFAULT_BUDGET),
        explored: 0,
        goal,
        best: Vec::new(),
        cur: Vec::new(),
    };
    let flow = s.run(vertices);
    let budget_hit = flow.is_break() && s.best.len() < s.goal;
    OracleResult {
        matching: Matching::new(s.best),
        exact: !budget_hit,
        explored: s.explored,
        budget_hit,
    }
}

/// The colour pairs in lexicographic order.
pub const COLOUR_PAIRS: [ColourSet; 3] = [
    ColourSet::from_bits(0b011),
    ColourSet::from_bits(0b101),
    ColourSet::from_bits(0b110),
];

/// Maximum 2-coloured matching on `vertices`; ties go to the smallest pair.
pub fn max_two_coloured<C: ColourLookup + ?Sized>(
    c: &C,
    vertices: VertexSet,
    budget: Option<u64>,
) -> (ColourSet, OracleResult) {
    let perfect = vertices.len() / 3;
    let mut best: Option<(ColourSet, OracleResult)> = None;
    let mut explored = 0;
    let mut exact = true;
    for pair in COLOUR_PAIRS {
        let r = max_matching_in_colours(c, vertices, pair, budget);
        explored += r.explored;
        exact &= r.exact;
        let done = r.size() == perfect;
        if best.as_ref().is_none_or(|(_, b)| r.size() > b.size()) {
            let avoided = pair.first_missing();
            let matching = r.matching.clone().with_avoided(avoided);
            best = Some((pair, OracleResult { matching, ..r }));
        }
        if done {
            break;
        }
    }
    let (pair, mut r) = best.expect("three pairs tried");
    r.explored = explored;
    r.exact = exact;
    r.budget_hit = !exact;
    (pair, r)
}

/// A monochromatic matching on a set spanning at most two colours, of the
/// largest size available in a single colour.
pub fn afl_mono_matching<C: ColourLookup + ?Sized>(c: &C, vertices: VertexSet) -> Result<Matching> {
    let present = colours_within(c, vertices);
    if present.len() > 2 {
        return Err(Error::Precondition(format!(
            "vertex set {vertices} spans three colours"
        )));
    }
    let mut best = Matching::default();
    for a in Colour::ALL {
        if best.len() == vertices.len() / 3 {
            break;
        }
        let r = max_matching_in_colours(c, vertices, ColourSet::single(a), None);
        if r.size() > best.len() {
            best = r.matching;
        }
    }
    Ok(best)
}

/// The guaranteed size `⌊(|S|+1)/4⌋` of a monochromatic matching on a
/// 2-coloured set `S`.
pub fn afl_guarantee(size: usize) -> usize {
    (size + 1) / 4
}

fn colours_within<C: ColourLookup + ?Sized>(c: &C, w: VertexSet) -> ColourSet {
    let items = w.to_vec();
    let mut seen = ColourSet::EMPTY;
    for [i, j, k] in crate::vset::combinations::<3>(&items) {
        seen.insert(c.lookup(i, j, k));
        if seen == ColourSet::ALL {
            break;
        }
    }
    seen
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KozosResult {
    pub matching: Matching,
    /// Perfect matchings enumerated; always 15400.
    pub candidates: u64,
}

/// First perfect matching of a 12-set using at most two colours, found by
/// enumerating all 15400 perfect matchings.
pub fn kozos_perfect_12<C: ColourLookup + ?Sized>(c: &C, vertices: VertexSet) -> Result<KozosResult> {
    if vertices.len() != 12 {
        return Err(Error::Input(format!("expected 12 vertices, got {}", vertices.len())));
    }
    let mut found: Option<Matching> = None;
    let candidates = for_each_packing(vertices, 4, |_| true, |ts| {
        if found.is_none() {
            let m = Matching::new(ts.to_vec());
            if m.colours_used(c).len() <= 2 {
                found = Some(m.tag_avoided(c));
            }
        }
        ControlFlow::Continue(())
    });
    match found {
        Some(matching) => Ok(KozosResult { matching, candidates }),
        None => Err(Error::Faithfulness(format!(
            "no perfect matching of {vertices} uses at most two colours"
        ))),
    }
}

/// The three avoid-γ near-perfect matchings of a universal 6- or 13-set.
pub fn pair_avoiding_matchings<C: ColourLookup + ?Sized>(c: &C, s: VertexSet) -> Result<[Matching; 3]> {
    match s.len() {
        6 => classify_sextuple(c, s)?
            .avoiding_matchings()
            .ok_or_else(|| Error::Witness(format!("sextuple {s} is not universal"))),
        13 => check_universal_13(c, s)?
            .ok_or_else(|| Error::Witness(format!("13-set {s} is not universal"))),
        other => Err(Error::Input(format!("expected 6 or 13 vertices, got {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::Colouring;
    use crate::generators::{fixture, layered_lowest_colour, random_colouring, sharpness_instance, LayerSpec};
    use crate::vset::combinations;
    use proptest::prelude::*;

    /// Plain exhaustive recursion over all triples, no pruning.
    fn naive_max(c: &Colouring, w: VertexSet, allowed: ColourSet) -> usize {
        let items = w.to_vec();
        let triples: Vec<Triple> = combinations::<3>(&items)
            .map(Triple::from_array)
            .filter(|&t| allowed.contains(c.colour_t(t)))
            .collect();
        fn go(ts: &[Triple], used: VertexSet) -> usize {
            match ts.split_first() {
                None => 0,
                Some((&t, rest)) => {
                    let skip = go(rest, used);
                    if used.is_disjoint(t.vertices()) {
                        skip.max(1 + go(rest, used | t.vertices()))
                    } else {
                        skip
                    }
                }
            }
        }
        go(&triples, VertexSet::EMPTY)
    }

    #[test]
    fn basic_examples() {
        let one = Colouring::constant(9, Colour::ONE).unwrap();
        let r = max_matching_in_colours(&one, one.vertices(), ColourSet::single(Colour::ONE), None);
        assert_eq!(r.size(), 3);
        assert!(r.exact);
        let r = max_matching_in_colours(&one, VertexSet::EMPTY, ColourSet::ALL, None);
        assert_eq!(r.size(), 0);
        assert!(r.exact);

        let one14 = Colouring::constant(14, Colour::ONE).unwrap();
        let (pair, r) = max_two_coloured(&one14, one14.vertices(), None);
        assert_eq!(r.size(), 4);
        assert_eq!(pair, ColourSet::pair(Colour::ONE, Colour::TWO));
    }

    #[test]
    fn sharpness_and_layered() {
        let c = sharpness_instance(4).unwrap();
        assert_eq!(c.n(), 11);
        for pair in COLOUR_PAIRS {
            let r = max_matching_in_colours(&c, c.vertices(), pair, None);
            assert_eq!(r.size(), 3, "pair {pair}");
        }
        assert_eq!(max_two_coloured(&c, c.vertices(), None).1.size(), 3);

        let c = layered_lowest_colour(LayerSpec::new(1, 3, 9)).unwrap();
        assert_eq!(max_two_coloured(&c, c.vertices(), None).1.size(), 4);
    }

    #[test]
    fn budget_is_reported() {
        let c = random_colouring(16, 3, [1.0, 1.0, 1.0]).unwrap();
        let r = max_matching_in_colours(&c, c.vertices(), ColourSet::single(Colour::ONE), Some(5));
        assert!(r.explored <= 6);
        if r.budget_hit {
            assert!(!r.exact);
        }
    }

    #[test]
    fn afl_examples() {
        let one = Colouring::constant(10, Colour::ONE).unwrap();
        assert_eq!(afl_mono_matching(&one, one.vertices()).unwrap().len(), 3);
        let b = fixture("FIX-B").unwrap();
        assert!(matches!(
            afl_mono_matching(&b, b.vertices()),
            Err(Error::Precondition(_))
        ));
        assert_eq!(afl_guarantee(3), 1);
        assert_eq!(afl_guarantee(7), 2);
    }

    #[test]
    fn kozos_examples() {
        let one = Colouring::constant(12, Colour::ONE).unwrap();
        let k = kozos_perfect_12(&one, one.vertices()).unwrap();
        assert_eq!(k.matching.len(), 4);
        assert_eq!(k.candidates, 15_400);
        assert_eq!(k.matching.colours_used(&one), ColourSet::single(Colour::ONE));

        let c = random_colouring(12, 11, [1.0, 1.0, 1.0]).unwrap();
        let k = kozos_perfect_12(&c, c.vertices()).unwrap();
        assert_eq!(k.matching.len(), 4);
        assert!(k.matching.is_disjoint());
        assert!(k.matching.colours_used(&c).len() <= 2);
        assert!(kozos_perfect_12(&c, VertexSet::range(11)).is_err());
    }

    #[test]
    fn pair_avoiding_examples() {
        let b = fixture("FIX-B").unwrap();
        let [m1, m2, m3] = pair_avoiding_matchings(&b, b.vertices()).unwrap();
        assert_eq!(m1.triples, vec![Triple::new(0, 1, 3), Triple::new(2, 4, 5)]);
        assert_eq!(m2.triples, vec![Triple::new(0, 1, 2), Triple::new(3, 4, 5)]);
        assert_eq!(m3.triples, m2.triples);
        let a = fixture("FIX-A").unwrap();
        assert!(matches!(pair_avoiding_matchings(&a, a.vertices()), Err(Error::Witness(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn branch_and_bound_matches_naive(n in 3usize..=9, seed in any::<u64>(), mask in 1u8..8) {
            let c = random_colouring(n, seed, [1.0, 1.0, 1.0]).unwrap();
            let allowed = ColourSet::from_bits(mask);
            let r = max_matching_in_colours(&c, c.vertices(), allowed, None);
            prop_assert!(r.exact);
            prop_assert!(r.matching.is_disjoint());
            prop_assert!(r.matching.triples.iter().all(|&t| allowed.contains(c.colour_t(t))));
            prop_assert_eq!(r.size(), naive_max(&c, c.vertices(), allowed));
        }

        #[test]
        fn two_coloured_is_monotone(n in 3usize..=11, seed in any::<u64>()) {
            let c = random_colouring(n + 1, seed, [1.0, 1.0, 1.0]).unwrap();
            let small = max_two_coloured(&c, VertexSet::range(n), None).1.size();
            let big = max_two_coloured(&c, VertexSet::range(n + 1), None).1.size();
            prop_assert!(big >= small);
        }

        #[test]
        fn afl_guarantee_holds(n in 3usize..=10, seed in any::<u64>(), a in 0usize..3, b in 0usize..3) {
            let pair = [Colour::from_index(a), Colour::from_index(b)];
            let c = random_colouring(n, seed, [1.0, 1.0, 1.0]).unwrap();
            let c = crate::generators::permute_colours(&c, [pair[0], pair[1], pair[1]]);
            let m = afl_mono_matching(&c, c.vertices()).unwrap();
            prop_assert!(m.len() >= afl_guarantee(n));
            prop_assert!(m.colours_used(&c).len() <= 1);
        }
    }
}
