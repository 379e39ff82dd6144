//! Intersecting spreads of two colours with no disjoint pair.

use super::one_spread::{one_spread_traced, OneSpreadOutcome};
use super::trace::{Event, EventKind, Trace};
use super::Step;
use crate::bounds::m_bound;
use crate::colour::{Colour, ColourSet};
use crate::colouring::{ColourLookup, Colouring, Framed};
use crate::error::{Error, Result};
use crate::matching::{chunk_matching, greedy_matching, Matching};
use crate::oracle::{kozos_perfect_12, matching_up_to, max_matching_in_colours, COLOUR_PAIRS};
use crate::structure::{is_clique, SpreadInfo};
use crate::triple::Triple;
use crate::vset::{combinations, VertexSet};

/// Search budget for the whole-set fallback above exact range.
const FALLBACK_BUDGET: u64 = 10_000_000;
const EXACT_FALLBACK_MAX: usize = 15;

/// Finishes an active set holding spreads `u` and `w` of different colours
/// that meet.
pub fn endgame(
    c: &Colouring,
    active: VertexSet,
    u: SpreadInfo,
    w: SpreadInfo,
    trace: &mut Trace,
) -> Result<Step<Matching>> {
    if u.colour == w.colour || !(u.sextuple | w.sextuple).is_subset(active) {
        return Err(Error::Precondition("endgame needs two spreads of different colours".into()));
    }
    for sp in [&u, &w] {
        match one_spread_traced(c, active - sp.sextuple, sp.colour, trace)? {
            OneSpreadOutcome::Escalate(wi) => return Ok(Step::Escalate(wi)),
            OneSpreadOutcome::NoTriplesOfColour(_) => {}
            OneSpreadOutcome::MatchingAvoiding(m) => {
                for split in [sp.plus_split(), sp.minus_split()] {
                    let mut out = m.clone();
                    out.extend(&split.to_matching());
                    if out.colours_used(c).len() <= 2 {
                        trace.emit(
                            Event::new(EventKind::EndgameStrategy, "complement of a spread plus its splitting")
                                .vertices(sp.sextuple)
                                .matchings(vec![out.clone()]),
                        );
                        return Ok(Step::Done(out.tag_avoided(c)));
                    }
                }
                return Err(Error::Faithfulness(format!(
                    "no splitting of {} extends the complement matching",
                    sp.sextuple
                )));
            }
        }
    }

    let f = if w.colour == u.colour.next() {
        Framed::rotated(c, u.colour)
    } else {
        Framed::rotated(c, u.colour).swap_two_three()
    };
    let g = Endgame::new(c, f, active, u, w)?;
    for strategy in [Strategy::Reextend, Strategy::Kozos, Strategy::Leftover, Strategy::Covering, Strategy::Search] {
        if let Some(m) = g.run(strategy) {
            trace.emit(
                Event::new(EventKind::EndgameStrategy, strategy.name())
                    .vertices(g.y)
                    .colours(m.colours_used(c).to_vec())
                    .matchings(vec![m.clone()]),
            );
            return Ok(Step::Done(m.tag_avoided(c)));
        }
    }
    Err(Error::Faithfulness(format!(
        "no endgame strategy reaches {} on {} vertices",
        g.target,
        active.len()
    )))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Strategy {
    Kozos,
    Leftover,
    Covering,
    Reextend,
    Search,
}

impl Strategy {
    fn name(self) -> &'static str {
        match self {
            Strategy::Kozos => "perfect matching on twelve vertices",
            Strategy::Leftover => "colour-3 matching plus monochromatic leftover",
            Strategy::Covering => "mixed covering around the shared vertex",
            Strategy::Reextend => "re-extended colour-3 matching",
            Strategy::Search => "bounded exact search",
        }
    }
}

struct Endgame<'a> {
    c: &'a Colouring,
    active: VertexSet,
    u: SpreadInfo,
    w: SpreadInfo,
    /// Actual colours of canonical 1, 2 and 3.
    cols: [Colour; 3],
    /// Vertices outside both spreads: a clique in colour 3.
    y: VertexSet,
    m3: Vec<Triple>,
    leftover: VertexSet,
    target: usize,
}

impl<'a> Endgame<'a> {
    fn new(c: &'a Colouring, f: Framed<'a>, active: VertexSet, u: SpreadInfo, w: SpreadInfo) -> Result<Self> {
        let cols = Colour::ALL.map(|k| f.actual(k));
        let y = active - u.sextuple - w.sextuple;
        if let Some(t) = is_clique(c, y, cols[2]) {
            return Err(Error::Faithfulness(format!("outside both spreads, {t} is not colour {}", cols[2])));
        }
        let mut m3 = chunk_matching(&y.to_vec());
        let covered = m3.iter().fold(VertexSet::EMPTY, |acc, t| acc | t.vertices());
        let ext = greedy_matching(c, active - covered, ColourSet::single(cols[2]));
        m3.extend(ext.triples);
        let covered = m3.iter().fold(VertexSet::EMPTY, |acc, t| acc | t.vertices());
        Ok(Endgame {
            c,
            active,
            u,
            w,
            cols,
            y,
            m3,
            leftover: active - covered,
            target: m_bound(active.len()),
        })
    }

    fn run(&self, s: Strategy) -> Option<Matching> {
        let m = match s {
            Strategy::Kozos => self.kozos(),
            Strategy::Leftover => self.leftover(),
            Strategy::Covering => self.covering(),
            Strategy::Reextend => self.reextend(),
            Strategy::Search => self.search(),
        }?;
        let ok = m.is_disjoint()
            && m.vertices().is_subset(self.active)
            && m.len() >= self.target
            && m.colours_used(self.c).len() <= 2;
        ok.then_some(m)
    }

    fn kozos(&self) -> Option<Matching> {
        (self.active.len() == 12)
            .then(|| kozos_perfect_12(self.c, self.active).ok().map(|k| k.matching))
            .flatten()
    }

    /// Largest single-colour matching on `l` in canonical colour 1 or 2.
    fn best_mono(&self, l: VertexSet) -> Matching {
        let a = max_matching_in_colours(self.c, l, ColourSet::single(self.cols[0]), None).matching;
        let b = max_matching_in_colours(self.c, l, ColourSet::single(self.cols[1]), None).matching;
        if b.len() > a.len() {
            b
        } else {
            a
        }
    }

    fn leftover(&self) -> Option<Matching> {
        let mut m = Matching::new(self.m3.clone());
        m.extend(&self.best_mono(self.leftover));
        Some(m)
    }

    /// Leaves two clique vertices out of the chunking and re-solves the
    /// colour-3 part exactly.
    fn reextend(&self) -> Option<Matching> {
        if self.leftover.len() < 10 || self.y.len() < 2 {
            return None;
        }
        let ys = self.y.to_vec();
        for [a, b] in combinations::<2>(&ys) {
            let rest_y = self.y.without(a).without(b).to_vec();
            let full = rest_y.len() - rest_y.len() % 3;
            let chunks = chunk_matching(&rest_y[..full]);
            let rest = self.active - chunks.iter().fold(VertexSet::EMPTY, |acc, t| acc | t.vertices());
            let third = max_matching_in_colours(self.c, rest, ColourSet::single(self.cols[2]), None).matching;
            let mono = self.best_mono(rest - third.vertices());
            if chunks.len() + third.len() + mono.len() >= self.target {
                let mut m = Matching::new(chunks);
                m.extend(&third);
                m.extend(&mono);
                return Some(m);
            }
        }
        None
    }

    /// Covers with triples mixing spread-side vertices and clique vertices,
    /// optionally after one splitting of a spread.
    fn covering(&self) -> Option<Matching> {
        let shared = self.u.sextuple & self.w.sextuple;
        if shared.len() != 1 || self.leftover.len() != 10 {
            return None;
        }
        let su = (self.u.sextuple - shared).to_vec();
        let sw = (self.w.sextuple - shared).to_vec();
        let ys = self.y.to_vec();
        let variants: [(Vec<Triple>, Vec<&[usize]>); 3] = [
            (vec![], vec![&su, &sw]),
            (self.w.minus_split().to_matching().triples, vec![&su]),
            (self.u.plus_split().to_matching().triples, vec![&sw]),
        ];
        for (base, sides) in variants {
            if let Some(m) = self.mixed_cover(base, &sides, &ys) {
                return Some(m);
            }
        }
        None
    }

    fn mixed_cover(&self, base: Vec<Triple>, sides: &[&[usize]], ys: &[usize]) -> Option<Matching> {
        let side_total: usize = sides.iter().map(|s| s.len()).sum();
        let pair_cap: usize = sides.iter().map(|s| s.len() / 2).sum();
        let need = self.target.checked_sub(base.len())?;
        let (mut best_a, mut best_b) = (0, 0);
        for b in 0..=pair_cap {
            for a in 0..=side_total {
                if a + 2 * b <= side_total && 2 * a + b <= ys.len() && a + b > best_a + best_b {
                    best_a = a;
                    best_b = b;
                }
            }
        }
        if best_a + best_b < need {
            return None;
        }
        let (a_count, b_count) = (best_a, best_b);
        let mut pairs = Vec::new();
        let mut singles = Vec::new();
        for s in sides {
            let mut i = 0;
            while i + 1 < s.len() && pairs.len() < b_count {
                pairs.push((s[i], s[i + 1]));
                i += 2;
            }
            singles.extend(&s[i..]);
        }
        let mut y_iter = ys.iter().copied();
        let mut triples = base;
        for (p, q) in pairs {
            triples.push(Triple::new(p, q, y_iter.next()?));
        }
        for &v in singles.iter().take(a_count) {
            triples.push(Triple::new(v, y_iter.next()?, y_iter.next()?));
        }
        let allowed = ColourSet::pair(self.cols[0], self.cols[1]);
        triples
            .iter()
            .all(|&t| allowed.contains(self.c.colour_t(t)))
            .then(|| Matching::new(triples))
    }

    fn search(&self) -> Option<Matching> {
        let budget = (self.active.len() > EXACT_FALLBACK_MAX).then_some(FALLBACK_BUDGET);
        COLOUR_PAIRS.iter().find_map(|&pair| {
            let r = matching_up_to(self.c, self.active, pair, self.target, budget);
            (r.size() >= self.target).then_some(r.matching)
        })
    }
}
