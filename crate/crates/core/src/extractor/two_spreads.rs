//! Two disjoint spreads of different colours: hat growth, clique checks and
//! the clique merge.

use serde::{Deserialize, Serialize};

use super::trace::{Event, EventKind, Trace};
use super::{assert_all, escalate, first_violation, Step};
use crate::colour::{Colour, ColourSet};
use crate::colouring::{ColourLookup, Colouring, Framed};
use crate::error::{Error, Result};
use crate::matching::{chunk_matching, Matching};
use crate::structure::{
    check_universal_13, classify_sextuple, is_clique, spread_at, SpreadInfo, Witness, WitnessKind,
};
use crate::triple::Triple;
use crate::vset::{combinations, subsets_of_size, VertexSet};

/// The two growing vertex sets attached to a spread pair. `spreads[0]`
/// has canonical colour 1 and `spreads[1]` canonical colour 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HatSets {
    pub hat1: VertexSet,
    pub hat2: VertexSet,
    pub spreads: [SpreadInfo; 2],
}

/// The two dominant triples of the sextuple `core ∪ d`.
fn dominant_triples(sp: &SpreadInfo, d: VertexSet) -> [Triple; 2] {
    [
        Triple::from_set((sp.core - sp.p.vertices()) | d),
        Triple::from_set((sp.core - sp.n.vertices()) | d),
    ]
}

/// A replacement of the dominating vertices inside `hat` under which
/// swapping `w` into a dominant triple changes its colour away from `i`.
fn spoiler<C: ColourLookup + ?Sized>(
    f: &C,
    sp: &SpreadInfo,
    i: Colour,
    hat: VertexSet,
    w: usize,
) -> Option<VertexSet> {
    subsets_of_size(hat, usize::from(sp.level)).find(|&d| {
        dominant_triples(sp, d).iter().any(|t| {
            t.vertices()
                .iter()
                .any(|x| f.colour_t(Triple::from_set(t.vertices().without(x).with(w))) != i)
        })
    })
}

impl HatSets {
    fn frame<'a>(&self, c: &'a Colouring) -> Framed<'a> {
        Framed::rotated(c, self.spreads[0].colour)
    }

    /// Re-checks the closure properties of both sets from scratch.
    pub fn verify(&self, c: &Colouring) -> bool {
        let f = self.frame(c);
        if !self.hat1.is_disjoint(self.hat2) {
            return false;
        }
        [(self.hat1, 0), (self.hat2, 1)].into_iter().all(|(hat, k)| {
            let sp = &self.spreads[k];
            let other = &self.spreads[1 - k];
            let i = Colour::from_index(k);
            sp.dominating.is_subset(hat)
                && hat.is_disjoint(sp.core)
                && hat.is_disjoint(other.sextuple)
                && subsets_of_size(hat, usize::from(sp.level)).all(|d| {
                    dominant_triples(sp, d).iter().all(|&t| {
                        f.colour_t(t) == i
                            && (hat - d).iter().all(|w| {
                                t.vertices().iter().all(|x| {
                                    f.colour_t(Triple::from_set(t.vertices().without(x).with(w))) == i
                                })
                            })
                    })
                })
        })
    }
}

/// Builds a near-perfect matching of `active` in two colours from the
/// disjoint spreads `a` and `b`, or returns the witness that blocks it.
pub fn proc_two_spreads(
    c: &Colouring,
    active: VertexSet,
    a: SpreadInfo,
    b: SpreadInfo,
    trace: &mut Trace,
) -> Result<Step<Matching>> {
    if a.colour == b.colour || !a.sextuple.is_disjoint(b.sextuple) {
        return Err(Error::Precondition("spreads must be disjoint and of different colours".into()));
    }
    if !(a.sextuple | b.sextuple).is_subset(active) || !a.holds(c) || !b.holds(c) {
        return Err(Error::Precondition("spreads must hold inside the active set".into()));
    }
    let (a1, a2) = if b.colour == a.colour.next() { (a, b) } else { (b, a) };
    let f = Framed::rotated(c, a1.colour);
    let mut hats = HatSets { hat1: a1.dominating, hat2: a2.dominating, spreads: [a1, a2] };

    for w in active - a1.sextuple - a2.sextuple {
        let Some(d1) = spoiler(&f, &a1, Colour::ONE, hats.hat1, w) else {
            hats.hat1.insert(w);
            continue;
        };
        let Some(d2) = spoiler(&f, &a2, Colour::TWO, hats.hat2, w) else {
            hats.hat2.insert(w);
            continue;
        };
        let x = (a1.core | d1 | a2.core | d2).with(w);
        if let Some(ms) = check_universal_13(c, x)? {
            return Ok(Step::Escalate(Witness::universal13(
                x,
                ms,
                format!("vertex {w} joins neither hat"),
            )));
        }
        return escalate(c, x, None, &format!("vertex {w} joins neither hat")).map(Step::Escalate);
    }

    let k1 = hats.hat1 | a1.m_plus.vertices();
    let k2 = hats.hat2 | a2.m_minus.vertices();
    for (k, sp, hat, i) in [(k1, &a1, hats.hat1, Colour::ONE), (k2, &a2, hats.hat2, Colour::TWO)] {
        if let Some(t) = is_clique(&f, k, i) {
            return clique_failure(c, sp, hat, t).map(Step::Escalate);
        }
    }

    let colours = (f.actual(Colour::ONE), f.actual(Colour::TWO));
    let merged = match cliques2matching(c, k1, k2, colours)? {
        Step::Done(m) => m,
        Step::Escalate(w) => return Ok(Step::Escalate(w)),
    };
    trace.emit(
        Event::new(EventKind::CliqueMerge, "merge hat cliques")
            .sets(vec![k1, k2])
            .colours(vec![colours.0, colours.1])
            .asserted(assert_all(c, &[a1.p, a2.n]))
            .matchings(vec![merged.clone()]),
    );
    let mut out = merged;
    out.triples.push(a1.p);
    out.triples.push(a2.n);
    let avoided = f.actual(Colour::THREE);
    if out.colours_used(c).contains(avoided) || out.len() != active.len() / 3 {
        return Err(Error::Faithfulness(format!(
            "two-spread matching of size {} does not avoid colour {avoided}",
            out.len()
        )));
    }
    Ok(Step::Done(out.with_avoided(Some(avoided))))
}

/// Turns a non-clique triple `t` inside a hat clique into a witness.
fn clique_failure(c: &Colouring, sp: &SpreadInfo, hat: VertexSet, t: Triple) -> Result<Witness> {
    if sp.level == 1 {
        for x in t.vertices() & hat {
            let v: [usize; 6] = sp.core.with(x).to_vec().try_into().expect("six vertices");
            if let Some(up) = spread_at(c, &v) {
                if up.level == 2 && up.colour == sp.colour {
                    return Ok(Witness::spread(
                        WitnessKind::LevelUpgrade,
                        up,
                        format!("level-2 spread through hat vertex {x}"),
                    ));
                }
            }
        }
    }
    escalate(c, t.vertices() | sp.sextuple, None, &format!("hat clique broken by {t}"))
}

/// Near-perfect matching of `u ∪ w` in the two clique colours, for
/// disjoint cliques `u` (colour `colours.0`) and `w` (colour `colours.1`).
pub fn cliques2matching(
    c: &Colouring,
    u: VertexSet,
    w: VertexSet,
    colours: (Colour, Colour),
) -> Result<Step<Matching>> {
    if u.len() < 3 || w.len() < 3 || !u.is_disjoint(w) || colours.0 == colours.1 {
        return Err(Error::Precondition("cliques must be disjoint with at least 3 vertices".into()));
    }
    if is_clique(c, u, colours.0).is_some() || is_clique(c, w, colours.1).is_some() {
        return Err(Error::Precondition("inputs must be cliques in their colours".into()));
    }
    let allowed = ColourSet::pair(colours.0, colours.1);
    let third = allowed.first_missing().expect("two colours allowed");
    let total = (u.len() + w.len()) / 3;

    let triples = if u.len() % 3 + w.len() % 3 <= 2 {
        let mut ts = chunk_matching(&u.to_vec());
        ts.extend(chunk_matching(&w.to_vec()));
        ts
    } else {
        let (big, small) = if u.len() % 3 == 2 { (u, w) } else { (w, u) };
        let items = (u | w).to_vec();
        let cross = combinations::<3>(&items).map(Triple::from_array).find(|t| {
            (t.vertices() & big).len() == 2 && allowed.contains(c.colour_t(*t))
        });
        match cross {
            Some(e) => {
                let mut ts = vec![e];
                ts.extend(chunk_matching(&(big - e.vertices()).to_vec()));
                ts.extend(chunk_matching(&(small - e.vertices()).to_vec()));
                ts
            }
            None => {
                let bu = big.to_vec();
                let sw = small.to_vec();
                let cand: VertexSet = if c.lookup(bu[0], sw[0], sw[1]) == third {
                    [bu[0], bu[1], bu[2], sw[0], sw[1], sw[2]].into_iter().collect()
                } else {
                    [bu[0], bu[1], bu[2], bu[3], sw[0], sw[1]].into_iter().collect()
                };
                if let Some(wi) = Witness::universal6(&classify_sextuple(c, cand)?, "no cross triple between cliques") {
                    return Ok(Step::Escalate(wi));
                }
                let region: VertexSet = bu[..4].iter().chain(&sw[..3]).copied().collect();
                return escalate(c, region, None, "no cross triple between cliques").map(Step::Escalate);
            }
        }
    };
    let m = Matching::new(triples);
    let checks: Vec<(Triple, ColourSet)> = m.triples.iter().map(|&t| (t, allowed)).collect();
    if let Some(t) = first_violation(c, &checks) {
        return Err(Error::Faithfulness(format!("clique merge uses {t} outside {allowed}")));
    }
    if m.len() != total || !m.is_disjoint() {
        return Err(Error::Faithfulness(format!("clique merge has size {}, expected {total}", m.len())));
    }
    Ok(Step::Done(m.with_avoided(Some(third))))
}
