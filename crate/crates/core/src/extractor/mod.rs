//! The constructive pipeline: peel universal sets, dispatch on the spread
//! structure of what remains, and assemble a 2-coloured matching of size at
//! least `m_bound(n)`.

mod endgame;
mod one_spread;
pub mod trace;
mod two_spreads;

use serde::{Deserialize, Serialize};

use crate::bounds::m_bound;
use crate::colour::{Colour, ColourSet};
use crate::colouring::{ColourLookup, Colouring};
use crate::error::{Error, Result};
use crate::matching::{chunk_matching, verify_matching, Matching};
use crate::structure::{
    find_witness, quick_classify_at, scan_inventory, scan_spreads, spread_at, SpreadInfo,
    SpreadRecord, Witness, WitnessKind, WITNESS_SCOPE,
};
use crate::triple::Triple;
use crate::vset::{combinations, VertexSet};

pub use endgame::endgame;
pub use one_spread::{proc_one_spread, OneSpreadOutcome};
pub use trace::{replay, Event, EventKind, Measure, ReplayReport, Trace};
pub use two_spreads::{cliques2matching, proc_two_spreads, HatSets};

/// A procedure either finishes or hands back a contradiction object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step<T> {
    Done(T),
    Escalate(Witness),
}

/// Deficit recorded when dispatch did not settle on a spread pair.
const NO_PAIR: u8 = 3;

/// A peeled universal set with its avoid-γ matchings, indexed by colour.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Peeled {
    pub vertices: VertexSet,
    pub matchings: [Matching; 3],
}

pub struct SolveState<'a> {
    pub colouring: &'a Colouring,
    pub active: VertexSet,
    pub peeled6: Vec<Peeled>,
    pub peeled13: Vec<Peeled>,
    pub trace: Trace,
    pub restart_measure: Measure,
    pub restarts: usize,
    /// Spread pair the current dispatch works with, if any.
    pair: Option<(SpreadInfo, SpreadInfo)>,
}

impl<'a> SolveState<'a> {
    pub fn new(c: &'a Colouring) -> SolveState<'a> {
        SolveState {
            colouring: c,
            active: c.vertices(),
            peeled6: Vec::new(),
            peeled13: Vec::new(),
            trace: Trace::new(c.n()),
            restart_measure: (c.n(), NO_PAIR),
            restarts: 0,
            pair: None,
        }
    }

    fn peel(&mut self, w: &Witness) -> Result<()> {
        if !w.verify(self.colouring) || !w.vertices.is_subset(self.active) {
            return Err(Error::Faithfulness(format!(
                "{} witness on {} does not re-verify",
                w.kind, w.vertices
            )));
        }
        let matchings: [Matching; 3] = w.matchings.clone().try_into().expect("three matchings");
        let (kind, list) = match w.kind {
            WitnessKind::Universal6 => (EventKind::Peel6, &mut self.peeled6),
            _ => (EventKind::Peel13, &mut self.peeled13),
        };
        list.push(Peeled { vertices: w.vertices, matchings: matchings.clone() });
        self.active = self.active - w.vertices;
        self.trace.emit(
            Event::new(kind, format!("peel universal {}-set", w.vertices.len()))
                .vertices(w.vertices)
                .matchings(matchings.to_vec()),
        );
        Ok(())
    }

    /// Acts on an escalated witness; returns a forced spread pair for the
    /// next dispatch, if the witness calls for one.
    fn restart(&mut self, w: Witness) -> Result<Option<(SpreadInfo, SpreadInfo)>> {
        let c = self.colouring;
        self.trace.emit(Event::new(EventKind::Witness, w.context.clone()).witness(w.clone()));
        let prior = self.restart_measure;
        let hint = match w.kind {
            WitnessKind::Universal6 | WitnessKind::Universal13 => {
                self.peel(&w)?;
                None
            }
            WitnessKind::LevelUpgrade => {
                let s = w.spread.filter(|s| s.holds(c) && s.level == 2).ok_or_else(|| {
                    Error::Faithfulness(format!("level upgrade on {} does not hold", w.vertices))
                })?;
                let (a, b) = self.pair.ok_or_else(|| {
                    Error::Faithfulness("level upgrade outside a spread pair".into())
                })?;
                let other = if a.colour == s.colour { b } else { a };
                if other.colour == s.colour || !other.sextuple.is_disjoint(s.sextuple) {
                    return Err(Error::Faithfulness(format!(
                        "upgraded spread {} does not pair with {}",
                        s.sextuple, other.sextuple
                    )));
                }
                Some((s, other))
            }
            WitnessKind::ForeignSpread => {
                let s = w.spread.filter(|s| s.holds(c)).ok_or_else(|| {
                    Error::Faithfulness(format!("foreign spread on {} does not hold", w.vertices))
                })?;
                let partner = best_partner(c, self.active - s.sextuple, s.colour).ok_or_else(|| {
                    Error::Faithfulness(format!(
                        "foreign spread {} has no disjoint partner",
                        s.sextuple
                    ))
                })?;
                Some((s, partner))
            }
            WitnessKind::Faithfulness => {
                return Err(Error::Faithfulness(w.context));
            }
        };
        let next = match hint {
            None => (self.active.len(), NO_PAIR),
            Some((a, b)) => (self.active.len(), deficit(&a, &b)),
        };
        if next >= prior {
            return Err(Error::Faithfulness(format!(
                "restart measure {next:?} does not decrease from {prior:?}"
            )));
        }
        self.restart_measure = next;
        self.restarts += 1;
        self.trace.emit(
            Event::new(EventKind::Restart, format!("restart after {}", w.kind))
                .vertices(self.active)
                .measures(prior, next),
        );
        Ok(hint)
    }
}

fn deficit(a: &SpreadInfo, b: &SpreadInfo) -> u8 {
    2 - u8::from(a.level == 2) - u8::from(b.level == 2)
}

/// Result of a solve run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub matching: Matching,
    pub trace: Trace,
    pub restarts: usize,
}

/// Runs the whole pipeline on `c`.
pub fn solve(c: &Colouring) -> Result<Solution> {
    let mut st = SolveState::new(c);
    peel_phase(&mut st);
    let mut hint = None;
    let core = loop {
        match dispatch(&mut st, hint.take())? {
            Step::Done(m) => break m,
            Step::Escalate(w) => hint = st.restart(w)?,
        }
        if st.restarts > c.n() + 2 {
            return Err(Error::Faithfulness(format!("{} restarts on {} vertices", st.restarts, c.n())));
        }
    };
    if core.len() < m_bound(st.active.len()) {
        return Err(Error::Faithfulness(format!(
            "core matching of size {} on {} active vertices, expected {}",
            core.len(),
            st.active.len(),
            m_bound(st.active.len())
        )));
    }
    let avoided = core.avoided.unwrap_or(Colour::ONE);
    let matching = assemble(&st, core, avoided)?;
    let SolveState { mut trace, restarts, .. } = st;
    trace.emit(
        Event::new(EventKind::Result, format!("matching avoiding colour {avoided}"))
            .colours(matching.colours_used(c).to_vec())
            .matchings(vec![matching.clone()]),
    );
    Ok(Solution { matching, trace, restarts })
}

/// One colex pass over the sextuples of the active set, removing each
/// universal sextuple disjoint from those already taken.
pub fn peel_phase(st: &mut SolveState<'_>) {
    let c = st.colouring;
    let items = st.active.to_vec();
    let mut taken = VertexSet::EMPTY;
    let mut found = Vec::new();
    for s in combinations::<6>(&items) {
        let set: VertexSet = s.iter().copied().collect();
        if set.is_disjoint(taken) && quick_classify_at(c, &s).universal() {
            taken = taken | set;
            found.push(set);
        }
    }
    for set in found {
        let class = crate::structure::classify_sextuple(c, set).expect("six vertices");
        let w = Witness::universal6(&class, "peel").expect("universal");
        st.peel(&w).expect("freshly classified");
    }
    st.restart_measure = (st.active.len(), NO_PAIR);
}

/// Adds the peeled sets' matchings avoiding `avoided` to `core`.
pub fn assemble(st: &SolveState<'_>, core: Matching, avoided: Colour) -> Result<Matching> {
    let c = st.colouring;
    let mut out = core.with_avoided(Some(avoided));
    for p in st.peeled6.iter().chain(&st.peeled13) {
        out.extend(&p.matchings[avoided.index()]);
    }
    let report = verify_matching(c, &out, m_bound(c.n()));
    if !report.valid {
        return Err(Error::Faithfulness(format!(
            "assembled matching fails verification: {}",
            report.violations.join("; ")
        )));
    }
    Ok(out)
}

/// Routes the active set to the procedure its spread structure calls for.
pub fn dispatch(st: &mut SolveState<'_>, hint: Option<(SpreadInfo, SpreadInfo)>) -> Result<Step<Matching>> {
    let c = st.colouring;
    let active = st.active;
    st.pair = None;
    if let Some((a, b)) = hint {
        st.pair = Some((a, b));
        st.trace.emit(
            Event::new(EventKind::CaseEnter, "two_spreads (forced pair)")
                .sets(vec![a.sextuple, b.sextuple])
                .colours(vec![a.colour, b.colour]),
        );
        return proc_two_spreads(c, active, a, b, &mut st.trace);
    }
    if active.len() < 9 {
        st.trace.emit(Event::new(EventKind::CaseEnter, "small").vertices(active));
        let m = Matching::new(chunk_matching(&active.to_vec())).tag_avoided(c);
        return Ok(Step::Done(m));
    }
    let inv = scan_inventory(c, active);
    if let Some(u) = inv.universal {
        let class = crate::structure::classify_sextuple(c, u)?;
        let w = Witness::universal6(&class, "universal sextuple in active set").expect("universal");
        return Ok(Step::Escalate(w));
    }
    if inv.spreads.is_empty() {
        st.trace.emit(Event::new(EventKind::CaseEnter, "no_spreads").vertices(active));
        return case_no_spreads(c, active);
    }
    if let Some((a, b)) = best_pair(&inv.spreads) {
        let a = full_spread(c, a.set);
        let b = full_spread(c, b.set);
        st.pair = Some((a, b));
        st.restart_measure.1 = deficit(&a, &b);
        st.trace.emit(
            Event::new(EventKind::CaseEnter, "two_spreads")
                .sets(vec![a.sextuple, b.sextuple])
                .colours(vec![a.colour, b.colour]),
        );
        return proc_two_spreads(c, active, a, b, &mut st.trace);
    }
    st.restart_measure.1 = NO_PAIR;
    let u_rec = best_spread(&inv.spreads, None).expect("spreads exist");
    let u = full_spread(c, u_rec.set);
    match best_spread(&inv.spreads, Some(u.colour)) {
        None => {
            st.trace.emit(
                Event::new(EventKind::CaseEnter, "one_spread")
                    .vertices(active)
                    .colours(vec![u.colour]),
            );
            Ok(match one_spread::one_spread_traced(c, active, u.colour, &mut st.trace)? {
                OneSpreadOutcome::MatchingAvoiding(m) => Step::Done(m),
                OneSpreadOutcome::NoTriplesOfColour(a) => {
                    Step::Done(Matching::avoiding(chunk_matching(&active.to_vec()), a))
                }
                OneSpreadOutcome::Escalate(w) => Step::Escalate(w),
            })
        }
        Some(w_rec) => {
            let w = full_spread(c, w_rec.set);
            st.trace.emit(
                Event::new(EventKind::CaseEnter, "endgame")
                    .sets(vec![u.sextuple, w.sextuple])
                    .colours(vec![u.colour, w.colour]),
            );
            endgame(c, active, u, w, &mut st.trace)
        }
    }
}

fn full_spread(c: &Colouring, set: VertexSet) -> SpreadInfo {
    let v: [usize; 6] = set.to_vec().try_into().expect("six vertices");
    spread_at(c, &v).expect("inventory records a spread")
}

/// Highest-level spread, lowest colex among equals, skipping `not_colour`.
fn best_spread(spreads: &[SpreadRecord], not_colour: Option<Colour>) -> Option<SpreadRecord> {
    let ok = |s: &&SpreadRecord| Some(s.colour) != not_colour;
    spreads
        .iter()
        .filter(ok)
        .find(|s| s.level == 2)
        .or_else(|| spreads.iter().find(ok))
        .copied()
}

/// A disjoint pair of spreads of different colours with as many level-2
/// members as possible.
fn best_pair(spreads: &[SpreadRecord]) -> Option<(SpreadRecord, SpreadRecord)> {
    let mut by_level: [[Vec<SpreadRecord>; 3]; 2] = Default::default();
    for s in spreads {
        by_level[usize::from(s.level == 2)][s.colour.index()].push(*s);
    }
    let colour_pairs = [(0, 1), (0, 2), (1, 2), (1, 0), (2, 0), (2, 1)];
    for (la, lb) in [(1, 1), (1, 0), (0, 0)] {
        let mut best: Option<(SpreadRecord, SpreadRecord)> = None;
        for &(ca, cb) in &colour_pairs {
            if la == lb && ca > cb {
                continue;
            }
            for a in &by_level[la][ca] {
                if let Some(b) = by_level[lb][cb].iter().find(|b| b.set.is_disjoint(a.set)) {
                    let cand = (*a, *b);
                    if best.is_none_or(|p| (cand.0.set, cand.1.set) < (p.0.set, p.1.set)) {
                        best = Some(cand);
                    }
                    break;
                }
            }
        }
        if best.is_some() {
            return best;
        }
    }
    None
}

/// The best spread inside `w` whose colour differs from `colour`.
fn best_partner(c: &Colouring, w: VertexSet, colour: Colour) -> Option<SpreadInfo> {
    if w.len() < 6 {
        return None;
    }
    let spreads: Vec<SpreadInfo> = scan_spreads(c, w, None)
        .into_iter()
        .filter(|s| s.colour != colour)
        .collect();
    spreads.iter().find(|s| s.level == 2).or(spreads.first()).copied()
}

/// Active sets without spreads span at most two colours.
pub fn case_no_spreads(c: &Colouring, active: VertexSet) -> Result<Step<Matching>> {
    let present = c.colours_present(active);
    if present.len() == 3 {
        let items = active.to_vec();
        for s in combinations::<6>(&items) {
            let set: VertexSet = s.iter().copied().collect();
            if c.colours_present(set).len() == 3 {
                let class = crate::structure::classify_sextuple(c, set)?;
                if let Some(w) = Witness::universal6(&class, "three-coloured sextuple") {
                    return Ok(Step::Escalate(w));
                }
                return Err(Error::Faithfulness(format!(
                    "sextuple {set} spans three colours but is neither universal nor a spread"
                )));
            }
        }
        return Err(Error::Faithfulness(format!("{active} spans three colours without a witness")));
    }
    Ok(Step::Done(Matching::new(chunk_matching(&active.to_vec())).tag_avoided(c)))
}

/// A witness inside `region`, or a faithfulness error naming `what`.
pub(crate) fn escalate(
    c: &Colouring,
    region: VertexSet,
    context: Option<Colour>,
    what: &str,
) -> Result<Witness> {
    if region.len() <= WITNESS_SCOPE {
        if let Some(w) = find_witness(c, region, context)? {
            return Ok(w);
        }
    }
    Err(Error::Faithfulness(format!("{what}; no witness inside {region}")))
}

/// First triple whose colour under `f` falls outside its allowed set.
pub(crate) fn first_violation<C: ColourLookup + ?Sized>(
    f: &C,
    checks: &[(Triple, ColourSet)],
) -> Option<Triple> {
    checks.iter().find(|(t, ok)| !ok.contains(f.colour_t(*t))).map(|&(t, _)| t)
}

/// Actual colours of `triples`, for trace assertions.
pub(crate) fn assert_all(c: &Colouring, triples: &[Triple]) -> Vec<(Triple, Colour)> {
    triples.iter().map(|&t| (t, c.colour_t(t))).collect()
}

/// Tags `m` with the first colour of `prefer` it does not use, falling
/// back to any unused colour.
pub(crate) fn tag_preferring(c: &Colouring, m: Matching, prefer: &[Colour]) -> Matching {
    let used = m.colours_used(c);
    let avoided = prefer
        .iter()
        .copied()
        .find(|&p| !used.contains(p))
        .or_else(|| used.first_missing());
    m.with_avoided(avoided)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{embed, embed_many, fixture};

    #[test]
    fn peel_examples() {
        let one = Colouring::constant(12, Colour::ONE).unwrap();
        let mut st = SolveState::new(&one);
        peel_phase(&mut st);
        assert!(st.peeled6.is_empty());

        let b = fixture("FIX-B").unwrap();
        let c = embed(&b, 0, 16, Colour::ONE).unwrap();
        let mut st = SolveState::new(&c);
        peel_phase(&mut st);
        assert_eq!(st.peeled6.len(), 1);
        assert_eq!(st.active.len(), 10);
        assert_eq!(st.trace.count(EventKind::Peel6), 1);

        let c = embed_many(&[(&b, 0), (&b, 6)], 16, Colour::ONE).unwrap();
        let mut st = SolveState::new(&c);
        peel_phase(&mut st);
        assert_eq!(st.trace.count(EventKind::Peel6), 2);
    }

    #[test]
    fn solve_all_one() {
        let c = Colouring::constant(15, Colour::ONE).unwrap();
        let s = solve(&c).unwrap();
        assert_eq!(s.matching.len(), 5);
        assert!(replay(&c, &s.trace).ok());
    }

    #[test]
    fn no_spreads_rejects_three_colours_without_witness() {
        // colour by lowest vertex: layered instances have spreads, so call the
        // case directly on a three-coloured set to reach the error path
        let c = crate::generators::layered_lowest_colour(crate::generators::LayerSpec::new(3, 3, 4)).unwrap();
        match case_no_spreads(&c, c.vertices()) {
            Err(Error::Faithfulness(_)) | Ok(Step::Escalate(_)) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
