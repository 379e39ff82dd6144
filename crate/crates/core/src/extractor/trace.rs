//! Replayable event log of a solve run.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bounds::m_bound;
use crate::colour::Colour;
use crate::colouring::{ColourLookup, Colouring};
use crate::error::{Error, Result};
use crate::matching::{verify_matching, Matching};
use crate::structure::{is_clique, is_forcing, Witness, WitnessKind};
use crate::triple::Triple;
use crate::vset::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EventKind {
    Peel6,
    Peel13,
    CaseEnter,
    Witness,
    Restart,
    CliqueMerge,
    Forcing,
    EndgameStrategy,
    Result,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().unwrap_or("?"))
    }
}

/// Termination measure: active-set size, then level-2 deficit.
pub type Measure = (usize, u8);

fn empty_set(s: &VertexSet) -> bool {
    s.is_empty()
}

/// One trace record. All colours are actual instance colours.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub seq: usize,
    pub kind: EventKind,
    pub detail: String,
    #[serde(default, skip_serializing_if = "empty_set")]
    pub vertices: VertexSet,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sets: Vec<VertexSet>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub colours: Vec<Colour>,
    /// Triple colours the step relied on.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub asserted: Vec<(Triple, Colour)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub matchings: Vec<Matching>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<Measure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior_measure: Option<Measure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
}

impl Event {
    pub fn new(kind: EventKind, detail: impl Into<String>) -> Event {
        Event {
            seq: 0,
            kind,
            detail: detail.into(),
            vertices: VertexSet::EMPTY,
            sets: Vec::new(),
            colours: Vec::new(),
            asserted: Vec::new(),
            matchings: Vec::new(),
            witness: None,
            measure: None,
            prior_measure: None,
            size: None,
        }
    }

    pub fn vertices(mut self, v: VertexSet) -> Event {
        self.vertices = v;
        self
    }

    pub fn sets(mut self, s: Vec<VertexSet>) -> Event {
        self.sets = s;
        self
    }

    pub fn colours(mut self, c: Vec<Colour>) -> Event {
        self.colours = c;
        self
    }

    pub fn asserted(mut self, a: Vec<(Triple, Colour)>) -> Event {
        self.asserted = a;
        self
    }

    pub fn matchings(mut self, m: Vec<Matching>) -> Event {
        self.size = m.first().map(Matching::len);
        self.matchings = m;
        self
    }

    pub fn witness(mut self, w: Witness) -> Event {
        self.vertices = w.vertices;
        self.witness = Some(w);
        self
    }

    pub fn measures(mut self, prior: Measure, next: Measure) -> Event {
        self.prior_measure = Some(prior);
        self.measure = Some(next);
        self
    }
}

/// Ordered events of one run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub n: usize,
    pub events: Vec<Event>,
}

impl Trace {
    pub fn new(n: usize) -> Trace {
        Trace { n, events: Vec::new() }
    }

    pub fn emit(&mut self, mut ev: Event) {
        ev.seq = self.events.len();
        self.events.push(ev);
    }

    pub fn count(&self, kind: EventKind) -> usize {
        self.events.iter().filter(|e| e.kind == kind).count()
    }

    /// One JSON object per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for ev in &self.events {
            out.push_str(&serde_json::to_string(ev).expect("events serialize"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(n: usize, text: &str) -> Result<Trace> {
        let events = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .enumerate()
            .map(|(i, l)| {
                serde_json::from_str(l).map_err(|e| Error::Parse(format!("trace line {}: {e}", i + 1)))
            })
            .collect::<Result<Vec<Event>>>()?;
        Ok(Trace { n, events })
    }
}

/// Outcome of [`replay`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub events: usize,
    pub assertions_checked: usize,
    pub witnesses_checked: usize,
    pub restarts: usize,
    pub problems: Vec<String>,
}

impl ReplayReport {
    pub fn ok(&self) -> bool {
        self.problems.is_empty()
    }
}

fn peel_witness(ev: &Event, kind: WitnessKind) -> Witness {
    Witness {
        kind,
        vertices: ev.vertices,
        matchings: ev.matchings.clone(),
        spread: None,
        context: String::new(),
    }
}

/// Re-checks every claim recorded in `trace` against `c`.
pub fn replay(c: &Colouring, trace: &Trace) -> ReplayReport {
    let mut r = ReplayReport { events: trace.events.len(), ..Default::default() };
    let mut last_measure: Option<Measure> = None;
    let mut results = 0;
    for (i, ev) in trace.events.iter().enumerate() {
        let mut found: Vec<String> = Vec::new();
        let mut bad = |msg: String| found.push(msg);
        if ev.seq != i {
            bad(format!("sequence number {} at position {i}", ev.seq));
        }
        for &(t, col) in &ev.asserted {
            r.assertions_checked += 1;
            match c.colour_of(t) {
                Ok(actual) if actual == col => {}
                Ok(actual) => bad(format!("asserted c{t} = {col}, found {actual}")),
                Err(e) => bad(e.to_string()),
            }
        }
        match ev.kind {
            EventKind::Peel6 | EventKind::Peel13 => {
                r.witnesses_checked += 1;
                let kind = if ev.kind == EventKind::Peel6 {
                    WitnessKind::Universal6
                } else {
                    WitnessKind::Universal13
                };
                if !peel_witness(ev, kind).verify(c) {
                    bad(format!("peeled set {} fails re-verification", ev.vertices));
                }
            }
            EventKind::Witness => {
                r.witnesses_checked += 1;
                match &ev.witness {
                    Some(w) if w.verify(c) => {}
                    Some(w) => bad(format!("{} witness on {} fails re-verification", w.kind, w.vertices)),
                    None => bad("missing witness payload".into()),
                }
            }
            EventKind::Restart => {
                r.restarts += 1;
                match (ev.prior_measure, ev.measure) {
                    (Some(p), Some(m)) => {
                        if m >= p {
                            bad(format!("measure {m:?} does not decrease from {p:?}"));
                        }
                        if let Some(l) = last_measure {
                            if p > l {
                                bad(format!("prior measure {p:?} exceeds last recorded {l:?}"));
                            }
                        }
                        last_measure = Some(m);
                    }
                    _ => bad("missing measures".into()),
                }
            }
            EventKind::CliqueMerge => {
                if ev.sets.len() != ev.colours.len() {
                    bad("sets and colours differ in length".into());
                }
                for (&s, &col) in ev.sets.iter().zip(&ev.colours) {
                    if let Some(t) = is_clique(c, s, col) {
                        bad(format!("{s} is not a clique of colour {col}: {t}"));
                    }
                }
                let cover = ev.sets.iter().fold(VertexSet::EMPTY, |a, &b| a | b);
                for m in &ev.matchings {
                    if !m.is_disjoint() || !m.vertices().is_subset(cover) {
                        bad("merged matching is not a matching on the cliques".into());
                    }
                    if m.triples.iter().any(|&t| !ev.colours.contains(&c.colour_t(t))) {
                        bad("merged matching uses a colour outside the cliques' colours".into());
                    }
                }
            }
            EventKind::Forcing => match (ev.vertices.min(), ev.sets.first(), ev.colours.first()) {
                (Some(v), Some(&scope), Some(&col)) if ev.vertices.len() == 1 => {
                    if !scope.contains(v) || !is_forcing(c, scope, v, col) {
                        bad(format!("vertex {v} is not {col}-forcing in {scope}"));
                    }
                }
                _ => bad("malformed forcing record".into()),
            },
            EventKind::EndgameStrategy => {
                for m in &ev.matchings {
                    if !m.is_disjoint() || m.colours_used(c).len() > 2 {
                        bad("strategy matching is not 2-coloured".into());
                    }
                }
            }
            EventKind::Result => {
                results += 1;
                if i + 1 != trace.events.len() {
                    bad("result is not the last event".into());
                }
                match ev.matchings.first() {
                    Some(m) => {
                        let rep = verify_matching(c, m, m_bound(c.n()));
                        if !rep.valid {
                            bad(format!("final matching invalid: {}", rep.violations.join("; ")));
                        }
                        if ev.size != Some(m.len()) {
                            bad("recorded size differs from the matching".into());
                        }
                    }
                    None => bad("missing final matching".into()),
                }
            }
            EventKind::CaseEnter => {}
        }
        r.problems
            .extend(found.into_iter().map(|m| format!("event {} ({}): {m}", ev.seq, ev.kind)));
    }
    if results != 1 {
        r.problems.push(format!("expected one RESULT event, found {results}"));
    }
    if trace.n != c.n() {
        r.problems.push(format!("trace is for n = {}, instance has n = {}", trace.n, c.n()));
    }
    r
}
