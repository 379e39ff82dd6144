use serde::{Deserialize, Serialize};

use crate::colour::{Colour, ColourSet};
use crate::colouring::{ColourLookup, Colouring};
use crate::triple::Triple;
use crate::vset::{combinations, VertexSet};

/// Pairwise disjoint triples, optionally tagged with a colour they avoid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matching {
    pub triples: Vec<Triple>,
    #[serde(default)]
    pub avoided: Option<Colour>,
}

impl Matching {
    pub fn new(triples: Vec<Triple>) -> Matching {
        Matching { triples, avoided: None }
    }

    pub fn avoiding(triples: Vec<Triple>, avoided: Colour) -> Matching {
        Matching { triples, avoided: Some(avoided) }
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Union of the triples' vertices.
    pub fn vertices(&self) -> VertexSet {
        self.triples.iter().fold(VertexSet::EMPTY, |acc, t| acc | t.vertices())
    }

    pub fn is_disjoint(&self) -> bool {
        let mut seen = VertexSet::EMPTY;
        for t in &self.triples {
            if !seen.is_disjoint(t.vertices()) {
                return false;
            }
            seen = seen | t.vertices();
        }
        true
    }

    pub fn colours_used<C: ColourLookup + ?Sized>(&self, c: &C) -> ColourSet {
        self.triples.iter().map(|&t| c.colour_t(t)).collect()
    }

    pub fn extend(&mut self, other: &Matching) {
        self.triples.extend_from_slice(&other.triples);
    }

    pub fn with_avoided(mut self, avoided: Option<Colour>) -> Matching {
        self.avoided = avoided;
        self
    }

    /// Sets `avoided` to the lowest colour the triples do not use.
    pub fn tag_avoided<C: ColourLookup + ?Sized>(mut self, c: &C) -> Matching {
        self.avoided = self.colours_used(c).first_missing();
        self
    }
}

/// Outcome of checking a matching against a colouring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub valid: bool,
    pub size: usize,
    pub colours_used: Vec<Colour>,
    pub violations: Vec<String>,
}

/// Checks disjointness, range, colour count, the avoided colour and a size
/// floor. Problems are collected, never raised.
pub fn verify_matching(c: &Colouring, m: &Matching, min_size: usize) -> VerificationReport {
    let mut violations = Vec::new();
    let mut seen = VertexSet::EMPTY;
    let mut used = ColourSet::EMPTY;
    for &t in &m.triples {
        if t.k >= c.n() {
            violations.push(format!("triple {t} uses a vertex outside 0..{}", c.n()));
            continue;
        }
        if !seen.is_disjoint(t.vertices()) {
            violations.push(format!(
                "triple {t} overlaps earlier triples on {}",
                seen & t.vertices()
            ));
        }
        seen = seen | t.vertices();
        let col = c.get(t.i, t.j, t.k);
        used.insert(col);
        if m.avoided == Some(col) {
            violations.push(format!("triple {t} has the avoided colour {col}"));
        }
    }
    if used.len() > 2 {
        violations.push(format!("matching uses {} colours {used}", used.len()));
    }
    if m.triples.len() < min_size {
        violations.push(format!(
            "matching has size {}, required at least {min_size}",
            m.triples.len()
        ));
    }
    VerificationReport {
        valid: violations.is_empty(),
        size: m.triples.len(),
        colours_used: used.to_vec(),
        violations,
    }
}

/// Maximal matching on `vertices` using only `allowed` colours, taking
/// triples lowest colex rank first.
pub fn greedy_matching<C: ColourLookup + ?Sized>(
    c: &C,
    vertices: VertexSet,
    allowed: ColourSet,
) -> Matching {
    let items = vertices.to_vec();
    let mut used = VertexSet::EMPTY;
    let mut triples = Vec::new();
    for [i, j, k] in combinations::<3>(&items) {
        let t = Triple { i, j, k };
        if used.is_disjoint(t.vertices()) && allowed.contains(c.lookup(i, j, k)) {
            used = used | t.vertices();
            triples.push(t);
        }
    }
    Matching::new(triples)
}

/// Splits `vertices` into consecutive triples in increasing order,
/// ignoring colours. The trailing `len % 3` vertices stay uncovered.
pub fn chunk_matching(vertices: &[usize]) -> Vec<Triple> {
    vertices
        .chunks_exact(3)
        .map(|ch| Triple::new(ch[0], ch[1], ch[2]))
        .collect()
}
