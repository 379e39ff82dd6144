//! Sextuple classification, spreads and the small certificates built on them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::colour::{Colour, ColourSet};
use crate::colouring::ColourLookup;
use crate::error::{Error, Result};
use crate::matching::Matching;
use crate::packing::first_packing;
use crate::triple::Triple;
use crate::vset::{combinations, subsets_of_size, VertexSet};

/// Second-half partners of position 0, in colex order over positions 1..5.
const SPLIT_PAIRS: [(usize, usize); 10] = [
    (1, 2),
    (1, 3),
    (2, 3),
    (1, 4),
    (2, 4),
    (3, 4),
    (1, 5),
    (2, 5),
    (3, 5),
    (4, 5),
];

/// Position masks (over the six sorted vertices) of each split's halves.
const fn split_masks() -> [(u8, u8); 10] {
    let mut out = [(0u8, 0u8); 10];
    let mut s = 0;
    while s < 10 {
        let (j, k) = SPLIT_PAIRS[s];
        let first = 1 | (1 << j) | (1 << k);
        out[s] = (first, 0b11_1111 & !first);
        s += 1;
    }
    out
}

const SPLIT_MASKS: [(u8, u8); 10] = split_masks();

/// A sextuple cut into two disjoint triples; `first` holds the smallest vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Splitting {
    pub first: Triple,
    pub second: Triple,
}

impl Splitting {
    pub fn vertices(&self) -> VertexSet {
        self.first.vertices() | self.second.vertices()
    }

    pub fn to_matching(self) -> Matching {
        Matching::new(vec![self.first, self.second])
    }
}

impl fmt::Display for Splitting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first, self.second)
    }
}

/// The ten splittings of a sorted sextuple, in canonical order.
pub fn splittings(s: &[usize; 6]) -> [Splitting; 10] {
    SPLIT_PAIRS.map(|(j, k)| {
        let rest: Vec<usize> = (1..6).filter(|&p| p != j && p != k).map(|p| s[p]).collect();
        Splitting {
            first: Triple { i: s[0], j: s[j], k: s[k] },
            second: Triple { i: rest[0], j: rest[1], k: rest[2] },
        }
    })
}

fn sorted6(s: VertexSet) -> Result<[usize; 6]> {
    let v = s.to_vec();
    <[usize; 6]>::try_from(v.as_slice())
        .map_err(|_| Error::Input(format!("expected 6 vertices, got {}", s.len())))
}

fn triple_at(s: &[usize; 6], mask: u8) -> Triple {
    let mut it = (0..6).filter(|p| mask & (1 << p) != 0).map(|p| s[p]);
    Triple { i: it.next().unwrap(), j: it.next().unwrap(), k: it.next().unwrap() }
}

fn set_at(s: &[usize; 6], mask: u8) -> VertexSet {
    (0..6).filter(|p| mask & (1 << p) != 0).map(|p| s[p]).collect()
}

/// A spread in `colour` with its demonstration splittings `(M+, P)` and
/// `(M−, N)`. `dominating` is `M+ ∩ M−`; `core` is the other vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpreadInfo {
    pub colour: Colour,
    pub sextuple: VertexSet,
    pub m_plus: Triple,
    pub p: Triple,
    pub m_minus: Triple,
    pub n: Triple,
    pub level: u8,
    pub dominating: VertexSet,
    pub core: VertexSet,
}

impl SpreadInfo {
    pub fn plus_split(&self) -> Splitting {
        order_split(self.m_plus, self.p)
    }

    pub fn minus_split(&self) -> Splitting {
        order_split(self.m_minus, self.n)
    }

    /// Checks the colour and level conditions against `c`.
    pub fn holds<C: ColourLookup + ?Sized>(&self, c: &C) -> bool {
        let level = (self.m_plus.vertices() & self.m_minus.vertices()).len();
        c.colour_t(self.m_plus) == self.colour
            && c.colour_t(self.m_minus) == self.colour
            && c.colour_t(self.p) == self.colour.next()
            && c.colour_t(self.n) == self.colour.prev()
            && usize::from(self.level) == level
            && self.dominating == self.m_plus.vertices() & self.m_minus.vertices()
            && self.core == self.sextuple - self.dominating
    }
}

fn order_split(a: Triple, b: Triple) -> Splitting {
    if a.i < b.i {
        Splitting { first: a, second: b }
    } else {
        Splitting { first: b, second: a }
    }
}

/// Everything the ten splittings reveal about one sextuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SextupleClass {
    pub vertices: VertexSet,
    pub dominated: ColourSet,
    pub spreads: Vec<SpreadInfo>,
    pub universal: bool,
    /// Indexed by colour; the first splitting with no triple of that colour.
    pub avoiding_splits: [Option<Splitting>; 3],
}

impl SextupleClass {
    pub fn spread(&self) -> Option<&SpreadInfo> {
        self.spreads.first()
    }

    /// The three avoid-γ matchings of a universal sextuple.
    pub fn avoiding_matchings(&self) -> Option<[Matching; 3]> {
        let [a, b, c] = self.avoiding_splits;
        Some([
            Matching::avoiding(a?.to_matching().triples, Colour::ONE),
            Matching::avoiding(b?.to_matching().triples, Colour::TWO),
            Matching::avoiding(c?.to_matching().triples, Colour::THREE),
        ])
    }
}

/// Raw splitting colours: `cols[s] = (c(first), c(second))`.
fn split_colours<C: ColourLookup + ?Sized>(c: &C, s: &[usize; 6]) -> [(Colour, Colour); 10] {
    SPLIT_PAIRS.map(|(j, k)| {
        let mut rest = [0usize; 3];
        let mut r = 0;
        for p in 1..6 {
            if p != j && p != k {
                rest[r] = s[p];
                r += 1;
            }
        }
        (c.lookup(s[0], s[j], s[k]), c.lookup(rest[0], rest[1], rest[2]))
    })
}

/// Compact classification used by the scans.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct QuickClass {
    pub dominated: ColourSet,
    /// Colour, level, plus split index, plus-half-is-first, minus split index,
    /// minus-half-is-first.
    pub spread: Option<(Colour, u8, usize, bool, usize, bool)>,
}

impl QuickClass {
    pub fn universal(&self) -> bool {
        self.dominated.is_empty()
    }
}

pub(crate) fn quick_classify(cols: &[(Colour, Colour); 10]) -> QuickClass {
    let mut dominated = ColourSet::EMPTY;
    for a in Colour::ALL {
        if cols.iter().all(|&(x, y)| x == a || y == a) {
            dominated.insert(a);
        }
    }
    let mut spread = None;
    for a in dominated.iter() {
        // half masks and orientation of each demonstration candidate
        let mut best: Option<(u8, usize, bool, usize, bool)> = None;
        for (ps, &(x, y)) in cols.iter().enumerate() {
            let plus_first = if x == a && y == a.next() {
                true
            } else if y == a && x == a.next() {
                false
            } else {
                continue;
            };
            let pm = if plus_first { SPLIT_MASKS[ps].0 } else { SPLIT_MASKS[ps].1 };
            for (ms, &(u, v)) in cols.iter().enumerate() {
                let minus_first = if u == a && v == a.prev() {
                    true
                } else if v == a && u == a.prev() {
                    false
                } else {
                    continue;
                };
                let mm = if minus_first { SPLIT_MASKS[ms].0 } else { SPLIT_MASKS[ms].1 };
                let level = (pm & mm).count_ones() as u8;
                if best.is_none_or(|b| level > b.0) {
                    best = Some((level, ps, plus_first, ms, minus_first));
                }
            }
        }
        if let Some((level, ps, pf, ms, mf)) = best {
            debug_assert!(level == 1 || level == 2, "spread level {level}");
            spread = Some((a, level, ps, pf, ms, mf));
            break;
        }
    }
    QuickClass { dominated, spread }
}

pub(crate) fn quick_classify_at<C: ColourLookup + ?Sized>(c: &C, s: &[usize; 6]) -> QuickClass {
    quick_classify(&split_colours(c, s))
}

fn spread_info(s: &[usize; 6], q: (Colour, u8, usize, bool, usize, bool)) -> SpreadInfo {
    let (colour, level, ps, pf, ms, mf) = q;
    let (pa, pb) = SPLIT_MASKS[ps];
    let (ma, mb) = SPLIT_MASKS[ms];
    let (mp, p) = if pf { (pa, pb) } else { (pb, pa) };
    let (mm, n) = if mf { (ma, mb) } else { (mb, ma) };
    let sextuple = set_at(s, 0b11_1111);
    let dominating = set_at(s, mp & mm);
    SpreadInfo {
        colour,
        sextuple,
        m_plus: triple_at(s, mp),
        p: triple_at(s, p),
        m_minus: triple_at(s, mm),
        n: triple_at(s, n),
        level,
        dominating,
        core: sextuple - dominating,
    }
}

pub(crate) fn spread_at<C: ColourLookup + ?Sized>(c: &C, s: &[usize; 6]) -> Option<SpreadInfo> {
    quick_classify_at(c, s).spread.map(|q| spread_info(s, q))
}

/// Full classification of the sextuple `s`.
pub fn classify_sextuple<C: ColourLookup + ?Sized>(c: &C, s: VertexSet) -> Result<SextupleClass> {
    let v = sorted6(s)?;
    let cols = split_colours(c, &v);
    let q = quick_classify(&cols);
    let splits = splittings(&v);
    let avoiding_splits = Colour::ALL.map(|g| {
        cols.iter()
            .position(|&(x, y)| x != g && y != g)
            .map(|idx| splits[idx])
    });
    Ok(SextupleClass {
        vertices: s,
        dominated: q.dominated,
        spreads: q.spread.map(|sp| spread_info(&v, sp)).into_iter().collect(),
        universal: q.universal(),
        avoiding_splits,
    })
}

/// Lowest-colex universal sextuple inside `w`.
pub fn find_universal_sextuple<C: ColourLookup + ?Sized>(
    c: &C,
    w: VertexSet,
) -> Option<(VertexSet, SextupleClass)> {
    let items = w.to_vec();
    combinations::<6>(&items)
        .find(|s| quick_classify_at(c, s).universal())
        .map(|s| {
            let set: VertexSet = s.iter().copied().collect();
            let class = classify_sextuple(c, set).expect("six vertices");
            (set, class)
        })
}

/// Every spread inside `w`, in colex order of the sextuples.
pub fn scan_spreads<C: ColourLookup + ?Sized>(
    c: &C,
    w: VertexSet,
    colour_filter: Option<Colour>,
) -> Vec<SpreadInfo> {
    let items = w.to_vec();
    combinations::<6>(&items)
        .filter_map(|s| spread_at(c, &s))
        .filter(|sp| colour_filter.is_none_or(|f| sp.colour == f))
        .collect()
}

/// Spread summary kept by the inventory scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpreadRecord {
    pub set: VertexSet,
    pub colour: Colour,
    pub level: u8,
}

/// One pass over all sextuples of `w`: the first universal sextuple, if
/// any, else every spread.
#[derive(Clone, Debug, Default)]
pub struct Inventory {
    pub universal: Option<VertexSet>,
    pub spreads: Vec<SpreadRecord>,
}

pub fn scan_inventory<C: ColourLookup + ?Sized>(c: &C, w: VertexSet) -> Inventory {
    let items = w.to_vec();
    let mut inv = Inventory::default();
    for s in combinations::<6>(&items) {
        let q = quick_classify_at(c, &s);
        if q.universal() {
            inv.universal = Some(s.iter().copied().collect());
            inv.spreads.clear();
            return inv;
        }
        if let Some((colour, level, ..)) = q.spread {
            inv.spreads.push(SpreadRecord { set: s.iter().copied().collect(), colour, level });
        }
    }
    inv
}

/// Pairs inside `M+` or inside `M−`, sorted and without repeats.
pub fn critical_pairs(s: &SpreadInfo) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(6);
    for t in [s.m_plus, s.m_minus] {
        pairs.extend([(t.i, t.j), (t.i, t.k), (t.j, t.k)]);
    }
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

/// The lowest-colex triple inside `s` not coloured `alpha`, if any.
pub fn is_clique<C: ColourLookup + ?Sized>(c: &C, s: VertexSet, alpha: Colour) -> Option<Triple> {
    let items = s.to_vec();
    combinations::<3>(&items)
        .map(Triple::from_array)
        .find(|&t| c.colour_t(t) != alpha)
}

/// Whether every triple inside `w` through `v` has colour `alpha`.
pub fn is_forcing<C: ColourLookup + ?Sized>(c: &C, w: VertexSet, v: usize, alpha: Colour) -> bool {
    let rest = w.without(v).to_vec();
    combinations::<2>(&rest).all(|[a, b]| c.lookup(v, a, b) == alpha)
}

/// For a 13-set, the three size-4 matchings avoiding each colour in turn,
/// or `None` when some colour cannot be avoided.
pub fn check_universal_13<C: ColourLookup + ?Sized>(
    c: &C,
    x: VertexSet,
) -> Result<Option<[Matching; 3]>> {
    if x.len() != 13 {
        return Err(Error::Input(format!("expected 13 vertices, got {}", x.len())));
    }
    let mut out = Vec::with_capacity(3);
    for g in Colour::ALL {
        match first_packing(x, 4, |t| c.colour_t(t) != g) {
            Some(ts) => out.push(Matching::avoiding(ts, g)),
            None => return Ok(None),
        }
    }
    Ok(Some(out.try_into().expect("three colours")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WitnessKind {
    Universal6,
    Universal13,
    ForeignSpread,
    LevelUpgrade,
    Faithfulness,
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            WitnessKind::Universal6 => "Universal6",
            WitnessKind::Universal13 => "Universal13",
            WitnessKind::ForeignSpread => "ForeignSpread",
            WitnessKind::LevelUpgrade => "LevelUpgrade",
            WitnessKind::Faithfulness => "Faithfulness",
        };
        f.write_str(name)
    }
}

/// A localized structure that contradicts the current case assumptions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub vertices: VertexSet,
    /// Avoid-γ matchings for universal witnesses, indexed by colour.
    pub matchings: Vec<Matching>,
    pub spread: Option<SpreadInfo>,
    pub context: String,
}

impl Witness {
    pub fn universal6(class: &SextupleClass, context: impl Into<String>) -> Option<Witness> {
        Some(Witness {
            kind: WitnessKind::Universal6,
            vertices: class.vertices,
            matchings: class.avoiding_matchings()?.to_vec(),
            spread: None,
            context: context.into(),
        })
    }

    pub fn universal13(x: VertexSet, matchings: [Matching; 3], context: impl Into<String>) -> Witness {
        Witness {
            kind: WitnessKind::Universal13,
            vertices: x,
            matchings: matchings.to_vec(),
            spread: None,
            context: context.into(),
        }
    }

    pub fn spread(kind: WitnessKind, s: SpreadInfo, context: impl Into<String>) -> Witness {
        Witness {
            kind,
            vertices: s.sextuple,
            matchings: Vec::new(),
            spread: Some(s),
            context: context.into(),
        }
    }

    /// Re-checks the witness against `c` from scratch.
    pub fn verify<C: ColourLookup + ?Sized>(&self, c: &C) -> bool {
        match self.kind {
            WitnessKind::Universal6 | WitnessKind::Universal13 => {
                let (size, count) = match self.kind {
                    WitnessKind::Universal6 => (6, 2),
                    _ => (13, 4),
                };
                self.vertices.len() == size
                    && self.matchings.len() == 3
                    && self.matchings.iter().zip(Colour::ALL).all(|(m, g)| {
                        m.len() == count
                            && m.is_disjoint()
                            && m.vertices().is_subset(self.vertices)
                            && m.triples.iter().all(|&t| c.colour_t(t) != g)
                    })
            }
            WitnessKind::ForeignSpread | WitnessKind::LevelUpgrade => self
                .spread
                .is_some_and(|s| s.sextuple == self.vertices && s.holds(c)),
            WitnessKind::Faithfulness => false,
        }
    }
}

/// Largest set [`find_witness`] accepts.
pub const WITNESS_SCOPE: usize = 14;

/// Searches `s` for a universal sextuple, then a universal 13-set, then a
/// spread whose colour differs from `context`.
pub fn find_witness<C: ColourLookup + ?Sized>(
    c: &C,
    s: VertexSet,
    context: Option<Colour>,
) -> Result<Option<Witness>> {
    if s.len() > WITNESS_SCOPE {
        return Err(Error::Scope(s.len()));
    }
    if s.len() < 6 {
        return Ok(None);
    }
    if let Some((_, class)) = find_universal_sextuple(c, s) {
        return Ok(Witness::universal6(&class, "universal sextuple"));
    }
    if s.len() >= 13 {
        for x in subsets_of_size(s, 13) {
            if let Some(ms) = check_universal_13(c, x)? {
                return Ok(Some(Witness::universal13(x, ms, "universal 13-set")));
            }
        }
    }
    if let Some(ctx) = context {
        let items = s.to_vec();
        for v in combinations::<6>(&items) {
            if let Some(sp) = spread_at(c, &v) {
                if sp.colour != ctx {
                    return Ok(Some(Witness::spread(WitnessKind::ForeignSpread, sp, "foreign spread")));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::Colouring;
    use crate::generators::{embed, embed_many, fixture};

    fn t(i: usize, j: usize, k: usize) -> Triple {
        Triple::new(i, j, k)
    }

    fn six() -> VertexSet {
        VertexSet::range(6)
    }

    #[test]
    fn splitting_order() {
        let s = splittings(&[0, 1, 2, 3, 4, 5]);
        assert_eq!(s[0], Splitting { first: t(0, 1, 2), second: t(3, 4, 5) });
        assert_eq!(s[9], Splitting { first: t(0, 4, 5), second: t(1, 2, 3) });
        for sp in s {
            assert!(sp.first.vertices().is_disjoint(sp.second.vertices()));
            assert_eq!(sp.vertices(), six());
        }
    }

    #[test]
    fn all_one_is_dominated_without_spread() {
        let c = Colouring::constant(6, Colour::ONE).unwrap();
        let k = classify_sextuple(&c, six()).unwrap();
        assert_eq!(k.dominated, ColourSet::single(Colour::ONE));
        assert!(k.spreads.is_empty());
        assert!(!k.universal);
        assert!(classify_sextuple(&c, VertexSet::range(5)).is_err());
    }

    #[test]
    fn fix_a() {
        let c = fixture("FIX-A").unwrap();
        let k = classify_sextuple(&c, six()).unwrap();
        let sp = k.spread().unwrap();
        assert_eq!(sp.colour, Colour::ONE);
        assert_eq!(sp.level, 1);
        assert_eq!(sp.plus_split(), Splitting { first: t(0, 1, 2), second: t(3, 4, 5) });
        assert_eq!(sp.minus_split(), Splitting { first: t(0, 3, 4), second: t(1, 2, 5) });
        assert_eq!(sp.dominating, VertexSet::single(0));
        assert!(sp.holds(&c));
        assert_eq!(
            critical_pairs(sp),
            vec![(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (3, 4)]
        );
    }

    #[test]
    fn fix_b() {
        let c = fixture("FIX-B").unwrap();
        let k = classify_sextuple(&c, six()).unwrap();
        assert!(k.universal);
        assert!(k.dominated.is_empty());
        assert_eq!(k.avoiding_splits[0], Some(Splitting { first: t(0, 1, 3), second: t(2, 4, 5) }));
        let base = Some(Splitting { first: t(0, 1, 2), second: t(3, 4, 5) });
        assert_eq!(k.avoiding_splits[1], base);
        assert_eq!(k.avoiding_splits[2], base);
        assert!(!is_forcing(&c, six(), 0, Colour::ONE));
    }

    #[test]
    fn fix_c() {
        let c = fixture("FIX-C").unwrap();
        let sps = scan_spreads(&c, six(), None);
        assert_eq!(sps.len(), 1);
        let sp = sps[0];
        assert_eq!((sp.colour, sp.level), (Colour::ONE, 2));
        assert_eq!(sp.m_plus, t(0, 1, 2));
        assert_eq!(sp.m_minus, t(0, 1, 3));
        assert_eq!(critical_pairs(&sp), vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]);
    }

    #[test]
    fn universal_search() {
        let one = Colouring::constant(9, Colour::ONE).unwrap();
        assert!(find_universal_sextuple(&one, one.vertices()).is_none());
        let b = embed(&fixture("FIX-B").unwrap(), 0, 9, Colour::ONE).unwrap();
        assert_eq!(find_universal_sextuple(&b, b.vertices()).unwrap().0, six());
        let a = fixture("FIX-A").unwrap();
        assert!(find_universal_sextuple(&a, six()).is_none());
        assert!(scan_spreads(&one, one.vertices(), None).is_empty());
    }

    #[test]
    fn cliques_and_forcing() {
        let one = Colouring::constant(8, Colour::ONE).unwrap();
        assert_eq!(is_clique(&one, one.vertices(), Colour::ONE), None);
        assert_eq!(is_clique(&one, one.vertices(), Colour::TWO), Some(t(0, 1, 2)));
        assert_eq!(is_clique(&one, VertexSet::range(2), Colour::TWO), None);
        assert!(is_forcing(&one, one.vertices(), 3, Colour::ONE));
        assert!(!is_forcing(&one, one.vertices(), 3, Colour::TWO));
    }

    #[test]
    fn universal_13_examples() {
        let one = Colouring::constant(13, Colour::ONE).unwrap();
        assert_eq!(check_universal_13(&one, one.vertices()).unwrap(), None);
        assert!(check_universal_13(&one, VertexSet::range(12)).is_err());

        let b = fixture("FIX-B").unwrap();
        let c = embed_many(&[(&b, 0), (&b, 6)], 13, Colour::ONE).unwrap();
        let ms = check_universal_13(&c, c.vertices()).unwrap().unwrap();
        for (m, g) in ms.iter().zip(Colour::ALL) {
            assert_eq!(m.len(), 4);
            assert!(m.is_disjoint());
            assert!(m.triples.iter().all(|&x| c.colour_t(x) != g));
        }
    }

    #[test]
    fn witnesses() {
        let one = Colouring::constant(10, Colour::ONE).unwrap();
        assert_eq!(find_witness(&one, one.vertices(), None).unwrap(), None);
        assert_eq!(
            find_witness(&one, VertexSet::range(15), None),
            Err(Error::Scope(15))
        );

        let b = embed(&fixture("FIX-B").unwrap(), 2, 10, Colour::ONE).unwrap();
        let w = find_witness(&b, b.vertices(), None).unwrap().unwrap();
        assert_eq!(w.kind, WitnessKind::Universal6);
        assert_eq!(w.matchings.len(), 3);
        assert!(w.matchings.iter().all(|m| m.len() == 2));
        assert!(w.verify(&b));

        let a = fixture("FIX-A").unwrap();
        let w = find_witness(&a, six(), Some(Colour::TWO)).unwrap().unwrap();
        assert_eq!(w.kind, WitnessKind::ForeignSpread);
        assert_eq!(w.spread.unwrap().colour, Colour::ONE);
        assert!(w.verify(&a));
        assert_eq!(find_witness(&a, six(), Some(Colour::ONE)).unwrap(), None);
    }
}
