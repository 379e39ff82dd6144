//! Sets whose spreads all share one colour α.

use serde::{Deserialize, Serialize};

use super::trace::{Event, EventKind, Trace};
use super::{assert_all, escalate, first_violation, tag_preferring};
use crate::colour::{Colour, ColourSet};
use crate::colouring::{ColourLookup, Colouring, Framed};
use crate::error::{Error, Result};
use crate::matching::{chunk_matching, Matching};
use crate::structure::{check_universal_13, is_clique, is_forcing, Witness};
use crate::triple::Triple;
use crate::vset::{combinations, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OneSpreadOutcome {
    /// A near-perfect matching of the set; `avoided` names an actual colour
    /// other than α whenever possible.
    MatchingAvoiding(Matching),
    /// The set has no triple of this colour.
    NoTriplesOfColour(Colour),
    Escalate(Witness),
}

/// Runs the one-colour procedure on `s`; every spread inside `s` must have
/// colour `alpha`.
pub fn proc_one_spread(c: &Colouring, s: VertexSet, alpha: Colour) -> Result<OneSpreadOutcome> {
    let mut scratch = Trace::new(c.n());
    one_spread_traced(c, s, alpha, &mut scratch)
}

pub(crate) fn one_spread_traced(
    c: &Colouring,
    s: VertexSet,
    alpha: Colour,
    trace: &mut Trace,
) -> Result<OneSpreadOutcome> {
    let f = Framed::rotated(c, alpha);
    let run = OneSpread { c, f, s, alpha };
    if let Some(out) = run.rainbow_cover(trace)? {
        return Ok(out);
    }
    run.forcing_phase(trace)
}

const ONE: ColourSet = ColourSet::from_bits(0b001);
const ONE_TWO: ColourSet = ColourSet::from_bits(0b011);

struct OneSpread<'a> {
    c: &'a Colouring,
    f: Framed<'a>,
    s: VertexSet,
    alpha: Colour,
}

fn tri(s: VertexSet) -> Triple {
    Triple::from_set(s)
}

impl<'a> OneSpread<'a> {
    /// Frame in which `b` has canonical colour 2.
    fn with_b_two(&self, b: Triple) -> Framed<'a> {
        if self.f.colour_t(b) == Colour::TWO {
            self.f
        } else {
            self.f.swap_two_three()
        }
    }

    fn finish(&self, triples: Vec<Triple>) -> Result<OneSpreadOutcome> {
        let m = Matching::new(triples);
        if !m.is_disjoint() || !m.vertices().is_subset(self.s) || m.len() != self.s.len() / 3 {
            return Err(Error::Faithfulness(format!(
                "one-spread matching of size {} on {} vertices",
                m.len(),
                self.s.len()
            )));
        }
        if m.colours_used(self.c).len() > 2 {
            return Err(Error::Faithfulness("one-spread matching uses three colours".into()));
        }
        let prefer = [self.alpha.next(), self.alpha.prev()];
        Ok(OneSpreadOutcome::MatchingAvoiding(tag_preferring(self.c, m, &prefer)))
    }

    /// Checks `checks` in frame `g`; a violation escalates over `region`
    /// plus the offending triple.
    fn settle(
        &self,
        g: &Framed<'_>,
        checks: Vec<(Triple, ColourSet)>,
        region: VertexSet,
        trace: &mut Trace,
        what: &str,
    ) -> Result<OneSpreadOutcome> {
        if let Some(t) = first_violation(g, &checks) {
            let w = escalate(self.c, region | t.vertices(), Some(self.alpha), &format!("{what}: {t}"))?;
            return Ok(OneSpreadOutcome::Escalate(w));
        }
        let triples: Vec<Triple> = checks.iter().map(|&(t, _)| t).collect();
        trace.emit(
            Event::new(EventKind::CaseEnter, what.to_string())
                .vertices(region)
                .colours(vec![self.alpha])
                .asserted(assert_all(self.c, &triples)),
        );
        self.finish(triples)
    }

    /// A colour-1 triple covered by a colour-2 and a colour-3 triple.
    fn rainbow_cover(&self, trace: &mut Trace) -> Result<Option<OneSpreadOutcome>> {
        let f = &self.f;
        let items = self.s.to_vec();
        let mut first_with: Vec<[Option<Triple>; 3]> = vec![[None; 3]; self.c.n()];
        let mut ones = Vec::new();
        for v in combinations::<3>(&items) {
            let t = Triple::from_array(v);
            let k = f.colour_t(t);
            if k == Colour::ONE {
                ones.push(t);
            }
            for x in v {
                first_with[x][k.index()].get_or_insert(t);
            }
        }
        for &a in &ones {
            for v1 in a.vertices() {
                for x in self.s - a.vertices() {
                    let b = tri(a.vertices().without(v1).with(x));
                    let kb = f.colour_t(b);
                    if kb == Colour::ONE {
                        continue;
                    }
                    let other = if kb == Colour::TWO { Colour::THREE } else { Colour::TWO };
                    if let Some(cc) = first_with[v1][other.index()] {
                        return self.rainbow_case(a, v1, b, cc, trace).map(Some);
                    }
                }
            }
        }
        Ok(None)
    }

    fn rainbow_case(
        &self,
        a: Triple,
        v1: usize,
        b: Triple,
        cc: Triple,
        trace: &mut Trace,
    ) -> Result<OneSpreadOutcome> {
        let g = self.with_b_two(b);
        let n = self.s.len();
        match (cc.vertices() & b.vertices()).len() {
            0 => {
                let w = escalate(
                    self.c,
                    b.vertices() | cc.vertices(),
                    Some(self.alpha),
                    "disjoint rainbow cover",
                )?;
                Ok(OneSpreadOutcome::Escalate(w))
            }
            2 => {
                let q = a.vertices() | b.vertices();
                let r = (self.s - q).to_vec();
                let mut checks: Vec<(Triple, ColourSet)> =
                    chunk_matching(&r).into_iter().map(|t| (t, ONE)).collect();
                if !n.is_multiple_of(3) {
                    checks.push((a, ONE));
                } else {
                    let (x, y) = (r[r.len() - 2], r[r.len() - 1]);
                    checks.push((b, ColourSet::single(Colour::TWO)));
                    checks.push((Triple::new(x, y, v1), ONE));
                }
                self.settle(&g, checks, q, trace, "rainbow cover on four vertices")
            }
            _ => {
                let q5 = a.vertices() | b.vertices() | cc.vertices();
                let r = (self.s - q5).to_vec();
                let mut checks: Vec<(Triple, ColourSet)> =
                    chunk_matching(&r).into_iter().map(|t| (t, ONE)).collect();
                let left = &r[r.len() - r.len() % 3..];
                match *left {
                    [] => checks.push((a, ONE)),
                    [x] => {
                        checks.push((tri((q5 - b.vertices()).with(x)), ONE));
                        checks.push((b, ColourSet::single(Colour::TWO)));
                    }
                    [x, y, ..] => {
                        checks.push((tri((q5 - b.vertices()).with(x)), ONE));
                        checks.push((tri((q5 - cc.vertices()).with(y)), ONE));
                    }
                }
                self.settle(&g, checks, q5, trace, "rainbow cover on five vertices")
            }
        }
    }

    /// Colour-1 triple and a non-1 triple sharing two vertices inside `r`.
    fn adjacent_pair(&self, r: VertexSet) -> Option<(Triple, Triple)> {
        let items = r.to_vec();
        for q in combinations::<4>(&items) {
            let ts = [
                Triple::new(q[0], q[1], q[2]),
                Triple::new(q[0], q[1], q[3]),
                Triple::new(q[0], q[2], q[3]),
                Triple::new(q[1], q[2], q[3]),
            ];
            let one = ts.iter().find(|&&t| self.f.colour_t(t) == Colour::ONE);
            let other = ts.iter().find(|&&t| self.f.colour_t(t) != Colour::ONE);
            if let (Some(&a), Some(&b)) = (one, other) {
                return Some((a, b));
            }
        }
        None
    }

    fn forcing_phase(&self, trace: &mut Trace) -> Result<OneSpreadOutcome> {
        let c = self.c;
        let mut r = self.s;
        let mut forcing: Vec<usize> = Vec::new();
        while let Some((a, b)) = self.adjacent_pair(r) {
            let g = self.with_b_two(b);
            let v1 = (a.vertices() - b.vertices()).min().expect("adjacent triples");
            let shared = a.vertices() & b.vertices();
            let rest = (r - a.vertices() - b.vertices()).to_vec();
            let c3 = combinations::<3>(&rest)
                .map(Triple::from_array)
                .find(|&t| g.colour_t(t) == Colour::THREE);
            let Some(c3) = c3 else {
                return self.close_with_b(&g, r, &forcing, a, b, trace);
            };
            let x = c3.i;
            let d = tri(shared.with(x));
            let mut asserted = vec![a, b, c3, d];
            match g.colour_t(d) {
                Colour::ONE => {
                    let w = escalate(
                        c,
                        b.vertices() | c3.vertices(),
                        Some(self.alpha),
                        "triple covered by a rainbow pair",
                    )?;
                    return Ok(OneSpreadOutcome::Escalate(w));
                }
                Colour::TWO => {
                    let e = tri(c3.vertices().without(x).with(v1));
                    if g.colour_t(e) != Colour::ONE {
                        let w = escalate(
                            c,
                            a.vertices() | c3.vertices(),
                            Some(self.alpha),
                            "three-coloured sextuple not dominated by α",
                        )?;
                        return Ok(OneSpreadOutcome::Escalate(w));
                    }
                    asserted.push(e);
                }
                _ => {}
            }
            if !is_forcing(c, r, v1, self.alpha) {
                let items = r.without(v1).to_vec();
                let bad = combinations::<2>(&items)
                    .map(|[p, q]| Triple::new(v1, p, q))
                    .find(|&t| c.colour_t(t) != self.alpha)
                    .expect("not forcing");
                let region = a.vertices() | b.vertices() | c3.vertices() | bad.vertices();
                let w = escalate(c, region, Some(self.alpha), &format!("vertex {v1} is not forcing"))?;
                return Ok(OneSpreadOutcome::Escalate(w));
            }
            trace.emit(
                Event::new(EventKind::Forcing, format!("vertex {v1} forces colour {}", self.alpha))
                    .vertices(VertexSet::single(v1))
                    .sets(vec![r])
                    .colours(vec![self.alpha])
                    .asserted(assert_all(c, &asserted)),
            );
            forcing.push(v1);
            r.remove(v1);
        }

        let items = r.to_vec();
        let has_one = combinations::<3>(&items).any(|v| self.f.colour_t(Triple::from_array(v)) == Colour::ONE);
        if has_one {
            let mut order = items;
            order.extend(&forcing);
            let checks = chunk_matching(&order).into_iter().map(|t| (t, ONE)).collect();
            return self.settle(&self.f, checks, VertexSet::EMPTY, trace, "remainder in colour α");
        }
        if forcing.is_empty() {
            return Ok(OneSpreadOutcome::NoTriplesOfColour(self.alpha));
        }
        self.terminal(r, &forcing, trace)
    }

    /// No colour-3 triple avoids `a ∪ b`: take `b` and cover the rest.
    fn close_with_b(
        &self,
        g: &Framed<'_>,
        r: VertexSet,
        forcing: &[usize],
        a: Triple,
        b: Triple,
        trace: &mut Trace,
    ) -> Result<OneSpreadOutcome> {
        let forced: VertexSet = forcing.iter().copied().collect();
        let mut order = (r - b.vertices()).to_vec();
        order.extend(forcing);
        let mut checks = vec![(b, ColourSet::single(Colour::TWO))];
        for t in chunk_matching(&order) {
            let ok = if t.vertices().is_disjoint(forced) { ONE_TWO } else { ONE };
            checks.push((t, ok));
        }
        self.settle(g, checks, a.vertices() | b.vertices(), trace, "adjacent pair without colour 3")
    }

    /// Remainder `r` has no colour-1 triple and at least one forcing vertex.
    fn terminal(&self, r: VertexSet, forcing: &[usize], trace: &mut Trace) -> Result<OneSpreadOutcome> {
        let c = self.c;
        let f = &self.f;
        let mixed = |q: &[usize; 4]| {
            let cols: ColourSet = [
                Triple::new(q[0], q[1], q[2]),
                Triple::new(q[0], q[1], q[3]),
                Triple::new(q[0], q[2], q[3]),
                Triple::new(q[1], q[2], q[3]),
            ]
            .iter()
            .map(|&t| f.colour_t(t))
            .collect();
            cols.contains(Colour::TWO) && cols.contains(Colour::THREE)
        };
        let items = r.to_vec();
        let mut used = VertexSet::EMPTY;
        let mut quads: Vec<[usize; 4]> = Vec::new();
        for q in combinations::<4>(&items) {
            let qs: VertexSet = q.iter().copied().collect();
            if qs.is_disjoint(used) && mixed(&q) {
                used = used | qs;
                quads.push(q);
                if quads.len() == 3 {
                    break;
                }
            }
        }
        let f1 = forcing[0];
        if quads.len() == 3 {
            let x = used.with(f1);
            if let Some(ms) = check_universal_13(c, x)? {
                return Ok(OneSpreadOutcome::Escalate(Witness::universal13(
                    x,
                    ms,
                    format!("three mixed quadruples around forcing vertex {f1}"),
                )));
            }
            let w = escalate(c, x, Some(self.alpha), "three mixed quadruples")?;
            return Ok(OneSpreadOutcome::Escalate(w));
        }

        let rprime = r - used;
        let rp = rprime.to_vec();
        let kappa = combinations::<3>(&rp)
            .next()
            .map_or(Colour::TWO, |v| f.colour_t(Triple::from_array(v)));
        if let Some(t) = is_clique(f, rprime, kappa) {
            return Err(Error::Faithfulness(format!("remainder {rprime} is not a clique: {t}")));
        }
        let mut checks: Vec<(Triple, ColourSet)> = Vec::new();
        let mut z = vec![f1];
        for q in &quads {
            let qs: VertexSet = q.iter().copied().collect();
            let t = combinations::<3>(q)
                .map(Triple::from_array)
                .find(|&t| f.colour_t(t) == kappa)
                .expect("mixed quadruple has both colours");
            checks.push((t, ColourSet::single(kappa)));
            z.push((qs - t.vertices()).min().expect("one vertex left"));
        }
        let mut pool_r: std::collections::VecDeque<usize> = rp.into_iter().collect();
        let mut pool_f: std::collections::VecDeque<usize> = forcing[1..].iter().copied().collect();
        while z.len() < 3 {
            match pool_r.pop_front().or_else(|| pool_f.pop_front()) {
                Some(v) => z.push(v),
                None => break,
            }
        }
        let forced: VertexSet = forcing.iter().copied().collect();
        let mut tail: Vec<usize> = Vec::new();
        if z.len() == 3 {
            checks.push((Triple::new(z[0], z[1], z[2]), ONE));
        } else {
            tail.extend(&z);
        }
        let rest: Vec<usize> = pool_r.into_iter().collect();
        let full = rest.len() - rest.len() % 3;
        for t in chunk_matching(&rest[..full]) {
            checks.push((t, ColourSet::single(kappa)));
        }
        tail.extend(&rest[full..]);
        tail.extend(pool_f);
        for t in chunk_matching(&tail) {
            let ok = if t.vertices().is_disjoint(forced) { ColourSet::single(kappa) } else { ONE };
            checks.push((t, ok));
        }
        if let Some(t) = first_violation(f, &checks) {
            return Err(Error::Faithfulness(format!("terminal matching triple {t} has the wrong colour")));
        }
        let triples: Vec<Triple> = checks.iter().map(|&(t, _)| t).collect();
        trace.emit(
            Event::new(EventKind::CaseEnter, "forcing remainder clique")
                .vertices(r)
                .sets(vec![rprime])
                .colours(vec![self.alpha, f.actual(kappa)])
                .asserted(assert_all(c, &triples)),
        );
        self.finish(triples)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{embed, fixture, random_colouring};

    #[test]
    fn all_alpha() {
        let c = Colouring::constant(10, Colour::TWO).unwrap();
        match proc_one_spread(&c, c.vertices(), Colour::TWO).unwrap() {
            OneSpreadOutcome::MatchingAvoiding(m) => {
                assert_eq!(m.len(), 3);
                assert_eq!(m.avoided, Some(Colour::THREE));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn no_alpha_triples() {
        let c = random_colouring(11, 5, [0.0, 1.0, 1.0]).unwrap();
        assert_eq!(
            proc_one_spread(&c, c.vertices(), Colour::ONE).unwrap(),
            OneSpreadOutcome::NoTriplesOfColour(Colour::ONE)
        );
    }

    #[test]
    fn fix_a_in_colour_one() {
        let c = embed(&fixture("FIX-A").unwrap(), 0, 12, Colour::ONE).unwrap();
        match proc_one_spread(&c, c.vertices(), Colour::ONE).unwrap() {
            OneSpreadOutcome::MatchingAvoiding(m) => {
                assert_eq!(m.len(), 4);
                let a = m.avoided.unwrap();
                assert!(a == Colour::TWO || a == Colour::THREE);
                assert!(!m.colours_used(&c).contains(a));
            }
            other => panic!("{other:?}"),
        }
    }
}
