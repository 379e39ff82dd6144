//! Enumeration of sets of pairwise disjoint triples.

use std::ops::ControlFlow;

use crate::triple::Triple;
use crate::vset::VertexSet;

/// Calls `visit` on every family of `count` pairwise disjoint triples inside
/// `vertices` whose members all pass `accept`.
///
/// The lowest uncovered vertex is either matched, with its two partners
/// taken in colex order, or left out while uncovered slots remain. Each
/// family is therefore produced exactly once. Returns the number of
/// families visited; `visit` may stop the walk early.
pub fn for_each_packing<A, F>(vertices: VertexSet, count: usize, accept: A, mut visit: F) -> u64
where
    A: Fn(Triple) -> bool,
    F: FnMut(&[Triple]) -> ControlFlow<()>,
{
    if 3 * count > vertices.len() {
        return 0;
    }
    let spare = vertices.len() - 3 * count;
    let mut chosen = Vec::with_capacity(count);
    let mut visited = 0;
    let _ = walk(vertices, spare, count, &accept, &mut visit, &mut chosen, &mut visited);
    visited
}

fn walk<A, F>(
    remaining: VertexSet,
    spare: usize,
    count: usize,
    accept: &A,
    visit: &mut F,
    chosen: &mut Vec<Triple>,
    visited: &mut u64,
) -> ControlFlow<()>
where
    A: Fn(Triple) -> bool,
    F: FnMut(&[Triple]) -> ControlFlow<()>,
{
    if chosen.len() == count {
        *visited += 1;
        return visit(chosen);
    }
    let v = remaining.min().expect("enough vertices remain");
    let rest = remaining.without(v);
    let items = rest.to_vec();
    // partners (a, b) in colex order: b ascending, then a ascending
    for (bi, &b) in items.iter().enumerate() {
        for &a in &items[..bi] {
            let t = Triple { i: v, j: a, k: b };
            if accept(t) {
                chosen.push(t);
                let flow = walk(rest.without(a).without(b), spare, count, accept, visit, chosen, visited);
                chosen.pop();
                flow?;
            }
        }
    }
    if spare > 0 {
        walk(rest, spare - 1, count, accept, visit, chosen, visited)?;
    }
    ControlFlow::Continue(())
}

/// First family of `count` disjoint accepted triples, if any.
pub fn first_packing<A>(vertices: VertexSet, count: usize, accept: A) -> Option<Vec<Triple>>
where
    A: Fn(Triple) -> bool,
{
    let mut found = None;
    for_each_packing(vertices, count, accept, |ts| {
        found = Some(ts.to_vec());
        ControlFlow::Break(())
    });
    found
}
