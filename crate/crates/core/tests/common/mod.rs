//! Brute-force recounts used as independent references.

#![allow(dead_code)]

use hcg_core::colour::Colour;
use hcg_core::colouring::Colouring;

/// Largest set of disjoint triples on `vs` whose colours pass `ok`, by
/// plain recursion on the lowest remaining vertex.
pub fn naive_max(c: &Colouring, vs: &[usize], ok: &dyn Fn(Colour) -> bool) -> usize {
    if vs.len() < 3 {
        return 0;
    }
    let v = vs[0];
    let rest = &vs[1..];
    let mut best = naive_max(c, rest, ok);
    if best == vs.len() / 3 {
        return best;
    }
    for a in 0..rest.len() {
        for b in a + 1..rest.len() {
            if ok(c.get(v, rest[a], rest[b])) {
                let left: Vec<usize> = rest
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != a && i != b)
                    .map(|(_, &x)| x)
                    .collect();
                best = best.max(1 + naive_max(c, &left, ok));
            }
        }
    }
    best
}

/// Largest matching on `vs` using at most two colours.
pub fn naive_two_coloured(c: &Colouring, vs: &[usize]) -> usize {
    Colour::ALL
        .iter()
        .map(|&g| naive_max(c, vs, &|x| x != g))
        .max()
        .unwrap()
}

/// Whether `vs` (6 or 13 vertices) has a near-perfect matching avoiding
/// each colour.
pub fn naive_universal(c: &Colouring, vs: &[usize]) -> bool {
    let need = vs.len() / 3;
    Colour::ALL.iter().all(|&g| naive_max(c, vs, &|x| x != g) >= need)
}

/// Colours `a` with every one of the ten splittings of `six` containing a
/// triple of colour `a`.
pub fn naive_dominating(c: &Colouring, six: &[usize; 6]) -> Vec<Colour> {
    let mut splits = Vec::new();
    for j in 1..6 {
        for k in j + 1..6 {
            let rest: Vec<usize> = (1..6).filter(|&p| p != j && p != k).map(|p| six[p]).collect();
            splits.push((c.get(six[0], six[j], six[k]), c.get(rest[0], rest[1], rest[2])));
        }
    }
    Colour::ALL
        .into_iter()
        .filter(|&a| splits.iter().all(|&(x, y)| x == a || y == a))
        .collect()
}

/// Deterministic instance from a fixed digit string.
pub fn from_digits(n: usize, digits: &str) -> Colouring {
    Colouring::from_digits(n, digits).expect("frozen digits are well formed")
}
