use crate::colour::{Colour, ColourSet};
use crate::error::{Error, Result};
use crate::triple::{binomial, rank_unchecked, Triple};
use crate::vset::{combinations, VertexSet, MAX_VERTICES};

/// Read access to triple colours.
///
/// Implemented by [`Colouring`] and by colour-permuted views of it, so the
/// structural scans can run in whichever colour frame a procedure needs.
pub trait ColourLookup {
    fn vertex_count(&self) -> usize;

    /// Colour of `{a, b, c}`; the vertices must be distinct, any order.
    fn lookup(&self, a: usize, b: usize, c: usize) -> Colour;

    fn colour_t(&self, t: Triple) -> Colour {
        self.lookup(t.i, t.j, t.k)
    }
}

impl<T: ColourLookup + ?Sized> ColourLookup for &T {
    fn vertex_count(&self) -> usize {
        (**self).vertex_count()
    }

    fn lookup(&self, a: usize, b: usize, c: usize) -> Colour {
        (**self).lookup(a, b, c)
    }
}

/// A 3-colouring of the complete 3-uniform hypergraph on `n` vertices.
///
/// The table is indexed by colex triple rank and never changes after
/// construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Colouring {
    n: usize,
    table: Vec<Colour>,
}

impl Colouring {
    pub fn new(n: usize, table: Vec<Colour>) -> Result<Colouring> {
        if n > MAX_VERTICES {
            return Err(Error::Instance(format!(
                "{n} vertices exceeds the supported maximum of {MAX_VERTICES}"
            )));
        }
        let expected = binomial(n, 3);
        if table.len() != expected {
            return Err(Error::Instance(format!(
                "colour table has {} entries, C({n},3) = {expected}",
                table.len()
            )));
        }
        Ok(Colouring { n, table })
    }

    /// Builds the table by evaluating `f` on every triple in colex order.
    pub fn from_fn(n: usize, mut f: impl FnMut(Triple) -> Colour) -> Result<Colouring> {
        let items: Vec<usize> = (0..n.min(MAX_VERTICES)).collect();
        let table = combinations::<3>(&items).map(|t| f(Triple::from_array(t))).collect();
        Colouring::new(n, table)
    }

    pub fn constant(n: usize, colour: Colour) -> Result<Colouring> {
        Colouring::new(n, vec![colour; binomial(n, 3)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[Colour] {
        &self.table
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::range(self.n)
    }

    /// Table lookup with range checking.
    pub fn colour_of(&self, t: Triple) -> Result<Colour> {
        if t.k >= self.n {
            return Err(Error::Bounds { index: t.k, limit: self.n });
        }
        Ok(self.table[t.rank()])
    }

    /// Unchecked lookup for sorted `i < j < k`.
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> Colour {
        self.table[rank_unchecked(i, j, k)]
    }

    /// Returns a copy with one triple recoloured.
    pub fn with_colour(&self, t: Triple, colour: Colour) -> Result<Colouring> {
        let mut next = self.clone();
        if t.k >= self.n {
            return Err(Error::Bounds { index: t.k, limit: self.n });
        }
        next.table[t.rank()] = colour;
        Ok(next)
    }

    /// The colouring induced on `keep`, relabelled to `0..keep.len()` in
    /// increasing order.
    pub fn induced(&self, keep: VertexSet) -> Colouring {
        let map = keep.to_vec();
        Colouring::from_fn(map.len(), |t| self.get(map[t.i], map[t.j], map[t.k]))
            .expect("induced colouring is well formed")
    }

    /// Colours occurring on triples inside `w`.
    pub fn colours_present(&self, w: VertexSet) -> ColourSet {
        let items = w.to_vec();
        let mut seen = ColourSet::EMPTY;
        for [i, j, k] in combinations::<3>(&items) {
            seen.insert(self.get(i, j, k));
            if seen == ColourSet::ALL {
                break;
            }
        }
        seen
    }

    pub fn to_digits(&self) -> String {
        self.table.iter().map(|c| c.digit()).collect()
    }

    pub fn from_digits(n: usize, digits: &str) -> Result<Colouring> {
        let table = digits
            .bytes()
            .enumerate()
            .map(|(pos, b)| {
                Colour::from_digit(b).ok_or_else(|| {
                    Error::Parse(format!("invalid colour digit {:?} at position {pos}", char::from(b)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Colouring::new(n, table)
    }
}

impl ColourLookup for Colouring {
    fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    fn lookup(&self, a: usize, b: usize, c: usize) -> Colour {
        let (mut x, mut y, mut z) = (a, b, c);
        if x > y {
            std::mem::swap(&mut x, &mut y);
        }
        if y > z {
            std::mem::swap(&mut y, &mut z);
        }
        if x > y {
            std::mem::swap(&mut x, &mut y);
        }
        self.get(x, y, z)
    }
}

/// A colour-permuted view: `lookup` reports canonical colours.
///
/// Procedures are written once for canonical colours and run through a
/// frame that maps the instance's actual colours onto them.
#[derive(Clone, Copy, Debug)]
pub struct Framed<'a> {
    inner: &'a Colouring,
    to_canon: [Colour; 3],
    to_actual: [Colour; 3],
}

impl<'a> Framed<'a> {
    pub fn identity(inner: &'a Colouring) -> Framed<'a> {
        Framed { inner, to_canon: Colour::ALL, to_actual: Colour::ALL }
    }

    /// Rotation sending actual colour `alpha` to canonical colour 1.
    /// Rotations preserve the `α+1` / `α−1` roles inside spreads.
    pub fn rotated(inner: &'a Colouring, alpha: Colour) -> Framed<'a> {
        let shift = -(i32::from(alpha.value()) - 1);
        let to_canon = Colour::ALL.map(|c| c.shift(shift));
        let mut to_actual = Colour::ALL;
        for c in Colour::ALL {
            to_actual[to_canon[c.index()].index()] = c;
        }
        Framed { inner, to_canon, to_actual }
    }

    /// The same view with canonical colours 2 and 3 exchanged.
    pub fn swap_two_three(self) -> Framed<'a> {
        let swap = |c: Colour| match c.value() {
            2 => Colour::THREE,
            3 => Colour::TWO,
            _ => c,
        };
        let to_canon = self.to_canon.map(swap);
        let mut to_actual = Colour::ALL;
        for c in Colour::ALL {
            to_actual[to_canon[c.index()].index()] = c;
        }
        Framed { inner: self.inner, to_canon, to_actual }
    }

    pub fn inner(&self) -> &'a Colouring {
        self.inner
    }

    pub fn actual(&self, canonical: Colour) -> Colour {
        self.to_actual[canonical.index()]
    }

    pub fn canonical(&self, actual: Colour) -> Colour {
        self.to_canon[actual.index()]
    }
}

impl ColourLookup for Framed<'_> {
    fn vertex_count(&self) -> usize {
        self.inner.n
    }

    #[inline]
    fn lookup(&self, a: usize, b: usize, c: usize) -> Colour {
        self.to_canon[self.inner.lookup(a, b, c).index()]
    }
}
