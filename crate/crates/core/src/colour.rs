use std::fmt;

use serde::{Deserialize, Serialize};

/// One of the three hyperedge colours, stored as 1, 2 or 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Colour(u8);

impl Colour {
    pub const ONE: Colour = Colour(1);
    pub const TWO: Colour = Colour(2);
    pub const THREE: Colour = Colour(3);
    pub const ALL: [Colour; 3] = [Colour::ONE, Colour::TWO, Colour::THREE];

    pub fn new(value: u8) -> Option<Colour> {
        (1..=3).contains(&value).then_some(Colour(value))
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// Zero-based position, handy for per-colour arrays.
    pub fn index(self) -> usize {
        usize::from(self.0 - 1)
    }

    pub fn from_index(index: usize) -> Colour {
        Colour::ALL[index % 3]
    }

    /// Cyclic shift: `((value - 1 + d) mod 3) + 1`.
    pub fn shift(self, d: i32) -> Colour {
        let v = (i32::from(self.0) - 1 + d).rem_euclid(3) + 1;
        Colour(v as u8)
    }

    pub fn next(self) -> Colour {
        self.shift(1)
    }

    pub fn prev(self) -> Colour {
        self.shift(-1)
    }

    pub fn from_digit(ch: u8) -> Option<Colour> {
        match ch {
            b'1' => Some(Colour::ONE),
            b'2' => Some(Colour::TWO),
            b'3' => Some(Colour::THREE),
            _ => None,
        }
    }

    pub fn digit(self) -> char {
        char::from(b'0' + self.0)
    }
}

impl TryFrom<u8> for Colour {
    type Error = String;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        Colour::new(value).ok_or_else(|| format!("colour must be 1, 2 or 3, got {value}"))
    }
}

impl From<Colour> for u8 {
    fn from(c: Colour) -> u8 {
        c.0
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A subset of `{1, 2, 3}` as a 3-bit mask. Serialized as a colour list.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<Colour>", into = "Vec<Colour>")]
pub struct ColourSet(u8);

impl From<Vec<Colour>> for ColourSet {
    fn from(v: Vec<Colour>) -> ColourSet {
        v.into_iter().collect()
    }
}

impl From<ColourSet> for Vec<Colour> {
    fn from(s: ColourSet) -> Vec<Colour> {
        s.to_vec()
    }
}

impl ColourSet {
    pub const EMPTY: ColourSet = ColourSet(0);
    pub const ALL: ColourSet = ColourSet(0b111);

    /// Bit `c - 1` stands for colour `c`; higher bits are dropped.
    pub const fn from_bits(bits: u8) -> ColourSet {
        ColourSet(bits & 0b111)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn single(c: Colour) -> ColourSet {
        ColourSet(1 << c.index())
    }

    pub fn pair(a: Colour, b: Colour) -> ColourSet {
        ColourSet::single(a).with(b)
    }

    /// The two colours other than `c`.
    pub fn avoiding(c: Colour) -> ColourSet {
        ColourSet::ALL.without(c)
    }

    pub fn contains(self, c: Colour) -> bool {
        self.0 & (1 << c.index()) != 0
    }

    pub fn with(self, c: Colour) -> ColourSet {
        ColourSet(self.0 | (1 << c.index()))
    }

    pub fn without(self, c: Colour) -> ColourSet {
        ColourSet(self.0 & !(1 << c.index()))
    }

    pub fn insert(&mut self, c: Colour) {
        *self = self.with(c);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn complement(self) -> ColourSet {
        ColourSet(!self.0 & 0b111)
    }

    pub fn iter(self) -> impl Iterator<Item = Colour> {
        Colour::ALL.into_iter().filter(move |&c| self.contains(c))
    }

    /// Lowest colour not in the set, if any.
    pub fn first_missing(self) -> Option<Colour> {
        self.complement().iter().next()
    }

    pub fn to_vec(self) -> Vec<Colour> {
        self.iter().collect()
    }
}

impl FromIterator<Colour> for ColourSet {
    fn from_iter<I: IntoIterator<Item = Colour>>(iter: I) -> Self {
        iter.into_iter().fold(ColourSet::EMPTY, ColourSet::with)
    }
}

impl fmt::Display for ColourSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}
