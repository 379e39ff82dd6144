//! Instance construction: layered extremal colourings, sharpness instances,
//! seeded random colourings and small named fixtures.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::smallest_n_for;
use crate::colour::Colour;
use crate::colouring::Colouring;
use crate::error::{Error, Result};
use crate::triple::Triple;

/// Name and version of the random colouring generator. Changing the
/// sampling procedure in any way must bump the version.
pub const RANDOM_GENERATOR: &str = "chacha8-weighted";
pub const RANDOM_GENERATOR_VERSION: u32 = 1;

/// Layer sizes `(a, b, c)` for colours 1, 2, 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LayerSpec {
    pub sizes: [usize; 3],
}

impl LayerSpec {
    pub fn new(a: usize, b: usize, c: usize) -> LayerSpec {
        LayerSpec { sizes: [a, b, c] }
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Colour of vertex `v`'s layer.
    pub fn layer_of(&self, v: usize) -> Colour {
        let [a, b, _] = self.sizes;
        if v < a {
            Colour::ONE
        } else if v < a + b {
            Colour::TWO
        } else {
            Colour::THREE
        }
    }
}

/// Every triple takes the lowest layer colour among its vertices.
pub fn layered_lowest_colour(layers: LayerSpec) -> Result<Colouring> {
    let n = layers.n();
    if n < 3 {
        return Err(Error::Instance(format!("layered colouring needs at least 3 vertices, got {n}")));
    }
    // layers are contiguous and increasing, so the smallest vertex decides
    Colouring::from_fn(n, |t| layers.layer_of(t.i))
}

/// Caps on a matching of the layered colouring that avoids colour 1, 2 and
/// 3 respectively.
pub fn layered_upper_bounds(layers: LayerSpec) -> [usize; 3] {
    let [a, b, c] = layers.sizes;
    let n = a + b + c;
    [(b + c) / 3, a + c / 3, (a + b).min(n / 3)]
}

/// Layer sizes for [`sharpness_instance`].
///
/// Searches `a ∈ [0,k]`, `b ∈ [0,3k]` with `c` as large as the three caps
/// allow at `k − 1`. Among the largest `n`, the split closest to the
/// proportion 1:3:9 wins (squared distance, integer arithmetic), then the
/// lexicographically smallest `(a, b)`.
pub fn sharpness_layers(k: usize) -> Result<LayerSpec> {
    if k < 2 {
        return Err(Error::Input(format!("sharpness instances need k >= 2, got {k}")));
    }
    let cap = k - 1;
    let mut best: Option<(usize, u128, LayerSpec)> = None;
    for a in 0..=k {
        for b in 0..=3 * k {
            let Some(c) = (0..=4 * k)
                .rev()
                .find(|&c| layered_upper_bounds(LayerSpec::new(a, b, c)).iter().all(|&u| u <= cap))
            else {
                continue;
            };
            let spec = LayerSpec::new(a, b, c);
            let n = spec.n();
            let dist = proportion_distance(spec);
            let better = match &best {
                None => true,
                Some((bn, bd, _)) => n > *bn || (n == *bn && dist < *bd),
            };
            if better {
                best = Some((n, dist, spec));
            }
        }
    }
    Ok(best.expect("a = b = c = 0 is always feasible").2)
}

fn proportion_distance(spec: LayerSpec) -> u128 {
    let n = spec.n() as i128;
    spec.sizes
        .iter()
        .zip([1i128, 3, 9])
        .map(|(&x, p)| {
            let d = 13 * x as i128 - n * p;
            (d * d) as u128
        })
        .sum()
}

/// A layered colouring on `smallest_n_for(k) − 1` vertices with no
/// 2-coloured matching of size `k`.
pub fn sharpness_instance(k: usize) -> Result<Colouring> {
    let layers = sharpness_layers(k)?;
    debug_assert_eq!(layers.n(), smallest_n_for(k) - 1);
    layered_lowest_colour(layers)
}

/// Independently weighted colour per triple, drawn in colex order from a
/// ChaCha8 stream seeded with `seed`.
///
/// Each draw takes the top 53 bits of one `u64` as a uniform in `[0, 1)`
/// and picks the first colour whose normalised cumulative weight exceeds
/// it. Output is identical on every platform.
pub fn random_colouring(n: usize, seed: u64, weights: [f64; 3]) -> Result<Colouring> {
    if n < 3 {
        return Err(Error::Instance(format!("random colouring needs at least 3 vertices, got {n}")));
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::Input(format!("weights must be finite and nonnegative, got {weights:?}")));
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::Input("weights must not all be zero".into()));
    }
    let cumulative = [
        weights[0] / total,
        (weights[0] + weights[1]) / total,
        1.0,
    ];
    let last_nonzero = Colour::ALL[weights.iter().rposition(|&w| w > 0.0).unwrap()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Colouring::from_fn(n, |_| {
        let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        Colour::ALL
            .into_iter()
            .zip(cumulative)
            .find(|&(c, cum)| u < cum && weights[c.index()] > 0.0)
            .map_or(last_nonzero, |(c, _)| c)
    })
}

/// Parameters `(r, t, s, k)` of the general bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureParams {
    pub r: u64,
    pub t: u64,
    pub s: u64,
    pub k: u64,
}

/// `k·r + ⌊(k−1)(t−s) / (1 + r + … + r^(s−1))⌋`, evaluated exactly.
pub fn conjecture_bound(p: ConjectureParams) -> Result<u64> {
    let ConjectureParams { r, t, s, k } = p;
    if r < 2 || k < 1 || s < 1 || s > t {
        return Err(Error::Input(format!(
            "need r >= 2, k >= 1 and 1 <= s <= t, got r={r} t={t} s={s} k={k}"
        )));
    }
    let overflow = || Error::Input("conjecture bound overflows 64 bits".into());
    let mut denom: u64 = 0;
    let mut power: u64 = 1;
    for i in 0..s {
        denom = denom.checked_add(power).ok_or_else(overflow)?;
        if i + 1 < s {
            power = power.checked_mul(r).ok_or_else(overflow)?;
        }
    }
    let numer = (k - 1).checked_mul(t - s).ok_or_else(overflow)?;
    k.checked_mul(r)
        .and_then(|base| base.checked_add(numer / denom))
        .ok_or_else(overflow)
}

pub const FIXTURE_NAMES: [&str; 3] = ["FIX-A", "FIX-B", "FIX-C"];

/// Six-vertex fixtures exercising the sextuple classes.
///
/// * `FIX-A`: level-1 spread in colour 1, `c(3,4,5)=2`, `c(1,2,5)=3`.
/// * `FIX-B`: universal sextuple, `c(0,1,3)=c(2,4,5)=2`,
///   `c(0,1,4)=c(2,3,5)=3`.
/// * `FIX-C`: level-2 spread in colour 1, `c(3,4,5)=2`, `c(2,4,5)=3`.
///
/// All other triples have colour 1.
pub fn fixture(name: &str) -> Result<Colouring> {
    let special: &[([usize; 3], Colour)] = match name {
        "FIX-A" => &[([3, 4, 5], Colour::TWO), ([1, 2, 5], Colour::THREE)],
        "FIX-B" => &[
            ([0, 1, 3], Colour::TWO),
            ([2, 4, 5], Colour::TWO),
            ([0, 1, 4], Colour::THREE),
            ([2, 3, 5], Colour::THREE),
        ],
        "FIX-C" => &[([3, 4, 5], Colour::TWO), ([2, 4, 5], Colour::THREE)],
        other => return Err(Error::Lookup(other.to_string())),
    };
    Colouring::from_fn(6, |t| {
        special
            .iter()
            .find(|(v, _)| Triple::from_array(*v) == t)
            .map_or(Colour::ONE, |&(_, c)| c)
    })
}

/// Copies `pattern` onto `offset..offset + pattern.n()` of an otherwise
/// `filler`-coloured colouring on `n` vertices.
pub fn embed(pattern: &Colouring, offset: usize, n: usize, filler: Colour) -> Result<Colouring> {
    embed_many(&[(pattern, offset)], n, filler)
}

/// Several non-overlapping [`embed`]s at once.
pub fn embed_many(patterns: &[(&Colouring, usize)], n: usize, filler: Colour) -> Result<Colouring> {
    for (p, off) in patterns {
        if off + p.n() > n {
            return Err(Error::Instance(format!(
                "pattern of {} vertices at offset {off} does not fit in {n}",
                p.n()
            )));
        }
    }
    Colouring::from_fn(n, |t| {
        for (p, off) in patterns {
            let range = *off..off + p.n();
            if range.contains(&t.i) && range.contains(&t.k) {
                return p.get(t.i - off, t.j - off, t.k - off);
            }
        }
        filler
    })
}

/// Applies a colour permutation (`perm[c − 1]` is the image of colour `c`).
pub fn permute_colours(c: &Colouring, perm: [Colour; 3]) -> Colouring {
    Colouring::new(c.n(), c.table().iter().map(|x| perm[x.index()]).collect())
        .expect("same shape")
}
