//! Vertices, subcubes and vertex sets of the hypercube `Q_n`.
//!
//! Vertices are `n`-bit integers with coordinate `i` stored in bit `i`.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};

/// Default cap on the ambient dimension of a materialized [`VertexSet`]
/// (a `2^24`-bit mask is 2 MiB).
pub const DEFAULT_MAX_N: u32 = 24;

/// Largest dimension a mask may ever have, regardless of configuration.
pub const HARD_MAX_N: u32 = 32;

/// Membership mask over the `2^n` vertices of `Q_n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: u32,
    words: Vec<u64>,
}

impl std::fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("VertexSet")
            .field("n", &self.n)
            .field("vertices", &self.iter().collect::<Vec<_>>())
            .finish()
    }
}

fn word_count(n: u32) -> usize {
    if n >= 6 {
        1usize << (n - 6)
    } else {
        1
    }
}

impl VertexSet {
    /// Empty set in `Q_n` with the default dimension cap.
    pub fn empty(n: u32) -> Result<Self> {
        Self::empty_capped(n, DEFAULT_MAX_N)
    }

    pub fn empty_capped(n: u32, max_n: u32) -> Result<Self> {
        let cap = max_n.min(HARD_MAX_N);
        if n > cap {
            return Err(Error::Capability(format!(
                "vertex mask for n={n} exceeds the cap n<={cap}"
            )));
        }
        Ok(VertexSet { n, words: vec![0; word_count(n)] })
    }

    pub fn full(n: u32) -> Result<Self> {
        Ok(Self::empty(n)?.complement())
    }

    /// Builds the set `{v : pred(v)}`.
    pub fn from_fn(n: u32, mut pred: impl FnMut(u64) -> bool) -> Result<Self> {
        let mut set = Self::empty(n)?;
        for v in 0..set.num_vertices() {
            if pred(v) {
                set.insert(v);
            }
        }
        Ok(set)
    }

    pub fn from_vertices(n: u32, vertices: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut set = Self::empty(n)?;
        for v in vertices {
            if v >= set.num_vertices() {
                return domain(format!("vertex {v} is outside Q_{n}"));
            }
            set.insert(v);
        }
        Ok(set)
    }

    /// Set for `n <= 6` given directly as a `2^n`-bit mask.
    pub fn from_mask(n: u32, mask: u64) -> Result<Self> {
        if n > 6 {
            return domain(format!("from_mask needs n<=6, got {n}"));
        }
        let mut set = Self::empty(n)?;
        set.words[0] = mask & set.tail_mask();
        Ok(set)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn num_vertices(&self) -> u64 {
        1u64 << self.n
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// First storage word; the whole set when `n <= 6`.
    pub fn low_mask(&self) -> u64 {
        self.words[0]
    }

    fn tail_mask(&self) -> u64 {
        if self.n >= 6 {
            u64::MAX
        } else {
            (1u64 << (1u32 << self.n)) - 1
        }
    }

    #[inline]
    pub fn contains(&self, v: u64) -> bool {
        (self.words[(v >> 6) as usize] >> (v & 63)) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: u64) {
        self.words[(v >> 6) as usize] |= 1 << (v & 63);
    }

    #[inline]
    pub fn remove(&mut self, v: u64) {
        self.words[(v >> 6) as usize] &= !(1 << (v & 63));
    }

    #[inline]
    pub fn toggle(&mut self, v: u64) {
        self.words[(v >> 6) as usize] ^= 1 << (v & 63);
    }

    pub fn len(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn complement(&self) -> Self {
        let tail = self.tail_mask();
        let words = self.words.iter().map(|w| !w & tail).collect();
        VertexSet { n: self.n, words }
    }

    /// Ascending iterator over members.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as u64;
                rest &= rest - 1;
                Some(((i as u64) << 6) | bit)
            })
        })
    }

    /// Number of members inside subcube `q`.
    pub fn count_in(&self, q: &Subcube) -> u64 {
        q.vertices_iter().filter(|&v| self.contains(v)).count() as u64
    }
}

#[derive(Serialize, Deserialize)]
struct VertexSetFile {
    n: u32,
    vertices: Vec<u64>,
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        VertexSetFile { n: self.n, vertices: self.iter().collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = VertexSetFile::deserialize(d)?;
        VertexSet::from_file_parts(file.n, &file.vertices).map_err(serde::de::Error::custom)
    }
}

impl VertexSet {
    fn from_file_parts(n: u32, vertices: &[u64]) -> Result<Self> {
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Format("vertices must be strictly ascending".into()));
        }
        Self::from_vertices(n, vertices.iter().copied())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: VertexSetFile =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_file_parts(file.n, &file.vertices)
    }
}

/// A `d`-dimensional axis-aligned subcube: `free` marks the variable
/// coordinates and `base` holds the values on the fixed ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subcube {
    pub n: u32,
    pub free: u64,
    pub base: u64,
}

impl Subcube {
    /// Canonical subcube; rejects `base & free != 0` and bits beyond `n`.
    pub fn new(n: u32, free: u64, base: u64) -> Result<Self> {
        if n > 63 {
            return domain(format!("subcubes support n<=63, got {n}"));
        }
        let full = (1u64 << n) - 1;
        if (free | base) & !full != 0 {
            return domain(format!("free/base masks exceed n={n} bits"));
        }
        if base & free != 0 {
            return domain("non-canonical subcube: base overlaps free positions");
        }
        Ok(Subcube { n, free, base })
    }

    pub fn dim(&self) -> u32 {
        self.free.count_ones()
    }

    #[inline]
    pub fn contains(&self, v: u64) -> bool {
        v & !self.free == self.base
    }

    /// Ascending vertices of the subcube.
    pub fn vertices_iter(&self) -> impl Iterator<Item = u64> {
        let (free, base) = (self.free, self.base);
        submasks_ascending(free).map(move |m| m | base)
    }

    /// Intersection with another subcube of the same cube, if nonempty.
    pub fn intersect(&self, other: &Subcube) -> Option<Subcube> {
        let fixed_both = !self.free & !other.free;
        if (self.base ^ other.base) & fixed_both != 0 {
            return None;
        }
        let free = self.free & other.free;
        Some(Subcube { n: self.n, free, base: (self.base | other.base) & !free })
    }
}

/// Ascending enumeration of all submasks of `mask`.
pub fn submasks_ascending(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        let succ = (cur | !mask).wrapping_add(1) & mask;
        next = if succ == 0 { None } else { Some(succ) };
        Some(cur)
    })
}

/// Ascending `n`-bit masks of popcount `d` (Gosper's hack).
pub fn masks_with_popcount(n: u32, d: u32) -> impl Iterator<Item = u64> {
    let limit = if n >= 64 { u64::MAX } else { 1u64 << n };
    let mut next = if d > n {
        None
    } else if d == 0 {
        Some(0u64)
    } else {
        Some((1u64 << d) - 1)
    };
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            let low = cur & cur.wrapping_neg();
            let ripple = cur.wrapping_add(low);
            if ripple == 0 {
                None
            } else {
                let succ = ripple | (((cur ^ ripple) >> 2) / low);
                (succ < limit).then_some(succ)
            }
        };
        Some(cur)
    })
}

/// All `d`-subcubes of `Q_n`: free masks ascending, then bases ascending.
pub fn enumerate_subcubes(n: u32, d: u32) -> Result<impl Iterator<Item = Subcube>> {
    if d > n {
        return domain(format!("subcube dimension d={d} exceeds n={n}"));
    }
    if n > 63 {
        return Err(Error::Capability(format!("subcube enumeration needs n<=63, got {n}")));
    }
    let full = (1u64 << n) - 1;
    Ok(masks_with_popcount(n, d).flat_map(move |free| {
        submasks_ascending(full & !free).map(move |base| Subcube { n, free, base })
    }))
}

/// Ascending vertex list of a canonical subcube.
pub fn subcube_vertices(q: &Subcube) -> Result<Vec<u64>> {
    if q.base & q.free != 0 {
        return domain("non-canonical subcube: base overlaps free positions");
    }
    Ok(q.vertices_iter().collect())
}

/// Number of `d`-subcubes of `Q_n`: `C(n,d) * 2^(n-d)`.
pub fn subcube_count(n: u32, d: u32) -> BigUint {
    if d > n {
        return BigUint::zero();
    }
    binomial_u(n as u64, d as u64) << (n - d) as usize
}

/// `C(n, k)`; zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> Result<BigUint> {
    if n < 0 {
        return domain(format!("binomial needs n>=0, got {n}"));
    }
    if k < 0 || k > n {
        return Ok(BigUint::zero());
    }
    Ok(binomial_u(n as u64, k as u64))
}

pub(crate) fn binomial_u(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Row `C(d, 0..=d)` of Pascal's triangle.
pub fn binomial_row(d: u64) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(d as usize + 1);
    let mut cur = BigUint::one();
    row.push(cur.clone());
    for i in 0..d {
        cur = cur * (d - i) / (i + 1);
        row.push(cur.clone());
    }
    row
}

/// Hamming weight of a vertex.
#[inline]
pub fn weight(v: u64) -> u32 {
    v.count_ones()
}
