//! Exact distributions of `|A ∩ Q|` over the `d`-subcubes `Q` of `Q_n`.

mod exhaustive;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cube::{binomial_row, binomial_u, masks_with_popcount, subcube_count, VertexSet};
use crate::error::{domain, Result};
use crate::rational::{self, Rational};

pub use exhaustive::{exhaustive_lambda, ExhaustiveOptions, ExhaustiveResult};

/// Number of `d`-subcubes holding each possible number `s` of vertices.
///
/// Only nonzero counts are stored; `count(s)` is zero for every other `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubcubeDistribution {
    pub n: u32,
    pub d: u32,
    counts: BTreeMap<u64, BigUint>,
    total: BigUint,
}

impl SubcubeDistribution {
    fn from_counts(n: u32, d: u32, counts: BTreeMap<u64, BigUint>) -> Self {
        let counts = counts.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        SubcubeDistribution { n, d, counts, total: subcube_count(n, d) }
    }

    pub fn total(&self) -> &BigUint {
        &self.total
    }

    pub fn count(&self, s: u64) -> BigUint {
        self.counts.get(&s).cloned().unwrap_or_default()
    }

    /// `(s, count)` pairs with nonzero count, ascending in `s`.
    pub fn nonzero(&self) -> impl Iterator<Item = (u64, &BigUint)> {
        self.counts.iter().map(|(&s, c)| (s, c))
    }

    /// Largest admissible intersection size, `2^d`.
    pub fn max_s(&self) -> u64 {
        1u64 << self.d
    }

    /// Fraction of subcubes containing exactly `s` vertices.
    pub fn lambda(&self, s: u64) -> Result<Rational> {
        if s > self.max_s() {
            return domain(format!("s={s} exceeds 2^d={}", self.max_s()));
        }
        Ok(rational::from_biguint(&self.count(s), &self.total))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

impl Serialize for SubcubeDistribution {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        struct Counts<'a>(&'a BTreeMap<u64, BigUint>);
        impl Serialize for Counts<'_> {
            fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = ser.serialize_map(Some(self.0.len()))?;
                for (s, c) in self.0 {
                    map.serialize_entry(&s.to_string(), &c.to_str_radix(10))?;
                }
                map.end()
            }
        }
        let mut map = ser.serialize_map(Some(4))?;
        map.serialize_entry("n", &self.n)?;
        map.serialize_entry("d", &self.d)?;
        map.serialize_entry("total", &self.total.to_str_radix(10))?;
        map.serialize_entry("counts", &Counts(&self.counts))?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for SubcubeDistribution {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: u32,
            d: u32,
            total: String,
            counts: BTreeMap<String, String>,
        }
        let raw = Raw::deserialize(de)?;
        if raw.d > raw.n {
            return Err(D::Error::custom("d exceeds n"));
        }
        let total: BigUint = raw.total.parse().map_err(D::Error::custom)?;
        let mut counts = BTreeMap::new();
        for (s, c) in raw.counts {
            let s: u64 = s.parse().map_err(D::Error::custom)?;
            if raw.d < 64 && s > 1u64 << raw.d {
                return Err(D::Error::custom(format!("count key {s} exceeds 2^d")));
            }
            counts.insert(s, c.parse::<BigUint>().map_err(D::Error::custom)?);
        }
        let dist = SubcubeDistribution::from_counts(raw.n, raw.d, counts);
        if dist.total != total {
            return Err(D::Error::custom("total does not equal C(n,d)*2^(n-d)"));
        }
        let sum: BigUint = dist.counts.values().sum();
        if sum != total {
            return Err(D::Error::custom("counts do not sum to total"));
        }
        Ok(dist)
    }
}

/// Interval `[lower, upper]` containing the limit `lambda(d, s)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaBounds {
    pub d: u32,
    pub s: u64,
    #[serde(with = "rational::serde_str")]
    pub lower: Rational,
    #[serde(with = "rational::serde_str")]
    pub upper: Rational,
    pub lower_witness: String,
    pub upper_source: UpperSource,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpperSource {
    ClosedForm,
    Generic,
    ReferenceConstant,
}

/// Union of whole layers: vertex `v` is a member iff `weight(v) mod k ∈ residues`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayeredSpec {
    pub k: u64,
    pub residues: BTreeSet<u64>,
}

impl LayeredSpec {
    pub fn new(k: u64, residues: impl IntoIterator<Item = u64>) -> Result<Self> {
        let spec = LayeredSpec { k, residues: residues.into_iter().collect() };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return domain("layered modulus k must be at least 1");
        }
        if let Some(&r) = self.residues.iter().find(|&&r| r >= self.k) {
            return domain(format!("residue {r} is not in Z_{}", self.k));
        }
        Ok(())
    }

    #[inline]
    pub fn contains_weight(&self, w: u64) -> bool {
        self.residues.contains(&(w % self.k))
    }

    /// Vertices of the layered set inside a `d`-subcube whose base has weight `w`.
    pub fn count_in_subcube(&self, d: u32, base_weight: u64, row: &[BigUint]) -> BigUint {
        debug_assert_eq!(row.len(), d as usize + 1);
        (0..=d as u64)
            .filter(|&i| self.contains_weight(base_weight + i))
            .map(|i| &row[i as usize])
            .sum()
    }
}

fn check_dims(set: &VertexSet, d: u32) -> Result<()> {
    if d > set.n() {
        return domain(format!("subcube dimension d={d} exceeds n={}", set.n()));
    }
    Ok(())
}

fn into_ordered_counts(tally: Tally) -> BTreeMap<u64, BigUint> {
    match tally {
        Tally::Dense(v) => v
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c > 0)
            .map(|(s, c)| (s as u64, BigUint::from(c)))
            .collect(),
        Tally::Sparse(m) => m.into_iter().map(|(s, c)| (s, BigUint::from(c))).collect(),
    }
}

/// Per-worker histogram; dense when `2^d` is small.
enum Tally {
    Dense(Vec<u64>),
    Sparse(BTreeMap<u64, u64>),
}

impl Tally {
    fn new(d: u32) -> Self {
        if d <= 16 {
            Tally::Dense(vec![0; (1usize << d) + 1])
        } else {
            Tally::Sparse(BTreeMap::new())
        }
    }

    #[inline]
    fn add(&mut self, s: u64, times: u64) {
        match self {
            Tally::Dense(v) => v[s as usize] += times,
            Tally::Sparse(m) => *m.entry(s).or_default() += times,
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        match other {
            Tally::Dense(v) => {
                for (s, c) in v.into_iter().enumerate() {
                    if c > 0 {
                        self.add(s as u64, c);
                    }
                }
            }
            Tally::Sparse(m) => {
                for (s, c) in m {
                    self.add(s, c);
                }
            }
        }
        self
    }
}

/// Direct enumeration: every subcube, every vertex.
pub fn distribution(set: &VertexSet, d: u32) -> Result<SubcubeDistribution> {
    check_dims(set, d)?;
    let n = set.n();
    let full = (1u64 << n) - 1;
    let frees: Vec<u64> = masks_with_popcount(n, d).collect();
    let tally = frees
        .par_iter()
        .fold(
            || Tally::new(d),
            |mut tally, &free| {
                for base in crate::cube::submasks_ascending(full & !free) {
                    let inside = crate::cube::submasks_ascending(free)
                        .filter(|&m| set.contains(m | base))
                        .count();
                    tally.add(inside as u64, 1);
                }
                tally
            },
        )
        .reduce(|| Tally::new(d), Tally::merge);
    Ok(SubcubeDistribution::from_counts(n, d, into_ordered_counts(tally)))
}

#[inline]
fn insert_zero(j: usize, p: u32) -> usize {
    let low = j & ((1usize << p) - 1);
    ((j >> p) << (p + 1)) | low
}

/// Folds the indicator array of `set` along every free coordinate (ascending),
/// leaving in `buf[..2^(n-d)]` the count of each subcube with this free mask.
fn fold_free_mask(set: &VertexSet, free: u64, buf: &mut Vec<u32>) -> usize {
    let n = set.n();
    if free == 0 {
        buf.clear();
        buf.extend((0..1u64 << n).map(|v| set.contains(v) as u32));
        return buf.len();
    }
    let mut positions = Vec::with_capacity(free.count_ones() as usize);
    let mut rest = free;
    while rest != 0 {
        positions.push(rest.trailing_zeros());
        rest &= rest - 1;
    }
    let first = positions[0];
    let mut len = 1usize << (n - 1);
    buf.clear();
    buf.extend((0..len).map(|j| {
        let lo = insert_zero(j, first) as u64;
        set.contains(lo) as u32 + set.contains(lo | (1 << first)) as u32
    }));
    for (removed, &pos) in positions.iter().enumerate().skip(1) {
        let p = pos - removed as u32;
        let half = len >> 1;
        for j in 0..half {
            let lo = insert_zero(j, p);
            buf[j] = buf[lo] + buf[lo | (1 << p)];
        }
        len = half;
    }
    len
}

/// Same result as [`distribution`], computed by `d` pairwise half-cube folds
/// per free mask over the `2^n` indicator array.
pub fn distribution_fast(set: &VertexSet, d: u32) -> Result<SubcubeDistribution> {
    check_dims(set, d)?;
    let n = set.n();
    let frees: Vec<u64> = masks_with_popcount(n, d).collect();
    let tally = frees
        .par_iter()
        .fold(
            || (Tally::new(d), Vec::new()),
            |(mut tally, mut buf), &free| {
                let len = fold_free_mask(set, free, &mut buf);
                for &c in &buf[..len] {
                    tally.add(c as u64, 1);
                }
                (tally, buf)
            },
        )
        .map(|(tally, _)| tally)
        .reduce(|| Tally::new(d), Tally::merge);
    Ok(SubcubeDistribution::from_counts(n, d, into_ordered_counts(tally)))
}

/// Per-subcube counts for a single free mask, indexed by the compressed
/// fixed coordinates; exposed for free-set independence checks.
pub fn counts_for_free_mask(set: &VertexSet, free: u64) -> Vec<u32> {
    let mut buf = Vec::new();
    let len = fold_free_mask(set, free, &mut buf);
    buf.truncate(len);
    buf
}

/// `lambda(n, d, s, A)`.
pub fn lambda_of_set(set: &VertexSet, d: u32, s: u64) -> Result<Rational> {
    if d < 64 && s > 1u64 << d {
        return domain(format!("s={s} exceeds 2^d"));
    }
    distribution_fast(set, d)?.lambda(s)
}

/// Analytic distribution of a layered set in `Q_n`, valid for any `n`.
///
/// A subcube whose base has weight `w` holds `sum C(d,i)` over the `i` with
/// `(w+i) mod k ∈ T`, and there are `C(n,d) C(n-d,w)` subcubes of base weight `w`.
pub fn layered_distribution(n: u32, d: u32, spec: &LayeredSpec) -> Result<SubcubeDistribution> {
    spec.validate()?;
    if d > n {
        return domain(format!("subcube dimension d={d} exceeds n={n}"));
    }
    let row = binomial_row(d as u64);
    let free_sets = binomial_u(n as u64, d as u64);
    let base_row = binomial_row((n - d) as u64);
    let mut counts: BTreeMap<u64, BigUint> = BTreeMap::new();
    for (w, bases) in base_row.iter().enumerate() {
        let inside = spec.count_in_subcube(d, w as u64, &row);
        let inside: u64 = inside.try_into().expect("subcube count exceeds u64");
        *counts.entry(inside).or_default() += &free_sets * bases;
    }
    Ok(SubcubeDistribution::from_counts(n, d, counts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::enumerate_subcubes;
    use crate::rational::ratio;
    use proptest::prelude::*;

    fn parity(n: u32) -> VertexSet {
        VertexSet::from_fn(n, |v| v.count_ones() % 2 == 0).unwrap()
    }

    #[test]
    fn empty_set_lands_in_zero() {
        let a = VertexSet::empty(3).unwrap();
        let dist = distribution(&a, 2).unwrap();
        assert_eq!(dist.count(0), BigUint::from(6u32));
        assert_eq!(dist.nonzero().count(), 1);
        assert_eq!(dist.lambda(0).unwrap(), rational::one());
    }

    #[test]
    fn antipodal_pair_cuts_every_facet() {
        let a = VertexSet::from_vertices(3, [0b000, 0b111]).unwrap();
        let dist = distribution(&a, 2).unwrap();
        assert_eq!(dist.count(1), BigUint::from(6u32));
        assert_eq!(dist.lambda(1).unwrap(), rational::one());
    }

    #[test]
    fn even_weight_set_halves_every_square() {
        let dist = distribution(&parity(4), 2).unwrap();
        assert_eq!(dist.count(2), BigUint::from(24u32));
        assert_eq!(dist.total(), &BigUint::from(24u32));
    }

    #[test]
    fn fast_path_examples() {
        let full = VertexSet::full(4).unwrap();
        let dist = distribution_fast(&full, 3).unwrap();
        assert_eq!(dist.count(8), BigUint::from(8u32));
        assert_eq!(dist.total(), &BigUint::from(8u32));

        let single = VertexSet::from_vertices(4, [0]).unwrap();
        let dist = distribution_fast(&single, 2).unwrap();
        assert_eq!(dist.count(1), BigUint::from(6u32));
        assert_eq!(dist.count(0), BigUint::from(18u32));
    }

    #[test]
    fn weight_top_bottom_in_q8() {
        let a = VertexSet::from_fn(8, |v| matches!(v.count_ones(), 0 | 7)).unwrap();
        assert_eq!(lambda_of_set(&a, 6, 1).unwrap(), ratio(3, 4));
    }

    #[test]
    fn lambda_rejects_out_of_range_s() {
        let a = VertexSet::empty(3).unwrap();
        assert!(lambda_of_set(&a, 2, 5).is_err());
        assert_eq!(lambda_of_set(&a, 2, 0).unwrap(), rational::one());
        assert!(distribution(&a, 4).is_err());
        assert!(distribution_fast(&a, 4).is_err());
    }

    #[test]
    fn layered_examples() {
        let spec = LayeredSpec::new(3, [0]).unwrap();
        let dist = layered_distribution(4, 2, &spec).unwrap();
        assert_eq!(dist.count(1), BigUint::from(18u32));
        assert_eq!(dist.count(2), BigUint::from(6u32));
        assert_eq!(dist.total(), &BigUint::from(24u32));
        assert_eq!(dist.lambda(1).unwrap(), ratio(3, 4));

        let spec = LayeredSpec::new(2, [0]).unwrap();
        let dist = layered_distribution(200, 1, &spec).unwrap();
        assert_eq!(&dist.count(1), dist.total());

        let spec = LayeredSpec::new(5, 0..5).unwrap();
        let dist = layered_distribution(40, 3, &spec).unwrap();
        assert_eq!(&dist.count(8), dist.total());

        assert!(LayeredSpec::new(3, [3]).is_err());
        assert!(LayeredSpec::new(0, []).is_err());
        assert!(layered_distribution(2, 3, &LayeredSpec::new(2, [0]).unwrap()).is_err());
    }

    #[test]
    fn distribution_json_shape() {
        let spec = LayeredSpec::new(3, [0]).unwrap();
        let dist = layered_distribution(4, 2, &spec).unwrap();
        let text = dist.to_json().unwrap();
        assert_eq!(text, r#"{"n":4,"d":2,"total":"24","counts":{"1":"18","2":"6"}}"#);
        let back: SubcubeDistribution = serde_json::from_str(&text).unwrap();
        assert_eq!(back, dist);
        let bad = r#"{"n":4,"d":2,"total":"24","counts":{"1":"17","2":"6"}}"#;
        assert!(serde_json::from_str::<SubcubeDistribution>(bad).is_err());
    }

    #[test]
    fn free_set_counts_follow_base_order() {
        let a = VertexSet::from_vertices(3, [0b001, 0b101, 0b110]).unwrap();
        for free in masks_with_popcount(3, 1) {
            let counts = counts_for_free_mask(&a, free);
            let direct: Vec<u32> = enumerate_subcubes(3, 1)
                .unwrap()
                .filter(|q| q.free == free)
                .map(|q| a.count_in(&q) as u32)
                .collect();
            assert_eq!(counts, direct);
        }
    }

    fn random_set() -> impl Strategy<Value = VertexSet> {
        (0u32..=9).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), 1usize << n).prop_map(move |bits| {
                VertexSet::from_fn(n, |v| bits[v as usize]).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn fast_equals_direct(set in random_set(), d_seed in 0u32..100) {
            let d = d_seed % (set.n() + 1);
            prop_assert_eq!(distribution_fast(&set, d).unwrap(), distribution(&set, d).unwrap());
        }

        #[test]
        fn complement_reflects_counts(set in random_set(), d_seed in 0u32..100) {
            let d = d_seed % (set.n() + 1);
            let a = distribution_fast(&set, d).unwrap();
            let b = distribution_fast(&set.complement(), d).unwrap();
            let top = 1u64 << d;
            for s in 0..=top {
                prop_assert_eq!(a.count(s), b.count(top - s));
            }
        }

        #[test]
        fn layered_matches_materialized(n in 0u32..=10, d_seed in 0u32..100, k in 1u64..7, t_mask in any::<u8>()) {
            let d = d_seed % (n + 1);
            let spec = LayeredSpec::new(k, (0..k).filter(|r| (t_mask >> r) & 1 == 1)).unwrap();
            let set = VertexSet::from_fn(n, |v| spec.contains_weight(v.count_ones() as u64)).unwrap();
            prop_assert_eq!(layered_distribution(n, d, &spec).unwrap(), distribution(&set, d).unwrap());
        }
    }
}
