//! Brute-force maximum of `lambda(n, d, s, A)` over all `A ⊆ V(Q_n)`.
//!
//! Masks here are `2^n`-bit integers; bit `v` is the membership of vertex `v`.

use rayon::prelude::*;

use crate::cube::{enumerate_subcubes, VertexSet};
use crate::error::{domain, Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, Default)]
pub struct ExhaustiveOptions {
    /// Enables `n = 5` via orbit representatives of the low half-cube.
    pub allow_n5: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExhaustiveResult {
    /// Number of `d`-subcubes with exactly `s` vertices in the best set.
    pub best_count: u64,
    pub total: u64,
    pub value: Rational,
    pub witness: VertexSet,
}

/// True when the ascending vertex list of `a` precedes that of `b`
/// lexicographically (a proper prefix comes first).
pub(crate) fn lex_less(a: u64, b: u64) -> bool {
    if a == b {
        return false;
    }
    let v = (a ^ b).trailing_zeros();
    let above = |m: u64| if v >= 63 { 0 } else { m >> (v + 1) };
    if (a >> v) & 1 == 1 {
        above(b) != 0
    } else {
        above(a) == 0
    }
}

#[derive(Clone, Copy)]
struct Best {
    count: u64,
    mask: u64,
}

impl Best {
    fn offer(&mut self, count: u64, mask: u64) {
        if count > self.count || (count == self.count && lex_less(mask, self.mask)) {
            self.count = count;
            self.mask = mask;
        }
    }

    fn merge(mut self, other: Best) -> Best {
        self.offer(other.count, other.mask);
        self
    }
}

fn subcube_masks(n: u32, d: u32) -> Vec<u64> {
    enumerate_subcubes(n, d)
        .expect("dimensions checked")
        .map(|q| q.vertices_iter().fold(0u64, |m, v| m | (1 << v)))
        .collect()
}

/// Exact `lambda(n, d, s)` with the lexicographically least maximizing set.
///
/// `n <= 4` is searched directly (sets with vertex 0 absent, each paired with
/// its complement). `n = 5` requires [`ExhaustiveOptions::allow_n5`].
pub fn exhaustive_lambda(n: u32, d: u32, s: u64, opts: ExhaustiveOptions) -> Result<ExhaustiveResult> {
    if d > n {
        return domain(format!("subcube dimension d={d} exceeds n={n}"));
    }
    if s > 1u64 << d {
        return domain(format!("s={s} exceeds 2^d={}", 1u64 << d));
    }
    let best = match n {
        0..=4 => search_small(n, d, s),
        5 if opts.allow_n5 => search_n5(d, s),
        5 => {
            return Err(Error::Capability(
                "n=5 exhaustive search requires the explicit n5 opt-in".into(),
            ))
        }
        _ => return Err(Error::Capability(format!("exhaustive search supports n<=5, got {n}"))),
    };
    let total = (crate::cube::binomial_u(n as u64, d as u64) << (n - d) as usize)
        .try_into()
        .expect("small cube");
    let witness = mask_to_set(n, best.mask);
    Ok(ExhaustiveResult {
        best_count: best.count,
        total,
        value: rational::ratio(best.count as i64, total as i64),
        witness,
    })
}

fn mask_to_set(n: u32, mask: u64) -> VertexSet {
    VertexSet::from_vertices(n, (0..1u64 << n).filter(|v| (mask >> v) & 1 == 1)).expect("n<=5")
}

fn search_small(n: u32, d: u32, s: u64) -> Best {
    let cubes = subcube_masks(n, d);
    let width = 1u32 << n;
    let full = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
    let mirror = (1u64 << d) - s;
    let score = |a: u64, target: u64| {
        cubes.iter().filter(|&&q| (a & q).count_ones() as u64 == target).count() as u64
    };
    // Masks with vertex 0 absent; the complement covers the other half.
    let half: u64 = 1u64 << (width - 1);
    let start = Best { count: 0, mask: full };
    (0..half)
        .into_par_iter()
        .fold(
            || start,
            |mut best, idx| {
                let a = idx << 1;
                best.offer(score(a, s), a);
                best.offer(score(a, mirror), !a & full);
                best
            },
        )
        .reduce(|| start, Best::merge)
}

/// Symmetries of `Q_4` (coordinate permutations composed with flips) as
/// vertex permutations.
fn q4_group() -> Vec<[u8; 16]> {
    let mut perms = Vec::with_capacity(384);
    let mut coords = [0usize, 1, 2, 3];
    let mut all = Vec::new();
    permutations(&mut coords, 0, &mut all);
    for p in &all {
        for flip in 0..16u8 {
            let mut map = [0u8; 16];
            for v in 0..16u8 {
                let mut image = 0u8;
                for (i, &target) in p.iter().enumerate() {
                    image |= ((v >> i) & 1) << target;
                }
                map[v as usize] = image ^ flip;
            }
            perms.push(map);
        }
    }
    perms
}

fn permutations(items: &mut [usize; 4], k: usize, out: &mut Vec<[usize; 4]>) {
    if k == items.len() {
        out.push(*items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

fn apply_perm(map: &[u8; 16], mask: u16) -> u16 {
    let mut out = 0u16;
    let mut rest = mask;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        out |= 1 << map[v];
        rest &= rest - 1;
    }
    out
}

/// Orbit representatives (least mask in each orbit) of 16-bit masks under the
/// symmetry group of `Q_4`.
pub(crate) fn q4_orbit_representatives() -> Vec<u16> {
    let group = q4_group();
    (0..=u16::MAX)
        .into_par_iter()
        .filter(|&m| group.iter().all(|g| apply_perm(g, m) >= m))
        .collect()
}

/// `Q_5 = Q_4 x {0,1}` along coordinate 4: `A = A0 | A1 << 16`. Any symmetry of
/// the low `Q_4` applied to both halves preserves every count, so `A0` ranges
/// over orbit representatives and `A1` over all masks.
fn search_n5(d: u32, s: u64) -> Best {
    let inner = if d <= 4 { subcube_masks(4, d) } else { Vec::new() };
    let spanning = if d >= 1 { subcube_masks(4, d - 1) } else { Vec::new() };
    let in_half: Vec<u8> = (0..=u16::MAX as u64)
        .map(|m| inner.iter().filter(|&&q| (m & q).count_ones() as u64 == s).count() as u8)
        .collect();
    let sections: Vec<Vec<u8>> = (0..=u16::MAX as u64)
        .map(|m| spanning.iter().map(|&q| (m & q).count_ones() as u8).collect())
        .collect();
    let reps = q4_orbit_representatives();
    let start = Best { count: 0, mask: u32::MAX as u64 };
    reps.par_iter()
        .fold(
            || start,
            |mut best, &lo| {
                let lo_sections = &sections[lo as usize];
                let lo_count = in_half[lo as usize] as u64;
                for hi in 0..=u16::MAX as usize {
                    let cross = lo_sections
                        .iter()
                        .zip(&sections[hi])
                        .filter(|(a, b)| (**a + **b) as u64 == s)
                        .count() as u64;
                    let count = lo_count + in_half[hi] as u64 + cross;
                    if count >= best.count {
                        best.offer(count, (lo as u64) | ((hi as u64) << 16));
                    }
                }
                best
            },
        )
        .reduce(|| start, Best::merge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn run(n: u32, d: u32, s: u64) -> ExhaustiveResult {
        exhaustive_lambda(n, d, s, ExhaustiveOptions::default()).unwrap()
    }

    #[test]
    fn lex_order_on_vertex_lists() {
        // [0,3] < [1,2]
        assert!(lex_less(0b1001, 0b0110));
        // [0] < [0,1]
        assert!(lex_less(0b01, 0b11));
        assert!(!lex_less(0b11, 0b01));
        // [] is least
        assert!(lex_less(0, 0b1000));
        // [0,2] < [0,3]
        assert!(lex_less(0b0101, 0b1001));
        let mut masks: Vec<u64> = (0..16).collect();
        masks.sort_by(|&a, &b| {
            let list = |m: u64| (0..4).filter(|v| (m >> v) & 1 == 1).collect::<Vec<u64>>();
            list(a).cmp(&list(b))
        });
        for w in masks.windows(2) {
            assert!(lex_less(w[0], w[1]));
        }
    }

    #[test]
    fn edge_cube_cut_by_antipodes() {
        let r = run(2, 1, 1);
        assert_eq!(r.value, rational::one());
        assert_eq!(r.witness.iter().collect::<Vec<_>>(), vec![0b00, 0b11]);
    }

    #[test]
    fn three_cube_antipodal_witness() {
        let r = run(3, 2, 1);
        assert_eq!(r.value, rational::one());
        assert_eq!(r.witness.iter().collect::<Vec<_>>(), vec![0b000, 0b111]);
    }

    #[test]
    fn four_cube_single_vertex_squares() {
        let r = run(4, 2, 1);
        assert_eq!(r.value, ratio(5, 6));
        assert_eq!(r.best_count, 20);
        assert_eq!(crate::stats::lambda_of_set(&r.witness, 2, 1).unwrap(), ratio(5, 6));
    }

    #[test]
    fn trivial_s_reaches_one() {
        for n in 1..=4u32 {
            for d in 1..=n {
                for s in [0, 1u64 << (d - 1), 1u64 << d] {
                    assert_eq!(run(n, d, s).value, rational::one(), "n={n} d={d} s={s}");
                }
            }
        }
    }

    #[test]
    fn monotone_in_n() {
        for s in 0..=4u64 {
            let a = run(2, 2, s).value;
            let b = run(3, 2, s).value;
            let c = run(4, 2, s).value;
            assert!(a >= b && b >= c, "s={s}: {a} {b} {c}");
        }
    }

    #[test]
    fn witness_matches_brute_force_lex_min() {
        // Full scan (no complement pairing) as an independent check at n=3.
        for d in 0..=3u32 {
            for s in 0..=1u64 << d {
                let cubes = subcube_masks(3, d);
                let score = |a: u64| cubes.iter().filter(|&&q| (a & q).count_ones() as u64 == s).count();
                let best = (0..256u64).map(score).max().unwrap();
                let mut winners: Vec<u64> = (0..256u64).filter(|&a| score(a) == best).collect();
                winners.sort_by(|&a, &b| if lex_less(a, b) { std::cmp::Ordering::Less } else { std::cmp::Ordering::Greater });
                let r = run(3, d, s);
                assert_eq!(r.best_count, best as u64);
                assert_eq!(r.witness, mask_to_set(3, winners[0]));
            }
        }
    }

    #[test]
    fn capability_errors() {
        assert!(matches!(
            exhaustive_lambda(5, 2, 1, ExhaustiveOptions::default()),
            Err(Error::Capability(_))
        ));
        assert!(matches!(
            exhaustive_lambda(6, 2, 1, ExhaustiveOptions { allow_n5: true }),
            Err(Error::Capability(_))
        ));
        assert!(matches!(exhaustive_lambda(3, 2, 5, ExhaustiveOptions::default()), Err(Error::Domain(_))));
    }

    #[test]
    fn q4_orbits_partition_the_masks() {
        let reps = q4_orbit_representatives();
        let group = q4_group();
        let mut seen = std::collections::HashSet::new();
        let mut covered = 0usize;
        for &r in &reps {
            let orbit: std::collections::HashSet<u16> = group.iter().map(|g| apply_perm(g, r)).collect();
            covered += orbit.len();
            for m in orbit {
                assert!(seen.insert(m));
            }
        }
        assert_eq!(covered, 1 << 16);
        assert_eq!(group.len(), 384);
    }

    #[test]
    fn n5_opt_in_matches_known_values() {
        let opts = ExhaustiveOptions { allow_n5: true };
        let r = exhaustive_lambda(5, 1, 1, opts).unwrap();
        assert_eq!(r.value, rational::one());
        let r = exhaustive_lambda(5, 3, 4, opts).unwrap();
        assert_eq!(r.value, rational::one());
        let r = exhaustive_lambda(5, 3, 1, opts).unwrap();
        assert_eq!(crate::stats::lambda_of_set(&r.witness, 3, 1).unwrap(), r.value);
        // lambda(d+2, d, 1) = pi(d+2, 3) for d < 6
        assert_eq!(r.value, ratio(4, 5));
    }
}
