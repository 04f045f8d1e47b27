//! Sums of binomial coefficients over residue classes, and the layered
//! construction of sets with approximately prescribed subcube counts.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cube::binomial_row;
use crate::error::{domain, Error, Result};
use crate::rational::{self, Rational};

/// `q(a) = sum_{i ≡ a (mod k)} C(d, i)` for every residue `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueSumTable {
    pub k: u64,
    pub d: u64,
    pub values: Vec<BigUint>,
}

impl ResidueSumTable {
    pub fn new(k: u64, d: u64) -> Result<Self> {
        if k == 0 {
            return domain("modulus k must be at least 1");
        }
        let mut values = vec![BigUint::zero(); k as usize];
        for (i, c) in binomial_row(d).into_iter().enumerate() {
            values[i % k as usize] += c;
        }
        Ok(ResidueSumTable { k, d, values })
    }

    pub fn all_equal(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }
}

/// `q(a, k, d)`.
pub fn q_binsum(a: u64, k: u64, d: u64) -> Result<BigUint> {
    if k == 0 {
        return domain("modulus k must be at least 1");
    }
    if a >= k {
        return domain(format!("residue a={a} is not in Z_{k}"));
    }
    Ok(binomial_row(d)
        .into_iter()
        .enumerate()
        .filter(|(i, _)| *i as u64 % k == a)
        .map(|(_, c)| c)
        .sum())
}

/// Root-of-unity filter `(1/k) sum_j w^{-ja} (1 + w^j)^d` in floating point.
pub fn q_fourier(a: u64, k: u64, d: u64) -> Result<Complex64> {
    if k == 0 {
        return domain("modulus k must be at least 1");
    }
    if a >= k {
        return domain(format!("residue a={a} is not in Z_{k}"));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..k {
        let theta = std::f64::consts::PI * j as f64 / k as f64;
        // 1 + e^{2i theta} = 2 cos(theta) e^{i theta}
        let modulus = 2.0 * theta.cos();
        let power = Complex64::from_polar(modulus.abs().powi(d as i32), d as f64 * theta);
        let signed = if modulus < 0.0 && d % 2 == 1 { -power } else { power };
        let twist = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * ((j * a) % k) as f64 / k as f64);
        acc += twist * signed;
    }
    Ok(acc / k as f64)
}

/// Absolute tolerance for comparing [`q_fourier`] with [`q_binsum`]:
/// `max(1e-6, 16 k max(d,1) 2^d eps)`.
pub fn fourier_tolerance(k: u64, d: u64) -> f64 {
    let scale = 16.0 * k as f64 * d.max(1) as f64 * 2f64.powi(d as i32) * f64::EPSILON;
    scale.max(1e-6)
}

fn check_residues(k: u64, residues: &BTreeSet<u64>) -> Result<()> {
    if k == 0 {
        return domain("modulus k must be at least 1");
    }
    if let Some(r) = residues.iter().find(|&&r| r >= k) {
        return domain(format!("residue {r} is not in Z_{k}"));
    }
    Ok(())
}

/// `sum C(d, i)` over `0 <= i <= d` with `(i + a) mod k ∈ T`.
pub fn thm32_q(a: u64, k: u64, d: u64, residues: &BTreeSet<u64>) -> Result<BigUint> {
    check_residues(k, residues)?;
    if a >= k {
        return domain(format!("shift a={a} is not in Z_{k}"));
    }
    Ok(binomial_row(d)
        .into_iter()
        .enumerate()
        .filter(|(i, _)| residues.contains(&((*i as u64 + a) % k)))
        .map(|(_, c)| c)
        .sum())
}

/// Shifted sums `thm32_q(a)` for every `a ∈ Z_k`, from one binomial row.
pub fn shifted_sums(k: u64, d: u64, residues: &BTreeSet<u64>) -> Result<Vec<BigUint>> {
    let table = ResidueSumTable::new(k, d)?;
    check_residues(k, residues)?;
    Ok((0..k)
        .map(|a| residues.iter().map(|&t| &table.values[((t + k - a) % k) as usize]).sum())
        .collect())
}

/// True iff `q(0..k, k, d)` are not all equal; requires `2 < k <= d`.
pub fn verify_prop31(k: u64, d: u64) -> Result<bool> {
    if k <= 2 || k > d {
        return domain(format!("verify_prop31 needs 2 < k <= d, got k={k}, d={d}"));
    }
    Ok(!ResidueSumTable::new(k, d)?.all_equal())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftedSumCase {
    pub k: u64,
    pub d: u64,
    pub residues: Vec<u64>,
    #[serde(with = "biguint_vec")]
    pub values: Vec<BigUint>,
    pub verdict: ShiftedSumVerdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftedSumVerdict {
    /// Constant sums with an admissible residue set and value.
    Admissible,
    /// Constant sums outside the classification.
    Violation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftedSumReport {
    pub k: u64,
    pub d_min: u64,
    pub d_max: u64,
    /// Every `(T, d)` whose shifted sums are all equal.
    pub constant_cases: Vec<ShiftedSumCase>,
    pub violations: usize,
}

impl ShiftedSumReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

mod biguint_vec {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_str_radix(10)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        Vec::<String>::deserialize(d)?
            .into_iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

fn admissible_residue_set(k: u64, t_mask: u64) -> bool {
    let all = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let evens = (0..k).step_by(2).fold(0u64, |m, r| m | (1 << r));
    t_mask == 0 || t_mask == all || (k.is_multiple_of(2) && (t_mask == evens || t_mask == all & !evens))
}

/// Exhaustively checks, for every `T ⊆ Z_k` and `d` in range, that constant
/// shifted sums only occur for the trivial and parity residue sets and take
/// a value in `{0, 2^(d-1), 2^d}`.
pub fn verify_thm32(k: u64, d_range: std::ops::RangeInclusive<u64>) -> Result<ShiftedSumReport> {
    if k == 0 || k > 16 {
        return Err(Error::Capability(format!("verify_thm32 enumerates 2^k sets; needs 1<=k<=16, got {k}")));
    }
    let (d_min, d_max) = (*d_range.start(), *d_range.end());
    let tables: Vec<ResidueSumTable> =
        d_range.clone().map(|d| ResidueSumTable::new(k, d)).collect::<Result<_>>()?;
    let mut cases: Vec<ShiftedSumCase> = (0..1u64 << k)
        .into_par_iter()
        .flat_map_iter(|t_mask| {
            let residues: Vec<u64> = (0..k).filter(|r| (t_mask >> r) & 1 == 1).collect();
            tables
                .iter()
                .filter_map(|table| {
                    let values: Vec<BigUint> = (0..k)
                        .map(|a| residues.iter().map(|&t| &table.values[((t + k - a) % k) as usize]).sum())
                        .collect();
                    if !values.windows(2).all(|w| w[0] == w[1]) {
                        return None;
                    }
                    let common = &values[0];
                    let full = BigUint::one() << table.d as usize;
                    let value_ok = common.is_zero()
                        || *common == full
                        || (table.d >= 1 && *common == BigUint::one() << (table.d as usize - 1));
                    let verdict = if value_ok && admissible_residue_set(k, t_mask) {
                        ShiftedSumVerdict::Admissible
                    } else {
                        ShiftedSumVerdict::Violation
                    };
                    Some(ShiftedSumCase { k, d: table.d, residues: residues.clone(), values, verdict })
                })
                .collect::<Vec<_>>()
        })
        .collect();
    cases.sort_by(|a, b| (a.d, &a.residues).cmp(&(b.d, &b.residues)));
    let violations = cases.iter().filter(|c| c.verdict == ShiftedSumVerdict::Violation).count();
    Ok(ShiftedSumReport { k, d_min, d_max, constant_cases: cases, violations })
}

/// Layered construction targeting density `x`: layers whose weight mod `q`
/// lies in `residues = {0, .., p-1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxSpec {
    pub x: f64,
    pub p: u64,
    pub q: u64,
    pub residues: Vec<u64>,
    /// Least `d` with `q e^{-d/(10 q^2)} <= (tol/2) x`.
    pub d_min: u64,
    pub tol: f64,
}

/// Default cap on the denominator chosen by [`approx_construct`].
pub const DEFAULT_MAX_Q: u64 = 1 << 16;

/// Chooses `p/q` as the first continued-fraction convergent of `x` within
/// relative error `eps/2`, then the dimension threshold for the remaining
/// `eps/2`.
pub fn approx_construct(x: f64, eps: f64) -> Result<ApproxSpec> {
    approx_construct_capped(x, eps, DEFAULT_MAX_Q)
}

pub fn approx_construct_capped(x: f64, eps: f64, max_q: u64) -> Result<ApproxSpec> {
    if !(x > 0.0 && x < 1.0) {
        return domain(format!("target density must lie in (0,1), got {x}"));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return domain(format!("tolerance must be positive, got {eps}"));
    }
    let budget = eps / 2.0 * x;
    let target = Rational::from_float(x).expect("finite x");
    let (p, q) = convergents(&target)
        .into_iter()
        .find(|(p, q)| (p.is_positive() && p < q) && (p.to_f64().unwrap() / q.to_f64().unwrap() - x).abs() <= budget)
        .ok_or_else(|| Error::Capability(format!("no convergent of {x} within {budget}")))?;
    let (p, q) = match (p.to_u64(), q.to_u64()) {
        (Some(p), Some(q)) if q <= max_q => (p, q),
        _ => {
            return Err(Error::Capability(format!(
                "approximating {x} within eps={eps} needs a denominator beyond {max_q}"
            )))
        }
    };
    let d_min = approx_d_min(q, budget);
    Ok(ApproxSpec { x, p, q, residues: (0..p).collect(), d_min, tol: eps })
}

fn approx_d_min(q: u64, budget: f64) -> u64 {
    let qf = q as f64;
    let holds = |d: u64| qf * (-(d as f64) / (10.0 * qf * qf)).exp() <= budget;
    let mut d = (10.0 * qf * qf * (qf / budget).ln()).ceil().max(0.0) as u64;
    while d > 0 && holds(d - 1) {
        d -= 1;
    }
    while !holds(d) {
        d += 1;
    }
    d
}

/// Continued-fraction convergents `(p, q)` of a nonnegative rational.
fn convergents(x: &Rational) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::new();
    let (mut num, mut den) = (x.numer().clone(), x.denom().clone());
    let (mut p_prev, mut p) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q) = (BigInt::one(), BigInt::zero());
    while !den.is_zero() {
        let a = &num / &den;
        let rem = &num - &a * &den;
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        out.push((p.clone(), q.clone()));
        num = std::mem::replace(&mut den, rem);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxCheck {
    pub d: u64,
    /// `max_a |sum_{y∈P} q(a+y, q, d) - (p/q) 2^d|`, exact.
    #[serde(with = "rational::serde_str")]
    pub max_error: Rational,
    /// `q 2^d e^{-d/(10 q^2)}` as a float (may be `inf` for huge `d`).
    pub bound: f64,
    pub bound_ok: bool,
    /// Within two ulps of the bound: accepted but flagged.
    pub borderline: bool,
}

/// Measures the worst deviation of per-subcube counts from `(p/q) 2^d`.
pub fn check_approx(spec: &ApproxSpec, d: u64) -> Result<ApproxCheck> {
    if d == 0 {
        return domain("check_approx needs d>=1");
    }
    let q = spec.q;
    if q == 0 || spec.residues.iter().any(|&r| r >= q) {
        return domain("approx spec residues must lie in Z_q");
    }
    let table = ResidueSumTable::new(q, d)?;
    let base = rational::ratio(spec.residues.len() as i64, q as i64) * rational::pow2(d as u32);
    let mut max_error = rational::zero();
    for a in 0..q {
        let count: BigUint = spec.residues.iter().map(|&y| &table.values[((a + y) % q) as usize]).sum();
        let dev = (Rational::from_integer(BigInt::from(count)) - &base).abs();
        if dev > max_error {
            max_error = dev;
        }
    }
    // Compare in units of 2^d so huge d stays finite.
    let scaled = rational::to_f64(&(&max_error / rational::pow2(d as u32)));
    let unit_bound = q as f64 * (-(d as f64) / (10.0 * (q * q) as f64)).exp();
    let margin = 2.0 * f64::EPSILON * unit_bound;
    let bound_ok = scaled <= unit_bound + margin;
    let borderline = bound_ok && (scaled - unit_bound).abs() <= margin;
    let bound = unit_bound * 2f64.powi(d.min(i32::MAX as u64) as i32);
    Ok(ApproxCheck { d, max_error, bound, bound_ok, borderline })
}

/// Every third layer: all `q(a, 3, d)` are `floor(2^d/3)` or `ceil(2^d/3)`.
pub fn third_layer_check(d_max: u64) -> bool {
    (1..=d_max).all(|d| {
        let full = BigUint::one() << d as usize;
        let lo = &full / 3u32;
        let hi = if (&full % 3u32).is_zero() { lo.clone() } else { &lo + 1u32 };
        ResidueSumTable::new(3, d).expect("k=3").values.iter().all(|v| *v == lo || *v == hi)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn set(items: &[u64]) -> BTreeSet<u64> {
        items.iter().copied().collect()
    }

    #[test]
    fn residue_sums() {
        assert_eq!(q_binsum(0, 3, 4).unwrap(), big(5));
        assert_eq!(q_binsum(1, 3, 4).unwrap(), big(5));
        assert_eq!(q_binsum(2, 3, 4).unwrap(), big(6));
        for d in 0..20 {
            assert_eq!(q_binsum(0, 1, d).unwrap(), big(1 << d));
        }
        for d in 1..20 {
            assert_eq!(q_binsum(0, 2, d).unwrap(), big(1 << (d - 1)));
            assert_eq!(q_binsum(1, 2, d).unwrap(), big(1 << (d - 1)));
        }
        assert!(q_binsum(3, 3, 4).is_err());
        assert!(q_binsum(0, 0, 4).is_err());
    }

    #[test]
    fn fourier_examples() {
        let z = q_fourier(0, 3, 4).unwrap();
        assert!((z.re - 5.0).abs() < 1e-9 && z.im.abs() < 1e-9);
        let z = q_fourier(0, 2, 5).unwrap();
        assert!((z.re - 16.0).abs() < 1e-9);
        // C(6,1) + C(6,5) = 12, and i = 9 lies outside [0, 6].
        assert_eq!(q_binsum(1, 4, 6).unwrap(), big(12));
        let z = q_fourier(1, 4, 6).unwrap();
        assert!((z.re - 12.0).abs() < 1e-9);
    }

    #[test]
    fn shifted_residue_sets() {
        for d in 0..12 {
            assert_eq!(thm32_q(2, 5, d, &(0..5).collect()).unwrap(), big(1 << d));
            assert_eq!(thm32_q(2, 5, d, &BTreeSet::new()).unwrap(), big(0));
        }
        assert_eq!(thm32_q(1, 2, 4, &set(&[0])).unwrap(), big(8));
        assert!(thm32_q(0, 3, 4, &set(&[3])).is_err());
        for k in 1..7 {
            for d in 0..10 {
                for t in 0..k {
                    for a in 0..k {
                        assert_eq!(
                            thm32_q(a, k, d, &set(&[t])).unwrap(),
                            q_binsum((t + k - a) % k, k, d).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn prop31_examples() {
        assert!(verify_prop31(3, 4).unwrap());
        assert!(verify_prop31(4, 8).unwrap());
        assert_eq!(ResidueSumTable::new(3, 3).unwrap().values, vec![big(2), big(3), big(3)]);
        assert!(verify_prop31(3, 3).unwrap());
        assert!(verify_prop31(2, 4).is_err());
        assert!(verify_prop31(5, 4).is_err());
    }

    #[test]
    fn thm32_classification() {
        let report = verify_thm32(4, 1..=12).unwrap();
        assert!(report.passed());
        let sets: BTreeSet<Vec<u64>> = report.constant_cases.iter().map(|c| c.residues.clone()).collect();
        let want: BTreeSet<Vec<u64>> = [vec![], vec![0, 1, 2, 3], vec![0, 2], vec![1, 3]].into_iter().collect();
        assert_eq!(sets, want);
        for c in &report.constant_cases {
            let expect = match c.residues.len() {
                0 => big(0),
                4 => big(1 << c.d),
                _ => big(1 << (c.d - 1)),
            };
            assert!(c.values.iter().all(|v| *v == expect));
        }

        let report = verify_thm32(3, 1..=12).unwrap();
        let sets: BTreeSet<Vec<u64>> = report.constant_cases.iter().map(|c| c.residues.clone()).collect();
        assert_eq!(sets, [vec![], vec![0, 1, 2]].into_iter().collect());

        let report = verify_thm32(2, 1..=6).unwrap();
        assert_eq!(report.constant_cases.len(), 4 * 6);
        assert!(report.passed());
        assert!(verify_thm32(17, 1..=2).is_err());
    }

    #[test]
    fn thm32_no_violations_up_to_ten() {
        for k in 9..=10 {
            let report = verify_thm32(k, 1..=16).unwrap();
            assert!(report.passed(), "k={k}");
        }
    }

    #[test]
    fn shifted_sums_match_layered_counts() {
        for k in 1..=5u64 {
            for mask in 0..1u64 << k {
                let residues: BTreeSet<u64> = (0..k).filter(|r| (mask >> r) & 1 == 1).collect();
                let spec = crate::stats::LayeredSpec::new(k, residues.iter().copied()).unwrap();
                for d in 0..=10u32 {
                    let row = binomial_row(d as u64);
                    let shifted = shifted_sums(k, d as u64, &residues).unwrap();
                    for w in 0..=(10 - d) as u64 {
                        let direct = thm32_q(w % k, k, d as u64, &residues).unwrap();
                        assert_eq!(spec.count_in_subcube(d, w, &row), direct);
                        assert_eq!(shifted[(w % k) as usize], direct);
                    }
                }
            }
        }
    }

    #[test]
    fn approx_examples() {
        let third = approx_construct(1.0 / 3.0, 0.1).unwrap();
        assert_eq!((third.p, third.q), (1, 3));
        assert_eq!(third.residues, vec![0]);

        let half = approx_construct(0.5, 0.01).unwrap();
        assert_eq!((half.p, half.q), (1, 2));
        for d in 1..30 {
            assert_eq!(check_approx(&half, d).unwrap().max_error, rational::zero());
        }

        let spec = approx_construct(0.3, 0.05).unwrap();
        assert!((0.3 - spec.p as f64 / spec.q as f64).abs() <= 0.0075);
        for d in spec.d_min..spec.d_min + 3 {
            assert!(check_approx(&spec, d).unwrap().bound_ok);
        }

        assert!(approx_construct(1.5, 0.1).is_err());
        assert!(approx_construct(0.5, 0.0).is_err());
        assert!(matches!(approx_construct_capped(0.123456789, 1e-12, 100), Err(Error::Capability(_))));
    }

    #[test]
    fn d_min_is_least() {
        for q in 2..8u64 {
            for budget in [0.5, 0.1, 0.01] {
                let d = approx_d_min(q, budget);
                let f = |d: u64| q as f64 * (-(d as f64) / (10.0 * (q * q) as f64)).exp();
                assert!(f(d) <= budget);
                assert!(d == 0 || f(d - 1) > budget);
            }
        }
    }

    #[test]
    fn third_layer_counts() {
        let spec = ApproxSpec { x: 1.0 / 3.0, p: 1, q: 3, residues: vec![0], d_min: 0, tol: 0.1 };
        let check = check_approx(&spec, 10).unwrap();
        assert!(check.max_error <= rational::one());
        assert!(check.bound_ok);
        let table = ResidueSumTable::new(3, 10).unwrap();
        assert!(table.values.iter().all(|v| *v == big(341) || *v == big(342)));

        assert!(third_layer_check(4));
        assert!(third_layer_check(30));
        assert_eq!(ResidueSumTable::new(3, 1).unwrap().values, vec![big(1), big(1), big(0)]);

        let two = ApproxSpec { x: 0.5, p: 1, q: 2, residues: vec![0], d_min: 0, tol: 0.1 };
        assert_eq!(check_approx(&two, 7).unwrap().max_error, rational::zero());
        let five = ApproxSpec { x: 0.4, p: 2, q: 5, residues: vec![0, 1], d_min: 0, tol: 0.1 };
        assert!(check_approx(&five, 40).unwrap().bound_ok);
    }
}
