//! Turán graph edge counts and densities.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::hadamard::recipe_for;
use crate::johnson::hadamard_divisor;
use crate::rational::{self, Rational};

fn pairs(m: u64) -> u128 {
    let m = m as u128;
    m * m.saturating_sub(1) / 2
}

/// Edges of the complete `k`-partite graph on `n` vertices with parts as
/// equal as possible.
pub fn turan_edges(n: u64, k: u64) -> Result<u128> {
    if k == 0 {
        return domain("Turán graph needs k>=1");
    }
    if k >= n {
        return Ok(pairs(n));
    }
    let (q, r) = (n / k, n % k);
    let inside = r as u128 * pairs(q + 1) + (k - r) as u128 * pairs(q);
    Ok(pairs(n) - inside)
}

/// `t(n,k) / C(n,2)`; defined as 1 for `n < 2`.
pub fn turan_density(n: u64, k: u64) -> Result<Rational> {
    let edges = turan_edges(n, k)?;
    if n < 2 {
        return Ok(rational::one());
    }
    Ok(Rational::new(edges.into(), pairs(n).into()))
}

/// `lambda(d+2, d, s)`, exact or as an interval when `omega(s)` is unknown.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub d: u32,
    pub s: u64,
    #[serde(with = "rational::serde_str")]
    pub lower: Rational,
    #[serde(with = "rational::serde_str")]
    pub upper: Rational,
}

impl ClosedForm {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }
}

/// `lambda(d+2, d, s) = pi(d+2, omega(s))` for `1 < s < 2^(d-1)`; for `s = 1`
/// it is `pi(d+2, 3)` when `d < 6` and `3/4` otherwise. Counts above
/// `2^(d-1)` are reflected to `2^d - s`, and `s ∈ {0, 2^(d-1), 2^d}` give 1.
pub fn lambda_d2_closed_form(d: u32, s: u64) -> Result<ClosedForm> {
    if d > 62 {
        return domain(format!("d={d} is out of range"));
    }
    let full = 1u64 << d;
    if s > full {
        return domain(format!("s={s} exceeds 2^d={full}"));
    }
    let exact = |v: Rational| Ok(ClosedForm { d, s, lower: v.clone(), upper: v });
    let sym = s.min(full - s);
    if sym == 0 || (d >= 1 && sym == full / 2) || d == 0 {
        return exact(rational::one());
    }
    let n = d as u64 + 2;
    if sym == 1 {
        return exact(if d < 6 { turan_density(n, 3)? } else { rational::ratio(3, 4) });
    }
    let cap = 4 * sym - 1;
    if recipe_for(4 * sym).is_some() {
        return exact(turan_density(n, cap)?);
    }
    let known = if sym <= u32::MAX as u64 { 4 * hadamard_divisor(sym as u32) as u64 - 1 } else { 3 };
    Ok(ClosedForm { d, s, lower: turan_density(n, known)?, upper: turan_density(n, cap)? })
}
