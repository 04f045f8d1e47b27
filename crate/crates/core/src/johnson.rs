//! The generalized Johnson graph `J(4s, 2s, s)`, its cliques, and the clique
//! number `omega(s)`.
//!
//! Vertices are `2s`-subsets of `{0, .., 4s-1}` stored as `4s`-bit masks; two
//! are adjacent when they share exactly `s` elements.

use std::time::{Duration, Instant};

use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

use crate::cube::masks_with_popcount;
use crate::error::{domain, Error, Result};
use crate::hadamard::{recipe_for, HadamardMatrix};

/// Largest `s` for which the adjacency matrix is materialized
/// (`C(16, 8) = 12870` vertices; `s = 5` would need a 4 GiB bit matrix).
pub const MAX_EXPLICIT_S: u32 = 4;

/// Largest `s` whose subsets fit the 64-bit member encoding.
pub const MAX_CERT_S: u32 = 16;

#[inline]
pub fn adjacent(s: u32, u: u64, v: u64) -> bool {
    u != v && (u & v).count_ones() == s
}

/// Explicit `J(4s, 2s, s)` with bitset adjacency rows.
#[derive(Clone, Debug)]
pub struct JohnsonGraph {
    pub s: u32,
    vertices: Vec<u64>,
    adjacency: Vec<Vec<u64>>,
}

pub fn johnson_graph(s: u32) -> Result<JohnsonGraph> {
    if s == 0 {
        return domain("J(4s,2s,s) needs s>=1");
    }
    if s > MAX_EXPLICIT_S {
        return Err(Error::Capability(format!(
            "explicit J(4s,2s,s) is limited to s<={MAX_EXPLICIT_S}; use johnson::adjacent for s={s}"
        )));
    }
    let vertices: Vec<u64> = masks_with_popcount(4 * s, 2 * s).collect();
    let words = vertices.len().div_ceil(64);
    let mut adjacency = vec![vec![0u64; words]; vertices.len()];
    for (i, &u) in vertices.iter().enumerate() {
        for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
            if adjacent(s, u, v) {
                adjacency[i][j / 64] |= 1 << (j % 64);
                adjacency[j][i / 64] |= 1 << (i % 64);
            }
        }
    }
    Ok(JohnsonGraph { s, vertices, adjacency })
}

impl JohnsonGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[u64] {
        &self.vertices
    }

    pub fn index_of(&self, mask: u64) -> Option<usize> {
        self.vertices.binary_search(&mask).ok()
    }

    pub fn is_edge(&self, i: usize, j: usize) -> bool {
        (self.adjacency[i][j / 64] >> (j % 64)) & 1 == 1
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// A clique of `J(4s, 2s, s)` given by its member subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueCertificate {
    pub s: u32,
    pub members: Vec<u64>,
}

impl CliqueCertificate {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Member `i` as an ascending list of elements.
    pub fn member_elements(&self, i: usize) -> Vec<u32> {
        let m = self.members[i];
        (0..64).filter(|b| (m >> b) & 1 == 1).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct CliqueFile {
    s: u32,
    members: Vec<Vec<u32>>,
}

impl Serialize for CliqueCertificate {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let members = (0..self.size()).map(|i| self.member_elements(i)).collect();
        CliqueFile { s: self.s, members }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for CliqueCertificate {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let file = CliqueFile::deserialize(de)?;
        if file.s == 0 || file.s > MAX_CERT_S {
            return Err(D::Error::custom(format!("s must be in 1..={MAX_CERT_S}")));
        }
        let mut members = Vec::with_capacity(file.members.len());
        for list in &file.members {
            let mut mask = 0u64;
            for &e in list {
                if e >= 4 * file.s {
                    return Err(D::Error::custom(format!("element {e} is outside [4s]")));
                }
                mask |= 1 << e;
            }
            members.push(mask);
        }
        Ok(CliqueCertificate { s: file.s, members })
    }
}

/// True iff the members are distinct `2s`-subsets of `[4s]` meeting pairwise
/// in exactly `s` elements.
pub fn verify_clique(cert: &CliqueCertificate) -> bool {
    let s = cert.s;
    if s == 0 || s > MAX_CERT_S {
        return false;
    }
    let universe = if s == 16 { u64::MAX } else { (1u64 << (4 * s)) - 1 };
    let shape_ok = cert
        .members
        .iter()
        .all(|&m| m & !universe == 0 && m.count_ones() == 2 * s);
    shape_ok
        && cert.members.iter().enumerate().all(|(i, &u)| {
            cert.members[i + 1..].iter().all(|&v| adjacent(s, u, v))
        })
}

/// Clique of size `4s - 1` from a Hadamard matrix of order `4s`: after
/// normalization, each non-first row contributes the set of columns where
/// it is `-1`.
pub fn hadamard_to_clique(h: &HadamardMatrix) -> Result<CliqueCertificate> {
    let order = h.order();
    if order == 0 || !order.is_multiple_of(4) {
        return domain(format!("Hadamard order {order} is not divisible by 4"));
    }
    let s = (order / 4) as u32;
    if s > MAX_CERT_S {
        return Err(Error::Capability(format!("clique certificates support s<={MAX_CERT_S}")));
    }
    let checked = HadamardMatrix::new(h.rows().to_vec())?;
    let norm = checked.normalized();
    let members = norm.rows()[1..]
        .iter()
        .map(|row| {
            row.iter().enumerate().filter(|(_, &e)| e < 0).fold(0u64, |m, (c, _)| m | (1 << c))
        })
        .collect();
    let cert = CliqueCertificate { s, members };
    if !verify_clique(&cert) {
        return Err(Error::Certificate("extracted clique failed verification".into()));
    }
    Ok(cert)
}

/// Replaces every element of a clique in `J(4a, 2a, a)` by `t` copies,
/// giving a clique of the same size in `J(4at, 2at, at)`.
pub fn blow_up(cert: &CliqueCertificate, t: u32) -> Result<CliqueCertificate> {
    let s = cert.s * t;
    if t == 0 || s > MAX_CERT_S {
        return Err(Error::Capability(format!("blow-up to s={s} exceeds the certificate range")));
    }
    let block = (1u64 << t) - 1;
    let members = cert
        .members
        .iter()
        .map(|&m| (0..4 * cert.s).filter(|e| (m >> e) & 1 == 1).fold(0u64, |acc, e| acc | (block << (e * t))))
        .collect();
    Ok(CliqueCertificate { s, members })
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SearchBudget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget { max_nodes: Some(max_nodes), max_time: None }
    }
}

#[derive(Clone, Debug)]
pub struct CliqueSearch {
    pub certificate: CliqueCertificate,
    /// Whether the search proved no larger clique exists.
    pub optimal: bool,
    pub nodes: u64,
}

struct Searcher<'a> {
    adjacency: Vec<Vec<u64>>,
    words: usize,
    cap: usize,
    best: Vec<usize>,
    nodes: u64,
    budget: &'a SearchBudget,
    started: Instant,
    exhausted: bool,
}

impl Searcher<'_> {
    fn out_of_budget(&mut self) -> bool {
        if self.exhausted {
            return true;
        }
        let over_nodes = self.budget.max_nodes.is_some_and(|m| self.nodes >= m);
        let over_time = self.budget.max_time.is_some_and(|t| self.nodes.is_multiple_of(1024) && self.started.elapsed() >= t);
        self.exhausted = over_nodes || over_time;
        self.exhausted
    }

    /// Greedy sequential coloring in index order; returns candidates sorted by
    /// color together with their color numbers.
    fn color_sort(&self, cand: &[u64]) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::new();
        let mut colors = Vec::new();
        let mut uncolored = cand.to_vec();
        let mut color = 0;
        while uncolored.iter().any(|&w| w != 0) {
            color += 1;
            let mut avail = uncolored.clone();
            while let Some(v) = first_bit(&avail) {
                order.push(v);
                colors.push(color);
                uncolored[v / 64] &= !(1 << (v % 64));
                avail[v / 64] &= !(1 << (v % 64));
                for (a, n) in avail.iter_mut().zip(&self.adjacency[v]) {
                    *a &= !n;
                }
            }
        }
        (order, colors)
    }

    fn expand(&mut self, clique: &mut Vec<usize>, mut cand: Vec<u64>) {
        let (order, colors) = self.color_sort(&cand);
        for idx in (0..order.len()).rev() {
            if self.best.len() >= self.cap || self.out_of_budget() {
                return;
            }
            if clique.len() + colors[idx] <= self.best.len() {
                return;
            }
            self.nodes += 1;
            let v = order[idx];
            clique.push(v);
            let next: Vec<u64> = cand.iter().zip(&self.adjacency[v]).map(|(a, b)| a & b).collect();
            if next.iter().all(|&w| w == 0) {
                if clique.len() > self.best.len() {
                    self.best = clique.clone();
                }
            } else {
                self.expand(clique, next);
            }
            clique.pop();
            cand[v / 64] &= !(1 << (v % 64));
        }
    }
}

fn first_bit(words: &[u64]) -> Option<usize> {
    words.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
}

/// Exact maximum clique of an arbitrary graph over `masks` with the given
/// adjacency predicate, by branch and bound with greedy-coloring bounds.
///
/// Vertices are ordered by descending degree, ties by ascending mask. The
/// search stops as soon as a clique of size `cap` is found.
fn branch_and_bound(
    masks: &[u64],
    adj: impl Fn(u64, u64) -> bool,
    cap: usize,
    budget: &SearchBudget,
) -> (Vec<u64>, bool, u64) {
    let n = masks.len();
    let mut degree: Vec<(usize, u64, usize)> = (0..n)
        .map(|i| {
            let deg = masks.iter().filter(|&&m| adj(masks[i], m)).count();
            (deg, masks[i], i)
        })
        .collect();
    degree.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let ordered: Vec<u64> = degree.iter().map(|&(_, m, _)| m).collect();
    let words = n.div_ceil(64).max(1);
    let mut adjacency = vec![vec![0u64; words]; n];
    for i in 0..n {
        for j in 0..n {
            if adj(ordered[i], ordered[j]) {
                adjacency[i][j / 64] |= 1 << (j % 64);
            }
        }
    }
    let mut searcher = Searcher {
        adjacency,
        words,
        cap,
        best: Vec::new(),
        nodes: 0,
        budget,
        started: Instant::now(),
        exhausted: false,
    };
    let mut cand = vec![0u64; searcher.words];
    for i in 0..n {
        cand[i / 64] |= 1 << (i % 64);
    }
    if n > 0 {
        searcher.expand(&mut Vec::new(), cand);
    }
    let mut best: Vec<u64> = searcher.best.iter().map(|&i| ordered[i]).collect();
    best.sort_unstable();
    let optimal = !searcher.exhausted || best.len() >= cap;
    (best, optimal, searcher.nodes)
}

/// Maximum clique of `J(4s, 2s, s)` capped at `4s - 1`.
///
/// The graph is vertex-transitive and the stabilizer of a vertex acts
/// transitively on its neighbours, so the search fixes the least vertex and
/// its least neighbour and branches only inside their common neighbourhood.
pub fn max_clique(g: &JohnsonGraph, budget: &SearchBudget) -> CliqueSearch {
    let s = g.s;
    let cap = 4 * s as usize - 1;
    let v0 = g.vertices[0];
    let v1 = *g.vertices.iter().find(|&&v| adjacent(s, v0, v)).expect("s>=1 has edges");
    let common: Vec<u64> = g
        .vertices
        .iter()
        .copied()
        .filter(|&v| adjacent(s, v0, v) && adjacent(s, v1, v))
        .collect();
    let (rest, optimal, nodes) = branch_and_bound(&common, |a, b| adjacent(s, a, b), cap - 2, budget);
    let mut members = vec![v0, v1];
    members.extend(rest);
    members.sort_unstable();
    CliqueSearch { certificate: CliqueCertificate { s, members }, optimal, nodes }
}

/// Maximum clique by plain branch and bound over the whole explicit graph,
/// without symmetry reduction.
pub fn max_clique_unreduced(g: &JohnsonGraph, budget: &SearchBudget) -> CliqueSearch {
    let s = g.s;
    let (members, optimal, nodes) =
        branch_and_bound(&g.vertices, |a, b| adjacent(s, a, b), 4 * s as usize - 1, budget);
    CliqueSearch { certificate: CliqueCertificate { s, members }, optimal, nodes }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct OmegaPolicy {
    /// Run clique search when no Hadamard construction applies.
    pub search: Option<SearchBudget>,
}

#[derive(Clone, Debug)]
pub struct OmegaResult {
    pub s: u32,
    pub lower: u32,
    pub upper: u32,
    pub certificate: CliqueCertificate,
    pub source: String,
}

impl OmegaResult {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }
}

/// Largest `a | s` with a Hadamard matrix of order `4a`; `omega(s) >= 4a - 1`.
pub fn hadamard_divisor(s: u32) -> u32 {
    let mut divisors = Vec::new();
    let mut a = 1u32;
    while (a as u64) * (a as u64) <= s as u64 {
        if s.is_multiple_of(a) {
            divisors.push(a);
            divisors.push(s / a);
        }
        a += 1;
    }
    divisors.sort_unstable();
    divisors.into_iter().rev().find(|&a| recipe_for(4 * a as u64).is_some()).unwrap_or(1)
}

/// True iff a Hadamard matrix of order `4s` is constructible here, making
/// `omega(s) = 4s - 1` exactly.
pub fn omega_is_known(s: u32) -> bool {
    s >= 1 && recipe_for(4 * s as u64).is_some()
}

/// `omega(s)` exactly when a Hadamard matrix of order `4s` is constructible,
/// otherwise an interval whose lower end is witnessed by a certificate.
pub fn omega(s: u32, policy: &OmegaPolicy) -> Result<OmegaResult> {
    if s == 0 {
        return domain("omega(s) needs s>=1");
    }
    if s > MAX_CERT_S {
        return Err(Error::Capability(format!("omega certificates support s<={MAX_CERT_S}")));
    }
    let upper = 4 * s - 1;
    if let Some(recipe) = recipe_for(4 * s as u64) {
        let h = recipe.build()?;
        let certificate = hadamard_to_clique(&h)?;
        return Ok(OmegaResult {
            s,
            lower: upper,
            upper,
            certificate,
            source: format!("hadamard {}", recipe.describe()),
        });
    }
    let a = hadamard_divisor(s);
    let base = hadamard_to_clique(&recipe_for(4 * a as u64).expect("divisor has recipe").build()?)?;
    let mut certificate = blow_up(&base, s / a)?;
    let mut source = format!("blow-up of order-{} hadamard clique", 4 * a);
    let mut optimal = false;
    if let (Some(budget), true) = (policy.search, s <= MAX_EXPLICIT_S) {
        let found = max_clique(&johnson_graph(s)?, &budget);
        if found.certificate.size() > certificate.size() {
            certificate = found.certificate;
            source = "clique search".into();
        }
        optimal = found.optimal;
    }
    let lower = certificate.size() as u32;
    Ok(OmegaResult { s, lower, upper: if optimal { lower } else { upper }, certificate, source })
}
