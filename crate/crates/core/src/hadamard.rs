//! Hadamard matrices: Sylvester, Paley type I and Kronecker products.

use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};

/// Square `±1` matrix with `H Hᵀ = order · I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HadamardMatrix {
    order: usize,
    entries: Vec<Vec<i8>>,
}

impl HadamardMatrix {
    /// Validates the orthogonality invariant with exact integer arithmetic.
    pub fn new(entries: Vec<Vec<i8>>) -> Result<Self> {
        let order = entries.len();
        if entries.iter().any(|r| r.len() != order) {
            return Err(Error::Certificate("Hadamard matrix must be square".into()));
        }
        if entries.iter().flatten().any(|&e| e != 1 && e != -1) {
            return Err(Error::Certificate("Hadamard entries must be ±1".into()));
        }
        for i in 0..order {
            for j in i..order {
                let dot: i64 = entries[i].iter().zip(&entries[j]).map(|(&a, &b)| (a * b) as i64).sum();
                let want = if i == j { order as i64 } else { 0 };
                if dot != want {
                    return Err(Error::Certificate(format!(
                        "rows {i} and {j} have inner product {dot}, expected {want}"
                    )));
                }
            }
        }
        Ok(HadamardMatrix { order, entries })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entry(&self, r: usize, c: usize) -> i8 {
        self.entries[r][c]
    }

    pub fn rows(&self) -> &[Vec<i8>] {
        &self.entries
    }

    /// Negates rows so column 0 is all `+1`, then columns so row 0 is all `+1`.
    pub fn normalized(&self) -> HadamardMatrix {
        let mut m = self.entries.clone();
        for row in m.iter_mut() {
            if row[0] < 0 {
                row.iter_mut().for_each(|e| *e = -*e);
            }
        }
        for c in 0..self.order {
            if m[0][c] < 0 {
                m.iter_mut().for_each(|row| row[c] = -row[c]);
            }
        }
        HadamardMatrix { order: self.order, entries: m }
    }

    pub fn row_strings(&self) -> Vec<String> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|&e| if e > 0 { '+' } else { '-' }).collect())
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct HadamardFile {
    order: usize,
    rows: Vec<String>,
}

impl Serialize for HadamardMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HadamardFile { order: self.order, rows: self.row_strings() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HadamardMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = HadamardFile::deserialize(d)?;
        if file.rows.len() != file.order {
            return Err(D::Error::custom("row count does not match order"));
        }
        let mut entries = Vec::with_capacity(file.order);
        for row in &file.rows {
            let parsed: std::result::Result<Vec<i8>, _> = row
                .chars()
                .map(|c| match c {
                    '+' => Ok(1),
                    '-' => Ok(-1),
                    _ => Err(D::Error::custom(format!("bad Hadamard symbol {c:?}"))),
                })
                .collect();
            entries.push(parsed?);
        }
        HadamardMatrix::new(entries).map_err(D::Error::custom)
    }
}

/// Sylvester matrix of order `2^m`.
pub fn hadamard_sylvester(m: u32) -> Result<HadamardMatrix> {
    if m > 12 {
        return Err(Error::Capability(format!("Sylvester order 2^{m} is too large")));
    }
    let mut h = vec![vec![1i8]];
    for _ in 0..m {
        let size = h.len();
        let mut next = vec![vec![0i8; 2 * size]; 2 * size];
        for i in 0..size {
            for j in 0..size {
                let e = h[i][j];
                next[i][j] = e;
                next[i][j + size] = e;
                next[i + size][j] = e;
                next[i + size][j + size] = -e;
            }
        }
        h = next;
    }
    HadamardMatrix::new(h)
}

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= q {
        if q.is_multiple_of(f) {
            return false;
        }
        f += 1;
    }
    true
}

/// Paley type I matrix of order `q + 1`, for a prime `q ≡ 3 (mod 4)`.
pub fn hadamard_paley(q: u64) -> Result<HadamardMatrix> {
    if !is_prime(q) || q % 4 != 3 {
        return domain(format!("Paley construction needs a prime q ≡ 3 mod 4, got {q}"));
    }
    if q > 4096 {
        return Err(Error::Capability(format!("Paley order {} is too large", q + 1)));
    }
    let mut residue = vec![false; q as usize];
    for x in 1..q {
        residue[((x * x) % q) as usize] = true;
    }
    let chi = |x: u64| -> i8 {
        match x % q {
            0 => 0,
            r if residue[r as usize] => 1,
            _ => -1,
        }
    };
    let size = q as usize + 1;
    // H = I + S with S = [[0, 1ᵀ], [-1, Q]] and Q the Jacobsthal matrix.
    let mut h = vec![vec![0i8; size]; size];
    h[0][1..].fill(1);
    for row in h.iter_mut().skip(1) {
        row[0] = -1;
    }
    for i in 0..q {
        for j in 0..q {
            h[i as usize + 1][j as usize + 1] = chi(j + q - i);
        }
    }
    for (i, row) in h.iter_mut().enumerate() {
        row[i] += 1;
    }
    HadamardMatrix::new(h)
}

pub fn kronecker(a: &HadamardMatrix, b: &HadamardMatrix) -> Result<HadamardMatrix> {
    let (n, m) = (a.order, b.order);
    let mut out = vec![vec![0i8; n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a.entries[i][j] * b.entries[k][l];
                }
            }
        }
    }
    HadamardMatrix::new(out)
}

/// How a Hadamard matrix of a given order can be built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recipe {
    Sylvester(u32),
    Paley(u64),
    Product(Box<Recipe>, Box<Recipe>),
}

impl Recipe {
    pub fn order(&self) -> u64 {
        match self {
            Recipe::Sylvester(m) => 1 << m,
            Recipe::Paley(q) => q + 1,
            Recipe::Product(a, b) => a.order() * b.order(),
        }
    }

    pub fn build(&self) -> Result<HadamardMatrix> {
        match self {
            Recipe::Sylvester(m) => hadamard_sylvester(*m),
            Recipe::Paley(q) => hadamard_paley(*q),
            Recipe::Product(a, b) => kronecker(&a.build()?, &b.build()?),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Recipe::Sylvester(m) => format!("sylvester(2^{m})"),
            Recipe::Paley(q) => format!("paley(q={q})"),
            Recipe::Product(a, b) => format!("{} x {}", a.describe(), b.describe()),
        }
    }
}

/// Finds a Sylvester, Paley I, or Kronecker-product construction of the
/// given order, preferring the simplest.
pub fn recipe_for(order: u64) -> Option<Recipe> {
    if order == 0 {
        return None;
    }
    if order.is_power_of_two() {
        return Some(Recipe::Sylvester(order.trailing_zeros()));
    }
    let q = order - 1;
    if q % 4 == 3 && is_prime(q) {
        return Some(Recipe::Paley(q));
    }
    let mut a = 2;
    while a * a <= order {
        if order.is_multiple_of(a) {
            if let (Some(x), Some(y)) = (recipe_for(a), recipe_for(order / a)) {
                return Some(Recipe::Product(Box::new(x), Box::new(y)));
            }
        }
        a += 1;
    }
    None
}
