//! Dense binary matrices over GF(2).

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};

/// Row-major bit matrix; each row is packed little-endian into `u64` words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GF2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<u64>>,
}

impl GF2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        GF2Matrix { rows, cols, data: vec![vec![0; words]; rows] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, true);
        }
        m
    }

    /// Rows given as strings over `{0,1}`, column 0 first.
    pub fn from_row_strings<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (r, text) in rows.iter().enumerate() {
            let text = text.as_ref();
            if text.len() != cols {
                return Err(Error::Format(format!(
                    "row {r} has length {} but expected {cols}",
                    text.len()
                )));
            }
            for (c, ch) in text.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.set(r, c, true),
                    _ => return Err(Error::Format(format!("bad matrix symbol {ch:?}"))),
                }
            }
        }
        Ok(m)
    }

    /// Builds an `rows x cols` matrix from column vectors; bit `r` of a
    /// column is its entry in row `r`.
    pub fn from_columns(rows: usize, columns: &[u64]) -> Result<Self> {
        if rows > 64 {
            return domain("from_columns supports at most 64 rows");
        }
        let mut m = Self::zeros(rows, columns.len());
        for (c, &col) in columns.iter().enumerate() {
            if rows < 64 && col >> rows != 0 {
                return domain(format!("column {c} has bits beyond row {rows}"));
            }
            for r in 0..rows {
                if (col >> r) & 1 == 1 {
                    m.set(r, c, true);
                }
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn entry(&self, r: usize, c: usize) -> bool {
        (self.data[r][c / 64] >> (c % 64)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        let bit = 1u64 << (c % 64);
        if value {
            self.data[r][c / 64] |= bit;
        } else {
            self.data[r][c / 64] &= !bit;
        }
    }

    /// Column `c` as a bit vector indexed by row (requires `rows <= 64`).
    pub fn column(&self, c: usize) -> u64 {
        debug_assert!(self.rows <= 64);
        (0..self.rows).fold(0, |acc, r| acc | ((self.entry(r, c) as u64) << r))
    }

    pub fn columns(&self) -> Vec<u64> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.entry(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    /// Submatrix keeping the listed columns in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                if self.entry(r, c) {
                    m.set(r, j, true);
                }
            }
        }
        m
    }

    pub fn row_strings(&self) -> Vec<String> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| if self.entry(r, c) { '1' } else { '0' }).collect())
            .collect()
    }

    /// `M x` for a vertex `x` of `Q_cols` (bit `c` of `x` is coordinate `c`);
    /// bit `r` of the result is row `r` of the product.
    pub fn apply(&self, x: u64) -> u64 {
        debug_assert!(self.cols <= 64 && self.rows <= 64);
        let mut out = 0;
        for r in 0..self.rows {
            let parity = (self.data[r][0] & x).count_ones() & 1;
            out |= (parity as u64) << r;
        }
        out
    }
}

/// Rank over GF(2) by Gaussian elimination on a private copy.
pub fn gf2_rank(m: &GF2Matrix) -> usize {
    let mut rows = m.data.clone();
    let words = m.cols.div_ceil(64);
    let mut rank = 0;
    for c in 0..m.cols {
        let (w, bit) = (c / 64, 1u64 << (c % 64));
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][w] & bit != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] & bit != 0 {
                for k in w..words {
                    row[k] ^= pivot_row[k];
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Dimension of the span of a list of packed vectors (XOR basis).
pub fn span_rank(vectors: &[u64]) -> usize {
    let mut basis = [0u64; 64];
    let mut rank = 0;
    for &v in vectors {
        let mut x = v;
        while x != 0 {
            let top = 63 - x.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = x;
                rank += 1;
                break;
            }
            x ^= basis[top];
        }
    }
    rank
}

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    data: Vec<String>,
}

impl Serialize for GF2Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixFile { rows: self.rows, cols: self.cols, data: self.row_strings() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GF2Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = MatrixFile::deserialize(d)?;
        let bad = |msg: String| serde::de::Error::custom(msg);
        if file.data.len() != file.rows {
            return Err(bad(format!("expected {} rows, found {}", file.rows, file.data.len())));
        }
        if let Some(row) = file.data.iter().find(|r| r.len() != file.cols) {
            return Err(bad(format!("row {row:?} does not have {} columns", file.cols)));
        }
        if file.rows == 0 {
            return Ok(GF2Matrix::zeros(0, file.cols));
        }
        GF2Matrix::from_row_strings(&file.data).map_err(|e| bad(e.to_string()))
    }
}
