//! Dense linear algebra over GF(2).
//!
//! Vectors and matrix rows are packed into a single `u64`, so every dimension
//! is limited to [`MAX_DIM`]. The matrices handled by this crate (Rédei
//! matrices, the 8-rank pairing, bilinear forms enumerated by the oracles)
//! never come close to that limit.
//!
//! Bit `j` of a row word is column `j`; bit `i` of a vector word is
//! coordinate `i`.

use std::fmt;

use thiserror::Error;

/// Largest supported number of rows, columns or coordinates.
pub const MAX_DIM: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {0} exceeds the supported maximum of {MAX_DIM}")]
    TooLarge(usize),
    #[error("entry {0} is not 0 or 1")]
    NotABit(u8),
    #[error("ragged rows: row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
}

#[inline]
fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_dim(n: usize) -> Result<(), Gf2Error> {
    if n > MAX_DIM {
        Err(Gf2Error::TooLarge(n))
    } else {
        Ok(())
    }
}

/// A vector in GF(2)^n.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    bits: u64,
}

impl BitVector {
    pub fn zeros(len: usize) -> Result<Self, Gf2Error> {
        check_dim(len)?;
        Ok(BitVector { len, bits: 0 })
    }

    /// Builds a vector from packed bits; bits at positions `>= len` are discarded.
    pub fn from_bits(len: usize, bits: u64) -> Result<Self, Gf2Error> {
        check_dim(len)?;
        Ok(BitVector { len, bits: bits & low_mask(len) })
    }

    /// The `i`-th standard basis vector.
    pub fn unit(len: usize, i: usize) -> Result<Self, Gf2Error> {
        check_dim(len)?;
        if i >= len {
            return Err(Gf2Error::IndexOutOfRange { index: i, dim: len });
        }
        Ok(BitVector { len, bits: 1 << i })
    }

    pub fn from_slice(entries: &[u8]) -> Result<Self, Gf2Error> {
        check_dim(entries.len())?;
        let mut bits = 0u64;
        for (i, &e) in entries.iter().enumerate() {
            match e {
                0 => {}
                1 => bits |= 1 << i,
                other => return Err(Gf2Error::NotABit(other)),
            }
        }
        Ok(BitVector { len: entries.len(), bits })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn get(&self, i: usize) -> Result<bool, Gf2Error> {
        if i >= self.len {
            return Err(Gf2Error::IndexOutOfRange { index: i, dim: self.len });
        }
        Ok(self.bits >> i & 1 == 1)
    }

    pub fn set(&mut self, i: usize, value: bool) -> Result<(), Gf2Error> {
        if i >= self.len {
            return Err(Gf2Error::IndexOutOfRange { index: i, dim: self.len });
        }
        if value {
            self.bits |= 1 << i;
        } else {
            self.bits &= !(1 << i);
        }
        Ok(())
    }

    pub fn add(&self, other: &BitVector) -> Result<BitVector, Gf2Error> {
        if self.len != other.len {
            return Err(Gf2Error::DimensionMismatch { expected: self.len, found: other.len });
        }
        Ok(BitVector { len: self.len, bits: self.bits ^ other.bits })
    }

    /// Standard dot product `Σ x_i y_i`.
    pub fn dot(&self, other: &BitVector) -> Result<u8, Gf2Error> {
        if self.len != other.len {
            return Err(Gf2Error::DimensionMismatch { expected: self.len, found: other.len });
        }
        Ok(((self.bits & other.bits).count_ones() & 1) as u8)
    }

    pub fn to_vec(&self) -> Vec<u8> {
        (0..self.len).map(|i| (self.bits >> i & 1) as u8).collect()
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(")?;
        for i in 0..self.len {
            write!(f, "{}", self.bits >> i & 1)?;
        }
        write!(f, ")")
    }
}

/// A dense `rows × cols` matrix over GF(2), one packed word per row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self, Gf2Error> {
        check_dim(rows)?;
        check_dim(cols)?;
        Ok(BitMatrix { rows, cols, data: vec![0; rows] })
    }

    pub fn identity(n: usize) -> Result<Self, Gf2Error> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.data[i] = 1 << i;
        }
        Ok(m)
    }

    /// Builds a matrix from packed row words; bits beyond `cols` are discarded.
    pub fn from_row_words(rows: usize, cols: usize, words: &[u64]) -> Result<Self, Gf2Error> {
        check_dim(rows)?;
        check_dim(cols)?;
        if words.len() != rows {
            return Err(Gf2Error::DimensionMismatch { expected: rows, found: words.len() });
        }
        let mask = low_mask(cols);
        Ok(BitMatrix { rows, cols, data: words.iter().map(|w| w & mask).collect() })
    }

    /// Builds a matrix from 0/1 rows. An empty slice gives the 0×0 matrix.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self, Gf2Error> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        Self::from_rows_with_cols(rows, cols)
    }

    /// Like [`BitMatrix::from_rows`] but with an explicit column count, so
    /// `k×0` matrices can be expressed.
    pub fn from_rows_with_cols<R: AsRef<[u8]>>(rows: &[R], cols: usize) -> Result<Self, Gf2Error> {
        let mut m = Self::zeros(rows.len(), cols)?;
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Gf2Error::Ragged { row: i, expected: cols, found: row.len() });
            }
            m.data[i] = BitVector::from_slice(row)?.bits;
        }
        Ok(m)
    }

    /// Matrix whose columns are the given vectors (all of equal length `rows`).
    pub fn from_columns(rows: usize, columns: &[BitVector]) -> Result<Self, Gf2Error> {
        let mut m = Self::zeros(rows, columns.len())?;
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Gf2Error::DimensionMismatch { expected: rows, found: c.len() });
            }
            for i in 0..rows {
                if c.bits >> i & 1 == 1 {
                    m.data[i] |= 1 << j;
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row_words(&self) -> &[u64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Result<bool, Gf2Error> {
        if i >= self.rows {
            return Err(Gf2Error::IndexOutOfRange { index: i, dim: self.rows });
        }
        if j >= self.cols {
            return Err(Gf2Error::IndexOutOfRange { index: j, dim: self.cols });
        }
        Ok(self.data[i] >> j & 1 == 1)
    }

    /// Unchecked-by-`Result` accessor for internal loops; panics when out of range.
    #[inline]
    pub(crate) fn bit(&self, i: usize, j: usize) -> u8 {
        debug_assert!(i < self.rows && j < self.cols);
        (self.data[i] >> j & 1) as u8
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) -> Result<(), Gf2Error> {
        if i >= self.rows {
            return Err(Gf2Error::IndexOutOfRange { index: i, dim: self.rows });
        }
        if j >= self.cols {
            return Err(Gf2Error::IndexOutOfRange { index: j, dim: self.cols });
        }
        if value {
            self.data[i] |= 1 << j;
        } else {
            self.data[i] &= !(1 << j);
        }
        Ok(())
    }

    pub fn row(&self, i: usize) -> Result<BitVector, Gf2Error> {
        if i >= self.rows {
            return Err(Gf2Error::IndexOutOfRange { index: i, dim: self.rows });
        }
        Ok(BitVector { len: self.cols, bits: self.data[i] })
    }

    pub fn column(&self, j: usize) -> Result<BitVector, Gf2Error> {
        if j >= self.cols {
            return Err(Gf2Error::IndexOutOfRange { index: j, dim: self.cols });
        }
        let bits = (0..self.rows).fold(0u64, |acc, i| acc | (self.data[i] >> j & 1) << i);
        Ok(BitVector { len: self.rows, bits })
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = vec![0u64; self.cols];
        for (i, &w) in self.data.iter().enumerate() {
            for (j, tj) in t.iter_mut().enumerate() {
                *tj |= (w >> j & 1) << i;
            }
        }
        BitMatrix { rows: self.cols, cols: self.rows, data: t }
    }

    pub fn add(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.rows != other.rows {
            return Err(Gf2Error::DimensionMismatch { expected: self.rows, found: other.rows });
        }
        if self.cols != other.cols {
            return Err(Gf2Error::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a ^ b).collect();
        Ok(BitMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.cols != other.rows {
            return Err(Gf2Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let data = self
            .data
            .iter()
            .map(|&w| (0..self.cols).filter(|k| w >> k & 1 == 1).fold(0u64, |acc, k| acc ^ other.data[k]))
            .collect();
        Ok(BitMatrix { rows: self.rows, cols: other.cols, data })
    }

    pub fn matvec(&self, v: &BitVector) -> Result<BitVector, Gf2Error> {
        if v.len != self.cols {
            return Err(Gf2Error::DimensionMismatch { expected: self.cols, found: v.len });
        }
        let bits =
            self.data.iter().enumerate().fold(0u64, |acc, (i, &w)| acc | (((w & v.bits).count_ones() & 1) as u64) << i);
        Ok(BitVector { len: self.rows, bits })
    }

    /// `xᵀ M y`.
    pub fn bilinear(&self, x: &BitVector, y: &BitVector) -> Result<u8, Gf2Error> {
        if x.len != self.rows {
            return Err(Gf2Error::DimensionMismatch { expected: self.rows, found: x.len });
        }
        x.dot(&self.matvec(y)?)
    }

    pub fn diagonal(&self) -> Vec<u8> {
        (0..self.rows.min(self.cols)).map(|i| self.bit(i, i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    /// Symmetric with zero diagonal.
    pub fn is_alternating(&self) -> bool {
        self.is_symmetric() && (0..self.rows).all(|i| self.bit(i, i) == 0)
    }

    /// Reduced row-echelon form; returns the reduced rows (nonzero rows first)
    /// and the pivot column of each nonzero row.
    fn rref(&self) -> (Vec<u64>, Vec<usize>) {
        let mut rows = self.data.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..self.cols {
            let bit = 1u64 << col;
            let Some(found) = (next..rows.len()).find(|&r| rows[r] & bit != 0) else {
                continue;
            };
            rows.swap(next, found);
            let pivot_row = rows[next];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && *row & bit != 0 {
                    *row ^= pivot_row;
                }
            }
            pivots.push(col);
            next += 1;
            if next == rows.len() {
                break;
            }
        }
        rows.truncate(next);
        (rows, pivots)
    }

    pub fn rank(&self) -> usize {
        // Plain forward elimination; cheaper than the full RREF.
        let mut rows = self.data.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let bit = 1u64 << col;
            let Some(found) = (rank..rows.len()).find(|&r| rows[r] & bit != 0) else {
                continue;
            };
            rows.swap(rank, found);
            let pivot_row = rows[rank];
            for row in rows[rank + 1..].iter_mut() {
                if *row & bit != 0 {
                    *row ^= pivot_row;
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    /// Dimension of the right kernel, `cols - rank`.
    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Canonical basis of the right kernel `{v : Mv = 0}`.
    ///
    /// One vector per pivot-free column `f`, in increasing order of `f`:
    /// coordinate `f` is 1, the other free coordinates are 0 and the pivot
    /// coordinates are read off the reduced row-echelon form.
    pub fn kernel_basis(&self) -> Vec<BitVector> {
        let (rows, pivots) = self.rref();
        let pivot_mask = pivots.iter().fold(0u64, |acc, &p| acc | 1 << p);
        (0..self.cols)
            .filter(|f| pivot_mask >> f & 1 == 0)
            .map(|f| {
                let mut bits = 1u64 << f;
                for (row, &p) in rows.iter().zip(&pivots) {
                    if row >> f & 1 == 1 {
                        bits |= 1 << p;
                    }
                }
                BitVector { len: self.cols, bits }
            })
            .collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.bit(i, j)).collect()).collect()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ";")?;
            }
            for j in 0..self.cols {
                write!(f, "{}", self.bit(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// True when the given vectors are linearly independent.
pub fn are_independent(vectors: &[BitVector]) -> bool {
    let Some(first) = vectors.first() else {
        return true;
    };
    let words: Vec<u64> = vectors.iter().map(|v| v.bits).collect();
    match BitMatrix::from_row_words(words.len(), first.len, &words) {
        Ok(m) => m.rank() == vectors.len(),
        Err(_) => false,
    }
}
