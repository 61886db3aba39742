//! Dense bitset linear algebra over the two-element field.
//!
//! Rows are packed into `u64` words. Elimination always pivots on the lowest
//! set column of the lowest-indexed remaining row, so every result is
//! reproducible for a fixed row/column order.

use std::fmt;

/// A vector over GF(2) of fixed logical length.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitRow {
    words: Vec<u64>,
    len: usize,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut row = Self::zeros(len);
        for i in indices {
            row.flip(i);
        }
        row
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range (len {})", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range (len {})", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        assert_eq!(self.len, other.len, "row length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Lowest set index, if any.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, &w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + bit)
            })
        })
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

impl fmt::Debug for BitRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Row-major matrix over GF(2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: Vec<BitRow>,
    ncols: usize,
}

impl Gf2Matrix {
    pub fn new(ncols: usize) -> Self {
        Self {
            rows: Vec::new(),
            ncols,
        }
    }

    /// Builds a matrix from sparse rows given as column-index lists.
    /// Repeated indices cancel.
    pub fn from_sparse_rows<I, R>(ncols: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = usize>,
    {
        Self {
            rows: rows
                .into_iter()
                .map(|r| BitRow::from_indices(ncols, r))
                .collect(),
            ncols,
        }
    }

    pub fn push_row(&mut self, row: BitRow) {
        assert_eq!(row.len(), self.ncols, "row length mismatch");
        self.rows.push(row);
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[BitRow] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        let mut basis = EchelonBasis::new(self.ncols);
        self.rows
            .iter()
            .filter(|&r| basis.insert(r.clone()))
            .count()
    }

    /// Basis of the left kernel: combinations of rows that sum to zero,
    /// each returned as an indicator vector over the row indices.
    pub fn left_kernel(&self) -> Vec<BitRow> {
        let n = self.rows.len();
        let mut pivots: Vec<(usize, BitRow, BitRow)> = Vec::new();
        let mut kernel = Vec::new();
        for (r, row) in self.rows.iter().enumerate() {
            let mut v = row.clone();
            let mut track = BitRow::zeros(n);
            track.flip(r);
            for (col, prow, ptrack) in &pivots {
                if v.get(*col) {
                    v.xor_assign(prow);
                    track.xor_assign(ptrack);
                }
            }
            match v.first_one() {
                Some(col) => pivots.push((col, v, track)),
                None => kernel.push(track),
            }
        }
        kernel
    }
}

/// Incrementally maintained row-echelon basis of a subspace of GF(2)^n.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    ncols: usize,
    // (pivot column, row) with every row reduced against earlier pivots.
    rows: Vec<(usize, BitRow)>,
}

impl EchelonBasis {
    pub fn new(ncols: usize) -> Self {
        Self {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, mut v: BitRow) -> BitRow {
        assert_eq!(v.len(), self.ncols, "row length mismatch");
        for (col, row) in &self.rows {
            if v.get(*col) {
                v.xor_assign(row);
            }
        }
        v
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: BitRow) -> bool {
        let v = self.reduce(v);
        match v.first_one() {
            Some(col) => {
                self.rows.push((col, v));
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &BitRow) -> bool {
        self.reduce(v.clone()).is_zero()
    }
}
