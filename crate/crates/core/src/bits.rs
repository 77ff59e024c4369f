//! Packed boolean vectors and matrices.
//!
//! Bits live in `u64` words, least significant bit first. Unused high bits of
//! the last word are always zero so that word-level equality, hashing and
//! popcount agree with the element-wise definitions.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector { len, words: vec![0; words_for(len)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVector { len, words: vec![!0; words_for(len)] };
        v.mask_tail();
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        bits.iter().copied().collect()
    }

    /// Builds a vector from 0/1 values; anything nonzero counts as 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        bits.iter().map(|&b| b != 0).collect()
    }

    /// The low `len` bits of `value`, bit `j` of the integer becoming element `j`.
    pub fn from_index(value: u64, len: usize) -> Self {
        assert!(len <= WORD, "from_index supports at most 64 elements");
        let mut v = BitVector::zeros(len);
        if len > 0 {
            v.words[0] = value;
            v.mask_tail();
        }
        v
    }

    /// Inverse of [`BitVector::from_index`]; `None` when longer than 64 elements.
    pub fn to_index(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn try_get(&self, i: usize) -> Result<bool> {
        if i < self.len {
            Ok(self.get(i))
        } else {
            Err(Error::Index { index: i, len: self.len })
        }
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if bit {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_bools(&self) -> Vec<bool> {
        self.iter().collect()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Element-wise exclusive-or.
    pub fn xor(&self, other: &BitVector) -> Result<BitVector> {
        Error::check_len(self.len, other.len)?;
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a ^ b).collect();
        Ok(BitVector { len: self.len, words })
    }

    pub fn xor_assign(&mut self, other: &BitVector) -> Result<()> {
        Error::check_len(self.len, other.len)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    /// Number of ones.
    pub fn hamming_length(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of positions where the two vectors differ.
    pub fn hamming_distance(&self, other: &BitVector) -> Result<usize> {
        Error::check_len(self.len, other.len)?;
        Ok(self.words.iter().zip(&other.words).map(|(a, b)| (a ^ b).count_ones() as usize).sum())
    }

    pub fn negate(&self) -> BitVector {
        let mut v = BitVector { len: self.len, words: self.words.iter().map(|w| !w).collect() };
        v.mask_tail();
        v
    }

    pub fn concat(&self, other: &BitVector) -> BitVector {
        self.iter().chain(other.iter()).collect()
    }

    fn mask_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl FromIterator<bool> for BitVector {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for bit in iter {
            if len % WORD == 0 {
                words.push(0);
            }
            if bit {
                *words.last_mut().unwrap() |= 1 << (len % WORD);
            }
            len += 1;
        }
        BitVector { len, words }
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector[{self}]")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.iter() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// `n` rows of common length `r`, with `n >= 1` and `r >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: Vec<BitVector>,
    cols: usize,
}

impl BitMatrix {
    pub fn new(rows: Vec<BitVector>) -> Result<Self> {
        let cols = match rows.first() {
            Some(first) => first.len(),
            None => return Err(Error::config("matrix needs at least one row")),
        };
        if cols == 0 {
            return Err(Error::config("matrix rows need at least one attribute"));
        }
        for row in &rows {
            Error::check_len(cols, row.len())?;
        }
        Ok(BitMatrix { rows, cols })
    }

    pub fn from_rows(rows: &[&[u8]]) -> Result<Self> {
        BitMatrix::new(rows.iter().map(|r| BitVector::from_bits(r)).collect())
    }

    /// Every input of `{0,1}^r` in ascending index order.
    pub fn all_inputs(r: usize) -> Result<Self> {
        if r == 0 || r > 24 {
            return Err(Error::config(format!("enumerating all inputs supports 1 <= r <= 24, got {r}")));
        }
        BitMatrix::new((0..1u64 << r).map(|i| BitVector::from_index(i, r)).collect())
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn try_row(&self, i: usize) -> Result<&BitVector> {
        self.rows.get(i).ok_or(Error::Index { index: i, len: self.rows.len() })
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> BitVector {
        assert!(j < self.cols, "column {j} out of range for width {}", self.cols);
        self.rows.iter().map(|row| row.get(j)).collect()
    }

    pub fn has_duplicate_rows(&self) -> bool {
        let mut seen = std::collections::HashSet::with_capacity(self.rows.len());
        !self.rows.iter().all(|row| seen.insert(row))
    }
}
