use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

/// Fixed-length vector over F2, packed little-endian into `u64` words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b & 1 == 1);
        }
        v
    }

    /// The low `len` bits of `word` (`len <= 64`).
    pub fn from_word(word: u64, len: usize) -> Self {
        assert!(len <= 64);
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = if len == 64 { word } else { word & ((1 << len) - 1) };
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Bits `offset..offset+width` packed into a word (`width <= 64`).
    pub fn extract_word(&self, offset: usize, width: usize) -> u64 {
        assert!(width <= 64 && offset + width <= self.len);
        (0..width).fold(0, |acc, b| acc | ((self.get(offset + b) as u64) << b))
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Dense `rows x cols` matrix over F2. Row `k` is a packed bit array whose
/// bit `l` is entry `(k, l)` (both 0-based).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols).max(1);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[BitVector]) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (k, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return invalid(format!("row {k} has {} bits, expected {cols}", r.len()));
            }
            m.row_words_mut(k)[..r.words().len()].copy_from_slice(r.words());
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        assert!(row < self.rows && col < self.cols);
        (self.data[row * self.stride + col / 64] >> (col % 64)) & 1 == 1
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        assert!(row < self.rows && col < self.cols);
        let w = &mut self.data[row * self.stride + col / 64];
        let mask = 1 << (col % 64);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn row_words(&self, row: usize) -> &[u64] {
        &self.data[row * self.stride..(row + 1) * self.stride]
    }

    fn row_words_mut(&mut self, row: usize) -> &mut [u64] {
        &mut self.data[row * self.stride..(row + 1) * self.stride]
    }

    /// Row `row` as a single word; only valid when `cols <= 64`.
    pub fn row_word(&self, row: usize) -> u64 {
        debug_assert!(self.cols <= 64);
        self.data[row * self.stride]
    }

    pub fn row(&self, row: usize) -> BitVector {
        let mut v = BitVector::zeros(self.cols);
        for c in 0..self.cols {
            v.set(c, self.get(row, c));
        }
        v
    }

    pub fn set_row(&mut self, row: usize, bits: &BitVector) {
        assert_eq!(bits.len(), self.cols);
        let n = bits.words().len();
        self.row_words_mut(row)[..n].copy_from_slice(bits.words());
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// The left-upper `u x v` submatrix.
    pub fn upper_left(&self, u: usize, v: usize) -> Result<Self> {
        if u > self.rows || v > self.cols {
            return invalid(format!(
                "submatrix {u}x{v} exceeds {}x{}",
                self.rows, self.cols
            ));
        }
        let mut out = Self::zeros(u, v);
        for r in 0..u {
            for c in 0..v {
                if self.get(r, c) {
                    out.set(r, c, true);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.cols);
        let mut out = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(v.words())
                .fold(0, |acc, (a, b)| acc ^ (a & b).count_ones());
            out.set(r, parity & 1 == 1);
        }
        out
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    fn reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..self.cols {
            if lead == self.rows {
                break;
            }
            let Some(p) = (lead..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            if p != lead {
                for w in 0..self.stride {
                    self.data.swap(p * self.stride + w, lead * self.stride + w);
                }
            }
            let pivot_row: Vec<u64> = self.row_words(lead).to_vec();
            for r in 0..self.rows {
                if r != lead && self.get(r, c) {
                    for (a, b) in self.row_words_mut(r).iter_mut().zip(&pivot_row) {
                        *a ^= b;
                    }
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().reduce().len()
    }

    /// Basis of `{v : M v = 0}`, one vector per free column of the reduced
    /// echelon form.
    pub fn kernel_basis(&self) -> Vec<BitVector> {
        let mut red = self.clone();
        let pivots = red.reduce();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVector::zeros(self.cols);
                v.set(f, true);
                for (i, &pc) in pivots.iter().enumerate() {
                    if red.get(i, f) {
                        v.set(pc, true);
                    }
                }
                v
            })
            .collect()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        write!(f, "{self}")?;
        write!(f, "]")
    }
}

/// Text format: one line per row of `0`/`1` characters.
impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for BitMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lines: Vec<&str> = s.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        let cols = lines.first().map_or(0, |l| l.len());
        let mut m = Self::zeros(lines.len(), cols);
        for (r, line) in lines.iter().enumerate() {
            if line.len() != cols {
                return invalid(format!("row {r} has {} columns, expected {cols}", line.len()));
            }
            for (c, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.set(r, c, true),
                    other => return invalid(format!("unexpected character {other:?} in matrix")),
                }
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kernel_examples() {
        assert!(BitMatrix::identity(3).kernel_basis().is_empty());
        assert_eq!(BitMatrix::zeros(2, 3).kernel_basis().len(), 3);
        let m: BitMatrix = "101\n011\n".parse().unwrap();
        let k = m.kernel_basis();
        assert_eq!(k, vec![BitVector::from_bits(&[1, 1, 1])]);
    }

    #[test]
    fn text_format() {
        let m: BitMatrix = "10\n01\n11\n".parse().unwrap();
        assert_eq!(m.rows(), 3);
        assert_eq!(m.to_string(), "10\n01\n11\n");
        assert!("10\n1\n".parse::<BitMatrix>().is_err());
        assert!("1x\n".parse::<BitMatrix>().is_err());
    }

    #[test]
    fn upper_left_of_identity() {
        let m = BitMatrix::identity(4);
        assert_eq!(m.upper_left(4, 4).unwrap(), m);
        assert_eq!(m.upper_left(2, 3).unwrap().to_string(), "100\n010\n");
        assert!(m.upper_left(5, 1).is_err());
    }

    #[test]
    fn wide_rows() {
        let mut m = BitMatrix::zeros(3, 130);
        m.set(0, 129, true);
        m.set(1, 64, true);
        m.set(2, 64, true);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.kernel_basis().len(), 128);
    }

    fn arb_matrix() -> impl Strategy<Value = BitMatrix> {
        (1usize..9, 1usize..80).prop_flat_map(|(r, c)| {
            proptest::collection::vec(any::<bool>(), r * c).prop_map(move |bits| {
                let mut m = BitMatrix::zeros(r, c);
                for (i, b) in bits.into_iter().enumerate() {
                    m.set(i / c, i % c, b);
                }
                m
            })
        })
    }

    proptest! {
        #[test]
        fn kernel_basis_is_a_basis(m in arb_matrix()) {
            let basis = m.kernel_basis();
            prop_assert_eq!(basis.len(), m.cols() - m.rank());
            for v in &basis {
                prop_assert!(m.mul_vec(v).is_zero());
            }
            // independence: the basis as rows has full rank
            if !basis.is_empty() {
                let b = BitMatrix::from_rows(m.cols(), &basis).unwrap();
                prop_assert_eq!(b.rank(), basis.len());
            }
            prop_assert!(m.rank() <= m.rows().min(m.cols()));
        }

        #[test]
        fn transpose_preserves_rank(m in arb_matrix()) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }
    }
}
