//! Square GF(2) matrices used as "XOR the selected words" linear layers.
//!
//! Row `r` is a bitmask over the input words: bit `n - 1 - c` set means
//! input word `c` is XORed into output word `r`, so the most significant
//! bit of a row selects the leftmost input. Every XOR-selection layer in
//! both ciphers (P(n), M_5E, M_B3, MDS_H, the CAMELLIA P-function) is one
//! of these applied to bytes or wider words.

use std::ops::BitXor;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    n: usize,
    rows: Vec<u32>,
}

impl BitMatrix {
    /// Builds an `n`x`n` matrix; bits above `n` in any row are rejected.
    pub fn new(n: usize, rows: Vec<u32>) -> Option<Self> {
        if n == 0 || n > 32 || rows.len() != n {
            return None;
        }
        let mask = Self::mask(n);
        if rows.iter().any(|r| r & !mask != 0) {
            return None;
        }
        Some(BitMatrix { n, rows })
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix {
            n,
            rows: (0..n).map(|r| 1 << (n - 1 - r)).collect(),
        }
    }

    fn mask(n: usize) -> u32 {
        if n == 32 {
            u32::MAX
        } else {
            (1u32 << n) - 1
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r] >> (self.n - 1 - c) & 1 == 1
    }

    /// `self * rhs`, i.e. apply `rhs` first.
    pub fn mul(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.n, rhs.n);
        let rows = self
            .rows
            .iter()
            .map(|&row| {
                (0..self.n)
                    .filter(|&k| row >> (self.n - 1 - k) & 1 == 1)
                    .fold(0, |acc, k| acc ^ rhs.rows[k])
            })
            .collect();
        BitMatrix { n: self.n, rows }
    }

    /// Gauss-Jordan inverse over GF(2); `None` when singular.
    pub fn inverse(&self) -> Option<BitMatrix> {
        let n = self.n;
        let mut a = self.rows.clone();
        let mut inv = BitMatrix::identity(n).rows;
        for col in 0..n {
            let bit = 1u32 << (n - 1 - col);
            let pivot = (col..n).find(|&r| a[r] & bit != 0)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            for r in 0..n {
                if r != col && a[r] & bit != 0 {
                    a[r] ^= a[col];
                    inv[r] ^= inv[col];
                }
            }
        }
        Some(BitMatrix { n, rows: inv })
    }

    pub fn is_identity(&self) -> bool {
        *self == BitMatrix::identity(self.n)
    }

    /// Applies the layer to `input`, writing `n` words to `out`.
    pub fn apply<T>(&self, input: &[T], out: &mut [T])
    where
        T: Copy + Default + BitXor<Output = T>,
    {
        debug_assert_eq!(input.len(), self.n);
        debug_assert_eq!(out.len(), self.n);
        for (o, &row) in out.iter_mut().zip(&self.rows) {
            let mut acc = T::default();
            for (c, &x) in input.iter().enumerate() {
                if row >> (self.n - 1 - c) & 1 == 1 {
                    acc = acc ^ x;
                }
            }
            *o = acc;
        }
    }

    /// Number of set entries in each row (the XOR fan-in of each output).
    pub fn row_weights(&self) -> Vec<u32> {
        self.rows.iter().map(|r| r.count_ones()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trips() {
        let m = BitMatrix::new(4, vec![0b1100, 0b0110, 0b0011, 0b1011]).unwrap();
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(inv.mul(&m).is_identity());
    }

    #[test]
    fn singular_has_no_inverse() {
        let m = BitMatrix::new(3, vec![0b110, 0b011, 0b101]).unwrap();
        assert!(m.inverse().is_none());
    }

    #[test]
    fn apply_matches_row_selection() {
        let m = BitMatrix::new(3, vec![0b100, 0b110, 0b111]).unwrap();
        let mut out = [0u8; 3];
        m.apply(&[1, 2, 4], &mut out);
        assert_eq!(out, [1, 3, 7]);
    }

    #[test]
    fn rejects_out_of_range_rows() {
        assert!(BitMatrix::new(3, vec![0b1000, 0, 0]).is_none());
        assert!(BitMatrix::new(3, vec![0, 0]).is_none());
    }
}
