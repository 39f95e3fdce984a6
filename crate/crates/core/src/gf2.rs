//! Dense linear algebra over GF(2).
//!
//! Vectors are packed into `u64` words with an explicit logical length; bits
//! beyond the length are always zero. Matrices are row lists of equal length.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

const WORD: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("a matrix needs at least one row")]
    EmptyMatrix,
    #[error("row {row} has length {found}, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("vector length {found} does not match column count {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("column order is not a permutation of 0..{0}")]
    InvalidColumnOrder(usize),
    #[error("row index {index} out of range for {rows} rows")]
    RowOutOfRange { index: usize, rows: usize },
    #[error("code dimension {dimension} gives more than {cap} codewords")]
    DimensionTooLarge { dimension: usize, cap: u64 },
    #[error("invalid bit character {0:?}")]
    InvalidBit(char),
}

/// A binary vector of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in support {
            v.set(i, true);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    /// In-place addition over GF(2). Panics on length mismatch.
    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Parity of the overlap, i.e. the GF(2) inner product.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones % 2 == 1
    }

    /// Indices of the nonzero bits, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.iter_ones().collect()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut word = w;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let tz = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(wi * WORD + tz)
            })
        })
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
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

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Gf2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Gf2Error::InvalidBit(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BitVector::from_bools(&bits))
    }
}

/// One elementary row operation performed during elimination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowOp {
    Swap(usize, usize),
    /// `rows[to] += rows[from]`
    Add { from: usize, to: usize },
}

/// Forward-eliminated form of a matrix under some column order.
#[derive(Debug, Clone)]
pub struct Echelon {
    /// Echelon rows, still indexed by the original columns.
    pub matrix: BitMatrix,
    pub rank: usize,
    /// Pivot column (original index) of each nonzero row.
    pub pivots: Vec<usize>,
    pub ops: Vec<RowOp>,
}

impl Echelon {
    /// Applies the recorded operations to `mat`.
    pub fn replay(&self, mat: &BitMatrix) -> BitMatrix {
        let mut rows = mat.rows.clone();
        for op in &self.ops {
            match *op {
                RowOp::Swap(a, b) => rows.swap(a, b),
                RowOp::Add { from, to } => {
                    let src = rows[from].clone();
                    rows[to].xor_assign(&src);
                }
            }
        }
        BitMatrix { rows, n: mat.n }
    }
}

/// A binary matrix with at least one row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: Vec<BitVector>,
    n: usize,
}

impl BitMatrix {
    pub fn new(rows: Vec<BitVector>) -> Result<Self, Gf2Error> {
        let n = rows.first().ok_or(Gf2Error::EmptyMatrix)?.len();
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Gf2Error::RaggedRows {
                    row,
                    expected: n,
                    found: r.len(),
                });
            }
        }
        Ok(Self { rows, n })
    }

    /// Builds a matrix from strings of `0`/`1` characters.
    pub fn from_strs<S: AsRef<str>>(rows: &[S]) -> Result<Self, Gf2Error> {
        let rows = rows
            .iter()
            .map(|s| s.as_ref().parse())
            .collect::<Result<Vec<BitVector>, _>>()?;
        Self::new(rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.rows.iter().map(BitVector::weight).collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.n];
        for r in &self.rows {
            for j in r.iter_ones() {
                w[j] += 1;
            }
        }
        w
    }

    /// Total number of ones.
    pub fn ones(&self) -> usize {
        self.rows.iter().map(BitVector::weight).sum()
    }

    /// Rows selected by index, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Result<Self, Gf2Error> {
        let rows = indices
            .iter()
            .map(|&i| {
                self.rows.get(i).cloned().ok_or(Gf2Error::RowOutOfRange {
                    index: i,
                    rows: self.m(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(rows)
    }

    /// Appends `row` below the existing rows.
    pub fn with_row(&self, row: BitVector) -> Result<Self, Gf2Error> {
        self.check_len(&row)?;
        let mut rows = self.rows.clone();
        rows.push(row);
        Ok(Self { rows, n: self.n })
    }

    fn check_len(&self, v: &BitVector) -> Result<(), Gf2Error> {
        if v.len() != self.n {
            return Err(Gf2Error::LengthMismatch {
                expected: self.n,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// `x H^T`, one bit per row.
    pub fn syndrome(&self, x: &BitVector) -> Result<BitVector, Gf2Error> {
        self.check_len(x)?;
        Ok(BitVector::from_bools(
            &self.rows.iter().map(|r| r.dot(x)).collect::<Vec<_>>(),
        ))
    }

    pub fn is_codeword(&self, x: &BitVector) -> Result<bool, Gf2Error> {
        Ok(self.syndrome(x)?.is_zero())
    }

    /// Forward elimination visiting columns in `col_order`.
    ///
    /// The pivot in each column is the first remaining row (in current order)
    /// with a one there. Rows below `rank` come out zero.
    pub fn row_echelon(&self, col_order: &[usize]) -> Result<Echelon, Gf2Error> {
        if col_order.len() != self.n {
            return Err(Gf2Error::InvalidColumnOrder(self.n));
        }
        let mut seen = vec![false; self.n];
        for &c in col_order {
            if c >= self.n || std::mem::replace(&mut seen[c], true) {
                return Err(Gf2Error::InvalidColumnOrder(self.n));
            }
        }

        let mut rows = self.rows.clone();
        let mut ops = Vec::new();
        let mut pivots = Vec::new();
        let mut r = 0;
        for &c in col_order {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
                continue;
            };
            if p != r {
                rows.swap(p, r);
                ops.push(RowOp::Swap(p, r));
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate().skip(r + 1) {
                if row.get(c) {
                    row.xor_assign(&pivot_row);
                    ops.push(RowOp::Add { from: r, to: i });
                }
            }
            pivots.push(c);
            r += 1;
        }
        Ok(Echelon {
            matrix: BitMatrix { rows, n: self.n },
            rank: r,
            pivots,
            ops,
        })
    }

    pub fn rank(&self) -> usize {
        let order: Vec<usize> = (0..self.n).collect();
        self.row_echelon(&order).map(|e| e.rank).unwrap_or(0)
    }

    /// Whether `v` is a GF(2) combination of the rows.
    pub fn in_row_space(&self, v: &BitVector) -> Result<bool, Gf2Error> {
        self.check_len(v)?;
        let order: Vec<usize> = (0..self.n).collect();
        let ech = self.row_echelon(&order)?;
        let mut rem = v.clone();
        for (row, &pc) in ech.matrix.rows.iter().zip(&ech.pivots) {
            if rem.get(pc) {
                rem.xor_assign(row);
            }
        }
        Ok(rem.is_zero())
    }

    /// Basis of the null space `{x : x H^T = 0}`.
    pub fn null_space_basis(&self) -> Vec<BitVector> {
        // reduced row echelon in natural column order
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.n {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
                continue;
            };
            rows.swap(p, r);
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        let mut is_pivot = vec![false; self.n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.n)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = BitVector::zeros(self.n);
                x.set(f, true);
                for (row, &pc) in rows.iter().zip(&pivots) {
                    if row.get(f) {
                        x.set(pc, true);
                    }
                }
                x
            })
            .collect()
    }

    /// All codewords of the code with parity-check matrix `self`.
    ///
    /// Fails when `2^(n - rank)` exceeds `cap`.
    pub fn enumerate_codewords(&self, cap: u64) -> Result<Vec<BitVector>, Gf2Error> {
        let basis = self.null_space_basis();
        let dimension = basis.len();
        if dimension >= 63 || (1u64 << dimension) > cap {
            return Err(Gf2Error::DimensionTooLarge { dimension, cap });
        }
        let total = 1usize << dimension;
        let mut out = Vec::with_capacity(total);
        let mut cur = BitVector::zeros(self.n);
        out.push(cur.clone());
        // Gray code walk
        for k in 1..total {
            let bit = k.trailing_zeros() as usize;
            cur.xor_assign(&basis[bit]);
            out.push(cur.clone());
        }
        Ok(out)
    }

    /// Smallest nonzero codeword weight, or `None` for the zero code.
    pub fn minimum_distance(&self, cap: u64) -> Result<Option<usize>, Gf2Error> {
        Ok(self
            .enumerate_codewords(cap)?
            .iter()
            .map(BitVector::weight)
            .filter(|&w| w > 0)
            .min())
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix {}x{} [", self.m(), self.n)?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hamming() -> BitMatrix {
        BitMatrix::from_strs(&["1011100", "1101010", "0111001"]).unwrap()
    }

    fn natural(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    #[test]
    fn identity_is_already_echelon() {
        let id = BitMatrix::from_strs(&["100", "010", "001"]).unwrap();
        let e = id.row_echelon(&natural(3)).unwrap();
        assert_eq!(e.rank, 3);
        assert_eq!(e.matrix, id);
        assert!(e.ops.is_empty());
    }

    #[test]
    fn hamming_rank_by_hand() {
        // rows r1, r2, r3: col 0 pivots r1, r2 += r1 -> 0110110,
        // col 1 pivots r2', r3 += r2' -> 0001111, col 3 pivots r3''.
        let e = hamming().row_echelon(&natural(7)).unwrap();
        assert_eq!(e.rank, 3);
        assert_eq!(e.pivots, vec![0, 1, 3]);
        assert_eq!(e.matrix.row(1).to_string(), "0110110");
        assert_eq!(e.matrix.row(2).to_string(), "0001111");
    }

    #[test]
    fn duplicated_row_cancels() {
        let m = BitMatrix::from_strs(&["1100", "0110", "1100"]).unwrap();
        for order in [vec![0, 1, 2, 3], vec![3, 2, 1, 0], vec![2, 0, 3, 1]] {
            let e = m.row_echelon(&order).unwrap();
            assert_eq!(e.rank, 2);
            assert!(e.matrix.row(2).is_zero());
        }
    }

    #[test]
    fn echelon_leading_positions_increase_under_order() {
        let m = hamming();
        let order = vec![2, 3, 0, 4, 5, 6, 1];
        let e = m.row_echelon(&order).unwrap();
        let pos: Vec<usize> = (0..e.rank)
            .map(|i| {
                order
                    .iter()
                    .position(|&c| e.matrix.row(i).get(c))
                    .unwrap()
            })
            .collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(e.replay(&m), e.matrix);
    }

    #[test]
    fn bad_column_order_rejected() {
        let m = hamming();
        assert_eq!(
            m.row_echelon(&[0, 0, 1, 2, 3, 4, 5]).unwrap_err(),
            Gf2Error::InvalidColumnOrder(7)
        );
        assert!(m.row_echelon(&[0, 1]).is_err());
    }

    #[test]
    fn row_space_membership() {
        let h = hamming();
        assert!(h.in_row_space(&"1010011".parse().unwrap()).unwrap());
        assert!(h.in_row_space(&BitVector::zeros(7)).unwrap());
        // brute force: none of the 8 combinations is e_1
        let target: BitVector = "1000000".parse().unwrap();
        let mut found = false;
        for mask in 0..8u32 {
            let mut acc = BitVector::zeros(7);
            for i in 0..3 {
                if mask >> i & 1 == 1 {
                    acc.xor_assign(h.row(i));
                }
            }
            found |= acc == target;
        }
        assert!(!found);
        assert!(!h.in_row_space(&target).unwrap());
        assert!(h.in_row_space(&BitVector::zeros(6)).is_err());
    }

    #[test]
    fn hamming_codewords() {
        let cw = hamming().enumerate_codewords(1 << 10).unwrap();
        assert_eq!(cw.len(), 16);
        assert_eq!(hamming().minimum_distance(1 << 10).unwrap(), Some(3));
        for x in &cw {
            assert!(hamming().is_codeword(x).unwrap());
        }
    }

    #[test]
    fn single_check_gives_even_weight_words() {
        let m = BitMatrix::from_strs(&["111"]).unwrap();
        let mut cw: Vec<String> = m
            .enumerate_codewords(8)
            .unwrap()
            .iter()
            .map(|c| c.to_string())
            .collect();
        cw.sort();
        assert_eq!(cw, vec!["000", "011", "101", "110"]);
    }

    #[test]
    fn codeword_cap_enforced() {
        let m = BitMatrix::from_strs(&["1111"]).unwrap();
        assert!(matches!(
            m.enumerate_codewords(4),
            Err(Gf2Error::DimensionTooLarge { dimension: 3, .. })
        ));
    }

    #[test]
    fn construction_invariants() {
        assert_eq!(BitMatrix::new(vec![]).unwrap_err(), Gf2Error::EmptyMatrix);
        let err = BitMatrix::from_strs(&["101", "10"]).unwrap_err();
        assert!(matches!(err, Gf2Error::RaggedRows { row: 1, .. }));
        assert!("10a".parse::<BitVector>().is_err());
    }

    #[test]
    fn bit_vector_basics() {
        let mut v = BitVector::zeros(130);
        v.set(0, true);
        v.set(64, true);
        v.set(129, true);
        assert_eq!(v.support(), vec![0, 64, 129]);
        assert_eq!(v.weight(), 3);
        v.flip(64);
        assert_eq!(v.support(), vec![0, 129]);
        let w = BitVector::from_support(130, &[0, 5]);
        assert!(v.dot(&w));
        assert_eq!(v.xor(&w).support(), vec![5, 129]);
    }
}
