//! Bit-packed linear algebra over GF(2).
//!
//! Vectors are stored as little-endian arrays of `u64` words: bit `j` of a
//! [`BitVector`] lives in word `j / 64` at position `j % 64`. Bits past the
//! logical length are always zero, so equality, hashing and popcounts can work
//! on whole words.
//!
//! A [`BitMatrix`] is a list of rows of common length. In the IQP setting the
//! rows are program elements (matroid points) and the columns span a binary
//! linear code.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

fn word_count(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A vector over GF(2) of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; word_count(len)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            words: vec![u64::MAX; word_count(len)],
            len,
        };
        v.clear_tail();
        v
    }

    /// The unit vector with a single 1 at position `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (j, &b) in bits.iter().enumerate() {
            if b {
                v.set(j, true);
            }
        }
        v
    }

    /// Builds a vector whose bit `j` is bit `j` of `index`.
    pub fn from_index(index: u64, len: usize) -> Self {
        assert!(len <= WORD_BITS, "from_index supports at most 64 bits");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = index;
            v.clear_tail();
        }
        v
    }

    /// Inverse of [`BitVector::from_index`].
    pub fn to_index(&self) -> u64 {
        assert!(self.len <= WORD_BITS, "to_index supports at most 64 bits");
        self.words.first().copied().unwrap_or(0)
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut v = Self {
            words: (0..word_count(len)).map(|_| rng.gen()).collect(),
            len,
        };
        v.clear_tail();
        v
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, index: usize) -> bool {
        assert!(
            index < self.len,
            "bit index {index} out of range {}",
            self.len
        );
        (self.words[index / WORD_BITS] >> (index % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, index: usize, value: bool) {
        assert!(
            index < self.len,
            "bit index {index} out of range {}",
            self.len
        );
        let mask = 1u64 << (index % WORD_BITS);
        if value {
            self.words[index / WORD_BITS] |= mask;
        } else {
            self.words[index / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, index: usize) {
        assert!(
            index < self.len,
            "bit index {index} out of range {}",
            self.len
        );
        self.words[index / WORD_BITS] ^= 1u64 << (index % WORD_BITS);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// GF(2) inner product `self · otherᵀ`.
    #[inline]
    pub fn dot(&self, other: &BitVector) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() & 1 == 1
    }

    /// Weight of the bitwise AND, i.e. the size of the common support.
    pub fn overlap(&self, other: &BitVector) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        out
    }

    /// Positions of the set bits, in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let tz = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD_BITS + tz)
                }
            })
        })
    }

    pub fn first_one(&self) -> Option<usize> {
        self.iter_ones().next()
    }

    /// Concatenation `self | other`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.len + other.len);
        for j in self.iter_ones() {
            out.set(j, true);
        }
        for j in other.iter_ones() {
            out.set(self.len + j, true);
        }
        out
    }

    /// The bits at positions `start..start + len`.
    pub fn slice(&self, start: usize, len: usize) -> BitVector {
        assert!(start + len <= self.len);
        let mut out = BitVector::zeros(len);
        for j in self.iter_ones().filter(|&j| j >= start && j < start + len) {
            out.set(j - start, true);
        }
        out
    }

    /// Copy with one extra bit appended at the end.
    pub fn push(&self, bit: bool) -> BitVector {
        let mut out = BitVector::zeros(self.len + 1);
        out.words[..self.words.len()].copy_from_slice(&self.words);
        out.set(self.len, bit);
        out
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.len {
            f.write_str(if self.get(j) { "1" } else { "0" })?;
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
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut v = BitVector::zeros(s.len());
        for (j, c) in s.bytes().enumerate() {
            match c {
                b'0' => {}
                b'1' => v.set(j, true),
                other => {
                    return Err(Error::parse(
                        0,
                        format!("unexpected character {:?} in bit string", other as char),
                    ))
                }
            }
        }
        Ok(v)
    }
}

/// Lexicographic order reading position 0 first.
impl Ord for BitVector {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff != 0 {
                let low = diff & diff.wrapping_neg();
                return if a & low != 0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for BitVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A `k × n` matrix over GF(2), stored by rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: Vec<BitVector>,
    cols: usize,
}

/// Output of [`BitMatrix::col_echelon_reduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnEchelon {
    /// Canonical column-echelon form with zero columns removed; `k × rank`.
    pub reduced: BitMatrix,
    /// Invertible `n × n` matrix with `M · T = [reduced | 0]`.
    pub transform: BitMatrix,
}

impl ColumnEchelon {
    pub fn rank(&self) -> usize {
        self.reduced.cols()
    }

    /// Maps a direction `s` for the original matrix to the direction for
    /// `reduced`, i.e. `s · T^{-T}` truncated to the surviving columns.
    ///
    /// Row products are preserved: `reduced · s'ᵀ = M · sᵀ`.
    pub fn map_direction(&self, s: &BitVector) -> BitVector {
        let inv = self
            .transform
            .inverse()
            .expect("echelon transform is invertible");
        // (M T)(T^{-1} sᵀ) = M sᵀ; as a row vector T^{-1} sᵀ is s · T^{-T}.
        let mapped = inv.mul_vec(s);
        mapped.slice(0, self.rank())
    }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows: vec![BitVector::zeros(cols); rows],
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: (0..n).map(|i| BitVector::unit(n, i)).collect(),
            cols: n,
        }
    }

    /// Builds a matrix from rows, all of which must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self { rows, cols })
    }

    /// Convenience constructor from `0`/`1` strings. Panics on malformed input.
    pub fn from_strs(rows: &[&str]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.parse::<BitVector>().expect("valid bit string"))
            .collect();
        Self::from_rows(cols, rows).expect("rows of equal length")
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        Self {
            rows: (0..rows).map(|_| BitVector::random(cols, rng)).collect(),
            cols,
        }
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVector> {
        self.rows
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value)
    }

    pub fn push_row(&mut self, row: BitVector) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.rows.push(row);
    }

    /// Column `j` as a vector of length `k`.
    /// `row[dst] ^= row[src]`.
    pub fn xor_row_into(&mut self, src: usize, dst: usize) {
        assert_ne!(src, dst, "row cannot be added to itself");
        let s = self.rows[src].clone();
        self.rows[dst].xor_assign(&s);
    }

    pub fn column(&self, j: usize) -> BitVector {
        let mut c = BitVector::zeros(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            if r.get(j) {
                c.set(i, true);
            }
        }
        c
    }

    pub fn columns(&self) -> Vec<BitVector> {
        self.transpose().rows
    }

    pub fn from_columns(rows: usize, columns: &[BitVector]) -> Result<Self> {
        let t = BitMatrix::from_rows(rows, columns.to_vec())?;
        Ok(t.transpose())
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.cols, self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.iter_ones() {
                out.rows[j].set(i, true);
            }
        }
        out
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows.len(), "inner dimensions differ");
        let rows = self.rows.iter().map(|r| other.left_mul(r)).collect();
        BitMatrix {
            rows,
            cols: other.cols,
        }
    }

    /// `M · vᵀ`: the vector of row inner products, length `k`.
    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut out = BitVector::zeros(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(v) {
                out.set(i, true);
            }
        }
        out
    }

    /// `v · M`: the XOR of the rows selected by `v`, length `n`.
    pub fn left_mul(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.rows.len(), "vector length mismatch");
        let mut out = BitVector::zeros(self.cols);
        for i in v.iter_ones() {
            out.xor_assign(&self.rows[i]);
        }
        out
    }

    /// XOR of all rows.
    pub fn row_sum(&self) -> BitVector {
        let mut out = BitVector::zeros(self.cols);
        for r in &self.rows {
            out.xor_assign(r);
        }
        out
    }

    /// Gram matrix `Mᵀ · M` (`n × n`): the quadratic form of the column code.
    pub fn gram(&self) -> BitMatrix {
        let cols = self.columns();
        let n = self.cols;
        let mut out = BitMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                if cols[i].dot(&cols[j]) {
                    out.set(i, j, true);
                    out.set(j, i, true);
                }
            }
        }
        out
    }

    pub fn select_rows(&self, indices: &[usize]) -> BitMatrix {
        BitMatrix {
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            cols: self.cols,
        }
    }

    /// Row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> BitMatrix {
        assert_eq!(perm.len(), self.rows.len());
        self.select_rows(perm)
    }

    pub fn append_column(&self, column: &BitVector) -> BitMatrix {
        assert_eq!(column.len(), self.rows.len());
        BitMatrix {
            rows: self
                .rows
                .iter()
                .enumerate()
                .map(|(i, r)| r.push(column.get(i)))
                .collect(),
            cols: self.cols + 1,
        }
    }

    /// Side-by-side concatenation `[self | other]`.
    pub fn hstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.rows.len(), other.rows.len());
        BitMatrix {
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.concat(b))
                .collect(),
            cols: self.cols + other.cols,
        }
    }

    /// Block-diagonal matrix `[[self, 0], [0, other]]`.
    pub fn block_diag(&self, other: &BitMatrix) -> BitMatrix {
        let left_pad = BitVector::zeros(self.cols);
        let right_pad = BitVector::zeros(other.cols);
        let mut rows = Vec::with_capacity(self.rows.len() + other.rows.len());
        rows.extend(self.rows.iter().map(|r| r.concat(&right_pad)));
        rows.extend(other.rows.iter().map(|r| left_pad.concat(r)));
        BitMatrix {
            rows,
            cols: self.cols + other.cols,
        }
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        reduce_rows(&mut rows, self.cols, None, ColumnOrder::Forward).len()
    }

    /// Canonical column-echelon form: the transpose of the reduced row-echelon
    /// form of `Mᵀ`, with zero columns dropped.
    ///
    /// Column `j` of the result has its first 1 in row `r_j`, with
    /// `r_0 < r_1 < …`, and row `r_j` is zero outside column `j`. The result
    /// depends only on the column span of `M`.
    pub fn col_echelon_reduce(&self) -> ColumnEchelon {
        let n = self.cols;
        let k = self.rows.len();
        let mut t_rows = self.transpose().rows;
        let mut ops = BitMatrix::identity(n).rows;
        let pivots = reduce_rows(&mut t_rows, k, Some(&mut ops), ColumnOrder::Forward);
        let rank = pivots.len();
        t_rows.truncate(rank);
        let reduced = BitMatrix {
            rows: t_rows,
            cols: k,
        }
        .transpose();
        let reduced = if rank == 0 {
            BitMatrix::zeros(k, 0)
        } else {
            reduced
        };
        // E · Mᵀ = RREF, so M · Eᵀ carries the reduced columns first.
        let transform = BitMatrix { rows: ops, cols: n }.transpose();
        ColumnEchelon { reduced, transform }
    }

    /// Some `s` with `M · sᵀ = b`, or `None` when the system is inconsistent.
    ///
    /// Among all solutions the lexicographically smallest (position 0 most
    /// significant) is returned.
    pub fn solve(&self, b: &BitVector) -> Option<BitVector> {
        assert_eq!(b.len(), self.rows.len(), "right-hand side length mismatch");
        let k = self.rows.len();
        let mut rows = self.rows.clone();
        // Track the right-hand side as a one-column augmentation.
        let mut rhs: Vec<BitVector> = (0..k).map(|i| BitVector::from_bools(&[b.get(i)])).collect();
        // Pivots taken from the last column backwards leave every pivot
        // variable depending only on more significant free variables.
        let pivots = reduce_rows(&mut rows, self.cols, Some(&mut rhs), ColumnOrder::Reverse);
        if rhs[pivots.len()..].iter().any(|r| r.get(0)) {
            return None;
        }
        let mut s = BitVector::zeros(self.cols);
        for (r, &col) in pivots.iter().enumerate() {
            if rhs[r].get(0) {
                s.set(col, true);
            }
        }
        Some(s)
    }

    /// Basis of the left kernel `{v : v · M = 0}`, one basis vector per row.
    pub fn left_kernel(&self) -> BitMatrix {
        let k = self.rows.len();
        let mut rows = self.rows.clone();
        let mut track = BitMatrix::identity(k).rows;
        let rank = reduce_rows(&mut rows, self.cols, Some(&mut track), ColumnOrder::Forward).len();
        BitMatrix {
            rows: track.split_off(rank),
            cols: k,
        }
    }

    /// Basis of the right kernel `{s : M · sᵀ = 0}`, one basis vector per row.
    pub fn null_space(&self) -> BitMatrix {
        self.transpose().left_kernel()
    }

    pub fn inverse(&self) -> Option<BitMatrix> {
        let n = self.rows.len();
        if n != self.cols {
            return None;
        }
        let mut rows = self.rows.clone();
        let mut track = BitMatrix::identity(n).rows;
        let rank = reduce_rows(&mut rows, n, Some(&mut track), ColumnOrder::Forward).len();
        (rank == n).then_some(BitMatrix {
            rows: track,
            cols: n,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVector::is_zero)
    }

    /// Sorts rows lexicographically (stable); returns the permutation applied,
    /// so that row `i` of the result was row `perm[i]` before.
    pub fn sort_rows(&mut self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.rows.len()).collect();
        perm.sort_by(|&a, &b| self.rows[a].cmp(&self.rows[b]));
        self.rows = perm.iter().map(|&i| self.rows[i].clone()).collect();
        perm
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
        write!(f, "BitMatrix({}x{})", self.rows.len(), self.cols)?;
        for r in &self.rows {
            write!(f, "\n  {r}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy)]
enum ColumnOrder {
    Forward,
    Reverse,
}

/// Gauss–Jordan elimination in place. Rows `0..rank` end up holding the pivot
/// rows in pivot order; every pivot column is zero outside its pivot row.
/// `track`, if given, receives the same row operations. Returns the pivot
/// column of each pivot row.
fn reduce_rows(
    rows: &mut [BitVector],
    cols: usize,
    mut track: Option<&mut [BitVector]>,
    order: ColumnOrder,
) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for step in 0..cols {
        if next == rows.len() {
            break;
        }
        let col = match order {
            ColumnOrder::Forward => step,
            ColumnOrder::Reverse => cols - 1 - step,
        };
        let Some(found) = (next..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(next, found);
        if let Some(t) = track.as_deref_mut() {
            t.swap(next, found);
        }
        let pivot_row = rows[next].clone();
        let pivot_track = track.as_deref().map(|t| t[next].clone());
        for r in 0..rows.len() {
            if r != next && rows[r].get(col) {
                rows[r].xor_assign(&pivot_row);
                if let (Some(t), Some(pt)) = (track.as_deref_mut(), pivot_track.as_ref()) {
                    t[r].xor_assign(pt);
                }
            }
        }
        pivots.push(col);
        next += 1;
    }
    pivots
}

/// Uniformly random invertible `n × n` matrix, by rejection sampling.
pub fn random_invertible<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BitMatrix {
    assert!(n >= 1, "dimension must be positive");
    loop {
        let m = BitMatrix::random(n, n, rng);
        if m.rank() == n {
            return m;
        }
    }
}

/// Uniformly random permutation of `0..k`.
pub fn random_permutation<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..k).collect();
    perm.shuffle(rng);
    perm
}

/// True iff the columns of `a` and `b` span the same subspace of `F2^k`.
pub fn same_column_span(a: &BitMatrix, b: &BitMatrix) -> bool {
    assert_eq!(a.row_count(), b.row_count(), "row counts differ");
    let ra = a.rank();
    ra == b.rank() && a.hstack(b).rank() == ra
}
