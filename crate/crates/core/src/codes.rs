//! Binary linear codes: quadratic residue codes, weight distributions, and
//! the code-theoretic predicates that decide quantum and classical biases.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Largest code rank [`weight_distribution`] will enumerate by default.
pub const DEFAULT_ENUMERATION_CAP: usize = 28;

/// A linear code of length `k`, held as a full-column-rank generator whose
/// columns form a canonical basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    generator: BitMatrix,
}

impl LinearCode {
    /// The code spanned by the columns of `m` (redundant columns allowed).
    pub fn from_spanning(m: &BitMatrix) -> Self {
        Self {
            generator: m.col_echelon_reduce().reduced,
        }
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn length(&self) -> usize {
        self.generator.row_count()
    }

    pub fn rank(&self) -> usize {
        self.generator.cols()
    }

    /// The code obtained by appending an overall parity bit to every codeword.
    pub fn extended(&self) -> LinearCode {
        let parity = self.generator.row_sum();
        let mut g = self.generator.clone();
        g.push_row(parity);
        LinearCode::from_spanning(&g)
    }

    pub fn contains(&self, word: &BitVector) -> bool {
        assert_eq!(word.len(), self.length());
        let g = &self.generator;
        g.append_column(word).rank() == g.cols()
    }
}

/// Codeword counts by Hamming weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDistribution {
    counts: Vec<u64>,
}

impl WeightDistribution {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        Self { counts }
    }

    /// `counts()[w]` codewords have weight `w`; the slice has length `k + 1`.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn length(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `WEP(x, y) = Σ_w counts[w] · x^w · y^{k−w}`.
    pub fn wep(&self, x: Complex64, y: Complex64) -> Complex64 {
        let k = self.length() as i32;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(w, &c)| x.powi(w as i32) * y.powi(k - w as i32) * c as f64)
            .sum()
    }

    /// Number of codewords whose weight is congruent to `r` modulo `m`.
    pub fn count_mod(&self, m: usize, r: usize) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .filter(|(w, _)| w % m == r)
            .map(|(_, &c)| c)
            .sum()
    }
}

fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

/// True iff `j` is a nonzero quadratic residue modulo the odd prime `q`,
/// decided by Euler's criterion `j^{(q−1)/2} ≡ 1`.
pub fn legendre_indicator(j: u64, q: u64) -> Result<bool> {
    if q <= 2 || !is_prime(q) {
        return Err(Error::InvalidParameter(format!("{q} is not an odd prime")));
    }
    if j == 0 || j >= q {
        return Err(Error::InvalidParameter(format!(
            "index {j} outside 1..={}",
            q - 1
        )));
    }
    Ok(pow_mod(j, (q - 1) / 2, q) == 1)
}

/// The indicator word of the nonzero quadratic residues, position 0 unset.
fn residue_word(q: u64) -> Result<Vec<bool>> {
    let mut word = vec![false; q as usize];
    for j in 1..q {
        word[j as usize] = legendre_indicator(j, q)?;
    }
    Ok(word)
}

/// The length-`q` quadratic residue code, for a prime `q` with `8 | q + 1`.
///
/// All `q` cyclic rotations of the residue indicator are stacked as columns
/// and column-echelon reduced; the resulting rank is checked to be
/// `(q + 1) / 2`.
pub fn qr_code(q: u64) -> Result<LinearCode> {
    if !is_prime(q) || !(q + 1).is_multiple_of(8) {
        return Err(Error::InvalidParameter(format!(
            "q = {q} must be a prime with q + 1 divisible by 8"
        )));
    }
    let word = residue_word(q)?;
    let qn = q as usize;
    let columns: Vec<BitVector> = (0..qn)
        .map(|shift| {
            let bits: Vec<bool> = (0..qn).map(|j| word[(j + qn - shift) % qn]).collect();
            BitVector::from_bools(&bits)
        })
        .collect();
    let code = LinearCode::from_spanning(&BitMatrix::from_columns(qn, &columns)?);
    let expected = qn.div_ceil(2);
    if code.rank() != expected {
        return Err(Error::InvalidParameter(format!(
            "rotations of the residue word span rank {}, expected {expected}",
            code.rank()
        )));
    }
    Ok(code)
}

/// Exact weight distribution by Gray-code enumeration of all `2^rank`
/// codewords, refusing codes of rank above [`DEFAULT_ENUMERATION_CAP`].
pub fn weight_distribution(code: &LinearCode) -> Result<WeightDistribution> {
    weight_distribution_capped(code, DEFAULT_ENUMERATION_CAP)
}

pub fn weight_distribution_capped(code: &LinearCode, cap: usize) -> Result<WeightDistribution> {
    let rank = code.rank();
    if rank > cap {
        return Err(Error::EnumerationInfeasible { rank, cap });
    }
    let k = code.length();
    let basis = code.generator.columns();
    let total: u64 = 1 << rank;
    // Fixed-size blocks keep the partition independent of thread count.
    let block_bits = rank.min(16);
    let block: u64 = 1 << block_bits;
    let blocks = total / block;
    let counts = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut local = vec![0u64; k + 1];
            let start = b * block;
            // codeword for Gray index gray(start)
            let gray = start ^ (start >> 1);
            let mut word = BitVector::zeros(k);
            for (i, col) in basis.iter().enumerate() {
                if (gray >> i) & 1 == 1 {
                    word.xor_assign(col);
                }
            }
            local[word.weight()] += 1;
            for idx in start + 1..start + block {
                word.xor_assign(&basis[idx.trailing_zeros() as usize]);
                local[word.weight()] += 1;
            }
            local
        })
        .reduce(
            || vec![0u64; k + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(WeightDistribution { counts })
}

/// `WEP_C(x, y)` evaluated through the weight distribution.
pub fn wep_eval(code: &LinearCode, x: Complex64, y: Complex64) -> Result<Complex64> {
    Ok(weight_distribution(code)?.wep(x, y))
}

/// Every codeword weight is a multiple of 4.
///
/// Decided on the basis: a code is doubly even iff each basis vector has
/// weight ≡ 0 (mod 4) and the basis vectors are pairwise orthogonal, since
/// `wt(a ⊕ b) = wt(a) + wt(b) − 2·|a ∧ b|`.
pub fn is_doubly_even(code: &LinearCode) -> bool {
    let basis = code.generator.columns();
    basis.iter().all(|c| c.weight() % 4 == 0)
        && basis
            .iter()
            .enumerate()
            .all(|(i, a)| basis[i + 1..].iter().all(|b| a.overlap(b) % 2 == 0))
}

/// The code equals its dual: self-orthogonal generator and `2·rank = length`.
pub fn is_self_dual(code: &LinearCode) -> bool {
    2 * code.rank() == code.length() && code.generator.gram().is_zero()
}

/// `rank(Mᵀ · M)` over GF(2).
pub fn quadratic_form_rank(m: &BitMatrix) -> usize {
    m.gram().rank()
}
