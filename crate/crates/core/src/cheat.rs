//! Classical approximation of constant-action π/8 programs.
//!
//! With `f(a) = Σ_p (−1)^{p·a} mod 16` the output bias in direction `s` is
//! `E_a[cos²(π/16 · f_s(a))]`, where `f_s(a) = f(a) − f(a ⊕ s)`. Second
//! derivatives of `f` are linear in `a`, which yields a cheap classical
//! sampler `Y = Σ_{p ∈ P_d ∩ P_e} p` with bias `½(1 + 2^{−rank(P_sᵀP_s)})`.

use std::f64::consts::PI;

use rand::Rng;

use crate::codes::quadratic_form_rank;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::simulator::{exact_bias, SampleSet};
use crate::wht::fwht;
use crate::xprogram::{submatrix_ps, Action, ConstantActionProgram};

/// Largest `n` for which [`bias_from_f`] enumerates every `a`.
pub const F_ENUMERATION_CAP: usize = 24;

/// `f(a) = Σ_p (−1)^{p·a} mod 16`, via `k − 2·wt(P·aᵀ)`.
pub fn f_eval(p: &BitMatrix, a: &BitVector) -> u8 {
    let k = p.row_count() as i64;
    let odd = p.mul_vec(a).weight() as i64;
    (k - 2 * odd).rem_euclid(16) as u8
}

/// `f_d(a) = f(a) − f(a ⊕ d) mod 16`.
pub fn f_derivative(p: &BitMatrix, a: &BitVector, d: &BitVector) -> u8 {
    let lhs = f_eval(p, a) as i16;
    let rhs = f_eval(p, &a.xor(d)) as i16;
    (lhs - rhs).rem_euclid(16) as u8
}

/// `f_{d,e}(a) = f_d(a) − f_d(a ⊕ e) mod 16`, by double differencing.
pub fn f_second_derivative(p: &BitMatrix, a: &BitVector, d: &BitVector, e: &BitVector) -> u8 {
    let lhs = f_derivative(p, a, d) as i16;
    let rhs = f_derivative(p, &a.xor(e), d) as i16;
    (lhs - rhs).rem_euclid(16) as u8
}

/// The same second derivative as `Σ_{p ∈ P_d ∩ P_e} (4 + 8·(p·a)) mod 16`.
pub fn f_second_derivative_closed(
    p: &BitMatrix,
    a: &BitVector,
    d: &BitVector,
    e: &BitVector,
) -> u8 {
    p.rows()
        .iter()
        .filter(|row| row.dot(d) && row.dot(e))
        .map(|row| 4 + 8 * row.dot(a) as u32)
        .sum::<u32>()
        .rem_euclid(16) as u8
}

/// `f` at every `a ∈ F2^n`, indexed by `Σ a_j 2^j`.
fn f_table(p: &BitMatrix) -> Vec<u8> {
    let mut hist = vec![0i64; 1 << p.cols()];
    for row in p.rows() {
        hist[row.to_index() as usize] += 1;
    }
    fwht(&mut hist);
    hist.into_iter().map(|v| v.rem_euclid(16) as u8).collect()
}

/// `P(X · sᵀ = 0)` at θ = π/8 as the average of `cos²(π/16 · f_s(a))` over
/// all `a`.
pub fn bias_from_f(p: &BitMatrix, s: &BitVector) -> Result<f64> {
    let n = p.cols();
    if s.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: s.len(),
        });
    }
    if n > F_ENUMERATION_CAP {
        return Err(Error::EnumerationInfeasible {
            rank: n,
            cap: F_ENUMERATION_CAP,
        });
    }
    let table = f_table(p);
    let shift = s.to_index() as usize;
    let mut counts = [0u64; 16];
    for (a, &fa) in table.iter().enumerate() {
        let fs = (fa as i16 - table[a ^ shift] as i16).rem_euclid(16);
        counts[fs as usize] += 1;
    }
    let total = table.len() as f64;
    let weighted: f64 = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(r, &c)| {
            let v = match r {
                0 => 1.0,
                8 => 0.0,
                _ => (PI * r as f64 / 16.0).cos().powi(2),
            };
            c as f64 * v
        })
        .sum();
    Ok(weighted / total)
}

/// One draw of `Y`: the XOR of rows not orthogonal to either of two uniform
/// random directions.
pub fn cheat_draw<R: Rng + ?Sized>(p: &BitMatrix, rng: &mut R) -> BitVector {
    let n = p.cols();
    let d = BitVector::random(n, rng);
    let e = BitVector::random(n, rng);
    let mut y = BitVector::zeros(n);
    for row in p.rows() {
        if row.dot(&d) && row.dot(&e) {
            y.xor_assign(row);
        }
    }
    y
}

pub fn cheat_sample<R: Rng + ?Sized>(p: &BitMatrix, m: usize, rng: &mut R) -> SampleSet {
    let samples = (0..m).map(|_| cheat_draw(p, rng)).collect();
    SampleSet::new(p.cols(), samples).expect("samples have the matrix width")
}

/// `P(Y · sᵀ = 0) = ½(1 + 2^{−rank(P_sᵀ P_s)})`.
pub fn classical_bias_exact(p: &BitMatrix, s: &BitVector) -> f64 {
    let r = quadratic_form_rank(&submatrix_ps(p, s));
    0.5 * (1.0 + 0.5f64.powi(r as i32))
}

/// `m` constraint rows `Σ_{p ∈ P_d ∩ P_e} p` for random `(d, e)`.
///
/// If the quantum bias in direction `s` is exactly 1, every row is
/// orthogonal to `s`.
pub fn attack_linear_system<R: Rng + ?Sized>(p: &BitMatrix, m: usize, rng: &mut R) -> BitMatrix {
    let rows = (0..m).map(|_| cheat_draw(p, rng)).collect();
    BitMatrix::from_rows(p.cols(), rows).expect("rows have the matrix width")
}

/// Basis of the directions consistent with every constraint row.
pub fn attack_candidates(constraints: &BitMatrix) -> BitMatrix {
    if constraints.row_count() == 0 {
        return BitMatrix::identity(constraints.cols());
    }
    constraints.null_space()
}

/// Exact check of both sides of the implication "quantum bias 1 ⇒
/// classical bias 1" at θ = π/8.
pub fn check_bias_one_implication(p: &BitMatrix, s: &BitVector) -> Result<(bool, bool)> {
    let prog = ConstantActionProgram::new(p.clone(), Action::PI_OVER_8);
    let quantum = exact_bias(&prog, s)?;
    let classical = classical_bias_exact(p, s);
    Ok(((quantum - 1.0).abs() < 1e-12, classical == 1.0))
}
