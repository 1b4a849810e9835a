//! Exact IQP output distributions, sampling, and directional biases.
//!
//! Two independent backends compute `P(X = x)`:
//!
//! * [`distribution_fourier`] works in the Hadamard-rotated frame where every
//!   term is diagonal: `amp(x) = E_a[(−1)^{x·a} · exp(i Σ_p θ_p (−1)^{p·a})]`.
//!   The phase sum is itself a Walsh–Hadamard transform of the row histogram,
//!   so the cost is `O(n · 2^n)` independent of the number of rows.
//! * [`distribution_pathsum`] expands `Π_p (cos θ_p + i sin θ_p X^p)` over all
//!   `2^k` subsets of program elements. It exists as an oracle for the first.
//!
//! Outcome `x` is stored at index `Σ_j x_j 2^j`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::codes::{
    weight_distribution_capped, LinearCode, WeightDistribution, DEFAULT_ENUMERATION_CAP,
};
use crate::error::{Error, Result};
use crate::format;
use crate::gf2::BitVector;
use crate::wht::fwht;
use crate::xprogram::{submatrix_ps, Action, ConstantActionProgram, XProgram};

/// Size limits for the exact backends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Most qubits for which a `2^n` state is materialized.
    pub max_qubits: usize,
    /// Most program elements the path-sum backend will expand.
    pub max_pathsum_elements: usize,
    /// Largest code rank enumerated for exact biases.
    pub max_code_rank: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_qubits: 24,
            max_pathsum_elements: 20,
            max_code_rank: DEFAULT_ENUMERATION_CAP,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Fourier,
    PathSum,
}

/// A normalized probability vector over `F2^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct OutputDistribution {
    n: usize,
    probs: Vec<f64>,
}

impl OutputDistribution {
    /// Normalizes `weights` (length `2^n`) into a distribution.
    pub fn from_weights(n: usize, mut weights: Vec<f64>) -> Result<Self> {
        if weights.len() != 1usize << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                found: weights.len(),
            });
        }
        if weights.iter().any(|&w| w.is_nan() || w < 0.0) {
            return Err(Error::InvalidParameter(
                "negative or NaN probability".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidParameter("distribution has zero mass".into()));
        }
        if total != 1.0 {
            weights.iter_mut().for_each(|w| *w /= total);
        }
        Ok(Self { n, probs: weights })
    }

    pub fn point_mass(n: usize, x: &BitVector) -> Self {
        let mut probs = vec![0.0; 1 << n];
        probs[x.to_index() as usize] = 1.0;
        Self { n, probs }
    }

    pub fn uniform(n: usize) -> Self {
        let size = 1usize << n;
        Self {
            n,
            probs: vec![1.0 / size as f64; size],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, x: &BitVector) -> f64 {
        self.probs[x.to_index() as usize]
    }

    /// `P(X · sᵀ = 0)` by direct summation over the outcomes.
    pub fn bias(&self, s: &BitVector) -> f64 {
        assert_eq!(s.len(), self.n);
        let mask = s.to_index() as usize;
        self.probs
            .iter()
            .enumerate()
            .filter(|(x, _)| (x & mask).count_ones().is_multiple_of(2))
            .map(|(_, p)| p)
            .sum()
    }

    /// The bias in every direction at once: `(1 + Σ_x (−1)^{x·s} p(x)) / 2`.
    pub fn all_biases(&self) -> Vec<f64> {
        let mut w = self.probs.clone();
        fwht(&mut w);
        w.into_iter().map(|c| 0.5 * (1.0 + c)).collect()
    }

    pub fn total_variation(&self, other: &OutputDistribution) -> f64 {
        assert_eq!(self.n, other.n, "distributions on different spaces");
        0.5 * self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    }

    /// Marginal on the listed coordinates, in the listed order.
    pub fn marginal(&self, keep: &[usize]) -> OutputDistribution {
        let mut out = vec![0.0; 1 << keep.len()];
        for (x, &p) in self.probs.iter().enumerate() {
            let y = keep
                .iter()
                .enumerate()
                .fold(0usize, |acc, (i, &j)| acc | (((x >> j) & 1) << i));
            out[y] += p;
        }
        OutputDistribution {
            n: keep.len(),
            probs: out,
        }
    }

    /// Rényi-2 entropy `−log2 Σ_x p(x)²`.
    pub fn collision_entropy(&self) -> f64 {
        let c: f64 = self.probs.iter().map(|p| p * p).sum();
        -c.log2() + 0.0
    }

    /// The same entropy through `E_s[(2·bias(s) − 1)²]`, using a second
    /// transform of the probability vector.
    pub fn collision_entropy_via_bias(&self) -> f64 {
        let mut w = self.probs.clone();
        fwht(&mut w);
        let mean = w.iter().map(|c| c * c).sum::<f64>() / w.len() as f64;
        -mean.log2() + 0.0
    }

    /// Binary export: `u64` little-endian count, then that many `f64` LE.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + 8 * self.probs.len());
        out.extend_from_slice(&(self.probs.len() as u64).to_le_bytes());
        for p in &self.probs {
            out.extend_from_slice(&p.to_le_bytes());
        }
        out
    }

    pub fn from_le_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |m: &str| Error::InvalidParameter(format!("distribution bytes: {m}"));
        let (head, body) = bytes
            .split_at_checked(8)
            .ok_or_else(|| bad("missing count"))?;
        let count = u64::from_le_bytes(head.try_into().expect("8 bytes")) as usize;
        if !count.is_power_of_two() || body.len() != 8 * count {
            return Err(bad("count does not match payload"));
        }
        let probs = body
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        Ok(Self {
            n: count.trailing_zeros() as usize,
            probs,
        })
    }

    /// `bitstring,probability` lines with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bitstring,probability\n");
        for (x, p) in self.probs.iter().enumerate() {
            let bits = BitVector::from_index(x as u64, self.n);
            out.push_str(&format!("{bits},{p:e}\n"));
        }
        out
    }
}

/// A list of samples of equal length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleSet {
    n: usize,
    samples: Vec<BitVector>,
}

impl SampleSet {
    pub fn new(n: usize, samples: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = samples.iter().find(|s| s.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Ok(Self { n, samples })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            samples: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn samples(&self) -> &[BitVector] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Fraction of samples orthogonal to `s` (1 for an empty set).
    pub fn empirical_bias(&self, s: &BitVector) -> f64 {
        if self.samples.is_empty() {
            return 1.0;
        }
        let hits = self.samples.iter().filter(|x| !x.dot(s)).count();
        hits as f64 / self.samples.len() as f64
    }

    pub fn serialize(&self) -> String {
        format::serialize_vectors(&self.samples)
    }

    /// Parses one sample per line; `n` fixes the expected width.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let samples = format::parse_vectors(text, Some(n))?;
        Ok(Self { n, samples })
    }
}

impl From<SampleSet> for Vec<BitVector> {
    fn from(s: SampleSet) -> Self {
        s.samples
    }
}

/// `e^{iπ r/den}`, exact at quarter turns.
fn unit_phase(r: u64, den: u64) -> Complex64 {
    if (2 * r).is_multiple_of(den) {
        match (2 * r / den) % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    } else {
        Complex64::from_polar(1.0, PI * r as f64 / den as f64)
    }
}

/// `(cos θ, sin θ)`, exact at quarter turns.
fn cos_sin(theta: Action) -> (f64, f64) {
    let z = unit_phase(theta.numerator(), theta.denominator());
    (z.re, z.im)
}

fn lcm(a: u64, b: u64) -> Option<u64> {
    let g = {
        let (mut x, mut y) = (a, b);
        while y != 0 {
            (x, y) = (y, x % y);
        }
        x
    };
    (a / g).checked_mul(b)
}

fn check_qubits(n: usize, limits: &Limits) -> Result<()> {
    if n > limits.max_qubits {
        return Err(Error::StateSpaceInfeasible {
            qubits: n,
            cap: limits.max_qubits,
        });
    }
    Ok(())
}

pub fn distribution(
    prog: &XProgram,
    backend: Backend,
    limits: &Limits,
) -> Result<OutputDistribution> {
    match backend {
        Backend::Fourier => distribution_fourier_with(prog, limits),
        Backend::PathSum => distribution_pathsum_with(prog, limits),
    }
}

/// Exact distribution through the Hadamard-frame transform, default limits.
pub fn distribution_fourier(prog: &XProgram) -> Result<OutputDistribution> {
    distribution_fourier_with(prog, &Limits::default())
}

pub fn distribution_fourier_with(prog: &XProgram, limits: &Limits) -> Result<OutputDistribution> {
    let n = prog.n();
    check_qubits(n, limits)?;
    let size = 1usize << n;

    // Group elements by action so each group's phase Σ (−1)^{p·a} is an
    // exact integer from one integer transform.
    let mut groups: Vec<(Action, Vec<u64>)> = Vec::new();
    for e in prog.elements() {
        let idx = e.row.to_index();
        match groups.iter_mut().find(|(a, _)| *a == e.theta) {
            Some((_, rows)) => rows.push(idx),
            None => groups.push((e.theta, vec![idx])),
        }
    }

    let common_den = groups
        .iter()
        .try_fold(1u64, |acc, (a, _)| lcm(acc, a.denominator()))
        .filter(|&d| d < (1 << 40));

    let mut state: Vec<Complex64> = match common_den {
        Some(den) => {
            // Phase numerator over π/den, modulo 2·den.
            let modulus = 2 * den as i128;
            let mut acc = vec![0u64; size];
            let mut hist = vec![0i64; size];
            for (theta, rows) in &groups {
                hist.iter_mut().for_each(|h| *h = 0);
                for &r in rows {
                    hist[r as usize] += 1;
                }
                fwht(&mut hist);
                let scale = theta.numerator() as i128 * (den / theta.denominator()) as i128;
                acc.par_iter_mut().zip(hist.par_iter()).for_each(|(a, &f)| {
                    let r = (scale * f as i128).rem_euclid(modulus);
                    *a = ((*a as i128 + r) % modulus) as u64;
                });
            }
            acc.par_iter().map(|&r| unit_phase(r, den)).collect()
        }
        None => {
            let mut angle = vec![0.0f64; size];
            let mut hist = vec![0i64; size];
            for (theta, rows) in &groups {
                hist.iter_mut().for_each(|h| *h = 0);
                for &r in rows {
                    hist[r as usize] += 1;
                }
                fwht(&mut hist);
                let t = theta.radians();
                angle
                    .par_iter_mut()
                    .zip(hist.par_iter())
                    .for_each(|(a, &f)| *a += t * f as f64);
            }
            angle
                .par_iter()
                .map(|&t| Complex64::from_polar(1.0, t))
                .collect()
        }
    };

    fwht(&mut state);
    let scale = 1.0 / size as f64;
    let weights: Vec<f64> = state.par_iter().map(|z| (z * scale).norm_sqr()).collect();
    OutputDistribution::from_weights(n, weights)
}

/// Exact distribution by summing over all subsets of program elements.
pub fn distribution_pathsum(prog: &XProgram) -> Result<OutputDistribution> {
    distribution_pathsum_with(prog, &Limits::default())
}

pub fn distribution_pathsum_with(prog: &XProgram, limits: &Limits) -> Result<OutputDistribution> {
    let k = prog.len();
    if k > limits.max_pathsum_elements {
        return Err(Error::PathSumInfeasible {
            elements: k,
            cap: limits.max_pathsum_elements,
        });
    }
    let n = prog.n();
    check_qubits(n, limits)?;
    let rows: Vec<u64> = prog.elements().iter().map(|e| e.row.to_index()).collect();
    let factors: Vec<(Complex64, Complex64)> = prog
        .elements()
        .iter()
        .map(|e| {
            let (c, s) = cos_sin(e.theta);
            (Complex64::new(c, 0.0), Complex64::new(0.0, s))
        })
        .collect();
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];

    fn expand(
        i: usize,
        x: u64,
        w: Complex64,
        rows: &[u64],
        factors: &[(Complex64, Complex64)],
        amps: &mut [Complex64],
    ) {
        if w == Complex64::new(0.0, 0.0) {
            return;
        }
        if i == rows.len() {
            amps[x as usize] += w;
            return;
        }
        let (c, s) = factors[i];
        expand(i + 1, x, w * c, rows, factors, amps);
        expand(i + 1, x ^ rows[i], w * s, rows, factors, amps);
    }

    expand(0, 0, Complex64::new(1.0, 0.0), &rows, &factors, &mut amps);
    let weights = amps.iter().map(|a| a.norm_sqr()).collect();
    OutputDistribution::from_weights(n, weights)
}

/// Inverse-CDF sampler over an explicitly stored distribution.
pub struct Sampler {
    n: usize,
    cdf: Vec<f64>,
}

impl Sampler {
    pub fn new(dist: &OutputDistribution) -> Self {
        let mut acc = 0.0;
        let cdf = dist
            .probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Self { n: dist.n, cdf }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> BitVector {
        let total = *self.cdf.last().expect("nonempty distribution");
        let u = rng.gen::<f64>() * total;
        let mut idx = self.cdf.partition_point(|&c| c <= u);
        // land on an outcome that actually has mass
        idx = idx.min(self.cdf.len() - 1);
        while idx > 0 && self.cdf[idx] == self.cdf[idx - 1] && self.cdf[idx] <= u {
            idx -= 1;
        }
        BitVector::from_index(idx as u64, self.n)
    }

    pub fn draw_many<R: Rng + ?Sized>(&self, m: usize, rng: &mut R) -> SampleSet {
        let samples = (0..m).map(|_| self.draw(rng)).collect();
        SampleSet { n: self.n, samples }
    }
}

/// `m` independent samples from the program's exact distribution.
pub fn sample<R: Rng + ?Sized>(prog: &XProgram, m: usize, rng: &mut R) -> Result<SampleSet> {
    sample_with(prog, m, rng, &Limits::default())
}

pub fn sample_with<R: Rng + ?Sized>(
    prog: &XProgram,
    m: usize,
    rng: &mut R,
    limits: &Limits,
) -> Result<SampleSet> {
    let dist = distribution_fourier_with(prog, limits)?;
    if m == 0 {
        return Ok(SampleSet::empty(prog.n()));
    }
    Ok(Sampler::new(&dist).draw_many(m, rng))
}

/// `cos²(θ · m)`, exact when `θ·m` is a multiple of π/2.
fn cos_squared_multiple(theta: Action, m: i64) -> f64 {
    let den = theta.denominator() as i128;
    let t = (theta.numerator() as i128 * m as i128).rem_euclid(den);
    if t == 0 {
        1.0
    } else if 2 * t == den {
        0.0
    } else {
        (PI * t as f64 / den as f64).cos().powi(2)
    }
}

/// `E_{c∼C}[cos²(θ(n_s − 2·wt(c)))]` for a code of length `n_s`.
pub fn bias_from_weights(dist: &WeightDistribution, theta: Action) -> f64 {
    let ns = dist.length() as i64;
    let total = dist.total() as f64;
    dist.counts()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(w, &c)| c as f64 * cos_squared_multiple(theta, ns - 2 * w as i64))
        .sum::<f64>()
        / total
}

/// Exact `P(X · sᵀ = 0)` from the weight distribution of the code spanned by
/// the columns of `P_s`. No `2^n` state is formed.
pub fn exact_bias(prog: &ConstantActionProgram, s: &BitVector) -> Result<f64> {
    exact_bias_with(prog, s, &Limits::default())
}

pub fn exact_bias_with(
    prog: &ConstantActionProgram,
    s: &BitVector,
    limits: &Limits,
) -> Result<f64> {
    if s.len() != prog.n() {
        return Err(Error::DimensionMismatch {
            expected: prog.n(),
            found: s.len(),
        });
    }
    let ps = submatrix_ps(&prog.matrix, s);
    let code = LinearCode::from_spanning(&ps);
    let dist = weight_distribution_capped(&code, limits.max_code_rank)?;
    Ok(bias_from_weights(&dist, prog.theta))
}

pub fn collision_entropy(dist: &OutputDistribution) -> f64 {
    dist.collision_entropy()
}

pub fn collision_entropy_via_bias(dist: &OutputDistribution) -> f64 {
    dist.collision_entropy_via_bias()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::BitMatrix;
    use crate::xprogram::Element;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn seven_rows() -> BitMatrix {
        BitMatrix::from_strs(&["1000", "1100", "0110", "1011", "0101", "0010", "0001"])
    }

    fn elem(theta: Action, row: &str) -> Element {
        Element {
            theta,
            row: row.parse().unwrap(),
        }
    }

    #[test]
    fn empty_program_is_point_mass() {
        let prog = XProgram::new(2, vec![]).unwrap();
        let zero = BitVector::zeros(2);
        assert_eq!(
            distribution_fourier(&prog).unwrap(),
            OutputDistribution::point_mass(2, &zero)
        );
        assert_eq!(
            distribution_pathsum(&prog).unwrap(),
            OutputDistribution::point_mass(2, &zero)
        );
    }

    #[test]
    fn half_pi_single_element() {
        let prog = XProgram::new(2, vec![elem(Action::new(1, 2).unwrap(), "11")]).unwrap();
        let d = distribution_fourier(&prog).unwrap();
        assert_eq!(d.prob(&"11".parse().unwrap()), 1.0);
    }

    #[test]
    fn single_element_two_paths() {
        let theta = Action::new(1, 5).unwrap();
        let prog = XProgram::new(3, vec![elem(theta, "101")]).unwrap();
        let d = distribution_pathsum(&prog).unwrap();
        let x = theta.radians();
        assert!((d.prob(&"101".parse().unwrap()) - x.sin().powi(2)).abs() < 1e-15);
        assert!((d.prob(&"000".parse().unwrap()) - x.cos().powi(2)).abs() < 1e-15);
    }

    #[test]
    fn seven_row_distribution_frozen() {
        // Reference values from a dense matrix-exponential computation.
        let prog = ConstantActionProgram::new(seven_rows(), Action::PI_OVER_8).to_xprogram();
        let d = distribution_fourier(&prog).unwrap();
        let low = 0.009152913087920383;
        let mid = 0.053347086912079594;
        let expect = [
            ("0000", 0.48012378220871654),
            ("0001", low),
            ("0010", low),
            ("0011", mid),
            ("0100", mid),
            ("0101", low),
            ("0110", low),
            ("0111", mid),
            ("1000", low),
            ("1001", mid),
            ("1010", mid),
            ("1011", low),
            ("1100", low),
            ("1101", mid),
            ("1110", mid),
            ("1111", 0.08237621779128347),
        ];
        for (bits, p) in expect {
            // reference strings list qubit 1 first
            let v: BitVector = bits.parse().unwrap();
            assert!((d.prob(&v) - p).abs() < 1e-12, "{bits}");
        }
        let s: BitVector = "1011".parse().unwrap();
        assert!((d.bias(&s) - 0.8535533905932737).abs() < 1e-12);
    }

    #[test]
    fn caps() {
        let prog = XProgram::new(25, vec![]).unwrap();
        assert!(matches!(
            distribution_fourier(&prog),
            Err(Error::StateSpaceInfeasible {
                qubits: 25,
                cap: 24
            })
        ));
        let elems = (0..21).map(|_| elem(Action::PI_OVER_8, "1")).collect();
        let prog = XProgram::new(1, elems).unwrap();
        assert!(matches!(
            distribution_pathsum(&prog),
            Err(Error::PathSumInfeasible {
                elements: 21,
                cap: 20
            })
        ));
    }

    #[test]
    fn sampling() {
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        let pi = ConstantActionProgram::new(seven_rows(), Action::new(1, 1).unwrap()).to_xprogram();
        let s = sample(&pi, 50, &mut rng).unwrap();
        assert!(s.samples().iter().all(BitVector::is_zero));
        assert!(sample(&pi, 0, &mut rng).unwrap().is_empty());

        let prog = ConstantActionProgram::new(seven_rows(), Action::PI_OVER_8).to_xprogram();
        let set = sample(&prog, 10_000, &mut ChaCha20Rng::seed_from_u64(1)).unwrap();
        let frac = set.empirical_bias(&"1011".parse().unwrap());
        assert!((frac - 0.8536).abs() < 0.02, "{frac}");
        let again = sample(&prog, 10_000, &mut ChaCha20Rng::seed_from_u64(1)).unwrap();
        assert_eq!(set, again);
    }

    #[test]
    fn sampler_never_returns_zero_mass_outcome() {
        let d = OutputDistribution::from_weights(2, vec![0.0, 0.5, 0.0, 0.5]).unwrap();
        let sampler = Sampler::new(&d);
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let x = sampler.draw(&mut rng);
            assert!(d.prob(&x) > 0.0);
        }
    }

    #[test]
    fn exact_bias_examples() {
        let prog = ConstantActionProgram::new(seven_rows(), Action::PI_OVER_8);
        assert_eq!(exact_bias(&prog, &BitVector::zeros(4)).unwrap(), 1.0);
        let b = exact_bias(&prog, &"1011".parse().unwrap()).unwrap();
        assert!((b - (PI / 8.0).cos().powi(2)).abs() < 1e-15);
    }

    #[test]
    fn entropy_examples() {
        let point = OutputDistribution::point_mass(3, &BitVector::zeros(3));
        assert_eq!(point.collision_entropy(), 0.0);
        assert_eq!(point.collision_entropy_via_bias(), 0.0);
        let u = OutputDistribution::uniform(5);
        assert!((u.collision_entropy() - 5.0).abs() < 1e-12);
        assert!((u.collision_entropy_via_bias() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn export_formats() {
        let prog = ConstantActionProgram::new(seven_rows(), Action::PI_OVER_8).to_xprogram();
        let d = distribution_fourier(&prog).unwrap();
        let bytes = d.to_le_bytes();
        assert_eq!(bytes.len(), 8 + 16 * 8);
        assert_eq!(&bytes[..8], &16u64.to_le_bytes());
        assert_eq!(OutputDistribution::from_le_bytes(&bytes).unwrap(), d);
        let csv = d.to_csv();
        assert!(csv.starts_with("bitstring,probability\n0000,"));
        assert_eq!(csv.lines().count(), 17);
    }

    #[test]
    fn mixed_actions_use_exact_common_denominator() {
        let prog = XProgram::new(
            2,
            vec![
                elem(Action::new(1, 4).unwrap(), "10"),
                elem(Action::new(1, 4).unwrap(), "10"),
                elem(Action::new(1, 3).unwrap(), "11"),
            ],
        )
        .unwrap();
        // two π/4 terms on the same row compose to π/2
        let a = distribution_fourier(&prog).unwrap();
        let b = distribution_pathsum(&prog).unwrap();
        assert!(a.total_variation(&b) < 1e-14);
    }
}
