//! The challenge–response game: the verifier hides a quadratic-residue code
//! inside a larger published matrix, the prover returns samples, and the
//! verifier tests for a strong bias in the hidden direction.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

use crate::cheat::cheat_sample;
use crate::codes::qr_code;
use crate::error::{Error, Result};
use crate::format::MatrixFile;
use crate::gf2::{random_permutation, BitMatrix, BitVector};
use crate::simulator::{sample_with, Limits, SampleSet};
use crate::xprogram::{Action, ConstantActionProgram};

/// Widest challenge the honest prover will simulate.
pub const HONEST_QUBIT_CAP: usize = 24;

/// The published half of a challenge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Challenge {
    pub matrix: BitMatrix,
    pub theta: Action,
    pub q: u64,
    pub challenge_id: String,
}

impl Challenge {
    pub fn n(&self) -> usize {
        self.matrix.cols()
    }

    pub fn program(&self) -> ConstantActionProgram {
        ConstantActionProgram::new(self.matrix.clone(), self.theta)
    }

    pub fn serialize(&self) -> String {
        MatrixFile::new(self.matrix.clone())
            .with_header("theta", self.theta)
            .with_header("q", self.q)
            .with_header("challenge_id", &self.challenge_id)
            .serialize()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file = MatrixFile::parse(text)?;
        let field = |key: &str| {
            file.header(key)
                .ok_or_else(|| Error::parse(0, format!("challenge is missing the {key} header")))
        };
        let theta: Action = field("theta")?.parse()?;
        let q = field("q")?
            .parse()
            .map_err(|_| Error::parse(0, "q header is not an integer"))?;
        let challenge_id = field("challenge_id")?.to_string();
        Ok(Self {
            matrix: file.matrix,
            theta,
            q,
            challenge_id,
        })
    }
}

/// The verifier's private half.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Secret {
    pub s: BitVector,
    /// Indices of obfuscation rows in the published matrix, ascending.
    pub obf_rows: Vec<usize>,
    pub seed: u64,
    pub q: u64,
}

impl Secret {
    pub fn serialize(&self) -> String {
        let obf: Vec<String> = self.obf_rows.iter().map(usize::to_string).collect();
        format!(
            "# q={}\n# seed={:016x}\n{}\n{}\n",
            self.q,
            self.seed,
            self.s,
            obf.join(",")
        )
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut q = None;
        let mut seed = None;
        let mut body = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            if let Some(rest) = line.strip_prefix('#') {
                let (k, v) = rest
                    .trim()
                    .split_once('=')
                    .ok_or_else(|| Error::parse(lineno, "malformed header"))?;
                match k.trim() {
                    "q" => {
                        q = Some(
                            v.trim()
                                .parse()
                                .map_err(|_| Error::parse(lineno, "bad q"))?,
                        );
                    }
                    "seed" => {
                        seed = Some(
                            u64::from_str_radix(v.trim(), 16)
                                .map_err(|_| Error::parse(lineno, "seed is not hexadecimal"))?,
                        );
                    }
                    _ => {}
                }
            } else {
                body.push((lineno, line));
            }
        }
        let [(sl, s_line), (ol, obf_line)] = body[..] else {
            return Err(Error::parse(
                0,
                "secret needs exactly one direction line and one index line",
            ));
        };
        let s = s_line
            .parse()
            .map_err(|_| Error::parse(sl, "direction must be a 0/1 string"))?;
        let obf_rows = if obf_line.trim().is_empty() {
            Vec::new()
        } else {
            obf_line
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| Error::parse(ol, "bad row index"))
                })
                .collect::<Result<Vec<usize>>>()?
        };
        Ok(Self {
            s,
            obf_rows,
            seed: seed.ok_or_else(|| Error::parse(0, "secret is missing the seed header"))?,
            q: q.ok_or_else(|| Error::parse(0, "secret is missing the q header"))?,
        })
    }

    /// Rows outside the obfuscation set are exactly the rows not orthogonal
    /// to `s`.
    pub fn is_consistent_with(&self, ch: &Challenge) -> bool {
        if self.s.len() != ch.n() {
            return false;
        }
        let mut obf = self.obf_rows.iter().peekable();
        ch.matrix.rows().iter().enumerate().all(|(i, row)| {
            let is_obf = obf.next_if_eq(&&i).is_some();
            row.dot(&self.s) != is_obf
        }) && obf.next().is_none()
    }
}

#[derive(Clone, Debug)]
pub struct BuildOptions {
    /// Number of obfuscation rows; `None` means `q`.
    pub n_obf: Option<usize>,
    /// Sort the published rows lexicographically.
    pub sort_rows: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            n_obf: None,
            sort_rows: true,
        }
    }
}

pub fn build_challenge(q: u64, n_obf: usize, seed: u64) -> Result<(Challenge, Secret)> {
    build_challenge_with(
        q,
        seed,
        &BuildOptions {
            n_obf: Some(n_obf),
            ..BuildOptions::default()
        },
    )
}

pub fn build_challenge_with(q: u64, seed: u64, opts: &BuildOptions) -> Result<(Challenge, Secret)> {
    let n_obf = opts.n_obf.unwrap_or(q as usize);
    if n_obf == 0 {
        return Err(Error::InvalidParameter(
            "at least one obfuscation row is required".into(),
        ));
    }
    let code = qr_code(q)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);

    let qr_rows = q as usize;
    let width = code.rank() + 1;
    let mut m = code.generator().append_column(&BitVector::ones(qr_rows));
    for _ in 0..n_obf {
        let row = loop {
            let r = BitVector::random(width - 1, &mut rng).push(false);
            if !r.is_zero() {
                break r;
            }
        };
        m.push_row(row);
    }

    let perm = random_permutation(m.row_count(), &mut rng);
    let m = m.permute_rows(&perm);
    let mut is_obf: Vec<bool> = perm.iter().map(|&old| old >= qr_rows).collect();

    let ech = m.col_echelon_reduce();
    let mut s = ech.map_direction(&BitVector::unit(width, width - 1));
    let mut matrix = ech.reduced;

    if opts.sort_rows {
        let order = matrix.sort_rows();
        is_obf = order.iter().map(|&old| is_obf[old]).collect();
        // Sorting reorders rows, so reduce again to restore the canonical form.
        let ech = matrix.col_echelon_reduce();
        s = ech.map_direction(&s);
        matrix = ech.reduced;
    }

    let obf_rows = (0..is_obf.len()).filter(|&i| is_obf[i]).collect();
    let challenge_id = challenge_id(&matrix);
    Ok((
        Challenge {
            matrix,
            theta: Action::PI_OVER_8,
            q,
            challenge_id,
        },
        Secret {
            s,
            obf_rows,
            seed,
            q,
        },
    ))
}

/// Digest of the matrix body only, so the id reveals nothing about the seed.
fn challenge_id(m: &BitMatrix) -> String {
    let digest = Sha256::digest(MatrixFile::new(m.clone()).serialize().as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProverTag {
    Honest,
    Cheat,
    External,
}

impl fmt::Display for ProverTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProverTag::Honest => "honest",
            ProverTag::Cheat => "cheat",
            ProverTag::External => "external",
        })
    }
}

impl FromStr for ProverTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "honest" => Ok(ProverTag::Honest),
            "cheat" => Ok(ProverTag::Cheat),
            "external" => Ok(ProverTag::External),
            other => Err(Error::InvalidParameter(format!(
                "unknown prover tag {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTranscript {
    pub samples: SampleSet,
    pub prover_tag: ProverTag,
}

impl ProofTranscript {
    pub fn serialize(&self) -> String {
        self.samples.serialize()
    }

    /// Reads a transcript file for a challenge with `n` columns.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let samples =
            SampleSet::parse(text, n).map_err(|e| Error::MalformedTranscript(e.to_string()))?;
        Ok(Self {
            samples,
            prover_tag: ProverTag::External,
        })
    }
}

/// Runs the published matrix as a π/8 program on the exact simulator.
pub fn honest_prove<R: Rng + ?Sized>(
    ch: &Challenge,
    m: usize,
    rng: &mut R,
) -> Result<ProofTranscript> {
    if ch.n() > HONEST_QUBIT_CAP {
        return Err(Error::HonestProvingInfeasible {
            qubits: ch.n(),
            cap: HONEST_QUBIT_CAP,
        });
    }
    let limits = Limits {
        max_qubits: HONEST_QUBIT_CAP,
        ..Limits::default()
    };
    let samples = sample_with(&ch.program().to_xprogram(), m, rng, &limits)?;
    Ok(ProofTranscript {
        samples,
        prover_tag: ProverTag::Honest,
    })
}

/// Classical second-derivative sampler; works at any size.
pub fn cheat_prove<R: Rng + ?Sized>(ch: &Challenge, m: usize, rng: &mut R) -> ProofTranscript {
    ProofTranscript {
        samples: cheat_sample(&ch.matrix, m, rng),
        prover_tag: ProverTag::Cheat,
    }
}

/// How repeated samples enter the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DedupPolicy {
    /// Repeats are excluded from the sample floor but every nonzero sample
    /// counts toward the bias. Replaying one vector cannot reach the floor,
    /// and an honest prover's natural collisions do not skew the statistic.
    FloorOnly,
    /// Keep one copy of each distinct nonzero sample for both the floor and
    /// the bias.
    KeepOne,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyParams {
    pub threshold: f64,
    pub m_min: usize,
    pub dedup: DedupPolicy,
}

/// Midpoint threshold between the quantum (cos²(π/8)) and classical (3/4)
/// biases, and the Hoeffding sample floor for error probability `delta`.
pub fn default_params(delta: f64) -> Result<VerifyParams> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "confidence must lie in (0, 1), got {delta}"
        )));
    }
    let quantum = (std::f64::consts::PI / 8.0).cos().powi(2);
    let threshold = (quantum + 0.75) / 2.0;
    let gap = threshold - 0.75;
    let m_min = ((1.0 / delta).ln() / (2.0 * gap * gap)).ceil().max(1.0) as usize;
    Ok(VerifyParams {
        threshold,
        m_min,
        dedup: DedupPolicy::FloorOnly,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Accept,
    Reject,
    Inconclusive,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Accept => "accept",
            Decision::Reject => "reject",
            Decision::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub m_raw: usize,
    /// Samples left after dropping all-zero ones.
    pub m_nonzero: usize,
    /// Distinct nonzero samples; this is what the floor is compared with.
    pub m_filtered: usize,
    /// Fraction of counted samples orthogonal to the secret; 0 when none
    /// survive the filter.
    pub bias_observed: f64,
    pub threshold: f64,
    pub m_min: usize,
    pub decision: Decision,
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "decision={} m_raw={} m_nonzero={} m_filtered={} bias={:.6} threshold={:.6} m_min={}",
            self.decision,
            self.m_raw,
            self.m_nonzero,
            self.m_filtered,
            self.bias_observed,
            self.threshold,
            self.m_min
        )
    }
}

/// Drops all-zero samples, then repeated samples after their first
/// occurrence.
pub fn filter_samples(samples: &[BitVector]) -> Vec<&BitVector> {
    let mut seen = std::collections::HashSet::new();
    samples
        .iter()
        .filter(|x| !x.is_zero() && seen.insert(*x))
        .collect()
}

pub fn verify(
    ch: &Challenge,
    secret: &Secret,
    transcript: &ProofTranscript,
    params: &VerifyParams,
) -> Result<VerifyReport> {
    if secret.s.len() != ch.n() {
        return Err(Error::DimensionMismatch {
            expected: ch.n(),
            found: secret.s.len(),
        });
    }
    let samples = transcript.samples.samples();
    if let Some(bad) = samples.iter().find(|x| x.len() != ch.n()) {
        return Err(Error::MalformedTranscript(format!(
            "sample has length {}, challenge has {} columns",
            bad.len(),
            ch.n()
        )));
    }
    let distinct = filter_samples(samples);
    let nonzero: Vec<&BitVector> = samples.iter().filter(|x| !x.is_zero()).collect();
    let counted = match params.dedup {
        DedupPolicy::FloorOnly => &nonzero,
        DedupPolicy::KeepOne => &distinct,
    };
    let orthogonal = counted.iter().filter(|x| !x.dot(&secret.s)).count();
    let bias_observed = if counted.is_empty() {
        0.0
    } else {
        orthogonal as f64 / counted.len() as f64
    };
    let decision = if distinct.len() < params.m_min {
        Decision::Inconclusive
    } else if bias_observed >= params.threshold {
        Decision::Accept
    } else {
        Decision::Reject
    };
    Ok(VerifyReport {
        m_raw: samples.len(),
        m_nonzero: nonzero.len(),
        m_filtered: distinct.len(),
        bias_observed,
        threshold: params.threshold,
        m_min: params.m_min,
        decision,
    })
}
