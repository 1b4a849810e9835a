//! X-programs: lists of `(θ, p)` pairs, each applying `exp(iθ ⊗_{j: p_j=1} X_j)`
//! to `|0…0⟩`. All terms commute, so element order never matters.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::format::MatrixFile;
use crate::gf2::{BitMatrix, BitVector};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// An action value `θ = (numerator / denominator) · π`, kept in lowest terms
/// and reduced into `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Action {
    num: u64,
    den: u64,
}

impl Action {
    /// `π/8`, the action of every challenge program.
    pub const PI_OVER_8: Action = Action { num: 1, den: 8 };
    pub const ZERO: Action = Action { num: 0, den: 1 };

    pub fn new(numerator: i64, denominator: i64) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::InvalidParameter("action denominator is zero".into()));
        }
        let (n, d) = if denominator < 0 {
            (-(numerator as i128), -(denominator as i128))
        } else {
            (numerator as i128, denominator as i128)
        };
        let reduced = n.rem_euclid(2 * d) as u64;
        let d = d as u64;
        let g = gcd(reduced, d).max(1);
        Ok(Self {
            num: reduced / g,
            den: d / g,
        })
    }

    /// Multiple of π: for `θ = a/b · π` returns `(a, b)` with `0 ≤ a < 2b`.
    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn radians(&self) -> f64 {
        std::f64::consts::PI * self.num as f64 / self.den as f64
    }

    pub fn neg(&self) -> Action {
        Action::new(-(self.num as i64), self.den as i64).expect("nonzero denominator")
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Action {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("malformed action {s:?}, expected num/den"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        Action::new(n, d)
    }
}

/// One program element `(θ_p, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub theta: Action,
    pub row: BitVector,
}

/// A general X-program on `n` qubits. Duplicate rows are kept as given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XProgram {
    n: usize,
    elements: Vec<Element>,
}

impl XProgram {
    pub fn new(n: usize, elements: Vec<Element>) -> Result<Self> {
        if let Some(e) = elements.iter().find(|e| e.row.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: e.row.len(),
            });
        }
        Ok(Self { n, elements })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The rows as a `k × n` matrix, ignoring actions.
    pub fn matrix(&self) -> BitMatrix {
        let rows = self.elements.iter().map(|e| e.row.clone()).collect();
        BitMatrix::from_rows(self.n, rows).expect("rows validated on construction")
    }

    /// `Some(θ)` when every element carries the same action.
    pub fn constant_action(&self) -> Option<Action> {
        let first = self.elements.first()?.theta;
        self.elements
            .iter()
            .all(|e| e.theta == first)
            .then_some(first)
    }
}

/// An X-program whose elements all share one action, stored as a matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantActionProgram {
    pub matrix: BitMatrix,
    pub theta: Action,
}

impl ConstantActionProgram {
    pub fn new(matrix: BitMatrix, theta: Action) -> Self {
        Self { matrix, theta }
    }

    pub fn n(&self) -> usize {
        self.matrix.cols()
    }

    pub fn to_xprogram(&self) -> XProgram {
        let elements = self
            .matrix
            .rows()
            .iter()
            .map(|r| Element {
                theta: self.theta,
                row: r.clone(),
            })
            .collect();
        XProgram {
            n: self.matrix.cols(),
            elements,
        }
    }

    /// Reads an X-program file; the `theta` header is mandatory.
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_file(&MatrixFile::parse(text)?)
    }

    pub fn from_file(file: &MatrixFile) -> Result<Self> {
        let theta = file
            .header("theta")
            .ok_or_else(|| Error::parse(0, "missing mandatory theta header"))?
            .parse()?;
        Ok(Self {
            matrix: file.matrix.clone(),
            theta,
        })
    }

    pub fn to_file(&self) -> MatrixFile {
        MatrixFile::new(self.matrix.clone()).with_header("theta", self.theta)
    }

    pub fn serialize(&self) -> String {
        self.to_file().serialize()
    }
}

/// `P_s`: the rows of `p` with `row · sᵀ = 1`, in their original order.
pub fn submatrix_ps(p: &BitMatrix, s: &BitVector) -> BitMatrix {
    split_by_direction(p, s).0
}

/// `(P_s, rest)`: rows not orthogonal to `s`, and rows orthogonal to it.
pub fn split_by_direction(p: &BitMatrix, s: &BitVector) -> (BitMatrix, BitMatrix) {
    assert_eq!(s.len(), p.cols(), "direction length mismatch");
    let (hit, miss): (Vec<usize>, Vec<usize>) = (0..p.row_count()).partition(|&i| p.row(i).dot(s));
    (p.select_rows(&hit), p.select_rows(&miss))
}

/// The exactly solvable action values of a constant-action program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecialCase {
    /// θ a multiple of π: the sample is always zero.
    AlwaysZero,
    /// θ an odd multiple of π/2: the sample is always the XOR of all rows.
    AlwaysRowSum(BitVector),
    /// θ an odd multiple of π/4: Clifford, classically simulable.
    Clifford,
    Generic,
}

pub fn classify_special(prog: &ConstantActionProgram) -> SpecialCase {
    match prog.theta.denominator() {
        1 => SpecialCase::AlwaysZero,
        2 => SpecialCase::AlwaysRowSum(prog.matrix.row_sum()),
        4 => SpecialCase::Clifford,
        _ => SpecialCase::Generic,
    }
}

/// Block-diagonal concatenation: runs both programs side by side on disjoint
/// qubits, so the output is the product of the two distributions.
pub fn concat_diagonal(
    a: &ConstantActionProgram,
    b: &ConstantActionProgram,
) -> Result<ConstantActionProgram> {
    if a.theta != b.theta {
        return Err(Error::ActionMismatch(
            a.theta.to_string(),
            b.theta.to_string(),
        ));
    }
    Ok(ConstantActionProgram {
        matrix: a.matrix.block_diag(&b.matrix),
        theta: a.theta,
    })
}
