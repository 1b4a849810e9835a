//! Equivalent architectures for X-programs.
//!
//! * Z-networks: CNOT, X and `exp(iθZ)` gates between a Hadamard-basis
//!   input `|+…+⟩` and a Hadamard-basis measurement.
//! * Graph programs: a graph state measured vertex by vertex after a fixed
//!   single-qubit rotation, followed by classical post-processing.
//!
//! Each translation comes with a [`PostProcess`] so that distributions match
//! exactly, and small dense simulators certify the equivalence.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::simulator::{OutputDistribution, SampleSet};
use crate::wht::fwht;
use crate::xprogram::{Action, Element, XProgram};

/// Largest register the dense simulators here will allocate.
pub const STATEVECTOR_QUBIT_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZGate {
    Cnot {
        control: usize,
        target: usize,
    },
    X(usize),
    /// `exp(iθZ)` on one qubit.
    Rz {
        theta: Action,
        qubit: usize,
    },
}

impl fmt::Display for ZGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZGate::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
            ZGate::X(q) => write!(f, "X {q}"),
            ZGate::Rz { theta, qubit } => write!(f, "RZ {theta} {qubit}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZNetwork {
    n: usize,
    gates: Vec<ZGate>,
}

impl ZNetwork {
    pub fn new(n: usize, gates: Vec<ZGate>) -> Result<Self> {
        for g in &gates {
            let ok = match *g {
                ZGate::Cnot { control, target } => control < n && target < n && control != target,
                ZGate::X(q) => q < n,
                ZGate::Rz { qubit, .. } => qubit < n,
            };
            if !ok {
                return Err(Error::InvalidParameter(format!(
                    "gate `{g}` is invalid on {n} qubits"
                )));
            }
        }
        Ok(Self { n, gates })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[ZGate] {
        &self.gates
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("# n={}\n", self.n);
        for g in &self.gates {
            out.push_str(&format!("{g}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut n = None;
        let mut gates = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(v) = rest.trim().strip_prefix("n=") {
                    n = Some(
                        v.trim()
                            .parse()
                            .map_err(|_| Error::parse(lineno, "bad qubit count"))?,
                    );
                }
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let index = |t: &str| -> Result<usize> {
                t.parse()
                    .map_err(|_| Error::parse(lineno, format!("bad qubit index {t:?}")))
            };
            let gate = match toks[..] {
                ["CNOT", c, t] => ZGate::Cnot {
                    control: index(c)?,
                    target: index(t)?,
                },
                ["X", q] => ZGate::X(index(q)?),
                ["RZ", theta, q] => ZGate::Rz {
                    theta: theta
                        .parse()
                        .map_err(|e: Error| Error::parse(lineno, e.to_string()))?,
                    qubit: index(q)?,
                },
                [] => continue,
                _ => return Err(Error::parse(lineno, format!("unknown gate line {line:?}"))),
            };
            gates.push(gate);
        }
        let n = n.ok_or_else(|| Error::parse(0, "network is missing the n header"))?;
        Self::new(n, gates).map_err(|e| Error::parse(0, e.to_string()))
    }
}

/// A GF(2)-linear map on measured bit strings followed by a projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PostProcess {
    /// Square map applied as `x ↦ x · map`.
    pub map: BitMatrix,
    /// Coordinates retained after the map, in output order.
    pub keep: Vec<usize>,
}

impl PostProcess {
    pub fn identity(n: usize) -> Self {
        Self {
            map: BitMatrix::identity(n),
            keep: (0..n).collect(),
        }
    }

    pub fn input_width(&self) -> usize {
        self.map.row_count()
    }

    pub fn output_width(&self) -> usize {
        self.keep.len()
    }

    pub fn apply(&self, x: &BitVector) -> BitVector {
        let y = self.map.left_mul(x);
        let bits: Vec<bool> = self.keep.iter().map(|&j| y.get(j)).collect();
        BitVector::from_bools(&bits)
    }

    /// Distribution of the post-processed output.
    pub fn push_forward(&self, dist: &OutputDistribution) -> Result<OutputDistribution> {
        if dist.n() != self.input_width() {
            return Err(Error::DimensionMismatch {
                expected: self.input_width(),
                found: dist.n(),
            });
        }
        let mut out = vec![0.0; 1 << self.output_width()];
        for (x, &p) in dist.probs().iter().enumerate() {
            if p != 0.0 {
                let y = self.apply(&BitVector::from_index(x as u64, dist.n()));
                out[y.to_index() as usize] += p;
            }
        }
        OutputDistribution::from_weights(self.output_width(), out)
    }
}

pub fn apply_postprocess(pp: &PostProcess, samples: &SampleSet) -> Result<SampleSet> {
    if samples.n() != pp.input_width() {
        return Err(Error::DimensionMismatch {
            expected: pp.input_width(),
            found: samples.n(),
        });
    }
    let out = samples.samples().iter().map(|x| pp.apply(x)).collect();
    SampleSet::new(pp.output_width(), out)
}

/// One phase gadget per element: CNOTs from the rest of the support onto
/// its lowest qubit, the rotation there, then the same CNOTs again.
pub fn xprogram_to_znetwork(prog: &XProgram) -> ZNetwork {
    let mut gates = Vec::new();
    for e in prog.elements() {
        let Some(pivot) = e.row.first_one() else {
            continue; // global phase
        };
        let cascade: Vec<ZGate> = e
            .row
            .iter_ones()
            .filter(|&j| j != pivot)
            .map(|j| ZGate::Cnot {
                control: j,
                target: pivot,
            })
            .collect();
        gates.extend_from_slice(&cascade);
        gates.push(ZGate::Rz {
            theta: e.theta,
            qubit: pivot,
        });
        gates.extend(cascade.into_iter().rev());
    }
    ZNetwork { n: prog.n(), gates }
}

/// Wire `j` currently carries `rows[j] · z ⊕ offset[j]`, where `z` is the
/// computational-basis input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFrame {
    pub rows: BitMatrix,
    pub offset: BitVector,
}

impl AffineFrame {
    pub fn new(n: usize) -> Self {
        Self {
            rows: BitMatrix::identity(n),
            offset: BitVector::zeros(n),
        }
    }

    /// Advances past one gate; a rotation yields the program element it is
    /// equivalent to.
    pub fn step(&mut self, gate: &ZGate) -> Option<Element> {
        match *gate {
            ZGate::Cnot { control, target } => {
                self.rows.xor_row_into(control, target);
                if self.offset.get(control) {
                    self.offset.flip(target);
                }
                None
            }
            // A bit flip only shifts the frame; its effect on the output is a
            // sign, which measurement cannot see.
            ZGate::X(q) => {
                self.offset.flip(q);
                None
            }
            ZGate::Rz { theta, qubit } => {
                let theta = if self.offset.get(qubit) {
                    theta.neg()
                } else {
                    theta
                };
                Some(Element {
                    theta,
                    row: self.rows.row(qubit).clone(),
                })
            }
        }
    }
}

/// Sweeps the network keeping the affine frame of every wire; each rotation
/// becomes an element on the current frame row. Samples `x` of the program
/// map to network outcomes `x · A^{-1}`, with `A` the final frame.
pub fn znetwork_to_xprogram(net: &ZNetwork) -> (XProgram, PostProcess) {
    let mut frame = AffineFrame::new(net.n);
    let elements: Vec<Element> = net.gates.iter().filter_map(|g| frame.step(g)).collect();
    let map = frame
        .rows
        .inverse()
        .expect("frame built from CNOTs is invertible");
    let prog = XProgram::new(net.n, elements).expect("rows have network width");
    (
        prog,
        PostProcess {
            map,
            keep: (0..net.n).collect(),
        },
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Label {
    Hadamard,
    /// `exp(iθX)` before a computational-basis measurement.
    XRotation(Action),
}

/// A graph state on `vertices` qubits, the first `primal` of which are the
/// distinguished primal vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphProgram {
    pub vertices: usize,
    pub primal: usize,
    pub edges: Vec<(usize, usize)>,
    pub labels: Vec<Label>,
}

impl GraphProgram {
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    pub fn validate(&self) -> Result<()> {
        if self.labels.len() != self.vertices || self.primal > self.vertices {
            return Err(Error::InvalidParameter(
                "label count must equal the vertex count".into(),
            ));
        }
        if let Some(&(u, v)) = self
            .edges
            .iter()
            .find(|&&(u, v)| u == v || u >= self.vertices || v >= self.vertices)
        {
            return Err(Error::InvalidParameter(format!("invalid edge {u}-{v}")));
        }
        Ok(())
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("vertices {}\nprimal {}\n", self.vertices, self.primal);
        for (u, v) in &self.edges {
            out.push_str(&format!("edge {u} {v}\n"));
        }
        for (v, l) in self.labels.iter().enumerate() {
            match l {
                Label::Hadamard => out.push_str(&format!("label {v} H\n")),
                Label::XRotation(t) => out.push_str(&format!("label {v} RX {t}\n")),
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut vertices = None;
        let mut primal = None;
        let mut edges = Vec::new();
        let mut labels: Vec<(usize, Label)> = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let num = |t: &str| -> Result<usize> {
                t.parse()
                    .map_err(|_| Error::parse(lineno, format!("bad integer {t:?}")))
            };
            match line.split_whitespace().collect::<Vec<_>>()[..] {
                ["vertices", v] => vertices = Some(num(v)?),
                ["primal", p] => primal = Some(num(p)?),
                ["edge", u, v] => edges.push((num(u)?, num(v)?)),
                ["label", v, "H"] => labels.push((num(v)?, Label::Hadamard)),
                ["label", v, "RX", t] => {
                    let t = t
                        .parse()
                        .map_err(|e: Error| Error::parse(lineno, e.to_string()))?;
                    labels.push((num(v)?, Label::XRotation(t)));
                }
                [] => {}
                _ => return Err(Error::parse(lineno, format!("unrecognised line {line:?}"))),
            }
        }
        let vertices = vertices.ok_or_else(|| Error::parse(0, "missing vertices line"))?;
        let mut table = vec![None; vertices];
        for (v, l) in labels {
            let slot = table
                .get_mut(v)
                .ok_or_else(|| Error::parse(0, format!("label for unknown vertex {v}")))?;
            *slot = Some(l);
        }
        let labels = table
            .into_iter()
            .enumerate()
            .map(|(v, l)| l.ok_or_else(|| Error::parse(0, format!("vertex {v} has no label"))))
            .collect::<Result<Vec<_>>>()?;
        let gp = Self {
            vertices,
            primal: primal.ok_or_else(|| Error::parse(0, "missing primal line"))?,
            edges,
            labels,
        };
        gp.validate().map_err(|e| Error::parse(0, e.to_string()))?;
        Ok(gp)
    }
}

/// Bipartite graph: primal vertex `j` joins ancilla `n + i` when row `i`
/// has a 1 in column `j`. Post-processing XORs each ancilla bit into its
/// primal neighbours and discards the ancillas.
pub fn xprogram_to_graphprogram(prog: &XProgram) -> (GraphProgram, PostProcess) {
    let n = prog.n();
    let k = prog.len();
    let mut edges = Vec::new();
    let mut labels = vec![Label::Hadamard; n];
    let mut map = BitMatrix::identity(n + k);
    for (i, e) in prog.elements().iter().enumerate() {
        labels.push(Label::XRotation(e.theta));
        for j in e.row.iter_ones() {
            edges.push((j, n + i));
            map.set(n + i, j, true);
        }
    }
    (
        GraphProgram {
            vertices: n + k,
            primal: n,
            edges,
            labels,
        },
        PostProcess {
            map,
            keep: (0..n).collect(),
        },
    )
}

fn check_register(qubits: usize) -> Result<()> {
    if qubits > STATEVECTOR_QUBIT_CAP {
        return Err(Error::StateSpaceInfeasible {
            qubits,
            cap: STATEVECTOR_QUBIT_CAP,
        });
    }
    Ok(())
}

fn plus_state(qubits: usize) -> Vec<Complex64> {
    let size = 1usize << qubits;
    vec![Complex64::new((size as f64).sqrt().recip(), 0.0); size]
}

fn apply_single(state: &mut [Complex64], qubit: usize, u: [[Complex64; 2]; 2]) {
    let bit = 1usize << qubit;
    for i in 0..state.len() {
        if i & bit == 0 {
            let (a, b) = (state[i], state[i | bit]);
            state[i] = u[0][0] * a + u[0][1] * b;
            state[i | bit] = u[1][0] * a + u[1][1] * b;
        }
    }
}

fn probabilities(qubits: usize, state: &[Complex64]) -> Result<OutputDistribution> {
    OutputDistribution::from_weights(qubits, state.iter().map(|z| z.norm_sqr()).collect())
}

/// Dense simulation with Hadamard-basis input and measurement.
pub fn simulate_znetwork(net: &ZNetwork) -> Result<OutputDistribution> {
    check_register(net.n)?;
    let mut state = plus_state(net.n);
    for g in &net.gates {
        match *g {
            ZGate::Cnot { control, target } => {
                let (c, t) = (1usize << control, 1usize << target);
                for i in 0..state.len() {
                    if i & c != 0 && i & t == 0 {
                        state.swap(i, i | t);
                    }
                }
            }
            ZGate::X(q) => {
                let b = 1usize << q;
                for i in 0..state.len() {
                    if i & b == 0 {
                        state.swap(i, i | b);
                    }
                }
            }
            ZGate::Rz { theta, qubit } => {
                let phase = Complex64::from_polar(1.0, theta.radians());
                let b = 1usize << qubit;
                for (i, amp) in state.iter_mut().enumerate() {
                    *amp *= if i & b == 0 { phase } else { phase.conj() };
                }
            }
        }
    }
    fwht(&mut state);
    let scale = (state.len() as f64).sqrt().recip();
    state.iter_mut().for_each(|z| *z *= scale);
    probabilities(net.n, &state)
}

/// Dense simulation of the graph state followed by the labelled
/// measurements, over all vertices (before any post-processing).
pub fn simulate_graphprogram(gp: &GraphProgram) -> Result<OutputDistribution> {
    gp.validate()?;
    check_register(gp.vertices)?;
    let mut state = plus_state(gp.vertices);
    for &(u, v) in &gp.edges {
        let mask = (1usize << u) | (1usize << v);
        for (i, amp) in state.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for (v, label) in gp.labels.iter().enumerate() {
        let u = match label {
            Label::Hadamard => {
                let h = Complex64::new(h, 0.0);
                [[h, h], [h, -h]]
            }
            Label::XRotation(t) => {
                let (s, c) = t.radians().sin_cos();
                let (c, is) = (Complex64::new(c, 0.0), Complex64::new(0.0, s));
                [[c, is], [is, c]]
            }
        };
        apply_single(&mut state, v, u);
    }
    probabilities(gp.vertices, &state)
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_whitespace().collect::<Vec<_>>()[..] {
            ["H"] => Ok(Label::Hadamard),
            ["RX", t] => Ok(Label::XRotation(t.parse()?)),
            _ => Err(Error::InvalidParameter(format!("unknown label {s:?}"))),
        }
    }
}
