//! Unitary equivalence checks between a reference circuit and a lowered or
//! routed candidate.

use crate::circuit::{Circuit, Gate, MATRIX_MAX_QUBITS};
use crate::error::{Error, Result};
use crate::statevector::{Control, StateVector};
use crate::Complex;

/// Largest number of touched candidate qubits the column check will simulate.
pub const CANDIDATE_MAX_QUBITS: usize = 16;

/// Where each reference qubit sits in the candidate register, before and after.
/// Candidate qubits outside the image must start and end in |0⟩.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub input: Vec<usize>,
    pub output: Vec<usize>,
}

impl Embedding {
    pub fn new(input: Vec<usize>, output: Vec<usize>) -> Self {
        Embedding { input, output }
    }

    pub fn identity(n: usize) -> Self {
        Self::permutation((0..n).collect())
    }

    /// Same placement before and after.
    pub fn permutation(p: Vec<usize>) -> Self {
        Embedding {
            input: p.clone(),
            output: p,
        }
    }

    /// First `n` entries of a routed circuit's initial and final layouts.
    pub fn from_layouts(initial: &[usize], final_: &[usize], n: usize) -> Self {
        Embedding {
            input: initial[..n].to_vec(),
            output: final_[..n].to_vec(),
        }
    }
}

fn check_image(map: &[usize], width: usize, what: &str) -> Result<()> {
    let mut seen = vec![false; width];
    for &q in map {
        if q >= width || std::mem::replace(&mut seen[q], true) {
            return Err(Error::arg(format!(
                "{what} embedding entry {q} is out of range or repeated"
            )));
        }
    }
    Ok(())
}

fn scatter(value: usize, map: &[usize]) -> usize {
    map.iter()
        .enumerate()
        .fold(0, |acc, (bit, &q)| acc | ((value >> bit & 1) << q))
}

/// True iff `candidate`, restricted to inputs that are zero off the embedding,
/// equals `reference` up to one global phase, entrywise within `tol`.
///
/// With `Embedding::permutation(p)` on equal widths this is
/// `M₁ = e^{iγ}·Π†·M₂·Π`.
pub fn verify_equivalence(reference: &Circuit, candidate: &Circuit, embedding: &Embedding, tol: f64) -> Result<bool> {
    let n = reference.n_qubits();
    if n > MATRIX_MAX_QUBITS {
        return Err(Error::Capacity(format!(
            "equivalence check is limited to {MATRIX_MAX_QUBITS} reference qubits, got {n}"
        )));
    }
    if embedding.input.len() != n || embedding.output.len() != n {
        return Err(Error::arg("embedding must place every reference qubit"));
    }
    let width = candidate.n_qubits();
    check_image(&embedding.input, width, "input")?;
    check_image(&embedding.output, width, "output")?;

    let mut active = vec![false; width];
    for &q in embedding.input.iter().chain(&embedding.output) {
        active[q] = true;
    }
    for g in candidate.gates() {
        for q in g.qubits() {
            active[q] = true;
        }
    }
    let mut compact_index = vec![usize::MAX; width];
    let mut m = 0;
    for (q, &a) in active.iter().enumerate() {
        if a {
            compact_index[q] = m;
            m += 1;
        }
    }
    if m > CANDIDATE_MAX_QUBITS {
        return Err(Error::Capacity(format!(
            "candidate touches {m} qubits; the check simulates at most {CANDIDATE_MAX_QUBITS}"
        )));
    }
    let mut compact = Circuit::new(m)?;
    compact.add_global_phase(candidate.global_phase());
    for g in candidate.gates() {
        compact.push(Gate {
            kind: g.kind.clone(),
            targets: g.targets.iter().map(|&q| compact_index[q]).collect(),
            controls: g
                .controls
                .iter()
                .map(|c| Control {
                    qubit: compact_index[c.qubit],
                    polarity: c.polarity,
                })
                .collect(),
        })?;
    }
    let input: Vec<usize> = embedding.input.iter().map(|&q| compact_index[q]).collect();
    let output: Vec<usize> = embedding.output.iter().map(|&q| compact_index[q]).collect();

    let u = reference.matrix_of()?;
    let mut phase: Option<Complex> = None;
    for j in 0..1usize << n {
        let mut state = StateVector::basis(m, scatter(j, &input))?;
        compact.run(&mut state)?;
        let mut expected = vec![Complex::new(0.0, 0.0); 1 << m];
        for k in 0..1usize << n {
            expected[scatter(k, &output)] = u[(k, j)];
        }
        let amps = state.amplitudes();
        let p = match phase {
            Some(p) => p,
            None => {
                let (idx, _) = expected
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
                    .expect("non-empty column");
                if amps[idx].norm() < 1e-6 {
                    return Ok(false);
                }
                let p = amps[idx] / expected[idx];
                let p = p / p.norm();
                phase = Some(p);
                p
            }
        };
        if amps.iter().zip(&expected).any(|(a, e)| (a - p * e).norm() > tol) {
            return Ok(false);
        }
    }
    Ok(true)
}
