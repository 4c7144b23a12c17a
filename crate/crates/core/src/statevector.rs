//! Dense statevector storage and exact gate application.
//!
//! Qubit `q` is bit `q` of the amplitude index (qubit 0 is least significant).
//! Bit-string labels are rendered most-significant first, so the label of a
//! register value reads like the binary numeral of that value.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rng::{self, Stream};
use crate::Complex;

pub const MAX_QUBITS: usize = 24;

/// Registers of at least this many qubits split gate kernels across threads.
const PARALLEL_MIN_QUBITS: usize = 14;

const NORM_TOL: f64 = 1e-9;

/// A control wire: the gate fires only when `qubit` reads `polarity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Control {
    pub qubit: usize,
    pub polarity: bool,
}

impl Control {
    pub fn on(qubit: usize) -> Self {
        Control { qubit, polarity: true }
    }

    pub fn off(qubit: usize) -> Self {
        Control { qubit, polarity: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex>,
}

impl StateVector {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn new_zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_width(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::arg(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex::new(0.0, 0.0); dim];
        amps[index] = Complex::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amps })
    }

    /// Wraps caller-supplied amplitudes; the vector must be normalized.
    pub fn from_amplitudes(amps: Vec<Complex>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::arg(format!("amplitude count {dim} is not a power of two >= 2")));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        check_width(n_qubits)?;
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::Validation("non-finite amplitude".into()));
        }
        let state = StateVector { n_qubits, amps };
        let drift = (state.norm_sqr() - 1.0).abs();
        if drift > NORM_TOL {
            return Err(Error::Validation(format!(
                "amplitudes not normalized (|norm^2 - 1| = {drift:e})"
            )));
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex {
        self.amps[index]
    }

    pub fn into_amplitudes(self) -> Vec<Complex> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &StateVector) -> Complex {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scale(&mut self, factor: Complex) {
        for a in &mut self.amps {
            *a *= factor;
        }
    }

    /// Applies `unitary` to `targets` (targets[0] is the low bit of the matrix
    /// index) on the subspace where every control matches its polarity.
    pub fn apply_gate(&mut self, unitary: &Matrix, targets: &[usize], controls: &[Control]) -> Result<()> {
        check_wires(self.n_qubits, targets, controls)?;
        if unitary.dim() != 1 << targets.len() {
            return Err(Error::arg(format!(
                "{}x{} matrix does not act on {} target qubit(s)",
                unitary.dim(),
                unitary.dim(),
                targets.len()
            )));
        }
        let err = unitary.unitarity_error();
        if err > NORM_TOL {
            return Err(Error::Validation(format!(
                "gate matrix is not unitary (deviation {err:e})"
            )));
        }
        self.apply_unchecked(&GateKernel::new(unitary.clone(), targets, controls));
        Ok(())
    }

    pub(crate) fn apply_unchecked(&mut self, kernel: &GateKernel) {
        if kernel.diagonal {
            self.apply_diagonal(kernel);
            return;
        }
        let chunk = 1usize << (kernel.max_target + 1);
        if self.n_qubits >= PARALLEL_MIN_QUBITS && self.amps.len() / chunk >= 2 {
            self.amps
                .par_chunks_mut(chunk)
                .enumerate()
                .for_each(|(i, block)| kernel.apply_block(block, i * chunk));
        } else {
            for (i, block) in self.amps.chunks_mut(chunk).enumerate() {
                kernel.apply_block(block, i * chunk);
            }
        }
    }

    fn apply_diagonal(&mut self, kernel: &GateKernel) {
        if self.n_qubits < PARALLEL_MIN_QUBITS {
            kernel.apply_diagonal_serial(&mut self.amps);
            return;
        }
        self.amps.par_iter_mut().enumerate().for_each(|(i, a)| {
            if i & kernel.ctrl_mask == kernel.ctrl_value {
                let local = kernel.local_index(i);
                *a *= kernel.matrix.data()[local * (kernel.matrix.dim() + 1)];
            }
        });
    }

    pub fn apply_pauli(&mut self, qubit: usize, pauli: Pauli) {
        let bit = 1usize << qubit;
        match pauli {
            Pauli::X => {
                for i in 0..self.amps.len() {
                    if i & bit == 0 {
                        self.amps.swap(i, i | bit);
                    }
                }
            }
            Pauli::Y => {
                let i_unit = Complex::new(0.0, 1.0);
                for i in 0..self.amps.len() {
                    if i & bit == 0 {
                        let a0 = self.amps[i];
                        let a1 = self.amps[i | bit];
                        self.amps[i] = -i_unit * a1;
                        self.amps[i | bit] = i_unit * a0;
                    }
                }
            }
            Pauli::Z => {
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & bit != 0 {
                        *a = -*a;
                    }
                }
            }
        }
    }

    /// `|amp_i|^2` for every basis index.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Distribution of the bit pattern on `qubits`; `qubits[j]` becomes bit `j`
    /// of the returned index.
    pub fn marginal_probabilities(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        check_subset(self.n_qubits, qubits)?;
        let mut out = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amps.iter().enumerate() {
            out[gather_bits(i, qubits)] += a.norm_sqr();
        }
        Ok(out)
    }

    /// Draws `shots` independent measurements of `measured` (see [`Counts`]).
    pub fn sample(&self, measured: &[usize], shots: u64, seed: u64) -> Result<Counts> {
        if shots == 0 {
            return Err(Error::arg("shots must be at least 1"));
        }
        let marginal = self.marginal_probabilities(measured)?;
        let cdf = Cdf::new(&marginal);
        let mut counts = Counts::new(measured.len());
        for shot in 0..shots {
            let mut rng = rng::stream(seed, shot, Stream::Measure);
            counts.record(cdf.draw(rng.random::<f64>()));
        }
        Ok(counts)
    }
}

/// Cumulative distribution used to invert a uniform draw.
pub(crate) struct Cdf {
    cumulative: Vec<f64>,
    last_nonzero: usize,
}

impl Cdf {
    pub(crate) fn new(p: &[f64]) -> Self {
        let mut acc = 0.0;
        let cumulative = p
            .iter()
            .map(|&x| {
                acc += x;
                acc
            })
            .collect();
        let last_nonzero = p.iter().rposition(|&x| x > 0.0).unwrap_or(0);
        Cdf {
            cumulative,
            last_nonzero,
        }
    }

    pub(crate) fn draw(&self, u: f64) -> usize {
        let total = *self.cumulative.last().unwrap_or(&1.0);
        let target = u * total;
        self.cumulative.partition_point(|&c| c <= target).min(self.last_nonzero)
    }
}

/// Histogram of measured bit strings (MSB-first labels).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counts {
    width: usize,
    shots: u64,
    counts: BTreeMap<String, u64>,
}

impl Counts {
    pub fn new(width: usize) -> Self {
        Counts {
            width,
            shots: 0,
            counts: BTreeMap::new(),
        }
    }

    pub fn record(&mut self, outcome: usize) {
        *self.counts.entry(label(outcome, self.width)).or_insert(0) += 1;
        self.shots += 1;
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn get(&self, label: &str) -> u64 {
        self.counts.get(label).copied().unwrap_or(0)
    }

    pub fn frequency(&self, label: &str) -> f64 {
        if self.shots == 0 {
            0.0
        } else {
            self.get(label) as f64 / self.shots as f64
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn as_map(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }
}

/// MSB-first binary label of `value` with `width` characters.
pub fn label(value: usize, width: usize) -> String {
    (0..width)
        .rev()
        .map(|b| if value >> b & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Parses an MSB-first label back into a register value.
pub fn parse_label(text: &str, width: usize) -> Result<usize> {
    if text.len() != width || !text.chars().all(|c| c == '0' || c == '1') {
        return Err(Error::arg(format!("label {text:?} is not a {width}-bit binary string")));
    }
    Ok(usize::from_str_radix(text, 2).expect("validated binary label"))
}

pub(crate) fn gather_bits(index: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (j, &q)| acc | ((index >> q & 1) << j))
}

pub(crate) fn check_width(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::Capacity(format!(
            "{n_qubits} qubits requested; supported range is 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

pub(crate) fn check_subset(n_qubits: usize, qubits: &[usize]) -> Result<()> {
    let mut seen = 0usize;
    for &q in qubits {
        if q >= n_qubits {
            return Err(Error::arg(format!("qubit {q} out of range")));
        }
        if seen >> q & 1 == 1 {
            return Err(Error::arg(format!("qubit {q} listed twice")));
        }
        seen |= 1 << q;
    }
    Ok(())
}

pub(crate) fn check_wires(n_qubits: usize, targets: &[usize], controls: &[Control]) -> Result<()> {
    if targets.is_empty() {
        return Err(Error::arg("gate needs at least one target"));
    }
    let mut seen = 0usize;
    for q in targets.iter().copied().chain(controls.iter().map(|c| c.qubit)) {
        if q >= n_qubits {
            return Err(Error::arg(format!("qubit {q} out of range for {n_qubits} qubits")));
        }
        if seen >> q & 1 == 1 {
            return Err(Error::arg(format!(
                "qubit {q} used more than once among targets and controls"
            )));
        }
        seen |= 1 << q;
    }
    Ok(())
}

/// A gate bound to concrete wires, ready for repeated application.
#[derive(Clone, Debug)]
pub(crate) struct GateKernel {
    matrix: Matrix,
    targets: Vec<usize>,
    offsets: Vec<usize>,
    ctrl_mask: usize,
    ctrl_value: usize,
    max_target: usize,
    /// Controls above `max_target`: constant within a block.
    high_mask: usize,
    high_value: usize,
    /// Targets and lower controls, ascending: the bits fixed inside a block.
    low_fixed: Vec<usize>,
    low_value: usize,
    /// Targets and all controls, ascending.
    all_fixed: Vec<usize>,
    diagonal: bool,
}

impl GateKernel {
    pub(crate) fn new(matrix: Matrix, targets: &[usize], controls: &[Control]) -> Self {
        let offsets = (0..1usize << targets.len())
            .map(|j| {
                targets
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (b, &q)| acc | ((j >> b & 1) << q))
            })
            .collect();
        let max_target = *targets.iter().max().expect("non-empty targets");
        let ctrl_mask = controls.iter().fold(0, |m, c| m | 1 << c.qubit);
        let ctrl_value = controls.iter().filter(|c| c.polarity).fold(0, |m, c| m | 1 << c.qubit);
        let block_mask = (1usize << (max_target + 1)) - 1;
        let mut low_fixed: Vec<usize> = targets
            .iter()
            .copied()
            .chain(controls.iter().map(|c| c.qubit).filter(|&q| q < max_target))
            .collect();
        low_fixed.sort_unstable();
        let mut all_fixed: Vec<usize> = targets
            .iter()
            .copied()
            .chain(controls.iter().map(|c| c.qubit))
            .collect();
        all_fixed.sort_unstable();
        let dim = matrix.dim();
        let zero = Complex::new(0.0, 0.0);
        let diagonal = (0..dim).all(|r| (0..dim).all(|c| r == c || matrix[(r, c)] == zero));
        GateKernel {
            matrix,
            targets: targets.to_vec(),
            offsets,
            ctrl_mask,
            ctrl_value,
            max_target,
            high_mask: ctrl_mask & !block_mask,
            high_value: ctrl_value & !block_mask,
            low_fixed,
            low_value: ctrl_value & block_mask,
            all_fixed,
            diagonal,
        }
    }

    fn local_index(&self, global: usize) -> usize {
        gather_bits(global, &self.targets)
    }

    /// Applies the gate inside one aligned block of `2^(max_target+1)` amplitudes.
    fn apply_block(&self, block: &mut [Complex], start: usize) {
        if start & self.high_mask != self.high_value {
            return;
        }
        let groups = block.len() >> self.low_fixed.len();
        let m = self.matrix.data();
        if self.offsets.len() == 2 {
            let (a, b, c, d) = (m[0], m[1], m[2], m[3]);
            let hi = self.offsets[1];
            for r in 0..groups {
                let base = deposit_zeros(r, &self.low_fixed) | self.low_value;
                let x0 = block[base];
                let x1 = block[base + hi];
                block[base] = a * x0 + b * x1;
                block[base + hi] = c * x0 + d * x1;
            }
            return;
        }
        let dim = self.offsets.len();
        let mut buf = [Complex::new(0.0, 0.0); 16];
        let mut heap;
        let scratch: &mut [Complex] = if dim <= 16 {
            &mut buf[..dim]
        } else {
            heap = vec![Complex::new(0.0, 0.0); dim];
            &mut heap
        };
        for r in 0..groups {
            let base = deposit_zeros(r, &self.low_fixed) | self.low_value;
            for (s, &off) in scratch.iter_mut().zip(&self.offsets) {
                *s = block[base + off];
            }
            for (row, &off) in self.offsets.iter().enumerate() {
                let coeffs = &m[row * dim..(row + 1) * dim];
                block[base + off] = coeffs.iter().zip(scratch.iter()).map(|(a, b)| a * b).sum();
            }
        }
    }

    fn apply_diagonal_serial(&self, amps: &mut [Complex]) {
        let dim = self.offsets.len();
        let diag: Vec<Complex> = (0..dim).map(|j| self.matrix[(j, j)]).collect();
        let groups = amps.len() >> self.all_fixed.len();
        for r in 0..groups {
            let base = deposit_zeros(r, &self.all_fixed) | self.ctrl_value;
            for (&off, &f) in self.offsets.iter().zip(&diag) {
                amps[base + off] *= f;
            }
        }
    }
}

/// Spreads the bits of `r` around zero bits inserted at the (ascending) `positions`.
fn deposit_zeros(mut r: usize, positions: &[usize]) -> usize {
    for &p in positions {
        let low = r & ((1 << p) - 1);
        r = (r >> p << (p + 1)) | low;
    }
    r
}
