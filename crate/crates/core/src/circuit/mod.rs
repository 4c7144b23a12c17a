//! Gate library, circuit container and structural transforms.

mod text;

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fmt;

use crate::error::{Error, Result};
use crate::gates;
use crate::linalg::{phase_between, Matrix};
use crate::statevector::{self, Control, GateKernel, StateVector};
use crate::Complex;

/// Largest register for which [`Circuit::matrix_of`] builds a dense matrix.
pub const MATRIX_MAX_QUBITS: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub enum GateKind {
    I,
    X,
    H,
    Z,
    /// `diag(1, e^{iφ})`.
    Rz(f64),
    Sx,
    Swap,
    /// Arbitrary unitary; `targets[0]` is the low bit of its index.
    Unitary(Matrix),
}

impl GateKind {
    pub fn arity(&self) -> usize {
        match self {
            GateKind::Swap => 2,
            GateKind::Unitary(m) => m.dim().trailing_zeros() as usize,
            _ => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::I => "i",
            GateKind::X => "x",
            GateKind::H => "h",
            GateKind::Z => "z",
            GateKind::Rz(_) => "rz",
            GateKind::Sx => "sx",
            GateKind::Swap => "swap",
            GateKind::Unitary(_) => "unitary",
        }
    }

    pub fn matrix(&self) -> Matrix {
        match self {
            GateKind::I => gates::i(),
            GateKind::X => gates::x(),
            GateKind::H => gates::h(),
            GateKind::Z => gates::z(),
            GateKind::Rz(phi) => gates::rz(*phi),
            GateKind::Sx => gates::sx(),
            GateKind::Swap => gates::swap(),
            GateKind::Unitary(m) => m.clone(),
        }
    }

    pub fn inverse(&self) -> GateKind {
        match self {
            GateKind::Rz(phi) => GateKind::Rz(-phi),
            GateKind::Sx => GateKind::Unitary(gates::sxdg()),
            GateKind::Unitary(m) if *m == gates::sxdg() => GateKind::Sx,
            GateKind::Unitary(m) => GateKind::Unitary(m.adjoint()),
            other => other.clone(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            GateKind::Rz(phi) if !phi.is_finite() => Err(Error::Validation("rz angle must be finite".into())),
            GateKind::Unitary(m) => {
                if m.dim() < 2 || !m.dim().is_power_of_two() {
                    return Err(Error::Validation(format!(
                        "unitary dimension {} is not a power of two",
                        m.dim()
                    )));
                }
                let err = m.unitarity_error();
                if err > 1e-9 {
                    return Err(Error::Validation(format!("matrix is not unitary (deviation {err:e})")));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// One gate bound to wires. Controls carry a polarity (`false` = fire on |0⟩).
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    pub controls: Vec<Control>,
}

impl Gate {
    pub fn new(kind: GateKind, targets: Vec<usize>, controls: Vec<Control>) -> Result<Self> {
        kind.validate()?;
        if targets.len() != kind.arity() {
            return Err(Error::arg(format!(
                "{} expects {} target(s), got {}",
                kind.name(),
                kind.arity(),
                targets.len()
            )));
        }
        let width = targets
            .iter()
            .chain(controls.iter().map(|c| &c.qubit))
            .max()
            .map_or(1, |&q| q + 1);
        statevector::check_wires(width, &targets, &controls)?;
        Ok(Gate {
            kind,
            targets,
            controls,
        })
    }

    pub fn single(kind: GateKind, target: usize) -> Self {
        Gate::new(kind, vec![target], vec![]).expect("valid single-qubit gate")
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::new(GateKind::X, vec![target], vec![Control::on(control)]).expect("valid cnot")
    }

    pub fn cz(control: usize, target: usize) -> Self {
        Gate::new(GateKind::Z, vec![target], vec![Control::on(control)]).expect("valid cz")
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Gate::new(GateKind::Swap, vec![a, b], vec![]).expect("valid swap")
    }

    /// Every wire the gate touches: targets first, then controls.
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.targets
            .iter()
            .copied()
            .chain(self.controls.iter().map(|c| c.qubit))
    }

    pub fn width(&self) -> usize {
        self.targets.len() + self.controls.len()
    }

    /// Display label used by gate counts: `x`, `cx`, `ccx`, `mcx`, `cz`, `mcz`, `ch`, ...
    pub fn label(&self) -> String {
        let base = self.kind.name();
        match (self.controls.len(), &self.kind) {
            (0, _) => base.to_string(),
            (1, _) => format!("c{base}"),
            (2, GateKind::X) => "ccx".to_string(),
            _ => format!("mc{base}"),
        }
    }

    pub fn inverse(&self) -> Gate {
        Gate {
            kind: self.kind.inverse(),
            targets: self.targets.clone(),
            controls: self.controls.clone(),
        }
    }

    fn remapped(&self, map: &[usize]) -> Gate {
        Gate {
            kind: self.kind.clone(),
            targets: self.targets.iter().map(|&q| map[q]).collect(),
            controls: self
                .controls
                .iter()
                .map(|c| Control {
                    qubit: map[c.qubit],
                    polarity: c.polarity,
                })
                .collect(),
        }
    }

    pub(crate) fn kernel(&self) -> GateKernel {
        GateKernel::new(self.kind.matrix(), &self.targets, &self.controls)
    }
}

/// Ordered gate list; list order is time order.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    global_phase: f64,
    work_qubits: usize,
    name: Option<String>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Result<Self> {
        statevector::check_width(n_qubits)?;
        Ok(Circuit {
            n_qubits,
            gates: Vec::new(),
            global_phase: 0.0,
            work_qubits: 0,
            name: None,
        })
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Global phase `γ` of the circuit's operator `e^{iγ}·∏ gates`.
    pub fn global_phase(&self) -> f64 {
        self.global_phase
    }

    pub fn add_global_phase(&mut self, phase: f64) -> &mut Self {
        self.global_phase = wrap_phase(self.global_phase + phase);
        self
    }

    /// Number of trailing qubits reserved as clean work space (|0⟩ in and out).
    pub fn work_qubits(&self) -> usize {
        self.work_qubits
    }

    pub fn set_work_qubits(&mut self, work: usize) -> Result<()> {
        if work >= self.n_qubits {
            return Err(Error::arg("work qubits must leave at least one data qubit"));
        }
        self.work_qubits = work;
        Ok(())
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        if let Some(q) = gate.qubits().find(|&q| q >= self.n_qubits) {
            return Err(Error::arg(format!(
                "qubit {q} out of range for a {}-qubit circuit",
                self.n_qubits
            )));
        }
        self.gates.push(gate);
        Ok(self)
    }

    fn push_valid(&mut self, kind: GateKind, targets: Vec<usize>, controls: Vec<Control>) -> &mut Self {
        let gate = Gate::new(kind, targets, controls).expect("builder gate is valid");
        self.push(gate).expect("builder qubit in range");
        self
    }

    // Builder shorthands. They panic on out-of-range or overlapping wires;
    // use `push` for fallible construction.

    pub fn h(&mut self, q: usize) -> &mut Self {
        self.push_valid(GateKind::H, vec![q], vec![])
    }

    pub fn x(&mut self, q: usize) -> &mut Self {
        self.push_valid(GateKind::X, vec![q], vec![])
    }

    pub fn z(&mut self, q: usize) -> &mut Self {
        self.push_valid(GateKind::Z, vec![q], vec![])
    }

    pub fn id(&mut self, q: usize) -> &mut Self {
        self.push_valid(GateKind::I, vec![q], vec![])
    }

    pub fn rz(&mut self, q: usize, phi: f64) -> &mut Self {
        self.push_valid(GateKind::Rz(phi), vec![q], vec![])
    }

    pub fn sx(&mut self, q: usize) -> &mut Self {
        self.push_valid(GateKind::Sx, vec![q], vec![])
    }

    pub fn cx(&mut self, control: usize, target: usize) -> &mut Self {
        self.push_valid(GateKind::X, vec![target], vec![Control::on(control)])
    }

    pub fn cz(&mut self, control: usize, target: usize) -> &mut Self {
        self.push_valid(GateKind::Z, vec![target], vec![Control::on(control)])
    }

    pub fn swap(&mut self, a: usize, b: usize) -> &mut Self {
        self.push_valid(GateKind::Swap, vec![a, b], vec![])
    }

    pub fn mcx(&mut self, controls: &[Control], target: usize) -> &mut Self {
        self.push_valid(GateKind::X, vec![target], controls.to_vec())
    }

    pub fn mcz(&mut self, controls: &[Control], target: usize) -> &mut Self {
        self.push_valid(GateKind::Z, vec![target], controls.to_vec())
    }

    /// Applies `kind` to `target` with `controls`.
    pub fn controlled_gate(&mut self, kind: GateKind, target: usize, controls: &[Control]) -> &mut Self {
        self.push_valid(kind, vec![target], controls.to_vec())
    }

    /// Appends `other`, which must not be wider than `self`.
    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.n_qubits > self.n_qubits {
            return Err(Error::arg(format!(
                "cannot append a {}-qubit circuit to a {}-qubit circuit",
                other.n_qubits, self.n_qubits
            )));
        }
        self.gates.extend(other.gates.iter().cloned());
        self.add_global_phase(other.global_phase);
        Ok(self)
    }

    /// Appends `other` with its qubit `q` placed on `map[q]`.
    pub fn append_mapped(&mut self, other: &Circuit, map: &[usize]) -> Result<&mut Self> {
        if map.len() != other.n_qubits {
            return Err(Error::arg("qubit map length must equal the appended circuit width"));
        }
        let mut seen = vec![false; self.n_qubits];
        for &q in map {
            if q >= self.n_qubits || std::mem::replace(&mut seen[q], true) {
                return Err(Error::arg(format!("invalid or repeated mapped qubit {q}")));
            }
        }
        self.gates.extend(other.gates.iter().map(|g| g.remapped(map)));
        self.add_global_phase(other.global_phase);
        Ok(self)
    }

    /// Copy of the circuit on a wider register (new qubits are idle).
    pub fn widened(&self, n_qubits: usize) -> Result<Circuit> {
        if n_qubits < self.n_qubits {
            return Err(Error::arg("cannot narrow a circuit"));
        }
        statevector::check_width(n_qubits)?;
        let mut out = self.clone();
        out.n_qubits = n_qubits;
        Ok(out)
    }

    /// Evolves `state` in place.
    pub fn run(&self, state: &mut StateVector) -> Result<()> {
        Program::new(self).run(state)
    }

    /// Runs the circuit from `|0…0⟩`.
    pub fn simulate(&self) -> Result<StateVector> {
        let mut state = StateVector::new_zero(self.n_qubits)?;
        self.run(&mut state)?;
        Ok(state)
    }

    /// Reversed gate list with every gate replaced by its adjoint.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            global_phase: wrap_phase(-self.global_phase),
            work_qubits: self.work_qubits,
            name: self.name.as_ref().map(|n| format!("{n}-inverse")),
        }
    }

    /// Adds `ctrl` as a |1⟩-control to every gate; the global phase becomes a
    /// phase gate on `ctrl`. The register grows if `ctrl` is beyond it.
    pub fn controlled(&self, ctrl: usize) -> Result<Circuit> {
        self.controlled_on(Control::on(ctrl))
    }

    pub fn controlled_on(&self, ctrl: Control) -> Result<Circuit> {
        if self.gates.iter().any(|g| g.qubits().any(|q| q == ctrl.qubit)) {
            return Err(Error::arg(format!(
                "control qubit {} is already used by the circuit",
                ctrl.qubit
            )));
        }
        let n_qubits = self.n_qubits.max(ctrl.qubit + 1);
        statevector::check_width(n_qubits)?;
        let mut out = Circuit {
            n_qubits,
            gates: Vec::with_capacity(self.gates.len() + 1),
            global_phase: 0.0,
            work_qubits: 0,
            name: self.name.as_ref().map(|n| format!("c-{n}")),
        };
        for g in &self.gates {
            let mut controls = Vec::with_capacity(g.controls.len() + 1);
            controls.push(ctrl);
            controls.extend(g.controls.iter().copied());
            out.gates.push(Gate {
                kind: g.kind.clone(),
                targets: g.targets.clone(),
                controls,
            });
        }
        let phase = self.global_phase;
        if phase != 0.0 {
            let kind = if (phase - PI).abs() < 1e-15 {
                GateKind::Z
            } else {
                GateKind::Rz(phase)
            };
            if ctrl.polarity {
                out.gates.push(Gate::single(kind, ctrl.qubit));
            } else {
                // diag(e^{iγ}, 1) = e^{iγ}·diag(1, e^{-iγ})
                out.gates.push(Gate::single(GateKind::Rz(-phase), ctrl.qubit));
                out.add_global_phase(phase);
            }
        }
        Ok(out)
    }

    /// `k` back-to-back copies.
    pub fn power(&self, k: usize) -> Circuit {
        let mut out = Circuit {
            n_qubits: self.n_qubits,
            gates: Vec::with_capacity(self.gates.len() * k),
            global_phase: wrap_phase(self.global_phase * k as f64),
            work_qubits: self.work_qubits,
            name: self.name.clone(),
        };
        for _ in 0..k {
            out.gates.extend(self.gates.iter().cloned());
        }
        out
    }

    /// Dense operator; column `j` is the image of basis state `j`.
    pub fn matrix_of(&self) -> Result<Matrix> {
        if self.n_qubits > MATRIX_MAX_QUBITS {
            return Err(Error::Capacity(format!(
                "matrix_of supports at most {MATRIX_MAX_QUBITS} qubits, circuit has {}",
                self.n_qubits
            )));
        }
        let program = Program::new(self);
        let dim = 1usize << self.n_qubits;
        let mut m = Matrix::zeros(dim);
        for col in 0..dim {
            let mut state = StateVector::basis(self.n_qubits, col)?;
            program.run(&mut state)?;
            for (row, &a) in state.amplitudes().iter().enumerate() {
                m[(row, col)] = a;
            }
        }
        Ok(m)
    }

    /// ASAP layer count.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.n_qubits];
        let mut depth = 0;
        for g in &self.gates {
            let layer = g.qubits().map(|q| level[q]).max().unwrap_or(0) + 1;
            for q in g.qubits() {
                level[q] = layer;
            }
            depth = depth.max(layer);
        }
        depth
    }

    pub fn gate_counts(&self) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        for g in &self.gates {
            *counts.entry(g.label()).or_insert(0) += 1;
        }
        counts
    }

    /// Gates acting on two or more wires.
    pub fn multi_qubit_gate_count(&self) -> usize {
        self.gates.iter().filter(|g| g.width() >= 2).count()
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::write(self, f)
    }
}

impl std::str::FromStr for Circuit {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        text::parse(s)
    }
}

fn wrap_phase(phase: f64) -> f64 {
    let w = phase.rem_euclid(TAU);
    if (w - TAU).abs() < 1e-15 || w.abs() < 1e-15 {
        0.0
    } else {
        w
    }
}

/// A circuit with its gate kernels prepared for repeated execution.
pub(crate) struct Program {
    n_qubits: usize,
    steps: Vec<Step>,
    phase: Complex,
}

pub(crate) struct Step {
    pub(crate) kernel: GateKernel,
    pub(crate) qubits: Vec<usize>,
}

impl Program {
    pub(crate) fn new(circuit: &Circuit) -> Self {
        Program {
            n_qubits: circuit.n_qubits,
            steps: circuit
                .gates
                .iter()
                .map(|g| Step {
                    kernel: g.kernel(),
                    qubits: g.qubits().collect(),
                })
                .collect(),
            phase: Complex::from_polar(1.0, circuit.global_phase),
        }
    }

    pub(crate) fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub(crate) fn check(&self, state: &StateVector) -> Result<()> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::arg(format!(
                "circuit has {} qubits but state has {}",
                self.n_qubits,
                state.n_qubits()
            )));
        }
        Ok(())
    }

    pub(crate) fn finish(&self, state: &mut StateVector) {
        if self.phase != Complex::new(1.0, 0.0) {
            state.scale(self.phase);
        }
    }

    pub(crate) fn run(&self, state: &mut StateVector) -> Result<()> {
        self.check(state)?;
        for step in &self.steps {
            state.apply_unchecked(&step.kernel);
        }
        self.finish(state);
        Ok(())
    }
}

/// Global phase `e^{iγ}` with `a ≈ e^{iγ}·b`, if `b` is nonzero.
pub fn relative_phase(a: &Matrix, b: &Matrix) -> Option<Complex> {
    phase_between(a.data(), b.data())
}

#[cfg(test)]
mod tests;
