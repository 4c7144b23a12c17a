//! Quantum Fourier transform and phase estimation.

use std::f64::consts::PI;

use crate::circuit::{Circuit, GateKind};
use crate::error::{Error, Result};
use crate::statevector::Control;

/// `|j⟩ → 2^{-n/2} Σ_k e^{2πi jk / 2^n} |k⟩` on qubits `0..n`, bit reversal included.
pub fn qft(n: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::arg("qft needs at least one qubit"));
    }
    let mut circ = Circuit::new(n)?.named(format!("qft-{n}"));
    for q in (0..n).rev() {
        circ.h(q);
        for l in (0..q).rev() {
            let angle = PI / (1u64 << (q - l)) as f64;
            circ.controlled_gate(GateKind::Rz(angle), q, &[Control::on(l)]);
        }
    }
    for i in 0..n / 2 {
        circ.swap(i, n - 1 - i);
    }
    Ok(circ)
}

pub fn inverse_qft(n: usize) -> Result<Circuit> {
    Ok(qft(n)?.inverse().named(format!("iqft-{n}")))
}

/// Phase estimation of `unit` acting on `unit_qubits`, with the phase written
/// to `theta_qubits` (first entry is the least-significant phase bit).
#[derive(Clone, Debug)]
pub struct PhaseEstimationSpec {
    pub unit: Circuit,
    pub unit_qubits: Vec<usize>,
    pub theta_qubits: Vec<usize>,
}

impl PhaseEstimationSpec {
    /// Unit on qubits `0..u`, phase register on `u..u+t`.
    pub fn stacked(unit: Circuit, t: usize) -> Self {
        let u = unit.n_qubits();
        PhaseEstimationSpec {
            unit,
            unit_qubits: (0..u).collect(),
            theta_qubits: (u..u + t).collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.unit_qubits
            .iter()
            .chain(&self.theta_qubits)
            .map(|&q| q + 1)
            .max()
            .unwrap_or(0)
    }

    fn validate(&self) -> Result<()> {
        if self.theta_qubits.is_empty() {
            return Err(Error::arg("phase estimation needs at least one theta qubit"));
        }
        if self.unit_qubits.len() != self.unit.n_qubits() {
            return Err(Error::arg(format!(
                "unit acts on {} qubits but {} were mapped",
                self.unit.n_qubits(),
                self.unit_qubits.len()
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &q in self.unit_qubits.iter().chain(&self.theta_qubits) {
            if !seen.insert(q) {
                return Err(Error::arg(format!(
                    "qubit {q} appears twice in the phase estimation layout"
                )));
            }
        }
        Ok(())
    }
}

/// `PE(U)`: Hadamards on theta, `theta[k]`-controlled `U^{2^k}`, then the
/// inverse QFT on theta. An eigenvector with phase `e^{2πiφ}` leaves theta
/// holding `round(2^t φ)` when `2^t φ` is an integer.
pub fn phase_estimation(spec: &PhaseEstimationSpec) -> Result<Circuit> {
    spec.validate()?;
    let width = spec.width();
    let t = spec.theta_qubits.len();
    let mut circ = Circuit::new(width)?.named(format!("pe-{t}"));
    for &q in &spec.theta_qubits {
        circ.h(q);
    }
    let mut mapped = Circuit::new(width)?;
    mapped.append_mapped(&spec.unit, &spec.unit_qubits)?;
    for (k, &ctrl) in spec.theta_qubits.iter().enumerate() {
        let cu = mapped.controlled(ctrl)?;
        circ.append(&cu.power(1 << k))?;
    }
    circ.append_mapped(&inverse_qft(t)?, &spec.theta_qubits)?;
    Ok(circ)
}
