//! Lowering to the basis `{cx, i, rz, sx, x}` with exact global-phase tracking.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::gates;
use crate::linalg::{phase_between, Matrix};
use crate::statevector::Control;
use crate::Complex;

/// Most work qubits the lowering will append.
pub const MAX_WORK_QUBITS: usize = 2;

const ANGLE_EPS: f64 = 1e-12;

/// True for `i`, `rz`, `sx`, `x` and single-control `x` with |1⟩ polarity.
pub fn is_basis_gate(g: &Gate) -> bool {
    match (&g.kind, g.controls.as_slice()) {
        (GateKind::I | GateKind::Rz(_) | GateKind::Sx | GateKind::X, []) => true,
        (GateKind::X, [c]) => c.polarity,
        _ => false,
    }
}

pub fn is_basis_circuit(c: &Circuit) -> bool {
    c.gates().iter().all(is_basis_gate)
}

/// Work qubits needed by one gate after polarity normalization.
fn work_needed(g: &Gate) -> Result<usize> {
    let k = g.controls.len();
    let need = match &g.kind {
        GateKind::X | GateKind::Z => k.saturating_sub(2),
        // Controlled swap becomes a doubly-controlled X on k + 1 controls.
        GateKind::Swap => (k + 1).saturating_sub(2),
        GateKind::I => 0,
        GateKind::Unitary(m) if m.dim() > 2 => {
            return Err(Error::UnsupportedGate(format!(
                "{}-qubit unitary cannot be lowered to the basis",
                g.kind.arity()
            )))
        }
        _ => k.saturating_sub(1),
    };
    if need > MAX_WORK_QUBITS {
        return Err(Error::UnsupportedGate(format!(
            "{} with {k} controls needs {need} work qubits (at most {MAX_WORK_QUBITS})",
            g.label()
        )));
    }
    Ok(need)
}

/// Rewrites `circuit` over the basis. Work qubits, if any, are appended after
/// the existing register and declared in the output header; they start and end in |0⟩.
pub fn decompose_to_basis(circuit: &Circuit) -> Result<Circuit> {
    let mut work = 0;
    for g in circuit.gates() {
        work = work.max(work_needed(g)?);
    }
    let n = circuit.n_qubits();
    let mut out = Circuit::new(n + work)?;
    if let Some(name) = circuit.name() {
        out = out.named(format!("{name}-basis"));
    }
    out.set_work_qubits(circuit.work_qubits() + work)?;
    out.add_global_phase(circuit.global_phase());
    let mut e = Emitter {
        out,
        work: (n..n + work).collect(),
    };
    for g in circuit.gates() {
        e.gate(g)?;
    }
    Ok(e.out)
}

struct Emitter {
    out: Circuit,
    work: Vec<usize>,
}

impl Emitter {
    fn push(&mut self, kind: GateKind, target: usize, controls: Vec<Control>) {
        let g = Gate::new(kind, vec![target], controls).expect("basis gate is well formed");
        self.out.push(g).expect("basis gate in range");
    }

    fn rz(&mut self, q: usize, phi: f64) {
        let w = phi.rem_euclid(2.0 * PI);
        if w > ANGLE_EPS && (2.0 * PI - w) > ANGLE_EPS {
            self.push(GateKind::Rz(w), q, vec![]);
        }
    }

    fn sx(&mut self, q: usize) {
        self.push(GateKind::Sx, q, vec![]);
    }

    fn x(&mut self, q: usize) {
        self.push(GateKind::X, q, vec![]);
    }

    fn cx(&mut self, c: usize, t: usize) {
        self.push(GateKind::X, t, vec![Control::on(c)]);
    }

    /// `H = e^{-iπ/4}·RZ(π/2)·SX·RZ(π/2)`.
    fn h(&mut self, q: usize) {
        self.rz(q, FRAC_PI_2);
        self.sx(q);
        self.rz(q, FRAC_PI_2);
        self.out.add_global_phase(-FRAC_PI_4);
    }

    fn gate(&mut self, g: &Gate) -> Result<()> {
        let flips: Vec<usize> = g.controls.iter().filter(|c| !c.polarity).map(|c| c.qubit).collect();
        for &q in &flips {
            self.x(q);
        }
        let controls: Vec<usize> = g.controls.iter().map(|c| c.qubit).collect();
        match &g.kind {
            GateKind::X => self.mcx(&controls, g.targets[0]),
            GateKind::Z => {
                let t = g.targets[0];
                if controls.is_empty() {
                    self.rz(t, PI);
                } else {
                    self.h(t);
                    self.mcx(&controls, t);
                    self.h(t);
                }
            }
            GateKind::Swap => {
                let (a, b) = (g.targets[0], g.targets[1]);
                self.cx(b, a);
                let mut inner = controls.clone();
                inner.push(a);
                if controls.is_empty() {
                    self.cx(a, b);
                } else {
                    self.mcx(&inner, b);
                }
                self.cx(b, a);
            }
            GateKind::I => {
                if controls.is_empty() {
                    self.push(GateKind::I, g.targets[0], vec![]);
                }
            }
            kind => {
                let m = kind.matrix();
                self.controlled_one_qubit(&m, &controls, g.targets[0])?;
            }
        }
        for &q in flips.iter().rev() {
            self.x(q);
        }
        Ok(())
    }

    /// Toffoli with 6 CNOTs and T/T† phases.
    fn ccx(&mut self, a: usize, b: usize, t: usize) {
        let tt = FRAC_PI_4;
        self.h(t);
        self.cx(b, t);
        self.rz(t, -tt);
        self.cx(a, t);
        self.rz(t, tt);
        self.cx(b, t);
        self.rz(t, -tt);
        self.cx(a, t);
        self.rz(b, tt);
        self.rz(t, tt);
        self.h(t);
        self.cx(a, b);
        self.rz(a, tt);
        self.rz(b, -tt);
        self.cx(a, b);
    }

    /// `AND` of `controls` into the work chain; returns the qubit holding it
    /// and the Toffolis to undo.
    fn and_ladder(&mut self, controls: &[usize]) -> (usize, Vec<[usize; 3]>) {
        debug_assert!(controls.len() >= 2);
        let mut undo = Vec::new();
        let mut acc = controls[0];
        for (i, &c) in controls[1..].iter().enumerate() {
            let w = self.work[i];
            self.ccx(acc, c, w);
            undo.push([acc, c, w]);
            acc = w;
        }
        (acc, undo)
    }

    fn unwind(&mut self, undo: Vec<[usize; 3]>) {
        for [a, b, w] in undo.into_iter().rev() {
            self.ccx(a, b, w);
        }
    }

    fn mcx(&mut self, controls: &[usize], t: usize) {
        match controls {
            [] => self.x(t),
            [c] => self.cx(*c, t),
            [a, b] => self.ccx(*a, *b, t),
            _ => {
                let (head, last) = controls.split_at(controls.len() - 1);
                let (acc, undo) = self.and_ladder(head);
                self.ccx(acc, last[0], t);
                self.unwind(undo);
            }
        }
    }

    fn controlled_one_qubit(&mut self, u: &Matrix, controls: &[usize], t: usize) -> Result<()> {
        match controls {
            [] => {
                self.one_qubit(u, t);
                Ok(())
            }
            [c] => {
                self.single_controlled(u, *c, t);
                Ok(())
            }
            _ => {
                let (acc, undo) = self.and_ladder(controls);
                self.single_controlled(u, acc, t);
                self.unwind(undo);
                Ok(())
            }
        }
    }

    /// Any 2×2 unitary as at most five `rz`/`sx`/`x` gates plus a global phase.
    fn one_qubit(&mut self, u: &Matrix, q: usize) {
        let (seq, phase) = one_qubit_sequence(u);
        for op in seq {
            match op {
                Op1::Rz(phi) => self.rz(q, phi),
                Op1::Sx => self.sx(q),
                Op1::X => self.x(q),
            }
        }
        self.out.add_global_phase(phase);
    }

    /// `C-U = (phase α on c)·A·X·B·X·C` with `ABC = I`.
    fn single_controlled(&mut self, u: &Matrix, c: usize, t: usize) {
        let z = zyz(u);
        if z.gamma.abs() < ANGLE_EPS && (z.beta + z.delta).abs() < ANGLE_EPS {
            self.rz(c, z.alpha);
            return;
        }
        if z.gamma.abs() < ANGLE_EPS {
            // Diagonal: U = e^{iα}·diag(e^{-iλ/2}, e^{iλ/2}), λ = β + δ.
            let lambda = z.beta + z.delta;
            self.rz(c, z.alpha - lambda / 2.0);
            self.rz(t, lambda / 2.0);
            self.cx(c, t);
            self.rz(t, -lambda / 2.0);
            self.cx(c, t);
            self.rz(c, lambda / 2.0);
            return;
        }
        let a = &rz_s(z.beta) * &gates::ry(z.gamma / 2.0);
        let b = &gates::ry(-z.gamma / 2.0) * &rz_s(-(z.delta + z.beta) / 2.0);
        let cm = rz_s((z.delta - z.beta) / 2.0);
        self.one_qubit(&cm, t);
        self.cx(c, t);
        self.one_qubit(&b, t);
        self.cx(c, t);
        self.one_qubit(&a, t);
        self.rz(c, z.alpha);
    }
}

fn rz_s(theta: f64) -> Matrix {
    gates::rz_symmetric(theta)
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Op1 {
    Rz(f64),
    Sx,
    X,
}

/// `U = e^{iα}·Rz_s(β)·Ry(γ)·Rz_s(δ)`.
#[derive(Clone, Copy, Debug)]
struct Zyz {
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
}

fn zyz(u: &Matrix) -> Zyz {
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    let alpha = det.arg() / 2.0;
    let v = u.scale(Complex::from_polar(1.0, -alpha));
    let gamma = 2.0 * v[(1, 0)].norm().atan2(v[(0, 0)].norm());
    let eps = 1e-12;
    let (beta, delta) = if v[(0, 0)].norm() < eps {
        let s = v[(1, 0)].arg();
        (s, -s)
    } else if v[(1, 0)].norm() < eps {
        let p = v[(1, 1)].arg();
        (p, p)
    } else {
        let p = v[(1, 1)].arg();
        let s = v[(1, 0)].arg();
        (p + s, p - s)
    };
    Zyz {
        alpha,
        beta,
        gamma,
        delta,
    }
}

fn sequence_matrix(seq: &[Op1]) -> Matrix {
    seq.iter().fold(Matrix::identity(2), |acc, op| {
        let m = match op {
            Op1::Rz(phi) => gates::rz(*phi),
            Op1::Sx => gates::sx(),
            Op1::X => gates::x(),
        };
        &m * &acc
    })
}

/// Gate sequence (time order) and global phase with `U = e^{iγ}·Π seq`.
fn one_qubit_sequence(u: &Matrix) -> (Vec<Op1>, f64) {
    let eps = 1e-12;
    let (u00, u01, u10, u11) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
    let seq = if u01.norm() < eps && u10.norm() < eps {
        vec![Op1::Rz(u11.arg() - u00.arg())]
    } else if u00.norm() < eps && u11.norm() < eps {
        // [[0, b], [c, 0]] = c·X·diag(1, b/c)
        vec![Op1::Rz(u01.arg() - u10.arg()), Op1::X]
    } else if let Some(seq) = known_sequence(u) {
        seq
    } else {
        // U ∝ P(φ+π)·SX·P(θ+π)·SX·P(λ) for U ∝ U3(θ, φ, λ).
        let theta = 2.0 * u10.norm().atan2(u00.norm());
        let a = u00.arg();
        let phi = u10.arg() - a;
        let lambda = (-u01).arg() - a;
        vec![
            Op1::Rz(lambda),
            Op1::Sx,
            Op1::Rz(theta + PI),
            Op1::Sx,
            Op1::Rz(phi + PI),
        ]
    };
    let m = sequence_matrix(&seq);
    let phase = phase_between(u.data(), m.data()).expect("nonzero unitary");
    debug_assert!(u.approx_eq(&m.scale(phase), 1e-9), "one-qubit lowering failed");
    (seq, phase.arg())
}

fn known_sequence(u: &Matrix) -> Option<Vec<Op1>> {
    let candidates = [
        vec![Op1::Sx],
        vec![Op1::Rz(FRAC_PI_2), Op1::Sx, Op1::Rz(FRAC_PI_2)],
        vec![Op1::Rz(PI), Op1::Sx, Op1::Rz(PI)],
    ];
    candidates
        .into_iter()
        .find(|seq| u.approx_eq_up_to_phase(&sequence_matrix(seq), 1e-12))
}
