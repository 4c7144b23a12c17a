//! Monte-Carlo Pauli-trajectory noise and readout error.
//!
//! Shot `s` draws gate errors and readout flips from its own noise stream and
//! its measurement from the same measurement stream ideal sampling uses, so a
//! zero-noise model reproduces [`StateVector::sample`] exactly.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::{Circuit, Program};
use crate::error::{Error, Result};
use crate::rng::{self, Stream};
use crate::statevector::{check_subset, Cdf, Counts, Pauli, StateVector};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NoiseModel {
    /// Per qubit, after each one-qubit gate.
    pub p1: f64,
    /// Per involved qubit, after each gate touching two or more qubits.
    pub p2: f64,
    /// Per measured bit.
    pub p_ro: f64,
}

impl NoiseModel {
    pub fn new(p1: f64, p2: f64, p_ro: f64) -> Result<Self> {
        for (name, p) in [("p1", p1), ("p2", p2), ("p_ro", p_ro)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::arg(format!("{name} = {p} is not a probability")));
            }
        }
        Ok(NoiseModel { p1, p2, p_ro })
    }

    pub fn ideal() -> Self {
        NoiseModel {
            p1: 0.0,
            p2: 0.0,
            p_ro: 0.0,
        }
    }

    /// Parses `p1,p2,p_ro`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::arg(format!("noise model {text:?} must be p1,p2,p_ro")));
        }
        let mut v = [0.0; 3];
        for (slot, part) in v.iter_mut().zip(&parts) {
            *slot = part
                .parse()
                .map_err(|_| Error::arg(format!("noise parameter {part:?} is not a number")))?;
        }
        Self::new(v[0], v[1], v[2])
    }

    fn gate_probability(&self, arity: usize) -> f64 {
        if arity >= 2 {
            self.p2
        } else {
            self.p1
        }
    }
}

struct ErrorEvent {
    step: usize,
    qubit: usize,
    pauli: Pauli,
}

fn draw_events(program: &Program, model: &NoiseModel, rng: &mut impl Rng) -> Vec<ErrorEvent> {
    let mut events = Vec::new();
    if model.p1 == 0.0 && model.p2 == 0.0 {
        return events;
    }
    for (i, step) in program.steps().iter().enumerate() {
        let p = model.gate_probability(step.qubits.len());
        if p == 0.0 {
            continue;
        }
        for &q in &step.qubits {
            if rng.random::<f64>() < p {
                let pauli = match rng.random_range(0..3) {
                    0 => Pauli::X,
                    1 => Pauli::Y,
                    _ => Pauli::Z,
                };
                events.push(ErrorEvent {
                    step: i,
                    qubit: q,
                    pauli,
                });
            }
        }
    }
    events
}

fn run_trajectory(program: &Program, n_qubits: usize, events: &[ErrorEvent]) -> Result<StateVector> {
    let mut state = StateVector::new_zero(n_qubits)?;
    let mut next = events.iter().peekable();
    for (i, step) in program.steps().iter().enumerate() {
        state.apply_unchecked(&step.kernel);
        while let Some(e) = next.next_if(|e| e.step == i) {
            state.apply_pauli(e.qubit, e.pauli);
        }
    }
    program.finish(&mut state);
    Ok(state)
}

/// Runs `shots` noisy trajectories of `circuit` from `|0…0⟩` and measures
/// `measured` once per trajectory.
pub fn noisy_sample(
    circuit: &Circuit,
    measured: &[usize],
    model: &NoiseModel,
    shots: u64,
    seed: u64,
) -> Result<Counts> {
    if shots == 0 {
        return Err(Error::arg("shots must be at least 1"));
    }
    NoiseModel::new(model.p1, model.p2, model.p_ro)?;
    let n = circuit.n_qubits();
    check_subset(n, measured)?;
    let program = Program::new(circuit);
    let ideal = Cdf::new(&circuit.simulate()?.marginal_probabilities(measured)?);
    let outcomes: Vec<usize> = (0..shots)
        .into_par_iter()
        .map(|shot| -> Result<usize> {
            let mut noise = rng::stream(seed, shot, Stream::Noise);
            let mut measure = rng::stream(seed, shot, Stream::Measure);
            let events = draw_events(&program, model, &mut noise);
            let mut outcome = if events.is_empty() {
                ideal.draw(measure.random::<f64>())
            } else {
                let state = run_trajectory(&program, n, &events)?;
                Cdf::new(&state.marginal_probabilities(measured)?).draw(measure.random::<f64>())
            };
            if model.p_ro > 0.0 {
                for bit in 0..measured.len() {
                    if noise.random::<f64>() < model.p_ro {
                        outcome ^= 1 << bit;
                    }
                }
            }
            Ok(outcome)
        })
        .collect::<Result<_>>()?;
    let mut counts = Counts::new(measured.len());
    for o in outcomes {
        counts.record(o);
    }
    Ok(counts)
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub model: NoiseModel,
    pub marked_probability: f64,
    pub shots: u64,
    #[serde(skip)]
    pub counts: Counts,
}

/// One [`noisy_sample`] per grid point, all with the same seed. The marked
/// probability is the frequency of outcomes in `marked` (values of the
/// measured register).
pub fn noise_sweep(
    circuit: &Circuit,
    measured: &[usize],
    marked: &[usize],
    grid: &[NoiseModel],
    shots: u64,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    grid.iter()
        .map(|model| {
            let counts = noisy_sample(circuit, measured, model, shots, seed)?;
            Ok(SweepRow {
                model: *model,
                marked_probability: marked_frequency(&counts, marked),
                shots,
                counts,
            })
        })
        .collect()
}

pub fn marked_frequency(counts: &Counts, marked: &[usize]) -> f64 {
    let hits: u64 = marked
        .iter()
        .map(|&v| counts.get(&crate::statevector::label(v, counts.width())))
        .sum();
    hits as f64 / counts.shots() as f64
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("p1,p2,p_ro,marked_probability,shots\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{:.6},{}\n",
            r.model.p1, r.model.p2, r.model.p_ro, r.marked_probability, r.shots
        ));
    }
    out
}
