//! Quantum-walk search (MNRS) with a phase-estimation reflection, and a
//! Grover baseline.
//!
//! Search register: walk coin and node registers first (see [`crate::walk`]),
//! then `t` theta qubits.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::ops::Range;

use serde::{Serialize, Serializer};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::spectral::{phase_estimation, PhaseEstimationSpec};
use crate::statevector::{self, check_width, Control, Counts, StateVector};
use crate::walk::{walk_step, WalkGraph};

/// Distinct node values of a fixed register width, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedSet {
    width: usize,
    values: Vec<usize>,
}

impl MarkedSet {
    pub fn from_values(values: &[usize], width: usize) -> Result<Self> {
        let mut v = values.to_vec();
        v.sort_unstable();
        for w in v.windows(2) {
            if w[0] == w[1] {
                return Err(Error::arg(format!(
                    "marked node {} listed twice",
                    statevector::label(w[0], width)
                )));
            }
        }
        if let Some(&big) = v.last() {
            if big >= 1 << width {
                return Err(Error::arg(format!("marked node {big} does not fit in {width} bits")));
            }
        }
        Ok(MarkedSet { width, values: v })
    }

    pub fn from_labels<S: AsRef<str>>(labels: &[S], width: usize) -> Result<Self> {
        let values = labels
            .iter()
            .map(|l| statevector::parse_label(l.as_ref().trim(), width))
            .collect::<Result<Vec<_>>>()?;
        Self::from_values(&values, width)
    }

    /// Comma-separated MSB-first labels, e.g. `"1011,1111"`.
    pub fn parse(list: &str, width: usize) -> Result<Self> {
        let labels: Vec<&str> = list.split(',').filter(|s| !s.trim().is_empty()).collect();
        Self::from_labels(&labels, width)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, value: usize) -> bool {
        self.values.binary_search(&value).is_ok()
    }

    pub fn labels(&self) -> Vec<String> {
        self.values.iter().map(|&v| statevector::label(v, self.width)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub graph: WalkGraph,
    pub marked: MarkedSet,
    pub theta_qubits: usize,
    pub iterations: usize,
    pub shots: u64,
    pub seed: u64,
}

impl SearchConfig {
    /// Config with the pinned theta width for `graph`, 1024 shots and seed 0.
    pub fn new(graph: WalkGraph, marked: MarkedSet, iterations: usize) -> Self {
        SearchConfig {
            theta_qubits: default_theta_qubits(&graph),
            graph,
            marked,
            iterations,
            shots: 1024,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.graph.validate()?;
        if self.theta_qubits == 0 {
            return Err(Error::arg("theta register needs at least one qubit"));
        }
        if self.marked.is_empty() {
            return Err(Error::arg("search needs at least one marked node"));
        }
        if self.marked.width() != self.graph.node_qubits() {
            return Err(Error::arg(format!(
                "marked labels have {} bits but {} has {} node qubits",
                self.marked.width(),
                self.graph,
                self.graph.node_qubits()
            )));
        }
        check_width(self.graph.width() + self.theta_qubits)
    }

    pub fn layout(&self) -> SearchLayout {
        SearchLayout::new(&self.graph, self.theta_qubits)
    }
}

/// Smallest theta width whose traces reproduce the reference probabilities.
pub fn default_theta_qubits(graph: &WalkGraph) -> usize {
    match graph {
        WalkGraph::Hypercube { .. } | WalkGraph::Lattice2D { .. } => 3,
        WalkGraph::CompleteBipartite { .. } | WalkGraph::Complete { .. } => 2,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchLayout {
    pub coin: Range<usize>,
    pub node: Range<usize>,
    pub theta: Range<usize>,
}

impl SearchLayout {
    pub fn new(graph: &WalkGraph, t: usize) -> Self {
        let regs = graph.registers();
        let w = regs.width();
        SearchLayout {
            coin: regs.coin,
            node: regs.node,
            theta: w..w + t,
        }
    }

    pub fn width(&self) -> usize {
        self.theta.end
    }

    pub fn node_qubits(&self) -> Vec<usize> {
        self.node.clone().collect()
    }
}

fn serialize_counts<S: Serializer>(counts: &Counts, s: S) -> std::result::Result<S::Ok, S::Error> {
    counts.as_map().serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub graph: String,
    pub marked: Vec<String>,
    pub t: usize,
    pub iterations: usize,
    /// Marked-node probability after each iteration; index 0 is the initial state.
    pub trace: Vec<f64>,
    pub marked_traces: BTreeMap<String, Vec<f64>>,
    pub top_states: Vec<String>,
    pub top_probabilities: Vec<f64>,
    #[serde(serialize_with = "serialize_counts")]
    pub counts: Counts,
    pub shots: u64,
    pub hitting_time: usize,
    pub peak_probability: f64,
    pub epsilon: f64,
    pub theoretical_iterations: f64,
}

impl SearchResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("search result serializes")
    }
}

/// Negates every amplitude whose node register holds a marked value.
pub fn phase_oracle(graph: &WalkGraph, marked: &MarkedSet) -> Result<Circuit> {
    graph.validate()?;
    let regs = graph.registers();
    if marked.width() != regs.node.len() {
        return Err(Error::arg(format!(
            "marked labels have {} bits, node register has {}",
            marked.width(),
            regs.node.len()
        )));
    }
    let mut circ = Circuit::new(regs.width())?.named("oracle");
    let node: Vec<usize> = regs.node.clone().collect();
    for &v in marked.values() {
        append_value_flip(&mut circ, &node, v);
    }
    Ok(circ)
}

/// Phase −1 on the basis value `value` of `reg`, identity elsewhere.
fn append_value_flip(circ: &mut Circuit, reg: &[usize], value: usize) {
    let (&target, rest) = reg.split_last().expect("register is non-empty");
    let controls: Vec<Control> = rest
        .iter()
        .enumerate()
        .map(|(bit, &q)| Control {
            qubit: q,
            polarity: value >> bit & 1 == 1,
        })
        .collect();
    let target_on = value >> (reg.len() - 1) & 1 == 1;
    if !target_on {
        circ.x(target);
    }
    circ.mcz(&controls, target);
    if !target_on {
        circ.x(target);
    }
}

/// `PE(W)`, a phase flip on every nonzero theta value, then `PE(W)†`.
///
/// The flip is realized as −1 on theta = 0 plus a global phase of π, so the
/// operator is exactly `2Π₀ − I` where `Π₀` projects onto phase-zero
/// eigenvectors of the walk (for eigenphases representable in `t` bits).
pub fn reflection_step(graph: &WalkGraph, t: usize) -> Result<Circuit> {
    if t == 0 {
        return Err(Error::arg("theta register needs at least one qubit"));
    }
    let layout = SearchLayout::new(graph, t);
    check_width(layout.width())?;
    let walk = walk_step(graph)?;
    let spec = PhaseEstimationSpec {
        unit: walk,
        unit_qubits: (0..graph.width()).collect(),
        theta_qubits: layout.theta.clone().collect(),
    };
    let pe = phase_estimation(&spec)?;
    let mut circ = Circuit::new(layout.width())?.named(format!("reflect-{graph}-t{t}"));
    circ.append(&pe)?;
    let theta: Vec<usize> = layout.theta.clone().collect();
    append_value_flip(&mut circ, &theta, 0);
    circ.add_global_phase(PI);
    circ.append(&pe.inverse())?;
    Ok(circ)
}

/// Hadamards on coin and node: the uniform superposition over edges.
pub fn initial_state_circuit(layout: &SearchLayout) -> Result<Circuit> {
    let mut circ = Circuit::new(layout.width())?.named("init");
    for q in layout.coin.start..layout.node.end {
        circ.h(q);
    }
    Ok(circ)
}

/// One search iteration: oracle, then reflection.
pub fn search_iteration(config: &SearchConfig) -> Result<Circuit> {
    config.validate()?;
    let layout = config.layout();
    let mut circ = Circuit::new(layout.width())?.named("iteration");
    circ.append(&phase_oracle(&config.graph, &config.marked)?)?;
    circ.append(&reflection_step(&config.graph, config.theta_qubits)?)?;
    Ok(circ)
}

/// Initialization followed by `config.iterations` search iterations.
pub fn search_circuit(config: &SearchConfig) -> Result<Circuit> {
    let layout = config.layout();
    let mut circ = initial_state_circuit(&layout)?.named(format!("mnrs-{}", config.graph));
    circ.append(&search_iteration(config)?.power(config.iterations))?;
    Ok(circ)
}

/// Index of the first maximum.
fn argmax(values: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, &v) in values.iter().enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best
}

struct Trace {
    total: Vec<f64>,
    per_state: Vec<Vec<f64>>,
    top: Vec<(usize, f64)>,
}

impl Trace {
    fn new(n_marked: usize) -> Self {
        Trace {
            total: Vec::new(),
            per_state: vec![Vec::new(); n_marked],
            top: Vec::new(),
        }
    }

    fn record(&mut self, state: &StateVector, node: &[usize], marked: &MarkedSet) -> Result<()> {
        let dist = state.marginal_probabilities(node)?;
        let mut total = 0.0;
        for (j, &v) in marked.values().iter().enumerate() {
            self.per_state[j].push(dist[v]);
            total += dist[v];
        }
        self.total.push(total);
        self.top.push(argmax(&dist));
        Ok(())
    }
}

fn finish_result(
    graph: String,
    marked: &MarkedSet,
    t: usize,
    trace: Trace,
    counts: Counts,
    n_nodes: usize,
) -> SearchResult {
    let (hitting_time, peak_probability) = argmax(&trace.total);
    let labels = marked.labels();
    let width = marked.width();
    SearchResult {
        graph,
        t,
        iterations: trace.total.len() - 1,
        marked_traces: labels.iter().cloned().zip(trace.per_state).collect(),
        marked: labels,
        top_states: trace.top.iter().map(|&(v, _)| statevector::label(v, width)).collect(),
        top_probabilities: trace.top.iter().map(|&(_, p)| p).collect(),
        trace: trace.total,
        shots: counts.shots(),
        counts,
        hitting_time,
        peak_probability,
        epsilon: marked.len() as f64 / n_nodes as f64,
        theoretical_iterations: theoretical_iterations(n_nodes, marked.len()),
    }
}

pub fn mnrs_search(config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let layout = config.layout();
    let node = layout.node_qubits();
    let step = search_iteration(config)?;
    let mut state = initial_state_circuit(&layout)?.simulate()?;
    let mut trace = Trace::new(config.marked.len());
    trace.record(&state, &node, &config.marked)?;
    for _ in 0..config.iterations {
        step.run(&mut state)?;
        trace.record(&state, &node, &config.marked)?;
    }
    let counts = state.sample(&node, config.shots, config.seed)?;
    Ok(finish_result(
        config.graph.to_string(),
        &config.marked,
        config.theta_qubits,
        trace,
        counts,
        config.graph.node_count(),
    ))
}

/// Runs the trace to `max_iters` and returns the first iteration of maximal
/// marked probability with that probability.
pub fn hitting_time(graph: &WalkGraph, marked: &MarkedSet, t: usize, max_iters: usize) -> Result<(usize, f64)> {
    if max_iters == 0 {
        return Err(Error::arg("max_iters must be at least 1"));
    }
    let config = SearchConfig {
        graph: *graph,
        marked: marked.clone(),
        theta_qubits: t,
        iterations: max_iters,
        shots: 1,
        seed: 0,
    };
    let r = mnrs_search(&config)?;
    Ok((r.hitting_time, r.peak_probability))
}

/// `1/√ε` with `ε = m/N`.
pub fn theoretical_iterations(n_nodes: usize, n_marked: usize) -> f64 {
    (n_nodes as f64 / n_marked as f64).sqrt()
}

/// `⌈1/√ε⌉`, the default trace window for hitting-time extraction.
pub fn search_horizon(n_nodes: usize, n_marked: usize) -> usize {
    let x = theoretical_iterations(n_nodes, n_marked);
    (x - 1e-9).ceil().max(1.0) as usize
}

/// `⌊(π/4)√N⌋`.
pub fn grover_iterations(n_qubits: usize) -> usize {
    (PI / 4.0 * ((1u64 << n_qubits) as f64).sqrt()).floor() as usize
}

/// Diffusion `2|s⟩⟨s| − I` on `n` qubits.
pub fn grover_diffusion(n: usize) -> Result<Circuit> {
    let mut circ = Circuit::new(n)?.named("diffusion");
    let reg: Vec<usize> = (0..n).collect();
    for &q in &reg {
        circ.h(q);
    }
    append_value_flip(&mut circ, &reg, 0);
    for &q in &reg {
        circ.h(q);
    }
    circ.add_global_phase(PI);
    Ok(circ)
}

pub fn grover_circuit(n: usize, marked: &MarkedSet, iterations: usize) -> Result<Circuit> {
    if marked.width() != n {
        return Err(Error::arg(format!(
            "marked labels have {} bits, register has {n}",
            marked.width()
        )));
    }
    let reg: Vec<usize> = (0..n).collect();
    let mut step = Circuit::new(n)?;
    for &v in marked.values() {
        append_value_flip(&mut step, &reg, v);
    }
    step.append(&grover_diffusion(n)?)?;
    let mut circ = Circuit::new(n)?.named(format!("grover-{n}"));
    for &q in &reg {
        circ.h(q);
    }
    circ.append(&step.power(iterations))?;
    Ok(circ)
}

/// Grover search for one marked label over `⌊(π/4)√N⌋` iterations.
pub fn grover_search(n_qubits: usize, marked_label: &str, shots: u64, seed: u64) -> Result<SearchResult> {
    grover_search_iterations(n_qubits, marked_label, grover_iterations(n_qubits), shots, seed)
}

pub fn grover_search_iterations(
    n_qubits: usize,
    marked_label: &str,
    iterations: usize,
    shots: u64,
    seed: u64,
) -> Result<SearchResult> {
    if n_qubits == 0 {
        return Err(Error::arg("grover search needs at least one qubit"));
    }
    check_width(n_qubits)?;
    let marked = MarkedSet::from_labels(&[marked_label], n_qubits)?;
    let reg: Vec<usize> = (0..n_qubits).collect();
    let mut trace = Trace::new(1);
    let mut state = grover_circuit(n_qubits, &marked, 0)?.simulate()?;
    trace.record(&state, &reg, &marked)?;
    let step = {
        let full = grover_circuit(n_qubits, &marked, 1)?;
        let mut s = Circuit::new(n_qubits)?;
        for g in &full.gates()[n_qubits..] {
            s.push(g.clone())?;
        }
        s.add_global_phase(full.global_phase());
        s
    };
    for _ in 0..iterations {
        step.run(&mut state)?;
        trace.record(&state, &reg, &marked)?;
    }
    let counts = state.sample(&reg, shots, seed)?;
    Ok(finish_result(
        format!("grover:{n_qubits}"),
        &marked,
        0,
        trace,
        counts,
        1 << n_qubits,
    ))
}
