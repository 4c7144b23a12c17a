//! Lowering to the five-gate device basis, layout, routing and verification.

mod coupling;
mod decompose;
mod layout;
mod route;
mod verify;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::circuit::Circuit;
use crate::error::Result;

pub use coupling::CouplingMap;
pub use decompose::{decompose_to_basis, is_basis_circuit, is_basis_gate, MAX_WORK_QUBITS};
pub use layout::{hardware_aware_layout, interaction_counts, Layout};
pub use route::{respects_coupling, route, Routed, LOOKAHEAD};
pub use verify::{verify_equivalence, Embedding, CANDIDATE_MAX_QUBITS};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Metrics {
    pub depth: usize,
    pub total_gates: usize,
    pub two_qubit_gates: usize,
    pub swaps: usize,
    pub gate_counts: BTreeMap<String, usize>,
}

pub fn metrics(circuit: &Circuit) -> Metrics {
    Metrics {
        depth: circuit.depth(),
        total_gates: circuit.len(),
        two_qubit_gates: circuit.multi_qubit_gate_count(),
        swaps: 0,
        gate_counts: circuit.gate_counts(),
    }
}

pub fn routed_metrics(routed: &Routed) -> Metrics {
    Metrics {
        swaps: routed.swaps,
        ..metrics(&routed.circuit)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LayoutStrategy {
    Identity,
    HardwareAware,
}

#[derive(Clone, Debug)]
pub struct Transpiled {
    pub basis: Circuit,
    pub routed: Routed,
}

impl Transpiled {
    /// Device qubit holding logical qubit `q` at the end.
    pub fn final_position(&self, q: usize) -> usize {
        self.routed.final_layout.physical(q)
    }

    /// Embedding of the original `n`-qubit circuit into the routed one.
    pub fn embedding(&self, n: usize) -> Embedding {
        Embedding::from_layouts(
            self.routed.initial_layout.as_slice(),
            self.routed.final_layout.as_slice(),
            n,
        )
    }
}

/// `decompose_to_basis`, then layout, then `route`.
pub fn transpile(circuit: &Circuit, coupling: &CouplingMap, strategy: LayoutStrategy) -> Result<Transpiled> {
    let basis = decompose_to_basis(circuit)?;
    let layout = match strategy {
        LayoutStrategy::Identity => Layout::identity(basis.n_qubits()),
        LayoutStrategy::HardwareAware => hardware_aware_layout(&basis, coupling)?,
    };
    let routed = route(&basis, coupling, &layout)?;
    Ok(Transpiled { basis, routed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::{walk_step, WalkGraph};

    fn melbourne() -> CouplingMap {
        include_str!("../../../../configs/melbourne.map").parse().unwrap()
    }

    #[test]
    fn empty_metrics() {
        let m = metrics(&Circuit::new(3).unwrap());
        assert_eq!((m.depth, m.total_gates, m.two_qubit_gates, m.swaps), (0, 0, 0, 0));
    }

    #[test]
    fn metrics_grow_under_append() {
        let mut c = Circuit::new(2).unwrap();
        let mut last = metrics(&c);
        for step in 0..6 {
            if step % 2 == 0 {
                c.cx(0, 1);
            } else {
                c.sx(step % 2);
            }
            let m = metrics(&c);
            assert!(m.depth >= last.depth && m.total_gates > last.total_gates);
            assert!(m.two_qubit_gates >= last.two_qubit_gates);
            last = m;
        }
    }

    #[test]
    fn walk_circuits_survive_the_pipeline() {
        let map = melbourne();
        for g in [
            WalkGraph::Hypercube { dim: 4 },
            WalkGraph::Lattice2D { side: 4 },
            WalkGraph::CompleteBipartite { nodes: 8 },
            WalkGraph::Complete { nodes: 8 },
        ] {
            let w = walk_step(&g).unwrap();
            for strategy in [LayoutStrategy::Identity, LayoutStrategy::HardwareAware] {
                let t = transpile(&w, &map, strategy).unwrap();
                assert!(respects_coupling(&t.routed.circuit, &map));
                assert!(is_basis_circuit(&t.routed.circuit));
                let e = t.embedding(w.n_qubits());
                assert!(
                    verify_equivalence(&w, &t.routed.circuit, &e, 1e-8).unwrap(),
                    "{g} {strategy:?}"
                );
            }
        }
    }

    #[test]
    fn routing_keeps_one_qubit_gate_count() {
        let w = walk_step(&WalkGraph::Lattice2D { side: 4 }).unwrap();
        let t = transpile(&w, &melbourne(), LayoutStrategy::HardwareAware).unwrap();
        let single = |c: &Circuit| c.gates().iter().filter(|g| g.controls.is_empty()).count();
        assert_eq!(single(&t.basis), single(&t.routed.circuit));
        assert_eq!(
            t.routed.circuit.multi_qubit_gate_count(),
            t.basis.multi_qubit_gate_count() + 3 * t.routed.swaps
        );
    }
}
