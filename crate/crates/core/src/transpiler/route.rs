//! Swap insertion so every two-qubit gate acts on a coupling edge.

use super::coupling::CouplingMap;
use super::decompose::is_basis_gate;
use super::layout::Layout;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::statevector::Control;

/// Two-qubit gates considered when scoring a candidate swap.
pub const LOOKAHEAD: usize = 20;

#[derive(Clone, Debug)]
pub struct Routed {
    /// Circuit on the device register.
    pub circuit: Circuit,
    pub initial_layout: Layout,
    /// Physical position of every logical qubit after the last gate.
    pub final_layout: Layout,
    pub swaps: usize,
}

/// Routes a basis-only circuit onto `coupling`, starting from `layout`.
///
/// Whenever the next CNOT is not on an edge, the router inserts the swap on an
/// edge touching one of its qubits that brings the pair closer, choosing the
/// one that minimizes the summed distance of the next [`LOOKAHEAD`] CNOTs
/// (ties to the lowest edge). Each swap is emitted as three CNOTs.
pub fn route(circuit: &Circuit, coupling: &CouplingMap, layout: &Layout) -> Result<Routed> {
    let n = circuit.n_qubits();
    let np = coupling.n_qubits();
    if n > np {
        return Err(Error::Capacity(format!(
            "{n}-qubit circuit does not fit the {np}-qubit device"
        )));
    }
    if layout.len() != n {
        return Err(Error::arg(format!(
            "layout places {} qubits, circuit has {n}",
            layout.len()
        )));
    }
    if let Some(g) = circuit.gates().iter().find(|g| !is_basis_gate(g)) {
        return Err(Error::arg(format!(
            "route expects a basis circuit, found {}",
            g.label()
        )));
    }
    let mut l2p = layout.as_slice().to_vec();
    let mut p2l: Vec<Option<usize>> = vec![None; np];
    for (l, &p) in l2p.iter().enumerate() {
        p2l[p] = Some(l);
    }
    let mut out = Circuit::new(np)?;
    if let Some(name) = circuit.name() {
        out = out.named(format!("{name}-routed"));
    }
    out.add_global_phase(circuit.global_phase());
    let gates = circuit.gates();
    let two_qubit: Vec<usize> = (0..gates.len()).filter(|&i| !gates[i].controls.is_empty()).collect();
    let mut next_2q = 0;
    let mut swaps = 0;
    let pair = |g: &Gate| (g.controls[0].qubit, g.targets[0]);
    for g in gates {
        if g.controls.is_empty() {
            let mut h = g.clone();
            h.targets = vec![l2p[g.targets[0]]];
            out.push(h)?;
            continue;
        }
        next_2q += 1;
        let (c, t) = pair(g);
        while coupling.distance(l2p[c], l2p[t]) > 1 {
            let current = coupling.distance(l2p[c], l2p[t]);
            let upcoming = &two_qubit[next_2q..(next_2q + LOOKAHEAD).min(two_qubit.len())];
            let mut best: Option<((usize, usize), (usize, usize))> = None;
            for e in candidate_edges(coupling, l2p[c], l2p[t]) {
                let swapped = |p: usize| {
                    if p == e.0 {
                        e.1
                    } else if p == e.1 {
                        e.0
                    } else {
                        p
                    }
                };
                let front = coupling.distance(swapped(l2p[c]), swapped(l2p[t]));
                if front >= current {
                    continue;
                }
                let ahead: usize = upcoming
                    .iter()
                    .map(|&j| {
                        let (a, b) = pair(&gates[j]);
                        coupling.distance(swapped(l2p[a]), swapped(l2p[b]))
                    })
                    .sum();
                let key = (front, ahead);
                if best.is_none_or(|(k, _)| key < k) {
                    best = Some((key, e));
                }
            }
            let (_, (a, b)) = best.expect("a shortest-path step always exists in a connected map");
            out.cx(a, b).cx(b, a).cx(a, b);
            swaps += 1;
            let (la, lb) = (p2l[a], p2l[b]);
            p2l[a] = lb;
            p2l[b] = la;
            if let Some(l) = la {
                l2p[l] = b;
            }
            if let Some(l) = lb {
                l2p[l] = a;
            }
        }
        let mut h = g.clone();
        h.targets = vec![l2p[t]];
        h.controls = vec![Control::on(l2p[c])];
        out.push(h)?;
    }
    Ok(Routed {
        circuit: out,
        initial_layout: layout.clone(),
        final_layout: Layout::new(l2p, np)?,
        swaps,
    })
}

/// Edges incident to `a` or `b`, ascending and without duplicates.
fn candidate_edges(coupling: &CouplingMap, a: usize, b: usize) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> = [a, b]
        .iter()
        .flat_map(|&p| coupling.neighbors(p).iter().map(move |&q| (p.min(q), p.max(q))))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    edges
}

/// True when every two-qubit gate acts on a coupling edge.
pub fn respects_coupling(circuit: &Circuit, coupling: &CouplingMap) -> bool {
    circuit.gates().iter().all(|g| {
        let qs: Vec<usize> = g.qubits().collect();
        match qs.as_slice() {
            [_] => true,
            [a, b] => coupling.has_edge(*a, *b),
            _ => false,
        }
    })
}
