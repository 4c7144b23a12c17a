//! Coined walks with a Grover coin on four regular graph families.
//!
//! Register layout for every family: coin qubits occupy `0..c`, node qubits
//! `c..c+n`. Register values use the crate-wide convention (lowest qubit is the
//! least-significant bit), so the MSB-first label of a node value is its
//! written binary name.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Range;

use serde::Serialize;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::statevector::Control;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum WalkGraph {
    /// `dim`-dimensional hypercube with `2^dim` nodes.
    Hypercube { dim: usize },
    /// `side x side` torus.
    Lattice2D { side: usize },
    /// Two halves of `nodes/2`, every cross pair connected.
    CompleteBipartite { nodes: usize },
    /// Every node adjacent to every node, itself included.
    Complete { nodes: usize },
}

/// Qubit ranges of a walk register.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkRegisters {
    pub coin: Range<usize>,
    pub node: Range<usize>,
}

impl WalkRegisters {
    pub fn width(&self) -> usize {
        self.node.end
    }

    pub fn node_qubits(&self) -> Vec<usize> {
        self.node.clone().collect()
    }
}

fn log2_exact(x: usize) -> Option<usize> {
    (x >= 1 && x.is_power_of_two()).then(|| x.trailing_zeros() as usize)
}

impl WalkGraph {
    /// Builds a graph from a family name (`hypercube`, `lattice`, `bipartite`,
    /// `complete`) and its size parameter (dimension, side, or node count).
    pub fn from_family(family: &str, size: usize) -> Result<Self> {
        let g = match family {
            "hypercube" => WalkGraph::Hypercube { dim: size },
            "lattice" | "lattice2d" | "torus" => WalkGraph::Lattice2D { side: size },
            "bipartite" | "complete-bipartite" => WalkGraph::CompleteBipartite { nodes: size },
            "complete" => WalkGraph::Complete { nodes: size },
            other => {
                return Err(Error::arg(format!(
                    "unknown graph family {other:?} (expected hypercube, lattice, bipartite or complete)"
                )))
            }
        };
        g.validate()?;
        Ok(g)
    }

    pub fn family(&self) -> &'static str {
        match self {
            WalkGraph::Hypercube { .. } => "hypercube",
            WalkGraph::Lattice2D { .. } => "lattice",
            WalkGraph::CompleteBipartite { .. } => "bipartite",
            WalkGraph::Complete { .. } => "complete",
        }
    }

    pub fn size_parameter(&self) -> usize {
        match *self {
            WalkGraph::Hypercube { dim } => dim,
            WalkGraph::Lattice2D { side } => side,
            WalkGraph::CompleteBipartite { nodes } | WalkGraph::Complete { nodes } => nodes,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            // The coin register needs log2(dim) qubits, so dim must be a power of two.
            WalkGraph::Hypercube { dim } => dim >= 2 && dim.is_power_of_two(),
            WalkGraph::Lattice2D { side } => side >= 2 && side.is_power_of_two(),
            WalkGraph::CompleteBipartite { nodes } | WalkGraph::Complete { nodes } => {
                nodes >= 4 && nodes.is_power_of_two()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::arg(format!(
                "{self}: size must be a power of two (hypercube dim >= 2, lattice side >= 2, node count >= 4)"
            )))
        }
    }

    pub fn node_count(&self) -> usize {
        match *self {
            WalkGraph::Hypercube { dim } => 1 << dim,
            WalkGraph::Lattice2D { side } => side * side,
            WalkGraph::CompleteBipartite { nodes } | WalkGraph::Complete { nodes } => nodes,
        }
    }

    pub fn degree(&self) -> usize {
        match *self {
            WalkGraph::Hypercube { dim } => dim,
            WalkGraph::Lattice2D { .. } => 4,
            WalkGraph::CompleteBipartite { nodes } => nodes / 2,
            WalkGraph::Complete { nodes } => nodes,
        }
    }

    pub fn coin_qubits(&self) -> usize {
        log2_exact(self.degree()).expect("validated degree is a power of two")
    }

    pub fn node_qubits(&self) -> usize {
        log2_exact(self.node_count()).expect("validated node count is a power of two")
    }

    pub fn registers(&self) -> WalkRegisters {
        let c = self.coin_qubits();
        WalkRegisters {
            coin: 0..c,
            node: c..c + self.node_qubits(),
        }
    }

    pub fn width(&self) -> usize {
        self.coin_qubits() + self.node_qubits()
    }

    /// Node reached from `node` along the edge selected by coin value `coin`.
    /// Listing every coin value yields the neighbour multiset of `node`.
    pub fn neighbor(&self, node: usize, coin: usize) -> usize {
        match *self {
            WalkGraph::Hypercube { dim } => node ^ (1 << (dim - 1 - coin)),
            WalkGraph::Lattice2D { side } => {
                let (x, y) = (node / side, node % side);
                let step = |v: usize, dec: bool| if dec { (v + side - 1) % side } else { (v + 1) % side };
                let (d, s) = (coin >> 1, coin & 1 == 1);
                let (x, y) = if d == 0 { (step(x, s), y) } else { (x, step(y, s)) };
                x * side + y
            }
            WalkGraph::CompleteBipartite { nodes } => {
                let half = nodes / 2;
                ((node & half) ^ half) | coin
            }
            WalkGraph::Complete { .. } => coin,
        }
    }

    pub fn neighbors(&self, node: usize) -> Vec<usize> {
        (0..self.degree()).map(|a| self.neighbor(node, a)).collect()
    }
}

impl fmt::Display for WalkGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family(), self.size_parameter())
    }
}

/// Grover coin `(2/d)J − I` on `c` qubits (`d = 2^c`).
///
/// Gate sequence: H-layer, X-layer, multi-controlled Z, X-layer, H-layer. That
/// sequence realizes `I − (2/d)J`; the circuit's global phase of π makes the
/// operator exactly `G`.
pub fn grover_coin(c: usize) -> Result<Circuit> {
    if c == 0 {
        return Err(Error::arg("grover coin needs at least one qubit"));
    }
    let mut circ = Circuit::new(c)?.named(format!("grover-coin-{c}"));
    for q in 0..c {
        circ.h(q);
    }
    for q in 0..c {
        circ.x(q);
    }
    let controls: Vec<Control> = (0..c - 1).map(Control::on).collect();
    circ.mcz(&controls, c - 1);
    for q in 0..c {
        circ.x(q);
    }
    for q in 0..c {
        circ.h(q);
    }
    circ.add_global_phase(PI);
    Ok(circ)
}

fn coin_pattern(coin: &Range<usize>, value: usize) -> Vec<Control> {
    coin.clone()
        .enumerate()
        .map(|(bit, q)| Control {
            qubit: q,
            polarity: value >> bit & 1 == 1,
        })
        .collect()
}

/// `|a⟩|v⟩ → |a⟩|v ⊕ e_a⟩`, where edge `a` flips the `a`-th written
/// (most-significant-first) bit of the node label.
pub fn shift_hypercube(dim: usize) -> Result<Circuit> {
    let graph = WalkGraph::Hypercube { dim };
    graph.validate()?;
    let regs = graph.registers();
    let mut circ = Circuit::new(regs.width())?.named(format!("shift-{graph}"));
    for a in 0..dim {
        let target = regs.node.start + (dim - 1 - a);
        circ.mcx(&coin_pattern(&regs.coin, a), target);
    }
    Ok(circ)
}

/// Adds one (mod `2^len`) to `reg` when `extra` controls hold.
fn increment(circ: &mut Circuit, reg: &[usize], extra: &[Control], decrement: bool) {
    // Highest bit first so lower bits still hold their old values.
    for k in (0..reg.len()).rev() {
        let mut controls = extra.to_vec();
        controls.extend(reg[..k].iter().map(|&q| Control {
            qubit: q,
            polarity: !decrement,
        }));
        circ.mcx(&controls, reg[k]);
    }
}

/// `|d,s⟩|x,y⟩ → |d,s⊕1⟩|x + (−1)^s δ_{d0}, y + (−1)^s δ_{d1}⟩` on a torus.
///
/// Coin qubit 0 holds `s`, coin qubit 1 holds `d`. The low half of the node
/// register holds `y`, the high half `x`, so the node value is `x·side + y`.
pub fn shift_lattice(side: usize) -> Result<Circuit> {
    let graph = WalkGraph::Lattice2D { side };
    graph.validate()?;
    let regs = graph.registers();
    let m = regs.node.len() / 2;
    let y: Vec<usize> = (regs.node.start..regs.node.start + m).collect();
    let x: Vec<usize> = (regs.node.start + m..regs.node.end).collect();
    let (s, d) = (regs.coin.start, regs.coin.start + 1);
    let mut circ = Circuit::new(regs.width())?.named(format!("shift-{graph}"));
    for (dir, reg) in [(false, &x), (true, &y)] {
        for dec in [false, true] {
            let extra = [
                Control {
                    qubit: d,
                    polarity: dir,
                },
                Control {
                    qubit: s,
                    polarity: dec,
                },
            ];
            increment(&mut circ, reg, &extra, dec);
        }
    }
    circ.x(s);
    Ok(circ)
}

/// `|c⟩|j₀j₁…⟩ → |j₁…⟩|(j₀⊕1)c⟩`: swap coin and node bits below the top
/// node bit, then flip the top node bit.
pub fn shift_bipartite(nodes: usize) -> Result<Circuit> {
    let graph = WalkGraph::CompleteBipartite { nodes };
    graph.validate()?;
    let regs = graph.registers();
    let mut circ = Circuit::new(regs.width())?.named(format!("shift-{graph}"));
    for (c, n) in regs.coin.clone().zip(regs.node.clone()) {
        circ.swap(c, n);
    }
    circ.x(regs.node.end - 1);
    Ok(circ)
}

/// `|c⟩|j⟩ → |j⟩|c⟩`.
pub fn shift_complete(nodes: usize) -> Result<Circuit> {
    let graph = WalkGraph::Complete { nodes };
    graph.validate()?;
    let regs = graph.registers();
    let mut circ = Circuit::new(regs.width())?.named(format!("shift-{graph}"));
    for (c, n) in regs.coin.clone().zip(regs.node.clone()) {
        circ.swap(c, n);
    }
    Ok(circ)
}

pub fn shift(graph: &WalkGraph) -> Result<Circuit> {
    match *graph {
        WalkGraph::Hypercube { dim } => shift_hypercube(dim),
        WalkGraph::Lattice2D { side } => shift_lattice(side),
        WalkGraph::CompleteBipartite { nodes } => shift_bipartite(nodes),
        WalkGraph::Complete { nodes } => shift_complete(nodes),
    }
}

/// One walk step `U = S·G`: coin on the coin register, then the shift.
pub fn walk_step(graph: &WalkGraph) -> Result<Circuit> {
    graph.validate()?;
    let regs = graph.registers();
    let mut circ = Circuit::new(regs.width())?.named(format!("walk-{graph}"));
    let coin = grover_coin(regs.coin.len())?;
    circ.append_mapped(&coin, &regs.coin.clone().collect::<Vec<_>>())?;
    circ.append(&shift(graph)?)?;
    Ok(circ)
}
