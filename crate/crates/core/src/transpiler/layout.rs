//! Initial placement of logical qubits on physical qubits.

use std::collections::BTreeMap;

use serde::Serialize;

use super::coupling::CouplingMap;
use crate::circuit::Circuit;
use crate::error::{Error, Result};

/// Injective map from logical to physical qubits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Layout {
    physical: Vec<usize>,
}

impl Layout {
    pub fn new(physical: Vec<usize>, n_physical: usize) -> Result<Self> {
        let mut seen = vec![false; n_physical];
        for &p in &physical {
            if p >= n_physical || std::mem::replace(&mut seen[p], true) {
                return Err(Error::arg(format!("layout entry {p} is out of range or repeated")));
            }
        }
        Ok(Layout { physical })
    }

    pub fn identity(n_logical: usize) -> Self {
        Layout {
            physical: (0..n_logical).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.physical.len()
    }

    pub fn is_empty(&self) -> bool {
        self.physical.is_empty()
    }

    pub fn physical(&self, logical: usize) -> usize {
        self.physical[logical]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.physical
    }
}

/// Interaction counts per unordered logical pair over all multi-qubit gates.
pub fn interaction_counts(circuit: &Circuit) -> BTreeMap<(usize, usize), usize> {
    let mut counts = BTreeMap::new();
    for g in circuit.gates() {
        let qs: Vec<usize> = g.qubits().collect();
        for (i, &a) in qs.iter().enumerate() {
            for &b in &qs[i + 1..] {
                *counts.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
    }
    counts
}

/// Greedy placement: the most-interacting pairs go on adjacent qubits first.
///
/// The heavier logical qubit of the heaviest pair lands on the lowest-index
/// physical qubit of maximal degree. Each later qubit goes to the free physical
/// qubit minimizing its interaction-weighted distance to already placed
/// partners; ties prefer fewer free neighbours, then the lower index.
pub fn hardware_aware_layout(circuit: &Circuit, coupling: &CouplingMap) -> Result<Layout> {
    let n = circuit.n_qubits();
    let np = coupling.n_qubits();
    if n > np {
        return Err(Error::Capacity(format!(
            "{n} logical qubits exceed the {np}-qubit device"
        )));
    }
    let counts = interaction_counts(circuit);
    let mut weight = vec![0usize; n];
    for (&(a, b), &c) in &counts {
        weight[a] += c;
        weight[b] += c;
    }
    let mut pairs: Vec<((usize, usize), usize)> = counts.iter().map(|(&k, &v)| (k, v)).collect();
    pairs.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));

    let mut place: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; np];

    let choose = |place: &[Option<usize>], used: &[bool], x: usize| -> usize {
        let placed: Vec<usize> = place.iter().flatten().copied().collect();
        if placed.is_empty() {
            let max_deg = (0..np).map(|p| coupling.degree(p)).max().unwrap_or(0);
            return (0..np).find(|&p| coupling.degree(p) == max_deg).unwrap();
        }
        let partners: Vec<(usize, usize)> = place
            .iter()
            .enumerate()
            .filter_map(|(y, p)| {
                let w = counts.get(&(x.min(y), x.max(y))).copied().unwrap_or(0);
                p.filter(|_| w > 0).map(|p| (p, w))
            })
            .collect();
        (0..np)
            .filter(|&p| !used[p])
            .min_by_key(|&p| {
                let cost = if partners.is_empty() {
                    placed.iter().map(|&a| coupling.distance(a, p)).min().unwrap()
                } else {
                    partners.iter().map(|&(a, w)| w * coupling.distance(a, p)).sum()
                };
                let free = coupling.neighbors(p).iter().filter(|&&q| !used[q]).count();
                (cost, free, p)
            })
            .expect("a free physical qubit remains")
    };

    for ((a, b), _) in pairs {
        let order = if weight[b] > weight[a] { [b, a] } else { [a, b] };
        for x in order {
            if place[x].is_none() {
                let p = choose(&place, &used, x);
                used[p] = true;
                place[x] = Some(p);
            }
        }
    }
    for slot in place.iter_mut().filter(|s| s.is_none()) {
        let p = (0..np).find(|&p| !used[p]).expect("free qubit exists");
        used[p] = true;
        *slot = Some(p);
    }
    Layout::new(place.into_iter().map(Option::unwrap).collect(), np)
}
