//! Subcommand bodies. Each returns its full output as text.

use serde_json::{json, Value};

use super::output::{csv, histogram, prob, table};
use super::{Format, Init, Report, Settings};
use crate::circuit::Circuit;
use crate::classical;
use crate::error::{Error, Result};
use crate::noise::{self, NoiseModel};
use crate::search::{self, MarkedSet, SearchConfig, SearchResult};
use crate::statevector::label;
use crate::transpiler::{self, metrics, routed_metrics};
use crate::walk::{self, WalkGraph};

fn json_text(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serializes") + "\n"
}

fn report(stdout: String) -> Report {
    Report {
        stdout,
        stderr: String::new(),
    }
}

struct SearchSetup {
    graph: WalkGraph,
    marked: MarkedSet,
    t: usize,
}

fn search_setup(s: &Settings) -> Result<SearchSetup> {
    let graph = s.graph()?;
    let marked = s.marked(graph.node_qubits())?;
    let t = s.theta_qubits.unwrap_or_else(|| search::default_theta_qubits(&graph));
    Ok(SearchSetup { graph, marked, t })
}

fn default_max_iters(graph: &WalkGraph, marked: &MarkedSet) -> usize {
    search::search_horizon(graph.node_count(), marked.len())
}

fn trace_run(setup: &SearchSetup, s: &Settings) -> Result<SearchResult> {
    let max_iters = s
        .max_iters
        .unwrap_or_else(|| default_max_iters(&setup.graph, &setup.marked));
    if max_iters == 0 {
        return Err(Error::arg("--max-iters must be at least 1"));
    }
    search::mnrs_search(&SearchConfig {
        graph: setup.graph,
        marked: setup.marked.clone(),
        theta_qubits: setup.t,
        iterations: max_iters,
        shots: 1,
        seed: s.seed,
    })
}

/// `--iterations`, or the hitting time of the ideal trace.
fn search_iterations(setup: &SearchSetup, s: &Settings) -> Result<usize> {
    match s.iterations {
        Some(i) => Ok(i),
        None => Ok(trace_run(setup, s)?.hitting_time),
    }
}

pub fn walk(s: &Settings) -> Result<Report> {
    let graph = s.graph()?;
    let steps = s.iterations.unwrap_or(1);
    let regs = graph.registers();
    let step = walk::walk_step(&graph)?;
    let mut state = crate::statevector::StateVector::new_zero(regs.width())?;
    if s.init == Init::Uniform {
        let mut init = Circuit::new(regs.width())?;
        for q in 0..regs.width() {
            init.h(q);
        }
        init.run(&mut state)?;
    }
    let node = regs.node_qubits();
    let mut dists = vec![state.marginal_probabilities(&node)?];
    for _ in 0..steps {
        step.run(&mut state)?;
        dists.push(state.marginal_probabilities(&node)?);
    }
    let labels: Vec<String> = (0..graph.node_count()).map(|v| label(v, node.len())).collect();
    let rows: Vec<Vec<String>> = dists
        .iter()
        .enumerate()
        .map(|(i, d)| {
            std::iter::once(i.to_string())
                .chain(d.iter().map(|&p| prob(p)))
                .collect()
        })
        .collect();
    let mut header = vec!["step"];
    header.extend(labels.iter().map(String::as_str));
    Ok(report(match s.format.unwrap_or(Format::Csv) {
        Format::Csv => csv(&header, &rows),
        Format::Text => table(&header, &rows),
        Format::Json => json_text(&json!({
            "graph": graph.to_string(),
            "steps": steps,
            "init": format!("{:?}", s.init).to_lowercase(),
            "nodes": labels,
            "distributions": dists,
        })),
    }))
}

pub fn hitting_time(s: &Settings) -> Result<Report> {
    let setup = search_setup(s)?;
    let r = trace_run(&setup, s)?;
    let summary = format!(
        "hitting_time={} peak_probability={} theoretical_iterations={} epsilon={} t={}\n",
        r.hitting_time,
        prob(r.peak_probability),
        prob(r.theoretical_iterations),
        prob(r.epsilon),
        r.t
    );
    let rows: Vec<Vec<String>> = (0..r.trace.len())
        .map(|i| {
            vec![
                i.to_string(),
                prob(r.trace[i]),
                r.top_states[i].clone(),
                prob(r.top_probabilities[i]),
            ]
        })
        .collect();
    let header = ["iteration", "marked_probability", "top_state", "top_probability"];
    Ok(match s.format.unwrap_or(Format::Csv) {
        Format::Csv => Report {
            stdout: csv(&header, &rows),
            stderr: summary,
        },
        Format::Text => report(table(&header, &rows) + &summary),
        Format::Json => {
            let mut v = serde_json::to_value(&r).expect("result serializes");
            let obj = v.as_object_mut().expect("object");
            obj.remove("counts");
            obj.remove("shots");
            report(json_text(&v))
        }
    })
}

fn sampled_report(r: &SearchResult, format: Format) -> Report {
    match format {
        Format::Json => report(r.to_json() + "\n"),
        Format::Csv => {
            let rows: Vec<Vec<String>> = r
                .counts
                .iter()
                .map(|(l, n)| vec![l.to_string(), n.to_string(), prob(n as f64 / r.shots as f64)])
                .collect();
            report(csv(&["state", "count", "frequency"], &rows))
        }
        Format::Text => {
            let hits: u64 = r.marked.iter().map(|m| r.counts.get(m)).sum();
            let mut out = format!(
                "{} marked {} after {} iteration(s), {} shots\n",
                r.graph,
                r.marked.join(","),
                r.iterations,
                r.shots
            );
            out.push_str(&histogram(&r.counts));
            out.push_str(&format!(
                "marked frequency {} (exact {})\n",
                prob(hits as f64 / r.shots as f64),
                prob(*r.trace.last().expect("trace is non-empty"))
            ));
            report(out)
        }
    }
}

pub fn search(s: &Settings) -> Result<Report> {
    let setup = search_setup(s)?;
    let iterations = search_iterations(&setup, s)?;
    let r = search::mnrs_search(&SearchConfig {
        graph: setup.graph,
        marked: setup.marked,
        theta_qubits: setup.t,
        iterations,
        shots: s.shots,
        seed: s.seed,
    })?;
    Ok(sampled_report(&r, s.format.unwrap_or(Format::Text)))
}

pub fn grover(s: &Settings) -> Result<Report> {
    let n = s.size.unwrap_or(4);
    let marked = s.marked.as_deref().ok_or_else(|| Error::arg("--marked is required"))?;
    if marked.contains(',') {
        return Err(Error::arg("grover takes exactly one marked label"));
    }
    let iterations = s.iterations.unwrap_or_else(|| search::grover_iterations(n));
    let r = search::grover_search_iterations(n, marked, iterations, s.shots, s.seed)?;
    Ok(sampled_report(&r, s.format.unwrap_or(Format::Text)))
}

pub fn classical(s: &Settings) -> Result<Report> {
    let setup = search_setup(s)?;
    let graph = setup.graph;
    let p = classical::transition_matrix(&graph)?;
    let n = graph.node_count();
    let marked = setup.marked.values().to_vec();
    let stationary = classical::stationary_distribution(&p)?;
    let mixing = match classical::mixing_time(&p, 0.01) {
        Ok(t) => Some(t),
        Err(Error::NotMixing(_)) => None,
        Err(e) => return Err(e),
    };
    let unmarked: Vec<usize> = (0..n).filter(|v| !setup.marked.contains(*v)).collect();
    let mut from_unmarked = vec![0.0; n];
    for &v in &unmarked {
        from_unmarked[v] = 1.0 / unmarked.len() as f64;
    }
    let quantum = trace_run(&setup, s)?.hitting_time;
    let starts = [("uniform-unmarked", from_unmarked), ("uniform", classical::uniform(n))];
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for (name, start) in &starts {
        let exact = classical::classical_hitting_time(&p, start, &marked)?;
        let mc = classical::monte_carlo_hitting_time(&p, start, &marked, s.trials, s.seed)?;
        rows.push(vec![
            graph.to_string(),
            setup.marked.labels().join(";"),
            name.to_string(),
            prob(exact),
            prob(mc.mean),
            prob(mc.std_error),
            mc.trials.to_string(),
            quantum.to_string(),
        ]);
        records.push(json!({
            "start": name,
            "linear_solve": exact,
            "monte_carlo": mc,
        }));
    }
    let mixing_text = mixing.map_or("not-mixing".to_string(), |t| t.to_string());
    let summary = format!(
        "period={} periodic={} mixing_time(0.01)={} quantum_hitting_time={}\n",
        stationary.period, stationary.periodic, mixing_text, quantum
    );
    let header = [
        "graph",
        "marked",
        "start",
        "linear_solve",
        "monte_carlo",
        "std_error",
        "trials",
        "quantum_hitting_time",
    ];
    Ok(match s.format.unwrap_or(Format::Csv) {
        Format::Csv => Report {
            stdout: csv(&header, &rows),
            stderr: summary,
        },
        Format::Text => report(table(&header, &rows) + &summary),
        Format::Json => report(json_text(&json!({
            "graph": graph.to_string(),
            "marked": setup.marked.labels(),
            "period": stationary.period,
            "periodic": stationary.periodic,
            "stationary": stationary.distribution,
            "mixing_time": mixing,
            "mixing_threshold": 0.01,
            "hitting_times": records,
            "quantum_hitting_time": quantum,
        }))),
    })
}

pub fn noise(s: &Settings) -> Result<Report> {
    let setup = search_setup(s)?;
    let iterations = search_iterations(&setup, s)?;
    let config = SearchConfig {
        graph: setup.graph,
        marked: setup.marked.clone(),
        theta_qubits: setup.t,
        iterations,
        shots: s.shots,
        seed: s.seed,
    };
    let logical = search::search_circuit(&config)?;
    let node = config.layout().node_qubits();
    let (circuit, measured) = if s.transpiled {
        let t = transpiler::transpile(&logical, &s.coupling()?, s.layout)?;
        let measured: Vec<usize> = node.iter().map(|&q| t.final_position(q)).collect();
        (t.routed.circuit, measured)
    } else {
        (logical, node.clone())
    };
    let grid = if s.noise.is_empty() {
        vec![NoiseModel::new(0.002, 0.02, 0.03)?]
    } else {
        s.noise.clone()
    };
    let rows = noise::noise_sweep(&circuit, &measured, setup.marked.values(), &grid, s.shots, s.seed)?;
    let ideal = search::mnrs_search(&SearchConfig { shots: 1, ..config })?;
    let ideal_p = *ideal.trace.last().expect("trace is non-empty");
    let summary = format!(
        "graph={} iterations={} ideal_marked_probability={} mode={}\n",
        setup.graph,
        iterations,
        prob(ideal_p),
        if s.transpiled { "transpiled" } else { "logical" }
    );
    Ok(match s.format.unwrap_or(Format::Csv) {
        Format::Csv => Report {
            stdout: noise::sweep_csv(&rows),
            stderr: summary,
        },
        Format::Text => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.model.p1.to_string(),
                        r.model.p2.to_string(),
                        r.model.p_ro.to_string(),
                        prob(r.marked_probability),
                        r.shots.to_string(),
                    ]
                })
                .collect();
            report(table(&["p1", "p2", "p_ro", "marked_probability", "shots"], &body) + &summary)
        }
        Format::Json => report(json_text(&json!({
            "graph": setup.graph.to_string(),
            "marked": setup.marked.labels(),
            "iterations": iterations,
            "t": setup.t,
            "transpiled": s.transpiled,
            "ideal_marked_probability": ideal_p,
            "rows": rows.iter().map(|r| json!({
                "p1": r.model.p1,
                "p2": r.model.p2,
                "p_ro": r.model.p_ro,
                "marked_probability": r.marked_probability,
                "shots": r.shots,
                "counts": r.counts.as_map(),
            })).collect::<Vec<_>>(),
        }))),
    })
}

pub fn transpile(s: &Settings) -> Result<Report> {
    let (source, name) = match &s.circuit {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            (text.parse::<Circuit>()?, path.display().to_string())
        }
        None => {
            let g = s.graph()?;
            (walk::walk_step(&g)?, format!("walk-{g}"))
        }
    };
    let coupling = s.coupling()?;
    let t = transpiler::transpile(&source, &coupling, s.layout)?;
    let equivalent = if source.n_qubits() <= crate::circuit::MATRIX_MAX_QUBITS {
        match transpiler::verify_equivalence(&source, &t.routed.circuit, &t.embedding(source.n_qubits()), 1e-8) {
            Ok(ok) => Some(ok),
            Err(Error::Capacity(_)) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    if let Some(path) = &s.circuit_out {
        std::fs::write(path, t.routed.circuit.to_string())?;
    }
    let stages = [
        ("logical", metrics(&source)),
        ("basis", metrics(&t.basis)),
        ("routed", routed_metrics(&t.routed)),
    ];
    let strategy = match s.layout {
        transpiler::LayoutStrategy::Identity => "identity",
        transpiler::LayoutStrategy::HardwareAware => "hardware-aware",
    };
    let equivalent_text = equivalent.map_or("unchecked".to_string(), |b| b.to_string());
    let rows: Vec<Vec<String>> = stages
        .iter()
        .map(|(stage, m)| {
            vec![
                stage.to_string(),
                m.depth.to_string(),
                m.total_gates.to_string(),
                m.two_qubit_gates.to_string(),
                m.swaps.to_string(),
            ]
        })
        .collect();
    let header = ["stage", "depth", "total_gates", "two_qubit_gates", "swaps"];
    Ok(match s.format.unwrap_or(Format::Text) {
        Format::Csv => Report {
            stdout: csv(&header, &rows),
            stderr: format!("layout={strategy} equivalent={equivalent_text}\n"),
        },
        Format::Text => {
            let mut out = format!("{name} on {} physical qubits, layout {strategy}\n", coupling.n_qubits());
            out.push_str(&table(&header, &rows));
            out.push_str(&format!(
                "initial layout {:?}\nfinal layout {:?}\nequivalent {equivalent_text}\n",
                t.routed.initial_layout.as_slice(),
                t.routed.final_layout.as_slice()
            ));
            report(out)
        }
        Format::Json => report(json_text(&json!({
            "circuit": name,
            "layout": strategy,
            "stages": stages.iter().map(|(k, m)| json!({"stage": k, "metrics": m})).collect::<Vec<_>>(),
            "initial_layout": t.routed.initial_layout.as_slice(),
            "final_layout": t.routed.final_layout.as_slice(),
            "work_qubits": t.basis.work_qubits(),
            "equivalent": equivalent,
        }))),
    })
}
