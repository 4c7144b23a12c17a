//! The `qwalk` command-line driver.
//!
//! Every subcommand reads the same option set. Values come from flags first,
//! then from the `--config` file, then from defaults. Output is a pure
//! function of the options, so identical runs are byte-identical.

mod commands;
pub mod config;
mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::search::MarkedSet;
use crate::transpiler::{CouplingMap, LayoutStrategy};
use crate::walk::WalkGraph;

pub use output::histogram;

/// Coupling map used when `--coupling-map` is not given.
pub const DEFAULT_COUPLING_MAP: &str = include_str!("../../../../configs/melbourne.map");

#[derive(Debug, Parser)]
#[command(name = "qwalk", version, about = "Coined quantum-walk search experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Node distribution after each walk step.
    Walk,
    /// Marked-probability trace and hitting time of the walk search.
    HittingTime,
    /// Sampled walk search at a fixed iteration count.
    Search,
    /// Grover search baseline.
    Grover,
    /// Classical random-walk baseline.
    Classical,
    /// Walk search under gate and readout noise.
    Noise,
    /// Lower and route a circuit onto a coupling map.
    Transpile,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Init {
    /// All qubits in |0⟩.
    #[default]
    Zero,
    /// Uniform over coin and node.
    Uniform,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LayoutArg {
    Identity,
    HardwareAware,
}

#[derive(Clone, Debug, Default, Args)]
pub struct Options {
    /// Flat key=value file; flags take precedence over its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// hypercube, lattice, bipartite or complete.
    #[arg(long, global = true)]
    pub graph: Option<String>,
    /// Hypercube dimension, lattice side, or node count (qubit count for grover).
    #[arg(long, global = true)]
    pub size: Option<usize>,
    /// Comma-separated MSB-first node labels.
    #[arg(long, global = true)]
    pub marked: Option<String>,
    #[arg(long, global = true)]
    pub theta_qubits: Option<usize>,
    #[arg(long, global = true)]
    pub iterations: Option<usize>,
    #[arg(long, global = true)]
    pub max_iters: Option<usize>,
    #[arg(long, global = true)]
    pub shots: Option<u64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// `p1,p2,p_ro`; repeat for a sweep grid.
    #[arg(long, global = true)]
    pub noise: Vec<String>,
    #[arg(long, global = true)]
    pub coupling_map: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Monte-Carlo trials for the classical baseline.
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    #[arg(long, value_enum, global = true)]
    pub init: Option<Init>,
    #[arg(long, value_enum, global = true)]
    pub layout: Option<LayoutArg>,
    /// Apply noise to the transpiled circuit instead of the logical one.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub transpiled: Option<bool>,
    /// Circuit file to transpile instead of a walk step.
    #[arg(long, global = true)]
    pub circuit: Option<PathBuf>,
    /// Where to write the routed circuit.
    #[arg(long, global = true)]
    pub circuit_out: Option<PathBuf>,
}

/// Fully resolved options.
#[derive(Clone, Debug)]
pub struct Settings {
    pub graph: Option<String>,
    pub size: Option<usize>,
    pub marked: Option<String>,
    pub theta_qubits: Option<usize>,
    pub iterations: Option<usize>,
    pub max_iters: Option<usize>,
    pub shots: u64,
    pub seed: u64,
    pub noise: Vec<NoiseModel>,
    pub coupling_map: Option<PathBuf>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub trials: u64,
    pub init: Init,
    pub layout: LayoutStrategy,
    pub transpiled: bool,
    pub circuit: Option<PathBuf>,
    pub circuit_out: Option<PathBuf>,
}

fn enum_value<T: ValueEnum>(map: &config::ConfigMap, key: &str) -> Result<Option<T>> {
    match map.get(key) {
        None => Ok(None),
        Some((line, raw)) => T::from_str(raw, true)
            .map(Some)
            .map_err(|_| Error::parse(*line, format!("invalid value {raw:?} for {key}"))),
    }
}

impl Settings {
    pub fn resolve(options: &Options) -> Result<Self> {
        let map = match &options.config {
            Some(path) => config::parse_config(&std::fs::read_to_string(path)?)?,
            None => config::ConfigMap::new(),
        };
        let s = |flag: &Option<String>, key: &str| -> Option<String> {
            flag.clone().or_else(|| map.get(key).map(|(_, v)| v.clone()))
        };
        let path = |flag: &Option<PathBuf>, key: &str| -> Option<PathBuf> {
            flag.clone().or_else(|| map.get(key).map(|(_, v)| PathBuf::from(v)))
        };
        let noise = if !options.noise.is_empty() {
            options
                .noise
                .iter()
                .map(|n| NoiseModel::parse(n))
                .collect::<Result<Vec<_>>>()?
        } else if let Some((line, raw)) = map.get("noise") {
            raw.split(';')
                .filter(|p| !p.trim().is_empty())
                .map(|p| NoiseModel::parse(p).map_err(|e| Error::parse(*line, e.to_string())))
                .collect::<Result<Vec<_>>>()?
        } else {
            Vec::new()
        };
        let layout = match options
            .layout
            .map_or_else(|| enum_value(&map, "layout"), |l| Ok(Some(l)))?
        {
            Some(LayoutArg::Identity) => LayoutStrategy::Identity,
            Some(LayoutArg::HardwareAware) | None => LayoutStrategy::HardwareAware,
        };
        Ok(Settings {
            graph: s(&options.graph, "graph"),
            size: options
                .size
                .map_or_else(|| config::typed(&map, "size"), |v| Ok(Some(v)))?,
            marked: s(&options.marked, "marked"),
            theta_qubits: options
                .theta_qubits
                .map_or_else(|| config::typed(&map, "theta-qubits"), |v| Ok(Some(v)))?,
            iterations: options
                .iterations
                .map_or_else(|| config::typed(&map, "iterations"), |v| Ok(Some(v)))?,
            max_iters: options
                .max_iters
                .map_or_else(|| config::typed(&map, "max-iters"), |v| Ok(Some(v)))?,
            shots: options
                .shots
                .map_or_else(|| config::typed(&map, "shots"), |v| Ok(Some(v)))?
                .unwrap_or(1024),
            seed: options
                .seed
                .map_or_else(|| config::typed(&map, "seed"), |v| Ok(Some(v)))?
                .unwrap_or(0),
            noise,
            coupling_map: path(&options.coupling_map, "coupling-map"),
            format: options
                .format
                .map_or_else(|| enum_value(&map, "format"), |f| Ok(Some(f)))?,
            out: path(&options.out, "out"),
            trials: options
                .trials
                .map_or_else(|| config::typed(&map, "trials"), |v| Ok(Some(v)))?
                .unwrap_or(100_000),
            init: options
                .init
                .map_or_else(|| enum_value(&map, "init"), |v| Ok(Some(v)))?
                .unwrap_or_default(),
            layout,
            transpiled: options
                .transpiled
                .map_or_else(|| config::typed(&map, "transpiled"), |v| Ok(Some(v)))?
                .unwrap_or(false),
            circuit: path(&options.circuit, "circuit"),
            circuit_out: path(&options.circuit_out, "circuit-out"),
        })
    }

    pub fn graph(&self) -> Result<WalkGraph> {
        let family = self
            .graph
            .as_deref()
            .ok_or_else(|| Error::arg("--graph is required (hypercube, lattice, bipartite or complete)"))?;
        let size = match (self.size, family) {
            (Some(s), _) => s,
            (None, "hypercube" | "lattice" | "lattice2d" | "torus") => 4,
            (None, "bipartite" | "complete-bipartite") => 8,
            (None, _) => 16,
        };
        WalkGraph::from_family(family, size)
    }

    pub fn marked(&self, width: usize) -> Result<MarkedSet> {
        let list = self
            .marked
            .as_deref()
            .ok_or_else(|| Error::arg("--marked is required"))?;
        MarkedSet::parse(list, width)
    }

    pub fn coupling(&self) -> Result<CouplingMap> {
        match &self.coupling_map {
            Some(path) => CouplingMap::from_file(path),
            None => DEFAULT_COUPLING_MAP.parse(),
        }
    }
}

/// Text a command produced: the main output and diagnostics.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub stdout: String,
    pub stderr: String,
}

pub fn run(command: Command, options: &Options) -> Result<Report> {
    run_with(command, &Settings::resolve(options)?)
}

pub fn run_with(command: Command, settings: &Settings) -> Result<Report> {
    let report = match command {
        Command::Walk => commands::walk(settings),
        Command::HittingTime => commands::hitting_time(settings),
        Command::Search => commands::search(settings),
        Command::Grover => commands::grover(settings),
        Command::Classical => commands::classical(settings),
        Command::Noise => commands::noise(settings),
        Command::Transpile => commands::transpile(settings),
    }?;
    Ok(report)
}

/// Runs a parsed command line and writes its output; returns the exit code.
pub fn main_with(cli: Cli) -> i32 {
    let result = Settings::resolve(&cli.options)
        .and_then(|settings| run_with(cli.command, &settings).and_then(|report| emit(&settings, report)));
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.kind());
            2
        }
    }
}

fn emit(settings: &Settings, report: Report) -> Result<()> {
    use std::io::Write;
    match &settings.out {
        Some(path) => std::fs::write(path, &report.stdout)?,
        None => std::io::stdout().write_all(report.stdout.as_bytes())?,
    }
    if !report.stderr.is_empty() {
        std::io::stderr().write_all(report.stderr.as_bytes())?;
    }
    Ok(())
}
