//! Statevector quantum-circuit simulation and coined quantum-walk search.
//!
//! The crate is organised bottom-up:
//!
//! * [`statevector`] holds amplitudes and applies gates exactly.
//! * [`circuit`] is the gate library and circuit container.
//! * [`walk`] builds Grover coins and the shift operators of four graph families.
//! * [`spectral`] provides the QFT and phase estimation.
//! * [`search`] runs the quantum-walk search and a Grover baseline.
//! * [`classical`] is the Markov-chain baseline on the same graphs.
//! * [`noise`] samples circuits under Pauli and readout noise.
//! * [`transpiler`] lowers circuits to `{cx, i, rz, sx, x}` and routes them.
//! * [`cli`] implements the `qwalk` command-line driver.

pub mod circuit;
pub mod classical;
pub mod cli;
pub mod error;
pub mod gates;
pub mod linalg;
pub mod noise;
pub mod rng;
pub mod search;
pub mod spectral;
pub mod statevector;
pub mod transpiler;
pub mod walk;

pub use num_complex::Complex64 as Complex;

pub use circuit::{Circuit, Gate, GateKind};
pub use error::{Error, Result};
pub use linalg::Matrix;
pub use statevector::{Control, Counts, StateVector};
