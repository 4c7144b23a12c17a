//! Line-oriented circuit text format.
//!
//! ```text
//! # comment
//! qubits 6
//! work 1
//! phase 3.141592653589793
//! name walk-step
//! h 0
//! x 3 ; 0+ 1-
//! rz(0.7853981633974483) 2
//! swap 0 1
//! unitary(1,0,0,0,0,0,1,0) 4
//! ```
//!
//! Header lines (`qubits` is required and comes first; `work`, `phase` and
//! `name` are optional) precede gate lines. A gate line is a gate name, its
//! target qubits, and optionally `;` followed by controls written `q+`
//! (fires on |1⟩) or `q-` (fires on |0⟩). `unitary(...)` lists the
//! row-major matrix as `re,im` pairs. Aliases `cx`/`cnot`, `cz`, `ccx`,
//! `mcx` and `mcz` take their controls first and the target last.

use std::fmt;

use super::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::statevector::Control;
use crate::Complex;

pub(super) fn write(c: &Circuit, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    writeln!(f, "qubits {}", c.n_qubits)?;
    if c.work_qubits > 0 {
        writeln!(f, "work {}", c.work_qubits)?;
    }
    if c.global_phase != 0.0 {
        writeln!(f, "phase {}", c.global_phase)?;
    }
    if let Some(name) = &c.name {
        writeln!(f, "name {name}")?;
    }
    for g in &c.gates {
        match &g.kind {
            GateKind::Rz(phi) => write!(f, "rz({phi})")?,
            GateKind::Unitary(m) => {
                write!(f, "unitary(")?;
                for (i, z) in m.data().iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{},{}", z.re, z.im)?;
                }
                write!(f, ")")?;
            }
            kind => write!(f, "{}", kind.name())?,
        }
        for t in &g.targets {
            write!(f, " {t}")?;
        }
        if !g.controls.is_empty() {
            write!(f, " ;")?;
            for ctl in &g.controls {
                write!(f, " {}{}", ctl.qubit, if ctl.polarity { '+' } else { '-' })?;
            }
        }
        writeln!(f)?;
    }
    Ok(())
}

pub(super) fn parse(src: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in src.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        if head == "qubits" {
            if circuit.is_some() {
                return Err(Error::parse(line_no, "duplicate qubits header"));
            }
            let n = parse_index(rest, line_no)?;
            circuit = Some(Circuit::new(n).map_err(|e| Error::parse(line_no, e.to_string()))?);
            continue;
        }
        let c = circuit
            .as_mut()
            .ok_or_else(|| Error::parse(line_no, "expected `qubits N` before any other line"))?;
        match head {
            "work" => {
                let w = parse_index(rest, line_no)?;
                c.set_work_qubits(w).map_err(|e| Error::parse(line_no, e.to_string()))?;
            }
            "phase" => {
                let phase: f64 = rest
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad phase {rest:?}")))?;
                c.add_global_phase(phase);
            }
            "name" => c.name = Some(rest.to_string()),
            _ => {
                let gate = parse_gate(line, line_no)?;
                c.push(gate).map_err(|e| Error::parse(line_no, e.to_string()))?;
            }
        }
    }
    circuit.ok_or_else(|| Error::parse(0, "missing `qubits N` header"))
}

fn parse_index(tok: &str, line: usize) -> Result<usize> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("expected a qubit index, found {tok:?}")))
}

fn parse_gate(line: &str, line_no: usize) -> Result<Gate> {
    let (body, ctrl_text) = match line.split_once(';') {
        Some((b, c)) => (b.trim(), Some(c.trim())),
        None => (line, None),
    };
    // The unitary argument list contains no spaces once split at ')'.
    let (name, args, wires) = match body.find('(') {
        Some(open) => {
            let close = body.find(')').ok_or_else(|| Error::parse(line_no, "unclosed '('"))?;
            (
                body[..open].trim(),
                Some(&body[open + 1..close]),
                body[close + 1..].trim(),
            )
        }
        None => {
            let (n, w) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
            (n, None, w.trim())
        }
    };
    let mut qubits = wires
        .split_whitespace()
        .map(|t| parse_index(t, line_no))
        .collect::<Result<Vec<_>>>()?;
    let mut controls = match ctrl_text {
        Some(text) => text
            .split_whitespace()
            .map(|t| parse_control(t, line_no))
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let name = name.to_ascii_lowercase();
    let kind = match name.as_str() {
        "i" | "id" => GateKind::I,
        "x" | "not" => GateKind::X,
        "h" => GateKind::H,
        "z" => GateKind::Z,
        "sx" => GateKind::Sx,
        "swap" => GateKind::Swap,
        "rz" => {
            let a = args.ok_or_else(|| Error::parse(line_no, "rz needs an angle, e.g. rz(0.5)"))?;
            GateKind::Rz(
                a.trim()
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad angle {a:?}")))?,
            )
        }
        "unitary" => {
            let a = args.ok_or_else(|| Error::parse(line_no, "unitary needs matrix entries"))?;
            GateKind::Unitary(parse_matrix(a, line_no)?)
        }
        "cx" | "cnot" | "ccx" | "mcx" | "cz" | "mcz" => {
            let target = qubits
                .pop()
                .ok_or_else(|| Error::parse(line_no, format!("{name} needs a target")))?;
            let expected = match name.as_str() {
                "cx" | "cnot" | "cz" => Some(1),
                "ccx" => Some(2),
                _ => None,
            };
            if let Some(k) = expected {
                if qubits.len() != k {
                    return Err(Error::parse(
                        line_no,
                        format!("{name} takes {k} control(s) and a target"),
                    ));
                }
            }
            let mut all: Vec<Control> = qubits.drain(..).map(Control::on).collect();
            all.append(&mut controls);
            controls = all;
            qubits.push(target);
            if name.ends_with('z') {
                GateKind::Z
            } else {
                GateKind::X
            }
        }
        other => return Err(Error::parse(line_no, format!("unknown gate {other:?}"))),
    };
    Gate::new(kind, qubits, controls).map_err(|e| Error::parse(line_no, e.to_string()))
}

fn parse_control(tok: &str, line: usize) -> Result<Control> {
    let (num, polarity) = match tok.as_bytes().last() {
        Some(b'+') => (&tok[..tok.len() - 1], true),
        Some(b'-') => (&tok[..tok.len() - 1], false),
        _ => return Err(Error::parse(line, format!("control {tok:?} must end in '+' or '-'"))),
    };
    Ok(Control {
        qubit: parse_index(num, line)?,
        polarity,
    })
}

fn parse_matrix(args: &str, line: usize) -> Result<Matrix> {
    let values = args
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::parse(line, format!("bad matrix entry {t:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let entries = values.len() / 2;
    let dim = (entries as f64).sqrt().round() as usize;
    if values.len() % 2 != 0 || dim * dim != entries || dim < 2 {
        return Err(Error::parse(
            line,
            "unitary entries must be re,im pairs of a square matrix",
        ));
    }
    Ok(Matrix::from_rows(
        dim,
        values.chunks(2).map(|p| Complex::new(p[0], p[1])).collect(),
    ))
}
