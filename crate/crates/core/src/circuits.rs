// Copyright 2026 The zhcalc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Toffoli+Hadamard circuits.
//!
//! Text format: a `qubits N` header, then one gate per line (or separated by
//! `;`), e.g. `cnot 0 1`. Everything after `#` is a comment.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::diagram::{Diagram, DiagramBuilder, Endpoint};
use crate::normalform::{equal, NormalFormError};
use crate::ring::RingDescriptor;
use crate::semantics::{Interpretation, Matrix, SemanticsError, StarMode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },

    #[error("line {line}: qubit {index} out of range for {qubits} qubits")]
    Range { line: usize, index: usize, qubits: usize },

    #[error("line {line}: qubit {index} used twice in one gate")]
    Duplicate { line: usize, index: usize },

    #[error("circuits act on {left} and {right} qubits")]
    QubitMismatch { left: usize, right: usize },

    #[error(transparent)]
    NormalForm(#[from] NormalFormError),

    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

pub type Result<T> = std::result::Result<T, CircuitError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    X(usize),
    Z(usize),
    H(usize),
    Cnot(usize, usize),
    Cz(usize, usize),
    Ccz(usize, usize, usize),
    Tof(usize, usize, usize),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::X(t) | Gate::Z(t) | Gate::H(t) => vec![t],
            Gate::Cnot(a, b) | Gate::Cz(a, b) => vec![a, b],
            Gate::Ccz(a, b, c) | Gate::Tof(a, b, c) => vec![a, b, c],
        }
    }

    pub fn mnemonic(&self) -> &'static str {
        match self {
            Gate::X(_) => "x",
            Gate::Z(_) => "z",
            Gate::H(_) => "h",
            Gate::Cnot(..) => "cnot",
            Gate::Cz(..) => "cz",
            Gate::Ccz(..) => "ccz",
            Gate::Tof(..) => "tof",
        }
    }

    fn hadamards(&self) -> usize {
        match self {
            Gate::H(_) => 1,
            Gate::Tof(..) => 2,
            _ => 0,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())?;
        for q in self.qubits() {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub qubits: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(qubits: usize) -> Circuit {
        Circuit { qubits, gates: Vec::new() }
    }

    /// Number of Hadamard boxes in the encoding (a Toffoli contributes two).
    pub fn hadamard_count(&self) -> usize {
        self.gates.iter().map(Gate::hadamards).sum()
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.qubits)?;
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

impl FromStr for Circuit {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Circuit> {
        parse_circuit(s)
    }
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        for stmt in body.split(';') {
            let words: Vec<&str> = stmt.split_whitespace().collect();
            let Some((&head, args)) = words.split_first() else { continue };
            let syntax = |msg: String| CircuitError::Syntax { line, msg };
            let nums = args
                .iter()
                .map(|a| a.parse::<usize>().map_err(|_| syntax(format!("bad qubit index {a:?}"))))
                .collect::<Result<Vec<usize>>>()?;
            let Some(c) = circuit.as_mut() else {
                if head != "qubits" {
                    return Err(syntax("expected a `qubits N` header".into()));
                }
                if nums.len() != 1 {
                    return Err(syntax("`qubits` takes one count".into()));
                }
                circuit = Some(Circuit::new(nums[0]));
                continue;
            };
            let want = match head {
                "x" | "z" | "h" => 1,
                "cnot" | "cz" => 2,
                "ccz" | "tof" => 3,
                "qubits" => return Err(syntax("repeated `qubits` header".into())),
                other => return Err(syntax(format!("unknown gate {other:?}"))),
            };
            if nums.len() != want {
                return Err(syntax(format!("{head} takes {want} qubit(s), got {}", nums.len())));
            }
            for (i, &q) in nums.iter().enumerate() {
                if q >= c.qubits {
                    return Err(CircuitError::Range { line, index: q, qubits: c.qubits });
                }
                if nums[..i].contains(&q) {
                    return Err(CircuitError::Duplicate { line, index: q });
                }
            }
            let gate = match head {
                "x" => Gate::X(nums[0]),
                "z" => Gate::Z(nums[0]),
                "h" => Gate::H(nums[0]),
                "cnot" => Gate::Cnot(nums[0], nums[1]),
                "cz" => Gate::Cz(nums[0], nums[1]),
                "ccz" => Gate::Ccz(nums[0], nums[1], nums[2]),
                _ => Gate::Tof(nums[0], nums[1], nums[2]),
            };
            c.gates.push(gate);
        }
    }
    circuit.ok_or(CircuitError::Syntax { line: 0, msg: "empty circuit text".into() })
}

/// A circuit's diagram and whether it is off by a factor `sqrt 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoding {
    pub diagram: Diagram,
    /// Set when the diagram denotes `sqrt(2) * U` rather than `U`; only
    /// possible with the plain star and an odd Hadamard count.
    pub residual_sqrt2: bool,
}

/// Encodes `c` for the given star interpretation, with labels over the
/// `sqrt 2` ring or the dyadics respectively. In `InvSqrt2` mode each
/// Hadamard box carries its own star; with the plain star they are paired.
pub fn circuit_to_diagram(c: &Circuit, mode: StarMode) -> Encoding {
    let ring = match mode {
        StarMode::InvSqrt2 => RingDescriptor::root_two(),
        StarMode::Half => RingDescriptor::dyadic(),
    };
    let minus_one = ring.from_integer(-1);
    let mut b = DiagramBuilder::new(c.qubits, c.qubits);
    let mut front: Vec<Endpoint> = (0..c.qubits).map(Endpoint::In).collect();

    let hadamard = |b: &mut DiagramBuilder, front: &mut Vec<Endpoint>, t: usize| {
        let h = b.h(minus_one.clone());
        b.wire(front[t], h);
        front[t] = Endpoint::V(h);
    };
    let ccz = |b: &mut DiagramBuilder, front: &mut Vec<Endpoint>, qs: &[usize]| {
        let h = b.h(ring.from_integer(-1));
        for &q in qs {
            let s = b.z();
            b.wire(front[q], s).wire(s, h);
            front[q] = Endpoint::V(s);
        }
    };
    for gate in &c.gates {
        match *gate {
            Gate::X(t) => {
                let v = b.not();
                b.wire(front[t], v);
                front[t] = Endpoint::V(v);
            }
            Gate::Z(t) => {
                let v = b.z();
                let h = b.h(ring.from_integer(-1));
                b.wire(front[t], v).wire(v, h);
                front[t] = Endpoint::V(v);
            }
            Gate::H(t) => hadamard(&mut b, &mut front, t),
            Gate::Cnot(ctl, tgt) => {
                let zc = b.z();
                let xt = b.x();
                b.wire(front[ctl], zc).wire(front[tgt], xt).wire(zc, xt);
                front[ctl] = Endpoint::V(zc);
                front[tgt] = Endpoint::V(xt);
            }
            Gate::Cz(p, q) => ccz(&mut b, &mut front, &[p, q]),
            Gate::Ccz(p, q, r) => ccz(&mut b, &mut front, &[p, q, r]),
            Gate::Tof(p, q, t) => {
                hadamard(&mut b, &mut front, t);
                ccz(&mut b, &mut front, &[p, q, t]);
                hadamard(&mut b, &mut front, t);
            }
        }
    }
    for (q, e) in front.into_iter().enumerate() {
        b.wire(e, Endpoint::Out(q));
    }
    let hs = c.hadamard_count();
    let (stars, residual) = match mode {
        StarMode::InvSqrt2 => (hs, false),
        StarMode::Half => (hs / 2, hs % 2 == 1),
    };
    for _ in 0..stars {
        b.star();
    }
    let diagram = b.build().expect("circuit encoding is well formed");
    Encoding { diagram, residual_sqrt2: residual }
}

/// The exact unitary, computed in the `sqrt 2` interpretation.
pub fn circuit_matrix(c: &Circuit) -> Result<Matrix> {
    let enc = circuit_to_diagram(c, StarMode::InvSqrt2);
    Ok(Interpretation::sqrt2().interpret(&enc.diagram)?)
}

/// Exact unitary equality, global scalar included, decided on normal forms.
pub fn circuits_equivalent(c1: &Circuit, c2: &Circuit) -> Result<bool> {
    if c1.qubits != c2.qubits {
        return Err(CircuitError::QubitMismatch { left: c1.qubits, right: c2.qubits });
    }
    let d1 = circuit_to_diagram(c1, StarMode::InvSqrt2).diagram;
    let d2 = circuit_to_diagram(c2, StarMode::InvSqrt2).diagram;
    Ok(equal(&d1, &d2, &Interpretation::sqrt2())?)
}
