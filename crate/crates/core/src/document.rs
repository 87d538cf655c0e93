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

//! Line-oriented text format for diagrams.
//!
//! ```text
//! ring dyadic
//! inputs 1
//! outputs 1
//! vertex v0 h -1
//! vertex v1 z
//! wire in0 v0
//! wire v0 v1
//! wire v1 out0
//! ```
//!
//! The `ring` line is optional and `loops N` is written only when nonzero.
//! Vertex kinds are `z`, `x`, `xnot`, `star` and `h [label]`; an H-box with no
//! label is the Hadamard box `-1`. `#` starts a comment.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::diagram::{Diagram, DiagramError, Endpoint, VertexKind};
use crate::ring::{RingDescriptor, RingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },

    #[error("vertex id {0} declared twice")]
    DuplicateId(String),

    #[error("wire refers to undeclared vertex {0}")]
    UnknownVertex(String),

    #[error(transparent)]
    Ring(#[from] RingError),

    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

pub type Result<T> = std::result::Result<T, DocumentError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DocKind {
    Z,
    X,
    XNot,
    H,
    Star,
}

impl DocKind {
    fn keyword(self) -> &'static str {
        match self {
            DocKind::Z => "z",
            DocKind::X => "x",
            DocKind::XNot => "xnot",
            DocKind::H => "h",
            DocKind::Star => "star",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocVertex {
    pub id: String,
    pub kind: DocKind,
    /// Only H-boxes carry labels; kept as written so it can be parsed in
    /// whichever ring the document is evaluated over.
    pub label: Option<String>,
}

/// A diagram as written in a file, before labels are read into a ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramDocument {
    pub ring: Option<RingDescriptor>,
    pub inputs: usize,
    pub outputs: usize,
    pub vertices: Vec<DocVertex>,
    pub wires: Vec<(String, String)>,
    pub loops: usize,
}

fn parse_count(line: usize, word: Option<&str>, what: &str) -> Result<usize> {
    word.and_then(|w| w.parse().ok())
        .ok_or_else(|| DocumentError::Syntax { line, msg: format!("`{what}` needs a count") })
}

fn boundary(name: &str) -> Option<Endpoint> {
    let digits = |p: &str| name.strip_prefix(p).and_then(|d| d.parse::<usize>().ok());
    digits("in").map(Endpoint::In).or_else(|| digits("out").map(Endpoint::Out))
}

impl DiagramDocument {
    /// Reads a document and checks that it describes a valid diagram.
    pub fn parse(text: &str) -> Result<DiagramDocument> {
        let mut doc =
            DiagramDocument { ring: None, inputs: 0, outputs: 0, vertices: Vec::new(), wires: Vec::new(), loops: 0 };
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("");
            let words: Vec<&str> = body.split_whitespace().collect();
            let Some((&head, rest)) = words.split_first() else { continue };
            let syntax = |msg: &str| DocumentError::Syntax { line, msg: msg.to_string() };
            match head {
                "ring" => {
                    let [name] = rest else { return Err(syntax("`ring` takes one name")) };
                    doc.ring = Some(name.parse()?);
                }
                "inputs" => doc.inputs = parse_count(line, rest.first().copied(), "inputs")?,
                "outputs" => doc.outputs = parse_count(line, rest.first().copied(), "outputs")?,
                "loops" => doc.loops = parse_count(line, rest.first().copied(), "loops")?,
                "vertex" => {
                    let (id, kind, label) = match rest {
                        [id, kind] => (id, kind, None),
                        [id, kind, label @ ..] if !label.is_empty() => (id, kind, Some(label.join(" "))),
                        _ => return Err(syntax("expected `vertex <id> <kind> [label]`")),
                    };
                    if boundary(id).is_some() {
                        return Err(syntax("vertex ids may not look like boundary slots"));
                    }
                    let kind = match *kind {
                        "z" => DocKind::Z,
                        "x" => DocKind::X,
                        "xnot" => DocKind::XNot,
                        "h" => DocKind::H,
                        "star" => DocKind::Star,
                        _ => return Err(syntax("unknown vertex kind")),
                    };
                    if label.is_some() && kind != DocKind::H {
                        return Err(syntax("only H-boxes take a label"));
                    }
                    doc.vertices.push(DocVertex { id: id.to_string(), kind, label });
                }
                "wire" => {
                    let [a, b] = rest else { return Err(syntax("expected `wire <end> <end>`")) };
                    doc.wires.push((a.to_string(), b.to_string()));
                }
                _ => return Err(syntax("unknown directive")),
            }
        }
        let ring = doc.ring.unwrap_or_else(RingDescriptor::dyadic);
        match doc.ring {
            Some(_) => {
                doc.to_diagram(&ring)?;
            }
            // Labels are checked only once a ring is known.
            None => {
                doc.structure()?;
            }
        }
        Ok(doc)
    }

    /// Canonical text; `parse` then `serialize` is the identity on it.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        if let Some(r) = &self.ring {
            let _ = writeln!(out, "ring {r}");
        }
        let _ = writeln!(out, "inputs {}", self.inputs);
        let _ = writeln!(out, "outputs {}", self.outputs);
        for v in &self.vertices {
            let _ = write!(out, "vertex {} {}", v.id, v.kind.keyword());
            if let Some(l) = &v.label {
                let _ = write!(out, " {l}");
            }
            out.push('\n');
        }
        for (a, b) in &self.wires {
            let _ = writeln!(out, "wire {a} {b}");
        }
        if self.loops > 0 {
            let _ = writeln!(out, "loops {}", self.loops);
        }
        out
    }

    fn resolve(&self) -> Result<Vec<(Endpoint, Endpoint)>> {
        let mut index = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if index.insert(v.id.as_str(), i).is_some() {
                return Err(DocumentError::DuplicateId(v.id.clone()));
            }
        }
        let end = |name: &str| -> Result<Endpoint> {
            if let Some(e) = boundary(name) {
                return Ok(e);
            }
            index.get(name).map(|&i| Endpoint::V(i)).ok_or_else(|| DocumentError::UnknownVertex(name.to_string()))
        };
        self.wires.iter().map(|(a, b)| Ok((end(a)?, end(b)?))).collect()
    }

    fn structure(&self) -> Result<Diagram> {
        let placeholder = RingDescriptor::dyadic().from_integer(-1);
        let kinds = self
            .vertices
            .iter()
            .map(|v| match v.kind {
                DocKind::H => VertexKind::HBox(placeholder.clone()),
                other => plain_kind(other),
            })
            .collect();
        Ok(Diagram::from_parts(kinds, self.resolve()?, self.inputs, self.outputs, self.loops)?)
    }

    /// Builds the diagram with H-box labels read in `ring`.
    pub fn to_diagram(&self, ring: &RingDescriptor) -> Result<Diagram> {
        let kinds = self
            .vertices
            .iter()
            .map(|v| {
                Ok(match (&v.kind, &v.label) {
                    (DocKind::H, Some(l)) => VertexKind::HBox(ring.parse_element(l)?),
                    (DocKind::H, None) => VertexKind::hadamard(ring),
                    (other, _) => plain_kind(*other),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Diagram::from_parts(kinds, self.resolve()?, self.inputs, self.outputs, self.loops)?)
    }

    /// Vertices become `v0, v1, ...`; the Hadamard label `-1` is left implicit.
    pub fn from_diagram(d: &Diagram, ring: Option<RingDescriptor>) -> DiagramDocument {
        let vertices = d
            .vertices()
            .iter()
            .enumerate()
            .map(|(i, k)| {
                let (kind, label) = match k {
                    VertexKind::ZSpider => (DocKind::Z, None),
                    VertexKind::XSpider => (DocKind::X, None),
                    VertexKind::XNot => (DocKind::XNot, None),
                    VertexKind::Star => (DocKind::Star, None),
                    VertexKind::HBox(a) => {
                        let label = if *a == a.ring().from_integer(-1) { None } else { Some(a.to_string()) };
                        (DocKind::H, label)
                    }
                };
                DocVertex { id: format!("v{i}"), kind, label }
            })
            .collect();
        let wires = d.wires().iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        DiagramDocument { ring, inputs: d.n_inputs(), outputs: d.n_outputs(), vertices, wires, loops: d.loops() }
    }
}

fn plain_kind(k: DocKind) -> VertexKind {
    match k {
        DocKind::Z => VertexKind::ZSpider,
        DocKind::X => VertexKind::XSpider,
        DocKind::XNot => VertexKind::XNot,
        DocKind::Star => VertexKind::Star,
        DocKind::H => unreachable!("H-boxes need a label"),
    }
}
