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

//! ZH-diagrams: open undirected multigraphs with typed vertices and ordered
//! input/output boundaries.
//!
//! Vertices carry no port order. A wire joins two endpoints, each of which is
//! a vertex or a boundary slot; self-loops and parallel wires are allowed.
//! Closed loops left over from composition are kept as a counter.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::ring::{RingDescriptor, RingElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("{kind} cannot have {m} inputs and {n} outputs")]
    InvalidArity { kind: String, m: usize, n: usize },

    #[error("cannot compose: left side has {left} outputs but right side has {right} inputs")]
    ArityMismatch { left: usize, right: usize },

    #[error("boundary slot {slot} is attached to {count} wire ends (expected exactly 1)")]
    Boundary { slot: Endpoint, count: usize },

    #[error("wire refers to unknown vertex v{0}")]
    UnknownVertex(usize),

    #[error("star vertex v{vertex} has degree {degree}")]
    StarDegree { vertex: usize, degree: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum VertexKind {
    ZSpider,
    HBox(RingElement),
    XSpider,
    XNot,
    Star,
}

impl VertexKind {
    /// The unlabelled H-box, i.e. label `-1`.
    pub fn hadamard(ring: &RingDescriptor) -> Self {
        VertexKind::HBox(ring.from_integer(-1))
    }

    pub fn name(&self) -> &'static str {
        match self {
            VertexKind::ZSpider => "Z-spider",
            VertexKind::HBox(_) => "H-box",
            VertexKind::XSpider => "X-spider",
            VertexKind::XNot => "X-NOT spider",
            VertexKind::Star => "star",
        }
    }
}

impl fmt::Display for VertexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexKind::HBox(a) => write!(f, "H-box({a})"),
            other => f.write_str(other.name()),
        }
    }
}

/// One end of a wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    V(usize),
    In(usize),
    Out(usize),
}

impl Endpoint {
    pub fn is_boundary(&self) -> bool {
        !matches!(self, Endpoint::V(_))
    }

    pub fn vertex(&self) -> Option<usize> {
        match self {
            Endpoint::V(v) => Some(*v),
            _ => None,
        }
    }
}

impl From<usize> for Endpoint {
    fn from(v: usize) -> Self {
        Endpoint::V(v)
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::V(v) => write!(f, "v{v}"),
            Endpoint::In(i) => write!(f, "in{i}"),
            Endpoint::Out(j) => write!(f, "out{j}"),
        }
    }
}

/// An immutable ZH-diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    vertices: Vec<VertexKind>,
    wires: Vec<(Endpoint, Endpoint)>,
    inputs: usize,
    outputs: usize,
    loops: usize,
}

/// Incremental construction of a [`Diagram`].
#[derive(Debug, Clone)]
pub struct DiagramBuilder {
    vertices: Vec<VertexKind>,
    wires: Vec<(Endpoint, Endpoint)>,
    inputs: usize,
    outputs: usize,
    loops: usize,
}

impl DiagramBuilder {
    pub fn new(inputs: usize, outputs: usize) -> Self {
        DiagramBuilder { vertices: Vec::new(), wires: Vec::new(), inputs, outputs, loops: 0 }
    }

    pub fn add(&mut self, kind: VertexKind) -> usize {
        self.vertices.push(kind);
        self.vertices.len() - 1
    }

    pub fn z(&mut self) -> usize {
        self.add(VertexKind::ZSpider)
    }

    pub fn x(&mut self) -> usize {
        self.add(VertexKind::XSpider)
    }

    pub fn not(&mut self) -> usize {
        self.add(VertexKind::XNot)
    }

    pub fn star(&mut self) -> usize {
        self.add(VertexKind::Star)
    }

    pub fn h(&mut self, label: RingElement) -> usize {
        self.add(VertexKind::HBox(label))
    }

    pub fn wire(&mut self, a: impl Into<Endpoint>, b: impl Into<Endpoint>) -> &mut Self {
        self.wires.push((a.into(), b.into()));
        self
    }

    pub fn add_loops(&mut self, n: usize) -> &mut Self {
        self.loops += n;
        self
    }

    pub fn build(self) -> Result<Diagram, DiagramError> {
        let d = Diagram {
            vertices: self.vertices,
            wires: self.wires,
            inputs: self.inputs,
            outputs: self.outputs,
            loops: self.loops,
        };
        d.validate()?;
        Ok(d)
    }
}

pub(crate) fn incidence_key(e: Endpoint, f: Endpoint) -> (Endpoint, Endpoint) {
    if e <= f {
        (e, f)
    } else {
        (f, e)
    }
}

impl Diagram {
    pub fn empty() -> Self {
        Diagram { vertices: Vec::new(), wires: Vec::new(), inputs: 0, outputs: 0, loops: 0 }
    }

    /// A single generator with `m` input and `n` output legs.
    pub fn make_generator(kind: VertexKind, m: usize, n: usize) -> Result<Diagram, DiagramError> {
        if kind == VertexKind::Star && m + n > 0 {
            return Err(DiagramError::InvalidArity { kind: kind.name().to_string(), m, n });
        }
        let mut b = DiagramBuilder::new(m, n);
        let v = b.add(kind);
        for i in 0..m {
            b.wire(Endpoint::In(i), v);
        }
        for j in 0..n {
            b.wire(v, Endpoint::Out(j));
        }
        b.build()
    }

    pub fn identity(n: usize) -> Diagram {
        let wires = (0..n).map(|i| (Endpoint::In(i), Endpoint::Out(i))).collect();
        Diagram { vertices: Vec::new(), wires, inputs: n, outputs: n, loops: 0 }
    }

    pub fn cup() -> Diagram {
        Diagram {
            vertices: Vec::new(),
            wires: vec![(Endpoint::Out(0), Endpoint::Out(1))],
            inputs: 0,
            outputs: 2,
            loops: 0,
        }
    }

    pub fn cap() -> Diagram {
        Diagram {
            vertices: Vec::new(),
            wires: vec![(Endpoint::In(0), Endpoint::In(1))],
            inputs: 2,
            outputs: 0,
            loops: 0,
        }
    }

    pub fn swap() -> Diagram {
        Diagram::permutation(&[1, 0])
    }

    /// Wiring with output `j` fed by input `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Diagram {
        let wires = perm.iter().enumerate().map(|(j, &i)| (Endpoint::In(i), Endpoint::Out(j))).collect();
        Diagram { vertices: Vec::new(), wires, inputs: perm.len(), outputs: perm.len(), loops: 0 }
    }

    pub fn vertices(&self) -> &[VertexKind] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> &VertexKind {
        &self.vertices[v]
    }

    pub fn wires(&self) -> &[(Endpoint, Endpoint)] {
        &self.wires
    }

    pub fn n_inputs(&self) -> usize {
        self.inputs
    }

    pub fn n_outputs(&self) -> usize {
        self.outputs
    }

    pub fn loops(&self) -> usize {
        self.loops
    }

    pub fn signature(&self) -> (usize, usize) {
        (self.inputs, self.outputs)
    }

    /// Number of wire ends at `v`; a self-loop counts twice.
    pub fn degree(&self, v: usize) -> usize {
        self.incidences(v).len()
    }

    /// All `(wire, side)` pairs whose endpoint is vertex `v`.
    pub fn incidences(&self, v: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (w, (a, b)) in self.wires.iter().enumerate() {
            if *a == Endpoint::V(v) {
                out.push((w, 0));
            }
            if *b == Endpoint::V(v) {
                out.push((w, 1));
            }
        }
        out
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for (a, b) in &self.wires {
            for e in [a, b] {
                if let Endpoint::V(v) = e {
                    deg[*v] += 1;
                }
            }
        }
        deg
    }

    /// Wire end attached to a boundary slot.
    pub fn boundary_end(&self, slot: Endpoint) -> Option<(usize, usize)> {
        self.wires.iter().enumerate().find_map(|(w, (a, b))| {
            if *a == slot {
                Some((w, 0))
            } else if *b == slot {
                Some((w, 1))
            } else {
                None
            }
        })
    }

    fn validate(&self) -> Result<(), DiagramError> {
        let mut seen: HashMap<Endpoint, usize> = HashMap::new();
        for (a, b) in &self.wires {
            for e in [a, b] {
                match e {
                    Endpoint::V(v) if *v >= self.vertices.len() => return Err(DiagramError::UnknownVertex(*v)),
                    Endpoint::In(i) if *i >= self.inputs => return Err(DiagramError::Boundary { slot: *e, count: 1 }),
                    Endpoint::Out(j) if *j >= self.outputs => {
                        return Err(DiagramError::Boundary { slot: *e, count: 1 })
                    }
                    _ => {}
                }
                *seen.entry(*e).or_default() += 1;
            }
        }
        let slots = (0..self.inputs).map(Endpoint::In).chain((0..self.outputs).map(Endpoint::Out));
        for slot in slots {
            let count = seen.get(&slot).copied().unwrap_or(0);
            if count != 1 {
                return Err(DiagramError::Boundary { slot, count });
            }
        }
        for (v, deg) in self.degrees().into_iter().enumerate() {
            if self.vertices[v] == VertexKind::Star && deg > 0 {
                return Err(DiagramError::StarDegree { vertex: v, degree: deg });
            }
        }
        Ok(())
    }

    /// Sequential composition: `self` first, then `next`.
    pub fn compose(&self, next: &Diagram) -> Result<Diagram, DiagramError> {
        if self.outputs != next.inputs {
            return Err(DiagramError::ArityMismatch { left: self.outputs, right: next.inputs });
        }
        let off = self.vertices.len();
        let mut wires = Vec::with_capacity(self.wires.len() + next.wires.len());
        let first = |e: Endpoint| match e {
            Endpoint::Out(j) => Node::J(j),
            other => Node::E(other),
        };
        let second = |e: Endpoint| match e {
            Endpoint::V(v) => Node::E(Endpoint::V(v + off)),
            Endpoint::In(i) => Node::J(i),
            other => Node::E(other),
        };
        for (a, b) in &self.wires {
            wires.push((first(*a), first(*b)));
        }
        for (a, b) in &next.wires {
            wires.push((second(*a), second(*b)));
        }
        let (wires, extra) = splice(&wires, self.outputs);
        let mut vertices = self.vertices.clone();
        vertices.extend(next.vertices.iter().cloned());
        Ok(Diagram {
            vertices,
            wires,
            inputs: self.inputs,
            outputs: next.outputs,
            loops: self.loops + next.loops + extra,
        })
    }

    /// Parallel composition with `self` on top (its boundaries come first).
    pub fn tensor(&self, other: &Diagram) -> Diagram {
        let off = self.vertices.len();
        let shift = |e: Endpoint| match e {
            Endpoint::V(v) => Endpoint::V(v + off),
            Endpoint::In(i) => Endpoint::In(i + self.inputs),
            Endpoint::Out(j) => Endpoint::Out(j + self.outputs),
        };
        let mut vertices = self.vertices.clone();
        vertices.extend(other.vertices.iter().cloned());
        let mut wires = self.wires.clone();
        wires.extend(other.wires.iter().map(|(a, b)| (shift(*a), shift(*b))));
        Diagram {
            vertices,
            wires,
            inputs: self.inputs + other.inputs,
            outputs: self.outputs + other.outputs,
            loops: self.loops + other.loops,
        }
    }

    pub fn tensor_all<'a>(parts: impl IntoIterator<Item = &'a Diagram>) -> Diagram {
        parts.into_iter().fold(Diagram::empty(), |acc, d| acc.tensor(d))
    }

    /// Inputs become outputs and vice versa, each keeping its position.
    pub fn transpose(&self) -> Diagram {
        let flip = |e: Endpoint| match e {
            Endpoint::In(i) => Endpoint::Out(i),
            Endpoint::Out(j) => Endpoint::In(j),
            v => v,
        };
        Diagram {
            vertices: self.vertices.clone(),
            wires: self.wires.iter().map(|(a, b)| (flip(*a), flip(*b))).collect(),
            inputs: self.outputs,
            outputs: self.inputs,
            loops: self.loops,
        }
    }

    /// Bends every input up into an output placed after the original outputs.
    pub fn bend_to_state(&self) -> Diagram {
        let n = self.outputs;
        let bend = |e: Endpoint| match e {
            Endpoint::In(i) => Endpoint::Out(n + i),
            other => other,
        };
        Diagram {
            vertices: self.vertices.clone(),
            wires: self.wires.iter().map(|(a, b)| (bend(*a), bend(*b))).collect(),
            inputs: 0,
            outputs: self.outputs + self.inputs,
            loops: self.loops,
        }
    }

    fn multiplicities(&self) -> HashMap<(Endpoint, Endpoint), usize> {
        let mut m = HashMap::new();
        for (a, b) in &self.wires {
            *m.entry(incidence_key(*a, *b)).or_default() += 1;
        }
        m
    }

    /// Multigraph isomorphism fixing every boundary slot and preserving
    /// vertex kinds and labels.
    pub fn is_isomorphic(&self, other: &Diagram) -> bool {
        if self.signature() != other.signature()
            || self.loops != other.loops
            || self.vertices.len() != other.vertices.len()
            || self.wires.len() != other.wires.len()
        {
            return false;
        }
        let m1 = self.multiplicities();
        let m2 = other.multiplicities();
        let count = |m: &HashMap<(Endpoint, Endpoint), usize>, a: Endpoint, b: Endpoint| {
            m.get(&incidence_key(a, b)).copied().unwrap_or(0)
        };
        let slots: Vec<Endpoint> =
            (0..self.inputs).map(Endpoint::In).chain((0..self.outputs).map(Endpoint::Out)).collect();
        for (i, a) in slots.iter().enumerate() {
            for b in &slots[i..] {
                if count(&m1, *a, *b) != count(&m2, *a, *b) {
                    return false;
                }
            }
        }
        let d1 = self.degrees();
        let d2 = other.degrees();
        let compatible = |v: usize, w: usize| {
            self.vertices[v] == other.vertices[w]
                && d1[v] == d2[w]
                && count(&m1, Endpoint::V(v), Endpoint::V(v)) == count(&m2, Endpoint::V(w), Endpoint::V(w))
                && slots.iter().all(|s| count(&m1, Endpoint::V(v), *s) == count(&m2, Endpoint::V(w), *s))
        };
        let n = self.vertices.len();
        let mut map: Vec<usize> = Vec::with_capacity(n);
        let mut used = vec![false; n];

        fn search(
            v: usize,
            n: usize,
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
            ok: &dyn Fn(usize, usize, &[usize]) -> bool,
        ) -> bool {
            if v == n {
                return true;
            }
            for w in 0..n {
                if !used[w] && ok(v, w, map) {
                    used[w] = true;
                    map.push(w);
                    if search(v + 1, n, map, used, ok) {
                        return true;
                    }
                    map.pop();
                    used[w] = false;
                }
            }
            false
        }

        let ok = |v: usize, w: usize, map: &[usize]| {
            compatible(v, w)
                && map.iter().enumerate().all(|(u, &fu)| {
                    count(&m1, Endpoint::V(u), Endpoint::V(v)) == count(&m2, Endpoint::V(fu), Endpoint::V(w))
                })
        };
        search(0, n, &mut map, &mut used, &ok)
    }

    /// Assembles and validates a diagram from raw parts.
    pub fn from_parts(
        vertices: Vec<VertexKind>,
        wires: Vec<(Endpoint, Endpoint)>,
        inputs: usize,
        outputs: usize,
        loops: usize,
    ) -> Result<Diagram, DiagramError> {
        let d = Diagram { vertices, wires, inputs, outputs, loops };
        d.validate()?;
        Ok(d)
    }
}

/// Endpoint used while splicing: a real endpoint or a degree-2 junction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Node {
    E(Endpoint),
    J(usize),
}

/// Dissolves junctions, each of which must carry exactly two wire ends.
/// Returns the resulting wires and the number of closed loops formed.
pub(crate) fn splice(wires: &[(Node, Node)], junctions: usize) -> (Vec<(Endpoint, Endpoint)>, usize) {
    let mut at: Vec<Vec<(usize, usize)>> = vec![Vec::new(); junctions];
    for (w, (a, b)) in wires.iter().enumerate() {
        for (side, n) in [(0, a), (1, b)] {
            if let Node::J(j) = n {
                at[*j].push((w, side));
            }
        }
    }
    debug_assert!(at.iter().all(|ends| ends.len() == 2));
    let end = |w: usize, side: usize| if side == 0 { wires[w].0 } else { wires[w].1 };
    let across = |j: usize, from: (usize, usize)| if at[j][0] == from { at[j][1] } else { at[j][0] };

    let mut visited = vec![false; wires.len()];
    let mut out = Vec::new();
    for w in 0..wires.len() {
        if visited[w] {
            continue;
        }
        let start_side = match (wires[w].0, wires[w].1) {
            (Node::E(_), _) => 0,
            (_, Node::E(_)) => 1,
            _ => continue,
        };
        let Node::E(start) = end(w, start_side) else { unreachable!() };
        let (mut cw, mut cin) = (w, start_side);
        loop {
            visited[cw] = true;
            let exit = 1 - cin;
            match end(cw, exit) {
                Node::E(e) => {
                    out.push((start, e));
                    break;
                }
                Node::J(j) => {
                    let (nw, ns) = across(j, (cw, exit));
                    cw = nw;
                    cin = ns;
                }
            }
        }
    }
    let mut loops = 0;
    for w in 0..wires.len() {
        if visited[w] {
            continue;
        }
        loops += 1;
        let (mut cw, mut cin) = (w, 0);
        while !visited[cw] {
            visited[cw] = true;
            let exit = 1 - cin;
            let Node::J(j) = end(cw, exit) else { unreachable!("cycle wires end at junctions") };
            let (nw, ns) = across(j, (cw, exit));
            cw = nw;
            cin = ns;
        }
    }
    (out, loops)
}
