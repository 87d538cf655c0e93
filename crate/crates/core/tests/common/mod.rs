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

//! Shared test support: random diagrams, a brute-force evaluator written
//! independently of the library's contraction code, and a state-vector
//! circuit simulator.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;

use zhcalc::circuits::Gate;
use zhcalc::normalform::NormalForm;
use zhcalc::rules::{self, find_matches, RuleInstance, DEFAULT_MATCH_VERTEX_CAP};
use zhcalc::{Circuit, Diagram, Endpoint, RingDescriptor, RingElement, VertexKind};

pub fn int(ring: &RingDescriptor, v: i64) -> RingElement {
    ring.from_integer(v)
}

fn add(a: &RingElement, b: &RingElement) -> RingElement {
    a.add(b).expect("same ring")
}

fn mul(a: &RingElement, b: &RingElement) -> RingElement {
    a.mul(b).expect("same ring")
}

#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_boundary: usize,
    pub max_vertices: usize,
    pub max_wires: usize,
    pub stars: bool,
}

impl Default for Shape {
    fn default() -> Self {
        Shape { max_boundary: 3, max_vertices: 8, max_wires: 12, stars: true }
    }
}

fn random_kind(rng: &mut impl Rng, ring: &RingDescriptor, stars: bool) -> VertexKind {
    let roll = rng.gen_range(0..100);
    match roll {
        0..=34 => VertexKind::ZSpider,
        35..=69 => {
            if rng.gen_bool(0.5) {
                VertexKind::hadamard(ring)
            } else {
                VertexKind::HBox(int(ring, rng.gen_range(-2..=2)))
            }
        }
        70..=79 => VertexKind::XSpider,
        80..=89 => VertexKind::XNot,
        _ if stars => VertexKind::Star,
        _ => VertexKind::ZSpider,
    }
}

/// A random valid diagram of the given size limits.
pub fn random_diagram(rng: &mut impl Rng, ring: &RingDescriptor, shape: Shape) -> Diagram {
    let nb = rng.gen_range(0..=shape.max_boundary);
    let n_in = rng.gen_range(0..=nb);
    random_with_signature(rng, ring, shape, n_in, nb - n_in)
}

pub fn random_with_signature(
    rng: &mut impl Rng,
    ring: &RingDescriptor,
    shape: Shape,
    n_in: usize,
    n_out: usize,
) -> Diagram {
    let nv = rng.gen_range(0..=shape.max_vertices);
    let mut kinds: Vec<VertexKind> = (0..nv).map(|_| random_kind(rng, ring, shape.stars)).collect();
    let mut legs: Vec<usize> = (0..nv).filter(|&v| kinds[v] != VertexKind::Star).collect();
    let slots: Vec<Endpoint> = (0..n_in).map(Endpoint::In).chain((0..n_out).map(Endpoint::Out)).collect();
    if legs.is_empty() && !slots.is_empty() {
        kinds.push(VertexKind::ZSpider);
        legs.push(kinds.len() - 1);
    }
    let mut wires = Vec::new();
    let mut pending: Vec<Endpoint> = slots.clone();
    pending.shuffle(rng);
    while let Some(s) = pending.pop() {
        if !pending.is_empty() && rng.gen_bool(0.12) {
            let t = pending.pop().expect("non-empty");
            wires.push((s, t));
        } else {
            let v = *legs.choose(rng).expect("some vertex takes legs");
            wires.push((s, Endpoint::V(v)));
        }
    }
    if !legs.is_empty() {
        let room = shape.max_wires.saturating_sub(wires.len());
        let extra = rng.gen_range(0..=room.min(nv + 2));
        for _ in 0..extra {
            let u = *legs.choose(rng).expect("non-empty");
            let v = if rng.gen_bool(0.08) { u } else { *legs.choose(rng).expect("non-empty") };
            wires.push((Endpoint::V(u), Endpoint::V(v)));
        }
    }
    wires.shuffle(rng);
    let loops = usize::from(rng.gen_bool(0.08));
    Diagram::from_parts(kinds, wires, n_in, n_out, loops).expect("generator builds valid diagrams")
}

/// Weight of a generator, straight from its definition.
pub fn oracle_weight(kind: &VertexKind, bits: &[u8], star: &RingElement) -> RingElement {
    let ring = star.ring();
    let ones = bits.iter().filter(|&&b| b == 1).count();
    match kind {
        VertexKind::ZSpider => {
            if bits.is_empty() {
                int(&ring, 2)
            } else {
                int(&ring, i64::from(ones == 0 || ones == bits.len()))
            }
        }
        VertexKind::HBox(a) => {
            if ones == bits.len() {
                a.clone()
            } else {
                ring.one()
            }
        }
        VertexKind::XSpider => int(&ring, i64::from(ones % 2 == 0)),
        VertexKind::XNot => int(&ring, i64::from(ones % 2 == 1)),
        VertexKind::Star => star.clone(),
    }
}

/// Row-major matrix of `d` by summing over every assignment of bits to
/// wires. Rows are outputs, columns inputs, first slot most significant.
pub fn oracle_entries(d: &Diagram, star: &RingElement) -> Vec<RingElement> {
    let ring = star.ring();
    let (n_in, n_out) = (d.n_inputs(), d.n_outputs());
    let mut out = vec![ring.zero(); 1 << (n_in + n_out)];
    let wires = d.wires();
    let incid: Vec<Vec<usize>> = (0..d.vertices().len())
        .map(|v| {
            let mut ws = Vec::new();
            for (w, (a, b)) in wires.iter().enumerate() {
                if *a == Endpoint::V(v) {
                    ws.push(w);
                }
                if *b == Endpoint::V(v) {
                    ws.push(w);
                }
            }
            ws
        })
        .collect();
    let slot_wire = |e: Endpoint| wires.iter().position(|(a, b)| *a == e || *b == e).expect("slot is wired");
    let in_w: Vec<usize> = (0..n_in).map(|i| slot_wire(Endpoint::In(i))).collect();
    let out_w: Vec<usize> = (0..n_out).map(|j| slot_wire(Endpoint::Out(j))).collect();
    let mut loop_factor = ring.one();
    for _ in 0..d.loops() {
        loop_factor = mul(&loop_factor, &int(&ring, 2));
    }
    for assign in 0u64..(1u64 << wires.len()) {
        let bit = |w: usize| ((assign >> w) & 1) as u8;
        let mut weight = loop_factor.clone();
        for (v, kind) in d.vertices().iter().enumerate() {
            let bits: Vec<u8> = incid[v].iter().map(|&w| bit(w)).collect();
            weight = mul(&weight, &oracle_weight(kind, &bits, star));
            if weight.is_zero() {
                break;
            }
        }
        if weight.is_zero() {
            continue;
        }
        let row = out_w.iter().fold(0usize, |acc, &w| (acc << 1) | bit(w) as usize);
        let col = in_w.iter().fold(0usize, |acc, &w| (acc << 1) | bit(w) as usize);
        let idx = (row << n_in) | col;
        out[idx] = add(&out[idx], &weight);
    }
    out
}

/// A random normal form; coefficients are sometimes all even so that
/// reduction has work to do.
pub fn random_nf(rng: &mut impl Rng, ring: &RingDescriptor) -> NormalForm {
    let n = rng.gen_range(0..=3);
    let k = rng.gen_range(0..=4);
    let scale = [1, 1, 2, 4, 8][rng.gen_range(0..5)];
    let coeffs = (0..1usize << n).map(|_| int(ring, scale * rng.gen_range(-6..=6))).collect();
    NormalForm::new(*ring, n, k, coeffs).expect("valid normal form")
}

fn qubit_bit(index: usize, q: usize, n: usize) -> usize {
    (index >> (n - 1 - q)) & 1
}

/// Applies one gate to a state vector over `Z[1/sqrt2]`.
fn apply_gate(state: &[RingElement], gate: &Gate, n: usize) -> Vec<RingElement> {
    let ring = RingDescriptor::root_two();
    let s = ring.inv_sqrt2().expect("rt2 has 1/sqrt2");
    let mut out = vec![ring.zero(); state.len()];
    for (i, amp) in state.iter().enumerate() {
        if amp.is_zero() {
            continue;
        }
        let b = |q: usize| qubit_bit(i, q, n);
        let flip = |q: usize| i ^ (1 << (n - 1 - q));
        let mut put = |j: usize, v: RingElement| out[j] = add(&out[j], &v);
        match *gate {
            Gate::X(t) => put(flip(t), amp.clone()),
            Gate::Z(t) => put(i, if b(t) == 1 { amp.neg() } else { amp.clone() }),
            Gate::H(t) => {
                let base = mul(amp, &s);
                let zero = if b(t) == 0 { i } else { flip(t) };
                put(zero, base.clone());
                put(zero | (1 << (n - 1 - t)), if b(t) == 1 { base.neg() } else { base });
            }
            Gate::Cnot(c, t) => put(if b(c) == 1 { flip(t) } else { i }, amp.clone()),
            Gate::Cz(p, q) => put(i, if b(p) & b(q) == 1 { amp.neg() } else { amp.clone() }),
            Gate::Ccz(p, q, r) => put(i, if b(p) & b(q) & b(r) == 1 { amp.neg() } else { amp.clone() }),
            Gate::Tof(p, q, t) => put(if b(p) & b(q) == 1 { flip(t) } else { i }, amp.clone()),
        }
    }
    out
}

/// Row-major unitary of `c`, built column by column by simulation.
pub fn simulate(c: &Circuit) -> Vec<RingElement> {
    let ring = RingDescriptor::root_two();
    let dim = 1usize << c.qubits;
    let mut m = vec![ring.zero(); dim * dim];
    for col in 0..dim {
        let mut state = vec![ring.zero(); dim];
        state[col] = ring.one();
        for g in &c.gates {
            state = apply_gate(&state, g, c.qubits);
        }
        for (row, v) in state.into_iter().enumerate() {
            m[row * dim + col] = v;
        }
    }
    m
}

pub fn random_circuit(rng: &mut impl Rng, max_qubits: usize, max_gates: usize) -> Circuit {
    let qubits = rng.gen_range(1..=max_qubits);
    let mut c = Circuit::new(qubits);
    for _ in 0..rng.gen_range(0..=max_gates) {
        let mut qs: Vec<usize> = (0..qubits).collect();
        qs.shuffle(rng);
        let kinds: &[u8] = match qubits {
            1 => &[0, 1, 2],
            2 => &[0, 1, 2, 3, 4],
            _ => &[0, 1, 2, 3, 4, 5, 6],
        };
        let gate = match kinds.choose(rng).expect("non-empty") {
            0 => Gate::X(qs[0]),
            1 => Gate::Z(qs[0]),
            2 => Gate::H(qs[0]),
            3 => Gate::Cnot(qs[0], qs[1]),
            4 => Gate::Cz(qs[0], qs[1]),
            5 => Gate::Ccz(qs[0], qs[1], qs[2]),
            _ => Gate::Tof(qs[0], qs[1], qs[2]),
        };
        c.gates.push(gate);
    }
    c
}

/// Every catalogue rule at small parameters, in both directions, that is
/// sound over `ring` with the star read as `1/2`.
pub fn rewrite_pool(ring: &RingDescriptor) -> Vec<RuleInstance> {
    let labels: Vec<RingElement> = (-2..=2).map(|v| int(ring, v)).collect();
    let mut pool = Vec::new();
    for schema in rules::all() {
        if schema.requires_half && !ring.has_half() {
            continue;
        }
        for p in schema.grid(ring, 2, &labels) {
            let Ok(inst) = schema.instantiate(&p, ring) else { continue };
            if inst.lhs.vertices().len() <= 6 {
                pool.push(inst.clone());
            }
            if inst.rhs.vertices().len() <= 6 {
                pool.push(inst.reversed());
            }
        }
    }
    pool
}

/// Applies `steps` random rewrites drawn from `pool`. Returns the rewritten
/// diagram and the names of the rules used.
pub fn random_rewrites(
    rng: &mut impl Rng,
    pool: &[RuleInstance],
    start: &Diagram,
    steps: usize,
) -> (Diagram, Vec<String>) {
    let mut d = start.clone();
    let mut used = Vec::new();
    let mut order: Vec<usize> = (0..pool.len()).collect();
    for _ in 0..steps {
        order.shuffle(rng);
        for &i in &order {
            let rule = &pool[i];
            let sites = find_matches(&d, rule, DEFAULT_MATCH_VERTEX_CAP).expect("lhs under cap");
            let Some(site) = sites.choose(rng) else { continue };
            d = rules::apply(&d, rule, site).expect("matched site applies");
            used.push(rule.name.clone());
            break;
        }
    }
    (d, used)
}
