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

//! Normal forms of states.
//!
//! A normal form on `n` outputs is a star count `k` and `2^n` coefficients
//! `a_b`; it denotes the state `sum_b a_b / 2^k |b>`. Rings that contain
//! `1/2` absorb stars into the coefficients, so `k` stays zero there. Over
//! the integers `k` is tracked, and [`reduce`] cancels common factors of two.
//!
//! [`normalize`] bends a diagram into a state, builds the normal form of
//! every generator and glues them with tensor products, caps and Z-spider
//! copies, each of which acts on coefficient vectors directly.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::diagram::{Diagram, DiagramBuilder, Endpoint, VertexKind};
use crate::ring::{RingDescriptor, RingElement, RingError};
use crate::semantics::{Interpretation, Matrix, SemanticsError, StarMode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalFormError {
    #[error("normal forms have {left} and {right} outputs")]
    Arity { left: usize, right: usize },

    #[error("output index {index} out of range for {n} outputs")]
    Index { index: usize, n: usize },

    #[error("outputs {0} and {0} cannot be joined to themselves")]
    SameIndex(usize),

    #[error("{len} coefficients do not fit {n} outputs")]
    Length { len: usize, n: usize },

    #[error("diagram signatures differ: {left:?} vs {right:?}")]
    Signature { left: (usize, usize), right: (usize, usize) },

    #[error("normal form with k={k} has no value in {ring}")]
    NotEvaluable { k: u32, ring: RingDescriptor },

    #[error(transparent)]
    Ring(#[from] RingError),

    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

type Result<T> = std::result::Result<T, NormalFormError>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalForm {
    ring: RingDescriptor,
    n: usize,
    k: u32,
    coeffs: Vec<RingElement>,
}

impl NormalForm {
    pub fn new(ring: RingDescriptor, n: usize, k: u32, coeffs: Vec<RingElement>) -> Result<NormalForm> {
        if coeffs.len() != 1 << n {
            return Err(NormalFormError::Length { len: coeffs.len(), n });
        }
        if let Some(bad) = coeffs.iter().find(|c| c.ring() != ring) {
            return Err(RingError::KindMismatch(bad.ring(), ring).into());
        }
        Ok(NormalForm { ring, n, k, coeffs }.fold())
    }

    pub fn scalar(value: RingElement) -> NormalForm {
        NormalForm { ring: value.ring(), n: 0, k: 0, coeffs: vec![value] }
    }

    pub fn ring(&self) -> RingDescriptor {
        self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn coeffs(&self) -> &[RingElement] {
        &self.coeffs
    }

    /// `k = 0` or some coefficient is not divisible by two.
    pub fn is_reduced(&self) -> bool {
        self.k == 0 || self.coeffs.iter().any(|c| c.halve().is_none())
    }

    fn is_trivial(&self) -> bool {
        self.n == 0 && self.k == 0 && self.coeffs[0].is_one()
    }

    /// Absorbs stars into the coefficients when the ring has a half.
    fn fold(mut self) -> NormalForm {
        if self.ring.has_half() {
            while self.k > 0 {
                self.coeffs = self.coeffs.iter().map(|c| c.halve().expect("ring has a half")).collect();
                self.k -= 1;
            }
        }
        self
    }

    /// One `k=..; c0 c1 ...` line.
    pub fn compact(&self) -> String {
        self.to_string()
    }

    /// `k=<int>` followed by one `coeffs[b] = v` line per bitstring.
    pub fn to_lines(&self) -> String {
        let mut out = format!("k={}\n", self.k);
        for (i, c) in self.coeffs.iter().enumerate() {
            out.push_str(&format!("coeffs[{}] = {}\n", bitstring(i, self.n), c));
        }
        out
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={};", self.k)?;
        for c in &self.coeffs {
            write!(f, " {c}")?;
        }
        Ok(())
    }
}

fn bitstring(idx: usize, n: usize) -> String {
    (0..n).map(|p| if (idx >> (n - 1 - p)) & 1 == 1 { '1' } else { '0' }).collect()
}

fn bit(idx: usize, n: usize, pos: usize) -> usize {
    (idx >> (n - 1 - pos)) & 1
}

/// Inserts `b` at position `pos` of an index, giving an index of length `n`.
fn insert_bit(idx: usize, n: usize, pos: usize, b: usize) -> usize {
    let low_bits = n - 1 - pos;
    let high = idx >> low_bits;
    let low = idx & ((1 << low_bits) - 1);
    (high << (low_bits + 1)) | (b << low_bits) | low
}

fn check_index(nf: &NormalForm, i: usize) -> Result<()> {
    if i >= nf.n {
        return Err(NormalFormError::Index { index: i, n: nf.n });
    }
    Ok(())
}

pub fn nf_of_hbox(label: &RingElement, n: usize) -> NormalForm {
    let ring = label.ring();
    let mut coeffs = vec![ring.one(); 1 << n];
    coeffs[(1 << n) - 1] = label.clone();
    NormalForm { ring, n, k: 0, coeffs }
}

pub fn nf_of_zspider(ring: &RingDescriptor, n: usize) -> NormalForm {
    let mut coeffs = vec![ring.zero(); 1 << n];
    coeffs[0] = ring.one();
    let last = (1 << n) - 1;
    coeffs[last] = coeffs[last].add(&ring.one()).expect("same ring");
    NormalForm { ring: *ring, n, k: 0, coeffs }
}

pub fn nf_of_cup(ring: &RingDescriptor) -> NormalForm {
    let coeffs = [1, 0, 0, 1].iter().map(|&v| ring.from_integer(v)).collect();
    NormalForm { ring: *ring, n: 2, k: 0, coeffs }
}

/// One star: `k = 1` over the integers, otherwise its value as a coefficient.
pub fn nf_of_star(interp: &Interpretation) -> Result<NormalForm> {
    let ring = interp.ring();
    match interp.star_mode() {
        StarMode::InvSqrt2 => Ok(NormalForm::scalar(interp.star_value()?)),
        StarMode::Half => Ok(NormalForm { ring, n: 0, k: 1, coeffs: vec![ring.one()] }.fold()),
    }
}

/// X-spider (or X-NOT when `negated`) on `n` legs, built from a Z-spider with
/// an H-box on every leg and one star.
pub fn nf_of_xspider(ring: &RingDescriptor, n: usize, negated: bool) -> Result<NormalForm> {
    let h = ring.from_integer(-1);
    let mut acc = if negated {
        let t = tensor_nf(&nf_of_zspider(ring, n + 1), &nf_of_hbox(&h, 1))?;
        cap_nf(&t, n, n + 1)?
    } else {
        nf_of_zspider(ring, n)
    };
    for _ in 0..n {
        acc = tensor_nf(&acc, &nf_of_hbox(&h, 2))?;
        let last = acc.n - 2;
        acc = cap_nf(&acc, 0, last)?;
    }
    acc.k += 1;
    Ok(acc.fold())
}

/// Adds an output (the new least significant bit) carrying a Z-unit.
pub fn extend(nf: &NormalForm) -> NormalForm {
    let coeffs = nf.coeffs.iter().flat_map(|c| [c.clone(), c.clone()]).collect();
    NormalForm { ring: nf.ring, n: nf.n + 1, k: nf.k, coeffs }
}

/// Pointwise product.
pub fn schur(a: &NormalForm, b: &NormalForm) -> Result<NormalForm> {
    if a.n != b.n {
        return Err(NormalFormError::Arity { left: a.n, right: b.n });
    }
    let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x.mul(y)).collect::<std::result::Result<_, _>>()?;
    Ok(NormalForm { ring: a.ring, n: a.n, k: a.k + b.k, coeffs }.fold())
}

/// Plugs a Z-counit into output `index`, summing the paired coefficients.
pub fn contract(nf: &NormalForm, index: usize) -> Result<NormalForm> {
    check_index(nf, index)?;
    let n = nf.n;
    let mut coeffs = Vec::with_capacity(1 << (n - 1));
    for b in 0..(1usize << (n - 1)) {
        let c0 = &nf.coeffs[insert_bit(b, n, index, 0)];
        let c1 = &nf.coeffs[insert_bit(b, n, index, 1)];
        coeffs.push(c0.add(c1)?);
    }
    Ok(NormalForm { ring: nf.ring, n: n - 1, k: nf.k, coeffs })
}

/// Output `p` of the result is output `perm[p]` of `nf`.
pub fn permute(nf: &NormalForm, perm: &[usize]) -> Result<NormalForm> {
    let n = nf.n;
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(NormalFormError::Arity { left: n, right: perm.len() });
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(NormalFormError::Index { index: p, n });
        }
        seen[p] = true;
    }
    let mut coeffs = Vec::with_capacity(1 << n);
    for b in 0..(1usize << n) {
        let mut src = 0usize;
        for (p, &q) in perm.iter().enumerate() {
            src |= bit(b, n, p) << (n - 1 - q);
        }
        coeffs.push(nf.coeffs[src].clone());
    }
    Ok(NormalForm { ring: nf.ring, n, k: nf.k, coeffs })
}

/// Juxtaposition; the outputs of `a` come first.
pub fn tensor_nf(a: &NormalForm, b: &NormalForm) -> Result<NormalForm> {
    if a.ring != b.ring {
        return Err(RingError::KindMismatch(a.ring, b.ring).into());
    }
    let mut coeffs = Vec::with_capacity(a.coeffs.len() * b.coeffs.len());
    for x in &a.coeffs {
        for y in &b.coeffs {
            coeffs.push(x.mul(y)?);
        }
    }
    Ok(NormalForm { ring: a.ring, n: a.n + b.n, k: a.k + b.k, coeffs }.fold())
}

/// Joins outputs `i` and `j` through a Z-spider. Output `j` disappears and
/// the merged wire sits where `i` lands once `j` is removed.
pub fn mult_outputs(nf: &NormalForm, i: usize, j: usize) -> Result<NormalForm> {
    check_index(nf, i)?;
    check_index(nf, j)?;
    if i == j {
        return Err(NormalFormError::SameIndex(i));
    }
    let n = nf.n;
    let merged = if i < j { i } else { i - 1 };
    let mut coeffs = Vec::with_capacity(1 << (n - 1));
    for b in 0..(1usize << (n - 1)) {
        let x = bit(b, n - 1, merged);
        coeffs.push(nf.coeffs[insert_bit(b, n, j, x)].clone());
    }
    Ok(NormalForm { ring: nf.ring, n: n - 1, k: nf.k, coeffs })
}

/// Applies a cap to outputs `i` and `j`.
pub fn cap_nf(nf: &NormalForm, i: usize, j: usize) -> Result<NormalForm> {
    let m = mult_outputs(nf, i, j)?;
    let merged = if i < j { i } else { i - 1 };
    contract(&m, merged)
}

/// Appends a copy of output `i` as a new last output.
pub fn copy_output(nf: &NormalForm, i: usize) -> Result<NormalForm> {
    let t = tensor_nf(nf, &nf_of_cup(&nf.ring))?;
    mult_outputs(&t, i, nf.n)
}

/// Cancels stars against common factors of two until none remain or some
/// coefficient is odd. Zero coefficients always halve, so the zero state
/// ends with `k = 0`.
pub fn reduce(nf: &NormalForm) -> NormalForm {
    let mut out = nf.clone();
    while out.k > 0 {
        let halves: Option<Vec<RingElement>> = out.coeffs.iter().map(RingElement::halve).collect();
        match halves {
            Some(h) => {
                out.coeffs = h;
                out.k -= 1;
            }
            None => break,
        }
    }
    out
}

/// The state denoted by `nf`, as a `2^n x 1` matrix.
pub fn evaluate(nf: &NormalForm) -> Result<Matrix> {
    let r = reduce(nf);
    if r.k > 0 {
        return Err(NormalFormError::NotEvaluable { k: r.k, ring: r.ring });
    }
    Ok(Matrix::from_entries(r.ring, r.n, 0, r.coeffs)?)
}

/// The normal-form diagram: one Z-spider per output, one H-box per
/// bitstring `b` joined to spider `i` through an X-NOT exactly when `b_i = 0`,
/// and `k` stars.
pub fn nf_to_diagram(nf: &NormalForm) -> Diagram {
    let n = nf.n;
    let mut b = DiagramBuilder::new(0, n);
    let spiders: Vec<usize> = (0..n).map(|_| b.z()).collect();
    for (j, &z) in spiders.iter().enumerate() {
        b.wire(z, Endpoint::Out(j));
    }
    for (idx, c) in nf.coeffs.iter().enumerate() {
        let h = b.h(c.clone());
        for (i, &z) in spiders.iter().enumerate() {
            if bit(idx, n, i) == 1 {
                b.wire(z, h);
            } else {
                let x = b.not();
                b.wire(z, x).wire(x, h);
            }
        }
    }
    for _ in 0..nf.k {
        b.star();
    }
    b.build().expect("normal-form diagram is well formed")
}

/// Normal form of the state obtained by bending every input of `d` up.
pub fn normalize(d: &Diagram, interp: &Interpretation) -> Result<NormalForm> {
    Normalizer::run(d, interp, false).map(|(nf, _)| nf)
}

pub fn normalize_with_trace(d: &Diagram, interp: &Interpretation) -> Result<(NormalForm, Trace)> {
    Normalizer::run(d, interp, true)
}

/// Decides `[[d1]] = [[d2]]` by comparing reduced normal forms.
pub fn equal(d1: &Diagram, d2: &Diagram, interp: &Interpretation) -> Result<bool> {
    if d1.signature() != d2.signature() {
        return Err(NormalFormError::Signature { left: d1.signature(), right: d2.signature() });
    }
    let a = reduce(&normalize(d1, interp)?);
    let b = reduce(&normalize(d2, interp)?);
    Ok(a == b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepKind {
    Generator,
    Tensor,
    MultOutputs,
    Cap,
    Contract,
    Permute,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepKind::Generator => "generator",
            StepKind::Tensor => "tensor",
            StepKind::MultOutputs => "mult",
            StepKind::Cap => "cap",
            StepKind::Contract => "contract",
            StepKind::Permute => "permute",
        })
    }
}

/// One normalization step. `before` fingerprints the expected state computed
/// independently from the step's inputs; `after` fingerprints the result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub kind: StepKind,
    pub detail: String,
    pub before: u64,
    pub after: u64,
}

impl TraceStep {
    pub fn verified(&self) -> bool {
        self.before == self.after
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn count(&self, kind: StepKind) -> usize {
        self.steps.iter().filter(|s| s.kind == kind).count()
    }

    pub fn all_verified(&self) -> bool {
        self.steps.iter().all(TraceStep::verified)
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(
                f,
                "step {:>3}: {:<9} {:<28} {:016x} -> {:016x} {}",
                i + 1,
                s.kind.to_string(),
                s.detail,
                s.before,
                s.after,
                if s.verified() { "ok" } else { "MISMATCH" }
            )?;
        }
        write!(f, "{} steps", self.steps.len())
    }
}

/// Fingerprint of the value of `(k, coeffs)`, insensitive to star cancellation.
pub fn fingerprint(nf: &NormalForm) -> u64 {
    let r = reduce(nf);
    let mut h = DefaultHasher::new();
    r.n.hash(&mut h);
    r.k.hash(&mut h);
    for c in &r.coeffs {
        c.to_string().hash(&mut h);
    }
    h.finish()
}

/// Straightforward per-bitstring versions of the combination steps, used
/// only to cross-check traced steps.
mod reference {
    use super::*;

    fn bits(idx: usize, n: usize) -> Vec<usize> {
        (0..n).map(|p| (idx >> (n - 1 - p)) & 1).collect()
    }

    fn index(bits: &[usize]) -> usize {
        bits.iter().fold(0, |acc, &b| (acc << 1) | b)
    }

    fn make(ring: RingDescriptor, n: usize, k: u32, coeffs: Vec<RingElement>) -> NormalForm {
        NormalForm { ring, n, k, coeffs }
    }

    pub fn tensor(a: &NormalForm, b: &NormalForm) -> NormalForm {
        let n = a.n + b.n;
        let coeffs = (0..1usize << n)
            .map(|i| {
                let v = bits(i, n);
                a.coeffs[index(&v[..a.n])].mul(&b.coeffs[index(&v[a.n..])]).expect("same ring")
            })
            .collect();
        make(a.ring, n, a.k + b.k, coeffs)
    }

    /// Sums over all assignments of `nf`'s outputs that agree with the kept
    /// outputs `keep`, restricted by `constraint`.
    fn marginal(nf: &NormalForm, keep: &[usize], constraint: impl Fn(&[usize]) -> bool) -> NormalForm {
        let m = keep.len();
        let mut coeffs = vec![nf.ring.zero(); 1 << m];
        for i in 0..(1usize << nf.n) {
            let v = bits(i, nf.n);
            if !constraint(&v) {
                continue;
            }
            let out: Vec<usize> = keep.iter().map(|&p| v[p]).collect();
            let t = index(&out);
            coeffs[t] = coeffs[t].add(&nf.coeffs[i]).expect("same ring");
        }
        make(nf.ring, m, nf.k, coeffs)
    }

    pub fn mult(nf: &NormalForm, i: usize, j: usize) -> NormalForm {
        let keep: Vec<usize> = (0..nf.n).filter(|&p| p != j).collect();
        marginal(nf, &keep, |v| v[i] == v[j])
    }

    pub fn cap(nf: &NormalForm, i: usize, j: usize) -> NormalForm {
        let keep: Vec<usize> = (0..nf.n).filter(|&p| p != i && p != j).collect();
        marginal(nf, &keep, |v| v[i] == v[j])
    }

    pub fn contract(nf: &NormalForm, i: usize) -> NormalForm {
        let keep: Vec<usize> = (0..nf.n).filter(|&p| p != i).collect();
        marginal(nf, &keep, |_| true)
    }

    pub fn permute(nf: &NormalForm, perm: &[usize]) -> NormalForm {
        let coeffs = (0..1usize << nf.n)
            .map(|i| {
                let v = bits(i, nf.n);
                let mut src = vec![0; nf.n];
                for (p, &q) in perm.iter().enumerate() {
                    src[q] = v[p];
                }
                nf.coeffs[index(&src)].clone()
            })
            .collect();
        make(nf.ring, nf.n, nf.k, coeffs)
    }

    /// Generator state read off the vertex weight table.
    pub fn generator(interp: &Interpretation, kind: &VertexKind, n: usize) -> Result<NormalForm> {
        let ring = interp.ring();
        if *kind == VertexKind::Star && interp.star_mode() == StarMode::Half && !ring.has_half() {
            return Ok(make(ring, 0, 1, vec![ring.one()]));
        }
        let coeffs = (0..1usize << n)
            .map(|i| {
                let v: Vec<u8> = bits(i, n).into_iter().map(|b| b as u8).collect();
                interp.vertex_weight(kind, &v)
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(make(ring, n, 0, coeffs))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Leg {
    /// A wire end sitting at a vertex; pairs with the opposite end.
    End(usize, usize),
    /// Final output of the bent state.
    Final(usize),
    /// Representative bit of an open Z-spider.
    Rep(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Hub {
    Unopened,
    Open,
    Closed,
}

struct Normalizer<'a> {
    interp: &'a Interpretation,
    d: Diagram,
    acc: NormalForm,
    legs: Vec<Leg>,
    hubs: Vec<Hub>,
    processed: Vec<[bool; 2]>,
    trace: Option<Trace>,
}

impl<'a> Normalizer<'a> {
    fn run(d: &Diagram, interp: &'a Interpretation, traced: bool) -> Result<(NormalForm, Trace)> {
        let state = d.bend_to_state();
        let ring = interp.ring();
        for kind in state.vertices() {
            if let VertexKind::HBox(a) = kind {
                if a.ring() != ring {
                    return Err(SemanticsError::LabelRing { label: a.to_string(), expected: ring }.into());
                }
            }
        }
        let hubs = state
            .vertices()
            .iter()
            .map(|k| if *k == VertexKind::ZSpider { Hub::Unopened } else { Hub::Closed })
            .collect();
        let processed = vec![[false; 2]; state.wires().len()];
        let mut me = Normalizer {
            interp,
            d: state,
            acc: NormalForm::scalar(ring.one()),
            legs: Vec::new(),
            hubs,
            processed,
            trace: traced.then(Trace::default),
        };
        me.drive()?;
        let nf = me.acc.clone();
        Ok((nf, me.trace.unwrap_or_default()))
    }

    fn is_hub(&self, e: Endpoint) -> bool {
        matches!(e, Endpoint::V(v) if self.d.vertex(v) == &VertexKind::ZSpider)
    }

    fn end(&self, w: usize, side: usize) -> Endpoint {
        let (a, b) = self.d.wires()[w];
        if side == 0 {
            a
        } else {
            b
        }
    }

    fn record(&mut self, kind: StepKind, detail: String, expected: impl FnOnce() -> Result<NormalForm>) -> Result<()> {
        if let Some(trace) = &mut self.trace {
            let before = fingerprint(&expected()?);
            let after = fingerprint(&self.acc);
            trace.steps.push(TraceStep { kind, detail, before, after });
        }
        Ok(())
    }

    fn drive(&mut self) -> Result<()> {
        let d = self.d.clone();
        let wires = d.wires();
        let mut items_done: Vec<bool> = d.vertices().iter().map(|k| *k == VertexKind::ZSpider).collect();
        for (w, (a, b)) in wires.iter().enumerate() {
            if a.is_boundary() && b.is_boundary() {
                let (Endpoint::Out(i), Endpoint::Out(j)) = (*a, *b) else { unreachable!("bent state") };
                self.tensor_in(
                    nf_of_cup(&self.interp.ring()),
                    vec![Leg::Final(i), Leg::Final(j)],
                    "cup".into(),
                    |s| Ok(nf_of_cup(&s.interp.ring())),
                )?;
                self.processed[w] = [true, true];
            }
        }
        for _ in 0..d.loops() {
            let two = NormalForm::scalar(self.interp.ring().from_integer(2));
            let t = two.clone();
            self.tensor_in(two, Vec::new(), "closed loop".into(), move |_| Ok(t.clone()))?;
        }

        loop {
            let mut best: Option<(i64, usize, bool)> = None;
            for (v, &done) in items_done.iter().enumerate() {
                let candidate = if !done {
                    Some((self.item_score(v), false))
                } else if self.hubs[v] == Hub::Unopened {
                    Some((self.hub_score(v), true))
                } else {
                    None
                };
                if let Some((score, hub)) = candidate {
                    if best.is_none_or(|(s, _, _)| score < s) {
                        best = Some((score, v, hub));
                    }
                }
            }
            let Some((_, v, hub)) = best else { break };
            if hub {
                self.open_hub(v)?;
            } else {
                items_done[v] = true;
                self.add_item(v)?;
            }
            self.close_hubs()?;
        }
        self.finish()
    }

    fn item_score(&self, v: usize) -> i64 {
        let mut score = 0i64;
        let mut new_hubs = Vec::new();
        for (w, s) in self.d.incidences(v) {
            let other = self.end(w, 1 - s);
            if self.is_hub(other) {
                let h = other.vertex().expect("vertex");
                if self.hubs[h] == Hub::Unopened && !new_hubs.contains(&h) {
                    new_hubs.push(h);
                }
            } else if self.legs.contains(&Leg::End(w, 1 - s)) {
                score -= 1;
            } else {
                score += 1;
            }
        }
        score + new_hubs.len() as i64
    }

    fn hub_score(&self, v: usize) -> i64 {
        let outs = self.d.incidences(v).iter().filter(|&&(w, s)| self.end(w, 1 - s).is_boundary()).count();
        2 + outs as i64
    }

    fn position(&self, leg: Leg) -> usize {
        self.legs.iter().position(|l| *l == leg).expect("leg present")
    }

    fn tensor_in(
        &mut self,
        gen: NormalForm,
        tags: Vec<Leg>,
        detail: String,
        reference: impl FnOnce(&Self) -> Result<NormalForm>,
    ) -> Result<()> {
        let previous = self.acc.clone();
        if self.trace.is_some() {
            let expected = reference(self)?;
            self.acc = gen.clone();
            self.record(StepKind::Generator, detail, || Ok(expected))?;
        }
        if previous.is_trivial() {
            self.acc = gen;
        } else {
            self.acc = tensor_nf(&previous, &gen)?;
            self.record(StepKind::Tensor, format!("{} + {} outputs", previous.n, gen.n), || {
                Ok(reference::tensor(&previous, &gen))
            })?;
        }
        self.legs.extend(tags);
        Ok(())
    }

    fn mult(&mut self, i: usize, j: usize) -> Result<()> {
        let previous = self.acc.clone();
        self.acc = mult_outputs(&previous, i, j)?;
        self.record(StepKind::MultOutputs, format!("outputs {i},{j}"), || Ok(reference::mult(&previous, i, j)))?;
        self.legs.remove(j);
        Ok(())
    }

    fn cap(&mut self, a: Leg, b: Leg) -> Result<()> {
        let i = self.position(a);
        let j = self.position(b);
        let previous = self.acc.clone();
        self.acc = cap_nf(&previous, i, j)?;
        self.record(StepKind::Cap, format!("outputs {i},{j}"), || Ok(reference::cap(&previous, i, j)))?;
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        self.legs.remove(hi);
        self.legs.remove(lo);
        Ok(())
    }

    fn contract_leg(&mut self, leg: Leg) -> Result<()> {
        let i = self.position(leg);
        let previous = self.acc.clone();
        self.acc = contract(&previous, i)?;
        self.record(StepKind::Contract, format!("output {i}"), || Ok(reference::contract(&previous, i)))?;
        self.legs.remove(i);
        Ok(())
    }

    /// Duplicates the representative of hub `h` into a new leg tagged `tag`.
    fn copy_rep(&mut self, h: usize, tag: Leg) -> Result<()> {
        let cup = nf_of_cup(&self.interp.ring());
        let c = cup.clone();
        self.tensor_in(cup, vec![Leg::End(usize::MAX, 0), tag], "cup".into(), move |_| Ok(c))?;
        let rep = self.position(Leg::Rep(h));
        let stub = self.position(Leg::End(usize::MAX, 0));
        self.mult(rep, stub)
    }

    fn final_tag(&self, w: usize, s: usize) -> Leg {
        match self.end(w, 1 - s) {
            Endpoint::Out(j) => Leg::Final(j),
            _ => Leg::End(w, s),
        }
    }

    fn open_hub(&mut self, h: usize) -> Result<()> {
        let ring = self.interp.ring();
        let z = nf_of_zspider(&ring, 1);
        let zc = z.clone();
        self.tensor_in(z, vec![Leg::Rep(h)], format!("Z-spider v{h}"), move |_| Ok(zc))?;
        self.hubs[h] = Hub::Open;
        for (w, s) in self.d.incidences(h) {
            if self.processed[w][s] {
                continue;
            }
            let other = self.end(w, 1 - s);
            match other {
                Endpoint::Out(j) => {
                    self.copy_rep(h, Leg::Final(j))?;
                    self.processed[w][s] = true;
                }
                Endpoint::V(u) if self.is_hub(other) && self.hubs[u] == Hub::Open => {
                    self.copy_rep(h, Leg::End(w, s))?;
                    self.copy_rep(u, Leg::End(w, 1 - s))?;
                    self.cap(Leg::End(w, s), Leg::End(w, 1 - s))?;
                    self.processed[w] = [true, true];
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn close_hubs(&mut self) -> Result<()> {
        for h in 0..self.hubs.len() {
            if self.hubs[h] != Hub::Open {
                continue;
            }
            let pending = self.d.incidences(h).iter().any(|&(w, s)| !self.processed[w][s]);
            if !pending {
                self.contract_leg(Leg::Rep(h))?;
                self.hubs[h] = Hub::Closed;
            }
        }
        Ok(())
    }

    fn add_item(&mut self, v: usize) -> Result<()> {
        let kind = self.d.vertex(v).clone();
        let inc = self.d.incidences(v);
        let n = inc.len();
        let ring = self.interp.ring();
        let (gen, detail) = match &kind {
            VertexKind::HBox(a) => (nf_of_hbox(a, n), format!("H-box({a}) v{v}")),
            VertexKind::XSpider => (nf_of_xspider(&ring, n, false)?, format!("X-spider v{v}")),
            VertexKind::XNot => (nf_of_xspider(&ring, n, true)?, format!("X-NOT v{v}")),
            VertexKind::Star => (nf_of_star(self.interp)?, format!("star v{v}")),
            VertexKind::ZSpider => unreachable!("Z-spiders are hubs"),
        };
        let tags: Vec<Leg> = inc.iter().map(|&(w, s)| self.final_tag(w, s)).collect();
        let interp = self.interp;
        self.tensor_in(gen, tags, detail, move |_| reference::generator(interp, &kind, n))?;
        for &(w, s) in &inc {
            self.processed[w][s] = true;
        }
        for (w, s) in inc {
            let other = self.end(w, 1 - s);
            if other.is_boundary() {
                continue;
            }
            if self.is_hub(other) {
                let h = other.vertex().expect("vertex");
                if self.hubs[h] == Hub::Unopened {
                    self.open_hub(h)?;
                }
                self.copy_rep(h, Leg::End(w, 1 - s))?;
                self.processed[w][1 - s] = true;
                self.cap(Leg::End(w, s), Leg::End(w, 1 - s))?;
            } else if self.legs.contains(&Leg::End(w, 1 - s)) && self.legs.contains(&Leg::End(w, s)) {
                self.cap(Leg::End(w, s), Leg::End(w, 1 - s))?;
            }
        }
        Ok(())
    }

    fn finish(&mut self) -> Result<()> {
        let n = self.d.n_outputs();
        let perm: Vec<usize> = (0..n).map(|j| self.position(Leg::Final(j))).collect();
        debug_assert_eq!(self.legs.len(), n);
        if perm.iter().enumerate().any(|(p, &q)| p != q) {
            let previous = self.acc.clone();
            self.acc = permute(&previous, &perm)?;
            self.record(StepKind::Permute, "to boundary order".into(), || Ok(reference::permute(&previous, &perm)))?;
            self.legs = (0..n).map(Leg::Final).collect();
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::interpret;

    fn dy() -> RingDescriptor {
        RingDescriptor::dyadic()
    }

    fn ints(ring: RingDescriptor, v: &[i64]) -> Vec<RingElement> {
        v.iter().map(|&x| ring.from_integer(x)).collect()
    }

    fn nf(ring: RingDescriptor, k: u32, v: &[i64]) -> NormalForm {
        let n = v.len().trailing_zeros() as usize;
        NormalForm { ring, n, k, coeffs: ints(ring, v) }
    }

    #[test]
    fn generator_forms() {
        assert_eq!(nf_of_hbox(&dy().from_integer(-1), 2), nf(dy(), 0, &[1, 1, 1, -1]));
        assert_eq!(nf_of_hbox(&dy().from_integer(7), 0), nf(dy(), 0, &[7]));
        assert_eq!(nf_of_hbox(&dy().from_integer(7), 1), nf(dy(), 0, &[1, 7]));
        assert_eq!(nf_of_zspider(&dy(), 1), nf(dy(), 0, &[1, 1]));
        assert_eq!(nf_of_zspider(&dy(), 0), nf(dy(), 0, &[2]));
        assert_eq!(nf_of_cup(&dy()), nf(dy(), 0, &[1, 0, 0, 1]));
        let z = RingDescriptor::int();
        assert_eq!(nf_of_star(&Interpretation::new(z)).unwrap(), nf(z, 1, &[1]));
        assert_eq!(nf_of_star(&Interpretation::new(dy())).unwrap().to_string(), "k=0; 1/2");
    }

    #[test]
    fn grey_spiders_from_expansion() {
        for n in 0..5 {
            let x = nf_of_xspider(&dy(), n, false).unwrap();
            let y = nf_of_xspider(&dy(), n, true).unwrap();
            for b in 0..(1usize << n) {
                let even = b.count_ones() % 2 == 0;
                assert_eq!(x.coeffs[b], dy().from_integer(even as i64));
                assert_eq!(y.coeffs[b], dy().from_integer(!even as i64));
            }
        }
        let z = RingDescriptor::int();
        let x = nf_of_xspider(&z, 2, false).unwrap();
        assert_eq!(x, nf(z, 1, &[2, 0, 0, 2]));
        assert_eq!(reduce(&x), nf(z, 0, &[1, 0, 0, 1]));
    }

    #[test]
    fn extension_and_contraction() {
        let a = dy().from_integer(5);
        assert_eq!(extend(&nf_of_hbox(&a, 1)), nf(dy(), 0, &[1, 1, 5, 5]));
        assert_eq!(extend(&nf(dy(), 0, &[3])), nf(dy(), 0, &[3, 3]));
        assert_eq!(contract(&nf(dy(), 0, &[1, 2, 3, 4]), 1).unwrap(), nf(dy(), 0, &[3, 7]));
        assert_eq!(contract(&nf_of_cup(&dy()), 1).unwrap(), nf(dy(), 0, &[1, 1]));
        assert!(matches!(contract(&nf_of_cup(&dy()), 2), Err(NormalFormError::Index { index: 2, n: 2 })));
    }

    #[test]
    fn products() {
        assert_eq!(schur(&nf(dy(), 0, &[1, 3]), &nf(dy(), 0, &[1, 5])).unwrap(), nf(dy(), 0, &[1, 15]));
        assert!(schur(&nf(dy(), 0, &[1, 3]), &nf_of_cup(&dy())).is_err());
        let t = tensor_nf(&nf(dy(), 0, &[1, 2]), &nf(dy(), 0, &[1, 3])).unwrap();
        assert_eq!(t, nf(dy(), 0, &[1, 3, 2, 6]));
        let m = mult_outputs(&nf_of_cup(&dy()), 0, 1).unwrap();
        assert_eq!(m, nf(dy(), 0, &[1, 1]));
        assert_eq!(cap_nf(&nf_of_cup(&dy()), 0, 1).unwrap(), nf(dy(), 0, &[2]));
    }

    #[test]
    fn reduction() {
        let z = RingDescriptor::int();
        assert_eq!(reduce(&nf(z, 1, &[2, 2, 4, 6])), nf(z, 0, &[1, 1, 2, 3]));
        assert_eq!(reduce(&nf(z, 3, &[1, 2])), nf(z, 3, &[1, 2]));
        assert_eq!(reduce(&nf(z, 5, &[0, 0])), nf(z, 0, &[0, 0]));
        assert!(reduce(&nf(z, 3, &[1, 2])).is_reduced());
    }

    #[test]
    fn normalize_generators() {
        let i = Interpretation::new(dy());
        let h = Diagram::make_generator(VertexKind::hadamard(&dy()), 0, 2).unwrap();
        assert_eq!(normalize(&h, &i).unwrap(), nf(dy(), 0, &[1, 1, 1, -1]));
        assert_eq!(normalize(&Diagram::cup(), &i).unwrap().to_string(), "k=0; 1 0 0 1");
        let star = Diagram::make_generator(VertexKind::Star, 0, 0).unwrap();
        let z = RingDescriptor::int();
        assert_eq!(normalize(&star.tensor(&star), &Interpretation::new(z)).unwrap(), nf(z, 2, &[1]));
        assert_eq!(normalize(&star.tensor(&star), &i).unwrap().to_string(), "k=0; 1/4");
    }

    #[test]
    fn normalize_matches_semantics() {
        let mut b = DiagramBuilder::new(2, 2);
        let z = b.z();
        let x = b.x();
        b.wire(Endpoint::In(0), z).wire(z, Endpoint::Out(0)).wire(z, x);
        b.wire(Endpoint::In(1), x).wire(x, Endpoint::Out(1));
        let cnot = b.build().unwrap();
        let i = Interpretation::new(dy());
        let v = evaluate(&normalize(&cnot, &i).unwrap()).unwrap();
        assert_eq!(v, interpret(&cnot, &dy()).unwrap().vectorize());
    }

    #[test]
    fn nf_diagram_roundtrip() {
        let x = nf(dy(), 0, &[1, 1, 1, -1]);
        let d = nf_to_diagram(&x);
        assert_eq!(d.vertices().iter().filter(|k| **k == VertexKind::ZSpider).count(), 2);
        assert_eq!(d.vertices().iter().filter(|k| matches!(k, VertexKind::HBox(_))).count(), 4);
        assert_eq!(d.vertices().iter().filter(|k| **k == VertexKind::XNot).count(), 4);
        assert_eq!(interpret(&d, &dy()).unwrap(), evaluate(&x).unwrap());
        let scalar = nf_to_diagram(&nf(dy(), 0, &[5]));
        assert_eq!(scalar.vertices(), &[VertexKind::HBox(dy().from_integer(5))]);
    }

    #[test]
    fn equality_decisions() {
        let i = Interpretation::new(dy());
        let h = Diagram::make_generator(VertexKind::hadamard(&dy()), 1, 1).unwrap();
        let hh = h.compose(&h).unwrap();
        let two_id = Diagram::identity(1).tensor(&Diagram::make_generator(VertexKind::ZSpider, 0, 0).unwrap());
        assert!(equal(&hh, &two_id, &i).unwrap());
        let not = Diagram::make_generator(VertexKind::XNot, 1, 1).unwrap();
        assert!(!equal(&Diagram::identity(1), &not, &i).unwrap());
        assert!(matches!(equal(&Diagram::cup(), &h, &i), Err(NormalFormError::Signature { .. })));
    }

    #[test]
    fn traces() {
        let i = Interpretation::new(dy());
        let (_, t) = normalize_with_trace(&Diagram::cup(), &i).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.steps[0].kind, StepKind::Generator);

        let h = Diagram::make_generator(VertexKind::hadamard(&dy()), 1, 1).unwrap();
        let (_, t) = normalize_with_trace(&h.compose(&h).unwrap(), &i).unwrap();
        assert_eq!(t.count(StepKind::Tensor), 1);
        assert_eq!(t.count(StepKind::Cap), 1);
        assert!(t.all_verified());
    }

    #[test]
    fn printing() {
        let x = nf(dy(), 0, &[1, 0, 0, 1]);
        assert_eq!(x.to_string(), "k=0; 1 0 0 1");
        assert_eq!(x.to_lines(), "k=0\ncoeffs[00] = 1\ncoeffs[01] = 0\ncoeffs[10] = 0\ncoeffs[11] = 1\n");
    }
}
