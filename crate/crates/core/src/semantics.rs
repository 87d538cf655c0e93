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

//! The standard interpretation of diagrams as exact matrices.
//!
//! A diagram with `m` inputs and `n` outputs denotes a `2^n x 2^m` matrix.
//! Rows are indexed by output bits and columns by input bits, the first
//! boundary wire being the most significant bit.

use std::fmt;

use thiserror::Error;

use crate::diagram::{Diagram, Endpoint, VertexKind};
use crate::ring::{RingDescriptor, RingElement, RingError, RingKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("the star has no value in {0}: 1/2 does not exist there")]
    UnsupportedScalar(RingDescriptor),

    #[error("star = 1/sqrt2 needs the rt2 ring, not {0}")]
    Sqrt2ModeRing(RingDescriptor),

    #[error("H-box label {label} is not an element of {expected}")]
    LabelRing { label: String, expected: RingDescriptor },

    #[error("matrix shapes do not match: {0}")]
    Shape(String),

    #[error(transparent)]
    Ring(#[from] RingError),
}

/// What the star generator denotes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum StarMode {
    #[default]
    Half,
    InvSqrt2,
}

/// A choice of coefficient ring and star value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interpretation {
    ring: RingDescriptor,
    star: StarMode,
}

impl Interpretation {
    pub fn new(ring: RingDescriptor) -> Self {
        Interpretation { ring, star: StarMode::Half }
    }

    /// `Z[1/sqrt2]` with the star read as `1/sqrt2`.
    pub fn sqrt2() -> Self {
        Interpretation { ring: RingDescriptor::root_two(), star: StarMode::InvSqrt2 }
    }

    pub fn with_star(ring: RingDescriptor, star: StarMode) -> Result<Self, SemanticsError> {
        if star == StarMode::InvSqrt2 && ring.kind() != RingKind::RootTwoDyadic {
            return Err(SemanticsError::Sqrt2ModeRing(ring));
        }
        Ok(Interpretation { ring, star })
    }

    pub fn ring(&self) -> RingDescriptor {
        self.ring
    }

    pub fn star_mode(&self) -> StarMode {
        self.star
    }

    pub fn star_value(&self) -> Result<RingElement, SemanticsError> {
        let v = match self.star {
            StarMode::Half => self.ring.half(),
            StarMode::InvSqrt2 => self.ring.inv_sqrt2(),
        };
        v.ok_or(SemanticsError::UnsupportedScalar(self.ring))
    }

    fn check_label(&self, label: &RingElement) -> Result<(), SemanticsError> {
        if label.ring() != self.ring {
            return Err(SemanticsError::LabelRing { label: label.to_string(), expected: self.ring });
        }
        Ok(())
    }

    /// Weight of a vertex given the bits on its incident wire ends. A Z-spider
    /// with no legs still sums over its two basis states, so it weighs 2.
    pub fn vertex_weight(&self, kind: &VertexKind, bits: &[u8]) -> Result<RingElement, SemanticsError> {
        let ones = bits.iter().filter(|&&b| b != 0).count();
        let r = &self.ring;
        Ok(match kind {
            VertexKind::ZSpider if bits.is_empty() => r.from_integer(2),
            VertexKind::ZSpider => r.from_integer((ones == 0 || ones == bits.len()) as i64),
            VertexKind::HBox(a) => {
                self.check_label(a)?;
                if ones == bits.len() {
                    a.clone()
                } else {
                    r.one()
                }
            }
            VertexKind::XSpider => r.from_integer((ones % 2 == 0) as i64),
            VertexKind::XNot => r.from_integer((ones % 2 == 1) as i64),
            VertexKind::Star => self.star_value()?,
        })
    }

    /// Exact matrix of `d`.
    pub fn interpret(&self, d: &Diagram) -> Result<Matrix, SemanticsError> {
        let wires = d.wires();
        let internal: Vec<bool> = wires.iter().map(|(a, b)| !a.is_boundary() && !b.is_boundary()).collect();

        let mut factors = Vec::with_capacity(d.vertices().len());
        for (v, kind) in d.vertices().iter().enumerate() {
            factors.push(self.vertex_factor(d, v, kind)?);
        }

        // greedy min-degree elimination of internal wires
        let mut remaining: Vec<usize> = (0..wires.len()).filter(|&w| internal[w]).collect();
        while !remaining.is_empty() {
            let (pick, _) = remaining
                .iter()
                .enumerate()
                .map(|(i, &w)| {
                    let mut scope: Vec<usize> =
                        factors.iter().filter(|f| f.vars.contains(&w)).flat_map(|f| f.vars.iter().copied()).collect();
                    scope.sort_unstable();
                    scope.dedup();
                    (i, scope.len())
                })
                .min_by_key(|&(_, size)| size)
                .expect("non-empty");
            let w = remaining.swap_remove(pick);
            let (touching, rest): (Vec<Factor>, Vec<Factor>) = factors.into_iter().partition(|f| f.vars.contains(&w));
            factors = rest;
            let mut prod = Factor::unit(&self.ring);
            for f in &touching {
                prod = prod.product(f)?;
            }
            factors.push(prod.sum_out(w)?);
        }

        let mut total = Factor::unit(&self.ring);
        for f in &factors {
            total = total.product(f)?;
        }

        let n_out = d.n_outputs();
        let n_in = d.n_inputs();
        let mut slot_wire = vec![0usize; n_out + n_in];
        for (w, (a, b)) in wires.iter().enumerate() {
            for e in [a, b] {
                match e {
                    Endpoint::Out(j) => slot_wire[*j] = w,
                    Endpoint::In(i) => slot_wire[n_out + i] = w,
                    Endpoint::V(_) => {}
                }
            }
        }
        let loop_factor = self.ring.from_integer(2).pow(d.loops() as u32);
        let zero = self.ring.zero();
        let width = n_out + n_in;
        let mut entries = Vec::with_capacity(1 << width);
        let mut value: Vec<Option<u8>> = vec![None; wires.len()];
        'entry: for idx in 0..(1usize << width) {
            value.iter_mut().for_each(|x| *x = None);
            for (s, &w) in slot_wire.iter().enumerate() {
                let bit = ((idx >> (width - 1 - s)) & 1) as u8;
                match value[w] {
                    Some(prev) if prev != bit => {
                        entries.push(zero.clone());
                        continue 'entry;
                    }
                    _ => value[w] = Some(bit),
                }
            }
            let mut pos = 0usize;
            for &var in &total.vars {
                pos = (pos << 1) | value[var].expect("boundary wire is pinned") as usize;
            }
            entries.push(total.table[pos].mul(&loop_factor)?);
        }
        Ok(Matrix { ring: self.ring, n_out, n_in, entries })
    }

    fn vertex_factor(&self, d: &Diagram, v: usize, kind: &VertexKind) -> Result<Factor, SemanticsError> {
        let inc = d.incidences(v);
        let mut vars: Vec<usize> = inc.iter().map(|&(w, _)| w).collect();
        vars.sort_unstable();
        vars.dedup();
        // a wire from a vertex to itself is a single variable read twice
        let slots: Vec<usize> = inc.iter().map(|&(w, _)| vars.binary_search(&w).expect("present")).collect();
        let k = vars.len();
        let mut table = Vec::with_capacity(1 << k);
        let mut bits = vec![0u8; slots.len()];
        for idx in 0..(1usize << k) {
            for (b, &s) in bits.iter_mut().zip(&slots) {
                *b = ((idx >> (k - 1 - s)) & 1) as u8;
            }
            table.push(self.vertex_weight(kind, &bits)?);
        }
        Ok(Factor { vars, table })
    }
}

/// Matrix of `d` with the star read as `1/2`.
pub fn interpret(d: &Diagram, ring: &RingDescriptor) -> Result<Matrix, SemanticsError> {
    Interpretation::new(*ring).interpret(d)
}

/// Matrix of `d` over `Z[1/sqrt2]` with the star read as `1/sqrt2`.
pub fn interpret_sqrt2_mode(d: &Diagram) -> Result<Matrix, SemanticsError> {
    Interpretation::sqrt2().interpret(d)
}

/// A table over a sorted set of wire variables, first variable most significant.
#[derive(Debug, Clone)]
struct Factor {
    vars: Vec<usize>,
    table: Vec<RingElement>,
}

impl Factor {
    fn unit(ring: &RingDescriptor) -> Self {
        Factor { vars: Vec::new(), table: vec![ring.one()] }
    }

    fn product(&self, other: &Factor) -> Result<Factor, RingError> {
        let mut vars = self.vars.clone();
        vars.extend(other.vars.iter().copied());
        vars.sort_unstable();
        vars.dedup();
        let k = vars.len();
        let place = |sub: &[usize]| -> Vec<usize> {
            sub.iter().map(|v| k - 1 - vars.binary_search(v).expect("subset")).collect()
        };
        let ps = place(&self.vars);
        let po = place(&other.vars);
        let gather = |idx: usize, shifts: &[usize]| shifts.iter().fold(0usize, |acc, &s| (acc << 1) | ((idx >> s) & 1));
        let mut table = Vec::with_capacity(1 << k);
        for idx in 0..(1usize << k) {
            let a = &self.table[gather(idx, &ps)];
            let b = &other.table[gather(idx, &po)];
            table.push(a.mul(b)?);
        }
        Ok(Factor { vars, table })
    }

    fn sum_out(&self, var: usize) -> Result<Factor, RingError> {
        let pos = self.vars.iter().position(|&v| v == var).expect("variable in scope");
        let k = self.vars.len();
        let shift = k - 1 - pos;
        let mut vars = self.vars.clone();
        vars.remove(pos);
        let mut table = Vec::with_capacity(1 << (k - 1));
        for idx in 0..(1usize << (k - 1)) {
            let high = (idx >> shift) << (shift + 1);
            let low = idx & ((1 << shift) - 1);
            let i0 = high | low;
            let i1 = i0 | (1 << shift);
            table.push(self.table[i0].add(&self.table[i1])?);
        }
        Ok(Factor { vars, table })
    }
}

/// Dense `2^n_out x 2^n_in` matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    ring: RingDescriptor,
    n_out: usize,
    n_in: usize,
    entries: Vec<RingElement>,
}

impl Matrix {
    pub fn from_fn(
        ring: RingDescriptor,
        n_out: usize,
        n_in: usize,
        mut f: impl FnMut(usize, usize) -> RingElement,
    ) -> Matrix {
        let cols = 1usize << n_in;
        let entries = (0..(1usize << (n_out + n_in))).map(|i| f(i / cols, i % cols)).collect();
        Matrix { ring, n_out, n_in, entries }
    }

    /// Builds a matrix from row-major entries; the length must be `2^(n_out + n_in)`.
    pub fn from_entries(
        ring: RingDescriptor,
        n_out: usize,
        n_in: usize,
        entries: Vec<RingElement>,
    ) -> Result<Matrix, SemanticsError> {
        if entries.len() != 1 << (n_out + n_in) {
            return Err(SemanticsError::Shape(format!("{} entries for a 2^{n_out} x 2^{n_in} matrix", entries.len())));
        }
        Ok(Matrix { ring, n_out, n_in, entries })
    }

    pub fn from_integers(
        ring: RingDescriptor,
        n_out: usize,
        n_in: usize,
        values: &[i64],
    ) -> Result<Matrix, SemanticsError> {
        Matrix::from_entries(ring, n_out, n_in, values.iter().map(|&v| ring.from_integer(v)).collect())
    }

    pub fn identity(ring: RingDescriptor, n: usize) -> Matrix {
        Matrix::from_fn(ring, n, n, |r, c| ring.from_integer((r == c) as i64))
    }

    pub fn ring(&self) -> RingDescriptor {
        self.ring
    }

    pub fn rows(&self) -> usize {
        1 << self.n_out
    }

    pub fn cols(&self) -> usize {
        1 << self.n_in
    }

    pub fn n_outputs(&self) -> usize {
        self.n_out
    }

    pub fn n_inputs(&self) -> usize {
        self.n_in
    }

    pub fn get(&self, row: usize, col: usize) -> &RingElement {
        &self.entries[row * self.cols() + col]
    }

    pub fn entries(&self) -> &[RingElement] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RingElement::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.ring, self.n_in, self.n_out, |r, c| self.get(c, r).clone())
    }

    /// Row-major flattening into a column vector, outputs before inputs.
    pub fn vectorize(&self) -> Matrix {
        Matrix { ring: self.ring, n_out: self.n_out + self.n_in, n_in: 0, entries: self.entries.clone() }
    }

    pub fn scale(&self, c: &RingElement) -> Result<Matrix, SemanticsError> {
        let entries = self.entries.iter().map(|e| e.mul(c)).collect::<Result<_, _>>()?;
        Ok(Matrix { ring: self.ring, n_out: self.n_out, n_in: self.n_in, entries })
    }

    pub fn kron(&self, other: &Matrix) -> Result<Matrix, SemanticsError> {
        let oc = other.cols();
        let or = other.rows();
        let mut entries = Vec::with_capacity(self.entries.len() * other.entries.len());
        for r in 0..self.rows() * or {
            for c in 0..self.cols() * oc {
                entries.push(self.get(r / or, c / oc).mul(other.get(r % or, c % oc))?);
            }
        }
        Ok(Matrix { ring: self.ring, n_out: self.n_out + other.n_out, n_in: self.n_in + other.n_in, entries })
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &Matrix) -> Result<Matrix, SemanticsError> {
        if self.n_in != other.n_out {
            return Err(SemanticsError::Shape(format!(
                "cannot multiply 2^{} x 2^{} by 2^{} x 2^{}",
                self.n_out, self.n_in, other.n_out, other.n_in
            )));
        }
        let mut entries = Vec::with_capacity(self.rows() * other.cols());
        for r in 0..self.rows() {
            for c in 0..other.cols() {
                let mut acc = self.ring.zero();
                for k in 0..self.cols() {
                    acc = acc.add(&self.get(r, k).mul(other.get(k, c))?)?;
                }
                entries.push(acc);
            }
        }
        Ok(Matrix { ring: self.ring, n_out: self.n_out, n_in: other.n_in, entries })
    }

    /// Whitespace-aligned grid, one row per line.
    pub fn to_grid(&self) -> String {
        let cells: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        let mut out = String::new();
        for r in 0..self.rows() {
            let row: Vec<String> =
                (0..self.cols()).map(|c| format!("{:>width$}", cells[r * self.cols() + c])).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Nested-list dump, e.g. `[[1,1],[1,-1]]`; a scalar prints as `[v]`.
impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.len() == 1 {
            return write!(f, "[{}]", self.entries[0]);
        }
        f.write_str("[")?;
        for r in 0..self.rows() {
            if r > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for c in 0..self.cols() {
                if c > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}
