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

//! The rule catalogue.
//!
//! `dot` below is the 0-ary Z-spider, worth 2; scalar factors of two are
//! written with it so that every equation also holds over the integers.

use crate::diagram::{Diagram, DiagramBuilder, Endpoint, VertexKind};
use crate::ring::{RingDescriptor, RingElement};

use super::{Params, Result, RuleError, RuleSchema, Signature, Tag};

use Endpoint::{In, Out};

struct G {
    b: DiagramBuilder,
    ring: RingDescriptor,
}

impl G {
    fn new(ring: &RingDescriptor, m: usize, n: usize) -> G {
        G { b: DiagramBuilder::new(m, n), ring: *ring }
    }

    fn z(&mut self) -> usize {
        self.b.z()
    }

    fn x(&mut self) -> usize {
        self.b.x()
    }

    fn not(&mut self) -> usize {
        self.b.not()
    }

    fn star(&mut self) -> usize {
        self.b.star()
    }

    fn h(&mut self, a: &RingElement) -> usize {
        self.b.h(a.clone())
    }

    fn hi(&mut self, a: i64) -> usize {
        let a = self.ring.from_integer(a);
        self.b.h(a)
    }

    fn w(&mut self, a: impl Into<Endpoint>, b: impl Into<Endpoint>) {
        self.b.wire(a, b);
    }

    fn done(self) -> Result<Diagram> {
        Ok(self.b.build()?)
    }
}

fn gen(kind: VertexKind, m: usize, n: usize) -> Result<Diagram> {
    Ok(Diagram::make_generator(kind, m, n)?)
}

fn h_gen(a: &RingElement, m: usize, n: usize) -> Result<Diagram> {
    gen(VertexKind::HBox(a.clone()), m, n)
}

fn had(ring: &RingDescriptor, m: usize, n: usize) -> Result<Diagram> {
    gen(VertexKind::hadamard(ring), m, n)
}

fn z(m: usize, n: usize) -> Result<Diagram> {
    gen(VertexKind::ZSpider, m, n)
}

fn x(m: usize, n: usize) -> Result<Diagram> {
    gen(VertexKind::XSpider, m, n)
}

fn xnot(m: usize, n: usize) -> Result<Diagram> {
    gen(VertexKind::XNot, m, n)
}

fn dots(k: usize) -> Diagram {
    let dot = Diagram::make_generator(VertexKind::ZSpider, 0, 0).expect("0-ary spider");
    (0..k).fold(Diagram::empty(), |acc, _| acc.tensor(&dot))
}

fn star() -> Diagram {
    Diagram::make_generator(VertexKind::Star, 0, 0).expect("0-ary star")
}

fn repeat(d: &Diagram, k: usize) -> Diagram {
    (0..k).fold(Diagram::empty(), |acc, _| acc.tensor(d))
}

/// The Z gate: a Z-spider carrying one unary H-box.
fn negate(ring: &RingDescriptor) -> Result<Diagram> {
    let mut g = G::new(ring, 1, 1);
    let s = g.z();
    let h = g.hi(-1);
    g.w(In(0), s);
    g.w(s, Out(0));
    g.w(s, h);
    g.done()
}

fn int(ring: &RingDescriptor, v: i64) -> RingElement {
    ring.from_integer(v)
}

fn sum(a: &RingElement, b: &RingElement) -> Result<RingElement> {
    a.add(b).map_err(|e| RuleError::BadParams { rule: "label".into(), reason: e.to_string() })
}

fn prod(a: &RingElement, b: &RingElement) -> Result<RingElement> {
    a.mul(b).map_err(|e| RuleError::BadParams { rule: "label".into(), reason: e.to_string() })
}

// ---------------------------------------------------------------- core

fn zs(p: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let mut g = G::new(r, p.m, p.n);
    let a = g.z();
    let b = g.z();
    for i in 0..p.m {
        g.w(In(i), a);
    }
    g.w(a, b);
    for j in 0..p.n {
        g.w(b, Out(j));
    }
    Ok((g.done()?, z(p.m, p.n)?))
}

fn id(_: &Params, _: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    Ok((z(1, 1)?, Diagram::identity(1)))
}

fn hs(p: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let mut g = G::new(r, p.m, p.n);
    let top = g.h(&p.a);
    let mid = g.hi(-1);
    let bot = g.hi(-1);
    for i in 0..p.m {
        g.w(In(i), top);
    }
    g.w(top, mid);
    g.w(mid, bot);
    for j in 0..p.n {
        g.w(bot, Out(j));
    }
    Ok((g.done()?, h_gen(&p.a, p.m, p.n)?.tensor(&dots(1))))
}

fn hh(_: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let h = had(r, 1, 1)?;
    Ok((h.compose(&h)?, Diagram::identity(1).tensor(&dots(1))))
}

fn ba1(p: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let mut g = G::new(r, p.m, p.n);
    let a = g.z();
    let b = g.x();
    for i in 0..p.m {
        g.w(In(i), a);
    }
    g.w(a, b);
    for j in 0..p.n {
        g.w(b, Out(j));
    }
    let lhs = g.done()?;

    let mut g = G::new(r, p.m, p.n);
    let xs: Vec<usize> = (0..p.m).map(|_| g.x()).collect();
    let zs: Vec<usize> = (0..p.n).map(|_| g.z()).collect();
    for (i, &v) in xs.iter().enumerate() {
        g.w(In(i), v);
    }
    for (j, &v) in zs.iter().enumerate() {
        g.w(v, Out(j));
    }
    for &a in &xs {
        for &b in &zs {
            g.w(a, b);
        }
    }
    Ok((lhs, g.done()?))
}

fn ba2(p: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let mut g = G::new(r, p.m, p.n);
    let and = g.hi(-1);
    let edge = g.hi(-1);
    let copy = g.z();
    for i in 0..p.m {
        g.w(In(i), and);
    }
    g.w(and, edge);
    g.w(edge, copy);
    for j in 0..p.n {
        g.w(copy, Out(j));
    }
    let lhs = g.done()?;

    let mut g = G::new(r, p.m, p.n);
    let zs: Vec<usize> = (0..p.m).map(|_| g.z()).collect();
    for (i, &v) in zs.iter().enumerate() {
        g.w(In(i), v);
    }
    for j in 0..p.n {
        let and = g.hi(-1);
        let edge = g.hi(-1);
        for &v in &zs {
            g.w(v, and);
        }
        g.w(and, edge);
        g.w(edge, Out(j));
    }
    let rhs = g.done()?;
    if p.n == 0 {
        Ok((lhs, rhs.tensor(&dots(1))))
    } else {
        Ok((lhs.tensor(&dots(p.n - 1)), rhs))
    }
}

fn m_rule(_: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let mut g = G::new(r, 1, 1);
    let s = g.z();
    let h1 = g.hi(-1);
    let h2 = g.hi(-1);
    g.w(In(0), s);
    g.w(s, Out(0));
    g.w(s, h1);
    g.w(s, h2);
    Ok((g.done()?, Diagram::identity(1)))
}

/// Shared body of the ortho rule; `split` ends the two H-box tails in
/// separate Z-units instead of joining them.
fn ortho_side(r: &RingDescriptor, split: bool) -> Result<Diagram> {
    let mut g = G::new(r, 2, 1);
    let s = g.z();
    let h1 = g.hi(-1);
    let h2 = g.hi(-1);
    let n = g.not();
    g.w(s, Out(0));
    g.w(In(0), h1);
    g.w(s, h1);
    g.w(s, n);
    g.w(n, h2);
    g.w(In(1), h2);
    if split {
        let u1 = g.z();
        let u2 = g.z();
        g.w(h1, u1);
        g.w(h2, u2);
    } else {
        g.w(h1, h2);
    }
    g.done()
}

fn o_rule(_: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    Ok((ortho_side(r, false)?.tensor(&dots(1)), ortho_side(r, true)?))
}

// ---------------------------------------------------------------- ZH over rings

fn mult(p: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let mut g = G::new(r, 0, 1);
    let s = g.z();
    let ha = g.h(&p.a);
    let hb = g.h(&p.b);
    g.w(s, Out(0));
    g.w(s, ha);
    g.w(s, hb);
    Ok((g.done()?, h_gen(&prod(&p.a, &p.b)?, 0, 1)?))
}

/// Left side of the average rule; denotes `(2, a+b)`.
fn average_lhs(r: &RingDescriptor, a: &RingElement, b: &RingElement) -> Result<Diagram> {
    let mut g = G::new(r, 0, 1);
    let out = g.z();
    let inner = g.z();
    let ha = g.h(a);
    let hb = g.h(b);
    let n = g.not();
    g.w(out, Out(0));
    g.w(out, ha);
    g.w(ha, n);
    g.w(n, inner);
    g.w(out, hb);
    g.w(hb, inner);
    g.done()
}

fn average(p: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let mut g = G::new(r, 0, 1);
    let out = g.z();
    let hs = g.h(&sum(&p.a, &p.b)?);
    let n = g.not();
    let two = g.hi(2);
    g.w(out, Out(0));
    g.w(out, hs);
    g.w(out, n);
    g.w(n, two);
    Ok((average_lhs(r, &p.a, &p.b)?, g.done()?))
}

fn intro(p: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    introbb(&Params { n: 1, ..p.clone() }, r)
}

fn unit(p: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let lhs = h_gen(&int(r, 1), p.m, p.n)?;
    let rhs = repeat(&z(1, 0)?, p.m).tensor(&repeat(&z(0, 1)?, p.n));
    Ok((lhs, rhs))
}

/// Z-spider whose every boundary leg passes through an H-box, optionally
/// with one extra unary H-box on the spider.
fn hadamard_star(r: &RingDescriptor, m: usize, n: usize, negated: bool) -> Result<Diagram> {
    let mut g = G::new(r, m, n);
    let s = g.z();
    for i in 0..m {
        let h = g.hi(-1);
        g.w(In(i), h);
        g.w(h, s);
    }
    for j in 0..n {
        let h = g.hi(-1);
        g.w(s, h);
        g.w(h, Out(j));
    }
    if negated {
        let h = g.hi(-1);
        g.w(s, h);
    }
    g.done()
}

fn two_x(p: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    Ok((x(p.m, p.n)?.tensor(&dots(1)), hadamard_star(r, p.m, p.n, false)?))
}

fn two_not(p: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    Ok((xnot(p.m, p.n)?.tensor(&dots(1)), hadamard_star(r, p.m, p.n, true)?))
}

// ---------------------------------------------------------------- alternatives

fn copy_znot_h(p: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let mut g = G::new(r, 0, p.n);
    let s = g.z();
    let neg = g.hi(-1);
    let and = g.hi(-1);
    g.w(s, neg);
    g.w(s, and);
    for j in 0..p.n {
        g.w(and, Out(j));
    }
    Ok((g.done()?, repeat(&xnot(0, 1)?, p.n).tensor(&dots(1))))
}

fn dedup(_: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let mut g = G::new(r, 1, 1);
    let s = g.z();
    let h = g.hi(-1);
    g.w(In(0), s);
    g.w(s, h);
    g.w(s, h);
    g.w(h, Out(0));
    Ok((g.done()?, had(r, 1, 1)?))
}

fn average_renaud(p: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let plus = sum(&p.a, &p.b)?;
    let minus = sum(&p.a, &p.b.neg())?;
    let mut g = G::new(r, 0, 2);
    let zx = g.z();
    let zy = g.z();
    let hp = g.h(&plus);
    let hm = g.h(&minus);
    let n = g.not();
    g.w(zx, Out(0));
    g.w(zy, Out(1));
    g.w(zx, hp);
    g.w(zy, hp);
    g.w(zx, hm);
    g.w(hm, n);
    g.w(n, zy);
    let lhs = g.done()?;

    let mut g = G::new(r, 0, 2);
    g.star();
    let zx = g.z();
    let zz = g.z();
    let two = g.hi(2);
    let ha = g.h(&p.a);
    let hb = g.h(&p.b);
    let and = g.hi(-1);
    let nz = g.not();
    let ny = g.not();
    g.w(zx, Out(0));
    g.w(zx, two);
    g.w(zx, ha);
    g.w(zx, hb);
    g.w(zx, and);
    g.w(zz, nz);
    g.w(nz, ha);
    g.w(zz, hb);
    g.w(zz, and);
    g.w(and, ny);
    g.w(ny, Out(1));
    Ok((lhs, g.done()?))
}

fn star_zero(_: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let zero = h_gen(&int(r, 0), 0, 0)?;
    Ok((star().tensor(&zero), zero))
}

// ---------------------------------------------------------------- derived lemmas

fn scalar_cancel_stars(_: &Params, _: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    Ok((star().tensor(&dots(1)), Diagram::empty()))
}

fn scalar_cancel_zx(_: &Params, _: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    Ok((z(0, 1)?.compose(&x(1, 0)?)?, Diagram::empty()))
}

fn scalar_cancel_xh(_: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    Ok((x(0, 1)?.compose(&had(r, 1, 0)?)?, Diagram::empty()))
}

fn scalar_cancel_hh(_: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    Ok((had(r, 0, 1)?.compose(&had(r, 1, 0)?)?.tensor(&star()), Diagram::empty()))
}

fn scalar_cancel_znot(_: &Params, _: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    Ok((z(0, 1)?.compose(&xnot(1, 0)?)?, Diagram::empty()))
}

fn scalar_two(_: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    Ok((dots(1), h_gen(&int(r, 2), 0, 0)?))
}

fn scalar_cancel_two(_: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    Ok((h_gen(&int(r, 2), 0, 0)?.tensor(&star()), Diagram::empty()))
}

fn scalar_cancel_xh_general(p: &Params, _: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    Ok((x(0, 1)?.compose(&h_gen(&p.a, 1, 0)?)?, Diagram::empty()))
}

fn unit_scalar(_: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    Ok((h_gen(&int(r, 1), 0, 0)?, Diagram::empty()))
}

fn scalar_mult(p: &Params, _: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let lhs = h_gen(&p.a, 0, 0)?.tensor(&h_gen(&p.b, 0, 0)?);
    Ok((lhs, h_gen(&prod(&p.a, &p.b)?, 0, 0)?))
}

fn xnot_h_reduce(_: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    Ok((xnot(0, 1)?.compose(&had(r, 1, 0)?)?, h_gen(&int(r, -1), 0, 0)?))
}

fn negate_direct(_: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let h = had(r, 1, 1)?;
    let lhs = h.compose(&xnot(1, 1)?)?.compose(&h)?;
    Ok((lhs, negate(r)?.tensor(&dots(1))))
}

fn x_spider(p: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let mut g = G::new(r, p.m, p.n);
    let a = g.x();
    let b = g.x();
    for i in 0..p.m {
        g.w(In(i), a);
    }
    g.w(a, b);
    for j in 0..p.n {
        g.w(b, Out(j));
    }
    Ok((g.done()?, x(p.m, p.n)?))
}

fn x_special(_: &Params, _: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    Ok((x(1, 1)?, Diagram::identity(1)))
}

fn xnots_cancel(_: &Params, _: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    Ok((xnot(1, 1)?.compose(&xnot(1, 1)?)?, Diagram::identity(1)))
}

fn x_with_xnot(p: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let mut g = G::new(r, p.m, p.n);
    let a = g.x();
    let b = g.not();
    for i in 0..p.m {
        g.w(In(i), a);
    }
    g.w(a, b);
    for j in 0..p.n {
        g.w(b, Out(j));
    }
    Ok((g.done()?, xnot(p.m, p.n)?))
}

fn znots_cancel(p: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let mut g = G::new(r, p.m, p.n);
    let s = g.z();
    for i in 0..p.m {
        g.w(In(i), s);
    }
    for j in 0..p.n {
        g.w(s, Out(j));
    }
    let h1 = g.hi(-1);
    let h2 = g.hi(-1);
    g.w(s, h1);
    g.w(s, h2);
    Ok((g.done()?, z(p.m, p.n)?))
}

fn h_z_commute(_: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let h = had(r, 1, 1)?;
    Ok((negate(r)?.compose(&h)?, h.compose(&xnot(1, 1)?)?))
}

/// A spider of `kind` with an H-box on every leg equals `2^(k-1)` times a
/// Z-spider (negated for X-NOT), where `k = m + n`.
fn h_commute(p: &Params, r: &RingDescriptor, kind: VertexKind) -> Result<(Diagram, Diagram)> {
    let negated = kind == VertexKind::XNot;
    let mut g = G::new(r, p.m, p.n);
    let s = g.b.add(kind);
    for i in 0..p.m {
        let h = g.hi(-1);
        g.w(In(i), h);
        g.w(h, s);
    }
    for j in 0..p.n {
        let h = g.hi(-1);
        g.w(s, h);
        g.w(h, Out(j));
    }
    let lhs = g.done()?;
    let mut g = G::new(r, p.m, p.n);
    let s = g.z();
    for i in 0..p.m {
        g.w(In(i), s);
    }
    for j in 0..p.n {
        g.w(s, Out(j));
    }
    if negated {
        let h = g.hi(-1);
        g.w(s, h);
    }
    let rhs = g.done()?;
    let k = p.m + p.n;
    if k == 0 {
        Ok((lhs.tensor(&dots(1)), rhs))
    } else {
        Ok((lhs, rhs.tensor(&dots(k - 1))))
    }
}

fn h_x_commute(p: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    h_commute(p, r, VertexKind::XSpider)
}

fn h_not_commute(p: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    h_commute(p, r, VertexKind::XNot)
}

fn not_commute(p: &Params, _: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let lhs = xnot(1, 1)?.compose(&z(1, p.n)?)?;
    let rhs = z(1, p.n)?.compose(&repeat(&xnot(1, 1)?, p.n))?;
    Ok((lhs, rhs))
}

fn z_commute(p: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let lhs = negate(r)?.compose(&x(1, p.n)?)?;
    let rhs = x(1, p.n)?.compose(&repeat(&negate(r)?, p.n))?;
    Ok((lhs, rhs))
}

fn x_z_commute(_: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let lhs = xnot(1, 1)?.compose(&negate(r)?)?;
    let rhs = negate(r)?.compose(&xnot(1, 1)?)?.tensor(&h_gen(&int(r, -1), 0, 0)?);
    Ok((lhs, rhs))
}

/// Controlled-Z as two Z-spiders joined through an H-box.
pub(crate) fn cz_diagram(r: &RingDescriptor) -> Result<Diagram> {
    let mut g = G::new(r, 2, 2);
    let a = g.z();
    let b = g.z();
    let h = g.hi(-1);
    g.w(In(0), a);
    g.w(a, Out(0));
    g.w(In(1), b);
    g.w(b, Out(1));
    g.w(a, h);
    g.w(h, b);
    g.done()
}

/// CNOT as a Z-spider on the control joined to an X-spider on the target.
pub(crate) fn cnot_diagram(r: &RingDescriptor) -> Result<Diagram> {
    let mut g = G::new(r, 2, 2);
    let c = g.z();
    let t = g.x();
    g.w(In(0), c);
    g.w(c, Out(0));
    g.w(In(1), t);
    g.w(t, Out(1));
    g.w(c, t);
    g.done()
}

fn cz_correct(_: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let ih = Diagram::identity(1).tensor(&had(r, 1, 1)?);
    let rhs = ih.compose(&cnot_diagram(r)?)?.compose(&ih)?;
    Ok((cz_diagram(r)?.tensor(&dots(1)), rhs))
}

fn copy_through(state: Diagram, spider: Diagram, rhs: Diagram) -> Result<(Diagram, Diagram)> {
    Ok((state.compose(&spider)?, rhs))
}

fn copy_x_z(p: &Params, _: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    copy_through(x(0, 1)?, z(1, p.n)?, repeat(&x(0, 1)?, p.n))
}

fn copy_xnot_z(p: &Params, _: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    copy_through(xnot(0, 1)?, z(1, p.n)?, repeat(&xnot(0, 1)?, p.n))
}

fn copy_z_x(p: &Params, _: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    copy_through(z(0, 1)?, x(1, p.n)?, repeat(&z(0, 1)?, p.n))
}

fn copy_z_xnot(p: &Params, _: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    copy_through(z(0, 1)?, xnot(1, p.n)?, repeat(&z(0, 1)?, p.n))
}

fn copy_x_h(p: &Params, _: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    copy_through(x(0, 1)?, h_gen(&p.a, 1, p.n)?, repeat(&z(0, 1)?, p.n))
}

fn copy_xnot_h(p: &Params, _: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    copy_through(xnot(0, 1)?, h_gen(&p.a, 1, p.n)?, h_gen(&p.a, 0, p.n)?)
}

fn white_not_cancel(_: &Params, _: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    Ok((z(0, 1)?.compose(&xnot(1, 1)?)?, z(0, 1)?))
}

fn hopf(p: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let mut g = G::new(r, p.m, p.n);
    let a = g.z();
    let b = g.x();
    for i in 0..p.m {
        g.w(In(i), a);
    }
    g.w(a, b);
    g.w(a, b);
    for j in 0..p.n {
        g.w(b, Out(j));
    }
    Ok((g.done()?, z(p.m, 0)?.tensor(&x(0, p.n)?)))
}

/// The 1 -> 1 gadget sending the state `(1, a)` to `(1, a + 1)`.
fn successor_gadget(r: &RingDescriptor) -> Result<Diagram> {
    let mut g = G::new(r, 1, 1);
    let h = g.hi(0);
    let n = g.not();
    g.w(In(0), h);
    g.w(h, n);
    g.w(n, Out(0));
    g.done()
}

fn successor(p: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let lhs = h_gen(&p.a, 0, 1)?.compose(&successor_gadget(r)?)?;
    Ok((lhs, h_gen(&sum(&p.a, &r.one())?, 0, 1)?))
}

fn natural_number(p: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let mut lhs = h_gen(&int(r, 0), 0, 1)?;
    for _ in 0..p.n {
        lhs = lhs.compose(&successor_gadget(r)?)?;
    }
    Ok((lhs, h_gen(&int(r, p.n as i64), 0, 1)?))
}

fn negation(p: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let lhs = h_gen(&p.a, 0, 1)?.compose(&negate(r)?)?;
    Ok((lhs, h_gen(&p.a.neg(), 0, 1)?))
}

fn multiply_bb(p: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let mut g = G::new(r, 0, p.n);
    let ha = g.h(&p.a);
    let hb = g.h(&p.b);
    for j in 0..p.n {
        let s = g.z();
        g.w(s, Out(j));
        g.w(s, ha);
        g.w(s, hb);
    }
    Ok((g.done()?, h_gen(&prod(&p.a, &p.b)?, 0, p.n)?))
}

fn introbb(p: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let lhs = h_gen(&p.a, 0, p.n)?.tensor(&z(0, 1)?);
    let mut g = G::new(r, 0, p.n + 1);
    let zs: Vec<usize> = (0..=p.n).map(|_| g.z()).collect();
    for (j, &s) in zs.iter().enumerate() {
        g.w(s, Out(j));
    }
    let h1 = g.h(&p.a);
    let h2 = g.h(&p.a);
    for &s in &zs[..p.n] {
        g.w(s, h1);
        g.w(s, h2);
    }
    let last = zs[p.n];
    let n = g.not();
    g.w(last, h1);
    g.w(last, n);
    g.w(n, h2);
    Ok((lhs, g.done()?))
}

fn avg_bb(p: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let mut g = G::new(r, 0, p.n);
    let zs: Vec<usize> = (0..p.n).map(|_| g.z()).collect();
    let inner = g.z();
    let ha = g.h(&p.a);
    let hb = g.h(&p.b);
    let n = g.not();
    for (j, &s) in zs.iter().enumerate() {
        g.w(s, Out(j));
        g.w(s, ha);
        g.w(s, hb);
    }
    g.w(ha, n);
    g.w(n, inner);
    g.w(hb, inner);
    let lhs = g.done()?;

    let mut g = G::new(r, 0, p.n);
    let zs: Vec<usize> = (0..p.n).map(|_| g.z()).collect();
    let hs = g.h(&sum(&p.a, &p.b)?);
    let h0 = g.hi(0);
    let u = g.z();
    for (j, &s) in zs.iter().enumerate() {
        g.w(s, Out(j));
        g.w(s, hs);
        g.w(s, h0);
    }
    g.w(h0, u);
    Ok((lhs, g.done()?))
}

fn average_true_form(p: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let mean = sum(&p.a, &p.b)?
        .halve()
        .ok_or_else(|| RuleError::NeedsHalf { rule: "lemma.averagetrueform".into(), ring: *r })?;
    Ok((average_lhs(r, &p.a, &p.b)?.tensor(&star()), h_gen(&mean, 0, 1)?))
}

fn star_is_half(_: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let half = r.half().ok_or(RuleError::NeedsHalf { rule: "lemma.startishalf".into(), ring: *r })?;
    Ok((star(), h_gen(&half, 0, 0)?))
}

fn zero_is_grey(_: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    Ok((h_gen(&int(r, 0), 0, 1)?, x(0, 1)?))
}

/// Twice the W map: `|00> -> |0>`, `|01>, |10> -> |1>`, `|11> -> 0`.
fn doubled_w(r: &RingDescriptor) -> Result<Diagram> {
    let mut g = G::new(r, 2, 1);
    let zx = g.z();
    let zy = g.z();
    let parity = g.x();
    let nand = g.hi(-1);
    let u = g.z();
    g.w(In(0), zx);
    g.w(In(1), zy);
    g.w(zx, parity);
    g.w(zy, parity);
    g.w(parity, Out(0));
    g.w(zx, nand);
    g.w(zy, nand);
    g.w(nand, u);
    g.done()
}

/// The 2 -> 1 addition gadget: it sends `(1, a) (x) (1, b)` to `(1, a + b)`.
/// It contains a star, so the ring must have a half.
pub fn addition_gadget(ring: &RingDescriptor) -> Result<Diagram> {
    if !ring.has_half() {
        return Err(RuleError::NeedsHalf { rule: "addition gadget".into(), ring: *ring });
    }
    Ok(doubled_w(ring)?.tensor(&star()))
}

fn addition(p: &Params, r: &RingDescriptor) -> Result<(Diagram, Diagram)> {
    let states = h_gen(&p.a, 0, 1)?.tensor(&h_gen(&p.b, 0, 1)?);
    let lhs = states.compose(&doubled_w(r)?)?;
    Ok((lhs, h_gen(&sum(&p.a, &p.b)?, 0, 1)?.tensor(&dots(1))))
}

// ---------------------------------------------------------------- table

const CORE_ZHR: &[Tag] = &[Tag::Core, Tag::ZhR];
const ZHR: &[Tag] = &[Tag::ZhR];
const ZHR_DERIVED: &[Tag] = &[Tag::ZhR, Tag::Derived];
const DERIVED: &[Tag] = &[Tag::Derived];
const ALT: &[Tag] = &[Tag::AltOrtho];
const MERGED: &[Tag] = &[Tag::Merged];
const SQRT2: &[Tag] = &[Tag::Sqrt2];

const fn rule(
    name: &'static str,
    citation: &'static str,
    tags: &'static [Tag],
    signature: Signature,
    requires_half: bool,
    instantiate: super::Instantiator,
) -> RuleSchema {
    RuleSchema { name, citation, tags, signature, requires_half, instantiate }
}

pub(super) static RULES: &[RuleSchema] = &[
    rule("zs", "axiom (zs): Z-spider fusion", CORE_ZHR, Signature::MN, false, zs),
    rule("id", "axiom (id): the arity-2 Z-spider is a wire", CORE_ZHR, Signature::FIXED, false, id),
    rule("hs", "axiom (hs): H-spider fusion through a Hadamard edge", CORE_ZHR, Signature::MNA, false, hs),
    rule("hh", "axiom (hh): two Hadamards make a wire, up to a factor 2", CORE_ZHR, Signature::FIXED, false, hh),
    rule("ba1", "axiom (ba1): Z/X bialgebra", CORE_ZHR, Signature::MN, false, ba1),
    rule("ba2", "axiom (ba2): Z/H bialgebra", CORE_ZHR, Signature::MN, false, ba2),
    rule("m", "axiom (m): two negations on a spider cancel", CORE_ZHR, Signature::FIXED, false, m_rule),
    rule("o", "axiom (o): ortho rule", CORE_ZHR, Signature::FIXED, false, o_rule),
    rule("M", "ring axiom (M): multiply labels", ZHR, Signature::AB, false, mult),
    rule("A", "ring axiom (A): average labels", ZHR, Signature::AB, false, average),
    rule("I", "ring axiom (I): introduce a wire to an H-box", ZHR, Signature::A, false, intro),
    rule("U", "ring axiom (U): the 1-labelled H-box disconnects", ZHR, Signature::MN, false, unit),
    rule("twoX", "ring axiom (2X): scaled grey spider definition", ZHR_DERIVED, Signature::MN, false, two_x),
    rule("twoNot", "ring axiom (2NOT): scaled grey NOT spider definition", ZHR_DERIVED, Signature::MN, false, two_not),
    rule(
        "altO1",
        "alternative ortho rule: post-selected AND copies a NOT state",
        ALT,
        Signature::N,
        false,
        copy_znot_h,
    ),
    rule("altO2", "alternative ortho rule: Hadamard-Z cancellation", ALT, Signature::FIXED, false, dedup),
    rule("avgRenaud", "merged intro/average rule", MERGED, Signature::AB, true, average_renaud),
    rule("starZero", "star times zero is zero", SQRT2, Signature::FIXED, true, star_zero),
    rule(
        "lemma.scalarcancelstars",
        "lemma: star cancels a scalar dot",
        DERIVED,
        Signature::FIXED,
        true,
        scalar_cancel_stars,
    ),
    rule(
        "lemma.scalarcancelzx",
        "lemma: Z-unit into X-counit is 1",
        DERIVED,
        Signature::FIXED,
        false,
        scalar_cancel_zx,
    ),
    rule(
        "lemma.scalarcancelxh",
        "lemma: X-unit into unary H-box is 1",
        DERIVED,
        Signature::FIXED,
        false,
        scalar_cancel_xh,
    ),
    rule(
        "lemma.scalarcancelhh",
        "lemma: star cancels a unary H-box loop",
        DERIVED,
        Signature::FIXED,
        true,
        scalar_cancel_hh,
    ),
    rule(
        "lemma.scalarcancelznot",
        "lemma: Z-unit into NOT-counit is 1",
        DERIVED,
        Signature::FIXED,
        false,
        scalar_cancel_znot,
    ),
    rule("lemma.scalar2", "lemma: the dot is the 2-labelled scalar box", DERIVED, Signature::FIXED, false, scalar_two),
    rule(
        "lemma.scalarcancel2",
        "lemma: star cancels the 2-labelled box",
        DERIVED,
        Signature::FIXED,
        true,
        scalar_cancel_two,
    ),
    rule(
        "lemma.scalarcancelxhgen",
        "lemma: X-unit into a labelled unary H-box is 1",
        DERIVED,
        Signature::A,
        false,
        scalar_cancel_xh_general,
    ),
    rule(
        "lemma.unitscalar",
        "lemma: the 1-labelled scalar box is empty",
        DERIVED,
        Signature::FIXED,
        false,
        unit_scalar,
    ),
    rule("lemma.scalarmult", "lemma: scalar boxes multiply", DERIVED, Signature::AB, false, scalar_mult),
    rule(
        "lemma.xnothreduce",
        "lemma: NOT-unit into unary H-box is -1",
        DERIVED,
        Signature::FIXED,
        false,
        xnot_h_reduce,
    ),
    rule("lemma.negatedirect", "lemma: H NOT H is a doubled negation", DERIVED, Signature::FIXED, false, negate_direct),
    rule("lemma.xspider", "lemma: X-spider fusion", DERIVED, Signature::MN, false, x_spider),
    rule("lemma.xspecial", "lemma: the arity-2 X-spider is a wire", DERIVED, Signature::FIXED, false, x_special),
    rule("lemma.xnotscancel", "lemma: two NOTs cancel", DERIVED, Signature::FIXED, false, xnots_cancel),
    rule("lemma.xwithxnot", "lemma: X-spider fuses with a NOT spider", DERIVED, Signature::MN, false, x_with_xnot),
    rule(
        "lemma.znotscancel",
        "lemma: two negations on any Z-spider cancel",
        DERIVED,
        Signature::MN,
        false,
        znots_cancel,
    ),
    rule("lemma.hzcommute", "lemma: Hadamard turns negation into NOT", DERIVED, Signature::FIXED, false, h_z_commute),
    rule("lemma.hxcommute", "lemma: Hadamards on every leg turn X into Z", DERIVED, Signature::MN, false, h_x_commute),
    rule(
        "lemma.hnotcommute",
        "lemma: Hadamards on every leg turn NOT into negated Z",
        DERIVED,
        Signature::MN,
        false,
        h_not_commute,
    ),
    rule("lemma.notcommute", "lemma: NOT is copied by a Z-spider", DERIVED, Signature::N, false, not_commute),
    rule("lemma.zcommute", "lemma: negation is copied by an X-spider", DERIVED, Signature::N, false, z_commute),
    rule("lemma.xzcommute", "lemma: NOT and negation anticommute", DERIVED, Signature::FIXED, false, x_z_commute),
    rule("lemma.czcorrect", "lemma: CZ is CNOT conjugated by Hadamards", DERIVED, Signature::FIXED, false, cz_correct),
    rule("lemma.copyxz", "lemma: Z-spider copies the X-unit", DERIVED, Signature::N, false, copy_x_z),
    rule("lemma.copyxnotz", "lemma: Z-spider copies the NOT-unit", DERIVED, Signature::N, false, copy_xnot_z),
    rule("lemma.copyzx", "lemma: X-spider copies the Z-unit", DERIVED, Signature::N, false, copy_z_x),
    rule("lemma.copyznotx", "lemma: NOT spider copies the Z-unit", DERIVED, Signature::N, false, copy_z_xnot),
    rule("lemma.copyxh", "lemma: H-box disconnects on the X-unit", DERIVED, Signature::NA, false, copy_x_h),
    rule("lemma.copyxnoth", "lemma: NOT-unit into an H-box drops the leg", DERIVED, Signature::NA, false, copy_xnot_h),
    rule("lemma.copyznoth", "lemma: post-selected AND copies a NOT state", DERIVED, Signature::N, false, copy_znot_h),
    rule("lemma.dedup", "lemma: Hadamard-Z cancellation", DERIVED, Signature::FIXED, false, dedup),
    rule(
        "lemma.whitenotcancel",
        "lemma: NOT on a Z-unit is absorbed",
        DERIVED,
        Signature::FIXED,
        false,
        white_not_cancel,
    ),
    rule("lemma.hopf", "lemma: Hopf rule between Z and X spiders", DERIVED, Signature::MN, false, hopf),
    rule("lemma.successor", "lemma: successor gadget increments a label", DERIVED, Signature::A, false, successor),
    rule(
        "lemma.naturalnumber",
        "lemma: natural numbers by repeated successor",
        DERIVED,
        Signature::N,
        false,
        natural_number,
    ),
    rule("lemma.negation", "lemma: negation flips the sign of a label", DERIVED, Signature::A, false, negation),
    rule("lemma.multiplybb", "lemma: multiply, replicated over n wires", DERIVED, Signature::NAB, false, multiply_bb),
    rule("lemma.introbb", "lemma: intro, replicated over n wires", DERIVED, Signature::NA, false, introbb),
    rule("lemma.avgbb", "lemma: average, replicated over n wires", DERIVED, Signature::NAB, false, avg_bb),
    rule(
        "lemma.averagetrueform",
        "lemma: average with its star is the mean",
        DERIVED,
        Signature::AB,
        true,
        average_true_form,
    ),
    rule(
        "lemma.startishalf",
        "lemma: the star is the 1/2-labelled scalar box",
        DERIVED,
        Signature::FIXED,
        true,
        star_is_half,
    ),
    rule(
        "lemma.zeroisgrey",
        "lemma: the 0-labelled H-state is the X-unit",
        DERIVED,
        Signature::FIXED,
        false,
        zero_is_grey,
    ),
    rule("lemma.addition", "addition gadget adds labels", DERIVED, Signature::AB, false, addition),
];
