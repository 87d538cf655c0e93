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

//! Exact coefficient rings.
//!
//! Every ring here is commutative with `1 != 0` and has `2` as a
//! non-zero-divisor, so halving is either defined everywhere (dyadic
//! rationals, `Z[1/sqrt2]`, odd prime fields) or defined exactly on the
//! even elements (integers). [`RingElement::halve`] makes that contract
//! operational.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("ring mismatch: {0} vs {1}")]
    KindMismatch(RingDescriptor, RingDescriptor),

    #[error("modulus {0} is not an odd prime")]
    InvalidModulus(u64),

    #[error("cannot parse {text:?} as an element of {ring}")]
    Parse { text: String, ring: RingDescriptor },

    #[error("unknown ring {0:?} (expected dyadic, int, rt2 or mod:<p>)")]
    UnknownRing(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingKind {
    /// `Z[1/2]`.
    Dyadic,
    /// `Z`.
    Int,
    /// `Z[1/sqrt2]`, stored as `a + b*sqrt2` with dyadic `a`, `b`.
    RootTwoDyadic,
    /// `Z/pZ` for an odd prime `p`.
    Mod,
}

/// Identifies one coefficient ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingDescriptor {
    kind: RingKind,
    modulus: Option<u64>,
}

impl RingDescriptor {
    pub fn dyadic() -> Self {
        RingDescriptor { kind: RingKind::Dyadic, modulus: None }
    }

    pub fn int() -> Self {
        RingDescriptor { kind: RingKind::Int, modulus: None }
    }

    pub fn root_two() -> Self {
        RingDescriptor { kind: RingKind::RootTwoDyadic, modulus: None }
    }

    pub fn modular(p: u64) -> Result<Self, RingError> {
        if p < 3 || p.is_multiple_of(2) || !is_prime(p) {
            return Err(RingError::InvalidModulus(p));
        }
        Ok(RingDescriptor { kind: RingKind::Mod, modulus: Some(p) })
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }

    /// Whether `1/2` is an element of the ring.
    pub fn has_half(&self) -> bool {
        !matches!(self.kind, RingKind::Int)
    }

    pub fn zero(&self) -> RingElement {
        self.from_integer(0)
    }

    pub fn one(&self) -> RingElement {
        self.from_integer(1)
    }

    pub fn from_integer(&self, n: i64) -> RingElement {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> RingElement {
        match self.kind {
            RingKind::Dyadic => RingElement::Dyadic(Dyadic::integer(n.clone())),
            RingKind::Int => RingElement::Int(n.clone()),
            RingKind::RootTwoDyadic => {
                RingElement::RootTwoDyadic(RootTwo { a: Dyadic::integer(n.clone()), b: Dyadic::zero() })
            }
            RingKind::Mod => {
                let p = self.modulus.expect("modular ring carries a modulus");
                let r = n.mod_floor(&BigInt::from(p));
                RingElement::Mod { p, r: u64::try_from(r).expect("residue fits in u64") }
            }
        }
    }

    /// `1/2`, when it exists.
    pub fn half(&self) -> Option<RingElement> {
        self.one().halve()
    }

    /// `1/sqrt2`; only `Z[1/sqrt2]` has it.
    pub fn inv_sqrt2(&self) -> Option<RingElement> {
        match self.kind {
            RingKind::RootTwoDyadic => {
                Some(RingElement::RootTwoDyadic(RootTwo { a: Dyadic::zero(), b: Dyadic::new(BigInt::one(), 1) }))
            }
            _ => None,
        }
    }

    /// Parses an element written in this ring's text syntax.
    pub fn parse_element(&self, text: &str) -> Result<RingElement, RingError> {
        let t = text.trim();
        let err = || RingError::Parse { text: text.to_string(), ring: *self };
        match self.kind {
            RingKind::Int => t.parse::<BigInt>().map(RingElement::Int).map_err(|_| err()),
            RingKind::Dyadic => parse_dyadic(t).map(RingElement::Dyadic).ok_or_else(err),
            RingKind::RootTwoDyadic => parse_root_two(t).map(RingElement::RootTwoDyadic).ok_or_else(err),
            RingKind::Mod => {
                let p = self.modulus.expect("modular ring carries a modulus");
                let (value, stated) = match t.split_once("mod") {
                    Some((v, q)) => (v.trim(), Some(q.trim().parse::<u64>().map_err(|_| err())?)),
                    None => (t, None),
                };
                if stated.is_some_and(|q| q != p) {
                    return Err(err());
                }
                let n = value.parse::<BigInt>().map_err(|_| err())?;
                Ok(self.from_bigint(&n))
            }
        }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RingKind::Dyadic => write!(f, "dyadic"),
            RingKind::Int => write!(f, "int"),
            RingKind::RootTwoDyadic => write!(f, "rt2"),
            RingKind::Mod => write!(f, "mod:{}", self.modulus.unwrap_or(0)),
        }
    }
}

impl FromStr for RingDescriptor {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "dyadic" => Ok(Self::dyadic()),
            "int" => Ok(Self::int()),
            "rt2" => Ok(Self::root_two()),
            other => match other.strip_prefix("mod:") {
                Some(p) => {
                    let p = p.parse::<u64>().map_err(|_| RingError::UnknownRing(other.to_string()))?;
                    Self::modular(p)
                }
                None => Err(RingError::UnknownRing(other.to_string())),
            },
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `numerator / 2^exponent`, kept in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    exp: u32,
}

impl Dyadic {
    pub fn new(num: BigInt, exp: u32) -> Self {
        let mut d = Dyadic { num, exp };
        d.normalize();
        d
    }

    pub fn integer(num: BigInt) -> Self {
        Dyadic { num, exp: 0 }
    }

    pub fn zero() -> Self {
        Dyadic { num: BigInt::zero(), exp: 0 }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0);
        let shift = tz.min(u64::from(self.exp)) as u32;
        if shift > 0 {
            self.num >>= shift;
            self.exp -= shift;
        }
    }

    fn add(&self, other: &Dyadic) -> Dyadic {
        let exp = self.exp.max(other.exp);
        let a = &self.num << (exp - self.exp);
        let b = &other.num << (exp - other.exp);
        Dyadic::new(a + b, exp)
    }

    fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &other.num, self.exp + other.exp)
    }

    fn neg(&self) -> Dyadic {
        Dyadic { num: -&self.num, exp: self.exp }
    }

    fn halve(&self) -> Dyadic {
        Dyadic::new(self.num.clone(), self.exp + 1)
    }

    fn double(&self) -> Dyadic {
        if self.exp > 0 {
            Dyadic { num: self.num.clone(), exp: self.exp - 1 }
        } else {
            Dyadic { num: &self.num << 1u32, exp: 0 }
        }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, BigInt::one() << self.exp)
        }
    }
}

fn parse_dyadic(t: &str) -> Option<Dyadic> {
    match t.split_once('/') {
        None => t.parse::<BigInt>().ok().map(Dyadic::integer),
        Some((n, d)) => {
            let num = n.trim().parse::<BigInt>().ok()?;
            let d = d.trim();
            let exp = if let Some(k) = d.strip_prefix("2^") {
                k.parse::<u32>().ok()?
            } else {
                let den = d.parse::<BigInt>().ok()?;
                if !den.is_positive() {
                    return None;
                }
                let tz = den.trailing_zeros().unwrap_or(0);
                if den != BigInt::one() << tz {
                    return None;
                }
                u32::try_from(tz).ok()?
            };
            Some(Dyadic::new(num, exp))
        }
    }
}

/// `a + b*sqrt2` with dyadic components.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootTwo {
    pub a: Dyadic,
    pub b: Dyadic,
}

impl fmt::Display for RootTwo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}*rt2", self.b);
        }
        if self.b.num.is_negative() {
            write!(f, "{}-{}*rt2", self.a, self.b.neg())
        } else {
            write!(f, "{}+{}*rt2", self.a, self.b)
        }
    }
}

fn parse_root_two(t: &str) -> Option<RootTwo> {
    let Some(head) = t.strip_suffix("rt2") else {
        return parse_dyadic(t).map(|a| RootTwo { a, b: Dyadic::zero() });
    };
    let head = head.strip_suffix('*').unwrap_or(head);
    // split at the last sign that is not the leading one
    let split = head.char_indices().filter(|&(i, c)| i > 0 && (c == '+' || c == '-')).map(|(i, _)| i).next_back();
    let (a_text, b_text) = match split {
        Some(i) => (&head[..i], &head[i..]),
        None => ("0", head),
    };
    let b_text = b_text.strip_prefix('+').unwrap_or(b_text);
    let b = match b_text {
        "" => Dyadic::integer(BigInt::one()),
        "-" => Dyadic::integer(-BigInt::one()),
        s => parse_dyadic(s)?,
    };
    Some(RootTwo { a: parse_dyadic(a_text)?, b })
}

/// An exact scalar.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingElement {
    Dyadic(Dyadic),
    Int(BigInt),
    RootTwoDyadic(RootTwo),
    Mod { p: u64, r: u64 },
}

impl RingElement {
    pub fn ring(&self) -> RingDescriptor {
        match self {
            RingElement::Dyadic(_) => RingDescriptor::dyadic(),
            RingElement::Int(_) => RingDescriptor::int(),
            RingElement::RootTwoDyadic(_) => RingDescriptor::root_two(),
            RingElement::Mod { p, .. } => RingDescriptor { kind: RingKind::Mod, modulus: Some(*p) },
        }
    }

    fn mismatch(&self, other: &RingElement) -> RingError {
        RingError::KindMismatch(self.ring(), other.ring())
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement, RingError> {
        use RingElement::*;
        Ok(match (self, other) {
            (Dyadic(x), Dyadic(y)) => Dyadic(x.add(y)),
            (Int(x), Int(y)) => Int(x + y),
            (RootTwoDyadic(x), RootTwoDyadic(y)) => RootTwoDyadic(RootTwo { a: x.a.add(&y.a), b: x.b.add(&y.b) }),
            (Mod { p, r }, Mod { p: q, r: s }) if p == q => {
                Mod { p: *p, r: ((*r as u128 + *s as u128) % *p as u128) as u64 }
            }
            _ => return Err(self.mismatch(other)),
        })
    }

    pub fn mul(&self, other: &RingElement) -> Result<RingElement, RingError> {
        use RingElement::*;
        Ok(match (self, other) {
            (Dyadic(x), Dyadic(y)) => Dyadic(x.mul(y)),
            (Int(x), Int(y)) => Int(x * y),
            (RootTwoDyadic(x), RootTwoDyadic(y)) => {
                // (a + b r)(c + d r) = (ac + 2bd) + (ad + bc) r
                let a = x.a.mul(&y.a).add(&x.b.mul(&y.b).double());
                let b = x.a.mul(&y.b).add(&x.b.mul(&y.a));
                RootTwoDyadic(RootTwo { a, b })
            }
            (Mod { p, r }, Mod { p: q, r: s }) if p == q => {
                Mod { p: *p, r: ((*r as u128 * *s as u128) % *p as u128) as u64 }
            }
            _ => return Err(self.mismatch(other)),
        })
    }

    pub fn neg(&self) -> RingElement {
        use RingElement::*;
        match self {
            Dyadic(x) => Dyadic(x.neg()),
            Int(x) => Int(-x),
            RootTwoDyadic(x) => RootTwoDyadic(RootTwo { a: x.a.neg(), b: x.b.neg() }),
            Mod { p, r } => Mod { p: *p, r: (p - r) % p },
        }
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement, RingError> {
        self.add(&other.neg())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RingElement::Dyadic(x) => x.is_zero(),
            RingElement::Int(x) => x.is_zero(),
            RingElement::RootTwoDyadic(x) => x.a.is_zero() && x.b.is_zero(),
            RingElement::Mod { r, .. } => *r == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.ring().one()
    }

    /// The unique `x` with `2x = self`, if the ring has one.
    pub fn halve(&self) -> Option<RingElement> {
        use RingElement::*;
        match self {
            Dyadic(x) => Some(Dyadic(x.halve())),
            Int(x) => x.is_even().then(|| Int(x >> 1u32)),
            RootTwoDyadic(x) => Some(RootTwoDyadic(RootTwo { a: x.a.halve(), b: x.b.halve() })),
            Mod { p, r } => {
                let inv2 = u64::div_ceil(*p, 2);
                Some(Mod { p: *p, r: ((*r as u128 * inv2 as u128) % *p as u128) as u64 })
            }
        }
    }

    pub fn double(&self) -> RingElement {
        self.add(self).expect("same ring")
    }

    pub fn pow(&self, e: u32) -> RingElement {
        let mut acc = self.ring().one();
        for _ in 0..e {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingElement::Dyadic(x) => write!(f, "{x}"),
            RingElement::Int(x) => write!(f, "{x}"),
            RingElement::RootTwoDyadic(x) => write!(f, "{x}"),
            RingElement::Mod { p, r } => write!(f, "{r} mod {p}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dy(n: i64, e: u32) -> RingElement {
        RingElement::Dyadic(Dyadic::new(BigInt::from(n), e))
    }

    fn rt(a: i64, b: i64) -> RingElement {
        RingElement::RootTwoDyadic(RootTwo { a: Dyadic::integer(a.into()), b: Dyadic::integer(b.into()) })
    }

    #[test]
    fn add_examples() {
        assert_eq!(dy(1, 1).add(&dy(1, 1)).unwrap(), dy(1, 0));
        let z = RingDescriptor::int();
        assert_eq!(z.from_integer(3).add(&z.from_integer(5)).unwrap(), z.from_integer(8));
        let m5 = RingDescriptor::modular(5).unwrap();
        assert_eq!(m5.from_integer(3).add(&m5.from_integer(4)).unwrap(), m5.from_integer(2));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(dy(3, 1).mul(&dy(1, 1)).unwrap(), dy(3, 2));
        // (1 + r)^2 = 1 + 2r + 2 = 3 + 2r
        assert_eq!(rt(1, 1).mul(&rt(1, 1)).unwrap(), rt(3, 2));
        let z = RingDescriptor::int();
        assert_eq!(z.from_integer(-1).mul(&z.from_integer(-1)).unwrap(), z.one());
    }

    #[test]
    fn mixed_rings_are_rejected() {
        let err = dy(1, 0).add(&RingDescriptor::int().one()).unwrap_err();
        assert!(matches!(err, RingError::KindMismatch(..)));
        let m5 = RingDescriptor::modular(5).unwrap().one();
        let m7 = RingDescriptor::modular(7).unwrap().one();
        assert!(m5.mul(&m7).is_err());
    }

    #[test]
    fn small_ops() {
        assert_eq!(RingDescriptor::dyadic().from_integer(-3), dy(-3, 0));
        let m5 = RingDescriptor::modular(5).unwrap();
        assert_eq!(m5.from_integer(2).neg(), m5.from_integer(3));
        assert!(dy(0, 0).is_zero());
        assert!(dy(0, 7).is_zero());
    }

    #[test]
    fn halving() {
        assert_eq!(dy(3, 0).halve(), Some(dy(3, 1)));
        let z = RingDescriptor::int();
        assert_eq!(z.from_integer(3).halve(), None);
        assert_eq!(z.from_integer(6).halve(), Some(z.from_integer(3)));
        let m5 = RingDescriptor::modular(5).unwrap();
        assert_eq!(m5.one().halve(), Some(m5.from_integer(3)));
    }

    #[test]
    fn halving_mod5_matches_exhaustive_table() {
        let m5 = RingDescriptor::modular(5).unwrap();
        for a in 0..5 {
            let x = m5.from_integer(a);
            let found: Vec<i64> = (0..5).filter(|&h| (2 * h) % 5 == a).collect();
            assert_eq!(found.len(), 1);
            assert_eq!(x.halve(), Some(m5.from_integer(found[0])));
        }
    }

    #[test]
    fn descriptors() {
        assert!(RingDescriptor::dyadic().has_half());
        assert!(RingDescriptor::root_two().has_half());
        assert!(!RingDescriptor::int().has_half());
        assert!(RingDescriptor::modular(5).unwrap().has_half());
        assert!(RingDescriptor::modular(9).is_err());
        assert!(RingDescriptor::modular(2).is_err());
        for s in ["dyadic", "int", "rt2", "mod:7"] {
            assert_eq!(s.parse::<RingDescriptor>().unwrap().to_string(), s);
        }
        assert!("mod:4".parse::<RingDescriptor>().is_err());
        assert!("reals".parse::<RingDescriptor>().is_err());
    }

    #[test]
    fn rendering_and_parsing() {
        let d = RingDescriptor::dyadic();
        assert_eq!(dy(3, 2).to_string(), "3/4");
        assert_eq!(d.parse_element("3/4").unwrap(), dy(3, 2));
        assert_eq!(d.parse_element("3/2^2").unwrap(), dy(3, 2));
        assert_eq!(d.parse_element("6/8").unwrap(), dy(3, 2));
        assert!(d.parse_element("1/3").is_err());

        let r = RingDescriptor::root_two();
        let inv = r.inv_sqrt2().unwrap();
        assert_eq!(inv.to_string(), "1/2*rt2");
        assert_eq!(r.parse_element("1/2*rt2").unwrap(), inv);
        assert_eq!(rt(3, 2).to_string(), "3+2*rt2");
        assert_eq!(rt(3, -2).to_string(), "3-2*rt2");
        for s in ["3+2*rt2", "3-2*rt2", "-1/4+3/2*rt2", "-rt2", "7"] {
            let x = r.parse_element(s).unwrap();
            assert_eq!(r.parse_element(&x.to_string()).unwrap(), x);
        }

        let m = RingDescriptor::modular(5).unwrap();
        assert_eq!(m.from_integer(3).to_string(), "3 mod 5");
        assert_eq!(m.parse_element("3 mod 5").unwrap(), m.from_integer(3));
        assert_eq!(m.parse_element("-1").unwrap(), m.from_integer(4));
        assert!(m.parse_element("3 mod 7").is_err());
    }

    #[test]
    fn inv_sqrt2_squares_to_half() {
        let r = RingDescriptor::root_two();
        let s = r.inv_sqrt2().unwrap();
        assert_eq!(s.mul(&s).unwrap(), r.half().unwrap());
    }
}
