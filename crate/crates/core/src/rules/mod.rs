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

//! Rewrite rules: named, parametric families of diagram equations.
//!
//! Families indexed by arities stand in for bang-boxed rules; a schema
//! instantiated at `(m, n)` has every copy expanded. Soundness is checked by
//! exact interpretation of both sides.

mod catalog;
mod matching;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::diagram::{Diagram, DiagramError};
use crate::ring::{RingDescriptor, RingElement};
use crate::semantics::{Interpretation, SemanticsError, StarMode};

pub use catalog::addition_gadget;
pub use matching::{apply, find_matches, MatchSite, SlotImage};

/// Largest `m` or `n` a schema may be instantiated at unless overridden.
pub const DEFAULT_ARITY_CAP: usize = 4;

/// Largest left-hand side, in vertices, accepted by [`find_matches`].
pub const DEFAULT_MATCH_VERTEX_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("unknown rule {0:?}")]
    UnknownRule(String),

    #[error("rule {rule}: arity {value} exceeds the cap {cap}")]
    ArityCap { rule: String, value: usize, cap: usize },

    #[error("rule {rule} uses the star and needs a ring with 1/2, not {ring}")]
    NeedsHalf { rule: String, ring: RingDescriptor },

    #[error("rule {rule}: label {label} is not in {ring}")]
    LabelRing { rule: String, label: String, ring: RingDescriptor },

    #[error("rule {rule}: {reason}")]
    BadParams { rule: String, reason: String },

    #[error("left-hand side has {vertices} vertices, over the matching cap {cap}")]
    VertexCap { vertices: usize, cap: usize },

    #[error("invalid match site: {0}")]
    InvalidSite(String),

    #[error(transparent)]
    Diagram(#[from] DiagramError),

    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

pub type Result<T> = std::result::Result<T, RuleError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Core,
    ZhR,
    Derived,
    AltOrtho,
    Merged,
    Sqrt2,
}

impl Tag {
    pub const ALL: [Tag; 6] = [Tag::Core, Tag::ZhR, Tag::Derived, Tag::AltOrtho, Tag::Merged, Tag::Sqrt2];
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tag::Core => "core",
            Tag::ZhR => "zh_r",
            Tag::Derived => "derived",
            Tag::AltOrtho => "alt_ortho",
            Tag::Merged => "merged",
            Tag::Sqrt2 => "sqrt2",
        })
    }
}

impl FromStr for Tag {
    type Err = RuleError;

    fn from_str(s: &str) -> Result<Self> {
        Tag::ALL.into_iter().find(|t| t.to_string() == s).ok_or_else(|| RuleError::UnknownRule(format!("ruleset {s}")))
    }
}

/// Which parameters a schema reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub uses_m: bool,
    pub uses_n: bool,
    /// Number of ring labels read: 0, 1 (`a`) or 2 (`a`, `b`).
    pub labels: usize,
}

impl Signature {
    pub const FIXED: Signature = Signature { uses_m: false, uses_n: false, labels: 0 };
    pub const MN: Signature = Signature { uses_m: true, uses_n: true, labels: 0 };
    pub const N: Signature = Signature { uses_m: false, uses_n: true, labels: 0 };
    pub const A: Signature = Signature { uses_m: false, uses_n: false, labels: 1 };
    pub const AB: Signature = Signature { uses_m: false, uses_n: false, labels: 2 };
    pub const MNA: Signature = Signature { uses_m: true, uses_n: true, labels: 1 };
    pub const NA: Signature = Signature { uses_m: false, uses_n: true, labels: 1 };
    pub const NAB: Signature = Signature { uses_m: false, uses_n: true, labels: 2 };
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.uses_m {
            parts.push("m");
        }
        if self.uses_n {
            parts.push("n");
        }
        if self.labels >= 1 {
            parts.push("a");
        }
        if self.labels >= 2 {
            parts.push("b");
        }
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Params {
    pub m: usize,
    pub n: usize,
    pub a: RingElement,
    pub b: RingElement,
}

impl Params {
    pub fn new(ring: &RingDescriptor) -> Params {
        Params { m: 0, n: 0, a: ring.one(), b: ring.one() }
    }

    pub fn ints(ring: &RingDescriptor, m: usize, n: usize, a: i64, b: i64) -> Params {
        Params { m, n, a: ring.from_integer(a), b: ring.from_integer(b) }
    }

    pub fn arity(mut self, m: usize, n: usize) -> Params {
        self.m = m;
        self.n = n;
        self
    }

    pub fn labels(mut self, a: RingElement, b: RingElement) -> Params {
        self.a = a;
        self.b = b;
        self
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={} n={} a={} b={}", self.m, self.n, self.a, self.b)
    }
}

pub type Instantiator = fn(&Params, &RingDescriptor) -> Result<(Diagram, Diagram)>;

/// A named family of equations `lhs = rhs`.
#[derive(Clone)]
pub struct RuleSchema {
    pub name: &'static str,
    pub citation: &'static str,
    pub tags: &'static [Tag],
    pub signature: Signature,
    /// Contains a star, so only meaningful where `1/2` exists; unless tagged
    /// `sqrt2`, the star is read as `1/2`.
    pub requires_half: bool,
    pub instantiate: Instantiator,
}

impl fmt::Debug for RuleSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RuleSchema")
            .field("name", &self.name)
            .field("tags", &self.tags)
            .field("signature", &self.signature)
            .finish()
    }
}

impl RuleSchema {
    pub fn has_tag(&self, tag: Tag) -> bool {
        self.tags.contains(&tag)
    }

    pub fn instantiate(&self, params: &Params, ring: &RingDescriptor) -> Result<RuleInstance> {
        self.instantiate_capped(params, ring, DEFAULT_ARITY_CAP)
    }

    pub fn instantiate_capped(&self, params: &Params, ring: &RingDescriptor, cap: usize) -> Result<RuleInstance> {
        for value in [params.m, params.n] {
            if value > cap {
                return Err(RuleError::ArityCap { rule: self.name.to_string(), value, cap });
            }
        }
        if self.requires_half && !ring.has_half() {
            return Err(RuleError::NeedsHalf { rule: self.name.to_string(), ring: *ring });
        }
        for label in [&params.a, &params.b] {
            if label.ring() != *ring {
                return Err(RuleError::LabelRing {
                    rule: self.name.to_string(),
                    label: label.to_string(),
                    ring: *ring,
                });
            }
        }
        let (lhs, rhs) = (self.instantiate)(params, ring)?;
        debug_assert_eq!(lhs.signature(), rhs.signature(), "rule {} has mismatched sides", self.name);
        Ok(RuleInstance { name: self.name.to_string(), lhs, rhs })
    }

    /// All parameter tuples of the sweep grid for this schema.
    pub fn grid(&self, ring: &RingDescriptor, max_arity: usize, labels: &[RingElement]) -> Vec<Params> {
        let ms: Vec<usize> = if self.signature.uses_m { (0..=max_arity).collect() } else { vec![0] };
        let ns: Vec<usize> = if self.signature.uses_n { (0..=max_arity).collect() } else { vec![0] };
        let one = vec![ring.one()];
        let la: &[RingElement] = if self.signature.labels >= 1 { labels } else { &one };
        let lb: &[RingElement] = if self.signature.labels >= 2 { labels } else { &one };
        let mut out = Vec::new();
        for &m in &ms {
            for &n in &ns {
                for a in la {
                    for b in lb {
                        out.push(Params { m, n, a: a.clone(), b: b.clone() });
                    }
                }
            }
        }
        out
    }
}

/// A concrete equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleInstance {
    pub name: String,
    pub lhs: Diagram,
    pub rhs: Diagram,
}

impl RuleInstance {
    /// The same equation read right to left.
    pub fn reversed(&self) -> RuleInstance {
        RuleInstance { name: format!("{}^-1", self.name), lhs: self.rhs.clone(), rhs: self.lhs.clone() }
    }

    pub fn is_sound(&self, interp: &Interpretation) -> Result<bool> {
        Ok(interp.interpret(&self.lhs)? == interp.interpret(&self.rhs)?)
    }
}

/// Every schema, in catalogue order.
pub fn all() -> &'static [RuleSchema] {
    catalog::RULES
}

/// Schemas carrying `tag`, or all of them.
pub fn catalog(tag: Option<Tag>) -> Vec<&'static RuleSchema> {
    all().iter().filter(|r| tag.is_none_or(|t| r.has_tag(t))).collect()
}

pub fn lookup(name: &str) -> Result<&'static RuleSchema> {
    all().iter().find(|r| r.name == name).ok_or_else(|| RuleError::UnknownRule(name.to_string()))
}

pub fn instantiate(name: &str, params: &Params, ring: &RingDescriptor) -> Result<RuleInstance> {
    lookup(name)?.instantiate(params, ring)
}

/// `[[lhs]] = [[rhs]]` for one instantiation.
pub fn check_sound(name: &str, params: &Params, interp: &Interpretation) -> Result<bool> {
    instantiate(name, params, &interp.ring())?.is_sound(interp)
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub interp: Interpretation,
    pub max_arity: usize,
    pub labels: Vec<RingElement>,
}

impl SweepConfig {
    /// Arities up to `max_arity`, labels `-2..=2`.
    pub fn new(interp: Interpretation, max_arity: usize) -> SweepConfig {
        let labels = (-2..=2).map(|v| interp.ring().from_integer(v)).collect();
        SweepConfig { interp, max_arity, labels }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleReport {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
    pub skipped: Option<String>,
}

impl RuleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for RuleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(why) = &self.skipped {
            return write!(f, "{:<26} SKIP  {}", self.name, why);
        }
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{:<26} {verdict}  {} cases", self.name, self.cases)?;
        for fail in &self.failures {
            write!(f, "\n    failed at {fail}")?;
        }
        Ok(())
    }
}

/// Checks every schema on the sweep grid. Schemas run in parallel.
pub fn sweep(schemas: &[&RuleSchema], cfg: &SweepConfig) -> Vec<RuleReport> {
    schemas.par_iter().map(|s| sweep_one(s, cfg)).collect()
}

fn sweep_one(schema: &RuleSchema, cfg: &SweepConfig) -> RuleReport {
    let ring = cfg.interp.ring();
    let mut report = RuleReport { name: schema.name.to_string(), cases: 0, failures: Vec::new(), skipped: None };
    if schema.requires_half && !ring.has_half() {
        report.skipped = Some(format!("needs 1/2, absent from {ring}"));
        return report;
    }
    if schema.requires_half && cfg.interp.star_mode() == StarMode::InvSqrt2 && !schema.has_tag(Tag::Sqrt2) {
        report.skipped = Some("reads the star as 1/2".to_string());
        return report;
    }
    let cap = cfg.max_arity.max(DEFAULT_ARITY_CAP);
    for params in schema.grid(&ring, cfg.max_arity, &cfg.labels) {
        report.cases += 1;
        let verdict = schema.instantiate_capped(&params, &ring, cap).and_then(|inst| inst.is_sound(&cfg.interp));
        match verdict {
            Ok(true) => {}
            Ok(false) => report.failures.push(params.to_string()),
            Err(e) => report.failures.push(format!("{params}: {e}")),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::VertexKind;
    use crate::semantics::interpret;

    fn dy() -> RingDescriptor {
        RingDescriptor::dyadic()
    }

    #[test]
    fn catalogue_sizes() {
        assert_eq!(catalog(Some(Tag::Core)).len(), 8);
        assert_eq!(catalog(Some(Tag::AltOrtho)).len(), 2);
        let zhr: Vec<&str> = catalog(Some(Tag::ZhR)).iter().map(|r| r.name).collect();
        for name in ["zs", "id", "hs", "hh", "ba1", "ba2", "m", "o", "M", "A", "I", "U", "twoX", "twoNot"] {
            assert!(zhr.contains(&name), "{name} missing from zh_r");
        }
        let lemmas = all().iter().filter(|r| r.name.starts_with("lemma.")).count();
        assert!(lemmas >= 25);
        let mut names: Vec<&str> = all().iter().map(|r| r.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), all().len());
        assert!(all().iter().all(|r| !r.citation.is_empty()));
    }

    #[test]
    fn tag_names_roundtrip() {
        for t in Tag::ALL {
            assert_eq!(t.to_string().parse::<Tag>().unwrap(), t);
        }
    }

    #[test]
    fn multiply_example() {
        let inst = instantiate("M", &Params::ints(&dy(), 0, 0, 3, 5), &dy()).unwrap();
        let want = crate::semantics::Matrix::from_integers(dy(), 1, 0, &[1, 15]).unwrap();
        assert_eq!(interpret(&inst.lhs, &dy()).unwrap(), want);
        assert_eq!(interpret(&inst.rhs, &dy()).unwrap(), want);
    }

    #[test]
    fn zs_shape() {
        let inst = instantiate("zs", &Params::new(&dy()).arity(2, 1), &dy()).unwrap();
        assert_eq!(inst.lhs.vertices().len(), 2);
        assert!(inst.rhs.is_isomorphic(&Diagram::make_generator(VertexKind::ZSpider, 2, 1).unwrap()));
    }

    #[test]
    fn caps_and_half_are_enforced() {
        let p = Params::new(&dy()).arity(5, 0);
        assert!(matches!(instantiate("zs", &p, &dy()), Err(RuleError::ArityCap { .. })));
        let z = RingDescriptor::int();
        assert!(matches!(instantiate("starZero", &Params::new(&z), &z), Err(RuleError::NeedsHalf { .. })));
        assert!(matches!(instantiate("nope", &Params::new(&dy()), &dy()), Err(RuleError::UnknownRule(_))));
    }

    #[test]
    fn core_rules_sound_small() {
        let cfg = SweepConfig::new(Interpretation::new(dy()), 2);
        for r in sweep(&catalog(Some(Tag::Core)), &cfg) {
            assert!(r.passed(), "{r}");
        }
    }

    fn corrupted_hh(_: &Params, ring: &RingDescriptor) -> Result<(Diagram, Diagram)> {
        let h = Diagram::make_generator(VertexKind::hadamard(ring), 1, 1)?;
        let star = Diagram::make_generator(VertexKind::Star, 0, 0)?;
        let rhs = Diagram::identity(1).tensor(&Diagram::tensor_all([&star, &star, &star]));
        Ok((h.compose(&h)?, rhs))
    }

    #[test]
    fn corrupted_rule_is_caught() {
        let bad = RuleSchema {
            name: "hh.corrupt",
            citation: "mutation control",
            tags: &[Tag::Core],
            signature: Signature::FIXED,
            requires_half: true,
            instantiate: corrupted_hh,
        };
        let cfg = SweepConfig::new(Interpretation::new(dy()), 3);
        let reports = sweep(&[&bad], &cfg);
        assert!(!reports[0].passed());
    }

    #[test]
    fn star_zero_in_both_modes() {
        let p = Params::new(&RingDescriptor::root_two());
        assert!(check_sound("starZero", &p, &Interpretation::sqrt2()).unwrap());
        assert!(check_sound("starZero", &p, &Interpretation::new(RingDescriptor::root_two())).unwrap());
    }
}
