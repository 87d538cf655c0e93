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

//! Locating a rule's left-hand side inside a host diagram, and rewriting it.
//!
//! Every generator is symmetric in its legs, so a match is determined by an
//! injective vertex map; parallel host wires are interchangeable.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::diagram::{incidence_key, splice, Diagram, Endpoint, Node};

use super::{Result, RuleError, RuleInstance};

/// Where one left-hand boundary slot lands in the host.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlotImage {
    /// The slot's wire is the host wire end `(wire, side)`, which sits on
    /// an image vertex.
    End { wire: usize, side: usize },
    /// The slot is one end of a bare left-hand wire cut into host wire
    /// `wire`; the host end on `side` is its outside neighbour.
    Bare { wire: usize, side: usize },
}

/// One occurrence of a left-hand side.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatchSite {
    /// Host vertex of each left-hand vertex.
    pub vertices: Vec<usize>,
    /// Host wires consumed by left-hand internal wires.
    pub internal: Vec<usize>,
    /// Image of each left-hand slot, inputs first.
    pub slots: Vec<SlotImage>,
}

type Multi = HashMap<(Endpoint, Endpoint), Vec<usize>>;

fn multiplicities(d: &Diagram) -> Multi {
    let mut m: Multi = HashMap::new();
    for (w, (a, b)) in d.wires().iter().enumerate() {
        m.entry(incidence_key(*a, *b)).or_default().push(w);
    }
    m
}

fn count(m: &Multi, a: usize, b: usize) -> usize {
    m.get(&incidence_key(Endpoint::V(a), Endpoint::V(b))).map_or(0, Vec::len)
}

fn slot_index(lhs: &Diagram, e: Endpoint) -> usize {
    match e {
        Endpoint::In(i) => i,
        Endpoint::Out(j) => lhs.n_inputs() + j,
        Endpoint::V(_) => unreachable!("slot_index on a vertex"),
    }
}

/// Left-hand vertices in breadth-first order, so each one after the first
/// in its component is adjacent to an earlier one.
fn search_order(lhs: &Diagram) -> Vec<usize> {
    let n = lhs.vertices().len();
    let mut adj = vec![Vec::new(); n];
    for (a, b) in lhs.wires() {
        if let (Endpoint::V(u), Endpoint::V(v)) = (a, b) {
            adj[*u].push(*v);
            adj[*v].push(*u);
        }
    }
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    order
}

struct Search<'a> {
    host: &'a Diagram,
    lhs: &'a Diagram,
    hm: Multi,
    lm: Multi,
    hdeg: Vec<usize>,
    ldeg: Vec<usize>,
    order: Vec<usize>,
    found: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn run(&mut self, depth: usize, map: &mut Vec<Option<usize>>, used: &mut Vec<bool>) {
        if depth == self.order.len() {
            self.found.push(map.iter().map(|v| v.expect("complete map")).collect());
            return;
        }
        let u = self.order[depth];
        for w in 0..self.host.vertices().len() {
            if used[w] || self.host.vertex(w) != self.lhs.vertex(u) || self.hdeg[w] != self.ldeg[u] {
                continue;
            }
            if count(&self.hm, w, w) < count(&self.lm, u, u) {
                continue;
            }
            let fits = self.order[..depth].iter().all(|&p| {
                let fp = map[p].expect("mapped earlier");
                count(&self.hm, fp, w) >= count(&self.lm, p, u)
            });
            if !fits {
                continue;
            }
            map[u] = Some(w);
            used[w] = true;
            self.run(depth + 1, map, used);
            map[u] = None;
            used[w] = false;
        }
    }
}

/// Completes a vertex map into a site with no bare wires assigned yet.
fn complete(host: &Diagram, lhs: &Diagram, hm: &Multi, map: &[usize]) -> Option<MatchSite> {
    let mut taken: HashMap<(Endpoint, Endpoint), usize> = HashMap::new();
    let mut internal = Vec::new();
    for (a, b) in lhs.wires() {
        if let (Endpoint::V(u), Endpoint::V(v)) = (a, b) {
            let key = incidence_key(Endpoint::V(map[*u]), Endpoint::V(map[*v]));
            let next = taken.entry(key).or_default();
            internal.push(*hm.get(&key)?.get(*next)?);
            *next += 1;
        }
    }
    let consumed: HashSet<usize> = internal.iter().copied().collect();
    let mut slots = vec![None; lhs.n_inputs() + lhs.n_outputs()];
    for (u, &hv) in map.iter().enumerate() {
        let mut free = host.incidences(hv).into_iter().filter(|(w, _)| !consumed.contains(w));
        for (w, side) in lhs.incidences(u) {
            let (a, b) = lhs.wires()[w];
            let other = if side == 0 { b } else { a };
            if other.is_boundary() {
                let (hw, hs) = free.next()?;
                slots[slot_index(lhs, other)] = Some(SlotImage::End { wire: hw, side: hs });
            }
        }
        if free.next().is_some() {
            return None;
        }
    }
    let slots = slots.into_iter().map(|s| s.unwrap_or(SlotImage::Bare { wire: usize::MAX, side: 0 })).collect();
    Some(MatchSite { vertices: map.to_vec(), internal, slots })
}

/// All occurrences of `rule.lhs` in `host`, up to the choice of vertex map
/// onto the same image. Left-hand sides over `cap` vertices are refused.
pub fn find_matches(host: &Diagram, rule: &RuleInstance, cap: usize) -> Result<Vec<MatchSite>> {
    let lhs = &rule.lhs;
    if lhs.vertices().len() > cap {
        return Err(RuleError::VertexCap { vertices: lhs.vertices().len(), cap });
    }
    if host.loops() < lhs.loops() {
        return Ok(Vec::new());
    }
    let mut search = Search {
        host,
        lhs,
        hm: multiplicities(host),
        lm: multiplicities(lhs),
        hdeg: host.degrees(),
        ldeg: lhs.degrees(),
        order: search_order(lhs),
        found: Vec::new(),
    };
    let mut map = vec![None; lhs.vertices().len()];
    let mut used = vec![false; host.vertices().len()];
    search.run(0, &mut map, &mut used);

    let bare: Vec<(Endpoint, Endpoint)> =
        lhs.wires().iter().copied().filter(|(a, b)| a.is_boundary() && b.is_boundary()).collect();

    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for map in std::mem::take(&mut search.found) {
        let Some(base) = complete(host, lhs, &search.hm, &map) else { continue };
        let image: HashSet<usize> = map.iter().copied().collect();
        let candidates: Vec<usize> = (0..host.wires().len())
            .filter(|&w| {
                let (a, b) = host.wires()[w];
                ![a, b].iter().any(|e| e.vertex().is_some_and(|v| image.contains(&v)))
            })
            .collect();
        let mut chosen = Vec::new();
        assign_bare(&candidates, bare.len(), &mut chosen, &mut |choice| {
            let mut key_v = map.clone();
            key_v.sort_unstable();
            let key_w: BTreeSet<usize> = choice.iter().copied().collect();
            if !seen.insert((key_v, key_w)) {
                return;
            }
            let mut site = base.clone();
            for (&(p, q), &hw) in bare.iter().zip(choice) {
                site.slots[slot_index(lhs, p)] = SlotImage::Bare { wire: hw, side: 0 };
                site.slots[slot_index(lhs, q)] = SlotImage::Bare { wire: hw, side: 1 };
            }
            out.push(site);
        });
    }
    Ok(out)
}

fn assign_bare(candidates: &[usize], k: usize, chosen: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
    if chosen.len() == k {
        emit(chosen);
        return;
    }
    for &w in candidates {
        if chosen.contains(&w) {
            continue;
        }
        chosen.push(w);
        assign_bare(candidates, k, chosen, emit);
        chosen.pop();
    }
}

fn invalid(msg: impl Into<String>) -> RuleError {
    RuleError::InvalidSite(msg.into())
}

fn check_site(host: &Diagram, rule: &RuleInstance, site: &MatchSite) -> Result<()> {
    let lhs = &rule.lhs;
    if lhs.signature() != rule.rhs.signature() {
        return Err(invalid("rule sides have different signatures"));
    }
    if site.vertices.len() != lhs.vertices().len() {
        return Err(invalid("vertex map has the wrong length"));
    }
    if site.slots.len() != lhs.n_inputs() + lhs.n_outputs() {
        return Err(invalid("slot map has the wrong length"));
    }
    let image: HashSet<usize> = site.vertices.iter().copied().collect();
    if image.len() != site.vertices.len() {
        return Err(invalid("vertex map is not injective"));
    }
    for (u, &hv) in site.vertices.iter().enumerate() {
        if hv >= host.vertices().len() || host.vertex(hv) != lhs.vertex(u) {
            return Err(invalid(format!("v{u} does not map onto a vertex of the same kind")));
        }
    }
    if host.loops() < lhs.loops() {
        return Err(invalid("not enough closed loops"));
    }
    let wires = host.wires();
    let mut claimed: HashSet<(usize, usize)> = HashSet::new();
    let mut internal = HashSet::new();
    for &w in &site.internal {
        let (a, b) = *wires.get(w).ok_or_else(|| invalid(format!("no host wire {w}")))?;
        let inside = |e: Endpoint| e.vertex().is_some_and(|v| image.contains(&v));
        if !inside(a) || !inside(b) || !internal.insert(w) {
            return Err(invalid(format!("wire {w} is not internal to the image")));
        }
    }
    let mut bare = HashSet::new();
    for slot in &site.slots {
        match *slot {
            SlotImage::End { wire, side } => {
                let (a, b) = *wires.get(wire).ok_or_else(|| invalid(format!("no host wire {wire}")))?;
                let e = if side == 0 { a } else { b };
                if side > 1 || !e.vertex().is_some_and(|v| image.contains(&v)) || internal.contains(&wire) {
                    return Err(invalid(format!("wire end ({wire}, {side}) is not on the image")));
                }
                if !claimed.insert((wire, side)) {
                    return Err(invalid(format!("wire end ({wire}, {side}) claimed twice")));
                }
            }
            SlotImage::Bare { wire, side } => {
                if wire >= wires.len() || side > 1 || internal.contains(&wire) || !bare.insert((wire, side)) {
                    return Err(invalid(format!("bad bare image ({wire}, {side})")));
                }
            }
        }
    }
    for &(w, _) in &bare {
        if !bare.contains(&(w, 0)) || !bare.contains(&(w, 1)) {
            return Err(invalid(format!("bare wire {w} is cut only once")));
        }
        if claimed.contains(&(w, 0)) || claimed.contains(&(w, 1)) {
            return Err(invalid(format!("wire {w} is both cut and claimed")));
        }
    }
    for &hv in &site.vertices {
        for inc in host.incidences(hv) {
            if !internal.contains(&inc.0) && !claimed.contains(&inc) {
                return Err(invalid(format!("wire end {inc:?} at v{hv} is not covered")));
            }
        }
    }
    let internal_lhs = lhs.wires().iter().filter(|(a, b)| !a.is_boundary() && !b.is_boundary()).count();
    if internal.len() != internal_lhs {
        return Err(invalid("internal wire count differs from the left-hand side"));
    }
    Ok(())
}

/// Replaces the occurrence `site` of `rule.lhs` in `host` by `rule.rhs`.
pub fn apply(host: &Diagram, rule: &RuleInstance, site: &MatchSite) -> Result<Diagram> {
    check_site(host, rule, site)?;
    let lhs = &rule.lhs;
    let rhs = &rule.rhs;

    let image: HashSet<usize> = site.vertices.iter().copied().collect();
    let mut renumber = vec![usize::MAX; host.vertices().len()];
    let mut vertices = Vec::new();
    for (v, kind) in host.vertices().iter().enumerate() {
        if !image.contains(&v) {
            renumber[v] = vertices.len();
            vertices.push(kind.clone());
        }
    }
    let off = vertices.len();
    vertices.extend(rhs.vertices().iter().cloned());

    let mut end_slot: HashMap<(usize, usize), usize> = HashMap::new();
    let mut cut: HashMap<usize, [usize; 2]> = HashMap::new();
    for (s, slot) in site.slots.iter().enumerate() {
        match *slot {
            SlotImage::End { wire, side } => {
                end_slot.insert((wire, side), s);
            }
            SlotImage::Bare { wire, side } => cut.entry(wire).or_insert([0; 2])[side] = s,
        }
    }
    let internal: HashSet<usize> = site.internal.iter().copied().collect();

    let host_node = |w: usize, side: usize, e: Endpoint| -> Node {
        if let Some(&s) = end_slot.get(&(w, side)) {
            return Node::J(s);
        }
        match e {
            Endpoint::V(v) => Node::E(Endpoint::V(renumber[v])),
            other => Node::E(other),
        }
    };
    let mut wires = Vec::new();
    for (w, &(a, b)) in host.wires().iter().enumerate() {
        if internal.contains(&w) {
            continue;
        }
        if let Some(&[p, q]) = cut.get(&w) {
            wires.push((host_node(w, 0, a), Node::J(p)));
            wires.push((Node::J(q), host_node(w, 1, b)));
            continue;
        }
        wires.push((host_node(w, 0, a), host_node(w, 1, b)));
    }
    for &(a, b) in rhs.wires() {
        let node = |e: Endpoint| match e {
            Endpoint::V(v) => Node::E(Endpoint::V(off + v)),
            slot => Node::J(slot_index(lhs, slot)),
        };
        wires.push((node(a), node(b)));
    }
    let (wires, extra) = splice(&wires, site.slots.len());
    let loops = host.loops() - lhs.loops() + rhs.loops() + extra;
    Ok(Diagram::from_parts(vertices, wires, host.n_inputs(), host.n_outputs(), loops)?)
}
