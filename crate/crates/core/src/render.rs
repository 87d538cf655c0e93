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

//! Graphviz and TikZ export.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::diagram::{Diagram, Endpoint, VertexKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown render format {0:?}; expected dot or tikz")]
pub struct UnknownFormat(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Dot,
    Tikz,
}

impl FromStr for Format {
    type Err = UnknownFormat;

    fn from_str(s: &str) -> Result<Format, UnknownFormat> {
        match s {
            "dot" => Ok(Format::Dot),
            "tikz" => Ok(Format::Tikz),
            other => Err(UnknownFormat(other.to_string())),
        }
    }
}

pub fn render(d: &Diagram, format: Format) -> String {
    match format {
        Format::Dot => to_dot(d),
        Format::Tikz => to_tikz(d),
    }
}

fn node_name(e: Endpoint) -> String {
    e.to_string()
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Undirected Graphviz graph. Inputs sit on the left, outputs on the right.
pub fn to_dot(d: &Diagram) -> String {
    let mut out = String::from("graph zh {\n  rankdir=LR;\n  node [fontsize=10];\n");
    if d.n_inputs() > 0 {
        out.push_str("  { rank=source;");
        for i in 0..d.n_inputs() {
            let _ = write!(out, " in{i} [shape=plaintext];");
        }
        out.push_str(" }\n");
    }
    if d.n_outputs() > 0 {
        out.push_str("  { rank=sink;");
        for j in 0..d.n_outputs() {
            let _ = write!(out, " out{j} [shape=plaintext];");
        }
        out.push_str(" }\n");
    }
    for (v, kind) in d.vertices().iter().enumerate() {
        let attrs = match kind {
            VertexKind::ZSpider => "shape=circle, style=filled, fillcolor=white, label=\"\", width=0.25".to_string(),
            VertexKind::XSpider => "shape=circle, style=filled, fillcolor=gray, label=\"\", width=0.25".to_string(),
            VertexKind::XNot => "shape=circle, style=filled, fillcolor=gray, label=\"¬\", width=0.25".to_string(),
            VertexKind::Star => "shape=plaintext, label=\"★\"".to_string(),
            VertexKind::HBox(a) => {
                let label = if *a == a.ring().from_integer(-1) { String::new() } else { a.to_string() };
                format!("shape=square, style=filled, fillcolor=yellow, label=\"{}\"", dot_escape(&label))
            }
        };
        let _ = writeln!(out, "  v{v} [{attrs}];");
    }
    for l in 0..d.loops() {
        let _ = writeln!(out, "  loop{l} [shape=circle, label=\"\", width=0.15];");
        let _ = writeln!(out, "  loop{l} -- loop{l};");
    }
    for (a, b) in d.wires() {
        let _ = writeln!(out, "  {} -- {};", node_name(*a), node_name(*b));
    }
    out.push_str("}\n");
    out
}

/// A standalone `tikzpicture`. Vertices are laid out left to right in
/// index order; boundaries are stacked at the two edges.
pub fn to_tikz(d: &Diagram) -> String {
    let n = d.vertices().len();
    let right = (n + 1) as f64 * 1.5;
    let mut out = String::from("\\begin{tikzpicture}\n");
    for i in 0..d.n_inputs() {
        let _ = writeln!(out, "  \\node (in{i}) at (0, {:.1}) {{$in_{{{i}}}$}};", -(i as f64));
    }
    for (v, kind) in d.vertices().iter().enumerate() {
        let x = (v + 1) as f64 * 1.5;
        let y = if v % 2 == 0 { 0.0 } else { -0.8 };
        let (style, text) = match kind {
            VertexKind::ZSpider => ("circle, draw, fill=white, inner sep=2pt", String::new()),
            VertexKind::XSpider => ("circle, draw, fill=gray!50, inner sep=2pt", String::new()),
            VertexKind::XNot => ("circle, draw, fill=gray!50, inner sep=1pt", "$\\neg$".to_string()),
            VertexKind::Star => ("", "$\\star$".to_string()),
            VertexKind::HBox(a) => {
                let text = if *a == a.ring().from_integer(-1) { String::new() } else { format!("${a}$") };
                ("rectangle, draw, fill=yellow, minimum size=8pt, inner sep=1pt", text)
            }
        };
        let _ = writeln!(out, "  \\node[{style}] (v{v}) at ({x:.1}, {y:.1}) {{{text}}};");
    }
    for j in 0..d.n_outputs() {
        let _ = writeln!(out, "  \\node (out{j}) at ({right:.1}, {:.1}) {{$out_{{{j}}}$}};", -(j as f64));
    }
    for l in 0..d.loops() {
        let _ = writeln!(out, "  \\draw ({:.1}, 1.0) circle (0.2);", l as f64 * 0.6);
    }
    for (a, b) in d.wires() {
        if a == b {
            let _ = writeln!(out, "  \\draw ({}) to[loop above] ({});", node_name(*a), node_name(*b));
        } else {
            let _ = writeln!(out, "  \\draw ({}) -- ({});", node_name(*a), node_name(*b));
        }
    }
    out.push_str("\\end{tikzpicture}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingDescriptor;

    fn labelled() -> Diagram {
        let r = RingDescriptor::dyadic();
        Diagram::make_generator(VertexKind::HBox(r.from_integer(3)), 1, 1)
            .unwrap()
            .tensor(&Diagram::make_generator(VertexKind::Star, 0, 0).unwrap())
    }

    #[test]
    fn dot_has_every_piece() {
        let text = to_dot(&labelled());
        assert!(text.starts_with("graph zh {"));
        assert!(text.contains("v0 [shape=square"));
        assert!(text.contains("label=\"3\""));
        assert!(text.contains("v1 [shape=plaintext"));
        assert!(text.contains("in0 -- v0;") || text.contains("v0 -- in0;"));
        assert!(text.trim_end().ends_with('}'));
    }

    #[test]
    fn tikz_labels_inside_box() {
        let text = to_tikz(&labelled());
        assert!(text.contains("rectangle"));
        assert!(text.contains("{$3$}"));
    }

    #[test]
    fn deterministic() {
        assert_eq!(to_dot(&labelled()), to_dot(&labelled()));
        assert_eq!(to_tikz(&labelled()), to_tikz(&labelled()));
    }

    #[test]
    fn format_names() {
        assert_eq!("dot".parse::<Format>().unwrap(), Format::Dot);
        assert!("svg".parse::<Format>().is_err());
    }
}
