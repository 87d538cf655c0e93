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

//! Exact, ring-generic ZH-calculus.
//!
//! Diagrams are open multigraphs built from Z-spiders, H-boxes, X-spiders,
//! X-NOT spiders and stars. They are interpreted as matrices over an exact
//! coefficient ring, rewritten with a catalogue of soundness-checked rules,
//! and compared by reduction to a canonical normal form.

pub mod circuits;
pub mod diagram;
pub mod document;
pub mod normalform;
pub mod render;
pub mod ring;
pub mod rules;
pub mod semantics;

pub use circuits::{circuit_to_diagram, circuits_equivalent, parse_circuit, Circuit, Gate};
pub use diagram::{Diagram, DiagramBuilder, DiagramError, Endpoint, VertexKind};
pub use document::DiagramDocument;
pub use normalform::{NormalForm, Trace};
pub use ring::{RingDescriptor, RingElement, RingError, RingKind};
pub use rules::{MatchSite, Params, RuleInstance, RuleSchema};
pub use semantics::{Interpretation, Matrix, StarMode};
