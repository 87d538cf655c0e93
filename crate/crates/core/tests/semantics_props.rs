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

mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{oracle_entries, random_diagram, random_with_signature, Shape};
use zhcalc::semantics::interpret;
use zhcalc::{Diagram, DiagramBuilder, Endpoint, Interpretation, Matrix, RingDescriptor, VertexKind};

fn dy() -> RingDescriptor {
    RingDescriptor::dyadic()
}

fn small() -> Shape {
    Shape { max_boundary: 3, max_vertices: 5, max_wires: 8, stars: true }
}

/// The same diagram with vertices renumbered, wires reordered and flipped.
fn scramble(d: &Diagram, rng: &mut impl Rng) -> Diagram {
    let n = d.vertices().len();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut kinds = vec![VertexKind::ZSpider; n];
    for (old, &new) in perm.iter().enumerate() {
        kinds[new] = d.vertex(old).clone();
    }
    let map = |e: Endpoint| match e {
        Endpoint::V(v) => Endpoint::V(perm[v]),
        other => other,
    };
    let mut wires: Vec<(Endpoint, Endpoint)> =
        d.wires().iter().map(|&(a, b)| if rng.gen_bool(0.5) { (map(a), map(b)) } else { (map(b), map(a)) }).collect();
    wires.shuffle(rng);
    Diagram::from_parts(kinds, wires, d.n_inputs(), d.n_outputs(), d.loops()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn agrees_with_brute_force(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_diagram(&mut rng, &dy(), Shape::default());
        let m = interpret(&d, &dy()).unwrap();
        let want = oracle_entries(&d, &dy().half().unwrap());
        prop_assert_eq!(m.entries(), &want[..]);
    }

    #[test]
    fn transpose_commutes(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_diagram(&mut rng, &dy(), small());
        prop_assert_eq!(interpret(&d.transpose(), &dy()).unwrap(), interpret(&d, &dy()).unwrap().transpose());
    }

    #[test]
    fn isomorphic_diagrams_agree(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_diagram(&mut rng, &dy(), small());
        let e = scramble(&d, &mut rng);
        prop_assert!(d.is_isomorphic(&e));
        prop_assert_eq!(interpret(&d, &dy()).unwrap(), interpret(&e, &dy()).unwrap());
    }

    #[test]
    fn tensor_and_compose(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (i, mid, o) = (rng.gen_range(0..=1), rng.gen_range(0..=2), rng.gen_range(0..=1));
        let a = random_with_signature(&mut rng, &dy(), small(), i, mid);
        let b = random_with_signature(&mut rng, &dy(), small(), mid, o);
        let c = random_with_signature(&mut rng, &dy(), small(), o, i);
        let [ma, mb, mc] = [&a, &b, &c].map(|d| interpret(d, &dy()).unwrap());
        prop_assert_eq!(interpret(&a.compose(&b).unwrap(), &dy()).unwrap(), mb.matmul(&ma).unwrap());
        prop_assert_eq!(interpret(&a.tensor(&c), &dy()).unwrap(), ma.kron(&mc).unwrap());
    }

    #[test]
    fn interchange_law(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = small();
        let (p, q, r, t) = (rng.gen_range(0..=1), rng.gen_range(0..=1), rng.gen_range(0..=1), rng.gen_range(0..=1));
        let a = random_with_signature(&mut rng, &dy(), s, 0, p);
        let c = random_with_signature(&mut rng, &dy(), s, p, q);
        let b = random_with_signature(&mut rng, &dy(), s, r, t);
        let d = random_with_signature(&mut rng, &dy(), s, t, 1);
        let lhs = a.tensor(&b).compose(&c.tensor(&d)).unwrap();
        let rhs = a.compose(&c).unwrap().tensor(&b.compose(&d).unwrap());
        prop_assert_eq!(interpret(&lhs, &dy()).unwrap(), interpret(&rhs, &dy()).unwrap());
    }
}

#[test]
fn grey_spider_from_white_and_hadamards() {
    for m in 0..=5 {
        for n in 0..=5 - m {
            let mut b = DiagramBuilder::new(m, n);
            let z = b.z();
            b.star();
            for i in 0..m {
                let h = b.h(dy().from_integer(-1));
                b.wire(Endpoint::In(i), h).wire(h, z);
            }
            for j in 0..n {
                let h = b.h(dy().from_integer(-1));
                b.wire(z, h).wire(h, Endpoint::Out(j));
            }
            let expanded = b.build().unwrap();
            let native = Diagram::make_generator(VertexKind::XSpider, m, n).unwrap();
            assert_eq!(interpret(&expanded, &dy()).unwrap(), interpret(&native, &dy()).unwrap(), "m={m} n={n}");
        }
    }
}

#[test]
fn closed_loop_is_two() {
    let d = Diagram::cup().compose(&Diagram::cap()).unwrap();
    assert_eq!(interpret(&d, &dy()).unwrap(), Matrix::from_integers(dy(), 0, 0, &[2]).unwrap());
}

#[test]
fn every_ring_matches_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for ring in [RingDescriptor::modular(3).unwrap(), RingDescriptor::root_two(), RingDescriptor::int()] {
        let interp = Interpretation::new(ring);
        for _ in 0..40 {
            let shape = Shape { stars: ring.has_half(), ..Shape::default() };
            let d = random_diagram(&mut rng, &ring, shape);
            let star = ring.half().unwrap_or_else(|| ring.one());
            assert_eq!(interp.interpret(&d).unwrap().entries(), oracle_entries(&d, &star).as_slice());
        }
    }
    let interp = Interpretation::sqrt2();
    let ring = RingDescriptor::root_two();
    for _ in 0..40 {
        let d = random_diagram(&mut rng, &ring, Shape::default());
        let star = ring.inv_sqrt2().unwrap();
        assert_eq!(interp.interpret(&d).unwrap().entries(), oracle_entries(&d, &star).as_slice());
    }
}
