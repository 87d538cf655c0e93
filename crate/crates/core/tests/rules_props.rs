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
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{int, random_diagram, rewrite_pool, Shape};
use zhcalc::rules::{self, apply, find_matches, Params, SweepConfig, Tag, DEFAULT_MATCH_VERTEX_CAP};
use zhcalc::{Interpretation, RingDescriptor};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rewriting_preserves_the_interpretation(seed in any::<u64>()) {
        let ring = RingDescriptor::dyadic();
        let interp = Interpretation::new(ring);
        let pool = rewrite_pool(&ring);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let host = random_diagram(&mut rng, &ring, Shape { max_vertices: 6, max_wires: 10, ..Shape::default() });
        let before = interp.interpret(&host).unwrap();
        for rule in pool.choose_multiple(&mut rng, 80) {
            let sites = find_matches(&host, rule, DEFAULT_MATCH_VERTEX_CAP).unwrap();
            if let Some(site) = sites.choose(&mut rng) {
                let after = apply(&host, rule, site).unwrap();
                prop_assert_eq!(&interp.interpret(&after).unwrap(), &before, "{}", rule.name);
            }
        }
    }

    #[test]
    fn match_then_apply_inverse_restores(seed in any::<u64>()) {
        let ring = RingDescriptor::dyadic();
        let interp = Interpretation::new(ring);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pool = rewrite_pool(&ring);
        let host = random_diagram(&mut rng, &ring, Shape { max_vertices: 5, max_wires: 8, ..Shape::default() });
        let rule = pool.choose(&mut rng).unwrap();
        let sites = find_matches(&host, rule, DEFAULT_MATCH_VERTEX_CAP).unwrap();
        if let Some(site) = sites.first() {
            let once = apply(&host, rule, site).unwrap();
            let back = rule.reversed();
            let undo = find_matches(&once, &back, DEFAULT_MATCH_VERTEX_CAP).unwrap();
            prop_assert!(!undo.is_empty(), "{} cannot be undone", rule.name);
            let restored = apply(&once, &back, &undo[0]).unwrap();
            prop_assert_eq!(interp.interpret(&restored).unwrap(), interp.interpret(&host).unwrap());
        }
    }
}

#[test]
fn merged_rule_specializes_to_intro() {
    let ring = RingDescriptor::dyadic();
    let interp = Interpretation::new(ring);
    for a in -3..=3 {
        let merged = rules::instantiate("avgRenaud", &Params::ints(&ring, 0, 0, a, 0), &ring).unwrap();
        let intro = rules::instantiate("I", &Params::ints(&ring, 0, 0, a, 1), &ring).unwrap();
        let [ml, mr, il, ir] = [&merged.lhs, &merged.rhs, &intro.lhs, &intro.rhs].map(|d| interp.interpret(d).unwrap());
        assert!((ml == il && mr == ir) || (ml == ir && mr == il), "a={a}");
    }
}

#[test]
fn ortho_variants_are_sound() {
    for ring in [RingDescriptor::dyadic(), RingDescriptor::int(), RingDescriptor::modular(5).unwrap()] {
        let interp = Interpretation::new(ring);
        for name in ["o", "altO1", "altO2"] {
            let schema = rules::lookup(name).unwrap();
            let labels: Vec<_> = (-2..=2).map(|v| int(&ring, v)).collect();
            for p in schema.grid(&ring, 3, &labels) {
                assert!(schema.instantiate(&p, &ring).unwrap().is_sound(&interp).unwrap(), "{name} {p} over {ring}");
            }
        }
    }
}

#[test]
fn every_ruleset_sweeps_clean() {
    let cases = [
        Interpretation::new(RingDescriptor::dyadic()),
        Interpretation::new(RingDescriptor::int()),
        Interpretation::new(RingDescriptor::modular(3).unwrap()),
        Interpretation::sqrt2(),
    ];
    for interp in cases {
        for tag in Tag::ALL {
            let schemas = rules::catalog(Some(tag));
            for report in rules::sweep(&schemas, &SweepConfig::new(interp, 2)) {
                assert!(report.passed(), "{report:?}");
            }
        }
    }
}

#[test]
fn unknown_rule_is_reported() {
    assert!(rules::lookup("nope").is_err());
    assert!("core".parse::<Tag>().is_ok());
    assert!("bogus".parse::<Tag>().is_err());
}
