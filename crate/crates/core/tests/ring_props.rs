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

use proptest::prelude::*;
use zhcalc::ring::Dyadic;
use zhcalc::{RingDescriptor, RingElement};

fn rings() -> Vec<RingDescriptor> {
    vec![
        RingDescriptor::dyadic(),
        RingDescriptor::int(),
        RingDescriptor::root_two(),
        RingDescriptor::modular(7).unwrap(),
        RingDescriptor::modular(5).unwrap(),
    ]
}

/// `(a + b/sqrt2) / 2^k`, collapsed to whatever the ring can hold.
fn element(ring: &RingDescriptor, a: i64, b: i64, k: u32) -> RingElement {
    let mut x = ring.from_integer(a);
    if let Some(s) = ring.inv_sqrt2() {
        x = x.add(&ring.from_integer(b).mul(&s).unwrap()).unwrap();
    }
    for _ in 0..k {
        match x.halve() {
            Some(h) => x = h,
            None => break,
        }
    }
    x
}

fn arb() -> impl Strategy<Value = (usize, [(i64, i64, u32); 3])> {
    let one = (-50i64..50, -50i64..50, 0u32..6);
    (0..5usize, [one.clone(), one.clone(), one])
}

fn is_normal(x: &RingElement) -> bool {
    let ok = |d: &Dyadic| d.exponent() == 0 || d.numerator().bit(0);
    match x {
        RingElement::Dyadic(d) => ok(d),
        RingElement::RootTwoDyadic(r) => ok(&r.a) && ok(&r.b),
        _ => true,
    }
}

proptest! {
    #[test]
    fn ring_axioms((ri, t) in arb()) {
        let ring = rings()[ri];
        let [x, y, z] = t.map(|(a, b, k)| element(&ring, a, b, k));
        let add = |p: &RingElement, q: &RingElement| p.add(q).unwrap();
        let mul = |p: &RingElement, q: &RingElement| p.mul(q).unwrap();
        prop_assert_eq!(add(&add(&x, &y), &z), add(&x, &add(&y, &z)));
        prop_assert_eq!(mul(&mul(&x, &y), &z), mul(&x, &mul(&y, &z)));
        prop_assert_eq!(add(&x, &y), add(&y, &x));
        prop_assert_eq!(mul(&x, &y), mul(&y, &x));
        prop_assert_eq!(mul(&x, &add(&y, &z)), add(&mul(&x, &y), &mul(&x, &z)));
        prop_assert_eq!(add(&x, &ring.zero()), x.clone());
        prop_assert_eq!(mul(&x, &ring.one()), x.clone());
        prop_assert!(add(&x, &x.neg()).is_zero());
    }

    #[test]
    fn two_is_not_a_zero_divisor((ri, t) in arb()) {
        let ring = rings()[ri];
        let x = element(&ring, t[0].0, t[0].1, t[0].2);
        let doubled = ring.from_integer(2).mul(&x).unwrap();
        prop_assert_eq!(doubled.halve(), Some(x));
    }

    #[test]
    fn results_stay_normalized((ri, t) in arb()) {
        let ring = rings()[ri];
        let [x, y, _] = t.map(|(a, b, k)| element(&ring, a, b, k));
        for v in [x.add(&y).unwrap(), x.mul(&y).unwrap(), x.sub(&y).unwrap(), x.neg(), x.double()] {
            prop_assert!(is_normal(&v), "{:?}", v);
            let text = v.to_string();
            prop_assert_eq!(ring.parse_element(&text).unwrap(), v);
        }
    }

    #[test]
    fn dyadic_construction_normalizes(num in -1000i64..1000, exp in 0u32..12) {
        let d = Dyadic::new(num.into(), exp);
        prop_assert!(d.exponent() == 0 || d.numerator().bit(0));
        prop_assert_eq!(Dyadic::new(d.numerator().clone(), d.exponent()), d);
    }
}

#[test]
fn halving_depends_on_the_ring() {
    assert_eq!(RingDescriptor::int().from_integer(3).halve(), None);
    assert!(RingDescriptor::int().from_integer(4).halve().is_some());
    let m = RingDescriptor::modular(5).unwrap();
    assert_eq!(m.from_integer(3).halve().unwrap(), m.from_integer(4));
}
