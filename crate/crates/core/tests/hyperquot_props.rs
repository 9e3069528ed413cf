mod common;

use std::collections::BTreeSet;

use common::{gcd, units};
use mldlab::hyperquot::{self, HyperquotientDatum, Identity5, MonomialSupport, TypeTag};
use mldlab::Rat;
use proptest::prelude::*;

/// Points `m / r` of `N^0`, as the numerators `m`, straight from the definition.
fn n0_oracle(r: u64, a: &[u64; 4]) -> BTreeSet<[u64; 4]> {
    let mut out = BTreeSet::new();
    for code in 0..(r + 1).pow(4) {
        let m: [u64; 4] = std::array::from_fn(|i| code / (r + 1).pow(i as u32) % (r + 1));
        if m.iter().all(|&x| x == 0 || x == r) {
            continue;
        }
        if (0..r).any(|j| (0..4).all(|i| m[i] % r == a[i] % r * j % r)) {
            out.insert(m);
        }
    }
    out
}

fn numerators(coords: &[Rat; 4], r: u64) -> [u64; 4] {
    coords.clone().map(|c| (c * Rat::from(r as i64)).floor().try_into().unwrap())
}

fn small() -> impl Strategy<Value = (u64, [u64; 4])> {
    (2u64..12).prop_flat_map(|r| (Just(r), [0..r, 0..r, 0..r, 0..r]))
}

/// A datum whose support is `count` random monomials of character `e`.
fn datum() -> impl Strategy<Value = HyperquotientDatum> {
    (2u64..16).prop_flat_map(|r| {
        ([0..r, 0..r, 0..r, 0..r], prop::collection::vec([0u64..4, 0..4, 0..4, 0..4], 1..5)).prop_filter_map(
            "support must be semi-invariant of a common character",
            move |(a, mons)| {
                let chi = |m: &[u64; 4]| (0..4).map(|i| m[i] * a[i]).sum::<u64>() % r;
                let e = chi(&mons[0]);
                let mons: Vec<[u64; 4]> = mons.into_iter().filter(|m| chi(m) == e && m.iter().any(|&x| x > 0)).collect();
                let s = MonomialSupport::new(mons).ok()?;
                HyperquotientDatum::new(r, a, e, s).ok()
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn n0_matches_definition((r, a) in small()) {
        let got = hyperquot::enumerate_n0(r, &a).unwrap();
        let set: BTreeSet<[u64; 4]> = got.iter().map(|w| numerators(&w.coords, r)).collect();
        prop_assert_eq!(set.len(), got.len());
        prop_assert_eq!(set, n0_oracle(r, &a));
        for w in &got {
            let m = numerators(&w.coords, r);
            let j = w.class_index;
            prop_assert!((0..4).all(|i| m[i] % r == a[i] * j % r));
            prop_assert!((1..j).all(|k| !(0..4).all(|i| m[i] % r == a[i] * k % r)));
        }
    }

    #[test]
    fn prime_is_an_involution_of_n0((r, a) in small()) {
        let got = hyperquot::enumerate_n0(r, &a).unwrap();
        let set: BTreeSet<[Rat; 4]> = got.iter().map(|w| w.coords.clone()).collect();
        for w in &got {
            let p = w.prime();
            prop_assert!(set.contains(&p));
            prop_assert_eq!(p.map(|c| Rat::one() - c), w.coords.clone());
        }
    }

    #[test]
    fn gap_is_congruent_to_class_index(d in datum()) {
        // w(f) = sum alpha_i {j a_i / r} is j e / r mod Z on every monomial.
        let shift = (d.a.iter().sum::<u64>() + d.r - d.e) % d.r;
        for w in hyperquot::enumerate_n0(d.r, &d.a).unwrap() {
            let gap = hyperquot::gap_value(&w.coords, &d).unwrap();
            let want = Rat::ratio((w.class_index * shift % d.r) as i64, d.r as i64);
            prop_assert_eq!(gap.frac(), want);
        }
    }

    #[test]
    fn psi_partition_is_exhaustive_and_disjoint(d in datum(), den in 7i64..200) {
        let eps = Rat::ratio(1, den);
        let part = hyperquot::psi_classify(&d, &eps, 1).unwrap();
        let n0 = hyperquot::enumerate_n0(d.r, &d.a).unwrap();
        prop_assert_eq!(part.total(), n0.len());
        let low = Rat::ratio(5, 6) + eps;
        let psi1: BTreeSet<[Rat; 4]> = part.psi1.iter().map(|c| c.weight.coords.clone()).collect();
        for c in &part.psi1 {
            prop_assert!(c.weight.primitive && c.gap >= low && c.gap < 1);
        }
        for c in &part.psi2 {
            prop_assert!(!psi1.contains(&c.weight.coords));
            prop_assert!(psi1.contains(&c.weight.prime()));
        }
        for c in &part.rest {
            prop_assert!(!psi1.contains(&c.weight.coords) && !psi1.contains(&c.weight.prime()));
        }
        let all: BTreeSet<[Rat; 4]> = part.psi1.iter().chain(&part.psi2).chain(&part.rest).map(|c| c.weight.coords.clone()).collect();
        prop_assert_eq!(all.len(), n0.len());
        for c in &part.outside_box {
            prop_assert!(c.weight.coords.iter().any(|x| *x > 1));
            prop_assert!(c.gap >= low && c.gap < 1);
        }
    }

    #[test]
    fn support_weight_of_union_is_min(
        w in [0i64..12, 0i64..12, 0i64..12, 0i64..12],
        s in prop::collection::vec([0u64..5, 0..5, 0..5, 0..5], 1..5),
        t in prop::collection::vec([0u64..5, 0..5, 0..5, 0..5], 1..5),
    ) {
        let w = w.map(|x| Rat::ratio(x, 6));
        let (Ok(s), Ok(t)) = (MonomialSupport::new(s), MonomialSupport::new(t)) else { return Ok(()) };
        let u = s.union(&t).unwrap();
        let ws = hyperquot::support_weight(&w, &s).unwrap();
        let wt = hyperquot::support_weight(&w, &t).unwrap();
        prop_assert_eq!(hyperquot::support_weight(&w, &u).unwrap(), ws.min(wt));
    }

    #[test]
    fn datum_json_round_trip(d in datum()) {
        let text = serde_json::to_string(&d).unwrap();
        prop_assert_eq!(HyperquotientDatum::from_json(&text).unwrap(), d);
    }

    #[test]
    fn type_matches_survive_swapping_the_last_pair(r in 2u64..30, a in [0u64..30, 0..30, 0..30, 0..30], e in 0u64..30) {
        let tags = |a: &[u64; 4]| -> BTreeSet<TypeTag> {
            hyperquot::classify_type_all(r, a, e).unwrap().into_iter().map(|m| m.tag).collect()
        };
        prop_assert_eq!(tags(&a), tags(&[a[0], a[1], a[3], a[2]]));
    }
}

#[test]
fn datum_rejects_unknown_fields() {
    let ok = r#"{"r":5,"a":[1,4,2,3],"e":0,"support":[[1,1,0,0]]}"#;
    assert!(HyperquotientDatum::from_json(ok).is_ok());
    let extra = r#"{"r":5,"a":[1,4,2,3],"e":0,"support":[[1,1,0,0]],"f":1}"#;
    assert!(HyperquotientDatum::from_json(extra).is_err());
    assert!(HyperquotientDatum::from_json(r#"{"r":1,"a":[0,0,0,0],"e":0,"support":[[1,0,0,0]]}"#).is_err());
}

#[test]
fn type_1a_matches_exactly_the_paired_tuples() {
    for r in 2..=13u64 {
        let us = units(r);
        for code in 0..r.pow(4) {
            let a: [u64; 4] = std::array::from_fn(|i| code / r.pow(i as u32) % r);
            let want = us.iter().any(|&u| {
                let p = [u, (r - u) % r];
                ((a[0], a[1]) == (p[0], p[1]) || (a[0], a[1]) == (p[1], p[0]))
                    && ((a[2], a[3]) == (1 % r, 0) || (a[2], a[3]) == (0, 1 % r))
            });
            let got = hyperquot::classify_type_all(r, &a, 0)
                .unwrap()
                .iter()
                .any(|m| m.tag == TypeTag::T1a);
            assert_eq!(got, want, "r={r} a={a:?}");
        }
    }
}

/// Tuples passing the identity, and how many of them the type list names
/// up to a unit multiple.
#[test]
fn identity5_review_scan() {
    let (mut passing, mut isolated, mut named) = (0u64, 0u64, 0u64);
    for r in 2..=13u64 {
        for code in 0..r.pow(5) {
            let d: Vec<u64> = (0..5).map(|i| code / r.pow(i) % r).collect();
            let a = [d[0], d[1], d[2], d[3]];
            let ok = hyperquot::identity5_check(r, &a, d[4]).unwrap() == Identity5::Ok;
            let oracle = (1..r).all(|j| a.iter().map(|x| x * j % r).sum::<u64>() == d[4] * j % r + j + r);
            assert_eq!(ok, oracle);
            if ok {
                passing += 1;
                if a[..3].iter().all(|&x| gcd(x, r) == 1) {
                    isolated += 1;
                    named += u64::from(units(r).iter().any(|&u| {
                        hyperquot::classify_type(r, &a.map(|x| x * u % r), d[4] * u % r).unwrap().is_some()
                    }));
                }
            }
        }
    }
    assert!(passing > 0);
    println!("identity5 scan r <= 13: {passing} tuples pass, {isolated} with a_1, a_2, a_3 units, {named} of those match a listed type after a unit rescaling");
}
