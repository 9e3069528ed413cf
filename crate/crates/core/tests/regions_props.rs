mod common;

use common::{floor_sum_holds, Frac};
use mldlab::regions::{self, BoxUnion, Certificate, Engine, FloorConstraint, GammaSet};
use mldlab::Rat;
use proptest::prelude::*;

fn frac() -> impl Strategy<Value = Frac> {
    (1i128..=240).prop_flat_map(|q| (0..q).prop_map(move |p| Frac::new(p, q)))
}

fn constraint() -> impl Strategy<Value = (u64, u64)> {
    (2u64..=60).prop_flat_map(|n| (Just(n), 1..=n))
}

fn fc((n, c): (u64, u64)) -> FloorConstraint {
    FloorConstraint::new(n, c).unwrap()
}

fn ordered(v: &[Frac; 3]) -> bool {
    v[0].le(&v[1]) && v[1].le(&v[2])
}

fn rat_frac(r: &Rat) -> Frac {
    Frac::new(r.numer().try_into().unwrap(), r.denom().try_into().unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3_000))]

    #[test]
    fn refinement_is_sound(
        cs in prop::collection::vec(constraint(), 1..4),
        v in [frac(), frac(), frac()],
        ord in any::<bool>(),
    ) {
        let order: Vec<FloorConstraint> = cs.iter().copied().map(fc).collect();
        let region = Engine::default().refine_all(&BoxUnion::unit(ord), &order).unwrap();
        let pt = v.map(Frac::to_rat);
        let want = (!ord || ordered(&v)) && cs.iter().all(|&(n, c)| floor_sum_holds(&v, n as i128, c as i128));
        prop_assert_eq!(region.contains(&pt), want);
    }

    #[test]
    fn verdict_ignores_order_and_ordering_flag(cs in prop::collection::vec(constraint(), 1..5), seed in any::<u64>()) {
        let engine = Engine::default();
        let order: Vec<FloorConstraint> = cs.iter().copied().map(fc).collect();
        let mut shuffled = order.clone();
        let n = shuffled.len();
        shuffled.rotate_left((seed as usize) % n);
        shuffled.swap(0, (seed as usize >> 8) % n);
        let a = engine.system_in_order(&BoxUnion::unit(true), &order).unwrap();
        let b = engine.system_in_order(&BoxUnion::unit(true), &shuffled).unwrap();
        let c = engine.system_in_order(&BoxUnion::unit(false), &order).unwrap();
        prop_assert_eq!(a.is_empty(), b.is_empty());
        prop_assert_eq!(a.is_empty(), c.is_empty());
        for cert in [&a, &b] {
            if let Some(p) = cert.witness() {
                let f = [rat_frac(&p[0]), rat_frac(&p[1]), rat_frac(&p[2])];
                prop_assert!(ordered(&f));
                prop_assert!(cs.iter().all(|&(n, c)| floor_sum_holds(&f, n as i128, c as i128)));
                prop_assert!(regions::witness_is_valid(p, &BoxUnion::unit(true), &order));
            }
        }
    }

    #[test]
    fn membership_is_permutation_symmetric((n, c) in constraint(), v in [frac(), frac(), frac()]) {
        let region = regions::constraint_refine(&BoxUnion::unit(false), fc((n, c))).unwrap();
        let base = region.contains(&v.map(Frac::to_rat));
        for p in [[1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0]] {
            let w = [v[p[0]], v[p[1]], v[p[2]]];
            prop_assert_eq!(region.contains(&w.map(Frac::to_rat)), base);
        }
    }

    #[test]
    fn gamma_json_round_trip(cs in prop::collection::vec(constraint(), 0..12)) {
        let g = GammaSet::from_pairs(&cs).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        prop_assert_eq!(GammaSet::from_json(&text).unwrap(), g);
    }
}

/// `Gamma(I)` straight from the definition.
fn oracle_gamma(a: &Rat, b: Option<&Rat>, n_max: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for n in 2..=n_max {
        for c in 1..=n {
            let nr = Rat::int(n as i64);
            let ok = match b {
                Some(b) => b.scale(c as i64 - 1) + Rat::one() <= nr && nr <= a.scale(c as i64) - Rat::one(),
                None => c == 1 && nr <= a - &Rat::one(),
            };
            if ok {
                out.push((n, c));
            }
        }
    }
    out
}

#[test]
fn gamma_matches_definition() {
    for iv in regions::s_grid_intervals() {
        let g = regions::gamma_of_interval(&iv.lo, iv.hi.as_ref(), 150).unwrap();
        let got: Vec<(u64, u64)> = g.iter().map(|f| (f.n, f.c)).collect();
        assert_eq!(got, oracle_gamma(&iv.lo, iv.hi.as_ref(), 150), "{}", iv.label);
    }
}

#[test]
fn s_grid_tiles_the_range_above_25_over_4() {
    let mut ivs = regions::s_grid_intervals();
    assert_eq!(ivs.len(), 41);
    ivs.sort_by(|x, y| x.lo.cmp(&y.lo));
    assert_eq!(ivs[0].lo, Rat::ratio(25, 4));
    for w in ivs.windows(2) {
        assert_eq!(w[0].hi.as_ref(), Some(&w[1].lo));
    }
    assert!(ivs.last().unwrap().hi.is_none());
}

#[test]
fn s_grid_is_empty_with_n_up_to_150() {
    let verdicts = regions::verify_s_grid(150).unwrap();
    assert_eq!(verdicts.len(), 41);
    for v in &verdicts {
        assert!(v.certificate.is_empty(), "{} has witness {:?}", v.interval.label, v.certificate.witness());
    }
}

#[test]
fn s_grid_witnesses_at_100_are_genuine() {
    for v in regions::verify_s_grid(100).unwrap() {
        if let Some(p) = v.certificate.witness() {
            let f = [rat_frac(&p[0]), rat_frac(&p[1]), rat_frac(&p[2])];
            assert!(ordered(&f));
            for c in &v.certificate.constraints {
                assert!(floor_sum_holds(&f, c.n as i128, c.c as i128), "{}: ({}, {})", v.interval.label, c.n, c.c);
            }
            // the point is excluded once larger n are admitted
            let wide = regions::gamma_of_interval(&v.interval.lo, v.interval.hi.as_ref(), 150).unwrap();
            assert!(wide.iter().any(|c| !floor_sum_holds(&f, c.n as i128, c.c as i128)));
        }
    }
}

#[test]
fn start_of_the_induction_lands_in_v4() {
    // V(Gamma(6, 6 + 1/4)') with n <= 100 lies inside V_4.
    let engine = Engine::default();
    let gamma = regions::gamma_of_interval(&Rat::int(6), Some(&Rat::ratio(25, 4)), 100).unwrap();
    let region = engine.refine_all(&BoxUnion::unit(true), &gamma.to_vec()).unwrap();
    assert!(!region.is_empty());
    assert!(region.is_subset_of(&regions::vl_box(4).unwrap()));
}

#[test]
fn vl_steps_hold() {
    let engine = Engine::default();
    for l in 4..=12 {
        let step = regions::verify_vl_step_with(&engine, l).unwrap();
        assert!(step.equal, "l = {l}: {:?}", step.counterexample);
    }
}

#[test]
fn cases_are_empty_and_cover_the_region() {
    let engine = Engine::default();
    for k in 4..=8 {
        for c in 1..=10 {
            assert!(regions::verify_case_with(&engine, k, c).unwrap().is_empty(), "k = {k}, case {c}");
        }
        assert_eq!(regions::case_region_covers(&engine, k).unwrap(), None, "k = {k}");
    }
}

#[test]
fn certificate_json_round_trip() {
    let g = GammaSet::from_pairs(&[(2, 1), (3, 1), (5, 2)]).unwrap();
    for initial in [BoxUnion::unit(true), BoxUnion::unit(false)] {
        let cert = regions::system_empty(&initial, &g).unwrap();
        let text = serde_json::to_string(&cert).unwrap();
        assert_eq!(serde_json::from_str::<Certificate>(&text).unwrap(), cert);
    }
}

#[test]
fn box_guard_trips() {
    let gamma = regions::gamma_of_interval(&Rat::int(11), Some(&Rat::int(13)), 100).unwrap();
    let err = Engine::with_limit(2).system(&BoxUnion::unit(true), &gamma).unwrap_err();
    assert!(matches!(err, mldlab::Error::ResourceLimit { .. }));
}
