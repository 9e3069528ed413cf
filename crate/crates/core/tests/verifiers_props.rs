mod common;

use std::collections::BTreeSet;

use common::{gcd, mld_oracle, mld_oracle_rat, units};
use mldlab::verifiers::{self, CaseTag, FivefoldCondition, TermTuple, TerminalVerdict};
use mldlab::{CyclicQuotient, Rat};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn q(s: &str) -> Rat {
    s.parse().unwrap()
}

/// `sum_i {j a_i / r} - {j e / r} - j / r`, times `r`.
fn identity_gap(r: u64, a: &[u64; 4], e: u64, j: u64) -> i64 {
    let lhs: u64 = a.iter().map(|x| x * j % r).sum();
    lhs as i64 - (e * j % r) as i64 - j as i64
}

fn oracle_admissible(r: u64, a: &[u64; 4], e: u64) -> bool {
    (1..r).all(|j| identity_gap(r, a, e, j) == r as i64)
        && a[..3].iter().all(|&x| gcd(x, r) == 1)
        && gcd(a[3], r) == gcd(e, r)
}

fn tuple() -> impl Strategy<Value = (u64, [u64; 4], u64)> {
    (2u64..60).prop_flat_map(|r| (Just(r), [0..r, 0..r, 0..r, 0..r], 0..r))
}

#[test]
fn hypothesis_agrees_with_oracle_exhaustively() {
    for r in 2..=11u64 {
        for code in 0..r.pow(5) {
            let d: Vec<u64> = (0..5).map(|i| code / r.pow(i) % r).collect();
            let a = [d[0], d[1], d[2], d[3]];
            let t = TermTuple::new(r, a, d[4]).unwrap();
            let v = verifiers::terminal_hypothesis(&t);
            assert_eq!(v.is_ok(), oracle_admissible(r, &a, d[4]), "{t}: {v:?}");
            if let TerminalVerdict::FailingJ { j } = v {
                assert!((1..j).all(|i| identity_gap(r, &a, d[4], i) == r as i64));
                assert_ne!(identity_gap(r, &a, d[4], j), r as i64);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn admissible_tuples_satisfy_the_identity((r, a, e) in tuple()) {
        let t = TermTuple::new(r, a, e).unwrap();
        if verifiers::terminal_hypothesis(&t).is_ok() {
            for j in 1..r {
                prop_assert_eq!(identity_gap(r, &a, e, j), r as i64);
            }
            prop_assert!(verifiers::terminal_conclusion(&t).unwrap());
        } else {
            prop_assert!(verifiers::terminal_conclusion(&t).is_err());
        }
    }

    #[test]
    fn paired_tuples_are_terminal(r in 2u64..200, i in 0usize..200, e in 0u64..200) {
        // 1/r(a, -a, 1, e; e): the residues pair off as (a,-a), (1,-1), (e,-e).
        let us = units(r);
        let a = us[i % us.len()];
        let e = e % r;
        let t = TermTuple::new(r, [a, r - a, 1, e], e).unwrap();
        prop_assert_eq!(verifiers::terminal_hypothesis(&t), TerminalVerdict::Ok);
        prop_assert!(verifiers::terminal_conclusion(&t).unwrap());
    }

    #[test]
    fn transfer_classify_is_total((r, a, e) in tuple(), eps_den in 7i64..1000) {
        let t = TermTuple::new(r, a, e).unwrap();
        let eps = Rat::ratio(1, eps_den);
        let rep = verifiers::transfer_classify(&t, &eps).unwrap();
        let gamma: Vec<u64> = (1..r).filter(|&k| identity_gap(r, &a, e, k) == 0).collect();
        prop_assert_eq!(&rep.gamma, &gamma);
        match rep.case_tag {
            CaseTag::Violated => {
                prop_assert!(!rep.hypothesis.ok);
                prop_assert!(rep.hypothesis.detail.is_some());
                if let Some(k) = rep.hypothesis.k {
                    prop_assert!((1..r).contains(&k));
                }
                prop_assert!(rep.conclusions.is_none() && rep.k1.is_none());
            }
            CaseTag::Case1 => {
                prop_assert!(rep.hypothesis.ok);
                prop_assert!(gamma.iter().all(|k| e * k % r == 0));
                let p = gcd(e, r);
                prop_assert_eq!((rep.p, rep.q), (Some(p), Some(r / p)));
                prop_assert!(rep.conclusions.as_ref().is_some_and(|c| c.c3));
            }
            CaseTag::Case2 => {
                prop_assert!(rep.hypothesis.ok);
                let k1 = gamma.iter().copied().find(|k| e * k % r != 0);
                prop_assert!(k1.is_some());
                prop_assert_eq!(rep.k1, k1);
            }
        }
        if rep.hypothesis.ok {
            // the window condition, re-checked by cross-multiplication
            for &k in &gamma {
                prop_assert!(Rat::ratio(k as i64, r as i64) >= Rat::ratio(5, 6) + eps.clone());
            }
            for k in (1..r).filter(|k| !gamma.contains(k)) {
                prop_assert!(identity_gap(r, &a, e, k) + k as i64 > r as i64);
            }
        }
    }

    #[test]
    fn alpha_numerator_matches_oracle(r in 2u64..80, b in [1u64..80, 1u64..80, 1u64..80, 1u64..80], n in 1u64..200) {
        let b = b.map(|x| x % r);
        let want: u64 = b.iter().map(|x| r + x * n - r * (x * n).div_ceil(r)).sum();
        prop_assert_eq!(verifiers::alpha_numerator(r, &b, n), want);
    }
}

#[test]
fn lifts_have_the_predicted_mld() {
    for eps in ["1/12", "1/100"] {
        let reps = verifiers::case2_instances(30, &q(eps), 0).unwrap();
        assert!(!reps.is_empty());
        for rep in &reps {
            let x = verifiers::lift_to_fivefold(rep).unwrap();
            let TermTuple { r, a, e } = rep.tuple;
            let w = [a[0], a[1], a[2], a[3], r - e];
            assert_eq!(x.weights(), w);
            let k1 = rep.k1.unwrap();
            assert_eq!(mld_oracle_rat(r, &w), Rat::one() + Rat::ratio(k1 as i64, r as i64), "{}", rep.tuple);
        }
    }
}

#[test]
fn lift_rejects_other_cases() {
    let mut saw = BTreeSet::new();
    for r in 7..=20u64 {
        for a4 in 0..r {
            for e in 0..r {
                let t = TermTuple::new(r, [1, r - 1, 1, a4], e).unwrap();
                let rep = verifiers::transfer_classify(&t, &q("1/100")).unwrap();
                if rep.case_tag != CaseTag::Case2 {
                    saw.insert(format!("{:?}", rep.case_tag));
                    assert!(verifiers::lift_to_fivefold(&rep).is_err());
                }
            }
        }
    }
    assert!(saw.contains("Violated"));
}

#[test]
fn fivefold_candidates_are_complete_and_correct() {
    let eps = q("1/100");
    let low = Rat::ratio(11, 6) + eps.clone();
    for cond in [FivefoldCondition::A, FivefoldCondition::B, FivefoldCondition::C] {
        let got: BTreeSet<(u64, [u64; 5])> = verifiers::fivefold_scan(11, &eps, cond, 0)
            .unwrap()
            .into_iter()
            .map(|c| {
                assert_eq!(c.mld, mld_oracle_rat(c.r, &c.weights));
                (c.r, c.weights)
            })
            .collect();
        let mut want = BTreeSet::new();
        for r in 2..=11u64 {
            let us = units(r);
            for &a1 in &us {
                for &a2 in &us {
                    for &a3 in &us {
                        for a4 in 0..r {
                            let a5 = match cond {
                                FivefoldCondition::A => (3 * r - a1 - a2) % r,
                                FivefoldCondition::B => (3 * r - 2 * a4) % r,
                                FivefoldCondition::C => (3 * r - 2 * a1) % r,
                            };
                            let w = [a1, a2, a3, a4, a5];
                            if gcd(a4, r) != gcd(a5, r) || (cond == FivefoldCondition::C && gcd(a4, r) > 2) {
                                continue;
                            }
                            if gcd(w.iter().sum(), r) != 1 {
                                continue;
                            }
                            let m = mld_oracle_rat(r, &w);
                            if !(m >= low && m < 2) {
                                continue;
                            }
                            let rep = us.iter().map(|u| w.map(|x| x * u % r)).min().unwrap();
                            want.insert((r, rep));
                        }
                    }
                }
            }
        }
        assert_eq!(got, want, "{cond:?}");
    }
}

#[test]
fn fourfold_scan_small_r_has_no_counterexamples() {
    let scan = verifiers::fourfold_gap_scan(30, 0).unwrap();
    assert!(scan.counterexamples.is_empty());
    assert!(scan.in_window > 0);
}

/// Structured random search for quotients meeting every hypothesis of the
/// special fivefold theorem at mu = 100. Anything found is validated against
/// the oracle; the count is reported, not asserted.
#[test]
fn thm35_search_harness() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(35);
    let mu = 100u64;
    let (mut window, mut found) = (0u64, 0u64);
    for _ in 0..200_000 {
        let r: u64 = rng.gen_range(1000..5000);
        let w = [
            rng.gen_range(1..r / 26),
            rng.gen_range(r * 7 / 22..r / 3),
            rng.gen_range(r * 11 / 23..r / 2),
            rng.gen_range(1..r.div_ceil(mu)),
            rng.gen_range(r - r / mu + 1..r),
        ];
        let s: u64 = w.iter().sum();
        if !(7 * s > 13 * r && s < 2 * r) {
            continue;
        }
        window += 1;
        let x = CyclicQuotient::new(r, &w).unwrap();
        let check = verifiers::thm35_hypotheses(&x, mu).unwrap();
        assert_eq!(check.k, Some(0));
        if check.holds {
            found += 1;
            assert_eq!(mld_oracle(r, &w).0, s);
            assert!(w.iter().all(|&a| r / gcd(a, r) > mu));
            assert!(w[3] * mu < r && (r - w[4]) * mu < r);
        }
    }
    assert!(window > 0);
    println!("thm35 search: {window} samples in the window, {found} satisfy every hypothesis");
}

#[test]
fn thm35_rejects_by_reason() {
    let x = CyclicQuotient::new(1000, &[10, 300, 480, 5, 999]).unwrap();
    let c = verifiers::thm35_hypotheses(&x, 100).unwrap();
    assert!(!c.holds);
    assert_eq!(c.detail.as_deref(), Some("divisibility at (n, i) = (100, 1)"));
    let x = CyclicQuotient::new(1009, &[10, 300, 480, 50, 1000]).unwrap();
    assert_eq!(verifiers::thm35_hypotheses(&x, 100).unwrap().detail.as_deref(), Some("v4 window"));
    assert_eq!(verifiers::thm35_hypotheses(&x, 160).unwrap().k, Some(1));
    assert!(verifiers::thm35_hypotheses(&CyclicQuotient::new(7, &[1, 2, 3]).unwrap(), 100).is_err());
}
