//! Exhaustive checks of the arithmetic lemmas on cyclic quotients: the
//! terminal lemma, the fourfold gap lemma, the transfer lemma and its
//! fivefold lift, and the fivefold scans.
//!
//! Everything here works on integer residues: `sum_i {a_i k / r}` is carried
//! as `sum_i (a_i k mod r)`, i.e. scaled by `r`.

use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pool;
use crate::qarith::Rat;
use crate::quotient::{min_numerator_at_least, CyclicQuotient, MAX_INDEX};

/// `1/r(a_1, a_2, a_3, a_4)` together with the weight `e` of an equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TermTuple {
    pub r: u64,
    pub a: [u64; 4],
    pub e: u64,
}

impl TermTuple {
    pub fn new(r: u64, a: [u64; 4], e: u64) -> Result<TermTuple> {
        if r < 2 || r > MAX_INDEX {
            return Err(Error::Domain(format!("r = {r} must lie in [2, {MAX_INDEX}]")));
        }
        Ok(TermTuple {
            r,
            a: a.map(|x| x % r),
            e: e % r,
        })
    }

    pub fn from_signed(r: u64, a: [i64; 4], e: i64) -> Result<TermTuple> {
        if r < 2 || r > MAX_INDEX {
            return Err(Error::Domain(format!("r = {r} must lie in [2, {MAX_INDEX}]")));
        }
        let red = |x: i64| x.rem_euclid(r as i64) as u64;
        TermTuple::new(r, a.map(red), red(e))
    }

    /// `r * sum_i {a_i j / r}`.
    fn lhs(&self, j: u64) -> u64 {
        self.a.iter().map(|&a| a * j % self.r).sum()
    }

    /// `r * {e j / r}`.
    fn ej(&self, j: u64) -> u64 {
        self.e * j % self.r
    }
}

impl fmt::Display for TermTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a1, a2, a3, a4] = self.a;
        write!(f, "1/{}({a1},{a2},{a3},{a4}; e={})", self.r, self.e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TerminalVerdict {
    Ok,
    FailingJ { j: u64 },
    Gcd { detail: String },
}

impl TerminalVerdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, TerminalVerdict::Ok)
    }
}

fn identity_failure(t: &TermTuple) -> Option<u64> {
    (1..t.r).find(|&j| t.lhs(j) != t.ej(j) + j + t.r)
}

fn terminal_gcd_failure(t: &TermTuple) -> Option<String> {
    let r = t.r;
    for i in 0..3 {
        let g = t.a[i].gcd(&r);
        if g != 1 {
            return Some(format!("gcd(a{}, r) = {g}", i + 1));
        }
    }
    let (g4, ge) = (t.a[3].gcd(&r), t.e.gcd(&r));
    (g4 != ge).then(|| format!("gcd(a4, r) = {g4} but gcd(e, r) = {ge}"))
}

/// The identity `sum_i {j a_i / r} = {j e / r} + j/r + 1` for all
/// `j in [1, r-1]`, then the gcd side conditions. The smallest failing `j`
/// wins over a gcd failure.
pub fn terminal_hypothesis(t: &TermTuple) -> TerminalVerdict {
    if let Some(j) = identity_failure(t) {
        return TerminalVerdict::FailingJ { j };
    }
    match terminal_gcd_failure(t) {
        Some(detail) => TerminalVerdict::Gcd { detail },
        None => TerminalVerdict::Ok,
    }
}

/// Whether the six residues split into three pairs summing to 0 mod r.
fn pairs_to_zero(vals: &[u64], r: u64) -> bool {
    let Some((&first, rest)) = vals.split_first() else {
        return true;
    };
    (0..rest.len()).any(|i| {
        (first + rest[i]) % r == 0 && {
            let mut others = rest.to_vec();
            others.remove(i);
            pairs_to_zero(&others, r)
        }
    })
}

fn conclusion_holds(t: &TermTuple) -> bool {
    let r = t.r;
    if t.e.gcd(&r) > 1 {
        if t.a[3] != t.e {
            return false;
        }
        let [a1, a2, a3, _] = t.a;
        [(a1, a2, a3), (a2, a1, a3), (a3, a1, a2)]
            .iter()
            .any(|&(one, x, y)| one == 1 % r && (x + y) % r == 0)
    } else {
        let vals = [t.a[0], t.a[1], t.a[2], t.a[3], (r - t.e) % r, r - 1];
        pairs_to_zero(&vals, r)
    }
}

pub fn terminal_conclusion(t: &TermTuple) -> Result<bool> {
    match terminal_hypothesis(t) {
        TerminalVerdict::Ok => Ok(conclusion_holds(t)),
        v => Err(Error::Contract(format!("{t} does not satisfy the hypothesis: {v:?}"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminalScan {
    pub r_max: u64,
    /// Tuples satisfying the hypothesis.
    pub admissible: u64,
    pub counterexamples: Vec<TermTuple>,
}

fn terminal_slice(r: u64, a1: u64) -> (u64, Vec<TermTuple>) {
    let mut admissible = 0;
    let mut bad = Vec::new();
    if a1.gcd(&r) != 1 {
        return (0, bad);
    }
    for a2 in 1..r {
        for a3 in 1..r {
            for a4 in 0..r {
                for e in 0..r {
                    // j = 1 rules out almost everything
                    if a1 + a2 + a3 + a4 != e + 1 + r {
                        continue;
                    }
                    let t = TermTuple { r, a: [a1, a2, a3, a4], e };
                    if !terminal_hypothesis(&t).is_ok() {
                        continue;
                    }
                    admissible += 1;
                    if !conclusion_holds(&t) {
                        bad.push(t);
                    }
                }
            }
        }
    }
    (admissible, bad)
}

/// Every tuple with `r <= r_max` satisfying the hypothesis, checked against
/// the conclusion. Counterexamples come back sorted by `(r, a, e)`.
pub fn terminal_bruteforce(r_max: u64, jobs: usize) -> Result<TerminalScan> {
    if r_max < 2 {
        return Err(Error::Precondition("r_max must be at least 2".into()));
    }
    let tasks: Vec<(u64, u64)> = (2..=r_max).flat_map(|r| (1..r).map(move |a1| (r, a1))).collect();
    let parts: Vec<(u64, Vec<TermTuple>)> =
        pool::with_jobs(jobs, || tasks.par_iter().map(|&(r, a1)| terminal_slice(r, a1)).collect());
    let mut out = TerminalScan {
        r_max,
        admissible: 0,
        counterexamples: Vec::new(),
    };
    for (n, bad) in parts {
        out.admissible += n;
        out.counterexamples.extend(bad);
    }
    Ok(out)
}

/// `r * alpha_n` for `v = b / r`: `sum_i (n b_i mod r)`, a zero residue
/// counting as `r`.
pub fn alpha_numerator(r: u64, b: &[u64], n: u64) -> u64 {
    b.iter()
        .map(|&x| match x * n % r {
            0 => r,
            c => c,
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourfoldScan {
    pub r_max: u64,
    /// Tuples with `alpha_1` in `(11/6, 2)`.
    pub in_window: u64,
    pub counterexamples: Vec<FourfoldCounterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourfoldCounterexample {
    pub r: u64,
    pub b: [u64; 4],
    pub alpha1: Rat,
}

fn fourfold_one_r(r: u64) -> (u64, Vec<FourfoldCounterexample>) {
    let mut in_window = 0;
    let mut bad = Vec::new();
    for b1 in 1..r {
        for b2 in b1..r {
            for b3 in b2..r {
                for b4 in b3..r {
                    let s = b1 + b2 + b3 + b4;
                    if !(11 * r < 6 * s && s < 2 * r) {
                        continue;
                    }
                    // r is the exact denominator
                    if b1.gcd(&b2).gcd(&b3).gcd(&b4).gcd(&r) != 1 {
                        continue;
                    }
                    in_window += 1;
                    let b = [b1, b2, b3, b4];
                    if (2..r).all(|n| alpha_numerator(r, &b, n) >= s) {
                        bad.push(FourfoldCounterexample {
                            r,
                            b,
                            alpha1: Rat::ratio(s as i64, r as i64),
                        });
                    }
                }
            }
        }
    }
    (in_window, bad)
}

/// All `v in (0,1)^4`, `v_1 <= ... <= v_4`, with exact denominator `r <= r_max`
/// and `alpha_1 in (11/6, 2)` such that `alpha_n >= alpha_1` for every `n`.
/// `alpha_n` is `r`-periodic and `alpha_r = 4`, so `n in [2, r-1]` suffices.
pub fn fourfold_gap_scan(r_max: u64, jobs: usize) -> Result<FourfoldScan> {
    if r_max < 2 {
        return Err(Error::Precondition("r_max must be at least 2".into()));
    }
    let parts: Vec<(u64, Vec<FourfoldCounterexample>)> = pool::with_jobs(jobs, || {
        (2..=r_max).into_par_iter().map(fourfold_one_r).collect()
    });
    let mut out = FourfoldScan {
        r_max,
        in_window: 0,
        counterexamples: Vec::new(),
    };
    for (n, bad) in parts {
        out.in_window += n;
        out.counterexamples.extend(bad);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    Case1,
    Case2,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub ok: bool,
    pub detail: Option<String>,
    /// The offending `k` when a Gamma condition fails.
    pub k: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferConclusions {
    /// `2 a_4 = e` and `a_1 + a_2 != e` mod r.
    pub c1: bool,
    /// `gcd(e, r) >= 7`.
    pub c2: bool,
    /// `r | e k` for every `k` in Gamma.
    pub c3: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferReport {
    pub tuple: TermTuple,
    pub eps: Rat,
    pub gamma: Vec<u64>,
    pub hypothesis: HypothesisCheck,
    pub case_tag: CaseTag,
    pub conclusions: Option<TransferConclusions>,
    pub p: Option<u64>,
    pub q: Option<u64>,
    /// Smallest `k` in Gamma with `r` not dividing `e k`.
    pub k1: Option<u64>,
}

fn check_eps(eps: &Rat) -> Result<()> {
    if eps.is_negative() || eps.is_zero() || *eps >= Rat::ratio(1, 6) {
        return Err(Error::Domain(format!("eps = {eps} must lie in (0, 1/6)")));
    }
    Ok(())
}

/// Smallest integer `k` with `k / r >= 5/6 + eps`.
fn window_start(r: u64, eps: &Rat) -> u64 {
    let x = (Rat::ratio(5, 6) + eps).scale(r as i64).ceil();
    u64::try_from(x).unwrap_or(u64::MAX)
}

fn congruence_failure(t: &TermTuple) -> Option<String> {
    let r = t.r;
    let [a1, a2, a3, a4] = t.a;
    let e = t.e;
    if (a1 + a2 + a3 + a4 + r - e) % r != 1 % r {
        return Some("a1 + a2 + a3 + a4 - e is not 1 mod r".into());
    }
    let alt_a = (a1 + a2 + r - e) % r == 0;
    let alt_b = (2 * a4 + r - e) % r == 0;
    let alt_c = (2 * a1 + r - e) % r == 0 && e.gcd(&r) <= 2;
    (!(alt_a || alt_b || alt_c)).then(|| "none of the three congruence alternatives holds".into())
}

/// Gamma and the hypotheses of the transfer lemma, and the case split.
/// Gamma conditions are checked first so that a bad `k` is always reported.
pub fn transfer_classify(t: &TermTuple, eps: &Rat) -> Result<TransferReport> {
    check_eps(eps)?;
    let r = t.r;
    let start = window_start(r, eps);
    let mut gamma = Vec::new();
    let mut failure: Option<(String, Option<u64>)> = None;
    for k in 1..r {
        let s = t.lhs(k);
        let ek = t.ej(k);
        if s == ek + k {
            gamma.push(k);
            if k < start && failure.is_none() {
                failure = Some((format!("k = {k} in Gamma lies below the window"), Some(k)));
            }
        } else if s <= ek + r && failure.is_none() {
            failure = Some((format!("k = {k}: sum lies in ({{ek/r}} + k/r, {{ek/r}} + 1]"), Some(k)));
        }
    }
    if failure.is_none() {
        failure = terminal_gcd_failure(t)
            .or_else(|| congruence_failure(t))
            .map(|d| (d, None));
    }
    if failure.is_none() && gamma.is_empty() {
        failure = Some(("Gamma is empty".into(), None));
    }
    let mut report = TransferReport {
        tuple: *t,
        eps: eps.clone(),
        gamma,
        hypothesis: HypothesisCheck {
            ok: true,
            detail: None,
            k: None,
        },
        case_tag: CaseTag::Violated,
        conclusions: None,
        p: None,
        q: None,
        k1: None,
    };
    if let Some((detail, k)) = failure {
        report.hypothesis = HypothesisCheck {
            ok: false,
            detail: Some(detail),
            k,
        };
        return Ok(report);
    }
    report.k1 = report.gamma.iter().copied().find(|&k| t.ej(k) != 0);
    if report.k1.is_some() {
        report.case_tag = CaseTag::Case2;
        return Ok(report);
    }
    report.case_tag = CaseTag::Case1;
    let p = t.e.gcd(&r);
    report.p = Some(p);
    report.q = Some(r / p);
    let [a1, a2, _, a4] = t.a;
    report.conclusions = Some(TransferConclusions {
        c1: (2 * a4 + r - t.e) % r == 0 && (a1 + a2 + r - t.e) % r != 0,
        c2: p >= 7,
        c3: true,
    });
    Ok(report)
}

/// `1/r(a_1, a_2, a_3, a_4, r - e)` for a Case 2 report, with its mld checked
/// against `1 + k_1 / r`. A mismatch is a contract error.
pub fn lift_to_fivefold(report: &TransferReport) -> Result<CyclicQuotient> {
    let (CaseTag::Case2, Some(k1)) = (report.case_tag, report.k1) else {
        return Err(Error::Contract("lift needs a Case 2 report".into()));
    };
    let t = &report.tuple;
    let [a1, a2, a3, a4] = t.a;
    let x = CyclicQuotient::new(t.r, &[a1, a2, a3, a4, t.r - t.e])?;
    let want = Rat::one() + Rat::ratio(k1 as i64, t.r as i64);
    let got = x.mld();
    if got != want {
        return Err(Error::Contract(format!("mld of {x} is {got}, expected {want}")));
    }
    Ok(x)
}

/// All tuples with `r <= r_max` whose report for `eps` is Case 2. Tuples are
/// enumerated with `a_1, a_2, a_3` units; `e` is then forced by the sum
/// congruence.
pub fn case2_instances(r_max: u64, eps: &Rat, jobs: usize) -> Result<Vec<TransferReport>> {
    check_eps(eps)?;
    let tasks: Vec<(u64, u64)> = (2..=r_max)
        .flat_map(|r| (1..r).filter(move |a| a.gcd(&r) == 1).map(move |a1| (r, a1)))
        .collect();
    let parts: Vec<Vec<TransferReport>> = pool::with_jobs(jobs, || {
        tasks
            .par_iter()
            .map(|&(r, a1)| {
                let mut out = Vec::new();
                for a2 in (1..r).filter(|a| a.gcd(&r) == 1) {
                    for a3 in (1..r).filter(|a| a.gcd(&r) == 1) {
                        for a4 in 0..r {
                            let e = (a1 + a2 + a3 + a4 + r - 1) % r;
                            let t = TermTuple { r, a: [a1, a2, a3, a4], e };
                            if congruence_failure(&t).is_some() || terminal_gcd_failure(&t).is_some() {
                                continue;
                            }
                            let rep = transfer_classify(&t, eps).expect("eps checked");
                            if rep.case_tag == CaseTag::Case2 {
                                out.push(rep);
                            }
                        }
                    }
                }
                out
            })
            .collect()
    });
    Ok(parts.into_iter().flatten().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FivefoldCondition {
    #[serde(rename = "4a")]
    A,
    #[serde(rename = "4b")]
    B,
    #[serde(rename = "4c")]
    C,
}

impl std::str::FromStr for FivefoldCondition {
    type Err = Error;
    fn from_str(s: &str) -> Result<FivefoldCondition> {
        match s {
            "4a" => Ok(FivefoldCondition::A),
            "4b" => Ok(FivefoldCondition::B),
            "4c" => Ok(FivefoldCondition::C),
            _ => Err(Error::Parse(format!("unknown condition {s:?}; expected 4a, 4b or 4c"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FivefoldCandidate {
    pub r: u64,
    pub weights: [u64; 5],
    pub mld: Rat,
}

fn lex_min_scaling(r: u64, w: [u64; 5]) -> [u64; 5] {
    (1..r)
        .filter(|u| u.gcd(&r) == 1)
        .map(|u| w.map(|a| a * u % r))
        .min()
        .unwrap_or(w)
}

/// Five-dimensional quotients with `r <= r_max` satisfying the gcd
/// conditions, `gcd(sum a_i, r) = 1`, the chosen congruence (which fixes
/// `a_5`), and `mld in [11/6 + eps, 2)`. One representative per orbit of the
/// unit scalings, ordered by `r` then weights.
pub fn fivefold_scan(r_max: u64, eps: &Rat, cond: FivefoldCondition, jobs: usize) -> Result<Vec<FivefoldCandidate>> {
    check_eps(eps)?;
    if r_max < 2 {
        return Err(Error::Precondition("r_max must be at least 2".into()));
    }
    let low = Rat::ratio(11, 6) + eps;
    let parts: Vec<Vec<FivefoldCandidate>> = pool::with_jobs(jobs, || {
        (2..=r_max)
            .into_par_iter()
            .map(|r| {
                let floor = u64::try_from(low.scale(r as i64).ceil()).unwrap_or(u64::MAX);
                let units: Vec<u64> = (1..r).filter(|a| a.gcd(&r) == 1).collect();
                let mut out = Vec::new();
                for &a1 in &units {
                    for &a2 in &units {
                        for &a3 in &units {
                            for a4 in 0..r {
                                let a5 = match cond {
                                    FivefoldCondition::A => (2 * r - a1 - a2) % r,
                                    FivefoldCondition::B => (2 * r - 2 * a4) % r,
                                    FivefoldCondition::C => (2 * r - 2 * a1) % r,
                                };
                                let g4 = a4.gcd(&r);
                                if g4 != a5.gcd(&r) || (cond == FivefoldCondition::C && g4 > 2) {
                                    continue;
                                }
                                if (a1 + a2 + a3 + a4 + a5).gcd(&r) != 1 {
                                    continue;
                                }
                                let w = [a1, a2, a3, a4, a5];
                                if lex_min_scaling(r, w) != w {
                                    continue;
                                }
                                let Some((_, num)) = min_numerator_at_least(r, &w, floor) else {
                                    continue;
                                };
                                if num < 2 * r {
                                    out.push(FivefoldCandidate {
                                        r,
                                        weights: w,
                                        mld: Rat::ratio(num as i64, r as i64),
                                    });
                                }
                            }
                        }
                    }
                }
                out
            })
            .collect()
    });
    Ok(parts.into_iter().flatten().collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm35Check {
    pub holds: bool,
    /// Level `k`: the largest with `mu >= 60k + 100`.
    pub k: Option<u64>,
    pub detail: Option<String>,
}

/// The hypotheses of the special fivefold theorem for `X` at level `mu`:
/// `v_i in (0,1)`, `v_4 < 1/mu`, `v_5 > 1 - 1/mu`, `r` not dividing `n a_i`
/// for `n <= mu`, and `1 + (5k+6)/(6k+7) < mld = sum v_i < 2`.
pub fn thm35_hypotheses(x: &CyclicQuotient, mu: u64) -> Result<Thm35Check> {
    if x.dim() != 5 {
        return Err(Error::Domain(format!("expected a fivefold, got dimension {}", x.dim())));
    }
    if mu < 2 {
        return Err(Error::Precondition("mu must be at least 2".into()));
    }
    let fail = |k: Option<u64>, d: String| {
        Ok(Thm35Check {
            holds: false,
            k,
            detail: Some(d),
        })
    };
    if mu < 100 {
        return fail(None, format!("mu = {mu} is below 100, so no level k exists"));
    }
    let k = (mu - 100) / 60;
    let r = x.r();
    let w = x.weights();
    if let Some(i) = w.iter().position(|&a| a == 0) {
        return fail(Some(k), format!("v{} is 0", i + 1));
    }
    if (w[3] as u128) * (mu as u128) >= r as u128 {
        return fail(Some(k), "v4 window".into());
    }
    if ((r - w[4]) as u128) * (mu as u128) >= r as u128 {
        return fail(Some(k), "v5 window".into());
    }
    for (i, &a) in w.iter().enumerate() {
        // smallest n with r | n a is r / gcd(a, r)
        let n = r / a.gcd(&r);
        if n <= mu {
            return fail(Some(k), format!("divisibility at (n, i) = ({n}, {})", i + 1));
        }
    }
    let sum = Rat::ratio(w.iter().sum::<u64>() as i64, r as i64);
    let mld = x.mld();
    if mld != sum {
        return fail(Some(k), format!("mld {mld} differs from sum of v_i {sum}"));
    }
    let k_i = k as i64;
    let low = Rat::one() + Rat::ratio(5 * k_i + 6, 6 * k_i + 7);
    if !(mld > low && mld < 2) {
        return fail(Some(k), format!("mld {mld} outside ({low}, 2)"));
    }
    Ok(Thm35Check {
        holds: true,
        k: Some(k),
        detail: None,
    })
}
