//! Exact emptiness and equality checks for floor-sum regions in `[0,1)^3`.
//!
//! A constraint `(n, c)` cuts out `V(n, c) = { v : sum_i floor(n v_i) = n-1-c }`.
//! Regions are unions of half-open rational boxes; a constraint is applied by
//! splitting every box at the multiples of `1/n` it contains and keeping the
//! pieces on which the floor sum is right. With `ordered` set, a union only
//! stands for its points with `v_1 <= v_2 <= v_3`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pool;
use crate::qarith::Rat;

/// Default ceiling on the number of boxes a refinement may produce.
pub const DEFAULT_BOX_LIMIT: usize = 1_000_000;

/// Environment variable overriding [`DEFAULT_BOX_LIMIT`].
pub const BOX_LIMIT_ENV: &str = "MLDLAB_BOX_LIMIT";

/// Largest `n` accepted in a constraint.
pub const MAX_CONSTRAINT_N: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "(u64, u64)", try_from = "(u64, u64)")]
pub struct FloorConstraint {
    pub n: u64,
    pub c: u64,
}

impl FloorConstraint {
    pub fn new(n: u64, c: u64) -> Result<FloorConstraint> {
        if n < 2 || c < 1 {
            return Err(Error::Domain(format!("constraint ({n},{c}) needs n >= 2, c >= 1")));
        }
        if n > MAX_CONSTRAINT_N {
            return Err(Error::Domain(format!("constraint n = {n} exceeds {MAX_CONSTRAINT_N}")));
        }
        Ok(FloorConstraint { n, c })
    }

    /// Required value of the floor sum; negative means the region is empty.
    pub fn target(&self) -> i64 {
        self.n as i64 - 1 - self.c as i64
    }

    pub fn holds_at(&self, v: &[Rat; 3]) -> bool {
        let n = BigInt::from(self.n);
        let sum: BigInt = v.iter().map(|x| (x.numer() * &n).div_floor(x.denom())).sum();
        sum == BigInt::from(self.target())
    }
}

impl From<FloorConstraint> for (u64, u64) {
    fn from(fc: FloorConstraint) -> (u64, u64) {
        (fc.n, fc.c)
    }
}

impl TryFrom<(u64, u64)> for FloorConstraint {
    type Error = Error;
    fn try_from((n, c): (u64, u64)) -> Result<FloorConstraint> {
        FloorConstraint::new(n, c)
    }
}

impl fmt::Display for FloorConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n, self.c)
    }
}

/// A finite set of constraints, iterated in ascending `(n, c)` order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GammaSet {
    pairs: BTreeSet<FloorConstraint>,
}

impl FromIterator<FloorConstraint> for GammaSet {
    fn from_iter<I: IntoIterator<Item = FloorConstraint>>(iter: I) -> GammaSet {
        GammaSet {
            pairs: iter.into_iter().collect(),
        }
    }
}

impl GammaSet {
    pub fn new() -> GammaSet {
        GammaSet::default()
    }

    pub fn from_pairs(pairs: &[(u64, u64)]) -> Result<GammaSet> {
        let pairs = pairs
            .iter()
            .map(|&(n, c)| FloorConstraint::new(n, c))
            .collect::<Result<_>>()?;
        Ok(GammaSet { pairs })
    }

    /// Parse a JSON array of `[n, c]` pairs.
    pub fn from_json(text: &str) -> Result<GammaSet> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn insert(&mut self, fc: FloorConstraint) {
        self.pairs.insert(fc);
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &FloorConstraint> {
        self.pairs.iter()
    }

    pub fn to_vec(&self) -> Vec<FloorConstraint> {
        self.pairs.iter().copied().collect()
    }

    pub fn restricted(&self, n_max: u64) -> GammaSet {
        GammaSet {
            pairs: self.pairs.iter().copied().filter(|fc| fc.n <= n_max).collect(),
        }
    }
}

/// `Gamma(I)` for the open interval `I = (a, b)`, `b = None` meaning `+inf`,
/// truncated at `n <= n_max`: all `(n, c)` with `n >= 2` and
/// `(c-1) b + 1 <= n <= c a - 1`; for unbounded `I` only `c = 1`,
/// `2 <= n <= a - 1`.
pub fn gamma_of_interval(a: &Rat, b: Option<&Rat>, n_max: u64) -> Result<GammaSet> {
    if *a <= 1 {
        return Err(Error::Domain(format!("interval start {a} must exceed 1")));
    }
    if n_max < 2 {
        return Err(Error::Precondition("n_max must be at least 2".into()));
    }
    let mut out = GammaSet::new();
    let Some(b) = b else {
        let top = (a - &Rat::one()).floor().to_u64().unwrap_or(u64::MAX).min(n_max);
        for n in 2..=top {
            out.insert(FloorConstraint::new(n, 1)?);
        }
        return Ok(out);
    };
    if b <= a {
        return Err(Error::EmptyInterval {
            lo: a.to_string(),
            hi: b.to_string(),
        });
    }
    let mut c = 1u64;
    loop {
        let low = (b.scale(c as i64 - 1) + Rat::one()).ceil().to_u64().unwrap_or(u64::MAX).max(2);
        if low > n_max {
            break;
        }
        let high = (a.scale(c as i64) - Rat::one()).floor();
        let high = high.to_u64().unwrap_or(0).min(n_max);
        for n in low..=high {
            out.insert(FloorConstraint::new(n, c)?);
        }
        c += 1;
    }
    Ok(out)
}

/// A half-open box `[lo_1, hi_1) x [lo_2, hi_2) x [lo_3, hi_3)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RatBox {
    pub lo: [Rat; 3],
    pub hi: [Rat; 3],
}

impl RatBox {
    pub fn new(lo: [Rat; 3], hi: [Rat; 3]) -> Result<RatBox> {
        for i in 0..3 {
            if lo[i].is_negative() || hi[i] > 1 || lo[i] > hi[i] {
                return Err(Error::Domain(format!(
                    "axis {i}: [{}, {}) not inside [0, 1]",
                    lo[i], hi[i]
                )));
            }
        }
        Ok(RatBox { lo, hi })
    }

    pub fn unit() -> RatBox {
        RatBox {
            lo: [Rat::zero(), Rat::zero(), Rat::zero()],
            hi: [Rat::one(), Rat::one(), Rat::one()],
        }
    }

    pub fn is_empty(&self) -> bool {
        (0..3).any(|i| self.lo[i] >= self.hi[i])
    }

    pub fn contains(&self, v: &[Rat; 3]) -> bool {
        (0..3).all(|i| self.lo[i] <= v[i] && v[i] < self.hi[i])
    }

    /// Greedy point of the box with `v_1 <= v_2 <= v_3`, if there is one.
    pub fn ordered_corner(&self) -> Option<[Rat; 3]> {
        let v1 = self.lo[0].clone();
        let v2 = self.lo[1].clone().max(v1.clone());
        let v3 = self.lo[2].clone().max(v2.clone());
        let p = [v1, v2, v3];
        (0..3).all(|i| p[i] < self.hi[i]).then_some(p)
    }

    /// Shrink to the bounding box of its ordered part. `None` when that part
    /// is empty.
    fn tightened(mut self) -> Option<RatBox> {
        if self.lo[0] > self.lo[1] {
            self.lo[1] = self.lo[0].clone();
        }
        if self.lo[1] > self.lo[2] {
            self.lo[2] = self.lo[1].clone();
        }
        if self.hi[1] > self.hi[2] {
            self.hi[1] = self.hi[2].clone();
        }
        if self.hi[0] > self.hi[1] {
            self.hi[0] = self.hi[1].clone();
        }
        (!self.is_empty()).then_some(self)
    }
}

impl fmt::Display for RatBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..3 {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "[{}, {})", self.lo[i], self.hi[i])?;
        }
        Ok(())
    }
}

/// A union of possibly overlapping boxes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxUnion {
    pub boxes: Vec<RatBox>,
    pub ordered: bool,
}

impl BoxUnion {
    pub fn new(boxes: Vec<RatBox>, ordered: bool) -> BoxUnion {
        let mut u = BoxUnion { boxes, ordered };
        u.normalize();
        u
    }

    pub fn unit(ordered: bool) -> BoxUnion {
        BoxUnion::new(vec![RatBox::unit()], ordered)
    }

    fn normalize(&mut self) {
        let ordered = self.ordered;
        let boxes = std::mem::take(&mut self.boxes);
        self.boxes = boxes
            .into_iter()
            .filter_map(|b| if ordered { b.tightened() } else { (!b.is_empty()).then_some(b) })
            .collect();
        self.boxes.sort();
        self.boxes.dedup();
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn contains(&self, v: &[Rat; 3]) -> bool {
        if self.ordered && !(v[0] <= v[1] && v[1] <= v[2]) {
            return false;
        }
        self.boxes.iter().any(|b| b.contains(v))
    }

    /// Deterministic point of the union: greedy ordered corner (or lower
    /// corner) of the first box.
    pub fn witness(&self) -> Option<[Rat; 3]> {
        let b = self.boxes.first()?;
        if self.ordered {
            b.ordered_corner()
        } else {
            Some(b.lo.clone())
        }
    }

    fn breakpoints(&self, other: &BoxUnion) -> [Vec<Rat>; 3] {
        let mut axes: [Vec<Rat>; 3] = Default::default();
        for b in self.boxes.iter().chain(&other.boxes) {
            for i in 0..3 {
                axes[i].push(b.lo[i].clone());
                axes[i].push(b.hi[i].clone());
            }
        }
        for a in axes.iter_mut() {
            a.sort();
            a.dedup();
        }
        axes
    }

    /// A point of `self` outside `other`, or `None` when `self` is a subset.
    /// Both unions are cut along their common breakpoints; membership is
    /// constant on every resulting cell, so one point per cell decides.
    pub fn point_outside(&self, other: &BoxUnion) -> Option<[Rat; 3]> {
        let ordered = self.ordered || other.ordered;
        let grid = self.breakpoints(other);
        for b in &self.boxes {
            let pieces: Vec<Vec<(Rat, Rat)>> = (0..3)
                .map(|i| {
                    let inner = grid[i].iter().filter(|x| **x > b.lo[i] && **x < b.hi[i]);
                    let mut cuts = vec![b.lo[i].clone()];
                    cuts.extend(inner.cloned());
                    cuts.push(b.hi[i].clone());
                    cuts.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect()
                })
                .collect();
            for x in &pieces[0] {
                for y in &pieces[1] {
                    for z in &pieces[2] {
                        let cell = RatBox {
                            lo: [x.0.clone(), y.0.clone(), z.0.clone()],
                            hi: [x.1.clone(), y.1.clone(), z.1.clone()],
                        };
                        let p = if ordered {
                            match cell.ordered_corner() {
                                Some(p) => p,
                                None => continue,
                            }
                        } else {
                            cell.lo.clone()
                        };
                        if !other.contains(&p) {
                            return Some(p);
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_subset_of(&self, other: &BoxUnion) -> bool {
        self.point_outside(other).is_none()
    }

    /// Set equality, checked as emptiness of both differences.
    pub fn set_eq(&self, other: &BoxUnion) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }
}

/// `floor(n * q)` for a rational in `[0, 1]`.
fn floor_scaled(q: &Rat, n: u64) -> i64 {
    (q.numer() * BigInt::from(n))
        .div_floor(q.denom())
        .to_i64()
        .expect("scaled box endpoint fits in i64")
}

/// Pieces of `[lo, hi)` on which `floor(n v)` is constant, with that value.
fn axis_pieces(lo: &Rat, hi: &Rat, n: u64) -> Vec<(i64, Rat, Rat)> {
    let first = floor_scaled(lo, n);
    // last integer f with f/n < hi
    let hi_scaled = hi.scale(n as i64);
    let last = hi_scaled.ceil().to_i64().expect("fits") - 1;
    (first..=last)
        .map(|f| {
            let a = Rat::ratio(f, n as i64).max(lo.clone());
            let b = Rat::ratio(f + 1, n as i64).min(hi.clone());
            (f, a, b)
        })
        .filter(|(_, a, b)| a < b)
        .collect()
}

/// Refinement engine; carries the box-count guard.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Engine {
    pub box_limit: usize,
}

impl Default for Engine {
    fn default() -> Engine {
        Engine {
            box_limit: DEFAULT_BOX_LIMIT,
        }
    }
}

impl Engine {
    pub fn with_limit(box_limit: usize) -> Engine {
        Engine { box_limit }
    }

    /// Default engine, honouring `MLDLAB_BOX_LIMIT` when it parses.
    pub fn from_env() -> Engine {
        std::env::var(BOX_LIMIT_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .map(Engine::with_limit)
            .unwrap_or_default()
    }

    /// `U ∩ V(n, c)`.
    pub fn refine(&self, u: &BoxUnion, fc: FloorConstraint) -> Result<BoxUnion> {
        let target = fc.target();
        let mut out = Vec::new();
        if target < 0 {
            return Ok(BoxUnion::new(out, u.ordered));
        }
        for b in &u.boxes {
            let px = axis_pieces(&b.lo[0], &b.hi[0], fc.n);
            let py = axis_pieces(&b.lo[1], &b.hi[1], fc.n);
            let pz = axis_pieces(&b.lo[2], &b.hi[2], fc.n);
            let Some(z0) = pz.first().map(|p| p.0) else {
                continue;
            };
            for x in &px {
                for y in &py {
                    let want = target - x.0 - y.0;
                    let Some(z) = usize::try_from(want - z0).ok().and_then(|i| pz.get(i)) else {
                        continue;
                    };
                    let cell = RatBox {
                        lo: [x.1.clone(), y.1.clone(), z.1.clone()],
                        hi: [x.2.clone(), y.2.clone(), z.2.clone()],
                    };
                    let cell = if u.ordered {
                        match cell.tightened() {
                            Some(c) => c,
                            None => continue,
                        }
                    } else {
                        cell
                    };
                    out.push(cell);
                    if out.len() > self.box_limit {
                        return Err(Error::ResourceLimit {
                            what: "box count",
                            limit: self.box_limit,
                        });
                    }
                }
            }
        }
        Ok(BoxUnion::new(out, u.ordered))
    }

    /// Apply every constraint of `gamma` in ascending `n`, stopping as soon
    /// as the region is empty.
    pub fn system(&self, initial: &BoxUnion, gamma: &GammaSet) -> Result<Certificate> {
        self.system_in_order(initial, &gamma.to_vec())
    }

    /// As [`Engine::system`], but in the caller's order.
    pub fn system_in_order(&self, initial: &BoxUnion, order: &[FloorConstraint]) -> Result<Certificate> {
        let mut region = initial.clone();
        let mut box_counts = Vec::with_capacity(order.len());
        let mut applied = 0;
        if !region.is_empty() {
            for fc in order {
                region = self.refine(&region, *fc)?;
                applied += 1;
                box_counts.push(region.len());
                if region.is_empty() {
                    break;
                }
            }
        }
        let verdict = match region.witness() {
            None => Verdict::Empty { prefix: applied },
            Some(point) => Verdict::Witness { point },
        };
        Ok(Certificate {
            initial_boxes: initial.len(),
            constraints: order.to_vec(),
            box_counts,
            verdict,
        })
    }

    pub fn refine_all(&self, initial: &BoxUnion, order: &[FloorConstraint]) -> Result<BoxUnion> {
        let mut region = initial.clone();
        for fc in order {
            if region.is_empty() {
                break;
            }
            region = self.refine(&region, *fc)?;
        }
        Ok(region)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// The first `prefix` constraints already leave nothing.
    Empty { prefix: usize },
    Witness { point: [Rat; 3] },
}

/// Record of one emptiness run: the constraints in application order, the
/// box count after each one that was applied, and the verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub initial_boxes: usize,
    pub constraints: Vec<FloorConstraint>,
    pub box_counts: Vec<usize>,
    #[serde(flatten)]
    pub verdict: Verdict,
}

impl Certificate {
    pub fn is_empty(&self) -> bool {
        matches!(self.verdict, Verdict::Empty { .. })
    }

    pub fn witness(&self) -> Option<&[Rat; 3]> {
        match &self.verdict {
            Verdict::Witness { point } => Some(point),
            Verdict::Empty { .. } => None,
        }
    }
}

pub fn constraint_refine(u: &BoxUnion, fc: FloorConstraint) -> Result<BoxUnion> {
    Engine::default().refine(u, fc)
}

pub fn system_empty(initial: &BoxUnion, gamma: &GammaSet) -> Result<Certificate> {
    Engine::default().system(initial, gamma)
}

/// `true` when `p` lies in `initial` and satisfies every constraint.
pub fn witness_is_valid(p: &[Rat; 3], initial: &BoxUnion, constraints: &[FloorConstraint]) -> bool {
    initial.contains(p) && constraints.iter().all(|fc| fc.holds_at(p))
}

/// `V_l = [0, 1/(6l+2)) x [(2l-1)/(6l-2), 1/3) x [(3l-1)/(6l-1), 1/2)`.
pub fn vl_box(l: u64) -> Result<BoxUnion> {
    if l < 4 {
        return Err(Error::Domain(format!("V_l needs l >= 4, got {l}")));
    }
    let l = l as i64;
    let b = RatBox::new(
        [Rat::zero(), Rat::ratio(2 * l - 1, 6 * l - 2), Rat::ratio(3 * l - 1, 6 * l - 1)],
        [Rat::ratio(1, 6 * l + 2), Rat::ratio(1, 3), Rat::ratio(1, 2)],
    )?;
    Ok(BoxUnion::new(vec![b], true))
}

/// The three constraints taking `V_l` to `V_{l+1}`.
pub fn vl_step_constraints(l: u64) -> [FloorConstraint; 3] {
    [
        FloorConstraint { n: 6 * l + 4, c: l + 1 },
        FloorConstraint { n: 6 * l + 5, c: l + 1 },
        FloorConstraint { n: 6 * l + 8, c: l + 2 },
    ]
}

/// Outcome of one `V_l` step: whether the refined region equals `V_{l+1}`,
/// and a point in the symmetric difference otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VlStep {
    pub l: u64,
    pub equal: bool,
    pub refined_boxes: usize,
    pub counterexample: Option<[Rat; 3]>,
}

pub fn verify_vl_step_with(engine: &Engine, l: u64) -> Result<VlStep> {
    let start = vl_box(l)?;
    let next = vl_box(l + 1)?;
    let refined = engine.refine_all(&start, &vl_step_constraints(l))?;
    let counterexample = refined
        .point_outside(&next)
        .or_else(|| next.point_outside(&refined));
    Ok(VlStep {
        l,
        equal: counterexample.is_none(),
        refined_boxes: refined.len(),
        counterexample,
    })
}

pub fn verify_vl_step(l: u64) -> Result<bool> {
    Ok(verify_vl_step_with(&Engine::default(), l)?.equal)
}

fn fc(n: u64, c: u64) -> FloorConstraint {
    FloorConstraint { n, c }
}

/// The ten constraints shared by all cases at level `k`.
pub fn case_base_constraints(k: u64) -> Vec<FloorConstraint> {
    vec![
        fc(6 * k + 6, k + 1),
        fc(6 * k + 4, k + 1),
        fc(6 * k + 3, k + 1),
        fc(6 * k + 5, k + 1),
        fc(12 * k + 3, 2 * k + 1),
        fc(12 * k + 4, 2 * k + 1),
        fc(18 * k + 6, 3 * k + 1),
        fc(18 * k + 5, 3 * k + 1),
        fc(12 * k + 5, 2 * k + 1),
        fc(24 * k + 5, 4 * k + 1),
    ]
}

/// Extra constraints of case `case_id` (1 to 10), as listed.
pub fn case_constraints(k: u64, case_id: u8) -> Result<Vec<FloorConstraint>> {
    let list = match case_id {
        1 => vec![fc(12 * k + 7, 2 * k + 1), fc(18 * k + 8, 3 * k + 1), fc(24 * k + 9, 4 * k + 1), fc(30 * k + 10, 5 * k + 1)],
        2 => vec![fc(12 * k + 7, 2 * k + 1), fc(18 * k + 8, 3 * k + 1), fc(24 * k + 9, 4 * k + 1), fc(30 * k + 12, 5 * k + 2)],
        3 => vec![fc(12 * k + 7, 2 * k + 1), fc(18 * k + 8, 3 * k + 1), fc(24 * k + 11, 4 * k + 2)],
        4 => vec![fc(12 * k + 7, 2 * k + 1), fc(18 * k + 10, 3 * k + 2), fc(30 * k + 16, 5 * k + 2)],
        5 => vec![fc(12 * k + 7, 2 * k + 1), fc(18 * k + 10, 3 * k + 2), fc(30 * k + 18, 5 * k + 3)],
        6 => vec![fc(12 * k + 9, 3 * k + 2), fc(18 * k + 14, 3 * k + 2), fc(30 * k + 22, 5 * k + 3), fc(60 * k + 41, 10 * k + 6)],
        7 => vec![fc(12 * k + 9, 3 * k + 2), fc(18 * k + 14, 3 * k + 2), fc(30 * k + 24, 5 * k + 4)],
        8 => vec![fc(12 * k + 9, 3 * k + 2), fc(18 * k + 16, 3 * k + 3), fc(24 * k + 21, 4 * k + 3), fc(24 * k + 6, 4 * k + 1)],
        9 => vec![
            fc(12 * k + 9, 3 * k + 2),
            fc(18 * k + 16, 3 * k + 3),
            fc(24 * k + 23, 4 * k + 4),
            fc(24 * k + 6, 4 * k + 1),
            fc(18 * k + 18, 3 * k + 3),
            fc(24 * k + 24, 4 * k + 4),
            fc(30 * k + 28, 5 * k + 4),
        ],
        10 => vec![
            fc(12 * k + 9, 3 * k + 2),
            fc(18 * k + 16, 3 * k + 3),
            fc(24 * k + 23, 4 * k + 4),
            fc(24 * k + 6, 4 * k + 1),
            fc(18 * k + 18, 3 * k + 3),
            fc(24 * k + 24, 4 * k + 4),
            fc(30 * k + 30, 5 * k + 5),
        ],
        _ => return Err(Error::Domain(format!("case id {case_id} not in 1..=10"))),
    };
    Ok(list)
}

/// The four-box union that every case starts from.
pub fn case_region(k: u64) -> Result<BoxUnion> {
    if k < 4 {
        return Err(Error::Domain(format!("cases need k >= 4, got {k}")));
    }
    let k = k as i64;
    let third = Rat::ratio(1, 3);
    let half = Rat::ratio(1, 2);
    let inv = |d: i64| Rat::ratio(1, d);
    let y_a = (&third - inv(18 * k + 6), &third - inv(18 * k + 12));
    let y_b = (&third - inv(18 * k + 12), &third - Rat::ratio(2, 54 * k + 15));
    let z_a = (&half - inv(12 * k + 4), &half - inv(12 * k + 6));
    let z_b = (&half - inv(12 * k + 6), &half - inv(12 * k + 10));
    let z_c = (&half - inv(12 * k + 10), &half - Rat::ratio(3, 48 * k + 10));
    let mk = |x: (Rat, Rat), y: &(Rat, Rat), z: &(Rat, Rat)| {
        RatBox::new([x.0, y.0.clone(), z.0.clone()], [x.1, y.1.clone(), z.1.clone()])
    };
    let boxes = vec![
        mk((inv(6 * k + 3), inv(6 * k + 2)), &y_a, &z_a)?,
        mk((inv(6 * k + 4), inv(6 * k + 3)), &y_a, &z_b)?,
        mk((inv(6 * k + 5), inv(6 * k + 4)), &y_b, &z_b)?,
        mk((inv(6 * k + 6), inv(6 * k + 5)), &y_b, &z_c)?,
    ];
    Ok(BoxUnion::new(boxes, true))
}

/// All constraints of a case, deduplicated, in application order.
pub fn case_system(k: u64, case_id: u8) -> Result<GammaSet> {
    let mut g = GammaSet::new();
    for c in case_base_constraints(k).into_iter().chain(case_constraints(k, case_id)?) {
        g.insert(FloorConstraint::new(c.n, c.c)?);
    }
    Ok(g)
}

pub fn verify_case_with(engine: &Engine, k: u64, case_id: u8) -> Result<Certificate> {
    let system = case_system(k, case_id)?;
    engine.system(&case_region(k)?, &system)
}

pub fn verify_case(k: u64, case_id: u8) -> Result<Certificate> {
    verify_case_with(&Engine::default(), k, case_id)
}

/// Checks that `V_k` cut by the ten shared constraints lands inside the
/// four-box union; returns a stray point otherwise.
pub fn case_region_covers(engine: &Engine, k: u64) -> Result<Option<[Rat; 3]>> {
    let base: GammaSet = case_base_constraints(k).into_iter().collect();
    let refined = engine.refine_all(&vl_box(k)?, &base.to_vec())?;
    Ok(refined.point_outside(&case_region(k)?))
}

/// An open interval of values of `1/eps`, possibly unbounded above.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridInterval {
    pub label: String,
    pub lo: Rat,
    pub hi: Option<Rat>,
}

impl fmt::Display for GridInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.hi {
            Some(hi) => write!(f, "({},{})", self.lo, hi),
            None => write!(f, "({},inf)", self.lo),
        }
    }
}

/// `alpha_0 .. alpha_10`.
pub fn grid_alphas() -> [Rat; 11] {
    [
        Rat::zero(),
        Rat::ratio(1, 5),
        Rat::ratio(1, 4),
        Rat::ratio(1, 3),
        Rat::ratio(2, 5),
        Rat::ratio(1, 2),
        Rat::ratio(3, 5),
        Rat::ratio(2, 3),
        Rat::ratio(3, 4),
        Rat::ratio(4, 5),
        Rat::one(),
    ]
}

/// `(13, inf)`, `(11, 13)` and `(6 + 1/(l + alpha_{i+1}), 6 + 1/(l + alpha_i))`
/// for `0 <= i <= 9`, `0 <= l <= 3`, `(l, i) != (0, 0)`.
pub fn s_grid_intervals() -> Vec<GridInterval> {
    let mut out = vec![
        GridInterval {
            label: "(13,inf)".into(),
            lo: Rat::int(13),
            hi: None,
        },
        GridInterval {
            label: "(11,13)".into(),
            lo: Rat::int(11),
            hi: Some(Rat::int(13)),
        },
    ];
    let alphas = grid_alphas();
    let six = Rat::int(6);
    for l in 0..=3i64 {
        for i in 0..=9usize {
            if l == 0 && i == 0 {
                continue;
            }
            let lo = &six + (Rat::int(l) + &alphas[i + 1]).recip().expect("positive");
            let hi = &six + (Rat::int(l) + &alphas[i]).recip().expect("positive");
            out.push(GridInterval {
                label: format!("l={l},i={i}"),
                lo,
                hi: Some(hi),
            });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridVerdict {
    pub interval: GridInterval,
    pub certificate: Certificate,
}

/// Run the emptiness check for every interval of the grid with constraints
/// truncated at `n <= n_max`. Intervals are independent and run in parallel.
pub fn verify_s_grid_with(engine: &Engine, n_max: u64, jobs: usize) -> Result<Vec<GridVerdict>> {
    let intervals = s_grid_intervals();
    pool::with_jobs(jobs, || {
        intervals
            .into_par_iter()
            .map(|interval| {
                let gamma = gamma_of_interval(&interval.lo, interval.hi.as_ref(), n_max)?;
                let certificate = engine.system(&BoxUnion::unit(true), &gamma)?;
                Ok(GridVerdict { interval, certificate })
            })
            .collect()
    })
}

pub fn verify_s_grid(n_max: u64) -> Result<Vec<GridVerdict>> {
    verify_s_grid_with(&Engine::default(), n_max, 0)
}
