//! Weights on supports of power series in four variables, for hyperquotient
//! singularities `(f = 0) / mu_r` where `mu_r` acts by `(a_1, ..., a_4)` and
//! multiplies `f` by `xi^e`.
//!
//! A series is represented by its support alone; coefficients never matter
//! for the quantities computed here.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pool;
use crate::qarith::Rat;
use crate::quotient::MAX_INDEX;

/// Largest support accepted.
pub const MAX_SUPPORT: usize = 10_000;

/// Largest exponent accepted in a support vector.
pub const MAX_EXPONENT: u64 = 1 << 32;

/// Nonempty, duplicate-free set of nonzero exponent vectors, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<[u64; 4]>", into = "Vec<[u64; 4]>")]
pub struct MonomialSupport {
    exponents: Vec<[u64; 4]>,
}

impl MonomialSupport {
    pub fn new(mut exponents: Vec<[u64; 4]>) -> Result<MonomialSupport> {
        if exponents.is_empty() {
            return Err(Error::Contract("support must be nonempty".into()));
        }
        if exponents.len() > MAX_SUPPORT {
            return Err(Error::ResourceLimit {
                what: "support size",
                limit: MAX_SUPPORT,
            });
        }
        if let Some(v) = exponents.iter().find(|v| v.iter().any(|&x| x > MAX_EXPONENT)) {
            return Err(Error::Domain(format!("exponent in {v:?} exceeds {MAX_EXPONENT}")));
        }
        if exponents.iter().any(|v| v.iter().all(|&x| x == 0)) {
            return Err(Error::Domain("the constant monomial is not allowed".into()));
        }
        exponents.sort();
        exponents.dedup();
        Ok(MonomialSupport { exponents })
    }

    /// Parse a JSON array of 4-vectors of non-negative integers.
    pub fn from_json(text: &str) -> Result<MonomialSupport> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn exponents(&self) -> &[[u64; 4]] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn union(&self, other: &MonomialSupport) -> Result<MonomialSupport> {
        let mut all = self.exponents.clone();
        all.extend_from_slice(&other.exponents);
        MonomialSupport::new(all)
    }
}

impl TryFrom<Vec<[u64; 4]>> for MonomialSupport {
    type Error = Error;
    fn try_from(v: Vec<[u64; 4]>) -> Result<MonomialSupport> {
        MonomialSupport::new(v)
    }
}

impl From<MonomialSupport> for Vec<[u64; 4]> {
    fn from(s: MonomialSupport) -> Vec<[u64; 4]> {
        s.exponents
    }
}

/// `r`, the weights `a_1..a_4`, the character `e` of `f`, and `supp f`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawDatum")]
pub struct HyperquotientDatum {
    pub r: u64,
    pub a: [u64; 4],
    pub e: u64,
    pub support: MonomialSupport,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDatum {
    r: u64,
    a: [u64; 4],
    e: u64,
    support: MonomialSupport,
}

impl TryFrom<RawDatum> for HyperquotientDatum {
    type Error = Error;
    fn try_from(raw: RawDatum) -> Result<HyperquotientDatum> {
        HyperquotientDatum::new(raw.r, raw.a, raw.e, raw.support)
    }
}

impl HyperquotientDatum {
    /// Residues are reduced mod `r`. Semi-invariance is not enforced here;
    /// see [`semi_invariant_check`].
    pub fn new(r: u64, a: [u64; 4], e: u64, support: MonomialSupport) -> Result<HyperquotientDatum> {
        check_r(r)?;
        Ok(HyperquotientDatum {
            r,
            a: a.map(|x| x % r),
            e: e % r,
            support,
        })
    }

    pub fn from_json(text: &str) -> Result<HyperquotientDatum> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn check_r(r: u64) -> Result<()> {
    if !(2..=MAX_INDEX).contains(&r) {
        return Err(Error::Domain(format!("r = {r} must lie in [2, {MAX_INDEX}]")));
    }
    Ok(())
}

/// A point of `N` in `[0,1]^4`: `coords = (j a_i / r)` mod `Z^4`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeWeight {
    pub coords: [Rat; 4],
    pub class_index: u64,
    pub primitive: bool,
}

impl LatticeWeight {
    /// `(1,1,1,1) - w`.
    pub fn prime(&self) -> [Rat; 4] {
        self.coords.clone().map(|c| Rat::one() - c)
    }

    pub fn total(&self) -> Rat {
        self.coords.iter().sum()
    }
}

impl fmt::Display for LatticeWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(Rat::to_string).collect();
        write!(f, "({}) j={}", c.join(","), self.class_index)
    }
}

/// `w(h)`: the least weight of a monomial of the support.
pub fn support_weight(w: &[Rat; 4], s: &MonomialSupport) -> Result<Rat> {
    s.exponents
        .iter()
        .map(|alpha| monomial_weight(w, alpha))
        .min()
        .ok_or_else(|| Error::Contract("empty support".into()))
}

fn monomial_weight(w: &[Rat; 4], alpha: &[u64; 4]) -> Rat {
    w.iter()
        .zip(alpha)
        .map(|(wi, &ai)| wi.scale(ai as i64))
        .sum()
}

/// The first exponent vector `alpha` with `sum alpha_i a_i != e` mod `r`.
pub fn semi_invariant_check(d: &HyperquotientDatum) -> Option<[u64; 4]> {
    let r = d.r as u128;
    d.support.exponents.iter().copied().find(|alpha| {
        let s: u128 = alpha
            .iter()
            .zip(&d.a)
            .map(|(&x, &a)| (x as u128 % r) * a as u128 % r)
            .sum();
        s % r != d.e as u128
    })
}

/// Whether the nonzero point with `r * w = m` lies in `N`.
fn in_lattice(m: &[u64; 4], r: u64, a: &[u64; 4]) -> bool {
    (0..r).any(|j| (0..4).all(|i| m[i] % r == a[i] * j % r))
}

/// `w` is primitive when `w / l` lies outside `N` for every `l >= 2`.
fn is_primitive(m: &[u64; 4], r: u64, a: &[u64; 4]) -> bool {
    let g = m.iter().fold(0u64, |g, &x| g.gcd(&x));
    (2..=g)
        .filter(|l| g % l == 0)
        .all(|l| !in_lattice(&m.map(|x| x / l), r, a))
}

/// `N^0 = N ∩ [0,1]^4 \ {0,1}^4`, one entry per point, each tagged with the
/// smallest class index producing it. Coordinates `{j a_i / r} = 0` expand to
/// both 0 and 1. Ordered by class index, then coordinates.
pub fn enumerate_n0(r: u64, a: &[u64; 4]) -> Result<Vec<LatticeWeight>> {
    check_r(r)?;
    let a = a.map(|x| x % r);
    let mut seen: BTreeMap<[u64; 4], u64> = BTreeMap::new();
    for j in 1..r {
        let base = a.map(|x| x * j % r);
        let zeros: Vec<usize> = (0..4).filter(|&i| base[i] == 0).collect();
        for mask in 0u32..(1 << zeros.len()) {
            let mut m = base;
            for (bit, &i) in zeros.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    m[i] = r;
                }
            }
            if m.iter().all(|&x| x == 0 || x == r) {
                continue;
            }
            seen.entry(m).or_insert(j);
        }
    }
    let mut out: Vec<LatticeWeight> = seen
        .into_iter()
        .map(|(m, j)| LatticeWeight {
            coords: m.map(|x| Rat::ratio(x as i64, r as i64)),
            class_index: j,
            primitive: is_primitive(&m, r, &a),
        })
        .collect();
    out.sort_by(|x, y| (x.class_index, &x.coords).cmp(&(y.class_index, &y.coords)));
    Ok(out)
}

/// `w(x_1 x_2 x_3 x_4) - w(f)`. Needs a semi-invariant datum.
pub fn gap_value(w: &[Rat; 4], d: &HyperquotientDatum) -> Result<Rat> {
    if let Some(v) = semi_invariant_check(d) {
        return Err(Error::Contract(format!("monomial {v:?} is not semi-invariant")));
    }
    let sum: Rat = w.iter().sum();
    Ok(sum - support_weight(w, &d.support)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifiedWeight {
    pub weight: LatticeWeight,
    pub gap: Rat,
}

/// `N^0` split into `Psi_1`, `Psi_2` and the rest, plus primitive points
/// outside the unit box whose gap falls in the window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiPartition {
    pub psi1: Vec<ClassifiedWeight>,
    pub psi2: Vec<ClassifiedWeight>,
    pub rest: Vec<ClassifiedWeight>,
    pub outside_box: Vec<ClassifiedWeight>,
}

impl PsiPartition {
    pub fn total(&self) -> usize {
        self.psi1.len() + self.psi2.len() + self.rest.len()
    }
}

/// `Psi_1`: primitive points of `N^0` with gap in `[5/6 + eps, 1)`.
/// `Psi_2`: the points `(1,1,1,1) - beta`, `beta in Psi_1`, that lie in `N^0`
/// and not already in `Psi_1`. Everything else goes to `rest`.
pub fn psi_classify(d: &HyperquotientDatum, eps: &Rat, jobs: usize) -> Result<PsiPartition> {
    if eps.is_negative() || eps.is_zero() || *eps >= Rat::ratio(1, 6) {
        return Err(Error::Domain(format!("eps = {eps} must lie in (0, 1/6)")));
    }
    if let Some(v) = semi_invariant_check(d) {
        return Err(Error::Contract(format!("monomial {v:?} is not semi-invariant")));
    }
    let low = Rat::ratio(5, 6) + eps;
    let in_window = |g: &Rat| *g >= low && *g < 1;
    let n0 = enumerate_n0(d.r, &d.a)?;
    let gaps: Vec<Rat> = pool::with_jobs(jobs, || {
        n0.par_iter()
            .map(|w| gap_value(&w.coords, d))
            .collect::<Result<_>>()
    })?;
    let is_psi1: Vec<bool> = n0
        .iter()
        .zip(&gaps)
        .map(|(w, g)| w.primitive && in_window(g))
        .collect();
    let primes: std::collections::BTreeSet<[Rat; 4]> = n0
        .iter()
        .zip(&is_psi1)
        .filter(|(_, &p)| p)
        .map(|(w, _)| w.prime())
        .collect();
    let mut out = PsiPartition {
        psi1: Vec::new(),
        psi2: Vec::new(),
        rest: Vec::new(),
        outside_box: Vec::new(),
    };
    for ((w, gap), p1) in n0.into_iter().zip(gaps).zip(is_psi1) {
        let in_psi2 = !p1 && primes.contains(&w.coords);
        let item = ClassifiedWeight { weight: w, gap };
        if p1 {
            out.psi1.push(item);
        } else if in_psi2 {
            out.psi2.push(item);
        } else {
            out.rest.push(item);
        }
    }
    out.outside_box = outside_box_diagnostic(d, &in_window)?;
    Ok(out)
}

/// Primitive points `alpha_j + delta`, `delta in {0,1}^4`, with some
/// coordinate above 1 and gap in the window.
fn outside_box_diagnostic(d: &HyperquotientDatum, in_window: &dyn Fn(&Rat) -> bool) -> Result<Vec<ClassifiedWeight>> {
    let r = d.r;
    let mut out = Vec::new();
    for j in 1..r {
        let base = d.a.map(|x| x * j % r);
        for mask in 1u32..16 {
            let m: [u64; 4] = std::array::from_fn(|i| base[i] + if mask >> i & 1 == 1 { r } else { 0 });
            if m.iter().all(|&x| x <= r) {
                continue;
            }
            if !is_primitive(&m, r, &d.a) {
                continue;
            }
            let coords = m.map(|x| Rat::ratio(x as i64, r as i64));
            let gap = gap_value(&coords, d)?;
            if in_window(&gap) {
                out.push(ClassifiedWeight {
                    weight: LatticeWeight {
                        coords,
                        class_index: j,
                        primitive: true,
                    },
                    gap,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Identity5 {
    Ok,
    Exceptions { j: Vec<u64> },
}

/// `sum_i {j a_i / r} = {j e / r} + j/r + 1` for every `j in [1, r-1]`;
/// otherwise every failing `j`.
pub fn identity5_check(r: u64, a: &[u64; 4], e: u64) -> Result<Identity5> {
    check_r(r)?;
    let fails: Vec<u64> = (1..r)
        .filter(|&j| {
            let lhs: u64 = a.iter().map(|&x| x % r * j % r).sum();
            lhs != e % r * j % r + j + r
        })
        .collect();
    Ok(if fails.is_empty() {
        Identity5::Ok
    } else {
        Identity5::Exceptions { j: fails }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TypeTag {
    #[serde(rename = "1a")]
    T1a,
    #[serde(rename = "1b")]
    T1b,
    #[serde(rename = "1c")]
    T1c,
    #[serde(rename = "1d")]
    T1d,
    #[serde(rename = "2a")]
    T2a,
    #[serde(rename = "2b")]
    T2b,
    #[serde(rename = "3a")]
    T3a,
    #[serde(rename = "3b")]
    T3b,
    #[serde(rename = "3c")]
    T3c,
    #[serde(rename = "3d")]
    T3d,
    #[serde(rename = "3e")]
    T3e,
    #[serde(rename = "3f")]
    T3f,
}

impl TypeTag {
    pub const ALL: [TypeTag; 12] = [
        TypeTag::T1a,
        TypeTag::T1b,
        TypeTag::T1c,
        TypeTag::T1d,
        TypeTag::T2a,
        TypeTag::T2b,
        TypeTag::T3a,
        TypeTag::T3b,
        TypeTag::T3c,
        TypeTag::T3d,
        TypeTag::T3e,
        TypeTag::T3f,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TypeTag::T1a => "1a",
            TypeTag::T1b => "1b",
            TypeTag::T1c => "1c",
            TypeTag::T1d => "1d",
            TypeTag::T2a => "2a",
            TypeTag::T2b => "2b",
            TypeTag::T3a => "3a",
            TypeTag::T3b => "3b",
            TypeTag::T3c => "3c",
            TypeTag::T3d => "3d",
            TypeTag::T3e => "3e",
            TypeTag::T3f => "3f",
        }
    }

    fn has_parameter(&self) -> bool {
        !matches!(self, TypeTag::T2a | TypeTag::T2b)
    }

    /// Coordinate reorderings allowed for the family: swaps inside
    /// `{x_1, x_2}` and `{x_3, x_4}` for types 1 and 2, any permutation of
    /// `x_2, x_3, x_4` for type 3. The identity comes first.
    fn permutations(&self) -> &'static [[usize; 4]] {
        const PAIRS: [[usize; 4]; 4] = [[0, 1, 2, 3], [1, 0, 2, 3], [0, 1, 3, 2], [1, 0, 3, 2]];
        const TAIL: [[usize; 4]; 6] = [
            [0, 1, 2, 3],
            [0, 1, 3, 2],
            [0, 2, 1, 3],
            [0, 2, 3, 1],
            [0, 3, 1, 2],
            [0, 3, 2, 1],
        ];
        match self {
            TypeTag::T1a | TypeTag::T1b | TypeTag::T1c | TypeTag::T1d | TypeTag::T2a | TypeTag::T2b => &PAIRS,
            _ => &TAIL,
        }
    }

    /// The pattern `(a_1, a_2, a_3, a_4, e)` for parameter `a`, or `None`
    /// when the side condition fails.
    fn pattern(&self, r: u64, a: u64) -> Option<[u64; 5]> {
        let neg = |x: u64| (r - x % r) % r;
        let m = |x: u64| x % r;
        let even = r % 2 == 0;
        let g1 = (a + 1).gcd(&r);
        Some(match self {
            TypeTag::T1a => [m(a), neg(a), m(1), 0, 0],
            TypeTag::T1b if g1 > 1 => [m(1), m(a), neg(a), m(a + 1), m(a + 1)],
            TypeTag::T1c if g1 == 1 => [m(a), m(1), neg(a), m(a + 1), m(a + 1)],
            TypeTag::T1d if g1 == 1 => [m(a), neg(a + 1), neg(a), m(a + 1), neg(1)],
            TypeTag::T2a if even => [0, r / 2, r / 2, 0, 0],
            TypeTag::T2b if r % 4 == 0 => [m(1), m((r + 2) / 2), m((r - 2) / 2), m(2), m(2)],
            TypeTag::T3a => [0, m(a), neg(a), m(1), 0],
            TypeTag::T3b if even => [m(a), neg(a), m(1), m(2 * a), m(2 * a)],
            TypeTag::T3c if even => [m(1), m(a), neg(a), m(2), m(2)],
            TypeTag::T3d if !even => [(r - 1) / 2, (r + 1) / 2, m(a), neg(a), neg(1)],
            TypeTag::T3e if !even => [m(a), neg(a), m(2 * a), m(1), m(2 * a)],
            TypeTag::T3f if !even => [m(1), m(a), neg(a), m(2), m(2)],
            _ => return None,
        })
    }
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeMatch {
    pub tag: TypeTag,
    /// The unit `a` of the pattern; absent for types 2a and 2b.
    pub a: Option<u64>,
    /// Position `i` of the reordered tuple holds the input's `a_{perm[i]+1}`.
    pub permutation: [usize; 4],
}

impl fmt::Display for TypeMatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.a {
            Some(a) => write!(f, "{} a={a}", self.tag),
            None => write!(f, "{}", self.tag),
        }
    }
}

fn matches_in(r: u64, a: &[u64; 4], e: u64, tag: TypeTag, out: &mut Vec<TypeMatch>, first_only: bool) {
    let params: Vec<Option<u64>> = if tag.has_parameter() {
        (1..r).filter(|x| x.gcd(&r) == 1).map(Some).collect()
    } else {
        vec![None]
    };
    for perm in tag.permutations() {
        let t = [a[perm[0]] % r, a[perm[1]] % r, a[perm[2]] % r, a[perm[3]] % r, e % r];
        for &p in &params {
            if tag.pattern(r, p.unwrap_or(1)) == Some(t) {
                out.push(TypeMatch {
                    tag,
                    a: p,
                    permutation: *perm,
                });
                if first_only {
                    return;
                }
            }
        }
    }
}

/// The first pattern that `(a_1, a_2, a_3, a_4, e)` matches exactly mod `r`,
/// trying patterns in list order, then reorderings, then `a` ascending.
pub fn classify_type(r: u64, a: &[u64; 4], e: u64) -> Result<Option<TypeMatch>> {
    check_r(r)?;
    let mut out = Vec::new();
    for tag in TypeTag::ALL {
        matches_in(r, a, e, tag, &mut out, true);
        if !out.is_empty() {
            break;
        }
    }
    Ok(out.into_iter().next())
}

/// Every `(pattern, reordering, a)` that matches, in search order.
pub fn classify_type_all(r: u64, a: &[u64; 4], e: u64) -> Result<Vec<TypeMatch>> {
    check_r(r)?;
    let mut out = Vec::new();
    for tag in TypeTag::ALL {
        matches_in(r, a, e, tag, &mut out, false);
    }
    Ok(out)
}

/// For a pure power `x_axis^l` of `S` attaining `w_i(S) > 0` for both
/// weights, the two exponents agree.
pub fn two_monomials_verify(s: &MonomialSupport, axis: usize, w1: &[Rat; 4], w2: &[Rat; 4]) -> Result<bool> {
    if !(1..=4).contains(&axis) {
        return Err(Error::Domain(format!("axis {axis} not in 1..=4")));
    }
    let i = axis - 1;
    let attaining = |w: &[Rat; 4]| -> Result<u64> {
        let min = support_weight(w, s)?;
        if !(min > 0) {
            return Err(Error::Contract("support weight is not positive".into()));
        }
        s.exponents
            .iter()
            .filter(|v| (0..4).all(|t| t == i || v[t] == 0) && v[i] > 0)
            .find(|v| monomial_weight(w, v) == min)
            .map(|v| v[i])
            .ok_or_else(|| Error::Contract(format!("no pure power of x{axis} attains the minimum")))
    };
    Ok(attaining(w1)? == attaining(w2)?)
}
