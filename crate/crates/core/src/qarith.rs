//! Exact rational arithmetic and the two elementary counting lemmas
//! (consecutive integers in an open interval, integers avoiding two
//! consecutive multiples of `p`).

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Longest textual rational accepted by the parser.
const MAX_RAT_TEXT: usize = 4096;

/// An exact rational number, always stored in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Rat> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        Ok(Rat(BigRational::new(num.into(), den)))
    }

    /// `num / den` for machine integers. Panics on a zero denominator, so
    /// only use it with denominators known to be nonzero.
    pub fn ratio(num: i64, den: i64) -> Rat {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(num.into(), den.into()))
    }

    pub fn int(n: impl Into<BigInt>) -> Rat {
        Rat(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Mathematical floor.
    pub fn floor(&self) -> BigInt {
        self.0.numer().div_floor(self.0.denom())
    }

    /// Mathematical ceiling.
    pub fn ceil(&self) -> BigInt {
        -((-self.0.numer()).div_floor(self.0.denom()))
    }

    /// Fractional part `q - floor(q)`, always in `[0, 1)`.
    pub fn frac(&self) -> Rat {
        let n = self.0.numer().mod_floor(self.0.denom());
        Rat(BigRational::new(n, self.0.denom().clone()))
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Result<Rat> {
        if self.is_zero() {
            return Err(Error::Domain("reciprocal of zero".into()));
        }
        Ok(Rat(self.0.recip()))
    }

    pub fn min(self, other: Rat) -> Rat {
        std::cmp::min(self, other)
    }

    pub fn max(self, other: Rat) -> Rat {
        std::cmp::max(self, other)
    }

    /// Multiply by a machine integer.
    pub fn scale(&self, n: i64) -> Rat {
        Rat(&self.0 * BigRational::from_integer(n.into()))
    }

    /// Lossy conversion for display or plotting only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_inner(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::int(n)
    }
}

impl From<BigRational> for Rat {
    fn from(q: BigRational) -> Rat {
        Rat(q)
    }
}

/// `p/q`, or just `p` when the value is an integer.
impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn parse_int(s: &str) -> Result<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("not an integer: {s:?}")));
    }
    s.parse::<BigInt>()
        .map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

/// Accepts `p`, `p/q`, with an optional sign on `p`.
impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rat> {
        let s = s.trim();
        if s.len() > MAX_RAT_TEXT {
            return Err(Error::Parse("rational literal too long".into()));
        }
        match s.split_once('/') {
            None => Ok(Rat::int(parse_int(s)?)),
            Some((n, d)) => {
                let d = d.trim();
                if d.starts_with(['-', '+']) {
                    return Err(Error::Parse(format!("signed denominator in {s:?}")));
                }
                Rat::new(parse_int(n.trim())?, parse_int(d)?)
            }
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: &'a Rat) -> Rat {
                Rat(self.0.$m(&rhs.0))
            }
        }
        impl<'a> $tr<Rat> for &'a Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat((&self.0).$m(rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b Rat> for &'a Rat {
            type Output = Rat;
            fn $m(self, rhs: &'b Rat) -> Rat {
                Rat((&self.0).$m(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Div<Rat> for Rat {
    type Output = Rat;
    /// Panics on division by zero, like the integer types.
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(self.0 / rhs.0)
    }
}

impl<'a, 'b> Div<&'b Rat> for &'a Rat {
    type Output = Rat;
    fn div(self, rhs: &'b Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(&self.0 / &rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl<'a> Neg for &'a Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl PartialEq<i64> for Rat {
    fn eq(&self, other: &i64) -> bool {
        self.0.is_integer() && *self.0.numer() == BigInt::from(*other)
    }
}

impl PartialOrd<i64> for Rat {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.0.cmp(&BigRational::from_integer((*other).into())))
    }
}

/// An interval of rationals with independently open or closed ends.
///
/// Text form: `[lo,hi)`, `(lo,hi]`, `[lo,hi]`, `(lo,hi)`, or bare `lo,hi`
/// which means `[lo,hi)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: Rat, hi: Rat, lo_closed: bool, hi_closed: bool) -> Result<Interval> {
        if lo >= hi {
            return Err(Error::EmptyInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        })
    }

    pub fn half_open(lo: Rat, hi: Rat) -> Result<Interval> {
        Interval::new(lo, hi, true, false)
    }

    pub fn open(lo: Rat, hi: Rat) -> Result<Interval> {
        Interval::new(lo, hi, false, false)
    }

    pub fn closed(lo: Rat, hi: Rat) -> Result<Interval> {
        Interval::new(lo, hi, true, true)
    }

    pub fn contains(&self, x: &Rat) -> bool {
        let above = if self.lo_closed { x >= &self.lo } else { x > &self.lo };
        let below = if self.hi_closed { x <= &self.hi } else { x < &self.hi };
        above && below
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

impl FromStr for Interval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Interval> {
        let s = s.trim();
        let (lo_closed, rest) = match s.chars().next() {
            Some('[') => (true, &s[1..]),
            Some('(') => (false, &s[1..]),
            _ => (true, s),
        };
        let (hi_closed, body) = match rest.chars().last() {
            Some(']') if rest.len() != s.len() => (true, &rest[..rest.len() - 1]),
            Some(')') if rest.len() != s.len() => (false, &rest[..rest.len() - 1]),
            Some(']' | ')') => {
                return Err(Error::Parse(format!("unbalanced interval {s:?}")));
            }
            _ if rest.len() != s.len() => {
                return Err(Error::Parse(format!("unterminated interval {s:?}")));
            }
            _ => (false, rest),
        };
        let (lo, hi) = body
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("interval needs lo,hi: {s:?}")))?;
        Interval::new(lo.parse()?, hi.parse()?, lo_closed, hi_closed)
    }
}

/// `{q}`.
pub fn frac(q: &Rat) -> Rat {
    q.frac()
}

/// The integers (or odd integers) lying in an open interval `(a, b)`,
/// together with the guaranteed lower bound on how many there are.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsecutiveRun {
    pub witness: Vec<BigInt>,
    pub bound: Rat,
}

impl ConsecutiveRun {
    pub fn count(&self) -> usize {
        self.witness.len()
    }

    pub fn bound_holds(&self) -> bool {
        Rat::int(self.count() as i64) >= self.bound
    }
}

/// Widest interval `consecutive_integers` will enumerate.
const MAX_RUN: i64 = 10_000_000;

/// Enumerate the integers in `(a, b)`; with `odd_only`, only the odd ones.
/// The bound is `ceil(b - a) - 1`, halved (before the `- 1`) for odd runs.
pub fn consecutive_integers(a: &Rat, b: &Rat, odd_only: bool) -> Result<ConsecutiveRun> {
    if a >= b {
        return Err(Error::EmptyInterval {
            lo: a.to_string(),
            hi: b.to_string(),
        });
    }
    let width = (b - a).ceil();
    if width > BigInt::from(MAX_RUN) {
        return Err(Error::ResourceLimit {
            what: "interval width",
            limit: MAX_RUN as usize,
        });
    }
    let first: BigInt = a.floor() + 1;
    let last: BigInt = b.ceil() - 1;
    let mut witness = Vec::new();
    let mut n = first;
    while n <= last {
        if !odd_only || n.is_odd() {
            witness.push(n.clone());
        }
        n += 1;
    }
    let w = Rat::int(width);
    let bound = if odd_only {
        w * Rat::ratio(1, 2) - Rat::one()
    } else {
        w - Rat::one()
    };
    Ok(ConsecutiveRun { witness, bound })
}

/// Size of `S' = { s in [start, start+k-1] : p does not divide s or s+1 }`
/// against the lower bound `(k-2)(p-2)/p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NondivisibleCount {
    pub size: u64,
    pub bound: Rat,
}

impl NondivisibleCount {
    pub fn bound_holds(&self) -> bool {
        Rat::int(self.size as i64) >= self.bound
    }
}

pub fn count_nondivisible(start: i64, k: u64, p: u64) -> Result<NondivisibleCount> {
    if p < 3 {
        return Err(Error::Precondition(format!("p = {p} must be at least 3")));
    }
    if k < 1 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    let p_i = i128::from(p);
    let size = (0..k)
        .map(|i| i128::from(start) + i128::from(i))
        .filter(|&s| s.rem_euclid(p_i) != 0 && (s + 1).rem_euclid(p_i) != 0)
        .count() as u64;
    let (k, p) = (k as i64, p as i64);
    let bound = Rat::ratio((k - 2) * (p - 2), p);
    let out = NondivisibleCount { size, bound };
    if !out.bound_holds() {
        return Err(Error::Contract(format!(
            "#S' = {} below bound {}",
            out.size, out.bound
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn frac_examples() {
        assert_eq!(frac(&q("7/3")), q("1/3"));
        assert_eq!(frac(&q("-1/4")), q("3/4"));
        assert_eq!(frac(&q("12/4")), Rat::zero());
    }

    #[test]
    fn floor_ceil_negative() {
        assert_eq!(q("-1/4").floor(), BigInt::from(-1));
        assert_eq!(q("-1/4").ceil(), BigInt::from(0));
        assert_eq!(q("9/2").ceil(), BigInt::from(5));
        assert_eq!(q("-3").ceil(), BigInt::from(-3));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(q("6/4").to_string(), "3/2");
        assert_eq!(q("-10/5").to_string(), "-2");
        assert_eq!(q(" 3 ").to_string(), "3");
        for bad in ["", "/", "1/", "/2", "1/0", "a/b", "1/-2", "--1", "1//2", "1.5"] {
            assert!(bad.parse::<Rat>().is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn interval_parse() {
        let i: Interval = "12/13,1".parse().unwrap();
        assert!(i.lo_closed && !i.hi_closed);
        assert!(i.contains(&q("12/13")) && !i.contains(&Rat::one()));
        let i: Interval = "(5/6,1]".parse().unwrap();
        assert!(!i.contains(&q("5/6")) && i.contains(&Rat::one()));
        assert_eq!(i.to_string(), "(5/6,1]");
        for bad in ["", "1", "[1,2", "1,2)", "(2,1)", "[1,1]", "[a,2]", "(,)"] {
            assert!(bad.parse::<Interval>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn consecutive_examples() {
        let run = consecutive_integers(&q("6/5"), &q("9/2"), false).unwrap();
        assert_eq!(run.witness, vec![2.into(), 3.into(), 4.into()]);
        assert_eq!(run.bound, Rat::int(3));
        assert!(run.bound_holds());

        let run = consecutive_integers(&q("1/6"), &q("5/6"), false).unwrap();
        assert_eq!(run.count(), 0);

        let run = consecutive_integers(&Rat::zero(), &q("21/2"), true).unwrap();
        let odd: Vec<BigInt> = [1, 3, 5, 7, 9].iter().map(|&n| n.into()).collect();
        assert_eq!(run.witness, odd);
        assert_eq!(run.bound, q("9/2"));
        assert!(run.bound_holds());
    }

    #[test]
    fn consecutive_rejects_empty() {
        assert!(matches!(
            consecutive_integers(&q("1"), &q("1"), false),
            Err(Error::EmptyInterval { .. })
        ));
    }

    #[test]
    fn nondivisible_examples() {
        let c = count_nondivisible(1, 10, 3).unwrap();
        assert_eq!(c.size, 4);
        assert_eq!(c.bound, q("8/3"));

        let c = count_nondivisible(1, 1, 3).unwrap();
        assert!(c.bound.is_negative());

        // s in 5..=11, p = 5: drop 5 (5|s), 9 (5|s+1), 10 (5|s) -> {6,7,8,11}
        let c = count_nondivisible(5, 7, 5).unwrap();
        assert_eq!(c.size, 4);
        assert!(c.size >= 3);

        assert!(matches!(
            count_nondivisible(1, 5, 2),
            Err(Error::Precondition(_))
        ));
    }
}
