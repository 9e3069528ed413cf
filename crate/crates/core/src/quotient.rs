//! Cyclic quotient singularities `1/r(a_1, ..., a_d)` and their minimal log
//! discrepancy, computed as the minimum over `k in [1, r-1]` of
//! `sum_i (1 + a_i k / r - ceil(a_i k / r))`.
//!
//! Residues are kept as `u64` with `r` capped at [`MAX_INDEX`], so every
//! product `a_i * k` stays below `2^62`. Results leave the module as [`Rat`].

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qarith::Rat;

/// Largest supported group order.
pub const MAX_INDEX: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclicQuotient {
    r: u64,
    weights: Vec<u64>,
}

/// The vector `c_k` attached to an index `k`: `c_i = {a_i k / r}`, except
/// that `c_i = 1` when `r | a_i k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToroidalWeight {
    pub k: u64,
    pub components: Vec<Rat>,
}

impl ToroidalWeight {
    pub fn total(&self) -> Rat {
        self.components.iter().sum()
    }
}

impl CyclicQuotient {
    /// Weights are reduced modulo `r`; they may be given unreduced.
    pub fn new(r: u64, weights: &[u64]) -> Result<CyclicQuotient> {
        if r == 0 {
            return Err(Error::Domain("group order r must be positive".into()));
        }
        if r > MAX_INDEX {
            return Err(Error::Domain(format!("r = {r} exceeds {MAX_INDEX}")));
        }
        if weights.is_empty() {
            return Err(Error::Domain("dimension must be at least 1".into()));
        }
        Ok(CyclicQuotient {
            r,
            weights: weights.iter().map(|&a| a % r).collect(),
        })
    }

    /// Signed weights, reduced into `[0, r)`.
    pub fn from_signed(r: u64, weights: &[i64]) -> Result<CyclicQuotient> {
        if r == 0 || r > MAX_INDEX {
            return Err(Error::Domain(format!("invalid group order {r}")));
        }
        let reduced: Vec<u64> = weights
            .iter()
            .map(|&a| a.rem_euclid(r as i64) as u64)
            .collect();
        CyclicQuotient::new(r, &reduced)
    }

    /// The smooth point of dimension `dim`, written `1/1(0, ..., 0)`.
    pub fn smooth(dim: usize) -> Result<CyclicQuotient> {
        CyclicQuotient::new(1, &vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// `v_i = a_i / r`.
    pub fn v(&self) -> Vec<Rat> {
        self.weights
            .iter()
            .map(|&a| Rat::ratio(a as i64, self.r as i64))
            .collect()
    }

    fn check_k(&self, k: u64) -> Result<()> {
        if k == 0 || k >= self.r {
            return Err(Error::IndexOutOfRange {
                index: k,
                lo: 1,
                hi: self.r.saturating_sub(1),
            });
        }
        Ok(())
    }

    /// `r * toroidal_ld(k)` as an integer; `k` is taken modulo `r`.
    pub(crate) fn ld_numerator(&self, k: u64) -> u64 {
        ld_numerator(self.r, &self.weights, k)
    }

    pub fn toroidal_weight(&self, k: u64) -> Result<ToroidalWeight> {
        self.check_k(k)?;
        let r = self.r as i64;
        let components = self
            .weights
            .iter()
            .map(|&a| {
                let c = (a * k) % self.r;
                Rat::ratio(if c == 0 { r } else { c as i64 }, r)
            })
            .collect();
        Ok(ToroidalWeight { k, components })
    }

    /// Log discrepancy of the toroidal divisor with index `k`.
    pub fn toroidal_ld(&self, k: u64) -> Result<Rat> {
        self.check_k(k)?;
        Ok(Rat::ratio(self.ld_numerator(k) as i64, self.r as i64))
    }

    /// Minimal log discrepancy at the origin. For `r = 1` the point is smooth
    /// and the value is the dimension.
    pub fn mld(&self) -> Rat {
        if self.r == 1 {
            return Rat::int(self.dim() as i64);
        }
        let (_, num) = argmin_numerator(self.r, &self.weights);
        Rat::ratio(num as i64, self.r as i64)
    }

    /// The smallest `k` attaining the minimum, with the minimum.
    pub fn mld_argmin(&self) -> Result<(u64, Rat)> {
        if self.r == 1 {
            return Err(Error::Domain(
                "r = 1 has no interior toroidal valuation".into(),
            ));
        }
        let (k, num) = argmin_numerator(self.r, &self.weights);
        Ok((k, Rat::ratio(num as i64, self.r as i64)))
    }

    /// `gcd(a_i, r) = 1` for every weight.
    pub fn is_isolated(&self) -> bool {
        self.weights.iter().all(|&a| a.gcd(&self.r) == 1)
    }

    /// `gcd(sum a_i, r)`; equal to 1 exactly when `r` is the index of `K_X`.
    pub fn index_gcd(&self) -> u64 {
        let s = self.weights.iter().fold(0u64, |acc, &a| (acc + a) % self.r);
        s.gcd(&self.r)
    }

    /// The same singularity with every weight multiplied by `u`.
    pub fn scaled(&self, u: u64) -> CyclicQuotient {
        CyclicQuotient {
            r: self.r,
            weights: self
                .weights
                .iter()
                .map(|&a| ((a as u128 * u as u128) % self.r as u128) as u64)
                .collect(),
        }
    }
}

impl std::fmt::Display for CyclicQuotient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let ws: Vec<String> = self.weights.iter().map(u64::to_string).collect();
        write!(f, "1/{}({})", self.r, ws.join(","))
    }
}

/// Longest weight list accepted by [`parse_weight_list`].
pub const MAX_WEIGHT_TEXT: usize = 4096;

/// Parse `"3,4,5"` (spaces allowed around entries). The empty string gives
/// the empty list.
pub fn parse_weight_list(text: &str) -> Result<Vec<u64>> {
    if text.len() > MAX_WEIGHT_TEXT {
        return Err(Error::Parse(format!("weight list longer than {MAX_WEIGHT_TEXT} bytes")));
    }
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<u64>()
                .map_err(|e| Error::Parse(format!("weight {t:?}: {e}")))
        })
        .collect()
}

pub(crate) fn ld_numerator(r: u64, weights: &[u64], k: u64) -> u64 {
    weights
        .iter()
        .map(|&a| {
            let c = (a * k) % r;
            if c == 0 {
                r
            } else {
                c
            }
        })
        .sum()
}

/// Smallest `k in [1, r-1]` minimising the numerator, and that numerator.
/// Walks `k` upward keeping running residues, so no multiplications.
pub(crate) fn argmin_numerator(r: u64, weights: &[u64]) -> (u64, u64) {
    debug_assert!(r >= 2);
    let mut residues: Vec<u64> = weights.to_vec();
    let mut best = (0, u64::MAX);
    for k in 1..r {
        let num: u64 = residues
            .iter()
            .map(|&c| if c == 0 { r } else { c })
            .sum();
        if num < best.1 {
            best = (k, num);
        }
        for (c, &a) in residues.iter_mut().zip(weights) {
            *c += a;
            if *c >= r {
                *c -= r;
            }
        }
    }
    best
}

/// Like [`argmin_numerator`] but gives up as soon as some `k` goes below
/// `floor`, returning `None`. Scans use it to drop out-of-window classes.
pub(crate) fn min_numerator_at_least(r: u64, weights: &[u64], floor: u64) -> Option<(u64, u64)> {
    let mut residues: Vec<u64> = weights.to_vec();
    let mut best = (0, u64::MAX);
    for k in 1..r {
        let num: u64 = residues
            .iter()
            .map(|&c| if c == 0 { r } else { c })
            .sum();
        if num < floor {
            return None;
        }
        if num < best.1 {
            best = (k, num);
        }
        for (c, &a) in residues.iter_mut().zip(weights) {
            *c += a;
            if *c >= r {
                *c -= r;
            }
        }
    }
    Some(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cq(r: u64, w: &[u64]) -> CyclicQuotient {
        CyclicQuotient::new(r, w).unwrap()
    }

    fn q(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn toroidal_ld_examples() {
        assert_eq!(cq(7, &[2, 3, 1]).toroidal_ld(2).unwrap(), q("12/7"));
        assert_eq!(cq(4, &[2, 1, 1]).toroidal_ld(2).unwrap(), Rat::int(2));
        assert_eq!(cq(7, &[2, 3, 1]).toroidal_ld(1).unwrap(), q("6/7"));
    }

    #[test]
    fn toroidal_ld_range_errors() {
        let x = cq(7, &[2, 3, 1]);
        assert!(matches!(x.toroidal_ld(0), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(x.toroidal_ld(7), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn toroidal_weight_hits_one_branch() {
        let w = cq(4, &[2, 1, 1]).toroidal_weight(2).unwrap();
        assert_eq!(w.components, vec![Rat::one(), q("1/2"), q("1/2")]);
        assert_eq!(w.total(), Rat::int(2));
    }

    #[test]
    fn mld_examples() {
        assert_eq!(cq(7, &[2, 3, 1]).mld(), q("6/7"));
        assert_eq!(cq(2, &[1, 1]).mld(), Rat::one());
        assert_eq!(cq(13, &[3, 4, 5]).mld(), q("12/13"));
        assert_eq!(CyclicQuotient::smooth(3).unwrap().mld(), Rat::int(3));
    }

    #[test]
    fn argmin_examples() {
        assert_eq!(cq(7, &[2, 3, 1]).mld_argmin().unwrap(), (1, q("6/7")));
        assert_eq!(cq(2, &[1, 1]).mld_argmin().unwrap(), (1, Rat::one()));
        assert_eq!(cq(13, &[3, 4, 5]).mld_argmin().unwrap(), (1, q("12/13")));
        assert!(CyclicQuotient::smooth(2).unwrap().mld_argmin().is_err());
    }

    #[test]
    fn argmin_prefers_smallest_k() {
        // 1/5(1,4): every k gives 1
        assert_eq!(cq(5, &[1, 4]).mld_argmin().unwrap(), (1, Rat::one()));
        // 1/7(3,5,6): k = 3, 5, 6 all give 1
        assert_eq!(cq(7, &[3, 5, 6]).mld_argmin().unwrap(), (3, Rat::one()));
        assert_eq!(cq(5, &[2, 4]).mld_argmin().unwrap(), (3, q("3/5")));
    }

    #[test]
    fn isolated_and_index() {
        assert!(cq(13, &[3, 4, 5]).is_isolated());
        assert!(!cq(15, &[4, 6, 3]).is_isolated());
        assert!(cq(7, &[2, 3, 1]).is_isolated());
        assert_eq!(cq(13, &[3, 4, 5]).index_gcd(), 1);
        assert_eq!(cq(15, &[4, 6, 3]).index_gcd(), 1);
        assert_eq!(cq(6, &[2, 2, 2]).index_gcd(), 6);
    }

    #[test]
    fn weights_reduced_on_construction() {
        assert_eq!(cq(7, &[9, 10, 8]).weights(), &[2, 3, 1]);
        let x = CyclicQuotient::from_signed(7, &[-5, 3, -6]).unwrap();
        assert_eq!(x.weights(), &[2, 3, 1]);
        assert!(CyclicQuotient::new(0, &[1]).is_err());
        assert!(CyclicQuotient::new(5, &[]).is_err());
    }

    #[test]
    fn weight_lists() {
        assert_eq!(parse_weight_list("3,4,5").unwrap(), vec![3, 4, 5]);
        assert_eq!(parse_weight_list(" 3, 4 ,5 ").unwrap(), vec![3, 4, 5]);
        assert_eq!(parse_weight_list("").unwrap(), Vec::<u64>::new());
        assert!(parse_weight_list("3,,5").is_err());
        assert!(parse_weight_list("3,-4").is_err());
        assert!(parse_weight_list("3;4").is_err());
    }

    #[test]
    fn early_exit_matches_full_scan() {
        let w = [3, 4, 5];
        assert_eq!(min_numerator_at_least(13, &w, 12), Some((1, 12)));
        assert_eq!(min_numerator_at_least(13, &w, 13), None);
    }
}
