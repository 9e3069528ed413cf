//! Reference implementations used as oracles. Plain integer arithmetic, no
//! code shared with the library beyond its public types.
#![allow(dead_code)]

use mldlab::Rat;
use num_integer::Integer;

/// `p/q` with `q > 0`, not necessarily reduced.
#[derive(Debug, Clone, Copy)]
pub struct Frac {
    pub p: i128,
    pub q: i128,
}

impl Frac {
    pub fn new(p: i128, q: i128) -> Frac {
        assert!(q > 0);
        Frac { p, q }
    }

    pub fn floor_mul(&self, n: i128) -> i128 {
        Integer::div_floor(&(self.p * n), &self.q)
    }

    pub fn to_rat(self) -> Rat {
        Rat::new(self.p as i64, self.q as i64).unwrap()
    }

    pub fn le(&self, o: &Frac) -> bool {
        self.p * o.q <= o.p * self.q
    }
}

/// `sum floor(n v_i) == n - 1 - c`.
pub fn floor_sum_holds(v: &[Frac; 3], n: i128, c: i128) -> bool {
    v.iter().map(|x| x.floor_mul(n)).sum::<i128>() == n - 1 - c
}

/// `(numerator over r, smallest k)` of `min_k sum_i (1 + k a_i / r - ceil(k a_i / r))`.
pub fn mld_oracle(r: u64, a: &[u64]) -> (u64, u64) {
    assert!(r >= 2);
    let mut best = (u64::MAX, 0);
    for k in 1..r {
        let s: u64 = a.iter().map(|&x| r + x * k - r * Integer::div_ceil(&(x * k), &r)).sum();
        if s < best.0 {
            best = (s, k);
        }
    }
    best
}

pub fn mld_oracle_rat(r: u64, a: &[u64]) -> Rat {
    if r == 1 {
        return Rat::int(a.len() as i64);
    }
    Rat::ratio(mld_oracle(r, a).0 as i64, r as i64)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn units(r: u64) -> Vec<u64> {
    (1..r).filter(|&u| gcd(u, r) == 1).collect()
}
