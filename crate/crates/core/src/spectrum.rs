//! Enumerating the cyclic quotient mld spectrum.
//!
//! Weight tuples are deduplicated up to permutation and multiplication by a
//! unit of `Z/r`: the canonical representative of a class is the
//! lexicographically smallest sorted tuple among all unit multiples.

use std::io::Write;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pool;
use crate::qarith::{Interval, Rat};
use crate::quotient::{min_numerator_at_least, CyclicQuotient, MAX_INDEX};

/// One point of the spectrum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub r: u64,
    pub weights: Vec<u64>,
    pub mld: Rat,
    pub k: u64,
}

impl SpectrumRecord {
    /// Recompute the mld from `(r, weights)` and compare.
    pub fn revalidate(&self) -> bool {
        match CyclicQuotient::new(self.r, &self.weights) {
            Ok(x) => match x.mld_argmin() {
                Ok((k, v)) => k == self.k && v == self.mld,
                Err(_) => false,
            },
            Err(_) => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanConfig {
    pub dim: usize,
    pub r_max: u64,
    pub interval: Interval,
    pub isolated_only: bool,
    /// Worker threads; `0` means one per core.
    pub jobs: usize,
}

impl ScanConfig {
    pub fn new(dim: usize, r_max: u64, interval: Interval, isolated_only: bool) -> ScanConfig {
        ScanConfig {
            dim,
            r_max,
            interval,
            isolated_only,
            jobs: 0,
        }
    }

    pub fn with_jobs(mut self, jobs: usize) -> ScanConfig {
        self.jobs = jobs;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.r_max < 2 {
            return Err(Error::Precondition("r_max must be at least 2".into()));
        }
        if self.r_max > MAX_INDEX {
            return Err(Error::Domain(format!("r_max exceeds {MAX_INDEX}")));
        }
        if self.dim == 0 {
            return Err(Error::Precondition("dimension must be positive".into()));
        }
        Ok(())
    }
}

/// Units of `Z/r` in increasing order.
pub fn units(r: u64) -> Vec<u64> {
    (1..r.max(2)).filter(|u| u.gcd(&r) == 1).collect()
}

/// Canonical representative of the class of `weights` modulo `r`.
pub fn canonical_weights(r: u64, weights: &[u64]) -> Vec<u64> {
    let reduced: Vec<u64> = weights.iter().map(|&a| a % r).collect();
    let mut best: Option<Vec<u64>> = None;
    let mut buf = Vec::with_capacity(reduced.len());
    for u in units(r) {
        multiply_sorted(r, &reduced, u, &mut buf);
        if best.as_ref().map_or(true, |b| buf < *b) {
            best = Some(buf.clone());
        }
    }
    best.unwrap_or_else(|| {
        let mut s = reduced;
        s.sort_unstable();
        s
    })
}

fn multiply_sorted(r: u64, w: &[u64], u: u64, out: &mut Vec<u64>) {
    out.clear();
    out.extend(w.iter().map(|&a| (a * u) % r));
    out.sort_unstable();
}

/// `true` when the sorted tuple `t` is its own canonical form.
fn is_canonical(r: u64, t: &[u64], units: &[u64], buf: &mut Vec<u64>) -> bool {
    units.iter().all(|&u| {
        multiply_sorted(r, t, u, buf);
        buf.as_slice() >= t
    })
}

/// Calls `f` on every non-decreasing tuple of length `len` drawn from
/// `values` (which must be sorted), each prefixed by `prefix`.
fn for_each_sorted_tuple(prefix: &[u64], values: &[u64], len: usize, f: &mut impl FnMut(&[u64])) {
    let mut idx = vec![0usize; len];
    let mut tuple: Vec<u64> = prefix.to_vec();
    tuple.extend(std::iter::repeat(0).take(len));
    if values.is_empty() && len > 0 {
        return;
    }
    loop {
        for (slot, &i) in idx.iter().enumerate() {
            tuple[prefix.len() + slot] = values[i];
        }
        f(&tuple);
        // advance to the next non-decreasing index vector
        let mut pos = len;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            if idx[pos] + 1 < values.len() {
                idx[pos] += 1;
                let v = idx[pos];
                for later in idx.iter_mut().skip(pos + 1) {
                    *later = v;
                }
                break;
            }
        }
    }
}

/// Smallest numerator `n` with `n / r` not below the interval's left end.
fn numerator_floor(interval: &Interval, r: u64) -> u64 {
    let scaled = interval.lo.scale(r as i64);
    let f = if interval.lo_closed {
        scaled.ceil()
    } else {
        scaled.floor() + 1
    };
    u64::try_from(f).unwrap_or(0)
}

fn scan_one_r(cfg: &ScanConfig, r: u64) -> Vec<SpectrumRecord> {
    let us = units(r);
    let floor = numerator_floor(&cfg.interval, r);
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(cfg.dim);
    let mut visit = |t: &[u64]| {
        let Some((k, num)) = min_numerator_at_least(r, t, floor) else {
            return;
        };
        let mld = Rat::ratio(num as i64, r as i64);
        if !cfg.interval.contains(&mld) || !is_canonical(r, t, &us, &mut buf) {
            return;
        }
        out.push(SpectrumRecord {
            r,
            weights: t.to_vec(),
            mld,
            k,
        });
    };
    if cfg.isolated_only {
        // every isolated class has a representative containing the weight 1
        for_each_sorted_tuple(&[1], &us, cfg.dim - 1, &mut visit);
    } else {
        let all: Vec<u64> = (0..r).collect();
        for_each_sorted_tuple(&[], &all, cfg.dim, &mut visit);
    }
    out.sort_by(|a, b| a.weights.cmp(&b.weights));
    out
}

/// Stream the records of a scan, in order of `r` and then canonical weights,
/// to `sink`. Blocks of `r` values are computed in parallel.
pub fn scan_with(cfg: &ScanConfig, mut sink: impl FnMut(SpectrumRecord)) -> Result<()> {
    cfg.validate()?;
    let block = 64u64;
    let mut start = 2u64;
    let workers = pool::build(cfg.jobs);
    while start <= cfg.r_max {
        let end = (start + block - 1).min(cfg.r_max);
        let run = || -> Vec<Vec<SpectrumRecord>> {
            (start..=end)
                .into_par_iter()
                .map(|r| scan_one_r(cfg, r))
                .collect()
        };
        let chunk = match &workers {
            Some(p) => p.install(run),
            None => run(),
        };
        chunk.into_iter().flatten().for_each(&mut sink);
        start = end + 1;
    }
    Ok(())
}

pub fn scan(cfg: &ScanConfig) -> Result<Vec<SpectrumRecord>> {
    let mut out = Vec::new();
    scan_with(cfg, |rec| out.push(rec))?;
    Ok(out)
}

/// Sorted, deduplicated mld values of a scan.
pub fn distinct_values(cfg: &ScanConfig) -> Result<Vec<Rat>> {
    let mut values: Vec<Rat> = scan(cfg)?.into_iter().map(|r| r.mld).collect();
    values.sort();
    values.dedup();
    Ok(values)
}

/// The quotient `1/(6k+m)(2k, 3k, m)` and its predicted mld `(5k+m)/(6k+m)`.
/// Fails if the computed mld disagrees with the prediction.
pub fn family_example(k: u64, m: u64) -> Result<(CyclicQuotient, Rat)> {
    if k < 1 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    if !(1..=5).contains(&m) {
        return Err(Error::Precondition(format!("m = {m} not in [1, 5]")));
    }
    let r = 6 * k + m;
    let x = CyclicQuotient::new(r, &[2 * k, 3 * k, m])?;
    let expected = Rat::ratio((5 * k + m) as i64, r as i64);
    let got = x.mld();
    if got != expected {
        return Err(Error::Contract(format!(
            "mld of {x} is {got}, expected {expected}"
        )));
    }
    Ok((x, expected))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowCount {
    pub radius: Rat,
    pub count: usize,
}

/// For each radius `w`, the number of distinct mld values in
/// `(target, target + w)`. Uses `cfg`'s dimension, bound and isolation flag;
/// its interval is replaced.
pub fn accumulation_report(cfg: &ScanConfig, target: &Rat, windows: &[Rat]) -> Result<Vec<WindowCount>> {
    if target.is_negative() || target.is_zero() || *target >= cfg.dim as i64 {
        return Err(Error::Precondition(format!(
            "target {target} outside (0, {})",
            cfg.dim
        )));
    }
    if windows.iter().any(|w| w.is_negative() || w.is_zero()) {
        return Err(Error::Precondition("window radii must be positive".into()));
    }
    let Some(widest) = windows.iter().max() else {
        return Ok(Vec::new());
    };
    let scan_cfg = ScanConfig {
        interval: Interval::open(target.clone(), target + widest)?,
        ..cfg.clone()
    };
    let values = distinct_values(&scan_cfg)?;
    Ok(windows
        .iter()
        .map(|w| {
            let hi = target + w;
            WindowCount {
                radius: w.clone(),
                count: values.iter().filter(|v| **v < hi).count(),
            }
        })
        .collect())
}

pub const CSV_HEADER: [&str; 5] = ["r", "weights", "mld_num", "mld_den", "k"];

/// One JSON object per line: `{"r":13,"weights":[1,4,11],"mld":"12/13","k":1}`.
pub fn write_json_line(out: &mut impl Write, rec: &SpectrumRecord) -> std::io::Result<()> {
    serde_json::to_writer(&mut *out, rec)?;
    out.write_all(b"\n")
}

/// CSV rows `r,weights,mld_num,mld_den,k`, weights space-separated.
pub struct CsvSink<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> CsvSink<W> {
    pub fn new(out: W) -> csv::Result<CsvSink<W>> {
        let mut inner = csv::Writer::from_writer(out);
        inner.write_record(CSV_HEADER)?;
        Ok(CsvSink { inner })
    }

    pub fn write(&mut self, rec: &SpectrumRecord) -> csv::Result<()> {
        let ws: Vec<String> = rec.weights.iter().map(u64::to_string).collect();
        self.inner.write_record([
            rec.r.to_string(),
            ws.join(" "),
            rec.mld.numer().to_string(),
            rec.mld.denom().to_string(),
            rec.k.to_string(),
        ])
    }

    pub fn finish(mut self) -> csv::Result<()> {
        self.inner.flush()?;
        Ok(())
    }
}
