use std::io::Write;
use std::path::Path;

use mldlab::hyperquot::{self, HyperquotientDatum, Identity5};
use mldlab::quotient::parse_weight_list;
use mldlab::regions::{self, BoxUnion, Engine, GammaSet};
use mldlab::spectrum::{self, CsvSink, ScanConfig};
use mldlab::verifiers::{self, FivefoldCondition, TermTuple};
use mldlab::{CyclicQuotient, Error, Interval, Rat};
use serde::Serialize;
use serde_json::{json, Value};

use crate::manifest::RunManifest;
use crate::{Cli, Command, Format, HyperquotCmd, MldArgs, RegionsCmd, ScanArgs, VerifyCmd};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Resource(String),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(s) | CliError::Resource(s) | CliError::Io(s) => f.write_str(s),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Resource(_) => 3,
            CliError::Input(_) | CliError::Io(_) => 2,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        match e {
            Error::ResourceLimit { .. } => CliError::Resource(e.to_string()),
            e => CliError::Input(e.to_string()),
        }
    }
}

/// What a command produced: bytes for stdout, a one-line human summary for
/// stderr, the verdict recorded in manifests, and the exit code.
pub struct Outcome {
    pub payload: Vec<u8>,
    pub summary: String,
    pub verdict: Value,
    pub exit: u8,
}

impl Outcome {
    fn text(line: String, verdict: Value) -> Outcome {
        Outcome {
            payload: format!("{line}\n").into_bytes(),
            summary: String::new(),
            verdict,
            exit: 0,
        }
    }

    fn json(payload: &impl Serialize, summary: String, verdict: Value, exit: u8) -> Result<Outcome, CliError> {
        let mut bytes = serde_json::to_vec_pretty(payload).map_err(|e| CliError::Io(e.to_string()))?;
        bytes.push(b'\n');
        Ok(Outcome { payload: bytes, summary, verdict, exit })
    }
}

type Res = Result<Outcome, CliError>;

fn rat(s: &str) -> Result<Rat, CliError> {
    Ok(s.parse::<Rat>()?)
}

fn weights_of(r: u64, text: &str) -> Result<CyclicQuotient, CliError> {
    match parse_weight_list(text) {
        Ok(w) => Ok(CyclicQuotient::new(r, &w)?),
        Err(unsigned_err) => {
            let signed: Result<Vec<i64>, _> = text.split(',').map(|t| t.trim().parse::<i64>()).collect();
            match signed {
                Ok(w) => Ok(CyclicQuotient::from_signed(r, &w)?),
                Err(_) => Err(unsigned_err.into()),
            }
        }
    }
}

fn four(text: &str) -> Result<[u64; 4], CliError> {
    let v = parse_weight_list(text)?;
    v.try_into()
        .map_err(|v: Vec<u64>| CliError::Input(format!("expected 4 entries, got {}", v.len())))
}

pub fn run(cmd: &Command) -> Res {
    match cmd {
        Command::Mld(a) => mld(a),
        Command::Scan(a) => scan(a),
        Command::Regions(c) => regions_cmd(c),
        Command::Verify(c) => verify(c),
        Command::Hyperquot(c) => hyperquot_cmd(c),
        Command::Replay { .. } => Err(CliError::Input("replay cannot be nested".into())),
    }
}

fn mld(a: &MldArgs) -> Res {
    let x = if a.r == 1 && a.w.trim().is_empty() {
        let dim = a.dim.ok_or_else(|| CliError::Input("r = 1 without weights needs --dim".into()))?;
        CyclicQuotient::smooth(dim)?
    } else {
        let x = weights_of(a.r, &a.w)?;
        if let Some(d) = a.dim {
            if d != x.dim() {
                return Err(CliError::Input(format!("--dim {d} but {} weights given", x.dim())));
            }
        }
        x
    };
    if x.r() == 1 {
        let m = x.mld();
        return Ok(Outcome::text(m.to_string(), json!({ "mld": m, "k": null })));
    }
    let (k, m) = x.mld_argmin()?;
    Ok(Outcome::text(format!("{m} (k={k})"), json!({ "mld": m, "k": k })))
}

fn scan_interval(a: &ScanArgs) -> Result<Interval, CliError> {
    let iv: Interval = a.interval.parse()?;
    let lo_closed = iv.lo_closed && !a.open_left;
    let hi_closed = iv.hi_closed || a.closed_right;
    Ok(Interval::new(iv.lo, iv.hi, lo_closed, hi_closed)?)
}

fn scan(a: &ScanArgs) -> Res {
    let cfg = ScanConfig::new(a.dim, a.rmax, scan_interval(a)?, a.isolated).with_jobs(a.jobs);
    if let Some(target) = &a.accumulate {
        let target = rat(target)?;
        let windows = a.windows.as_deref().unwrap_or_default();
        let windows: Vec<Rat> = windows.split(',').map(|w| rat(w.trim())).collect::<Result<_, _>>()?;
        let report = spectrum::accumulation_report(&cfg, &target, &windows)?;
        let summary = format!("{} windows around {target}", report.len());
        let verdict = json!({ "target": target, "windows": report });
        return Outcome::json(&report, summary, verdict, 0);
    }
    if a.distinct {
        let values = spectrum::distinct_values(&cfg)?;
        let summary = format!("{} distinct values", values.len());
        let verdict = json!({ "distinct": values.len() });
        return Outcome::json(&values, summary, verdict, 0);
    }
    let mut buf = Vec::new();
    let mut count = 0usize;
    match a.format {
        Format::Json => {
            spectrum::scan_with(&cfg, |rec| {
                count += 1;
                // Writes into a Vec cannot fail.
                let _ = spectrum::write_json_line(&mut buf, &rec);
            })?;
        }
        Format::Csv => {
            let mut sink = CsvSink::new(&mut buf).map_err(|e| CliError::Io(e.to_string()))?;
            let mut err = None;
            spectrum::scan_with(&cfg, |rec| {
                count += 1;
                if err.is_none() {
                    err = sink.write(&rec).err();
                }
            })?;
            if let Some(e) = err {
                return Err(CliError::Io(e.to_string()));
            }
            sink.finish().map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    Ok(Outcome {
        payload: buf,
        summary: format!("{count} records"),
        verdict: json!({ "records": count }),
        exit: 0,
    })
}

fn parse_k_range(text: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError::Input(format!("bad level range {text:?}; use K or K1..K2"));
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?),
        None => {
            let k = text.trim().parse().map_err(|_| bad())?;
            (k, k)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn regions_cmd(c: &RegionsCmd) -> Res {
    let engine = Engine::from_env();
    match c {
        RegionsCmd::SGrid { nmax, jobs } => {
            let verdicts = regions::verify_s_grid_with(&engine, *nmax, *jobs)?;
            let nonempty: Vec<&str> = verdicts
                .iter()
                .filter(|v| !v.certificate.is_empty())
                .map(|v| v.interval.label.as_str())
                .collect();
            let summary = format!("{} of {} intervals empty", verdicts.len() - nonempty.len(), verdicts.len());
            let verdict = json!({ "intervals": verdicts.len(), "nonempty": nonempty });
            let exit = u8::from(!nonempty.is_empty());
            Outcome::json(&verdicts, summary, verdict, exit)
        }
        RegionsCmd::VlSteps { from, to } => {
            let steps = (*from..=*to)
                .map(|l| regions::verify_vl_step_with(&engine, l))
                .collect::<Result<Vec<_>, _>>()?;
            let unequal: Vec<u64> = steps.iter().filter(|s| !s.equal).map(|s| s.l).collect();
            let summary = format!("{} of {} steps equal", steps.len() - unequal.len(), steps.len());
            let verdict = json!({ "steps": steps.len(), "unequal": unequal });
            let exit = u8::from(!unequal.is_empty());
            Outcome::json(&steps, summary, verdict, exit)
        }
        RegionsCmd::Cases { k, case_id } => {
            let (lo, hi) = parse_k_range(k)?;
            let ids: Vec<u8> = match case_id {
                Some(c) => vec![*c],
                None => (1..=10).collect(),
            };
            let mut rows = Vec::new();
            let mut nonempty = Vec::new();
            for k in lo..=hi {
                for &id in &ids {
                    let cert = regions::verify_case_with(&engine, k, id)?;
                    if !cert.is_empty() {
                        nonempty.push(json!([k, id]));
                    }
                    rows.push(json!({ "k": k, "case": id, "certificate": cert }));
                }
            }
            let summary = format!("{} of {} case systems empty", rows.len() - nonempty.len(), rows.len());
            let exit = u8::from(!nonempty.is_empty());
            let verdict = json!({ "systems": rows.len(), "nonempty": nonempty });
            Outcome::json(&rows, summary, verdict, exit)
        }
        RegionsCmd::System { gamma, gamma_file, expect_empty } => {
            let text = match (gamma, gamma_file) {
                (Some(g), _) => g.clone(),
                (None, Some(p)) => std::fs::read_to_string(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
                (None, None) => return Err(CliError::Input("need --gamma or --gamma-file".into())),
            };
            let gamma = GammaSet::from_json(&text)?;
            let cert = engine.system(&BoxUnion::unit(true), &gamma)?;
            let summary = if cert.is_empty() { "empty".to_string() } else { "nonempty".to_string() };
            let exit = u8::from(*expect_empty && !cert.is_empty());
            let verdict = json!({ "empty": cert.is_empty(), "witness": cert.witness() });
            Outcome::json(&cert, summary, verdict, exit)
        }
    }
}

fn verify(c: &VerifyCmd) -> Res {
    match c {
        VerifyCmd::Terminal { rmax, jobs } => {
            let scan = verifiers::terminal_bruteforce(*rmax, *jobs)?;
            let n = scan.counterexamples.len();
            let summary = format!("{} admissible, {n} counterexamples", scan.admissible);
            let verdict = json!({ "admissible": scan.admissible, "counterexamples": n });
            Outcome::json(&scan, summary, verdict, u8::from(n > 0))
        }
        VerifyCmd::Fourfold { rmax, jobs } => {
            let scan = verifiers::fourfold_gap_scan(*rmax, *jobs)?;
            let n = scan.counterexamples.len();
            let summary = format!("{} in window, {n} counterexamples", scan.in_window);
            let verdict = json!({ "in_window": scan.in_window, "counterexamples": n });
            Outcome::json(&scan, summary, verdict, u8::from(n > 0))
        }
        VerifyCmd::Transfer { tuple, r, a, e, eps } => {
            let t = match (tuple, r, a, e) {
                (Some(text), ..) => {
                    let v = parse_weight_list(text)?;
                    let [r, a1, a2, a3, a4, e]: [u64; 6] = v
                        .try_into()
                        .map_err(|_| CliError::Input("--tuple needs r,a1,a2,a3,a4,e".into()))?;
                    TermTuple::new(r, [a1, a2, a3, a4], e)?
                }
                (None, Some(r), Some(a), Some(e)) => TermTuple::new(*r, four(a)?, *e)?,
                _ => return Err(CliError::Input("need --tuple or all of --r, --a, --e".into())),
            };
            let report = verifiers::transfer_classify(&t, &rat(eps)?)?;
            let verdict = json!({ "case": report.case_tag, "conclusions": report.conclusions });
            let summary = format!("{:?}", report.case_tag);
            Outcome::json(&report, summary, verdict, 0)
        }
        VerifyCmd::Fivefold { rmax, eps, cond, jobs } => {
            let cond: FivefoldCondition = cond.parse()?;
            let found = verifiers::fivefold_scan(*rmax, &rat(eps)?, cond, *jobs)?;
            let summary = format!("{} candidates", found.len());
            let verdict = json!({ "candidates": found.len() });
            Outcome::json(&found, summary, verdict, 0)
        }
        VerifyCmd::Case2 { rmax, eps, jobs } => {
            let reports = verifiers::case2_instances(*rmax, &rat(eps)?, *jobs)?;
            let mut rows = Vec::with_capacity(reports.len());
            let mut failed = 0usize;
            for rep in &reports {
                let lift = verifiers::lift_to_fivefold(rep);
                if lift.is_err() {
                    failed += 1;
                }
                rows.push(json!({
                    "tuple": rep.tuple,
                    "p": rep.p,
                    "q": rep.q,
                    "k1": rep.k1,
                    "lift": lift.as_ref().ok().map(|x| json!({ "r": x.r(), "weights": x.weights(), "mld": x.mld() })),
                    "lift_error": lift.err().map(|e| e.to_string()),
                }));
            }
            let summary = format!("{} instances, {failed} failed lifts", reports.len());
            let verdict = json!({ "instances": reports.len(), "failed_lifts": failed });
            Outcome::json(&rows, summary, verdict, u8::from(failed > 0))
        }
        VerifyCmd::Thm35 { r, w, mu } => {
            let x = weights_of(*r, w)?;
            let check = verifiers::thm35_hypotheses(&x, *mu)?;
            let summary = if check.holds { "hypotheses hold".to_string() } else { "hypotheses fail".to_string() };
            let verdict = json!({ "holds": check.holds, "k": check.k });
            Outcome::json(&check, summary, verdict, 0)
        }
    }
}

fn hyperquot_cmd(c: &HyperquotCmd) -> Res {
    match c {
        HyperquotCmd::Psi { datum, eps, jobs } => {
            let text = std::fs::read_to_string(datum).map_err(|e| CliError::Input(format!("{}: {e}", datum.display())))?;
            let d = HyperquotientDatum::from_json(&text)?;
            let part = hyperquot::psi_classify(&d, &rat(eps)?, *jobs)?;
            let summary = format!(
                "|Psi1| = {}, |Psi2| = {}, rest = {}",
                part.psi1.len(),
                part.psi2.len(),
                part.rest.len()
            );
            let verdict = json!({ "psi1": part.psi1.len(), "psi2": part.psi2.len(), "rest": part.rest.len() });
            Outcome::json(&part, summary, verdict, 0)
        }
        HyperquotCmd::Identity5 { r, a, e } => match hyperquot::identity5_check(*r, &four(a)?, *e)? {
            Identity5::Ok => Ok(Outcome::text("ok".into(), json!({ "ok": true }))),
            Identity5::Exceptions { j } => {
                let list: Vec<String> = j.iter().map(u64::to_string).collect();
                Ok(Outcome::text(format!("exceptions j = {}", list.join(",")), json!({ "ok": false, "j": j })))
            }
        },
        HyperquotCmd::Type { r, a, e, all } => {
            let a = four(a)?;
            let matches = if *all {
                hyperquot::classify_type_all(*r, &a, *e)?
            } else {
                hyperquot::classify_type(*r, &a, *e)?.into_iter().collect()
            };
            let lines: Vec<String> = matches.iter().map(ToString::to_string).collect();
            let text = if lines.is_empty() { "none".to_string() } else { lines.join("\n") };
            Ok(Outcome::text(text, json!({ "matches": lines })))
        }
    }
}

/// Re-run a recorded command and compare its verdict with the recorded one.
/// Exit 0 when they agree, 1 when they differ.
pub fn replay(path: &Path) -> Res {
    let m = RunManifest::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let argv = std::iter::once("mldlab".to_string()).chain(m.parameters.iter().cloned());
    let cli = <Cli as clap::Parser>::try_parse_from(argv).map_err(|e| CliError::Input(e.to_string()))?;
    if matches!(cli.command, Command::Replay { .. }) {
        return Err(CliError::Input("manifest records a replay".into()));
    }
    let (exit, verdict) = match run(&cli.command) {
        Ok(o) => (o.exit, o.verdict),
        Err(e) => (e.exit_code(), json!({ "error": e.to_string() })),
    };
    let same = exit == m.exit_code && verdict == m.verdicts;
    let mut payload = Vec::new();
    let _ = writeln!(payload, "{}", if same { "identical" } else { "differs" });
    Ok(Outcome {
        payload,
        summary: format!("replayed `{}`", m.command),
        verdict: json!({ "identical": same, "exit_code": exit, "verdicts": verdict }),
        exit: u8::from(!same),
    })
}
