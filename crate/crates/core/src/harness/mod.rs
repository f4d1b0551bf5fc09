//! Enumeration of binomial specs, theorem-versus-oracle cross checks, and
//! resumable JSONL sweeps.

use std::collections::{BTreeSet, HashSet};
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Read, Seek, SeekFrom, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::apolarity::{sperner_stats, GorensteinAlgebra, HVector, SpernerStats};
use crate::error::{Error, Result};
use crate::families::{
    classify, flat_transfer_for_spec, verify_ci_family1, BinomialSpec, CiEvidence, ClassificationReport, Guarantee,
    Overall, TheoremId, TheoremMatch,
};
use crate::lefschetz::{decide_slp_in, decide_wlp_in, is_wl_element_in, DecideOptions, Mode, Verdict, DEFAULT_CONFIDENCE};

pub mod suite;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepBounds {
    pub min_vars: usize,
    pub max_vars: usize,
    pub max_degree: u32,
    pub max_gcd_degree: Option<u32>,
    /// Keep only specs with `deg g ≥ ⌊(d-1)/2⌋`, where the gcd criterion is
    /// silent.
    pub big_gcd: bool,
    pub mode: Mode,
    pub seed: u64,
    pub jobs: usize,
    pub confidence: f64,
}

impl SweepBounds {
    pub fn new(max_vars: usize, max_degree: u32) -> Self {
        SweepBounds {
            min_vars: 2,
            max_vars,
            max_degree,
            max_gcd_degree: None,
            big_gcd: false,
            mode: Mode::Fast,
            seed: 0,
            jobs: rayon::current_num_threads(),
            confidence: DEFAULT_CONFIDENCE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_vars == 0 || self.max_degree == 0 || self.jobs == 0 {
            return Err(Error::input("sweep bounds must be positive"));
        }
        if self.min_vars > self.max_vars {
            return Err(Error::input("min_vars exceeds max_vars"));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::input("confidence must lie in (0,1)"));
        }
        Ok(())
    }

    fn admits(&self, s: &BinomialSpec) -> bool {
        let g = s.gcd_degree();
        let d = s.degree();
        self.max_gcd_degree.is_none_or(|m| g <= m) && (!self.big_gcd || g >= d.saturating_sub(1) / 2)
    }

    /// Options for one spec; the seed depends on the spec key only.
    pub fn decide_options(&self, key: &str) -> DecideOptions {
        DecideOptions { confidence: self.confidence, ..DecideOptions::new(self.mode, self.seed ^ fnv1a(key)) }
    }
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

/// Non-increasing sequences of `(b, a)` pairs with `b ≥ 1`, of length `len`,
/// `Σ b = bsum`, `Σ a ≤ abudget`, each pair at most `cap`.
fn sided_blocks(len: usize, bsum: u32, abudget: u32, cap: (u32, u32), prefix: &mut Vec<(u32, u32)>, out: &mut Vec<Vec<(u32, u32)>>) {
    if len == 0 {
        if bsum == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    if bsum < len as u32 {
        return;
    }
    for b in (1..=cap.0.min(bsum - (len as u32 - 1))).rev() {
        let amax = if b == cap.0 { cap.1.min(abudget) } else { abudget };
        for a in (0..=amax).rev() {
            prefix.push((b, a));
            sided_blocks(len - 1, bsum - b, abudget - a, (b, a), prefix, out);
            prefix.pop();
        }
    }
}

/// Non-increasing sequences of positive `a` of length `len` with sum at most
/// `budget`.
fn zero_blocks(len: usize, budget: u32, cap: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if len == 0 {
        out.push(prefix.clone());
        return;
    }
    for a in (1..=cap.min(budget)).rev() {
        prefix.push(a);
        zero_blocks(len - 1, budget - a, a, prefix, out);
        prefix.pop();
    }
}

/// All canonical specs within the bounds, sorted by `(n, r, a, b)`. Every
/// variable occurs: a variable outside the binomial factor has `a > 0`.
pub fn enumerate_specs(bounds: &SweepBounds) -> Vec<BinomialSpec> {
    let mut set = BTreeSet::new();
    let dmax = bounds.max_degree;
    for n in bounds.min_vars.max(2)..=bounds.max_vars {
        for p in 1..n {
            for q in 1..=(n - p) {
                let z = n - p - q;
                for e in 1..=dmax {
                    let budget = dmax - e;
                    let mut lefts = Vec::new();
                    sided_blocks(p, e, budget, (e, budget), &mut Vec::new(), &mut lefts);
                    for l in &lefts {
                        let used_l: u32 = l.iter().map(|x| x.1).sum();
                        let mut rights = Vec::new();
                        sided_blocks(q, e, budget - used_l, (e, budget - used_l), &mut Vec::new(), &mut rights);
                        for rt in &rights {
                            let used = used_l + rt.iter().map(|x| x.1).sum::<u32>();
                            let mut zs = Vec::new();
                            zero_blocks(z, budget - used, budget - used, &mut Vec::new(), &mut zs);
                            for zb in &zs {
                                let a: Vec<u32> = l.iter().map(|x| x.1).chain(rt.iter().map(|x| x.1)).chain(zb.iter().copied()).collect();
                                let b: Vec<u32> = l.iter().map(|x| x.0).chain(rt.iter().map(|x| x.0)).chain(zb.iter().map(|_| 0)).collect();
                                let spec = BinomialSpec { n, r: p, a, b }.canonical();
                                if bounds.admits(&spec) {
                                    set.insert(spec);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    set.into_iter().collect()
}

/// Whether a theorem's claim was borne out by the oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Confirmed,
    /// Contradicted by an exact computation or a certified failure.
    Refuted,
    /// The oracle gave only an uncertified failure.
    Unconfirmed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub theorem: TheoremId,
    pub claim: String,
    pub outcome: Outcome,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum RecordStatus {
    Checked,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossCheckRecord {
    pub key: String,
    pub spec: BinomialSpec,
    pub polynomial: String,
    pub status: RecordStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hvector: Option<HVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sperner: Option<SpernerStats>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wlp: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slp: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ci: Option<CiEvidence>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckOutcome>,
    pub agreement: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped_reason: Option<String>,
    pub mode: Mode,
    /// Sweep seed; the per-spec search seed is derived from it and the key.
    pub seed: u64,
    /// Wall-clock time; informational and excluded from comparisons.
    pub timing_ms: u64,
}

impl CrossCheckRecord {
    /// Every theorem claim for the spec was confirmed.
    pub fn fully_confirmed(&self) -> bool {
        self.checks.iter().all(|c| c.outcome == Outcome::Confirmed)
    }

    pub fn without_timing(&self) -> CrossCheckRecord {
        CrossCheckRecord { timing_ms: 0, ..self.clone() }
    }
}

fn property_outcome(v: &Verdict) -> Outcome {
    if v.holds() {
        Outcome::Confirmed
    } else if v.is_certified_failure() {
        Outcome::Refuted
    } else {
        Outcome::Unconfirmed
    }
}

fn exact(ok: bool) -> Outcome {
    if ok {
        Outcome::Confirmed
    } else {
        Outcome::Refuted
    }
}

fn check_match(
    m: &TheoremMatch,
    alg: &GorensteinAlgebra,
    spec: &BinomialSpec,
    ns: usize,
    wlp: &Verdict,
    slp: &Verdict,
    ci: &mut Option<CiEvidence>,
) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let push = |out: &mut Vec<CheckOutcome>, claim: String, outcome| out.push(CheckOutcome { theorem: m.theorem, claim, outcome });
    match m.property {
        Guarantee::Wlp => push(&mut out, "WLP".into(), property_outcome(wlp)),
        Guarantee::Slp => push(&mut out, "SLP".into(), property_outcome(slp)),
        Guarantee::Ci => {
            let ev = verify_ci_family1(spec)?;
            push(&mut out, "CI".into(), exact(ev.holds));
            *ci = Some(ev);
        }
        Guarantee::Ns => {}
    }
    if let Some(w) = &m.witness {
        push(&mut out, format!("WL element {}", w), exact(is_wl_element_in(alg, w)?));
    }
    if let Some(bound) = m.ns_lower_bound {
        push(&mut out, format!("NS >= {}", bound), exact(bound <= ns as i64));
    }
    Ok(out)
}

/// Runs the Hilbert function, classification, both deciders, and every
/// check a theorem match implies. Capacity errors become SKIPPED records.
pub fn cross_check(spec: &BinomialSpec, bounds: &SweepBounds) -> Result<CrossCheckRecord> {
    let start = Instant::now();
    let key = spec.key();
    let opts = bounds.decide_options(&key);
    let mut record = CrossCheckRecord {
        key: key.clone(),
        spec: spec.clone(),
        polynomial: spec.polynomial().to_string(),
        status: RecordStatus::Checked,
        hvector: None,
        sperner: None,
        classification: None,
        wlp: None,
        slp: None,
        ci: None,
        checks: Vec::new(),
        agreement: true,
        skipped_reason: None,
        mode: bounds.mode,
        seed: bounds.seed,
        timing_ms: 0,
    };
    match fill_record(&mut record, spec, &opts) {
        Ok(()) => {}
        Err(Error::Capacity(msg)) => {
            record.status = RecordStatus::Skipped;
            record.skipped_reason = Some(msg);
            record.checks.clear();
        }
        Err(e) => return Err(e),
    }
    record.timing_ms = start.elapsed().as_millis() as u64;
    Ok(record)
}

fn fill_record(record: &mut CrossCheckRecord, spec: &BinomialSpec, opts: &DecideOptions) -> Result<()> {
    let alg = GorensteinAlgebra::new(&spec.polynomial())?;
    let stats = sperner_stats(alg.hvector());
    record.hvector = Some(alg.hvector().clone());
    record.sperner = Some(stats.clone());
    let mut report = classify(spec);
    if let Some(m) = flat_transfer_for_spec(spec, opts)? {
        report = ClassificationReport::new(spec, report.matches.into_iter().chain([m]).collect());
    }
    let wlp = decide_wlp_in(&alg, opts)?;
    let slp = decide_slp_in(&alg, opts)?;
    let mut ci = None;
    let mut checks = Vec::new();
    for m in &report.matches {
        checks.extend(check_match(m, &alg, spec, stats.flat_length, &wlp, &slp, &mut ci)?);
    }
    // SLP implies WLP for any algebra, so a confirmed SLP with a WLP failure
    // would be an internal inconsistency.
    if slp.holds() && wlp.is_certified_failure() {
        return Err(Error::Verification(format!("{}: SLP holds but WLP certified to fail", spec.key())));
    }
    record.agreement = checks.iter().all(|c| c.outcome != Outcome::Refuted);
    record.classification = Some(report);
    record.wlp = Some(wlp);
    record.slp = Some(slp);
    record.ci = ci;
    record.checks = checks;
    Ok(())
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub total: usize,
    pub computed: usize,
    pub agreements: usize,
    pub disagreements: usize,
    pub theorem_covered: usize,
    pub unknown: usize,
    pub wlp_failures: usize,
    pub slp_failures: usize,
    pub certified_wlp_failures: usize,
    pub certified_slp_failures: usize,
    pub skipped: usize,
}

impl SweepSummary {
    fn add(&mut self, r: &CrossCheckRecord) {
        self.total += 1;
        if r.status == RecordStatus::Skipped {
            self.skipped += 1;
            return;
        }
        if r.agreement {
            self.agreements += 1;
        } else {
            self.disagreements += 1;
        }
        match r.classification.as_ref().map(|c| c.overall) {
            Some(Overall::Unknown) | None => self.unknown += 1,
            Some(_) => self.theorem_covered += 1,
        }
        if let Some(v) = &r.wlp {
            self.wlp_failures += v.fails() as usize;
            self.certified_wlp_failures += v.is_certified_failure() as usize;
        }
        if let Some(v) = &r.slp {
            self.slp_failures += v.fails() as usize;
            self.certified_slp_failures += v.is_certified_failure() as usize;
        }
    }
}

/// Reads complete records from a JSONL file, dropping a trailing partial
/// line left by an interrupted run.
pub fn read_records(path: &Path) -> Result<Vec<CrossCheckRecord>> {
    let mut text = String::new();
    File::open(path)?.read_to_string(&mut text)?;
    let complete = match text.rfind('\n') {
        Some(i) => &text[..=i],
        None => "",
    };
    complete.lines().filter(|l| !l.trim().is_empty()).map(|l| Ok(serde_json::from_str(l)?)).collect()
}

/// Cross-checks every spec in the bounds, appending one JSON record per line
/// to `path`. Specs whose key is already present are not recomputed. Records
/// are written in enumeration order, so a fresh run is deterministic up to
/// the timing field.
pub fn run_sweep(bounds: &SweepBounds, path: &Path) -> Result<SweepSummary> {
    run_sweep_specs(&enumerate_specs(bounds), bounds, path)
}

pub fn run_sweep_specs(specs: &[BinomialSpec], bounds: &SweepBounds, path: &Path) -> Result<SweepSummary> {
    bounds.validate()?;
    let mut summary = SweepSummary::default();
    let mut done = HashSet::new();
    if path.exists() {
        let records = read_records(path)?;
        let valid_len: u64 = {
            let mut text = String::new();
            File::open(path)?.read_to_string(&mut text)?;
            text.rfind('\n').map_or(0, |i| i as u64 + 1)
        };
        let f = OpenOptions::new().write(true).open(path)?;
        f.set_len(valid_len)?;
        for r in &records {
            done.insert(r.key.clone());
            summary.add(r);
        }
    }
    let todo: Vec<&BinomialSpec> = specs.iter().filter(|s| !done.contains(&s.key())).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(bounds.jobs)
        .build()
        .map_err(|e| Error::input(format!("thread pool: {}", e)))?;
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    file.seek(SeekFrom::End(0))?;
    let mut out = BufWriter::new(file);
    for chunk in todo.chunks(bounds.jobs * 8) {
        let records: Vec<Result<CrossCheckRecord>> = pool.install(|| chunk.par_iter().map(|s| cross_check(s, bounds)).collect());
        for r in records {
            let r = r?;
            serde_json::to_writer(&mut out, &r)?;
            out.write_all(b"\n")?;
            summary.add(&r);
            summary.computed += 1;
        }
        out.flush()?;
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_small_cases() {
        assert!(enumerate_specs(&SweepBounds { min_vars: 1, ..SweepBounds::new(1, 5) }).is_empty());
        let specs = enumerate_specs(&SweepBounds::new(2, 3));
        let keys: Vec<String> = specs.iter().map(BinomialSpec::key).collect();
        assert!(keys.contains(&"n2r1a0,0b2,2".to_string()));
        assert!(keys.contains(&"n2r1a1,0b1,1".to_string()));
        let mut sorted = specs.clone();
        sorted.sort();
        assert_eq!(sorted, specs);
        assert!(specs.iter().all(|s| s.canonical() == *s));
    }

    #[test]
    fn bounds_filters() {
        let all = enumerate_specs(&SweepBounds::new(3, 6));
        let big = enumerate_specs(&SweepBounds { big_gcd: true, ..SweepBounds::new(3, 6) });
        assert!(big.len() < all.len());
        assert!(big.iter().all(|s| s.gcd_degree() >= (s.degree() - 1) / 2));
        let capped = enumerate_specs(&SweepBounds { max_gcd_degree: Some(0), ..SweepBounds::new(3, 6) });
        assert!(capped.iter().all(|s| s.gcd_degree() == 0));
        assert!(SweepBounds { jobs: 0, ..SweepBounds::new(3, 6) }.validate().is_err());
    }

    #[test]
    fn cross_check_worked_example() {
        let spec = BinomialSpec::new(3, 2, vec![6, 2, 0], vec![2, 1, 3]).unwrap();
        let r = cross_check(&spec, &SweepBounds { mode: Mode::Certify, ..SweepBounds::new(3, 11) }).unwrap();
        assert!(r.agreement && r.fully_confirmed());
        assert!(r.wlp.as_ref().unwrap().holds());
        assert_eq!(r.hvector.as_ref().unwrap().entries(), &[1, 3, 6, 10, 12, 12, 12, 12, 10, 6, 3, 1]);
    }
}
