//! The acceptance suite: the worked example `X^6 Y^2 (X^2 Y - Z^3)` plus
//! sweeps checking each theorem's statement at desk scale.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::time::Instant;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::apolarity::{catalecticant, contraction_catalecticant, hilbert_function, sperner_stats, GorensteinAlgebra};
use crate::error::Result;
use crate::exactla::{has_full_rank, rank, symbolic_det};
use crate::families::TheoremId;
use crate::harness::{cross_check, Outcome, enumerate_specs, read_records, run_sweep, CrossCheckRecord, RecordStatus, SweepBounds};
use crate::lefschetz::{is_sl_element_in, is_wl_element_in, mixed_hessian_in, mult_map_rank, LinearForm, Mode};
use crate::polyring::{monomials_of_degree, rational, DualPolynomial, Monomial};

pub const WORKED_EXAMPLE: &str = "X1^8*X2^3 - X1^6*X2^2*X3^3";
pub const WORKED_HVECTOR: [usize; 12] = [1, 3, 6, 10, 12, 12, 12, 12, 10, 6, 3, 1];
/// Degree-5 basis of the worked example, as exponent vectors.
pub const WORKED_BASIS_5: [[u32; 3]; 12] = [
    [5, 0, 0],
    [4, 1, 0],
    [4, 0, 1],
    [3, 2, 0],
    [3, 1, 1],
    [3, 0, 2],
    [2, 2, 1],
    [2, 1, 2],
    [2, 0, 3],
    [1, 2, 2],
    [1, 1, 3],
    [0, 2, 3],
];

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}. {}: {} ({} ms)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed_ms
        )
    }
}

fn timed(id: u32, name: &'static str, body: impl FnOnce() -> Result<(bool, String)>) -> CriterionReport {
    let start = Instant::now();
    let outcome = body();
    report(id, name, start, outcome)
}

fn report(id: u32, name: &'static str, start: Instant, outcome: Result<(bool, String)>) -> CriterionReport {
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {}", e)));
    CriterionReport { id, name, passed, detail, elapsed_ms: start.elapsed().as_millis() }
}

/// Exact reproduction of the worked example; must finish within 5 s.
pub fn worked_example() -> CriterionReport {
    timed(1, "worked example", || {
        let start = Instant::now();
        let f = DualPolynomial::parse(WORKED_EXAMPLE)?;
        let alg = GorensteinAlgebra::new(&f)?;
        let mut failures = Vec::new();
        if alg.hvector().entries() != WORKED_HVECTOR {
            failures.push(format!("h-vector {}", alg.hvector()));
        }
        let stats = sperner_stats(alg.hvector());
        if (stats.sperner, stats.flat_length) != (12, 4) {
            failures.push(format!("S={} NS={}", stats.sperner, stats.flat_length));
        }
        let expected: Vec<Monomial> = WORKED_BASIS_5.iter().map(|e| Monomial::new(e.to_vec())).collect();
        if alg.basis(5).monomials != expected {
            failures.push(format!("basis {}", alg.basis(5)));
        }
        let h5 = mixed_hessian_in(&alg, 5, 5)?.matrix;
        if (h5.rows(), h5.cols()) != (12, 12) {
            failures.push(format!("Hessian {}x{}", h5.rows(), h5.cols()));
        }
        let det = symbolic_det(&h5)?;
        let support: Vec<&Monomial> = det.terms().map(|(m, _)| m).collect();
        let x12 = Monomial::new(vec![12, 0, 0]);
        if support != vec![&x12] || det.coeff(&x12).is_zero() {
            failures.push(format!("det {}", det));
        }
        if !has_full_rank(&h5.evaluate(&[rational(1), rational(0), rational(0)])) {
            failures.push("Hessian singular at (1,0,0)".into());
        }
        if !is_wl_element_in(&alg, &LinearForm::var(3, 0))? {
            failures.push("x is not a WL element".into());
        }
        let secs = start.elapsed().as_secs_f64();
        if secs >= 5.0 {
            failures.push(format!("took {:.2} s", secs));
        }
        let ok = failures.is_empty();
        let detail = if ok {
            format!("h={} S=12 NS=4, 12-element basis matches, det(Hess^5) = {}, x is WL", alg.hvector(), det)
        } else {
            failures.join("; ")
        };
        Ok((ok, detail))
    })
}

/// `h_i = h_{d-i}` for all canonical specs with `n ≤ 4`, `d ≤ 10`.
pub fn duality_sweep() -> CriterionReport {
    timed(2, "Gorenstein duality", || {
        let specs = enumerate_specs(&SweepBounds::new(4, 10));
        let bad: Vec<String> = specs
            .par_iter()
            .filter_map(|s| match hilbert_function(&s.polynomial()) {
                Ok(h) if h.is_symmetric() => None,
                Ok(h) => Some(format!("{} {}", s.key(), h)),
                Err(e) => Some(format!("{} {}", s.key(), e)),
            })
            .collect();
        Ok((bad.is_empty(), format!("{} specs, {} asymmetric {:?}", specs.len(), bad.len(), bad.iter().take(3).collect::<Vec<_>>())))
    })
}

/// Every monomial with `n ≤ 4`, `d ≤ 8` has `x_1 + … + x_n` as a strong
/// Lefschetz element.
pub fn monomial_slp() -> CriterionReport {
    timed(3, "monomial SLP", || {
        let monomials: Vec<Monomial> = (1..=4).flat_map(|n| (1..=8).flat_map(move |d| monomials_of_degree(n, d))).collect();
        let bad: Vec<String> = monomials
            .par_iter()
            .filter_map(|m| {
                let f = DualPolynomial::from_monomial(m.clone(), rational(1));
                let ok = GorensteinAlgebra::new(&f)
                    .and_then(|alg| is_sl_element_in(&alg, &LinearForm::all_ones(m.nvars())))
                    .unwrap_or(false);
                (!ok).then(|| f.to_string())
            })
            .collect();
        Ok((bad.is_empty(), format!("{} monomials, {} failures {:?}", monomials.len(), bad.len(), bad.iter().take(3).collect::<Vec<_>>())))
    })
}

/// Evaluated mixed Hessian full rank ⇔ multiplication map full rank, on
/// sampled `(F, s, t, ℓ)`.
pub fn criterion_equivalence(samples: usize, seed: u64) -> CriterionReport {
    timed(4, "Hessian criterion equivalence", || {
        let specs = enumerate_specs(&SweepBounds::new(4, 10));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draws = Vec::with_capacity(samples);
        while draws.len() < samples {
            let spec = specs[rng.gen_range(0..specs.len())].clone();
            let d = spec.degree();
            if d < 1 {
                continue;
            }
            let s = rng.gen_range(0..d);
            let t = rng.gen_range(0..d - s);
            let n = spec.n;
            let ell: Vec<i64> = match rng.gen_range(0..3) {
                0 => (0..n).map(|i| i64::from(i == rng.gen_range(0..n))).collect(),
                1 => vec![1; n],
                _ => (0..n).map(|_| rng.gen_range(-3..=3)).collect(),
            };
            if ell.iter().all(|&c| c == 0) {
                continue;
            }
            draws.push((spec, s, t, ell));
        }
        let results: Vec<Result<(bool, bool)>> = draws
            .par_iter()
            .map(|(spec, s, t, ell)| {
                let alg = GorensteinAlgebra::new(&spec.polynomial())?;
                let d = alg.socle_degree();
                let k = d - s - t;
                let h = mixed_hessian_in(&alg, *s, *t)?.matrix;
                let pt: Vec<_> = ell.iter().map(|&c| rational(c)).collect();
                let hess_full = has_full_rank(&h.evaluate(&pt));
                let r = mult_map_rank(&alg, &LinearForm::from_ints(ell), *s, k)?;
                let map_full = r == alg.h(*s).min(alg.h(s + k));
                Ok((hess_full, map_full))
            })
            .collect();
        let results = results.into_iter().collect::<Result<Vec<_>>>()?;
        let agree = results.iter().filter(|(a, b)| a == b).count();
        let deficient = results.iter().filter(|(_, b)| !b).count();
        let ok = agree == results.len() && results.len() >= 200;
        Ok((ok, format!("{}/{} agree ({} rank-deficient samples)", agree, results.len(), deficient)))
    })
}

/// Cross-checks every canonical spec with `n ≤ max_vars`, `d ≤ max_degree` in
/// CERTIFY mode, in memory.
pub fn soundness_records(max_vars: usize, max_degree: u32, seed: u64) -> Result<Vec<CrossCheckRecord>> {
    let bounds = SweepBounds { mode: Mode::Certify, seed, ..SweepBounds::new(max_vars, max_degree) };
    enumerate_specs(&bounds).par_iter().map(|s| cross_check(s, &bounds)).collect()
}

pub fn soundness(records: &[CrossCheckRecord]) -> CriterionReport {
    let start = Instant::now();
    let mut confirmed = 0;
    let mut by_theorem: BTreeMap<TheoremId, usize> = BTreeMap::new();
    let mut refuted: BTreeMap<TheoremId, usize> = BTreeMap::new();
    let mut unconfirmed: BTreeMap<TheoremId, usize> = BTreeMap::new();
    let mut skipped = 0;
    let mut first_bad = Vec::new();
    for r in records {
        if r.status == RecordStatus::Skipped {
            skipped += 1;
            continue;
        }
        for c in &r.checks {
            *by_theorem.entry(c.theorem).or_default() += 1;
            match c.outcome {
                Outcome::Confirmed => confirmed += 1,
                Outcome::Refuted => *refuted.entry(c.theorem).or_default() += 1,
                Outcome::Unconfirmed => *unconfirmed.entry(c.theorem).or_default() += 1,
            }
        }
        if (!r.agreement || !r.fully_confirmed()) && first_bad.len() < 3 {
            first_bad.push(r.key.clone());
        }
    }
    let fmt = |m: &BTreeMap<TheoremId, usize>| m.iter().map(|(k, v)| format!("{}:{}", k, v)).collect::<Vec<_>>().join(" ");
    let ok = refuted.is_empty() && unconfirmed.is_empty() && skipped == 0;
    let detail = format!(
        "{} specs, {}/{} checks confirmed [{}], refuted [{}], unconfirmed [{}], {} skipped, e.g. {:?}",
        records.len(),
        confirmed,
        by_theorem.values().sum::<usize>(),
        fmt(&by_theorem),
        fmt(&refuted),
        fmt(&unconfirmed),
        skipped,
        first_bad
    );
    report(5, "theorem soundness", start, Ok((ok, detail)))
}

pub fn ci_family1(records: &[CrossCheckRecord]) -> CriterionReport {
    let start = Instant::now();
    let flagged: Vec<&CrossCheckRecord> = records
        .iter()
        .filter(|r| r.classification.as_ref().is_some_and(|c| c.get(TheoremId::Family1Ci).is_some()))
        .collect();
    let bad: Vec<&str> = flagged
        .iter()
        .filter(|r| !r.ci.as_ref().is_some_and(|e| e.annihilates && e.series_match))
        .map(|r| r.key.as_str())
        .collect();
    let ok = bad.is_empty() && !flagged.is_empty();
    report(6, "family1 complete intersections", start, Ok((ok, format!("{} instances, {} failed {:?}", flagged.len(), bad.len(), bad.iter().take(3).collect::<Vec<_>>()))))
}

/// Rank of the differentiation and contraction catalecticants agree on
/// random binomials from the sweep bounds (`n ≤ 4`, `d ≤ 10`, relabeled, with
/// random nonzero coefficients) and random monomials. With three or more
/// terms the ranks can differ: they are the ranks of `F` and of
/// `Σ c_γ γ! X^γ`.
pub fn convention_invariance(count: usize, seed: u64) -> CriterionReport {
    timed(7, "convention invariance", || {
        let specs = enumerate_specs(&SweepBounds::new(4, 10));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeff = |rng: &mut ChaCha8Rng| rational(rng.gen_range(1..=7) * if rng.gen_bool(0.5) { 1 } else { -1 });
        let mut forms = Vec::new();
        while forms.len() < count {
            if rng.gen_bool(0.2) {
                let n = rng.gen_range(1..=4);
                let monos = monomials_of_degree(n, rng.gen_range(1..=8));
                let m = monos[rng.gen_range(0..monos.len())].clone();
                forms.push(DualPolynomial::from_monomial(m, coeff(&mut rng)));
                continue;
            }
            let spec = &specs[rng.gen_range(0..specs.len())];
            let mut perm: Vec<usize> = (0..spec.n).collect();
            perm.shuffle(&mut rng);
            let (c1, c2) = (coeff(&mut rng), coeff(&mut rng));
            let f = DualPolynomial::from_terms(spec.n, [(spec.m1(), c1), (spec.m2(), c2)]);
            forms.push(f.permuted(&perm));
        }
        let bad: Vec<String> = forms
            .par_iter()
            .filter_map(|f| {
                let d = f.degree().expect("nonzero");
                let same = (0..=d).all(|t| match (catalecticant(f, t), contraction_catalecticant(f, t)) {
                    (Ok(a), Ok(b)) => rank(&a) == rank(&b),
                    _ => false,
                });
                (!same).then(|| f.to_string())
            })
            .collect();
        Ok((bad.is_empty(), format!("{} forms, {} mismatches", forms.len(), bad.len())))
    })
}

/// Bounds of the codimension-4 failure search.
pub fn failure_search_bounds(seed: u64) -> SweepBounds {
    SweepBounds { min_vars: 4, big_gcd: true, mode: Mode::Certify, seed, ..SweepBounds::new(4, 12) }
}

/// Runs the codimension-4, `deg g ≥ ⌊(d-1)/2⌋`, `d ≤ 12` search into `out`
/// and checks that it completed and that every failure is certified.
pub fn failure_discovery(out: &Path, seed: u64) -> CriterionReport {
    timed(8, "codimension-4 failure search", || {
        let bounds = failure_search_bounds(seed);
        let expected = enumerate_specs(&bounds).len();
        let summary = run_sweep(&bounds, out)?;
        let records = read_records(out)?;
        let uncertified: Vec<&str> = records
            .iter()
            .filter(|r| {
                [&r.wlp, &r.slp].into_iter().flatten().any(|v| v.fails() && !v.is_certified_failure())
            })
            .map(|r| r.key.as_str())
            .collect();
        let wlp_fail: Vec<&str> =
            records.iter().filter(|r| r.wlp.as_ref().is_some_and(|v| v.fails())).map(|r| r.key.as_str()).collect();
        let complete = records.len() == expected && summary.skipped == 0;
        let ok = complete && uncertified.is_empty();
        Ok((
            ok,
            format!(
                "{} specs scanned, {} certified WLP failures {:?}, {} certified SLP failures, {} uncertified, {} skipped",
                records.len(),
                wlp_fail.len(),
                wlp_fail.iter().take(5).collect::<Vec<_>>(),
                summary.certified_slp_failures,
                uncertified.len(),
                summary.skipped
            ),
        ))
    })
}

/// Runs every criterion, handing each report to `sink` as it completes; the
/// failure search writes to `search_out`.
pub fn run_suite(search_out: &Path, seed: u64, sink: &mut dyn FnMut(&CriterionReport)) -> Vec<CriterionReport> {
    let mut out = Vec::new();
    let mut push = |r: CriterionReport| {
        sink(&r);
        out.push(r);
    };
    push(worked_example());
    push(duality_sweep());
    push(monomial_slp());
    push(criterion_equivalence(250, seed));
    let start = Instant::now();
    match soundness_records(5, 10, seed) {
        Ok(records) => {
            push(soundness(&records));
            push(ci_family1(&records));
        }
        Err(e) => {
            push(report(5, "theorem soundness", start, Err(e)));
        }
    }
    push(convention_invariance(100, seed));
    push(failure_discovery(search_out, seed));
    out
}
