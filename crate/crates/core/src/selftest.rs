//! Randomized invariant suite: seven criteria, each run on seeded instances
//! against the oracles in [`crate::reference`] and the closed forms.
//!
//! Every criterion derives its own stream from the base seed, so criteria can
//! run concurrently while the combined report stays byte-identical.

use std::fmt;
use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::extension::{choquet, choquet_shifted, BoundedFunction};
use crate::fubini::{lln_run, lopsided_check};
use crate::generate::{self, SubmodularFamily};
use crate::interval::{ae_gap, choquet_interval_with, Extension};
use crate::predicates::{conjugate, is_submodular};
use crate::reference;
use crate::setfn::SetFunction;
use crate::subset::SubsetMask;
use crate::uncross::{certify_chain_equality, family_sum, uncross_observed};
use crate::variation::{canonical_decomposition, submodular_variation_closed_form, total_variation};

/// Comparison tolerance used by every criterion.
pub const TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub checks: usize,
    pub detail: String,
    /// First few failed checks.
    pub failures: Vec<String>,
    #[serde(skip)]
    pub seconds: f64,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{status}] {}. {}: {} ({} checks)", self.id, self.name, self.detail, self.checks)?;
        for failure in &self.failures {
            write!(f, "\n    {failure}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub criteria: Vec<CriterionReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }
}

/// Counts checks and keeps the first few failures.
struct Tally {
    checks: usize,
    failed: usize,
    failures: Vec<String>,
}

impl Tally {
    const KEEP: usize = 5;

    fn new() -> Self {
        Tally { checks: 0, failed: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, message: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < Self::KEEP {
                self.failures.push(message());
            }
        }
    }

    fn finish(self, id: u8, name: &'static str, detail: String, started: Instant) -> CriterionReport {
        let detail = if self.failed > 0 { format!("{detail}; {} failed", self.failed) } else { detail };
        CriterionReport {
            id,
            name,
            passed: self.failed == 0,
            checks: self.checks,
            detail,
            failures: self.failures,
            seconds: started.elapsed().as_secs_f64(),
        }
    }
}

fn stream(seed: u64, criterion: u64) -> ChaCha8Rng {
    generate::rng(generate::derive_seed(seed, criterion))
}

fn indicator(n: usize, s: SubsetMask) -> BoundedFunction {
    BoundedFunction::indicator(n, s)
}

fn ext(phi: &SetFunction, f: &BoundedFunction) -> f64 {
    choquet(phi, f).expect("dimensions match by construction")
}

/// Subadditivity of the extension exactly when the setfunction is submodular.
pub fn criterion_1(seed: u64) -> CriterionReport {
    let started = Instant::now();
    let mut rng = stream(seed, 1);
    let mut t = Tally::new();
    let (mut submodular, mut worst_slack) = (0usize, f64::INFINITY);
    for i in 0..500 {
        let n = rng.gen_range(3..=6);
        let phi = if rng.gen_bool(0.4) {
            generate::random_submodular_table(&mut rng, n, false).to_table_function()
        } else {
            generate::random_table(&mut rng, n, false)
        };
        let verdict = is_submodular(&phi, TOL);
        let pairwise = reference::max_pairwise_submodular_violation(&phi);
        t.check(verdict.holds == (pairwise <= TOL), || {
            format!("φ#{i}: local test says {} but pairwise violation is {pairwise:e}", verdict.holds)
        });
        match verdict.witness {
            None => {
                submodular += 1;
                for _ in 0..100 {
                    let f = generate::random_bounded(&mut rng, n, 2.0);
                    let g = generate::random_bounded(&mut rng, n, 2.0);
                    let slack = ext(&phi, &f) + ext(&phi, &g) - ext(&phi, &f.add(&g));
                    worst_slack = worst_slack.min(slack);
                    t.check(slack >= -TOL, || format!("φ#{i}: subadditivity slack {slack:e}"));
                }
            }
            Some(w) => {
                let excess = ext(&phi, &indicator(n, w.x).add(&indicator(n, w.y)))
                    - ext(&phi, &indicator(n, w.x))
                    - ext(&phi, &indicator(n, w.y));
                t.check(excess >= w.violation - TOL, || {
                    format!("φ#{i}: witness {} {} excess {excess} below violation {}", w.x, w.y, w.violation)
                });
            }
        }
    }
    let detail = format!(
        "500 setfunctions, {submodular} submodular; worst subadditivity slack {worst_slack:.3e}; every witness pair violates"
    );
    t.finish(1, "convexity iff submodularity", detail, started)
}

/// Closed form of the total variation for submodular setfunctions.
pub fn criterion_2(seed: u64) -> CriterionReport {
    let started = Instant::now();
    let mut rng = stream(seed, 2);
    let mut t = Tally::new();
    let (mut worst_closed, mut oracle_runs) = (0.0f64, 0usize);
    for i in 0..200 {
        let n = rng.gen_range(1..=10);
        let (phi, dyadic) = match i % 4 {
            0 => (generate::random_submodular(&mut rng, n, SubmodularFamily::Cut), true),
            1 => (generate::random_submodular(&mut rng, n, SubmodularFamily::Coverage), true),
            2 => (generate::random_submodular(&mut rng, n, SubmodularFamily::ConcaveOfModular), false),
            _ => (generate::random_submodular_table(&mut rng, n, true), true),
        };
        let k = total_variation(&phi);
        match submodular_variation_closed_form(&phi, TOL) {
            Ok(closed) => {
                worst_closed = worst_closed.max((k - closed).abs());
                t.check((k - closed).abs() <= TOL, || format!("#{i} n={n}: K = {k}, closed form {closed}"));
            }
            Err(e) => t.check(false, || format!("#{i}: generated instance rejected: {e}")),
        }
        if n <= 6 {
            oracle_runs += 1;
            let oracle = reference::variation_all_predecessors(&phi);
            let ok = if dyadic { k == oracle } else { (k - oracle).abs() <= 1e-12 };
            t.check(ok, || format!("#{i} n={n}: DP {k} vs all-predecessor oracle {oracle}"));
        }
    }
    let detail = format!(
        "200 submodular instances, max |K - (2·max φ - φ(J))| = {worst_closed:.1e}; {oracle_runs} matched the O(3^n) oracle"
    );
    t.finish(2, "variation closed form", detail, started)
}

/// Canonical decomposition into increasing parts.
pub fn criterion_3(seed: u64) -> CriterionReport {
    let started = Instant::now();
    let mut rng = stream(seed, 3);
    let mut t = Tally::new();
    let mut worst = 0.0f64;
    for i in 0..200 {
        let n = rng.gen_range(1..=8);
        let phi = if i % 3 == 0 {
            generate::random_submodular_table(&mut rng, n, true).to_table_function()
        } else {
            generate::random_table(&mut rng, n, true)
        };
        let d = canonical_decomposition(&phi);
        let table = phi.table();
        for s in 0..table.len() {
            for x in (0..n).filter(|&x| s & (1 << x) == 0) {
                let up = s | 1 << x;
                t.check(d.mu[up] >= d.mu[s] && d.nu[up] >= d.nu[s], || {
                    format!("#{i}: decomposition decreases on {} ⊂ {}", SubsetMask(s as u32), SubsetMask(up as u32))
                });
            }
            t.check(d.mu[s] - d.nu[s] == table[s], || format!("#{i}: μ - ν ≠ φ at {}", SubsetMask(s as u32)));
            t.check(d.mu[s] <= d.variation + TOL && d.nu[s] <= d.variation + TOL, || {
                format!("#{i}: μ or ν exceeds K = {} at {}", d.variation, SubsetMask(s as u32))
            });
        }
        if n <= 6 {
            let oracle = reference::positive_variation_all_predecessors(&phi);
            t.check(oracle == d.mu, || format!("#{i}: μ differs from the all-predecessor oracle"));
        }
        let (mu, nu) = (d.mu_function(&phi), d.nu_function(&phi));
        for _ in 0..50 {
            let f = generate::random_bounded(&mut rng, n, 2.0);
            let gap = (ext(&phi, &f) - (ext(&mu, &f) - ext(&nu, &f))).abs();
            worst = worst.max(gap);
            t.check(gap <= TOL, || format!("#{i}: ŵφ(f) - (ŵμ(f) - ŵν(f)) = {gap:e}"));
        }
    }
    let detail = format!("200 instances, μ - ν = φ bit-exact; max extension gap {worst:.1e}");
    t.finish(3, "canonical decomposition", detail, started)
}

/// Homogeneity, translation, reflection, linearity, shift independence, Lipschitz.
pub fn criterion_4(seed: u64) -> CriterionReport {
    let started = Instant::now();
    let mut rng = stream(seed, 4);
    let mut t = Tally::new();
    let draw = |rng: &mut ChaCha8Rng, n: usize| {
        if rng.gen_bool(0.5) {
            generate::random_table(rng, n, false)
        } else {
            generate::random_submodular_table(rng, n, false)
        }
    };
    let close = |a: f64, b: f64| (a - b).abs() <= TOL * (1.0 + a.abs().max(b.abs()));
    for i in 0..1000 {
        let n = rng.gen_range(1..=6);
        let phi = draw(&mut rng, n);
        let psi = draw(&mut rng, n);
        let f = generate::random_bounded(&mut rng, n, 2.0);
        let g = generate::random_bounded(&mut rng, n, 2.0);
        let a = rng.gen_range(0.0..3.0);
        let b = rng.gen_range(-3.0..3.0);
        let c = rng.gen_range(-3.0..3.0);
        let wf = ext(&phi, &f);

        let perm = reference::lovasz_permutation(&phi, &f);
        t.check(close(wf, perm), || format!("#{i} level sum {wf} vs permutation form {perm}"));

        let lhs = ext(&phi, &f.scale(a));
        t.check(close(lhs, a * wf), || format!("#{i} homogeneity: {lhs} vs {}", a * wf));

        let lhs = ext(&phi, &f.shift(c));
        let rhs = wf + c * phi.full_value();
        t.check(close(lhs, rhs), || format!("#{i} translation: {lhs} vs {rhs}"));

        let star = conjugate(&phi);
        let lhs = ext(&phi, &f.scale(-1.0));
        let rhs = -ext(&star, &f);
        t.check(close(lhs, rhs), || format!("#{i} reflection: {lhs} vs {rhs}"));

        let combo = SetFunction::linear_combination(a, &phi, b, &psi).expect("same ground set");
        let lhs = ext(&combo, &f);
        let rhs = a * wf + b * ext(&psi, &f);
        t.check(close(lhs, rhs), || format!("#{i} linearity: {lhs} vs {rhs}"));

        let base = f.norm();
        let c1 = base + rng.gen_range(0.0..2.0);
        let c2 = base + rng.gen_range(0.0..5.0);
        let s1 = choquet_shifted(&phi, &f, c1).expect("shift covers the minimum");
        let s2 = choquet_shifted(&phi, &f, c2).expect("shift covers the minimum");
        t.check(close(s1, s2), || format!("#{i} shift independence: c={c1} gives {s1}, c={c2} gives {s2}"));

        let k = total_variation(&phi);
        let diff = (wf - ext(&phi, &g)).abs();
        let bound = 2.0 * k * f.sub(&g).norm();
        t.check(diff <= bound + TOL, || format!("#{i} Lipschitz: {diff} > 2K‖f-g‖ = {bound}"));
    }
    t.finish(4, "extension identities", "1000 draws × 6 identities, cross-checked against the permutation form".into(), started)
}

/// Uncrossing of weighted families.
pub fn criterion_5(seed: u64) -> CriterionReport {
    let started = Instant::now();
    let mut rng = stream(seed, 5);
    let mut t = Tally::new();
    let (mut total_steps, mut longest) = (0usize, 0usize);
    for i in 0..500 {
        let n = rng.gen_range(1..=10);
        let family = generate::random_family(&mut rng, n, 20);
        let arbitrary = generate::random_table(&mut rng, n, false);
        let submodular = generate::random_submodular_table(&mut rng, n, false);
        let h = family_sum(&family);
        let mut preserved = true;
        let trace = uncross_observed(&family, Some(&submodular), |fam| preserved &= family_sum(fam) == h);
        t.check(preserved, || format!("#{i}: h changed during uncrossing"));
        for (k, step) in trace.steps.iter().enumerate() {
            t.check(step.potential_after > step.potential_before, || {
                format!("#{i} step {k}: potential {} -> {}", step.potential_before, step.potential_after)
            });
            let (before, after) = (step.phi_sum_before.unwrap_or(0.0), step.phi_sum_after.unwrap_or(0.0));
            t.check(after <= before + TOL, || format!("#{i} step {k}: Σφ rose from {before} to {after}"));
        }
        t.check(trace.steps.len() as u64 <= trace.step_bound(), || {
            format!("#{i}: {} steps exceed the bound {}", trace.steps.len(), trace.step_bound())
        });
        t.check(trace.final_family.is_chain(), || format!("#{i}: final family is not a chain"));
        for phi in [&arbitrary, &submodular] {
            match certify_chain_equality(phi, &trace.final_family, TOL) {
                Ok(cert) => t.check(cert.equal, || format!("#{i}: ŵφ(h) = {} but Σφ = {}", cert.lhs, cert.rhs)),
                Err(e) => t.check(false, || format!("#{i}: {e}")),
            }
        }
        total_steps += trace.steps.len();
        longest = longest.max(trace.steps.len());
    }
    let detail = format!("500 families, {total_steps} uncrossing steps (longest run {longest})");
    t.finish(5, "uncrossing", detail, started)
}

/// Finite exceptional thresholds and agreement of the two interval extensions.
pub fn criterion_6(seed: u64) -> CriterionReport {
    let started = Instant::now();
    let mut rng = stream(seed, 6);
    let mut t = Tally::new();
    let mut worst = 0.0f64;
    for i in 0..200 {
        let phi = generate::random_interval_phi(&mut rng);
        let f = generate::random_step(&mut rng, 20);
        let gap = ae_gap(&phi, &f, TOL);
        t.check(gap.levels.len() <= gap.distinct_values, || {
            format!("#{i}: {} exceptional levels for {} values", gap.levels.len(), gap.distinct_values)
        });
        let ui = choquet_interval_with(&phi, &f, Extension::UpperInfimum);
        let ls = choquet_interval_with(&phi, &f, Extension::LowerSupremum);
        worst = worst.max((ui - ls).abs());
        t.check((ui - ls).abs() <= TOL, || format!("#{i}: ui integral {ui} vs ls integral {ls}"));
    }
    let detail = format!("200 (φ, f) pairs, max |ui - ls| = {worst:.1e}");
    t.finish(6, "interval set algebra", detail, started)
}

/// Lopsided Fubini on finite spaces and the empirical-average runs.
pub fn criterion_7(seed: u64) -> CriterionReport {
    let started = Instant::now();
    let mut rng = stream(seed, 7);
    let mut t = Tally::new();
    let mut min_slack = f64::INFINITY;
    for i in 0..1000 {
        let m = rng.gen_range(1..=8);
        let n = rng.gen_range(1..=8);
        let inst = generate::random_fubini(&mut rng, m, n);
        let report = lopsided_check(&inst, TOL);
        min_slack = min_slack.min(report.slack);
        t.check(report.holds, || format!("#{i}: slack {}", report.slack));
    }
    let mut gaps = Vec::new();
    for run in 0..20u64 {
        let m = rng.gen_range(2..=8);
        let n = rng.gen_range(2..=8);
        let inst = generate::random_fubini(&mut rng, m, n);
        let run_seed = generate::derive_seed(seed, 100 + run);
        match lln_run(&inst, 10_000, run_seed, TOL) {
            Ok(trace) => {
                t.check(trace.fin_ineq_violations.is_empty(), || {
                    format!("run {run}: finite inequality fails at steps {:?}", trace.fin_ineq_violations)
                });
                t.check(trace.lipschitz_violations.is_empty(), || {
                    format!("run {run}: Lipschitz bound fails at steps {:?}", trace.lipschitz_violations)
                });
                gaps.push((trace.final_gap(), trace.standard_error()));
            }
            Err(e) => t.check(false, || format!("run {run}: {e}")),
        }
    }
    let within = gaps.iter().filter(|(gap, se)| *gap <= 5.0 * se + TOL).count();
    let worst_ratio = gaps
        .iter()
        .map(|(gap, se)| if *se > 0.0 { gap / se } else { 0.0 })
        .fold(0.0, f64::max);
    let detail = format!(
        "1000 instances, min slack {min_slack:.3e}; 20 runs of 10^4 steps, gap ≤ 5·SE on {within}/20 (worst gap/SE {worst_ratio:.2})"
    );
    t.finish(7, "lopsided Fubini", detail, started)
}

pub const CRITERIA: [fn(u64) -> CriterionReport; 7] =
    [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7];

/// Runs criteria 1 to 7 concurrently; the report is ordered by criterion.
pub fn run_all(seed: u64) -> SuiteReport {
    let criteria = std::thread::scope(|scope| {
        let handles: Vec<_> = CRITERIA.iter().map(|run| scope.spawn(move || run(seed))).collect();
        handles.into_iter().map(|h| h.join().expect("criterion thread panicked")).collect()
    });
    SuiteReport { seed, criteria }
}
