//! Lopsided Fubini inequality `ŵφ(∫F_x dλ) ≤ ∫ŵφ(F_x) dλ` on finite
//! probability spaces, and the empirical-average construction behind it.
//!
//! With finite `I` and `J` the measurability claims are automatic, and any
//! `φ` is uniformly continuous with respect to a strictly positive `π`: once
//! `δ ≤ min_y π(y)`, `π(S △ T) < δ` forces `S = T`. Counterexamples that need
//! a discontinuous `φ` therefore have no finite analogue.
//!
//! Sampling uses ChaCha8 seeded from a `u64`; a trace is reproducible from
//! `(instance, steps, seed)`.

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extension::{choquet, BoundedFunction};
use crate::predicates::{is_submodular, minimum};
use crate::setfn::SetFunction;
use crate::subset::SubsetMask;

/// Tolerance on probability vectors summing to one.
const SUM_TOL: f64 = 1e-9;

/// JSON form `{"lambda": [...], "pi": [...], "F": [[...], ...], "phi": <setfunction>}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FubiniInstanceJson {
    pub lambda: Vec<f64>,
    pub pi: Vec<f64>,
    #[serde(rename = "F")]
    pub f: Vec<Vec<f64>>,
    pub phi: SetFunction,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FubiniInstance {
    lambda: Vec<f64>,
    pi: Vec<f64>,
    #[serde(rename = "F")]
    rows: Vec<BoundedFunction>,
    phi: SetFunction,
}

fn check_probability(p: &[f64], what: &str, strictly_positive: bool) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidInstance(format!("{what} is empty")));
    }
    if let Some(v) = p.iter().find(|&&v| !v.is_finite() || v < 0.0 || (strictly_positive && v == 0.0)) {
        return Err(Error::InvalidInstance(format!("{what} has invalid entry {v}")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > SUM_TOL {
        return Err(Error::InvalidInstance(format!("{what} sums to {total}")));
    }
    Ok(())
}

impl FubiniInstance {
    /// Validates shapes and the hypotheses `φ ≥ 0` and `φ` submodular.
    pub fn new(lambda: Vec<f64>, pi: Vec<f64>, f: Vec<Vec<f64>>, phi: SetFunction, tol: f64) -> Result<Self> {
        let inst = FubiniInstance::new_forced(lambda, pi, f, phi)?;
        if let Some(w) = is_submodular(&inst.phi, tol).witness {
            return Err(Error::NotSubmodular { x: w.x, y: w.y });
        }
        let (at, low) = minimum(&inst.phi);
        if low < -tol {
            return Err(Error::Negative(at));
        }
        Ok(inst)
    }

    /// Validates shapes only, leaving the hypotheses on `φ` unchecked.
    pub fn new_forced(lambda: Vec<f64>, pi: Vec<f64>, f: Vec<Vec<f64>>, phi: SetFunction) -> Result<Self> {
        check_probability(&lambda, "lambda", false)?;
        check_probability(&pi, "pi", true)?;
        let n = phi.n();
        if pi.len() != n {
            return Err(Error::Dimension { expected: n, got: pi.len() });
        }
        if f.len() != lambda.len() {
            return Err(Error::Dimension { expected: lambda.len(), got: f.len() });
        }
        let rows = f
            .into_iter()
            .map(|row| {
                if row.len() != n {
                    return Err(Error::Dimension { expected: n, got: row.len() });
                }
                BoundedFunction::new(row)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FubiniInstance { lambda, pi, rows, phi })
    }

    pub fn from_json(raw: FubiniInstanceJson, force: bool, tol: f64) -> Result<Self> {
        if force {
            FubiniInstance::new_forced(raw.lambda, raw.pi, raw.f, raw.phi)
        } else {
            FubiniInstance::new(raw.lambda, raw.pi, raw.f, raw.phi, tol)
        }
    }

    pub fn to_json(&self) -> FubiniInstanceJson {
        FubiniInstanceJson {
            lambda: self.lambda.clone(),
            pi: self.pi.clone(),
            f: self.rows.iter().map(|r| r.values().to_vec()).collect(),
            phi: self.phi.clone(),
        }
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn pi(&self) -> &[f64] {
        &self.pi
    }

    pub fn rows(&self) -> &[BoundedFunction] {
        &self.rows
    }

    pub fn phi(&self) -> &SetFunction {
        &self.phi
    }

    /// `ŵφ(F_x)` for every row.
    pub fn row_extensions(&self) -> Vec<f64> {
        self.rows.iter().map(|r| choquet(&self.phi, r).expect("row length checked")).collect()
    }
}

/// `g(y) = Σ_x λ(x)·F(x, y)`.
pub fn marginal_g(inst: &FubiniInstance) -> BoundedFunction {
    let n = inst.phi.n();
    let mut g = vec![0.0; n];
    for (row, &weight) in inst.rows.iter().zip(&inst.lambda) {
        for (acc, v) in g.iter_mut().zip(row.values()) {
            *acc += weight * v;
        }
    }
    BoundedFunction::from(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LopsidedReport {
    /// `ŵφ(g)`.
    pub lhs: f64,
    /// `Σ_x λ(x)·ŵφ(F_x)`.
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

pub fn lopsided_check(inst: &FubiniInstance, tol: f64) -> LopsidedReport {
    let lhs = choquet(&inst.phi, &marginal_g(inst)).expect("marginal has length n");
    let rhs: f64 = inst.row_extensions().iter().zip(&inst.lambda).map(|(v, w)| v * w).sum();
    let slack = rhs - lhs;
    LopsidedReport { lhs, rhs, slack, holds: slack >= -tol }
}

/// One step of the empirical-average run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LlnRecord {
    pub k: usize,
    /// `ŵφ(f_k)` with `f_k = (1/k)·Σ_{i<k} F_{x_i}`.
    pub what_f_k: f64,
    /// `(1/k)·Σ_{i<k} ŵφ(F_{x_i})`.
    pub running_avg: f64,
    /// `ŵφ(h_k)` with `h_k = g - f_k`.
    pub what_h_k: f64,
    pub norm_h_k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LlnTrace {
    pub seed: u64,
    pub samples: Vec<usize>,
    pub records: Vec<LlnRecord>,
    /// `Σ_x λ(x)·ŵφ(F_x)`, the limit of the running average.
    pub target: f64,
    /// `K(φ)`.
    pub variation: f64,
    /// Steps where `ŵφ(f_k) > running_avg + tol`.
    pub fin_ineq_violations: Vec<usize>,
    /// Steps where `|ŵφ(h_k)| > 2·K(φ)·‖h_k‖ + tol`.
    pub lipschitz_violations: Vec<usize>,
    /// Sample standard deviation of `ŵφ(F_{x_i})` over the run.
    pub sample_std: f64,
}

impl LlnTrace {
    pub fn final_gap(&self) -> f64 {
        self.records.last().map_or(0.0, |r| (r.running_avg - self.target).abs())
    }

    pub fn standard_error(&self) -> f64 {
        self.sample_std / (self.records.len() as f64).sqrt()
    }
}

pub fn lln_run(inst: &FubiniInstance, steps: usize, seed: u64, tol: f64) -> Result<LlnTrace> {
    if steps == 0 {
        return Err(Error::InvalidInstance("steps must be at least 1".into()));
    }
    let phi = &inst.phi;
    let n = phi.n();
    let g = marginal_g(inst);
    let row_ext = inst.row_extensions();
    let target: f64 = row_ext.iter().zip(&inst.lambda).map(|(v, w)| v * w).sum();
    let variation = crate::variation::total_variation(phi);
    let sampler = WeightedIndex::new(&inst.lambda)
        .map_err(|e| Error::InvalidInstance(format!("lambda: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut sum_f = vec![0.0; n];
    let mut sum_ext = 0.0;
    let (mut mean, mut m2) = (0.0, 0.0);
    let mut samples = Vec::with_capacity(steps);
    let mut records = Vec::with_capacity(steps);
    let mut fin_ineq_violations = Vec::new();
    let mut lipschitz_violations = Vec::new();

    for k in 1..=steps {
        let x = sampler.sample(&mut rng);
        samples.push(x);
        for (acc, v) in sum_f.iter_mut().zip(inst.rows[x].values()) {
            *acc += v;
        }
        sum_ext += row_ext[x];
        let delta = row_ext[x] - mean;
        mean += delta / k as f64;
        m2 += delta * (row_ext[x] - mean);

        let f_k = BoundedFunction::from(sum_f.iter().map(|s| s / k as f64).collect::<Vec<_>>());
        let h_k = g.sub(&f_k);
        let what_f_k = choquet(phi, &f_k)?;
        let running_avg = sum_ext / k as f64;
        let what_h_k = choquet(phi, &h_k)?;
        let norm_h_k = h_k.norm();
        if what_f_k > running_avg + tol {
            fin_ineq_violations.push(k);
        }
        if what_h_k.abs() > 2.0 * variation * norm_h_k + tol {
            lipschitz_violations.push(k);
        }
        records.push(LlnRecord { k, what_f_k, running_avg, what_h_k, norm_h_k });
    }
    let sample_std = if steps > 1 { (m2 / (steps - 1) as f64).sqrt() } else { 0.0 };
    Ok(LlnTrace {
        seed,
        samples,
        records,
        target,
        variation,
        fin_ineq_violations,
        lipschitz_violations,
        sample_std,
    })
}

/// `δ(ε)`: the largest `δ` such that `π(S △ T) < δ` implies `|φ(S) - φ(T)| < ε`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuityModulus {
    /// `(ε, δ(ε))`; `δ` is `+∞` when no pair differs by `ε`.
    pub rows: Vec<(f64, f64)>,
    /// `min_y π(y)`: any `δ` at or below it already forces `S = T`.
    pub min_atom: f64,
}

/// Largest ground set accepted by [`uniform_continuity_modulus`] (`4^n` pair scan).
pub const MODULUS_MAX_GROUND: usize = 12;

pub fn uniform_continuity_modulus(phi: &SetFunction, pi: &[f64], epsilons: &[f64]) -> Result<ContinuityModulus> {
    let n = phi.n();
    if pi.len() != n {
        return Err(Error::Dimension { expected: n, got: pi.len() });
    }
    if n > MODULUS_MAX_GROUND {
        return Err(Error::InvalidInstance(format!("ground set of {n} exceeds {MODULUS_MAX_GROUND}")));
    }
    if let Some(v) = pi.iter().find(|&&v| v.is_nan() || v <= 0.0) {
        return Err(Error::InvalidInstance(format!("pi entry {v} is not positive")));
    }
    let table = phi.table();
    let len = table.len();
    // Largest |φ(S) - φ(S △ D)| for each symmetric difference D.
    let mut spread = vec![0.0f64; len];
    for (d, slot) in spread.iter_mut().enumerate() {
        *slot = (0..len).map(|s| (table[s] - table[s ^ d]).abs()).fold(0.0, f64::max);
    }
    let mass: Vec<f64> = (0..len)
        .map(|d| SubsetMask(d as u32).elements().map(|y| pi[y]).sum())
        .collect();
    let rows = epsilons
        .iter()
        .map(|&eps| {
            let delta = (0..len)
                .filter(|&d| spread[d] >= eps)
                .map(|d| mass[d])
                .fold(f64::INFINITY, f64::min);
            (eps, delta)
        })
        .collect();
    let min_atom = pi.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(ContinuityModulus { rows, min_atom })
}
