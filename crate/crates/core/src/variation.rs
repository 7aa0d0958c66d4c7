//! Total variation `K(φ)` and the decompositions of a setfunction into
//! increasing parts.
//!
//! The suprema over chains `∅ = X_0 ⊂ … ⊂ X_m = S` are computed by dynamic
//! programming over single-element steps. Refining a chain never lowers
//! `Σ|Δ|` or `Σ|Δ|_+` (triangle inequality), so maximal chains suffice:
//!
//! ```text
//! V(∅) = 0,   V(S) = max_{x ∈ S} V(S - x) + |φ(S) - φ(S - x)|
//! ```

use serde::Serialize;

use crate::error::{Error, Result};
use crate::predicates::{is_submodular, maximum};
use crate::setfn::{SetFunction, SetFunctionKind};
use crate::subset::SubsetMask;

/// `K(φ)` together with one chain from `∅` to `J` attaining it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariationReport {
    pub variation: f64,
    pub chain: Vec<SubsetMask>,
}

/// Runs `best(S) = max_x best(S - x) + step(φ(S) - φ(S - x))` and keeps the
/// maximizing predecessor of every set.
fn chain_dp(phi: &SetFunction, step: impl Fn(f64) -> f64) -> (Vec<f64>, Vec<u32>) {
    let n = phi.n();
    let table = phi.table();
    let len = table.len();
    let mut best = vec![0.0; len];
    let mut pred = vec![0u32; len];
    for s in 1..len {
        let mut top = f64::NEG_INFINITY;
        for x in (0..n).filter(|&x| s >> x & 1 == 1) {
            let p = s & !(1 << x);
            let cand = best[p] + step(table[s] - table[p]);
            if cand > top {
                top = cand;
                pred[s] = p as u32;
            }
        }
        best[s] = top;
    }
    (best, pred)
}

fn walk_back(pred: &[u32], end: usize) -> Vec<SubsetMask> {
    let mut chain = vec![SubsetMask(end as u32)];
    let mut cur = end;
    while cur != 0 {
        cur = pred[cur] as usize;
        chain.push(SubsetMask(cur as u32));
    }
    chain.reverse();
    chain
}

/// `K(φ)`, the largest `Σ|φ(X_i) - φ(X_{i-1})|` over chains from `∅` to `J`.
pub fn total_variation(phi: &SetFunction) -> f64 {
    variation_report(phi).variation
}

pub fn variation_report(phi: &SetFunction) -> VariationReport {
    let (best, pred) = chain_dp(phi, f64::abs);
    let full = phi.ground().full().index();
    VariationReport { variation: best[full], chain: walk_back(&pred, full) }
}

/// `Σ|φ(X_i) - φ(X_{i-1})|` along an arbitrary chain (consecutive sets nested).
pub fn chain_variation(phi: &SetFunction, chain: &[SubsetMask]) -> f64 {
    chain.windows(2).map(|w| (phi.value(w[1]) - phi.value(w[0])).abs()).sum()
}

/// `2·max_S φ(S) - φ(J)`, the variation of a submodular setfunction: an
/// optimal chain can be exchanged into one that climbs to a maximizer and then
/// descends to `J`.
pub fn submodular_variation_closed_form(phi: &SetFunction, tol: f64) -> Result<f64> {
    let verdict = is_submodular(phi, tol);
    if let Some(w) = verdict.witness {
        return Err(Error::NotSubmodular { x: w.x, y: w.y });
    }
    Ok(2.0 * maximum(phi).1 - phi.full_value())
}

/// Canonical decomposition `φ = μ - ν` into increasing setfunctions, with
/// `μ(S)` the largest sum of positive increments along a chain ending at `S`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionResult {
    pub mu: Vec<f64>,
    pub nu: Vec<f64>,
    pub variation: f64,
}

impl DecompositionResult {
    pub fn mu_function(&self, phi: &SetFunction) -> SetFunction {
        table_function(phi, self.mu.clone())
    }

    pub fn nu_function(&self, phi: &SetFunction) -> SetFunction {
        table_function(phi, self.nu.clone())
    }
}

fn table_function(like: &SetFunction, values: Vec<f64>) -> SetFunction {
    SetFunction::new(like.ground().clone(), SetFunctionKind::Table(values))
        .expect("decomposition tables vanish at the empty set")
}

pub fn canonical_decomposition(phi: &SetFunction) -> DecompositionResult {
    let (mu, _) = chain_dp(phi, |d| d.max(0.0));
    let table = phi.table();
    let nu = mu.iter().zip(table.iter()).map(|(m, v)| m - v).collect();
    DecompositionResult { mu, nu, variation: total_variation(phi) }
}

/// `φ = ψ + (φ - ψ)` with `ψ(S) = max_{Y ⊆ S} φ(Y)` increasing and the
/// remainder decreasing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LsDecomposition {
    pub psi: Vec<f64>,
    pub remainder: Vec<f64>,
}

/// Requires submodularity: otherwise the remainder need not be decreasing.
pub fn ls_decomposition(phi: &SetFunction, tol: f64) -> Result<LsDecomposition> {
    if let Some(w) = is_submodular(phi, tol).witness {
        return Err(Error::NotSubmodular { x: w.x, y: w.y });
    }
    let n = phi.n();
    let table = phi.table();
    let mut psi = table.to_vec();
    for s in 0..psi.len() {
        for x in (0..n).filter(|&x| s >> x & 1 == 1) {
            psi[s] = psi[s].max(psi[s & !(1 << x)]);
        }
    }
    let remainder: Vec<f64> = table.iter().zip(&psi).map(|(v, p)| v - p).collect();
    for s in 0..psi.len() {
        for x in (0..n).filter(|&x| s >> x & 1 == 0) {
            let t = s | 1 << x;
            if remainder[t] > remainder[s] + tol {
                return Err(Error::Invariant(format!(
                    "remainder increases from {} to {}",
                    SubsetMask(s as u32),
                    SubsetMask(t as u32)
                )));
            }
        }
    }
    Ok(LsDecomposition { psi, remainder })
}
