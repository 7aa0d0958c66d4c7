//! Slow reference computations, independent of the production routes.
//!
//! Used by the self-test runner and the test suites as oracles: pairwise
//! submodularity over all `4^n` pairs, chain suprema over all `3^n`
//! predecessor pairs, and the permutation form of the Lovász extension.

use crate::extension::BoundedFunction;
use crate::setfn::SetFunction;
use crate::subset::SubsetMask;

/// `φ(X∪Y) + φ(X∩Y) - φ(X) - φ(Y)`; positive means the pair violates submodularity.
pub fn pairwise_submodular_violation(phi: &SetFunction, x: SubsetMask, y: SubsetMask) -> f64 {
    phi.value(x.union(y)) + phi.value(x.intersection(y)) - phi.value(x) - phi.value(y)
}

/// Largest pairwise violation over all `X, Y ⊆ J`.
pub fn max_pairwise_submodular_violation(phi: &SetFunction) -> f64 {
    let table = phi.table();
    let len = table.len();
    let mut worst = f64::NEG_INFINITY;
    for x in 0..len {
        for y in 0..len {
            let v = table[x | y] + table[x & y] - table[x] - table[y];
            worst = worst.max(v);
        }
    }
    worst
}

pub fn is_submodular_pairwise(phi: &SetFunction, tol: f64) -> bool {
    max_pairwise_submodular_violation(phi) <= tol
}

pub fn is_increasing_pairwise(phi: &SetFunction, tol: f64) -> bool {
    let table = phi.table();
    let len = table.len();
    (0..len).all(|t| subsets_of(t).all(|s| table[s] <= table[t] + tol))
}

fn subsets_of(t: usize) -> impl Iterator<Item = usize> {
    let mut next = Some(t);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & t) };
        Some(cur)
    })
}

/// Chain suprema allowing arbitrary jumps `P ⊊ S`, `O(3^n)`.
fn all_predecessor_dp(phi: &SetFunction, step: impl Fn(f64) -> f64) -> Vec<f64> {
    let table = phi.table();
    let len = table.len();
    let mut best = vec![0.0f64; len];
    for s in 1..len {
        best[s] = subsets_of(s)
            .filter(|&p| p != s)
            .map(|p| best[p] + step(table[s] - table[p]))
            .fold(f64::NEG_INFINITY, f64::max);
    }
    best
}

pub fn variation_all_predecessors(phi: &SetFunction) -> f64 {
    all_predecessor_dp(phi, f64::abs)[phi.ground().full().index()]
}

pub fn positive_variation_all_predecessors(phi: &SetFunction) -> Vec<f64> {
    all_predecessor_dp(phi, |d| d.max(0.0))
}

/// `max_{Y ⊆ S} φ(Y)` by enumerating subsets.
pub fn lower_sup_brute(phi: &SetFunction) -> Vec<f64> {
    let table = phi.table();
    (0..table.len())
        .map(|s| subsets_of(s).map(|y| table[y]).fold(f64::NEG_INFINITY, f64::max))
        .collect()
}

/// Lovász extension in permutation form: sort `f` decreasingly as
/// `f(σ_1) ≥ … ≥ f(σ_n)` and sum `f(σ_i)·(φ(S_i) - φ(S_{i-1}))` with
/// `S_i = {σ_1, .., σ_i}`. Valid for any sign of `f`.
pub fn lovasz_permutation(phi: &SetFunction, f: &BoundedFunction) -> f64 {
    let values = f.values();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut prev = SubsetMask::EMPTY;
    let mut total = 0.0;
    for &x in &order {
        let cur = prev.with(x);
        total += values[x] * (phi.value(cur) - phi.value(prev));
        prev = cur;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_enumeration() {
        let mut subs: Vec<usize> = subsets_of(0b101).collect();
        subs.sort();
        assert_eq!(subs, vec![0, 1, 4, 5]);
        assert_eq!(subsets_of(0).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn permutation_form_on_path_cut() {
        let phi = SetFunction::cut(3, vec![(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(lovasz_permutation(&phi, &vec![0.5, 1.0, 0.0].into()), 1.5);
        assert_eq!(lovasz_permutation(&phi, &vec![1.0, -1.0, 0.0].into()), 3.0);
    }
}
