//! Choquet extension of a setfunction to real-valued functions on `J`.
//!
//! On a finite ground set the integrand `t ↦ φ{f ≥ t}` is a step function
//! whose jumps sit at the values of `f`, so the level integral is evaluated
//! exactly as a finite sum over the level chain.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::setfn::SetFunction;
use crate::subset::SubsetMask;

/// A real function on the ground set, one value per element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BoundedFunction(Vec<f64>);

impl BoundedFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidPayload(format!("non-finite function value {v}")));
        }
        Ok(BoundedFunction(values))
    }

    pub fn indicator(n: usize, s: SubsetMask) -> Self {
        BoundedFunction((0..n).map(|x| if s.contains(x) { 1.0 } else { 0.0 }).collect())
    }

    pub fn constant(n: usize, c: f64) -> Self {
        BoundedFunction(vec![c; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Supremum norm.
    pub fn norm(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        BoundedFunction(self.0.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        BoundedFunction(self.0.iter().zip(&other.0).map(|(&a, &b)| f(a, b)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn shift(&self, c: f64) -> Self {
        self.map(|v| v + c)
    }
}

impl From<Vec<f64>> for BoundedFunction {
    fn from(values: Vec<f64>) -> Self {
        BoundedFunction(values)
    }
}

/// Distinct values of `f` in decreasing order with their superlevel sets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelChain {
    pub thresholds: Vec<f64>,
    pub sets: Vec<SubsetMask>,
}

impl LevelChain {
    /// Rebuilds `f` from the chain with the bottom threshold as baseline:
    /// `t_k + Σ_{i<k} (t_i - t_{i+1})·1_{S_i}`.
    pub fn reconstruct(&self, n: usize) -> BoundedFunction {
        let k = self.thresholds.len();
        let mut values = vec![self.thresholds[k - 1]; n];
        for i in 0..k - 1 {
            let step = self.thresholds[i] - self.thresholds[i + 1];
            for x in self.sets[i].elements() {
                values[x] += step;
            }
        }
        BoundedFunction(values)
    }
}

/// Superlevel sets `{f ≥ t}` at each distinct value `t` of `f`.
pub fn level_chain(f: &BoundedFunction) -> LevelChain {
    let mut order: Vec<usize> = (0..f.len()).collect();
    order.sort_by(|&a, &b| f.0[b].total_cmp(&f.0[a]));
    let mut thresholds = Vec::new();
    let mut sets = Vec::new();
    let mut current = SubsetMask::EMPTY;
    for (pos, &x) in order.iter().enumerate() {
        current = current.with(x);
        let last_of_value = order.get(pos + 1).is_none_or(|&y| f.0[y] != f.0[x]);
        if last_of_value {
            thresholds.push(f.0[x]);
            sets.push(current);
        }
    }
    LevelChain { thresholds, sets }
}

fn check_dimension(phi: &SetFunction, f: &BoundedFunction) -> Result<()> {
    if phi.n() == f.len() {
        Ok(())
    } else {
        Err(Error::Dimension { expected: phi.n(), got: f.len() })
    }
}

/// `∫_0^∞ φ{f ≥ t} dt` for `f ≥ 0`, summed over the level chain.
fn level_sum(phi: &SetFunction, chain: &LevelChain) -> f64 {
    let k = chain.thresholds.len();
    (0..k)
        .map(|i| {
            let next = if i + 1 < k { chain.thresholds[i + 1] } else { 0.0 };
            (chain.thresholds[i] - next) * phi.value(chain.sets[i])
        })
        .sum()
}

/// Choquet extension `ŵφ(f)`.
///
/// Nonnegative `f` is integrated directly. Otherwise `f` is lifted by
/// `c = ‖f‖` and `c·φ(J)` subtracted afterwards.
pub fn choquet(phi: &SetFunction, f: &BoundedFunction) -> Result<f64> {
    check_dimension(phi, f)?;
    if f.min() >= 0.0 {
        Ok(level_sum(phi, &level_chain(f)))
    } else {
        choquet_shifted(phi, f, f.norm())
    }
}

/// `ŵφ(f + c) - c·φ(J)` for an explicit shift `c ≥ max(0, -min f)`.
pub fn choquet_shifted(phi: &SetFunction, f: &BoundedFunction, c: f64) -> Result<f64> {
    check_dimension(phi, f)?;
    if !(c >= 0.0 && f.min() + c >= 0.0) {
        return Err(Error::InvalidPayload(format!("shift {c} does not make f nonnegative")));
    }
    let lifted = f.shift(c);
    Ok(level_sum(phi, &level_chain(&lifted)) - c * phi.full_value())
}

/// Contribution of each chain link to `ŵφ(f)` for `f ≥ 0`:
/// `(threshold, set, φ(set), (t_i - t_{i+1})·φ(set))`.
pub fn level_contributions(phi: &SetFunction, f: &BoundedFunction) -> Result<Vec<(f64, SubsetMask, f64, f64)>> {
    check_dimension(phi, f)?;
    let chain = level_chain(f);
    let k = chain.thresholds.len();
    Ok((0..k)
        .map(|i| {
            let next = if i + 1 < k { chain.thresholds[i + 1] } else { 0.0 };
            let v = phi.value(chain.sets[i]);
            (chain.thresholds[i], chain.sets[i], v, (chain.thresholds[i] - next) * v)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predicates::conjugate;
    use proptest::prelude::*;

    fn path_cut() -> SetFunction {
        SetFunction::cut(3, vec![(0, 1, 1.0), (1, 2, 1.0)]).unwrap()
    }

    fn set(xs: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(xs.iter().copied())
    }

    #[test]
    fn level_chain_examples() {
        let chain = level_chain(&vec![0.5, 1.0, 0.0].into());
        assert_eq!(chain.thresholds, vec![1.0, 0.5, 0.0]);
        assert_eq!(chain.sets, vec![set(&[1]), set(&[0, 1]), set(&[0, 1, 2])]);

        let constant = level_chain(&BoundedFunction::constant(4, 2.5));
        assert_eq!(constant.thresholds, vec![2.5]);
        assert_eq!(constant.sets, vec![SubsetMask::full(4)]);

        let ind = level_chain(&BoundedFunction::indicator(3, set(&[0, 2])));
        assert_eq!(ind.thresholds, vec![1.0, 0.0]);
        assert_eq!(ind.sets[0], set(&[0, 2]));
        let full = level_chain(&BoundedFunction::indicator(3, SubsetMask::full(3)));
        assert_eq!(full.thresholds, vec![1.0]);
    }

    #[test]
    fn path_cut_values() {
        let phi = path_cut();
        assert_eq!(choquet(&phi, &vec![0.5, 1.0, 0.0].into()).unwrap(), 1.5);
        assert_eq!(choquet(&phi, &vec![1.0, -1.0, 0.0].into()).unwrap(), 3.0);
    }

    #[test]
    fn modular_is_linear() {
        let phi = SetFunction::modular(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(choquet(&phi, &vec![0.5, 1.0, 0.0].into()).unwrap(), 2.5);
    }

    #[test]
    fn indicator_consistency() {
        let phi = path_cut();
        for s in phi.ground().masks() {
            let v = choquet(&phi, &BoundedFunction::indicator(3, s)).unwrap();
            assert_eq!(v, phi.value(s));
        }
    }

    #[test]
    fn dimension_and_shift_errors() {
        let phi = path_cut();
        assert!(matches!(choquet(&phi, &vec![1.0].into()), Err(Error::Dimension { .. })));
        assert!(choquet_shifted(&phi, &vec![-2.0, 0.0, 0.0].into(), 1.0).is_err());
        assert!(BoundedFunction::new(vec![f64::NAN]).is_err());
    }

    fn table_and_function() -> impl Strategy<Value = (SetFunction, BoundedFunction)> {
        (1usize..=5).prop_flat_map(|n| {
            (
                prop::collection::vec(-2.0f64..2.0, (1 << n) - 1),
                prop::collection::vec(-3.0f64..3.0, n),
            )
                .prop_map(move |(rest, f)| {
                    let mut table = vec![0.0];
                    table.extend(rest);
                    (SetFunction::from_table(n, table).unwrap(), BoundedFunction::from(f))
                })
        })
    }

    proptest! {
        #[test]
        fn chain_reconstructs_function(f in prop::collection::vec(-5.0f64..5.0, 1..8)) {
            let f = BoundedFunction::from(f);
            let rebuilt = level_chain(&f).reconstruct(f.len());
            for (a, b) in rebuilt.values().iter().zip(f.values()) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }

        #[test]
        fn shift_independent((phi, f) in table_and_function(), extra in 0.0f64..10.0) {
            let base = choquet(&phi, &f).unwrap();
            let shifted = choquet_shifted(&phi, &f, f.norm() + extra).unwrap();
            prop_assert!((base - shifted).abs() <= 1e-9);
        }

        #[test]
        fn reflection((phi, f) in table_and_function()) {
            let lhs = choquet(&phi, &f.scale(-1.0)).unwrap();
            let rhs = -choquet(&conjugate(&phi), &f).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-9);
        }
    }
}
