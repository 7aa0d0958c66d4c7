//! Uncrossing of weighted set families.
//!
//! A multiset of sets is repeatedly rewritten by replacing one copy each of a
//! crossing pair `A, B` with `A ∪ B` and `A ∩ B`. The pointwise sum of
//! indicators is unchanged, `Σ|H|²` grows by `2·|A∖B|·|B∖A| ≥ 2` per step, and
//! the process ends in a chain. For submodular `φ`, `Σ φ(H)` never increases
//! along the way, and on the final chain it equals the Choquet extension of
//! the indicator sum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extension::{choquet, BoundedFunction};
use crate::setfn::SetFunction;
use crate::subset::{GroundSet, SubsetMask};

/// Multiset `{(H_i, a_i)}` with positive integer multiplicities; equal sets
/// are kept merged into a single entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawFamily", into = "RawFamily")]
pub struct WeightedFamily {
    n: usize,
    entries: Vec<(SubsetMask, u64)>,
}

#[derive(Serialize, Deserialize)]
struct RawFamily {
    n: usize,
    entries: Vec<(SubsetMask, u64)>,
}

impl TryFrom<RawFamily> for WeightedFamily {
    type Error = Error;

    fn try_from(raw: RawFamily) -> Result<Self> {
        WeightedFamily::new(raw.n, raw.entries)
    }
}

impl From<WeightedFamily> for RawFamily {
    fn from(family: WeightedFamily) -> Self {
        RawFamily { n: family.n, entries: family.entries }
    }
}

impl WeightedFamily {
    pub fn new(n: usize, entries: Vec<(SubsetMask, u64)>) -> Result<Self> {
        let ground = GroundSet::new(n)?;
        let mut family = WeightedFamily { n, entries: Vec::with_capacity(entries.len()) };
        for (set, a) in entries {
            ground.check(set)?;
            if a == 0 {
                return Err(Error::InvalidPayload(format!("multiplicity of {set} must be positive")));
            }
            family.add(set, a);
        }
        Ok(family)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[(SubsetMask, u64)] {
        &self.entries
    }

    fn add(&mut self, set: SubsetMask, a: u64) {
        match self.entries.iter_mut().find(|(s, _)| *s == set) {
            Some((_, m)) => *m += a,
            None => self.entries.push((set, a)),
        }
    }

    /// Number of sets counted with multiplicity, `|HH|`.
    pub fn total_multiplicity(&self) -> u64 {
        self.entries.iter().map(|&(_, a)| a).sum()
    }

    /// `Σ_{H ∈ HH} |H|²`.
    pub fn potential(&self) -> u64 {
        self.entries.iter().map(|&(s, a)| a * (s.len() as u64).pow(2)).sum()
    }

    /// `Σ a_i·φ(H_i)`.
    pub fn phi_sum(&self, phi: &SetFunction) -> f64 {
        self.entries.iter().map(|&(s, a)| a as f64 * phi.value(s)).sum()
    }

    /// Membership counts `h(x) = Σ_{i: x ∈ H_i} a_i`.
    pub fn counts(&self) -> Vec<u64> {
        let mut h = vec![0u64; self.n];
        for &(s, a) in &self.entries {
            for x in s.elements() {
                h[x] += a;
            }
        }
        h
    }

    pub fn first_crossing_pair(&self) -> Option<(usize, usize)> {
        let k = self.entries.len();
        (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .find(|&(i, j)| self.entries[i].0.crosses(self.entries[j].0))
    }

    pub fn is_chain(&self) -> bool {
        self.first_crossing_pair().is_none()
    }

    fn uncross_pair(&mut self, i: usize, j: usize) -> (SubsetMask, SubsetMask) {
        let (a, b) = (self.entries[i].0, self.entries[j].0);
        self.entries[i].1 -= 1;
        self.entries[j].1 -= 1;
        self.entries.retain(|&(_, m)| m > 0);
        let (union, inter) = (a.union(b), a.intersection(b));
        self.add(union, 1);
        self.add(inter, 1);
        (union, inter)
    }
}

/// `h = Σ a_i·1_{H_i}` as a real function.
pub fn family_sum(family: &WeightedFamily) -> BoundedFunction {
    BoundedFunction::from(family.counts().into_iter().map(|c| c as f64).collect::<Vec<_>>())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UncrossStep {
    /// Entry indices of the crossing pair in the family before the step.
    pub pair: (usize, usize),
    pub before: (SubsetMask, SubsetMask),
    /// `(union, intersection)`.
    pub after: (SubsetMask, SubsetMask),
    pub potential_before: u64,
    pub potential_after: u64,
    pub phi_sum_before: Option<f64>,
    pub phi_sum_after: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UncrossTrace {
    pub initial: WeightedFamily,
    pub steps: Vec<UncrossStep>,
    pub final_family: WeightedFamily,
}

impl UncrossTrace {
    /// `|HH|·n²`, the bound on the number of steps.
    pub fn step_bound(&self) -> u64 {
        self.initial.total_multiplicity() * (self.initial.n() as u64).pow(2)
    }
}

pub fn uncross(family: &WeightedFamily, phi: Option<&SetFunction>) -> UncrossTrace {
    uncross_observed(family, phi, |_| {})
}

/// Like [`uncross`], calling `observe` on the family after every step.
pub fn uncross_observed(
    family: &WeightedFamily,
    phi: Option<&SetFunction>,
    mut observe: impl FnMut(&WeightedFamily),
) -> UncrossTrace {
    let mut work = family.clone();
    let mut steps = Vec::new();
    while let Some((i, j)) = work.first_crossing_pair() {
        let before = (work.entries[i].0, work.entries[j].0);
        let potential_before = work.potential();
        let phi_sum_before = phi.map(|p| work.phi_sum(p));
        let after = work.uncross_pair(i, j);
        steps.push(UncrossStep {
            pair: (i, j),
            before,
            after,
            potential_before,
            potential_after: work.potential(),
            phi_sum_before,
            phi_sum_after: phi.map(|p| work.phi_sum(p)),
        });
        observe(&work);
    }
    UncrossTrace { initial: family.clone(), steps, final_family: work }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainCertificate {
    /// `ŵφ(Σ a_i·1_{H_i})`.
    pub lhs: f64,
    /// `Σ a_i·φ(H_i)`.
    pub rhs: f64,
    pub equal: bool,
}

/// On a chain the sets are exactly the level sets of the indicator sum, so
/// `ŵφ(h) = Σ a_i·φ(H_i)` for every setfunction, submodular or not.
pub fn certify_chain_equality(phi: &SetFunction, chain: &WeightedFamily, tol: f64) -> Result<ChainCertificate> {
    if chain.n() != phi.n() {
        return Err(Error::Dimension { expected: phi.n(), got: chain.n() });
    }
    if let Some((i, j)) = chain.first_crossing_pair() {
        return Err(Error::NotAChain(chain.entries[i].0, chain.entries[j].0));
    }
    let lhs = choquet(phi, &family_sum(chain))?;
    let rhs = chain.phi_sum(phi);
    Ok(ChainCertificate { lhs, rhs, equal: (lhs - rhs).abs() <= tol })
}

/// Integer layer-cake family of a nonnegative integer function: the sets
/// `{f ≥ t}` for `t = 1, .., max f`, each with multiplicity one.
pub fn layer_family(values: &[u64]) -> Result<WeightedFamily> {
    let top = values.iter().copied().max().unwrap_or(0);
    let entries = (1..=top)
        .map(|t| {
            let set = SubsetMask::from_elements(values.iter().enumerate().filter(|(_, &v)| v >= t).map(|(x, _)| x));
            (set, 1)
        })
        .collect();
    WeightedFamily::new(values.len(), entries)
}

/// Step-by-step certificate of `ŵφ(f + g) ≤ ŵφ(f) + ŵφ(g)` for nonnegative
/// integer `f, g`: uncross the union of their layer families.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubadditivityCertificate {
    pub trace: UncrossTrace,
    /// `ŵφ(f) + ŵφ(g)`, equal to `Σφ` over the starting family.
    pub separate: f64,
    /// `ŵφ(f + g)`, equal to `Σφ` over the final chain.
    pub combined: f64,
}

pub fn subadditivity_certificate(phi: &SetFunction, f: &[u64], g: &[u64]) -> Result<SubadditivityCertificate> {
    if f.len() != phi.n() || g.len() != phi.n() {
        return Err(Error::Dimension { expected: phi.n(), got: f.len().min(g.len()) });
    }
    let mut family = layer_family(f)?;
    for &(set, a) in layer_family(g)?.entries() {
        family.add(set, a);
    }
    let to_real = |v: &[u64]| BoundedFunction::from(v.iter().map(|&c| c as f64).collect::<Vec<_>>());
    let separate = choquet(phi, &to_real(f))? + choquet(phi, &to_real(g))?;
    let sum: Vec<u64> = f.iter().zip(g).map(|(a, b)| a + b).collect();
    let combined = choquet(phi, &to_real(&sum))?;
    Ok(SubadditivityCertificate { trace: uncross(&family, Some(phi)), separate, combined })
}
