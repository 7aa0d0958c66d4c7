//! Setfunction representations on `2^J`: explicit value tables and the
//! standard generated families (cut, coverage, matroid rank, modular,
//! concave-of-modular).
//!
//! Every constructed instance satisfies `φ(∅) = 0`; payloads that would
//! violate it are rejected rather than shifted.
//!
//! JSON form: `{"n": 3, "kind": "<kind>", "payload": ...}` with an optional
//! `"labels"` array. Payloads by kind:
//!
//! | kind | payload |
//! |------|---------|
//! | `table` | array of `2^n` values, index = mask |
//! | `cut` | `{"edges": [[u, v, w], ...]}`, undirected, `w >= 0` |
//! | `coverage` | `{"covers": [[item, ...] per element], "weights": [w per item]}` |
//! | `matroid-rank` | `{"type": "uniform", "rank": r}` or `{"type": "partition", "blocks": [block per element], "capacities": [c per block]}` |
//! | `modular` | `{"weights": [w per element]}` |
//! | `concave-of-modular` | `{"weights": [w >= 0 per element], "g": <concave function>}` |

use std::borrow::Cow;

use serde::{Deserialize, Serialize};

use crate::concave::ConcaveFn;
use crate::error::{Error, Result};
use crate::subset::{GroundSet, SubsetMask};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Matroid {
    Uniform { rank: usize },
    Partition { blocks: Vec<usize>, capacities: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "kebab-case")]
pub enum SetFunctionKind {
    Table(Vec<f64>),
    Cut { edges: Vec<(usize, usize, f64)> },
    Coverage { covers: Vec<Vec<usize>>, weights: Vec<f64> },
    MatroidRank(Matroid),
    Modular { weights: Vec<f64> },
    ConcaveOfModular { weights: Vec<f64>, g: ConcaveFn },
}

impl SetFunctionKind {
    pub fn name(&self) -> &'static str {
        match self {
            SetFunctionKind::Table(_) => "table",
            SetFunctionKind::Cut { .. } => "cut",
            SetFunctionKind::Coverage { .. } => "coverage",
            SetFunctionKind::MatroidRank(_) => "matroid-rank",
            SetFunctionKind::Modular { .. } => "modular",
            SetFunctionKind::ConcaveOfModular { .. } => "concave-of-modular",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawSetFunction {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    #[serde(flatten)]
    kind: SetFunctionKind,
}

/// An immutable, validated setfunction `φ: 2^J → ℝ` with `φ(∅) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSetFunction", into = "RawSetFunction")]
pub struct SetFunction {
    ground: GroundSet,
    kind: SetFunctionKind,
    /// Per-element item bitsets for coverage instances.
    #[serde(skip)]
    cover_bits: Vec<Vec<u64>>,
}

impl TryFrom<RawSetFunction> for SetFunction {
    type Error = Error;

    fn try_from(raw: RawSetFunction) -> Result<Self> {
        let ground = match raw.labels {
            Some(labels) => {
                if labels.len() != raw.n {
                    return Err(Error::Dimension { expected: raw.n, got: labels.len() });
                }
                GroundSet::with_labels(labels)?
            }
            None => GroundSet::new(raw.n)?,
        };
        SetFunction::new(ground, raw.kind)
    }
}

impl From<SetFunction> for RawSetFunction {
    fn from(phi: SetFunction) -> Self {
        RawSetFunction {
            n: phi.ground.size(),
            labels: phi.ground.labels().map(<[String]>::to_vec),
            kind: phi.kind,
        }
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Dimension { expected, got })
    }
}

fn check_finite(values: &[f64], what: &str) -> Result<()> {
    match values.iter().find(|v| !v.is_finite()) {
        Some(v) => Err(Error::InvalidPayload(format!("non-finite {what} {v}"))),
        None => Ok(()),
    }
}

fn check_nonnegative(values: &[f64], what: &str) -> Result<()> {
    check_finite(values, what)?;
    match values.iter().find(|v| **v < 0.0) {
        Some(v) => Err(Error::InvalidPayload(format!("negative {what} {v}"))),
        None => Ok(()),
    }
}

impl SetFunction {
    pub fn new(ground: GroundSet, kind: SetFunctionKind) -> Result<Self> {
        let n = ground.size();
        let mut cover_bits = Vec::new();
        match &kind {
            SetFunctionKind::Table(values) => {
                check_len(ground.power_set_len(), values.len())?;
                check_finite(values, "table value")?;
                if values[0] != 0.0 {
                    return Err(Error::NotNormalized(values[0]));
                }
            }
            SetFunctionKind::Cut { edges } => {
                for &(u, v, w) in edges {
                    if u >= n || v >= n {
                        return Err(Error::InvalidPayload(format!("edge ({u}, {v}) outside ground set")));
                    }
                    check_nonnegative(&[w], "edge weight")?;
                }
            }
            SetFunctionKind::Coverage { covers, weights } => {
                check_len(n, covers.len())?;
                check_nonnegative(weights, "item weight")?;
                let words = weights.len().div_ceil(64);
                for items in covers {
                    let mut bits = vec![0u64; words];
                    for &item in items {
                        if item >= weights.len() {
                            return Err(Error::InvalidPayload(format!("item {item} has no weight")));
                        }
                        bits[item / 64] |= 1 << (item % 64);
                    }
                    cover_bits.push(bits);
                }
            }
            SetFunctionKind::MatroidRank(Matroid::Uniform { .. }) => {}
            SetFunctionKind::MatroidRank(Matroid::Partition { blocks, capacities }) => {
                check_len(n, blocks.len())?;
                if let Some(b) = blocks.iter().find(|&&b| b >= capacities.len()) {
                    return Err(Error::InvalidPayload(format!("block {b} has no capacity")));
                }
            }
            SetFunctionKind::Modular { weights } => {
                check_len(n, weights.len())?;
                check_finite(weights, "weight")?;
            }
            SetFunctionKind::ConcaveOfModular { weights, g } => {
                check_len(n, weights.len())?;
                check_nonnegative(weights, "weight")?;
                g.validate()?;
            }
        }
        Ok(SetFunction { ground, kind, cover_bits })
    }

    pub fn from_table(n: usize, values: Vec<f64>) -> Result<Self> {
        SetFunction::new(GroundSet::new(n)?, SetFunctionKind::Table(values))
    }

    /// Undirected cut function; `edges` are `(u, v, weight)`.
    pub fn cut(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        SetFunction::new(GroundSet::new(n)?, SetFunctionKind::Cut { edges })
    }

    pub fn coverage(covers: Vec<Vec<usize>>, weights: Vec<f64>) -> Result<Self> {
        SetFunction::new(GroundSet::new(covers.len())?, SetFunctionKind::Coverage { covers, weights })
    }

    pub fn uniform_matroid(n: usize, rank: usize) -> Result<Self> {
        SetFunction::new(GroundSet::new(n)?, SetFunctionKind::MatroidRank(Matroid::Uniform { rank }))
    }

    pub fn partition_matroid(blocks: Vec<usize>, capacities: Vec<usize>) -> Result<Self> {
        SetFunction::new(
            GroundSet::new(blocks.len())?,
            SetFunctionKind::MatroidRank(Matroid::Partition { blocks, capacities }),
        )
    }

    pub fn modular(weights: Vec<f64>) -> Result<Self> {
        SetFunction::new(GroundSet::new(weights.len())?, SetFunctionKind::Modular { weights })
    }

    pub fn concave_of_modular(weights: Vec<f64>, g: ConcaveFn) -> Result<Self> {
        SetFunction::new(GroundSet::new(weights.len())?, SetFunctionKind::ConcaveOfModular { weights, g })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.size()
    }

    pub fn kind(&self) -> &SetFunctionKind {
        &self.kind
    }

    /// `φ(S)`, rejecting masks outside the ground set.
    pub fn eval(&self, s: SubsetMask) -> Result<f64> {
        self.ground.check(s)?;
        Ok(self.value(s))
    }

    /// `φ(S)` for a mask already known to lie in the ground set.
    pub fn value(&self, s: SubsetMask) -> f64 {
        debug_assert!(s.is_subset_of(self.ground.full()));
        // Empty `f64` sums are `-0.0`; adding `0.0` normalizes the sign.
        0.0 + match &self.kind {
            SetFunctionKind::Table(values) => values[s.index()],
            SetFunctionKind::Cut { edges } => edges
                .iter()
                .filter(|&&(u, v, _)| s.contains(u) != s.contains(v))
                .map(|&(_, _, w)| w)
                .sum(),
            SetFunctionKind::Coverage { weights, .. } => {
                let words = weights.len().div_ceil(64);
                let mut union = vec![0u64; words];
                for x in s.elements() {
                    for (acc, bits) in union.iter_mut().zip(&self.cover_bits[x]) {
                        *acc |= bits;
                    }
                }
                weights
                    .iter()
                    .enumerate()
                    .filter(|(item, _)| union[item / 64] >> (item % 64) & 1 == 1)
                    .map(|(_, w)| w)
                    .sum()
            }
            SetFunctionKind::MatroidRank(Matroid::Uniform { rank }) => s.len().min(*rank) as f64,
            SetFunctionKind::MatroidRank(Matroid::Partition { blocks, capacities }) => {
                let mut counts = vec![0usize; capacities.len()];
                for x in s.elements() {
                    counts[blocks[x]] += 1;
                }
                counts.iter().zip(capacities).map(|(&c, &cap)| c.min(cap)).sum::<usize>() as f64
            }
            SetFunctionKind::Modular { weights } => s.elements().map(|x| weights[x]).sum(),
            SetFunctionKind::ConcaveOfModular { weights, g } => {
                g.eval(s.elements().map(|x| weights[x]).sum())
            }
        }
    }

    /// All `2^n` values in mask order.
    pub fn table(&self) -> Cow<'_, [f64]> {
        match &self.kind {
            SetFunctionKind::Table(values) => Cow::Borrowed(values),
            _ => Cow::Owned(self.ground.masks().map(|s| self.value(s)).collect()),
        }
    }

    /// The same setfunction backed by an explicit table.
    pub fn to_table_function(&self) -> SetFunction {
        SetFunction {
            ground: self.ground.clone(),
            kind: SetFunctionKind::Table(self.table().into_owned()),
            cover_bits: Vec::new(),
        }
    }

    /// `a·φ + b·ψ` as a table.
    pub fn linear_combination(a: f64, phi: &SetFunction, b: f64, psi: &SetFunction) -> Result<SetFunction> {
        check_len(phi.n(), psi.n())?;
        let (tp, tq) = (phi.table(), psi.table());
        let values = tp.iter().zip(tq.iter()).map(|(p, q)| a * p + b * q).collect();
        SetFunction::new(phi.ground.clone(), SetFunctionKind::Table(values))
    }

    pub fn scaled(&self, a: f64) -> SetFunction {
        let values = self.table().iter().map(|v| a * v).collect();
        SetFunction::new(self.ground.clone(), SetFunctionKind::Table(values))
            .expect("scaling preserves normalization")
    }

    pub fn full_value(&self) -> f64 {
        self.value(self.ground.full())
    }
}
