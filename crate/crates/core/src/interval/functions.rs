use serde::{Deserialize, Serialize};

use super::sets::{GeneralSet, IntervalSet, Piece};
use crate::concave::ConcaveFn;
use crate::error::{Error, Result};

/// A piecewise constant function on `[0, 1)`.
///
/// Piece `j` spans `c_j` to `c_{j+1}`. By default each piece is half-open
/// `[c_j, c_{j+1})`, which makes every superlevel set a member of the
/// half-open algebra. `left_attached[j]` moves the interior breakpoint
/// `c_{j+1}` into piece `j` instead; when the neighbouring values differ this
/// produces level sets outside the algebra (and `f` is then not measurable).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStep", into = "RawStep")]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    left_attached: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct RawStep {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    left_attached: Option<Vec<bool>>,
}

impl TryFrom<RawStep> for StepFunction {
    type Error = Error;

    fn try_from(raw: RawStep) -> Result<Self> {
        let m = raw.values.len();
        let attach = raw.left_attached.unwrap_or_else(|| vec![false; m.saturating_sub(1)]);
        StepFunction::with_attachments(raw.breakpoints, raw.values, attach)
    }
}

impl From<StepFunction> for RawStep {
    fn from(f: StepFunction) -> Self {
        let left_attached = f.left_attached.iter().any(|&b| b).then_some(f.left_attached);
        RawStep { breakpoints: f.breakpoints, values: f.values, left_attached }
    }
}

impl StepFunction {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let m = values.len();
        StepFunction::with_attachments(breakpoints, values, vec![false; m.saturating_sub(1)])
    }

    pub fn with_attachments(breakpoints: Vec<f64>, values: Vec<f64>, left_attached: Vec<bool>) -> Result<Self> {
        let m = values.len();
        if m == 0 || breakpoints.len() != m + 1 {
            return Err(Error::Dimension { expected: m + 1, got: breakpoints.len() });
        }
        if left_attached.len() != m - 1 {
            return Err(Error::Dimension { expected: m - 1, got: left_attached.len() });
        }
        if breakpoints[0] != 0.0 || breakpoints[m] != 1.0 {
            return Err(Error::InvalidPayload("breakpoints must run from 0 to 1".into()));
        }
        if breakpoints.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
            return Err(Error::InvalidPayload("breakpoints must be strictly increasing".into()));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidPayload(format!("non-finite value {v}")));
        }
        Ok(StepFunction { breakpoints, values, left_attached })
    }

    pub fn constant(c: f64) -> Self {
        StepFunction { breakpoints: vec![0.0, 1.0], values: vec![c], left_attached: vec![] }
    }

    /// `1_X` for an algebra member `X`.
    pub fn indicator(x: &IntervalSet) -> Self {
        let mut cuts = vec![0.0, 1.0];
        for &(a, b) in x.intervals() {
            cuts.push(a);
            cuts.push(b);
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let values = cuts
            .windows(2)
            .map(|w| if x.contains(w[0]) { 1.0 } else { 0.0 })
            .collect();
        StepFunction::new(cuts, values).expect("indicator pieces are well formed")
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn piece_count(&self) -> usize {
        self.values.len()
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Distinct values, largest first.
    pub fn distinct_values(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(|a, b| b.total_cmp(a));
        v.dedup();
        v
    }

    fn piece(&self, j: usize) -> Piece {
        let m = self.values.len();
        Piece {
            a: self.breakpoints[j],
            b: self.breakpoints[j + 1],
            left_closed: j == 0 || !self.left_attached[j - 1],
            right_closed: j + 1 < m && self.left_attached[j],
        }
    }

    pub fn value_at(&self, x: f64) -> Option<f64> {
        (0..self.values.len()).find(|&j| self.piece(j).contains(x)).map(|j| self.values[j])
    }

    /// `{f ≥ t}`.
    pub fn superlevel(&self, t: f64) -> GeneralSet {
        let pieces = (0..self.values.len()).filter(|&j| self.values[j] >= t).map(|j| self.piece(j)).collect();
        GeneralSet::new(pieces).expect("pieces lie in [0, 1)")
    }

    /// Every superlevel set lies in the half-open algebra. For a finitely
    /// valued function this is the same as measurability.
    pub fn is_measurable(&self) -> bool {
        self.distinct_values().iter().all(|&t| self.superlevel(t).as_interval_set().is_some())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        StepFunction {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
            left_attached: self.left_attached.clone(),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn shift(&self, c: f64) -> Self {
        self.map(|v| v + c)
    }

    /// Pointwise combination on the common refinement; both inputs must use
    /// plain half-open pieces.
    pub fn combine(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.left_attached.iter().chain(&other.left_attached).any(|&b| b) {
            return Err(Error::InvalidPayload("combine needs half-open pieces".into()));
        }
        let mut cuts: Vec<f64> = self.breakpoints.iter().chain(&other.breakpoints).copied().collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let values = cuts
            .windows(2)
            .map(|w| {
                let a = self.value_at(w[0]).expect("inside [0, 1)");
                let b = other.value_at(w[0]).expect("inside [0, 1)");
                op(a, b)
            })
            .collect();
        StepFunction::new(cuts, values)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a + b)
    }

    /// `∫_a^b f dλ`.
    fn integrate_over(&self, a: f64, b: f64) -> f64 {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .map(|(w, v)| (b.min(w[1]) - a.max(w[0])).max(0.0) * v)
            .sum()
    }

    pub fn lebesgue_integral(&self) -> f64 {
        self.integrate_over(0.0, 1.0)
    }
}

/// Increasing setfunctions on the half-open algebra with `φ(∅) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum IntervalKind {
    /// `g(∫_X density dλ)` with `g` concave, nondecreasing, `g(0) = 0`;
    /// the density defaults to 1.
    ConcaveOfMeasure {
        g: ConcaveFn,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        density: Option<StepFunction>,
    },
    /// `mass·1[location ∈ X]`.
    PointMass { location: f64, mass: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "IntervalKind", into = "IntervalKind")]
pub struct IntervalSetFunction {
    kind: IntervalKind,
}

impl TryFrom<IntervalKind> for IntervalSetFunction {
    type Error = Error;

    fn try_from(kind: IntervalKind) -> Result<Self> {
        IntervalSetFunction::new(kind)
    }
}

impl From<IntervalSetFunction> for IntervalKind {
    fn from(phi: IntervalSetFunction) -> Self {
        phi.kind
    }
}

impl IntervalSetFunction {
    pub fn new(kind: IntervalKind) -> Result<Self> {
        match &kind {
            IntervalKind::ConcaveOfMeasure { g, density } => {
                g.validate()?;
                if !g.is_nondecreasing() {
                    return Err(Error::InvalidPayload("g must be nondecreasing for an increasing setfunction".into()));
                }
                if let Some(d) = density {
                    if d.values().iter().any(|&v| v < 0.0) {
                        return Err(Error::InvalidPayload("density must be nonnegative".into()));
                    }
                }
            }
            IntervalKind::PointMass { location, mass } => {
                if !(0.0..1.0).contains(location) {
                    return Err(Error::InvalidPayload(format!("location {location} outside [0, 1)")));
                }
                if !(mass.is_finite() && *mass >= 0.0) {
                    return Err(Error::InvalidPayload(format!("mass {mass} must be finite and >= 0")));
                }
            }
        }
        Ok(IntervalSetFunction { kind })
    }

    pub fn concave_of_measure(g: ConcaveFn) -> Result<Self> {
        IntervalSetFunction::new(IntervalKind::ConcaveOfMeasure { g, density: None })
    }

    pub fn point_mass(location: f64, mass: f64) -> Result<Self> {
        IntervalSetFunction::new(IntervalKind::PointMass { location, mass })
    }

    pub fn kind(&self) -> &IntervalKind {
        &self.kind
    }

    fn weighted_measure(density: &Option<StepFunction>, x: &GeneralSet) -> f64 {
        match density {
            None => x.measure(),
            Some(d) => x.pieces().iter().map(|p| d.integrate_over(p.a, p.b)).sum(),
        }
    }

    /// `φ(X)` on the algebra.
    pub fn value(&self, x: &IntervalSet) -> f64 {
        match &self.kind {
            IntervalKind::ConcaveOfMeasure { g, density } => g.eval(Self::weighted_measure(density, &x.to_general())),
            IntervalKind::PointMass { location, mass } => {
                if x.contains(*location) {
                    *mass
                } else {
                    0.0
                }
            }
        }
    }

    /// `φ([0, 1))`.
    pub fn full_value(&self) -> f64 {
        self.value(&IntervalSet::unit())
    }

    /// `inf { φ(Y) : Y ⊇ X, Y in the algebra }`.
    ///
    /// For concave-of-measure the infimum is approached by thin enlargements,
    /// so it equals `g` at the measure of `X`. For a point mass at `p`, every
    /// half-open cover of `X` contains `p` exactly when `p ∈ X` or `X` contains
    /// some `(p, p + δ)`.
    pub fn extend_ui(&self, x: &GeneralSet) -> f64 {
        match &self.kind {
            IntervalKind::ConcaveOfMeasure { g, density } => g.eval(Self::weighted_measure(density, x)),
            IntervalKind::PointMass { location, mass } => {
                if x.contains(*location) || x.right_accumulates(*location) {
                    *mass
                } else {
                    0.0
                }
            }
        }
    }

    /// `sup { φ(Y) : Y ⊆ X, Y in the algebra }`.
    ///
    /// A point mass at `p` is captured only if some `[p, p + δ)` fits in `X`.
    pub fn extend_ls(&self, x: &GeneralSet) -> f64 {
        match &self.kind {
            IntervalKind::ConcaveOfMeasure { g, density } => g.eval(Self::weighted_measure(density, x)),
            IntervalKind::PointMass { location, mass } => {
                if x.contains(*location) && x.right_accumulates(*location) {
                    *mass
                } else {
                    0.0
                }
            }
        }
    }

    pub fn extend(&self, which: Extension, x: &GeneralSet) -> f64 {
        match which {
            Extension::UpperInfimum => self.extend_ui(x),
            Extension::LowerSupremum => self.extend_ls(x),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extension {
    UpperInfimum,
    LowerSupremum,
}

/// `ŵφ(f)` integrating `t ↦ φ^ui{f ≥ t}`.
pub fn choquet_interval(phi: &IntervalSetFunction, f: &StepFunction) -> f64 {
    choquet_interval_with(phi, f, Extension::UpperInfimum)
}

/// Level integral of `f` against the chosen extension. The integrand is
/// constant on each `(t_{i+1}, t_i]` between consecutive values of `f`;
/// negative `f` is lifted by `c = ‖f‖` and `c·φ([0, 1))` subtracted.
pub fn choquet_interval_with(phi: &IntervalSetFunction, f: &StepFunction, which: Extension) -> f64 {
    let c = if f.min() >= 0.0 { 0.0 } else { f.norm() };
    let levels = f.distinct_values();
    let k = levels.len();
    let sum: f64 = (0..k)
        .map(|i| {
            let next = if i + 1 < k { levels[i + 1] + c } else { 0.0 };
            (levels[i] + c - next) * phi.extend(which, &f.superlevel(levels[i]))
        })
        .sum();
    sum - c * phi.full_value()
}

/// A range of thresholds `(lower, threshold]` on which `{f ≥ t}` is the same
/// set and the two extensions disagree there.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExceptionalLevel {
    pub threshold: f64,
    pub lower: f64,
    pub ui: f64,
    pub ls: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AeGap {
    pub levels: Vec<ExceptionalLevel>,
    pub distinct_values: usize,
}

impl AeGap {
    /// Thresholds `t_i` whose level sets separate the two extensions.
    pub fn thresholds(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.threshold).collect()
    }

    /// Lebesgue measure of the exceptional threshold set.
    pub fn measure(&self) -> f64 {
        0.0 + self.levels.iter().map(|l| l.threshold - l.lower).sum::<f64>()
    }
}

/// Thresholds where `φ^ui{f ≥ t} ≠ φ^ls{f ≥ t}`.
///
/// `{f ≥ t}` only changes at the values of `f`, so checking the level set at
/// each distinct value covers every `t`. Below the smallest value the set is
/// `[0, 1)` and above the largest it is empty; both are algebra members.
pub fn ae_gap(phi: &IntervalSetFunction, f: &StepFunction, tol: f64) -> AeGap {
    let levels = f.distinct_values();
    let exceptional = levels
        .iter()
        .enumerate()
        .filter_map(|(i, &t)| {
            let set = f.superlevel(t);
            let (ui, ls) = (phi.extend_ui(&set), phi.extend_ls(&set));
            ((ui - ls).abs() > tol).then(|| ExceptionalLevel {
                threshold: t,
                lower: levels.get(i + 1).copied().unwrap_or(f64::NEG_INFINITY),
                ui,
                ls,
            })
        })
        .collect();
    AeGap { levels: exceptional, distinct_values: levels.len() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt_measure() -> IntervalSetFunction {
        IntervalSetFunction::concave_of_measure(ConcaveFn::Sqrt).unwrap()
    }

    fn steps(breaks: &[f64], values: &[f64]) -> StepFunction {
        StepFunction::new(breaks.to_vec(), values.to_vec()).unwrap()
    }

    #[test]
    fn concave_extensions_ignore_endpoints() {
        let phi = sqrt_measure();
        let x = GeneralSet::interval(0.0, 0.25, true, true).unwrap();
        assert_eq!(phi.extend_ui(&x), 0.5);
        assert_eq!(phi.extend_ls(&x), 0.5);
    }

    #[test]
    fn point_mass_singleton_gap() {
        let phi = IntervalSetFunction::point_mass(0.5, 2.0).unwrap();
        let x = GeneralSet::point(0.5).unwrap();
        assert_eq!(phi.extend_ui(&x), 2.0);
        assert_eq!(phi.extend_ls(&x), 0.0);
        let right_open = GeneralSet::interval(0.5, 0.7, false, false).unwrap();
        assert_eq!(phi.extend_ui(&right_open), 2.0);
        assert_eq!(phi.extend_ls(&right_open), 0.0);
        let left_side = GeneralSet::interval(0.3, 0.5, true, false).unwrap();
        assert_eq!(phi.extend_ui(&left_side), 0.0);
    }

    #[test]
    fn algebra_members_agree() {
        let phis = [sqrt_measure(), IntervalSetFunction::point_mass(0.25, 1.0).unwrap()];
        let x = IntervalSet::new(vec![(0.0, 0.25), (0.5, 0.75)]).unwrap();
        for phi in &phis {
            let v = phi.value(&x);
            assert_eq!(phi.extend_ui(&x.to_general()), v);
            assert_eq!(phi.extend_ls(&x.to_general()), v);
        }
    }

    #[test]
    fn measure_integrates_linearly() {
        let phi = IntervalSetFunction::concave_of_measure(ConcaveFn::Identity).unwrap();
        let f = steps(&[0.0, 0.2, 0.7, 1.0], &[1.0, -0.5, 3.0]);
        let expected = f.lebesgue_integral();
        assert!((choquet_interval(&phi, &f) - expected).abs() < 1e-12);
        assert!((expected - (0.2 - 0.25 + 0.9)).abs() < 1e-12);
    }

    #[test]
    fn indicator_consistency() {
        let x = IntervalSet::new(vec![(0.0, 0.25)]).unwrap();
        let f = StepFunction::indicator(&x);
        assert!((choquet_interval(&sqrt_measure(), &f) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn point_mass_reads_value() {
        let phi = IntervalSetFunction::point_mass(0.5, 1.0).unwrap();
        let f = steps(&[0.0, 0.5, 0.8, 1.0], &[0.1, 0.7, 0.3]);
        assert!((choquet_interval(&phi, &f) - 0.7).abs() < 1e-15);
        let at_break = steps(&[0.0, 0.5, 1.0], &[0.2, 0.9]);
        assert!((choquet_interval(&phi, &at_break) - 0.9).abs() < 1e-15);
    }

    #[test]
    fn measurable_functions_have_no_gap() {
        let phi = IntervalSetFunction::point_mass(0.5, 1.0).unwrap();
        let f = steps(&[0.0, 0.5, 1.0], &[0.2, 0.9]);
        assert!(f.is_measurable());
        let gap = ae_gap(&phi, &f, 1e-9);
        assert!(gap.levels.is_empty());
        assert!(ae_gap(&sqrt_measure(), &f, 1e-9).levels.is_empty());
        assert!(ae_gap(&phi, &StepFunction::constant(3.0), 1e-9).levels.len() <= 1);
    }

    #[test]
    fn attached_breakpoint_breaks_measurability() {
        // f = 1 on [0, 0.5], 0 on (0.5, 1): {f ≥ t} = [0, 0.5] for t ∈ (0, 1].
        let f = StepFunction::with_attachments(vec![0.0, 0.5, 1.0], vec![1.0, 0.0], vec![true]).unwrap();
        assert!(!f.is_measurable());
        let phi = IntervalSetFunction::point_mass(0.5, 1.0).unwrap();
        let gap = ae_gap(&phi, &f, 1e-9);
        assert_eq!(gap.thresholds(), vec![1.0]);
        assert_eq!(gap.measure(), 1.0);
        let ui = choquet_interval_with(&phi, &f, Extension::UpperInfimum);
        let ls = choquet_interval_with(&phi, &f, Extension::LowerSupremum);
        assert_eq!((ui, ls), (1.0, 0.0));
    }

    #[test]
    fn rejects_decreasing_g() {
        let g = ConcaveFn::PiecewiseLinear { points: vec![[0.0, 0.0], [0.5, 1.0], [1.0, 0.5]] };
        assert!(IntervalSetFunction::concave_of_measure(g).is_err());
        assert!(IntervalSetFunction::point_mass(1.0, 1.0).is_err());
        assert!(IntervalSetFunction::point_mass(0.5, -1.0).is_err());
    }

    #[test]
    fn step_function_validation_and_json() {
        assert!(StepFunction::new(vec![0.0, 0.5], vec![1.0]).is_err());
        assert!(StepFunction::new(vec![0.0, 0.6, 0.5, 1.0], vec![1.0, 2.0, 3.0]).is_err());
        let f: StepFunction = serde_json::from_str(r#"{"breakpoints": [0, 0.5, 1], "values": [1, 2]}"#).unwrap();
        assert_eq!(f.value_at(0.5), Some(2.0));
        let phi: IntervalSetFunction =
            serde_json::from_str(r#"{"kind": "point-mass", "location": 0.5, "mass": 1}"#).unwrap();
        assert_eq!(phi.full_value(), 1.0);
        let psi: IntervalSetFunction =
            serde_json::from_str(r#"{"kind": "concave-of-measure", "g": {"type": "sqrt"}}"#).unwrap();
        assert_eq!(psi.full_value(), 1.0);
    }

    #[test]
    fn density_weighting() {
        let density = steps(&[0.0, 0.5, 1.0], &[2.0, 0.0]);
        let phi = IntervalSetFunction::new(IntervalKind::ConcaveOfMeasure { g: ConcaveFn::Identity, density: Some(density) })
            .unwrap();
        let x = IntervalSet::new(vec![(0.25, 0.75)]).unwrap();
        assert_eq!(phi.value(&x), 0.5);
    }
}
