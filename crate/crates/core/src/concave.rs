//! Concave scalar functions with `g(0) = 0`, composed with a nonnegative measure
//! or weight vector to build submodular setfunctions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ConcaveFn {
    Identity,
    Sqrt,
    /// `t^exponent` with `0 < exponent <= 1`.
    Power { exponent: f64 },
    /// `min(t, cap)`.
    Min { cap: f64 },
    /// Linear interpolation through `points`, starting at `(0, 0)`, extended
    /// with the last slope past the final breakpoint.
    PiecewiseLinear { points: Vec<[f64; 2]> },
}

impl ConcaveFn {
    pub fn validate(&self) -> Result<()> {
        match self {
            ConcaveFn::Identity | ConcaveFn::Sqrt => Ok(()),
            ConcaveFn::Power { exponent } => {
                if *exponent > 0.0 && *exponent <= 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidPayload(format!("power exponent {exponent} outside (0, 1]")))
                }
            }
            ConcaveFn::Min { cap } => {
                if cap.is_finite() && *cap >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidPayload(format!("cap {cap} must be finite and >= 0")))
                }
            }
            ConcaveFn::PiecewiseLinear { points } => {
                if points.len() < 2 {
                    return Err(Error::InvalidPayload("piecewise-linear g needs at least 2 points".into()));
                }
                if points.iter().flatten().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidPayload("non-finite breakpoint".into()));
                }
                if points[0] != [0.0, 0.0] {
                    if points[0][0] == 0.0 {
                        return Err(Error::NotNormalized(points[0][1]));
                    }
                    return Err(Error::InvalidPayload("first breakpoint must be (0, 0)".into()));
                }
                let mut last_slope = f64::INFINITY;
                for w in points.windows(2) {
                    let dx = w[1][0] - w[0][0];
                    if dx <= 0.0 {
                        return Err(Error::InvalidPayload("breakpoints must be strictly increasing".into()));
                    }
                    let slope = (w[1][1] - w[0][1]) / dx;
                    if slope > last_slope + 1e-12 {
                        return Err(Error::InvalidPayload("piecewise-linear g is not concave".into()));
                    }
                    last_slope = slope;
                }
                Ok(())
            }
        }
    }

    pub fn is_nondecreasing(&self) -> bool {
        match self {
            ConcaveFn::PiecewiseLinear { points } => {
                let k = points.len();
                points[k - 1][1] >= points[k - 2][1]
            }
            _ => true,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            ConcaveFn::Identity => t,
            ConcaveFn::Sqrt => t.max(0.0).sqrt(),
            ConcaveFn::Power { exponent } => t.max(0.0).powf(*exponent),
            ConcaveFn::Min { cap } => t.min(*cap),
            ConcaveFn::PiecewiseLinear { points } => {
                let seg = points
                    .windows(2)
                    .position(|w| t <= w[1][0])
                    .unwrap_or(points.len() - 2);
                let [x0, y0] = points[seg];
                let [x1, y1] = points[seg + 1];
                y0 + (t - x0) * (y1 - y0) / (x1 - x0)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn piecewise_linear_eval() {
        let g = ConcaveFn::PiecewiseLinear { points: vec![[0.0, 0.0], [1.0, 2.0], [3.0, 3.0]] };
        g.validate().unwrap();
        assert_eq!(g.eval(0.0), 0.0);
        assert_eq!(g.eval(0.5), 1.0);
        assert_eq!(g.eval(2.0), 2.5);
        assert_eq!(g.eval(5.0), 4.0);
        assert!(g.is_nondecreasing());
    }

    #[test]
    fn rejects_convex_and_unnormalized() {
        let convex = ConcaveFn::PiecewiseLinear { points: vec![[0.0, 0.0], [1.0, 1.0], [2.0, 3.0]] };
        assert!(convex.validate().is_err());
        let shifted = ConcaveFn::PiecewiseLinear { points: vec![[0.0, 1.0], [1.0, 2.0]] };
        assert!(matches!(shifted.validate(), Err(Error::NotNormalized(_))));
        assert!(ConcaveFn::Power { exponent: 1.5 }.validate().is_err());
    }

    #[test]
    fn decreasing_tail_detected() {
        let g = ConcaveFn::PiecewiseLinear { points: vec![[0.0, 0.0], [1.0, 1.0], [2.0, 0.5]] };
        g.validate().unwrap();
        assert!(!g.is_nondecreasing());
    }
}
