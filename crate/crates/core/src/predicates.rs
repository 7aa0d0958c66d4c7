//! Structural predicates on setfunctions, each reporting a concrete witness
//! pair when it fails.

use serde::Serialize;

use crate::setfn::{SetFunction, SetFunctionKind};
use crate::subset::SubsetMask;

/// Absolute tolerance used by every verdict unless the caller overrides it.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A pair of sets on which a predicate fails, with the size of the failure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub x: SubsetMask,
    pub y: SubsetMask,
    pub violation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn from_worst(worst: Option<Witness>, tol: f64) -> Self {
        match worst {
            Some(w) if w.violation > tol => Verdict { holds: false, witness: Some(w) },
            _ => Verdict { holds: true, witness: None },
        }
    }
}

/// Scans every local square `S, S+x, S+y, S+x+y` (`x < y`, both outside `S`)
/// and hands `(S, x, y, φ(S+x)+φ(S+y)-φ(S+x+y)-φ(S))` to `visit`.
fn for_each_square(phi: &SetFunction, mut visit: impl FnMut(SubsetMask, usize, usize, f64)) {
    let n = phi.n();
    let table = phi.table();
    for s in phi.ground().masks() {
        for x in (0..n).filter(|&x| !s.contains(x)) {
            for y in (x + 1..n).filter(|&y| !s.contains(y)) {
                let gap = table[s.with(x).index()] + table[s.with(y).index()]
                    - table[s.with(x).with(y).index()]
                    - table[s.index()];
                visit(s, x, y, gap);
            }
        }
    }
}

/// `φ(X∪Y) + φ(X∩Y) ≤ φ(X) + φ(Y) + tol` for all `X, Y`.
///
/// Checked through the local exchange form on adjacent squares of the
/// lattice, which is equivalent on a full power set. The witness is the
/// square with the largest violation, reported as `X = S+x, Y = S+y`, so it
/// violates the pairwise inequality directly: `X∪Y = S+x+y`, `X∩Y = S`.
pub fn is_submodular(phi: &SetFunction, tol: f64) -> Verdict {
    if matches!(phi.kind(), SetFunctionKind::Modular { .. }) {
        return Verdict { holds: true, witness: None };
    }
    let mut worst: Option<Witness> = None;
    for_each_square(phi, |s, x, y, gap| {
        let violation = -gap;
        if worst.is_none_or(|w| violation > w.violation) {
            worst = Some(Witness { x: s.with(x), y: s.with(y), violation });
        }
    });
    Verdict::from_worst(worst, tol)
}

/// Submodularity holds with equality in both directions, within `tol`.
pub fn is_modular(phi: &SetFunction, tol: f64) -> Verdict {
    let mut worst: Option<Witness> = None;
    for_each_square(phi, |s, x, y, gap| {
        let violation = gap.abs();
        if worst.is_none_or(|w| violation > w.violation) {
            worst = Some(Witness { x: s.with(x), y: s.with(y), violation });
        }
    });
    Verdict::from_worst(worst, tol)
}

/// `φ(S) ≤ φ(T) + tol` whenever `S ⊆ T`.
///
/// Computes the superset minimum `m(S) = min_{T ⊇ S} φ(T)` by a downward
/// sweep; the witness is the `S` with the largest drop `φ(S) - m(S)` together
/// with its minimizing superset.
pub fn is_increasing(phi: &SetFunction, tol: f64) -> Verdict {
    let n = phi.n();
    let table = phi.table();
    let len = table.len();
    let mut min_val = table.to_vec();
    let mut arg: Vec<u32> = (0..len as u32).collect();
    for s in (0..len).rev() {
        for x in 0..n {
            let t = s | 1 << x;
            if t != s && min_val[t] < min_val[s] {
                min_val[s] = min_val[t];
                arg[s] = arg[t];
            }
        }
    }
    let mut worst: Option<Witness> = None;
    for s in 0..len {
        let violation = table[s] - min_val[s];
        if worst.is_none_or(|w| violation > w.violation) {
            worst = Some(Witness { x: SubsetMask(s as u32), y: SubsetMask(arg[s]), violation });
        }
    }
    Verdict::from_worst(worst, tol)
}

/// `φ*(X) = φ(J) - φ(J∖X)` as a table.
pub fn conjugate(phi: &SetFunction) -> SetFunction {
    let n = phi.n();
    let table = phi.table();
    let full = table[SubsetMask::full(n).index()];
    let values = phi
        .ground()
        .masks()
        .map(|x| full - table[x.complement(n).index()])
        .collect();
    SetFunction::new(phi.ground().clone(), SetFunctionKind::Table(values))
        .expect("conjugate vanishes at the empty set")
}

/// Smallest value of `φ` over `2^J` and where it is attained.
pub fn minimum(phi: &SetFunction) -> (SubsetMask, f64) {
    let table = phi.table();
    let (idx, v) = table
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
    (SubsetMask(idx as u32), v)
}

/// Largest value of `φ` over `2^J` and where it is attained.
pub fn maximum(phi: &SetFunction) -> (SubsetMask, f64) {
    let table = phi.table();
    let (idx, v) = table
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    (SubsetMask(idx as u32), v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concave::ConcaveFn;
    use crate::reference;

    fn path_cut() -> SetFunction {
        SetFunction::cut(3, vec![(0, 1, 1.0), (1, 2, 1.0)]).unwrap()
    }

    fn set(xs: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(xs.iter().copied())
    }

    #[test]
    fn cut_is_submodular_not_increasing() {
        let phi = path_cut();
        assert!(is_submodular(&phi, DEFAULT_TOL).holds);
        let inc = is_increasing(&phi, DEFAULT_TOL);
        assert!(!inc.holds);
        let w = inc.witness.unwrap();
        assert_eq!((w.x, w.y), (set(&[1]), set(&[0, 1, 2])));
        assert_eq!(w.violation, 2.0);
    }

    #[test]
    fn supermodular_pair_witness() {
        let phi = SetFunction::from_table(2, vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        let v = is_submodular(&phi, DEFAULT_TOL);
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert_eq!((w.x, w.y), (set(&[0]), set(&[1])));
        assert_eq!(w.violation, 1.0);
        assert_eq!(reference::pairwise_submodular_violation(&phi, w.x, w.y), 1.0);
    }

    #[test]
    fn modular_family() {
        let phi = SetFunction::modular(vec![1.0, 2.0, 3.0]).unwrap();
        assert!(is_modular(&phi, DEFAULT_TOL).holds);
        assert!(is_submodular(&phi, DEFAULT_TOL).holds);
        assert!(is_submodular(&phi.to_table_function(), DEFAULT_TOL).holds);
        assert!(!is_modular(&path_cut(), DEFAULT_TOL).holds);
    }

    #[test]
    fn matroid_is_increasing() {
        let phi = SetFunction::uniform_matroid(4, 2).unwrap();
        assert!(is_increasing(&phi, DEFAULT_TOL).holds);
        assert!(is_submodular(&phi, DEFAULT_TOL).holds);
    }

    #[test]
    fn conjugate_examples() {
        let phi = path_cut();
        let star = conjugate(&phi);
        assert_eq!(star.value(set(&[0])), -1.0);
        assert_eq!(conjugate(&star).table(), phi.table());
        let m = SetFunction::modular(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(conjugate(&m).table(), m.table());
    }

    #[test]
    fn concave_of_modular_is_submodular() {
        let phi = SetFunction::concave_of_modular(vec![0.3, 1.0, 0.5, 2.0], ConcaveFn::Sqrt).unwrap();
        assert!(is_submodular(&phi, DEFAULT_TOL).holds);
        assert!(is_increasing(&phi, DEFAULT_TOL).holds);
    }

    #[test]
    fn extrema() {
        let phi = path_cut();
        assert_eq!(maximum(&phi), (set(&[1]), 2.0));
        assert_eq!(minimum(&phi), (SubsetMask::EMPTY, 0.0));
    }
}
