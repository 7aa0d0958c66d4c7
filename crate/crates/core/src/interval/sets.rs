use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A member of the set-algebra: a finite union of half-open intervals
/// `[a, b) ⊆ [0, 1)`, kept sorted, disjoint and non-touching.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl TryFrom<Vec<[f64; 2]>> for IntervalSet {
    type Error = Error;

    fn try_from(pairs: Vec<[f64; 2]>) -> Result<Self> {
        IntervalSet::new(pairs.into_iter().map(|[a, b]| (a, b)).collect())
    }
}

impl From<IntervalSet> for Vec<[f64; 2]> {
    fn from(set: IntervalSet) -> Self {
        set.intervals.into_iter().map(|(a, b)| [a, b]).collect()
    }
}

fn check_bounds(a: f64, b: f64) -> Result<()> {
    if a.is_finite() && b.is_finite() && 0.0 <= a && a <= b && b <= 1.0 {
        Ok(())
    } else {
        Err(Error::NonCanonical(format!("[{a}, {b}) is not inside [0, 1)")))
    }
}

impl IntervalSet {
    /// Accepts only canonical input.
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self> {
        for &(a, b) in &intervals {
            check_bounds(a, b)?;
            if a == b {
                return Err(Error::NonCanonical(format!("empty interval [{a}, {b})")));
            }
        }
        if let Some(w) = intervals.windows(2).find(|w| w[0].1 >= w[1].0) {
            return Err(Error::NonCanonical(format!(
                "[{}, {}) and [{}, {}) overlap, touch or are out of order",
                w[0].0, w[0].1, w[1].0, w[1].1
            )));
        }
        Ok(IntervalSet { intervals })
    }

    /// Sorts, merges and drops empty pieces of an arbitrary list.
    pub fn from_intervals(mut intervals: Vec<(f64, f64)>) -> Result<Self> {
        for &(a, b) in &intervals {
            check_bounds(a, b)?;
        }
        intervals.retain(|&(a, b)| a < b);
        intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(intervals.len());
        for (a, b) in intervals {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        Ok(IntervalSet { intervals: merged })
    }

    pub fn empty() -> Self {
        IntervalSet::default()
    }

    pub fn unit() -> Self {
        IntervalSet { intervals: vec![(0.0, 1.0)] }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    pub fn contains(&self, p: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| a <= p && p < b)
    }

    pub fn union(&self, other: &Self) -> Self {
        let all = self.intervals.iter().chain(&other.intervals).copied().collect();
        IntervalSet::from_intervals(all).expect("canonical inputs stay in range")
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a0, b0) = self.intervals[i];
            let (a1, b1) = other.intervals[j];
            let (lo, hi) = (a0.max(a1), b0.min(b1));
            if lo < hi {
                out.push((lo, hi));
            }
            if b0 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { intervals: out }
    }

    /// Complement within `[0, 1)`.
    pub fn complement(&self) -> Self {
        let mut out = Vec::new();
        let mut cursor = 0.0;
        for &(a, b) in &self.intervals {
            if cursor < a {
                out.push((cursor, a));
            }
            cursor = b;
        }
        if cursor < 1.0 {
            out.push((cursor, 1.0));
        }
        IntervalSet { intervals: out }
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersection(&other.complement())
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        self.difference(other).union(&other.difference(self))
    }

    pub fn to_general(&self) -> GeneralSet {
        GeneralSet {
            pieces: self
                .intervals
                .iter()
                .map(|&(a, b)| Piece { a, b, left_closed: true, right_closed: false })
                .collect(),
        }
    }
}

/// One interval of a [`GeneralSet`]; `a == b` with both ends closed is a single point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub a: f64,
    pub b: f64,
    pub left_closed: bool,
    pub right_closed: bool,
}

impl Piece {
    fn is_empty(&self) -> bool {
        self.a > self.b || (self.a == self.b && !(self.left_closed && self.right_closed))
    }

    pub(crate) fn contains(&self, p: f64) -> bool {
        (self.a < p && p < self.b) || (p == self.a && self.left_closed) || (p == self.b && self.right_closed)
    }

    fn intersect(&self, other: &Piece) -> Piece {
        let (a, left_closed) = match self.a.total_cmp(&other.a) {
            std::cmp::Ordering::Less => (other.a, other.left_closed),
            std::cmp::Ordering::Greater => (self.a, self.left_closed),
            std::cmp::Ordering::Equal => (self.a, self.left_closed && other.left_closed),
        };
        let (b, right_closed) = match self.b.total_cmp(&other.b) {
            std::cmp::Ordering::Less => (self.b, self.right_closed),
            std::cmp::Ordering::Greater => (other.b, other.right_closed),
            std::cmp::Ordering::Equal => (self.b, self.right_closed && other.right_closed),
        };
        Piece { a, b, left_closed, right_closed }
    }
}

/// An arbitrary finite union of intervals in `[0, 1)` with explicit endpoint
/// inclusion, used as the argument of the upper-infimum and lower-supremum
/// extensions. Canonical form: sorted, disjoint, and no two pieces share an
/// endpoint that either of them includes.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct GeneralSet {
    pieces: Vec<Piece>,
}

/// JSON form: `{"intervals": [[a, b], ...], "flags": [[left_closed, right_closed], ...]}`;
/// missing flags mean half-open `[a, b)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneralSetJson {
    pub intervals: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flags: Option<Vec<[bool; 2]>>,
}

impl<'de> Deserialize<'de> for GeneralSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GeneralSetJson::deserialize(d)?;
        GeneralSet::from_json(raw).map_err(serde::de::Error::custom)
    }
}

impl GeneralSet {
    pub fn from_json(raw: GeneralSetJson) -> Result<Self> {
        let flags = raw.flags.unwrap_or_else(|| vec![[true, false]; raw.intervals.len()]);
        if flags.len() != raw.intervals.len() {
            return Err(Error::Dimension { expected: raw.intervals.len(), got: flags.len() });
        }
        let pieces = raw
            .intervals
            .iter()
            .zip(&flags)
            .map(|(&[a, b], &[left_closed, right_closed])| Piece { a, b, left_closed, right_closed })
            .collect();
        GeneralSet::new(pieces)
    }

    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        for p in &pieces {
            check_bounds(p.a, p.b)?;
            if p.b == 1.0 && p.right_closed {
                return Err(Error::NonCanonical("1 lies outside [0, 1)".into()));
            }
        }
        let mut pieces: Vec<Piece> = pieces.into_iter().filter(|p| !p.is_empty()).collect();
        pieces.sort_by(|x, y| x.a.total_cmp(&y.a).then(y.left_closed.cmp(&x.left_closed)));
        let mut merged: Vec<Piece> = Vec::with_capacity(pieces.len());
        for q in pieces {
            match merged.last_mut() {
                Some(p) if q.a < p.b || (q.a == p.b && (p.right_closed || q.left_closed)) => {
                    if q.a == p.a {
                        p.left_closed |= q.left_closed;
                    }
                    match q.b.total_cmp(&p.b) {
                        std::cmp::Ordering::Greater => {
                            p.b = q.b;
                            p.right_closed = q.right_closed;
                        }
                        std::cmp::Ordering::Equal => p.right_closed |= q.right_closed,
                        std::cmp::Ordering::Less => {}
                    }
                }
                _ => merged.push(q),
            }
        }
        Ok(GeneralSet { pieces: merged })
    }

    pub fn point(p: f64) -> Result<Self> {
        GeneralSet::new(vec![Piece { a: p, b: p, left_closed: true, right_closed: true }])
    }

    pub fn interval(a: f64, b: f64, left_closed: bool, right_closed: bool) -> Result<Self> {
        GeneralSet::new(vec![Piece { a, b, left_closed, right_closed }])
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn to_json(&self) -> GeneralSetJson {
        GeneralSetJson {
            intervals: self.pieces.iter().map(|p| [p.a, p.b]).collect(),
            flags: Some(self.pieces.iter().map(|p| [p.left_closed, p.right_closed]).collect()),
        }
    }

    pub fn contains(&self, p: f64) -> bool {
        self.pieces.iter().any(|q| q.contains(p))
    }

    /// Some `(p, p + δ)` lies inside the set.
    pub fn right_accumulates(&self, p: f64) -> bool {
        self.pieces.iter().any(|q| q.a <= p && p < q.b)
    }

    /// Lebesgue measure; endpoint flags do not matter.
    pub fn measure(&self) -> f64 {
        self.pieces.iter().map(|p| p.b - p.a).sum()
    }

    /// The set as an algebra member, if every piece is half-open `[a, b)`.
    pub fn as_interval_set(&self) -> Option<IntervalSet> {
        self.pieces
            .iter()
            .all(|p| p.a < p.b && p.left_closed && !p.right_closed)
            .then(|| IntervalSet { intervals: self.pieces.iter().map(|p| (p.a, p.b)).collect() })
    }

    pub fn union(&self, other: &Self) -> Self {
        let all = self.pieces.iter().chain(&other.pieces).copied().collect();
        GeneralSet::new(all).expect("canonical inputs stay in range")
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let all = self
            .pieces
            .iter()
            .flat_map(|p| other.pieces.iter().map(move |q| p.intersect(q)))
            .filter(|p| !p.is_empty())
            .collect();
        GeneralSet::new(all).expect("canonical inputs stay in range")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjacent_union_merges() {
        let a = IntervalSet::new(vec![(0.0, 0.5)]).unwrap();
        let b = IntervalSet::new(vec![(0.5, 1.0)]).unwrap();
        assert_eq!(a.union(&b), IntervalSet::unit());
    }

    #[test]
    fn complement_and_measure() {
        let a = IntervalSet::new(vec![(0.25, 0.75)]).unwrap();
        assert_eq!(a.complement().intervals(), &[(0.0, 0.25), (0.75, 1.0)]);
        let m = IntervalSet::new(vec![(0.1, 0.4)]).unwrap().measure();
        assert!((m - 0.3).abs() < 1e-15);
        assert_eq!(IntervalSet::empty().complement(), IntervalSet::unit());
    }

    #[test]
    fn intersections_and_differences() {
        let a = IntervalSet::new(vec![(0.0, 0.4), (0.6, 0.9)]).unwrap();
        let b = IntervalSet::new(vec![(0.3, 0.7)]).unwrap();
        assert_eq!(a.intersection(&b).intervals(), &[(0.3, 0.4), (0.6, 0.7)]);
        assert_eq!(a.symmetric_difference(&b).intervals(), &[(0.0, 0.3), (0.4, 0.6), (0.7, 0.9)]);
        assert!(a.intersection(&a.complement()).is_empty());
    }

    #[test]
    fn rejects_non_canonical() {
        assert!(IntervalSet::new(vec![(0.0, 0.5), (0.5, 0.7)]).is_err());
        assert!(IntervalSet::new(vec![(0.5, 0.7), (0.0, 0.2)]).is_err());
        assert!(IntervalSet::new(vec![(0.2, 0.2)]).is_err());
        assert!(IntervalSet::new(vec![(0.2, 1.5)]).is_err());
        assert!(serde_json::from_str::<IntervalSet>("[[0.0, 0.5], [0.4, 0.8]]").is_err());
    }

    #[test]
    fn general_set_canonicalization() {
        let x = GeneralSet::new(vec![
            Piece { a: 0.2, b: 0.5, left_closed: true, right_closed: true },
            Piece { a: 0.5, b: 0.7, left_closed: false, right_closed: false },
        ])
        .unwrap();
        assert_eq!(x.pieces().len(), 1);
        assert_eq!(x.as_interval_set().unwrap().intervals(), &[(0.2, 0.7)]);

        let y = GeneralSet::new(vec![
            Piece { a: 0.2, b: 0.5, left_closed: true, right_closed: false },
            Piece { a: 0.5, b: 0.7, left_closed: false, right_closed: false },
        ])
        .unwrap();
        assert_eq!(y.pieces().len(), 2);
        assert!(!y.contains(0.5));
        assert!(y.right_accumulates(0.5));
        assert!(y.as_interval_set().is_none());
    }

    #[test]
    fn points_and_flags() {
        let p = GeneralSet::point(0.5).unwrap();
        assert!(p.contains(0.5));
        assert!(!p.right_accumulates(0.5));
        assert_eq!(p.measure(), 0.0);
        let open = GeneralSet::interval(0.3, 0.3, true, false).unwrap();
        assert!(open.pieces().is_empty());
        assert!(GeneralSet::interval(0.5, 1.0, true, true).is_err());
        let json: GeneralSet = serde_json::from_str(r#"{"intervals": [[0, 0.25]], "flags": [[true, true]]}"#).unwrap();
        assert!(json.contains(0.25));
    }

    #[test]
    fn general_intersection() {
        let a = GeneralSet::interval(0.0, 0.5, true, true).unwrap();
        let b = GeneralSet::interval(0.5, 0.8, true, false).unwrap();
        let i = a.intersection(&b);
        assert_eq!(i, GeneralSet::point(0.5).unwrap());
        let u = a.union(&b);
        assert_eq!(u.as_interval_set().unwrap().intervals(), &[(0.0, 0.8)]);
    }
}
