//! Seeded random instances for the self-test suite and property tests.
//!
//! Every generator draws from a caller-supplied [`ChaCha8Rng`]; [`rng`]
//! builds one from a `u64` seed so runs are reproducible across platforms.
//! Dyadic variants use multiples of `1/16` with small numerators, on which
//! all sums and differences formed by the algorithms are exact.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::concave::ConcaveFn;
use crate::extension::BoundedFunction;
use crate::fubini::FubiniInstance;
use crate::interval::{IntervalSetFunction, StepFunction};
use crate::predicates::DEFAULT_TOL;
use crate::setfn::SetFunction;
use crate::subset::SubsetMask;
use crate::uncross::WeightedFamily;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for sub-task `label` of a run seeded with `base`.
pub fn derive_seed(base: u64, label: u64) -> u64 {
    let mut r = ChaCha8Rng::seed_from_u64(base);
    r.set_stream(label);
    r.gen()
}

fn dyadic(rng: &mut ChaCha8Rng, max_numerator: i32) -> f64 {
    rng.gen_range(-max_numerator..=max_numerator) as f64 / 16.0
}

/// Arbitrary table with `φ(∅) = 0` and values of both signs.
pub fn random_table(rng: &mut ChaCha8Rng, n: usize, dyadic_values: bool) -> SetFunction {
    let len = 1usize << n;
    let mut values: Vec<f64> = (0..len)
        .map(|_| if dyadic_values { dyadic(rng, 48) } else { rng.gen_range(-3.0..3.0) })
        .collect();
    values[0] = 0.0;
    SetFunction::from_table(n, values).expect("generated table is valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubmodularFamily {
    Cut,
    Coverage,
    ConcaveOfModular,
    Matroid,
}

impl SubmodularFamily {
    pub const ALL: [SubmodularFamily; 4] = [
        SubmodularFamily::Cut,
        SubmodularFamily::Coverage,
        SubmodularFamily::ConcaveOfModular,
        SubmodularFamily::Matroid,
    ];
}

pub fn random_concave(rng: &mut ChaCha8Rng) -> ConcaveFn {
    match rng.gen_range(0..5) {
        0 => ConcaveFn::Identity,
        1 => ConcaveFn::Sqrt,
        2 => ConcaveFn::Power { exponent: rng.gen_range(0.2..1.0) },
        3 => ConcaveFn::Min { cap: rng.gen_range(0.2..3.0) },
        _ => {
            let pieces = rng.gen_range(1..=4);
            let mut slopes: Vec<f64> = (0..pieces).map(|_| rng.gen_range(0.0..2.0)).collect();
            slopes.sort_by(|a, b| b.total_cmp(a));
            let mut points = vec![[0.0, 0.0]];
            let (mut x, mut y) = (0.0, 0.0);
            for s in slopes {
                let dx = rng.gen_range(0.1..1.5);
                x += dx;
                y += s * dx;
                points.push([x, y]);
            }
            ConcaveFn::PiecewiseLinear { points }
        }
    }
}

/// Submodular instance from `family`. Cut and coverage weights are dyadic.
pub fn random_submodular(rng: &mut ChaCha8Rng, n: usize, family: SubmodularFamily) -> SetFunction {
    match family {
        SubmodularFamily::Cut => {
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.5) {
                        edges.push((u, v, rng.gen_range(1..=32) as f64 / 16.0));
                    }
                }
            }
            SetFunction::cut(n, edges).expect("valid cut")
        }
        SubmodularFamily::Coverage => {
            let items = rng.gen_range(1..=2 * n);
            let covers = (0..n)
                .map(|_| (0..items).filter(|_| rng.gen_bool(0.4)).collect())
                .collect();
            let weights = (0..items).map(|_| rng.gen_range(0..=32) as f64 / 16.0).collect();
            SetFunction::coverage(covers, weights).expect("valid coverage")
        }
        SubmodularFamily::ConcaveOfModular => {
            let weights = (0..n).map(|_| rng.gen_range(0.0..2.0)).collect();
            SetFunction::concave_of_modular(weights, random_concave(rng)).expect("valid concave-of-modular")
        }
        SubmodularFamily::Matroid => {
            if rng.gen_bool(0.5) {
                SetFunction::uniform_matroid(n, rng.gen_range(0..=n)).expect("valid uniform matroid")
            } else {
                let k = rng.gen_range(1..=n);
                let blocks = (0..n).map(|_| rng.gen_range(0..k)).collect();
                let capacities = (0..k).map(|_| rng.gen_range(0..=2)).collect();
                SetFunction::partition_matroid(blocks, capacities).expect("valid partition matroid")
            }
        }
    }
}

/// Submodular but generally neither monotone nor nonnegative: a cut plus a
/// mixed-sign modular part plus a concave-of-modular part, as a table.
pub fn random_submodular_table(rng: &mut ChaCha8Rng, n: usize, dyadic_values: bool) -> SetFunction {
    let cut = random_submodular(rng, n, SubmodularFamily::Cut);
    let weights: Vec<f64> = (0..n)
        .map(|_| if dyadic_values { dyadic(rng, 24) } else { rng.gen_range(-1.5..1.5) })
        .collect();
    let modular = SetFunction::modular(weights).expect("valid modular");
    let mut phi = SetFunction::linear_combination(1.0, &cut, 1.0, &modular).expect("same ground set");
    if !dyadic_values {
        let concave = random_submodular(rng, n, SubmodularFamily::ConcaveOfModular);
        phi = SetFunction::linear_combination(1.0, &phi, 1.0, &concave).expect("same ground set");
    }
    phi
}

/// Values in `[-scale, scale]`, with a fair share of repeated values so that
/// level chains skip sizes.
pub fn random_bounded(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> BoundedFunction {
    let pool: Vec<f64> = (0..n.max(1)).map(|_| rng.gen_range(-scale..=scale)).collect();
    let tied = rng.gen_bool(0.3);
    let values: Vec<f64> = (0..n)
        .map(|_| if tied { *pool[..n.div_ceil(2)].choose(rng).expect("nonempty pool") } else { rng.gen_range(-scale..=scale) })
        .collect();
    BoundedFunction::from(values)
}

pub fn random_nonnegative_integers(rng: &mut ChaCha8Rng, n: usize, max: u64) -> Vec<u64> {
    (0..n).map(|_| rng.gen_range(0..=max)).collect()
}

/// Family whose multiplicities sum to at most `max_total`, each in `1..=5`.
pub fn random_family(rng: &mut ChaCha8Rng, n: usize, max_total: u64) -> WeightedFamily {
    let mut remaining = rng.gen_range(1..=max_total.max(1));
    let mut entries = Vec::new();
    while remaining > 0 {
        let a = rng.gen_range(1..=remaining.min(5));
        entries.push((SubsetMask(rng.gen_range(0..1u32 << n)), a));
        remaining -= a;
    }
    WeightedFamily::new(n, entries).expect("generated family is valid")
}

pub fn random_interval_phi(rng: &mut ChaCha8Rng) -> IntervalSetFunction {
    if rng.gen_bool(0.5) {
        IntervalSetFunction::concave_of_measure(random_concave(rng)).expect("valid concave-of-measure")
    } else {
        let location = (rng.gen_range(0..64) as f64) / 64.0;
        IntervalSetFunction::point_mass(location, rng.gen_range(0.1..3.0)).expect("valid point mass")
    }
}

/// Half-open step function with `1..=max_pieces` pieces. Breakpoints lie on
/// the grid of multiples of `1/64`, so point-mass locations often coincide
/// with them.
pub fn random_step(rng: &mut ChaCha8Rng, max_pieces: usize) -> StepFunction {
    let pieces = rng.gen_range(1..=max_pieces.min(63));
    let mut cuts: Vec<u32> = (1..64).collect();
    cuts.shuffle(rng);
    let mut inner: Vec<u32> = cuts[..pieces - 1].to_vec();
    inner.sort_unstable();
    let mut breakpoints = vec![0.0];
    breakpoints.extend(inner.iter().map(|&c| c as f64 / 64.0));
    breakpoints.push(1.0);
    let palette: Vec<f64> = (0..pieces.div_ceil(2)).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let values = (0..pieces).map(|_| *palette.choose(rng).expect("nonempty palette")).collect();
    StepFunction::new(breakpoints, values).expect("generated step function is valid")
}

fn probability_vector(rng: &mut ChaCha8Rng, len: usize, allow_zero: bool) -> Vec<f64> {
    let raw: Vec<f64> = (0..len)
        .map(|_| if allow_zero && rng.gen_bool(0.15) { 0.0 } else { rng.gen_range(0.05..1.0) })
        .collect();
    let total: f64 = raw.iter().sum();
    if total == 0.0 {
        return vec![1.0 / len as f64; len];
    }
    raw.iter().map(|v| v / total).collect()
}

/// Instance with `m` rows over `n` points, `F` in `[0, 1]`, and a nonnegative
/// submodular `φ` drawn from coverage, matroid rank or concave-of-modular.
pub fn random_fubini(rng: &mut ChaCha8Rng, m: usize, n: usize) -> FubiniInstance {
    let family = *[SubmodularFamily::Coverage, SubmodularFamily::Matroid, SubmodularFamily::ConcaveOfModular]
        .choose(rng)
        .expect("nonempty");
    let phi = random_submodular(rng, n, family);
    let lambda = probability_vector(rng, m, true);
    let pi = probability_vector(rng, n, false);
    let f = (0..m).map(|_| (0..n).map(|_| rng.gen_range(0.0..=1.0)).collect()).collect();
    FubiniInstance::new(lambda, pi, f, phi, DEFAULT_TOL).expect("generated instance satisfies the hypotheses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predicates::{is_submodular, minimum};

    #[test]
    fn seeds_reproduce() {
        let a = random_table(&mut rng(5), 4, false);
        let b = random_table(&mut rng(5), 4, false);
        assert_eq!(a, b);
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
        assert_eq!(derive_seed(9, 3), derive_seed(9, 3));
    }

    #[test]
    fn submodular_generators_are_submodular() {
        let mut r = rng(11);
        for n in 1..=7 {
            for family in SubmodularFamily::ALL {
                let phi = random_submodular(&mut r, n, family);
                assert!(is_submodular(&phi, DEFAULT_TOL).holds, "{family:?} n={n}");
                assert!(minimum(&phi).1 >= -1e-12);
            }
            assert!(is_submodular(&random_submodular_table(&mut r, n, false), DEFAULT_TOL).holds);
            assert!(is_submodular(&random_submodular_table(&mut r, n, true), DEFAULT_TOL).holds);
        }
    }

    #[test]
    fn step_functions_stay_small() {
        let mut r = rng(2);
        for _ in 0..100 {
            let f = random_step(&mut r, 20);
            assert!(f.piece_count() <= 20);
            assert!(f.is_measurable());
        }
    }
}
