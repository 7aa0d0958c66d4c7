use choquet_core::concave::ConcaveFn;
use choquet_core::generate;
use choquet_core::interval::{
    ae_gap, choquet_interval_with, Extension, GeneralSet, IntervalSet, IntervalSetFunction, StepFunction,
};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn grid_set() -> impl Strategy<Value = GeneralSet> {
    prop::collection::vec((0u32..16, 1u32..6, any::<bool>(), any::<bool>()), 0..4).prop_map(|raw| {
        let pieces = raw
            .into_iter()
            .map(|(a, len, lc, rc)| {
                let (a, b) = (a as f64 / 16.0, ((a + len).min(16)) as f64 / 16.0);
                GeneralSet::interval(a, b, lc, rc && b < 1.0).unwrap()
            })
            .collect::<Vec<_>>();
        pieces.into_iter().fold(GeneralSet::new(vec![]).unwrap(), |acc, p| acc.union(&p))
    })
}

fn interval_phi() -> impl Strategy<Value = IntervalSetFunction> {
    prop_oneof![
        (0u32..16, 0.1f64..3.0).prop_map(|(p, m)| IntervalSetFunction::point_mass(p as f64 / 16.0, m).unwrap()),
        Just(IntervalSetFunction::concave_of_measure(ConcaveFn::Sqrt).unwrap()),
        (0.2f64..2.0).prop_map(|cap| IntervalSetFunction::concave_of_measure(ConcaveFn::Min { cap }).unwrap()),
    ]
}

proptest! {
    #[test]
    fn upper_infimum_is_submodular(phi in interval_phi(), x in grid_set(), y in grid_set()) {
        let lhs = phi.extend_ui(&x.union(&y)) + phi.extend_ui(&x.intersection(&y));
        let rhs = phi.extend_ui(&x) + phi.extend_ui(&y);
        prop_assert!(lhs <= rhs + TOL);
    }

    #[test]
    fn extensions_are_ordered_and_agree_on_members(phi in interval_phi(), x in grid_set()) {
        prop_assert!(phi.extend_ls(&x) <= phi.extend_ui(&x) + TOL);
        if let Some(member) = x.as_interval_set() {
            let v = phi.value(&member);
            prop_assert!((phi.extend_ui(&x) - v).abs() <= TOL);
            prop_assert!((phi.extend_ls(&x) - v).abs() <= TOL);
        }
    }

    #[test]
    fn measurable_steps_have_no_exceptional_levels(seed in any::<u64>()) {
        let mut rng = generate::rng(seed);
        let phi = generate::random_interval_phi(&mut rng);
        let f = generate::random_step(&mut rng, 20);
        prop_assert!(ae_gap(&phi, &f, TOL).levels.is_empty());
        let ui = choquet_interval_with(&phi, &f, Extension::UpperInfimum);
        let ls = choquet_interval_with(&phi, &f, Extension::LowerSupremum);
        prop_assert!((ui - ls).abs() <= TOL);
    }

    #[test]
    fn set_algebra_identities(a in grid_set(), b in grid_set()) {
        let (a, b) = (a.as_interval_set(), b.as_interval_set());
        if let (Some(a), Some(b)) = (a, b) {
            let union = a.union(&b).measure();
            let inter = a.intersection(&b).measure();
            prop_assert!((union + inter - a.measure() - b.measure()).abs() < 1e-12);
            prop_assert_eq!(a.complement().complement(), a.clone());
            prop_assert!((a.symmetric_difference(&b).measure() - (union - inter)).abs() < 1e-12);
        }
    }
}

#[test]
fn lower_supremum_is_not_submodular() {
    // A point and the open interval to its right: neither reaches ls on its
    // own, their union does.
    let phi = IntervalSetFunction::point_mass(0.5, 1.0).unwrap();
    let x = GeneralSet::point(0.5).unwrap();
    let y = GeneralSet::interval(0.5, 0.75, false, false).unwrap();
    assert_eq!(phi.extend_ls(&x), 0.0);
    assert_eq!(phi.extend_ls(&y), 0.0);
    assert_eq!(phi.extend_ls(&x.union(&y)), 1.0);
    assert_eq!(phi.extend_ls(&x.intersection(&y)), 0.0);
}

#[test]
fn non_measurable_step_is_detected() {
    let phi = IntervalSetFunction::point_mass(0.25, 2.0).unwrap();
    let f = StepFunction::with_attachments(vec![0.0, 0.25, 1.0], vec![4.0, 1.0], vec![true]).unwrap();
    assert!(!f.is_measurable());
    let gap = ae_gap(&phi, &f, TOL);
    assert_eq!(gap.thresholds(), vec![4.0]);
    assert_eq!(gap.measure(), 3.0);
    assert_eq!(choquet_interval_with(&phi, &f, Extension::UpperInfimum), 8.0);
    assert_eq!(choquet_interval_with(&phi, &f, Extension::LowerSupremum), 2.0);
}

#[test]
fn lebesgue_integral_under_identity() {
    let phi = IntervalSetFunction::concave_of_measure(ConcaveFn::Identity).unwrap();
    let mut rng = generate::rng(4);
    for _ in 0..50 {
        let f = generate::random_step(&mut rng, 20);
        let v = choquet_interval_with(&phi, &f, Extension::UpperInfimum);
        assert!((v - f.lebesgue_integral()).abs() < 1e-12);
    }
    let x = IntervalSet::new(vec![(0.0, 0.25), (0.5, 0.75)]).unwrap();
    assert_eq!(choquet_interval_with(&phi, &StepFunction::indicator(&x), Extension::LowerSupremum), 0.5);
}
