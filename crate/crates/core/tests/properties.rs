use choquet_core::extension::{choquet, level_chain, BoundedFunction};
use choquet_core::generate::{self, SubmodularFamily};
use choquet_core::predicates::{conjugate, is_increasing, is_submodular, DEFAULT_TOL};
use choquet_core::reference;
use choquet_core::subset::SubsetMask;
use choquet_core::variation::{
    canonical_decomposition, chain_variation, ls_decomposition, total_variation, variation_report,
};
use choquet_core::SetFunction;
use proptest::prelude::*;

fn table_strategy(max_n: usize) -> impl Strategy<Value = SetFunction> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(-3.0f64..3.0, 1 << n).prop_map(move |mut values| {
            values[0] = 0.0;
            SetFunction::from_table(n, values).unwrap()
        })
    })
}

fn submodular_strategy(max_n: usize) -> impl Strategy<Value = SetFunction> {
    (1..=max_n, any::<u64>()).prop_map(|(n, seed)| {
        let mut rng = generate::rng(seed);
        generate::random_submodular_table(&mut rng, n, false)
    })
}

fn any_strategy(max_n: usize) -> impl Strategy<Value = SetFunction> {
    prop_oneof![table_strategy(max_n), submodular_strategy(max_n)]
}

fn values(n: usize) -> impl Strategy<Value = BoundedFunction> {
    prop::collection::vec(-2.0f64..2.0, n).prop_map(BoundedFunction::from)
}

proptest! {
    #[test]
    fn local_squares_agree_with_all_pairs(phi in any_strategy(6)) {
        let local = is_submodular(&phi, DEFAULT_TOL);
        prop_assert_eq!(local.holds, reference::is_submodular_pairwise(&phi, DEFAULT_TOL));
        if let Some(w) = local.witness {
            let direct = reference::pairwise_submodular_violation(&phi, w.x, w.y);
            prop_assert!((direct - w.violation).abs() < 1e-12);
        }
    }

    #[test]
    fn increasing_check_agrees_with_all_pairs(phi in any_strategy(6)) {
        let v = is_increasing(&phi, DEFAULT_TOL);
        prop_assert_eq!(v.holds, reference::is_increasing_pairwise(&phi, DEFAULT_TOL));
        if let Some(w) = v.witness {
            prop_assert!(w.x.is_subset_of(w.y));
            prop_assert!(phi.value(w.x) - phi.value(w.y) > DEFAULT_TOL);
        }
    }

    #[test]
    fn conjugation_swaps_submodular_and_supermodular(phi in any_strategy(6)) {
        let star = conjugate(&phi);
        prop_assert_eq!(is_submodular(&star.scaled(-1.0), DEFAULT_TOL).holds, is_submodular(&phi, DEFAULT_TOL).holds);
        let back = conjugate(&star);
        for s in phi.ground().masks() {
            prop_assert!((back.value(s) - phi.value(s)).abs() < 1e-12);
        }
    }

    #[test]
    fn every_chain_is_bounded_by_the_variation(phi in table_strategy(6), seed in any::<u64>()) {
        let k = total_variation(&phi);
        prop_assert!((k - reference::variation_all_predecessors(&phi)).abs() < 1e-12);
        let report = variation_report(&phi);
        prop_assert!((chain_variation(&phi, &report.chain) - k).abs() < 1e-12);
        // A random maximal chain, built by adding elements in a random order.
        let mut rng = generate::rng(seed);
        let order = generate::random_bounded(&mut rng, phi.n(), 1.0);
        let chain = level_chain(&order);
        let mut links = vec![SubsetMask::EMPTY];
        links.extend(chain.sets.iter().copied());
        prop_assert!(chain_variation(&phi, &links) <= k + 1e-12);
    }

    #[test]
    fn lower_supremum_split_for_submodular(phi in submodular_strategy(7)) {
        let split = ls_decomposition(&phi, DEFAULT_TOL).unwrap();
        let brute = reference::lower_sup_brute(&phi);
        let mu = canonical_decomposition(&phi).mu;
        for s in 0..brute.len() {
            prop_assert_eq!(split.psi[s], brute[s]);
            prop_assert!((split.psi[s] - mu[s]).abs() < 1e-9);
            prop_assert!((split.psi[s] + split.remainder[s] - phi.value(SubsetMask(s as u32))).abs() < 1e-12);
        }
    }

    #[test]
    fn level_sum_matches_permutation_form(phi in any_strategy(6), seed in any::<u64>()) {
        let mut rng = generate::rng(seed);
        let f = generate::random_bounded(&mut rng, phi.n(), 3.0);
        let a = choquet(&phi, &f).unwrap();
        let b = reference::lovasz_permutation(&phi, &f);
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn submodular_extension_is_convex(phi in submodular_strategy(5), f in values(5), g in values(5), t in 0.0f64..1.0) {
        let n = phi.n();
        let f = BoundedFunction::from(f.values()[..n].to_vec());
        let g = BoundedFunction::from(g.values()[..n].to_vec());
        let mix = f.scale(t).add(&g.scale(1.0 - t));
        let lhs = choquet(&phi, &mix).unwrap();
        let rhs = t * choquet(&phi, &f).unwrap() + (1.0 - t) * choquet(&phi, &g).unwrap();
        prop_assert!(lhs <= rhs + 1e-9);
    }
}

#[test]
fn conjugate_of_a_symmetric_cut_is_its_negative() {
    // φ(J \ X) = φ(X) and φ(J) = 0, so φ* = -φ: submodular in, supermodular out.
    let phi = SetFunction::cut(3, vec![(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
    let star = conjugate(&phi);
    for s in phi.ground().masks() {
        assert_eq!(star.value(s), -phi.value(s));
    }
    assert!(is_submodular(&phi, DEFAULT_TOL).holds);
    assert!(!is_submodular(&star, DEFAULT_TOL).holds);
}

#[test]
fn closed_form_holds_across_families() {
    let mut rng = generate::rng(99);
    for n in 1..=9 {
        for family in SubmodularFamily::ALL {
            let phi = generate::random_submodular(&mut rng, n, family);
            let closed = 2.0 * choquet_core::predicates::maximum(&phi).1 - phi.full_value();
            assert!((total_variation(&phi) - closed).abs() < 1e-9, "{family:?} n={n}");
        }
    }
}

#[test]
fn increasing_functions_have_variation_at_the_top() {
    let phi = SetFunction::coverage(vec![vec![0], vec![0, 1], vec![2]], vec![1.0, 2.0, 0.5]).unwrap();
    assert!(is_increasing(&phi, DEFAULT_TOL).holds);
    assert_eq!(total_variation(&phi), phi.full_value());
    let d = canonical_decomposition(&phi);
    assert!(d.nu.iter().all(|&v| v == 0.0));
}

