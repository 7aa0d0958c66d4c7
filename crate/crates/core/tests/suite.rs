use choquet_core::fubini::{uniform_continuity_modulus, FubiniInstance};
use choquet_core::generate;
use choquet_core::selftest;
use choquet_core::SetFunction;

#[test]
fn suite_report_is_reproducible() {
    let a = serde_json::to_string(&selftest::criterion_5(21)).unwrap();
    let b = serde_json::to_string(&selftest::criterion_5(21)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, serde_json::to_string(&selftest::criterion_5(22)).unwrap());
}

#[test]
fn fubini_instance_json_round_trip() {
    let mut rng = generate::rng(8);
    let inst = generate::random_fubini(&mut rng, 4, 5);
    let text = serde_json::to_string(&inst.to_json()).unwrap();
    let raw = serde_json::from_str(&text).unwrap();
    let back = FubiniInstance::from_json(raw, false, 1e-9).unwrap();
    assert_eq!(back.phi().table(), inst.phi().table());
    assert_eq!(back.lambda(), inst.lambda());
}

#[test]
fn modulus_of_a_measure_is_the_identity() {
    // |π(S) - π(T)| ≤ π(S △ T), with equality for nested pairs.
    let pi = [1.0 / 16.0, 2.0 / 16.0, 3.0 / 16.0, 4.0 / 16.0, 6.0 / 16.0];
    let phi = SetFunction::modular(pi.to_vec()).unwrap();
    let eps: Vec<f64> = phi.ground().masks().skip(1).map(|s| phi.value(s)).collect();
    let modulus = uniform_continuity_modulus(&phi, &pi, &eps).unwrap();
    for (e, d) in modulus.rows {
        assert_eq!(d, e);
    }
}

#[test]
fn modulus_by_exhaustive_pairs() {
    let phi = SetFunction::coverage(vec![vec![0, 1], vec![1, 2], vec![2, 3]], vec![1.0, 0.5, 2.0, 1.0]).unwrap();
    let pi = [1.0 / 3.0; 3];
    let eps = [0.25, 1.0, 2.5, 4.0, 10.0];
    let modulus = uniform_continuity_modulus(&phi, &pi, &eps).unwrap();
    for (e, d) in modulus.rows {
        let mut expected = f64::INFINITY;
        for s in phi.ground().masks() {
            for t in phi.ground().masks() {
                if (phi.value(s) - phi.value(t)).abs() >= e {
                    let mass: f64 = s.symmetric_difference(t).elements().map(|y| pi[y]).sum();
                    expected = expected.min(mass);
                }
            }
        }
        assert!((d - expected).abs() < 1e-15 || d == expected, "ε = {e}");
    }
}
