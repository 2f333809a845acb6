mod common;

use chebpot::{
    calibrate_sign, counterexample_path, energy_affine_along_geodesic, energy_chart, energy_okounkov,
    energy_report, QuadratureScheme, QuadratureSpec,
};
use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn energy_is_antisymmetric(p0 in spd_strategy(3), p1 in spd_strategy(3)) {
        prop_assert_eq!(energy_okounkov(&p0, &p1).unwrap(), -energy_okounkov(&p1, &p0).unwrap());
    }

    #[test]
    fn energy_is_a_cocycle(p0 in spd_strategy(3), p1 in spd_strategy(3), p2 in spd_strategy(3)) {
        let lhs = energy_okounkov(&p0, &p1).unwrap() + energy_okounkov(&p1, &p2).unwrap();
        prop_assert!((lhs - energy_okounkov(&p0, &p2).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn energy_of_a_scalar_shift_is_its_log(p in spd_strategy(3), s in 0.01f64..100.0) {
        prop_assert!((energy_okounkov(&p, &p.scaled(s).unwrap()).unwrap() - s.ln()).abs() < 1e-12);
    }

    #[test]
    fn energy_is_affine_along_geodesics(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let path = random_path(&mut rng, 3);
        let ts: Vec<f64> = (0..7).map(|k| -1.0 + k as f64 / 3.0).collect();
        prop_assert!(energy_affine_along_geodesic(&path, &ts).unwrap() <= 1e-12);
        // Slope (1/(n+1)) ΣDᵢ.
        let e = energy_okounkov(&path.eval(0.0).unwrap(), &path.eval(1.0).unwrap()).unwrap();
        prop_assert!((e - path.d().iter().sum::<f64>() / 3.0).abs() < 1e-10);
    }
}

#[test]
fn counterexample_energy_is_flat() {
    let ts: Vec<f64> = (0..9).map(|k| 0.25 * k as f64).collect();
    assert!(energy_affine_along_geodesic(&counterexample_path(), &ts).unwrap() <= 1e-12);
    let e = energy_okounkov(&counterexample_path().eval(0.0).unwrap(), &counterexample_path().eval(2.0).unwrap()).unwrap();
    assert!(e.abs() < 1e-12);
}

#[test]
fn chart_energy_matches_simplex_side_in_one_dimension() {
    let spec = QuadratureSpec::new(QuadratureScheme::default());
    let sign = calibrate_sign(1, &spec).unwrap();
    assert_eq!(sign, -1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..5 {
        let p0 = random_spd(&mut rng, 2);
        let p1 = random_spd(&mut rng, 2);
        let rep = energy_report(&p0, &p1, &spec).unwrap();
        assert!(rep.gap <= 1e-3f64.max(rep.quadrature_error_estimate), "{rep:?}");
        assert_eq!(rep.sign, sign);
    }
}

#[test]
fn chart_energy_respects_tolerance() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let p0 = random_spd(&mut rng, 2);
    let p1 = random_spd(&mut rng, 2);
    let spec = QuadratureSpec::new(QuadratureScheme::product(8, 4)).with_tol(1e-12);
    assert!(matches!(energy_chart(&p0, &p1, &spec), Err(chebpot::Error::Accuracy(_))));
}
