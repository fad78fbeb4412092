//! Operator properties on seeded random meshes and fields.

mod common;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn config() -> Config {
    Config { cases: 200, rng_seed: RngSeed::Fixed(42), failure_persistence: None, ..Config::default() }
}

fn assert_ok(name: &str, r: common::Check) -> Result<(), TestCaseError> {
    r.map_err(|e| TestCaseError::fail(format!("{name}: {e}")))
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn norm_equivalence(seed in any::<u64>()) {
        let (mesh, mut rng) = common::instance(seed);
        let u = tpfa::space::DiscreteField::random(&mesh, &mut rng);
        assert_ok("norm equivalence", common::norm_equivalence(&mesh, &u))?;
        assert_ok("Poincaré", common::poincare(&mesh, &u))?;
    }

    #[test]
    fn geometry_and_affine_exactness(seed in any::<u64>(), ax in -3.0f64..3.0, ay in -3.0f64..3.0, b in -1.0f64..1.0) {
        let (mesh, _) = common::instance(seed);
        assert_ok("geometric identity", common::geometric_identity(&mesh))?;
        assert_ok("affine exactness", common::affine_exactness(&mesh, tpfa::Point::new(ax, ay, 0.0), b))?;
    }

    #[test]
    fn monotonicity(seed in any::<u64>(), scale in 0.0f64..10.0) {
        use rand::Rng;
        let (mesh, mut rng) = common::instance(seed);
        let f = (0..mesh.n_cells()).map(|_| scale * rng.gen::<f64>()).collect();
        assert_ok("M-matrix", common::m_matrix_and_maximum_principle(&mesh, f))?;
    }

    #[test]
    fn dual_norm_identity(seed in any::<u64>()) {
        use rand::Rng;
        let (mesh, mut rng) = common::instance(seed);
        let z: Vec<f64> = (0..mesh.n_cells()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        assert_ok("dual norm", common::dual_norm_identity(&mesh, &z))?;
    }

    #[test]
    fn harmonic_face_value_minimizes_the_two_sided_energy(uk in -5.0f64..5.0, ul in -5.0f64..5.0, dk in 0.01f64..2.0, dl in 0.01f64..2.0) {
        let s = tpfa::space::harmonic_face_value(uk, dk, ul, dl);
        let energy = |s: f64| (s - uk).powi(2) / dk + (s - ul).powi(2) / dl;
        let (lo, hi) = (uk.min(ul), uk.max(ul));
        let best = (0..=1000).map(|i| lo + (hi - lo) * i as f64 / 1000.0).fold(f64::INFINITY, |m, t| m.min(energy(t)));
        prop_assert!(energy(s) <= best + 1e-12);
    }
}
