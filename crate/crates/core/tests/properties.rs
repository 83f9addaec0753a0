use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use proptest::prelude::*;

use stagger_core::cft_partition::{z_twisted, z_untwisted, TorusPoint};
use stagger_core::lattice_models::check_ybe;
use stagger_core::special::rogers_dilog;
use stagger_core::tba_massive::{
    c_uv_formula, free_energy_identity, rsos_decomposition, sg_amplitude, smatrix_elements, uv_dilog_check, TbaSystem,
};
use stagger_core::tl_core::{check_tl_relations, spin_generators, SpinBasis};
use stagger_core::ModelParams;

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn tl_relations_for_any_gamma(gamma in 0.05f64..1.5, sz in -1i32..=1) {
        let p = ModelParams::new(gamma).unwrap();
        let b = Arc::new(SpinBasis::new(6, sz).unwrap());
        let r = check_tl_relations(&spin_generators(&b, &p).unwrap(), p.sqrt_q);
        prop_assert!(r.max() < 1e-12);
    }

    #[test]
    fn yang_baxter_for_complex_parameters(gamma in 0.1f64..1.4, a in -2.0f64..2.0, b in -1.0f64..1.0,
                                          x in -2.0f64..2.0, y in -1.0f64..1.0) {
        let p = ModelParams::new(gamma).unwrap();
        let r = check_ybe(C64::new(a, b), C64::new(x, y), &p).unwrap();
        prop_assert!(r < 1e-11, "residual {}", r);
    }

    #[test]
    fn modular_invariance_random_tau(re in -0.5f64..0.5, im in 0.7f64..2.5, g in 0.1f64..0.45, phi in 0.0f64..3.0) {
        let tp = TorusPoint::new(C64::new(re, im)).unwrap();
        let z = z_untwisted(g, &tp).unwrap();
        prop_assert!((z - z_untwisted(g, &tp.shift().unwrap()).unwrap()).abs() < 1e-8);
        prop_assert!((z - z_untwisted(g, &tp.invert().unwrap()).unwrap()).abs() < 1e-8);
        let zt = z_twisted(g, phi, &tp).unwrap();
        prop_assert!((zt - z_twisted(g, phi, &tp.invert().unwrap()).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn soliton_amplitude_is_unitary(t in 4.2f64..8.0, theta in -5.0f64..5.0) {
        let p = ModelParams::from_t(t).unwrap();
        let a = smatrix_elements(theta, &p).unwrap();
        let b = smatrix_elements(-theta, &p).unwrap();
        prop_assert!((a.s00 * b.s00 - 1.0).norm() < 1e-8);
        prop_assert!((a.s01.norm() - 1.0).abs() < 1e-12);
        let sg = sg_amplitude((t - 2.0) / (t - 1.0), theta).unwrap();
        prop_assert!((a.s00 - sg).norm() < 1e-9);
    }

    #[test]
    fn free_energy_identity_any_scale(x in 1e-2f64..30.0, mu in 0.2f64..3.0) {
        prop_assert!(free_energy_identity(mu, x / mu).unwrap() < 1e-10);
    }

    #[test]
    fn rogers_reflection(x in 0.0f64..1.0) {
        prop_assert!((rogers_dilog(x) + rogers_dilog(1.0 - x) - PI * PI / 6.0).abs() < 1e-13);
    }
}

#[test]
fn dilog_sum_rule_over_t() {
    for t in 4..=14 {
        let d = uv_dilog_check(&TbaSystem::rsos(t).unwrap()).unwrap();
        let (a, b) = rsos_decomposition(t as f64);
        assert!((d.c - c_uv_formula(t as f64)).abs() < 1e-11, "t = {t}");
        assert!((a + b - d.c).abs() < 1e-11);
        // massless plateau values are reflection symmetric
        let n = d.x.len();
        for i in 0..n {
            assert!((d.x[i] - d.x[n - 1 - i]).abs() < 1e-12);
        }
    }
}
