use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use stagger_core::bethe::xxz::solve_xxz;
use stagger_core::bethe::{eigenvalue_lambda, energy, solve_bae, two_site_translation_eigenvalue, BetheState};
use stagger_core::lattice_models::{build_hamiltonian, transfer_matrix, Couplings, Representation, TransferSpec};
use stagger_core::linalg::eigenvalues;
use stagger_core::tl_core::build_params;

fn spectrum(n: usize, gamma: f64, sz: i32, phi: f64) -> Vec<f64> {
    let p = build_params(gamma).unwrap();
    let h = build_hamiltonian(&Couplings::z2(&p), &p, n, &Representation::twisted(sz, phi)).unwrap();
    let mut e: Vec<f64> = eigenvalues(&h.to_dense()).unwrap().iter().map(|z| z.re).collect();
    e.sort_by(f64::total_cmp);
    e
}

#[test]
fn ground_state_energy_matches_diagonalisation() {
    for gamma in [PI / 4.0, 0.6, 1.1] {
        for n in [4usize, 6] {
            for phi in [0.0, 0.3] {
                let p = build_params(gamma).unwrap();
                let r = solve_bae(&BetheState::ground_state(n, phi).unwrap(), &p, 1e-13).unwrap();
                let e = energy(&r, &p);
                let ed = spectrum(n, gamma, 0, phi)[0];
                assert!((e - ed).abs() < 1e-8, "γ = {gamma}, N = {n}, φ = {phi}: {e} vs {ed}");
            }
        }
    }
}

#[test]
fn magnetic_states_are_in_the_spectrum() {
    let gamma = 0.7;
    let p = build_params(gamma).unwrap();
    for (n, r0, r1) in [(4usize, 1, 1), (4, 2, 1), (6, 2, 2), (6, 3, 2)] {
        let s = BetheState::filled(n, r0, r1, 0.0).unwrap();
        let r = solve_bae(&s, &p, 1e-13).unwrap();
        let e = energy(&r, &p);
        let spec = spectrum(n, gamma, s.sz(), 0.0);
        assert!((e - spec[0]).abs() < 1e-8, "N = {n}, r = ({r0}, {r1}): {e} vs {}", spec[0]);
    }
}

#[test]
fn transfer_eigenvalue_matches() {
    let p = build_params(0.65).unwrap();
    let n = 3;
    let phi = 0.2;
    let s = BetheState::filled(n, 1, 1, phi).unwrap();
    let r = solve_bae(&s, &p, 1e-13).unwrap();
    for u in [C64::new(0.3, 0.0), C64::new(0.1, 0.2)] {
        let lam = eigenvalue_lambda(u, &r.alphas(), n, phi, &p).unwrap();
        let t = transfer_matrix(&TransferSpec::new(n, u, phi, s.sz()), &p).unwrap();
        let ev = eigenvalues(&t.to_dense()).unwrap();
        let d = ev.iter().map(|z| (z - lam).norm()).fold(f64::INFINITY, f64::min);
        assert!(d < 1e-8, "u = {u}: distance {d}");
    }
}

#[test]
fn translation_phase_matches_transfer_product() {
    let p = build_params(0.55).unwrap();
    let n = 4;
    let s = BetheState::filled(n, 2, 1, 0.0).unwrap();
    let r = solve_bae(&s, &p, 1e-13).unwrap();
    let t0 = transfer_matrix(&TransferSpec::new(n, C64::new(0.0, 0.0), 0.0, s.sz()), &p).unwrap();
    let t1 = transfer_matrix(&TransferSpec::new(n, C64::new(PI / 2.0, 0.0), 0.0, s.sz()), &p).unwrap();
    let scale = (-(2.0 * p.gamma).sin().powi(2) / 4.0).powi(n as i32);
    let prod = (&t0 * &t1).scale(C64::new(1.0 / scale, 0.0));
    let ev = eigenvalues(&prod.to_dense()).unwrap();
    let t = two_site_translation_eigenvalue(&r, &p);
    let d = ev.iter().map(|z| (z - t).norm()).fold(f64::INFINITY, f64::min);
    assert!(d < 1e-8, "distance {d}");
}

#[test]
fn symmetric_states_follow_xxz() {
    let p = build_params(0.8).unwrap();
    for n in [4usize, 6] {
        for r in 1..=n / 2 {
            let s = BetheState::filled(n, r, r, 0.0).unwrap();
            let roots = solve_bae(&s, &p, 1e-13).unwrap();
            let e = energy(&roots, &p);
            let x = solve_xxz(n, -(2.0 * p.gamma).cos(), &s.i0, 1e-13).unwrap();
            let expect = 2.0 * x.energy + n as f64 * (2.0 * p.gamma).cos();
            assert!((e - expect).abs() < 1e-10, "N = {n}, r = {r}: {e} vs {expect}");
            for (a, b) in roots.lambda0.iter().zip(&roots.lambda1) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }
}
