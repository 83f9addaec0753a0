//! Two-line Bethe Ansatz for the staggered model and its continuum limit.
//!
//! Roots on line 0 are α = λ, roots on line 1 are α = λ + iπ, with λ real.

pub mod kernels;
pub mod wiener_hopf;
pub mod xxz;

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::operator::C64;
use crate::quadrature::{fourier_even, trapezoid_line};
use crate::tl_core::ModelParams;

pub use kernels::{kernels, KernelSet};
pub use wiener_hopf::{wiener_hopf_factors, WienerHopf};

/// Bethe integers on the two lines and the twist.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetheState {
    pub n_blocks: usize,
    pub i0: Vec<f64>,
    pub i1: Vec<f64>,
    pub phi: f64,
}

impl BetheState {
    pub fn new(n_blocks: usize, i0: Vec<f64>, i1: Vec<f64>, phi: f64) -> Result<Self> {
        let s = Self {
            n_blocks,
            i0,
            i1,
            phi,
        };
        s.validate()?;
        Ok(s)
    }

    /// Ground-state filling I_j = −(r+1)/2 + j on both lines, r = N/2 (N even).
    pub fn ground_state(n_blocks: usize, phi: f64) -> Result<Self> {
        if !n_blocks.is_multiple_of(2) {
            return Err(invalid("N", "the ground-state filling needs an even block count"));
        }
        let r = n_blocks / 2;
        Self::new(n_blocks, centred(r), centred(r), phi)
    }

    /// Compact filling of r0 and r1 roots (magnetic excitation when below N/2).
    /// For odd N the integers are shifted by −1/2 to satisfy the parity rule.
    pub fn filled(n_blocks: usize, r0: usize, r1: usize, phi: f64) -> Result<Self> {
        let shift = if n_blocks % 2 == 1 { -0.5 } else { 0.0 };
        let fill = |r| centred(r).into_iter().map(|i| i + shift).collect();
        Self::new(n_blocks, fill(r0), fill(r1), phi)
    }

    pub fn r0(&self) -> usize {
        self.i0.len()
    }

    pub fn r1(&self) -> usize {
        self.i1.len()
    }

    /// Sz = N − r0 − r1 of the corresponding spin-chain state.
    pub fn sz(&self) -> i32 {
        self.n_blocks as i32 - (self.r0() + self.r1()) as i32
    }

    fn validate(&self) -> Result<()> {
        let n = self.n_blocks;
        if n == 0 {
            return Err(invalid("N", "need at least one block"));
        }
        for (line, ints) in [(0, &self.i0), (1, &self.i1)] {
            let r = ints.len();
            if r > n {
                return Err(invalid("r", format!("line {line}: {r} roots exceed N = {n}")));
            }
            let shift = 0.5 * (n + r) as f64 - 0.5;
            for &i in ints.iter() {
                let d = i - shift;
                if (d - d.round()).abs() > 1e-12 {
                    return Err(invalid(
                        "I",
                        format!("line {line}: integer {i} not in (N + r − 1)/2 + Z"),
                    ));
                }
            }
            if ints.windows(2).any(|w| w[1] <= w[0]) {
                return Err(invalid("I", format!("line {line}: integers must increase strictly")));
            }
        }
        Ok(())
    }
}

fn centred(r: usize) -> Vec<f64> {
    (1..=r).map(|j| -(r as f64 + 1.0) / 2.0 + j as f64).collect()
}

/// Real root sets on the two lines.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootConfig {
    pub state: BetheState,
    pub lambda0: Vec<f64>,
    pub lambda1: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

impl RootConfig {
    /// All roots α on the strip, line 1 carrying +iπ.
    pub fn alphas(&self) -> Vec<C64> {
        self.lambda0
            .iter()
            .map(|&l| C64::new(l, 0.0))
            .chain(self.lambda1.iter().map(|&l| C64::new(l, PI)))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("root configuration is serialisable")
    }
}

/// Residuals F of the logarithmic equations; one per root, line 0 first.
pub fn bae_residuals(k: &KernelSet, state: &BetheState, l0: &[f64], l1: &[f64]) -> Vec<f64> {
    let n = state.n_blocks as f64;
    let lines = [l0, l1];
    let ints = [&state.i0, &state.i1];
    let mut out = Vec::with_capacity(l0.len() + l1.len());
    for a in 0..2 {
        for (j, &lj) in lines[a].iter().enumerate() {
            let mut f = n * k.two_k(lj) - 2.0 * PI * ints[a][j] - 2.0 * state.phi;
            for b in 0..2 {
                for &ll in lines[b].iter() {
                    f += k.theta(a, b, lj - ll);
                }
            }
            out.push(f);
        }
    }
    out
}

fn jacobian(k: &KernelSet, state: &BetheState, l0: &[f64], l1: &[f64]) -> DMatrix<f64> {
    let n = state.n_blocks as f64;
    let lines = [l0, l1];
    let m = l0.len() + l1.len();
    let offset = [0, l0.len()];
    let mut jac = DMatrix::zeros(m, m);
    for a in 0..2 {
        for (j, &lj) in lines[a].iter().enumerate() {
            let row = offset[a] + j;
            jac[(row, row)] += n * k.two_k_prime(lj);
            for b in 0..2 {
                for (l, &ll) in lines[b].iter().enumerate() {
                    let col = offset[b] + l;
                    if col == row {
                        continue;
                    }
                    let kk = k.kernel(a, b, lj - ll);
                    jac[(row, row)] += kk;
                    jac[(row, col)] -= kk;
                }
            }
        }
    }
    jac
}

/// Guess from inverting the ground-state counting function I/N = atan(tanh(πλ/4γ))/π.
fn initial_guess(params: &ModelParams, state: &BetheState, ints: &[f64]) -> Vec<f64> {
    let n = state.n_blocks as f64;
    let lim = PI / 4.0 - 1e-3;
    ints.iter()
        .map(|&i| {
            let x = (PI * (i + state.phi / PI) / n).clamp(-lim, lim);
            4.0 * params.gamma / PI * x.tan().atanh()
        })
        .collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Solves the logarithmic BAE by damped Newton iteration.
pub fn solve_bae(state: &BetheState, params: &ModelParams, tol: f64) -> Result<RootConfig> {
    state.validate()?;
    let k = kernels(params);
    let mut l0 = initial_guess(params, state, &state.i0);
    let mut l1 = initial_guess(params, state, &state.i1);
    let r0 = l0.len();
    let m = r0 + l1.len();
    if m == 0 {
        return Ok(RootConfig {
            state: state.clone(),
            lambda0: l0,
            lambda1: l1,
            residual: 0.0,
            iterations: 0,
        });
    }
    let mut f = bae_residuals(&k, state, &l0, &l1);
    let mut res = max_abs(&f);
    let max_iter = 200;
    for it in 0..max_iter {
        if res < tol {
            return Ok(RootConfig {
                state: state.clone(),
                lambda0: l0,
                lambda1: l1,
                residual: res,
                iterations: it,
            });
        }
        let jac = jacobian(&k, state, &l0, &l1);
        let rhs = DVector::from_iterator(m, f.iter().map(|x| -x));
        let step = jac
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Singular("singular BAE Jacobian".into()))?;
        // Backtrack until the residual decreases.
        let mut t = 1.0;
        loop {
            let n0: Vec<f64> = (0..r0).map(|i| l0[i] + t * step[i]).collect();
            let n1: Vec<f64> = (r0..m).map(|i| l1[i - r0] + t * step[i]).collect();
            let nf = bae_residuals(&k, state, &n0, &n1);
            let nr = max_abs(&nf);
            if nr < res || t < 1e-6 {
                l0 = n0;
                l1 = n1;
                f = nf;
                res = nr;
                break;
            }
            t *= 0.5;
        }
    }
    Err(Error::NoConvergence {
        what: "Bethe Ansatz Newton iteration",
        iterations: max_iter,
        residual: res,
    })
}

/// E = 2N cos2γ + Σ ε(λ).
pub fn energy(roots: &RootConfig, params: &ModelParams) -> f64 {
    let k = kernels(params);
    2.0 * roots.state.n_blocks as f64 * (2.0 * params.gamma).cos()
        + roots
            .lambda0
            .iter()
            .chain(roots.lambda1.iter())
            .map(|&l| k.epsilon(l))
            .sum::<f64>()
}

/// Transfer-matrix eigenvalue Λ(u) of a Bethe state.
pub fn eigenvalue_lambda(u: C64, alphas: &[C64], n_blocks: usize, phi: f64, params: &ModelParams) -> Result<C64> {
    let i = C64::new(0.0, 1.0);
    let ig = i * params.gamma;
    let n = n_blocks as i32;
    let mut p1 = C64::new(1.0, 0.0);
    let mut p2 = C64::new(1.0, 0.0);
    for &a in alphas {
        let x = a + 2.0 * i * u;
        let d1 = (0.5 * (ig - x)).sinh();
        let y = x - 2.0 * ig;
        let d2 = (0.5 * (ig + y)).sinh();
        if d1.norm() < 1e-300 || d2.norm() < 1e-300 {
            return Err(Error::Singular(format!("Λ(u) at a pole, u = {u}")));
        }
        p1 *= (0.5 * (ig + x)).sinh() / d1;
        p2 *= (0.5 * (ig - y)).sinh() / d2;
    }
    let g = C64::new(params.gamma, 0.0);
    let t1 = C64::from_polar(1.0, phi) * (2.0 * (g - u)).sin().powi(n) * p1;
    let t2 = C64::from_polar(1.0, -phi) * (-(2.0 * u).sin()).powi(n) * p2;
    Ok((t1 + t2) / 2f64.powi(n))
}

/// Closed form of Λ(0)Λ(π/2): e^{2iφ} (−sin²2γ/4)^N Π sinh(α+iγ)/sinh(α−iγ).
pub fn lambda_product_at_zero(alphas: &[C64], n_blocks: usize, phi: f64, params: &ModelParams) -> C64 {
    let ig = C64::new(0.0, params.gamma);
    let s = (2.0 * params.gamma).sin();
    let mut p = C64::from_polar(1.0, 2.0 * phi) * (-s * s / 4.0).powi(n_blocks as i32);
    for &a in alphas {
        p *= (a + ig).sinh() / (a - ig).sinh();
    }
    p
}

/// Eigenvalue of t(0)t(π/2)/(−sin²2γ/4)^N, the two-site translation when φ = 0:
/// (−1)^r exp(i(2φ − Σ 2k_j)).
pub fn two_site_translation_eigenvalue(roots: &RootConfig, params: &ModelParams) -> C64 {
    let k = kernels(params);
    let total: f64 = roots.lambda0.iter().chain(&roots.lambda1).map(|&l| k.two_k(l)).sum();
    let r = roots.lambda0.len() + roots.lambda1.len();
    C64::from_polar(1.0, 2.0 * roots.state.phi - total + PI * r as f64)
}

/// 2Q = (2π/N) Σ (I + φ/π) + π(r0 + r1), reduced to (−π, π].
pub fn total_momentum_2q(state: &BetheState) -> f64 {
    let n = state.n_blocks as f64;
    let s: f64 = state.i0.iter().chain(&state.i1).map(|&i| i + state.phi / PI).sum();
    let q2 = 2.0 * PI / n * s + PI * (state.r0() + state.r1()) as f64;
    wrap(q2)
}

pub(crate) fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Quadrature controls for dressed quantities.
#[derive(Debug, Clone, Copy)]
pub struct DressingGrid {
    /// Truncation of the λ integral.
    pub lambda_max: f64,
    pub lambda_step: f64,
    /// Truncation of the ω integral.
    pub omega_max: f64,
    pub omega_step: f64,
}

impl DressingGrid {
    pub fn for_params(params: &ModelParams) -> Self {
        // 1 + Ĵ^{(+)} grows like e^{γ|ω|}/… so the transform of α must decay faster.
        Self {
            lambda_max: 40.0,
            lambda_step: 0.01,
            omega_max: 60.0 / (PI / 2.0 - params.gamma).max(0.2),
            omega_step: 0.02,
        }
    }
}

/// α_d = −(δ + J^{(+)}) ⋆ α for an even function α, by Fourier quadrature.
pub fn dressed_quantity<F>(alpha: F, params: &ModelParams, grid: &DressingGrid) -> Result<impl Fn(f64) -> f64>
where
    F: Fn(f64) -> f64,
{
    let scale = (0..200)
        .map(|i| alpha(i as f64 * 0.05).abs())
        .fold(0.0f64, f64::max);
    let tail = alpha(grid.lambda_max).abs().max(alpha(-grid.lambda_max).abs());
    if scale > 0.0 && tail > 1e-13 * scale {
        return Err(invalid(
            "alpha",
            format!("decays too slowly: |α(±{})| = {tail:e}", grid.lambda_max),
        ));
    }
    let k = kernels(params);
    let n = (grid.omega_max / grid.omega_step).ceil() as usize;
    let h = grid.omega_max / n as f64;
    let weights: Vec<(f64, f64)> = (0..=n)
        .map(|i| {
            let w = i as f64 * h;
            let ah = fourier_even(&alpha, w, grid.lambda_step, grid.lambda_max);
            let wt = if i == 0 || i == n { 0.5 } else { 1.0 };
            (w, -wt * h * k.one_plus_j_plus(w) * ah / PI)
        })
        .collect();
    Ok(move |l: f64| weights.iter().map(|&(w, c)| c * (w * l).cos()).sum())
}

/// 2k_d(λ) as the running integral of the dressed 2k′, from its Fourier form.
pub fn two_k_d_quadrature(l: f64, params: &ModelParams) -> f64 {
    let k = kernels(params);
    // ∫_0^λ of the inverse transform of F = −(1 + Ĵ⁺) 2k̂′ is ∫ dω/(2π) F(ω) sin(ωλ)/ω.
    let f = |w: f64| {
        let sinc = if w == 0.0 { l } else { (w * l).sin() / w };
        -k.one_plus_j_plus(w) * k.two_k_prime_hat(w) * sinc / (2.0 * PI)
    };
    let h = (0.05f64).min(0.2 / l.abs().max(1.0));
    trapezoid_line(f, h, 50.0 / params.gamma)
}

/// Conformal weights (Δ, Δ̄) of the two-component Coulomb gas; the twist shifts e by 2φ/π.
pub fn conformal_dimension(e: i32, m: i32, et: i32, mt: i32, phi: f64, params: &ModelParams) -> Result<(f64, f64)> {
    if (e + et) % 2 != 0 || (m + mt) % 2 != 0 {
        return Err(invalid(
            "charges",
            format!("parity rule violated for (e, m, ẽ, m̃) = ({e}, {m}, {et}, {mt})"),
        ));
    }
    Ok(conformal_dimension_unchecked(e as f64 + 2.0 * phi / PI, m as f64, et as f64, mt as f64, params))
}

pub(crate) fn conformal_dimension_unchecked(e: f64, m: f64, et: f64, mt: f64, params: &ModelParams) -> (f64, f64) {
    let s = (2.0 * params.g).sqrt();
    let d = (e / s + m * s).powi(2) / 8.0 + (et + mt).powi(2) / 8.0;
    let db = (e / s - m * s).powi(2) / 8.0 + (et - mt).powi(2) / 8.0;
    (d, db)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tl_core::build_params;

    #[test]
    fn integer_rules() {
        assert!(BetheState::new(4, vec![-0.5, 0.5], vec![-0.5, 0.5], 0.0).is_ok());
        assert!(BetheState::new(4, vec![-1.0, 0.0], vec![], 0.0).is_err());
        assert!(BetheState::new(4, vec![0.5, -0.5], vec![], 0.0).is_err());
        assert!(BetheState::new(4, vec![0.0], vec![], 0.0).is_ok());
        let g = BetheState::ground_state(6, 0.0).unwrap();
        assert_eq!(g.i0, vec![-1.0, 0.0, 1.0]);
        assert_eq!(g.sz(), 0);
        assert!(BetheState::ground_state(3, 0.0).is_err());
    }

    #[test]
    fn empty_state_energy() {
        let p = build_params(0.7).unwrap();
        let s = BetheState::new(5, vec![], vec![], 0.2).unwrap();
        let r = solve_bae(&s, &p, 1e-12).unwrap();
        assert_eq!(energy(&r, &p), 10.0 * (1.4f64).cos());
    }

    #[test]
    fn ground_state_converges_with_symmetric_lines() {
        let p = build_params(PI / 4.0).unwrap();
        for n in [2, 4, 8, 16] {
            let r = solve_bae(&BetheState::ground_state(n, 0.0).unwrap(), &p, 1e-12).unwrap();
            assert!(r.residual < 1e-12);
            for (a, b) in r.lambda0.iter().zip(&r.lambda1) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn empty_eigenvalue() {
        let p = build_params(0.5).unwrap();
        let u = C64::new(0.2, 0.1);
        let phi = 0.3;
        let lam = eigenvalue_lambda(u, &[], 3, phi, &p).unwrap();
        let g = C64::new(0.5, 0.0);
        let expect = (C64::from_polar(1.0, phi) * (2.0 * (g - u)).sin().powi(3)
            + C64::from_polar(1.0, -phi) * (-(2.0 * u).sin()).powi(3))
            / 8.0;
        assert!((lam - expect).norm() < 1e-15);
    }

    #[test]
    fn lambda_product_matches_closed_form() {
        let p = build_params(0.6).unwrap();
        let s = BetheState::filled(4, 2, 1, 0.25).unwrap();
        let r = solve_bae(&s, &p, 1e-12).unwrap();
        let a = r.alphas();
        let l0 = eigenvalue_lambda(C64::new(0.0, 0.0), &a, 4, 0.25, &p).unwrap();
        let l1 = eigenvalue_lambda(C64::new(PI / 2.0, 0.0), &a, 4, 0.25, &p).unwrap();
        let c = lambda_product_at_zero(&a, 4, 0.25, &p);
        assert!((l0 * l1 - c).norm() < 1e-12 * c.norm());
        // and its phase is the two-site translation eigenvalue
        let t = two_site_translation_eigenvalue(&r, &p);
        let scale = (-(2.0 * p.gamma).sin().powi(2) / 4.0).powi(4);
        assert!((c / scale - t).norm() < 1e-10, "{} vs {t}", c / scale);
    }

    #[test]
    fn dressed_energy_and_momentum() {
        let p = build_params(PI / 5.0).unwrap();
        let k = kernels(&p);
        let grid = DressingGrid::for_params(&p);
        let ed = dressed_quantity(|l| k.epsilon(l), &p, &grid).unwrap();
        let kd = dressed_quantity(|l| k.two_k_prime(l), &p, &grid).unwrap();
        for l in [0.0, 0.3, 1.1, 2.0] {
            assert!((ed(l) - k.epsilon_d(l)).abs() < 1e-10, "ε_d({l})");
            assert!((kd(l) - k.two_k_d_prime(l)).abs() < 1e-10, "2k_d′({l})");
        }
        let z = dressed_quantity(|_| 0.0, &p, &grid).unwrap();
        assert_eq!(z(0.4), 0.0);
        assert!(dressed_quantity(|l| 1.0 / (1.0 + l * l), &p, &grid).is_err());
    }

    #[test]
    fn dressed_momentum_limit() {
        let p = build_params(0.9).unwrap();
        let k = kernels(&p);
        for l in [0.5, 2.0] {
            assert!((two_k_d_quadrature(l, &p) - k.two_k_d(l)).abs() < 1e-10);
        }
        assert!((two_k_d_quadrature(30.0, &p) + PI / 2.0).abs() < 1e-8);
    }

    #[test]
    fn conformal_dimension_examples() {
        let p = build_params(PI / 4.0).unwrap();
        assert_eq!(conformal_dimension(0, 0, 0, 0, 0.0, &p).unwrap(), (0.0, 0.0));
        let (d, db) = conformal_dimension(0, 0, 0, 0, PI * p.e0, &p).unwrap();
        let x = p.e0 * p.e0 / (4.0 * p.g);
        assert!((d - x).abs() < 1e-15 && (db - x).abs() < 1e-15);
        let (d, db) = conformal_dimension(0, 1, 0, 1, 0.0, &p).unwrap();
        assert!((d - (p.g / 4.0 + 0.125)).abs() < 1e-15);
        assert!((db - (p.g / 4.0 + 0.125)).abs() < 1e-15);
        // h_2 = (Δ + Δ̄)/2 − e0²/(4g) = 1/8 at g = 1/4.
        assert!(((d + db) / 2.0 - x - 0.125).abs() < 1e-15);
        assert!(conformal_dimension(1, 0, 0, 0, 0.0, &p).is_err());
    }

    #[test]
    fn json_roundtrip_has_roots() {
        let p = build_params(0.6).unwrap();
        let r = solve_bae(&BetheState::ground_state(4, 0.0).unwrap(), &p, 1e-12).unwrap();
        let v = r.to_json();
        assert_eq!(v["lambda0"].as_array().unwrap().len(), 2);
        assert!(v["residual"].as_f64().unwrap() < 1e-12);
    }
}
