//! Independent XXZ chain: direct Hamiltonian and its own Bethe equations.
//!
//! H = −½ Σ_m [σˣσˣ + σʸσʸ + Δ₀ σᶻσᶻ] on N periodic sites. A sublattice
//! rotation (N even) maps it to 2 Σ [SˣSˣ + SʸSʸ + cosη SᶻSᶻ] with cosη = −Δ₀,
//! which is solved with magnon rapidities of the standard parametrisation.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::operator::{SectorOperator, C64};
use crate::tl_core::SpinBasis;

pub fn xxz_hamiltonian(n_sites: usize, delta0: f64, sz: i32) -> Result<SectorOperator> {
    let basis = Arc::new(SpinBasis::new(n_sites, sz)?);
    let b = basis.clone();
    Ok(basis.operator_from_fn(move |s| {
        let mut out = Vec::new();
        let mut diag = 0.0;
        for m in 1..=n_sites {
            let (za, zb) = (b.sigma_z(s, m), b.sigma_z(s, m + 1));
            diag += -0.5 * delta0 * za * zb;
            if za != zb {
                // σˣσˣ + σʸσʸ = 2(σ⁺σ⁻ + σ⁻σ⁺)
                out.push((s ^ b.mask(m) ^ b.mask(m + 1), C64::new(-1.0, 0.0)));
            }
        }
        out.push((s, C64::new(diag, 0.0)));
        out
    }))
}

/// Bethe roots and energy of an XXZ eigenstate.
#[derive(Debug, Clone, PartialEq)]
pub struct XxzSolution {
    pub lambdas: Vec<f64>,
    pub energy: f64,
    pub residual: f64,
}

/// Solves N θ₁(λ_j) = 2π I_j + Σ_l θ₂(λ_j − λ_l) by Newton iteration.
pub fn solve_xxz(n_sites: usize, delta0: f64, ints: &[f64], tol: f64) -> Result<XxzSolution> {
    if !(delta0 > -1.0 && delta0 < 1.0) {
        return Err(invalid("delta0", "critical regime |Δ₀| < 1 required"));
    }
    let eta = (-delta0).acos();
    let n = n_sites as f64;
    let c1 = 1.0 / (eta / 2.0).tan();
    let c2 = 1.0 / eta.tan();
    let th = |c: f64, x: f64| 2.0 * (c * x.tanh()).atan();
    let dth = |c: f64, x: f64| 2.0 * c / (x.cosh().powi(2) + c * c * x.sinh().powi(2));
    let r = ints.len();
    // Free-magnon guess: θ₁(λ) = 2πI/N.
    let mut lam: Vec<f64> = ints
        .iter()
        .map(|&i| {
            let x = (PI * i / n).clamp(-PI / 2.0 + 1e-3, PI / 2.0 - 1e-3);
            (x.tan() / c1).clamp(-0.999_999, 0.999_999).atanh()
        })
        .collect();
    let resid = |lam: &[f64]| -> Vec<f64> {
        (0..r)
            .map(|j| {
                n * th(c1, lam[j]) - 2.0 * PI * ints[j] - (0..r).map(|l| th(c2, lam[j] - lam[l])).sum::<f64>()
            })
            .collect()
    };
    let mut f = resid(&lam);
    let mut res = f.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    for _ in 0..200 {
        if res < tol {
            let e0 = -0.5 * delta0 * n;
            let sin2 = eta.sin().powi(2);
            let energy = e0 + lam.iter().map(|&l| -2.0 * sin2 / ((2.0 * l).cosh() - eta.cos())).sum::<f64>();
            return Ok(XxzSolution {
                lambdas: lam,
                energy,
                residual: res,
            });
        }
        let mut jac = DMatrix::<f64>::zeros(r, r);
        for j in 0..r {
            jac[(j, j)] = n * dth(c1, lam[j]);
            for l in 0..r {
                if l != j {
                    let d = dth(c2, lam[j] - lam[l]);
                    jac[(j, j)] -= d;
                    jac[(j, l)] += d;
                }
            }
        }
        let step = jac
            .lu()
            .solve(&DVector::from_iterator(r, f.iter().map(|x| -x)))
            .ok_or_else(|| Error::Singular("singular XXZ Jacobian".into()))?;
        let mut t = 1.0;
        loop {
            let trial: Vec<f64> = (0..r).map(|j| lam[j] + t * step[j]).collect();
            let nf = resid(&trial);
            let nr = nf.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            if nr < res || t < 1e-6 {
                lam = trial;
                f = nf;
                res = nr;
                break;
            }
            t *= 0.5;
        }
    }
    Err(Error::NoConvergence {
        what: "XXZ Newton iteration",
        iterations: 200,
        residual: res,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigenvalues;

    #[test]
    fn ground_state_matches_diagonalisation() {
        for (n, d0) in [(4usize, -0.3), (6, 0.2), (8, -0.6)] {
            let r = n / 2;
            let ints: Vec<f64> = (1..=r).map(|j| -(r as f64 + 1.0) / 2.0 + j as f64).collect();
            let sol = solve_xxz(n, d0, &ints, 1e-13).unwrap();
            let h = xxz_hamiltonian(n, d0, 0).unwrap();
            let e = eigenvalues(&h.to_dense()).unwrap();
            let emin = e.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
            assert!((sol.energy - emin).abs() < 1e-10, "N = {n}: {} vs {emin}", sol.energy);
        }
    }

    #[test]
    fn ferromagnetic_reference() {
        let sol = solve_xxz(6, 0.4, &[], 1e-12).unwrap();
        assert!((sol.energy + 0.5 * 0.4 * 6.0).abs() < 1e-15);
    }
}
