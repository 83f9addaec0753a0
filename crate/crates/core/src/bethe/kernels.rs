//! Bare and dressed single-root functions and their Fourier transforms.
//!
//! Fourier convention: f̂(ω) = ∫ dλ e^{iωλ} f(λ).

use std::f64::consts::PI;

use crate::quadrature::{cosh_ratio, sinh_ratio};
use crate::tl_core::ModelParams;

/// Closed-form kernels at fixed γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSet {
    pub params: ModelParams,
}

pub fn kernels(params: &ModelParams) -> KernelSet {
    KernelSet { params: *params }
}

impl KernelSet {
    fn gamma(&self) -> f64 {
        self.params.gamma
    }

    /// 2k(λ) = 2 atan(cotγ tanhλ), the continuous branch of −i log[sinh(iγ−λ)/sinh(iγ+λ)].
    pub fn two_k(&self, l: f64) -> f64 {
        2.0 * (l.tanh() / self.gamma().tan()).atan()
    }

    /// 2k′(λ) = 2 sin2γ / (cosh2λ − cos2γ).
    pub fn two_k_prime(&self, l: f64) -> f64 {
        let g2 = 2.0 * self.gamma();
        2.0 * g2.sin() / ((2.0 * l).cosh() - g2.cos())
    }

    /// ε(λ) = −sin2γ · 2k′(λ).
    pub fn epsilon(&self, l: f64) -> f64 {
        -(2.0 * self.gamma()).sin() * self.two_k_prime(l)
    }

    /// Θ^{(0)}(λ) = −2 atan(cotγ tanh(λ/2)).
    pub fn theta0(&self, l: f64) -> f64 {
        -2.0 * ((0.5 * l).tanh() / self.gamma().tan()).atan()
    }

    /// Θ^{(±1)}(λ) = 2 atan(tanγ tanh(λ/2)).
    pub fn theta1(&self, l: f64) -> f64 {
        2.0 * ((0.5 * l).tanh() * self.gamma().tan()).atan()
    }

    /// Θ^{(a−b)} for lines a, b ∈ {0, 1}.
    pub fn theta(&self, a: usize, b: usize, l: f64) -> f64 {
        if a == b {
            self.theta0(l)
        } else {
            self.theta1(l)
        }
    }

    /// K^{(0)} = Θ^{(0)}′ = −sin2γ / (coshλ − cos2γ).
    pub fn k0(&self, l: f64) -> f64 {
        let g2 = 2.0 * self.gamma();
        -g2.sin() / (l.cosh() - g2.cos())
    }

    /// K^{(±1)} = sin2γ / (coshλ + cos2γ).
    pub fn k1(&self, l: f64) -> f64 {
        let g2 = 2.0 * self.gamma();
        g2.sin() / (l.cosh() + g2.cos())
    }

    pub fn kernel(&self, a: usize, b: usize, l: f64) -> f64 {
        if a == b {
            self.k0(l)
        } else {
            self.k1(l)
        }
    }

    /// Ground-state root density 1/(4γ cosh(πλ/2γ)).
    pub fn rho_inf(&self, l: f64) -> f64 {
        1.0 / (4.0 * self.gamma() * (PI * l / (2.0 * self.gamma())).cosh())
    }

    /// Hole energy π sin2γ / (2γ cosh(πλ/2γ)).
    pub fn epsilon_d(&self, l: f64) -> f64 {
        self.params.v / (PI * l / (2.0 * self.gamma())).cosh()
    }

    /// Hole momentum 2k_d(λ) = −2 atan(tanh(πλ/4γ)).
    pub fn two_k_d(&self, l: f64) -> f64 {
        -2.0 * (PI * l / (4.0 * self.gamma())).tanh().atan()
    }

    /// d(2k_d)/dλ = −(π/2γ) / cosh(πλ/2γ).
    pub fn two_k_d_prime(&self, l: f64) -> f64 {
        -(PI / (2.0 * self.gamma())) / (PI * l / (2.0 * self.gamma())).cosh()
    }

    /// 2k̂′(ω) = 2π sinh((π/2−γ)ω) / sinh(πω/2).
    pub fn two_k_prime_hat(&self, w: f64) -> f64 {
        2.0 * PI * sinh_ratio(PI / 2.0 - self.gamma(), PI / 2.0, w)
    }

    /// K̂^{(0)}(ω) = −2π sinh((π−2γ)ω) / sinh(πω).
    pub fn k0_hat(&self, w: f64) -> f64 {
        -2.0 * PI * sinh_ratio(PI - 2.0 * self.gamma(), PI, w)
    }

    /// K̂^{(±1)}(ω) = 2π sinh(2γω) / sinh(πω).
    pub fn k1_hat(&self, w: f64) -> f64 {
        2.0 * PI * sinh_ratio(2.0 * self.gamma(), PI, w)
    }

    /// 1 + Ĵ^{(+)} = sinh(πω/2) / (2 sinh((π/2−γ)ω) coshγω).
    pub fn one_plus_j_plus(&self, w: f64) -> f64 {
        let g = self.gamma();
        0.5 * sinh_ratio(PI / 2.0, PI / 2.0 - g, w) / (g * w).cosh()
    }

    /// 1 + Ĵ^{(−)} = cosh(πω/2) / (2 cosh((π/2−γ)ω) coshγω).
    pub fn one_plus_j_minus(&self, w: f64) -> f64 {
        let g = self.gamma();
        0.5 * cosh_ratio(PI / 2.0, PI / 2.0 - g, w) / (g * w).cosh()
    }

    pub fn j_plus_hat(&self, w: f64) -> f64 {
        self.one_plus_j_plus(w) - 1.0
    }

    pub fn j_minus_hat(&self, w: f64) -> f64 {
        self.one_plus_j_minus(w) - 1.0
    }

    /// Ĵ^{(0)} = (Ĵ^{(+)} + Ĵ^{(−)})/2.
    pub fn j0_hat(&self, w: f64) -> f64 {
        0.5 * (self.j_plus_hat(w) + self.j_minus_hat(w))
    }

    /// Ĵ^{(±1)} = (Ĵ^{(+)} − Ĵ^{(−)})/2.
    pub fn j1_hat(&self, w: f64) -> f64 {
        0.5 * (self.j_plus_hat(w) - self.j_minus_hat(w))
    }

    /// Ĵ^{(0)} in closed form: −sinh((π−3γ)ω) / (2 coshγω sinh((π−2γ)ω)).
    pub fn j0_hat_closed(&self, w: f64) -> f64 {
        let g = self.gamma();
        -0.5 * sinh_ratio(PI - 3.0 * g, PI - 2.0 * g, w) / (g * w).cosh()
    }

    /// Ĵ^{(±1)} in closed form: sinhγω / (2 coshγω sinh((π−2γ)ω)).
    pub fn j1_hat_closed(&self, w: f64) -> f64 {
        let g = self.gamma();
        0.5 * sinh_ratio(g, PI - 2.0 * g, w) / (g * w).cosh()
    }

    /// Φ̂^{(a,b)} = −2π Ĵ^{(a−b)}.
    pub fn phi_hat(&self, a: usize, b: usize, w: f64) -> f64 {
        if a == b {
            -2.0 * PI * self.j0_hat(w)
        } else {
            -2.0 * PI * self.j1_hat(w)
        }
    }
}
