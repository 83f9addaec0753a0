//! Massive deformation: dressed kernels, S-matrix amplitudes, TBA flows and
//! the free boson / fermion ground-state energy identity.

use std::f64::consts::PI;

use serde::Serialize;

use crate::bethe::kernels;
use crate::error::{invalid, Error, Result};
use crate::operator::C64;
use crate::quadrature::{sinh_ratio, trapezoid_half};
use crate::special::rogers_dilog;
use crate::tl_core::ModelParams;

/// Imaginary staggering Λ and the resulting mass scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MassiveParams {
    pub lambda: f64,
    pub mu: f64,
    /// Dimensionless scale r = μR.
    pub r: f64,
}

impl MassiveParams {
    pub fn new(lambda: f64, r: f64, params: &ModelParams) -> Result<Self> {
        if !(lambda >= 0.0) || !(r > 0.0) {
            return Err(invalid("Λ, r", "need Λ ≥ 0 and r > 0"));
        }
        Ok(Self {
            lambda,
            mu: mass(lambda, params),
            r,
        })
    }
}

/// μ = 4 exp(−πΛ/(2γ)).
pub fn mass(lambda: f64, params: &ModelParams) -> f64 {
    4.0 * (-PI * lambda / (2.0 * params.gamma)).exp()
}

/// Source and kernels of the physical equations for the holes.
#[derive(Debug, Clone, Copy)]
pub struct DressedBaeKernels {
    params: ModelParams,
    lambda: f64,
}

pub fn dressed_bae_kernels(params: &ModelParams, lambda: f64) -> DressedBaeKernels {
    DressedBaeKernels {
        params: *params,
        lambda,
    }
}

impl DressedBaeKernels {
    /// Φ̂^{(a,b)}(ω) = −2π Ĵ^{(a−b)}(ω).
    pub fn phi_hat(&self, a: usize, b: usize, w: f64) -> f64 {
        kernels(&self.params).phi_hat(a, b, w)
    }

    /// s(λ) = π/(2γ) [sech(π(λ−Λ)/2γ) + sech(π(λ+Λ)/2γ)].
    pub fn source(&self, l: f64) -> f64 {
        let c = PI / (2.0 * self.params.gamma);
        c * (1.0 / (c * (l - self.lambda)).cosh() + 1.0 / (c * (l + self.lambda)).cosh())
    }

    /// s(λ) ≈ (2π/γ) e^{−πΛ/(2γ)} cosh(πλ/(2γ)) for |λ| ≪ Λ.
    pub fn source_asymptotic(&self, l: f64) -> f64 {
        let c = PI / (2.0 * self.params.gamma);
        2.0 * PI / self.params.gamma * (-c * self.lambda).exp() * (c * l).cosh()
    }

    /// ε_d = sin2γ · s.
    pub fn dressed_energy(&self, l: f64) -> f64 {
        (2.0 * self.params.gamma).sin() * self.source(l)
    }

    /// 4v e^{−πΛ/(2γ)} cosh(πλ/(2γ)) = v μ cosh θ.
    pub fn relativistic_energy(&self, l: f64) -> f64 {
        let c = PI / (2.0 * self.params.gamma);
        self.params.v * mass(self.lambda, &self.params) * (c * l).cosh()
    }
}

/// ξ of the sine-Gordon amplitude from b = β²/(8π): ξ = πb/(1−b).
pub fn sg_xi(b: f64) -> Result<f64> {
    if !(b > 0.0 && b < 1.0) {
        return Err(invalid("β²/8π", format!("must lie in (0, 1), got {b}")));
    }
    Ok(PI * b / (1.0 - b))
}

/// F(k) = sinh((π−ξ)k/2) / (sinh(ξk/2) cosh(πk/2)).
fn sg_profile(xi: f64, k: f64) -> f64 {
    sinh_ratio((PI - xi) / 2.0, xi / 2.0, k) / (PI * k / 2.0).cosh()
}

/// Fourier transform of −i d/dθ log 𝒮_{−−}(β; θ), i.e. −π F(k).
pub fn sg_kernel_hat(b: f64, k: f64) -> Result<f64> {
    Ok(-PI * sg_profile(sg_xi(b)?, k))
}

/// Integration settings for the oscillatory k-integrals.
const K_STEP: f64 = 0.004;

/// ∫_0^∞ dk/k sin(kθ) f(k) for an even f decaying like e^{−rate·k}.
fn sine_integral(theta: f64, rate: f64, f: impl Fn(f64) -> f64) -> f64 {
    let w = 40.0 / rate;
    trapezoid_half(
        |k| {
            let s = if k == 0.0 { theta } else { (k * theta).sin() / k };
            s * f(k)
        },
        K_STEP,
        w,
    )
}

/// Sine-Gordon kink-kink amplitude −exp[−i∫_0^∞ dk/k sin kθ F(k)].
pub fn sg_amplitude(b: f64, theta: f64) -> Result<C64> {
    let xi = sg_xi(b)?;
    let rate = PI.min(xi);
    let x = sine_integral(theta, rate, |k| sg_profile(xi, k));
    Ok(-C64::from_polar(1.0, -x))
}

/// Amplitudes of the hole scattering theory at real rapidity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SMatrixElements {
    /// S^{(0,0)}_{−−}, normalised as the sine-Gordon kink amplitude.
    pub s00: C64,
    /// S^{(0,1)}_{−−} = i exp[−(i/2)∫ ...], up to its constant phase.
    pub s01: C64,
    pub z: C64,
    pub z_tilde: C64,
}

fn s00_exponent(t: f64, theta: f64) -> f64 {
    // (1/2)∫_{−∞}^{∞} = ∫_0^∞ for the even integrand
    sine_integral(theta, PI, |k| {
        sinh_ratio(PI * (t - 3.0) / 2.0, PI * (t - 2.0) / 2.0, k) / (PI * k / 2.0).cosh()
    })
}

fn s01_exponent(t: f64, theta: f64) -> f64 {
    sine_integral(theta, PI * (t - 2.0) / 2.0, |k| {
        sinh_ratio(PI / 2.0, PI * (t - 2.0) / 2.0, k) / (PI * k / 2.0).cosh()
    })
}

pub fn smatrix_elements(theta: f64, params: &ModelParams) -> Result<SMatrixElements> {
    let t = params.t;
    if t < 2.2 {
        return Err(invalid("t", format!("k-integrals converge too slowly near t = 2 (t = {t})")));
    }
    let e00 = s00_exponent(t, theta);
    let e01 = s01_exponent(t, theta);
    let i = C64::i();
    let arg = (i * PI - theta) / (t - 2.0);
    Ok(SMatrixElements {
        s00: -C64::from_polar(1.0, e00),
        s01: i * C64::from_polar(1.0, -e01),
        z: C64::from_polar(1.0, e00) / arg.sinh(),
        z_tilde: C64::from_polar(1.0, -e01) / arg.cosh(),
    })
}

/// Recovers β²/(8π) by matching the S^{(0,0)} kernel to the sine-Gordon kernel.
pub fn matched_sg_coupling(params: &ModelParams) -> Result<f64> {
    let t = params.t;
    let k = 1.0;
    let target = sinh_ratio(PI * (t - 3.0) / 2.0, PI * (t - 2.0) / 2.0, k);
    // −sinh((π−ξ)k/2)/sinh(ξk/2) is increasing in ξ.
    let f = |xi: f64| -sinh_ratio((PI - xi) / 2.0, xi / 2.0, k) - target;
    let (mut lo, mut hi) = (1e-6, 200.0);
    if f(lo) * f(hi) > 0.0 {
        return Err(Error::NoConvergence {
            what: "coupling match bracket",
            iterations: 0,
            residual: f(hi),
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(lo) * f(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let xi = 0.5 * (lo + hi);
    Ok(xi / (PI + xi))
}

/// How a node's L-function is built from its pseudo-energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NodeKind {
    /// L = log(1 + e^{−ε}).
    Plain,
    /// Two nodes with fugacities ±i sharing ε: log(1+ie^{−ε}) + log(1−ie^{−ε}) = log(1 + e^{−2ε}).
    ImaginaryPair,
}

/// A TBA diagram with per-node masses (in units of μ).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TbaSystem {
    pub adjacency: Vec<Vec<u8>>,
    pub masses: Vec<f64>,
    pub kinds: Vec<NodeKind>,
}

impl TbaSystem {
    pub fn new(adjacency: Vec<Vec<u8>>, masses: Vec<f64>, kinds: Vec<NodeKind>) -> Result<Self> {
        let n = masses.len();
        if n == 0 || adjacency.len() != n || kinds.len() != n || adjacency.iter().any(|r| r.len() != n) {
            return Err(invalid("diagram", "adjacency, masses and kinds must have matching sizes"));
        }
        for a in 0..n {
            for b in 0..n {
                if adjacency[a][b] != adjacency[b][a] {
                    return Err(invalid("diagram", "adjacency must be symmetric"));
                }
            }
        }
        if masses.iter().any(|&m| !(m >= 0.0)) {
            return Err(invalid("masses", "must be non-negative"));
        }
        Ok(Self {
            adjacency,
            masses,
            kinds,
        })
    }

    /// A_{t−3} chain with both end nodes massive; t = 4 is one free massive node.
    pub fn rsos(t: usize) -> Result<Self> {
        if t < 4 {
            return Err(invalid("t", format!("the diagram needs t ≥ 4, got {t}")));
        }
        let n = t - 3;
        let mut adj = vec![vec![0u8; n]; n];
        for a in 0..n.saturating_sub(1) {
            adj[a][a + 1] = 1;
            adj[a + 1][a] = 1;
        }
        let mut masses = vec![0.0; n];
        masses[0] = 1.0;
        masses[n - 1] = 1.0;
        Self::new(adj, masses, vec![NodeKind::Plain; n])
    }

    /// Reduced fork for t − 3 = 2n + 1: chain 1..n (node 1 massive) with the
    /// pair of end nodes of fugacity ±i attached to node n.
    pub fn sg_fork(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "the fork needs n ≥ 1"));
        }
        let size = n + 1;
        let mut adj = vec![vec![0u8; size]; size];
        for a in 0..n {
            adj[a][a + 1] = 1;
            adj[a + 1][a] = 1;
        }
        let mut masses = vec![0.0; size];
        masses[0] = 1.0;
        let mut kinds = vec![NodeKind::Plain; size];
        kinds[n] = NodeKind::ImaginaryPair;
        Self::new(adj, masses, kinds)
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    fn l_function(&self, a: usize, eps: f64) -> f64 {
        match self.kinds[a] {
            NodeKind::Plain => ln_1p_exp_neg(eps),
            NodeKind::ImaginaryPair => ln_1p_exp_neg(2.0 * eps),
        }
    }
}

/// log(1 + e^{−x}) without overflow.
fn ln_1p_exp_neg(x: f64) -> f64 {
    if x > 0.0 {
        (-x).exp().ln_1p()
    } else {
        -x + x.exp().ln_1p()
    }
}

/// Uniform rapidity grid and solver settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RapidityGrid {
    pub theta_max: f64,
    pub step: f64,
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl RapidityGrid {
    /// Θ_max = ln(2/r) + 20 (at least 20), step 0.05.
    pub fn for_scale(r: f64) -> Self {
        Self {
            theta_max: (2.0 / r).ln().max(0.0) + 20.0,
            step: 0.05,
            damping: 0.5,
            tol: 1e-12,
            max_iter: 20_000,
        }
    }

    fn points(&self) -> Vec<f64> {
        let n = (self.theta_max / self.step).ceil() as i64;
        let h = self.theta_max / n as f64;
        (-n..=n).map(|k| k as f64 * h).collect()
    }
}

/// Converged pseudo-energies and ground-state energy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TbaSolution {
    pub r: f64,
    pub theta: Vec<f64>,
    pub epsilon: Vec<Vec<f64>>,
    /// R·E(μ, R) with μ = 1 units.
    pub energy_r: f64,
    pub c_eff: f64,
    pub iterations: usize,
}

/// Damped iteration of ε_a = m_a r coshθ − Σ_b N_ab φ⋆L_b, φ = 1/(2π coshθ).
pub fn solve_tba(system: &TbaSystem, r: f64, grid: &RapidityGrid) -> Result<TbaSolution> {
    solve_tba_seeded(system, r, grid, None)
}

pub fn solve_tba_seeded(system: &TbaSystem, r: f64, grid: &RapidityGrid, seed: Option<&[Vec<f64>]>) -> Result<TbaSolution> {
    if !(r > 0.0) {
        return Err(invalid("r", format!("scale must be positive, got {r}")));
    }
    let theta = grid.points();
    let np = theta.len();
    let h = theta[1] - theta[0];
    let n = system.len();
    let kernel: Vec<f64> = (0..np).map(|d| h / (2.0 * PI * (d as f64 * h).cosh())).collect();
    // Tail of ∫ φ beyond each edge, for L continued by its edge value.
    let tmax = theta[np - 1];
    let tail = |x: f64| (-(tmax - x) - 0.5 * h).exp().atan() / PI;
    let tails: Vec<(f64, f64)> = theta.iter().map(|&x| (tail(-x), tail(x))).collect();
    let drive: Vec<Vec<f64>> = (0..n).map(|a| theta.iter().map(|&x| system.masses[a] * r * x.cosh()).collect()).collect();
    let mut eps: Vec<Vec<f64>> = match seed {
        Some(s) if s.len() == n && s.iter().all(|v| v.len() == np) => s.to_vec(),
        Some(_) => return Err(invalid("seed", "seed does not match the diagram and grid")),
        None => drive.clone(),
    };
    let mut delta = f64::INFINITY;
    for it in 0..grid.max_iter {
        let ls: Vec<Vec<f64>> = (0..n).map(|a| eps[a].iter().map(|&e| system.l_function(a, e)).collect()).collect();
        let conv: Vec<Vec<f64>> = ls
            .iter()
            .map(|l| {
                (0..np)
                    .map(|i| {
                        let mut s = 0.0;
                        for (j, lj) in l.iter().enumerate() {
                            s += kernel[i.abs_diff(j)] * lj;
                        }
                        // trapezoid end weights, then the continuation beyond the grid
                        s -= 0.5 * (kernel[i] * l[0] + kernel[np - 1 - i] * l[np - 1]);
                        s + tails[i].0 * l[0] + tails[i].1 * l[np - 1]
                    })
                    .collect()
            })
            .collect();
        delta = 0.0;
        for a in 0..n {
            for i in 0..np {
                let mut new = drive[a][i];
                for b in 0..n {
                    if system.adjacency[a][b] != 0 {
                        new -= system.adjacency[a][b] as f64 * conv[b][i];
                    }
                }
                let upd = (1.0 - grid.damping) * eps[a][i] + grid.damping * new;
                delta = f64::max(delta, (upd - eps[a][i]).abs());
                eps[a][i] = upd;
            }
        }
        if delta < grid.tol {
            let energy_r = tba_energy(system, r, &theta, &eps);
            return Ok(TbaSolution {
                r,
                theta,
                epsilon: eps,
                energy_r,
                c_eff: -6.0 * energy_r / PI,
                iterations: it + 1,
            });
        }
    }
    Err(Error::NoConvergence {
        what: "TBA iteration",
        iterations: grid.max_iter,
        residual: delta,
    })
}

/// R·E = −Σ_a (m_a r/2π) ∫ L_a coshθ dθ.
fn tba_energy(system: &TbaSystem, r: f64, theta: &[f64], eps: &[Vec<f64>]) -> f64 {
    let h = theta[1] - theta[0];
    let np = theta.len();
    let mut e = 0.0;
    for a in 0..system.len() {
        if system.masses[a] == 0.0 {
            continue;
        }
        let mut s = 0.0;
        for i in 0..np {
            let w = if i == 0 || i == np - 1 { 0.5 } else { 1.0 };
            s += w * system.l_function(a, eps[a][i]) * theta[i].cosh();
        }
        e -= system.masses[a] * r / (2.0 * PI) * s * h;
    }
    e
}

/// 2 − 12/(t(t−2)).
pub fn c_uv_formula(t: f64) -> f64 {
    2.0 - 12.0 / (t * (t - 2.0))
}

/// Stationary UV and IR plateau values and the resulting central charge.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DilogCheck {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub c: f64,
}

fn stationary(adj: &[Vec<u8>], active: &[bool]) -> Result<Vec<f64>> {
    let n = adj.len();
    let mut x: Vec<f64> = active.iter().map(|&a| if a { 1.0 } else { 0.0 }).collect();
    for _ in 0..100_000 {
        let mut delta: f64 = 0.0;
        let mut next = x.clone();
        for a in 0..n {
            if !active[a] {
                continue;
            }
            let lp: f64 = (0..n).filter(|&b| active[b]).map(|b| adj[a][b] as f64 * (1.0 + x[b]).ln()).sum();
            let v = 0.5 * x[a] + 0.5 * (0.5 * lp).exp();
            delta = delta.max((v - x[a]).abs());
            next[a] = v;
        }
        x = next;
        if delta < 1e-15 {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence {
        what: "stationary TBA system",
        iterations: 100_000,
        residual: f64::NAN,
    })
}

/// c = (6/π²)[Σ L(x/(1+x)) − Σ L(y/(1+y))] for the plain-node diagram.
pub fn uv_dilog_check(system: &TbaSystem) -> Result<DilogCheck> {
    if system.kinds.iter().any(|&k| k != NodeKind::Plain) {
        return Err(invalid("diagram", "the dilogarithm sum rule is implemented for plain nodes"));
    }
    let n = system.len();
    let x = stationary(&system.adjacency, &vec![true; n])?;
    let massless: Vec<bool> = system.masses.iter().map(|&m| m == 0.0).collect();
    let y = stationary(&system.adjacency, &massless)?;
    let s = |v: &[f64]| v.iter().map(|&z| rogers_dilog(z / (1.0 + z))).sum::<f64>();
    Ok(DilogCheck {
        c: 6.0 / (PI * PI) * (s(&x) - s(&y)),
        x,
        y,
    })
}

/// The two RSOS pieces 1 − 6/(t(t−1)) and 1 − 6/((t−1)(t−2)).
pub fn rsos_decomposition(t: f64) -> (f64, f64) {
    (1.0 - 6.0 / (t * (t - 1.0)), 1.0 - 6.0 / ((t - 1.0) * (t - 2.0)))
}

/// c̃ = 1 − (3/2)/((n+1)(n+2)).
pub fn fork_central_charge(n: usize) -> f64 {
    let n = n as f64;
    1.0 - 1.5 / ((n + 1.0) * (n + 2.0))
}

/// Ground-state energy R·E_SG of the reduced fork at scale r.
pub fn twisted_sg_fork(n: usize, r: f64, grid: &RapidityGrid) -> Result<TbaSolution> {
    solve_tba(&TbaSystem::sg_fork(n)?, r, grid)
}

/// Massive boson and Majorana ground-state energies.
fn free_energy(mu: f64, r: f64, sign: f64) -> Result<f64> {
    let x = mu * r;
    if !(x > 0.0) {
        return Err(invalid("μR", "must be positive"));
    }
    // e^{−x coshθ} < 1e-30 beyond this θ
    let w = (70.0 / x).max(1.0).acosh() + 1.0;
    let f = |th: f64| {
        let e = (-x * th.cosh()).exp();
        let l = if sign < 0.0 { (-e).ln_1p() } else { e.ln_1p() };
        l * th.cosh()
    };
    // even integrand: ∫_{−∞}^{∞} = 2∫_0^∞
    Ok(sign * mu / (2.0 * PI) * 2.0 * trapezoid_half(f, 1e-3, w))
}

/// E_b(μ, R) = −(μ/2π) ∫ log(1 − e^{−μR coshθ}) coshθ dθ.
pub fn boson_energy(mu: f64, r: f64) -> Result<f64> {
    free_energy(mu, r, -1.0)
}

/// E_f(μ, R) = (μ/2π) ∫ log(1 + e^{−μR coshθ}) coshθ dθ.
pub fn fermion_energy(mu: f64, r: f64) -> Result<f64> {
    free_energy(mu, r, 1.0)
}

/// |2E_b(μ) − E_b(2μ) − 2E_f(μ)|.
pub fn free_energy_identity(mu: f64, r: f64) -> Result<f64> {
    if mu * r < 1e-3 {
        return Err(invalid("μR", "quadrature tails unreliable below μR = 1e-3"));
    }
    Ok((2.0 * boson_energy(mu, r)? - boson_energy(2.0 * mu, r)? - 2.0 * fermion_energy(mu, r)?).abs())
}
