//! Continuum torus partition functions: η, θ, Coulombic defect sums and their
//! Ising, twisted and Potts assemblies.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::operator::C64;
use crate::tl_core::ModelParams;

/// Relative size below which series terms are dropped.
const SERIES_TOL: f64 = 1e-17;
/// Gaussian decay exponent at which defect sums are cut off (e^{-42} ≈ 6e-19).
const LATTICE_EXPONENT: f64 = 42.0;

/// A modular parameter with q = e^{2πiτ}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TorusPoint {
    pub tau: C64,
    /// Number of factors kept in the η product.
    pub series_cutoff: usize,
}

impl TorusPoint {
    pub fn new(tau: C64) -> Result<Self> {
        if !(tau.im > 0.0) || !tau.re.is_finite() {
            return Err(invalid("tau", format!("Im τ must be positive, got {tau}")));
        }
        // |q|^n < tol, with a geometric tail factor 1/(1−|q|).
        let aq = (-2.0 * PI * tau.im).exp();
        let n = ((SERIES_TOL * (1.0 - aq)).ln() / aq.ln()).ceil().max(1.0);
        if n > 1e7 {
            return Err(invalid("tau", format!("Im τ = {} too small for the q-series", tau.im)));
        }
        Ok(Self {
            tau,
            series_cutoff: n as usize,
        })
    }

    pub fn q(&self) -> C64 {
        (2.0 * PI * C64::i() * self.tau).exp()
    }

    pub fn shift(&self) -> Result<Self> {
        Self::new(self.tau + 1.0)
    }

    pub fn invert(&self) -> Result<Self> {
        Self::new(-1.0 / self.tau)
    }

    pub fn doubled(&self) -> Result<Self> {
        Self::new(2.0 * self.tau)
    }

    /// Defect cutoff M with exp(−πg|m′−mτ|²/Im τ) negligible for max(|m|,|m′|) > M.
    pub fn lattice_cutoff(&self, g: f64) -> i64 {
        let (x, y) = (self.tau.re, self.tau.im);
        // |m′ − mτ|² is the quadratic form [[|τ|², −x], [−x, 1]]; use its smaller eigenvalue.
        let tr = x * x + y * y + 1.0;
        let det = y * y;
        let lmin = 0.5 * (tr - (tr * tr - 4.0 * det).sqrt());
        // max(|m|,|m′|)² ≥ (m² + m′²)/2
        ((2.0 * LATTICE_EXPONENT * y / (PI * g * lmin)).sqrt()).ceil() as i64 + 1
    }
}

/// Dedekind η(τ) = q^{1/24} Π (1 − qⁿ).
pub fn eta(tp: &TorusPoint) -> C64 {
    let q = tp.q();
    let mut qn = q;
    let mut p = C64::new(1.0, 0.0);
    for _ in 0..tp.series_cutoff {
        p *= 1.0 - qn;
        qn *= q;
    }
    (2.0 * PI * C64::i() * tp.tau / 24.0).exp() * p
}

/// Jacobi θ_ν(τ) for ν = 2, 3, 4 as lattice sums of e^{iπτ x²}.
pub fn theta(nu: u8, tp: &TorusPoint) -> Result<C64> {
    let (offset, alternating) = match nu {
        2 => (0.5, false),
        3 => (0.0, false),
        4 => (0.0, true),
        _ => return Err(invalid("nu", format!("θ_{nu} is not provided (ν ∈ {{2, 3, 4}})"))),
    };
    let ipt = C64::i() * PI * tp.tau;
    // e^{−π Im τ x²} < tol beyond this |x|
    let xmax = ((-SERIES_TOL.ln()) / (PI * tp.tau.im)).sqrt().ceil() as i64 + 1;
    let mut s = C64::new(0.0, 0.0);
    for n in -xmax..=xmax {
        let x = n as f64 + offset;
        let term = (ipt * x * x).exp();
        s += if alternating && n % 2 != 0 { -term } else { term };
    }
    Ok(s)
}

/// Z_ν = |θ_ν/η|.
pub fn z_nu(nu: u8, tp: &TorusPoint) -> Result<f64> {
    Ok((theta(nu, tp)? / eta(tp)).norm())
}

/// Z₀(g) = √(g/Im τ)/|η|².
pub fn z0(g: f64, tp: &TorusPoint) -> f64 {
    (g / tp.tau.im).sqrt() / eta(tp).norm_sqr()
}

/// Free boson with defects (m, m′).
pub fn z_mm(g: f64, m: i64, mp: i64, tp: &TorusPoint) -> f64 {
    z0(g, tp) * gaussian(g, m, mp, tp)
}

fn gaussian(g: f64, m: i64, mp: i64, tp: &TorusPoint) -> f64 {
    let d = C64::new(mp as f64, 0.0) - m as f64 * tp.tau;
    (-PI * g * d.norm_sqr() / tp.tau.im).exp()
}

/// Parity class of a defect pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Parity {
    Any,
    Even,
    Odd,
}

impl Parity {
    fn admits(self, m: i64) -> bool {
        match self {
            Parity::Any => true,
            Parity::Even => m % 2 == 0,
            Parity::Odd => m % 2 != 0,
        }
    }
}

/// Σ Z_{m,m′}(g) w(m, m′) over a parity class.
pub fn defect_sum_weighted(g: f64, pm: Parity, pmp: Parity, tp: &TorusPoint, w: impl Fn(i64, i64) -> f64) -> f64 {
    let cut = tp.lattice_cutoff(g);
    let mut s = 0.0;
    for m in -cut..=cut {
        if !pm.admits(m) {
            continue;
        }
        for mp in -cut..=cut {
            if pmp.admits(mp) {
                s += gaussian(g, m, mp, tp) * w(m, mp);
            }
        }
    }
    z0(g, tp) * s
}

pub fn defect_sum(g: f64, pm: Parity, pmp: Parity, tp: &TorusPoint) -> f64 {
    defect_sum_weighted(g, pm, pmp, tp, |_, _| 1.0)
}

/// Greatest common divisor with gcd(0, m) = |m| and gcd(0, 0) = 0.
pub fn pgcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The sums A, B, C, D.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Abcd {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Abcd {
    /// From the Jacobi partition functions.
    pub fn from_jacobi(tp: &TorusPoint) -> Result<Self> {
        let (z2, z3, z4) = (z_nu(2, tp)?.powi(2), z_nu(3, tp)?.powi(2), z_nu(4, tp)?.powi(2));
        Ok(Self {
            a: 0.25 * (z2 + z3 + z4),
            b: 0.25 * (-z2 + z3 + z4),
            c: 0.25 * (z2 + z3 - z4),
            d: 0.25 * (z2 - z3 + z4),
        })
    }

    /// From the g = 1/2 defect sums.
    pub fn from_defects(tp: &TorusPoint) -> Self {
        let s = |a, b| defect_sum(0.5, a, b, tp);
        Self {
            a: s(Parity::Even, Parity::Even),
            b: s(Parity::Even, Parity::Odd),
            c: s(Parity::Odd, Parity::Even),
            d: s(Parity::Odd, Parity::Odd),
        }
    }

    /// From the Ising bilinears.
    pub fn from_ising(z: &IsingSectors) -> Self {
        Self {
            a: 0.25 * (z.z00 * z.z00 + z.z01 * z.z01 + z.z10 * z.z10 + z.z11 * z.z11),
            b: 0.5 * (z.z00 * z.z01 - z.z10 * z.z11),
            c: 0.5 * (z.z00 * z.z10 - z.z01 * z.z11),
            d: 0.5 * (z.z00 * z.z11 - z.z01 * z.z10),
        }
    }

    fn weight(&self, m: i64, mp: i64) -> f64 {
        match (m % 2 == 0, mp % 2 == 0) {
            (true, true) => self.a,
            (true, false) => self.b,
            (false, true) => self.c,
            (false, false) => self.d,
        }
    }

    pub fn max_distance(&self, o: &Abcd) -> f64 {
        [self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d]
            .iter()
            .fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Ising partition functions 𝒵(r, r′) with twisted boundary conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IsingSectors {
    pub z00: f64,
    pub z01: f64,
    pub z10: f64,
    pub z11: f64,
}

impl IsingSectors {
    /// Inverts Z₂ = 𝒵(1,0)+𝒵(1,1), Z₃ = 𝒵(0,1)+𝒵(1,0), Z₄ = 𝒵(0,1)+𝒵(1,1).
    pub fn new(tp: &TorusPoint) -> Result<Self> {
        let (z2, z3, z4) = (z_nu(2, tp)?, z_nu(3, tp)?, z_nu(4, tp)?);
        let z01 = 0.5 * (z3 + z4 - z2);
        let z10 = 0.5 * (z2 + z3 - z4);
        let z11 = 0.5 * (z2 + z4 - z3);
        Ok(Self {
            z00: z01 + z10 + z11,
            z01,
            z10,
            z11,
        })
    }

    pub fn get(&self, r: u8, rp: u8) -> f64 {
        match (r & 1, rp & 1) {
            (0, 0) => self.z00,
            (0, 1) => self.z01,
            (1, 0) => self.z10,
            _ => self.z11,
        }
    }
}

/// Z_Ising = (Z₂ + Z₃ + Z₄)/2.
pub fn z_ising(tp: &TorusPoint) -> Result<f64> {
    Ok(0.5 * (z_nu(2, tp)? + z_nu(3, tp)? + z_nu(4, tp)?))
}

fn parity_of(r: u8) -> Parity {
    if r.is_multiple_of(2) {
        Parity::Even
    } else {
        Parity::Odd
    }
}

/// Ẑ(g, φ) with non-contractible loop weight 2cosφ.
pub fn z_twisted(g: f64, phi: f64, tp: &TorusPoint) -> Result<f64> {
    if !(g > 0.0) {
        return Err(invalid("g", "coupling must be positive"));
    }
    let w = Abcd::from_jacobi(tp)?;
    Ok(2.0
        * defect_sum_weighted(g, Parity::Any, Parity::Any, tp, |m, mp| {
            w.weight(m, mp) * (2.0 * phi * pgcd(m, mp) as f64).cos()
        }))
}

/// Untwisted Z(g), evaluated by the A, B, C, D route and the Ising route.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UntwistedZ {
    pub jacobi: f64,
    pub ising: f64,
}

impl UntwistedZ {
    pub fn discrepancy(&self) -> f64 {
        (self.jacobi - self.ising).abs()
    }
}

pub fn z_untwisted_both(g: f64, tp: &TorusPoint) -> Result<UntwistedZ> {
    if !(g > 0.0 && g <= 0.5) {
        return Err(invalid("g", format!("expected 0 < g ≤ 1/2, got {g}")));
    }
    let w = Abcd::from_jacobi(tp)?;
    let s = |a, b| defect_sum(g, a, b, tp);
    let (see, seo, soe, soo) = (
        s(Parity::Even, Parity::Even),
        s(Parity::Even, Parity::Odd),
        s(Parity::Odd, Parity::Even),
        s(Parity::Odd, Parity::Odd),
    );
    let jacobi = 2.0 * (w.a * see + w.b * seo + w.c * soe + w.d * soo);
    let z = IsingSectors::new(tp)?;
    let mut ising = 0.0;
    for r1 in 0..2u8 {
        for r1p in 0..2u8 {
            for r2 in 0..2u8 {
                for r2p in 0..2u8 {
                    let sign = if (r1 * r2p + r1p * r2) % 2 == 0 { 1.0 } else { -1.0 };
                    let sum = match (parity_of(r1 + r2), parity_of(r1p + r2p)) {
                        (Parity::Even, Parity::Even) => see,
                        (Parity::Even, _) => seo,
                        (_, Parity::Even) => soe,
                        _ => soo,
                    };
                    ising += sign * z.get(r1, r1p) * z.get(r2, r2p) * sum;
                }
            }
        }
    }
    Ok(UntwistedZ {
        jacobi,
        ising: 0.5 * ising,
    })
}

/// Untwisted Z(g); the two evaluation routes must agree to 1e-10.
pub fn z_untwisted(g: f64, tp: &TorusPoint) -> Result<f64> {
    let z = z_untwisted_both(g, tp)?;
    let tol = 1e-10 * z.jacobi.abs().max(1.0);
    if z.discrepancy() > tol {
        return Err(Error::Inconsistent {
            what: "Z(g) from Jacobi and Ising forms",
            residual: z.discrepancy(),
            tolerance: tol,
        });
    }
    Ok(z.jacobi)
}

/// Z(g) as a direct sum over charges (e, m, ẽ, m̃) obeying the parity rule.
pub fn z_untwisted_coulomb(g: f64, tp: &TorusPoint) -> Result<f64> {
    if !(g > 0.0) {
        return Err(invalid("g", "coupling must be positive"));
    }
    let y = tp.tau.im;
    let x = tp.tau.re;
    // 2π Im τ (Δ+Δ̄) > LATTICE_EXPONENT bounds every charge separately.
    let bound = |coef: f64| (4.0 * LATTICE_EXPONENT / (2.0 * PI * y * coef)).sqrt().ceil() as i64 + 1;
    let (emax, mmax, tmax) = (bound(1.0 / (2.0 * g)), bound(2.0 * g), bound(1.0));
    let (a, b) = ((2.0 * g).sqrt().recip(), (2.0 * g).sqrt());
    let mut s = 0.0;
    for e in -emax..=emax {
        for m in -mmax..=mmax {
            let p = e as f64 * a + m as f64 * b;
            let pb = e as f64 * a - m as f64 * b;
            for et in -tmax..=tmax {
                if (e + et) % 2 != 0 {
                    continue;
                }
                for mt in -tmax..=tmax {
                    if (m + mt) % 2 != 0 {
                        continue;
                    }
                    let d = (p * p + ((et + mt) as f64).powi(2)) / 8.0;
                    let db = (pb * pb + ((et - mt) as f64).powi(2)) / 8.0;
                    s += (-2.0 * PI * y * (d + db)).exp() * (2.0 * PI * x * (d - db)).cos();
                }
            }
        }
    }
    Ok(s / eta(tp).norm_sqr().powi(2))
}

/// Q-state Potts partition function Ẑ(g, πe₀) + (Q−1)/2 Ẑ(g, π/2).
pub fn z_potts(q: f64, tp: &TorusPoint) -> Result<f64> {
    if !(q > 0.0 && q < 4.0) {
        return Err(invalid("Q", format!("expected 0 < Q < 4, got {q}")));
    }
    let p = ModelParams::from_q(q)?;
    Ok(z_twisted(p.g, PI * p.e0, tp)? + 0.5 * (q - 1.0) * z_twisted(p.g, PI / 2.0, tp)?)
}

/// Closed form of Ẑ(g, π/4) = A[Σ Z(1/(16g)) − 2 Σ_even Z(g)].
pub fn z_twisted_quarter(g: f64, tp: &TorusPoint) -> Result<f64> {
    let w = Abcd::from_jacobi(tp)?;
    Ok(w.a * (defect_sum(1.0 / (16.0 * g), Parity::Any, Parity::Any, tp) - 2.0 * defect_sum(g, Parity::Even, Parity::Even, tp)))
}

/// Closed form of Ẑ(g, π/2) = 2(A S_ee − B S_eo − C S_oe − D S_oo).
pub fn z_twisted_half(g: f64, tp: &TorusPoint) -> Result<f64> {
    let w = Abcd::from_jacobi(tp)?;
    let s = |a, b| defect_sum(g, a, b, tp);
    Ok(2.0
        * (w.a * s(Parity::Even, Parity::Even)
            - w.b * s(Parity::Even, Parity::Odd)
            - w.c * s(Parity::Odd, Parity::Even)
            - w.d * s(Parity::Odd, Parity::Odd)))
}

/// Partition numbers p(0..=n).
pub fn partitions(n: usize) -> Vec<u64> {
    let mut p = vec![0u64; n + 1];
    p[0] = 1;
    for part in 1..=n {
        for k in part..=n {
            p[k] += p[k - part];
        }
    }
    p
}

/// Two-line character: q^{Δ − c/24} Σ_n d_n qⁿ with d_n = Σ p(n₀)p(n₁).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Character {
    pub leading_exponent: f64,
    pub coefficients: Vec<u64>,
}

pub fn character(delta: f64, c: f64, level_max: usize) -> Character {
    let p = partitions(level_max);
    let coefficients = (0..=level_max).map(|n| (0..=n).map(|k| p[k] * p[n - k]).sum()).collect();
    Character {
        leading_exponent: delta - c / 24.0,
        coefficients,
    }
}

impl Character {
    pub fn evaluate(&self, tp: &TorusPoint) -> C64 {
        let q = tp.q();
        let mut s = C64::new(0.0, 0.0);
        let mut qn = C64::new(1.0, 0.0);
        for &d in &self.coefficients {
            s += d as f64 * qn;
            qn *= q;
        }
        (2.0 * PI * C64::i() * tp.tau * self.leading_exponent).exp() * s
    }
}
