//! R-matrices, Hamiltonians and transfer matrices of the staggered model.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::linalg;
use crate::operator::{Basis, SectorOperator, SparseMatrix, C64};
use crate::tl_core::{build_e_rsos, build_e_spin_twisted, ModelParams, RsosBasis, SpinBasis};

pub(crate) fn csin(z: C64) -> C64 {
    z.sin()
}

/// TL couplings of H(K1, K2) = K1 Σ e_j + K2 Σ (e_j e_{j+1} + e_{j+1} e_j).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Couplings {
    pub k1: f64,
    pub k2: f64,
    pub theta: Option<f64>,
}

impl Couplings {
    pub fn new(k1: f64, k2: f64) -> Self {
        Self { k1, k2, theta: None }
    }

    /// K1 = 2√Q sinθ − cosθ, K2 = −sinθ.
    pub fn from_theta(theta: f64, params: &ModelParams) -> Self {
        Self {
            k1: 2.0 * params.sqrt_q * theta.sin() - theta.cos(),
            k2: -theta.sin(),
            theta: Some(theta),
        }
    }

    /// The staggered point (K1, K2) = (−2cosγ, 1).
    pub fn z2(params: &ModelParams) -> Self {
        Self::new(-params.sqrt_q, 1.0)
    }

    pub fn is_z2(&self, params: &ModelParams) -> bool {
        (self.k1 + params.sqrt_q).abs() < 1e-14 && (self.k2 - 1.0).abs() < 1e-14
    }
}

/// θ at which the couplings are proportional to the staggered point.
pub fn theta_z2(params: &ModelParams) -> f64 {
    (1.0 / params.q.sqrt()).atan() - PI
}

/// How a twist is distributed over the bonds of the spin chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TwistGauge {
    /// Whole phase on the wrap bond (2N, 1).
    Seam,
    /// Equal share on every bond; commutes with one-site translation.
    Uniform,
}

/// Hilbert space on which the chain operators are built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Representation {
    /// Spin-1/2 chain at fixed Sz with twist φ (Bethe-Ansatz convention).
    Spin { sz: i32, phi: f64, gauge: TwistGauge },
    /// RSOS heights 1..=p.
    Rsos { p: usize },
}

impl Representation {
    pub fn spin(sz: i32) -> Self {
        Representation::Spin {
            sz,
            phi: 0.0,
            gauge: TwistGauge::Seam,
        }
    }

    pub fn twisted(sz: i32, phi: f64) -> Self {
        Representation::Spin {
            sz,
            phi,
            gauge: TwistGauge::Seam,
        }
    }
}

/// Total hopping phase around the chain produced by a transfer-matrix twist φ.
pub fn hopping_flux(phi: f64) -> f64 {
    HOP_SIGN * 2.0 * phi
}

const HOP_SIGN: f64 = -1.0;

/// The 2N generators e_1..e_2N of a chain of N blocks.
pub fn generators(n_blocks: usize, params: &ModelParams, rep: &Representation) -> Result<(Basis, Vec<SectorOperator>)> {
    if n_blocks == 0 {
        return Err(invalid("N", "need at least one block"));
    }
    let l = 2 * n_blocks;
    match *rep {
        Representation::Spin { sz, phi, gauge } => {
            let basis = Arc::new(SpinBasis::new(l, sz)?);
            let flux = hopping_flux(phi);
            let ops = (1..=l)
                .map(|j| {
                    let theta = match gauge {
                        TwistGauge::Seam if j == l => flux,
                        TwistGauge::Seam => 0.0,
                        TwistGauge::Uniform => flux / l as f64,
                    };
                    build_e_spin_twisted(j, &basis, params, theta)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((Basis::Spin(basis), ops))
        }
        Representation::Rsos { p } => {
            let basis = Arc::new(RsosBasis::new(l, p)?);
            let ops = (1..=l).map(|j| build_e_rsos(j, &basis)).collect::<Result<Vec<_>>>()?;
            Ok((Basis::Rsos(basis), ops))
        }
    }
}

/// Ř(u) = sin(γ−u)·1 + sin(u)·e for a given generator e.
pub fn rmatrix_from(e: &SectorOperator, u: C64, params: &ModelParams) -> SectorOperator {
    SectorOperator::lincomb(csin(C64::new(params.gamma, 0.0) - u), &SectorOperator::identity(&e.basis), csin(u), e)
}

/// Ř_{j,j+1}(u) on a spin chain of 2N sites in sector `sz`.
pub fn rmatrix(u: C64, params: &ModelParams, j: usize, n_blocks: usize, sz: i32) -> Result<SectorOperator> {
    let (_, ops) = generators(n_blocks, params, &Representation::spin(sz))?;
    let e = ops
        .get(j.wrapping_sub(1))
        .ok_or_else(|| invalid("j", format!("bond index {j} out of range")))?;
    Ok(rmatrix_from(e, u, params))
}

/// ‖Ř₁(u)Ř₂(u+v)Ř₁(v) − Ř₂(v)Ř₁(u+v)Ř₂(u)‖ for two adjacent generators.
pub fn ybe_residual(e1: &SectorOperator, e2: &SectorOperator, u: C64, v: C64, params: &ModelParams) -> f64 {
    let r1 = |x| rmatrix_from(e1, x, params);
    let r2 = |x| rmatrix_from(e2, x, params);
    let lhs = &(&r1(u) * &r2(u + v)) * &r1(v);
    let rhs = &(&r2(v) * &r1(u + v)) * &r2(u);
    lhs.distance(&rhs)
}

/// Yang-Baxter residual on the first three strands of a four-site spin chain, all sectors.
pub fn check_ybe(u: C64, v: C64, params: &ModelParams) -> Result<f64> {
    let mut worst = 0.0f64;
    for sz in -2..=2 {
        let (_, ops) = generators(2, params, &Representation::spin(sz))?;
        worst = worst.max(ybe_residual(&ops[0], &ops[1], u, v, params));
    }
    Ok(worst)
}

/// Block Ř_{j,j+1}(u) from its four-factor definition.
pub fn block_rmatrix_product(ops: &[SectorOperator], j: usize, u: C64, params: &ModelParams) -> SectorOperator {
    let (a, b, c) = block_generators(ops, j);
    let h = C64::new(FRAC_PI_2, 0.0);
    let f1 = rmatrix_from(b, u - h, params);
    let f2 = rmatrix_from(a, u, params);
    let f3 = rmatrix_from(c, u, params);
    let f4 = rmatrix_from(b, u + h, params);
    &(&(&f1 * &f2) * &f3) * &f4
}

/// Block Ř_{j,j+1}(u) from its expansion in TL words.
pub fn block_rmatrix_expanded(ops: &[SectorOperator], j: usize, u: C64, params: &ModelParams) -> SectorOperator {
    let (a, b, c) = block_generators(ops, j);
    let g = C64::new(params.gamma, 0.0);
    let s2 = (2.0 * g - 2.0 * u).sin();
    let id = SectorOperator::identity(&a.basis);
    let ab = a * b;
    let ba = b * a;
    let bc = b * c;
    let cb = c * b;
    let acb = &(a * c) * b;
    let bac = &ba * c;
    let bacb = &bac * b;
    let mut out = id.scale(-0.25 * s2 * s2);
    let lin = SectorOperator::lincomb((g - u).cos(), &(a + c), 2.0 * g.cos() * u.cos(), b);
    out = SectorOperator::lincomb(1.0, &out, -0.5 * u.sin() * s2, &lin);
    let quad = &(&(&ab + &ba) + &bc) + &cb;
    out = SectorOperator::lincomb(1.0, &out, 0.25 * (2.0 * u).sin() * s2, &quad);
    let cubic = SectorOperator::lincomb((g - u).cos(), &(&acb + &bac), -u.cos(), &bacb);
    out = SectorOperator::lincomb(1.0, &out, u.sin() * u.sin() * u.cos(), &cubic);
    // The e_{2j−1}e_{2j+1} word from the two outer factors at u.
    let cg = (g - u).cos();
    SectorOperator::lincomb(1.0, &out, -u.sin() * u.sin() * cg * cg, &(a * c))
}

fn block_generators(ops: &[SectorOperator], j: usize) -> (&SectorOperator, &SectorOperator, &SectorOperator) {
    let l = ops.len();
    let i = 2 * j - 2;
    (&ops[i % l], &ops[(i + 1) % l], &ops[(i + 2) % l])
}

/// Block Ř from both routes; fails hard if they disagree beyond 1e-10.
pub fn block_rmatrix(ops: &[SectorOperator], j: usize, u: C64, params: &ModelParams) -> Result<SectorOperator> {
    let p = block_rmatrix_product(ops, j, u, params);
    let e = block_rmatrix_expanded(ops, j, u, params);
    let d = p.distance(&e);
    if d > 1e-10 {
        return Err(Error::Inconsistent {
            what: "block R-matrix product vs expansion",
            residual: d,
            tolerance: 1e-10,
        });
    }
    Ok(p)
}

/// c_j = (cosγ)^{−2} Ř_{2j−1,2j}(π/2) Ř_{2j+1,2j+2}(π/2).
pub fn block_charge(ops: &[SectorOperator], j: usize, params: &ModelParams) -> SectorOperator {
    let (a, _, c) = block_generators(ops, j);
    let h = C64::new(FRAC_PI_2, 0.0);
    let cg = params.gamma.cos();
    (&rmatrix_from(a, h, params) * &rmatrix_from(c, h, params)).scale(1.0 / (cg * cg))
}

/// Z2 charge C = Π_j (cosγ)^{−1} Ř_{2j−1,2j}(π/2).
pub fn z2_charge(ops: &[SectorOperator], params: &ModelParams) -> SectorOperator {
    let h = C64::new(FRAC_PI_2, 0.0);
    let factors: Vec<SectorOperator> = ops
        .iter()
        .step_by(2)
        .map(|e| rmatrix_from(e, h, params).scale(1.0 / params.gamma.cos()))
        .collect();
    SectorOperator::product(&factors).expect("at least one block")
}

/// H(K1, K2) on 2N strands; at the staggered point the constant 2N cos2γ is included.
pub fn build_hamiltonian(c: &Couplings, params: &ModelParams, n_blocks: usize, rep: &Representation) -> Result<SectorOperator> {
    let (_, ops) = generators(n_blocks, params, rep)?;
    let mut h = hamiltonian_from_generators(c, &ops);
    if c.is_z2(params) {
        h = h.plus_identity(2.0 * n_blocks as f64 * (2.0 * params.gamma).cos());
    }
    Ok(h)
}

pub fn hamiltonian_from_generators(c: &Couplings, ops: &[SectorOperator]) -> SectorOperator {
    let l = ops.len();
    let mut lin = SectorOperator::zeros(&ops[0].basis);
    let mut quad = SectorOperator::zeros(&ops[0].basis);
    for j in 0..l {
        lin = &lin + &ops[j];
        if c.k2 != 0.0 {
            let k = (j + 1) % l;
            quad = &quad + &(&(&ops[j] * &ops[k]) + &(&ops[k] * &ops[j]));
        }
    }
    SectorOperator::lincomb(c.k1, &lin, c.k2, &quad)
}

/// H(K1, K2) written directly with Pauli matrices, without its identity component
/// N(K1 cosγ + K2).
pub fn pauli_hamiltonian(c: &Couplings, params: &ModelParams, n_blocks: usize, sz: i32) -> Result<SectorOperator> {
    let basis = Arc::new(SpinBasis::new(2 * n_blocks, sz)?);
    let l = basis.sites();
    let cg = params.gamma.cos();
    let sg = params.gamma.sin();
    let j1xy = -(c.k1 + 2.0 * cg * c.k2);
    let j1z = -(0.5 * cg * c.k1 + c.k2);
    let j2 = c.k2;
    let j3 = c.k2 * sg;
    let b = basis.clone();
    Ok(basis.operator_from_fn(move |s| {
        let mut out: Vec<(u64, C64)> = Vec::new();
        let z = |j: usize| b.sigma_z(s, j);
        for j in 1..=l {
            // (σ⁺_aσ⁻_b + σ⁻_aσ⁺_b) flips an antiparallel pair.
            let flip = |a: usize, bb: usize| -> Option<u64> {
                (z(a) != z(bb)).then(|| s ^ b.mask(a) ^ b.mask(bb))
            };
            let diag = j2 * 0.5 * z(j) * z(j + 2) + j1z * z(j) * z(j + 1);
            if let Some(t) = flip(j, j + 2) {
                out.push((t, C64::new(j2, 0.0)));
            }
            if let Some(t) = flip(j, j + 1) {
                let jm1 = if j == 1 { l } else { j - 1 };
                let amp = C64::new(j1xy, j3 * (z(jm1) - z(j + 2)));
                out.push((t, amp));
            }
            out.push((s, C64::new(diag, 0.0)));
        }
        out
    }))
}

/// Horizontal/vertical spectral data of a row transfer matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferSpec {
    pub n_blocks: usize,
    pub u: C64,
    pub vertical: Vec<C64>,
    pub phi: f64,
    pub sz: i32,
}

impl TransferSpec {
    /// Default staggering (0, π/2, 0, π/2, …).
    pub fn new(n_blocks: usize, u: C64, phi: f64, sz: i32) -> Self {
        let vertical = (0..2 * n_blocks)
            .map(|k| C64::new(if k % 2 == 0 { 0.0 } else { FRAC_PI_2 }, 0.0))
            .collect();
        Self {
            n_blocks,
            u,
            vertical,
            phi,
            sz,
        }
    }

    /// Massive pattern: blocks alternately shifted by +iΛ/2 and −iΛ/2, so the
    /// parameter differences run through u ∓ iΛ/2, u + π/2 ∓ iΛ/2.
    pub fn massive(n_blocks: usize, u: C64, phi: f64, sz: i32, lambda: f64) -> Self {
        let mut s = Self::new(n_blocks, u, phi, sz);
        for (k, v) in s.vertical.iter_mut().enumerate() {
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            *v += C64::new(0.0, 0.5 * sign * lambda);
        }
        s
    }

    pub fn with_u(&self, u: C64) -> Self {
        Self { u, ..self.clone() }
    }

    fn validate(&self) -> Result<()> {
        if self.vertical.len() != 2 * self.n_blocks {
            return Err(invalid("vertical_params", format!(
                "need {} values, got {}",
                2 * self.n_blocks,
                self.vertical.len()
            )));
        }
        Ok(())
    }
}

/// Vertex weights of R(u) = P Ř(u) on (auxiliary, site).
struct Vertex {
    a: C64,
    b: C64,
    /// aux ↑, site ↓ → aux ↓, site ↑
    c_ud: C64,
    /// aux ↓, site ↑ → aux ↑, site ↓
    c_du: C64,
}

fn vertex(u: C64, params: &ModelParams) -> Vertex {
    let g = params.gamma;
    let sg = g.sin();
    let iu = C64::new(0.0, 1.0) * u;
    Vertex {
        a: (C64::new(g, 0.0) - u).sin(),
        b: -u.sin(),
        c_ud: sg * (-iu).exp(),
        c_du: sg * iu.exp(),
    }
}

/// Row transfer matrix t(u): trace over one auxiliary spin of the twisted monodromy.
pub fn transfer_matrix(spec: &TransferSpec, params: &ModelParams) -> Result<SectorOperator> {
    spec.validate()?;
    let basis = Arc::new(SpinBasis::new(2 * spec.n_blocks, spec.sz)?);
    let l = basis.sites();
    let weights: Vec<Vertex> = spec.vertical.iter().map(|&v| vertex(spec.u - v, params)).collect();
    let twist = [C64::from_polar(1.0, -spec.phi), C64::from_polar(1.0, spec.phi)];
    let mut trip = Vec::new();
    let mut cur: HashMap<(bool, u64), C64> = HashMap::new();
    let mut next: HashMap<(bool, u64), C64> = HashMap::new();
    for (col, &s) in basis.states().iter().enumerate() {
        for aux0 in [false, true] {
            cur.clear();
            cur.insert((aux0, s), C64::new(1.0, 0.0));
            for k in ORDER.sites(l) {
                let m = basis.mask(k);
                let w = &weights[k - 1];
                next.clear();
                for (&(aux, st), &amp) in cur.iter() {
                    let site = st & m != 0;
                    if aux == site {
                        *next.entry((aux, st)).or_default() += amp * w.a;
                    } else {
                        *next.entry((aux, st)).or_default() += amp * w.b;
                        let c = if aux { w.c_ud } else { w.c_du };
                        *next.entry((site, st ^ m)).or_default() += amp * c;
                    }
                }
                std::mem::swap(&mut cur, &mut next);
            }
            for (&(aux, st), &amp) in cur.iter() {
                if aux == aux0 && amp != C64::new(0.0, 0.0) {
                    let row = basis.index_of(st).expect("monodromy conserves Sz");
                    trip.push((row, col, amp * twist[aux as usize]));
                }
            }
        }
    }
    Ok(SectorOperator::new(
        Basis::Spin(basis.clone()),
        SparseMatrix::from_triplets(basis.len(), trip),
    ))
}

#[derive(Clone, Copy)]
enum SiteOrder {
    Ascending,
    #[allow(dead_code)]
    Descending,
}

impl SiteOrder {
    fn sites(self, l: usize) -> Box<dyn Iterator<Item = usize>> {
        match self {
            SiteOrder::Ascending => Box::new(1..=l),
            SiteOrder::Descending => Box::new((1..=l).rev()),
        }
    }
}

const ORDER: SiteOrder = SiteOrder::Ascending;

/// t(u) t(u + π/2).
pub fn two_row_transfer(spec: &TransferSpec, params: &ModelParams) -> Result<SectorOperator> {
    let t1 = transfer_matrix(spec, params)?;
    let t2 = transfer_matrix(&spec.with_u(spec.u + C64::new(FRAC_PI_2, 0.0)), params)?;
    Ok(&t1 * &t2)
}

/// −½ sin2γ · T(0)^{−1} T′(0) with a central difference of step `h`.
pub fn hamiltonian_from_transfer(n_blocks: usize, params: &ModelParams, phi: f64, sz: i32, h: f64) -> Result<DMatrix<C64>> {
    let spec = TransferSpec::new(n_blocks, C64::new(0.0, 0.0), phi, sz);
    let t0 = two_row_transfer(&spec, params)?.to_dense();
    let tp = two_row_transfer(&spec.with_u(C64::new(h, 0.0)), params)?.to_dense();
    let tm = two_row_transfer(&spec.with_u(C64::new(-h, 0.0)), params)?.to_dense();
    let deriv = (tp - tm) / C64::new(2.0 * h, 0.0);
    let x = linalg::solve(&t0, &deriv)?;
    Ok(x * C64::new(-0.5 * (2.0 * params.gamma).sin(), 0.0))
}

/// Max distance between the sorted spectra of the transfer-matrix Hamiltonian and H at the staggered point.
pub fn anisotropic_limit_check(n_blocks: usize, params: &ModelParams, h: f64) -> Result<f64> {
    anisotropic_limit_check_twisted(n_blocks, params, 0.0, 0, h)
}

pub fn anisotropic_limit_check_twisted(n_blocks: usize, params: &ModelParams, phi: f64, sz: i32, h: f64) -> Result<f64> {
    let from_t = hamiltonian_from_transfer(n_blocks, params, phi, sz, h)?;
    let direct = build_hamiltonian(&Couplings::z2(params), params, n_blocks, &Representation::twisted(sz, phi))?.to_dense();
    let mut a = linalg::eigenvalues(&from_t)?;
    let mut b = linalg::eigenvalues(&direct)?;
    Ok(spectral_distance(&mut a, &mut b))
}

/// Greedy matching distance between two eigenvalue multisets.
pub fn spectral_distance(a: &mut [C64], b: &mut [C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let key = |z: &C64| (z.re, z.im);
    a.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a.iter() {
        let mut best = (f64::INFINITY, 0);
        for (k, y) in b.iter().enumerate() {
            if !used[k] && (x - y).norm() < best.0 {
                best = ((x - y).norm(), k);
            }
        }
        used[best.1] = true;
        worst = worst.max(best.0);
    }
    worst
}

/// Tr[(t(u)t(u+π/2))^M] kept as log|λ_max| plus a scaled sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartitionTrace {
    pub rows: u32,
    /// log of the largest two-row eigenvalue modulus.
    pub log_lambda_max: f64,
    /// Σ (λ_i/|λ_max|)^M
    pub scaled: C64,
}

impl PartitionTrace {
    pub fn log_abs(&self) -> f64 {
        self.rows as f64 * self.log_lambda_max + self.scaled.norm().ln()
    }

    pub fn value(&self) -> C64 {
        self.scaled * (self.rows as f64 * self.log_lambda_max).exp()
    }
}

pub fn lattice_partition_trace(spec: &TransferSpec, params: &ModelParams, rows: u32) -> Result<PartitionTrace> {
    if rows == 0 {
        return Err(invalid("M", "need at least one row"));
    }
    let tt = two_row_transfer(spec, params)?.to_dense();
    let ev = linalg::eigenvalues(&tt)?;
    let lmax = ev.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if lmax == 0.0 {
        return Err(Error::Singular("two-row transfer matrix is nilpotent".into()));
    }
    let scaled = ev.iter().map(|z| (z / lmax).powu(rows)).sum();
    Ok(PartitionTrace {
        rows,
        log_lambda_max: lmax.ln(),
        scaled,
    })
}

/// Operator moving the content of every site by `shift` sites.
pub fn translation(basis: &Arc<SpinBasis>, shift: usize) -> SectorOperator {
    let b = basis.clone();
    basis.operator_from_fn(move |s| vec![(b.translate(s, shift), C64::new(1.0, 0.0))])
}
