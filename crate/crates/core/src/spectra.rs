//! Diagonalisation of sector operators, finite-size fits and closed-form exponents.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, Matrix3, Vector3};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::lattice_models::{build_hamiltonian, Couplings, Representation, TwistGauge};
use crate::linalg::{arnoldi_extremal, eigenvalues, Target};
use crate::operator::{Basis, SectorOperator, C64};
use crate::tl_core::{ModelParams, SpinBasis};

/// Largest dimension handled by the dense path.
pub const DENSE_LIMIT: usize = 4000;

/// Eigenvalues of one sector, with its labels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumTable {
    pub n_blocks: usize,
    pub sz: Option<i32>,
    /// Momentum index m of k = 2πm/L (one-site translation), if resolved.
    pub momentum: Option<usize>,
    pub phi: f64,
    pub eigenvalues: Vec<C64>,
}

impl SpectrumTable {
    pub fn lowest(&self) -> Option<C64> {
        self.eigenvalues.first().copied()
    }

    pub fn max_imag(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, z| m.max(z.im.abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagMode {
    /// Dense LAPACK diagonalisation, every eigenvalue.
    Full,
    /// Restarted Arnoldi, one extremal eigenvalue.
    Extremal,
}

/// Ascending real part (Hamiltonians) or descending modulus (transfer matrices).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    RealAscending,
    ModulusDescending,
}

pub fn sort_eigenvalues(ev: &mut [C64], order: Order) {
    match order {
        Order::RealAscending => ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))),
        Order::ModulusDescending => ev.sort_by(|a, b| b.norm().total_cmp(&a.norm()).then(a.re.total_cmp(&b.re))),
    }
}

pub fn diagonalize(op: &SectorOperator, mode: DiagMode, order: Order) -> Result<SpectrumTable> {
    let dim = op.dim();
    if dim == 0 {
        return Err(Error::EmptySector("cannot diagonalise an empty sector".into()));
    }
    let mut ev = match mode {
        DiagMode::Full => {
            if dim > DENSE_LIMIT {
                return Err(invalid("mode", format!("dense path limited to dimension {DENSE_LIMIT}, got {dim}")));
            }
            eigenvalues(&op.to_dense())?
        }
        DiagMode::Extremal => {
            let target = match order {
                Order::RealAscending => Target::SmallestReal,
                Order::ModulusDescending => Target::LargestModulus,
            };
            let (l, _) = arnoldi_extremal(&op.matrix, target, 60, 1e-10, 400)?;
            vec![l]
        }
    };
    sort_eigenvalues(&mut ev, order);
    let (n_blocks, sz) = match &op.basis {
        Basis::Spin(b) => (b.sites() / 2, Some(b.sz())),
        Basis::Rsos(b) => (b.sites() / 2, None),
    };
    Ok(SpectrumTable {
        n_blocks,
        sz,
        momentum: None,
        phi: 0.0,
        eigenvalues: ev,
    })
}

/// Orbits of a spin basis under translation by `shift` sites.
#[derive(Debug, Clone)]
pub struct MomentumBasis {
    basis: Arc<SpinBasis>,
    period: usize,
    reps: Vec<usize>,
    orbit: Vec<usize>,
    /// For every basis state: (orbit index, l) with state = T^l(rep).
    lookup: Vec<(usize, usize)>,
}

impl MomentumBasis {
    pub fn new(basis: Arc<SpinBasis>, shift: usize) -> Result<Self> {
        let l = basis.sites();
        if shift == 0 || !l.is_multiple_of(shift) {
            return Err(invalid("shift", format!("{shift} does not divide L = {l}")));
        }
        let period = l / shift;
        let mut lookup = vec![(usize::MAX, 0); basis.len()];
        let mut reps = Vec::new();
        let mut orbit = Vec::new();
        for (i, &s) in basis.states().iter().enumerate() {
            if lookup[i].0 != usize::MAX {
                continue;
            }
            let a = reps.len();
            reps.push(i);
            let mut cur = s;
            let mut r = 0;
            loop {
                let idx = basis.index_of(cur).expect("translation preserves Sz");
                if lookup[idx].0 != usize::MAX {
                    break;
                }
                lookup[idx] = (a, r);
                r += 1;
                cur = basis.translate(cur, shift);
            }
            orbit.push(r);
        }
        Ok(Self {
            basis,
            period,
            reps,
            orbit,
            lookup,
        })
    }

    /// Number of distinct momenta k = 2πm/period.
    pub fn period(&self) -> usize {
        self.period
    }

    fn members(&self, m: usize) -> Vec<usize> {
        (0..self.reps.len()).filter(|&a| (m * self.orbit[a]).is_multiple_of(self.period)).collect()
    }

    pub fn block_dim(&self, m: usize) -> usize {
        self.members(m).len()
    }

    /// Matrix of a translation-invariant operator in the momentum-m block.
    pub fn block(&self, op: &SectorOperator, m: usize) -> Result<DMatrix<C64>> {
        if op.dim() != self.basis.len() {
            return Err(invalid("op", "operator does not act on this basis"));
        }
        let members = self.members(m);
        let mut pos = vec![usize::MAX; self.reps.len()];
        for (p, &a) in members.iter().enumerate() {
            pos[a] = p;
        }
        let k = 2.0 * PI * m as f64 / self.period as f64;
        let cols = op.matrix.transpose();
        let mut out = DMatrix::<C64>::zeros(members.len(), members.len());
        for (pa, &a) in members.iter().enumerate() {
            let ra = self.orbit[a] as f64;
            for (s, v) in cols.row(self.reps[a]) {
                let (b, l) = self.lookup[s];
                let pb = pos[b];
                if pb == usize::MAX {
                    continue;
                }
                let rb = self.orbit[b] as f64;
                out[(pb, pa)] += v * C64::from_polar((ra / rb).sqrt(), k * l as f64);
            }
        }
        Ok(out)
    }
}

/// Z2-point Hamiltonian of one (Sz, φ) sector with the twist spread uniformly.
pub fn z2_hamiltonian(params: &ModelParams, n_blocks: usize, sz: i32, phi: f64) -> Result<SectorOperator> {
    let rep = Representation::Spin {
        sz,
        phi,
        gauge: TwistGauge::Uniform,
    };
    build_hamiltonian(&Couplings::z2(params), params, n_blocks, &rep)
}

/// Momentum-resolved Hamiltonian spectra; `momenta = None` means all of them.
pub fn momentum_spectra(
    params: &ModelParams,
    n_blocks: usize,
    sz: i32,
    phi: f64,
    momenta: Option<&[usize]>,
) -> Result<Vec<SpectrumTable>> {
    let h = z2_hamiltonian(params, n_blocks, sz, phi)?;
    let basis = match &h.basis {
        Basis::Spin(b) => b.clone(),
        Basis::Rsos(_) => unreachable!("spin representation requested"),
    };
    let mb = MomentumBasis::new(basis, 1)?;
    let all: Vec<usize> = (0..mb.period()).collect();
    let mut out = Vec::new();
    for &m in momenta.unwrap_or(&all) {
        if mb.block_dim(m) == 0 {
            continue;
        }
        if mb.block_dim(m) > DENSE_LIMIT {
            return Err(invalid("N", format!("momentum block of dimension {} too large", mb.block_dim(m))));
        }
        let mut ev = eigenvalues(&mb.block(&h, m)?)?;
        sort_eigenvalues(&mut ev, Order::RealAscending);
        out.push(SpectrumTable {
            n_blocks,
            sz: Some(sz),
            momentum: Some(m % mb.period()),
            phi,
            eigenvalues: ev,
        });
    }
    Ok(out)
}

/// Lowest energy (by real part) of a sector, searched over the given momenta.
pub fn lowest_energy(params: &ModelParams, n_blocks: usize, sz: i32, phi: f64, momenta: Option<&[usize]>) -> Result<f64> {
    let tables = momentum_spectra(params, n_blocks, sz, phi, momenta)?;
    tables
        .iter()
        .filter_map(|t| t.lowest())
        .map(|z| z.re)
        .min_by(f64::total_cmp)
        .ok_or_else(|| Error::EmptySector(format!("no states at N = {n_blocks}, Sz = {sz}")))
}

/// Outcome of a finite-size fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub e_inf: f64,
    /// c for central-charge fits, (Δ+Δ̄)/2 for exponent fits.
    pub estimate: f64,
    /// Coefficient of the subleading correction.
    pub correction: f64,
    pub sizes: Vec<usize>,
    /// Largest |model − data| over the sizes used.
    pub residual: f64,
}

/// Power of 1/N of the subleading term in E0(N) = N e∞ − πvc/(6N) + b/N^p.
pub const C_FIT_POWER: i32 = 3;

/// Three-point fit of E0(N) = N e∞ − πvc/(6N) + b/N³.
pub fn central_charge_fit(data: &[(usize, f64)], v: f64) -> Result<FitResult> {
    if data.len() != 3 {
        return Err(invalid("sizes", format!("the central-charge fit needs 3 sizes, got {}", data.len())));
    }
    let rows: Vec<[f64; 3]> = data
        .iter()
        .map(|&(n, _)| {
            let n = n as f64;
            [n, -PI * v / (6.0 * n), n.powi(-C_FIT_POWER)]
        })
        .collect();
    let a = Matrix3::from_fn(|i, j| rows[i][j]);
    let y = Vector3::from_fn(|i, _| data[i].1);
    let scale = a.abs().max();
    if a.determinant().abs() < 1e-12 * scale.powi(3) {
        return Err(Error::DegenerateFit("sizes give a collinear system".into()));
    }
    let x = a.lu().solve(&y).ok_or_else(|| Error::DegenerateFit("singular fit matrix".into()))?;
    let residual = (a * x - y).abs().max();
    Ok(FitResult {
        e_inf: x[0],
        estimate: x[1],
        correction: x[2],
        sizes: data.iter().map(|d| d.0).collect(),
        residual,
    })
}

/// Power of 1/N of the correction in N·gap/(2πv) = (Δ+Δ̄) + b/N^p.
pub const GAP_FIT_POWER: i32 = 2;

/// Two-point fit of E − E0 = 2πv(Δ+Δ̄)/N + b/N^{1+p}; returns h = (Δ+Δ̄)/2.
pub fn exponent_fit(gaps: &[(usize, f64)], v: f64) -> Result<FitResult> {
    if gaps.len() != 2 {
        return Err(invalid("sizes", format!("the exponent fit needs 2 sizes, got {}", gaps.len())));
    }
    if let Some(&(n, g)) = gaps.iter().find(|g| !(g.1 > 0.0)) {
        return Err(invalid("gaps", format!("non-positive gap {g} at N = {n}")));
    }
    let (n1, n2) = (gaps[0].0 as f64, gaps[1].0 as f64);
    if n1 == n2 {
        return Err(Error::DegenerateFit("two equal sizes".into()));
    }
    let x1 = n1 * gaps[0].1 / (2.0 * PI * v);
    let x2 = n2 * gaps[1].1 / (2.0 * PI * v);
    let (p1, p2) = (n1.powi(-GAP_FIT_POWER), n2.powi(-GAP_FIT_POWER));
    let b = (x1 - x2) / (p1 - p2);
    let x = x1 - b * p1;
    Ok(FitResult {
        e_inf: 0.0,
        estimate: x / 2.0,
        correction: b,
        sizes: gaps.iter().map(|g| g.0).collect(),
        residual: 0.0,
    })
}

/// Closed-form exponents of the staggered model at one γ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentFormulas {
    pub c_tw: f64,
    pub h_h: f64,
    pub phi0: f64,
    g: f64,
    e0: f64,
}

impl ExponentFormulas {
    /// k-leg exponent h_k.
    pub fn h_k(&self, k: u32) -> f64 {
        let k = k as f64;
        let extra = if (k as u32) % 4 == 2 { 0.125 } else { 0.0 };
        self.g * k * k / 16.0 + extra - self.e0 * self.e0 / (4.0 * self.g)
    }

    pub fn delta1(&self, phi: f64) -> f64 {
        (phi / PI).powi(2) / (4.0 * self.g)
    }

    pub fn delta2(&self, phi: f64) -> f64 {
        (phi / PI - 0.5).powi(2) / (4.0 * self.g) + 0.125
    }

    pub fn delta3(&self, phi: f64) -> f64 {
        (1.0 - phi / PI).powi(2) / (4.0 * self.g)
    }

    /// Index (1, 2 or 3) of the lowest of Δ1, Δ2, Δ3 at φ ∈ [0, π].
    pub fn lowest_branch(&self, phi: f64) -> usize {
        let d = [self.delta1(phi), self.delta2(phi), self.delta3(phi)];
        (0..3).min_by(|&a, &b| d[a].total_cmp(&d[b])).map(|i| i + 1).unwrap()
    }
}

pub fn exponent_formulas(params: &ModelParams) -> ExponentFormulas {
    let (g, e0) = (params.g, params.e0);
    ExponentFormulas {
        c_tw: 2.0 - 6.0 * e0 * e0 / g,
        h_h: 0.125 - e0 * e0 / (4.0 * g),
        phi0: PI * (1.0 + 2.0 * g) / 4.0,
        g,
        e0,
    }
}

/// Ground-state energies E0(N) of the twisted Sz = 0 sector.
pub fn ground_state_energies(params: &ModelParams, sizes: &[usize], phi: f64) -> Result<Vec<(usize, f64)>> {
    sizes
        .iter()
        .map(|&n| Ok((n, lowest_energy(params, n, 0, phi, None)?)))
        .collect()
}

/// Gaps of the k-leg sector (Sz = k/2, untwisted) above the φ = γ ground state.
pub fn leg_gaps(params: &ModelParams, sizes: &[usize], k: u32) -> Result<Vec<(usize, f64)>> {
    if k == 0 || !k.is_multiple_of(2) {
        return Err(invalid("k", "leg number must be even and positive"));
    }
    sizes
        .iter()
        .map(|&n| {
            let e0 = lowest_energy(params, n, 0, params.gamma, None)?;
            let ek = lowest_energy(params, n, (k / 2) as i32, 0.0, None)?;
            Ok((n, ek - e0))
        })
        .collect()
}
