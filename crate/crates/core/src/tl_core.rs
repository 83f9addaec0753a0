//! Temperley-Lieb generators in the spin-1/2 and RSOS representations.
//!
//! Site indices in the public API are 1-based and periodic (site `2N + 1` is
//! site 1). Spin configurations are stored as bit masks with site 1 in the
//! most significant position and `1 = ↑`, so ascending integer order is the
//! lexicographic order on bitstrings.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::operator::{Basis, SectorOperator, SparseMatrix, C64};

/// The anisotropy γ and derived constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    pub gamma: f64,
    /// Loop weight 2cosγ.
    pub sqrt_q: f64,
    pub q: f64,
    /// π/γ.
    pub t: f64,
    /// (π − 2γ)/(2π).
    pub g: f64,
    /// γ/π.
    pub e0: f64,
    /// Fermi velocity π sin2γ/(2γ).
    pub v: f64,
}

pub fn build_params(gamma: f64) -> Result<ModelParams> {
    if !gamma.is_finite() || gamma <= 0.0 || gamma >= FRAC_PI_2 {
        return Err(invalid(
            "gamma",
            format!("must lie strictly inside (0, π/2), got {gamma}"),
        ));
    }
    let sqrt_q = 2.0 * gamma.cos();
    Ok(ModelParams {
        gamma,
        sqrt_q,
        q: sqrt_q * sqrt_q,
        t: PI / gamma,
        g: (PI - 2.0 * gamma) / (2.0 * PI),
        e0: gamma / PI,
        v: PI * (2.0 * gamma).sin() / (2.0 * gamma),
    })
}

impl ModelParams {
    pub fn new(gamma: f64) -> Result<Self> {
        build_params(gamma)
    }

    /// Parameters from t = π/γ (requires t > 2).
    pub fn from_t(t: f64) -> Result<Self> {
        if !(t > 2.0) || !t.is_finite() {
            return Err(invalid("t", format!("must be finite and > 2, got {t}")));
        }
        build_params(PI / t)
    }

    /// Parameters from the Potts number Q = 4cos²γ, 0 < Q < 4.
    pub fn from_q(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 4.0) {
            return Err(invalid("Q", format!("must lie in (0, 4), got {q}")));
        }
        build_params((0.5 * q.sqrt()).acos())
    }
}

/// Fixed-magnetisation sector of 2N spins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinBasis {
    sites: usize,
    sz: i32,
    states: Vec<u64>,
}

impl SpinBasis {
    /// All configurations of `sites` spins with Sz = (#↑ − #↓)/2 = `sz`.
    pub fn new(sites: usize, sz: i32) -> Result<Self> {
        if sites == 0 || sites > 62 || !sites.is_multiple_of(2) {
            return Err(invalid("sites", format!("need an even count in 2..=62, got {sites}")));
        }
        let half = (sites / 2) as i64;
        let up = half + sz as i64;
        let mut states = Vec::new();
        if (0..=sites as i64).contains(&up) {
            let k = up as u32;
            if k == 0 {
                states.push(0);
            } else {
                // Gosper's hack enumerates k-subsets in increasing order.
                let limit = 1u64 << sites;
                let mut s: u64 = (1u64 << k) - 1;
                while s < limit {
                    states.push(s);
                    let c = s & s.wrapping_neg();
                    let r = s + c;
                    s = (((r ^ s) >> 2) / c) | r;
                }
            }
        }
        Ok(Self { sites, sz, states })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn sz(&self) -> i32 {
        self.sz
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn index_of(&self, state: u64) -> Option<usize> {
        self.states.binary_search(&state).ok()
    }

    /// Bit mask of 1-based site `j` (periodic).
    pub fn mask(&self, j: usize) -> u64 {
        let j0 = (j + self.sites - 1) % self.sites;
        1u64 << (self.sites - 1 - j0)
    }

    /// +1 for ↑, −1 for ↓ at 1-based site `j`.
    pub fn sigma_z(&self, state: u64, j: usize) -> f64 {
        if state & self.mask(j) != 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Moves the content of site j to site j + `shift` (periodically).
    pub fn translate(&self, state: u64, shift: usize) -> u64 {
        let l = self.sites;
        let s = shift % l;
        if s == 0 {
            return state;
        }
        let full = (1u64 << l) - 1;
        ((state >> s) | (state << (l - s))) & full
    }

    /// Operator whose column for basis state `s` is `f(s)` (target state, amplitude).
    pub fn operator_from_fn<F>(self: &Arc<Self>, mut f: F) -> SectorOperator
    where
        F: FnMut(u64) -> Vec<(u64, C64)>,
    {
        let mut trip = Vec::new();
        for (col, &s) in self.states.iter().enumerate() {
            for (t, amp) in f(s) {
                let row = self
                    .index_of(t)
                    .expect("local operator left the magnetisation sector");
                trip.push((row, col, amp));
            }
        }
        SectorOperator::new(
            Basis::Spin(self.clone()),
            SparseMatrix::from_triplets(self.len(), trip),
        )
    }
}

/// Periodic RSOS height paths on 2N sites.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsosBasis {
    p: usize,
    sites: usize,
    heights: Vec<Vec<u8>>,
}

impl RsosBasis {
    pub fn new(sites: usize, p: usize) -> Result<Self> {
        if p < 3 {
            return Err(invalid("p", format!("height cutoff must be at least 3, got {p}")));
        }
        if p > 250 {
            return Err(invalid("p", "height cutoff too large"));
        }
        if sites < 2 || !sites.is_multiple_of(2) {
            return Err(invalid("sites", format!("need an even count ≥ 2, got {sites}")));
        }
        let mut heights = Vec::new();
        let mut path = vec![0u8; sites];
        for h1 in 1..=p as u8 {
            path[0] = h1;
            Self::extend(&mut path, 1, p as u8, &mut heights);
        }
        Ok(Self { p, sites, heights })
    }

    fn extend(path: &mut Vec<u8>, k: usize, p: u8, out: &mut Vec<Vec<u8>>) {
        if k == path.len() {
            if path[k - 1].abs_diff(path[0]) == 1 {
                out.push(path.clone());
            }
            return;
        }
        let prev = path[k - 1];
        for h in [prev.wrapping_sub(1), prev + 1] {
            if (1..=p).contains(&h) {
                path[k] = h;
                Self::extend(path, k + 1, p, out);
            }
        }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn len(&self) -> usize {
        self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heights.is_empty()
    }

    pub fn heights(&self) -> &[Vec<u8>] {
        &self.heights
    }

    pub fn index_of(&self, path: &[u8]) -> Option<usize> {
        self.heights
            .binary_search_by(|h| h.as_slice().cmp(path))
            .ok()
    }

    /// Quantum dimension S(h) = sin(πh/(p+1)).
    pub fn s(&self, h: u8) -> f64 {
        (PI * h as f64 / (self.p as f64 + 1.0)).sin()
    }

    /// Loop weight 2cos(π/(p+1)).
    pub fn sqrt_q(&self) -> f64 {
        2.0 * (PI / (self.p as f64 + 1.0)).cos()
    }
}

fn check_site(j: usize, sites: usize) -> Result<()> {
    if j == 0 || j > sites {
        return Err(invalid("j", format!("site index must be in 1..={sites}, got {j}")));
    }
    Ok(())
}

/// Spin-representation generator e_j on sites (j, j+1).
pub fn build_e_spin(j: usize, basis: &Arc<SpinBasis>, params: &ModelParams) -> Result<SectorOperator> {
    build_e_spin_twisted(j, basis, params, 0.0)
}

/// e_j with the hopping terms dressed by a bond phase: the term raising site j
/// and lowering site j+1 picks up e^{iθ}, its conjugate e^{−iθ}.
pub fn build_e_spin_twisted(
    j: usize,
    basis: &Arc<SpinBasis>,
    params: &ModelParams,
    theta: f64,
) -> Result<SectorOperator> {
    check_site(j, basis.sites())?;
    if basis.is_empty() {
        return Err(Error::EmptySector(format!(
            "Sz = {} on {} sites",
            basis.sz(),
            basis.sites()
        )));
    }
    let ma = basis.mask(j);
    let mb = basis.mask(j + 1);
    let gamma = params.gamma;
    let hop_up = -C64::from_polar(1.0, theta);
    let hop_down = -C64::from_polar(1.0, -theta);
    Ok(basis.operator_from_fn(|s| {
        let a = s & ma != 0;
        let b = s & mb != 0;
        if a == b {
            return Vec::new();
        }
        let flipped = s ^ ma ^ mb;
        // ½(1 − σz σz) e^{iγσz_{j+1}} is e^{−iγ} on ↑↓ and e^{iγ} on ↓↑.
        if a {
            vec![(s, C64::from_polar(1.0, -gamma)), (flipped, hop_down)]
        } else {
            vec![(s, C64::from_polar(1.0, gamma)), (flipped, hop_up)]
        }
    }))
}

/// All 2N spin generators e_1..e_2N.
pub fn spin_generators(basis: &Arc<SpinBasis>, params: &ModelParams) -> Result<Vec<SectorOperator>> {
    (1..=basis.sites()).map(|j| build_e_spin(j, basis, params)).collect()
}

/// RSOS generator e_j acting on height h_j.
pub fn build_e_rsos(j: usize, basis: &Arc<RsosBasis>) -> Result<SectorOperator> {
    let l = basis.sites();
    check_site(j, l)?;
    let i = j - 1;
    let left = (i + l - 1) % l;
    let right = (i + 1) % l;
    let mut trip = Vec::new();
    for (col, path) in basis.heights().iter().enumerate() {
        if path[left] != path[right] {
            continue;
        }
        let hr = path[right];
        let mut target = path.clone();
        for hp in [hr.wrapping_sub(1), hr + 1] {
            if !(1..=basis.p() as u8).contains(&hp) {
                continue;
            }
            target[i] = hp;
            let row = basis.index_of(&target).expect("RSOS move left the basis");
            let amp = (basis.s(path[i]) * basis.s(hp)).sqrt() / basis.s(hr);
            trip.push((row, col, C64::new(amp, 0.0)));
        }
    }
    Ok(SectorOperator::new(
        Basis::Rsos(basis.clone()),
        SparseMatrix::from_triplets(basis.len(), trip),
    ))
}

pub fn rsos_generators(basis: &Arc<RsosBasis>) -> Result<Vec<SectorOperator>> {
    (1..=basis.sites()).map(|j| build_e_rsos(j, basis)).collect()
}

/// Largest residuals of the three TL relations over a cyclic list of generators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TlResiduals {
    /// max ‖e_j² − √Q e_j‖
    pub quadratic: f64,
    /// max ‖e_j e_{j±1} e_j − e_j‖
    pub cubic: f64,
    /// max ‖[e_j, e_k]‖ over cyclic distance > 1
    pub commuting: f64,
}

impl TlResiduals {
    pub fn max(&self) -> f64 {
        self.quadratic.max(self.cubic).max(self.commuting)
    }
}

pub fn check_tl_relations(ops: &[SectorOperator], sqrt_q: f64) -> TlResiduals {
    let n = ops.len();
    let mut r = TlResiduals {
        quadratic: 0.0,
        cubic: 0.0,
        commuting: 0.0,
    };
    for j in 0..n {
        let e = &ops[j];
        let sq = e * e;
        r.quadratic = r.quadratic.max(SectorOperator::lincomb(1.0, &sq, -sqrt_q, e).norm_bound());
        if n >= 3 {
            for nb in [(j + 1) % n, (j + n - 1) % n] {
                let cub = &(e * &ops[nb]) * e;
                r.cubic = r.cubic.max(cub.distance(e));
            }
        }
        for k in j + 1..n {
            let d = (k - j).min(n - (k - j));
            if d > 1 {
                r.commuting = r.commuting.max(e.commutator(&ops[k]).norm_bound());
            }
        }
    }
    r
}

/// Total Sz as a diagonal operator (constant on a sector).
pub fn sz_value(basis: &SpinBasis) -> f64 {
    basis.sz() as f64
}

/// Binomial coefficient, exact for the sizes used here.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (1..=k).fold(1u64, |acc, i| acc * (n - k + i) / i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn params_at_quarter_pi() {
        let p = build_params(PI / 4.0).unwrap();
        assert!((p.q - 2.0).abs() < 1e-14);
        assert!((p.g - 0.25).abs() < 1e-15);
        assert!((p.e0 - 0.25).abs() < 1e-15);
        assert!((p.t - 4.0).abs() < 1e-14);
    }

    #[test]
    fn params_at_third_pi() {
        let p = build_params(PI / 3.0).unwrap();
        assert!((p.q - 1.0).abs() < 1e-14);
        assert!((p.g - 1.0 / 6.0).abs() < 1e-15);
        assert!((p.e0 - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn params_reject_boundary() {
        assert!(build_params(FRAC_PI_2).is_err());
        assert!(build_params(0.0).is_err());
        assert!(build_params(f64::NAN).is_err());
        let p = build_params(FRAC_PI_2 - 1e-9).unwrap();
        assert!(p.q < 1e-16 && p.g > 0.0);
    }

    proptest! {
        #[test]
        fn params_invariants(gamma in 1e-3f64..(FRAC_PI_2 - 1e-3)) {
            let p = build_params(gamma).unwrap();
            prop_assert!(p.g > 0.0 && p.g < 0.5);
            prop_assert!(p.sqrt_q > 0.0 && p.sqrt_q < 2.0);
            prop_assert!((p.e0 - (0.5 - p.g)).abs() < 1e-15);
            let lhs = 6.0 * p.e0 * p.e0 / p.g;
            let rhs = 12.0 / (p.t * (p.t - 2.0));
            prop_assert!((lhs - rhs).abs() < 1e-12 * rhs.max(1.0));
        }
    }

    #[test]
    fn spin_basis_counts_and_order() {
        for l in [2usize, 4, 6, 8] {
            for sz in -(l as i32 / 2)..=(l as i32 / 2) {
                let b = SpinBasis::new(l, sz).unwrap();
                assert_eq!(b.len() as u64, binomial(l as u64, (l as i64 / 2 + sz as i64) as u64));
                assert!(b.states().windows(2).all(|w| w[0] < w[1]));
            }
        }
        assert!(SpinBasis::new(4, 3).unwrap().is_empty());
    }

    #[test]
    fn two_site_trace_is_loop_weight() {
        let p = build_params(0.7).unwrap();
        let b = Arc::new(SpinBasis::new(2, 0).unwrap());
        // On two periodic sites e_1 acts on bond (1,2); compute directly.
        let e = build_e_spin(1, &b, &p).unwrap();
        assert!((e.trace() - C64::new(p.sqrt_q, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn empty_sector_is_flagged() {
        let p = build_params(0.7).unwrap();
        let b = Arc::new(SpinBasis::new(4, 3).unwrap());
        assert!(matches!(build_e_spin(1, &b, &p), Err(Error::EmptySector(_))));
    }

    #[test]
    fn spin_generators_satisfy_tl() {
        let p = build_params(PI / 5.0).unwrap();
        for sz in [0, 1, 2] {
            let b = Arc::new(SpinBasis::new(8, sz).unwrap());
            let ops = spin_generators(&b, &p).unwrap();
            let r = check_tl_relations(&ops, p.sqrt_q);
            assert!(r.max() < 1e-12, "{r:?}");
        }
    }

    #[test]
    fn normalised_generator_is_projector() {
        let p = build_params(0.9).unwrap();
        let b = Arc::new(SpinBasis::new(6, 0).unwrap());
        for j in 1..=6 {
            let e = build_e_spin(j, &b, &p).unwrap().scale(1.0 / p.sqrt_q);
            assert!((&e * &e).distance(&e) < 1e-12);
        }
    }

    #[test]
    fn small_gamma_generator_is_real_singlet_projector() {
        let p = build_params(1e-9).unwrap();
        let b = Arc::new(SpinBasis::new(4, 0).unwrap());
        let e = build_e_spin(2, &b, &p).unwrap();
        assert!(e.matrix.triplets().all(|(_, _, v)| v.im.abs() < 1e-8));
        // Two singlet states on bond (2,3) times the complementary pair on sites 1, 4.
        assert!((e.trace().re - 2.0 * 2.0).abs() < 1e-8);
    }

    #[test]
    fn wrong_loop_weight_is_detected() {
        let p = build_params(PI / 5.0).unwrap();
        let b = Arc::new(SpinBasis::new(4, 0).unwrap());
        let ops = spin_generators(&b, &p).unwrap();
        let r = check_tl_relations(&ops, p.sqrt_q + 0.1);
        assert!(r.quadratic > 0.05);
    }

    #[test]
    fn rsos_rejects_small_cutoff() {
        assert!(RsosBasis::new(4, 2).is_err());
    }

    #[test]
    fn rsos_generators_satisfy_tl() {
        for (p, l) in [(3usize, 8usize), (4, 8), (5, 6)] {
            let b = Arc::new(RsosBasis::new(l, p).unwrap());
            let ops = rsos_generators(&b).unwrap();
            let r = check_tl_relations(&ops, b.sqrt_q());
            assert!(r.max() < 1e-12, "p = {p}: {r:?}");
        }
        let b = RsosBasis::new(4, 3).unwrap();
        assert!((b.sqrt_q() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rsos_generator_symmetric_psd() {
        let b = Arc::new(RsosBasis::new(4, 4).unwrap());
        for j in 1..=4 {
            let e = build_e_rsos(j, &b).unwrap();
            let d = e.to_dense();
            assert!((d.clone() - d.transpose()).norm() < 1e-14);
            let re = d.map(|z| z.re);
            let ev = re.symmetric_eigen().eigenvalues;
            assert!(ev.iter().all(|&x| x > -1e-12));
        }
    }

    #[test]
    fn rsos_annihilates_unequal_neighbours() {
        let b = Arc::new(RsosBasis::new(6, 4).unwrap());
        let e = build_e_rsos(3, &b).unwrap();
        for (col, h) in b.heights().iter().enumerate() {
            if h[1] != h[3] {
                assert!((0..b.len()).all(|r| e.matrix.get(r, col).norm() == 0.0));
            }
        }
    }

    #[test]
    fn rsos_paths_are_closed() {
        let b = RsosBasis::new(8, 5).unwrap();
        for h in b.heights() {
            for k in 0..8 {
                assert_eq!(h[k].abs_diff(h[(k + 1) % 8]), 1);
            }
        }
    }

    #[test]
    fn rsos_count_is_adjacency_trace() {
        let p = 4;
        let a = nalgebra::DMatrix::<f64>::from_fn(p, p, |i, j| if i.abs_diff(j) == 1 { 1.0 } else { 0.0 });
        for l in [2usize, 4, 6, 8, 10] {
            let tr = a.pow(l as u32).trace();
            assert_eq!(RsosBasis::new(l, p).unwrap().len() as f64, tr.round());
        }
    }

    #[test]
    fn translation_is_cyclic() {
        let b = SpinBasis::new(6, 0).unwrap();
        for &s in b.states() {
            assert_eq!(b.translate(b.translate(s, 2), 4), s);
            assert_eq!(b.sigma_z(b.translate(s, 1), 2), b.sigma_z(s, 1));
            assert_eq!(b.sigma_z(b.translate(s, 1), 1), b.sigma_z(s, 6));
        }
    }
}
