//! The four experiments.

use std::f64::consts::PI;

use stagger_core::bethe::xxz::solve_xxz;
use stagger_core::bethe::{energy, solve_bae, BetheState};
use stagger_core::cft_partition::{z_ising, z_potts, z_twisted, z_untwisted, z_untwisted_both, TorusPoint};
use stagger_core::spectra::{
    central_charge_fit, exponent_fit, exponent_formulas, leg_gaps, momentum_spectra, DENSE_LIMIT,
};
use stagger_core::tba_massive::{
    c_uv_formula, fork_central_charge, free_energy_identity, solve_tba, twisted_sg_fork, uv_dilog_check, RapidityGrid,
    TbaSystem,
};
use stagger_core::tl_core::binomial;
use stagger_core::{Error, C64};

use crate::config::{PartitionFn, RunConfig};
use crate::output::{Cell, Check, Report};
use crate::CliError;

pub const BAE_TOL: f64 = 1e-13;
pub const ED_TOL: f64 = 1e-8;
pub const XXZ_TOL: f64 = 1e-10;
pub const C_FIT_REL_TOL: f64 = 0.10;
pub const H_FIT_REL_TOL: f64 = 0.15;
pub const MODULAR_TOL: f64 = 1e-8;
pub const ISING_TOL: f64 = 1e-10;
pub const POTTS_Q1_TOL: f64 = 1e-8;
pub const TBA_C_TOL: f64 = 1e-3;
pub const FORK_REL_TOL: f64 = 1e-6;
pub const FREE_IDENTITY_TOL: f64 = 1e-10;

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. } | Error::EmptySector(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

/// Dense storage for one momentum block: the matrix, LAPACK's copy and its workspace.
fn block_memory_bytes(block: usize) -> f64 {
    3.0 * 16.0 * (block as f64).powi(2)
}

fn block_estimate(n: usize, sz: i32) -> Result<usize, CliError> {
    if sz.unsigned_abs() as usize > n {
        return Err(CliError::Usage(format!("Sz = {sz} is impossible on N = {n} blocks")));
    }
    let l = 2 * n as u64;
    let dim = binomial(l, (n as i64 + sz as i64) as u64);
    Ok((dim as usize).div_ceil(2 * n))
}

fn check_size(n: usize, sz: i32) -> Result<usize, CliError> {
    let b = block_estimate(n, sz)?;
    if b > DENSE_LIMIT {
        return Err(CliError::Usage(format!(
            "N = {n}, Sz = {sz}: momentum blocks of dimension about {b} need about {:.1} GB of memory \
             (limit: dimension {DENSE_LIMIT}, about {:.1} GB)",
            block_memory_bytes(b) / 1e9,
            block_memory_bytes(DENSE_LIMIT) / 1e9
        )));
    }
    Ok(b)
}

/// Folds φ into [0, π], where the three dimension branches are defined.
fn fold_twist(phi: f64) -> f64 {
    let p = phi.rem_euclid(2.0 * PI);
    if p > PI {
        2.0 * PI - p
    } else {
        p
    }
}

pub fn spectrum(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = &cfg.params;
    if let Some(&n) = cfg.sizes.iter().find(|&&n| n % 2 != 0) {
        return Err(CliError::Usage(format!("sizes must be even, got N = {n}")));
    }
    if cfg.sector.is_empty() {
        return Err(CliError::Usage("the sector list is empty".into()));
    }
    for &n in &cfg.sizes {
        for &sz in &cfg.sector {
            check_size(n, sz)?;
        }
    }
    let mut rep = Report::new(vec!["t", "gamma", "N", "sz", "phi", "momentum", "level", "re", "im"]);
    rep.tolerances = vec![("c_fit_relative", C_FIT_REL_TOL), ("h_fit_relative", H_FIT_REL_TOL)];
    let mut ground = Vec::new();
    for &n in &cfg.sizes {
        for &sz in &cfg.sector {
            let mut levels: Vec<(usize, C64)> = momentum_spectra(p, n, sz, cfg.twist, None)?
                .into_iter()
                .flat_map(|t| {
                    let m = t.momentum.unwrap_or(0);
                    t.eigenvalues.into_iter().map(move |e| (m, e))
                })
                .collect();
            levels.sort_by(|a, b| a.1.re.total_cmp(&b.1.re).then(a.0.cmp(&b.0)));
            if sz == 0 {
                ground.push((n, levels[0].1.re));
            }
            for (k, (m, e)) in levels.iter().take(cfg.levels).enumerate() {
                rep.push(vec![
                    p.t.into(),
                    p.gamma.into(),
                    n.into(),
                    sz.into(),
                    cfg.twist.into(),
                    (*m).into(),
                    k.into(),
                    e.re.into(),
                    e.im.into(),
                ]);
            }
        }
    }
    let f = exponent_formulas(p);
    let phi = fold_twist(cfg.twist);
    let dmin = f.delta1(phi).min(f.delta2(phi)).min(f.delta3(phi));
    if ground.len() >= 3 {
        let fit = central_charge_fit(&ground[ground.len() - 3..], p.v)?;
        let expect = 2.0 - 24.0 * dmin;
        let sizes: Vec<String> = fit.sizes.iter().map(|n| n.to_string()).collect();
        rep.checks.push(Check::relative(
            format!("c_eff fit (N = {}) vs 2 - 24 min(D1, D2, D3)", sizes.join(" ")),
            fit.estimate,
            expect,
            C_FIT_REL_TOL,
        ));
        rep.notes.push(format!("closed-form c_tw = {}", f.c_tw));
    } else {
        rep.notes.push("central-charge fit needs three sizes with Sz = 0".into());
    }
    if !cfg.legs.is_empty() {
        if cfg.sizes.len() < 2 {
            return Err(CliError::Usage("k-leg fits need at least two sizes".into()));
        }
        let last = &cfg.sizes[cfg.sizes.len() - 2..];
        for &k in &cfg.legs {
            if k == 0 || k % 2 != 0 {
                return Err(CliError::Usage(format!("leg number must be even and positive, got {k}")));
            }
            for &n in last {
                check_size(n, (k / 2) as i32)?;
            }
            let gaps = leg_gaps(p, last, k)?;
            let fit = exponent_fit(&gaps, p.v)?;
            rep.checks.push(Check::relative(
                format!("2h_{k} fit (N = {} {}) vs closed form", last[0], last[1]),
                2.0 * fit.estimate,
                2.0 * f.h_k(k),
                H_FIT_REL_TOL,
            ));
        }
    }
    Ok(rep)
}

fn bethe_state(cfg: &RunConfig, n: usize) -> Result<BetheState, CliError> {
    let phi = cfg.twist;
    Ok(match (&cfg.integers, cfg.sector.as_slice()) {
        (Some((i0, i1)), _) => BetheState::new(n, i0.clone(), i1.clone(), phi)?,
        (None, []) => BetheState::ground_state(n, phi)?,
        (None, [r]) if *r >= 0 => BetheState::filled(n, *r as usize, *r as usize, phi)?,
        (None, [r0, r1]) if *r0 >= 0 && *r1 >= 0 => BetheState::filled(n, *r0 as usize, *r1 as usize, phi)?,
        _ => return Err(CliError::Usage("sector for bethe is `r` or `r0,r1` root counts".into())),
    })
}

pub fn bethe(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = &cfg.params;
    if cfg.integers.is_some() && cfg.sizes.len() != 1 {
        return Err(CliError::Usage("explicit integers need exactly one size".into()));
    }
    let mut rep = Report::new(vec!["N", "line", "j", "integer", "lambda"]);
    rep.tolerances = vec![("bae", BAE_TOL), ("ed", ED_TOL), ("xxz", XXZ_TOL)];
    for &n in &cfg.sizes {
        let state = bethe_state(cfg, n)?;
        if cfg.symmetric && state.i0 != state.i1 {
            return Err(CliError::Usage("--symmetric needs identical integers on both lines".into()));
        }
        let roots = solve_bae(&state, p, BAE_TOL)?;
        for (line, (ints, lams)) in [(&state.i0, &roots.lambda0), (&state.i1, &roots.lambda1)].into_iter().enumerate() {
            for (j, (i, l)) in ints.iter().zip(lams).enumerate() {
                rep.push(vec![n.into(), line.into(), j.into(), (*i).into(), (*l).into()]);
            }
        }
        let e = energy(&roots, p);
        rep.checks.push(Check::absolute(format!("N = {n}: BAE residual"), roots.residual, 0.0, 1e3 * BAE_TOL));
        let sz = state.sz();
        match block_estimate(n, sz) {
            Ok(b) if b <= DENSE_LIMIT => {
                let ed = momentum_spectra(p, n, sz, state.phi, None)?
                    .into_iter()
                    .flat_map(|t| t.eigenvalues)
                    .map(|z| z.re)
                    .min_by(|a, b| (a - e).abs().total_cmp(&(b - e).abs()))
                    .unwrap_or(f64::NAN);
                rep.checks.push(Check::absolute(format!("N = {n}: energy vs nearest ED level"), e, ed, ED_TOL));
            }
            _ => rep.notes.push(format!("N = {n}: sector too large for the ED comparison")),
        }
        rep.notes.push(format!("N = {n}: energy = {e}, Sz = {sz}, iterations = {}", roots.iterations));
        if cfg.symmetric {
            let x = solve_xxz(n, -(2.0 * p.gamma).cos(), &state.i0, BAE_TOL)?;
            let shift = n as f64 * (2.0 * p.gamma).cos();
            rep.checks.push(Check::absolute(
                format!("N = {n}: E - N cos2g vs 2 E_XXZ"),
                e - shift,
                2.0 * x.energy,
                XXZ_TOL,
            ));
            rep.notes.push(format!("N = {n}: (E - N cos2g)/E_XXZ = {}", (e - shift) / x.energy));
        }
    }
    Ok(rep)
}

pub fn partition(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = &cfg.params;
    let g = p.g;
    let eval = |tp: &TorusPoint| -> Result<f64, CliError> {
        Ok(match cfg.function {
            PartitionFn::Untwisted => z_untwisted(g, tp)?,
            PartitionFn::Twisted => z_twisted(g, cfg.twist, tp)?,
            PartitionFn::Potts => z_potts(p.q, tp)?,
        })
    };
    let mut rep = Report::new(vec!["re_tau", "im_tau", "value"]);
    rep.tolerances = vec![("modular", MODULAR_TOL), ("ising", ISING_TOL), ("potts_q1", POTTS_Q1_TOL)];
    let (mut s_dev, mut t_dev, mut forms, mut ising) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut max_abs = 0.0f64;
    for &tau in &cfg.tau_grid {
        let tp = TorusPoint::new(tau)?;
        let z = eval(&tp)?;
        rep.push(vec![tau.re.into(), tau.im.into(), z.into()]);
        s_dev = s_dev.max((z - eval(&tp.invert()?)?).abs());
        if cfg.function != PartitionFn::Twisted {
            t_dev = t_dev.max((z - eval(&tp.shift()?)?).abs());
        }
        match cfg.function {
            PartitionFn::Untwisted => forms = forms.max(z_untwisted_both(g, &tp)?.discrepancy()),
            PartitionFn::Potts if (p.q - 2.0).abs() < 1e-12 => ising = ising.max((z - z_ising(&tp)?).abs()),
            _ => {}
        }
        max_abs = max_abs.max(z.abs());
    }
    rep.checks.push(Check::absolute("invariance under tau -> -1/tau", s_dev, 0.0, MODULAR_TOL));
    if cfg.function != PartitionFn::Twisted {
        rep.checks.push(Check::absolute("invariance under tau -> tau + 1", t_dev, 0.0, MODULAR_TOL));
    }
    match cfg.function {
        PartitionFn::Untwisted => {
            rep.checks.push(Check::absolute("Jacobi form vs Ising-sector form", forms, 0.0, ISING_TOL));
        }
        PartitionFn::Potts if (p.q - 2.0).abs() < 1e-12 => {
            rep.checks.push(Check::absolute("Q = 2: |Z_Potts - Z_Ising|", ising, 0.0, ISING_TOL));
        }
        PartitionFn::Potts if (p.q - 1.0).abs() < 1e-12 => {
            rep.checks.push(Check::absolute("Q = 1: |Z_Potts|", max_abs, 0.0, POTTS_Q1_TOL));
        }
        _ => {}
    }
    Ok(rep)
}

pub fn tba(cfg: &RunConfig) -> Result<Report, CliError> {
    let t = cfg.params.t;
    let ti = t.round();
    if (t - ti).abs() > 1e-9 || ti < 4.0 {
        return Err(CliError::Usage(format!("the TBA diagram needs an integer t >= 4, got t = {t}")));
    }
    let ti = ti as usize;
    let sys = TbaSystem::rsos(ti)?;
    // t − 3 = 2n + 1 admits the reduced fork
    let fork = (ti >= 6 && ti.is_multiple_of(2)).then_some((ti - 4) / 2);
    let mut rep = Report::new(vec!["r", "energy_r", "c_eff", "energy_sg_r"]);
    rep.tolerances = vec![
        ("tba_iteration", RapidityGrid::for_scale(1.0).tol),
        ("c_eff", TBA_C_TOL),
        ("fork_relative", FORK_REL_TOL),
        ("free_identity", FREE_IDENTITY_TOL),
    ];
    if ti == 4 {
        rep.notes.push("t = 4: the chain is a single massive node (free Majorana fermion, c = 1/2)".into());
    }
    let mut r_sorted = cfg.r_grid.clone();
    r_sorted.sort_by(f64::total_cmp);
    let mut fork_dev = 0.0f64;
    let mut free_dev = 0.0f64;
    let mut uv = None;
    let mut ir = None;
    for &r in &cfg.r_grid {
        let grid = RapidityGrid::for_scale(r);
        let s = solve_tba(&sys, r, &grid)?;
        let sg = match fork {
            Some(n) => {
                let e = twisted_sg_fork(n, r, &grid)?.energy_r;
                fork_dev = fork_dev.max((s.energy_r - 2.0 * e).abs() / s.energy_r.abs());
                Cell::Float(e)
            }
            None => Cell::Empty,
        };
        if r >= 1e-3 {
            free_dev = free_dev.max(free_energy_identity(1.0, r)?);
        }
        if r == r_sorted[0] {
            uv = Some((r, s.c_eff));
        }
        if r == r_sorted[r_sorted.len() - 1] {
            ir = Some((r, s.c_eff));
        }
        rep.push(vec![r.into(), s.energy_r.into(), s.c_eff.into(), sg]);
    }
    let dilog = uv_dilog_check(&sys)?;
    rep.checks.push(Check::absolute("stationary dilogarithm c vs 2 - 12/(t(t-2))", dilog.c, c_uv_formula(t), 1e-12));
    if let Some((r, c)) = uv.filter(|u| u.0 <= 1e-3) {
        rep.checks.push(Check::absolute(format!("c_eff(r = {r}) vs dilogarithm value"), c, dilog.c, TBA_C_TOL));
    }
    if let Some((r, c)) = ir.filter(|u| u.0 >= 10.0) {
        rep.checks.push(Check::absolute(format!("c_eff(r = {r}) vanishes"), c, 0.0, TBA_C_TOL));
    }
    if let Some(n) = fork {
        rep.checks.push(Check::absolute("E = 2 E_SG (relative, over the r grid)", fork_dev, 0.0, FORK_REL_TOL));
        rep.checks.push(Check::absolute("2 c_SG vs c_UV", 2.0 * fork_central_charge(n), c_uv_formula(t), 1e-12));
    }
    if cfg.r_grid.iter().any(|&r| r >= 1e-3) {
        rep.checks.push(Check::absolute("2E_b(mu) = E_b(2mu) + 2E_f(mu) on the r grid", free_dev, 0.0, FREE_IDENTITY_TOL));
    }
    Ok(rep)
}
