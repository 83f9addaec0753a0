//! Gamma-function factors of 1 + Ĵ^{(±)}.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::operator::C64;
use crate::special::ln_gamma;
use crate::tl_core::ModelParams;

/// G±(ω), H±(ω) at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WienerHopf {
    pub g_plus: C64,
    pub g_minus: C64,
    pub h_plus: C64,
    pub h_minus: C64,
}

fn near_pole(z: C64) -> bool {
    z.re <= 0.5 && (z.re - z.re.round()).abs() < 1e-8 && z.im.abs() < 1e-8
}

fn g_plus(w: C64, params: &ModelParams) -> Result<C64> {
    let i = C64::new(0.0, 1.0);
    let a = 0.5 - params.gamma / PI;
    let b = params.gamma / PI;
    // Γ(iω/2)/Γ(a iω) = 2a Γ(1 + iω/2)/Γ(1 + a iω), regular at ω = 0.
    let num = C64::new(1.0, 0.0) + 0.5 * i * w;
    if near_pole(num) {
        return Err(Error::Singular(format!("G+ has a pole near ω = {w}")));
    }
    let pref = (2.0 * PI * PI / (PI - 2.0 * params.gamma)).sqrt() * 2.0 * a;
    let l = ln_gamma(num) - ln_gamma(C64::new(1.0, 0.0) + a * i * w) - ln_gamma(C64::new(0.5, 0.0) + b * i * w);
    Ok(pref * l.exp())
}

fn h_plus(w: C64, params: &ModelParams) -> Result<C64> {
    let i = C64::new(0.0, 1.0);
    let a = 0.5 - params.gamma / PI;
    let b = params.gamma / PI;
    let num = C64::new(0.5, 0.0) + 0.5 * i * w;
    if near_pole(num) {
        return Err(Error::Singular(format!("H+ has a pole near ω = {w}")));
    }
    let l = ln_gamma(num) - ln_gamma(C64::new(0.5, 0.0) + a * i * w) - ln_gamma(C64::new(0.5, 0.0) + b * i * w);
    Ok((2.0 * PI).sqrt() * l.exp())
}

pub fn wiener_hopf_factors(w: C64, params: &ModelParams) -> Result<WienerHopf> {
    Ok(WienerHopf {
        g_plus: g_plus(w, params)?,
        g_minus: g_plus(-w, params)?,
        h_plus: h_plus(w, params)?,
        h_minus: h_plus(-w, params)?,
    })
}
