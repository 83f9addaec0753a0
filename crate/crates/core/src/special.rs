//! Complex Gamma function and the Rogers dilogarithm.

use std::f64::consts::PI;

use crate::operator::C64;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln Γ(z) up to an additive multiple of 2πi.
pub fn ln_gamma(z: C64) -> C64 {
    if z.re < 0.5 {
        // Reflection: Γ(z)Γ(1−z) = π / sin(πz).
        let s = (C64::new(PI, 0.0) * z).sin();
        return C64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(C64::new(1.0, 0.0) - z);
    }
    let z = z - 1.0;
    let mut a = C64::new(LANCZOS[0], 0.0);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    C64::new(0.5 * (2.0 * PI).ln(), 0.0) + (z + 0.5) * t.ln() - t + a.ln()
}

pub fn gamma(z: C64) -> C64 {
    ln_gamma(z).exp()
}

/// Li₂(x) for real x ≤ 1.
pub fn dilog(x: f64) -> f64 {
    assert!(x <= 1.0, "dilogarithm evaluated above the branch point");
    if x == 1.0 {
        return PI * PI / 6.0;
    }
    if x < -1.0 {
        // Li₂(x) = −π²/6 − ½ ln²(−x) − Li₂(1/x)
        let l = (-x).ln();
        return -PI * PI / 6.0 - 0.5 * l * l - dilog(1.0 / x);
    }
    if x > 0.5 {
        // Li₂(x) = π²/6 − ln x ln(1−x) − Li₂(1−x)
        return PI * PI / 6.0 - x.ln() * (1.0 - x).ln() - dilog(1.0 - x);
    }
    if x < -0.5 {
        // Li₂(x) + Li₂(−x) = ½ Li₂(x²)
        return 0.5 * dilog(x * x) - dilog(-x);
    }
    let mut term = x;
    let mut sum = 0.0f64;
    let mut k = 1.0;
    while term.abs() > 1e-18 * sum.abs().max(1e-300) && k < 400.0 {
        sum += term / (k * k);
        k += 1.0;
        term *= x;
    }
    sum
}

/// Rogers dilogarithm L(x) = Li₂(x) + ½ ln x ln(1−x), for 0 ≤ x ≤ 1.
pub fn rogers_dilog(x: f64) -> f64 {
    assert!((0.0..=1.0).contains(&x), "Rogers dilogarithm needs 0 ≤ x ≤ 1");
    if x == 0.0 {
        return 0.0;
    }
    if x == 1.0 {
        return PI * PI / 6.0;
    }
    dilog(x) + 0.5 * x.ln() * (1.0 - x).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_at_integers_and_half() {
        let mut f = 1.0;
        for n in 1..15 {
            let g = gamma(C64::new(n as f64, 0.0));
            assert!((g.re - f).abs() < 1e-13 * f, "Γ({n})");
            assert!(g.im.abs() < 1e-13 * f);
            f *= n as f64;
        }
        assert!((gamma(C64::new(0.5, 0.0)).re - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(C64::new(-0.5, 0.0)).re + 2.0 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn gamma_modulus_on_imaginary_axis() {
        // |Γ(iy)|² = π / (y sinh πy), |Γ(½ + iy)|² = π / cosh πy
        for y in [0.1, 0.7, 2.0, 6.5] {
            let a = gamma(C64::new(0.0, y)).norm_sqr();
            assert!((a - PI / (y * (PI * y).sinh())).abs() < 1e-12 * a);
            let b = gamma(C64::new(0.5, y)).norm_sqr();
            assert!((b - PI / (PI * y).cosh()).abs() < 1e-12 * b);
        }
    }

    #[test]
    fn gamma_recurrence() {
        let z = C64::new(0.3, 1.7);
        let lhs = gamma(z + 1.0);
        let rhs = z * gamma(z);
        assert!((lhs - rhs).norm() < 1e-13 * lhs.norm());
    }

    #[test]
    fn dilog_special_values() {
        let ln2 = 2f64.ln();
        assert!((dilog(0.5) - (PI * PI / 12.0 - 0.5 * ln2 * ln2)).abs() < 1e-15);
        assert!((dilog(-1.0) + PI * PI / 12.0).abs() < 1e-14);
        assert!((dilog(1.0) - PI * PI / 6.0).abs() < 1e-15);
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        assert!((dilog(phi) - (PI * PI / 10.0 - phi.ln().powi(2))).abs() < 1e-14);
    }

    #[test]
    fn rogers_reflection() {
        for x in [0.1, 0.3, 0.5, 0.77] {
            assert!((rogers_dilog(x) + rogers_dilog(1.0 - x) - PI * PI / 6.0).abs() < 1e-14);
        }
    }
}
