//! Trapezoid quadrature on the real line and Fourier transforms of even functions.
//!
//! For analytic integrands decaying exponentially the trapezoid rule converges
//! geometrically in the step, which is all that the kernels here require.

/// ∫_{−W}^{W} f on a uniform grid of step ≈ h.
pub fn trapezoid_line<F: FnMut(f64) -> f64>(mut f: F, h: f64, w: f64) -> f64 {
    let n = (w / h).ceil() as i64;
    let h = w / n as f64;
    let mut s = 0.5 * (f(-w) + f(w));
    for k in (1 - n)..n {
        s += f(k as f64 * h);
    }
    s * h
}

/// ∫_0^W f for an even integrand, trapezoid including the endpoint.
pub fn trapezoid_half<F: FnMut(f64) -> f64>(mut f: F, h: f64, w: f64) -> f64 {
    let n = (w / h).ceil() as i64;
    let h = w / n as f64;
    let mut s = 0.5 * (f(0.0) + f(w));
    for k in 1..n {
        s += f(k as f64 * h);
    }
    s * h
}

/// ∫_a^b f with n trapezoid panels.
pub fn trapezoid<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n.max(1);
    let h = (b - a) / n as f64;
    let mut s = 0.5 * (f(a) + f(b));
    for k in 1..n {
        s += f(a + k as f64 * h);
    }
    s * h
}

/// f(λ) = ∫ dω/(2π) e^{−iωλ} f̂(ω) for even real f̂.
pub fn inverse_fourier_even<F: FnMut(f64) -> f64>(mut fhat: F, lambda: f64, h: f64, w: f64) -> f64 {
    trapezoid_half(|om| fhat(om) * (om * lambda).cos(), h, w) / std::f64::consts::PI
}

/// f̂(ω) = ∫ dλ e^{iωλ} f(λ) for even real f.
pub fn fourier_even<F: FnMut(f64) -> f64>(mut f: F, omega: f64, h: f64, w: f64) -> f64 {
    2.0 * trapezoid_half(|x| f(x) * (omega * x).cos(), h, w)
}

/// sinh(a w)/sinh(b w) without overflow; the w → 0 limit is a/b.
pub fn sinh_ratio(a: f64, b: f64, w: f64) -> f64 {
    if w == 0.0 {
        return a / b;
    }
    let (x, y) = (a * w, b * w);
    if x.abs() < 30.0 && y.abs() < 30.0 {
        return x.sinh() / y.sinh();
    }
    let sign = x.signum() * y.signum();
    let (ax, ay) = (x.abs(), y.abs());
    sign * (ax - ay).exp() * (-(-2.0 * ax).exp_m1()) / (-(-2.0 * ay).exp_m1())
}

/// cosh(a w)/cosh(b w) without overflow.
pub fn cosh_ratio(a: f64, b: f64, w: f64) -> f64 {
    let (ax, ay) = ((a * w).abs(), (b * w).abs());
    if ax < 30.0 && ay < 30.0 {
        return (a * w).cosh() / (b * w).cosh();
    }
    (ax - ay).exp() * (1.0 + (-2.0 * ax).exp()) / (1.0 + (-2.0 * ay).exp())
}

/// sinh(a w)/cosh(b w) without overflow.
pub fn sinh_cosh_ratio(a: f64, b: f64, w: f64) -> f64 {
    let (x, ay) = (a * w, (b * w).abs());
    if x.abs() < 30.0 && ay < 30.0 {
        return x.sinh() / (b * w).cosh();
    }
    let ax = x.abs();
    x.signum() * (ax - ay).exp() * (-(-2.0 * ax).exp_m1()) / (1.0 + (-2.0 * ay).exp())
}
