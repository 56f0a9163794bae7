//! Special functions not covered by `statrs`: the modified Bessel function
//! of the second kind K₁ and a few normal-distribution helpers.

use libm::erfc;
use statrs::function::erf::erfc_inv;
use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Series/trapezoid switch point for K₁.
const K1_SERIES_MAX: f64 = 2.0;

/// Exponentially scaled modified Bessel function `exp(x) * K₁(x)` for `x > 0`.
///
/// Uses the ascending series for small arguments and the trapezoidal rule on
/// the integral representation `∫₀^∞ exp(-x (cosh u - 1)) cosh u du`
/// otherwise. The integrand is analytic in a strip, so the trapezoidal rule
/// converges geometrically in the step size.
pub fn bessel_k1e(x: f64) -> f64 {
    assert!(x > 0.0, "bessel_k1e requires a positive argument, got {x}");
    if x <= K1_SERIES_MAX {
        x.exp() * k1_series(x)
    } else {
        k1e_trapezoid(x)
    }
}

/// Modified Bessel function of the second kind of order one.
pub fn bessel_k1(x: f64) -> f64 {
    if x <= K1_SERIES_MAX {
        k1_series(x)
    } else {
        k1e_trapezoid(x) * (-x).exp()
    }
}

fn k1_series(x: f64) -> f64 {
    // K₁(x) = 1/x + ln(x/2) I₁(x) - (x/4) Σ (ψ(k+1)+ψ(k+2)) (x²/4)^k / (k!(k+1)!)
    let y = 0.25 * x * x;
    let mut term = 1.0; // (x²/4)^k / (k!(k+1)!)
    let mut psi_k1 = -EULER_GAMMA; // ψ(k+1)
    let mut i1_sum = 0.0;
    let mut psi_sum = 0.0;
    for k in 0..60 {
        let kf = k as f64;
        let psi_k2 = psi_k1 + 1.0 / (kf + 1.0);
        i1_sum += term;
        psi_sum += (psi_k1 + psi_k2) * term;
        if term < 1e-18 * i1_sum {
            break;
        }
        psi_k1 = psi_k2;
        term *= y / ((kf + 1.0) * (kf + 2.0));
    }
    let i1 = 0.5 * x * i1_sum;
    1.0 / x + (0.5 * x).ln() * i1 - 0.25 * x * psi_sum
}

fn k1e_trapezoid(x: f64) -> f64 {
    let h = (0.7 / x.sqrt()).min(0.25);
    let mut sum = 0.5;
    let mut k = 1;
    loop {
        let u = k as f64 * h;
        let c = u.cosh();
        let e = x * (c - 1.0);
        if e > 45.0 {
            break;
        }
        sum += (-e).exp() * c;
        k += 1;
    }
    h * sum
}

/// Standard normal density.
pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Standard normal distribution function.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * erfc(-x * FRAC_1_SQRT_2)
}

/// Standard normal quantile for probability `p` with complement `q = 1 - p`.
///
/// Whichever of the two is smaller drives the computation so that both tails
/// keep full relative precision.
pub fn norm_quantile(p: f64, q: f64) -> f64 {
    // Work in the smaller tail, z <= 0, then polish with one Halley step.
    let (tail, sign) = if p <= q { (p, -1.0) } else { (q, 1.0) };
    let mut z = -SQRT_2 * erfc_inv(2.0 * tail);
    if z.is_finite() {
        let r = (norm_cdf(z) - tail) / norm_pdf(z);
        if r.is_finite() {
            z -= r / (1.0 + 0.5 * z * r);
        }
    }
    sign * -z
}
