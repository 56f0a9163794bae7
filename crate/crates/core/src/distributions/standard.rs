//! Standardized members of the simple families. Each works in its own
//! reference coordinate `y`; location and scale are applied by the caller.

use super::Level;
use crate::quad::Quad;
use crate::special::{norm_cdf, norm_pdf, norm_quantile};

pub mod normal {
    use super::*;

    pub fn pdf(y: f64) -> f64 {
        norm_pdf(y)
    }

    pub fn cdf(y: f64) -> f64 {
        norm_cdf(y)
    }

    pub fn sf(y: f64) -> f64 {
        norm_cdf(-y)
    }

    pub fn quantile(level: Level) -> f64 {
        norm_quantile(level.p(), level.q())
    }

    /// E(Y - t)₊
    pub fn upper(t: f64) -> f64 {
        if t < 0.0 {
            return -t + upper(-t);
        }
        if t < 1.0 {
            norm_pdf(t) - t * sf(t)
        } else {
            // φ(t) - tΦ̄(t) cancels badly in the tail; integrate Φ̄ instead.
            Quad::with_tolerances(0.0, 1e-14)
                .with_scale(1.0 / t)
                .integrate(sf, t, f64::INFINITY)
                .value
        }
    }
}

pub mod logistic {
    use super::*;

    pub fn pdf(y: f64) -> f64 {
        let e = (-y.abs()).exp();
        e / ((1.0 + e) * (1.0 + e))
    }

    pub fn cdf(y: f64) -> f64 {
        if y >= 0.0 {
            1.0 / (1.0 + (-y).exp())
        } else {
            let e = y.exp();
            e / (1.0 + e)
        }
    }

    pub fn sf(y: f64) -> f64 {
        cdf(-y)
    }

    pub fn quantile(level: Level) -> f64 {
        level.ln_p() - level.ln_q()
    }

    fn softplus(x: f64) -> f64 {
        if x > 0.0 {
            x + (-x).exp().ln_1p()
        } else {
            x.exp().ln_1p()
        }
    }

    pub fn upper(t: f64) -> f64 {
        softplus(-t)
    }
}

pub mod laplace {
    use super::*;

    pub fn pdf(y: f64) -> f64 {
        0.5 * (-y.abs()).exp()
    }

    pub fn cdf(y: f64) -> f64 {
        if y < 0.0 {
            0.5 * y.exp()
        } else {
            1.0 - 0.5 * (-y).exp()
        }
    }

    pub fn sf(y: f64) -> f64 {
        cdf(-y)
    }

    pub fn quantile(level: Level) -> f64 {
        if level.is_lower() {
            (2.0 * level.p()).ln()
        } else {
            -(2.0 * level.q()).ln()
        }
    }

    pub fn upper(t: f64) -> f64 {
        if t >= 0.0 {
            0.5 * (-t).exp()
        } else {
            -t + 0.5 * t.exp()
        }
    }
}

pub mod uniform {
    use super::*;

    pub fn pdf(y: f64) -> f64 {
        if (0.0..=1.0).contains(&y) {
            1.0
        } else {
            0.0
        }
    }

    pub fn cdf(y: f64) -> f64 {
        y.clamp(0.0, 1.0)
    }

    pub fn sf(y: f64) -> f64 {
        (1.0 - y).clamp(0.0, 1.0)
    }

    pub fn quantile(level: Level) -> f64 {
        if level.is_lower() {
            level.p()
        } else {
            1.0 - level.q()
        }
    }

    pub fn upper(t: f64) -> f64 {
        if t <= 0.0 {
            0.5 - t
        } else if t >= 1.0 {
            0.0
        } else {
            0.5 * (1.0 - t) * (1.0 - t)
        }
    }

    pub fn lower(t: f64) -> f64 {
        upper(1.0 - t)
    }
}

pub mod exponential {
    use super::*;

    pub fn pdf(y: f64) -> f64 {
        if y < 0.0 {
            0.0
        } else {
            (-y).exp()
        }
    }

    pub fn cdf(y: f64) -> f64 {
        if y <= 0.0 {
            0.0
        } else {
            -(-y).exp_m1()
        }
    }

    pub fn sf(y: f64) -> f64 {
        if y <= 0.0 {
            1.0
        } else {
            (-y).exp()
        }
    }

    pub fn quantile(level: Level) -> f64 {
        -level.ln_q()
    }

    pub fn upper(t: f64) -> f64 {
        if t <= 0.0 {
            1.0 - t
        } else {
            (-t).exp()
        }
    }

    /// E(t - Y)₊ = t - 1 + e^{-t} for t ≥ 0.
    pub fn lower(t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else if t < 0.1 {
            // Alternating series Σ_{k≥2} (-t)^k / k!
            let mut term = 0.5 * t * t;
            let mut sum: f64 = 0.0;
            let mut k = 2.0;
            while term.abs() > 1e-18 * sum.abs().max(1e-300) {
                sum += term;
                k += 1.0;
                term *= -t / k;
            }
            sum
        } else {
            t - 1.0 + (-t).exp()
        }
    }
}

/// Lomax (Pareto type II) with scale 1: `F(y) = 1 - (1 + y)^{-α}`, `y ≥ 0`.
pub mod lomax {
    use super::*;

    pub fn pdf(alpha: f64, y: f64) -> f64 {
        if y < 0.0 {
            0.0
        } else {
            alpha * (-(alpha + 1.0) * y.ln_1p()).exp()
        }
    }

    pub fn cdf(alpha: f64, y: f64) -> f64 {
        if y <= 0.0 {
            0.0
        } else {
            -(-alpha * y.ln_1p()).exp_m1()
        }
    }

    pub fn sf(alpha: f64, y: f64) -> f64 {
        if y <= 0.0 {
            1.0
        } else {
            (-alpha * y.ln_1p()).exp()
        }
    }

    pub fn quantile(alpha: f64, level: Level) -> f64 {
        (-level.ln_q() / alpha).exp_m1()
    }

    pub fn mean(alpha: f64) -> Option<f64> {
        (alpha > 1.0).then(|| 1.0 / (alpha - 1.0))
    }

    pub fn variance(alpha: f64) -> Option<f64> {
        (alpha > 2.0).then(|| alpha / ((alpha - 1.0).powi(2) * (alpha - 2.0)))
    }

    pub fn skewness(alpha: f64) -> Option<f64> {
        (alpha > 3.0).then(|| 2.0 * (1.0 + alpha) / (alpha - 3.0) * ((alpha - 2.0) / alpha).sqrt())
    }

    pub fn kurtosis(alpha: f64) -> Option<f64> {
        (alpha > 4.0).then(|| {
            let a = alpha;
            3.0 + 6.0 * (a * a * a + a * a - 6.0 * a - 2.0) / (a * (a - 3.0) * (a - 4.0))
        })
    }

    /// E(Y - t)₊ for α > 1.
    pub fn upper(alpha: f64, t: f64) -> f64 {
        if t <= 0.0 {
            1.0 / (alpha - 1.0) - t
        } else {
            ((1.0 - alpha) * t.ln_1p()).exp() / (alpha - 1.0)
        }
    }

    /// E(t - Y)₊, finite for every α > 0.
    pub fn lower(alpha: f64, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else if t < 0.1 {
            // Σ_{k≥1} -C(-α, k) t^{k+1}/(k+1), from the binomial series of F.
            let mut c = -alpha;
            let mut tk = t * t;
            let mut sum: f64 = 0.0;
            let mut k = 1.0;
            loop {
                let term = -c * tk / (k + 1.0);
                sum += term;
                if term.abs() <= 1e-17 * sum.abs() {
                    break sum;
                }
                c *= (-alpha - k) / (k + 1.0);
                tk *= t;
                k += 1.0;
            }
        } else {
            // t - ∫₀ᵗ (1 + y)^{-α} dy
            let u = t.ln_1p();
            let c = 1.0 - alpha;
            let tail = if c == 0.0 { u } else { (c * u).exp_m1() / c };
            t - tail
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;

    fn check_upper(pdf: impl Fn(f64) -> f64, upper: impl Fn(f64) -> f64, lo: f64, ts: &[f64]) {
        for &t in ts {
            let a = t.max(lo);
            let direct = integrate(|y| (y - t) * pdf(y), a, f64::INFINITY);
            let got = upper(t);
            assert!(
                (got - direct).abs() <= 1e-12 * (1.0 + direct.abs()),
                "t={t}: {got} vs {direct}"
            );
        }
    }

    #[test]
    fn upper_partial_moments_match_quadrature() {
        let ts = [-4.0, -1.0, -0.2, 0.0, 0.3, 1.0, 2.5, 6.0];
        check_upper(normal::pdf, normal::upper, f64::NEG_INFINITY, &ts);
        check_upper(logistic::pdf, logistic::upper, f64::NEG_INFINITY, &ts);
        check_upper(laplace::pdf, laplace::upper, f64::NEG_INFINITY, &ts);
        check_upper(exponential::pdf, exponential::upper, 0.0, &ts);
        check_upper(|y| lomax::pdf(3.0, y), |t| lomax::upper(3.0, t), 0.0, &ts);
        for &t in &[0.0, 0.2, 0.9] {
            let direct = integrate(|y| (y - t) * uniform::pdf(y), t, 1.0);
            assert!((uniform::upper(t) - direct).abs() < 1e-15);
        }
    }

    #[test]
    fn normal_stop_loss_tail_is_relatively_accurate() {
        // φ(t)/t² (1 - 3/t² + 15/t⁴ - ...) asymptotics at t = 30.
        let t: f64 = 30.0;
        let approx = norm_pdf(t) / (t * t) * (1.0 - 3.0 / (t * t) + 15.0 / t.powi(4) - 105.0 / t.powi(6));
        assert!((normal::upper(t) / approx - 1.0).abs() < 1e-8);
    }

    #[test]
    fn lower_partials_for_small_arguments() {
        let t = 1e-6;
        assert!((exponential::lower(t) / (0.5 * t * t) - 1.0).abs() < 1e-6);
        // Lomax: F(y) ≈ αy so ∫₀ᵗ F ≈ αt²/2
        assert!((lomax::lower(3.0, t) / (1.5 * t * t) - 1.0).abs() < 1e-5);
        assert!((exponential::lower(2.0) - (1.0 + (-2f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn lomax_lower_matches_quadrature() {
        for &a in &[0.5, 1.0, 3.0, 7.5] {
            for &t in &[1e-3, 0.05, 0.0999, 0.1, 0.5, 3.0, 50.0] {
                let direct = integrate(|y| lomax::cdf(a, y), 0.0, t);
                let got = lomax::lower(a, t);
                assert!((got / direct - 1.0).abs() < 1e-12, "α={a} t={t}: {got} vs {direct}");
            }
        }
    }

    #[test]
    fn quantiles_invert() {
        for i in 1..100 {
            let l = Level::new(i as f64 / 100.0).unwrap();
            assert!((normal::cdf(normal::quantile(l)) - l.p()).abs() < 1e-14);
            assert!((logistic::cdf(logistic::quantile(l)) - l.p()).abs() < 1e-14);
            assert!((laplace::cdf(laplace::quantile(l)) - l.p()).abs() < 1e-14);
            assert!((exponential::cdf(exponential::quantile(l)) - l.p()).abs() < 1e-14);
            assert!((lomax::cdf(2.5, lomax::quantile(2.5, l)) - l.p()).abs() < 1e-14);
        }
    }

    #[test]
    fn lomax_moments_match_quadrature() {
        let a = 6.5;
        let m = lomax::mean(a).unwrap();
        let v = integrate(|y| (y - m).powi(2) * lomax::pdf(a, y), 0.0, f64::INFINITY);
        let m3 = integrate(|y| (y - m).powi(3) * lomax::pdf(a, y), 0.0, f64::INFINITY);
        let m4 = integrate(|y| (y - m).powi(4) * lomax::pdf(a, y), 0.0, f64::INFINITY);
        assert!((lomax::variance(a).unwrap() / v - 1.0).abs() < 1e-10);
        assert!((lomax::skewness(a).unwrap() / (m3 / v.powf(1.5)) - 1.0).abs() < 1e-8);
        assert!((lomax::kurtosis(a).unwrap() / (m4 / (v * v)) - 1.0).abs() < 1e-8);
    }
}
