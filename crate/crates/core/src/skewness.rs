//! Expectile skewness measures and the stop-loss skewness functions.

use crate::distributions::{ContinuousModel, Level, Sample};
use crate::error::{Error, Result};
use crate::expectiles::{equispaced, expectile_level, PartialMoments, SampleMoments};
use crate::quad::Quad;
use serde::Serialize;

/// Default classification tolerance for analytic profiles.
pub const ANALYTIC_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Skewness {
    RightSkewed,
    LeftSkewed,
    Symmetric,
    Indeterminate,
}

/// s̃₂ and s₂ on a grid of levels in (0, 1/2).
#[derive(Debug, Clone, Serialize)]
pub struct SkewnessProfile {
    pub alphas: Vec<f64>,
    pub s2_tilde: Vec<f64>,
    pub s2: Vec<f64>,
    pub classification: Skewness,
    pub tol: f64,
}

fn check_alpha(alpha: f64) -> Result<Level> {
    if alpha > 0.0 && alpha < 0.5 {
        Level::new(alpha)
    } else {
        Err(Error::domain(format!("skewness level {alpha} must lie in (0, 1/2)")))
    }
}

/// `(e(1-α) + e(α) - 2μ) / (e(1-α) - e(α))`
pub fn s2_tilde<M: PartialMoments + ?Sized>(model: &M, alpha: f64) -> Result<f64> {
    let l = check_alpha(alpha)?;
    let mu = model.mean()?;
    let lo = expectile_level(model, l)?;
    let hi = expectile_level(model, l.mirror())?;
    Ok(((hi - mu) + (lo - mu)) / (hi - lo))
}

/// s̃₂ normalized to (-1, 1).
pub fn s2<M: PartialMoments + ?Sized>(model: &M, alpha: f64) -> Result<f64> {
    Ok(s2_tilde(model, alpha)? / (1.0 - 2.0 * alpha))
}

/// `S_X(t) = (π(μ + t) - π(μ - t)) / t + 1` for `t > 0`.
pub fn big_s<M: PartialMoments + ?Sized>(model: &M, t: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("S_X needs t > 0, got {t}")));
    }
    let mu = model.mean()?;
    let via_upper = (model.upper_pm(mu + t) - model.upper_pm(mu - t)) / t + 1.0;
    let via_lower = (model.lower_pm(mu + t) - model.lower_pm(mu - t)) / t - 1.0;
    // Equal in exact arithmetic; averaging halves the rounding noise.
    Ok(0.5 * (via_upper + via_lower))
}

/// `S_X` from its integral form `(1/t) ∫_{μ-t}^{μ+t} F - 1`, by quadrature.
pub fn big_s_integral(model: &ContinuousModel, t: f64) -> Result<f64> {
    let mu = model.mean()?;
    let mut breaks = model.kinks();
    breaks.push(mu);
    let i = Quad::with_tolerances(1e-15, 1e-14)
        .integrate_pieces(|x| model.cdf(x), mu - t, mu + t, &breaks)
        .value;
    Ok(i / t - 1.0)
}

/// `S̃_X(t) = S_X(t·d)` with `d` the mean absolute deviation.
pub fn big_s_tilde(model: &ContinuousModel, t: f64) -> Result<f64> {
    big_s(model, t * model.mad()?)
}

/// The default t-grid for S̃: 60 geometric points on [0.01, 10].
pub fn s_grid() -> Vec<f64> {
    geometric(0.01, 10.0, 60)
}

pub(crate) fn geometric(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    equispaced(a, b, n).into_iter().map(f64::exp).collect()
}

/// The default α-grid for skewness profiles: 49 points on [0.01, 0.49].
pub fn skewness_grid() -> Vec<f64> {
    equispaced(0.01, 0.49, 49)
}

/// Classify a profile of s̃₂ values.
pub fn classify_skewness(values: &[f64], tol: f64) -> Skewness {
    let all_small = values.iter().all(|v| v.abs() <= tol);
    if all_small {
        return Skewness::Symmetric;
    }
    if values.iter().all(|&v| v >= -tol) {
        Skewness::RightSkewed
    } else if values.iter().all(|&v| v <= tol) {
        Skewness::LeftSkewed
    } else {
        Skewness::Indeterminate
    }
}

pub fn skewness_profile<M: PartialMoments + ?Sized>(model: &M, alphas: &[f64], tol: f64) -> Result<SkewnessProfile> {
    let s2_tilde: Vec<f64> = alphas.iter().map(|&a| s2_tilde(model, a)).collect::<Result<_>>()?;
    Ok(profile_from(alphas, s2_tilde, tol))
}

fn profile_from(alphas: &[f64], s2_tilde: Vec<f64>, tol: f64) -> SkewnessProfile {
    let s2 = alphas
        .iter()
        .zip(&s2_tilde)
        .map(|(a, s)| s / (1.0 - 2.0 * a))
        .collect();
    SkewnessProfile {
        alphas: alphas.to_vec(),
        classification: classify_skewness(&s2_tilde, tol),
        s2_tilde,
        s2,
        tol,
    }
}

/// Influence function of an empirical expectile at level `tau`, evaluated at
/// `x`, with `e` the estimate and `frac_below` the share of the sample below it.
fn expectile_influence(x: f64, e: f64, tau: f64, frac_below: f64) -> f64 {
    let ident = if x >= e { tau * (x - e) } else { -(1.0 - tau) * (e - x) };
    ident / (tau * (1.0 - frac_below) + (1.0 - tau) * frac_below)
}

/// Empirical s̃₂ profile. The classification tolerance is three standard
/// errors from the plug-in influence function of s̃₂, taken as the largest
/// over the grid.
pub fn empirical_profile(sample: &Sample, alphas: &[f64]) -> Result<SkewnessProfile> {
    for &a in alphas {
        check_alpha(a)?;
    }
    let moments = SampleMoments::new(sample);
    let mean = sample.mean();
    let xs = sample.values();
    let n = xs.len();
    let below = |e: f64| xs.partition_point(|&x| x < e) as f64 / n as f64;
    let mut values = Vec::with_capacity(alphas.len());
    let mut tol: f64 = 0.0;
    for &a in alphas {
        let lo = moments.expectile(a);
        let hi = moments.expectile(1.0 - a);
        let (num, den) = ((hi - mean) + (lo - mean), hi - lo);
        values.push(num / den);
        if n < 2 || den <= 0.0 {
            tol = f64::INFINITY;
            continue;
        }
        let (fl, fh) = (below(lo), below(hi));
        let infl: Vec<f64> = xs
            .iter()
            .map(|&x| {
                let il = expectile_influence(x, lo, a, fl);
                let ih = expectile_influence(x, hi, 1.0 - a, fh);
                (ih + il - 2.0 * (x - mean)) / den - num / (den * den) * (ih - il)
            })
            .collect();
        let m = infl.iter().sum::<f64>() / n as f64;
        let var = infl.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1) as f64;
        tol = tol.max(3.0 * (var / n as f64).sqrt());
    }
    Ok(profile_from(alphas, values, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::ScaledBernoulli;

    #[test]
    fn symmetric_models_have_zero_skewness() {
        for m in [
            ContinuousModel::standard_normal(),
            ContinuousModel::student_t(5.0).unwrap(),
            ContinuousModel::uniform(-1.0, 3.0).unwrap(),
        ] {
            for &a in &[0.05, 0.25, 0.45] {
                assert!(s2(&m, a).unwrap().abs() < 1e-9);
            }
            for &t in &[0.1, 1.0, 5.0] {
                assert!(big_s(&m, t).unwrap().abs() < 1e-9);
            }
            let p = skewness_profile(&m, &skewness_grid(), ANALYTIC_TOL).unwrap();
            assert_eq!(p.classification, Skewness::Symmetric);
        }
    }

    #[test]
    fn bernoulli_s2_is_one_minus_two_p() {
        for i in 1..10 {
            let p = i as f64 / 10.0;
            let b = ScaledBernoulli::new(p, 3.0).unwrap();
            for &a in &[0.05, 0.2, 0.4] {
                assert!((s2(&b, a).unwrap() - (1.0 - 2.0 * p)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn big_s_forms_agree() {
        let m = ContinuousModel::lomax(2.0, 1.0).unwrap();
        for t in s_grid() {
            let a = big_s(&m, t).unwrap();
            let b = big_s_integral(&m, t).unwrap();
            assert!((a - b).abs() < 1e-8, "t={t}: {a} vs {b}");
            assert!(a > 0.0 && a <= 1.0);
        }
        // t → 0⁺ limit 2F(μ) - 1
        let lim = 2.0 * m.cdf(m.mean().unwrap()) - 1.0;
        assert!((big_s(&m, 1e-4).unwrap() - lim).abs() < 1e-4);
    }

    #[test]
    fn classification() {
        assert_eq!(classify_skewness(&[0.0, 1e-9], 1e-7), Skewness::Symmetric);
        assert_eq!(classify_skewness(&[0.0, 0.3], 1e-7), Skewness::RightSkewed);
        assert_eq!(classify_skewness(&[-0.2, -1e-8], 1e-7), Skewness::LeftSkewed);
        assert_eq!(classify_skewness(&[-0.2, 0.2], 1e-7), Skewness::Indeterminate);
    }
}
