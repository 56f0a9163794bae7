//! Asymptotic variances of scale estimators and their standardized forms.
//!
//! The standardized ASV of an estimator of a scale measure δ is
//! `ASV / δ²`; it makes estimators of different measures comparable.

use crate::distributions::{ContinuousModel, Level};
use crate::error::{Error, Result};
use crate::expectiles::{equispaced, expectile, ier, iqr, IdentificationFn};
use crate::quad::Quad;
use crate::special::{norm_pdf, norm_quantile};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;

/// `E f(X)` by quadrature split at the model's kinks, its quartiles and
/// `extra`.
fn expect<F: Fn(f64) -> f64>(model: &ContinuousModel, f: F, extra: &[f64]) -> f64 {
    let (lo, hi) = model.support();
    let mut breaks = model.kinks();
    breaks.extend(extra.iter().copied());
    for p in [0.25, 0.5, 0.75] {
        breaks.push(model.quantile_level(Level::new(p).expect("fixed level")));
    }
    Quad::with_tolerances(1e-15, 1e-12)
        .with_scale(model.spread())
        .integrate_pieces(|x| f(x) * model.pdf(x), lo, hi, &breaks)
        .value
}

fn require_second_moment(model: &ContinuousModel) -> Result<()> {
    model.variance().map(|_| ())
}

fn check_tau(tau: f64) -> Result<()> {
    Level::new(tau).map(|_| ())
}

fn below_half(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 0.5 {
        Ok(())
    } else {
        Err(Error::domain(format!("range level {alpha} must lie in (0, 1/2)")))
    }
}

/// `η(τ₁, τ₂) = E[I_τ₁(e(τ₁), X) · I_τ₂(e(τ₂), X)]`.
pub fn eta(model: &ContinuousModel, tau1: f64, tau2: f64) -> Result<f64> {
    check_tau(tau1)?;
    check_tau(tau2)?;
    require_second_moment(model)?;
    // Order the arguments so that the value is exactly symmetric.
    let (t1, t2) = if tau1 <= tau2 { (tau1, tau2) } else { (tau2, tau1) };
    let e1 = expectile(model, t1)?;
    let e2 = expectile(model, t2)?;
    let i1 = IdentificationFn::new(t1)?;
    let i2 = IdentificationFn::new(t2)?;
    Ok(expect(model, |x| i1.eval(e1, x) * i2.eval(e2, x), &[e1, e2]))
}

/// `a_α = α + (1 - 2α) F(e(α))`, the derivative of the expected
/// identification function at the expectile, up to sign.
pub fn a_alpha(model: &ContinuousModel, alpha: f64) -> Result<f64> {
    check_tau(alpha)?;
    if alpha == 0.5 {
        model.mean()?;
        return Ok(0.5);
    }
    let e = expectile(model, alpha)?;
    Ok(alpha + (1.0 - 2.0 * alpha) * model.cdf(e))
}

/// Asymptotic variance of the empirical interexpectile range.
pub fn sigma2_ier(model: &ContinuousModel, alpha: f64) -> Result<f64> {
    below_half(alpha)?;
    let a_lo = a_alpha(model, alpha)?;
    let a_hi = a_alpha(model, 1.0 - alpha)?;
    Ok(eta(model, alpha, alpha)? / (a_lo * a_lo) - 2.0 * eta(model, alpha, 1.0 - alpha)? / (a_lo * a_hi)
        + eta(model, 1.0 - alpha, 1.0 - alpha)? / (a_hi * a_hi))
}

/// [`sigma2_ier`] as the variance of the difference of the two expectile
/// influence functions `I_τ(e(τ), x) / a_τ`, integrated directly.
pub fn sigma2_ier_direct(model: &ContinuousModel, alpha: f64) -> Result<f64> {
    below_half(alpha)?;
    require_second_moment(model)?;
    let (lo, hi) = (alpha, 1.0 - alpha);
    let (e_lo, e_hi) = (expectile(model, lo)?, expectile(model, hi)?);
    let (a_lo, a_hi) = (a_alpha(model, lo)?, a_alpha(model, hi)?);
    let (i_lo, i_hi) = (IdentificationFn::new(lo)?, IdentificationFn::new(hi)?);
    Ok(expect(
        model,
        |x| {
            let d = i_hi.eval(e_hi, x) / a_hi - i_lo.eval(e_lo, x) / a_lo;
            d * d
        },
        &[e_lo, e_hi],
    ))
}

/// Asymptotic variance of the empirical interquantile range.
pub fn sigma2_iqr(model: &ContinuousModel, alpha: f64) -> Result<f64> {
    below_half(alpha)?;
    let l = Level::new(alpha)?;
    let f_lo = model.pdf(model.quantile_level(l));
    let f_hi = model.pdf(model.quantile_level(l.mirror()));
    if !(f_lo > 0.0 && f_hi > 0.0) {
        return Err(Error::Singularity(format!(
            "density vanishes at a {alpha}-quantile of {model}"
        )));
    }
    let v = alpha * (1.0 - alpha);
    Ok(v / (f_hi * f_hi) - 2.0 * alpha * alpha / (f_lo * f_hi) + v / (f_lo * f_lo))
}

/// The symmetric-law form of [`sigma2_iqr`], `2α(1 - 2α) / f(q(α))²`.
/// Only valid when `f(q(α)) = f(q(1 - α))`; skewed laws need the general
/// form.
pub fn sigma2_iqr_symmetric(model: &ContinuousModel, alpha: f64) -> Result<f64> {
    below_half(alpha)?;
    let f = model.pdf(model.quantile_level(Level::new(alpha)?));
    if !(f > 0.0) {
        return Err(Error::Singularity(format!(
            "density vanishes at the {alpha}-quantile of {model}"
        )));
    }
    Ok(2.0 * alpha * (1.0 - 2.0 * alpha) / (f * f))
}

/// Standardized ASV of the IQR under normality,
/// `α(1 - 2α) / (2 z² φ(z)²)` with `z = Φ⁻¹(1 - α)`.
pub fn tau2_iqr_normal(alpha: f64) -> Result<f64> {
    below_half(alpha)?;
    let z = norm_quantile(1.0 - alpha, alpha);
    let phi = norm_pdf(z);
    Ok(alpha * (1.0 - 2.0 * alpha) / (2.0 * z * z * phi * phi))
}

/// Standardized ASV of the empirical IER, `σ²_E(α) / E_α²`.
pub fn tau2_ier(model: &ContinuousModel, alpha: f64) -> Result<f64> {
    let e = ier(model, alpha)?;
    Ok(sigma2_ier(model, alpha)? / (e * e))
}

/// Standardized ASV of the empirical IQR, `σ²_Q(α) / Q_α²`.
pub fn tau2_iqr(model: &ContinuousModel, alpha: f64) -> Result<f64> {
    let q = iqr(model, alpha)?;
    Ok(sigma2_iqr(model, alpha)? / (q * q))
}

/// ASV of the sample standard deviation, `(μ₄ - σ⁴) / (4σ²)`; `None` when
/// the fourth moment is infinite.
pub fn asv_sd(model: &ContinuousModel) -> Result<Option<f64>> {
    let v = model.variance()?;
    if !model.has_moment(4) {
        return Ok(None);
    }
    Ok(Some((model.kurtosis()? - 1.0) * v / 4.0))
}

/// ASV of the sample mean absolute deviation,
/// `Var(|X - μ| + (2F(μ) - 1) X)`.
pub fn asv_mad(model: &ContinuousModel) -> Result<f64> {
    require_second_moment(model)?;
    let mu = model.mean()?;
    let d = model.mad()?;
    let c = 2.0 * model.cdf(mu) - 1.0;
    // E[(|Y| + cY)²] - d² with Y = X - μ, split at 0.
    let second = expect(
        model,
        |x| {
            let y = x - mu;
            let w = if y > 0.0 { 1.0 + c } else { 1.0 - c };
            w * w * y * y
        },
        &[mu],
    );
    Ok(second - d * d)
}

/// `h₁(x) = E|x - X| = 2π(x) + x - μ`, the first projection of Gini's mean
/// difference.
pub fn gini_kernel(model: &ContinuousModel, x: f64) -> Result<f64> {
    let mu = model.mean()?;
    Ok(2.0 * model.upper_raw(x) + x - mu)
}

/// Gini's mean difference `g = E|X - X'| = 2∫F(1 - F)`.
pub fn gini_mean_difference(model: &ContinuousModel) -> Result<f64> {
    model.mean()?;
    let (lo, hi) = model.support();
    let mut breaks = model.kinks();
    for p in [0.25, 0.5, 0.75] {
        breaks.push(model.quantile(p)?);
    }
    Ok(2.0
        * Quad::with_tolerances(1e-15, 1e-12)
            .with_scale(model.spread())
            .integrate_pieces(|x| model.cdf(x) * model.sf(x), lo, hi, &breaks)
            .value)
}

/// ASV of the sample mean difference (a U-statistic of degree 2),
/// `4 Var(h₁(X))`.
pub fn asv_gini(model: &ContinuousModel) -> Result<f64> {
    require_second_moment(model)?;
    let g = gini_mean_difference(model)?;
    let mu = model.mean()?;
    let centered = expect(
        model,
        |x| {
            let h = 2.0 * model.upper_raw(x) + x - mu - g;
            h * h
        },
        &[mu],
    );
    Ok(4.0 * centered)
}

/// A scale estimator of the comparison tables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Estimator {
    Sd,
    Ier(f64),
    Mad,
    Gini,
    Iqr(f64),
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Estimator::Sd => write!(f, "sd"),
            Estimator::Ier(a) => write!(f, "E{a}"),
            Estimator::Mad => write!(f, "d"),
            Estimator::Gini => write!(f, "g"),
            Estimator::Iqr(a) => write!(f, "Q{a}"),
        }
    }
}

impl Estimator {
    /// Parse `sd`, `d`, `g`, `E0.25` or `Q0.25`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let level = |rest: &str| -> Result<f64> {
            let a: f64 = rest
                .parse()
                .map_err(|_| Error::domain(format!("bad estimator level in '{s}'")))?;
            below_half(a)?;
            Ok(a)
        };
        match s {
            "sd" => Ok(Estimator::Sd),
            "d" | "mad" => Ok(Estimator::Mad),
            "g" | "gini" => Ok(Estimator::Gini),
            _ if s.starts_with('E') => Ok(Estimator::Ier(level(&s[1..])?)),
            _ if s.starts_with('Q') => Ok(Estimator::Iqr(level(&s[1..])?)),
            _ => Err(Error::domain(format!("unknown estimator '{s}'"))),
        }
    }

    /// The scale measure the estimator targets.
    pub fn measure(&self, model: &ContinuousModel) -> Result<f64> {
        match *self {
            Estimator::Sd => model.sd(),
            Estimator::Ier(a) => ier(model, a),
            Estimator::Mad => model.mad(),
            Estimator::Gini => gini_mean_difference(model),
            Estimator::Iqr(a) => iqr(model, a),
        }
    }

    /// Raw ASV; `None` when the moment condition for a finite ASV fails.
    pub fn asv(&self, model: &ContinuousModel) -> Result<Option<f64>> {
        let r = match *self {
            Estimator::Sd => return absent_on_moment(asv_sd(model)).map(Option::flatten),
            Estimator::Ier(a) => sigma2_ier(model, a),
            Estimator::Mad => asv_mad(model),
            Estimator::Gini => asv_gini(model),
            Estimator::Iqr(a) => sigma2_iqr(model, a),
        };
        absent_on_moment(r)
    }

    /// `ASV / δ²`, or `None` when the ASV is infinite.
    pub fn standardized_asv(&self, model: &ContinuousModel) -> Result<Option<f64>> {
        match self.asv(model)? {
            None => Ok(None),
            Some(v) => {
                let m = self.measure(model)?;
                Ok(Some(v / (m * m)))
            }
        }
    }
}

fn absent_on_moment<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Moment { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Columns of the t table.
pub const T_TABLE_ESTIMATORS: [Estimator; 9] = [
    Estimator::Sd,
    Estimator::Ier(0.15),
    Estimator::Ier(0.25),
    Estimator::Ier(0.35),
    Estimator::Mad,
    Estimator::Gini,
    Estimator::Iqr(0.15),
    Estimator::Iqr(0.25),
    Estimator::Iqr(0.35),
];

/// Columns of the NIG table.
pub const NIG_TABLE_ESTIMATORS: [Estimator; 5] = [
    Estimator::Sd,
    Estimator::Ier(0.25),
    Estimator::Mad,
    Estimator::Gini,
    Estimator::Iqr(0.25),
];

/// Degrees of freedom of the t table rows.
pub const T_TABLE_DF: [f64; 15] = [3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 12.0, 15.0, 20.0, 30.0, 40.0, 50.0, 100.0];

/// Shape parameters (α, β) of the NIG table rows.
pub const NIG_TABLE_SHAPES: [(f64, f64); 9] = [
    (10.0, 0.0),
    (10.0, 8.0),
    (10.0, 9.0),
    (2.0, 0.0),
    (2.0, 1.0),
    (2.0, 1.5),
    (1.0, 0.0),
    (1.0, 0.5),
    (1.0, 0.8),
];

/// Standardized ASVs of several estimators under one model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsvReport {
    pub model: String,
    pub estimators: Vec<Estimator>,
    pub values: Vec<Option<f64>>,
}

impl AsvReport {
    pub fn new(model: &ContinuousModel, estimators: &[Estimator]) -> Result<Self> {
        let values = estimators
            .iter()
            .map(|e| e.standardized_asv(model))
            .collect::<Result<_>>()?;
        Ok(AsvReport {
            model: model.to_string(),
            estimators: estimators.to_vec(),
            values,
        })
    }

    pub fn get(&self, estimator: Estimator) -> Option<f64> {
        self.estimators
            .iter()
            .position(|&e| e == estimator)
            .and_then(|i| self.values[i])
    }
}

/// One report per model, computed in parallel and returned in input order.
pub fn asv_table(models: &[ContinuousModel], estimators: &[Estimator]) -> Result<Vec<AsvReport>> {
    models
        .par_iter()
        .map(|m| AsvReport::new(m, estimators))
        .collect()
}

pub fn t_table() -> Result<Vec<AsvReport>> {
    let models: Vec<ContinuousModel> = T_TABLE_DF
        .iter()
        .map(|&nu| ContinuousModel::student_t(nu))
        .collect::<Result<_>>()?;
    asv_table(&models, &T_TABLE_ESTIMATORS)
}

/// A NIG table row: shape, moment skewness and kurtosis, and the report of
/// the standardized (mean 0, variance 1) member.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NigRow {
    pub alpha: f64,
    pub beta: f64,
    pub m3: f64,
    pub m4: f64,
    pub report: AsvReport,
}

pub fn nig_table() -> Result<Vec<NigRow>> {
    let models: Vec<ContinuousModel> = NIG_TABLE_SHAPES
        .iter()
        .map(|&(a, b)| ContinuousModel::nig_standardized(a, b))
        .collect::<Result<_>>()?;
    let reports = asv_table(&models, &NIG_TABLE_ESTIMATORS)?;
    NIG_TABLE_SHAPES
        .iter()
        .zip(models.iter().zip(reports))
        .map(|(&(alpha, beta), (m, report))| {
            Ok(NigRow {
                alpha,
                beta,
                m3: m.skewness()?,
                m4: m.kurtosis()?,
                report,
            })
        })
        .collect()
}

/// [`nig_table`] with every interquantile cell from [`sigma2_iqr_symmetric`]
/// instead of the general form.
pub fn nig_table_symmetric_iqr() -> Result<Vec<NigRow>> {
    let mut rows = nig_table()?;
    for row in &mut rows {
        let m = ContinuousModel::nig_standardized(row.alpha, row.beta)?;
        for (e, v) in row.report.estimators.iter().zip(row.report.values.iter_mut()) {
            if let Estimator::Iqr(a) = *e {
                let q = iqr(&m, a)?;
                *v = Some(sigma2_iqr_symmetric(&m, a)? / (q * q));
            }
        }
    }
    Ok(rows)
}

/// A row of relative efficiencies against the most efficient estimator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SareRow {
    pub model: String,
    pub estimators: Vec<Estimator>,
    pub values: Vec<Option<f64>>,
    /// Column of the most efficient estimator (value 1).
    pub best: Option<usize>,
}

/// Row minimum of the standardized ASVs divided by each entry.
pub fn sare_table(reports: &[AsvReport]) -> Vec<SareRow> {
    reports
        .iter()
        .map(|r| {
            let best = r
                .values
                .iter()
                .enumerate()
                .filter_map(|(i, v)| v.map(|v| (i, v)))
                .min_by(|a, b| a.1.total_cmp(&b.1));
            let values = r
                .values
                .iter()
                .map(|v| match (v, best) {
                    (Some(v), Some((_, min))) => Some(min / v),
                    _ => None,
                })
                .collect();
            SareRow {
                model: r.model.clone(),
                estimators: r.estimators.clone(),
                values,
                best: best.map(|b| b.0),
            }
        })
        .collect()
}

/// The interexpectile range against its MAD bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MadBounds {
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
}

impl MadBounds {
    pub fn strict(&self) -> bool {
        self.lower < self.value && self.value < self.upper
    }
}

/// `((1-2α)/(1-α)·d, E_α, (1-2α)/α·d)`.
pub fn mad_bounds_check(model: &ContinuousModel, alpha: f64) -> Result<MadBounds> {
    below_half(alpha)?;
    let d = model.mad()?;
    let k = 1.0 - 2.0 * alpha;
    Ok(MadBounds {
        lower: k / (1.0 - alpha) * d,
        value: ier(model, alpha)?,
        upper: k / alpha * d,
    })
}

/// Maximize a unimodal function on `[a, b]` by golden-section search.
fn golden_max<F: FnMut(f64) -> Result<f64>>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)> {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, f(x)?))
}

/// Standardized efficiencies of the IQR and IER relative to the standard
/// deviation under normality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalSare {
    pub iqr_quarter: f64,
    pub iqr_max: f64,
    pub iqr_argmax: f64,
    pub ier_quarter: f64,
    pub ier_max: f64,
    pub ier_argmax: f64,
}

/// `0.5 / τ²(α)` for the IQR and IER under the standard normal, at α = 1/4
/// and at the maximizing α.
pub fn normal_sare() -> Result<NormalSare> {
    let n = ContinuousModel::standard_normal();
    let q = |a: f64| tau2_iqr_normal(a).map(|t| 0.5 / t);
    let e = |a: f64| tau2_ier(&n, a).map(|t| 0.5 / t);
    let (iqr_argmax, iqr_max) = golden_max(q, 0.01, 0.49, 1e-7)?;
    let (ier_argmax, ier_max) = golden_max(e, 0.01, 0.49, 1e-7)?;
    Ok(NormalSare {
        iqr_quarter: q(0.25)?,
        iqr_max,
        iqr_argmax,
        ier_quarter: e(0.25)?,
        ier_max,
        ier_argmax,
    })
}

/// `(α, τ²_Q(α), τ²_E(α))` under normality on `n` equispaced levels in
/// `[0.01, 0.49]`.
pub fn figure2(n: usize) -> Result<Vec<(f64, f64, f64)>> {
    let model = ContinuousModel::standard_normal();
    equispaced(0.01, 0.49, n)
        .into_par_iter()
        .map(|a| Ok((a, tau2_iqr_normal(a)?, tau2_ier(&model, a)?)))
        .collect()
}
