//! Parametric continuous distributions and their analytic ingredients.
//!
//! Every [`ContinuousModel`] is an affine image `X = shift + scale·Y` of a
//! reference member `Y` of its [`Family`]. All family computations happen in
//! the reference coordinate, which keeps tails and stop-loss transforms in a
//! single place per family.

mod bernoulli;
mod level;
mod nig;
mod parse;
mod sample;
mod standard;
mod student_t;

pub use bernoulli::ScaledBernoulli;
pub use level::Level;
pub use nig::NigShape;
pub use parse::parse_model;
pub use sample::{derive_seed, draw, sample_from, Sample, StreamRng};
pub use student_t::StudentT;

use crate::error::{Error, Result};
use crate::quad::Quad;
use crate::roots::{newton_bisect_from, Tolerance};
use standard::{exponential, laplace, logistic, lomax, normal, uniform};
use std::fmt;
use std::sync::Arc;

/// Shape part of a distribution in its reference coordinate.
#[derive(Debug, Clone)]
pub enum Family {
    /// N(0, 1)
    Normal,
    /// Student t with ν degrees of freedom, location 0, scale 1.
    StudentT(StudentT),
    /// Lomax with shape α and scale 1.
    Lomax { alpha: f64 },
    /// NIG with location 0 and δ = 1; tail and skew parameters are the
    /// natural ones multiplied by δ.
    Nig(Arc<NigShape>),
    /// Standard logistic.
    Logistic,
    /// Laplace with unit scale.
    Laplace,
    /// Uniform on [0, 1].
    Uniform,
    /// Exponential with unit rate.
    Exponential,
    /// Finite mixture; weights sum to one.
    Mixture(Arc<Vec<(f64, ContinuousModel)>>),
}

impl Family {
    fn pdf(&self, y: f64) -> f64 {
        match self {
            Family::Normal => normal::pdf(y),
            Family::StudentT(t) => t.pdf(y),
            Family::Lomax { alpha } => lomax::pdf(*alpha, y),
            Family::Nig(s) => s.pdf(y),
            Family::Logistic => logistic::pdf(y),
            Family::Laplace => laplace::pdf(y),
            Family::Uniform => uniform::pdf(y),
            Family::Exponential => exponential::pdf(y),
            Family::Mixture(c) => c.iter().map(|(w, m)| w * m.pdf(y)).sum(),
        }
    }

    fn cdf(&self, y: f64) -> f64 {
        match self {
            Family::Normal => normal::cdf(y),
            Family::StudentT(t) => t.cdf(y),
            Family::Lomax { alpha } => lomax::cdf(*alpha, y),
            Family::Nig(s) => s.cdf(y),
            Family::Logistic => logistic::cdf(y),
            Family::Laplace => laplace::cdf(y),
            Family::Uniform => uniform::cdf(y),
            Family::Exponential => exponential::cdf(y),
            Family::Mixture(c) => c.iter().map(|(w, m)| w * m.cdf(y)).sum(),
        }
    }

    fn sf(&self, y: f64) -> f64 {
        match self {
            Family::Normal => normal::sf(y),
            Family::StudentT(t) => t.sf(y),
            Family::Lomax { alpha } => lomax::sf(*alpha, y),
            Family::Nig(s) => s.sf(y),
            Family::Logistic => logistic::sf(y),
            Family::Laplace => laplace::sf(y),
            Family::Uniform => uniform::sf(y),
            Family::Exponential => exponential::sf(y),
            Family::Mixture(c) => c.iter().map(|(w, m)| w * m.sf(y)).sum(),
        }
    }

    fn quantile(&self, level: Level) -> f64 {
        match self {
            Family::Normal => normal::quantile(level),
            Family::StudentT(t) => t.quantile(level),
            Family::Lomax { alpha } => lomax::quantile(*alpha, level),
            Family::Nig(s) => s.quantile(level),
            Family::Logistic => logistic::quantile(level),
            Family::Laplace => laplace::quantile(level),
            Family::Uniform => uniform::quantile(level),
            Family::Exponential => exponential::quantile(level),
            Family::Mixture(c) => mixture_quantile(c, level),
        }
    }

    /// E(Y - t)₊, assuming the mean exists.
    fn upper(&self, t: f64) -> f64 {
        match self {
            Family::Normal => normal::upper(t),
            Family::StudentT(s) => s.upper_partial(t),
            Family::Lomax { alpha } => lomax::upper(*alpha, t),
            Family::Nig(s) => s.upper_partial(t),
            Family::Logistic => logistic::upper(t),
            Family::Laplace => laplace::upper(t),
            Family::Uniform => uniform::upper(t),
            Family::Exponential => exponential::upper(t),
            Family::Mixture(c) => c.iter().map(|(w, m)| w * m.upper_raw(t)).sum(),
        }
    }

    /// E(t - Y)₊, assuming the mean exists (Lomax also without).
    fn lower(&self, t: f64) -> f64 {
        match self {
            Family::Normal => normal::upper(-t),
            Family::StudentT(s) => s.upper_partial(-t),
            Family::Lomax { alpha } => lomax::lower(*alpha, t),
            Family::Nig(s) => s.lower_partial(t),
            Family::Logistic => logistic::upper(-t),
            Family::Laplace => laplace::upper(-t),
            Family::Uniform => uniform::lower(t),
            Family::Exponential => exponential::lower(t),
            Family::Mixture(c) => c.iter().map(|(w, m)| w * m.lower_raw(t)).sum(),
        }
    }

    fn mean(&self) -> Option<f64> {
        match self {
            Family::Normal | Family::Logistic | Family::Laplace => Some(0.0),
            Family::StudentT(t) => (t.nu() > 1.0).then_some(0.0),
            Family::Lomax { alpha } => lomax::mean(*alpha),
            Family::Nig(s) => Some(s.mean()),
            Family::Uniform => Some(0.5),
            Family::Exponential => Some(1.0),
            Family::Mixture(c) => c
                .iter()
                .map(|(w, m)| m.mean().ok().map(|v| w * v))
                .sum::<Option<f64>>(),
        }
    }

    fn variance(&self) -> Option<f64> {
        match self {
            Family::Normal | Family::Exponential => Some(1.0),
            Family::StudentT(t) => t.variance(),
            Family::Lomax { alpha } => lomax::variance(*alpha),
            Family::Nig(s) => Some(s.variance()),
            Family::Logistic => Some(std::f64::consts::PI.powi(2) / 3.0),
            Family::Laplace => Some(2.0),
            Family::Uniform => Some(1.0 / 12.0),
            Family::Mixture(c) => {
                let mean = self.mean()?;
                let second = c
                    .iter()
                    .map(|(w, m)| Some(w * (m.variance().ok()? + m.mean().ok()?.powi(2))))
                    .sum::<Option<f64>>()?;
                Some(second - mean * mean)
            }
        }
    }

    fn skewness(&self) -> Option<f64> {
        match self {
            Family::Normal | Family::Logistic | Family::Laplace | Family::Uniform => Some(0.0),
            Family::StudentT(t) => (t.nu() > 3.0).then_some(0.0),
            Family::Lomax { alpha } => lomax::skewness(*alpha),
            Family::Nig(s) => Some(s.skewness()),
            Family::Exponential => Some(2.0),
            Family::Mixture(_) => None,
        }
    }

    fn kurtosis(&self) -> Option<f64> {
        match self {
            Family::Normal => Some(3.0),
            Family::StudentT(t) => t.kurtosis(),
            Family::Lomax { alpha } => lomax::kurtosis(*alpha),
            Family::Nig(s) => Some(s.kurtosis()),
            Family::Logistic => Some(4.2),
            Family::Laplace => Some(6.0),
            Family::Uniform => Some(1.8),
            Family::Exponential => Some(9.0),
            Family::Mixture(_) => None,
        }
    }

    /// Whether E|Y|^k is finite.
    fn has_moment(&self, k: u32) -> bool {
        let k = k as f64;
        match self {
            Family::StudentT(t) => t.nu() > k,
            Family::Lomax { alpha } => *alpha > k,
            Family::Mixture(c) => c.iter().all(|(_, m)| m.family.has_moment(k as u32)),
            _ => true,
        }
    }

    fn support(&self) -> (f64, f64) {
        match self {
            Family::Lomax { .. } | Family::Exponential => (0.0, f64::INFINITY),
            Family::Uniform => (0.0, 1.0),
            Family::Mixture(c) => c.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, m)| {
                let (a, b) = m.support();
                (lo.min(a), hi.max(b))
            }),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Points where the density is not smooth.
    fn kinks(&self) -> Vec<f64> {
        match self {
            Family::Lomax { .. } | Family::Exponential | Family::Laplace => vec![0.0],
            Family::Uniform => vec![0.0, 1.0],
            Family::Mixture(c) => c.iter().flat_map(|(_, m)| m.kinks()).collect(),
            _ => Vec::new(),
        }
    }

    /// Typical length of the reference member, used to scale quadrature.
    fn spread(&self) -> f64 {
        match self {
            Family::Nig(s) => s.sd(),
            Family::Uniform => 0.25,
            Family::Mixture(c) => c.iter().map(|(w, m)| w * m.spread()).sum(),
            _ => 1.0,
        }
    }
}

fn mixture_quantile(components: &[(f64, ContinuousModel)], level: Level) -> f64 {
    let qs: Vec<f64> = components.iter().map(|(_, m)| m.quantile_level(level)).collect();
    let lo = qs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = qs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        return lo;
    }
    let pdf = |x: f64| -> f64 { components.iter().map(|(w, m)| w * m.pdf(x)).sum() };
    let spread: f64 = components.iter().map(|(w, m)| w * m.spread()).sum();
    let tol = Tolerance {
        abs: 1e-15 * spread,
        rel: 4.0 * f64::EPSILON,
    };
    let result = if level.is_lower() {
        let ln_p = level.ln_p();
        newton_bisect_from(
            "mixture quantile",
            |x| {
                let c: f64 = components.iter().map(|(w, m)| w * m.cdf(x)).sum();
                (c.ln() - ln_p, pdf(x) / c)
            },
            lo,
            hi,
            None,
            tol,
        )
    } else {
        let ln_q = level.ln_q();
        newton_bisect_from(
            "mixture quantile",
            |x| {
                let s: f64 = components.iter().map(|(w, m)| w * m.sf(x)).sum();
                (ln_q - s.ln(), pdf(x) / s)
            },
            lo,
            hi,
            None,
            tol,
        )
    };
    result.unwrap_or(f64::NAN)
}

/// A continuous distribution `shift + scale·Y` with `Y` from a [`Family`].
#[derive(Debug, Clone)]
pub struct ContinuousModel {
    family: Family,
    shift: f64,
    scale: f64,
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::domain(format!("{name} must be positive and finite, got {v}")))
    }
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::domain(format!("{name} must be finite, got {v}")))
    }
}

impl ContinuousModel {
    fn with(family: Family, shift: f64, scale: f64) -> Self {
        ContinuousModel { family, shift, scale }
    }

    pub fn normal(mu: f64, sigma: f64) -> Result<Self> {
        Ok(Self::with(Family::Normal, finite("mu", mu)?, positive("sigma", sigma)?))
    }

    pub fn standard_normal() -> Self {
        Self::with(Family::Normal, 0.0, 1.0)
    }

    pub fn student_t(nu: f64) -> Result<Self> {
        Self::student_t_ls(nu, 0.0, 1.0)
    }

    pub fn student_t_ls(nu: f64, location: f64, scale: f64) -> Result<Self> {
        let nu = positive("nu", nu)?;
        Ok(Self::with(
            Family::StudentT(StudentT::new(nu)),
            finite("location", location)?,
            positive("scale", scale)?,
        ))
    }

    /// Lomax with density `(α/λ)(1 + t/λ)^{-α-1}` on `t ≥ 0`.
    pub fn lomax(alpha: f64, lambda: f64) -> Result<Self> {
        Ok(Self::with(
            Family::Lomax {
                alpha: positive("alpha", alpha)?,
            },
            0.0,
            positive("lambda", lambda)?,
        ))
    }

    /// NIG(α, β, μ, δ) in the usual parametrization; requires `|β| < α`.
    pub fn nig(alpha: f64, beta: f64, mu: f64, delta: f64) -> Result<Self> {
        let alpha = positive("alpha", alpha)?;
        let beta = finite("beta", beta)?;
        let delta = positive("delta", delta)?;
        if beta.abs() >= alpha {
            return Err(Error::domain(format!("NIG needs |beta| < alpha, got beta={beta}, alpha={alpha}")));
        }
        let shape = NigShape::new(alpha * delta, beta * delta);
        Ok(Self::with(Family::Nig(Arc::new(shape)), finite("mu", mu)?, delta))
    }

    /// NIG with tail and skew parameters `(α, β)` and μ, δ chosen so that the
    /// mean is 0 and the variance 1.
    pub fn nig_standardized(alpha: f64, beta: f64) -> Result<Self> {
        let (mu, delta) = nig_standardizing(alpha, beta)?;
        Self::nig(alpha, beta, mu, delta)
    }

    pub fn logistic(location: f64, scale: f64) -> Result<Self> {
        Ok(Self::with(Family::Logistic, finite("location", location)?, positive("scale", scale)?))
    }

    pub fn laplace(location: f64, scale: f64) -> Result<Self> {
        Ok(Self::with(Family::Laplace, finite("location", location)?, positive("scale", scale)?))
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        let a = finite("a", a)?;
        let b = finite("b", b)?;
        if b <= a {
            return Err(Error::domain(format!("uniform needs a < b, got [{a}, {b}]")));
        }
        Ok(Self::with(Family::Uniform, a, b - a))
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        Ok(Self::with(Family::Exponential, 0.0, 1.0 / positive("rate", rate)?))
    }

    /// Mixture of the given models; weights are normalized to sum to one.
    pub fn mixture(components: Vec<(f64, ContinuousModel)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::domain("mixture needs at least one component"));
        }
        let total: f64 = components.iter().map(|(w, _)| *w).sum();
        for (w, _) in &components {
            if !(w.is_finite() && *w > 0.0) {
                return Err(Error::domain(format!("mixture weight {w} must be positive")));
            }
        }
        let components = components.into_iter().map(|(w, m)| (w / total, m)).collect();
        Ok(Self::with(Family::Mixture(Arc::new(components)), 0.0, 1.0))
    }

    /// The law of `c·X + d`; `c` may be negative but not zero.
    pub fn affine(&self, c: f64, d: f64) -> Result<Self> {
        if !(c.is_finite() && c != 0.0) {
            return Err(Error::domain(format!("affine factor must be finite and nonzero, got {c}")));
        }
        Ok(Self::with(self.family.clone(), c * self.shift + finite("d", d)?, c * self.scale))
    }

    /// The law of `-X`.
    pub fn negated(&self) -> Self {
        Self::with(self.family.clone(), -self.shift, -self.scale)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    fn to_ref(&self, x: f64) -> f64 {
        (x - self.shift) / self.scale
    }

    fn flipped(&self) -> bool {
        self.scale < 0.0
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.family.pdf(self.to_ref(x)) / self.scale.abs()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let y = self.to_ref(x);
        if self.flipped() {
            self.family.sf(y)
        } else {
            self.family.cdf(y)
        }
    }

    pub fn sf(&self, x: f64) -> f64 {
        let y = self.to_ref(x);
        if self.flipped() {
            self.family.cdf(y)
        } else {
            self.family.sf(y)
        }
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        Ok(self.quantile_level(Level::new(p)?))
    }

    pub fn quantile_level(&self, level: Level) -> f64 {
        let l = if self.flipped() { level.mirror() } else { level };
        self.shift + self.scale * self.family.quantile(l)
    }

    pub fn support(&self) -> (f64, f64) {
        let (a, b) = self.family.support();
        let (x, y) = (self.shift + self.scale * a, self.shift + self.scale * b);
        let (x, y) = (if x.is_nan() { a } else { x }, if y.is_nan() { b } else { y });
        (x.min(y), x.max(y))
    }

    /// Points where the density is not smooth.
    pub fn kinks(&self) -> Vec<f64> {
        self.family
            .kinks()
            .into_iter()
            .map(|k| self.shift + self.scale * k)
            .collect()
    }

    /// A length comparable to the body of the distribution.
    pub fn spread(&self) -> f64 {
        self.family.spread() * self.scale.abs()
    }

    pub fn has_moment(&self, k: u32) -> bool {
        self.family.has_moment(k)
    }

    fn require_moment(&self, k: u32, name: &'static str) -> Result<()> {
        if self.has_moment(k) {
            Ok(())
        } else {
            Err(Error::moment(self.to_string(), name))
        }
    }

    pub fn mean(&self) -> Result<f64> {
        self.family
            .mean()
            .map(|m| self.shift + self.scale * m)
            .ok_or_else(|| Error::moment(self.to_string(), "mean"))
    }

    pub fn variance(&self) -> Result<f64> {
        self.require_moment(2, "variance")?;
        self.family
            .variance()
            .map(|v| v * self.scale * self.scale)
            .ok_or_else(|| Error::moment(self.to_string(), "variance"))
    }

    pub fn sd(&self) -> Result<f64> {
        self.variance().map(f64::sqrt)
    }

    /// Standardized third central moment.
    pub fn skewness(&self) -> Result<f64> {
        self.require_moment(3, "third moment")?;
        let s = match self.family.skewness() {
            Some(s) => s,
            None => self.standardized_moment_by_quadrature(3)?,
        };
        Ok(s * self.scale.signum())
    }

    /// Standardized fourth central moment (3 for the normal).
    pub fn kurtosis(&self) -> Result<f64> {
        self.require_moment(4, "fourth moment")?;
        match self.family.kurtosis() {
            Some(k) => Ok(k),
            None => self.standardized_moment_by_quadrature(4),
        }
    }

    fn standardized_moment_by_quadrature(&self, k: i32) -> Result<f64> {
        let m = self.mean()?;
        let v = self.variance()?;
        let (lo, hi) = self.support();
        let mut breaks = self.kinks();
        breaks.push(m);
        let c = Quad::default()
            .with_scale(self.spread())
            .integrate_pieces(|x| (x - m).powi(k) * self.pdf(x), lo, hi, &breaks)
            .value;
        Ok(c / v.powf(k as f64 / 2.0))
    }

    pub(crate) fn upper_raw(&self, t: f64) -> f64 {
        let y = self.to_ref(t);
        let s = self.scale.abs();
        if self.flipped() {
            s * self.family.lower(y)
        } else {
            s * self.family.upper(y)
        }
    }

    pub(crate) fn lower_raw(&self, t: f64) -> f64 {
        let y = self.to_ref(t);
        let s = self.scale.abs();
        if self.flipped() {
            s * self.family.upper(y)
        } else {
            s * self.family.lower(y)
        }
    }

    /// Stop-loss transform π(t) = E(X - t)₊.
    pub fn stop_loss(&self, t: f64) -> Result<f64> {
        self.mean()?;
        Ok(self.upper_raw(t))
    }

    /// Lower partial moment E(t - X)₊.
    pub fn lower_stop_loss(&self, t: f64) -> Result<f64> {
        self.mean()?;
        Ok(self.lower_raw(t))
    }

    /// Mean absolute deviation d = E|X - EX| = 2π(EX).
    pub fn mad(&self) -> Result<f64> {
        let m = self.mean()?;
        Ok(self.upper_raw(m) + self.lower_raw(m))
    }

    /// H(p): mean of the upper `1 - p` tail, `(1-p)^{-1} ∫_p^1 q(u) du`.
    pub fn tail_mean(&self, p: f64) -> Result<f64> {
        let m = self.mean()?;
        if p == 0.0 {
            return Ok(m);
        }
        let level = Level::new(p)?;
        let q = self.quantile_level(level);
        Ok(q + self.upper_raw(q) / level.q())
    }
}

/// μ and δ giving NIG(α, β, μ, δ) mean 0 and variance 1.
pub fn nig_standardizing(alpha: f64, beta: f64) -> Result<(f64, f64)> {
    if !(alpha.is_finite() && alpha > 0.0 && beta.is_finite() && beta.abs() < alpha) {
        return Err(Error::domain(format!("NIG needs |beta| < alpha, got beta={beta}, alpha={alpha}")));
    }
    let gamma = (alpha * alpha - beta * beta).sqrt();
    let delta = gamma.powi(3) / (alpha * alpha);
    Ok((-delta * beta / gamma, delta))
}

fn fmt_num(v: f64) -> String {
    format!("{v}")
}

impl fmt::Display for ContinuousModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = (self.shift, self.scale);
        match (&self.family, a == 0.0 && b == 1.0) {
            (Family::Normal, _) if b > 0.0 => write!(f, "normal({}, {})", fmt_num(a), fmt_num(b)),
            (Family::StudentT(t), true) => write!(f, "t({})", fmt_num(t.nu())),
            (Family::StudentT(t), _) if b > 0.0 => {
                write!(f, "t({}, {}, {})", fmt_num(t.nu()), fmt_num(a), fmt_num(b))
            }
            (Family::Lomax { alpha }, _) if a == 0.0 && b > 0.0 => {
                write!(f, "lomax({}, {})", fmt_num(*alpha), fmt_num(b))
            }
            (Family::Nig(s), _) if b > 0.0 => write!(
                f,
                "nig({}, {}, {}, {})",
                fmt_num(s.alpha() / b),
                fmt_num(s.beta() / b),
                fmt_num(a),
                fmt_num(b)
            ),
            (Family::Logistic, _) if b > 0.0 => write!(f, "logistic({}, {})", fmt_num(a), fmt_num(b)),
            (Family::Laplace, _) if b > 0.0 => write!(f, "laplace({}, {})", fmt_num(a), fmt_num(b)),
            (Family::Uniform, _) if b > 0.0 => write!(f, "uniform({}, {})", fmt_num(a), fmt_num(a + b)),
            (Family::Exponential, _) if a == 0.0 && b > 0.0 => write!(f, "exponential({})", fmt_num(1.0 / b)),
            (Family::Mixture(c), true) => {
                write!(f, "mixture(")?;
                for (i, (w, m)) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}*{}", fmt_num(*w), m)?;
                }
                write!(f, ")")
            }
            _ => {
                let base = ContinuousModel::with(self.family.clone(), 0.0, 1.0);
                write!(f, "{} + {}*{}", fmt_num(a), fmt_num(b), base)
            }
        }
    }
}
