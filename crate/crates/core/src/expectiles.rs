//! Expectiles, the expectile distribution function and interexpectile /
//! interquantile ranges, analytic and empirical.

use crate::distributions::{ContinuousModel, Level, Sample, ScaledBernoulli};
use crate::error::{Error, Result};
use crate::roots::{newton_bisect, Tolerance};
use std::collections::BTreeMap;
use std::sync::Mutex;

/// A law with finite mean whose partial first moments are available.
pub trait PartialMoments {
    fn mean(&self) -> Result<f64>;
    /// E(X - t)₊
    fn upper_pm(&self, t: f64) -> f64;
    /// E(t - X)₊
    fn lower_pm(&self, t: f64) -> f64;
    fn cdf(&self, t: f64) -> f64;
    fn support(&self) -> (f64, f64);
    /// Typical length of the distribution body.
    fn spread(&self) -> f64;
}

impl PartialMoments for ContinuousModel {
    fn mean(&self) -> Result<f64> {
        ContinuousModel::mean(self)
    }
    fn upper_pm(&self, t: f64) -> f64 {
        self.upper_raw(t)
    }
    fn lower_pm(&self, t: f64) -> f64 {
        self.lower_raw(t)
    }
    fn cdf(&self, t: f64) -> f64 {
        ContinuousModel::cdf(self, t)
    }
    fn support(&self) -> (f64, f64) {
        ContinuousModel::support(self)
    }
    fn spread(&self) -> f64 {
        ContinuousModel::spread(self)
    }
}

impl PartialMoments for ScaledBernoulli {
    fn mean(&self) -> Result<f64> {
        Ok(ScaledBernoulli::mean(self))
    }
    fn upper_pm(&self, t: f64) -> f64 {
        self.stop_loss(t)
    }
    fn lower_pm(&self, t: f64) -> f64 {
        self.lower_stop_loss(t)
    }
    fn cdf(&self, t: f64) -> f64 {
        ScaledBernoulli::cdf(self, t)
    }
    fn support(&self) -> (f64, f64) {
        ScaledBernoulli::support(self)
    }
    fn spread(&self) -> f64 {
        self.a()
    }
}

/// The identification function of the α-expectile,
/// `I_α(x, y) = α(y - x)` for `y ≥ x` and `(1 - α)(y - x)` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentificationFn {
    alpha: f64,
}

impl IdentificationFn {
    pub fn new(alpha: f64) -> Result<Self> {
        Level::new(alpha)?;
        Ok(IdentificationFn { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        if y >= x {
            self.alpha * (y - x)
        } else {
            (1.0 - self.alpha) * (y - x)
        }
    }
}

/// Expectile distribution function `F̆(t) = E(t-X)₊ / (E(t-X)₊ + E(X-t)₊)`.
pub fn expectile_cdf<M: PartialMoments + ?Sized>(model: &M, t: f64) -> Result<f64> {
    model.mean()?;
    let l = model.lower_pm(t);
    let u = model.upper_pm(t);
    Ok(if l + u > 0.0 { l / (l + u) } else { 0.5 })
}

/// α-expectile of `model`.
pub fn expectile<M: PartialMoments + ?Sized>(model: &M, alpha: f64) -> Result<f64> {
    expectile_level(model, Level::new(alpha)?)
}

/// Expectile at a level carried with its complement, for levels near 1.
///
/// Solves `ln F̆(t) = ln α` below the mean and `ln(1 - F̆(t)) = ln(1 - α)`
/// above it, so tail levels keep relative accuracy.
pub fn expectile_level<M: PartialMoments + ?Sized>(model: &M, level: Level) -> Result<f64> {
    let mu = model.mean()?;
    if level.p() == 0.5 {
        return Ok(mu);
    }
    let (lo_sup, hi_sup) = model.support();
    let spread = model.spread();
    let lower = level.is_lower();
    // Residual, increasing in t, and its derivative.
    let target = if lower { level.ln_p() } else { level.ln_q() };
    let g = |t: f64| -> (f64, f64) {
        let l = model.lower_pm(t);
        let u = model.upper_pm(t);
        let f = model.cdf(t);
        let slope = f * u + l * (1.0 - f);
        if lower {
            ((l / (l + u)).ln() - target, slope / ((l + u) * l))
        } else {
            (target - (u / (l + u)).ln(), slope / ((l + u) * u))
        }
    };
    let past_root = |v: f64| (lower && v <= 0.0) || (!lower && v >= 0.0);
    // Bracket by geometric expansion away from the mean; `near` is the last
    // point short of the root.
    let mut step = spread;
    let mut near = mu;
    let mut far = mu;
    let mut edge = None;
    for _ in 0..2100 {
        let next = if lower { mu - step } else { mu + step };
        if lower && next <= lo_sup {
            edge = Some(lo_sup);
            break;
        }
        if !lower && next >= hi_sup {
            edge = Some(hi_sup);
            break;
        }
        far = next;
        if past_root(g(far).0) {
            break;
        }
        near = far;
        step *= 2.0;
    }
    // A finite support end was reached: close in on it geometrically, so
    // that levels far in the tail get a tight bracket.
    if let Some(end) = edge {
        far = end;
        let mut h = 0.5;
        while h > 0.0 {
            let cand = end + (near - end) * h;
            if cand == end {
                break;
            }
            if past_root(g(cand).0) {
                far = cand;
                break;
            }
            near = cand;
            h *= 0.5;
        }
    }
    let (a, b) = if lower { (far, near) } else { (near, far) };
    newton_bisect(
        "expectile",
        g,
        a,
        b,
        Tolerance {
            abs: 1e-300,
            rel: 4.0 * f64::EPSILON,
        },
    )
}

fn below_half(alpha: f64) -> Result<Level> {
    if alpha > 0.0 && alpha < 0.5 {
        Level::new(alpha)
    } else {
        Err(Error::domain(format!("range level {alpha} must lie in (0, 1/2)")))
    }
}

/// Interexpectile range `e(1 - α) - e(α)`, `0 < α < 1/2`.
pub fn ier<M: PartialMoments + ?Sized>(model: &M, alpha: f64) -> Result<f64> {
    let l = below_half(alpha)?;
    Ok(expectile_level(model, l.mirror())? - expectile_level(model, l)?)
}

/// Interquantile range `q(1 - α) - q(α)`, `0 < α < 1/2`.
pub fn iqr(model: &ContinuousModel, alpha: f64) -> Result<f64> {
    let l = below_half(alpha)?;
    Ok(model.quantile_level(l.mirror()) - model.quantile_level(l))
}

/// Cached map α ↦ e(α) for one model. The cache is behind a lock, and each
/// entry is computed exactly as a cold call would, so shared readers always
/// see the same values.
pub struct ExpectileCurve<'a> {
    model: &'a ContinuousModel,
    cache: Mutex<BTreeMap<u64, f64>>,
}

impl<'a> ExpectileCurve<'a> {
    pub fn new(model: &'a ContinuousModel) -> Result<Self> {
        model.mean()?;
        Ok(ExpectileCurve {
            model,
            cache: Mutex::new(BTreeMap::new()),
        })
    }

    /// Curve pre-filled on `grid`.
    pub fn on_grid(model: &'a ContinuousModel, grid: &[f64]) -> Result<Self> {
        let c = Self::new(model)?;
        for &a in grid {
            c.expectile(a)?;
        }
        Ok(c)
    }

    pub fn model(&self) -> &ContinuousModel {
        self.model
    }

    pub fn expectile(&self, alpha: f64) -> Result<f64> {
        let key = alpha.to_bits();
        if let Some(&v) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(v);
        }
        let v = expectile(self.model, alpha)?;
        self.cache.lock().expect("cache lock").insert(key, v);
        Ok(v)
    }

    /// F̆ at `t`, the inverse of the curve.
    pub fn cdf(&self, t: f64) -> f64 {
        expectile_cdf(self.model, t).expect("mean checked at construction")
    }

    pub fn ier(&self, alpha: f64) -> Result<f64> {
        below_half(alpha)?;
        Ok(self.expectile(1.0 - alpha)? - self.expectile(alpha)?)
    }

    /// Cached `(α, e(α))` pairs in increasing α.
    pub fn entries(&self) -> Vec<(f64, f64)> {
        let mut v: Vec<(f64, f64)> = self
            .cache
            .lock()
            .expect("cache lock")
            .iter()
            .map(|(&k, &e)| (f64::from_bits(k), e))
            .collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v
    }
}

/// The default α grid: `n` equispaced points on `[0.005, 0.995]`.
pub fn alpha_grid(n: usize) -> Vec<f64> {
    equispaced(0.005, 0.995, n)
}

/// `n` equally spaced points from `lo` to `hi` inclusive.
pub fn equispaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Prefix sums of a sorted sample, shared by repeated expectile solves.
pub struct SampleMoments<'a> {
    xs: &'a [f64],
    prefix: Vec<f64>,
}

impl<'a> SampleMoments<'a> {
    pub fn new(sample: &'a Sample) -> Self {
        let xs = sample.values();
        let mut prefix = Vec::with_capacity(xs.len() + 1);
        let mut acc = 0.0;
        prefix.push(0.0);
        for &x in xs {
            acc += x;
            prefix.push(acc);
        }
        SampleMoments { xs, prefix }
    }

    /// n·Ĝ(t) for t equal to the j-th order statistic (0-based).
    fn ident_at(&self, j: usize, alpha: f64) -> f64 {
        let n = self.xs.len();
        let t = self.xs[j];
        let below = self.prefix[j];
        let above = self.prefix[n] - below;
        alpha * (above - (n - j) as f64 * t) - (1.0 - alpha) * (j as f64 * t - below)
    }

    /// Empirical α-expectile: the root of the piecewise-linear sample
    /// identification function, solved exactly on its linear piece.
    pub fn expectile(&self, alpha: f64) -> f64 {
        let n = self.xs.len();
        if n == 1 {
            return self.xs[0];
        }
        // Largest j with Ĝ(x_j) ≥ 0; Ĝ is nonincreasing.
        let (mut lo, mut hi) = (0usize, n - 1);
        if self.ident_at(hi, alpha) >= 0.0 {
            return self.xs[hi];
        }
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.ident_at(mid, alpha) >= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let k = lo + 1; // observations strictly below the root
        let below = self.prefix[k];
        let above = self.prefix[n] - below;
        let t = (alpha * above + (1.0 - alpha) * below) / (alpha * (n - k) as f64 + (1.0 - alpha) * k as f64);
        t.clamp(self.xs[lo], self.xs[hi])
    }
}

/// Empirical α-expectile, `0 < α < 1`. At α = 1/2 this is the sample mean.
pub fn empirical_expectile(sample: &Sample, alpha: f64) -> Result<f64> {
    Level::new(alpha)?;
    if alpha == 0.5 {
        return Ok(sample.mean());
    }
    Ok(SampleMoments::new(sample).expectile(alpha))
}

/// Empirical interexpectile range.
pub fn empirical_ier(sample: &Sample, alpha: f64) -> Result<f64> {
    below_half(alpha)?;
    let m = SampleMoments::new(sample);
    Ok(m.expectile(1.0 - alpha) - m.expectile(alpha))
}

/// Type-1 empirical quantile: the left-continuous inverse of the empirical
/// cdf, `X_(⌈np⌉)`.
pub fn empirical_quantile(sample: &Sample, p: f64) -> Result<f64> {
    Level::new(p)?;
    let xs = sample.values();
    let n = xs.len();
    let k = ((n as f64 * p).ceil() as usize).clamp(1, n);
    Ok(xs[k - 1])
}

/// Empirical interquantile range with type-1 quantiles.
pub fn empirical_iqr(sample: &Sample, alpha: f64) -> Result<f64> {
    below_half(alpha)?;
    Ok(empirical_quantile(sample, 1.0 - alpha)? - empirical_quantile(sample, alpha)?)
}
