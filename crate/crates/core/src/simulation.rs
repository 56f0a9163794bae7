//! Monte Carlo checks of the asymptotic variances and of strong consistency.
//!
//! Replication `i` of an experiment with seed `s` draws from the stream
//! seeded by `derive_seed(s, i)`. Replications run in parallel and are
//! collected in index order, so results do not depend on the thread count.

use crate::asymptotics::Estimator;
use crate::distributions::{derive_seed, draw, parse_model, ContinuousModel, Sample};
use crate::error::{Error, Result};
use crate::expectiles::{empirical_ier, empirical_iqr};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;

/// Which estimator an experiment runs; the level comes from the config.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EstimatorKind {
    Ier,
    Iqr,
    Sd,
    Mad,
    Gini,
}

impl EstimatorKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ier" | "e" => Ok(EstimatorKind::Ier),
            "iqr" | "q" => Ok(EstimatorKind::Iqr),
            "sd" => Ok(EstimatorKind::Sd),
            "mad" | "d" => Ok(EstimatorKind::Mad),
            "gini" | "g" => Ok(EstimatorKind::Gini),
            other => Err(Error::Config(format!(
                "unknown estimator '{other}' (expected ier, iqr, sd, mad or gini)"
            ))),
        }
    }

    pub fn at(self, alpha: f64) -> Estimator {
        match self {
            EstimatorKind::Ier => Estimator::Ier(alpha),
            EstimatorKind::Iqr => Estimator::Iqr(alpha),
            EstimatorKind::Sd => Estimator::Sd,
            EstimatorKind::Mad => Estimator::Mad,
            EstimatorKind::Gini => Estimator::Gini,
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EstimatorKind::Ier => "ier",
            EstimatorKind::Iqr => "iqr",
            EstimatorKind::Sd => "sd",
            EstimatorKind::Mad => "mad",
            EstimatorKind::Gini => "gini",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    /// Distribution spec, e.g. `t(5)`.
    pub model: String,
    pub estimator: EstimatorKind,
    pub alpha: f64,
    pub n: usize,
    pub replications: usize,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            model: "normal".into(),
            estimator: EstimatorKind::Ier,
            alpha: 0.25,
            n: 20_000,
            replications: 2_000,
            seed: 20_240_611,
        }
    }
}

impl ExperimentConfig {
    pub const KEYS: [&'static str; 6] = ["model", "estimator", "alpha", "n", "replications", "seed"];

    /// Parse `key = value` lines over the defaults. Blank lines and `#`
    /// comments are skipped; unknown keys are rejected.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            cfg.set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {}", lineno + 1, strip_prefix(&e))))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Set one field from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::Config(format!("{key}: cannot parse '{value}'")))
        }
        match key {
            "model" => self.model = value.to_string(),
            "estimator" => self.estimator = EstimatorKind::parse(value)?,
            "alpha" => self.alpha = num(key, value)?,
            "n" => self.n = num(key, value)?,
            "replications" | "r" => self.replications = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            _ => {
                return Err(Error::Config(format!(
                    "unknown key '{key}' (expected one of {})",
                    Self::KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Config(format!("n must be at least 2, got {}", self.n)));
        }
        if self.replications < 1 {
            return Err(Error::Config("replications must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 0.5) {
            return Err(Error::Config(format!("alpha must lie in (0, 1/2), got {}", self.alpha)));
        }
        parse_model(&self.model)?;
        Ok(())
    }

    pub fn estimator(&self) -> Estimator {
        self.estimator.at(self.alpha)
    }

    /// The config as `key = value` lines, in the form [`parse`](Self::parse) reads.
    pub fn to_kv(&self) -> String {
        format!(
            "model = {}\nestimator = {}\nalpha = {}\nn = {}\nreplications = {}\nseed = {}\n",
            self.model, self.estimator, self.alpha, self.n, self.replications, self.seed
        )
    }
}

fn strip_prefix(e: &Error) -> String {
    match e {
        Error::Config(m) => m.clone(),
        other => other.to_string(),
    }
}

/// Estimate of `estimator`'s target from a sorted sample.
pub fn estimate(estimator: Estimator, sample: &Sample) -> Result<f64> {
    let xs = sample.values();
    let n = xs.len() as f64;
    if n < 2.0 {
        return Err(Error::domain("estimators need at least two observations"));
    }
    match estimator {
        Estimator::Ier(a) => empirical_ier(sample, a),
        Estimator::Iqr(a) => empirical_iqr(sample, a),
        Estimator::Sd => {
            let m = sample.mean();
            Ok((xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt())
        }
        Estimator::Mad => {
            let m = sample.mean();
            Ok(xs.iter().map(|x| (x - m).abs()).sum::<f64>() / n)
        }
        Estimator::Gini => {
            // Σ_{i<j} |x_i - x_j| over pairs, from the order statistics.
            let s: f64 = xs
                .iter()
                .enumerate()
                .map(|(i, x)| (2.0 * i as f64 + 1.0 - n) * x)
                .sum();
            Ok(2.0 * s / (n * (n - 1.0)))
        }
    }
}

/// Mean, variance (divisor `len - 1`), skewness and excess kurtosis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    /// Standard error of `variance` from the fourth central moment.
    pub variance_se: f64,
}

impl Summary {
    pub fn of(xs: &[f64]) -> Summary {
        let r = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / r;
        let moment = |k: i32| xs.iter().map(|x| (x - mean).powi(k)).sum::<f64>() / r;
        let (m2, m3, m4) = (moment(2), moment(3), moment(4));
        let variance = if r > 1.0 { m2 * r / (r - 1.0) } else { 0.0 };
        Summary {
            mean,
            variance,
            skewness: m3 / m2.powf(1.5),
            excess_kurtosis: m4 / (m2 * m2) - 3.0,
            variance_se: ((m4 - m2 * m2).max(0.0) / r).sqrt(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    /// One estimate per replication, in replication order.
    pub estimates: Vec<f64>,
    pub mean: f64,
    /// `n` times the variance of the estimates.
    pub scaled_variance: f64,
    /// Monte Carlo standard error of `scaled_variance`.
    pub scaled_variance_se: f64,
    /// The population value of the estimated measure.
    pub target: f64,
    /// The asymptotic variance the scaled variance should approach.
    pub asv: f64,
    /// `scaled_variance / asv - 1`
    pub relative_error: f64,
    /// `√n (estimate - target) / √asv`
    pub z_scores: Vec<f64>,
    pub z_summary: Summary,
}

fn replicate<T, F>(replications: usize, seed: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    (0..replications as u64)
        .into_par_iter()
        .map(|i| f(derive_seed(seed, i)))
        .collect()
}

/// Replicate the estimator on samples of size `n` and compare `n·Var` with
/// the analytic asymptotic variance.
pub fn run_clt_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let model = parse_model(&config.model)?;
    let estimator = config.estimator();
    let asv = estimator.asv(&model)?.ok_or_else(|| {
        Error::Config(format!("{estimator} has no finite asymptotic variance under {model}"))
    })?;
    let target = estimator.measure(&model)?;
    let estimates = replicate(config.replications, config.seed, |s| {
        estimate(estimator, &Sample::new(draw(&model, config.n, s)?)?)
    })?;
    let n = config.n as f64;
    let summary = Summary::of(&estimates);
    let scaled_variance = n * summary.variance;
    let z_scores: Vec<f64> = estimates
        .iter()
        .map(|e| n.sqrt() * (e - target) / asv.sqrt())
        .collect();
    Ok(ExperimentResult {
        config: config.clone(),
        mean: summary.mean,
        scaled_variance,
        scaled_variance_se: n * summary.variance_se,
        target,
        asv,
        relative_error: scaled_variance / asv - 1.0,
        z_summary: Summary::of(&z_scores),
        z_scores,
        estimates,
    })
}

/// Mean absolute IER error along a ladder of sample sizes.
#[derive(Debug, Clone, Serialize)]
pub struct ErrorCurve {
    pub model: String,
    pub alpha: f64,
    pub target: f64,
    pub sizes: Vec<usize>,
    /// Mean over sample paths of `|Ê_{α,n} - E_α|`.
    pub mean_abs_error: Vec<f64>,
    /// Least-squares slope of log error on log n.
    pub slope: f64,
}

impl ErrorCurve {
    pub fn is_decreasing(&self) -> bool {
        self.mean_abs_error.windows(2).all(|w| w[1] < w[0])
    }
}

pub const CONSISTENCY_LADDER: [usize; 4] = [100, 1_000, 10_000, 100_000];

/// Follow `paths` sample paths; each path is one stream whose prefixes of
/// length `sizes[k]` give the estimates at rung `k`.
pub fn run_consistency_experiment(
    model: &ContinuousModel,
    alpha: f64,
    sizes: &[usize],
    paths: usize,
    seed: u64,
) -> Result<ErrorCurve> {
    if sizes.len() < 2 || sizes.windows(2).any(|w| w[1] <= w[0]) || sizes[0] < 2 {
        return Err(Error::Config("the ladder needs at least two increasing sizes, all ≥ 2".into()));
    }
    if paths < 1 {
        return Err(Error::Config("at least one sample path is needed".into()));
    }
    let target = crate::expectiles::ier(model, alpha)?;
    let longest = *sizes.last().expect("nonempty ladder");
    let errors = replicate(paths, seed, |s| {
        let xs = draw(model, longest, s)?;
        sizes
            .iter()
            .map(|&n| Ok((empirical_ier(&Sample::new(xs[..n].to_vec())?, alpha)? - target).abs()))
            .collect::<Result<Vec<f64>>>()
    })?;
    let mean_abs_error: Vec<f64> = (0..sizes.len())
        .map(|k| errors.iter().map(|e| e[k]).sum::<f64>() / paths as f64)
        .collect();
    let lx: Vec<f64> = sizes.iter().map(|&n| (n as f64).ln()).collect();
    let ly: Vec<f64> = mean_abs_error.iter().map(|e| e.ln()).collect();
    Ok(ErrorCurve {
        model: model.to_string(),
        alpha,
        target,
        sizes: sizes.to_vec(),
        mean_abs_error,
        slope: ls_slope(&lx, &ly),
    })
}

fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, Serialize)]
pub struct BatteryCell {
    pub model: String,
    pub estimator: String,
    /// Analytic standardized ASV, `None` when infinite.
    pub analytic: Option<f64>,
    /// `n·Var(δ̂) / δ²` over the replications.
    pub monte_carlo: f64,
    pub monte_carlo_se: f64,
    pub relative_deviation: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BatteryTable {
    pub n: usize,
    pub replications: usize,
    pub seed: u64,
    pub cells: Vec<BatteryCell>,
    pub max_relative_deviation: f64,
}

impl BatteryTable {
    pub fn cell(&self, model: &str, estimator: Estimator) -> Option<&BatteryCell> {
        let e = estimator.to_string();
        self.cells.iter().find(|c| c.model == model && c.estimator == e)
    }
}

/// Monte Carlo standardized ASVs next to the analytic ones. All estimators
/// of a model share its samples; model `m` uses the seed
/// `derive_seed(seed, m)` for its replications.
pub fn run_asv_battery(
    models: &[ContinuousModel],
    estimators: &[Estimator],
    n: usize,
    replications: usize,
    seed: u64,
) -> Result<BatteryTable> {
    if n < 2 || replications < 2 {
        return Err(Error::Config("the battery needs n ≥ 2 and at least two replications".into()));
    }
    let mut cells = Vec::new();
    for (m, model) in models.iter().enumerate() {
        let per_rep = replicate(replications, derive_seed(seed, m as u64), |s| {
            let sample = Sample::new(draw(model, n, s)?)?;
            estimators.iter().map(|&e| estimate(e, &sample)).collect::<Result<Vec<f64>>>()
        })?;
        for (j, &e) in estimators.iter().enumerate() {
            let column: Vec<f64> = per_rep.iter().map(|r| r[j]).collect();
            let s = Summary::of(&column);
            let delta = e.measure(model)?;
            let scale = n as f64 / (delta * delta);
            let analytic = e.standardized_asv(model)?;
            let monte_carlo = scale * s.variance;
            cells.push(BatteryCell {
                model: model.to_string(),
                estimator: e.to_string(),
                analytic,
                monte_carlo,
                monte_carlo_se: scale * s.variance_se,
                relative_deviation: analytic.map(|a| monte_carlo / a - 1.0),
            });
        }
    }
    let max_relative_deviation = cells
        .iter()
        .filter_map(|c| c.relative_deviation)
        .fold(0.0, |m: f64, d| m.max(d.abs()));
    Ok(BatteryTable {
        n,
        replications,
        seed,
        cells,
        max_relative_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trip_and_validation() {
        let text = "# clt run\nmodel = t(5)\nestimator = ier\nalpha = 0.1\nn = 500\nreplications = 7\nseed = 3\n";
        let c = ExperimentConfig::parse(text).unwrap();
        assert_eq!(c.model, "t(5)");
        assert_eq!(c.replications, 7);
        assert_eq!(ExperimentConfig::parse(&c.to_kv()).unwrap(), c);
        for bad in ["n = 1", "replications = 0", "alpha = 0.5", "colour = red", "model = t(", "n 5"] {
            assert!(ExperimentConfig::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn estimators_on_a_small_sample() {
        let s = Sample::new(vec![3.0, 1.0, 4.0, 1.0, 5.0]).unwrap();
        // pairwise |differences| sum to 22 over 10 pairs
        assert!((estimate(Estimator::Gini, &s).unwrap() - 2.2).abs() < 1e-15);
        assert!((estimate(Estimator::Mad, &s).unwrap() - 1.44).abs() < 1e-15);
        assert!((estimate(Estimator::Sd, &s).unwrap() - 3.2f64.sqrt()).abs() < 1e-15);
        assert_eq!(estimate(Estimator::Iqr(0.25), &s).unwrap(), 4.0 - 1.0);
    }

    #[test]
    fn experiments_are_deterministic() {
        let c = ExperimentConfig {
            model: "lomax(3,2)".into(),
            n: 200,
            replications: 16,
            ..Default::default()
        };
        let a = run_clt_experiment(&c).unwrap();
        let b = run_clt_experiment(&c).unwrap();
        assert_eq!(a.estimates, b.estimates);
        assert_eq!(a.estimates.len(), 16);
        let other = run_clt_experiment(&ExperimentConfig { seed: 1, ..c }).unwrap();
        assert_ne!(a.estimates, other.estimates);
    }

    #[test]
    fn infinite_asv_is_a_config_error() {
        let c = ExperimentConfig {
            model: "t(2)".into(),
            ..Default::default()
        };
        assert!(matches!(run_clt_experiment(&c), Err(Error::Config(_))));
    }
}
