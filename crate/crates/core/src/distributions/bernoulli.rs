use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// `a·B` with `B ~ Bernoulli(p)`: mass `1 - p` at 0 and `p` at `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledBernoulli {
    p: f64,
    a: f64,
}

impl ScaledBernoulli {
    pub fn new(p: f64, a: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!("success probability {p} outside (0, 1)")));
        }
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::domain(format!("scale {a} must be positive")));
        }
        Ok(ScaledBernoulli { p, a })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn mean(&self) -> f64 {
        self.p * self.a
    }

    pub fn support(&self) -> (f64, f64) {
        (0.0, self.a)
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if t < 0.0 {
            0.0
        } else if t < self.a {
            1.0 - self.p
        } else {
            1.0
        }
    }

    /// E(X - t)₊
    pub fn stop_loss(&self, t: f64) -> f64 {
        let (p, a) = (self.p, self.a);
        if t <= 0.0 {
            p * a - t
        } else if t < a {
            p * (a - t)
        } else {
            0.0
        }
    }

    /// E(t - X)₊
    pub fn lower_stop_loss(&self, t: f64) -> f64 {
        let (p, a) = (self.p, self.a);
        if t <= 0.0 {
            0.0
        } else if t < a {
            (1.0 - p) * t
        } else {
            t - p * a
        }
    }

    /// Expectile by the closed form `αpa / ((1-α) + p(2α - 1))`.
    pub fn expectile(&self, alpha: f64) -> f64 {
        let p = self.p;
        alpha * p * self.a / ((1.0 - alpha) + p * (2.0 * alpha - 1.0))
    }

    /// Expectile cdf on `[0, a]`: `t(1-p) / (pa + t(1-2p))`.
    pub fn expectile_cdf(&self, t: f64) -> f64 {
        let (p, a) = (self.p, self.a);
        if t <= 0.0 {
            0.0
        } else if t >= a {
            1.0
        } else {
            t * (1.0 - p) / (p * a + t * (1.0 - 2.0 * p))
        }
    }

    /// `e_Y(F̆_X(t))` for `t ∈ [0, a_X]`, with `self = X`.
    pub fn expectile_composite(&self, other: &ScaledBernoulli, t: f64) -> f64 {
        let (px, ax) = (self.p, self.a);
        let (py, ay) = (other.p, other.a);
        py * (1.0 - px) * ay * t / (px * (1.0 - py) * ax + t * (py - px))
    }

    /// Derivative of [`Self::expectile_composite`] in `t`.
    pub fn expectile_composite_slope(&self, other: &ScaledBernoulli, t: f64) -> f64 {
        let (px, ax) = (self.p, self.a);
        let (py, ay) = (other.p, other.a);
        let c = px * (1.0 - py) * ax;
        let den = c + t * (py - px);
        py * (1.0 - px) * ay * c / (den * den)
    }
}
