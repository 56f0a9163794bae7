//! Standard Student t distribution (location 0, scale 1).

use super::Level;
use crate::roots::{expand_bracket, newton_bisect_from, Tolerance};
use crate::special::norm_quantile;
use statrs::function::beta::beta_reg;
use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct StudentT {
    nu: f64,
    ln_norm: f64,
}

impl StudentT {
    pub fn new(nu: f64) -> Self {
        let ln_norm = ln_gamma(0.5 * (nu + 1.0)) - ln_gamma(0.5 * nu) - 0.5 * (nu * PI).ln();
        StudentT { nu, ln_norm }
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn pdf(&self, t: f64) -> f64 {
        (self.ln_norm - 0.5 * (self.nu + 1.0) * (t * t / self.nu).ln_1p()).exp()
    }

    /// `P(|T| <= t)` by the finite trigonometric series for integer ν.
    fn central_mass_integer(&self, t: f64) -> Option<f64> {
        let nu = self.nu;
        if !(nu.fract() == 0.0 && nu <= 200.0) {
            return None;
        }
        let theta = (t.abs() / nu.sqrt()).atan();
        let (sin, cos) = theta.sin_cos();
        let c2 = cos * cos;
        let n = nu as u32;
        // Coefficients ratio (j+1)/(j+2) from j = 1 (odd ν) or j = 0 (even ν).
        let (mut term, mut sum) = (1.0, 0.0);
        let mut j = n % 2;
        while j + 2 <= n {
            sum += term;
            term *= c2 * (j as f64 + 1.0) / (j as f64 + 2.0);
            j += 2;
        }
        Some(if n % 2 == 1 {
            2.0 / PI * (theta + sin * cos * sum)
        } else {
            sin * sum
        })
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if let Some(a) = self.central_mass_integer(t) {
            if a <= 0.9 {
                return 0.5 + 0.5 * a.copysign(t);
            }
        }
        let nu = self.nu;
        let t2 = t * t;
        if t2 < nu {
            // Central region: I_{t²/(ν+t²)}(1/2, ν/2) avoids 1 - I cancellation.
            let half = 0.5 * beta_reg(0.5, 0.5 * nu, t2 / (nu + t2));
            if t < 0.0 {
                0.5 - half
            } else {
                0.5 + half
            }
        } else {
            let tail = 0.5 * beta_reg(0.5 * nu, 0.5, nu / (nu + t2));
            if t < 0.0 {
                tail
            } else {
                1.0 - tail
            }
        }
    }

    pub fn sf(&self, t: f64) -> f64 {
        self.cdf(-t)
    }

    /// E(T - t)₊ for ν > 1.
    pub fn upper_partial(&self, t: f64) -> f64 {
        if t < 0.0 {
            return -t + self.upper_partial(-t);
        }
        let nu = self.nu;
        (nu + t * t) / (nu - 1.0) * self.pdf(t) - t * self.sf(t)
    }

    /// Initial guess from the Cornish–Fisher expansion around the normal quantile.
    fn quantile_guess(&self, level: Level) -> f64 {
        let z = norm_quantile(level.p(), level.q());
        let nu = self.nu;
        let z2 = z * z;
        let g1 = (z2 + 1.0) * z / 4.0;
        let g2 = ((5.0 * z2 + 16.0) * z2 + 3.0) * z / 96.0;
        let g3 = (((3.0 * z2 + 19.0) * z2 + 17.0) * z2 - 15.0) * z / 384.0;
        let g4 = ((((79.0 * z2 + 776.0) * z2 + 1482.0) * z2 - 1920.0) * z2 - 945.0) * z / 92160.0;
        z + g1 / nu + g2 / nu.powi(2) + g3 / nu.powi(3) + g4 / nu.powi(4)
    }

    pub fn quantile(&self, level: Level) -> f64 {
        if level.p() == 0.5 {
            return 0.0;
        }
        if !level.is_lower() {
            return -self.quantile(level.mirror());
        }
        let nu = self.nu;
        if nu == 1.0 {
            return -1.0 / (PI * level.p()).tan();
        }
        if nu == 2.0 {
            let p = level.p();
            let a = 4.0 * p * level.q();
            return -2.0 * (0.5 - p) * (2.0 / a).sqrt();
        }
        // Lower tail, t < 0: solve ln F(t) = ln p.
        let ln_p = level.ln_p();
        let g = |t: f64| self.cdf(t).ln() - ln_p;
        let mut guess = self.quantile_guess(level);
        if !(guess.is_finite() && guess < 0.0) {
            guess = -1.0;
        }
        let (lo, hi) = expand_bracket(g, 1.05 * guess, (0.95 * guess).min(0.0), f64::NEG_INFINITY, 0.0);
        let tol = Tolerance {
            abs: 1e-300,
            rel: 4.0 * f64::EPSILON,
        };
        newton_bisect_from(
            "student t quantile",
            |t| {
                let c = self.cdf(t);
                (c.ln() - ln_p, self.pdf(t) / c)
            },
            lo,
            hi,
            Some(guess),
            tol,
        )
        .unwrap_or(guess)
    }

    pub fn variance(&self) -> Option<f64> {
        (self.nu > 2.0).then(|| self.nu / (self.nu - 2.0))
    }

    pub fn kurtosis(&self) -> Option<f64> {
        (self.nu > 4.0).then(|| 3.0 + 6.0 / (self.nu - 4.0))
    }
}
