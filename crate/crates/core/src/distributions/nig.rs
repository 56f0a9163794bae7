//! Normal inverse Gaussian distribution with location 0 and scale δ = 1.
//!
//! There is no closed form for the distribution function, so construction
//! tabulates, on a grid covering the bulk and both tails, the cumulative
//! mass from each side and the two partial first moments `E(t - X)₊`,
//! `E(X - t)₊`. Queries then integrate the density over a fraction of one
//! grid cell only. Both tails are accumulated from their own end so relative
//! accuracy is kept far out.

use super::Level;
use crate::quad::{gauss10, Quad};
use crate::roots::{newton_bisect_from, Tolerance};
use crate::special::bessel_k1e;
use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct NigShape {
    alpha: f64,
    beta: f64,
    gamma: f64,
    nodes: Vec<f64>,
    /// ∫_{-∞}^{x_k} f
    cum_left: Vec<f64>,
    /// ∫_{x_k}^{∞} f
    cum_right: Vec<f64>,
    /// E(x_k - X)₊
    lower_pm: Vec<f64>,
    /// E(X - x_k)₊
    upper_pm: Vec<f64>,
}

fn cell_quad() -> Quad {
    Quad::with_tolerances(0.0, 1e-14)
}

impl NigShape {
    /// Shape with tail parameter `alpha > |beta|`, location 0 and scale 1.
    pub fn new(alpha: f64, beta: f64) -> Self {
        let gamma = (alpha * alpha - beta * beta).sqrt();
        let mut shape = NigShape {
            alpha,
            beta,
            gamma,
            nodes: Vec::new(),
            cum_left: Vec::new(),
            cum_right: Vec::new(),
            lower_pm: Vec::new(),
            upper_pm: Vec::new(),
        };
        shape.build_table();
        shape
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn mean(&self) -> f64 {
        self.beta / self.gamma
    }

    pub fn variance(&self) -> f64 {
        self.alpha * self.alpha / self.gamma.powi(3)
    }

    pub fn skewness(&self) -> f64 {
        3.0 * self.beta / (self.alpha * self.gamma.sqrt())
    }

    pub fn kurtosis(&self) -> f64 {
        3.0 + 3.0 * (1.0 + 4.0 * self.beta * self.beta / (self.alpha * self.alpha)) / self.gamma
    }

    pub fn sd(&self) -> f64 {
        self.variance().sqrt()
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let s = x.hypot(1.0);
        let z = self.alpha * s;
        self.alpha / PI * bessel_k1e(z) / s * (self.gamma + self.beta * x - z).exp()
    }

    fn build_table(&mut self) {
        let m = self.mean();
        let sd = self.sd();
        let h = (sd / 8.0).min(0.25);
        let body = 12.0 * sd;
        // Grow geometrically into the tails until the density is negligible.
        let mut right = vec![m];
        let mut step = h;
        loop {
            let last = *right.last().unwrap();
            let next = last + step;
            right.push(next);
            if next - m > body {
                step *= 1.15;
            }
            if next - m > body && self.pdf(next) * (next - m) < 1e-300 {
                break;
            }
        }
        let mut left = vec![m];
        let mut step = h;
        loop {
            let last = *left.last().unwrap();
            let next = last - step;
            left.push(next);
            if m - next > body {
                step *= 1.15;
            }
            if m - next > body && self.pdf(next) * (m - next) < 1e-300 {
                break;
            }
        }
        left.reverse();
        left.pop();
        left.extend(right);
        let nodes = left;
        let k = nodes.len();

        let q = cell_quad();
        let mut mass = Vec::with_capacity(k - 1);
        let mut from_left = Vec::with_capacity(k - 1); // ∫ (y - x_k) f
        let mut from_right = Vec::with_capacity(k - 1); // ∫ (x_{k+1} - y) f
        for w in nodes.windows(2) {
            let (a, b) = (w[0], w[1]);
            mass.push(q.integrate(|y| self.pdf(y), a, b).value);
            from_left.push(q.integrate(|y| (y - a) * self.pdf(y), a, b).value);
            from_right.push(q.integrate(|y| (b - y) * self.pdf(y), a, b).value);
        }
        let tail = Quad::with_tolerances(0.0, 1e-13).with_scale(sd);
        let x0 = nodes[0];
        let xn = nodes[k - 1];
        let mut cum_left = vec![0.0; k];
        let mut lower_pm = vec![0.0; k];
        cum_left[0] = tail.integrate(|y| self.pdf(y), f64::NEG_INFINITY, x0).value;
        lower_pm[0] = tail
            .integrate(|y| (x0 - y) * self.pdf(y), f64::NEG_INFINITY, x0)
            .value;
        for i in 0..k - 1 {
            let width = nodes[i + 1] - nodes[i];
            cum_left[i + 1] = cum_left[i] + mass[i];
            lower_pm[i + 1] = lower_pm[i] + width * cum_left[i] + from_right[i];
        }
        let mut cum_right = vec![0.0; k];
        let mut upper_pm = vec![0.0; k];
        cum_right[k - 1] = tail.integrate(|y| self.pdf(y), xn, f64::INFINITY).value;
        upper_pm[k - 1] = tail
            .integrate(|y| (y - xn) * self.pdf(y), xn, f64::INFINITY)
            .value;
        for i in (0..k - 1).rev() {
            let width = nodes[i + 1] - nodes[i];
            cum_right[i] = cum_right[i + 1] + mass[i];
            upper_pm[i] = upper_pm[i + 1] + width * cum_right[i + 1] + from_left[i];
        }
        self.nodes = nodes;
        self.cum_left = cum_left;
        self.cum_right = cum_right;
        self.lower_pm = lower_pm;
        self.upper_pm = upper_pm;
    }

    /// Index `k` with `x_k <= x < x_{k+1}`, or `None` outside the table.
    fn cell(&self, x: f64) -> Option<usize> {
        let n = self.nodes.len();
        if !(x >= self.nodes[0] && x < self.nodes[n - 1]) {
            return None;
        }
        let k = self.nodes.partition_point(|&node| node <= x);
        Some(k - 1)
    }

    fn tail_quad(&self) -> Quad {
        Quad::with_tolerances(0.0, 1e-13).with_scale(self.sd())
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self.cell(x) {
            Some(k) if self.cum_left[k] < 0.5 => {
                self.cum_left[k] + cell_quad().integrate(|y| self.pdf(y), self.nodes[k], x).value
            }
            Some(_) => 1.0 - self.sf(x),
            None if x < self.nodes[0] => self
                .tail_quad()
                .integrate(|y| self.pdf(y), f64::NEG_INFINITY, x)
                .value,
            None => 1.0 - self.sf(x),
        }
    }

    pub fn sf(&self, x: f64) -> f64 {
        match self.cell(x) {
            Some(k) if self.cum_right[k + 1] < 0.5 => {
                self.cum_right[k + 1]
                    + cell_quad()
                        .integrate(|y| self.pdf(y), x, self.nodes[k + 1])
                        .value
            }
            Some(_) => 1.0 - self.cdf(x),
            None if x >= *self.nodes.last().unwrap() => self
                .tail_quad()
                .integrate(|y| self.pdf(y), x, f64::INFINITY)
                .value,
            None => 1.0 - self.cdf(x),
        }
    }

    /// E(X - t)₊
    pub fn upper_partial(&self, t: f64) -> f64 {
        match self.cell(t) {
            Some(k) => {
                let b = self.nodes[k + 1];
                self.upper_pm[k + 1]
                    + (b - t) * self.cum_right[k + 1]
                    + cell_quad().integrate(|y| (y - t) * self.pdf(y), t, b).value
            }
            None if t < self.nodes[0] => self.mean() - t + self.lower_partial(t),
            None => self
                .tail_quad()
                .integrate(|y| (y - t) * self.pdf(y), t, f64::INFINITY)
                .value,
        }
    }

    /// E(t - X)₊
    pub fn lower_partial(&self, t: f64) -> f64 {
        match self.cell(t) {
            Some(k) => {
                let a = self.nodes[k];
                self.lower_pm[k]
                    + (t - a) * self.cum_left[k]
                    + cell_quad().integrate(|y| (t - y) * self.pdf(y), a, t).value
            }
            None if t < self.nodes[0] => self
                .tail_quad()
                .integrate(|y| (t - y) * self.pdf(y), f64::NEG_INFINITY, t)
                .value,
            None => t - self.mean() + self.upper_partial(t),
        }
    }

    pub fn quantile(&self, level: Level) -> f64 {
        let n = self.nodes.len();
        if level.is_lower() {
            let p = level.p();
            let k = self.cum_left.partition_point(|&c| c <= p);
            if k == 0 {
                let hi = self.nodes[0];
                let lo = hi - 1.0;
                let (a, _) = crate::roots::expand_bracket(
                    |x| self.cdf(x).ln() - level.ln_p(),
                    lo,
                    hi,
                    f64::NEG_INFINITY,
                    hi,
                );
                return self.solve_lower(level, a, hi, None);
            }
            if k >= n {
                return self.solve_upper(level, self.nodes[n - 2], self.nodes[n - 1], None);
            }
            self.solve_in_cell(k - 1, p, level.ln_p(), true)
        } else {
            let q = level.q();
            // cum_right is decreasing; find first node whose right mass < q.
            let k = self.cum_right.partition_point(|&s| s >= q);
            if k >= n {
                let lo = self.nodes[n - 1];
                let (_, b) = crate::roots::expand_bracket(
                    |x| level.ln_q() - self.sf(x).ln(),
                    lo,
                    lo + 1.0,
                    lo,
                    f64::INFINITY,
                );
                return self.solve_upper(level, lo, b, None);
            }
            if k == 0 {
                return self.solve_lower(level, self.nodes[0], self.nodes[1], None);
            }
            self.solve_in_cell(k - 1, q, level.ln_q(), false)
        }
    }

    /// Root of `ln m(x) = ln target` inside cell `k`, where `m` is the mass
    /// to the left of `x` (`lower`) or to the right. Newton steps carry `m`
    /// along, adding the mass between successive iterates with a fixed Gauss
    /// rule.
    fn solve_in_cell(&self, k: usize, target: f64, ln_target: f64, lower: bool) -> f64 {
        let (mut a, mut b) = (self.nodes[k], self.nodes[k + 1]);
        // Mass beyond each bracket end, on the side measured by `m`.
        let (mut ma, mut mb) = if lower {
            (self.cum_left[k], self.cum_left[k + 1])
        } else {
            (self.cum_right[k], self.cum_right[k + 1])
        };
        let sign = if lower { 1.0 } else { -1.0 };
        let frac = ((target - ma) / (mb - ma)).clamp(0.0, 1.0);
        let mut x = a + (b - a) * frac;
        let mut m = ma + sign * gauss10(|y| self.pdf(y), a, x);
        for _ in 0..crate::roots::MAX_ITERATIONS {
            let r = m.ln() - ln_target;
            if r == 0.0 {
                return x;
            }
            // m increases in x when lower, decreases otherwise.
            if (r < 0.0) == lower {
                (a, ma) = (x, m);
            } else {
                (b, mb) = (x, m);
            }
            let slope = sign * self.pdf(x) / m;
            let mut next = x - r / slope;
            if !(next > a && next < b) {
                next = 0.5 * (a + b);
            }
            let tol = 4.0 * f64::EPSILON * next.abs() + 1e-15 * self.sd();
            if (next - x).abs() <= tol || b - a <= tol {
                return next;
            }
            // Integrate from whichever known point is closest.
            let (from, m_from) = [(x, m), (a, ma), (b, mb)]
                .into_iter()
                .min_by(|p, q| (p.0 - next).abs().total_cmp(&(q.0 - next).abs()))
                .expect("three candidates");
            m = m_from + sign * gauss10(|y| self.pdf(y), from, next);
            x = next;
        }
        x
    }

    fn solve_lower(&self, level: Level, lo: f64, hi: f64, start: Option<f64>) -> f64 {
        let ln_p = level.ln_p();
        newton_bisect_from(
            "NIG quantile",
            |x| {
                let c = self.cdf(x);
                (c.ln() - ln_p, self.pdf(x) / c)
            },
            lo,
            hi,
            start,
            Tolerance {
                abs: 1e-15 * self.sd(),
                rel: 4.0 * f64::EPSILON,
            },
        )
        .unwrap_or(f64::NAN)
    }

    fn solve_upper(&self, level: Level, lo: f64, hi: f64, start: Option<f64>) -> f64 {
        let ln_q = level.ln_q();
        newton_bisect_from(
            "NIG quantile",
            |x| {
                let s = self.sf(x);
                (ln_q - s.ln(), self.pdf(x) / s)
            },
            lo,
            hi,
            start,
            Tolerance {
                abs: 1e-15 * self.sd(),
                rel: 4.0 * f64::EPSILON,
            },
        )
        .unwrap_or(f64::NAN)
    }

    pub fn support_hint(&self) -> (f64, f64) {
        (self.nodes[0], *self.nodes.last().unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;

    #[test]
    fn table_is_consistent() {
        let s = NigShape::new(1.3, 0.6);
        let total = s.cum_left[0] + s.cum_right[0];
        assert!((total - 1.0).abs() < 1e-13);
        for k in 0..s.nodes.len() {
            assert!((s.cum_left[k] + s.cum_right[k] - 1.0).abs() < 1e-13);
            // E(X - t)₊ - E(t - X)₊ = EX - t
            let diff = s.upper_pm[k] - s.lower_pm[k];
            assert!((diff - (s.mean() - s.nodes[k])).abs() < 1e-11 * (1.0 + s.nodes[k].abs()));
        }
    }

    #[test]
    fn partial_moments_match_direct_quadrature() {
        let s = NigShape::new(0.9, -0.4);
        for &t in &[-3.0, -0.1, 0.0, 0.37, 2.5, 11.0] {
            let up = integrate(|y| (y - t) * s.pdf(y), t, f64::INFINITY);
            let lo = integrate(|y| (t - y) * s.pdf(y), f64::NEG_INFINITY, t);
            assert!((s.upper_partial(t) - up).abs() < 1e-12, "t={t}");
            assert!((s.lower_partial(t) - lo).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn quantile_round_trip_with_tails() {
        for (a, b) in [(0.5, 0.45), (1.0, -0.8), (25.0, 5.0)] {
            let s = NigShape::new(a, b);
            for i in 1..1000 {
                let l = Level::new(i as f64 / 1000.0).unwrap();
                let x = s.quantile(l);
                assert!((s.cdf(x) - l.p()).abs() < 1e-12, "({a},{b}) p={}", l.p());
                let x = s.quantile(Level::new(l.p() * 1e-6).unwrap());
                assert!((s.cdf(x) / (l.p() * 1e-6) - 1.0).abs() < 1e-10, "({a},{b}) p={}e-6", l.p());
                let x = s.quantile(Level::upper(l.p() * 1e-6).unwrap());
                assert!((s.sf(x) / (l.p() * 1e-6) - 1.0).abs() < 1e-10, "({a},{b}) q={}e-6", l.p());
            }
        }
        let s = NigShape::new(2.0, 1.0);
        for &e in &[1e-12, 1e-40] {
            let x = s.quantile(Level::upper(e).unwrap());
            assert!((s.sf(x) / e - 1.0).abs() < 1e-9);
            let x = s.quantile(Level::new(e).unwrap());
            assert!((s.cdf(x) / e - 1.0).abs() < 1e-9);
        }
    }
}
