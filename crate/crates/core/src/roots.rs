//! Bracketed root finding: Newton steps with a bisection safety net.

use crate::error::{Error, Result};

pub const MAX_ITERATIONS: usize = 200;

/// Stopping rule for [`newton_bisect`].
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-300,
            rel: 4.0 * f64::EPSILON,
        }
    }
}

/// Find a root of a monotone function inside `[lo, hi]`, starting from the
/// bracket midpoint.
///
/// `f` returns the value and derivative at a point. Values at the bracket
/// ends may be infinite (e.g. a log-transformed target at a support bound);
/// they must have opposite signs. Newton steps that leave the bracket or fail
/// to halve it are replaced by bisection.
pub fn newton_bisect<F>(routine: &'static str, f: F, lo: f64, hi: f64, tol: Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> (f64, f64),
{
    newton_bisect_from(routine, f, lo, hi, None, tol)
}

/// As [`newton_bisect`], starting the iteration at `start` when it lies
/// strictly inside the bracket.
pub fn newton_bisect_from<F>(
    routine: &'static str,
    mut f: F,
    lo: f64,
    hi: f64,
    start: Option<f64>,
    tol: Tolerance,
) -> Result<f64>
where
    F: FnMut(f64) -> (f64, f64),
{
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain(format!("{routine}: bracket must be finite")));
    }
    let fa = f(a).0;
    let fb = f(b).0;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return Err(Error::domain(format!(
            "{routine}: root not bracketed by [{a}, {b}] (values {fa:e}, {fb:e})"
        )));
    }
    let increasing = fb > fa;
    let mut x = match start {
        Some(s) if s > a && s < b => s,
        _ => 0.5 * (a + b),
    };
    let mut step_before = b - a;
    let mut step = step_before;
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        let (fx, dfx) = f(x);
        residual = fx;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.is_nan() {
            return Err(Error::NoConvergence {
                routine,
                iterations: 0,
                lo: a,
                hi: b,
                residual: fx,
            });
        }
        if (fx > 0.0) == increasing {
            b = x;
        } else {
            a = x;
        }
        let newton = x - fx / dfx;
        // Bisect when Newton leaves the bracket or its steps stop halving.
        let slow = (2.0 * fx).abs() > (step_before * dfx).abs();
        step_before = step;
        if !newton.is_finite() || newton <= a || newton >= b || slow {
            step = 0.5 * (b - a);
            x = a + step;
        } else {
            step = x - newton;
            x = newton;
        }
        let tol_x = tol.abs + tol.rel * x.abs();
        if step.abs() <= tol_x || b - a <= tol.abs + tol.rel * a.abs().min(b.abs()) {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence {
        routine,
        iterations: MAX_ITERATIONS,
        lo: a,
        hi: b,
        residual,
    })
}

/// Widen `[lo, hi]` geometrically until `f(lo) <= 0 <= f(hi)` for an
/// increasing `f`, never crossing `floor`/`ceil`.
pub fn expand_bracket<F>(mut f: F, mut lo: f64, mut hi: f64, floor: f64, ceil: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let mut step = (hi - lo).max(1e-8 * (lo.abs() + hi.abs()) + 1e-300);
    for _ in 0..4000 {
        if lo <= floor || f(lo) <= 0.0 {
            break;
        }
        let next = lo - step;
        lo = if next <= floor { floor } else { next };
        step *= 2.0;
    }
    let mut step = (hi - lo).max(1e-300);
    for _ in 0..4000 {
        if hi >= ceil || f(hi) >= 0.0 {
            break;
        }
        let next = hi + step;
        hi = if next >= ceil { ceil } else { next };
        step *= 2.0;
    }
    (lo, hi)
}
