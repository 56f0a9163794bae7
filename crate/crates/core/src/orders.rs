//! Grid-based checkers for stochastic orders. A verdict is numerical evidence
//! on a finite grid, not a proof.

use crate::distributions::{ContinuousModel, Level, ScaledBernoulli};
use crate::error::{Error, Result};
use crate::expectiles::{expectile_cdf, expectile_level, iqr};
use crate::skewness::{big_s_tilde, s_grid};
use serde::Serialize;
use std::collections::BTreeMap;

/// Relative tolerance of every comparison.
pub const REL_TOL: f64 = 1e-7;

/// Differences below this fraction of the tolerance count as ties when
/// deciding between `Holds` and `Inconclusive`.
const NOISE_FLOOR: f64 = 1e-3;

/// Share of near-violations above which a verdict is `Inconclusive`.
const INCONCLUSIVE_SHARE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

/// The grid point where the defining inequality `lhs ≤ rhs` is most violated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub point: BTreeMap<String, f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderVerdict {
    pub order: String,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub grid: String,
    /// Relative tolerance; the absolute tolerance of each comparison is in
    /// the witness.
    pub tolerance: f64,
    pub points: usize,
    /// Smallest `(rhs - lhs) / tol` over the grid. Above 1 the order holds
    /// with room to spare, below -1 it fails.
    pub margin: f64,
}

impl OrderVerdict {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn fails(&self) -> bool {
        self.verdict == Verdict::Fails
    }
}

/// Grid sizes. Levels are `i / (n + 1)`, `i = 1..=n`, so the pair grid with
/// 65 levels contains 1/2. `tail_decades` adds the ladder `10^-k` (and its
/// mirror) for `k = 3..=tail_decades`, which reaches tail crossings that an
/// equispaced grid cannot see.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub levels: usize,
    pub pair_levels: usize,
    pub tail_decades: u32,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            levels: 257,
            pair_levels: 65,
            tail_decades: 12,
        }
    }
}

impl GridSpec {
    pub fn with_tail_decades(mut self, k: u32) -> Self {
        self.tail_decades = k;
        self
    }

    fn ladder(&self) -> Vec<f64> {
        let mut ks: Vec<u32> = (3..=self.tail_decades.min(20)).collect();
        if self.tail_decades > 20 {
            ks.extend((25..=self.tail_decades).step_by(5));
        }
        ks.into_iter()
            .map(|k| format!("1e-{k}").parse().expect("decimal literal"))
            .collect()
    }

    fn build(&self, n: usize) -> Vec<Level> {
        let mut out: Vec<Level> = Vec::new();
        for q in self.ladder().into_iter().rev() {
            out.push(Level::new(q).expect("ladder level"));
        }
        for i in 1..=n {
            out.push(Level::new(i as f64 / (n + 1) as f64).expect("grid level"));
        }
        for q in self.ladder() {
            out.push(Level::upper(q).expect("ladder level"));
        }
        out
    }

    /// The single-level grid in increasing order.
    pub fn p_levels(&self) -> Vec<Level> {
        self.build(self.levels)
    }

    /// The levels used for (u, v) pairs, in increasing order.
    pub fn pair_grid(&self) -> Vec<Level> {
        self.build(self.pair_levels)
    }

    fn describe(&self, n: usize) -> String {
        if self.tail_decades >= 3 {
            format!("{n} levels i/{} + tail 1e-3..1e-{}", n + 1, self.tail_decades)
        } else {
            format!("{n} levels i/{}", n + 1)
        }
    }
}

struct Comparison {
    point: Vec<(&'static str, f64)>,
    lhs: f64,
    rhs: f64,
    tol: f64,
}

impl Comparison {
    fn new(point: Vec<(&'static str, f64)>, lhs: f64, rhs: f64, tol: f64) -> Self {
        Comparison { point, lhs, rhs, tol }
    }

    /// Violation in units of the tolerance; NaN counts as a violation.
    fn excess(&self) -> f64 {
        let e = (self.lhs - self.rhs) / self.tol;
        if e.is_nan() {
            f64::INFINITY
        } else {
            e
        }
    }
}

fn judge(order: &str, grid: String, comparisons: Vec<Comparison>) -> OrderVerdict {
    let n = comparisons.len();
    let mut worst: Option<&Comparison> = None;
    let mut worst_excess = f64::NEG_INFINITY;
    let mut near = 0usize;
    for c in &comparisons {
        let e = c.excess();
        if e > NOISE_FLOOR {
            near += 1;
        }
        if e > worst_excess {
            worst_excess = e;
            worst = Some(c);
        }
    }
    let verdict = if worst_excess > 1.0 {
        Verdict::Fails
    } else if near as f64 > INCONCLUSIVE_SHARE * n as f64 {
        Verdict::Inconclusive
    } else {
        Verdict::Holds
    };
    let witness = match verdict {
        Verdict::Holds => None,
        _ => worst.map(|c| Witness {
            point: c.point.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            lhs: c.lhs,
            rhs: c.rhs,
            tolerance: c.tol,
        }),
    };
    OrderVerdict {
        order: order.to_string(),
        verdict,
        witness,
        grid,
        tolerance: REL_TOL,
        points: n,
        margin: -worst_excess,
    }
}

/// Tolerance for comparing two locations: relative to the larger of the
/// values and the interquartile scale of the pair.
fn x_tol(scale: f64, a: f64, b: f64) -> f64 {
    REL_TOL * scale.max(a.abs()).max(b.abs())
}

/// Tolerance for comparing two nonnegative quantities that may be tiny
/// (ranges, partial moments).
fn rel_tol(a: f64, b: f64) -> f64 {
    REL_TOL * a.abs().max(b.abs()) + 1e-300
}

fn scale_of(x: &ContinuousModel, y: &ContinuousModel) -> f64 {
    let s = |m: &ContinuousModel| iqr(m, 0.25).unwrap_or_else(|_| m.spread());
    s(x).max(s(y))
}

fn expectiles(model: &ContinuousModel, levels: &[Level]) -> Result<Vec<f64>> {
    levels.iter().map(|&l| expectile_level(model, l)).collect()
}

fn quantiles(model: &ContinuousModel, levels: &[Level]) -> Vec<f64> {
    levels.iter().map(|&l| model.quantile_level(l)).collect()
}

/// Sorted union of the quantiles of both models on `levels`, restricted to
/// finite values.
fn t_grid(x: &ContinuousModel, y: &ContinuousModel, levels: &[Level]) -> Vec<f64> {
    let mut ts: Vec<f64> = quantiles(x, levels)
        .into_iter()
        .chain(quantiles(y, levels))
        .filter(|t| t.is_finite())
        .collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts
}

/// `q_X(p) ≤ q_Y(p)` for every grid level (usual stochastic order).
pub fn check_st(x: &ContinuousModel, y: &ContinuousModel, grid: &GridSpec) -> OrderVerdict {
    let scale = scale_of(x, y);
    let cmps = grid
        .p_levels()
        .into_iter()
        .map(|l| {
            let (a, b) = (x.quantile_level(l), y.quantile_level(l));
            Comparison::new(vec![("p", l.p())], a, b, x_tol(scale, a, b))
        })
        .collect();
    judge("st", grid.describe(grid.levels), cmps)
}

/// `e_X(α) ≤ e_Y(α)` for every grid level (expectile location order).
pub fn check_expectile_order(x: &ContinuousModel, y: &ContinuousModel, grid: &GridSpec) -> Result<OrderVerdict> {
    let scale = scale_of(x, y);
    let levels = grid.p_levels();
    let ex = expectiles(x, &levels)?;
    let ey = expectiles(y, &levels)?;
    let cmps = levels
        .iter()
        .zip(ex.iter().zip(&ey))
        .map(|(l, (&a, &b))| Comparison::new(vec![("alpha", l.p())], a, b, x_tol(scale, a, b)))
        .collect();
    Ok(judge("expectile", grid.describe(grid.levels), cmps))
}

/// The expectile order in its cdf form, `F̆_Y(t) ≤ F̆_X(t)` for all t.
pub fn check_expectile_order_cdf(x: &ContinuousModel, y: &ContinuousModel, grid: &GridSpec) -> Result<OrderVerdict> {
    let levels = grid.p_levels();
    let ts = t_grid(x, y, &levels);
    let mut cmps = Vec::with_capacity(ts.len());
    for t in ts {
        // Compare whichever tail of F̆ is smaller, so both sides keep
        // relative accuracy.
        let (lx, ux) = (x.lower_raw(t), x.upper_raw(t));
        let (ly, uy) = (y.lower_raw(t), y.upper_raw(t));
        let fx = expectile_cdf(x, t)?;
        let fy = expectile_cdf(y, t)?;
        let (lhs, rhs) = if fx.min(fy) < 0.5 {
            (fy, fx)
        } else {
            // 1 - F̆_X ≤ 1 - F̆_Y
            (ux / (lx + ux), uy / (ly + uy))
        };
        cmps.push(Comparison::new(vec![("t", t)], lhs, rhs, rel_tol(lhs, rhs)));
    }
    Ok(judge("expectile-cdf", format!("t: quantiles on {}", grid.describe(grid.levels)), cmps))
}

fn stop_loss_comparisons(
    x: &ContinuousModel,
    y: &ContinuousModel,
    ts: &[f64],
    split: f64,
) -> Vec<Comparison> {
    ts.iter()
        .map(|&t| {
            let (a, b) = if t < split {
                (x.lower_raw(t), y.lower_raw(t))
            } else {
                (x.upper_raw(t), y.upper_raw(t))
            };
            Comparison::new(vec![("t", t)], a, b, rel_tol(a, b))
        })
        .collect()
}

/// Convex order: equal means and `π_X ≤ π_Y` on the t-grid. Below the
/// common mean the equivalent comparison of lower partial moments is used,
/// which avoids the cancellation in `π(t) = μ - t + E(t - X)₊`.
pub fn check_cx(x: &ContinuousModel, y: &ContinuousModel, grid: &GridSpec) -> Result<OrderVerdict> {
    let (mx, my) = (x.mean()?, y.mean()?);
    let scale = scale_of(x, y);
    let desc = format!("t: quantiles on {}", grid.describe(grid.levels));
    let tol = x_tol(scale, mx, my);
    if (mx - my).abs() > tol {
        // Unequal means: report whichever direction breaks the order.
        let (lhs, rhs) = if mx > my { (mx, my) } else { (my, mx) };
        let c = Comparison::new(vec![("mean_x", mx), ("mean_y", my)], lhs, rhs, tol);
        return Ok(judge("cx", desc, vec![c]));
    }
    let ts = t_grid(x, y, &grid.p_levels());
    Ok(judge("cx", desc, stop_loss_comparisons(x, y, &ts, 0.5 * (mx + my))))
}

/// Increasing convex order: `π_X(t) ≤ π_Y(t)` on the t-grid.
pub fn check_icx(x: &ContinuousModel, y: &ContinuousModel, grid: &GridSpec) -> Result<OrderVerdict> {
    x.mean()?;
    y.mean()?;
    let ts = t_grid(x, y, &grid.p_levels());
    let cmps = ts
        .iter()
        .map(|&t| {
            let (a, b) = (x.upper_raw(t), y.upper_raw(t));
            Comparison::new(vec![("t", t)], a, b, rel_tol(a, b))
        })
        .collect();
    Ok(judge("icx", format!("t: quantiles on {}", grid.describe(grid.levels)), cmps))
}

/// Successive slopes of the points `(xs[i], ys[i])` must not decrease.
fn convexity_comparisons(xs: &[f64], ys: &[f64], coord: &'static str, at: &[f64]) -> Vec<Comparison> {
    let slopes: Vec<f64> = (0..xs.len() - 1)
        .map(|i| (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]))
        .collect();
    slopes
        .windows(2)
        .enumerate()
        .map(|(i, w)| Comparison::new(vec![(coord, at[i + 1])], w[0], w[1], rel_tol(w[0], w[1])))
        .collect()
}

/// Van Zwet's order: `q_Y ∘ F_X` convex, probed through the slopes of
/// `(q_X(p), q_Y(p))` over the equispaced level grid.
pub fn check_convex_transform(x: &ContinuousModel, y: &ContinuousModel, grid: &GridSpec) -> OrderVerdict {
    let levels = GridSpec { tail_decades: 0, ..*grid }.p_levels();
    let ps: Vec<f64> = levels.iter().map(|l| l.p()).collect();
    let qx = quantiles(x, &levels);
    let qy = quantiles(y, &levels);
    judge("c", format!("{} levels i/{}", grid.levels, grid.levels + 1), convexity_comparisons(&qx, &qy, "p", &ps))
}

/// The expectile analogue of van Zwet's order: convexity of `e_Y ∘ F̆_X`,
/// probed through the slopes of `(e_X(α), e_Y(α))`. A probe only; how it
/// relates to the quantile version is not settled.
pub fn check_expectile_convex_transform(x: &ContinuousModel, y: &ContinuousModel, grid: &GridSpec) -> Result<OrderVerdict> {
    let levels = GridSpec { tail_decades: 0, ..*grid }.p_levels();
    let alphas: Vec<f64> = levels.iter().map(|l| l.p()).collect();
    let ex = expectiles(x, &levels)?;
    let ey = expectiles(y, &levels)?;
    Ok(judge(
        "e-c",
        format!("{} levels i/{}", grid.levels, grid.levels + 1),
        convexity_comparisons(&ex, &ey, "alpha", &alphas),
    ))
}

/// `(X - EX) / E|X - EX|`.
pub fn standardize_mad(model: &ContinuousModel) -> Result<ContinuousModel> {
    let m = model.mean()?;
    let d = model.mad()?;
    model.affine(1.0 / d, -m / d)
}

/// `(X - EX)`.
pub fn center(model: &ContinuousModel) -> Result<ContinuousModel> {
    let m = model.mean()?;
    model.affine(1.0, -m)
}

/// s-order: for the mean/MAD standardized laws, `∫_{-∞}^x F_X̃ ≥ ∫_{-∞}^x F_Ỹ`
/// for `x ≤ 0` and `∫_x^∞ F̄_X̃ ≤ ∫_x^∞ F̄_Ỹ` for `x ≥ 0`. Both integrals are
/// partial moments and are evaluated in closed form or from tables.
pub fn check_s_order(x: &ContinuousModel, y: &ContinuousModel, grid: &GridSpec) -> Result<OrderVerdict> {
    let xs = standardize_mad(x)?;
    let ys = standardize_mad(y)?;
    let ts = t_grid(&xs, &ys, &grid.p_levels());
    let cmps = ts
        .iter()
        .map(|&t| {
            let (a, b) = if t <= 0.0 {
                (ys.lower_raw(t), xs.lower_raw(t))
            } else {
                (xs.upper_raw(t), ys.upper_raw(t))
            };
            Comparison::new(vec![("x", t)], a, b, rel_tol(a, b))
        })
        .collect();
    Ok(judge("s", format!("x: standardized quantiles on {}", grid.describe(grid.levels)), cmps))
}

/// `S̃_X(t) ≤ S̃_Y(t)` on `ts` (the default is [`s_grid`]).
pub fn check_sf(x: &ContinuousModel, y: &ContinuousModel, ts: Option<&[f64]>) -> Result<OrderVerdict> {
    let default = s_grid();
    let ts = ts.unwrap_or(&default);
    let mut cmps = Vec::with_capacity(ts.len());
    for &t in ts {
        let (a, b) = (big_s_tilde(x, t)?, big_s_tilde(y, t)?);
        cmps.push(Comparison::new(vec![("t", t)], a, b, REL_TOL));
    }
    Ok(judge("sf", format!("{} points on [{}, {}]", ts.len(), ts[0], ts[ts.len() - 1]), cmps))
}

/// Sign changes of `F_X(d_X x + EX) - F_Y(d_Y x + EY)` on each side of 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Crossings {
    pub left: usize,
    pub right: usize,
    /// `F_X(EX) ≤ F_Y(EY)`
    pub endpoint: bool,
    /// Grid points per side; the counts depend on this resolution.
    pub points_per_side: usize,
}

impl Crossings {
    /// Evidence for the mean/MAD skewness order: one crossing on each side
    /// and the endpoint condition.
    pub fn is_ordered(&self) -> bool {
        self.left == 1 && self.right == 1 && self.endpoint
    }
}

const CROSSING_POINTS: usize = 2000;

pub fn check_mu_d_crossings(x: &ContinuousModel, y: &ContinuousModel) -> Result<Crossings> {
    let xs = standardize_mad(x)?;
    let ys = standardize_mad(y)?;
    let g = |t: f64| xs.cdf(t) - ys.cdf(t);
    let lo = Level::new(1e-12)?;
    let hi = lo.mirror();
    let left = xs.quantile_level(lo).min(ys.quantile_level(lo));
    let right = xs.quantile_level(hi).max(ys.quantile_level(hi));
    let count = |a: f64, b: f64| -> usize {
        let mut sign = 0i8;
        let mut changes = 0;
        for i in 0..=CROSSING_POINTS {
            let t = a + (b - a) * i as f64 / CROSSING_POINTS as f64;
            let v = g(t);
            if v.abs() <= 1e-12 {
                continue;
            }
            let s = if v > 0.0 { 1 } else { -1 };
            if sign != 0 && s != sign {
                changes += 1;
            }
            sign = s;
        }
        changes
    };
    Ok(Crossings {
        left: count(left, 0.0),
        right: count(0.0, right),
        endpoint: xs.cdf(0.0) <= ys.cdf(0.0) + 1e-12,
        points_per_side: CROSSING_POINTS + 1,
    })
}

/// Which (u, v) pairs a dispersion order constrains.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Pairs {
    All,
    AroundHalf,
}

fn range_comparisons(levels: &[Level], fx: &[f64], fy: &[f64], pairs: Pairs) -> Vec<Comparison> {
    let mut out = Vec::new();
    for i in 0..levels.len() {
        for j in i + 1..levels.len() {
            let (u, v) = (levels[i], levels[j]);
            if pairs == Pairs::AroundHalf && !(u.p() <= 0.5 && v.p() >= 0.5) {
                continue;
            }
            let a = fx[j] - fx[i];
            let b = fy[j] - fy[i];
            out.push(Comparison::new(vec![("u", u.p()), ("v", v.p())], a, b, rel_tol(a, b)));
        }
    }
    out
}

/// Dispersive order: `q_X(v) - q_X(u) ≤ q_Y(v) - q_Y(u)` for all `u < v`.
pub fn check_disp(x: &ContinuousModel, y: &ContinuousModel, grid: &GridSpec) -> OrderVerdict {
    let levels = grid.pair_grid();
    let cmps = range_comparisons(&levels, &quantiles(x, &levels), &quantiles(y, &levels), Pairs::All);
    judge("disp", format!("(u,v) pairs of {}", grid.describe(grid.pair_levels)), cmps)
}

/// Weak dispersive order: the dispersive inequality for `u ≤ 1/2 ≤ v`.
pub fn check_w_disp(x: &ContinuousModel, y: &ContinuousModel, grid: &GridSpec) -> OrderVerdict {
    let levels = grid.pair_grid();
    let cmps = range_comparisons(&levels, &quantiles(x, &levels), &quantiles(y, &levels), Pairs::AroundHalf);
    judge("w-disp", format!("(u,v) pairs of {} with u ≤ 1/2 ≤ v", grid.describe(grid.pair_levels)), cmps)
}

/// Weak dispersive order anchored at the medians:
/// `q_Y(u) - q_X(u) ≤ q_Y(1/2) - q_X(1/2)` for `u ≤ 1/2`, reversed above.
pub fn check_w_disp_median(x: &ContinuousModel, y: &ContinuousModel, grid: &GridSpec) -> OrderVerdict {
    let levels = grid.pair_grid();
    let half = Level::half();
    let d0 = y.quantile_level(half) - x.quantile_level(half);
    let scale = scale_of(x, y);
    let cmps = levels
        .iter()
        .map(|&l| {
            let (qx, qy) = (x.quantile_level(l), y.quantile_level(l));
            let d = qy - qx;
            let tol = x_tol(scale, qx, qy);
            if l.p() <= 0.5 {
                Comparison::new(vec![("u", l.p())], d, d0, tol)
            } else {
                Comparison::new(vec![("u", l.p())], d0, d, tol)
            }
        })
        .collect();
    judge("w-disp-median", format!("u: {}", grid.describe(grid.pair_levels)), cmps)
}

/// Expectile dispersive order: `e_X(v) - e_X(u) ≤ e_Y(v) - e_Y(u)`, `u < v`.
pub fn check_e_disp(x: &ContinuousModel, y: &ContinuousModel, grid: &GridSpec) -> Result<OrderVerdict> {
    let levels = grid.pair_grid();
    let cmps = range_comparisons(&levels, &expectiles(x, &levels)?, &expectiles(y, &levels)?, Pairs::All);
    Ok(judge("e-disp", format!("(u,v) pairs of {}", grid.describe(grid.pair_levels)), cmps))
}

/// Weak expectile dispersive order: the expectile inequality for
/// `u ≤ 1/2 ≤ v`.
pub fn check_we_disp(x: &ContinuousModel, y: &ContinuousModel, grid: &GridSpec) -> Result<OrderVerdict> {
    let levels = grid.pair_grid();
    let cmps = range_comparisons(&levels, &expectiles(x, &levels)?, &expectiles(y, &levels)?, Pairs::AroundHalf);
    Ok(judge(
        "we-disp",
        format!("(u,v) pairs of {} with u ≤ 1/2 ≤ v", grid.describe(grid.pair_levels)),
        cmps,
    ))
}

/// The level carried by `F̆(t)`, split by tail for precision.
fn expectile_level_at(model: &ContinuousModel, t: f64) -> Result<Level> {
    let l = model.lower_raw(t);
    let u = model.upper_raw(t);
    if l <= u {
        Level::new(l / (l + u))
    } else {
        Level::upper(u / (l + u))
    }
}

/// `(x, e_Y(F̆_X(x)) - x)` on `xs`.
pub fn e_disp_composite(x: &ContinuousModel, y: &ContinuousModel, xs: &[f64]) -> Result<Vec<(f64, f64)>> {
    x.mean()?;
    xs.iter()
        .map(|&t| Ok((t, expectile_level(y, expectile_level_at(x, t)?)? - t)))
        .collect()
}

/// Expectile dispersive order through `e_Y(F̆_X(x)) - x` being
/// nondecreasing; `xs` defaults to 201 points between `e_X(0.005)` and
/// `e_X(0.995)`.
pub fn check_e_disp_composite(x: &ContinuousModel, y: &ContinuousModel, xs: Option<&[f64]>) -> Result<OrderVerdict> {
    let default;
    let xs = match xs {
        Some(v) => v,
        None => {
            let lo = expectile_level(x, Level::new(0.005)?)?;
            let hi = expectile_level(x, Level::new(0.995)?)?;
            default = crate::expectiles::equispaced(lo, hi, 201);
            &default
        }
    };
    let curve = e_disp_composite(x, y, xs)?;
    let scale = scale_of(x, y);
    let cmps = curve
        .windows(2)
        .map(|w| {
            let tol = x_tol(scale, w[0].0, w[1].0);
            Comparison::new(vec![("x", w[1].0)], w[0].1, w[1].1, tol)
        })
        .collect();
    Ok(judge("e-disp-composite", format!("{} x points", xs.len()), cmps))
}

/// Dilation order: `X - EX ≤_cx Y - EY`, checked on lower partial moments
/// below 0 and stop-loss transforms above.
pub fn check_dil(x: &ContinuousModel, y: &ContinuousModel, grid: &GridSpec) -> Result<OrderVerdict> {
    let xc = center(x)?;
    let yc = center(y)?;
    let ts = t_grid(&xc, &yc, &grid.p_levels());
    Ok(judge(
        "dil",
        format!("t: centered quantiles on {}", grid.describe(grid.levels)),
        stop_loss_comparisons(&xc, &yc, &ts, 0.0),
    ))
}

/// Dilation order through tail means: `H_X(p) - EX ≤ H_Y(p) - EY` with
/// `H(p) = (1-p)^{-1} ∫_p^1 q`.
pub fn check_dil_tail_mean(x: &ContinuousModel, y: &ContinuousModel, grid: &GridSpec) -> Result<OrderVerdict> {
    let (mx, my) = (x.mean()?, y.mean()?);
    let h = |m: &ContinuousModel, mean: f64, l: Level| {
        let q = m.quantile_level(l);
        // H(p) - EX = (q - EX) + π(q)/(1-p)
        (q - mean) + m.upper_raw(q) / l.q()
    };
    let cmps = grid
        .p_levels()
        .into_iter()
        .map(|l| {
            let (a, b) = (h(x, mx, l), h(y, my, l));
            Comparison::new(vec![("p", l.p())], a, b, rel_tol(a, b))
        })
        .collect();
    Ok(judge("dil-tail-mean", grid.describe(grid.levels), cmps))
}

/// Δ-ex order: `E_α(X) ≤ E_α(Y)` for α on the lower half of the pair grid.
pub fn check_delta_ex(x: &ContinuousModel, y: &ContinuousModel, grid: &GridSpec) -> Result<OrderVerdict> {
    let levels: Vec<Level> = grid.pair_grid().into_iter().filter(|l| l.p() < 0.5).collect();
    let mut cmps = Vec::with_capacity(levels.len());
    for l in levels {
        let a = expectile_level(x, l.mirror())? - expectile_level(x, l)?;
        let b = expectile_level(y, l.mirror())? - expectile_level(y, l)?;
        cmps.push(Comparison::new(vec![("alpha", l.p())], a, b, rel_tol(a, b)));
    }
    Ok(judge("delta-ex", format!("α < 1/2 from {}", grid.describe(grid.pair_levels)), cmps))
}

/// Expectile dispersive order for two scaled Bernoulli laws through the
/// closed-form slope of `e_Y ∘ F̆_X`, which must be at least 1 on `[0, a_X]`.
pub fn check_e_disp_bernoulli(x: &ScaledBernoulli, y: &ScaledBernoulli, points: usize) -> Result<OrderVerdict> {
    if points < 2 {
        return Err(Error::domain("need at least two grid points"));
    }
    let cmps = (0..points)
        .map(|i| {
            let t = x.a() * i as f64 / (points - 1) as f64;
            let s = x.expectile_composite_slope(y, t);
            Comparison::new(vec![("t", t)], 1.0, s, REL_TOL)
        })
        .collect();
    Ok(judge("e-disp-bernoulli", format!("{points} points on [0, a_X]"), cmps))
}
