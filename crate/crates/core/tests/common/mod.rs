#![allow(dead_code)]

use exord::ContinuousModel;
use proptest::prelude::*;

/// One representative of every family, each with a finite mean.
pub fn zoo() -> Vec<(&'static str, ContinuousModel)> {
    let n = |m, s| ContinuousModel::normal(m, s).unwrap();
    vec![
        ("normal", n(1.0, 2.0)),
        ("t5", ContinuousModel::student_t(5.0).unwrap()),
        ("t2.5", ContinuousModel::student_t_ls(2.5, -1.0, 0.5).unwrap()),
        ("lomax(3,sqrt3)", ContinuousModel::lomax(3.0, 3f64.sqrt()).unwrap()),
        ("lomax(2,1)", ContinuousModel::lomax(2.0, 1.0).unwrap()),
        ("nig(2,1)", ContinuousModel::nig_standardized(2.0, 1.0).unwrap()),
        ("nig(1,0)", ContinuousModel::nig_standardized(1.0, 0.0).unwrap()),
        ("nig(1,-0.8)", ContinuousModel::nig_standardized(1.0, -0.8).unwrap()),
        ("logistic", ContinuousModel::logistic(0.5, 2.0).unwrap()),
        ("laplace", ContinuousModel::laplace(-1.0, 0.7).unwrap()),
        ("uniform", ContinuousModel::uniform(0.0, 1.0).unwrap()),
        ("exponential", ContinuousModel::exponential(1.5).unwrap()),
        ("mixture", ContinuousModel::mixture(vec![(0.3, n(-1.0, 0.5)), (0.7, n(2.0, 1.0))]).unwrap()),
    ]
}

/// Models with a finite second moment, drawn from every family.
pub fn any_model() -> impl Strategy<Value = ContinuousModel> {
    prop_oneof![
        (-5.0..5.0f64, 0.1..5.0f64).prop_map(|(m, s)| ContinuousModel::normal(m, s).unwrap()),
        (2.5..40.0f64, -3.0..3.0f64, 0.2..3.0f64)
            .prop_map(|(nu, l, s)| ContinuousModel::student_t_ls(nu, l, s).unwrap()),
        (2.5..8.0f64, 0.2..5.0f64).prop_map(|(a, l)| ContinuousModel::lomax(a, l).unwrap()),
        (0.5..10.0f64, -0.9..0.9f64).prop_map(|(a, r)| ContinuousModel::nig_standardized(a, a * r).unwrap()),
        (-3.0..3.0f64, 0.2..3.0f64).prop_map(|(l, s)| ContinuousModel::logistic(l, s).unwrap()),
        (-3.0..3.0f64, 0.2..3.0f64).prop_map(|(l, s)| ContinuousModel::laplace(l, s).unwrap()),
        (-3.0..3.0f64, 0.1..5.0f64).prop_map(|(a, w)| ContinuousModel::uniform(a, a + w).unwrap()),
        (0.2..5.0f64).prop_map(|r| ContinuousModel::exponential(r).unwrap()),
    ]
}

/// Composite Simpson rule with `n` (even) intervals.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Asymmetric quadratic loss `E|α - 1{X < t}|(X - t)²` by quadrature of the pdf.
pub fn newey_powell_loss(model: &ContinuousModel, alpha: f64, t: f64) -> f64 {
    let lo = model.quantile(1e-13).unwrap();
    let hi = model.quantile(1.0 - 1e-13).unwrap();
    let w = |x: f64| if x < t { 1.0 - alpha } else { alpha };
    let g = |x: f64| w(x) * (x - t).powi(2) * model.pdf(x);
    let (lo, hi) = (lo.min(t), hi.max(t));
    exord::quad::Quad::with_tolerances(1e-16, 1e-14)
        .integrate_pieces(g, lo, hi, &[t])
        .value
}

/// Minimize the loss by golden-section search on `[a, b]`.
pub fn minimize_loss(model: &ContinuousModel, alpha: f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let f = |t| newey_powell_loss(model, alpha, t);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-5 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    // the loss is smooth near its minimum: finish with a parabolic step
    let t0 = 0.5 * (a + b);
    let h = 1e-4;
    let (fm, f0, fp) = (f(t0 - h), f(t0), f(t0 + h));
    t0 - h * (fp - fm) / (2.0 * (fp - 2.0 * f0 + fm))
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}
