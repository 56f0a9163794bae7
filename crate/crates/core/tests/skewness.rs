mod common;

use common::{any_model, minimize_loss, zoo};
use exord::distributions::sample_from;
use exord::expectiles::expectile;
use exord::orders::{check_convex_transform, GridSpec};
use exord::skewness::*;
use exord::{ContinuousModel, ScaledBernoulli};
use proptest::prelude::*;

fn symmetric_models() -> Vec<ContinuousModel> {
    vec![
        ContinuousModel::normal(3.0, 2.0).unwrap(),
        ContinuousModel::student_t(5.0).unwrap(),
        ContinuousModel::logistic(-1.0, 0.5).unwrap(),
        ContinuousModel::laplace(0.0, 2.0).unwrap(),
        ContinuousModel::uniform(0.0, 1.0).unwrap(),
        ContinuousModel::nig_standardized(1.0, 0.0).unwrap(),
    ]
}

/// Right-skewed body with a small far-left lump: s̃₂ changes sign in α.
fn sign_changing_mixture() -> ContinuousModel {
    ContinuousModel::mixture(vec![
        (0.9, ContinuousModel::exponential(1.0).unwrap()),
        (0.1, ContinuousModel::normal(-3.0, 0.3).unwrap()),
    ])
    .unwrap()
}

#[test]
fn symmetric_laws_have_zero_skewness() {
    for m in symmetric_models() {
        for a in skewness_grid() {
            assert!(s2(&m, a).unwrap().abs() < 1e-9, "{m:?} α={a}");
        }
        for t in s_grid() {
            assert!(big_s_tilde(&m, t).unwrap().abs() < 1e-9, "{m:?} t={t}");
        }
        let p = skewness_profile(&m, &skewness_grid(), ANALYTIC_TOL).unwrap();
        assert_eq!(p.classification, Skewness::Symmetric);
    }
}

#[test]
fn bernoulli_s2_is_constant() {
    for i in 1..=9 {
        let p = i as f64 / 10.0;
        let b = ScaledBernoulli::new(p, 2.5).unwrap();
        for a in [0.01, 0.1, 0.25, 0.4, 0.49] {
            assert!((s2(&b, a).unwrap() - (1.0 - 2.0 * p)).abs() < 1e-10);
        }
    }
}

#[test]
fn lomax_quarter_skewness_matches_loss_minimizers() {
    let m = ContinuousModel::lomax(3.0, 3f64.sqrt()).unwrap();
    let mu = m.mean().unwrap();
    let lo = minimize_loss(&m, 0.25, 0.0, 2.0);
    let hi = minimize_loss(&m, 0.75, 0.0, 3.0);
    let want = (hi + lo - 2.0 * mu) / (hi - lo) / 0.5;
    let got = s2(&m, 0.25).unwrap();
    assert!(got > 0.0);
    assert!((got - want).abs() < 1e-5, "{got} vs {want}");
    assert!((s2_tilde(&m, 0.25).unwrap() - 0.5 * got).abs() < 1e-15);
}

#[test]
fn big_s_forms_agree_and_are_bounded() {
    for (name, m) in zoo() {
        let d = m.mad().unwrap();
        for t in s_grid() {
            let a = big_s(&m, t * d).unwrap();
            let b = big_s_integral(&m, t * d).unwrap();
            assert!((a - b).abs() < 1e-8, "{name} t={t}: {a} vs {b}");
            assert!(a.abs() <= 1.0);
        }
    }
}

#[test]
fn big_s_small_t_limit() {
    for (name, m) in zoo() {
        let mu = m.mean().unwrap();
        let t = 1e-4 * m.mad().unwrap();
        let want = 2.0 * m.cdf(mu) - 1.0;
        assert!((big_s(&m, t).unwrap() - want).abs() < 1e-4, "{name}");
    }
}

#[test]
fn lomax_skewness_functions() {
    let x = ContinuousModel::lomax(3.0, 3f64.sqrt()).unwrap();
    let y = ContinuousModel::lomax(2.0, 1.0).unwrap();
    let d = y.mad().unwrap();
    for t in s_grid() {
        assert!(big_s(&y, t * d).unwrap() > 0.0);
        assert!(big_s_tilde(&x, t).unwrap() <= big_s_tilde(&y, t).unwrap() + 1e-12);
    }
    let p = skewness_profile(&y, &skewness_grid(), ANALYTIC_TOL).unwrap();
    assert_eq!(p.classification, Skewness::RightSkewed);
    let p = skewness_profile(&y.negated(), &skewness_grid(), ANALYTIC_TOL).unwrap();
    assert_eq!(p.classification, Skewness::LeftSkewed);
}

#[test]
fn big_s_tilde_ignores_scale() {
    for (name, m) in zoo() {
        for c in [0.01, 0.5, 7.0, 300.0] {
            let scaled = m.affine(c, 1.5).unwrap();
            for t in s_grid().into_iter().step_by(7) {
                let a = big_s_tilde(&m, t).unwrap();
                let b = big_s_tilde(&scaled, t).unwrap();
                assert!((a - b).abs() < 1e-9, "{name} c={c} t={t}");
            }
        }
    }
}

#[test]
fn sign_changing_mixture_is_indeterminate() {
    let m = sign_changing_mixture();
    let p = skewness_profile(&m, &skewness_grid(), ANALYTIC_TOL).unwrap();
    assert!(p.s2_tilde.iter().any(|&v| v > 1e-3));
    assert!(p.s2_tilde.iter().any(|&v| v < -1e-3));
    assert_eq!(p.classification, Skewness::Indeterminate);
}

#[test]
fn classification_rules() {
    assert_eq!(classify_skewness(&[0.0, 1e-8, -1e-8], 1e-7), Skewness::Symmetric);
    assert_eq!(classify_skewness(&[0.0, 0.2, -1e-8], 1e-7), Skewness::RightSkewed);
    assert_eq!(classify_skewness(&[-0.3, -1e-8], 1e-7), Skewness::LeftSkewed);
    assert_eq!(classify_skewness(&[-0.3, 0.1], 1e-7), Skewness::Indeterminate);
}

#[test]
fn profile_invariants() {
    for (name, m) in zoo() {
        let p = skewness_profile(&m, &skewness_grid(), ANALYTIC_TOL).unwrap();
        assert_eq!(p.alphas.len(), 49);
        for i in 0..p.alphas.len() {
            assert!((p.s2[i] - p.s2_tilde[i] / (1.0 - 2.0 * p.alphas[i])).abs() < 1e-15, "{name}");
            assert!(p.s2[i].abs() < 1.0, "{name}");
        }
    }
    assert!(s2(&ContinuousModel::standard_normal(), 0.5).is_err());
}

#[test]
fn empirical_profile_of_a_lomax_sample() {
    let s = sample_from(&ContinuousModel::lomax(4.0, 1.0).unwrap(), 20_000, 8).unwrap();
    let p = empirical_profile(&s, &[0.1, 0.25, 0.4]).unwrap();
    assert_eq!(p.classification, Skewness::RightSkewed);
    let s = sample_from(&ContinuousModel::standard_normal(), 20_000, 8).unwrap();
    let p = empirical_profile(&s, &[0.1, 0.25, 0.4]).unwrap();
    assert_eq!(p.classification, Skewness::Symmetric);
}

#[test]
fn empirical_tolerance_tracks_monte_carlo_spread() {
    let m = ContinuousModel::lomax(5.0, 1.0).unwrap();
    let (n, reps) = (2000, 400);
    let mut vals = Vec::new();
    let mut ses = Vec::new();
    for r in 0..reps {
        let p = empirical_profile(&sample_from(&m, n, 100 + r).unwrap(), &[0.25]).unwrap();
        vals.push(p.s2_tilde[0]);
        ses.push(p.tol / 3.0);
    }
    let mean = vals.iter().sum::<f64>() / reps as f64;
    let sd = (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (reps - 1) as f64).sqrt();
    let se = ses.iter().sum::<f64>() / reps as f64;
    // the spread of a 400-replicate sd is about 3.5%
    assert!((se / sd - 1.0).abs() < 0.15, "plug-in {se} vs Monte Carlo {sd}");
}

/// Sign of s₂ over the α-grid against the sign of S over the t-grid. Far
/// tails decide the sign for some mixtures, so the α-grid gets a ladder down
/// to 1e-9.
#[test]
fn s2_sign_matches_big_s_sign() {
    let mut alphas: Vec<f64> = (3..=9).rev().map(|k| 10f64.powi(-k)).collect();
    alphas.extend(skewness_grid());
    let mut models = zoo();
    models.push(("mixture-sign-change", sign_changing_mixture()));
    models.push(("negated lomax", ContinuousModel::lomax(3.0, 1.0).unwrap().negated()));
    for (name, m) in models {
        let by_alpha = skewness_profile(&m, &alphas, ANALYTIC_TOL).unwrap().classification;
        let s_vals: Vec<f64> = s_grid().iter().map(|&t| big_s_tilde(&m, t).unwrap()).collect();
        let by_t = classify_skewness(&s_vals, ANALYTIC_TOL);
        assert_eq!(by_alpha, by_t, "{name}");
    }
}

#[test]
fn uniform_exponential_pair() {
    let x = ContinuousModel::uniform(0.0, 1.0).unwrap();
    let y = ContinuousModel::exponential(1.0).unwrap();
    assert!(check_convex_transform(&x, &y, &GridSpec::default()).holds());
    for a in skewness_grid() {
        assert!(s2(&x, a).unwrap() <= s2(&y, a).unwrap() + 1e-7);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn s2_respects_the_convex_transform_order(a1 in 1.5..9.0f64, a2 in 1.5..9.0f64, l1 in 0.2..5.0f64, l2 in 0.2..5.0f64) {
        let (hi, lo) = if a1 >= a2 { (a1, a2) } else { (a2, a1) };
        let x = ContinuousModel::lomax(hi, l1).unwrap();
        let y = ContinuousModel::lomax(lo, l2).unwrap();
        prop_assert!(check_convex_transform(&x, &y, &GridSpec::default()).holds());
        for a in skewness_grid() {
            prop_assert!(s2(&x, a).unwrap() <= s2(&y, a).unwrap() + 1e-7);
        }
    }

    #[test]
    fn s2_is_location_scale_invariant(m in any_model(), c in 0.05..20.0f64, d in -10.0..10.0f64, a in 0.01..0.49f64) {
        let s = s2(&m, a).unwrap();
        let t = s2(&m.affine(c, d).unwrap(), a).unwrap();
        prop_assert!((s - t).abs() < 1e-9);
    }

    #[test]
    fn s2_is_antisymmetric(m in any_model(), a in 0.01..0.49f64) {
        prop_assert!((s2(&m.negated(), a).unwrap() + s2(&m, a).unwrap()).abs() < 1e-9);
        let e = expectile(&m, a).unwrap();
        prop_assert!(e.is_finite());
    }
}
