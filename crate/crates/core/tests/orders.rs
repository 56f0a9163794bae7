use exord::orders::*;
use exord::{ContinuousModel, ScaledBernoulli};
use proptest::prelude::*;

fn lomax(a: f64, l: f64) -> ContinuousModel {
    ContinuousModel::lomax(a, l).unwrap()
}

fn normal(m: f64, s: f64) -> ContinuousModel {
    ContinuousModel::normal(m, s).unwrap()
}

fn grid() -> GridSpec {
    GridSpec::default()
}

/// Pairs with `X ≤_c Y` by construction.
fn convex_pairs() -> Vec<(ContinuousModel, ContinuousModel)> {
    vec![
        (ContinuousModel::uniform(0.0, 1.0).unwrap(), ContinuousModel::exponential(1.0).unwrap()),
        (ContinuousModel::uniform(-2.0, 5.0).unwrap(), lomax(3.0, 1.0)),
        (ContinuousModel::exponential(2.0).unwrap(), lomax(4.0, 1.0)),
        (lomax(6.0, 1.0), lomax(2.5, 3.0)),
        (lomax(3.0, 3f64.sqrt()), lomax(2.0, 1.0)),
        (lomax(8.0, 0.3), lomax(5.0, 4.0)),
    ]
}

#[test]
fn st_examples() {
    assert!(check_st(&normal(0.0, 1.0), &normal(1.0, 1.0), &grid()).holds());
    // λ₁/α₁ ≤ λ₂/α₂ and α₁ ≥ α₂
    assert!(check_st(&lomax(3.0, 1.2), &lomax(2.0, 1.0), &grid()).holds());
    let v = check_st(&normal(0.0, 1.0), &normal(0.0, 2.0), &grid());
    assert!(v.fails());
    let w = v.witness.unwrap();
    assert!(w.point["p"] < 0.5);
    assert!(w.lhs - w.rhs > w.tolerance);
}

#[test]
fn expectile_order_examples() {
    let x = ContinuousModel::nig_standardized(2.0, 1.0).unwrap();
    let shifted = x.affine(1.0, 1.0).unwrap();
    assert!(check_expectile_order(&x, &shifted, &grid()).unwrap().holds());
    assert!(check_expectile_order(&lomax(3.0, 3f64.sqrt()), &lomax(2.0, 1.0), &grid()).unwrap().holds());
    assert!(check_expectile_order(&lomax(3.0, 2.0), &lomax(2.0, 1.0), &grid()).unwrap().fails());
    for (x, y) in [(lomax(3.0, 3f64.sqrt()), lomax(2.0, 1.0)), (lomax(3.0, 2.0), lomax(2.0, 1.0)), (normal(0.0, 1.0), normal(0.5, 3.0))] {
        let a = check_expectile_order(&x, &y, &grid()).unwrap().verdict;
        let b = check_expectile_order_cdf(&x, &y, &grid()).unwrap().verdict;
        assert_eq!(a, b);
    }
}

#[test]
fn stop_loss_order_examples() {
    let x = lomax(4.0, 2.0);
    assert!(check_cx(&x, &x, &grid()).unwrap().holds());
    assert!(check_cx(&lomax(3.0, 2.0), &lomax(2.0, 1.0), &grid()).unwrap().holds());
    assert!(check_cx(&lomax(3.0, 1.5), &lomax(2.0, 1.0), &grid()).unwrap().fails());
    // α₁ ≥ α₂ and λ₁/(α₁-1) ≤ λ₂/(α₂-1)
    assert!(check_icx(&lomax(3.0, 1.5), &lomax(2.0, 1.0), &grid()).unwrap().holds());
    assert!(check_icx(&lomax(3.0, 2.5), &lomax(2.0, 1.0), &grid()).unwrap().fails());
}

#[test]
fn convex_transform_examples() {
    let u = ContinuousModel::uniform(0.0, 1.0).unwrap();
    let e = ContinuousModel::exponential(1.0).unwrap();
    assert!(check_convex_transform(&u, &u, &grid()).holds());
    assert!(check_convex_transform(&u, &e, &grid()).holds());
    assert!(check_convex_transform(&e, &u, &grid()).fails());
}

#[test]
fn skewness_order_examples() {
    let u = ContinuousModel::uniform(0.0, 1.0).unwrap();
    let e = ContinuousModel::exponential(1.0).unwrap();
    assert!(check_s_order(&e, &e, &grid()).unwrap().holds());
    assert!(check_s_order(&u, &e, &grid()).unwrap().holds());
    assert!(check_sf(&u, &u, None).unwrap().holds());
    assert!(check_sf(&u, &e, None).unwrap().holds());
    assert!(check_sf(&e, &u, None).unwrap().fails());

    let c = check_mu_d_crossings(&e, &e).unwrap();
    assert_eq!((c.left, c.right, c.endpoint), (0, 0, true));
    let c = check_mu_d_crossings(&u, &e).unwrap();
    assert_eq!((c.left, c.right, c.endpoint), (1, 1, true));
    assert!(c.is_ordered());
    let c = check_mu_d_crossings(&normal(0.0, 1.0), &normal(3.0, 5.0)).unwrap();
    assert_eq!((c.left, c.right), (0, 0));
}

#[test]
fn s_order_matches_expectile_order_of_standardized_laws() {
    let pairs = vec![
        (ContinuousModel::uniform(0.0, 1.0).unwrap(), ContinuousModel::exponential(1.0).unwrap()),
        (ContinuousModel::exponential(1.0).unwrap(), ContinuousModel::uniform(0.0, 1.0).unwrap()),
        (lomax(5.0, 1.0), lomax(2.5, 1.0)),
        (lomax(2.5, 1.0), lomax(5.0, 1.0)),
        (normal(0.0, 1.0), ContinuousModel::nig_standardized(2.0, 1.0).unwrap()),
        (ContinuousModel::nig_standardized(1.0, -0.5).unwrap(), normal(2.0, 3.0)),
    ];
    for (x, y) in pairs {
        let s = check_s_order(&x, &y, &grid()).unwrap().verdict;
        let sx = standardize_mad(&x).unwrap();
        let sy = standardize_mad(&y).unwrap();
        let e = check_expectile_order(&sx, &sy, &grid()).unwrap().verdict;
        assert_eq!(s, e, "{x:?} vs {y:?}");
    }
}

#[test]
fn dispersion_examples() {
    let (x, y) = (normal(0.0, 1.0), normal(0.0, 2.0));
    assert!(check_disp(&x, &y, &grid()).holds());
    assert!(check_w_disp(&x, &y, &grid()).holds());
    assert!(check_e_disp(&x, &y, &grid()).unwrap().holds());
    assert!(check_we_disp(&x, &y, &grid()).unwrap().holds());

    // λ₁/α₁ ≤ λ₂/α₂ and α₁ ≥ α₂
    assert!(check_disp(&lomax(3.0, 1.2), &lomax(2.0, 1.0), &grid()).holds());
    assert!(check_disp(&lomax(3.0, 1.8), &lomax(2.0, 1.0), &grid()).fails());

    let (x, y) = (lomax(3.0, 3f64.sqrt()), lomax(2.0, 1.0));
    assert!(check_we_disp(&x, &y, &grid()).unwrap().holds());
    let d = check_disp(&x, &y, &grid());
    assert!(d.fails() && d.witness.is_some());
    assert!(check_e_disp_composite(&x, &y, None).unwrap().holds());
}

#[test]
fn dilation_and_delta_ex_examples() {
    let x = ContinuousModel::nig_standardized(1.0, 0.5).unwrap();
    assert!(check_dil(&x, &x, &grid()).unwrap().holds());
    assert!(check_delta_ex(&x, &x, &grid()).unwrap().holds());
    // α₁ ≥ α₂ and λ₁/(α₁-1) ≤ λ₂/(α₂-1)
    assert!(check_dil(&lomax(4.0, 2.5), &lomax(2.0, 1.0), &grid()).unwrap().holds());
    assert!(check_dil(&normal(0.0, 2.0), &normal(0.0, 1.0), &grid()).unwrap().fails());
    for (x, y) in [(lomax(4.0, 2.5), lomax(2.0, 1.0)), (normal(0.0, 2.0), normal(0.0, 1.0)), (lomax(2.0, 1.0), lomax(4.0, 2.5))] {
        let a = check_dil(&x, &y, &grid()).unwrap().verdict;
        let b = check_dil_tail_mean(&x, &y, &grid()).unwrap().verdict;
        assert_eq!(a, b);
    }
    assert!(check_delta_ex(&lomax(3.0, 3f64.sqrt()), &lomax(2.0, 1.0), &grid()).unwrap().holds());
}

#[test]
fn bernoulli_expectile_dispersion() {
    let x = ScaledBernoulli::new(0.3, 1.0).unwrap();
    assert!(check_e_disp_bernoulli(&x, &x, 101).unwrap().holds());
    let y = ScaledBernoulli::new(0.3, 2.0).unwrap();
    assert!(check_e_disp_bernoulli(&x, &y, 101).unwrap().holds());
    assert!(check_e_disp_bernoulli(&y, &x, 101).unwrap().fails());
}

#[test]
fn convex_transform_order_implies_the_weaker_skewness_orders() {
    for (x, y) in convex_pairs() {
        let c = check_convex_transform(&x, &y, &grid());
        assert!(c.holds() && c.margin > 10.0, "{x:?} vs {y:?}: margin {}", c.margin);
        assert!(check_mu_d_crossings(&x, &y).unwrap().is_ordered(), "{x:?} vs {y:?}");
        assert!(check_s_order(&x, &y, &grid()).unwrap().holds(), "{x:?} vs {y:?}");
        assert!(check_sf(&x, &y, None).unwrap().holds(), "{x:?} vs {y:?}");
    }
}

#[test]
fn verdicts_serialize_with_witness_coordinates() {
    let v = check_st(&normal(0.0, 1.0), &normal(0.0, 2.0), &grid());
    let j = serde_json::to_value(&v).unwrap();
    assert_eq!(j["verdict"], "Fails");
    assert!(j["witness"]["point"]["p"].as_f64().unwrap() < 0.5);
    assert_eq!(j["tolerance"], REL_TOL);
}

fn any_pair() -> impl Strategy<Value = (ContinuousModel, ContinuousModel)> {
    prop_oneof![
        (1.5..8.0f64, 0.2..5.0f64, 1.5..8.0f64, 0.2..5.0f64).prop_map(|(a1, l1, a2, l2)| (lomax(a1, l1), lomax(a2, l2))),
        (0.3..3.0f64, 0.3..3.0f64).prop_map(|(s1, s2)| (normal(0.0, s1), normal(1.0, s2))),
        (0.5..5.0f64, -0.8..0.8f64, 0.5..3.0f64).prop_map(|(a, r, c)| {
            let x = ContinuousModel::nig_standardized(a, a * r).unwrap();
            (x.clone(), x.affine(c, 0.0).unwrap())
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn disp_implies_we_disp((x, y) in any_pair()) {
        if check_disp(&x, &y, &grid()).holds() {
            prop_assert!(check_we_disp(&x, &y, &grid()).unwrap().holds());
        }
    }

    #[test]
    fn weak_dispersion_forms_agree((x, y) in any_pair()) {
        prop_assert_eq!(check_w_disp(&x, &y, &grid()).verdict, check_w_disp_median(&x, &y, &grid()).verdict);
    }

    #[test]
    fn we_disp_implies_delta_ex((x, y) in any_pair()) {
        if check_we_disp(&x, &y, &grid()).unwrap().holds() {
            prop_assert!(check_delta_ex(&x, &y, &grid()).unwrap().holds());
        }
    }
}
