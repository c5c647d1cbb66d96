use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use riclab::bounds::{psi_bounds, srsr_condition_holds, srsr_kappa, RicPair, Route};
use riclab::core_math::{gamma0, log_binomial, shannon_entropy};
use riclab::oracle;
use riclab::rate::{GrowthPoint, RateModel};
use riclab::recovery::solver::{l1_solve, RecoveryInstance, SolverOptions};
use riclab::sigma_s;

fn model() -> impl Strategy<Value = RateModel> {
    prop_oneof![
        (0.2f64..5.0).prop_map(RateModel::tw),
        Just(RateModel::ds()),
        (0.2f64..5.0).prop_map(RateModel::lr),
        (50.0f64..900.0).prop_map(RateModel::fs),
    ]
}

proptest! {
    #[test]
    fn rate_round_trip(m in model(), rb in 1e-4f64..0.12, t in 1e-4f64..5.0) {
        let u = m.eval(rb, t).unwrap();
        prop_assert!(u > 0.0);
        let back = m.inverse(rb, u).unwrap();
        prop_assert!((back / t - 1.0).abs() < 1e-9, "t={t} back={back}");
    }

    #[test]
    fn rate_increasing(m in model(), rb in 1e-4f64..0.12, t in 1e-4f64..5.0, f in 1.001f64..2.0) {
        prop_assert!(m.eval(rb, t * f).unwrap() > m.eval(rb, t).unwrap());
    }

    #[test]
    fn entropy_concave(a in 1e-9f64..1.0, b in 1e-9f64..1.0) {
        let h = |x| shannon_entropy(x).unwrap();
        prop_assert!(h(0.5 * (a + b)) >= 0.5 * (h(a) + h(b)) - 1e-15);
        prop_assert!(h(a) <= std::f64::consts::LN_2 + 1e-15);
    }

    #[test]
    fn log_binomial_exact(p in 1u64..400, frac in 0.0f64..1.0) {
        let r = (frac * p as f64) as u64;
        let exact = oracle::ln_big(&oracle::binomial(p, r));
        prop_assert!((log_binomial(p, r).unwrap() - exact).abs() <= 1e-10 * exact.max(1.0));
    }

    #[test]
    fn psi_bounds_ordered(m in model(), delta in 0.05f64..0.95, rb in 1e-5f64..0.12, eigen in any::<bool>()) {
        let route = if eigen { Route::Eigen } else { Route::Singular };
        let pt = GrowthPoint::new(delta, rb).unwrap();
        // points where the inverse rate overflows are reported as errors
        if let Ok(r) = psi_bounds(&m, &pt, route) {
            prop_assert!(r.psi_min >= 0.0);
            // only the singular route caps the lower constant at 1
            prop_assert!(eigen || r.psi_min <= 1.0);
            if eigen {
                prop_assert!((r.psi_max - r.psi_min - 2.0 * rb).abs() <= 1e-12 * r.psi_max.max(1.0));
            }
            prop_assert!(r.psi_min <= r.psi_max, "{r:?}");
        }
    }

    #[test]
    fn kappa_iff_gamma(lo in 0.0f64..0.99, hi in 0.0f64..4.0) {
        let pair = RicPair::new(lo, hi).unwrap();
        let k = srsr_kappa(&pair).map(|k| k < 1.0).unwrap_or(false);
        let g = (1.0 + hi) / (1.0 - lo) < gamma0();
        // the boundary itself is a measure-zero tie
        if ((1.0 + hi) / (1.0 - lo) - gamma0()).abs() > 1e-12 {
            prop_assert_eq!(k, g);
            prop_assert_eq!(g, srsr_condition_holds(&pair));
        }
    }

    #[test]
    fn sigma_s_matches_brute(x in prop::collection::vec(-10.0f64..10.0, 1..12), s in 0usize..12) {
        let s = s.min(x.len());
        let fast = sigma_s(&x, s).unwrap();
        prop_assert!((fast - oracle::sigma_s_brute(&x, s)).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn solver_scales_with_data(seed in 0u64..1000, c in 0.1f64..20.0) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let (n, p) = (6, 14);
        let m = DMatrix::from_fn(n, p, |_, _| rng.random_range(-1.0..1.0));
        let y = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        let opts = SolverOptions::default();
        let a = l1_solve(&RecoveryInstance::new(m.clone(), y.clone(), 0.0), &opts).unwrap();
        let b = l1_solve(&RecoveryInstance::new(m, y * c, 0.0), &opts).unwrap();
        let (oa, ob) = (a.x_hat.iter().map(|v| v.abs()).sum::<f64>(), b.x_hat.iter().map(|v| v.abs()).sum::<f64>());
        prop_assert!((ob - c * oa).abs() <= 1e-6 * (c * oa).max(1.0), "{oa} {ob}");
    }
}
