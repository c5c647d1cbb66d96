//! Oracle suites behind `riclab selftest`. Each suite checks a closed form
//! against an independent evaluation or an exhaustive sweep.

use crate::bounds::{
    eigen_critical_level, eigen_critical_level_expanded, gaussian_srsr_curve, psi0_singular, psi_bounds_singular,
    regime_a_psi_max, srsr_condition_holds, srsr_kappa, RicPair,
};
use crate::core_math::{binomial_envelope_theta, shannon_entropy, stirling_theta, UniversalConstants};
use crate::fs::verify_constant_chain;
use crate::lab::ensemble::Ensemble;
use crate::lab::spectrum::{extreme_eigs, extreme_singulars, gram_cols, gram_rows};
use crate::oracle;
use crate::rate::{rate_lr, rate_lr_min, GrowthPoint, RateModel};
use crate::recovery::sigma_s;
use crate::recovery::solver::{l1_solve, RecoveryInstance, SolverOptions};
use nalgebra::DVector;
use rand::Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        pass,
        detail: detail.into(),
    }
}

pub struct Suite {
    pub name: &'static str,
    pub run: fn() -> Vec<Check>,
}

pub const SUITES: &[Suite] = &[
    Suite {
        name: "constants",
        run: || constants_suite(&UniversalConstants::exact()),
    },
    Suite {
        name: "entropy",
        run: entropy_suite,
    },
    Suite {
        name: "rates",
        run: rates_suite,
    },
    Suite {
        name: "curve",
        run: curve_suite,
    },
    Suite {
        name: "kappa",
        run: kappa_suite,
    },
    Suite {
        name: "borned1",
        run: borned1_suite,
    },
    Suite {
        name: "stirling",
        run: stirling_suite,
    },
    Suite {
        name: "envelope",
        run: envelope_suite,
    },
    Suite {
        name: "fs-chain",
        run: fs_chain_suite,
    },
    Suite {
        name: "spectra",
        run: spectra_suite,
    },
    Suite {
        name: "sigma",
        run: sigma_suite,
    },
    Suite {
        name: "solver",
        run: solver_suite,
    },
    Suite {
        name: "regime-a",
        run: regime_a_suite,
    },
];

pub fn find(name: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.name == name)
}

/// Printed digits and defining identities of the universal constants.
pub fn constants_suite(c: &UniversalConstants) -> Vec<Check> {
    vec![
        check(
            "rho0 printed 0.0615",
            (c.rho0 - 0.0615).abs() <= 5e-5,
            format!("rho0 = {}", c.rho0),
        ),
        check(
            "tau0 printed 0.6247",
            (c.tau0 - 0.6247).abs() <= 5e-5,
            format!("tau0 = {}", c.tau0),
        ),
        check(
            "gamma0 printed 4.329",
            (c.gamma0 - 4.329).abs() <= 5e-4,
            format!("gamma0 = {}", c.gamma0),
        ),
        check(
            "rho0 root of 8x^2-33x+2",
            (8.0 * c.rho0 * c.rho0 - 33.0 * c.rho0 + 2.0).abs() < 1e-12,
            format!("residual {:e}", 8.0 * c.rho0 * c.rho0 - 33.0 * c.rho0 + 2.0),
        ),
        check(
            "tau0^2 = 16/41",
            (c.tau0 * c.tau0 - 16.0 / 41.0).abs() < 1e-15,
            format!("tau0^2 = {}", c.tau0 * c.tau0),
        ),
        check(
            "(1+tau0)/(1-tau0) = gamma0",
            ((1.0 + c.tau0) / (1.0 - c.tau0) - c.gamma0).abs() < 1e-12,
            format!("lhs {}", (1.0 + c.tau0) / (1.0 - c.tau0)),
        ),
    ]
}

fn entropy_suite() -> Vec<Check> {
    let h = |t| shannon_entropy(t).unwrap();
    let mut concave = true;
    for i in 1..100 {
        for j in 1..100 {
            let (a, b) = (i as f64 / 100.0, j as f64 / 100.0);
            concave &= h(0.5 * (a + b)) >= 0.5 * (h(a) + h(b)) - 1e-15;
        }
    }
    vec![
        check("H(1/2) = ln 2", (h(0.5) - std::f64::consts::LN_2).abs() < 1e-15, ""),
        check(
            "H(0.02)",
            (h(0.02) - 0.098_039_113_279_731_98).abs() < 1e-15,
            format!("{}", h(0.02)),
        ),
        check("concavity", concave, "midpoint inequality on a 99x99 grid"),
    ]
}

fn rates_suite() -> Vec<Check> {
    let models = [
        RateModel::tw(1.0),
        RateModel::ds(),
        RateModel::lr(1.0),
        RateModel::fs(837.0),
    ];
    let mut worst = 0.0f64;
    for m in &models {
        for &rb in &[0.01, 0.04, 0.09, 0.12] {
            for k in 1..=200 {
                let t = 1e-3 * 1.05f64.powi(k);
                let u = m.eval(rb, t).unwrap();
                let back = m.inverse(rb, u).unwrap();
                worst = worst.max(((back - t) / t).abs());
                let u = 1e-6 * 1.08f64.powi(k);
                let w = m.eval(rb, m.inverse(rb, u).unwrap()).unwrap();
                if w.is_finite() {
                    worst = worst.max(((w - u) / u).abs());
                }
            }
        }
    }
    let mut dominance = true;
    for &rb in &[0.01, 0.04, 0.09, 0.12] {
        for k in 0..400 {
            let t = 0.005 * k as f64;
            dominance &= rate_lr(rb, t, 1.0).unwrap() <= rate_lr_min(rb, t, 1.0).unwrap();
        }
    }
    vec![
        check("round trips", worst < 1e-9, format!("worst relative error {worst:e}")),
        check("lr dominance", dominance, "W_LR <= W_LR^min"),
    ]
}

fn curve_suite() -> Vec<Check> {
    let rho0 = UniversalConstants::exact().rho0;
    let mut worst_curve = 0.0f64;
    let mut worst_level = 0.0f64;
    for k in 1..1000 {
        let rho = rho0 * k as f64 / 1000.0;
        let a = psi0_singular(rho, &RateModel::ds()).unwrap();
        let b = gaussian_srsr_curve(rho).unwrap();
        worst_curve = worst_curve.max((a - b).abs() / b.max(1.0));
        worst_level = worst_level.max((eigen_critical_level(rho) - eigen_critical_level_expanded(rho)).abs());
    }
    let v = gaussian_srsr_curve(0.001).unwrap();
    vec![
        check(
            "singular threshold = gaussian curve",
            worst_curve < 1e-12,
            format!("{worst_curve:e}"),
        ),
        check(
            "critical level identity",
            worst_level < 1e-12,
            format!("{worst_level:e}"),
        ),
        check(
            "curve at 0.001",
            (v / 9.181_162_959_964_826e-8 - 1.0).abs() < 0.02,
            format!("{v:e}"),
        ),
        check(
            "crossing of delta = 1",
            gaussian_srsr_curve(0.0028).unwrap() < 1.0 && gaussian_srsr_curve(0.0033).unwrap() > 1.0,
            "",
        ),
    ]
}

fn kappa_suite() -> Vec<Check> {
    let gamma0 = UniversalConstants::exact().gamma0;
    let mut agree = true;
    let mut detail = String::new();
    for i in 0..10 {
        for j in 0..20 {
            let r = RicPair::new(0.95 * i as f64 / 9.0, 3.0 * j as f64 / 19.0).unwrap();
            let k = srsr_kappa(&r).map(|k| k < 1.0).unwrap_or(false);
            // the condition written out without going through RicPair::gamma
            let g = (1.0 + r.c_max) / (1.0 - r.c_min) < gamma0;
            if k != g || g != srsr_condition_holds(&r) {
                agree = false;
                detail = format!("disagreement at {r:?}");
            }
        }
    }
    let edge = srsr_kappa(&RicPair::symmetric(4.0 / 41f64.sqrt()).unwrap()).unwrap();
    vec![
        check("kappa < 1 iff gamma < gamma0", agree, detail),
        check("boundary kappa = 1", (edge - 1.0).abs() < 1e-12, format!("{edge}")),
    ]
}

fn borned1_suite() -> Vec<Check> {
    let (a, b) = oracle::borned1_worst(500);
    vec![
        check("first inequality, m <= 500", a <= 0.0, format!("worst margin {a}")),
        check("second inequality, m <= 500", b <= 0.0, format!("worst margin {b}")),
    ]
}

fn stirling_suite() -> Vec<Check> {
    let mut ok = true;
    let mut detail = String::new();
    for k in 0..10_000 {
        let z = 10f64.powf(-3.0 + 9.0 * k as f64 / 9999.0);
        let th = stirling_theta(z).unwrap();
        if !(th > 0.0 && th < 1.0) {
            ok = false;
            detail = format!("theta({z}) = {th}");
        }
    }
    vec![check("theta in (0,1) on 1e-3..1e6", ok, detail)]
}

fn envelope_suite() -> Vec<Check> {
    let mut worst = f64::NEG_INFINITY;
    let mut theta_ok = true;
    for p in 2..=60u64 {
        for r in 1..p {
            worst = worst.max(oracle::envelope_margin(p, r));
            let th = binomial_envelope_theta(p, r).unwrap();
            let direct = (0.5f64.exp()
                / (2.0 * std::f64::consts::PI * (r as f64 * (1.0 - r as f64 / p as f64)).powf(1.0 / p as f64)))
            .sqrt();
            theta_ok &= (th - direct).abs() < 1e-14;
        }
    }
    vec![
        check("envelope, p <= 60", worst <= 0.0, format!("worst log margin {worst}")),
        check("theta formula", theta_ok, ""),
    ]
}

fn fs_chain_suite() -> Vec<Check> {
    let r = verify_constant_chain();
    r.entries
        .iter()
        .map(|e| {
            check(
                e.name,
                e.pass(),
                format!(
                    "lhs {} rhs {} rel {:.2e}{}",
                    e.lhs,
                    e.rhs,
                    e.rel_err,
                    if e.known_erratum { " (known erratum)" } else { "" }
                ),
            )
        })
        .collect()
}

fn spectra_suite() -> Vec<Check> {
    let e = Ensemble::gaussian(2024);
    let mut worst_eig = 0.0f64;
    let mut worst_sv = 0.0f64;
    for trial in 0..50 {
        let a = e.trial_matrix(trial, 4, 6);
        let g = gram_rows(&a, 1.0);
        let (lo, hi) = extreme_eigs(&g).unwrap();
        let flat: Vec<f64> = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| g[(i, j)])
            .collect();
        let roots = oracle::eigenvalues_charpoly(&flat, 4);
        if roots.len() == 4 {
            worst_eig = worst_eig.max((roots[0] - lo).abs() / (1.0 + lo.abs()));
            worst_eig = worst_eig.max((roots[3] - hi).abs() / (1.0 + hi.abs()));
        } else {
            worst_eig = f64::INFINITY;
        }
        let b = e.trial_matrix(1000 + trial, 6, 3);
        let (_, smax) = extreme_singulars(&b).unwrap();
        let (_, lmax) = extreme_eigs(&gram_cols(&b, 1.0)).unwrap();
        worst_sv = worst_sv.max((smax * smax - lmax).abs() / lmax);
    }
    vec![
        check(
            "eigen vs characteristic polynomial",
            worst_eig < 1e-8,
            format!("{worst_eig:e}"),
        ),
        check("singular^2 vs gram eigen", worst_sv < 1e-8, format!("{worst_sv:e}")),
    ]
}

fn sigma_suite() -> Vec<Check> {
    let mut rng = Ensemble::gaussian(77).rng(0);
    let mut ok = true;
    for _ in 0..200 {
        let p = rng.random_range(1..=12usize);
        let s = rng.random_range(0..=p);
        let x: Vec<f64> = (0..p).map(|_| rng.random_range(-2.0..2.0)).collect();
        ok &= (sigma_s(&x, s).unwrap() - oracle::sigma_s_brute(&x, s)).abs() < 1e-12;
    }
    vec![check("sigma_s vs exhaustive supports", ok, "")]
}

fn solver_suite() -> Vec<Check> {
    let e = Ensemble::gaussian(99);
    let mut worst_obj = 0.0f64;
    let mut worst_feas = 0.0f64;
    for trial in 0..10u64 {
        let (n, p) = (6usize, 12usize);
        let m = e.trial_matrix(trial, n, p) / (n as f64).sqrt();
        let y: DVector<f64> = e.trial_matrix(100 + trial, n, 1).column(0).into_owned();
        let r = l1_solve(
            &RecoveryInstance::new(m.clone(), y.clone(), 0.0),
            &SolverOptions::default(),
        )
        .unwrap();
        let flat: Vec<f64> = (0..n)
            .flat_map(|i| (0..p).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)])
            .collect();
        let (opt, _) = oracle::l1_vertex_enumeration(&flat, n, p, y.as_slice()).unwrap();
        worst_obj = worst_obj.max((r.objective - opt).abs());
        worst_feas = worst_feas.max(r.feasibility_residual);
    }
    vec![
        check(
            "objective vs vertex enumeration",
            worst_obj <= 1e-6,
            format!("{worst_obj:e}"),
        ),
        check("feasibility", worst_feas <= 1e-8, format!("{worst_feas:e}")),
    ]
}

fn regime_a_suite() -> Vec<Check> {
    let pt = GrowthPoint::new(0.5, 1e-6).unwrap();
    let exact = psi_bounds_singular(&RateModel::ds(), &pt).unwrap().psi_max;
    let approx = regime_a_psi_max(1e-6, 0.5, &RateModel::ds()).unwrap();
    let rel = ((approx - exact) / exact).abs();
    vec![check(
        "ds expansion within 10%",
        rel < 0.1,
        format!("relative gap {rel:e}"),
    )]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corrupted_rho0_fails() {
        let mut c = UniversalConstants::exact();
        assert!(constants_suite(&c).iter().all(|k| k.pass));
        c.rho0 += 1e-3;
        assert!(constants_suite(&c).iter().any(|k| !k.pass));
    }

    #[test]
    fn quick_suites_pass() {
        for name in [
            "constants",
            "entropy",
            "rates",
            "curve",
            "kappa",
            "fs-chain",
            "sigma",
            "regime-a",
        ] {
            let s = find(name).unwrap();
            for c in (s.run)() {
                assert!(c.pass, "{name}: {} {}", c.name, c.detail);
            }
        }
    }
}
