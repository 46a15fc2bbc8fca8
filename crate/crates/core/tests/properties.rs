use std::f64::consts::FRAC_PI_2;

use degenheat_core::coefficients::{lemma_report, CoefficientProfile, OmegaCache};
use degenheat_core::kernel::Kernel;
use degenheat_core::solver::{DataFn, ProblemSpec, Solver, Source};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn profiles() -> Vec<CoefficientProfile> {
    vec![
        CoefficientProfile::constant(c(1.5, -0.5)).unwrap(),
        CoefficientProfile::phase_arc(0.0, FRAC_PI_2, 0.5, 1.5).unwrap(),
        CoefficientProfile::rational(vec![2.0, 1.0], vec![1.0, 0.5]).unwrap(),
        CoefficientProfile::table(vec![(0.0, c(1.0, 0.0)), (1.0, c(0.5, 0.5)), (2.0, c(0.2, 1.0))]).unwrap(),
    ]
}

fn admissible_omega() -> impl Strategy<Value = Complex64> {
    (0.05f64..3.0, -3.0f64..3.0).prop_map(|(re, im)| c(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_is_even_and_conjugation_symmetric(w in admissible_omega(), z in -5.0f64..5.0) {
        let k = Kernel::new(w).unwrap();
        let kc = Kernel::new(w.conj()).unwrap();
        prop_assert!((k.eval(z) - k.eval(-z)).norm() <= 1e-15 * k.eval(z).norm().max(1.0));
        prop_assert!((kc.eval(z) - k.eval(z).conj()).norm() <= 1e-14 * k.eval(z).norm().max(1.0));
        prop_assert!(k.modulus(z) <= k.modulus(0.0) * (1.0 + 1e-15));
    }

    #[test]
    fn omega_is_additive(which in 0usize..4, s in 0.0f64..2.5, d in 0.0f64..2.5) {
        let cache = OmegaCache::new(profiles()[which].clone());
        let t = s + d;
        let lhs = cache.omega(t).unwrap();
        let rhs = cache.omega(s).unwrap() + cache.omega0(t, s).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-11 * (1.0 + lhs.norm()));
    }

    #[test]
    fn re_omega_is_nondecreasing(which in 0usize..4, s in 0.0f64..2.5, d in 0.0f64..2.5) {
        let cache = OmegaCache::new(profiles()[which].clone());
        let a = cache.omega(s).unwrap().re;
        let b = cache.omega(s + d).unwrap().re;
        prop_assert!(b >= a - 1e-12);
    }

    #[test]
    fn lemma_identity_holds(which in 0usize..4, t in 0.05f64..3.0, frac in 0.0f64..0.99) {
        let cache = OmegaCache::new(profiles()[which].clone());
        let r = lemma_report(&cache, &[(t, frac * t)]);
        let row = &r.rows[0];
        prop_assert!(row.note.is_none(), "{:?}", row.note);
        prop_assert!(row.identity_residual() <= 1e-12 * (1.0 + (t - frac * t) * row.h_abs));
        prop_assert!((0.0..=FRAC_PI_2).contains(&row.delta_margin));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn solution_is_linear_in_the_data(t in 0.1f64..1.5, x in -2.0f64..2.0, which in 0usize..4) {
        let p = profiles()[which].clone();
        let phi = DataFn::gaussian(1.0).unwrap();
        let f = Source::Static(DataFn::Sine { k: 1.0 });
        let both = Solver::new(ProblemSpec::new(p.clone(), phi.clone(), f.clone())).unwrap();
        let hom = Solver::new(ProblemSpec::new(p.clone(), phi, Source::zero())).unwrap();
        let duh = Solver::new(ProblemSpec::new(p, DataFn::Zero, f)).unwrap();
        let sum = hom.solve(t, x).unwrap() + duh.solve(t, x).unwrap();
        prop_assert!((both.solve(t, x).unwrap() - sum).norm() <= 1e-8);
    }

    #[test]
    fn conjugate_coefficient_conjugates_real_data_solution(
        re in 0.3f64..2.0, im in -1.5f64..1.5, t in 0.1f64..1.5, x in -2.0f64..2.0,
    ) {
        let phi = DataFn::gaussian(0.7).unwrap();
        let f = Source::Static(DataFn::Sech);
        let a = Solver::new(ProblemSpec::new(CoefficientProfile::constant(c(re, im)).unwrap(), phi.clone(), f.clone())).unwrap();
        let b = Solver::new(ProblemSpec::new(CoefficientProfile::constant(c(re, -im)).unwrap(), phi, f)).unwrap();
        prop_assert!((a.solve(t, x).unwrap() - b.solve(t, x).unwrap().conj()).norm() <= 1e-8);
    }

    #[test]
    fn even_data_gives_even_solution(t in 0.1f64..1.5, x in 0.0f64..3.0, which in 0usize..4) {
        let s = Solver::new(ProblemSpec::new(profiles()[which].clone(), DataFn::Sech, Source::Static(DataFn::gaussian(2.0).unwrap()))).unwrap();
        prop_assert!((s.solve(t, x).unwrap() - s.solve(t, -x).unwrap()).norm() <= 1e-8);
    }
}

#[test]
fn complex_constant_gaussian_closed_form() {
    // Gaussian data under constant p: u = (1 + 4 omega)^(-1/2) exp(-x^2 / (1 + 4 omega)), omega = t / p
    let p = c(0.6, 0.8);
    let s = Solver::new(ProblemSpec::new(
        CoefficientProfile::constant(p).unwrap(),
        DataFn::gaussian(1.0).unwrap(),
        Source::zero(),
    ))
    .unwrap();
    for (t, x) in [(0.2, 0.0), (0.7, 1.3), (1.5, -2.2)] {
        let w = c(t, 0.0) / p;
        let q = c(1.0, 0.0) + w * 4.0;
        let exact = (-(x * x) / q).exp() / q.sqrt();
        assert!((s.solve(t, x).unwrap() - exact).norm() < 1e-9, "({t}, {x})");
    }
}
