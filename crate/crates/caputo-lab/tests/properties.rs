//! Property-based invariants for the core types and operators.

use caputo_lab::bump_family::{bump_value, make_bump, theta};
use caputo_lab::counterexample::phi;
use caputo_lab::fde_solver::mittag_leffler;
use caputo_lab::frac_kernel::{caputo_derivative, FracOrder, Quadrature, SampledPath};
use caputo_lab::sequence_space::{NormFlavor, SeqVec};
use proptest::prelude::*;

const DIM: usize = 12;

fn coords() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0f64..100.0, DIM)
}

proptest! {
    #[test]
    fn norm_triangle_and_homogeneity(x in coords(), y in coords(), a in -50.0f64..50.0) {
        for flavor in [NormFlavor::Sup, NormFlavor::Euclidean] {
            let xv = SeqVec::new(x.clone(), flavor).unwrap();
            let yv = SeqVec::new(y.clone(), flavor).unwrap();
            let sum = xv.add(&yv).unwrap();
            prop_assert!(sum.norm() <= xv.norm() + yv.norm() + 1e-9);
            let scaled = xv.scale(a);
            prop_assert!((scaled.norm() - a.abs() * xv.norm()).abs() <= 1e-9 * (1.0 + xv.norm()));
            prop_assert!(xv.norm() >= 0.0);
        }
    }

    #[test]
    fn norm_flavor_comparison(x in coords()) {
        let sup = SeqVec::new(x.clone(), NormFlavor::Sup).unwrap().norm();
        let euc = SeqVec::new(x, NormFlavor::Euclidean).unwrap().norm();
        prop_assert!(sup <= euc + 1e-12);
        prop_assert!(euc <= (DIM as f64).sqrt() * sup + 1e-12);
    }

    #[test]
    fn bump_range_and_support(t in -0.5f64..1.5) {
        let quad = Quadrature::default();
        let b = make_bump(0.1, 0.3, 0.6, 0.9, &quad).unwrap();
        let v = bump_value(&b, t);
        prop_assert!((0.0..=1.0).contains(&v), "bump value {v} at t = {t}");
        if !(0.1..0.9).contains(&t) {
            prop_assert_eq!(v, 0.0);
        }
        if (0.3..=0.6).contains(&t) {
            prop_assert!((v - 1.0).abs() <= 1e-12, "plateau value {v} at t = {t}");
        }
    }

    #[test]
    fn theta_is_a_cutoff(t in -5.0f64..5.0) {
        let v = theta(t);
        prop_assert!((0.0..1.0).contains(&v));
        if t <= 0.0 {
            prop_assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn caputo_operator_linearity(
        a in -5.0f64..5.0,
        b in -5.0f64..5.0,
        c1 in -2.0f64..2.0,
        c2 in -2.0f64..2.0,
    ) {
        let order = FracOrder::new(0.5).unwrap();
        let quad = Quadrature::default();
        let dt = 1.0 / 64.0;
        let n = 64;
        let f = SampledPath::from_fn(dt, n, |t| (c1 * t).sin()).unwrap();
        let g = SampledPath::from_fn(dt, n, |t| c2 * t * t).unwrap();
        let combo = SampledPath::from_fn(dt, n, |t| a * (c1 * t).sin() + b * c2 * t * t).unwrap();
        let df = caputo_derivative(&order, &f, &quad).unwrap();
        let dg = caputo_derivative(&order, &g, &quad).unwrap();
        let dc = caputo_derivative(&order, &combo, &quad).unwrap();
        for j in 0..=n {
            let lin = a * df.values()[j] + b * dg.values()[j];
            prop_assert!((dc.values()[j] - lin).abs() <= 1e-9 * (1.0 + lin.abs()));
        }
    }

    #[test]
    fn phi_clamped_and_lipschitz(s in -10.0f64..10.0, t in -10.0f64..10.0) {
        prop_assert!((0.0..=1.0).contains(&phi(s.max(-1.0))) || phi(s) <= 1.0);
        prop_assert!(phi(s) <= 1.0);
        prop_assert!((phi(s) - phi(t)).abs() <= (s - t).abs() + 1e-15);
    }

    #[test]
    fn mittag_leffler_decreasing_on_negative_axis(x in 0.0f64..20.0, dx in 0.01f64..5.0) {
        let a = mittag_leffler(0.5, -x).unwrap();
        let b = mittag_leffler(0.5, -(x + dx)).unwrap();
        prop_assert!(b < a, "E_1/2 not decreasing: E(-{x}) = {a}, E(-{}) = {b}", x + dx);
        prop_assert!(a > 0.0 && a <= 1.0);
    }
}
