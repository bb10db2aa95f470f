use proptest::prelude::*;

use hardyspace::constants::{bradley_b, estimate_kvh, gamma_w, FamilyMember};
use hardyspace::funcspace::integrate_fn;
use hardyspace::hardy::{hardy, hardy_at};
use hardyspace::lorentz::{fundamental_functions, verify_equivalence};
use hardyspace::norms::{lp_norm, mixed_norm, Space};
use hardyspace::rearrange::{decreasing_rearrangement, double_star, tail_function, MeasureSpec};
use hardyspace::{dilate, integrate, Interval, MultiFn, QuadratureConfig, RealFn, WeightSpec};

fn quad() -> QuadratureConfig {
    QuadratureConfig::default().with_rel_tol(1e-10)
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

/// Step function on consecutive intervals of the given lengths.
fn steps(lengths: &[f64], values: &[f64]) -> RealFn {
    let mut breaks = vec![0.0];
    for l in lengths {
        breaks.push(breaks.last().unwrap() + l);
    }
    RealFn::piecewise_constant(breaks, values.to_vec()).unwrap()
}

fn step_strategy() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..8).prop_flat_map(|n| {
        (
            prop::collection::vec(0.05f64..2.0, n),
            prop::collection::vec(0.0f64..5.0, n),
        )
    })
}

fn rearranged(f: &RealFn) -> RealFn {
    decreasing_rearrangement(&tail_function(f, &MeasureSpec::HalfLine, &quad()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dilation_composes_exactly(a in 0.01f64..100.0, b in 0.01f64..100.0, x in 0.0f64..50.0) {
        let e = RealFn::exponential(1.0, 1.0, Interval::HALF_LINE).unwrap();
        let lhs = dilate(&dilate(&e, a).unwrap(), b).unwrap();
        let rhs = dilate(&e, a * b).unwrap();
        prop_assert_eq!(lhs.eval(x).to_bits(), rhs.eval(x).to_bits());
    }

    #[test]
    fn quadrature_is_deterministic(rate in 0.1f64..10.0, p in 1.0f64..6.0) {
        let f = RealFn::exponential(1.0, rate, Interval::HALF_LINE).unwrap();
        let a = integrate_fn(|x| f.eval(x).powf(p), 0.0, f64::INFINITY, &[], &quad()).unwrap();
        let b = integrate_fn(|x| f.eval(x).powf(p), 0.0, f64::INFINITY, &[], &quad()).unwrap();
        prop_assert_eq!(a.to_bits(), b.to_bits());
        prop_assert!(rel(a, 1.0 / (rate * p)) < 1e-9);
    }

    #[test]
    fn rearrangement_is_equimeasurable((lengths, values) in step_strategy()) {
        let f = steps(&lengths, &values);
        let fs = rearranged(&f);
        for &p in &[1.0, 2.0, 5.0] {
            let a = lp_norm(&f, p, None, &quad()).unwrap().value;
            let b = lp_norm(&fs, p, None, &quad()).unwrap().value;
            prop_assert!(rel(b, a) < 1e-9, "p = {}: {} vs {}", p, a, b);
        }
    }

    #[test]
    fn average_dominates_and_matches_hardy((lengths, values) in step_strategy(), t in 0.01f64..20.0) {
        let fs = rearranged(&steps(&lengths, &values));
        let fss = double_star(&fs, t, &quad()).unwrap();
        prop_assert!(fss >= fs.eval(t) * (1.0 - 1e-12));
        prop_assert!(rel(hardy_at(&fs, t, &quad()).unwrap(), fss) < 1e-9);
    }

    #[test]
    fn rearrangement_is_nonincreasing((lengths, values) in step_strategy(), s in 0.0f64..10.0, d in 0.0f64..10.0) {
        let fs = rearranged(&steps(&lengths, &values));
        prop_assert!(fs.eval(s) >= fs.eval(s + d));
    }

    #[test]
    fn norm_is_homogeneous((lengths, values) in step_strategy(), c in 0.0f64..10.0, p in 1.0f64..6.0) {
        let f = steps(&lengths, &values);
        let cf = steps(&lengths, &values.iter().map(|v| c * v).collect::<Vec<_>>());
        let a = lp_norm(&f, p, None, &quad()).unwrap().value;
        let b = lp_norm(&cf, p, None, &quad()).unwrap().value;
        prop_assert!((b - c * a).abs() <= 1e-9 * (c * a).max(1e-300));
    }

    #[test]
    fn norm_is_lattice_monotone((lengths, values) in step_strategy(), bump in prop::collection::vec(0.0f64..3.0, 8), p in 1.0f64..6.0) {
        let f = steps(&lengths, &values);
        let g_vals: Vec<f64> = values.iter().zip(&bump).map(|(v, b)| v + b).collect();
        let g = steps(&lengths, &g_vals);
        let w = WeightSpec::power(1.0, 0.5).unwrap();
        let a = lp_norm(&f, p, Some(&w), &quad()).unwrap().value;
        let b = lp_norm(&g, p, Some(&w), &quad()).unwrap().value;
        prop_assert!(b >= a * (1.0 - 1e-12));
    }

    #[test]
    fn hardy_of_nonnegative_is_nonnegative((lengths, values) in step_strategy(), t in 0.001f64..30.0) {
        let h = hardy(&steps(&lengths, &values), &quad()).unwrap();
        prop_assert!(h.func.eval(t) >= 0.0);
    }

    #[test]
    fn dilation_covariance_of_weighted_norm(lambda in 0.05f64..20.0, p in 1.0f64..5.0, beta in 0.0f64..0.9) {
        // ‖x^β f(λ·)‖_p = λ^{-β-1/p} ‖x^β f‖_p
        let e = RealFn::exponential(1.0, 1.0, Interval::HALF_LINE).unwrap();
        let w = WeightSpec::power(1.0, beta * p).unwrap();
        let a = lp_norm(&e, p, Some(&w), &quad()).unwrap().value;
        let b = lp_norm(&dilate(&e, lambda).unwrap(), p, Some(&w), &quad()).unwrap().value;
        prop_assert!(rel(b, lambda.powf(-beta - 1.0 / p) * a) < 1e-8);
    }

    #[test]
    fn gamma_is_scale_invariant(c in 0.01f64..100.0, e in 0.1f64..0.9) {
        let w = WeightSpec::power(1.0, e).unwrap();
        let cw = WeightSpec::power(c, e).unwrap();
        let a = gamma_w(&w, &quad()).unwrap().value;
        let b = gamma_w(&cw, &quad()).unwrap().value;
        prop_assert!(rel(b, a) < 1e-10);
        prop_assert!(rel(a, 1.0 / (1.0 - e)) < 1e-8);
    }

    #[test]
    fn equivalence_ignores_arrangement((lengths, values) in step_strategy()) {
        prop_assume!(values.iter().any(|v| *v > 0.0));
        let f = steps(&lengths, &values);
        let mut rl = lengths.clone();
        let mut rv = values.clone();
        rl.reverse();
        rv.reverse();
        let g = steps(&rl, &rv);
        let space = Space::Lp { p: 2.0, weight: None };
        let a = verify_equivalence(&f, &space, &MeasureSpec::HalfLine, 2.0, 1e-8, &quad()).unwrap();
        let b = verify_equivalence(&g, &space, &MeasureSpec::HalfLine, 2.0, 1e-8, &quad()).unwrap();
        prop_assert!(rel(a.ratio, b.ratio) < 1e-10);
        prop_assert!(a.within_sandwich);
    }
}

#[test]
fn bradley_monotone_in_u() {
    let v = WeightSpec::unit();
    let pairs = [
        (WeightSpec::power(1.0, -1.0).unwrap(), WeightSpec::power(1.5, -1.0).unwrap()),
        (WeightSpec::power(0.5, -1.0).unwrap(), WeightSpec::power(3.0, -1.0).unwrap()),
        (
            WeightSpec::power(1.0, -1.0).unwrap().with_support(Interval::new(1.0, f64::INFINITY).unwrap()).unwrap(),
            WeightSpec::power(1.0, -1.0).unwrap(),
        ),
        (
            WeightSpec::unit().with_support(Interval::new(0.0, 1.0).unwrap()).unwrap(),
            WeightSpec::unit().with_support(Interval::new(0.0, 2.0).unwrap()).unwrap(),
        ),
        (
            WeightSpec::unit().with_support(Interval::new(0.0, 1.0).unwrap()).unwrap(),
            WeightSpec::power(2.0, 0.0).unwrap().with_support(Interval::new(0.0, 1.0).unwrap()).unwrap(),
        ),
    ];
    for (small, large) in &pairs {
        for &p in &[2.0, 3.0] {
            let a = bradley_b(small, &v, p, &quad()).unwrap().value;
            let b = bradley_b(large, &v, p, &quad()).unwrap().value;
            assert!(b >= a * (1.0 - 1e-9), "{small:?} {large:?} p = {p}: {a} > {b}");
        }
    }
}

#[test]
fn kvh_estimate_grows_with_family() {
    let space = Space::Lp { p: 2.0, weight: None };
    let member = |a: f64| FamilyMember {
        params: vec![a],
        g: RealFn::power(1.0, -a, Interval::new(0.0, 1.0).unwrap()).unwrap(),
    };
    let small: Vec<_> = [0.0, 0.1, 0.2].iter().map(|&a| member(a)).collect();
    let mut large = small.clone();
    large.extend([0.3, 0.45].iter().map(|&a| member(a)));
    let q = quad();
    let a = estimate_kvh(&space, &small, f64::INFINITY, &q).unwrap();
    let b = estimate_kvh(&space, &large, f64::INFINITY, &q).unwrap();
    assert!(b.report.value >= a.report.value);
    // closed form sqrt(2/(1-a)) at the maximizer
    assert_eq!(b.best_params, vec![0.45]);
    assert!(rel(b.report.value, (2.0f64 / 0.55).sqrt()) < 1e-7);
}

#[test]
fn fundamental_function_is_nondecreasing() {
    let q = quad();
    let spaces = [
        Space::Lp { p: 2.0, weight: None },
        Space::Lp { p: 3.0, weight: Some(WeightSpec::power(1.0, 0.5).unwrap()) },
        Space::SupWeighted { w: WeightSpec::power(1.0, 0.5).unwrap() },
    ];
    for space in &spaces {
        let mut prev = 0.0;
        for i in 1..=20 {
            let delta = i as f64 / 21.0;
            let r = fundamental_functions(delta, space, 1.0, &q).unwrap();
            assert!(r.phi_ystar >= prev, "{space:?} at {delta}");
            assert!(r.phi_y >= r.phi_ystar * (1.0 - 1e-12));
            prev = r.phi_ystar;
        }
    }
}

#[test]
fn square_mixed_norm_matches_polar_oracle() {
    // ∫∫ e^{-p(x² + y²)} over the quadrant = π/(4p)
    let f = MultiFn::custom(
        |x| (-(x[0] * x[0] + x[1] * x[1])).exp(),
        vec![Interval::HALF_LINE; 2],
        vec![vec![], vec![]],
    )
    .unwrap();
    let q = QuadratureConfig::default().with_rel_tol(1e-9);
    for &p in &[1.0, 2.0, 3.0] {
        let n = mixed_norm(&f, &[p, p], None, &q).unwrap().value;
        let want = (std::f64::consts::PI / (4.0 * p)).powf(1.0 / p);
        assert!(rel(n, want) < 1e-6, "p = {p}: {n} vs {want}");
    }
}

#[test]
fn divergent_integrals_report_infinity() {
    let f = RealFn::power(1.0, -1.0, Interval::HALF_LINE).unwrap();
    assert_eq!(integrate(&f, (0.0, 1.0), &quad()).unwrap(), f64::INFINITY);
    assert_eq!(integrate(&f, (1.0, f64::INFINITY), &quad()).unwrap(), f64::INFINITY);
}
