use hardyspace::hardy::{hardy, hardy_at};
use hardyspace::norms::lp_norm;
use hardyspace::rearrange::{max_integral_form, MeasureSpec};
use hardyspace::{Error, Interval, QuadratureConfig, RealFn, WeightSpec};

fn quad() -> QuadratureConfig {
    QuadratureConfig::default()
}

#[test]
fn max_form_of_singular_power_is_exact() {
    let f = RealFn::power(1.0, -0.5, Interval { lo: 0.0, hi: 1.0 }).unwrap();
    for t in [0.1f64, 0.5] {
        let v = max_integral_form(&f, &MeasureSpec::HalfLine, t, &quad()).unwrap();
        assert!((v * t.sqrt() / 2.0 - 1.0).abs() < 1e-12, "t = {t}: {v}");
    }
}

#[test]
fn subnormal_argument_is_an_error_not_nan() {
    let f = RealFn::indicator(0.0, 1.0).unwrap();
    assert!(matches!(hardy_at(&f, 1e-320, &quad()), Err(Error::InvalidParameter(_))));
    assert!((hardy_at(&f, 1e-300, &quad()).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn steep_weight_with_fast_decay() {
    // ∫_1^∞ x^39 x^-78 dx = 1/38, plus ∫_0^1 x^39 = 1/40
    let h = hardy(&RealFn::indicator(0.0, 1.0).unwrap(), &quad()).unwrap();
    let w = WeightSpec::power(1.0, 39.0).unwrap();
    let v = lp_norm(&h.func, 78.0, Some(&w), &quad()).unwrap().value;
    let want = (1.0f64 / 38.0 + 1.0 / 40.0).powf(1.0 / 78.0);
    assert!((v / want - 1.0).abs() < 1e-9, "{v} vs {want}");
}

#[test]
fn ln_eval_matches_eval() {
    let w = WeightSpec::power(2.0, 1.5).unwrap();
    for x in [1e-3, 0.7, 40.0] {
        assert!((w.ln_eval(x) - w.eval(x).ln()).abs() < 1e-12);
    }
    assert!(w.ln_eval(1e250).is_finite());
    let cut = WeightSpec::unit().with_support(Interval { lo: 0.0, hi: 1.0 }).unwrap();
    assert_eq!(cut.ln_eval(2.0), f64::NEG_INFINITY);
}
