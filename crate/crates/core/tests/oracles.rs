//! Closed-form and independently computed reference values, frozen as literals.

use hardyspace::constants::{
    bradley_bpq, k0_family, mazja_b, muckenhoupt_d, power_log_ratio, stepanov_bounds,
    validate_exponents,
};
use hardyspace::hardy::hardy;
use hardyspace::lorentz::{exactness_family, fundamental_functions};
use hardyspace::norms::{lp_norm, Space};
use hardyspace::rearrange::{double_star, max_integral_form, MeasureSpec};
use hardyspace::{Interval, QuadratureConfig, RealFn, WeightSpec};

fn quad() -> QuadratureConfig {
    QuadratureConfig::default().with_rel_tol(1e-10)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

// mpmath, 30 digits: sqrt(2(2Δ+1)/(Δ+1))
const HARDY_RATIO_P2: [(f64, f64); 3] = [
    (1.0, 1.732_050_807_568_877_3),
    (10.0, 1.954_016_841_836_788_8),
    (50.0, 1.990_171_930_694_805_6),
];

#[test]
fn power_log_ratio_closed_form_matches_frozen_values() {
    for (delta, want) in HARDY_RATIO_P2 {
        assert!(rel(power_log_ratio(0.0, 0.0, 2.0, 2.0, delta), want) < 1e-12);
    }
    // off-diagonal exponents: the ratio decays instead of approaching a limit
    let r1 = power_log_ratio(0.5, 0.0, 4.0 / 3.0, 4.0, 1.0);
    let r10 = power_log_ratio(0.5, 0.0, 4.0 / 3.0, 4.0, 10.0);
    assert!(rel(r1, 0.908_976_731_468_802) < 1e-10);
    assert!(rel(r10, 0.639_817_722_015_141_2) < 1e-10);
}

#[test]
fn power_log_ratio_by_quadrature() {
    let q = QuadratureConfig::default().with_rel_tol(1e-10).with_cuts(1e-8, 1e40);
    let delta = 1.0;
    let f0 = RealFn::power_log(1.0, -1.0, delta, Interval::new(1.0, f64::INFINITY).unwrap()).unwrap();
    let h = hardy(&f0, &q).unwrap();
    let top = lp_norm(&h.func, 2.0, None, &q).unwrap().value;
    let bottom = lp_norm(&f0, 2.0, None, &q).unwrap().value;
    assert!(rel(top / bottom, HARDY_RATIO_P2[0].1) < 1e-6, "{}", top / bottom);
}

#[test]
fn exponential_hardy_norm() {
    // ∫((1 - e^{-t})/t)² dt = 2 ln 2
    let e = RealFn::exponential(1.0, 1.0, Interval::HALF_LINE).unwrap();
    let h = hardy(&e, &quad()).unwrap();
    let n = lp_norm(&h.func, 2.0, None, &quad()).unwrap().value;
    assert!(rel(n, (2.0 * 2f64.ln()).sqrt()) < 1e-8);
    assert!(rel(n / lp_norm(&e, 2.0, None, &quad()).unwrap().value, 1.665_109_222_315_395_5) < 1e-8);
}

#[test]
fn rearrangement_examples() {
    let ind = RealFn::indicator(0.0, 0.3).unwrap();
    assert!(rel(double_star(&ind, 0.6, &quad()).unwrap(), 0.5) < 1e-12);
    let f = RealFn::indicator(0.0, 0.3).unwrap();
    let m = max_integral_form(&f, &MeasureSpec::Probability, 0.2, &quad()).unwrap();
    assert!(rel(m, 1.0) < 1e-12);
}

#[test]
fn exactness_family_values() {
    let (fs, fss) = exactness_family(1.0).unwrap();
    // f**(1/2) = 2 ∫_0^{1/2} (1 - s) ds = 3/4
    assert!(rel(fs.eval(0.5), 0.5) < 1e-15 && rel(fss.eval(0.5), 0.75) < 1e-15);
    let (fs, fss) = exactness_family(0.01).unwrap();
    let a = lp_norm(&fs, 2.0, None, &quad()).unwrap().value;
    let b = lp_norm(&fss, 2.0, None, &quad()).unwrap().value;
    // mpmath closed form of the norm ratio at κ = 0.01
    assert!(rel(b / a, 1.576_435_382_390_120_4) < 1e-6, "{}", b / a);
    assert!((b / a - 2.5f64.sqrt()).abs() < 0.01);
    // pointwise ratio near zero is close to one for small κ
    let t = 1e-6;
    assert!((fss.eval(t) / fs.eval(t) - 1.0).abs() < 0.1);
    // the average computed by quadrature agrees with the closed form
    for &t in &[0.1, 0.5, 0.9] {
        assert!(rel(double_star(&fs, t, &quad()).unwrap(), fss.eval(t)) < 1e-8);
    }
}

#[test]
fn constants_frozen() {
    let one = WeightSpec::unit();
    let m3 = muckenhoupt_d(&one, 3.0, &quad()).unwrap();
    assert!(rel(m3.value, 0.5) < 1e-8);
    let s = stepanov_bounds(&one, &one, 3.0, 3.0, &quad()).unwrap();
    assert!(rel(s.a1.value, 0.793_700_525_984_099_7) < 1e-6);
    let u = WeightSpec::unit().with_support(Interval::new(0.0, 1.0).unwrap()).unwrap();
    let mz = mazja_b(&u, &one, 2.0, 1.0, &quad()).unwrap();
    assert!(rel(mz.value, 0.577_350_269_189_625_7) < 1e-6);
}

#[test]
fn power_weight_family_ledger() {
    let eq = validate_exponents(0.5, 0.0, 4.0 / 3.0).unwrap();
    let k = k0_family(&eq).unwrap();
    assert!((k.form1 - 1.0).abs() <= 1e-10);
    assert!((k.form2 - 3f64.sqrt()).abs() <= 1e-10);
    assert!((k.lower_bound - 1.754_765_350_603_323_3).abs() <= 1e-10);
    // the printed lower bound exceeds the upper end of the Bradley bracket
    let u = WeightSpec::power(1.0, -0.5).unwrap();
    let b = bradley_bpq(&u, &WeightSpec::unit(), eq.p, eq.q, &quad()).unwrap();
    let (_, hi) = b.bracket.unwrap();
    assert!(rel(hi, 1.519_671_371_303_185_2) < 1e-6);
    assert!(k.lower_bound > hi);
}

#[test]
fn fundamental_function_of_sup_space() {
    let w = WeightSpec::power(1.0, 0.5).unwrap();
    let r = fundamental_functions(0.25, &Space::SupWeighted { w }, 1.0, &quad()).unwrap();
    assert!(rel(r.phi_ystar, 0.5) < 1e-9 && rel(r.phi_y, 0.5) < 1e-9);
}
