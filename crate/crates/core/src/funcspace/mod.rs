//! Function representations, weights, dilation, tensor products and the
//! numerical engines (quadrature, supremum search) shared by every other
//! module.

mod function;
mod multi;
pub mod quad;
pub mod search;
mod weight;

pub use function::{
    dilate, make_function, make_function_json, parse_fn_spec, FnSpec, FormTag, Interval,
    Monotone, RealFn,
};
pub use multi::{tensor_product, MultiFn};
pub use quad::{integrate_fallible, integrate_fn, QuadratureConfig};
pub use search::{sup_linear_grid, sup_log_grid, SupConfig, SupResult};
pub use weight::{SlowPart, WeightSpec};

use crate::error::Result;

/// `∫_a^b f` over `(a, b)`, `0 <= a < b <= ∞`.
///
/// Power heads or tails whose closed-form exponent is not integrable return
/// `+∞` without sampling.
pub fn integrate(f: &RealFn, interval: (f64, f64), quad: &QuadratureConfig) -> Result<f64> {
    quad.validate()?;
    let (a, b) = interval;
    let d = f.domain();
    let lo = a.max(d.lo);
    let hi = b.min(d.hi);
    if !(hi > lo) {
        return Ok(0.0);
    }
    if lo == 0.0 {
        if let Some(k) = f.head_exponent() {
            if k <= -1.0 && f.eval(hi.min(1.0) * 0.5) > 0.0 {
                return Ok(f64::INFINITY);
            }
        }
    }
    if hi.is_infinite() && f.form() == FormTag::Power && f.eval(lo.max(1.0)) > 0.0 {
        if let Some(k) = f.head_exponent().or_else(|| power_exponent(f)) {
            if k >= -1.0 {
                return Ok(f64::INFINITY);
            }
        }
    }
    integrate_fn(|x| f.eval(x), lo, hi, &f.breakpoints(), quad)
}

fn power_exponent(f: &RealFn) -> Option<f64> {
    // slope of ln f on the log axis, exact for pure powers
    let (x1, x2) = (2.0, 4.0);
    let (f1, f2) = (f.eval(x1), f.eval(x2));
    (f1 > 0.0 && f2 > 0.0).then(|| (f2 / f1).ln() / std::f64::consts::LN_2)
}

/// Log-spaced points `lo · (hi/lo)^{i/(n-1)}`.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn integrate_examples() {
        let one = RealFn::constant(1.0, Interval::new(0.0, 1.0).unwrap()).unwrap();
        assert!((integrate(&one, (0.0, 1.0), &cfg()).unwrap() - 1.0).abs() < 1e-10);
        let e = RealFn::exponential(1.0, 1.0, Interval::HALF_LINE).unwrap();
        assert!((integrate(&e, (0.0, f64::INFINITY), &cfg()).unwrap() - 1.0).abs() < 1e-6);
        let f = RealFn::power_log(1.0, -2.0, 2.0, Interval::new(1.0, f64::INFINITY).unwrap()).unwrap();
        let v = integrate(&f, (1.0, f64::INFINITY), &cfg()).unwrap();
        assert!((v - 2.0).abs() / 2.0 < 1e-6, "{v}");
    }

    #[test]
    fn divergence_by_metadata() {
        let f = RealFn::power(1.0, -1.0, Interval::HALF_LINE).unwrap();
        assert_eq!(integrate(&f, (0.0, 1.0), &cfg()).unwrap(), f64::INFINITY);
        assert_eq!(integrate(&f, (1.0, f64::INFINITY), &cfg()).unwrap(), f64::INFINITY);
        let g = RealFn::power(1.0, -2.0, Interval::HALF_LINE).unwrap();
        assert!((integrate(&g, (1.0, f64::INFINITY), &cfg()).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn log_space_endpoints() {
        let v = log_space(1e-3, 1e3, 7);
        assert_eq!(v.len(), 7);
        assert!((v[3] - 1.0).abs() < 1e-12);
    }
}
