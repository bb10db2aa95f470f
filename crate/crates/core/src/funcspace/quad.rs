//! Adaptive Gauss–Kronrod integration on the logarithmic axis.
//!
//! An integral `∫_a^b f(x) dx` with `0 <= a < b <= ∞` is rewritten with
//! `x = e^u` as `∫ f(e^u) e^u du` over `[ln lo, ln hi]`, where `lo`/`hi` are the
//! configured cuts when the corresponding endpoint is `0` or `∞`. The pieces
//! `(0, lo)` and `(hi, ∞)` are closed with a local power-law fit
//! `f(x) ≈ c x^k`: the head contributes `f(lo) lo / (k + 1)` when `k > -1` and
//! the tail `f(hi) hi / (-k - 1)` when `k < -1`. A fitted exponent on the wrong
//! side of `-1` is a non-integrable power singularity and the integral is `+∞`.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Values above this are reported as `+∞`.
pub const OVERFLOW_SENTINEL: f64 = 1e300;

/// Log-axis spacing used for the head/tail exponent fit.
const FIT_STEP: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    pub lower_cut: f64,
    pub upper_cut: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            lower_cut: 1e-8,
            upper_cut: 1e8,
            rel_tol: 1e-6,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureConfig {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_cuts(mut self, lower_cut: f64, upper_cut: f64) -> Self {
        self.lower_cut = lower_cut;
        self.upper_cut = upper_cut;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lower_cut > 0.0 && self.lower_cut.is_finite()) {
            return Err(Error::InvalidQuadrature(format!(
                "lower cut must be positive, got {}",
                self.lower_cut
            )));
        }
        if !(self.upper_cut.is_finite() && self.lower_cut < self.upper_cut) {
            return Err(Error::InvalidQuadrature(format!(
                "need lower cut < upper cut, got {} and {}",
                self.lower_cut, self.upper_cut
            )));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-2) {
            return Err(Error::InvalidQuadrature(format!(
                "relative tolerance must lie in (0, 1e-2], got {}",
                self.rel_tol
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidQuadrature(
                "max_subdivisions must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

/// One 21-point Gauss–Kronrod panel; returns (estimate, error estimate).
fn qk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let result = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (result, err)
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Globally adaptive GK21 over the given sorted cut points.
fn adaptive<F: Fn(f64) -> f64>(f: &F, cuts: &[f64], cfg: &QuadratureConfig) -> Result<f64> {
    let mut heap = BinaryHeap::new();
    let mut done: Vec<Panel> = Vec::new();
    for w in cuts.windows(2) {
        if w[1] > w[0] {
            let (value, error) = qk21(f, w[0], w[1]);
            heap.push(Panel {
                a: w[0],
                b: w[1],
                value,
                error,
            });
        }
    }
    let mut splits = 0usize;
    loop {
        let total: f64 = heap.iter().chain(done.iter()).map(|p| p.value).sum();
        // panels retired at floating-point resolution cannot improve, so only
        // the active ones count against the tolerance
        let err: f64 = heap.iter().map(|p| p.error).sum();
        if total.is_nan() || err.is_nan() {
            return Err(Error::NonConvergentQuadrature {
                estimate: total,
                error: err,
            });
        }
        if total.is_infinite() {
            return Ok(f64::INFINITY);
        }
        if err <= cfg.rel_tol * total.abs() || err <= f64::MIN_POSITIVE {
            return Ok(sum_in_order(heap, done));
        }
        let Some(worst) = heap.pop() else {
            // every remaining panel is at resolution limit
            return Ok(sum_in_order(heap, done));
        };
        if splits >= cfg.max_subdivisions {
            return Err(Error::NonConvergentQuadrature {
                estimate: total,
                error: err,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b)
            || (worst.b - worst.a) <= 1e-13 * worst.a.abs().max(worst.b.abs()).max(1.0)
        {
            done.push(worst);
            continue;
        }
        splits += 1;
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = qk21(f, a, b);
            heap.push(Panel { a, b, value, error });
        }
    }
}

fn sum_in_order(heap: BinaryHeap<Panel>, done: Vec<Panel>) -> f64 {
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.extend(done);
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let total: f64 = panels.iter().map(|p| p.value).sum();
    if total > OVERFLOW_SENTINEL {
        f64::INFINITY
    } else {
        total
    }
}

/// Local power-law exponent `k` with `f(x2)/f(x1) = (x2/x1)^k`.
fn local_exponent(f1: f64, f2: f64, x1: f64, x2: f64) -> f64 {
    (f2 / f1).ln() / (x2 / x1).ln()
}

/// `∫_0^lo f` from the power-law fit at `lo`.
fn head<F: Fn(f64) -> f64>(f: &F, lo: f64) -> f64 {
    let x2 = lo * FIT_STEP.exp();
    let (f1, f2) = (f(lo).abs(), f(x2).abs());
    if f1.is_infinite() {
        return f64::INFINITY;
    }
    if f1 == 0.0 || f2 == 0.0 || f1.is_nan() || f2.is_nan() {
        return 0.0;
    }
    let k = local_exponent(f1, f2, lo, x2);
    if k <= -1.0 + 1e-9 {
        f64::INFINITY
    } else {
        f(lo) * lo / (k + 1.0)
    }
}

/// `∫_hi^∞ f` from the power-law fit at `hi`.
fn tail<F: Fn(f64) -> f64>(f: &F, hi: f64) -> f64 {
    let x1 = hi / FIT_STEP.exp();
    let (f1, f2) = (f(x1).abs(), f(hi).abs());
    if f2.is_infinite() {
        return f64::INFINITY;
    }
    if f1 == 0.0 || f2 == 0.0 || f1.is_nan() || f2.is_nan() {
        return 0.0;
    }
    let k = local_exponent(f1, f2, x1, hi);
    if k >= -1.0 - 1e-9 {
        f64::INFINITY
    } else {
        f(hi) * hi / (-k - 1.0)
    }
}

/// Integrate a closure over `(a, b)` with `0 <= a < b <= ∞`.
///
/// `breaks` lists points where `f` may jump or kink; those inside `(a, b)`
/// become panel boundaries.
pub fn integrate_fn<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if a.is_nan() || b.is_nan() || a < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "integration interval ({a}, {b}) must satisfy 0 <= a"
        )));
    }
    if b <= a {
        return Ok(0.0);
    }
    let lo = if a > 0.0 {
        a
    } else {
        cfg.lower_cut * if b.is_finite() { b.min(1.0) } else { 1.0 }
    };
    let hi = if b.is_finite() {
        b
    } else {
        cfg.upper_cut * a.max(1.0)
    };
    if !(lo > 0.0 && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidParameter(format!(
            "integration interval ({a:e}, {b:e}) leaves the representable range"
        )));
    }
    let head_part = if a == 0.0 { head(&f, lo) } else { 0.0 };
    let tail_part = if b.is_infinite() { tail(&f, hi) } else { 0.0 };
    if head_part.is_infinite() || tail_part.is_infinite() {
        return Ok(f64::INFINITY);
    }

    let mut cuts = vec![lo.ln()];
    let mut inner: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&x| x > lo && x < hi && x.is_finite())
        .map(f64::ln)
        .collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    cuts.extend(inner);
    cuts.push(hi.ln());

    let g = |u: f64| {
        let x = u.exp();
        let v = f(x);
        if v == 0.0 {
            0.0
        } else {
            v * x
        }
    };
    let middle = adaptive(&g, &cuts, cfg)?;
    let total = head_part + middle + tail_part;
    if total.abs() > OVERFLOW_SENTINEL {
        Ok(f64::INFINITY.copysign(total))
    } else {
        Ok(total)
    }
}

/// Like [`integrate_fn`] for integrands that can themselves fail.
///
/// The first error raised by the integrand aborts the integral and is returned.
pub fn integrate_fallible<F: Fn(f64) -> Result<f64>>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let wrapped = |x: f64| {
        if failure.borrow().is_some() {
            return 0.0;
        }
        match f(x) {
            Ok(v) => v,
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                0.0
            }
        }
    };
    let value = integrate_fn(wrapped, a, b, breaks, cfg);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    value
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default().with_rel_tol(1e-10)
    }

    #[test]
    fn unit_interval_constant() {
        let v = integrate_fn(|_| 1.0, 0.0, 1.0, &[], &cfg()).unwrap();
        assert!((v - 1.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn exponential_half_line() {
        let v = integrate_fn(|x: f64| (-x).exp(), 0.0, f64::INFINITY, &[], &cfg()).unwrap();
        assert!((v - 1.0).abs() < 1e-10, "{v}");
    }

    #[test]
    fn log_squared_tail_is_gamma_three() {
        let f = |x: f64| if x > 1.0 { x.powi(-2) * x.ln().powi(2) } else { 0.0 };
        let v = integrate_fn(f, 1.0, f64::INFINITY, &[], &QuadratureConfig::default()).unwrap();
        assert!((v - 2.0).abs() / 2.0 < 1e-6, "{v}");
    }

    #[test]
    fn integrable_singularity_at_zero() {
        let v = integrate_fn(|x: f64| x.powf(-0.5), 0.0, 4.0, &[], &cfg()).unwrap();
        assert!((v - 4.0).abs() < 1e-10, "{v}");
    }

    #[test]
    fn divergence_is_infinite_not_error() {
        let head = integrate_fn(|x: f64| 1.0 / x, 0.0, 1.0, &[], &cfg()).unwrap();
        assert!(head.is_infinite());
        let tail = integrate_fn(|_| 1.0, 0.0, f64::INFINITY, &[], &cfg()).unwrap();
        assert!(tail.is_infinite());
        let slow = integrate_fn(|x: f64| x.powf(-0.999), 1.0, f64::INFINITY, &[], &cfg()).unwrap();
        assert!(slow.is_infinite());
    }

    #[test]
    fn jump_handled_with_breakpoint() {
        let f = |x: f64| if x < 0.3 { 1.0 } else { 0.0 };
        let v = integrate_fn(f, 0.0, 1.0, &[0.3], &cfg()).unwrap();
        assert!((v - 0.3).abs() < 1e-12, "{v}");
    }

    #[test]
    fn nonconvergence_is_reported() {
        let tight = QuadratureConfig {
            max_subdivisions: 1,
            ..cfg()
        };
        let wiggle = |x: f64| (50.0 * x).sin().abs() + 1.0;
        let r = integrate_fn(wiggle, 0.5, 40.0, &[], &tight);
        assert!(matches!(r, Err(Error::NonConvergentQuadrature { .. })));
    }

    #[test]
    fn deterministic_bits() {
        let f = |x: f64| (-x).exp() * (1.0 + x.sin().abs());
        let a = integrate_fn(f, 0.0, f64::INFINITY, &[], &cfg()).unwrap();
        let b = integrate_fn(f, 0.0, f64::INFINITY, &[], &cfg()).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::default().validate().is_ok());
        assert!(QuadratureConfig::default().with_rel_tol(0.5).validate().is_err());
        assert!(QuadratureConfig::default().with_cuts(1.0, 0.5).validate().is_err());
    }

    #[test]
    fn fallible_integrand_propagates() {
        let r = integrate_fallible(
            |x| {
                if x > 0.5 {
                    Err(Error::ZeroNorm)
                } else {
                    Ok(1.0)
                }
            },
            0.0,
            1.0,
            &[],
            &cfg(),
        );
        assert_eq!(r, Err(Error::ZeroNorm));
    }
}
