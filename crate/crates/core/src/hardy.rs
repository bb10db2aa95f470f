//! The Hardy (Cesàro) averaging operator `H[f](t) = t⁻¹ ∫_0^t f`, its
//! power-weighted variant and the box version on the positive octant.

use crate::error::{Error, Result};
use crate::funcspace::{
    integrate_fallible, integrate_fn, Interval, Monotone, MultiFn, QuadratureConfig, RealFn,
};

/// Output of [`hardy`].
#[derive(Debug, Clone)]
pub struct HardyResult {
    pub func: RealFn,
    /// `∫_0^x f` diverges for small `x`; `func` then evaluates to `+∞`.
    pub singular_head: bool,
}

/// `∫_0^t f` by quadrature.
fn running_integral(f: &RealFn, t: f64, quad: &QuadratureConfig) -> Result<f64> {
    let d = f.domain();
    let hi = t.min(d.hi);
    if !(hi > d.lo) {
        return Ok(0.0);
    }
    integrate_fn(|x| f.eval(x), d.lo, hi, &f.breakpoints(), quad)
}

/// `H[f](t)`, propagating quadrature failures.
pub fn hardy_at(f: &RealFn, t: f64, quad: &QuadratureConfig) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("Hardy operator needs t > 0, got {t}")));
    }
    Ok(running_integral(f, t, quad)? / t)
}

/// `H[f]` at sorted points, reusing the integral up to the previous point.
pub fn eval_many(f: &RealFn, ts: &[f64], quad: &QuadratureConfig) -> Result<Vec<f64>> {
    let mut order: Vec<usize> = (0..ts.len()).collect();
    order.sort_by(|&i, &j| ts[i].total_cmp(&ts[j]));
    let d = f.domain();
    let breaks = f.breakpoints();
    let mut out = vec![0.0; ts.len()];
    let mut acc = 0.0;
    let mut prev = d.lo;
    for i in order {
        let t = ts[i];
        if !(t > 0.0) {
            return Err(Error::InvalidParameter(format!("Hardy operator needs t > 0, got {t}")));
        }
        let hi = t.min(d.hi);
        if hi > prev {
            acc += integrate_fn(|x| f.eval(x), prev, hi, &breaks, quad)?;
            prev = hi;
        }
        out[i] = acc / t;
    }
    Ok(out)
}

/// `H[f]` as a lazily evaluated function.
///
/// Evaluation failures surface as `NaN`, which downstream quadrature reports
/// as non-convergence.
pub fn hardy(f: &RealFn, quad: &QuadratureConfig) -> Result<HardyResult> {
    quad.validate()?;
    let d = f.domain();
    let singular_head = d.lo == 0.0 && {
        let probe = if d.hi.is_finite() { d.hi.min(1.0) } else { 1.0 };
        running_integral(f, probe, quad)?.is_infinite()
    };
    let monotone = match f.monotone() {
        Monotone::NonIncreasing | Monotone::Constant if d.lo == 0.0 => Monotone::NonIncreasing,
        _ => Monotone::Unknown,
    };
    let (g, q) = (f.clone(), *quad);
    let func = RealFn::custom(
        move |t| {
            if singular_head {
                return f64::INFINITY;
            }
            hardy_at(&g, t, &q).unwrap_or(f64::NAN)
        },
        Interval::HALF_LINE,
        f.breakpoints(),
        monotone,
    );
    Ok(HardyResult {
        func,
        singular_head,
    })
}

/// `H_{α,β}[g](x) = x^α H[x^{−β} g](x)`.
pub fn hardy_weighted(g: &RealFn, alpha: f64, beta: f64, quad: &QuadratureConfig) -> Result<RealFn> {
    let inner = if beta == 0.0 {
        g.clone()
    } else {
        RealFn::product(vec![RealFn::power(1.0, -beta, Interval::HALF_LINE)?, g.clone()])?
    };
    let h = hardy(&inner, quad)?;
    if alpha == 0.0 {
        return Ok(h.func);
    }
    RealFn::product(vec![RealFn::power(1.0, alpha, Interval::HALF_LINE)?, h.func])
}

fn check_axis(f: &MultiFn, j: usize) -> Result<()> {
    if j >= f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: j + 1,
        });
    }
    Ok(())
}

/// Average along axis `j`: `x_j⁻¹ ∫_0^{x_j} f(…, s, …) ds`.
pub fn hardy_axis(f: &MultiFn, j: usize, quad: &QuadratureConfig) -> Result<MultiFn> {
    check_axis(f, j)?;
    if let Some(c) = f.components() {
        let h = hardy(&c[j], quad)?;
        return Ok(f.map_axis(j, h.func).expect("tensor input"));
    }
    let (g, q) = (f.clone(), *quad);
    let dim = f.dim();
    let domains: Vec<Interval> = (0..dim)
        .map(|k| if k == j { Interval::HALF_LINE } else { f.axis_domain(k) })
        .collect();
    let breaks: Vec<Vec<f64>> = (0..dim).map(|k| f.axis_breaks(k)).collect();
    let axis_breaks = breaks[j].clone();
    let lo = f.axis_domain(j).lo;
    MultiFn::custom(
        move |x: &[f64]| {
            let t = x[j];
            if !(t > lo) {
                return 0.0;
            }
            let r = integrate_fn(
                |s| {
                    let mut y = x.to_vec();
                    y[j] = s;
                    g.eval(&y)
                },
                lo,
                t,
                &axis_breaks,
                &q,
            );
            r.map(|v| v / t).unwrap_or(f64::NAN)
        },
        domains,
        breaks,
    )
}

/// `∫` of `f` over `(0, x_axis] × … × (0, x_d]` with the leading coordinates
/// fixed to `prefix`.
fn box_integral(f: &MultiFn, x: &[f64], prefix: &[f64], quad: &QuadratureConfig) -> Result<f64> {
    let axis = prefix.len();
    if axis == x.len() {
        return Ok(f.eval(prefix));
    }
    let dom = f.axis_domain(axis);
    let hi = x[axis].min(dom.hi);
    if !(hi > dom.lo) {
        return Ok(0.0);
    }
    integrate_fallible(
        |s| {
            let mut p = prefix.to_vec();
            p.push(s);
            box_integral(f, x, &p, quad)
        },
        dom.lo,
        hi,
        &f.axis_breaks(axis),
        quad,
    )
}

/// `H_d[f](x) = (∏ x_j)⁻¹ ∫_{(0, x]} f`.
///
/// Factorized inputs map to the tensor product of one-dimensional averages;
/// other inputs are integrated over the box by nested quadrature.
pub fn hardy_d(f: &MultiFn, quad: &QuadratureConfig) -> Result<MultiFn> {
    if let Some(c) = f.components() {
        let parts = c
            .iter()
            .map(|g| hardy(g, quad).map(|h| h.func))
            .collect::<Result<Vec<_>>>()?;
        return crate::funcspace::tensor_product(parts);
    }
    let (g, q) = (f.clone(), *quad);
    let dim = f.dim();
    MultiFn::custom(
        move |x: &[f64]| {
            let vol: f64 = x.iter().product();
            box_integral(&g, x, &[], &q)
                .map(|v| v / vol)
                .unwrap_or(f64::NAN)
        },
        vec![Interval::HALF_LINE; dim],
        (0..dim).map(|k| f.axis_breaks(k)).collect(),
    )
}

/// Box average evaluated at a single point, propagating failures.
pub fn hardy_d_at(f: &MultiFn, x: &[f64], quad: &QuadratureConfig) -> Result<f64> {
    if x.len() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: x.len(),
        });
    }
    let vol: f64 = x.iter().product();
    Ok(box_integral(f, x, &[], quad)? / vol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::tensor_product;

    fn quad() -> QuadratureConfig {
        QuadratureConfig::default().with_rel_tol(1e-10)
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn constant_and_identity() {
        let one = RealFn::constant(1.0, Interval::HALF_LINE).unwrap();
        let h = hardy(&one, &quad()).unwrap();
        assert!(!h.singular_head);
        for &t in &[1e-3, 1.0, 50.0] {
            assert!(close(h.func.eval(t), 1.0, 1e-10));
        }
        let id = RealFn::power(1.0, 1.0, Interval::HALF_LINE).unwrap();
        let h = hardy(&id, &quad()).unwrap();
        assert!(close(h.func.eval(3.0), 1.5, 1e-10));
    }

    #[test]
    fn log_power_test_function() {
        let delta = 2.0;
        let f0 = RealFn::power_log(1.0, -1.0, delta, Interval::new(1.0, f64::INFINITY).unwrap()).unwrap();
        let h = hardy(&f0, &quad()).unwrap();
        for &x in &[1.5f64, 3.0, 40.0] {
            let want = x.ln().powf(delta + 1.0) / ((1.0 + delta) * x);
            assert!(close(h.func.eval(x), want, 1e-9), "{x}");
        }
        assert_eq!(h.func.eval(0.5), 0.0);
    }

    #[test]
    fn singular_head_flagged() {
        let f = RealFn::power(1.0, -1.0, Interval::HALF_LINE).unwrap();
        let h = hardy(&f, &quad()).unwrap();
        assert!(h.singular_head);
        assert_eq!(h.func.eval(2.0), f64::INFINITY);
    }

    #[test]
    fn weighted_examples() {
        let ind = RealFn::indicator(0.0, 1.0).unwrap();
        let h = hardy_weighted(&ind, 0.5, 0.0, &quad()).unwrap();
        assert!(close(h.eval(4.0), 0.5, 1e-10));
        let g = RealFn::power(1.0, 0.3, Interval::HALF_LINE).unwrap();
        let h = hardy_weighted(&g, 0.7, 0.3, &quad()).unwrap();
        assert!(close(h.eval(2.0), 2f64.powf(0.7), 1e-9));
    }

    #[test]
    fn eval_many_matches_pointwise() {
        let e = RealFn::exponential(1.0, 1.0, Interval::HALF_LINE).unwrap();
        let ts = [5.0, 0.1, 1.0, 2.0];
        let v = eval_many(&e, &ts, &quad()).unwrap();
        for (t, got) in ts.iter().zip(v) {
            assert!(close(got, (1.0 - (-t).exp()) / t, 1e-9));
        }
    }

    #[test]
    fn box_average_of_exponentials() {
        let e = RealFn::exponential(1.0, 1.0, Interval::HALF_LINE).unwrap();
        let f = tensor_product(vec![e.clone(), e]).unwrap();
        let want = (1.0 - (-1.0f64).exp()).powi(2);
        assert!(close(hardy_d(&f, &quad()).unwrap().eval(&[1.0, 1.0]), want, 1e-9));
        assert!(close(hardy_d_at(&f, &[1.0, 1.0], &quad()).unwrap(), want, 1e-9));
    }

    #[test]
    fn axis_average_custom() {
        let f = MultiFn::custom(|x| x[0] * x[1], vec![Interval::HALF_LINE; 2], vec![vec![], vec![]]).unwrap();
        let h = hardy_axis(&f, 0, &quad()).unwrap();
        assert!(close(h.eval(&[2.0, 3.0]), 3.0, 1e-9));
        assert!(hardy_axis(&f, 2, &quad()).is_err());
    }
}
