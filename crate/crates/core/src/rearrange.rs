//! Tail functions `T_f(t) = μ{|f| ≥ t}`, the decreasing rearrangement `f*`
//! and the maximal average `f** (t) = t⁻¹ ∫_0^t f*`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{integrate, integrate_fn, Interval, Monotone, QuadratureConfig, RealFn};

/// Node budget for sampled tail estimation.
pub const SAMPLE_NODES: usize = 1 << 14;

/// Lebesgue measure restricted to a subset of the half-line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MeasureSpec {
    Interval { a: f64, b: f64 },
    HalfLine,
    /// `[0, 1]` with total mass exactly one.
    Probability,
}

impl MeasureSpec {
    pub fn support(&self) -> Interval {
        match *self {
            MeasureSpec::Interval { a, b } => Interval { lo: a, hi: b },
            MeasureSpec::HalfLine => Interval::HALF_LINE,
            MeasureSpec::Probability => Interval { lo: 0.0, hi: 1.0 },
        }
    }

    pub fn total_mass(&self) -> f64 {
        match *self {
            MeasureSpec::Probability => 1.0,
            _ => self.support().length(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let MeasureSpec::Interval { a, b } = *self {
            Interval::new(a, b)?;
        }
        Ok(())
    }
}

type Closed = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum TailRepr {
    Zero,
    /// `T(t) = masses[i]` for `levels[i+1] < t <= levels[i]`, levels descending.
    Steps { levels: Vec<f64>, masses: Vec<f64> },
    /// `f` nonincreasing on `[lo, hi)`; `T(t) = sup{x : f(x) >= t} - lo`.
    Decreasing { f: RealFn, lo: f64, hi: f64 },
    /// `f` nondecreasing on `[lo, hi)`; `T(t) = hi - inf{x : f(x) >= t}`.
    Increasing { f: RealFn, lo: f64, hi: f64 },
    Closed(Closed),
}

/// Right-continuous nonincreasing `t ↦ μ{|f| ≥ t}`.
#[derive(Clone)]
pub struct TailFunction {
    repr: TailRepr,
    total_mass: f64,
    sampled: bool,
}

impl fmt::Debug for TailFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.repr {
            TailRepr::Zero => "zero",
            TailRepr::Steps { .. } => "steps",
            TailRepr::Decreasing { .. } => "decreasing",
            TailRepr::Increasing { .. } => "increasing",
            TailRepr::Closed(_) => "closed",
        };
        f.debug_struct("TailFunction")
            .field("repr", &kind)
            .field("total_mass", &self.total_mass)
            .field("sampled", &self.sampled)
            .finish()
    }
}

/// Largest `x` in `[lo, hi)` with `pred(x)`, for a predicate true on an
/// initial segment. `hi` may be infinite.
fn last_true<P: Fn(f64) -> bool>(pred: P, lo: f64, hi: f64) -> f64 {
    let mut a = lo;
    let mut b = if hi.is_finite() {
        hi
    } else {
        let mut b = lo.max(1.0);
        while pred(b) {
            b *= 2.0;
            if b > 1e300 {
                return f64::INFINITY;
            }
        }
        b
    };
    for _ in 0..2000 {
        let m = if a > 0.0 && b / a > 4.0 {
            (a * b).sqrt()
        } else {
            0.5 * (a + b)
        };
        if !(m > a && m < b) {
            break;
        }
        if pred(m) {
            a = m;
        } else {
            b = m;
        }
    }
    // the crossing lies in [a, b] and the two are adjacent floats
    b
}

impl TailFunction {
    /// Tail of an arbitrary nonincreasing right-continuous map.
    pub fn from_closed<F>(t: F, total_mass: f64) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        TailFunction {
            repr: TailRepr::Closed(Arc::new(t)),
            total_mass,
            sampled: false,
        }
    }

    pub fn zero(total_mass: f64) -> Self {
        TailFunction {
            repr: TailRepr::Zero,
            total_mass,
            sampled: false,
        }
    }

    /// Step tail from `(value, measure)` pieces of a simple function.
    fn from_pieces(mut pieces: Vec<(f64, f64)>, total_mass: f64, sampled: bool) -> Self {
        pieces.retain(|(v, m)| *v > 0.0 && *m > 0.0);
        if pieces.is_empty() {
            let mut z = TailFunction::zero(total_mass);
            z.sampled = sampled;
            return z;
        }
        pieces.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut levels: Vec<f64> = Vec::new();
        let mut masses: Vec<f64> = Vec::new();
        let mut acc = 0.0;
        for (v, m) in pieces {
            acc += m;
            if levels.last() == Some(&v) {
                *masses.last_mut().unwrap() = acc;
            } else {
                levels.push(v);
                masses.push(acc);
            }
        }
        TailFunction {
            repr: TailRepr::Steps { levels, masses },
            total_mass,
            sampled,
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    /// True when the tail was estimated from samples.
    pub fn sampled(&self) -> bool {
        self.sampled
    }

    pub fn is_exact(&self) -> bool {
        !self.sampled
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.total_mass;
        }
        let v = match &self.repr {
            TailRepr::Zero => 0.0,
            TailRepr::Steps { levels, masses } => {
                // number of levels >= t
                let k = levels.partition_point(|&l| l >= t);
                if k == 0 {
                    0.0
                } else {
                    masses[k - 1]
                }
            }
            TailRepr::Decreasing { f, lo, hi } => {
                if !(f.eval(*lo) >= t) {
                    0.0
                } else {
                    let x = last_true(|x| f.eval(x) >= t, *lo, *hi);
                    x.min(*hi) - lo
                }
            }
            TailRepr::Increasing { f, lo, hi } => {
                if hi.is_infinite() {
                    let probe = lo.max(1.0) * 1e300;
                    return if f.eval(probe) >= t { f64::INFINITY } else { 0.0 };
                }
                let top = hi * (1.0 - 1e-16);
                if !(f.eval(top) >= t) {
                    0.0
                } else {
                    // mirror: g(y) = f(hi - y) is nonincreasing on [0, hi - lo)
                    let y = last_true(|y| f.eval(hi - y) >= t, 0.0, hi - lo);
                    y.min(hi - lo)
                }
            }
            TailRepr::Closed(c) => c(t),
        };
        v.min(self.total_mass)
    }

    /// Level values at which the tail jumps, descending. Empty for continuous
    /// representations.
    pub fn jump_levels(&self) -> Vec<f64> {
        match &self.repr {
            TailRepr::Steps { levels, .. } => levels.clone(),
            _ => vec![],
        }
    }
}

/// Restrict `f` to the measure support and return the window where it lives.
fn window(f: &RealFn, mu: &MeasureSpec) -> Option<Interval> {
    f.domain().intersect(&mu.support())
}

fn sampled_tail(f: &RealFn, w: Interval, total_mass: f64) -> TailFunction {
    // log-spaced cells over the window; the last cell extends to the window end
    let lo = if w.lo > 0.0 { w.lo } else { 1e-12 * w.hi.min(1.0) };
    let hi = if w.hi.is_finite() { w.hi } else { lo.max(1.0) * 1e12 };
    let n = SAMPLE_NODES;
    let (a, b) = (lo.ln(), hi.ln());
    let mut pieces = Vec::with_capacity(n + 1);
    if w.lo == 0.0 {
        pieces.push((f.eval(0.5 * lo), lo));
    }
    let mut prev = lo;
    for i in 1..=n {
        let x = (a + (b - a) * i as f64 / n as f64).exp();
        let mid = (prev * x).sqrt();
        pieces.push((f.eval(mid), x - prev));
        prev = x;
    }
    TailFunction::from_pieces(pieces, total_mass, true)
}

/// Exact tail of `f` when its form allows it.
pub fn tail_function_exact(f: &RealFn, mu: &MeasureSpec) -> Result<TailFunction> {
    mu.validate()?;
    let total = mu.total_mass();
    let Some(w) = window(f, mu) else {
        return Ok(TailFunction::zero(total));
    };
    if f.is_indicator() {
        return Ok(TailFunction::from_pieces(vec![(1.0, w.length())], total, false));
    }
    if let Some((breaks, values)) = f.steps() {
        let pieces = values
            .iter()
            .enumerate()
            .filter_map(|(i, &v)| {
                let cell = Interval {
                    lo: breaks[i],
                    hi: breaks[i + 1],
                };
                cell.intersect(&w).map(|c| (v, c.length()))
            })
            .collect();
        return Ok(TailFunction::from_pieces(pieces, total, false));
    }
    match f.monotone() {
        Monotone::Constant => {
            let v = f.eval(w.lo);
            Ok(TailFunction::from_pieces(vec![(v, w.length())], total, false))
        }
        Monotone::NonIncreasing => Ok(TailFunction {
            repr: TailRepr::Decreasing {
                f: f.clone(),
                lo: w.lo,
                hi: w.hi,
            },
            total_mass: total,
            sampled: false,
        }),
        Monotone::NonDecreasing => Ok(TailFunction {
            repr: TailRepr::Increasing {
                f: f.clone(),
                lo: w.lo,
                hi: w.hi,
            },
            total_mass: total,
            sampled: false,
        }),
        Monotone::Unknown => Err(Error::UnsupportedFormForExactTail),
    }
}

/// `T_f(t) = μ{|f| ≥ t}`.
///
/// Exact for indicator, step and monotone forms; otherwise estimated from
/// [`SAMPLE_NODES`] log-spaced cells, with [`TailFunction::sampled`] set.
pub fn tail_function(f: &RealFn, mu: &MeasureSpec, _quad: &QuadratureConfig) -> Result<TailFunction> {
    match tail_function_exact(f, mu) {
        Err(Error::UnsupportedFormForExactTail) => {
            let w = window(f, mu).expect("window exists when the exact path ran");
            Ok(sampled_tail(f, w, mu.total_mass()))
        }
        other => other,
    }
}

/// `f*(s) = inf{t ≥ 0 : T(t) ≤ s}` on `[0, μ(X))`.
pub fn decreasing_rearrangement(tail: &TailFunction) -> RealFn {
    let total = tail.total_mass;
    let dom = Interval {
        lo: 0.0,
        hi: total,
    };
    match &tail.repr {
        TailRepr::Zero => RealFn::constant(0.0, dom).expect("zero"),
        TailRepr::Steps { levels, masses } => {
            let mut breaks = vec![0.0];
            breaks.extend(masses.iter().map(|m| m.min(total)));
            let mut values = levels.clone();
            // drop pieces squeezed out by the total mass
            while breaks.len() > 2 && breaks[breaks.len() - 1] <= breaks[breaks.len() - 2] {
                breaks.pop();
                values.pop();
            }
            RealFn::piecewise_constant(breaks, values).expect("valid step rearrangement")
        }
        TailRepr::Decreasing { f, lo, hi } => {
            let len = hi - lo;
            if *lo == 0.0 {
                f.restrict(Interval { lo: 0.0, hi: len })
            } else {
                let (f, lo) = (f.clone(), *lo);
                let breaks = f.breakpoints().iter().map(|b| b - lo).filter(|b| *b > 0.0).collect();
                RealFn::custom(
                    move |s| f.eval(lo + s),
                    Interval { lo: 0.0, hi: len },
                    breaks,
                    Monotone::NonIncreasing,
                )
            }
        }
        TailRepr::Increasing { f, lo, hi } => {
            let (f, hi) = (f.clone(), *hi);
            let len = hi - lo;
            RealFn::custom(
                move |s| if hi.is_finite() { f.eval(hi - s - hi * 1e-16) } else { f64::INFINITY },
                Interval { lo: 0.0, hi: len },
                vec![],
                Monotone::NonIncreasing,
            )
        }
        TailRepr::Closed(_) => {
            let t = tail.clone();
            RealFn::custom(
                move |s| generic_left_inverse(&t, s),
                dom,
                vec![],
                Monotone::NonIncreasing,
            )
        }
    }
}

fn generic_left_inverse(tail: &TailFunction, s: f64) -> f64 {
    if tail.eval(0.0) <= s {
        return 0.0;
    }
    // T(t) > s for t below the answer
    let mut hi = 1.0;
    while tail.eval(hi) > s {
        hi *= 2.0;
        if hi > 1e300 {
            return f64::INFINITY;
        }
    }
    let mut lo = 0.0;
    for _ in 0..2000 {
        let m = if lo > 0.0 && hi / lo > 4.0 {
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        if !(m > lo && m < hi) {
            break;
        }
        if tail.eval(m) > s {
            lo = m;
        } else {
            hi = m;
        }
    }
    hi
}

/// `f**(t) = t⁻¹ ∫_0^t f*`. Returns `+∞` when the head is not integrable.
pub fn double_star(fstar: &RealFn, t: f64, quad: &QuadratureConfig) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("f** needs t > 0, got {t}")));
    }
    let integral = match fstar.primitive(t) {
        Some(v) => v,
        None => integrate(fstar, (0.0, t), quad)?,
    };
    Ok(integral / t)
}

/// `t⁻¹ sup{∫_E |f| dμ : μ(E) ≤ t}` evaluated as
/// `t⁻¹ (∫ (|f| - f*(t))₊ dμ + t f*(t))`.
pub fn max_integral_form(
    f: &RealFn,
    mu: &MeasureSpec,
    t: f64,
    quad: &QuadratureConfig,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("t must be positive, got {t}")));
    }
    let tail = tail_function(f, mu, quad)?;
    let fstar = decreasing_rearrangement(&tail);
    let level = fstar.eval(t);
    let Some(w) = window(f, mu) else {
        return Ok(0.0);
    };
    let crossing = if level > 0.0 { level_crossing(f, w, level) } else { None };
    let excess = match crossing {
        // {f > level} is (lo, x); integrating f itself keeps the head closure exact
        Some(x) => {
            let inner: Vec<f64> = f.breakpoints().into_iter().filter(|&b| b > w.lo && b < x).collect();
            (integrate_fn(|s| f.eval(s), w.lo, x, &inner, quad)? - level * (x - w.lo)).max(0.0)
        }
        None => integrate_fn(|x| (f.eval(x) - level).max(0.0), w.lo, w.hi, &f.breakpoints(), quad)?,
    };
    let mass = t.min(mu.total_mass());
    Ok((excess + level * mass) / t)
}

fn level_crossing(f: &RealFn, w: Interval, level: f64) -> Option<f64> {
    match f.monotone() {
        Monotone::NonIncreasing if f.eval(w.lo) >= level => {
            Some(last_true(|x| f.eval(x) >= level, w.lo, w.hi)).filter(|x| x.is_finite())
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad() -> QuadratureConfig {
        QuadratureConfig::default().with_rel_tol(1e-10)
    }

    #[test]
    fn indicator_tail_and_rearrangement() {
        let f = RealFn::indicator(0.0, 0.3).unwrap();
        let t = tail_function(&f, &MeasureSpec::Probability, &quad()).unwrap();
        assert_eq!(t.eval(0.5), 0.3);
        assert_eq!(t.eval(1.0), 0.3);
        assert_eq!(t.eval(1.0 + 1e-12), 0.0);
        let fs = decreasing_rearrangement(&t);
        assert_eq!(fs.eval(0.29), 1.0);
        assert_eq!(fs.eval(0.3), 0.0);
    }

    #[test]
    fn indicator_rearrangement_depends_only_on_measure() {
        let a = RealFn::indicator(0.5, 0.8).unwrap();
        let t = tail_function(&a, &MeasureSpec::Probability, &quad()).unwrap();
        let fs = decreasing_rearrangement(&t);
        assert_eq!(fs.eval(0.0), 1.0);
        assert!(fs.eval(0.2999) == 1.0 && fs.eval(0.3001) == 0.0);
    }

    #[test]
    fn exponential_tail_is_log() {
        let f = RealFn::exponential(1.0, 1.0, Interval::HALF_LINE).unwrap();
        let t = tail_function(&f, &MeasureSpec::HalfLine, &quad()).unwrap();
        for &s in &[0.01f64, 0.2, 0.5, 0.9] {
            let want: f64 = (1.0 / s).ln();
            assert!((t.eval(s) - want).abs() < 1e-12 * want.max(1.0), "{s}");
        }
        assert_eq!(t.eval(1.5), 0.0);
        let fs = decreasing_rearrangement(&t);
        assert!((fs.eval(0.7) - (-0.7f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn constant_tail() {
        let f = RealFn::constant(2.5, Interval::new(0.0, 1.0).unwrap()).unwrap();
        let t = tail_function(&f, &MeasureSpec::Probability, &quad()).unwrap();
        assert_eq!(t.eval(2.5), 1.0);
        assert_eq!(t.eval(2.6), 0.0);
    }

    #[test]
    fn zero_tail_gives_zero_rearrangement() {
        let z = TailFunction::zero(1.0);
        let fs = decreasing_rearrangement(&z);
        assert_eq!(fs.eval(0.3), 0.0);
    }

    #[test]
    fn closed_tail_left_inverse() {
        let t = TailFunction::from_closed(|t: f64| if t < 1.0 { -t.ln() } else { 0.0 }, f64::INFINITY);
        let fs = decreasing_rearrangement(&t);
        for &s in &[0.1, 1.0, 3.0] {
            assert!((fs.eval(s) - (-s).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn double_star_examples() {
        let one = RealFn::constant(1.0, Interval::new(0.0, 1.0).unwrap()).unwrap();
        assert!((double_star(&one, 0.5, &quad()).unwrap() - 1.0).abs() < 1e-15);
        let ind = RealFn::indicator(0.0, 0.3).unwrap();
        assert!((double_star(&ind, 0.6, &quad()).unwrap() - 0.5).abs() < 1e-15);
        let h = RealFn::sum(vec![
            (1.0, RealFn::indicator(0.0, 1.0).unwrap()),
            (-1.0, RealFn::power(1.0, 1.0, Interval::new(0.0, 1.0).unwrap()).unwrap()),
        ])
        .unwrap();
        assert!((double_star(&h, 1.0, &quad()).unwrap() - 0.5).abs() < 1e-15);
        let sing = RealFn::power(1.0, -1.5, Interval::HALF_LINE).unwrap();
        assert_eq!(double_star(&sing, 1.0, &quad()).unwrap(), f64::INFINITY);
    }

    #[test]
    fn max_integral_matches_double_star() {
        let ind = RealFn::indicator(0.0, 0.3).unwrap();
        let v = max_integral_form(&ind, &MeasureSpec::Probability, 0.2, &quad()).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        let e = RealFn::exponential(1.0, 1.0, Interval::HALF_LINE).unwrap();
        for &t in &[0.1, 1.0, 4.0] {
            let a = max_integral_form(&e, &MeasureSpec::HalfLine, t, &quad()).unwrap();
            let b = (1.0 - (-t).exp()) / t;
            assert!((a - b).abs() <= 1e-8 * b, "{a} {b}");
        }
        let z = RealFn::constant(0.0, Interval::HALF_LINE).unwrap();
        assert_eq!(max_integral_form(&z, &MeasureSpec::Probability, 0.5, &quad()).unwrap(), 0.0);
    }

    #[test]
    fn sampled_tail_for_bump() {
        // x e^{-x} is not monotone
        let f = RealFn::product(vec![
            RealFn::power(1.0, 1.0, Interval::HALF_LINE).unwrap(),
            RealFn::exponential(1.0, 1.0, Interval::HALF_LINE).unwrap(),
        ])
        .unwrap();
        assert!(tail_function_exact(&f, &MeasureSpec::HalfLine).is_err());
        let t = tail_function(&f, &MeasureSpec::HalfLine, &quad()).unwrap();
        assert!(t.sampled());
        // level 1/e is attained only at x = 1
        assert!(t.eval(0.2) > 2.0 && t.eval(0.5) == 0.0);
    }
}
