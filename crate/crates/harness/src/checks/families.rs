//! Fixed and seeded test-function families shared by several checks.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use hardyspace::funcspace::Monotone;
use hardyspace::{dilate, Interval, RealFn};

fn half() -> Interval {
    Interval::HALF_LINE
}

fn unit() -> Interval {
    Interval { lo: 0.0, hi: 1.0 }
}

/// Ten functions whose tail functions are computed exactly.
pub fn identity_family() -> Vec<(&'static str, RealFn)> {
    let e = RealFn::exponential(1.0, 1.0, half()).unwrap();
    vec![
        ("exp", e.clone()),
        ("3exp(-2x)", RealFn::exponential(3.0, 2.0, half()).unwrap()),
        ("1_(0,1)", RealFn::indicator(0.0, 1.0).unwrap()),
        ("1_(0.5,2)", RealFn::indicator(0.5, 2.0).unwrap()),
        (
            "steps up",
            RealFn::piecewise_constant(vec![0.0, 1.0, 2.0, 3.0], vec![1.0, 2.0, 3.0]).unwrap(),
        ),
        (
            "steps mixed",
            RealFn::piecewise_constant(vec![0.0, 0.3, 1.0, 1.2, 3.0], vec![2.0, 0.5, 4.0, 1.0]).unwrap(),
        ),
        ("x^-1/2 on (0,1)", RealFn::power(1.0, -0.5, unit()).unwrap()),
        ("x^2 on (0,1)", RealFn::power(1.0, 2.0, unit()).unwrap()),
        ("exp(-3x) by dilation", dilate(&e, 3.0).unwrap()),
        (
            "(1+x)^-2",
            RealFn::custom(|x| (1.0 + x).powi(-2), half(), vec![], Monotone::NonIncreasing),
        ),
    ]
}

/// Nonincreasing step function starting at 0 with 1..=`max_steps` steps.
pub fn decreasing_steps(rng: &mut ChaCha8Rng, max_steps: usize, total: Option<f64>) -> RealFn {
    let n = rng.gen_range(1..=max_steps);
    let mut values: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..5.0)).collect();
    values.sort_by(|a, b| b.total_cmp(a));
    let mut lengths: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..2.0)).collect();
    if let Some(t) = total {
        let s: f64 = lengths.iter().sum();
        lengths.iter_mut().for_each(|l| *l *= t / s);
    }
    let mut breaks = vec![0.0];
    for l in &lengths {
        breaks.push(breaks.last().unwrap() + l);
    }
    if let Some(t) = total {
        *breaks.last_mut().unwrap() = t;
    }
    RealFn::piecewise_constant(breaks, values).unwrap()
}

/// Step function with unordered values.
pub fn shuffled_steps(rng: &mut ChaCha8Rng, max_steps: usize) -> RealFn {
    let n = rng.gen_range(2..=max_steps);
    let values: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..5.0)).collect();
    let mut breaks = vec![0.0];
    for _ in 0..n {
        let l: f64 = rng.gen_range(0.05..2.0);
        breaks.push(breaks.last().unwrap() + l);
    }
    RealFn::piecewise_constant(breaks, values).unwrap()
}

/// 50 functions for Hardy-ratio maximization in `L_p`.
pub fn hardy_ratio_family(rng: &mut ChaCha8Rng, p: f64) -> Vec<RealFn> {
    let mut out = Vec::with_capacity(50);
    for _ in 0..20 {
        out.push(decreasing_steps(rng, 8, None));
    }
    for _ in 0..10 {
        out.push(shuffled_steps(rng, 8));
    }
    for _ in 0..10 {
        let rate = rng.gen_range(0.1..10.0);
        out.push(RealFn::exponential(1.0, rate, half()).unwrap());
    }
    for i in 0..10 {
        // t^{-a} on (0,1) with a up to just below 1/p
        let a = (0.05 + 0.09 * i as f64) / p;
        out.push(RealFn::power(1.0, -a, unit()).unwrap());
    }
    out
}
