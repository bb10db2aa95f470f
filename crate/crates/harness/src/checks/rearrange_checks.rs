//! Rearrangement checks: the Marcinkiewicz sandwich, `f** = H[f*]`, the
//! maximal-integral form of `f**` and equimeasurability.

use hardyspace::constants::gamma_w;
use hardyspace::funcspace::quad::QuadratureConfig;
use hardyspace::funcspace::log_space;
use hardyspace::hardy::hardy_at;
use hardyspace::norms::{lp_norm, marcinkiewicz_norm, tail_quasinorm};
use hardyspace::rearrange::{
    decreasing_rearrangement, double_star, max_integral_form as max_form, tail_function, MeasureSpec,
};
use hardyspace::{RealFn, WeightSpec};

use super::families::{decreasing_steps, identity_family, shuffled_steps};
use super::{rel_err, Ctx};
use crate::error::Result;
use crate::report::CheckReport;

fn rearranged(f: &RealFn, mu: &MeasureSpec, quad: &QuadratureConfig) -> Result<RealFn> {
    Ok(decreasing_rearrangement(&tail_function(f, mu, quad)?))
}

pub fn marcinkiewicz_sandwich(ctx: &Ctx) -> Result<CheckReport> {
    let exponent = ctx.params.f64_or("exponent", 0.5)?;
    let n = ctx.params.usize_or("samples", 100)?;
    let tol = ctx.tol(1e-6);
    let w = WeightSpec::power(1.0, exponent)?;
    let gamma = gamma_w(&w, &ctx.quad)?.value;
    let closed = 1.0 / (1.0 - exponent);
    let mut r = CheckReport::new("marcinkiewicz_sandwich");
    r.reference = gamma;
    r.tolerance = tol;
    r.measure("gamma", gamma);
    let ge = rel_err(gamma, closed);
    r.require(ge <= 1e-8, || format!("gamma = {gamma}, closed form {closed}"));

    let mu = MeasureSpec::Probability;
    let mut rng = ctx.rng("marcinkiewicz_sandwich");
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 0..n {
        let f = decreasing_steps(&mut rng, 8, Some(1.0));
        let big = marcinkiewicz_norm(&f, &w, &mu, &ctx.quad)?.value;
        let small = tail_quasinorm(&f, &w, &mu, &ctx.quad)?.value;
        let ratio = big / small;
        r.require(ratio >= 1.0 - 1e-9, || format!("sample {i}: ratio {ratio} below 1"));
        r.require(ratio <= gamma + tol, || format!("sample {i}: ratio {ratio} above gamma"));
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    r.measure("min ratio", lo);
    r.measure("max ratio", hi);
    r.value = hi;
    r.add_note(&ctx.prng_note("marcinkiewicz_sandwich"));
    Ok(r)
}

pub fn double_star_identity(ctx: &Ctx) -> Result<CheckReport> {
    let tol = ctx.tol(1e-8);
    let ts = log_space(1e-3, 1e2, ctx.params.usize_or("points", 50)?);
    let mu = MeasureSpec::HalfLine;
    let mut r = CheckReport::new("double_star_identity");
    r.reference = 0.0;
    r.tolerance = tol;
    let mut worst: f64 = 0.0;
    for (name, f) in identity_family() {
        let fstar = rearranged(&f, &mu, &ctx.quad)?;
        let mut err: f64 = 0.0;
        for &t in &ts {
            let a = double_star(&fstar, t, &ctx.quad)?;
            let b = hardy_at(&fstar, t, &ctx.quad)?;
            err = err.max(rel_err(a, b));
        }
        r.measure(format!("{name} max rel err"), err);
        worst = worst.max(err);
    }
    // closed forms: (1 - e^{-t})/t, min(1, 1/t), min(1, 3/(2t))
    let closed: [(&str, RealFn, fn(f64) -> f64); 3] = [
        ("exp", RealFn::exponential(1.0, 1.0, hardyspace::Interval::HALF_LINE)?, |t| -(-t).exp_m1() / t),
        ("1_(0,1)", RealFn::indicator(0.0, 1.0)?, |t| (1.0 / t).min(1.0)),
        ("1_(0.5,2)", RealFn::indicator(0.5, 2.0)?, |t| (1.5 / t).min(1.0)),
    ];
    for (name, f, g) in closed {
        let fstar = rearranged(&f, &mu, &ctx.quad)?;
        let mut err: f64 = 0.0;
        for &t in &ts {
            err = err.max(rel_err(double_star(&fstar, t, &ctx.quad)?, g(t)));
        }
        r.measure(format!("{name} closed form rel err"), err);
        worst = worst.max(err);
    }
    r.value = worst;
    r.require(worst <= tol, || format!("max rel err {worst}"));
    Ok(r)
}

pub fn max_integral_form(ctx: &Ctx) -> Result<CheckReport> {
    let tol = ctx.tol(1e-8);
    let mu = MeasureSpec::HalfLine;
    let mut r = CheckReport::new("max_integral_form");
    r.reference = 0.0;
    r.tolerance = tol;
    let mut worst: f64 = 0.0;
    for (name, f) in identity_family() {
        let fstar = rearranged(&f, &mu, &ctx.quad)?;
        let mut err: f64 = 0.0;
        for t in [0.1, 0.5, 1.0, 3.0] {
            let a = max_form(&f, &mu, t, &ctx.quad)?;
            let b = double_star(&fstar, t, &ctx.quad)?;
            err = err.max(rel_err(a, b));
        }
        r.measure(format!("{name} max rel err"), err);
        worst = worst.max(err);
    }
    r.value = worst;
    r.require(worst <= tol, || format!("max rel err {worst}"));
    Ok(r)
}

pub fn equimeasurability(ctx: &Ctx) -> Result<CheckReport> {
    let tol = ctx.tol(1e-8);
    let mu = MeasureSpec::HalfLine;
    let mut r = CheckReport::new("equimeasurability");
    r.reference = 0.0;
    r.tolerance = tol;
    let mut rng = ctx.rng("equimeasurability");
    let mut family: Vec<(String, RealFn)> =
        identity_family().into_iter().map(|(n, f)| (n.to_string(), f)).collect();
    for i in 0..20 {
        family.push((format!("shuffled {i}"), shuffled_steps(&mut rng, 8)));
    }
    let mut worst: f64 = 0.0;
    for (name, f) in &family {
        let fstar = rearranged(f, &mu, &ctx.quad)?;
        for p in [1.0, 2.0, 5.0] {
            let a = lp_norm(f, p, None, &ctx.quad)?.value;
            let b = lp_norm(&fstar, p, None, &ctx.quad)?.value;
            let e = rel_err(a, b);
            r.require(e <= tol, || format!("{name}, p = {p}: {a} vs {b}"));
            worst = worst.max(e);
        }
    }
    r.measure("functions", family.len() as f64);
    r.value = worst;
    r.add_note(&ctx.prng_note("equimeasurability"));
    Ok(r)
}
