//! Norm checks: mixed-norm factorization, dilation covariance, Grand Lebesgue
//! norms and the anisotropic Hardy inequality.

use hardyspace::constants::{build_nu_r, k0_form1, validate_exponents};
use hardyspace::funcspace::Monotone;
use hardyspace::hardy::hardy;
use hardyspace::norms::{
    grand_lebesgue_norm, lp_norm, mixed_norm, mixed_norm_iterated, natural_function as natural_psi, PGrid,
    PsiFunction,
};
use hardyspace::rearrange::MeasureSpec;
use hardyspace::{dilate, tensor_product, Interval, MultiFn, QuadratureConfig, RealFn, WeightSpec};

use super::{rel_err, Ctx};
use crate::error::Result;
use crate::report::CheckReport;

fn half() -> Interval {
    Interval::HALF_LINE
}

fn exp(rate: f64) -> Result<RealFn> {
    Ok(RealFn::exponential(1.0, rate, half())?)
}

// mpmath: |exp(-x - y - xy)|_(1,2) and |·|_(2,1)
const ORDER_12: f64 = 0.526_633_426_800_421;
const ORDER_21: f64 = 0.535_896_540_879_993;

pub fn factorization(ctx: &Ctx) -> Result<CheckReport> {
    let tol = ctx.tol(1e-6);
    let vectors: Vec<Vec<f64>> = if ctx.params.has("p") {
        vec![ctx.params.vec_or("p", &[])?]
    } else {
        vec![vec![1.0, 2.0], vec![2.0, 2.0], vec![3.0, 1.5]]
    };
    let unit = Interval { lo: 0.0, hi: 1.0 };
    let pairs = [
        (exp(1.0)?, RealFn::indicator(0.0, 1.0)?),
        (RealFn::exponential(3.0, 2.0, half())?, RealFn::power(1.0, -0.25, unit)?),
        (RealFn::piecewise_constant(vec![0.0, 0.5, 2.0], vec![3.0, 1.0])?, exp(1.0)?),
        (
            RealFn::custom(|x| (1.0 + x).powi(-2), half(), vec![], Monotone::NonIncreasing),
            RealFn::indicator(0.5, 2.0)?,
        ),
        (exp(3.0)?, RealFn::power(2.0, 1.0, unit)?),
    ];
    let mut r = CheckReport::new("factorization");
    r.reference = 0.0;
    r.tolerance = tol;
    let mut worst: f64 = 0.0;
    for ps in &vectors {
        for (i, (g1, g2)) in pairs.iter().enumerate() {
            let f = tensor_product(vec![g1.clone(), g2.clone()])?;
            let product = lp_norm(g1, ps[0], None, &ctx.quad)?.value * lp_norm(g2, ps[1], None, &ctx.quad)?.value;
            let fac = mixed_norm(&f, ps, None, &ctx.quad)?.value;
            let it = mixed_norm_iterated(&f, ps, None, &ctx.quad)?.value;
            let e = rel_err(fac, product).max(rel_err(it, product));
            r.require(e <= tol, || format!("pair {i}, p = {ps:?}: {fac} / {it} vs {product}"));
            worst = worst.max(e);
        }
    }
    r.measure("max factorization rel err", worst);

    // exp(-x² - y²) over the quadrant: |f|_(p,p)^p = π/(4p)
    let gauss = MultiFn::custom(|x| (-x[0] * x[0] - x[1] * x[1]).exp(), vec![half(); 2], vec![vec![], vec![]])?;
    let p = 2.0;
    let polar = rel_err(
        mixed_norm(&gauss, &[p, p], None, &ctx.quad)?.value,
        (std::f64::consts::PI / (4.0 * p)).powf(1.0 / p),
    );
    r.measure("polar oracle rel err", polar);
    r.require(polar <= tol, || format!("polar oracle off by {polar}"));

    // the order of integration matters once f does not factor
    let f = MultiFn::custom(|x| (-x[0] - x[1] - x[0] * x[1]).exp(), vec![half(); 2], vec![vec![], vec![]])?;
    let a = mixed_norm(&f, &[1.0, 2.0], None, &ctx.quad)?.value;
    let b = mixed_norm(&f, &[2.0, 1.0], None, &ctx.quad)?.value;
    r.measure("|f|_(1,2)", a);
    r.measure("|f|_(2,1)", b);
    let oe = rel_err(a, ORDER_12).max(rel_err(b, ORDER_21));
    r.require(oe <= tol, || format!("order oracle off by {oe}"));
    r.require((a - b).abs() >= 1e-3, || format!("order gap {} below 1e-3", (a - b).abs()));
    r.value = worst.max(polar).max(oe);
    Ok(r)
}

/// Least-squares slope of `ln y` against `ln x`.
fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

pub fn scaling(ctx: &Ctx) -> Result<CheckReport> {
    let tol = ctx.tol(1e-6);
    let slope_tol = 1e-3;
    let lambdas = ctx.params.vec_or("lambda", &[0.1, 1.0, 10.0])?;
    let p = ctx.params.f64_or("p", 2.0)?;
    let mut r = CheckReport::new("scaling");
    r.reference = 0.0;
    r.tolerance = tol;
    let mut worst: f64 = 0.0;
    let f = exp(1.0)?;

    for beta in [0.0, 0.3] {
        let w = WeightSpec::power(1.0, beta * p)?;
        let base = lp_norm(&f, p, Some(&w), &ctx.quad)?.value;
        let mut norms = Vec::new();
        for &l in &lambdas {
            let n = lp_norm(&dilate(&f, l)?, p, Some(&w), &ctx.quad)?.value;
            let e = rel_err(n, l.powf(-beta - 1.0 / p) * base);
            r.require(e <= tol, || format!("d = 1, beta = {beta}, lambda = {l}: rel err {e}"));
            worst = worst.max(e);
            norms.push(n);
        }
        let slope = log_slope(&lambdas, &norms);
        r.measure(format!("d=1 beta={beta} slope"), slope);
        let want = -beta - 1.0 / p;
        r.require((slope - want).abs() <= slope_tol, || format!("d = 1 slope {slope}, expected {want}"));
    }

    // d = 2 with the radial weight |x|^β on exp(-x-y)
    let e2 = tensor_product(vec![exp(1.0)?, exp(1.0)?])?;
    for beta in [0.0, 0.3] {
        let weighted = |g: MultiFn| {
            MultiFn::custom(
                move |x| x[0].hypot(x[1]).powf(beta) * g.eval(x),
                vec![half(); 2],
                vec![vec![], vec![]],
            )
        };
        let base = mixed_norm(&weighted(e2.clone())?, &[p, p], None, &ctx.quad)?.value;
        let mut norms = Vec::new();
        for &l in &lambdas {
            let n = mixed_norm(&weighted(e2.dilate(l)?)?, &[p, p], None, &ctx.quad)?.value;
            let e = rel_err(n, l.powf(-beta - 2.0 / p) * base);
            r.require(e <= tol, || format!("d = 2, beta = {beta}, lambda = {l}: rel err {e}"));
            worst = worst.max(e);
            norms.push(n);
        }
        let slope = log_slope(&lambdas, &norms);
        r.measure(format!("d=2 beta={beta} slope"), slope);
        let want = -beta - 2.0 / p;
        r.require((slope - want).abs() <= slope_tol, || format!("d = 2 slope {slope}, expected {want}"));
    }

    // both sides of the weighted Hardy inequality scale alike iff α + 1/q = β + 1/p
    let (alpha, beta, p_h) = (0.5, 0.0, 4.0 / 3.0);
    for q in [3.0, 4.0] {
        let wq = WeightSpec::power(1.0, alpha * q)?;
        let wp = WeightSpec::power(1.0, beta * p_h)?;
        let mut lhs = Vec::new();
        let mut rhs = Vec::new();
        for &l in &lambdas {
            let g = dilate(&f, l)?;
            lhs.push(lp_norm(&hardy(&g, &ctx.quad)?.func, q, Some(&wq), &ctx.quad)?.value);
            rhs.push(lp_norm(&g, p_h, Some(&wp), &ctx.quad)?.value);
        }
        let gap = log_slope(&lambdas, &rhs) - log_slope(&lambdas, &lhs);
        let predicted = (alpha + 1.0 / q) - (beta + 1.0 / p_h);
        r.measure(format!("q={q} fitted gap"), gap);
        r.measure(format!("q={q} predicted gap"), predicted);
        r.require((gap - predicted).abs() <= slope_tol, || {
            format!("q = {q}: fitted gap {gap}, predicted {predicted}")
        });
    }
    r.value = worst;
    Ok(r)
}

pub fn grand_lebesgue_dirac(ctx: &Ctx) -> Result<CheckReport> {
    let tol = ctx.tol(1e-10);
    let mu = MeasureSpec::HalfLine;
    let grid = PGrid::default();
    let mut r = CheckReport::new("grand_lebesgue_dirac");
    r.reference = 0.0;
    r.tolerance = tol;
    let family = [exp(1.0)?, RealFn::indicator(0.0, 2.0)?, RealFn::power(1.0, -0.2, Interval { lo: 0.0, hi: 1.0 })?];
    let mut worst: f64 = 0.0;
    for (i, f) in family.iter().enumerate() {
        for rr in [1.5, 2.0, 3.0] {
            let psi = PsiFunction::dirac(vec![rr], 1.0)?;
            let g = grand_lebesgue_norm(f, &psi, &mu, &ctx.quad, &grid)?.value;
            let l = lp_norm(f, rr, None, &ctx.quad)?.value;
            let e = rel_err(g, l);
            r.require(e <= tol, || format!("function {i}, r = {rr}: {g} vs {l}"));
            worst = worst.max(e);
        }
    }
    // a constant ψ on (1, 4): sup_p ‖1_(0,1)‖_p / 2 = 1/2
    let psi = PsiFunction::constant(2.0, 1.0, 4.0)?;
    let g = grand_lebesgue_norm(&RealFn::indicator(0.0, 1.0)?, &psi, &mu, &ctx.quad, &grid)?.value;
    let e = rel_err(g, 0.5);
    r.measure("constant psi rel err", e);
    r.require(e <= 1e-8, || format!("constant psi gives {g}"));
    r.value = worst;
    Ok(r)
}

pub fn natural_function(ctx: &Ctx) -> Result<CheckReport> {
    let tol = ctx.tol(1e-10);
    let mu = MeasureSpec::Probability;
    let family = vec![
        RealFn::indicator(0.0, 1.0)?,
        RealFn::piecewise_constant(vec![0.0, 0.25], vec![2.0])?,
        exp(1.0)?,
        RealFn::power(1.0, -0.1, Interval { lo: 0.0, hi: 1.0 })?,
    ];
    let grid: Vec<f64> = (0..15).map(|i| 1.0 + 0.5 * i as f64).collect();
    let psi = natural_psi(&family, &grid, &mu, &ctx.quad)?;
    let mut r = CheckReport::new("natural_function");
    r.reference = 1.0;
    r.tolerance = tol;
    let mut best: f64 = 0.0;
    for (i, f) in family.iter().enumerate() {
        let n = grand_lebesgue_norm(f, &psi, &mu, &ctx.quad, &PGrid::default())?.value;
        r.measure(format!("member {i} norm"), n);
        r.require(n <= 1.0 + tol, || format!("member {i} has norm {n}"));
        best = best.max(n);
    }
    r.value = best;
    r.require((best - 1.0).abs() <= tol, || format!("largest member norm {best}, expected 1"));
    Ok(r)
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// `‖x^α H f‖_q`.
fn weighted_average_norm(f: &RealFn, alpha: f64, q: f64, quad: &QuadratureConfig) -> Result<f64> {
    let h = hardy(f, quad)?;
    Ok(lp_norm(&h.func, q, Some(&WeightSpec::power(1.0, alpha * q)?), quad)?.value)
}

pub fn agls_hardy(ctx: &Ctx) -> Result<CheckReport> {
    let alpha = ctx.params.f64_or("alpha", 0.5)?;
    let beta = ctx.params.f64_or("beta", 0.0)?;
    let n = ctx.params.usize_or("points", 20)?.max(2);
    let tol = ctx.tol(1e-6);
    let p0 = 1.0 / (1.0 - beta);
    let p_plus = 1.0 / (alpha - beta);
    let (a, b) = (p0 + 0.1, p_plus);
    let psi = PsiFunction::constant(1.0, a, b)?;
    let nu = build_nu_r(&psi, &[alpha], &[beta])?;
    let ps = linspace(a + 0.05, b - 0.05, n);
    let mut r = CheckReport::new("agls_hardy");
    r.reference = 1.0;
    r.tolerance = tol;
    let mut worst: f64 = 0.0;
    for (name, f) in [("exp", exp(1.0)?), ("1_(0,1)", RealFn::indicator(0.0, 1.0)?)] {
        // ‖x^β f‖ in G(ψ), normalized to one
        let wb = |p: f64| WeightSpec::power(1.0, beta * p);
        let mut norm: f64 = 0.0;
        for &p in &linspace(a + 1e-4, b - 1e-4, 200) {
            norm = norm.max(lp_norm(&f, p, Some(&wb(p)?), &ctx.quad)?.value);
        }
        let g = RealFn::sum(vec![(1.0 / norm, f)])?;
        let mut top: f64 = 0.0;
        for &p in &ps {
            let q = validate_exponents(alpha, beta, p)?.q;
            let v = weighted_average_norm(&g, alpha, q, &ctx.quad)? / nu.eval(&[q]);
            top = top.max(v);
        }
        r.measure(format!("{name} max ratio"), top);
        r.require(top <= 1.0 + tol, || format!("{name}: ratio {top} above 1"));
        worst = worst.max(top);
    }

    // ψ concentrated at one exponent reduces to the single weighted inequality
    let pd = ctx.params.f64_or("dirac_p", 4.0 / 3.0)?;
    let eq = validate_exponents(alpha, beta, pd)?;
    let k_plus = 2.0 * k0_form1(&eq);
    let nu_d = build_nu_r(&PsiFunction::dirac(vec![pd], 1.0)?, &[alpha], &[beta])?;
    let (at, value) = nu_d.dirac_point().map(|(a, v)| (a[0], v)).unwrap_or((f64::NAN, f64::NAN));
    r.measure("dirac q", at);
    r.measure("dirac K+", value);
    r.require(rel_err(at, eq.q) <= 1e-12 && rel_err(value, k_plus) <= 1e-12, || {
        format!("dirac reduction gives ({at}, {value}), expected ({}, {k_plus})", eq.q)
    });
    for f in [exp(1.0)?, RealFn::indicator(0.0, 1.0)?] {
        let lhs = weighted_average_norm(&f, alpha, eq.q, &ctx.quad)?;
        let rhs = lp_norm(&f, pd, Some(&WeightSpec::power(1.0, beta * pd)?), &ctx.quad)?.value;
        r.require(lhs <= k_plus * rhs * (1.0 + tol), || format!("dirac case: {lhs} > {k_plus} · {rhs}"));
    }

    // f ≡ 0
    let zero = RealFn::constant(0.0, half())?;
    let z = weighted_average_norm(&zero, alpha, 4.0, &ctx.quad)?;
    r.require(z == 0.0, || format!("zero function gives {z}"));
    r.value = worst;
    Ok(r)
}
