//! Equivalence and boundedness constants: `γ(w)`, the Bradley, Maz'ja,
//! Stepanov and Muckenhoupt functionals, the power-weight family `K⁰`, `K⁺`
//! with its printed lower bound, products over axes, empirical estimates of
//! `K(V, H)` and the exponent map producing `ν_R`.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::funcspace::{
    integrate_fn, sup_log_grid, QuadratureConfig, RealFn, SlowPart, SupConfig, WeightSpec,
};
use crate::hardy::hardy;
use crate::norms::{PsiFunction, Space};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantReport {
    pub value: f64,
    /// `false` exactly when `value` is `+∞`.
    pub finite: bool,
    pub formula_id: String,
    pub sup_achieved_at: Option<f64>,
    pub error_estimate: f64,
    /// Two-sided bracket implied for the associated operator constant.
    pub bracket: Option<(f64, f64)>,
    pub note: Option<String>,
}

impl ConstantReport {
    pub fn new(value: f64, formula_id: &str) -> Self {
        ConstantReport {
            value,
            finite: value.is_finite(),
            formula_id: formula_id.to_string(),
            sup_achieved_at: None,
            error_estimate: 0.0,
            bracket: None,
            note: None,
        }
    }

    fn with_sup(mut self, at: f64, rel_tol: f64) -> Self {
        self.sup_achieved_at = Some(at).filter(|x| x.is_finite());
        self.error_estimate = if self.finite { self.value * rel_tol } else { 0.0 };
        self
    }

    fn with_bracket(mut self, lo_factor: f64, hi_factor: f64) -> Self {
        self.bracket = Some((lo_factor * self.value, hi_factor * self.value));
        self
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Product that treats `0 · ∞` as `0`.
fn mul0(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

/// `x^e` with `0^0 = 1` and `∞^0 = 1`.
fn pow0(x: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else {
        x.powf(e)
    }
}

fn conjugate(p: f64) -> f64 {
    p / (p - 1.0)
}

fn check_p(p: f64) -> Result<()> {
    if p > 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("exponent must satisfy 1 < p < ∞, got {p}")))
    }
}

fn head_integral<G: Fn(f64) -> f64>(g: G, t: f64, breaks: &[f64], quad: &QuadratureConfig) -> Result<f64> {
    integrate_fn(g, 0.0, t, breaks, quad)
}

fn tail_integral<G: Fn(f64) -> f64>(g: G, t: f64, breaks: &[f64], quad: &QuadratureConfig) -> Result<f64> {
    integrate_fn(g, t, f64::INFINITY, breaks, quad)
}

/// Supremum of a fallible function of `r` over the quadrature window.
fn sup_over_r<G: Fn(f64) -> Result<f64>>(
    g: G,
    breaks: &[f64],
    quad: &QuadratureConfig,
) -> Result<(f64, f64)> {
    let failure = std::cell::RefCell::new(None);
    let r = sup_log_grid(
        |r| match g(r) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        quad.lower_cut,
        quad.upper_cut,
        breaks,
        &SupConfig::default(),
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok((r.value.max(0.0), r.argmax))
}

fn inv_weight(w: &WeightSpec) -> impl Fn(f64) -> f64 + '_ {
    move |x| 1.0 / w.eval(x)
}

/// `γ(w) = sup_t w(t)/t · ∫_0^t du/w(u)`.
pub fn gamma_w(w: &WeightSpec, quad: &QuadratureConfig) -> Result<ConstantReport> {
    w.validate_class_w()?;
    quad.validate()?;
    let breaks = w.breakpoints();
    if head_integral(inv_weight(w), 1.0, &breaks, quad)?.is_infinite() {
        return Ok(ConstantReport::new(f64::INFINITY, "gamma-w")
            .with_note("∫_0^t du/w(u) diverges at 0"));
    }
    let (value, at) = sup_over_r(
        |t| Ok(w.eval(t) / t * head_integral(inv_weight(w), t, &breaks, quad)?),
        &breaks,
        quad,
    )?;
    Ok(ConstantReport::new(value, "gamma-w").with_sup(at, quad.rel_tol))
}

/// `B_{p≤q}(u, v) = sup_r (∫_r^∞ u^q)^{1/q} (∫_0^r v^{-p'})^{1/p'}` with the
/// bracket `[B, p^{1/q} (p')^{1/p'} B]`.
pub fn bradley_bpq(
    u: &WeightSpec,
    v: &WeightSpec,
    p: f64,
    q: f64,
    quad: &QuadratureConfig,
) -> Result<ConstantReport> {
    check_p(p)?;
    if !(q >= p) {
        return Err(Error::ExponentOrder(format!(
            "Bradley functional needs p <= q, got p = {p}, q = {q}; use the Maz'ja functional"
        )));
    }
    quad.validate()?;
    let pc = conjugate(p);
    let id = if q == p { "bradley-p" } else { "bradley-pq" };
    let factor = p.powf(1.0 / q) * pc.powf(1.0 / pc);
    if u.scale == 0.0 {
        return Ok(ConstantReport::new(0.0, id).with_bracket(1.0, factor));
    }
    let mut breaks = u.breakpoints();
    breaks.extend(v.breakpoints());
    let ratio = |r: f64| -> Result<f64> {
        let tail = tail_integral(|x| pow0(u.eval(x), q), r, &breaks, quad)?;
        let head = head_integral(|x| v.eval(x).powf(-pc), r, &breaks, quad)?;
        Ok(mul0(tail.powf(1.0 / q), head.powf(1.0 / pc)))
    };
    let (value, at) = sup_over_r(ratio, &breaks, quad)?;
    Ok(ConstantReport::new(value, id)
        .with_sup(at, quad.rel_tol)
        .with_bracket(1.0, factor))
}

/// `B_p(u, v)`, the `q = p` case of [`bradley_bpq`].
pub fn bradley_b(u: &WeightSpec, v: &WeightSpec, p: f64, quad: &QuadratureConfig) -> Result<ConstantReport> {
    bradley_bpq(u, v, p, p, quad)
}

/// Maz'ja functional for `1 <= q < p`:
/// `{∫_0^∞ [(∫_0^x v^{-p'})^{q-1} ∫_x^∞ u^q]^{p/(p-q)} v^{-p'}(x) dx}^{(p-q)/(pq)}`.
pub fn mazja_b(
    u: &WeightSpec,
    v: &WeightSpec,
    p: f64,
    q: f64,
    quad: &QuadratureConfig,
) -> Result<ConstantReport> {
    check_p(p)?;
    if !(q >= 1.0 && q < p) {
        return Err(Error::ExponentOrder(format!(
            "Maz'ja functional needs 1 <= q < p, got p = {p}, q = {q}"
        )));
    }
    quad.validate()?;
    let pc = conjugate(p);
    let lower = ((p - q) / (p - 1.0)).powf((q - 1.0) / q) * q.powf(1.0 / q);
    let upper = (p / (p - 1.0)).powf((q - 1.0) / q) * q.powf(1.0 / q);
    if u.scale == 0.0 {
        return Ok(ConstantReport::new(0.0, "mazja").with_bracket(lower, upper));
    }
    let mut breaks = u.breakpoints();
    breaks.extend(v.breakpoints());
    let failure = std::cell::RefCell::new(None);
    let integrand = |x: f64| {
        let vx = v.eval(x).powf(-pc);
        let inner = (|| -> Result<f64> {
            let head = head_integral(|y| v.eval(y).powf(-pc), x, &breaks, quad)?;
            let tail = tail_integral(|y| pow0(u.eval(y), q), x, &breaks, quad)?;
            Ok(mul0(pow0(head, q - 1.0), tail))
        })();
        match inner {
            Ok(b) => mul0(b.powf(p / (p - q)), vx),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let total = integrate_fn(integrand, 0.0, f64::INFINITY, &breaks, quad);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let value = total?.powf((p - q) / (p * q));
    let mut r = ConstantReport::new(value, "mazja").with_bracket(lower, upper);
    r.error_estimate = if r.finite { value * quad.rel_tol } else { 0.0 };
    Ok(r)
}

/// The four Stepanov functionals for the Hardy inequality on nonincreasing
/// functions from `L_p(v)` to `L_q(w)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepanovReport {
    pub a0: ConstantReport,
    pub a1: ConstantReport,
    /// Only defined for `q < p`.
    pub b0: Option<ConstantReport>,
    pub b1: Option<ConstantReport>,
    /// `A0 + A1` when `p <= q`, `B0 + B1` when `q < p`. The comparison constants
    /// relating this sum to the operator norm are unspecified, so this is
    /// advisory.
    pub regime_sum: f64,
    pub regime: String,
}

/// `V(x) = ∫_0^x v`, closed form for pure powers.
fn cumulative(v: &WeightSpec, x: f64, quad: &QuadratureConfig) -> Result<f64> {
    match v.cumulative_closed_form(x) {
        Some(c) => Ok(c),
        None => head_integral(|s| v.eval(s), x, &v.breakpoints(), quad),
    }
}

pub fn stepanov_bounds(
    w: &WeightSpec,
    v: &WeightSpec,
    p: f64,
    q: f64,
    quad: &QuadratureConfig,
) -> Result<StepanovReport> {
    check_p(p)?;
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::InvalidParameter(format!("q must be positive and finite, got {q}")));
    }
    quad.validate()?;
    let pc = conjugate(p);
    let mut breaks = w.breakpoints();
    breaks.extend(v.breakpoints());
    let g_integrand = |x: f64| -> f64 {
        let vx = v.eval(x);
        if vx == 0.0 {
            return 0.0;
        }
        match cumulative(v, x, quad) {
            Ok(cv) => x.powf(pc) * cv.powf(-pc) * vx,
            Err(_) => f64::NAN,
        }
    };
    let big_w = |t: f64| head_integral(|x| w.eval(x), t, &breaks, quad);
    let w_tail = |t: f64| tail_integral(|x| x.powf(-q) * w.eval(x), t, &breaks, quad);
    let g = |t: f64| head_integral(g_integrand, t, &breaks, quad);

    let (a0, at0) = sup_over_r(
        |t| Ok(mul0(big_w(t)?.powf(1.0 / q), cumulative(v, t, quad)?.powf(-1.0 / p))),
        &breaks,
        quad,
    )?;
    let (a1, at1) = sup_over_r(
        |t| Ok(mul0(w_tail(t)?.powf(1.0 / q), g(t)?.powf(1.0 / pc))),
        &breaks,
        quad,
    )?;
    let a0 = ConstantReport::new(a0, "stepanov-a0").with_sup(at0, quad.rel_tol);
    let a1 = ConstantReport::new(a1, "stepanov-a1").with_sup(at1, quad.rel_tol);

    if q >= p {
        let sum = a0.value + a1.value;
        return Ok(StepanovReport {
            a0,
            a1,
            b0: None,
            b1: None,
            regime_sum: sum,
            regime: "p <= q: A0 + A1".into(),
        });
    }
    let r = 1.0 / (1.0 / q - 1.0 / p);
    let qc_inv = if q == 1.0 { 0.0 } else { 1.0 - 1.0 / q };
    let failure = std::cell::RefCell::new(None);
    let capture = |res: Result<f64>| match res {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    // integrands are taken exactly as printed, including the 1/p exponent on
    // the first factor of B0 and the outer 1/p of B1
    let b0_int = |t: f64| {
        let wt = w.eval(t);
        if wt == 0.0 {
            return 0.0;
        }
        let inner = capture((|| Ok(mul0(big_w(t)?.powf(1.0 / p), cumulative(v, t, quad)?.powf(-1.0 / p))))());
        mul0(inner.powf(r), wt)
    };
    let b1_int = |t: f64| {
        let weight = g_integrand(t);
        if weight == 0.0 {
            return 0.0;
        }
        let inner = capture((|| Ok(mul0(w_tail(t)?.powf(1.0 / q), pow0(g(t)?, qc_inv))))());
        mul0(inner.powf(r), weight)
    };
    let b0v = integrate_fn(b0_int, 0.0, f64::INFINITY, &breaks, quad);
    let b1v = integrate_fn(b1_int, 0.0, f64::INFINITY, &breaks, quad);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let b0 = ConstantReport::new(b0v?.powf(1.0 / r), "stepanov-b0");
    let b1 = ConstantReport::new(b1v?.powf(1.0 / p), "stepanov-b1");
    let sum = b0.value + b1.value;
    Ok(StepanovReport {
        a0,
        a1,
        b0: Some(b0),
        b1: Some(b1),
        regime_sum: sum,
        regime: "q < p: B0 + B1".into(),
    })
}

/// Smallest `D` with `∫_t^∞ s^{-p} w(s) ds <= D t^{-p} ∫_0^t w`, i.e.
/// `sup_t t^p / ∫_0^t w · ∫_t^∞ s^{-p} w`.
pub fn muckenhoupt_d(w: &WeightSpec, p: f64, quad: &QuadratureConfig) -> Result<ConstantReport> {
    check_p(p)?;
    quad.validate()?;
    let breaks = w.breakpoints();
    let ratio = |t: f64| -> Result<f64> {
        let head = head_integral(|x| w.eval(x), t, &breaks, quad)?;
        if head == 0.0 {
            return Ok(0.0);
        }
        let tail = tail_integral(|s| s.powf(-p) * w.eval(s), t, &breaks, quad)?;
        Ok(mul0(t.powf(p) / head, tail))
    };
    let (value, at) = sup_over_r(ratio, &breaks, quad)?;
    Ok(ConstantReport::new(value, "muckenhoupt-d")
        .with_sup(at, quad.rel_tol)
        .with_note("tail integral taken over (t, ∞); over (0, ∞) it diverges for constant weights"))
}

/// Admissible exponent quadruple for power weights `x^α`, `x^β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentQuad {
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
    /// `+∞` at `p = p₊`.
    pub q: f64,
    pub delta: f64,
    pub p0: f64,
    pub p_plus: f64,
    pub q0: f64,
    pub dim: usize,
}

fn domain_error(axis: Option<usize>, clause: &'static str, detail: String) -> Error {
    Error::ExponentDomain {
        axis,
        clause,
        detail,
    }
}

/// Solve `1/q = 1/p - (α - β)` and check admissibility.
pub fn validate_exponents(alpha: f64, beta: f64, p: f64) -> Result<ExponentQuad> {
    validate_exponents_d(alpha, beta, p, 1)
}

/// `d`-dimensional variant with `1/q = 1/p - (α - β)/d` and `p₊ = d/(α - β)`.
pub fn validate_exponents_d(alpha: f64, beta: f64, p: f64, d: usize) -> Result<ExponentQuad> {
    let finite = alpha.is_finite() && beta.is_finite() && p.is_finite();
    if !finite || d == 0 {
        return Err(domain_error(None, "finite parameters", format!("α = {alpha}, β = {beta}, p = {p}, d = {d}")));
    }
    if !(0.0..1.0).contains(&alpha) || !(0.0..1.0).contains(&beta) {
        return Err(domain_error(None, "0 <= alpha, beta < 1", format!("α = {alpha}, β = {beta}")));
    }
    if !(alpha > beta) {
        return Err(domain_error(None, "alpha > beta", format!("α = {alpha}, β = {beta}")));
    }
    let delta = alpha - beta;
    let p0 = 1.0 / (1.0 - beta);
    let p_plus = d as f64 / delta;
    let q0 = 1.0 / (1.0 - alpha);
    if !(p > p0) {
        return Err(domain_error(None, "p > p0", format!("p = {p}, p0 = {p0}")));
    }
    if !(p <= p_plus * (1.0 + 1e-12)) {
        return Err(domain_error(None, "p <= p_plus", format!("p = {p}, p_plus = {p_plus}")));
    }
    let inv_q = 1.0 / p - delta / d as f64;
    let q = if inv_q <= 1e-15 { f64::INFINITY } else { 1.0 / inv_q };
    if !(q > q0) {
        return Err(domain_error(None, "q > q0", format!("q = {q}, q0 = {q0}")));
    }
    Ok(ExponentQuad {
        alpha,
        beta,
        p,
        q,
        delta,
        p0,
        p_plus,
        q0,
        dim: d,
    })
}

/// The two printed `K⁰` expressions, `K⁺ = 2·(first form)` and the printed
/// lower bound for the power-weight Hardy constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct K0Report {
    pub form1: f64,
    pub form2: f64,
    pub k_plus: f64,
    pub lower_bound: f64,
    pub form2_over_form1: f64,
    pub lower_over_k_plus: f64,
    /// `p` sits at `p₊` or `α - β` is numerically zero.
    pub boundary: bool,
}

pub fn k0_form1(eq: &ExponentQuad) -> f64 {
    let (b, p, d) = (eq.beta, eq.p, eq.delta);
    (1.0 - b).powf(d - 1.0)
        * (p - 1.0).powf(1.0 - 1.0 / p)
        * d.powf(1.0 / p - d)
        * pow0(eq.p_plus - p, 1.0 / p - d)
        / (p - eq.p0).powf(1.0 - d)
}

pub fn k0_form2(eq: &ExponentQuad) -> f64 {
    let (a, b, p, d) = (eq.alpha, eq.beta, eq.p, eq.delta);
    (1.0 - b).powf(d - 1.0)
        * (p - 1.0).powf(1.0 - 1.0 / p)
        * (p - 1.0 / (1.0 - b)).powf(d - 1.0)
        * pow0(1.0 + p * (b - a), d - 1.0 / p)
}

/// `[1/(p - p0)]^{1-δ} (1-β)^{δ-1} p / [1 - pδ]^{δ - 1/p}`.
pub fn k0_lower_bound(eq: &ExponentQuad) -> f64 {
    let (b, p, d) = (eq.beta, eq.p, eq.delta);
    (1.0 / (p - eq.p0)).powf(1.0 - d) * (1.0 - b).powf(d - 1.0) * p / pow0(1.0 - p * d, d - 1.0 / p)
}

pub fn k0_family(eq: &ExponentQuad) -> Result<K0Report> {
    let eq = validate_exponents(eq.alpha, eq.beta, eq.p)?;
    let form1 = k0_form1(&eq);
    let form2 = k0_form2(&eq);
    let k_plus = 2.0 * form1;
    let lower_bound = k0_lower_bound(&eq);
    Ok(K0Report {
        form1,
        form2,
        k_plus,
        lower_bound,
        form2_over_form1: form2 / form1,
        lower_over_k_plus: lower_bound / k_plus,
        boundary: eq.q.is_infinite() || eq.delta < 1e-9,
    })
}

/// Per-axis product of `K⁺` (upper) and of the printed lower bounds (lower).
pub fn k_multi(alphas: &[f64], betas: &[f64], ps: &[f64]) -> Result<ConstantReport> {
    let d = alphas.len();
    if betas.len() != d || ps.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: betas.len().min(ps.len()),
        });
    }
    if d == 0 {
        return Err(Error::EmptyComponentList);
    }
    let mut upper = 1.0;
    let mut lower = 1.0;
    for j in 0..d {
        let eq = validate_exponents(alphas[j], betas[j], ps[j]).map_err(|e| match e {
            Error::ExponentDomain { clause, detail, .. } => Error::ExponentDomain {
                axis: Some(j),
                clause,
                detail,
            },
            other => other,
        })?;
        let k = k0_family(&eq)?;
        upper *= k.k_plus;
        lower *= k.lower_bound;
    }
    let mut r = ConstantReport::new(upper, "k-multi-upper");
    r.bracket = Some((lower, upper));
    Ok(r.with_note("upper: product of K⁺ = 2·K⁰; lower: product of the printed lower bounds"))
}

/// Member of a parametric family used for ratio maximization.
#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub params: Vec<f64>,
    pub g: RealFn,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KvhEstimate {
    pub report: ConstantReport,
    pub best_params: Vec<f64>,
    pub ratios: Vec<f64>,
}

/// Empirical lower bound `max_g ‖H[g]‖_V / ‖g‖_V` for `K(V, H)`.
pub fn estimate_kvh(
    space: &Space,
    family: &[FamilyMember],
    total_mass: f64,
    quad: &QuadratureConfig,
) -> Result<KvhEstimate> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mut ratios = Vec::with_capacity(family.len());
    let mut best = (f64::NEG_INFINITY, 0usize);
    for (i, m) in family.iter().enumerate() {
        let base = space.norm(&m.g, total_mass, quad)?.value;
        if !(base > 0.0 && base.is_finite()) {
            return Err(Error::ZeroNorm);
        }
        let h = hardy(&m.g, quad)?;
        let top = space.norm(&h.func, total_mass, quad)?.value;
        let r = top / base;
        if r.is_nan() {
            return Err(Error::NonConvergentQuadrature {
                estimate: top,
                error: f64::NAN,
            });
        }
        if r > best.0 {
            best = (r, i);
        }
        ratios.push(r);
    }
    let mut report = ConstantReport::new(best.0, "kvh-empirical");
    report.error_estimate = best.0 * quad.rel_tol;
    Ok(KvhEstimate {
        report: report.with_note("lower bound on K(V, H) from the supplied family"),
        best_params: family[best.1].params.clone(),
        ratios,
    })
}

/// `q(p) = 1/(1/p - δ)`, `+∞` past `p₊`.
fn q_of_p(p: f64, delta: f64) -> f64 {
    let inv = 1.0 / p - delta;
    if inv <= 1e-15 {
        f64::INFINITY
    } else {
        1.0 / inv
    }
}

fn p_of_q(q: f64, delta: f64) -> f64 {
    1.0 / (1.0 / q + delta)
}

/// `ν_R(q⃗) = ψ(p⃗(q⃗)) ∏ K⁺_{α_j,β_j}(p_j(q_j))` with `1/p_j = 1/q_j + α_j - β_j`.
pub fn build_nu_r(psi: &PsiFunction, alphas: &[f64], betas: &[f64]) -> Result<PsiFunction> {
    let d = psi.dim();
    if alphas.len() != d || betas.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: alphas.len().min(betas.len()),
        });
    }
    let axis_err = |j: usize, e: Error| match e {
        Error::ExponentDomain { clause, detail, .. } => Error::ExponentDomain {
            axis: Some(j),
            clause,
            detail,
        },
        other => other,
    };
    let deltas: Vec<f64> = alphas.iter().zip(betas).map(|(a, b)| a - b).collect();
    let k_plus_at = |ps: &[f64]| -> Result<f64> {
        let mut k = 1.0;
        for j in 0..d {
            let eq = validate_exponents(alphas[j], betas[j], ps[j]).map_err(|e| axis_err(j, e))?;
            k *= 2.0 * k0_form1(&eq);
        }
        Ok(k)
    };
    if let Some((at, value)) = psi.dirac_point() {
        let k = k_plus_at(at)?;
        let qs: Vec<f64> = at.iter().zip(&deltas).map(|(&p, &dl)| q_of_p(p, dl)).collect();
        return PsiFunction::dirac(qs, value * k);
    }
    // support must map into the admissible exponent range
    for j in 0..d {
        let (a, b) = psi.support()[j];
        let probe = if b.is_finite() { 0.5 * (a + b) } else { a + 1.0 };
        validate_exponents(alphas[j], betas[j], probe).map_err(|e| axis_err(j, e))?;
        let p0 = 1.0 / (1.0 - betas[j]);
        if a < p0 * (1.0 - 1e-12) {
            return Err(Error::ExponentDomain {
                axis: Some(j),
                clause: "p > p0",
                detail: format!("support starts at {a} below p0 = {p0}"),
            });
        }
        let p_plus = 1.0 / deltas[j];
        if b > p_plus * (1.0 + 1e-12) {
            return Err(Error::ExponentDomain {
                axis: Some(j),
                clause: "p <= p_plus",
                detail: format!("support ends at {b} beyond p_plus = {p_plus}"),
            });
        }
    }
    if let Some(nodes) = psi.nodes() {
        let mut qs = Vec::with_capacity(nodes.len());
        let mut vals = Vec::with_capacity(nodes.len());
        for &p in nodes {
            let q = q_of_p(p, deltas[0]);
            if q.is_finite() {
                qs.push(q);
                vals.push(psi.eval(&[p]) * k_plus_at(&[p])?);
            }
        }
        return PsiFunction::tabulated(qs, vals);
    }
    let support: Vec<(f64, f64)> = psi
        .support()
        .iter()
        .zip(&deltas)
        .map(|(&(a, b), &dl)| (q_of_p(a, dl), q_of_p(b, dl)))
        .collect();
    let (psi, alphas, betas) = (psi.clone(), alphas.to_vec(), betas.to_vec());
    PsiFunction::parametric(
        move |qs: &[f64]| {
            let ps: Vec<f64> = qs
                .iter()
                .zip(alphas.iter().zip(&betas))
                .map(|(&q, (a, b))| p_of_q(q, a - b))
                .collect();
            let mut k = 1.0;
            for j in 0..ps.len() {
                match validate_exponents(alphas[j], betas[j], ps[j]) {
                    Ok(eq) => k *= 2.0 * k0_form1(&eq),
                    Err(_) => return f64::INFINITY,
                }
            }
            psi.eval(&ps) * k
        },
        support,
    )
}

/// Bounds of `L/M` on a log grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioBounds {
    pub inf: f64,
    pub sup: f64,
    /// Both bounds finite, positive and stable when the grid range is doubled
    /// on the log axis.
    pub bounded: bool,
}

/// Numerical check of `0 < inf L/M <= sup L/M < ∞` over the quadrature window.
///
/// Growth is detected by repeating the scan on the window squared
/// (`[ε², T²]`); a change of more than one percent in either bound marks the
/// ratio as unbounded.
pub fn ratio_bounded(l: &SlowPart, m: &SlowPart, quad: &QuadratureConfig, grid_points: usize) -> RatioBounds {
    let scan = |lo: f64, hi: f64| {
        let n = grid_points.max(2);
        let (a, b) = (lo.ln(), hi.ln());
        let mut inf = f64::INFINITY;
        let mut sup: f64 = 0.0;
        for i in 0..n {
            let x = (a + (b - a) * i as f64 / (n - 1) as f64).exp();
            let r = l.eval(x) / m.eval(x);
            inf = inf.min(r);
            sup = sup.max(r);
        }
        (inf, sup)
    };
    let (inf, sup) = scan(quad.lower_cut, quad.upper_cut);
    let (inf2, sup2) = scan(quad.lower_cut.powi(2), quad.upper_cut.powi(2));
    let stable = (inf2 - inf).abs() <= 0.01 * inf && (sup2 - sup).abs() <= 0.01 * sup;
    RatioBounds {
        inf,
        sup,
        bounded: inf > 0.0 && sup.is_finite() && stable,
    }
}

/// `ln ‖x^β f₀‖_p` for `f₀ = x⁻¹ (ln x)^Δ 1_{(1,∞)}`:
/// `‖x^β f₀‖_p^p = Γ(Δp + 1) / [p(1-β) - 1]^{Δp + 1}`.
pub fn ln_norm_power_log_source(beta: f64, p: f64, delta: f64) -> f64 {
    (ln_gamma(delta * p + 1.0) - (delta * p + 1.0) * (p * (1.0 - beta) - 1.0).ln()) / p
}

/// `ln ‖x^α H[f₀]‖_q` from `H[f₀] = (1+Δ)⁻¹ x⁻¹ (ln x)^{Δ+1}` on `(1, ∞)`.
pub fn ln_norm_power_log_average(alpha: f64, q: f64, delta: f64) -> f64 {
    let e = delta + 1.0;
    (ln_gamma(e * q + 1.0) - (e * q + 1.0) * (q * (1.0 - alpha) - 1.0).ln()) / q - e.ln()
}

/// `‖x^α H[f₀]‖_q / ‖x^β f₀‖_p` in closed form via log-gamma.
pub fn power_log_ratio(alpha: f64, beta: f64, p: f64, q: f64, delta: f64) -> f64 {
    (ln_norm_power_log_average(alpha, q, delta) - ln_norm_power_log_source(beta, p, delta)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::Interval;

    fn quad() -> QuadratureConfig {
        QuadratureConfig::default().with_rel_tol(1e-10)
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs()
    }

    fn pw(e: f64) -> WeightSpec {
        WeightSpec::power(1.0, e).unwrap()
    }

    #[test]
    fn gamma_of_powers() {
        for &p in &[2.0, 3.0, 5.0] {
            let g = gamma_w(&pw(1.0 / p), &quad()).unwrap();
            assert!(close(g.value, p / (p - 1.0), 1e-8), "{p}: {}", g.value);
        }
        assert!(!gamma_w(&pw(1.0), &quad()).unwrap().finite);
    }

    #[test]
    fn bradley_examples() {
        let b = bradley_b(&pw(-1.0), &pw(0.0), 2.0, &quad()).unwrap();
        assert!(close(b.value, 1.0, 1e-6), "{}", b.value);
        let (lo, hi) = b.bracket.unwrap();
        assert!(close(lo, b.value, 1e-15) && close(hi, 2.0 * b.value, 1e-12));
        let b3 = bradley_b(&pw(-1.0), &pw(0.0), 3.0, &quad()).unwrap();
        assert!(close(b3.value, 2f64.powf(-1.0 / 3.0), 1e-6));
        assert!(!bradley_b(&pw(0.0), &pw(0.0), 2.0, &quad()).unwrap().finite);
        assert!(matches!(
            bradley_bpq(&pw(0.0), &pw(0.0), 3.0, 2.0, &quad()),
            Err(Error::ExponentOrder(_))
        ));
    }

    #[test]
    fn bradley_matches_power_closed_form() {
        let (a, b, p) = (0.6, 0.2, 1.5);
        let eq = validate_exponents(a, b, p).unwrap();
        let r = bradley_bpq(&pw(a - 1.0), &pw(b), p, eq.q, &quad()).unwrap();
        assert!(close(r.value, k0_form1(&eq), 1e-6), "{} {}", r.value, k0_form1(&eq));
    }

    #[test]
    fn mazja_examples() {
        let u = WeightSpec::unit().with_support(Interval::new(0.0, 1.0).unwrap()).unwrap();
        let m = mazja_b(&u, &pw(0.0), 2.0, 1.0, &quad()).unwrap();
        assert!(close(m.value, 3f64.powf(-0.5), 1e-6), "{}", m.value);
        assert!(!mazja_b(&pw(0.5), &pw(0.2), 2.0, 1.5, &quad()).unwrap().finite);
        let z = WeightSpec::power(0.0, 0.0).unwrap();
        assert_eq!(mazja_b(&z, &pw(0.0), 2.0, 1.0, &quad()).unwrap().value, 0.0);
        assert!(mazja_b(&u, &pw(0.0), 2.0, 2.0, &quad()).is_err());
    }

    #[test]
    fn stepanov_examples() {
        let s = stepanov_bounds(&pw(0.0), &pw(0.0), 2.0, 2.0, &quad()).unwrap();
        assert!(close(s.a0.value, 1.0, 1e-6) && close(s.a1.value, 1.0, 1e-6), "{s:?}");
        let s = stepanov_bounds(&pw(0.0), &pw(0.0), 3.0, 3.0, &quad()).unwrap();
        assert!(close(s.a0.value, 1.0, 1e-6));
        assert!(close(s.a1.value, 0.5f64.powf(1.0 / 3.0), 1e-6), "{}", s.a1.value);
        let z = WeightSpec::power(0.0, 0.0).unwrap();
        let s = stepanov_bounds(&z, &pw(0.0), 2.0, 2.0, &quad()).unwrap();
        assert_eq!((s.a0.value, s.a1.value), (0.0, 0.0));
        let s = stepanov_bounds(&z, &pw(0.0), 3.0, 2.0, &quad()).unwrap();
        assert_eq!(s.b0.unwrap().value, 0.0);
    }

    #[test]
    fn muckenhoupt_examples() {
        let d = muckenhoupt_d(&pw(0.0), 2.0, &quad()).unwrap();
        assert!(close(d.value, 1.0, 1e-8), "{}", d.value);
        let d = muckenhoupt_d(&pw(0.0), 3.0, &quad()).unwrap();
        assert!(close(d.value, 0.5, 1e-8));
        assert!(!muckenhoupt_d(&pw(1.5), 2.0, &quad()).unwrap().finite);
    }

    #[test]
    fn exponent_validation() {
        let eq = validate_exponents(0.5, 0.0, 4.0 / 3.0).unwrap();
        assert!(close(eq.q, 4.0, 1e-12));
        let e = validate_exponents(0.3, 0.3, 2.0).unwrap_err();
        assert!(matches!(e, Error::ExponentDomain { clause: "alpha > beta", .. }));
        let e = validate_exponents(0.9, 0.0, 1.2).unwrap_err();
        assert!(matches!(e, Error::ExponentDomain { clause: "p <= p_plus", .. }));
        let e = validate_exponents(0.5, 0.2, 1.1).unwrap_err();
        assert!(matches!(e, Error::ExponentDomain { clause: "p > p0", .. }));
        let eq = validate_exponents(0.5, 0.0, 2.0).unwrap();
        assert!(eq.q.is_infinite());
        let eq = validate_exponents_d(0.5, 0.0, 2.0, 2).unwrap();
        assert!(close(eq.q, 4.0, 1e-12) && close(eq.p_plus, 4.0, 1e-15));
    }

    #[test]
    fn k0_values() {
        let eq = validate_exponents(0.5, 0.0, 4.0 / 3.0).unwrap();
        let k = k0_family(&eq).unwrap();
        assert!((k.form1 - 1.0).abs() <= 1e-10);
        assert!((k.form2 - 3f64.sqrt()).abs() <= 1e-10);
        assert!((k.k_plus - 2.0).abs() <= 1e-10);
        assert!((k.lower_bound - 4.0 * 3f64.powf(-0.75)).abs() <= 1e-10);
    }

    #[test]
    fn k_multi_products() {
        let r = k_multi(&[0.5, 0.5], &[0.0, 0.0], &[4.0 / 3.0, 4.0 / 3.0]).unwrap();
        assert!((r.value - 4.0).abs() < 1e-10);
        let e = k_multi(&[0.5, 0.3], &[0.0, 0.3], &[4.0 / 3.0, 2.0]).unwrap_err();
        assert!(matches!(e, Error::ExponentDomain { axis: Some(1), .. }));
    }

    #[test]
    fn nu_r_maps_exponents() {
        let psi = PsiFunction::constant(1.0, 1.0, 2.0).unwrap();
        let nu = build_nu_r(&psi, &[0.5], &[0.0]).unwrap();
        assert!((nu.eval(&[4.0]) - 2.0).abs() < 1e-10);
        let dirac = PsiFunction::dirac(vec![4.0 / 3.0], 1.0).unwrap();
        let nu = build_nu_r(&dirac, &[0.5], &[0.0]).unwrap();
        let (at, v) = nu.dirac_point().unwrap();
        assert!((at[0] - 4.0).abs() < 1e-12 && (v - 2.0).abs() < 1e-10);
        assert!(build_nu_r(&psi, &[0.3], &[0.3]).is_err());
    }

    #[test]
    fn ratio_bounded_examples() {
        let r = ratio_bounded(&SlowPart::None, &SlowPart::None, &quad(), 256);
        assert!(r.bounded && r.inf == 1.0 && r.sup == 1.0);
        let l = SlowPart::Log1p { power: 1.0 };
        assert!(!ratio_bounded(&l, &SlowPart::None, &quad(), 256).bounded);
        let t1 = SlowPart::Tabulated { xs: vec![0.1, 1.0, 10.0], ys: vec![2.0, 3.0, 2.5] };
        let t2 = SlowPart::Tabulated { xs: vec![0.5, 5.0], ys: vec![1.0, 1.5] };
        let r = ratio_bounded(&t1, &t2, &quad(), 256);
        assert!(r.bounded && r.inf > 1.0 && r.sup <= 3.0);
    }

    #[test]
    fn power_log_norm_closed_form() {
        // ‖f₀‖_2² = Γ(5) / 1^5 = 24 at Δ = 2
        let v = (2.0 * ln_norm_power_log_source(0.0, 2.0, 2.0)).exp();
        assert!((v - 24.0).abs() < 1e-9);
        let r = power_log_ratio(0.0, 0.0, 2.0, 2.0, 1.0);
        assert!((r - 3f64.sqrt()).abs() < 1e-12);
    }
}
