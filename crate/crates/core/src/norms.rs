//! Weighted Lebesgue norms, iterated mixed norms, the tail and Marcinkiewicz
//! quasinorms, the `Y`/`Y*` quasinorms built from `f*`/`f**`, and Grand
//! Lebesgue norms (isotropic and anisotropic).

use std::cell::RefCell;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{
    integrate_fn, search::golden_max, sup_linear_grid, sup_log_grid, Interval, Monotone, MultiFn,
    QuadratureConfig, RealFn, SupConfig, WeightSpec,
};
use crate::rearrange::{decreasing_rearrangement, double_star, tail_function, MeasureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormResult {
    pub value: f64,
    /// Maximizing parameter of sup-type norms.
    pub achieved_at: Option<f64>,
    pub error_estimate: f64,
}

impl NormResult {
    fn exact(value: f64) -> Self {
        NormResult {
            value,
            achieved_at: None,
            error_estimate: 0.0,
        }
    }

    fn integral(value: f64, rel_tol: f64, p: f64) -> Self {
        NormResult {
            value,
            achieved_at: None,
            error_estimate: if value.is_finite() { value * rel_tol / p } else { 0.0 },
        }
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("exponent must lie in [1, ∞], got {p}")))
    }
}

/// Search window `[lo, hi]` for a sup over `(a, b)`.
fn search_window(a: f64, b: f64, quad: &QuadratureConfig) -> (f64, f64) {
    let lo = if a > 0.0 {
        a
    } else {
        quad.lower_cut * if b.is_finite() { b.min(1.0) } else { 1.0 }
    };
    let hi = if b.is_finite() {
        b
    } else {
        quad.upper_cut * a.max(1.0)
    };
    (lo, hi)
}

/// `(∫_a^b |g|^p b)^{1/p}` for a closure, or the sup of `|g|` when `p = ∞`.
fn lp_of<G: Fn(f64) -> Result<f64>>(
    g: G,
    p: f64,
    weight: Option<&WeightSpec>,
    (a, b): (f64, f64),
    breaks: &[f64],
    quad: &QuadratureConfig,
) -> Result<NormResult> {
    check_exponent(p)?;
    if !(b > a) {
        return Ok(NormResult::exact(0.0));
    }
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let eval = |x: f64| match g(x) {
        Ok(v) => v.abs(),
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    if p.is_infinite() {
        let (lo, hi) = search_window(a, b, quad);
        // the right end is excluded; approach it from inside
        let hi = if b.is_finite() { hi * (1.0 - 1e-15) } else { hi };
        let r = sup_log_grid(eval, lo, hi, breaks, &SupConfig::default());
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        return Ok(NormResult {
            value: r.value.max(0.0),
            achieved_at: Some(r.argmax),
            error_estimate: 0.0,
        });
    }
    let mut all_breaks = breaks.to_vec();
    if let Some(w) = weight {
        all_breaks.extend(w.breakpoints());
    }
    let integrand = |x: f64| {
        let v = eval(x);
        if v == 0.0 {
            return 0.0;
        }
        let b = weight.map_or(1.0, |w| w.eval(x));
        if b == 0.0 {
            return 0.0;
        }
        let direct = v.powf(p) * b;
        if direct.is_finite() && direct > 0.0 {
            direct
        } else {
            // |f|^p underflows or b overflows out in the tail
            (p * v.ln() + weight.map_or(0.0, |w| w.ln_eval(x))).exp()
        }
    };
    let integral = integrate_fn(integrand, a, b, &all_breaks, quad);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(NormResult::integral(integral?.powf(1.0 / p), quad.rel_tol, p))
}

/// `‖f‖_{p,b} = (∫ |f|^p b)^{1/p}`; for `p = ∞` the supremum of `|f|` with the
/// weight ignored.
pub fn lp_norm(
    f: &RealFn,
    p: f64,
    weight: Option<&WeightSpec>,
    quad: &QuadratureConfig,
) -> Result<NormResult> {
    quad.validate()?;
    let d = f.domain();
    lp_of(|x| Ok(f.eval(x)), p, weight, (d.lo, d.hi), &f.breakpoints(), quad)
}

fn check_dims(f: &MultiFn, ps: &[f64], weights: Option<&[WeightSpec]>) -> Result<()> {
    if ps.len() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: ps.len(),
        });
    }
    if let Some(w) = weights {
        if w.len() != f.dim() {
            return Err(Error::DimensionMismatch {
                expected: f.dim(),
                got: w.len(),
            });
        }
    }
    ps.iter().try_for_each(|&p| check_exponent(p))
}

/// Anisotropic norm `|f|_{p⃗}` with `x_1` innermost and `x_d` outermost.
///
/// Factorized inputs use `|g_1 ⊗ … ⊗ g_d|_{p⃗} = ∏ |g_j|_{p_j}`.
pub fn mixed_norm(
    f: &MultiFn,
    ps: &[f64],
    weights: Option<&[WeightSpec]>,
    quad: &QuadratureConfig,
) -> Result<NormResult> {
    check_dims(f, ps, weights)?;
    let Some(components) = f.components() else {
        return mixed_norm_iterated(f, ps, weights, quad);
    };
    let mut value = 1.0;
    let mut rel_err = 0.0;
    for (j, g) in components.iter().enumerate() {
        let n = lp_norm(g, ps[j], weights.map(|w| &w[j]), quad)?;
        if n.value == 0.0 {
            return Ok(NormResult::exact(0.0));
        }
        value *= n.value;
        if n.value.is_finite() {
            rel_err += n.error_estimate / n.value;
        }
    }
    Ok(NormResult {
        value,
        achieved_at: None,
        error_estimate: if value.is_finite() { value * rel_err } else { 0.0 },
    })
}

/// [`mixed_norm`] by nested one-dimensional evaluation, ignoring any
/// factorization.
pub fn mixed_norm_iterated(
    f: &MultiFn,
    ps: &[f64],
    weights: Option<&[WeightSpec]>,
    quad: &QuadratureConfig,
) -> Result<NormResult> {
    check_dims(f, ps, weights)?;
    quad.validate()?;
    let d = f.dim();
    let value = layer(f, ps, weights, d - 1, &[], quad)?;
    let rel: f64 = ps.iter().filter(|p| p.is_finite()).map(|p| quad.rel_tol / p).sum();
    Ok(NormResult {
        value,
        achieved_at: None,
        error_estimate: if value.is_finite() { value * rel } else { 0.0 },
    })
}

/// Norm over axis `j` of the layer below, with coordinates of the axes above
/// `j` fixed to `outer` (ordered `x_{j+1}, …, x_d`).
fn layer(
    f: &MultiFn,
    ps: &[f64],
    weights: Option<&[WeightSpec]>,
    j: usize,
    outer: &[f64],
    quad: &QuadratureConfig,
) -> Result<f64> {
    let inner = |x: f64| -> Result<f64> {
        let mut coords = Vec::with_capacity(outer.len() + 1);
        coords.push(x);
        coords.extend_from_slice(outer);
        if j == 0 {
            Ok(f.eval(&coords))
        } else {
            layer(f, ps, weights, j - 1, &coords, quad)
        }
    };
    let dom = f.axis_domain(j);
    let r = lp_of(
        inner,
        ps[j],
        weights.map(|w| &w[j]),
        (dom.lo, dom.hi),
        &f.axis_breaks(j),
        quad,
    )?;
    Ok(r.value)
}

/// `sup_{0 < t < extent} w(t) g(t)` over the quadrature window.
pub fn sup_weighted(w: &WeightSpec, g: &RealFn, extent: f64, quad: &QuadratureConfig) -> NormResult {
    let (lo, hi) = search_window(0.0, extent, quad);
    let mut breaks = g.breakpoints();
    breaks.extend(w.breakpoints());
    let r = sup_log_grid(|t| w.eval(t) * g.eval(t), lo, hi, &breaks, &SupConfig::default());
    NormResult {
        value: r.value.max(0.0),
        achieved_at: Some(r.argmax),
        error_estimate: 0.0,
    }
}

/// `f**` as a function on the half-line.
pub fn double_star_fn(fstar: &RealFn, quad: &QuadratureConfig) -> RealFn {
    let (g, q) = (fstar.clone(), *quad);
    RealFn::custom(
        move |t| double_star(&g, t, &q).unwrap_or(f64::NAN),
        Interval::HALF_LINE,
        fstar.breakpoints(),
        Monotone::NonIncreasing,
    )
}

fn rearranged(f: &RealFn, mu: &MeasureSpec, quad: &QuadratureConfig) -> Result<RealFn> {
    Ok(decreasing_rearrangement(&tail_function(f, mu, quad)?))
}

/// `‖f‖*_w = sup_t w(t) f*(t)`.
pub fn tail_quasinorm(
    f: &RealFn,
    w: &WeightSpec,
    mu: &MeasureSpec,
    quad: &QuadratureConfig,
) -> Result<NormResult> {
    w.validate_class_w()?;
    let fstar = rearranged(f, mu, quad)?;
    Ok(sup_weighted(w, &fstar, mu.total_mass(), quad))
}

/// `sup_t t · w(T_f(t))`, the level-set form of [`tail_quasinorm`].
pub fn tail_quasinorm_level(
    f: &RealFn,
    w: &WeightSpec,
    mu: &MeasureSpec,
    quad: &QuadratureConfig,
) -> Result<NormResult> {
    w.validate_class_w()?;
    let tail = tail_function(f, mu, quad)?;
    let levels = tail.jump_levels();
    let phi = |t: f64| t * w.eval(tail.eval(t));
    let mut best = NormResult {
        value: 0.0,
        achieved_at: None,
        error_estimate: 0.0,
    };
    for &l in &levels {
        let v = phi(l);
        if v > best.value {
            best = NormResult {
                value: v,
                achieved_at: Some(l),
                error_estimate: 0.0,
            };
        }
    }
    if levels.is_empty() {
        let fstar = decreasing_rearrangement(&tail);
        let (slo, shi) = search_window(0.0, tail.total_mass(), quad);
        let top = fstar.eval(slo);
        let bottom = fstar.eval(shi * (1.0 - 1e-15)).max(top * 1e-300);
        if top > 0.0 && top.is_finite() {
            let r = sup_log_grid(phi, bottom.max(f64::MIN_POSITIVE), top, &[], &SupConfig::default());
            best = NormResult {
                value: r.value,
                achieved_at: Some(r.argmax),
                error_estimate: 0.0,
            };
        }
    }
    Ok(best)
}

/// Marcinkiewicz norm `‖f‖_w = sup_t w(t) f**(t)`.
pub fn marcinkiewicz_norm(
    f: &RealFn,
    w: &WeightSpec,
    mu: &MeasureSpec,
    quad: &QuadratureConfig,
) -> Result<NormResult> {
    w.validate_class_w()?;
    let fstar = rearranged(f, mu, quad)?;
    let fss = double_star_fn(&fstar, quad);
    let r = sup_weighted(w, &fss, mu.total_mass(), quad);
    if r.value.is_nan() {
        return Err(Error::NonConvergentQuadrature {
            estimate: f64::NAN,
            error: f64::NAN,
        });
    }
    Ok(r)
}

/// Rearrangement-invariant base spaces on `(0, μ(X))`.
#[derive(Debug, Clone)]
pub enum Space {
    Lp { p: f64, weight: Option<WeightSpec> },
    /// `sup_t w(t) |g(t)|`.
    SupWeighted { w: WeightSpec },
    Grand { psi: PsiFunction, grid: PGrid },
}

impl Space {
    /// Norm of `g` restricted to `(0, extent)`.
    pub fn norm(&self, g: &RealFn, extent: f64, quad: &QuadratureConfig) -> Result<NormResult> {
        let g = g.restrict(Interval {
            lo: 0.0,
            hi: extent,
        });
        match self {
            Space::Lp { p, weight } => lp_norm(&g, *p, weight.as_ref(), quad),
            Space::SupWeighted { w } => {
                let r = sup_weighted(w, &g, extent, quad);
                if r.value.is_nan() {
                    return Err(Error::NonConvergentQuadrature {
                        estimate: f64::NAN,
                        error: f64::NAN,
                    });
                }
                Ok(r)
            }
            Space::Grand { psi, grid } => grand_norm_of(&g, psi, quad, grid),
        }
    }
}

/// `(|||f|||*_Y, |||f|||_Y) = (‖f*‖_V, ‖f**‖_V)`.
pub fn y_quasinorms(
    f: &RealFn,
    space: &Space,
    mu: &MeasureSpec,
    quad: &QuadratureConfig,
) -> Result<(NormResult, NormResult)> {
    let fstar = rearranged(f, mu, quad)?;
    y_quasinorms_of_rearrangement(&fstar, space, mu.total_mass(), quad)
}

/// [`y_quasinorms`] starting from an already computed `f*`.
pub fn y_quasinorms_of_rearrangement(
    fstar: &RealFn,
    space: &Space,
    total_mass: f64,
    quad: &QuadratureConfig,
) -> Result<(NormResult, NormResult)> {
    let fss = double_star_fn(fstar, quad);
    Ok((
        space.norm(fstar, total_mass, quad)?,
        space.norm(&fss, total_mass, quad)?,
    ))
}

type PsiEval = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
enum PsiKind {
    Constant(f64),
    Parametric(PsiEval),
    /// Values at nodes, linear between them, `+∞` outside `[first, last]`.
    Tabulated { ps: Vec<f64>, values: Vec<f64> },
    Dirac { at: Vec<f64>, value: f64 },
    Product(Vec<PsiFunction>),
}

/// Positive weight on an open exponent interval or box, `+∞` outside.
#[derive(Clone)]
pub struct PsiFunction {
    kind: PsiKind,
    support: Vec<(f64, f64)>,
}

impl fmt::Debug for PsiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            PsiKind::Constant(c) => format!("constant({c})"),
            PsiKind::Parametric(_) => "parametric".into(),
            PsiKind::Tabulated { ps, .. } => format!("tabulated({} nodes)", ps.len()),
            PsiKind::Dirac { at, value } => format!("dirac({at:?}, {value})"),
            PsiKind::Product(v) => format!("product({})", v.len()),
        };
        f.debug_struct("PsiFunction")
            .field("kind", &kind)
            .field("support", &self.support)
            .finish()
    }
}

fn check_support(support: &[(f64, f64)]) -> Result<()> {
    if support.is_empty() {
        return Err(Error::InvalidParameter("ψ needs at least one axis".into()));
    }
    for &(a, b) in support {
        if !(a >= 1.0 && b > a) || a.is_nan() {
            return Err(Error::InvalidParameter(format!(
                "ψ support ({a}, {b}) must satisfy 1 <= A < B"
            )));
        }
    }
    Ok(())
}

impl PsiFunction {
    pub fn constant(value: f64, a: f64, b: f64) -> Result<Self> {
        check_support(&[(a, b)])?;
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::InvalidParameter(format!("ψ must be positive, got {value}")));
        }
        Ok(PsiFunction {
            kind: PsiKind::Constant(value),
            support: vec![(a, b)],
        })
    }

    pub fn parametric<F>(eval: F, support: Vec<(f64, f64)>) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        check_support(&support)?;
        Ok(PsiFunction {
            kind: PsiKind::Parametric(Arc::new(eval)),
            support,
        })
    }

    pub fn tabulated(ps: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if ps.len() != values.len() || ps.is_empty() {
            return Err(Error::InvalidParameter("tabulated ψ needs matching nodes".into()));
        }
        if ps.windows(2).any(|w| !(w[1] > w[0])) || ps[0] < 1.0 {
            return Err(Error::InvalidParameter("ψ nodes must be increasing and >= 1".into()));
        }
        let support = vec![(ps[0], *ps.last().unwrap())];
        Ok(PsiFunction {
            kind: PsiKind::Tabulated { ps, values },
            support,
        })
    }

    /// Finite only at `at`, where it equals `value`.
    pub fn dirac(at: Vec<f64>, value: f64) -> Result<Self> {
        if at.is_empty() || at.iter().any(|p| !(*p >= 1.0)) {
            return Err(Error::InvalidParameter("dirac ψ needs exponents >= 1".into()));
        }
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::InvalidParameter(format!("ψ must be positive, got {value}")));
        }
        let support = at.iter().map(|&p| (p, p)).collect();
        Ok(PsiFunction {
            kind: PsiKind::Dirac { at, value },
            support,
        })
    }

    /// `ψ(p⃗) = ∏ ψ_j(p_j)` from one-dimensional factors.
    pub fn product(factors: Vec<PsiFunction>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptyComponentList);
        }
        let mut support = Vec::new();
        for f in &factors {
            if f.dim() != 1 {
                return Err(Error::DimensionMismatch {
                    expected: 1,
                    got: f.dim(),
                });
            }
            support.push(f.support[0]);
        }
        Ok(PsiFunction {
            kind: PsiKind::Product(factors),
            support,
        })
    }

    pub fn dim(&self) -> usize {
        self.support.len()
    }

    pub fn support(&self) -> &[(f64, f64)] {
        &self.support
    }

    pub fn dirac_point(&self) -> Option<(&[f64], f64)> {
        match &self.kind {
            PsiKind::Dirac { at, value } => Some((at, *value)),
            _ => None,
        }
    }

    pub fn nodes(&self) -> Option<&[f64]> {
        match &self.kind {
            PsiKind::Tabulated { ps, .. } => Some(ps),
            _ => None,
        }
    }

    pub fn eval(&self, p: &[f64]) -> f64 {
        if p.len() != self.dim() {
            return f64::INFINITY;
        }
        match &self.kind {
            PsiKind::Dirac { at, value } => {
                if at.as_slice() == p {
                    *value
                } else {
                    f64::INFINITY
                }
            }
            PsiKind::Tabulated { ps, values } => {
                let x = p[0];
                if x < ps[0] || x > *ps.last().unwrap() || x.is_nan() {
                    return f64::INFINITY;
                }
                let i = ps.partition_point(|&n| n <= x);
                if i >= ps.len() {
                    return *values.last().unwrap();
                }
                let t = (x - ps[i - 1]) / (ps[i] - ps[i - 1]);
                values[i - 1] + t * (values[i] - values[i - 1])
            }
            _ => {
                let inside = self
                    .support
                    .iter()
                    .zip(p)
                    .all(|(&(a, b), &x)| x > a && x < b);
                if !inside {
                    return f64::INFINITY;
                }
                match &self.kind {
                    PsiKind::Constant(c) => *c,
                    PsiKind::Parametric(e) => e(p),
                    PsiKind::Product(fs) => fs.iter().zip(p).map(|(f, &x)| f.eval(&[x])).product(),
                    _ => unreachable!(),
                }
            }
        }
    }
}

/// Exponent-search resolution for Grand Lebesgue norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PGrid {
    pub step: f64,
    pub xtol: f64,
    /// Distance from the open endpoints at which one-sided probes are taken.
    pub endpoint_offset: f64,
    /// Length of the searched range when the support is unbounded.
    pub infinite_cap: f64,
    pub refine_top: usize,
    /// Grid points per axis for the anisotropic search.
    pub points_per_axis: usize,
}

impl Default for PGrid {
    fn default() -> Self {
        PGrid {
            step: 1e-2,
            xtol: 1e-4,
            endpoint_offset: 1e-4,
            infinite_cap: 30.0,
            refine_top: 5,
            points_per_axis: 20,
        }
    }
}

impl PGrid {
    fn range(&self, (a, b): (f64, f64)) -> (f64, f64) {
        let hi = if b.is_finite() { b } else { a + self.infinite_cap };
        (a + self.endpoint_offset, hi - self.endpoint_offset)
    }
}

fn grand_norm_of(
    f: &RealFn,
    psi: &PsiFunction,
    quad: &QuadratureConfig,
    grid: &PGrid,
) -> Result<NormResult> {
    if psi.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: psi.dim(),
        });
    }
    if let Some((at, value)) = psi.dirac_point() {
        let n = lp_norm(f, at[0], None, quad)?;
        return Ok(NormResult {
            value: n.value / value,
            achieved_at: Some(at[0]),
            error_estimate: n.error_estimate / value,
        });
    }
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let ratio = |p: f64| {
        let psi_p = psi.eval(&[p]);
        if psi_p.is_infinite() {
            return 0.0;
        }
        match lp_norm(f, p, None, quad) {
            Ok(n) => n.value / psi_p,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let best = if let Some(nodes) = psi.nodes() {
        let mut best = (f64::NAN, f64::NEG_INFINITY);
        for &p in nodes {
            let v = ratio(p);
            if v > best.1 || v.is_nan() {
                best = (p, v);
            }
        }
        best
    } else {
        let (lo, hi) = grid.range(psi.support()[0]);
        let r = sup_linear_grid(ratio, lo, hi, grid.step, grid.xtol, grid.refine_top);
        (r.argmax, r.value)
    };
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(NormResult {
        value: best.1.max(0.0),
        achieved_at: Some(best.0),
        error_estimate: best.1.abs() * quad.rel_tol,
    })
}

/// `‖f‖_{G(ψ)} = sup_p |f|_p / ψ(p)`.
pub fn grand_lebesgue_norm(
    f: &RealFn,
    psi: &PsiFunction,
    mu: &MeasureSpec,
    quad: &QuadratureConfig,
    grid: &PGrid,
) -> Result<NormResult> {
    mu.validate()?;
    grand_norm_of(&f.restrict(mu.support()), psi, quad, grid)
}

/// Anisotropic Grand Lebesgue norm with its maximizing exponent vector.
#[derive(Debug, Clone, PartialEq)]
pub struct AglsResult {
    pub value: f64,
    pub argmax: Vec<f64>,
    pub error_estimate: f64,
}

/// `sup_{p⃗} |f|_{p⃗} / ψ(p⃗)` over a `points_per_axis^d` grid followed by
/// coordinate-wise golden-section sweeps.
pub fn agls_norm(
    f: &MultiFn,
    psi: &PsiFunction,
    quad: &QuadratureConfig,
    grid: &PGrid,
) -> Result<AglsResult> {
    let d = f.dim();
    if psi.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: psi.dim(),
        });
    }
    if let Some((at, value)) = psi.dirac_point() {
        let n = mixed_norm(f, at, None, quad)?;
        return Ok(AglsResult {
            value: n.value / value,
            argmax: at.to_vec(),
            error_estimate: n.error_estimate / value,
        });
    }
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let ratio = |p: &[f64]| {
        let psi_p = psi.eval(p);
        if psi_p.is_infinite() {
            return 0.0;
        }
        match mixed_norm(f, p, None, quad) {
            Ok(n) => n.value / psi_p,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let n = grid.points_per_axis.max(2);
    let axes: Vec<Vec<f64>> = psi
        .support()
        .iter()
        .map(|&s| {
            let (lo, hi) = grid.range(s);
            (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
        })
        .collect();
    let mut best_p = vec![0.0; d];
    let mut best_v = f64::NEG_INFINITY;
    let mut idx = vec![0usize; d];
    'outer: loop {
        let p: Vec<f64> = idx.iter().enumerate().map(|(j, &i)| axes[j][i]).collect();
        let v = ratio(&p);
        if v > best_v || v.is_nan() {
            best_v = v;
            best_p = p;
        }
        for j in 0..d {
            idx[j] += 1;
            if idx[j] < n {
                continue 'outer;
            }
            idx[j] = 0;
        }
        break;
    }
    if let Some(e) = failure.borrow_mut().take() {
        return Err(e);
    }
    let cell: Vec<f64> = axes.iter().map(|a| a[1] - a[0]).collect();
    for _sweep in 0..3 {
        for j in 0..d {
            let (lo_j, hi_j) = (axes[j][0], axes[j][n - 1]);
            let a = (best_p[j] - cell[j]).max(lo_j);
            let b = (best_p[j] + cell[j]).min(hi_j);
            let (x, v) = golden_max(
                |x| {
                    let mut probe = best_p.clone();
                    probe[j] = x;
                    ratio(&probe)
                },
                a,
                b,
                grid.xtol,
            );
            if v > best_v {
                best_v = v;
                best_p[j] = x;
            }
        }
    }
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(AglsResult {
        value: best_v.max(0.0),
        argmax: best_p,
        error_estimate: best_v.abs() * quad.rel_tol,
    })
}

/// `ψ_F(p) = sup_{ξ ∈ F} |ξ|_p` tabulated on `p_grid`.
pub fn natural_function(
    family: &[RealFn],
    p_grid: &[f64],
    mu: &MeasureSpec,
    quad: &QuadratureConfig,
) -> Result<PsiFunction> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mut values = Vec::with_capacity(p_grid.len());
    for &p in p_grid {
        let mut best: f64 = 0.0;
        for xi in family {
            let n = lp_norm(&xi.restrict(mu.support()), p, None, quad)?.value;
            if !n.is_finite() {
                return Err(Error::InfiniteAtGridPoint(p));
            }
            best = best.max(n);
        }
        values.push(best);
    }
    PsiFunction::tabulated(p_grid.to_vec(), values)
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

    fn unit_indicator() -> RealFn {
        RealFn::indicator(0.0, 1.0).unwrap()
    }

    #[test]
    fn lp_examples() {
        for &p in &[1.0, 2.0, 7.5, f64::INFINITY] {
            let n = lp_norm(&unit_indicator(), p, None, &quad()).unwrap();
            assert!(close(n.value, 1.0, 1e-9), "p = {p}: {}", n.value);
        }
        let e = RealFn::exponential(1.0, 1.0, Interval::HALF_LINE).unwrap();
        let n = lp_norm(&e, 2.0, None, &quad()).unwrap();
        assert!(close(n.value, 0.5f64.sqrt(), 1e-9));
        assert!(lp_norm(&e, 0.5, None, &quad()).is_err());
    }

    #[test]
    fn mixed_factorized_and_iterated_agree() {
        let e = RealFn::exponential(1.0, 1.0, Interval::HALF_LINE).unwrap();
        let f = tensor_product(vec![e.clone(), e]).unwrap();
        let fac = mixed_norm(&f, &[1.0, 2.0], None, &quad()).unwrap().value;
        assert!(close(fac, 0.5f64.sqrt(), 1e-9));
        let it = mixed_norm_iterated(&f, &[1.0, 2.0], None, &quad()).unwrap().value;
        assert!(close(it, fac, 1e-7), "{it} vs {fac}");
    }

    #[test]
    fn mixed_order_matters_for_nonfactorized() {
        let f = MultiFn::custom(
            |x| (-(x[0] + 2.0 * x[1]) - x[0] * x[1]).exp(),
            vec![Interval::HALF_LINE; 2],
            vec![vec![], vec![]],
        )
        .unwrap();
        let swapped = MultiFn::custom(
            |x| (-(x[1] + 2.0 * x[0]) - x[0] * x[1]).exp(),
            vec![Interval::HALF_LINE; 2],
            vec![vec![], vec![]],
        )
        .unwrap();
        let a = mixed_norm(&f, &[1.0, 3.0], None, &quad()).unwrap().value;
        let b = mixed_norm(&swapped, &[1.0, 3.0], None, &quad()).unwrap().value;
        assert!((a - b).abs() > 1e-3, "{a} {b}");
    }

    #[test]
    fn tail_and_marcinkiewicz_indicator() {
        let w = WeightSpec::power(1.0, 0.5).unwrap();
        let f = RealFn::indicator(0.0, 0.25).unwrap();
        let mu = MeasureSpec::Probability;
        let t = tail_quasinorm(&f, &w, &mu, &quad()).unwrap();
        assert!(close(t.value, 0.5, 1e-12), "{}", t.value);
        let lvl = tail_quasinorm_level(&f, &w, &mu, &quad()).unwrap();
        assert!(close(lvl.value, 0.5, 1e-12));
        let m = marcinkiewicz_norm(&f, &w, &mu, &quad()).unwrap();
        assert!(close(m.value, 0.5, 1e-9), "{}", m.value);
    }

    #[test]
    fn marcinkiewicz_of_constant() {
        let w = WeightSpec::power(1.0, 0.5).unwrap();
        let f = RealFn::constant(3.0, Interval::new(0.0, 1.0).unwrap()).unwrap();
        let m = marcinkiewicz_norm(&f, &w, &MeasureSpec::Probability, &quad()).unwrap();
        assert!(close(m.value, 3.0, 1e-9), "{}", m.value);
    }

    #[test]
    fn class_w_enforced() {
        let w = WeightSpec::power(1.0, 0.0).unwrap();
        let f = unit_indicator();
        assert!(matches!(
            tail_quasinorm(&f, &w, &MeasureSpec::Probability, &quad()),
            Err(Error::InvalidWeight(_))
        ));
    }

    #[test]
    fn y_quasinorms_unit_indicator() {
        let space = Space::Lp { p: 2.0, weight: None };
        let (a, b) = y_quasinorms(&unit_indicator(), &space, &MeasureSpec::Probability, &quad()).unwrap();
        assert!(close(a.value, 1.0, 1e-9) && close(b.value, 1.0, 1e-9));
        let z = RealFn::constant(0.0, Interval::HALF_LINE).unwrap();
        let (a, b) = y_quasinorms(&z, &space, &MeasureSpec::Probability, &quad()).unwrap();
        assert_eq!((a.value, b.value), (0.0, 0.0));
    }

    #[test]
    fn grand_norm_examples() {
        let mu = MeasureSpec::Probability;
        let e = RealFn::exponential(1.0, 1.0, Interval::HALF_LINE).unwrap();
        let dirac = PsiFunction::dirac(vec![3.0], 1.0).unwrap();
        let g = grand_lebesgue_norm(&e, &dirac, &mu, &quad(), &PGrid::default()).unwrap();
        let direct = lp_norm(&e.restrict(mu.support()), 3.0, None, &quad()).unwrap();
        assert_eq!(g.value, direct.value);
        let one = PsiFunction::constant(1.0, 1.0, 2.0).unwrap();
        let g = grand_lebesgue_norm(&unit_indicator(), &one, &mu, &quad(), &PGrid::default()).unwrap();
        assert!(close(g.value, 1.0, 1e-9));
    }

    #[test]
    fn natural_function_examples() {
        let mu = MeasureSpec::Probability;
        let fam = vec![RealFn::indicator(0.0, 0.1).unwrap(), unit_indicator()];
        let grid = [1.5, 2.0, 4.0];
        let psi = natural_function(&fam, &grid, &mu, &quad()).unwrap();
        for &p in &grid {
            assert!(close(psi.eval(&[p]), 1.0, 1e-9));
        }
        assert_eq!(natural_function(&[], &grid, &mu, &quad()).unwrap_err(), Error::EmptyFamily);
        let e = RealFn::exponential(1.0, 1.0, Interval::HALF_LINE).unwrap();
        let psi = natural_function(std::slice::from_ref(&e), &grid, &mu, &quad()).unwrap();
        let g = grand_lebesgue_norm(&e, &psi, &mu, &quad(), &PGrid::default()).unwrap();
        assert!(close(g.value, 1.0, 1e-12));
        let sing = RealFn::power(1.0, -0.5, Interval::HALF_LINE).unwrap();
        assert_eq!(
            natural_function(&[sing], &[1.5, 2.0], &mu, &quad()).unwrap_err(),
            Error::InfiniteAtGridPoint(2.0)
        );
    }

    #[test]
    fn agls_dirac_and_zero() {
        let e = RealFn::exponential(1.0, 1.0, Interval::HALF_LINE).unwrap();
        let f = tensor_product(vec![e.clone(), e]).unwrap();
        let psi = PsiFunction::dirac(vec![1.0, 2.0], 1.0).unwrap();
        let r = agls_norm(&f, &psi, &quad(), &PGrid::default()).unwrap();
        assert!(close(r.value, 0.5f64.sqrt(), 1e-9));
        let z = tensor_product(vec![RealFn::constant(0.0, Interval::HALF_LINE).unwrap(); 2]).unwrap();
        let psi = PsiFunction::product(vec![
            PsiFunction::constant(1.0, 1.0, 3.0).unwrap(),
            PsiFunction::constant(1.0, 1.0, 3.0).unwrap(),
        ])
        .unwrap();
        assert_eq!(agls_norm(&z, &psi, &quad(), &PGrid::default()).unwrap().value, 0.0);
    }
}
