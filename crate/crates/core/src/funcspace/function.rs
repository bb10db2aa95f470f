use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Half-open interval `[lo, hi)` with `0 <= lo < hi <= ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    /// `None` in serialized form means `+∞`.
    #[serde(with = "infinite_as_null")]
    pub hi: f64,
}

mod infinite_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() {
            s.serialize_none()
        } else {
            s.serialize_some(v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

impl Interval {
    pub const HALF_LINE: Interval = Interval {
        lo: 0.0,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo >= 0.0 && lo < hi && lo.is_finite()) || hi.is_nan() {
            return Err(Error::InvalidParameter(format!(
                "interval ({lo}, {hi}) must satisfy 0 <= lo < hi"
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x < self.hi
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo < hi).then_some(Interval { lo, hi })
    }

    fn scaled(&self, factor: f64) -> Interval {
        Interval {
            lo: self.lo * factor,
            hi: self.hi * factor,
        }
    }
}

/// Closed-form family a function belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormTag {
    Power,
    PowerLog,
    Exponential,
    Indicator,
    PiecewiseConstant,
    Tabulated,
    Composite,
}

/// Monotonicity of `x ↦ f(x)` on its domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotone {
    NonIncreasing,
    NonDecreasing,
    Constant,
    Unknown,
}

type ScalarEval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    /// `c x^a`
    Power { coef: f64, exponent: f64 },
    /// `c x^a |ln x|^Δ`
    PowerLog {
        coef: f64,
        exponent: f64,
        log_power: f64,
    },
    /// `c e^{-r x}`
    Exp { coef: f64, rate: f64 },
    /// `1` on `[lo, hi)`; the domain carries the interval.
    Indicator,
    /// `values[i]` on `[breaks[i], breaks[i+1])`.
    Steps { breaks: Vec<f64>, values: Vec<f64> },
    /// Linear interpolation of `ys` against `ln xs`.
    Tabulated { log_xs: Vec<f64>, ys: Vec<f64> },
    Sum(Vec<(f64, RealFn)>),
    Product(Vec<RealFn>),
    Dilated { scale: f64, inner: RealFn },
    Custom {
        eval: ScalarEval,
        breaks: Vec<f64>,
        monotone: Monotone,
        form: FormTag,
    },
}

/// Nonnegative function on a subinterval of `[0, ∞)`, extended by zero.
#[derive(Clone)]
pub struct RealFn {
    domain: Interval,
    kind: Arc<Kind>,
}

impl fmt::Debug for RealFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealFn")
            .field("form", &self.form())
            .field("domain", &self.domain)
            .finish()
    }
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")))
    }
}

fn check_coef(v: f64) -> Result<()> {
    check_finite("coefficient", v)?;
    if v < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "coefficient must be nonnegative, got {v}"
        )));
    }
    Ok(())
}

impl RealFn {
    fn from_kind(domain: Interval, kind: Kind) -> Self {
        RealFn {
            domain,
            kind: Arc::new(kind),
        }
    }

    pub fn constant(c: f64, domain: Interval) -> Result<Self> {
        Self::power(c, 0.0, domain)
    }

    pub fn power(coef: f64, exponent: f64, domain: Interval) -> Result<Self> {
        check_coef(coef)?;
        check_finite("exponent", exponent)?;
        Ok(Self::from_kind(domain, Kind::Power { coef, exponent }))
    }

    pub fn power_log(coef: f64, exponent: f64, log_power: f64, domain: Interval) -> Result<Self> {
        check_coef(coef)?;
        check_finite("exponent", exponent)?;
        check_finite("log power", log_power)?;
        if log_power < 0.0 && domain.contains(1.0) {
            return Err(Error::InvalidParameter(
                "negative log power is singular at x = 1 inside the domain".into(),
            ));
        }
        Ok(Self::from_kind(
            domain,
            Kind::PowerLog {
                coef,
                exponent,
                log_power,
            },
        ))
    }

    pub fn exponential(coef: f64, rate: f64, domain: Interval) -> Result<Self> {
        check_coef(coef)?;
        check_finite("rate", rate)?;
        Ok(Self::from_kind(domain, Kind::Exp { coef, rate }))
    }

    pub fn indicator(lo: f64, hi: f64) -> Result<Self> {
        Ok(Self::from_kind(Interval::new(lo, hi)?, Kind::Indicator))
    }

    /// Step function taking `values[i]` on `[breaks[i], breaks[i+1])`.
    pub fn piecewise_constant(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breaks.len() != values.len() + 1 || values.is_empty() {
            return Err(Error::InvalidParameter(
                "piecewise-constant needs len(breaks) = len(values) + 1 >= 2".into(),
            ));
        }
        if breaks[0] < 0.0 || breaks.windows(2).any(|w| !(w[1] > w[0])) || breaks[0].is_nan() {
            return Err(Error::InvalidParameter(
                "breaks must be nonnegative and strictly increasing".into(),
            ));
        }
        for &v in &values {
            check_coef(v)?;
        }
        let domain = Interval {
            lo: breaks[0],
            hi: *breaks.last().unwrap(),
        };
        Ok(Self::from_kind(domain, Kind::Steps { breaks, values }))
    }

    pub fn tabulated(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::InvalidParameter(
                "tabulated function needs matching xs/ys with at least two nodes".into(),
            ));
        }
        if xs[0] <= 0.0 || xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter(
                "tabulated nodes must be positive and strictly increasing".into(),
            ));
        }
        for &y in &ys {
            check_coef(y)?;
        }
        let domain = Interval {
            lo: xs[0],
            hi: *xs.last().unwrap(),
        };
        let log_xs = xs.iter().map(|x| x.ln()).collect();
        Ok(Self::from_kind(domain, Kind::Tabulated { log_xs, ys }))
    }

    /// Linear combination `Σ c_i f_i`. Coefficients may be negative as long as
    /// the caller guarantees a nonnegative result.
    pub fn sum(terms: Vec<(f64, RealFn)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::EmptyComponentList);
        }
        for (c, _) in &terms {
            check_finite("sum coefficient", *c)?;
        }
        let domain = hull(terms.iter().map(|(_, f)| f.domain));
        Ok(Self::from_kind(domain, Kind::Sum(terms)))
    }

    pub fn product(factors: Vec<RealFn>) -> Result<Self> {
        let mut domain = Interval::HALF_LINE;
        if factors.is_empty() {
            return Err(Error::EmptyComponentList);
        }
        for f in &factors {
            domain = match domain.intersect(&f.domain) {
                Some(d) => d,
                // disjoint supports: identically zero
                None => return Self::constant(0.0, Interval::HALF_LINE),
            };
        }
        Ok(Self::from_kind(domain, Kind::Product(factors)))
    }

    /// Wrap an arbitrary evaluator. `breaks` lists jumps and kinks.
    pub fn custom<F>(eval: F, domain: Interval, breaks: Vec<f64>, monotone: Monotone) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::from_kind(
            domain,
            Kind::Custom {
                eval: Arc::new(eval),
                breaks,
                monotone,
                form: FormTag::Composite,
            },
        )
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// Same function with its domain intersected with `window`.
    pub fn restrict(&self, window: Interval) -> RealFn {
        match self.domain.intersect(&window) {
            Some(d) => RealFn {
                domain: d,
                kind: self.kind.clone(),
            },
            None => RealFn::constant(0.0, window).expect("zero constant is valid"),
        }
    }

    pub fn form(&self) -> FormTag {
        match &*self.kind {
            Kind::Power { .. } => FormTag::Power,
            Kind::PowerLog { .. } => FormTag::PowerLog,
            Kind::Exp { .. } => FormTag::Exponential,
            Kind::Indicator => FormTag::Indicator,
            Kind::Steps { .. } => FormTag::PiecewiseConstant,
            Kind::Tabulated { .. } => FormTag::Tabulated,
            Kind::Dilated { inner, .. } => inner.form(),
            Kind::Custom { form, .. } => *form,
            Kind::Sum(_) | Kind::Product(_) => FormTag::Composite,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if !self.domain.contains(x) {
            return 0.0;
        }
        match &*self.kind {
            Kind::Power { coef, exponent } => {
                if *coef == 0.0 {
                    0.0
                } else if *exponent == 0.0 {
                    *coef
                } else {
                    coef * x.powf(*exponent)
                }
            }
            Kind::PowerLog {
                coef,
                exponent,
                log_power,
            } => {
                if *coef == 0.0 {
                    return 0.0;
                }
                let l = x.ln().abs();
                let lp = if *log_power == 0.0 { 1.0 } else { l.powf(*log_power) };
                coef * x.powf(*exponent) * lp
            }
            Kind::Exp { coef, rate } => coef * (-rate * x).exp(),
            Kind::Indicator => 1.0,
            Kind::Steps { breaks, values } => {
                let i = breaks.partition_point(|&b| b <= x);
                if i == 0 || i > values.len() {
                    0.0
                } else {
                    values[i - 1]
                }
            }
            Kind::Tabulated { log_xs, ys } => {
                let u = x.ln();
                let i = log_xs.partition_point(|&b| b <= u);
                if i == 0 {
                    ys[0]
                } else if i >= log_xs.len() {
                    *ys.last().unwrap()
                } else {
                    let t = (u - log_xs[i - 1]) / (log_xs[i] - log_xs[i - 1]);
                    ys[i - 1] + t * (ys[i] - ys[i - 1])
                }
            }
            Kind::Sum(terms) => terms.iter().map(|(c, f)| c * f.eval(x)).sum(),
            Kind::Product(factors) => {
                let mut acc = 1.0;
                for f in factors {
                    let v = f.eval(x);
                    if v == 0.0 {
                        return 0.0;
                    }
                    acc *= v;
                }
                acc
            }
            Kind::Dilated { scale, inner } => inner.eval(scale * x),
            Kind::Custom { eval, .. } => eval(x),
        }
    }

    /// Points where the function may jump or kink, including finite domain ends.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = vec![self.domain.lo];
        if self.domain.hi.is_finite() {
            out.push(self.domain.hi);
        }
        match &*self.kind {
            Kind::Steps { breaks, .. } => out.extend(breaks.iter().copied()),
            Kind::PowerLog { .. } => out.push(1.0),
            Kind::Tabulated { log_xs, .. } => out.extend(log_xs.iter().map(|u| u.exp())),
            Kind::Sum(terms) => terms.iter().for_each(|(_, f)| out.extend(f.breakpoints())),
            Kind::Product(fs) => fs.iter().for_each(|f| out.extend(f.breakpoints())),
            Kind::Dilated { scale, inner } => {
                out.extend(inner.breakpoints().into_iter().map(|b| b / scale))
            }
            Kind::Custom { breaks, .. } => out.extend(breaks.iter().copied()),
            _ => {}
        }
        out.retain(|b| b.is_finite() && *b > 0.0);
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// Monotonicity on the domain (not accounting for the zero extension).
    pub fn monotone(&self) -> Monotone {
        match &*self.kind {
            Kind::Power { coef, exponent } => {
                if *coef == 0.0 || *exponent == 0.0 {
                    Monotone::Constant
                } else if *exponent < 0.0 {
                    Monotone::NonIncreasing
                } else {
                    Monotone::NonDecreasing
                }
            }
            Kind::Exp { coef, rate } => {
                if *coef == 0.0 || *rate == 0.0 {
                    Monotone::Constant
                } else if *rate > 0.0 {
                    Monotone::NonIncreasing
                } else {
                    Monotone::NonDecreasing
                }
            }
            Kind::Indicator => Monotone::Constant,
            Kind::Steps { values, .. } => monotone_of_sequence(values),
            Kind::Tabulated { ys, .. } => monotone_of_sequence(ys),
            Kind::PowerLog {
                coef,
                exponent,
                log_power,
            } => {
                if *coef == 0.0 {
                    Monotone::Constant
                } else if *log_power == 0.0 {
                    RealFn::power(1.0, *exponent, self.domain)
                        .map(|f| f.monotone())
                        .unwrap_or(Monotone::Unknown)
                } else if *exponent < 0.0 && self.domain.lo >= (log_power / -exponent).exp() {
                    // x^a (ln x)^Δ decreases once ln x >= Δ / (-a)
                    Monotone::NonIncreasing
                } else {
                    Monotone::Unknown
                }
            }
            Kind::Sum(terms) => {
                let mut acc = Monotone::Constant;
                for (c, f) in terms {
                    let m = match (f.monotone(), *c >= 0.0) {
                        (Monotone::Constant, _) => Monotone::Constant,
                        (m, true) => m,
                        (Monotone::NonIncreasing, false) => Monotone::NonDecreasing,
                        (Monotone::NonDecreasing, false) => Monotone::NonIncreasing,
                        _ => Monotone::Unknown,
                    };
                    // supports differ: a term vanishing past its domain breaks monotonicity
                    let m = if f.domain != self.domain && (m != Monotone::Constant || f.domain.lo > self.domain.lo) {
                        Monotone::Unknown
                    } else if f.domain.hi < self.domain.hi && *c > 0.0 {
                        combine(Monotone::NonIncreasing, m)
                    } else if f.domain.hi < self.domain.hi && *c < 0.0 {
                        combine(Monotone::NonDecreasing, m)
                    } else {
                        m
                    };
                    acc = combine(acc, m);
                }
                acc
            }
            Kind::Product(fs) => {
                let mut acc = Monotone::Constant;
                for f in fs {
                    acc = combine(acc, f.monotone());
                }
                acc
            }
            Kind::Dilated { inner, .. } => inner.monotone(),
            Kind::Custom { monotone, .. } => *monotone,
        }
    }

    /// True when `x ↦ f(x)` is nonincreasing on all of `(0, ∞)`, zero extension
    /// included.
    pub fn is_nonincreasing_from_zero(&self) -> bool {
        self.domain.lo == 0.0 && matches!(self.monotone(), Monotone::NonIncreasing | Monotone::Constant)
    }

    /// `∫_0^x f(s) ds` when a closed form is available.
    pub fn primitive(&self, x: f64) -> Option<f64> {
        if x <= self.domain.lo {
            return Some(0.0);
        }
        let (lo, hi) = (self.domain.lo, x.min(self.domain.hi));
        match &*self.kind {
            Kind::Power { coef, exponent } => {
                if *coef == 0.0 {
                    Some(0.0)
                } else if *exponent == -1.0 {
                    if lo == 0.0 {
                        Some(f64::INFINITY)
                    } else {
                        Some(coef * (hi / lo).ln())
                    }
                } else {
                    let e = exponent + 1.0;
                    if lo == 0.0 && e < 0.0 {
                        Some(f64::INFINITY)
                    } else {
                        let lo_term = if lo == 0.0 { 0.0 } else { lo.powf(e) };
                        Some(coef * (hi.powf(e) - lo_term) / e)
                    }
                }
            }
            Kind::Exp { coef, rate } => {
                if *rate == 0.0 {
                    Some(coef * (hi - lo))
                } else {
                    Some(coef * ((-rate * lo).exp() - (-rate * hi).exp()) / rate)
                }
            }
            Kind::Indicator => Some(hi - lo),
            Kind::Steps { breaks, values } => {
                let mut acc = 0.0;
                for (i, v) in values.iter().enumerate() {
                    let (a, b) = (breaks[i], breaks[i + 1]);
                    if a >= hi {
                        break;
                    }
                    acc += v * (b.min(hi) - a);
                }
                Some(acc)
            }
            Kind::Sum(terms) => {
                let mut acc = 0.0;
                for (c, f) in terms {
                    acc += c * f.primitive(x)?;
                }
                Some(acc)
            }
            Kind::Dilated { scale, inner } if self.domain.lo == 0.0 => {
                inner.primitive(scale * hi).map(|v| v / scale)
            }
            _ => None,
        }
    }

    /// Power-law exponent near `0+` when it is known in closed form.
    pub fn head_exponent(&self) -> Option<f64> {
        if self.domain.lo > 0.0 {
            return None;
        }
        match &*self.kind {
            Kind::Power { exponent, .. } => Some(*exponent),
            Kind::Exp { .. } | Kind::Indicator => Some(0.0),
            Kind::Steps { .. } => Some(0.0),
            Kind::Dilated { inner, .. } => inner.head_exponent(),
            _ => None,
        }
    }

    pub(crate) fn dilated_parts(&self) -> Option<(f64, &RealFn)> {
        match &*self.kind {
            Kind::Dilated { scale, inner } => Some((*scale, inner)),
            _ => None,
        }
    }

    pub(crate) fn steps(&self) -> Option<(&[f64], &[f64])> {
        match &*self.kind {
            Kind::Steps { breaks, values } => Some((breaks, values)),
            _ => None,
        }
    }

    pub(crate) fn is_indicator(&self) -> bool {
        matches!(&*self.kind, Kind::Indicator)
    }
}

fn hull(domains: impl Iterator<Item = Interval>) -> Interval {
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for d in domains {
        lo = lo.min(d.lo);
        hi = hi.max(d.hi);
    }
    Interval { lo, hi }
}

fn monotone_of_sequence(v: &[f64]) -> Monotone {
    let dec = v.windows(2).all(|w| w[1] <= w[0]);
    let inc = v.windows(2).all(|w| w[1] >= w[0]);
    match (dec, inc) {
        (true, true) => Monotone::Constant,
        (true, false) => Monotone::NonIncreasing,
        (false, true) => Monotone::NonDecreasing,
        _ => Monotone::Unknown,
    }
}

fn combine(a: Monotone, b: Monotone) -> Monotone {
    use Monotone::*;
    match (a, b) {
        (Constant, m) | (m, Constant) => m,
        (NonIncreasing, NonIncreasing) => NonIncreasing,
        (NonDecreasing, NonDecreasing) => NonDecreasing,
        _ => Unknown,
    }
}

/// `x ↦ f(λx)`.
///
/// Dilating an already dilated function folds the scales, so
/// `dilate(dilate(f, λ), μ)` and `dilate(f, λμ)` evaluate `f` at the same
/// floating-point argument.
pub fn dilate(f: &RealFn, scale: f64) -> Result<RealFn> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::NonpositiveScale(scale));
    }
    if scale == 1.0 {
        return Ok(f.clone());
    }
    let (base, total) = match f.dilated_parts() {
        Some((inner_scale, inner)) => (inner.clone(), inner_scale * scale),
        None => (f.clone(), scale),
    };
    Ok(RealFn::from_kind(
        base.domain.scaled(1.0 / total),
        Kind::Dilated {
            scale: total,
            inner: base,
        },
    ))
}

/// Structured description of a function, as used in configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FnSpec {
    Power {
        #[serde(default = "one")]
        coef: f64,
        exponent: f64,
        #[serde(default = "half_line")]
        domain: Interval,
    },
    PowerLog {
        #[serde(default = "one")]
        coef: f64,
        exponent: f64,
        log_power: f64,
        #[serde(default = "half_line")]
        domain: Interval,
    },
    Exp {
        #[serde(default = "one")]
        coef: f64,
        rate: f64,
        #[serde(default = "half_line")]
        domain: Interval,
    },
    Indicator {
        lo: f64,
        hi: f64,
    },
    PiecewiseConstant {
        breaks: Vec<f64>,
        values: Vec<f64>,
    },
    Tabulated {
        xs: Vec<f64>,
        ys: Vec<f64>,
    },
    Sum {
        terms: Vec<(f64, FnSpec)>,
    },
    Product {
        factors: Vec<FnSpec>,
    },
    Dilate {
        scale: f64,
        inner: Box<FnSpec>,
    },
}

fn one() -> f64 {
    1.0
}

fn half_line() -> Interval {
    Interval::HALF_LINE
}

/// Build a [`RealFn`] from its structured description.
pub fn make_function(spec: &FnSpec) -> Result<RealFn> {
    match spec {
        FnSpec::Power {
            coef,
            exponent,
            domain,
        } => RealFn::power(*coef, *exponent, Interval::new(domain.lo, domain.hi)?),
        FnSpec::PowerLog {
            coef,
            exponent,
            log_power,
            domain,
        } => RealFn::power_log(
            *coef,
            *exponent,
            *log_power,
            Interval::new(domain.lo, domain.hi)?,
        ),
        FnSpec::Exp { coef, rate, domain } => {
            RealFn::exponential(*coef, *rate, Interval::new(domain.lo, domain.hi)?)
        }
        FnSpec::Indicator { lo, hi } => RealFn::indicator(*lo, *hi),
        FnSpec::PiecewiseConstant { breaks, values } => {
            RealFn::piecewise_constant(breaks.clone(), values.clone())
        }
        FnSpec::Tabulated { xs, ys } => RealFn::tabulated(xs.clone(), ys.clone()),
        FnSpec::Sum { terms } => RealFn::sum(
            terms
                .iter()
                .map(|(c, s)| Ok((*c, make_function(s)?)))
                .collect::<Result<_>>()?,
        ),
        FnSpec::Product { factors } => {
            RealFn::product(factors.iter().map(make_function).collect::<Result<_>>()?)
        }
        FnSpec::Dilate { scale, inner } => dilate(&make_function(inner)?, *scale),
    }
}

/// Parse a JSON function description and build it.
pub fn make_function_json(json: &str) -> Result<RealFn> {
    let value: serde_json::Value = serde_json::from_str(json)
        .map_err(|e| Error::InvalidParameter(format!("malformed function spec: {e}")))?;
    parse_fn_spec(&value).and_then(|s| make_function(&s))
}

/// Decode a JSON value into an [`FnSpec`], separating unknown forms from
/// malformed parameters.
pub fn parse_fn_spec(value: &serde_json::Value) -> Result<FnSpec> {
    const KNOWN: [&str; 9] = [
        "power",
        "power-log",
        "exp",
        "indicator",
        "piecewise-constant",
        "tabulated",
        "sum",
        "product",
        "dilate",
    ];
    let form = value
        .get("form")
        .and_then(|f| f.as_str())
        .ok_or_else(|| Error::InvalidParameter("function spec needs a string `form`".into()))?;
    if !KNOWN.contains(&form) {
        return Err(Error::UnknownForm(form.to_string()));
    }
    serde_json::from_value(value.clone()).map_err(|e| Error::InvalidParameter(e.to_string()))
}
