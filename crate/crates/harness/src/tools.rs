//! One-shot computations for the `rearrange`, `norm` and `constant`
//! subcommands. Each returns a report whose measurements hold the results.

use serde::Deserialize;
use serde_json::{Map, Value};

use hardyspace::constants::{bradley_bpq, gamma_w, k0_family, muckenhoupt_d, validate_exponents};
use hardyspace::norms::{lp_norm, marcinkiewicz_norm, tail_quasinorm};
use hardyspace::rearrange::{decreasing_rearrangement, double_star, tail_function, MeasureSpec};
use hardyspace::{QuadratureConfig, WeightSpec};

use crate::config::{default_quad, Params, QuadOverrides};
use crate::error::{HarnessError, Result};
use crate::report::CheckReport;

/// Input file of the one-shot subcommands.
///
/// ```json
/// { "params": { "f": { "form": "exp", "rate": 1 }, "t": [0.5, 1, 2] } }
/// ```
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToolInput {
    #[serde(default)]
    pub params: Map<String, Value>,
    #[serde(default)]
    pub quad: QuadOverrides,
}

impl ToolInput {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| HarnessError::ConfigParse(e.to_string()))
    }

    pub fn quad_config(&self) -> Result<QuadratureConfig> {
        let q = self.quad.apply(default_quad());
        q.validate()?;
        Ok(q)
    }
}

fn required<T>(v: Option<T>, key: &str) -> Result<T> {
    v.ok_or_else(|| HarnessError::Param {
        key: key.to_string(),
        detail: "missing".into(),
    })
}

fn measure_of(params: &Params) -> Result<MeasureSpec> {
    match params.0.get("measure") {
        None => Ok(MeasureSpec::HalfLine),
        Some(v) => serde_json::from_value(v.clone()).map_err(|e| HarnessError::Param {
            key: "measure".into(),
            detail: e.to_string(),
        }),
    }
}

/// `f*(t)` and `f**(t)` on the requested points.
pub fn rearrange(input: &ToolInput) -> Result<CheckReport> {
    let params = Params(&input.params);
    let quad = input.quad_config()?;
    let f = required(params.function("f")?, "f")?;
    let mu = measure_of(&params)?;
    let ts = params.vec_or("t", &[0.1, 0.5, 1.0, 2.0])?;
    let fstar = decreasing_rearrangement(&tail_function(&f, &mu, &quad)?);
    let mut r = CheckReport::new("rearrange");
    for &t in &ts {
        r.measure(format!("f*({t})"), fstar.eval(t));
        r.measure(format!("f**({t})"), double_star(&fstar, t, &quad)?);
    }
    r.value = fstar.eval(ts[0]);
    r.tolerance = quad.rel_tol;
    Ok(r)
}

/// `‖f‖_p` with an optional weight, plus the tail and Marcinkiewicz
/// quasinorms when a class-W weight `w` is given.
pub fn norm(input: &ToolInput) -> Result<CheckReport> {
    let params = Params(&input.params);
    let quad = input.quad_config()?;
    let f = required(params.function("f")?, "f")?;
    let p = params.f64_or("p", 2.0)?;
    let weight = params.weight("weight")?;
    let mut r = CheckReport::new("norm");
    r.value = lp_norm(&f, p, weight.as_ref(), &quad)?.value;
    r.measure(format!("L_{p}"), r.value);
    if let Some(w) = params.weight("w")? {
        let mu = measure_of(&params)?;
        r.measure("tail quasinorm", tail_quasinorm(&f, &w, &mu, &quad)?.value);
        r.measure("marcinkiewicz norm", marcinkiewicz_norm(&f, &w, &mu, &quad)?.value);
    }
    r.tolerance = quad.rel_tol;
    Ok(r)
}

/// `kind` is one of `gamma` (weight `w`), `bradley` (weights `u`, `v`,
/// exponents `p`, `q`), `muckenhoupt` (`w`, `p`) or `k0` (`alpha`, `beta`, `p`).
pub fn constant(input: &ToolInput) -> Result<CheckReport> {
    let params = Params(&input.params);
    let quad = input.quad_config()?;
    let kind = input.params.get("kind").and_then(Value::as_str).unwrap_or("gamma");
    let mut r = CheckReport::new(kind);
    r.tolerance = quad.rel_tol;
    match kind {
        "gamma" => {
            let w = required(params.weight("w")?, "w")?;
            r.value = gamma_w(&w, &quad)?.value;
        }
        "bradley" => {
            let u = required(params.weight("u")?, "u")?;
            let v = params.weight("v")?.unwrap_or_else(WeightSpec::unit);
            let p = params.f64_or("p", 2.0)?;
            let b = bradley_bpq(&u, &v, p, params.f64_or("q", p)?, &quad)?;
            r.value = b.value;
            if let Some((lo, hi)) = b.bracket {
                r.measure("bracket lower", lo);
                r.measure("bracket upper", hi);
            }
        }
        "muckenhoupt" => {
            let w = params.weight("w")?.unwrap_or_else(WeightSpec::unit);
            r.value = muckenhoupt_d(&w, params.f64_or("p", 2.0)?, &quad)?.value;
        }
        "k0" => {
            let eq = validate_exponents(
                params.f64_or("alpha", 0.5)?,
                params.f64_or("beta", 0.0)?,
                params.f64_or("p", 4.0 / 3.0)?,
            )?;
            let k = k0_family(&eq)?;
            r.value = k.form1;
            r.measure("q", eq.q);
            r.measure("form1", k.form1);
            r.measure("form2", k.form2);
            r.measure("K+", k.k_plus);
            r.measure("printed lower bound", k.lower_bound);
        }
        other => {
            return Err(HarnessError::Param {
                key: "kind".into(),
                detail: format!("unknown constant `{other}`"),
            })
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rearrange_exponential() {
        let input = ToolInput::from_json(r#"{"params": {"f": {"form": "exp", "rate": 1}, "t": [1]}}"#).unwrap();
        let r = rearrange(&input).unwrap();
        assert!((r.get("f*(1)").unwrap() - (-1f64).exp()).abs() < 1e-12);
        assert!((r.get("f**(1)").unwrap() - (1.0 - (-1f64).exp())).abs() < 1e-9);
    }

    #[test]
    fn gamma_of_square_root() {
        let input = ToolInput::from_json(r#"{"params": {"kind": "gamma", "w": {"exponent": 0.5}}}"#).unwrap();
        assert!((constant(&input).unwrap().value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn missing_function_is_reported() {
        let input = ToolInput::from_json(r#"{"params": {"p": 2}}"#).unwrap();
        assert!(matches!(norm(&input), Err(HarnessError::Param { .. })));
    }
}
