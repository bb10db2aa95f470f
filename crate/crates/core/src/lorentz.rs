//! Equivalence of the two Lorentz-type quasinorms `‖f*‖_V` and `‖f**‖_V`,
//! the family showing the lower bound is attained, and fundamental functions.

use serde::{Deserialize, Serialize};

use crate::constants::bradley_b;
use crate::error::{Error, Result};
use crate::funcspace::{Interval, QuadratureConfig, RealFn, WeightSpec};
use crate::norms::{y_quasinorms, Space};
use crate::rearrange::MeasureSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    /// `‖f*‖_V`
    pub ystar: f64,
    /// `‖f**‖_V`
    pub y: f64,
    pub ratio: f64,
    pub k_upper: f64,
    /// `1 - slack <= ratio <= K(1 + slack)`.
    pub within_sandwich: bool,
}

/// Compute both quasinorms of `f` and test `‖f*‖ <= ‖f**‖ <= K ‖f*‖` up to a
/// relative `slack`.
pub fn verify_equivalence(
    f: &RealFn,
    space: &Space,
    mu: &MeasureSpec,
    k_upper: f64,
    slack: f64,
    quad: &QuadratureConfig,
) -> Result<EquivalenceReport> {
    let (a, b) = y_quasinorms(f, space, mu, quad)?;
    if !(a.value > 0.0 && a.value.is_finite()) {
        return Err(Error::ZeroNorm);
    }
    let ratio = b.value / a.value;
    Ok(EquivalenceReport {
        ystar: a.value,
        y: b.value,
        ratio,
        k_upper,
        within_sandwich: ratio >= 1.0 - slack && ratio <= k_upper * (1.0 + slack),
    })
}

/// Upper constant for `V = L_p(x^{βp})`: the upper end of the bracket of the
/// Hardy inequality with weights `x^{β-1}`, `x^β`.
pub fn power_weight_k_upper(beta: f64, p: f64, quad: &QuadratureConfig) -> Result<f64> {
    let u = WeightSpec::power(1.0, beta - 1.0)?;
    let v = WeightSpec::power(1.0, beta)?;
    let b = bradley_b(&u, &v, p, quad)?;
    Ok(b.bracket.map(|(_, hi)| hi).unwrap_or(f64::INFINITY))
}

/// `f* = 1 - t^κ` on `(0, 1)` and its closed-form average
/// `f** = 1 - t^κ/(κ + 1)`; the ratio of their norms tends to 1 as `κ → 0`.
pub fn exactness_family(kappa: f64) -> Result<(RealFn, RealFn)> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::NonpositiveKappa(kappa));
    }
    let unit = Interval::new(0.0, 1.0)?;
    let ind = RealFn::indicator(0.0, 1.0)?;
    let tk = RealFn::power(1.0, kappa, unit)?;
    let fstar = RealFn::sum(vec![(1.0, ind.clone()), (-1.0, tk.clone())])?;
    let fss = RealFn::sum(vec![(1.0, ind), (-1.0 / (kappa + 1.0), tk)])?;
    Ok((fstar, fss))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FundamentalReport {
    /// `‖1_{(0,δ)}‖_V`
    pub phi_ystar: f64,
    /// `‖1_{(0,δ)} + (δ/t) 1_{[δ,μX)}‖_V`
    pub phi_y: f64,
    /// `φ* + ‖(δ/t) 1_{[δ,μX)}‖_V`
    pub additive_corrected: f64,
    /// `φ* + ‖t⁻¹ 1_{[δ,μX)}‖_V`, the printed additive formula.
    pub additive_printed: f64,
}

/// Fundamental functions of `Y` and `Y*` at `δ` for a base space on
/// `(0, total_mass)`.
pub fn fundamental_functions(
    delta: f64,
    space: &Space,
    total_mass: f64,
    quad: &QuadratureConfig,
) -> Result<FundamentalReport> {
    if !(delta > 0.0 && delta < total_mass) {
        return Err(Error::DeltaOutOfRange { delta, total_mass });
    }
    let gstar = RealFn::indicator(0.0, delta)?;
    let tail_dom = Interval::new(delta, total_mass)?;
    let tail = RealFn::power(delta, -1.0, tail_dom)?;
    let printed_tail = RealFn::power(1.0, -1.0, tail_dom)?;
    let gss = RealFn::sum(vec![(1.0, gstar.clone()), (1.0, tail.clone())])?;
    let phi_ystar = space.norm(&gstar, total_mass, quad)?.value;
    Ok(FundamentalReport {
        phi_ystar,
        phi_y: space.norm(&gss, total_mass, quad)?.value,
        additive_corrected: phi_ystar + space.norm(&tail, total_mass, quad)?.value,
        additive_printed: phi_ystar + space.norm(&printed_tail, total_mass, quad)?.value,
    })
}
