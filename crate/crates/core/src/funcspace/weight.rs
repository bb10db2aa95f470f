use serde::{Deserialize, Serialize};

use super::function::Interval;
use crate::error::{Error, Result};

/// Slowly varying factor multiplying a power weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SlowPart {
    #[default]
    None,
    /// `(1 + |ln x|)^power`
    LogPower { power: f64 },
    /// `(1 + ln(1 + x))^power`
    Log1p { power: f64 },
    /// Linear in `ln x` between nodes, constant beyond them.
    Tabulated { xs: Vec<f64>, ys: Vec<f64> },
}

impl SlowPart {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            SlowPart::None => 1.0,
            SlowPart::LogPower { power } => (1.0 + x.ln().abs()).powf(*power),
            SlowPart::Log1p { power } => (1.0 + x.ln_1p()).powf(*power),
            SlowPart::Tabulated { xs, ys } => {
                if x <= xs[0] {
                    return ys[0];
                }
                let i = xs.partition_point(|&b| b <= x);
                if i >= xs.len() {
                    return *ys.last().unwrap();
                }
                let t = (x / xs[i - 1]).ln() / (xs[i] / xs[i - 1]).ln();
                ys[i - 1] + t * (ys[i] - ys[i - 1])
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            SlowPart::None => Ok(()),
            SlowPart::LogPower { power } | SlowPart::Log1p { power } if power.is_finite() => Ok(()),
            SlowPart::Tabulated { xs, ys }
                if xs.len() == ys.len()
                    && !xs.is_empty()
                    && xs[0] > 0.0
                    && xs.windows(2).all(|w| w[1] > w[0])
                    && ys.iter().all(|y| *y > 0.0 && y.is_finite()) =>
            {
                Ok(())
            }
            other => Err(Error::InvalidParameter(format!("bad slow part {other:?}"))),
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        match self {
            SlowPart::None | SlowPart::Log1p { .. } => vec![],
            SlowPart::LogPower { .. } => vec![1.0],
            SlowPart::Tabulated { xs, .. } => xs.clone(),
        }
    }
}

/// Weight `scale · x^exponent · L(x)` on `support`, zero elsewhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSpec {
    #[serde(default = "one")]
    pub scale: f64,
    #[serde(default)]
    pub exponent: f64,
    #[serde(default)]
    pub slow: SlowPart,
    #[serde(default = "half_line")]
    pub support: Interval,
}

fn one() -> f64 {
    1.0
}

fn half_line() -> Interval {
    Interval::HALF_LINE
}

impl WeightSpec {
    pub fn power(scale: f64, exponent: f64) -> Result<Self> {
        let w = WeightSpec {
            scale,
            exponent,
            slow: SlowPart::None,
            support: Interval::HALF_LINE,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn unit() -> Self {
        WeightSpec::power(1.0, 0.0).expect("unit weight")
    }

    pub fn with_slow(mut self, slow: SlowPart) -> Result<Self> {
        self.slow = slow;
        self.validate()?;
        Ok(self)
    }

    pub fn with_support(mut self, support: Interval) -> Result<Self> {
        self.support = Interval::new(support.lo, support.hi)?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale >= 0.0 && self.scale.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "weight scale must be finite and nonnegative, got {}",
                self.scale
            )));
        }
        if !self.exponent.is_finite() {
            return Err(Error::InvalidParameter("weight exponent must be finite".into()));
        }
        self.slow.validate()
    }

    pub fn eval(&self, x: f64) -> f64 {
        if !self.support.contains(x) || self.scale == 0.0 {
            return 0.0;
        }
        let base = if self.exponent == 0.0 {
            self.scale
        } else {
            self.scale * x.powf(self.exponent)
        };
        base * self.slow.eval(x)
    }

    /// `ln w(x)`, finite where `w(x)` itself would overflow; `-inf` off the support.
    pub fn ln_eval(&self, x: f64) -> f64 {
        if !self.support.contains(x) || self.scale == 0.0 {
            return f64::NEG_INFINITY;
        }
        let power = if self.exponent == 0.0 { 0.0 } else { self.exponent * x.ln() };
        self.scale.ln() + power + self.slow.eval(x).ln()
    }

    /// Homogeneity degree when the weight is a pure power on the half-line.
    pub fn homogeneity(&self) -> Option<f64> {
        self.is_pure_power().then_some(self.exponent)
    }

    pub fn is_pure_power(&self) -> bool {
        self.slow == SlowPart::None && self.support == Interval::HALF_LINE
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b = self.slow.breakpoints();
        b.push(self.support.lo);
        b.push(self.support.hi);
        b.retain(|x| x.is_finite() && *x > 0.0);
        b
    }

    /// `∫_0^x w` in closed form for pure powers.
    pub fn cumulative_closed_form(&self, x: f64) -> Option<f64> {
        if !self.is_pure_power() {
            return None;
        }
        let e = self.exponent + 1.0;
        Some(if e <= 0.0 {
            f64::INFINITY
        } else {
            self.scale * x.powf(e) / e
        })
    }

    /// Check membership in the class of continuous, strictly increasing
    /// weights with `w(0+) = 0` and `w(∞) = ∞`.
    ///
    /// Strict increase is tested on a 256-point log grid over `[1e-8, 1e8]`.
    pub fn validate_class_w(&self) -> Result<()> {
        self.validate()?;
        if self.scale <= 0.0 {
            return Err(Error::InvalidWeight("scale must be positive".into()));
        }
        if self.exponent <= 0.0 {
            return Err(Error::InvalidWeight(
                "exponent must be positive so that w(0+) = 0 and w(∞) = ∞".into(),
            ));
        }
        if self.support != Interval::HALF_LINE {
            return Err(Error::InvalidWeight("weight must live on the whole half-line".into()));
        }
        let n = 256;
        let mut prev = 0.0;
        for i in 0..n {
            let x = (-8.0 * std::f64::consts::LN_10
                + 16.0 * std::f64::consts::LN_10 * i as f64 / (n - 1) as f64)
                .exp();
            let v = self.eval(x);
            if !(v > prev) || !v.is_finite() {
                return Err(Error::InvalidWeight(format!("not strictly increasing near x = {x:e}")));
            }
            prev = v;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_power_homogeneity_is_exact() {
        let w = WeightSpec::power(1.0, 0.5).unwrap();
        for &(l, x) in &[(4.0, 9.0), (0.25, 16.0), (2.0, 0.125)] {
            let (lhs, rhs) = (w.eval(l * x), l.powf(0.5) * w.eval(x));
            assert!((lhs - rhs).abs() <= 4.0 * f64::EPSILON * rhs, "{lhs} vs {rhs}");
        }
        assert_eq!(w.homogeneity(), Some(0.5));
    }

    #[test]
    fn class_w_validation() {
        assert!(WeightSpec::power(1.0, 0.5).unwrap().validate_class_w().is_ok());
        assert!(matches!(
            WeightSpec::power(1.0, 0.0).unwrap().validate_class_w(),
            Err(Error::InvalidWeight(_))
        ));
        assert!(matches!(
            WeightSpec::power(1.0, -1.0).unwrap().validate_class_w(),
            Err(Error::InvalidWeight(_))
        ));
        let slow = WeightSpec::power(1.0, 0.5)
            .unwrap()
            .with_slow(SlowPart::Log1p { power: 1.0 })
            .unwrap();
        assert!(slow.validate_class_w().is_ok());
    }

    #[test]
    fn support_zeroes_weight() {
        let u = WeightSpec::unit()
            .with_support(Interval::new(0.0, 1.0).unwrap())
            .unwrap();
        assert_eq!(u.eval(0.5), 1.0);
        assert_eq!(u.eval(1.5), 0.0);
    }

    #[test]
    fn weight_json_defaults() {
        let w: WeightSpec = serde_json::from_str(r#"{"exponent": 0.5}"#).unwrap();
        assert_eq!(w, WeightSpec::power(1.0, 0.5).unwrap());
    }
}
