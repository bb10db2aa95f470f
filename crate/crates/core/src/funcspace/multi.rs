use std::fmt;
use std::sync::Arc;

use super::function::{dilate, Interval, RealFn};
use crate::error::{Error, Result};

type VectorEval = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
enum MultiKind {
    Tensor(Vec<RealFn>),
    Custom {
        eval: VectorEval,
        domains: Vec<Interval>,
        breaks: Vec<Vec<f64>>,
    },
}

/// Nonnegative function on a box in the positive octant.
#[derive(Clone)]
pub struct MultiFn {
    kind: Arc<MultiKind>,
}

impl fmt::Debug for MultiFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.kind {
            MultiKind::Tensor(c) => f.debug_tuple("MultiFn::Tensor").field(c).finish(),
            MultiKind::Custom { domains, .. } => {
                f.debug_struct("MultiFn::Custom").field("domains", domains).finish()
            }
        }
    }
}

/// `(x_1, …, x_d) ↦ ∏ f_j(x_j)`.
pub fn tensor_product(components: Vec<RealFn>) -> Result<MultiFn> {
    if components.is_empty() {
        return Err(Error::EmptyComponentList);
    }
    Ok(MultiFn {
        kind: Arc::new(MultiKind::Tensor(components)),
    })
}

impl MultiFn {
    /// Non-factorized function given by a closure. `breaks[j]` lists kinks
    /// along axis `j`.
    pub fn custom<F>(eval: F, domains: Vec<Interval>, breaks: Vec<Vec<f64>>) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        if domains.is_empty() {
            return Err(Error::EmptyComponentList);
        }
        if breaks.len() != domains.len() {
            return Err(Error::DimensionMismatch {
                expected: domains.len(),
                got: breaks.len(),
            });
        }
        Ok(MultiFn {
            kind: Arc::new(MultiKind::Custom {
                eval: Arc::new(eval),
                domains,
                breaks,
            }),
        })
    }

    pub fn dim(&self) -> usize {
        match &*self.kind {
            MultiKind::Tensor(c) => c.len(),
            MultiKind::Custom { domains, .. } => domains.len(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match &*self.kind {
            MultiKind::Tensor(c) => {
                let mut acc = 1.0;
                for (f, &xi) in c.iter().zip(x) {
                    let v = f.eval(xi);
                    if v == 0.0 {
                        return 0.0;
                    }
                    acc *= v;
                }
                acc
            }
            MultiKind::Custom { eval, domains, .. } => {
                if domains.iter().zip(x).all(|(d, &xi)| d.contains(xi)) {
                    eval(x)
                } else {
                    0.0
                }
            }
        }
    }

    /// Factors when the function was built as a tensor product.
    pub fn components(&self) -> Option<&[RealFn]> {
        match &*self.kind {
            MultiKind::Tensor(c) => Some(c),
            MultiKind::Custom { .. } => None,
        }
    }

    pub fn axis_domain(&self, j: usize) -> Interval {
        match &*self.kind {
            MultiKind::Tensor(c) => c[j].domain(),
            MultiKind::Custom { domains, .. } => domains[j],
        }
    }

    pub fn axis_breaks(&self, j: usize) -> Vec<f64> {
        match &*self.kind {
            MultiKind::Tensor(c) => c[j].breakpoints(),
            MultiKind::Custom { breaks, domains, .. } => {
                let mut b = breaks[j].clone();
                b.push(domains[j].lo);
                b.push(domains[j].hi);
                b.retain(|x| x.is_finite() && *x > 0.0);
                b
            }
        }
    }

    /// `x ↦ f(λx)`.
    pub fn dilate(&self, scale: f64) -> Result<MultiFn> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::NonpositiveScale(scale));
        }
        match &*self.kind {
            MultiKind::Tensor(c) => {
                tensor_product(c.iter().map(|f| dilate(f, scale)).collect::<Result<_>>()?)
            }
            MultiKind::Custom {
                eval,
                domains,
                breaks,
            } => {
                let inner = eval.clone();
                let domains = domains
                    .iter()
                    .map(|d| Interval {
                        lo: d.lo / scale,
                        hi: d.hi / scale,
                    })
                    .collect();
                let breaks = breaks
                    .iter()
                    .map(|b| b.iter().map(|x| x / scale).collect())
                    .collect();
                MultiFn::custom(
                    move |x: &[f64]| {
                        let y: Vec<f64> = x.iter().map(|v| v * scale).collect();
                        inner(&y)
                    },
                    domains,
                    breaks,
                )
            }
        }
    }

    /// Replace axis `j` by `g` when factorized; otherwise wrap.
    pub(crate) fn map_axis(&self, j: usize, g: RealFn) -> Option<MultiFn> {
        let c = self.components()?;
        let mut c = c.to_vec();
        c[j] = g;
        tensor_product(c).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> Interval {
        Interval::HALF_LINE
    }

    #[test]
    fn tensor_examples() {
        let one = RealFn::constant(1.0, half()).unwrap();
        assert_eq!(tensor_product(vec![one.clone(), one]).unwrap().eval(&[3.0, 7.0]), 1.0);
        let e = RealFn::exponential(1.0, 1.0, half()).unwrap();
        let t = tensor_product(vec![e.clone(), e]).unwrap();
        assert!((t.eval(&[1.0, 1.0]) - (-2.0f64).exp()).abs() < 1e-15);
        let x = RealFn::power(1.0, 1.0, half()).unwrap();
        let x2 = RealFn::power(1.0, 2.0, half()).unwrap();
        assert_eq!(tensor_product(vec![x, x2]).unwrap().eval(&[2.0, 3.0]), 18.0);
        assert_eq!(tensor_product(vec![]).unwrap_err(), Error::EmptyComponentList);
    }

    #[test]
    fn custom_dilation() {
        let f = MultiFn::custom(|x| x[0] * x[1], vec![half(), half()], vec![vec![], vec![]]).unwrap();
        assert_eq!(f.dilate(2.0).unwrap().eval(&[1.0, 3.0]), 12.0);
    }
}
