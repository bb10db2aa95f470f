//! Supremum search: coarse grid scan followed by golden-section refinement
//! around the best grid points.
//!
//! Functions here are not assumed unimodal. Every local refinement is started
//! from one of the `refine_top` best grid nodes and the overall maximum of all
//! probes is returned. Declared breakpoints are probed from both sides so that
//! suprema approached at a jump of a step function are found to rounding
//! accuracy.

use serde::{Deserialize, Serialize};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SupConfig {
    pub grid_points: usize,
    pub refine_top: usize,
    /// Bracket width at which golden-section stops, in search coordinates.
    pub xtol: f64,
}

impl Default for SupConfig {
    fn default() -> Self {
        SupConfig {
            grid_points: 512,
            refine_top: 5,
            xtol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupResult {
    pub value: f64,
    pub argmax: f64,
}

impl SupResult {
    fn empty() -> Self {
        SupResult {
            value: f64::NEG_INFINITY,
            argmax: f64::NAN,
        }
    }

    fn offer(&mut self, x: f64, v: f64) {
        if v.is_nan() {
            if !self.value.is_nan() {
                self.value = f64::NAN;
                self.argmax = x;
            }
            return;
        }
        if self.value.is_nan() {
            return;
        }
        if v > self.value {
            self.value = v;
            self.argmax = x;
        }
    }
}

/// Maximise `f` on `[a, b]` by golden-section search. Returns `(x, f(x))`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, xtol: f64) -> (f64, f64) {
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iter = 0;
    while hi - lo > xtol && iter < 200 {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
        iter += 1;
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Grid scan on `nodes` (search coordinates) plus refinement; `to_x` maps a
/// search coordinate back to the function argument.
fn scan_and_refine<F, M>(f: &F, nodes: &[f64], to_x: M, cfg: &SupConfig) -> SupResult
where
    F: Fn(f64) -> f64,
    M: Fn(f64) -> f64,
{
    let mut best = SupResult::empty();
    let values: Vec<f64> = nodes.iter().map(|&u| f(to_x(u))).collect();
    for (&u, &v) in nodes.iter().zip(&values) {
        best.offer(to_x(u), v);
        if v == f64::INFINITY {
            return best;
        }
    }
    if best.value.is_nan() || nodes.len() < 3 {
        return best;
    }
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(i.cmp(&j)));
    for &i in order.iter().take(cfg.refine_top) {
        let a = nodes[i.saturating_sub(1)];
        let b = nodes[(i + 1).min(nodes.len() - 1)];
        let (u, v) = golden_max(|u| f(to_x(u)), a, b, cfg.xtol);
        best.offer(to_x(u), v);
    }
    best
}

/// Supremum of `f` over `[lo, hi] ⊂ (0, ∞)` using a log-spaced grid.
pub fn sup_log_grid<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    cfg: &SupConfig,
) -> SupResult {
    assert!(lo > 0.0 && hi >= lo, "log-grid search needs 0 < lo <= hi");
    let (ulo, uhi) = (lo.ln(), hi.ln());
    let n = cfg.grid_points.max(2);
    let nodes: Vec<f64> = (0..n)
        .map(|i| ulo + (uhi - ulo) * i as f64 / (n - 1) as f64)
        .collect();
    let mut best = scan_and_refine(&f, &nodes, f64::exp, cfg);
    for x in [lo, hi] {
        best.offer(x, f(x));
    }
    for &b in breaks {
        if b >= lo && b <= hi && b.is_finite() {
            for x in [b * (1.0 - 1e-14), b, b * (1.0 + 1e-14)] {
                if x >= lo && x <= hi {
                    best.offer(x, f(x));
                }
            }
        }
    }
    best
}

/// Supremum of `f` over `[lo, hi]` on a uniform grid of spacing `step`,
/// refined to `xtol`.
pub fn sup_linear_grid<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    step: f64,
    xtol: f64,
    refine_top: usize,
) -> SupResult {
    let n = (((hi - lo) / step).ceil() as usize).max(1) + 1;
    let nodes: Vec<f64> = (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect();
    let cfg = SupConfig {
        grid_points: n,
        refine_top,
        xtol,
    };
    scan_and_refine(&f, &nodes, |u| u, &cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_top() {
        let (x, v) = golden_max(|x| -(x - 0.3) * (x - 0.3) + 2.0, -1.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn log_grid_handles_step_left_limit() {
        // sup_{t<0.25} t^{1/2} approached from the left of the jump
        let f = |t: f64| if t < 0.25 { t.sqrt() } else { 0.0 };
        let r = sup_log_grid(f, 1e-8, 1.0, &[0.25], &SupConfig::default());
        assert!((r.value - 0.5).abs() < 1e-12, "{}", r.value);
    }

    #[test]
    fn log_grid_two_bumps() {
        let f = |t: f64| {
            let u = t.ln();
            (-(u - 3.0).powi(2)).exp() + 1.2 * (-(u + 5.0).powi(2)).exp()
        };
        let r = sup_log_grid(f, 1e-8, 1e8, &[], &SupConfig::default());
        assert!((r.argmax.ln() + 5.0).abs() < 1e-4);
        assert!((r.value - 1.2).abs() < 1e-8);
    }

    #[test]
    fn linear_grid_interior_max() {
        let r = sup_linear_grid(|p| -(p - 2.345_678).powi(2), 1.0, 4.0, 1e-2, 1e-4, 5);
        assert!((r.argmax - 2.345_678).abs() < 1e-4);
    }

    #[test]
    fn infinity_short_circuits() {
        let r = sup_log_grid(|t| if t > 1.0 { f64::INFINITY } else { t }, 1e-3, 1e3, &[], &SupConfig::default());
        assert!(r.value.is_infinite());
    }
}
