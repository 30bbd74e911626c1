//! Numerical integration: adaptive 8-point Gauss-Legendre panels and a
//! cumulative composite Simpson rule on uniform grids.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Positive nodes of the 8-point Gauss-Legendre rule on `[-1, 1]`.
const GL8_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];

const GL8_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Panel budget for [`integrate`].
pub const DEFAULT_MAX_PANELS: usize = 20_000;

fn gl8<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in GL8_NODES.iter().zip(GL8_WEIGHTS) {
        acc += w * (f(mid - half * x) + f(mid + half * x));
    }
    acc * half
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    /// Sum of the rule over both halves.
    fine: f64,
    /// `|fine - coarse|`.
    err: f64,
}

impl Panel {
    fn new<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Self {
        let mid = 0.5 * (a + b);
        let coarse = gl8(f, a, b);
        let fine = gl8(f, a, mid) + gl8(f, mid, b);
        Self {
            a,
            b,
            fine,
            err: (fine - coarse).abs(),
        }
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    /// Final panels `(a, b)`, sorted left to right.
    pub panels: Vec<(f64, f64)>,
}

/// Nodes and weights that reproduce a finished adaptive integration.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub panel_count: usize,
    pub error_estimate: f64,
}

impl QuadratureResult {
    /// Expands the final panels into explicit nodes and weights (each panel
    /// contributes its two half-panel rules).
    pub fn grid(&self) -> QuadratureGrid {
        let mut nodes = Vec::with_capacity(self.panels.len() * 16);
        let mut weights = Vec::with_capacity(self.panels.len() * 16);
        for &(a, b) in &self.panels {
            let mid = 0.5 * (a + b);
            for (lo, hi) in [(a, mid), (mid, b)] {
                let c = 0.5 * (lo + hi);
                let h = 0.5 * (hi - lo);
                for (x, w) in GL8_NODES.iter().zip(GL8_WEIGHTS) {
                    nodes.push(c - h * x);
                    weights.push(w * h);
                    nodes.push(c + h * x);
                    weights.push(w * h);
                }
            }
        }
        QuadratureGrid {
            nodes,
            weights,
            panel_count: self.panels.len(),
            error_estimate: self.error_estimate,
        }
    }
}

/// `∫_a^b f` to relative tolerance `rel_tol`.
///
/// Panels are bisected, largest estimated error first, until the summed
/// error estimate drops below `rel_tol * |value|`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<QuadratureResult> {
    integrate_with_budget(f, a, b, rel_tol, DEFAULT_MAX_PANELS)
}

pub fn integrate_with_budget<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<QuadratureResult> {
    if a == b {
        return Ok(QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            panels: Vec::new(),
        });
    }
    let mut heap = BinaryHeap::new();
    heap.push(Panel::new(&f, a, b));
    loop {
        let value: f64 = heap.iter().map(|p| p.fine).sum();
        let err: f64 = heap.iter().map(|p| p.err).sum();
        if !value.is_finite() || !err.is_finite() {
            return Err(Error::QuadratureFailure {
                estimate: value,
                error: err,
                panels: heap.len(),
            });
        }
        if err <= rel_tol * value.abs() || err <= f64::MIN_POSITIVE {
            let mut panels: Vec<(f64, f64)> = heap.iter().map(|p| (p.a, p.b)).collect();
            panels.sort_by(|x, y| x.0.total_cmp(&y.0));
            return Ok(QuadratureResult {
                value,
                error_estimate: err,
                panels,
            });
        }
        if heap.len() >= max_panels {
            return Err(Error::QuadratureFailure {
                estimate: value,
                error: err,
                panels: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel cannot be split further in floating point.
            return Err(Error::QuadratureFailure {
                estimate: value,
                error: err,
                panels: heap.len() + 1,
            });
        }
        heap.push(Panel::new(&f, worst.a, mid));
        heap.push(Panel::new(&f, mid, worst.b));
    }
}

/// Cumulative integrals `I_i = ∫_{x_0}^{x_i} f` on a uniform grid of
/// spacing `h`, from samples `values[i] = f(x_i)`.
///
/// Even nodes use composite Simpson; odd nodes add a three-point quadratic
/// rule over the last interval. Requires at least three samples.
pub fn cumulative_simpson(values: &[f64], h: f64) -> Vec<f64> {
    let len = values.len();
    assert!(len >= 3, "cumulative Simpson needs at least three samples");
    let mut out = vec![0.0; len];
    let mut even_acc = 0.0;
    for i in 1..len {
        if i % 2 == 0 {
            even_acc += h / 3.0 * (values[i - 2] + 4.0 * values[i - 1] + values[i]);
            out[i] = even_acc;
        } else {
            let tail = if i + 1 < len {
                h / 12.0 * (5.0 * values[i - 1] + 8.0 * values[i] - values[i + 1])
            } else {
                h / 12.0 * (-values[i - 2] + 8.0 * values[i - 1] + 5.0 * values[i])
            };
            out[i] = even_acc + tail;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        let total: f64 = GL8_WEIGHTS.iter().sum::<f64>() * 2.0;
        assert!((total - 2.0).abs() < 1e-15);
    }

    #[test]
    fn exact_for_degree_fifteen() {
        let v = gl8(&|x: f64| x.powi(15) + x.powi(14), 0.0, 1.0);
        assert!((v - (1.0 / 16.0 + 1.0 / 15.0)).abs() < 1e-15);
    }

    #[test]
    fn adaptive_exponential() {
        let r = integrate(|x: f64| (-3.0 * x).exp(), 0.0, 2.0, 1e-12).unwrap();
        let exact = (1.0 - (-6.0f64).exp()) / 3.0;
        assert!((r.value - exact).abs() < 1e-13);
    }

    #[test]
    fn near_singular_integrand_refines_locally() {
        // ∫_0^{1-1e-6} (1-t)^{-3} dt = ((1e-6)^{-2} - 1)/2
        let cap = 1.0 - 1e-6;
        let r = integrate(|t: f64| (1.0 - t).powi(-3), 0.0, cap, 1e-10).unwrap();
        let exact = ((1.0 - cap).powi(-2) - 1.0) / 2.0;
        assert!(((r.value - exact) / exact).abs() < 1e-9);
        assert!(r.panels.len() < 2000);
    }

    #[test]
    fn empty_interval() {
        let r = integrate(|x: f64| x, 0.3, 0.3, 1e-10).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let r = integrate_with_budget(|x: f64| (50.0 * x).sin().abs(), 0.0, 1.0, 1e-14, 4);
        assert!(matches!(r, Err(Error::QuadratureFailure { .. })));
    }

    #[test]
    fn grid_reproduces_value() {
        let f = |x: f64| (x * 2.0).cos();
        let r = integrate(f, 0.0, 1.0, 1e-12).unwrap();
        let g = r.grid();
        assert!(g.weights.iter().all(|&w| w > 0.0));
        for &(a, b) in &r.panels {
            let inside = g.nodes.iter().filter(|&&x| x > a && x < b).count();
            assert_eq!(inside, 16);
        }
        let v: f64 = g.nodes.iter().zip(&g.weights).map(|(x, w)| w * f(*x)).sum();
        assert!((v - r.value).abs() < 1e-14);
    }

    #[test]
    fn cumulative_simpson_on_quadratic_is_exact() {
        let h = 0.1;
        let xs: Vec<f64> = (0..=11).map(|i| i as f64 * h).collect();
        let vals: Vec<f64> = xs.iter().map(|x| 3.0 * x * x - x).collect();
        let cum = cumulative_simpson(&vals, h);
        for (x, c) in xs.iter().zip(&cum) {
            let exact = x.powi(3) - x * x / 2.0;
            assert!((c - exact).abs() < 1e-13, "{x}: {c} vs {exact}");
        }
    }

    #[test]
    fn cumulative_simpson_converges_on_smooth_functions() {
        let nodes = 1025;
        let h = 1.0 / (nodes - 1) as f64;
        let vals: Vec<f64> = (0..nodes).map(|i| (-5.0 * i as f64 * h).exp()).collect();
        let cum = cumulative_simpson(&vals, h);
        for (i, c) in cum.iter().enumerate() {
            let x = i as f64 * h;
            let exact = (1.0 - (-5.0 * x).exp()) / 5.0;
            assert!((c - exact).abs() < 1e-10);
        }
    }
}
