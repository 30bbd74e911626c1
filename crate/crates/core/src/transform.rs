//! Laplace transform of the partial sums `S_n = X_1 + ... + X_n`.
//!
//! `W_n(x) = E[exp(-t S_n) | X_0 = x]` is computed two independent ways:
//!
//! * [`laplace_partial_sum`]: the finite expansion
//!   `W_n(x) = sum_{i=0}^{n} ((1 - p x) e^{-t x})^{n-i} V_i(x)`, where the
//!   `V_i` are the coefficients of `exp(sum_k c_k(x) z^k)` and
//!   `c_k(x) = p ∫_0^x e^{-t k s} (1 - p s)^{k-1} ds`;
//! * [`laplace_oracle_grid`]: the integral recursion
//!   `W_n(x) = (1 - p x) e^{-t x} W_{n-1}(x) + p ∫_0^x e^{-t y} W_{n-1}(y) dy`
//!   iterated on a uniform grid with cumulative Simpson sums.
//!
//! [`gf_closed_form`] evaluates the generating function `H(x, z) = sum_n W_n(x) z^n`.

use crate::error::{Error, Result};
use crate::quad::{cumulative_simpson, integrate};
use crate::series::{cauchy_product, TruncatedSeries};

/// Smallest grid accepted by [`laplace_oracle_grid`].
pub const MIN_GRID_NODES: usize = 256;

/// Arguments of one `W_n(x)` evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceQuery {
    pub p: f64,
    pub t: f64,
    pub n: usize,
    /// Initial state, in `(0, 1]`.
    pub x: f64,
    /// Series truncation order; must be at least `n`.
    pub order: usize,
}

impl LaplaceQuery {
    /// Query from `X_0 = 1` with truncation order `n`.
    pub fn new(p: f64, t: f64, n: usize) -> Self {
        Self {
            p,
            t,
            n,
            x: 1.0,
            order: n,
        }
    }

    pub fn at(mut self, x: f64) -> Self {
        self.x = x;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(Error::Domain(format!("coefficient {} outside (0, 1]", self.p)));
        }
        if !(self.t >= 0.0) || !self.t.is_finite() {
            return Err(Error::Domain(format!("Laplace argument {} must be >= 0", self.t)));
        }
        if !(self.x > 0.0 && self.x <= 1.0) {
            return Err(Error::Domain(format!("initial state {} outside (0, 1]", self.x)));
        }
        if self.order < self.n {
            return Err(Error::Precondition(format!(
                "truncation order {} below horizon {}",
                self.order, self.n
            )));
        }
        Ok(())
    }
}

/// `c_k(x) = p ∫_0^x e^{-t k s} (1 - p s)^{k-1} ds`.
///
/// At `t = 0` the closed form `(1 - (1 - p x)^k) / k` is returned.
pub fn ck(p: f64, t: f64, x: f64, k: usize, rel_tol: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Precondition("c_k is defined for k >= 1".into()));
    }
    if x == 0.0 {
        LaplaceQuery::new(p, t, 0).validate()?;
        return Ok(0.0);
    }
    LaplaceQuery::new(p, t, 0).at(x).validate()?;
    if t == 0.0 {
        return Ok((1.0 - (1.0 - p * x).powi(k as i32)) / k as f64);
    }
    ck_quadrature(p, t, x, k, rel_tol)
}

/// [`ck`] by quadrature regardless of `t`.
pub fn ck_quadrature(p: f64, t: f64, x: f64, k: usize, rel_tol: f64) -> Result<f64> {
    let kf = k as f64;
    let r = integrate(
        |s| (-t * kf * s).exp() * (1.0 - p * s).powi(k as i32 - 1),
        0.0,
        x,
        rel_tol,
    )?;
    Ok(p * r.value)
}

/// `W_n(x)` through the `c_k` / `V_i` expansion.
pub fn laplace_partial_sum(q: &LaplaceQuery, rel_tol: f64) -> Result<f64> {
    Ok(*laplace_partial_sums(q, rel_tol)?.last().expect("n + 1 values"))
}

/// `W_0(x), ..., W_n(x)` through the `c_k` / `V_i` expansion, sharing one set
/// of coefficients.
pub fn laplace_partial_sums(q: &LaplaceQuery, rel_tol: f64) -> Result<Vec<f64>> {
    q.validate()?;
    let order = q.order;
    let mut c = vec![0.0; order + 1];
    for (k, ck_val) in c.iter_mut().enumerate().skip(1) {
        *ck_val = ck(q.p, q.t, q.x, k, rel_tol)?;
    }
    let v = TruncatedSeries::new(c, order).exp()?;
    let ratio = (1.0 - q.p * q.x) * (-q.t * q.x).exp();
    let geometric = TruncatedSeries::new((0..=order).map(|j| ratio.powi(j as i32)).collect(), order);
    let w = cauchy_product(&geometric, &v, order);
    Ok(w.coeffs()[..=q.n].to_vec())
}

/// `W_0..W_n` sampled on the uniform grid `x_i = i / (nodes - 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSolution {
    pub xs: Vec<f64>,
    /// `values[n][i] = W_n(x_i)`.
    pub values: Vec<Vec<f64>>,
}

impl GridSolution {
    /// `W_n(1)`, the last grid node.
    pub fn at_one(&self, n: usize) -> f64 {
        *self.values[n].last().expect("grid is nonempty")
    }
}

/// Iterates the integral recursion for `W_n` on a uniform grid over `[0, 1]`.
pub fn laplace_oracle_grid(p: f64, t: f64, n: usize, nodes: usize) -> Result<GridSolution> {
    if nodes < MIN_GRID_NODES {
        return Err(Error::Precondition(format!(
            "grid needs at least {MIN_GRID_NODES} nodes, got {nodes}"
        )));
    }
    let h = 1.0 / (nodes - 1) as f64;
    let xs: Vec<f64> = (0..nodes).map(|i| i as f64 * h).collect();
    let decay: Vec<f64> = xs.iter().map(|x| (-t * x).exp()).collect();
    let stay: Vec<f64> = xs.iter().zip(&decay).map(|(x, e)| (1.0 - p * x) * e).collect();

    let mut values = Vec::with_capacity(n + 1);
    values.push(vec![1.0; nodes]);
    for step in 1..=n {
        let prev = &values[step - 1];
        let integrand: Vec<f64> = decay.iter().zip(prev).map(|(e, w)| e * w).collect();
        let cumulative = cumulative_simpson(&integrand, h);
        let next = (0..nodes)
            .map(|i| stay[i] * prev[i] + p * cumulative[i])
            .collect();
        values.push(next);
    }
    Ok(GridSolution { xs, values })
}

/// `H(x, z) = exp(∫_0^x p z e^{-t s} / (1 - z (1 - p s) e^{-t s}) ds) / (1 - z (1 - p x) e^{-t x})`
/// for `|z| < 1`.
pub fn gf_closed_form(p: f64, t: f64, x: f64, z: f64, rel_tol: f64) -> Result<f64> {
    if !(z.abs() < 1.0) {
        return Err(Error::Domain(format!("|z| = {} must be below 1", z.abs())));
    }
    LaplaceQuery::new(p, t, 0).at(x).validate()?;
    let integrand = |s: f64| {
        let e = (-t * s).exp();
        p * z * e / (1.0 - z * (1.0 - p * s) * e)
    };
    let exponent = if z == 0.0 {
        0.0
    } else {
        integrate(integrand, 0.0, x, rel_tol)?.value
    };
    Ok(exponent.exp() / (1.0 - z * (1.0 - p * x) * (-t * x).exp()))
}

/// `sum_{n=0}^{big_n} W_n(x) z^n`.
pub fn gf_partial_sum(p: f64, t: f64, x: f64, z: f64, big_n: usize, rel_tol: f64) -> Result<f64> {
    let w = laplace_partial_sums(&LaplaceQuery::new(p, t, big_n).at(x), rel_tol)?;
    Ok(w.iter()
        .enumerate()
        .map(|(n, wn)| wn * z.powi(n as i32))
        .sum())
}

/// `|z|^{N+1} / (1 - |z|)`, which bounds the tail of the series since
/// `0 < W_n <= 1`.
pub fn gf_tail_bound(z: f64, big_n: usize) -> f64 {
    z.abs().powi(big_n as i32 + 1) / (1.0 - z.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-10;

    #[test]
    fn ck_empty_integral() {
        assert_eq!(ck(0.4, 2.0, 0.0, 3, TOL).unwrap(), 0.0);
    }

    #[test]
    fn ck_closed_form_at_t_zero() {
        assert!((ck(0.5, 0.0, 1.0, 2, TOL).unwrap() - 0.375).abs() < 1e-15);
        for k in 1..12 {
            let closed = ck(0.7, 0.0, 0.9, k, TOL).unwrap();
            let quad = ck_quadrature(0.7, 0.0, 0.9, k, TOL).unwrap();
            assert!(((closed - quad) / closed).abs() <= TOL);
        }
    }

    #[test]
    fn ck_first_order_closed_form() {
        let expected = 0.5 * (1.0 - (-1.0f64).exp());
        let v = ck(0.5, 1.0, 1.0, 1, TOL).unwrap();
        assert!((v - 0.316_060_279_414_278_8).abs() < 1e-12);
        assert!(((v - expected) / expected).abs() <= TOL);
    }

    #[test]
    fn arguments_are_validated_before_quadrature() {
        for (p, t, x) in [(0.5, f64::NAN, 1.0), (0.5, -1.0, 1.0), (1.5, 1.0, 1.0), (0.5, 1.0, 1.5)] {
            assert!(matches!(ck(p, t, x, 1, 1e-10), Err(Error::Domain(_))), "{p} {t} {x}");
            assert!(matches!(gf_closed_form(p, t, x, 0.5, 1e-10), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn ck_rejects_zero_index() {
        assert!(ck(0.5, 1.0, 1.0, 0, TOL).is_err());
    }

    #[test]
    fn laplace_at_t_zero_is_one() {
        for n in 0..10 {
            let v = laplace_partial_sum(&LaplaceQuery::new(0.6, 0.0, n).at(0.7), TOL).unwrap();
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn laplace_one_step() {
        let v = laplace_partial_sum(&LaplaceQuery::new(0.5, 1.0, 1), TOL).unwrap();
        let direct = 0.5 * (-1.0f64).exp() + 0.5 * (1.0 - (-1.0f64).exp());
        assert!((v - direct).abs() < 1e-12);
        assert!((v - 0.5).abs() < 1e-12);
    }

    #[test]
    fn laplace_query_validation() {
        let mut q = LaplaceQuery::new(0.5, 1.0, 3);
        q.order = 2;
        assert!(laplace_partial_sum(&q, TOL).is_err());
        assert!(laplace_partial_sum(&LaplaceQuery::new(0.5, -1.0, 3), TOL).is_err());
        assert!(laplace_partial_sum(&LaplaceQuery::new(0.5, 1.0, 3).at(0.0), TOL).is_err());
    }

    #[test]
    fn larger_truncation_order_does_not_change_result() {
        let q = LaplaceQuery::new(0.3, 2.0, 4);
        let mut wide = q;
        wide.order = 9;
        let a = laplace_partial_sum(&q, TOL).unwrap();
        let b = laplace_partial_sum(&wide, TOL).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn grid_oracle_basics() {
        let g = laplace_oracle_grid(0.5, 1.0, 2, 1025).unwrap();
        assert!(g.values[0].iter().all(|&w| w == 1.0));
        assert!((g.at_one(1) - 0.5).abs() < 1e-10);
        let series = laplace_partial_sum(&LaplaceQuery::new(0.5, 1.0, 2), TOL).unwrap();
        assert!((g.at_one(2) - series).abs() < 1e-7);
        assert!(laplace_oracle_grid(0.5, 1.0, 2, 100).is_err());
    }

    #[test]
    fn gf_special_values() {
        let v = gf_closed_form(0.4, 0.0, 0.8, 0.3, TOL).unwrap();
        assert!((v - 1.0 / 0.7).abs() < 1e-10);
        assert_eq!(gf_closed_form(0.4, 3.0, 0.8, 0.0, TOL).unwrap(), 1.0);
        assert!(gf_closed_form(0.4, 3.0, 0.8, 1.0, TOL).is_err());
    }

    #[test]
    fn gf_partial_sums_within_tail_bound() {
        let h = gf_closed_form(0.5, 1.0, 1.0, 0.5, TOL).unwrap();
        let s = gf_partial_sum(0.5, 1.0, 1.0, 0.5, 20, TOL).unwrap();
        assert!((s - h).abs() <= gf_tail_bound(0.5, 20));
    }

    #[test]
    fn w_is_monotone_in_n_and_t() {
        let w = laplace_partial_sums(&LaplaceQuery::new(0.7, 1.0, 10), TOL).unwrap();
        for pair in w.windows(2) {
            assert!(pair[1] < pair[0]);
            assert!(pair[1] > 0.0);
        }
        let lo = laplace_partial_sum(&LaplaceQuery::new(0.7, 0.5, 6), TOL).unwrap();
        let hi = laplace_partial_sum(&LaplaceQuery::new(0.7, 2.0, 6), TOL).unwrap();
        assert!(hi < lo);
    }
}
