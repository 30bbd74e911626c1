//! Closed-form marginal law, joint survival function and moments of `X_n`.
//!
//! The marginal law of `X_n` is mixed: a continuous part with CDF
//! `1 - (1 - p x)^n` on `(0, 1)` plus an atom of mass `(1 - p)^n` at `x = 1`.
//! [`MarginalLaw`] exposes both pieces separately and also as one
//! right-continuous CDF.

use crate::error::{Error, Result};
use crate::scalar::{binomial, Scalar};

fn check_unit_threshold<S: Scalar>(x: &S) -> Result<()> {
    if *x <= S::zero() || *x > S::one() {
        return Err(Error::Domain(format!(
            "threshold {} is outside (0, 1]",
            x.to_f64()
        )));
    }
    Ok(())
}

/// `P(X_n <= x)` for `x` in `(0, 1]`.
pub fn marginal_cdf<S: Scalar>(p: &S, n: u32, x: &S) -> Result<S> {
    check_unit_threshold(x)?;
    if *x == S::one() {
        return Ok(S::one());
    }
    Ok(S::one() - (S::one() - p.clone() * x.clone()).powi(n))
}

/// `P(X_n = 1) = (1 - p)^n`.
pub fn atom_at_one<S: Scalar>(p: &S, n: u32) -> S {
    (S::one() - p.clone()).powi(n)
}

/// Marginal law of `X_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalLaw<S> {
    pub p: S,
    pub n: u32,
}

impl<S: Scalar> MarginalLaw<S> {
    pub fn new(p: S, n: u32) -> Self {
        Self { p, n }
    }

    /// The continuous part `1 - (1 - p x)^n`, for `x` in `[0, 1]`.
    pub fn continuous_part(&self, x: &S) -> S {
        S::one() - (S::one() - self.p.clone() * x.clone()).powi(self.n)
    }

    pub fn atom(&self) -> S {
        atom_at_one(&self.p, self.n)
    }

    /// Right-continuous CDF on the whole real line.
    pub fn cdf(&self, x: &S) -> S {
        if *x <= S::zero() {
            S::zero()
        } else if *x >= S::one() {
            S::one()
        } else {
            self.continuous_part(x)
        }
    }

    /// Left limit `P(X_n < x)`.
    pub fn cdf_left(&self, x: &S) -> S {
        if *x <= S::zero() {
            S::zero()
        } else if *x > S::one() {
            S::one()
        } else {
            self.continuous_part(x)
        }
    }

    /// `E[X_n^m]`.
    pub fn moment(&self, m: u32) -> S {
        moment(&self.p, self.n, m)
    }
}

/// `P(X_1 > x_1, ..., X_n > x_n)` for thresholds in `[0, 1)`.
///
/// Equals the product over `i` of `1 - p * max(x_i, ..., x_n)`; the suffix
/// maxima are accumulated in one right-to-left pass.
pub fn joint_survival<S: Scalar>(p: &S, thresholds: &[S]) -> Result<S> {
    if thresholds.is_empty() {
        return Err(Error::Precondition("at least one threshold is required".into()));
    }
    for x in thresholds {
        if *x < S::zero() || *x >= S::one() {
            return Err(Error::Domain(format!(
                "threshold {} is outside [0, 1)",
                x.to_f64()
            )));
        }
    }
    let mut suffix_max = S::zero();
    let mut prod = S::one();
    for x in thresholds.iter().rev() {
        if *x > suffix_max {
            suffix_max = x.clone();
        }
        prod = prod * (S::one() - p.clone() * suffix_max.clone());
    }
    Ok(prod)
}

/// `E[X_n^m] = m * sum_{j=0}^{n} C(n, j) (-p)^j / (m + j)`.
pub fn moment<S: Scalar>(p: &S, n: u32, m: u32) -> S {
    assert!(m >= 1, "moment order must be at least 1");
    let mut p_pow = S::one();
    let terms = (0..=n).map(|j| {
        let sign = if j % 2 == 0 { S::one() } else { -S::one() };
        let term = sign * S::from_bigint(&binomial(n as u64, j as u64)) * p_pow.clone()
            / S::from_int((m + j) as i64);
        p_pow = p_pow.clone() * p.clone();
        term
    });
    let terms: Vec<S> = terms.collect();
    S::from_int(m as i64) * S::accumulate(terms)
}

/// `E[X_n] = (1 - (1 - p)^{n+1}) / (p (n + 1))`, obtained by integrating the
/// survival function.
pub fn mean_closed_form<S: Scalar>(p: &S, n: u32) -> S {
    (S::one() - (S::one() - p.clone()).powi(n + 1)) / (p.clone() * S::from_int(n as i64 + 1))
}
