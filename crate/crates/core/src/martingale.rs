//! Martingales of the form `f_n(X_n)`.
//!
//! `f_n(X_n)` is a martingale exactly when
//! `f_n(x) = f_0(0) + ∫_0^x f_0'(t) / (1 - p t)^n dt`, equivalently when
//! `(1 - p x) f_n(x) + p ∫_0^x f_n(y) dy = f_{n-1}(x)` for every `n >= 1`.
//! This module builds such families from a seed `f_0`, evaluates the
//! functional equation as a residual, and checks the property by simulation.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::quad::integrate;
use crate::simulate::simulate_batch_map;
use crate::stats::{moment_gate, GateReport};

/// Domain cap applied when `p = 1`, where `(1 - p t)^{-n}` blows up at `t = 1`.
pub const P_ONE_DOMAIN_CAP: f64 = 1.0 - 1e-6;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type FamilyFn = Arc<dyn Fn(usize, f64) -> f64 + Send + Sync>;

/// The seed `f_0`, its derivative, and its limit at zero.
#[derive(Clone)]
pub struct SeedFunction {
    value: RealFn,
    derivative: RealFn,
    at_zero: f64,
}

impl fmt::Debug for SeedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SeedFunction")
            .field("at_zero", &self.at_zero)
            .finish_non_exhaustive()
    }
}

impl SeedFunction {
    pub fn new<F, D>(value: F, derivative: D, at_zero: f64) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            value: Arc::new(value),
            derivative: Arc::new(derivative),
            at_zero,
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_| c, |_| 0.0, c)
    }

    /// `f_0(x) = -ln(1 - p x) / p`, with `f_0'(x) = 1 / (1 - p x)`.
    pub fn log_seed(p: f64) -> Self {
        Self::new(
            move |x| -(-p * x).ln_1p() / p,
            move |x| 1.0 / (1.0 - p * x),
            0.0,
        )
    }

    pub fn value(&self, x: f64) -> f64 {
        (self.value)(x)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        (self.derivative)(x)
    }

    pub fn at_zero(&self) -> f64 {
        self.at_zero
    }
}

/// How a family was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    NumericFromSeed,
    ClosedFormExample,
    /// Arbitrary user rule, typically a negative control.
    Custom,
}

#[derive(Clone)]
enum Rule {
    Numeric { seed: SeedFunction, rel_tol: f64 },
    Example,
    Custom(FamilyFn),
}

/// A sequence of functions `f_0, f_1, ...` on `(0, domain_cap]`.
#[derive(Clone)]
pub struct MartingaleFamily {
    p: f64,
    domain_cap: f64,
    n_max: usize,
    rule: Rule,
}

impl fmt::Debug for MartingaleFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MartingaleFamily")
            .field("p", &self.p)
            .field("domain_cap", &self.domain_cap)
            .field("n_max", &self.n_max)
            .field("provenance", &self.provenance())
            .finish()
    }
}

fn default_cap(p: f64) -> f64 {
    if p >= 1.0 {
        P_ONE_DOMAIN_CAP
    } else {
        1.0
    }
}

fn check_cap(p: f64, cap: f64) -> Result<()> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Domain(format!("coefficient {p} outside (0, 1]")));
    }
    if p >= 1.0 && cap >= 1.0 {
        return Err(Error::SingularDomain(
            "p = 1 needs a domain cap below 1".into(),
        ));
    }
    if !(cap > 0.0 && cap <= 1.0) {
        return Err(Error::Domain(format!("domain cap {cap} outside (0, 1]")));
    }
    Ok(())
}

impl MartingaleFamily {
    /// The family `f_0(x) = -ln(1 - p x)/p`, `f_n(x) = ((1 - p x)^{-n} - 1)/(p n)`,
    /// evaluated in closed form. The domain is capped at
    /// [`P_ONE_DOMAIN_CAP`] when `p = 1`.
    pub fn example(p: f64) -> Result<Self> {
        let cap = default_cap(p);
        check_cap(p, cap)?;
        Ok(Self {
            p,
            domain_cap: cap,
            n_max: usize::MAX,
            rule: Rule::Example,
        })
    }

    /// A family given by an arbitrary rule `(n, x) -> f_n(x)`.
    pub fn custom<F>(p: f64, domain_cap: f64, rule: F) -> Result<Self>
    where
        F: Fn(usize, f64) -> f64 + Send + Sync + 'static,
    {
        check_cap(p, domain_cap)?;
        Ok(Self {
            p,
            domain_cap,
            n_max: usize::MAX,
            rule: Rule::Custom(Arc::new(rule)),
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn domain_cap(&self) -> f64 {
        self.domain_cap
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `true` if the domain had to be truncated below 1.
    pub fn is_truncated(&self) -> bool {
        self.domain_cap < 1.0
    }

    pub fn provenance(&self) -> Provenance {
        match self.rule {
            Rule::Numeric { .. } => Provenance::NumericFromSeed,
            Rule::Example => Provenance::ClosedFormExample,
            Rule::Custom(_) => Provenance::Custom,
        }
    }

    /// `f_n(x)` for `x` in `[0, domain_cap]`.
    pub fn eval(&self, n: usize, x: f64) -> Result<f64> {
        if n > self.n_max {
            return Err(Error::Domain(format!("n = {n} exceeds family horizon {}", self.n_max)));
        }
        if !(x >= 0.0 && x <= self.domain_cap) {
            return Err(Error::Domain(format!(
                "x = {x} outside [0, {}]",
                self.domain_cap
            )));
        }
        match &self.rule {
            Rule::Numeric { seed, rel_tol } => {
                if n == 0 {
                    return Ok(if x == 0.0 { seed.at_zero() } else { seed.value(x) });
                }
                let p = self.p;
                let exponent = -(n as i32);
                let r = integrate(
                    |t| seed.derivative(t) * (1.0 - p * t).powi(exponent),
                    0.0,
                    x,
                    *rel_tol,
                )?;
                Ok(seed.at_zero() + r.value)
            }
            Rule::Example => example_family(self.p, n, x),
            Rule::Custom(f) => Ok(f(n, x)),
        }
    }
}

/// Builds `f_n(x) = f_0(0) + ∫_0^x f_0'(t) (1 - p t)^{-n} dt` for
/// `n <= n_max`, evaluated by adaptive quadrature on demand.
pub fn build_family(
    seed: SeedFunction,
    p: f64,
    n_max: usize,
    x_domain_cap: f64,
    rel_tol: f64,
) -> Result<MartingaleFamily> {
    check_cap(p, x_domain_cap)?;
    Ok(MartingaleFamily {
        p,
        domain_cap: x_domain_cap,
        n_max,
        rule: Rule::Numeric { seed, rel_tol },
    })
}

/// `-ln(1 - p x)/p` for `n = 0`, otherwise `((1 - p x)^{-n} - 1)/(p n)`.
pub fn example_family(p: f64, n: usize, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("x = {x} outside [0, 1]")));
    }
    if p >= 1.0 && x >= 1.0 {
        return Err(Error::SingularDomain("f_n(1) diverges when p = 1".into()));
    }
    if n == 0 {
        return Ok(-(-p * x).ln_1p() / p);
    }
    let nf = n as f64;
    // (1 - p x)^{-n} - 1 = expm1(-n ln(1 - p x)) keeps precision near x = 0.
    Ok((-nf * (-p * x).ln_1p()).exp_m1() / (p * nf))
}

/// `(1 - p x) f_n(x) + p ∫_0^x f_n(y) dy - f_{n-1}(x)`.
pub fn martingale_residual(family: &MartingaleFamily, n: usize, x: f64, rel_tol: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Precondition("residual is defined for n >= 1".into()));
    }
    Ok(one_step_conditional_mean(family, n, x, rel_tol)? - family.eval(n - 1, x)?)
}

/// `E[f_n(X_n) | X_{n-1} = x] = (1 - p x) f_n(x) + p ∫_0^x f_n(y) dy`.
pub fn one_step_conditional_mean(
    family: &MartingaleFamily,
    n: usize,
    x: f64,
    rel_tol: f64,
) -> Result<f64> {
    let p = family.p();
    let fx = family.eval(n, x)?;
    // Inner evaluations can fail; remember the first failure.
    let failure = std::cell::RefCell::new(None);
    let integral = integrate(
        |y| match family.eval(n, y) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        0.0,
        x,
        rel_tol,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok((1.0 - p * x) * fx + p * integral?.value)
}

/// Tolerance used when judging a residual: `10 * rel_tol * (1 + |f_{n-1}(x)|)`.
pub fn residual_tolerance(rel_tol: f64, f_prev: f64) -> f64 {
    10.0 * rel_tol * (1.0 + f_prev.abs())
}

/// Conditional-mean check at one simulated state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionalCheck {
    pub state: f64,
    pub conditional_mean: f64,
    pub previous_value: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Outcome of [`mc_martingale_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McMartingaleReport {
    pub n: usize,
    pub paths: usize,
    pub paths_used: usize,
    /// `f_0(X_0) = f_0(1)`.
    pub target: f64,
    pub mean_gate: GateReport,
    pub conditional_checks: Vec<ConditionalCheck>,
    pub pass: bool,
}

/// Number of sampled states used for the one-step conditional checks.
const CONDITIONAL_SAMPLES: usize = 8;

/// Compares the simulated mean of `f_n(X_n)` with `f_0(1)`, and checks the
/// one-step conditional means `E[f_n(X_n) | X_{n-1} = x] = f_{n-1}(x)` at a
/// few simulated states `x`. Paths ending outside the family's domain are
/// dropped.
pub fn mc_martingale_check(
    family: &MartingaleFamily,
    params: &ModelParams,
    n: usize,
    m: usize,
    master_seed: u64,
    rel_tol: f64,
) -> Result<McMartingaleReport> {
    if n == 0 {
        return Err(Error::Precondition("martingale check needs n >= 1".into()));
    }
    let cap = family.domain_cap();
    let target = family.eval(0, 1.0).map_err(|_| {
        Error::SingularDomain(format!("f_0(1) is outside the family domain (0, {cap}]"))
    })?;
    let pairs = simulate_batch_map(params, n, m, master_seed, |path| {
        (path.states[n - 1], path.states[n])
    });
    let in_domain: Vec<(f64, f64)> = pairs.into_iter().filter(|&(_, x)| x <= cap).collect();
    let sample = in_domain
        .iter()
        .map(|&(_, x)| family.eval(n, x))
        .collect::<Result<Vec<f64>>>()?;
    let mean_gate = moment_gate(
        &format!("E[f_{n}(X_{n})] = f_0(1)"),
        &sample,
        target,
        "martingale property: E[f_n(X_n)] = f_0(X_0)",
    )?;

    let stride = (in_domain.len() / CONDITIONAL_SAMPLES).max(1);
    let mut conditional_checks = Vec::new();
    for &(prev_state, _) in in_domain.iter().step_by(stride).take(CONDITIONAL_SAMPLES) {
        let conditional_mean = one_step_conditional_mean(family, n, prev_state, rel_tol)?;
        let previous_value = family.eval(n - 1, prev_state)?;
        let residual = conditional_mean - previous_value;
        let tolerance = residual_tolerance(rel_tol, previous_value);
        conditional_checks.push(ConditionalCheck {
            state: prev_state,
            conditional_mean,
            previous_value,
            residual,
            tolerance,
            pass: residual.abs() <= tolerance,
        });
    }
    let pass = mean_gate.pass && conditional_checks.iter().all(|c| c.pass);
    Ok(McMartingaleReport {
        n,
        paths: m,
        paths_used: in_domain.len(),
        target,
        mean_gate,
        conditional_checks,
        pass,
    })
}
