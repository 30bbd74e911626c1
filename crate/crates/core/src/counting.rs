//! Law of the jump counter `N_n = ξ_1 + ... + ξ_n`.
//!
//! Two independent routes produce the distribution of `N_n`:
//!
//! * the closed form `E[z^{N_n}] = sum_j C(n, j) C(z - 1, j) p^j`, expanded
//!   through the coefficients of `C(z - 1, j)` ([`pmf`]);
//! * the integral recursion `G_n(x) = p z ∫_0^x G_{n-1}(u) du + (1 - p x) G_{n-1}(x)`,
//!   run exactly on bivariate polynomials ([`pgf_oracle`]).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_dist;
use crate::params::ModelParams;
use crate::scalar::{binomial, format_f64, format_rational, Rational, Scalar};
use crate::series::{falling_binomial_coeffs, BivarPoly, Poly};

/// Float PMFs above this horizon carry a cancellation warning.
pub const FLOAT_CANCELLATION_HORIZON: usize = 40;

/// `P(N_n = k)` for `k = 0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PmfTable<S> {
    pub n: usize,
    pub entries: Vec<S>,
    /// Set for float tables with `n` above [`FLOAT_CANCELLATION_HORIZON`].
    pub cancellation_warning: bool,
}

impl<S: Scalar> PmfTable<S> {
    pub fn from_entries(n: usize, entries: Vec<S>) -> Self {
        Self {
            n,
            entries,
            cancellation_warning: !S::EXACT && n > FLOAT_CANCELLATION_HORIZON,
        }
    }

    pub fn total(&self) -> S {
        S::accumulate(self.entries.iter().cloned())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|e| *e >= S::zero())
    }

    /// `sum_k k P(N_n = k)`.
    pub fn mean(&self) -> S {
        S::accumulate(
            self.entries
                .iter()
                .enumerate()
                .map(|(k, e)| S::from_int(k as i64) * e.clone()),
        )
    }

    /// Probability generating polynomial evaluated at `z`.
    pub fn eval(&self, z: &S) -> S {
        Poly::new(self.entries.clone()).eval(z)
    }

    pub fn to_f64(&self) -> PmfTable<f64> {
        PmfTable {
            n: self.n,
            entries: self.entries.iter().map(Scalar::to_f64).collect(),
            cancellation_warning: self.cancellation_warning,
        }
    }
}

/// One row of the JSON PMF output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PmfRow {
    pub k: usize,
    pub prob: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prob_exact: Option<String>,
}

impl PmfTable<Rational> {
    pub fn rows(&self) -> Vec<PmfRow> {
        self.entries
            .iter()
            .enumerate()
            .map(|(k, e)| PmfRow {
                k,
                prob: format_f64(e.to_f64()),
                prob_exact: Some(format_rational(e)),
            })
            .collect()
    }
}

impl PmfTable<f64> {
    pub fn rows(&self) -> Vec<PmfRow> {
        self.entries
            .iter()
            .enumerate()
            .map(|(k, e)| PmfRow {
                k,
                prob: format_f64(*e),
                prob_exact: None,
            })
            .collect()
    }
}

/// `E[z^{N_n}] = sum_{j=0}^{n} C(n, j) C(z - 1, j) p^j`, for any real `z`.
pub fn pgf_eval<S: Scalar>(p: &S, n: usize, z: &S) -> S {
    let mut falling = S::one();
    let mut p_pow = S::one();
    let mut terms = Vec::with_capacity(n + 1);
    for j in 0..=n {
        if j > 0 {
            falling = falling * (z.clone() - S::from_int(j as i64)) / S::from_int(j as i64);
            p_pow = p_pow * p.clone();
        }
        terms.push(S::from_bigint(&binomial(n as u64, j as u64)) * falling.clone() * p_pow.clone());
    }
    S::accumulate(terms)
}

/// `P(N_n = k) = sum_{j=k}^{n} C(n, j) p^j c_{j,k}`, with `c_{j,k}` the
/// coefficient of `z^k` in `C(z - 1, j)`.
pub fn pmf<S: Scalar>(p: &S, n: usize) -> PmfTable<S> {
    let mut columns: Vec<Vec<S>> = vec![Vec::with_capacity(n + 1); n + 1];
    let mut p_pow = S::one();
    // C(z - 1, j) = C(z - 1, j - 1) (z - j) / j, updated in place.
    let mut c = falling_binomial_coeffs::<S>(0);
    for j in 0..=n {
        if j > 0 {
            let factor = Poly::new(vec![
                -S::one(),
                S::one() / S::from_int(j as i64),
            ]);
            c = &c * &factor;
        }
        let weight = S::from_bigint(&binomial(n as u64, j as u64)) * p_pow.clone();
        for (k, column) in columns.iter_mut().enumerate().take(j + 1) {
            column.push(weight.clone() * c.coeff(k));
        }
        p_pow = p_pow * p.clone();
    }
    let entries = columns.into_iter().map(S::accumulate).collect();
    PmfTable::from_entries(n, entries)
}

/// PMF for model parameters, converted to floats. The computation is
/// exact whenever the coefficient is.
pub fn pmf_for(params: &ModelParams, n: usize) -> PmfTable<f64> {
    match params.p_exact() {
        Ok(p) => pmf(p, n).to_f64(),
        Err(_) => pmf(&params.p_f64(), n),
    }
}

/// `G_n(x; z)` from the integral recursion, exactly.
pub fn pgf_oracle_exact(p: &Rational, n: usize) -> BivarPoly<Rational> {
    let z = Poly::monomial(Rational::from_int(1), 1);
    let pz = z.scale(p);
    let one_minus_px = Poly::new(vec![Rational::from_int(1), -p.clone()]);
    let mut g = BivarPoly::one();
    for _ in 0..n {
        let integral = g.integral_x_from_zero().mul_z(&pz);
        let stay = g.mul_x(&one_minus_px);
        g = integral.add(&stay);
    }
    g
}

/// Recursion oracle for model parameters; needs an exact coefficient.
pub fn pgf_oracle(params: &ModelParams, n: usize) -> Result<BivarPoly<Rational>> {
    let p = params.p_exact().map_err(|_| Error::Mode("pgf_oracle"))?;
    Ok(pgf_oracle_exact(p, n))
}

/// The `z`-coefficients of `G_n(1; z)`, as a PMF table.
pub fn oracle_pmf(g: &BivarPoly<Rational>, n: usize) -> PmfTable<Rational> {
    let at_one = g.eval_x(&Rational::from_int(1));
    let entries = (0..=n).map(|k| at_one.coeff(k)).collect();
    PmfTable::from_entries(n, entries)
}

/// `G_n(x) = sum_{k=0}^{n} C(n, k) C(z - 1, k) p^k x^k` at a fixed `z`.
pub fn closed_form_gn<S: Scalar>(p: &S, n: usize, z: &S) -> Poly<S> {
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut falling = S::one();
    let mut p_pow = S::one();
    for k in 0..=n {
        if k > 0 {
            falling = falling * (z.clone() - S::from_int(k as i64)) / S::from_int(k as i64);
            p_pow = p_pow * p.clone();
        }
        coeffs.push(S::from_bigint(&binomial(n as u64, k as u64)) * falling.clone() * p_pow.clone());
    }
    Poly::new(coeffs)
}

/// `E[N_n] = sum_{i=1}^{n} (1 - (1 - p)^i) / i`, from
/// `E[N_n] - E[N_{n-1}] = p E[X_{n-1}]`.
pub fn mean_count<S: Scalar>(p: &S, n: usize) -> S {
    S::accumulate((0..n).map(|i| p.clone() * exact_dist::mean_closed_form(p, i as u32)))
}

/// `E[N_n] = sum_{j=1}^{n} C(n, j) p^j (-1)^{j-1} / j`, the derivative of the
/// generating polynomial at `z = 1`.
pub fn mean_count_signed_binomial<S: Scalar>(p: &S, n: usize) -> S {
    let mut p_pow = S::one();
    let terms: Vec<S> = (1..=n)
        .map(|j| {
            p_pow = p_pow.clone() * p.clone();
            let sign = if j % 2 == 1 { S::one() } else { -S::one() };
            sign * S::from_bigint(&binomial(n as u64, j as u64)) * p_pow.clone()
                / S::from_int(j as i64)
        })
        .collect();
    S::accumulate(terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn pgf_examples() {
        for n in 0..10 {
            assert_eq!(pgf_eval(&r(2, 7), n, &r(1, 1)), r(1, 1));
        }
        assert_eq!(pgf_eval(&r(1, 2), 2, &r(0, 1)), r(1, 4));
        assert_eq!(pgf_eval(&r(1, 2), 2, &r(-1, 1)), r(-1, 4));
    }

    #[test]
    fn pmf_examples() {
        assert_eq!(pmf(&r(1, 2), 2).entries, vec![r(1, 4), r(5, 8), r(1, 8)]);
        assert_eq!(pmf(&r(3, 11), 1).entries, vec![r(8, 11), r(3, 11)]);
        assert_eq!(pmf(&r(1, 1), 2).entries, vec![r(0, 1), r(1, 2), r(1, 2)]);
    }

    #[test]
    fn pmf_by_path_enumeration_for_two_steps() {
        // N_2 = 1: jump then stay from U (prob p * (1 - p/2)) or stay then jump.
        let p = r(2, 5);
        let one = r(1, 1);
        let expected = p.clone() * (one.clone() - p.clone() / r(2, 1)) + (one - p.clone()) * p.clone();
        assert_eq!(pmf(&p, 2).entries[1], expected);
    }

    #[test]
    fn oracle_small_horizons() {
        let p = r(1, 3);
        assert_eq!(pgf_oracle_exact(&p, 0), BivarPoly::one());
        // G_1(x) = 1 - p x + p x z
        let g1 = pgf_oracle_exact(&p, 1);
        let expected = BivarPoly::new(vec![
            Poly::constant(r(1, 1)),
            Poly::new(vec![-p.clone(), p.clone()]),
        ]);
        assert_eq!(g1, expected);
        let g2 = pgf_oracle_exact(&r(1, 2), 2);
        assert_eq!(oracle_pmf(&g2, 2).entries, vec![r(1, 4), r(5, 8), r(1, 8)]);
    }

    #[test]
    fn oracle_requires_exact_mode() {
        let params = ModelParams::float(0.5).unwrap();
        assert!(matches!(pgf_oracle(&params, 3), Err(Error::Mode(_))));
    }

    #[test]
    fn oracle_degrees_are_bounded() {
        let g = pgf_oracle_exact(&r(2, 3), 6);
        assert!(g.degree_x().unwrap() <= 6);
        for (k, c) in g.coeffs_x().iter().enumerate() {
            assert!(c.degree().is_none_or(|d| d <= k));
        }
    }

    #[test]
    fn closed_form_matches_oracle() {
        let p = r(1, 2);
        assert_eq!(closed_form_gn(&p, 0, &r(5, 7)), Poly::constant(r(1, 1)));
        let z = r(1, 3);
        let oracle = pgf_oracle_exact(&p, 3).eval_z(&z);
        assert_eq!(closed_form_gn(&p, 3, &z), oracle);
        // n = 1: 1 + (z - 1) p x
        let g1 = closed_form_gn(&p, 1, &z);
        assert_eq!(g1.coeffs(), &[r(1, 1), (z - r(1, 1)) * p]);
    }

    #[test]
    fn means() {
        let p = r(1, 2);
        assert_eq!(mean_count(&r(3, 8), 1), r(3, 8));
        assert_eq!(mean_count(&p, 2), r(7, 8));
        assert_eq!(mean_count(&r(1, 1), 2), r(3, 2));
        assert_eq!(pmf(&p, 2).mean(), r(7, 8));
        assert_eq!(mean_count_signed_binomial(&p, 2), r(7, 8));
    }

    #[test]
    fn float_tables_warn_past_horizon() {
        assert!(!pmf(&0.5, 40).cancellation_warning);
        assert!(pmf(&0.5, 41).cancellation_warning);
        assert!(!pmf(&r(1, 2), 60).cancellation_warning);
    }

    #[test]
    fn rows_render_exact_strings() {
        let rows = pmf(&r(1, 2), 2).rows();
        let json = serde_json::to_value(&rows).unwrap();
        assert_eq!(json[0]["prob_exact"], "1/4");
        assert_eq!(json[1]["prob_exact"], "5/8");
        assert_eq!(json[2]["k"], 2);
        let rows = pmf(&0.5, 1).rows();
        assert!(serde_json::to_value(&rows).unwrap()[0].get("prob_exact").is_none());
    }
}
