//! Dense polynomial and truncated power-series arithmetic over a [`Scalar`].

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Univariate polynomial with dense coefficients; `coeffs[k]` multiplies the
/// `k`-th power. Trailing zeros are always trimmed, so the zero polynomial
/// has no coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<S> {
    coeffs: Vec<S>,
}

/// Polynomial with exact rational coefficients.
pub type RationalPoly = Poly<Rational>;

impl<S: Scalar> Poly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    /// `c * v^k`.
    pub fn monomial(c: S, k: usize) -> Self {
        let mut coeffs = vec![S::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// Coefficient of `v^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Horner evaluation.
    pub fn eval(&self, v: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * v.clone() + c.clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// Multiplies by `v^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![S::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// `∫_0^v P(u) du`: coefficient `a_k` moves to power `k + 1` as
    /// `a_k / (k + 1)`; the constant term is zero.
    pub fn integral_from_zero(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(S::zero());
        for (k, a) in self.coeffs.iter().enumerate() {
            coeffs.push(a.clone() / S::from_int(k as i64 + 1));
        }
        Self::new(coeffs)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a.clone() * S::from_int(k as i64))
                .collect(),
        )
    }

    pub fn to_f64(&self) -> Poly<f64> {
        Poly::new(self.coeffs.iter().map(Scalar::to_f64).collect())
    }
}

impl<S: Scalar> Add for &Poly<S> {
    type Output = Poly<S>;

    fn add(self, rhs: &Poly<S>) -> Poly<S> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<S: Scalar> Sub for &Poly<S> {
    type Output = Poly<S>;

    fn sub(self, rhs: &Poly<S>) -> Poly<S> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<S: Scalar> Mul for &Poly<S> {
    type Output = Poly<S>;

    fn mul(self, rhs: &Poly<S>) -> Poly<S> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

/// Coefficients of `C(z - 1, j) = (z - 1)(z - 2)...(z - j) / j!` in powers
/// of `z`.
pub fn falling_binomial_coeffs<S: Scalar>(j: usize) -> Poly<S> {
    let mut acc = Poly::constant(S::one());
    let mut factorial = S::one();
    for i in 1..=j {
        let factor = Poly::new(vec![-S::from_int(i as i64), S::one()]);
        acc = &acc * &factor;
        factorial = factorial * S::from_int(i as i64);
    }
    acc.scale(&(S::one() / factorial))
}

/// Polynomial in `x` whose coefficients are polynomials in `z`:
/// `coeffs_x[k]` multiplies `x^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct BivarPoly<S> {
    coeffs_x: Vec<Poly<S>>,
}

impl<S: Scalar> BivarPoly<S> {
    pub fn new(mut coeffs_x: Vec<Poly<S>>) -> Self {
        while coeffs_x.last().is_some_and(Poly::is_zero) {
            coeffs_x.pop();
        }
        Self { coeffs_x }
    }

    pub fn one() -> Self {
        Self::new(vec![Poly::constant(S::one())])
    }

    pub fn coeffs_x(&self) -> &[Poly<S>] {
        &self.coeffs_x
    }

    /// The `z`-polynomial multiplying `x^k`.
    pub fn coeff_x(&self, k: usize) -> Poly<S> {
        self.coeffs_x.get(k).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn degree_x(&self) -> Option<usize> {
        self.coeffs_x.len().checked_sub(1)
    }

    /// Largest `z`-degree among the coefficients.
    pub fn degree_z(&self) -> Option<usize> {
        self.coeffs_x.iter().filter_map(Poly::degree).max()
    }

    /// `∫_0^x B(u, z) du`.
    pub fn integral_x_from_zero(&self) -> Self {
        if self.coeffs_x.is_empty() {
            return Self::new(Vec::new());
        }
        let mut out = Vec::with_capacity(self.coeffs_x.len() + 1);
        out.push(Poly::zero());
        for (k, c) in self.coeffs_x.iter().enumerate() {
            out.push(c.scale(&(S::one() / S::from_int(k as i64 + 1))));
        }
        Self::new(out)
    }

    /// Multiplies every coefficient by the `z`-polynomial `q`.
    pub fn mul_z(&self, q: &Poly<S>) -> Self {
        Self::new(self.coeffs_x.iter().map(|c| c * q).collect())
    }

    /// Multiplies by the `x`-polynomial `q` with scalar coefficients.
    pub fn mul_x(&self, q: &Poly<S>) -> Self {
        if self.coeffs_x.is_empty() || q.is_zero() {
            return Self::new(Vec::new());
        }
        let mut out = vec![Poly::zero(); self.coeffs_x.len() + q.coeffs().len() - 1];
        for (i, a) in self.coeffs_x.iter().enumerate() {
            for (j, b) in q.coeffs().iter().enumerate() {
                out[i + j] = &out[i + j] + &a.scale(b);
            }
        }
        Self::new(out)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let len = self.coeffs_x.len().max(rhs.coeffs_x.len());
        Self::new(
            (0..len)
                .map(|k| &self.coeff_x(k) + &rhs.coeff_x(k))
                .collect(),
        )
    }

    /// Substitutes a value for `x`, leaving a polynomial in `z`.
    pub fn eval_x(&self, x: &S) -> Poly<S> {
        self.coeffs_x
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| &acc.scale(x) + c)
    }

    /// Substitutes a value for `z`, leaving a polynomial in `x`.
    pub fn eval_z(&self, z: &S) -> Poly<S> {
        Poly::new(self.coeffs_x.iter().map(|c| c.eval(z)).collect())
    }
}

/// Power series truncated after the `z^K` term; always holds exactly
/// `K + 1` coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> TruncatedSeries<S> {
    /// Builds an order-`order` series, padding with zeros or dropping terms
    /// beyond `z^order`.
    pub fn new(mut coeffs: Vec<S>, order: usize) -> Self {
        coeffs.resize(order + 1, S::zero());
        Self { coeffs }
    }

    /// The multiplicative identity `1 + 0 z + ...`.
    pub fn one(order: usize) -> Self {
        Self::new(vec![S::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        Self::new(
            (0..=order)
                .map(|k| self.coeffs[k].clone() + rhs.coeffs[k].clone())
                .collect(),
            order,
        )
    }

    /// `exp` of a series with zero constant term, via
    /// `i V_i = sum_{k=1}^{i} k c_k V_{i-k}`, `V_0 = 1`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Precondition(
                "series exponential needs a zero constant term".into(),
            ));
        }
        let order = self.order();
        let mut v: Vec<S> = Vec::with_capacity(order + 1);
        v.push(S::one());
        for i in 1..=order {
            let acc = S::accumulate(
                (1..=i).map(|k| S::from_int(k as i64) * self.coeffs[k].clone() * v[i - k].clone()),
            );
            v.push(acc / S::from_int(i as i64));
        }
        Ok(Self { coeffs: v })
    }
}

/// `exp(c)` truncated at order `order`.
pub fn series_exp<S: Scalar>(c: &TruncatedSeries<S>, order: usize) -> Result<TruncatedSeries<S>> {
    TruncatedSeries::new(c.coeffs().to_vec(), order).exp()
}

/// Cauchy product truncated at order `order`:
/// output `n` is `sum_{i=0}^{n} a_i b_{n-i}`.
pub fn cauchy_product<S: Scalar>(
    a: &TruncatedSeries<S>,
    b: &TruncatedSeries<S>,
    order: usize,
) -> TruncatedSeries<S> {
    let get = |s: &TruncatedSeries<S>, i: usize| s.coeffs.get(i).cloned().unwrap_or_else(S::zero);
    let coeffs = (0..=order)
        .map(|n| S::accumulate((0..=n).map(|i| get(a, i) * get(b, n - i))))
        .collect();
    TruncatedSeries::new(coeffs, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::binomial;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn rp(v: &[(i64, i64)]) -> RationalPoly {
        Poly::new(v.iter().map(|&(n, d)| r(n, d)).collect())
    }

    #[test]
    fn falling_binomial_small_orders() {
        assert_eq!(falling_binomial_coeffs::<Rational>(0), rp(&[(1, 1)]));
        assert_eq!(falling_binomial_coeffs::<Rational>(1), rp(&[(-1, 1), (1, 1)]));
        assert_eq!(
            falling_binomial_coeffs::<Rational>(2),
            rp(&[(1, 1), (-3, 2), (1, 2)])
        );
    }

    #[test]
    fn falling_binomial_special_points() {
        for j in 0..20usize {
            let c = falling_binomial_coeffs::<Rational>(j);
            let at_one = c.eval(&r(1, 1));
            assert_eq!(at_one, if j == 0 { r(1, 1) } else { r(0, 1) });
            assert_eq!(c.eval(&r(j as i64 + 1, 1)), r(1, 1));
        }
    }

    #[test]
    fn falling_binomial_matches_integer_binomials() {
        for j in 0..15usize {
            let c = falling_binomial_coeffs::<Rational>(j);
            for m in (j + 1)..(j + 12) {
                let expected = Rational::from_integer(binomial(m as u64 - 1, j as u64));
                assert_eq!(c.eval(&r(m as i64, 1)), expected);
            }
        }
    }

    #[test]
    fn integral_examples() {
        assert_eq!(rp(&[(1, 1)]).integral_from_zero(), rp(&[(0, 1), (1, 1)]));
        assert_eq!(rp(&[(0, 1), (2, 1)]).integral_from_zero(), rp(&[(0, 1), (0, 1), (1, 1)]));
        assert_eq!(
            rp(&[(1, 1), (-3, 2), (1, 2)]).integral_from_zero(),
            rp(&[(0, 1), (1, 1), (-3, 4), (1, 6)])
        );
        assert!(RationalPoly::zero().integral_from_zero().is_zero());
    }

    #[test]
    fn trimming_keeps_degree_honest() {
        let p = rp(&[(1, 1), (0, 1), (0, 1)]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(RationalPoly::zero().degree(), None);
    }

    #[test]
    fn exp_of_zero_series() {
        let z = TruncatedSeries::new(vec![r(0, 1); 4], 3);
        assert_eq!(z.exp().unwrap(), TruncatedSeries::one(3));
    }

    #[test]
    fn exp_of_linear_series_is_taylor() {
        let c = TruncatedSeries::new(vec![r(0, 1), r(1, 1)], 5);
        let v = c.exp().unwrap();
        let expected = [r(1, 1), r(1, 1), r(1, 2), r(1, 6), r(1, 24), r(1, 120)];
        assert_eq!(v.coeffs(), &expected);
    }

    #[test]
    fn exp_of_z_plus_z_squared() {
        // exp(z + z^2) = (1 + z + z^2/2 + z^3/6)(1 + z^2) + O(z^4)
        let c = TruncatedSeries::new(vec![r(0, 1), r(1, 1), r(1, 1)], 3);
        let v = series_exp(&c, 3).unwrap();
        assert_eq!(v.coeffs(), &[r(1, 1), r(1, 1), r(3, 2), r(7, 6)]);
    }

    #[test]
    fn exp_rejects_nonzero_constant() {
        let c = TruncatedSeries::new(vec![r(1, 1)], 2);
        assert!(matches!(c.exp(), Err(Error::Precondition(_))));
    }

    #[test]
    fn cauchy_examples() {
        let a = TruncatedSeries::new(vec![r(2, 1), r(-1, 3), r(5, 1)], 2);
        assert_eq!(cauchy_product(&a, &TruncatedSeries::one(2), 2), a);

        let lin = TruncatedSeries::new(vec![r(1, 1), r(1, 1)], 1);
        let sq = cauchy_product(&lin, &lin, 2);
        assert_eq!(sq.coeffs(), &[r(1, 1), r(2, 1), r(1, 1)]);

        let third = r(1, 3);
        let geometric = TruncatedSeries::new((0..=6).map(|k| third.powi(k)).collect(), 6);
        let factor = TruncatedSeries::new(vec![r(1, 1), -third.clone()], 6);
        assert_eq!(cauchy_product(&geometric, &factor, 6), TruncatedSeries::one(6));
    }

    #[test]
    fn bivariate_eval_both_orders_agree() {
        // B(x, z) = 1 + (z - 1) x + z^2 x^2
        let b = BivarPoly::new(vec![
            rp(&[(1, 1)]),
            rp(&[(-1, 1), (1, 1)]),
            rp(&[(0, 1), (0, 1), (1, 1)]),
        ]);
        let (x, z) = (r(2, 3), r(-1, 5));
        assert_eq!(b.eval_x(&x).eval(&z), b.eval_z(&z).eval(&x));
        assert_eq!(b.degree_x(), Some(2));
        assert_eq!(b.degree_z(), Some(2));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-6i64..=6, 1i64..=5).prop_map(|(n, d)| r(n, d))
    }

    fn small_series() -> impl Strategy<Value = TruncatedSeries<Rational>> {
        prop::collection::vec(small_rational(), 4).prop_map(|mut v| {
            v.insert(0, r(0, 1));
            TruncatedSeries::new(v, 4)
        })
    }

    proptest! {
        #[test]
        fn exp_turns_sums_into_products(a in small_series(), b in small_series()) {
            let lhs = cauchy_product(&a.exp().unwrap(), &b.exp().unwrap(), 4);
            let rhs = a.add(&b).exp().unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn integrate_then_differentiate(coeffs in prop::collection::vec(small_rational(), 0..8)) {
            let p = Poly::new(coeffs);
            prop_assert_eq!(p.integral_from_zero().derivative(), p);
        }
    }
}
