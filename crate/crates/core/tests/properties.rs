//! Property tests for the analytic routines.

use num_traits::Zero;
use proptest::prelude::*;
use staircase::counting::{pgf_eval, pmf};
use staircase::exact_dist::{atom_at_one, joint_survival, marginal_cdf, MarginalLaw};
use staircase::martingale::{build_family, SeedFunction};
use staircase::series::falling_binomial_coeffs;
use staircase::transform::{laplace_partial_sums, LaplaceQuery};
use staircase::{Rational, Scalar};

fn rational_p() -> impl Strategy<Value = Rational> {
    (1i64..=40).prop_flat_map(|den| (1i64..=den).prop_map(move |num| Rational::from_ratio(num, den)))
}

fn unit_rational() -> impl Strategy<Value = Rational> {
    (1i64..=60).prop_flat_map(|den| (0i64..den).prop_map(move |num| Rational::from_ratio(num, den)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cdf_is_monotone_in_x(p in rational_p(), n in 0u32..12, a in unit_rational(), b in unit_rational()) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(marginal_cdf(&p, n, &lo).unwrap() <= marginal_cdf(&p, n, &hi).unwrap());
    }

    #[test]
    fn cdf_is_monotone_in_n(p in rational_p(), n in 0u32..20, x in unit_rational()) {
        prop_assume!(!x.is_zero());
        prop_assert!(marginal_cdf(&p, n, &x).unwrap() <= marginal_cdf(&p, n + 1, &x).unwrap());
    }

    #[test]
    fn total_mass_is_one(p in rational_p(), n in 0u32..30) {
        let law = MarginalLaw::new(p.clone(), n);
        let one = Rational::from_int(1);
        let continuous = one.clone() - (one.clone() - p.clone()).powi(n);
        prop_assert_eq!(atom_at_one(&p, n) + continuous, one.clone());
        prop_assert_eq!(law.cdf(&one), one);
    }

    #[test]
    fn joint_prefix_permutation_below_suffix_max(
        p in rational_p(),
        prefix in proptest::collection::vec(unit_rational(), 1..5),
        suffix in proptest::collection::vec(unit_rational(), 1..3),
        rotate in 0usize..5,
    ) {
        let suffix_max = suffix.iter().max().unwrap().clone();
        prop_assume!(prefix.iter().all(|v| *v < suffix_max));
        let mut permuted = prefix.clone();
        let len = permuted.len();
        permuted.rotate_left(rotate % len);
        permuted.reverse();
        let a: Vec<_> = prefix.iter().chain(&suffix).cloned().collect();
        let b: Vec<_> = permuted.iter().chain(&suffix).cloned().collect();
        prop_assert_eq!(joint_survival(&p, &a).unwrap(), joint_survival(&p, &b).unwrap());
    }

    #[test]
    fn joint_with_zero_prefix_is_marginal_survival(p in rational_p(), n in 1usize..10, x in unit_rational()) {
        let mut xs = vec![Rational::from_int(0); n - 1];
        xs.push(x.clone());
        let expect = (Rational::from_int(1) - p.clone() * x).powi(n as u32);
        prop_assert_eq!(joint_survival(&p, &xs).unwrap(), expect);
    }

    #[test]
    fn pmf_is_a_distribution(p in rational_p(), n in 0usize..20) {
        let t = pmf(&p, n);
        prop_assert_eq!(t.total(), Rational::from_int(1));
        prop_assert!(t.is_nonnegative());
        prop_assert_eq!(t.entries[0].clone(), atom_at_one(&p, n as u32));
    }

    #[test]
    fn pgf_matches_pmf_polynomial(p in rational_p(), n in 0usize..=24, z in -1.0f64..=1.0) {
        // Float generating function against the exact PMF, rounded once.
        let direct = pgf_eval(&p.to_f64(), n, &z);
        let from_pmf = pmf(&p, n).to_f64().eval(&z);
        prop_assert!((direct - from_pmf).abs() <= 1e-9, "{direct} vs {from_pmf}");
    }

    #[test]
    fn falling_binomial_reproduces_binomials(j in 0usize..16, m in 0u64..30) {
        let c = falling_binomial_coeffs::<Rational>(j);
        prop_assume!(m as usize > j);
        let v = c.eval(&Rational::from_int(m as i64));
        prop_assert_eq!(v, Rational::from_integer(staircase::scalar::binomial(m - 1, j as u64)));
    }

    #[test]
    fn laplace_values_lie_in_unit_interval(p in 0.05f64..=1.0, t in 0.01f64..8.0, x in 0.01f64..=1.0) {
        let w = laplace_partial_sums(&LaplaceQuery::new(p, t, 8).at(x), 1e-10).unwrap();
        for (k, v) in w.iter().enumerate() {
            prop_assert!(*v > 0.0 && *v <= 1.0 + 1e-12, "W_{k} = {v}");
            if k > 0 {
                prop_assert!(*v < w[k - 1], "W not strictly decreasing at {k}");
            }
        }
    }

    #[test]
    fn built_families_keep_their_value_at_zero(p in 0.05f64..0.99, c in -5.0f64..5.0) {
        let seed = SeedFunction::new(move |x: f64| c + x * x, |x: f64| 2.0 * x, c);
        let fam = build_family(seed, p, 6, 1.0, 1e-10).unwrap();
        for n in 0..=6 {
            prop_assert_eq!(fam.eval(n, 0.0).unwrap(), c);
        }
    }
}
