//! Statistical gates that compare simulated ensembles with exact laws.
//!
//! Every gate produces a [`GateReport`] with `pass <=> statistic <= threshold`.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::exact_dist::MarginalLaw;

/// Smallest sample accepted by the DKW and moment gates.
pub const MIN_GATE_SAMPLE: usize = 1000;

/// Smallest expected count kept as its own chi-square bin.
pub const MIN_EXPECTED_COUNT: f64 = 5.0;

/// Width of the moment gate band, in standard errors.
pub const MOMENT_GATE_SIGMAS: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateReport {
    pub name: String,
    /// The exact-law formula the sample is compared with.
    pub reference: String,
    pub statistic: f64,
    pub threshold: f64,
    pub sample_size: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degrees_of_freedom: Option<usize>,
}

impl GateReport {
    fn new(name: &str, reference: &str, statistic: f64, threshold: f64, sample_size: usize) -> Self {
        Self {
            name: name.to_string(),
            reference: reference.to_string(),
            statistic,
            threshold,
            sample_size,
            pass: statistic <= threshold,
            observed: None,
            expected: None,
            degrees_of_freedom: None,
        }
    }
}

/// `sqrt(ln(2 / alpha) / (2 m))`.
pub fn dkw_threshold(m: usize, alpha: f64) -> f64 {
    ((2.0 / alpha).ln() / (2.0 * m as f64)).sqrt()
}

/// Supremum distance between the empirical CDF of `sample` and the
/// right-continuous CDF of `law`, checked against the DKW band.
///
/// Both one-sided limits are compared at every sample point and at `x = 1`,
/// where the law has its atom.
pub fn dkw_cdf_gate(sample: &[f64], law: &MarginalLaw<f64>, alpha: f64) -> Result<GateReport> {
    let m = sample.len();
    if m < MIN_GATE_SAMPLE {
        return Err(Error::InsufficientSample(format!(
            "DKW gate needs at least {MIN_GATE_SAMPLE} values, got {m}"
        )));
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mf = m as f64;
    let mut sup: f64 = 0.0;
    let mut i = 0;
    let mut saw_one = false;
    while i < m {
        let v = sorted[i];
        let mut j = i;
        while j < m && sorted[j] == v {
            j += 1;
        }
        let below = i as f64 / mf;
        let at = j as f64 / mf;
        sup = sup
            .max((below - law.cdf_left(&v)).abs())
            .max((at - law.cdf(&v)).abs());
        saw_one |= v == 1.0;
        i = j;
    }
    if !saw_one {
        let below_one = sorted.iter().filter(|&&v| v < 1.0).count() as f64 / mf;
        sup = sup
            .max((below_one - law.cdf_left(&1.0)).abs())
            .max((below_one - law.cdf(&1.0)).abs());
    }
    let mut report = GateReport::new(
        &format!("DKW marginal CDF of X_{}", law.n),
        "P(X_n <= x) = 1 - (1 - p x)^n on (0,1), P(X_n = 1) = (1 - p)^n",
        sup,
        dkw_threshold(m, alpha),
        m,
    );
    report.observed = Some(sup);
    Ok(report)
}

/// A chi-square bin: the original outcomes it pools, and its counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PooledBin {
    pub outcomes: Vec<usize>,
    pub observed: u64,
    pub expected: f64,
}

/// Drops zero-probability outcomes and pools adjacent low-expectation
/// outcomes until every bin expects at least [`MIN_EXPECTED_COUNT`].
///
/// Returns `None` if some zero-probability outcome was observed.
pub fn pool_bins(counts: &[u64], probs: &[f64]) -> Option<Vec<PooledBin>> {
    let m: u64 = counts.iter().sum();
    let mut bins: Vec<PooledBin> = Vec::new();
    let mut pending: Option<PooledBin> = None;
    let len = counts.len().max(probs.len());
    for k in 0..len {
        let observed = counts.get(k).copied().unwrap_or(0);
        let prob = probs.get(k).copied().unwrap_or(0.0);
        if prob <= 0.0 {
            if observed > 0 {
                return None;
            }
            continue;
        }
        let bin = pending.get_or_insert_with(|| PooledBin {
            outcomes: Vec::new(),
            observed: 0,
            expected: 0.0,
        });
        bin.outcomes.push(k);
        bin.observed += observed;
        bin.expected += prob * m as f64;
        if bin.expected >= MIN_EXPECTED_COUNT {
            bins.push(pending.take().expect("just inserted"));
        }
    }
    if let Some(rest) = pending {
        match bins.last_mut() {
            Some(last) => {
                last.outcomes.extend(rest.outcomes);
                last.observed += rest.observed;
                last.expected += rest.expected;
            }
            None => bins.push(rest),
        }
    }
    Some(bins)
}

/// Pearson chi-square test of the histogram `counts` (index = outcome)
/// against the probabilities `probs`.
pub fn chi_square_gate(counts: &[u64], probs: &[f64], alpha: f64) -> Result<GateReport> {
    let m: u64 = counts.iter().sum();
    let name = "chi-square PMF of N_n";
    let reference = "P(N_n = k) = sum_{j>=k} C(n,j) p^j c_{j,k}";
    let Some(bins) = pool_bins(counts, probs) else {
        let mut report = GateReport::new(name, reference, f64::INFINITY, 0.0, m as usize);
        report.observed = Some(f64::INFINITY);
        return Ok(report);
    };
    if bins.len() < 2 {
        return Err(Error::InsufficientSample(format!(
            "pooling left {} bin(s); need at least 2",
            bins.len()
        )));
    }
    let statistic: f64 = bins
        .iter()
        .map(|b| {
            let d = b.observed as f64 - b.expected;
            d * d / b.expected
        })
        .sum();
    let dof = bins.len() - 1;
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    let threshold = dist.inverse_cdf(1.0 - alpha);
    let mut report = GateReport::new(name, reference, statistic, threshold, m as usize);
    report.degrees_of_freedom = Some(dof);
    report.observed = Some(statistic);
    Ok(report)
}

/// Sample mean and (unbiased) standard deviation.
pub fn mean_and_sd(sample: &[f64]) -> (f64, f64) {
    let m = sample.len() as f64;
    let mean = crate::scalar::neumaier_sum(sample.iter().copied()) / m;
    if sample.len() < 2 {
        return (mean, 0.0);
    }
    let var = crate::scalar::neumaier_sum(sample.iter().map(|v| (v - mean) * (v - mean))) / (m - 1.0);
    (mean, var.sqrt())
}

/// Passes iff `|mean - exact| <= 5 sd / sqrt(m)`.
pub fn moment_gate(name: &str, sample: &[f64], exact_value: f64, reference: &str) -> Result<GateReport> {
    let m = sample.len();
    if m < MIN_GATE_SAMPLE {
        return Err(Error::InsufficientSample(format!(
            "moment gate needs at least {MIN_GATE_SAMPLE} values, got {m}"
        )));
    }
    let (mean, sd) = mean_and_sd(sample);
    let threshold = MOMENT_GATE_SIGMAS * sd / (m as f64).sqrt();
    let mut report = GateReport::new(name, reference, (mean - exact_value).abs(), threshold, m);
    report.observed = Some(mean);
    report.expected = Some(exact_value);
    Ok(report)
}

/// Bernoulli-frequency version of [`moment_gate`]: the band uses the exact
/// standard error `sqrt(q (1 - q) / m)` of the reference probability `q`.
pub fn frequency_gate(name: &str, hits: usize, m: usize, exact_prob: f64, reference: &str) -> Result<GateReport> {
    if m < MIN_GATE_SAMPLE {
        return Err(Error::InsufficientSample(format!(
            "frequency gate needs at least {MIN_GATE_SAMPLE} trials, got {m}"
        )));
    }
    let freq = hits as f64 / m as f64;
    let se = (exact_prob * (1.0 - exact_prob) / m as f64).sqrt();
    let mut report = GateReport::new(
        name,
        reference,
        (freq - exact_prob).abs(),
        MOMENT_GATE_SIGMAS * se,
        m,
    );
    report.observed = Some(freq);
    report.expected = Some(exact_prob);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::pmf;
    use crate::params::ModelParams;
    use crate::simulate::simulate_batch_map;

    #[test]
    fn dkw_threshold_value() {
        assert!((dkw_threshold(100_000, 0.01) - 0.005_147).abs() < 1e-6);
        assert!((dkw_threshold(200_000, 0.01) - 0.003_64).abs() < 1e-5);
    }

    #[test]
    fn dkw_small_sample_rejected() {
        let law = MarginalLaw::new(0.5, 2);
        assert!(matches!(
            dkw_cdf_gate(&[0.5; 10], &law, 0.01),
            Err(Error::InsufficientSample(_))
        ));
    }

    #[test]
    fn dkw_detects_wrong_coefficient() {
        // Exact sup gap between the p = 0.6 and p = 0.5 laws at n = 5 is
        // max_x |(1 - 0.5x)^5 - (1 - 0.6x)^5| ≈ 0.074, about fifteen times
        // the band at m = 100000.
        let gap = (0..=1000)
            .map(|i| i as f64 / 1000.0)
            .map(|x| ((1.0 - 0.5 * x).powi(5) - (1.0 - 0.6 * x).powi(5)).abs())
            .fold(0.0, f64::max);
        assert!(gap > 0.07);
        let params = ModelParams::float(0.6).unwrap();
        let sample = simulate_batch_map(&params, 5, 100_000, 8, |p| p.last());
        let report = dkw_cdf_gate(&sample, &MarginalLaw::new(0.5, 5), 0.01).unwrap();
        assert!(!report.pass);
        assert!(report.statistic > 0.05);
    }

    #[test]
    fn chi_square_p_one_bins() {
        let table = pmf(&1.0, 2);
        let bins = pool_bins(&[0, 500, 500], &table.entries).unwrap();
        assert_eq!(bins.len(), 2);
        assert_eq!(bins[0].outcomes, vec![1]);
        assert_eq!(bins[1].outcomes, vec![2]);
        assert_eq!(bins[0].expected, 500.0);
        let rep = chi_square_gate(&[0, 500, 500], &table.entries, 0.01).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.degrees_of_freedom, Some(1));
    }

    #[test]
    fn chi_square_impossible_outcome_fails() {
        let table = pmf(&1.0, 2);
        let rep = chi_square_gate(&[3, 500, 497], &table.entries, 0.01).unwrap();
        assert!(!rep.pass);
    }

    #[test]
    fn chi_square_pools_sparse_tail() {
        let probs = [0.5, 0.49, 0.009, 0.001];
        let bins = pool_bins(&[500, 490, 9, 1], &probs).unwrap();
        assert_eq!(bins.len(), 3);
        assert_eq!(bins[2].outcomes, vec![2, 3]);
        assert!(matches!(
            chi_square_gate(&[10], &[1.0], 0.01),
            Err(Error::InsufficientSample(_))
        ));
    }

    #[test]
    fn chi_square_swapped_bins_fail() {
        let params = ModelParams::exact(1, 2).unwrap();
        let table = pmf(&0.5, 5);
        let ns = simulate_batch_map(&params, 5, 200_000, 21, |p| p.jump_count());
        let mut counts = vec![0u64; 6];
        for k in ns {
            counts[k] += 1;
        }
        assert!(chi_square_gate(&counts, &table.entries, 0.01).unwrap().pass);
        counts.swap(0, 1);
        let rep = chi_square_gate(&counts, &table.entries, 0.01).unwrap();
        assert!(!rep.pass);
        assert!(rep.statistic > 1000.0 * rep.threshold);
    }

    #[test]
    fn moment_gate_examples() {
        let params = ModelParams::exact(1, 2).unwrap();
        let sample = simulate_batch_map(&params, 1, 100_000, 4, |p| p.last());
        assert!(moment_gate("E[X_1]", &sample, 0.75, "moment").unwrap().pass);

        let constant = vec![0.3; 2000];
        let rep = moment_gate("const", &constant, 0.3, "trivial").unwrap();
        assert!(rep.pass);
        assert_eq!(rep.threshold, 0.0);
    }

    #[test]
    fn frequency_gate_band() {
        let rep = frequency_gate("atom", 3125, 100_000, 0.03125, "atom").unwrap();
        assert!(rep.pass);
        let rep = frequency_gate("atom", 4000, 100_000, 0.03125, "atom").unwrap();
        assert!(!rep.pass);
    }
}
