//! Which subcommand exposes each library operation.
//!
//! Every entry carries a complete invocation, so the table doubles as a
//! smoke test: running each argument vector must succeed.

/// One library operation and a command line that exercises it.
#[derive(Debug, Clone, Copy)]
pub struct Operation {
    pub module: &'static str,
    pub name: &'static str,
    pub argv: &'static [&'static str],
}

const fn op(module: &'static str, name: &'static str, argv: &'static [&'static str]) -> Operation {
    Operation { module, name, argv }
}

pub const OPERATIONS: &[Operation] = &[
    op("model_core", "validate_params", &["cdf", "--p", "1/2", "--n", "1", "--x", "1/2"]),
    op("simulate", "step", &["simulate", "--p", "1/2", "--n", "3", "--seed", "1"]),
    op("simulate", "simulate_path", &["simulate", "--p", "0.7", "--n", "4"]),
    op("simulate", "simulate_batch", &["simulate", "--p", "1/2", "--n", "2", "--paths", "5", "--format", "csv"]),
    op("exact_dist", "marginal_cdf", &["cdf", "--p", "1/2", "--n", "3", "--x", "0.9"]),
    op("exact_dist", "atom_at_one", &["cdf", "--p", "1/2", "--n", "5", "--atom"]),
    op("exact_dist", "joint_survival", &["joint", "--p", "1/2", "--thresholds", "0.2,0.5,0.1"]),
    op("exact_dist", "moment", &["cdf", "--p", "1/3", "--n", "4", "--moment", "1", "--moment", "2"]),
    op("series", "falling_binomial_coeffs", &["pmf", "--p", "1/2", "--n", "6"]),
    op("series", "poly_definite_integral_0_to_x", &["pmf", "--p", "1/2", "--n", "6", "--oracle"]),
    op("series", "series_exp", &["laplace", "--p", "0.3", "--n", "5", "--t", "1"]),
    op("series", "cauchy_product", &["laplace", "--p", "0.3", "--n", "5", "--t", "1", "--x", "0.5"]),
    op("counting", "pgf_eval", &["pgf", "--p", "1/2", "--n", "4", "--z", "-1", "--z", "3/2"]),
    op("counting", "pmf", &["pmf", "--p", "0.4", "--n", "8", "--format", "csv"]),
    op("counting", "pgf_oracle", &["pmf", "--p", "2/3", "--n", "5", "--oracle"]),
    op("counting", "closed_form_Gn", &["pgf", "--p", "2/3", "--n", "3", "--z", "1/3", "--closed-form"]),
    op("counting", "mean_count", &["pmf", "--p", "1/2", "--n", "10", "--mean"]),
    op("transform", "ck", &["laplace", "--p", "0.7", "--n", "4", "--t", "2", "--ck"]),
    op("transform", "laplace_partial_sum", &["laplace", "--p", "1", "--n", "6", "--t", "0.1"]),
    op("transform", "laplace_oracle_grid", &["laplace", "--p", "0.7", "--n", "6", "--t", "5", "--grid", "1025"]),
    op("transform", "gf_closed_form", &["laplace", "--p", "0.3", "--n", "10", "--t", "1", "--z", "0.5"]),
    op("martingale", "build_family", &["martingale", "--p", "0.3", "--n", "3", "--family", "log-seed"]),
    op("martingale", "example_family", &["martingale", "--p", "0.7", "--n", "3", "--x", "0.5"]),
    op("martingale", "martingale_residual", &["martingale", "--p", "1", "--n", "2", "--x", "0.9"]),
    op("martingale", "mc_martingale_check", &["martingale", "--p", "1/2", "--n", "1", "--paths", "20000", "--seed", "3"]),
    op("stats", "dkw_cdf_gate", &["verify", "--p", "1/2", "--paths", "20000", "--seed", "42"]),
    op("stats", "chi_square_gate", &["verify", "--p", "9/10", "--paths", "20000", "--seed", "7", "--format", "csv"]),
    op("stats", "moment_gate", &["verify", "--p", "0.3", "--paths", "20000", "--seed", "11"]),
    op("cli", "run", &["pmf", "--p", "1/2", "--n", "2", "--mode", "exact", "--format", "json"]),
];
