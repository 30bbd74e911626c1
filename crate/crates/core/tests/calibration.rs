//! Gate calibration: on ensembles drawn from the exact law, each gate may
//! fail at most `3 alpha` of the time.

use staircase::counting::pmf_for;
use staircase::exact_dist::{moment, MarginalLaw};
use staircase::simulate::simulate_batch;
use staircase::stats::{chi_square_gate, dkw_cdf_gate, moment_gate};
use staircase::ModelParams;

const ALPHA: f64 = 0.01;
const ENSEMBLES: u64 = 100;
const PATHS: usize = 4_000;
const N: usize = 5;

fn allowed_failures() -> usize {
    (3.0 * ALPHA * ENSEMBLES as f64).floor() as usize
}

fn failures(params: &ModelParams, gate: impl Fn(&[staircase::simulate::Path]) -> bool) -> usize {
    (0..ENSEMBLES)
        .filter(|&seed| !gate(&simulate_batch(params, N, PATHS, 1_000 + seed)))
        .count()
}

#[test]
fn dkw_gate_is_calibrated() {
    for params in [ModelParams::exact(1, 2).unwrap(), ModelParams::exact(1, 1).unwrap()] {
        let law = MarginalLaw::new(params.p_f64(), N as u32);
        let bad = failures(&params, |paths| {
            let xs: Vec<f64> = paths.iter().map(|p| p.last()).collect();
            dkw_cdf_gate(&xs, &law, ALPHA).unwrap().pass
        });
        assert!(bad <= allowed_failures(), "{params}: {bad} failures");
    }
}

#[test]
fn chi_square_gate_is_calibrated() {
    for params in [ModelParams::exact(1, 2).unwrap(), ModelParams::exact(9, 10).unwrap()] {
        let table = pmf_for(&params, N);
        let bad = failures(&params, |paths| {
            let mut counts = vec![0u64; N + 1];
            for path in paths {
                counts[path.jump_count()] += 1;
            }
            chi_square_gate(&counts, &table.entries, ALPHA).unwrap().pass
        });
        assert!(bad <= allowed_failures(), "{params}: {bad} failures");
    }
}

#[test]
fn moment_gate_is_calibrated() {
    let params = ModelParams::exact(1, 3).unwrap();
    let exact = moment(&params.p_f64(), N as u32, 1);
    let bad = failures(&params, |paths| {
        let xs: Vec<f64> = paths.iter().map(|p| p.last()).collect();
        moment_gate("E[X_n]", &xs, exact, "moment").unwrap().pass
    });
    assert!(bad <= allowed_failures(), "{bad} failures");
}
