//! Seedable simulation of the staircase chain.
//!
//! From state `x` the chain jumps with probability `p * x` to a uniform
//! point of `(0, x)`, and otherwise stays put. Every step consumes two
//! uniforms: one for the jump decision and one for the landing level.
//!
//! Path `i` of a batch is generated from its own ChaCha8 stream: the key is
//! derived from the master seed and the stream id is the path index, so the
//! content of a path depends only on `(master_seed, path_index)` and batches
//! can be generated in parallel without changing the result.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;

/// Description of the generator, echoed into verification reports.
pub const GENERATOR: &str =
    "rand_chacha 0.3 ChaCha8Rng: key = seed_from_u64(master_seed), stream = path_index; \
     two f64 uniforms per step (jump, level), zero level draws rejected";

/// One transition of the chain given the two uniforms for this step.
///
/// Returns `x * u_level` when `u_jump < p * x`, otherwise `x`.
pub fn step(x: f64, p: f64, u_jump: f64, u_level: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::Domain(format!("state {x} is outside (0, 1]")));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Domain(format!("coefficient {p} is outside (0, 1]")));
    }
    if !(0.0..1.0).contains(&u_jump) || !(u_level > 0.0 && u_level < 1.0) {
        return Err(Error::Domain("uniform draws out of range".into()));
    }
    Ok(step_unchecked(x, p, u_jump, u_level))
}

#[inline]
fn step_unchecked(x: f64, p: f64, u_jump: f64, u_level: f64) -> f64 {
    if u_jump < p * x {
        x * u_level
    } else {
        x
    }
}

/// Identifies the random substream of a single path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub path_index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, path_index: u64) -> Self {
        Self {
            master_seed,
            path_index,
        }
    }

    /// The generator for this substream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.path_index);
        rng
    }
}

/// Uniform on `[0, 1)`.
fn uniform<R: Rng>(rng: &mut R) -> f64 {
    rng.gen::<f64>()
}

/// Uniform on `(0, 1)`: zero is rejected and redrawn.
fn open_uniform<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let u = rng.gen::<f64>();
        if u > 0.0 {
            return u;
        }
    }
}

/// A realized trajectory `X_0 = 1, X_1, ..., X_n` with its jump indicators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Path {
    pub states: Vec<f64>,
    pub jumps: Vec<u8>,
}

impl Path {
    /// Horizon (number of steps).
    pub fn n(&self) -> usize {
        self.jumps.len()
    }

    pub fn last(&self) -> f64 {
        *self.states.last().expect("paths always contain X_0")
    }

    pub fn jump_count(&self) -> usize {
        self.jumps.iter().filter(|&&j| j == 1).count()
    }

    /// `N_k`, the number of jumps in the first `k` steps.
    pub fn jumps_until(&self, k: usize) -> usize {
        self.jumps[..k].iter().filter(|&&j| j == 1).count()
    }

    /// `X_1 + ... + X_k`.
    pub fn partial_sum(&self, k: usize) -> f64 {
        self.states[1..=k].iter().sum()
    }

    /// Checks start point, monotonicity, positivity, and indicator
    /// consistency.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        if self.states.len() != self.jumps.len() + 1 {
            return Err("states must have one more entry than jumps".into());
        }
        if self.states[0] != 1.0 {
            return Err(format!("X_0 = {} instead of 1", self.states[0]));
        }
        for (i, w) in self.states.windows(2).enumerate() {
            let (prev, cur) = (w[0], w[1]);
            if !(cur > 0.0) {
                return Err(format!("X_{} = {cur} is not positive", i + 1));
            }
            if cur > prev {
                return Err(format!("X_{} > X_{}", i + 1, i));
            }
            let jumped = cur < prev;
            if jumped != (self.jumps[i] == 1) || self.jumps[i] > 1 {
                return Err(format!("jump indicator {} inconsistent", i + 1));
            }
        }
        Ok(())
    }
}

/// Simulates `n` steps from `X_0 = 1` on the substream given by `seed`.
pub fn simulate_path(params: &ModelParams, n: usize, seed: SeedSpec) -> Path {
    simulate_with_p(params.p_f64(), n, seed)
}

fn simulate_with_p(p: f64, n: usize, seed: SeedSpec) -> Path {
    let mut rng = seed.rng();
    let mut states = Vec::with_capacity(n + 1);
    let mut jumps = Vec::with_capacity(n);
    let mut x = 1.0_f64;
    states.push(x);
    for _ in 0..n {
        let u_jump = uniform(&mut rng);
        let u_level = open_uniform(&mut rng);
        let next = step_unchecked(x, p, u_jump, u_level);
        jumps.push(u8::from(next < x));
        x = next;
        states.push(x);
    }
    Path { states, jumps }
}

/// Lazily yields paths `0..m` of an ensemble, in index order.
pub fn batch_iter(
    params: &ModelParams,
    n: usize,
    m: usize,
    master_seed: u64,
) -> impl Iterator<Item = Path> {
    let p = params.p_f64();
    (0..m as u64).map(move |i| simulate_with_p(p, n, SeedSpec::new(master_seed, i)))
}

/// Simulates `m` independent paths, in parallel, ordered by path index.
pub fn simulate_batch(params: &ModelParams, n: usize, m: usize, master_seed: u64) -> Vec<Path> {
    simulate_batch_map(params, n, m, master_seed, |p| p.clone())
}

/// Simulates `m` paths and keeps only `f(path)` for each, in index order.
/// Useful for large ensembles where only a statistic per path is needed.
pub fn simulate_batch_map<T, F>(
    params: &ModelParams,
    n: usize,
    m: usize,
    master_seed: u64,
    f: F,
) -> Vec<T>
where
    T: Send,
    F: Fn(&Path) -> T + Sync + Send,
{
    let p = params.p_f64();
    (0..m as u64)
        .into_par_iter()
        .map(|i| f(&simulate_with_p(p, n, SeedSpec::new(master_seed, i))))
        .collect()
}

#[derive(Serialize)]
struct PathRecord<'a> {
    index: usize,
    states: &'a [f64],
    jumps: &'a [u8],
}

/// Writes one JSON object per line: `{index, states, jumps}`.
pub fn write_paths_json<W: Write>(mut out: W, paths: &[Path]) -> std::io::Result<()> {
    for (index, path) in paths.iter().enumerate() {
        let rec = PathRecord {
            index,
            states: &path.states,
            jumps: &path.jumps,
        };
        serde_json::to_writer(&mut out, &rec)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Writes CSV with columns `path,step,state,jump`. Step 0 carries jump 0.
pub fn write_paths_csv<W: Write>(out: W, paths: &[Path]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["path", "step", "state", "jump"])?;
    for (index, path) in paths.iter().enumerate() {
        for (step, state) in path.states.iter().enumerate() {
            let jump = if step == 0 { 0 } else { path.jumps[step - 1] };
            w.write_record([
                index.to_string(),
                step.to_string(),
                format!("{state:.17e}"),
                jump.to_string(),
            ])?;
        }
    }
    w.flush()
}
