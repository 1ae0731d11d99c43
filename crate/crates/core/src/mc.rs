//! Monte Carlo estimation of the broken stick probability.
//!
//! Each trial draws `n` uniform break points, sorts them, and cuts the unit
//! stick into `n + 1` pieces. A trial is feasible when every piece is strictly
//! shorter than one half. Feasible trials are binned by the number of points
//! strictly below one half.
//!
//! # Random streams
//!
//! The generator is PCG-XSL-RR 128/64 (`rand_pcg::Pcg64`). Worker `w` of a
//! run with seed `s` uses
//!
//! ```text
//! h1     = splitmix64(s ^ (w * 0x9E3779B97F4A7C15))
//! h2     = splitmix64(h1 ^ 0xD1B54A32D192ED03)
//! state  = (h1 << 64) | h2
//! stream = w
//! ```
//!
//! and a uniform draw is `(next_u64() >> 11) * 2^-53`, in `[0, 1)`.
//! Trials `[w*T/W, (w+1)*T/W)` go to worker `w`. Reports are therefore a pure
//! function of `(n, trials, seed, workers)`. Changing any of this changes
//! published outputs.

use std::thread;

use rand::RngCore;
use rand_pcg::Pcg64;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum McError {
    #[error("invalid n = {0}: n ≥ 2 is required")]
    NTooSmall(u32),
    #[error("invalid trials = 0: trials ≥ 1 is required")]
    NoTrials,
    #[error("invalid workers = {0}: workers ≥ 1 is required")]
    NoWorkers(u32),
    #[error("invalid workers = {workers}: workers must not exceed trials = {trials}")]
    TooManyWorkers { workers: u32, trials: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct McConfig {
    pub n: u32,
    pub trials: u64,
    pub seed: u64,
    pub workers: u32,
}

impl McConfig {
    pub fn new(n: u32, trials: u64, seed: u64) -> Self {
        McConfig {
            n,
            trials,
            seed,
            workers: 1,
        }
    }

    pub fn with_workers(mut self, workers: u32) -> Self {
        self.workers = workers;
        self
    }

    pub fn validate(&self) -> Result<(), McError> {
        if self.n < 2 {
            return Err(McError::NTooSmall(self.n));
        }
        if self.trials == 0 {
            return Err(McError::NoTrials);
        }
        if self.workers == 0 {
            return Err(McError::NoWorkers(self.workers));
        }
        if u64::from(self.workers) > self.trials {
            return Err(McError::TooManyWorkers {
                workers: self.workers,
                trials: self.trials,
            });
        }
        Ok(())
    }
}

/// Sorted break points and the pieces `[0,x_1], [x_1,x_2], ..., [x_n,1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BreakSample {
    pub sorted_points: Vec<f64>,
    pub piece_lengths: Vec<f64>,
}

impl BreakSample {
    pub fn from_points(mut points: Vec<f64>) -> Self {
        points.sort_unstable_by(f64::total_cmp);
        let mut piece_lengths = vec![0.0; points.len() + 1];
        fill_pieces(&points, &mut piece_lengths);
        BreakSample {
            sorted_points: points,
            piece_lengths,
        }
    }
}

fn fill_pieces(sorted: &[f64], pieces: &mut [f64]) {
    let mut prev = 0.0;
    for (piece, &x) in pieces.iter_mut().zip(sorted) {
        *piece = x - prev;
        prev = x;
    }
    pieces[sorted.len()] = 1.0 - prev;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The generator for worker `worker` of a run seeded with `seed`.
pub fn worker_rng(seed: u64, worker: u32) -> Pcg64 {
    let h1 = splitmix64(seed ^ u64::from(worker).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let h2 = splitmix64(h1 ^ 0xD1B5_4A32_D192_ED03);
    Pcg64::new((u128::from(h1) << 64) | u128::from(h2), u128::from(worker))
}

/// A uniform draw in `[0, 1)` with 53 random bits.
pub fn unit_f64<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn sample_breaks<R: RngCore + ?Sized>(n: u32, rng: &mut R) -> BreakSample {
    BreakSample::from_points((0..n).map(|_| unit_f64(rng)).collect())
}

/// Every piece strictly shorter than the rest combined, i.e. `max < 1/2`
/// for pieces of total length one.
pub fn polygon_feasible(piece_lengths: &[f64]) -> bool {
    piece_lengths.iter().all(|&len| len < 0.5)
}

/// The ordered form of the polygon condition: `x_1 < 1/2`, each gap
/// `x_i - x_{i-1} < 1/2`, and `x_n > 1/2`.
pub fn ordered_constraints_hold(sorted_points: &[f64]) -> bool {
    let (Some(&first), Some(&last)) = (sorted_points.first(), sorted_points.last()) else {
        return false;
    };
    first < 0.5 && sorted_points.windows(2).all(|w| w[1] - w[0] < 0.5) && last > 0.5
}

/// Number of points strictly below one half. `sorted_points` must be sorted.
pub fn count_below_half(sorted_points: &[f64]) -> usize {
    sorted_points.partition_point(|&x| x < 0.5)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McReport {
    pub config: McConfig,
    pub feasible_count: u64,
    /// Entry `k - 1` counts feasible trials with exactly `k` points below 1/2.
    pub per_k_counts: Vec<u64>,
    pub estimate: f64,
    pub stderr: f64,
    /// Feasible trials whose below-half count fell outside `1..n`.
    pub k_range_violations: u64,
    /// Trials where the max-piece and ordered-constraint predicates disagreed.
    pub predicate_disagreements: u64,
}

impl McReport {
    pub fn per_k_frequency(&self, k: u32) -> f64 {
        let count = self.per_k_counts.get(k as usize - 1).copied().unwrap_or(0);
        count as f64 / self.config.trials as f64
    }
}

#[derive(Debug, Clone, Default)]
struct Tally {
    feasible: u64,
    per_k: Vec<u64>,
    k_range_violations: u64,
    predicate_disagreements: u64,
}

impl Tally {
    fn merge(&mut self, other: &Tally) {
        self.feasible += other.feasible;
        for (a, b) in self.per_k.iter_mut().zip(&other.per_k) {
            *a += b;
        }
        self.k_range_violations += other.k_range_violations;
        self.predicate_disagreements += other.predicate_disagreements;
    }
}

fn run_block(n: u32, trials: u64, rng: &mut Pcg64) -> Tally {
    let n = n as usize;
    let mut tally = Tally {
        per_k: vec![0; n - 1],
        ..Tally::default()
    };
    let mut points = vec![0.0; n];
    let mut pieces = vec![0.0; n + 1];
    for _ in 0..trials {
        for x in points.iter_mut() {
            *x = unit_f64(rng);
        }
        points.sort_unstable_by(f64::total_cmp);
        fill_pieces(&points, &mut pieces);

        let feasible = polygon_feasible(&pieces);
        if feasible != ordered_constraints_hold(&points) {
            tally.predicate_disagreements += 1;
        }
        if !feasible {
            continue;
        }
        tally.feasible += 1;
        match count_below_half(&points) {
            k if (1..n).contains(&k) => tally.per_k[k - 1] += 1,
            _ => tally.k_range_violations += 1,
        }
    }
    tally
}

fn block_start(worker: u64, trials: u64, workers: u64) -> u64 {
    (u128::from(worker) * u128::from(trials) / u128::from(workers)) as u64
}

pub fn run_mc(config: &McConfig) -> Result<McReport, McError> {
    config.validate()?;
    let workers = u64::from(config.workers);
    let block = |w: u32| {
        let len = block_start(u64::from(w) + 1, config.trials, workers)
            - block_start(u64::from(w), config.trials, workers);
        run_block(config.n, len, &mut worker_rng(config.seed, w))
    };

    let tallies: Vec<Tally> = if config.workers == 1 {
        vec![block(0)]
    } else {
        thread::scope(|scope| {
            let handles: Vec<_> = (0..config.workers)
                .map(|w| scope.spawn(move || block(w)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("monte carlo worker panicked"))
                .collect()
        })
    };

    let mut total = Tally {
        per_k: vec![0; config.n as usize - 1],
        ..Tally::default()
    };
    for t in &tallies {
        total.merge(t);
    }

    let trials = config.trials as f64;
    let estimate = total.feasible as f64 / trials;
    Ok(McReport {
        config: config.clone(),
        feasible_count: total.feasible,
        per_k_counts: total.per_k,
        estimate,
        stderr: (estimate * (1.0 - estimate) / trials).sqrt(),
        k_range_violations: total.k_range_violations,
        predicate_disagreements: total.predicate_disagreements,
    })
}
