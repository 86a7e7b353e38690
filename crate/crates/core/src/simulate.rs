//! Reproducible Monte Carlo for absorption counts of random walks and
//! bridges.
//!
//! A *k-tuple* of path points is **nonabsorbed** when the convex hull of the
//! selected points misses the origin; [`count_nonabsorbed_tuples`] counts
//! such tuples along one path and halves the count (antipodal chambers pair
//! the tuples, so the natural statistic is half the raw count).
//! [`monte_carlo_expected_m`] averages that statistic over independently
//! seeded paths.
//!
//! Reproducibility contract: every path is generated by a `ChaCha8` stream
//! whose 64-bit seed is `seed ⊕ trial-index`, and per-trial counts are
//! accumulated as exact integers, so an estimate depends only on
//! `(n, k, d, sampler, bridge, trials, seed)` — never on the worker count or
//! the scheduling of work across threads.

use crate::exact::{binomial, expected_m_bridge, expected_m_walk, ExactError};
use crate::geometry::{origin_in_hull_indexed, GeometryError, HullScratch};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::distributions::{Distribution, Uniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use thiserror::Error;

/// Errors from sampling and Monte Carlo estimation.
#[derive(Debug, Error, PartialEq)]
pub enum SimulateError {
    #[error("{name} must be at least {min}, got {got}")]
    BelowMinimum {
        name: &'static str,
        got: usize,
        min: usize,
    },
    #[error("k must be between 1 and {max}, got {k}")]
    KOutOfRange { k: usize, max: usize },
    #[error("number of trials must be positive")]
    ZeroTrials,
    #[error("worker count must be positive")]
    ZeroWorkers,
    #[error("failed to build worker pool: {0}")]
    WorkerPool(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn require_min(name: &'static str, got: usize, min: usize) -> Result<(), SimulateError> {
    if got < min {
        Err(SimulateError::BelowMinimum { name, got, min })
    } else {
        Ok(())
    }
}

/// Increment distributions for walk and bridge paths.
///
/// All four produce exchangeable, coordinatewise sign-symmetric increment
/// vectors with continuous distributions, so paths are almost surely in
/// general position and the exact expectations apply to every one of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IncrementSampler {
    /// Independent standard normal coordinates.
    Gaussian,
    /// Isotropic Cauchy: a standard normal vector divided by the absolute
    /// value of an independent scalar standard normal. No moments exist.
    HeavyTail,
    /// Independent coordinates uniform on `[-1, 1]`.
    UniformCube,
    /// A Brownian motion observed at `n` sorted uniform times on `(0, 1)`:
    /// increment `i` is `sqrt(gap_i)` times a standard normal vector, where
    /// the gaps are the spacings of the sorted times. The increments are
    /// dependent yet exchangeable, exercising the estimator beyond the
    /// i.i.d. case.
    BrownianUniformTimes,
}

impl IncrementSampler {
    /// Draws the joint vector of `n` increments in dimension `d`.
    pub fn sample_increments<R: Rng>(self, n: usize, d: usize, rng: &mut R) -> Vec<Vec<f64>> {
        match self {
            IncrementSampler::Gaussian => (0..n).map(|_| normal_vec(d, rng)).collect(),
            IncrementSampler::HeavyTail => (0..n)
                .map(|_| {
                    let z: f64 = loop {
                        let z: f64 = StandardNormal.sample(rng);
                        if z != 0.0 {
                            break z;
                        }
                    };
                    normal_vec(d, rng).into_iter().map(|g| g / z.abs()).collect()
                })
                .collect(),
            IncrementSampler::UniformCube => {
                let u = Uniform::new_inclusive(-1.0f64, 1.0f64);
                (0..n).map(|_| (0..d).map(|_| u.sample(rng)).collect()).collect()
            }
            IncrementSampler::BrownianUniformTimes => {
                let mut times: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
                times.sort_by(f64::total_cmp);
                let mut prev = 0.0;
                times
                    .into_iter()
                    .map(|t| {
                        let scale = (t - prev).sqrt();
                        prev = t;
                        normal_vec(d, rng).into_iter().map(|g| g * scale).collect()
                    })
                    .collect()
            }
        }
    }
}

fn normal_vec<R: Rng>(d: usize, rng: &mut R) -> Vec<f64> {
    (0..d).map(|_| StandardNormal.sample(rng)).collect()
}

/// A sampled walk: increments `ξ_1..ξ_n` and partial sums `S_1..S_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkPath {
    increments: Vec<Vec<f64>>,
    sums: Vec<Vec<f64>>,
}

/// A sampled bridge: increments centered so the final sum vanishes, with
/// partial sums `S_1..S_n` (where `S_n = 0` up to rounding).
#[derive(Clone, Debug, PartialEq)]
pub struct BridgePath {
    increments: Vec<Vec<f64>>,
    sums: Vec<Vec<f64>>,
}

fn prefix_sums(increments: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let d = increments[0].len();
    let mut acc = vec![0.0; d];
    increments
        .iter()
        .map(|xi| {
            for (a, x) in acc.iter_mut().zip(xi) {
                *a += x;
            }
            acc.clone()
        })
        .collect()
}

impl WalkPath {
    pub fn n(&self) -> usize {
        self.increments.len()
    }

    pub fn dim(&self) -> usize {
        self.increments[0].len()
    }

    pub fn increments(&self) -> &[Vec<f64>] {
        &self.increments
    }

    pub fn sums(&self) -> &[Vec<f64>] {
        &self.sums
    }

    /// The points whose k-tuples are counted: all partial sums.
    pub fn counting_points(&self) -> &[Vec<f64>] {
        &self.sums
    }
}

impl BridgePath {
    pub fn n(&self) -> usize {
        self.increments.len()
    }

    pub fn dim(&self) -> usize {
        self.increments[0].len()
    }

    pub fn increments(&self) -> &[Vec<f64>] {
        &self.increments
    }

    pub fn sums(&self) -> &[Vec<f64>] {
        &self.sums
    }

    /// The points whose k-tuples are counted: `S_1..S_{n-1}`. The final sum
    /// is identically zero, so tuples through it are absorbed by definition
    /// and are excluded from counting.
    pub fn counting_points(&self) -> &[Vec<f64>] {
        &self.sums[..self.sums.len() - 1]
    }
}

/// Samples a walk of `n` steps in dimension `d` from the `ChaCha8` stream
/// seeded by `seed`.
pub fn sample_walk(
    n: usize,
    d: usize,
    sampler: IncrementSampler,
    seed: u64,
) -> Result<WalkPath, SimulateError> {
    require_min("n", n, 1)?;
    require_min("d", d, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let increments = sampler.sample_increments(n, d, &mut rng);
    let sums = prefix_sums(&increments);
    Ok(WalkPath { increments, sums })
}

/// Samples a bridge of `n` steps in dimension `d`: the walk's increments are
/// shifted by `-S_n/n` so they sum to zero. Uses the same increment stream
/// as [`sample_walk`] with the same arguments.
pub fn sample_bridge(
    n: usize,
    d: usize,
    sampler: IncrementSampler,
    seed: u64,
) -> Result<BridgePath, SimulateError> {
    require_min("n", n, 2)?;
    require_min("d", d, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut increments = sampler.sample_increments(n, d, &mut rng);
    let mut mean = vec![0.0; d];
    for xi in &increments {
        for (m, x) in mean.iter_mut().zip(xi) {
            *m += x;
        }
    }
    for m in mean.iter_mut() {
        *m /= n as f64;
    }
    for xi in increments.iter_mut() {
        for (x, m) in xi.iter_mut().zip(&mean) {
            *x -= m;
        }
    }
    let sums = prefix_sums(&increments);
    Ok(BridgePath { increments, sums })
}

/// How [`count_nonabsorbed_tuples`] explores the k-tuples of a path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMode {
    /// Visit every k-subset.
    Exhaustive,
    /// Visit `tuples` independent uniform k-subsets drawn from the `ChaCha8`
    /// stream seeded by `seed`, and scale the hit count by
    /// `C(m, k) / tuples` — an unbiased estimate of the exhaustive count.
    /// Falls back to exhaustive counting when `tuples ≥ C(m, k)`.
    Sampled { tuples: u64, seed: u64 },
}

/// Visits k-subsets of `0..m` in lexicographic order until the visitor
/// errors or the subsets are exhausted.
pub(crate) fn for_each_k_subset<E>(
    m: usize,
    k: usize,
    mut visit: impl FnMut(&[usize]) -> Result<(), E>,
) -> Result<(), E> {
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx)?;
        // Advance: find the rightmost index that can still move up.
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if idx[i] != i + m - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn subset_misses_origin(
    points: &[Vec<f64>],
    idx: &[usize],
    scratch: &mut HullScratch,
) -> Result<bool, GeometryError> {
    // Separation prefilter: a coordinate axis keeping one strict sign
    // across the subset rules the origin out of the hull without a simplex
    // solve. Sound for finite inputs, which the caller has validated.
    'axes: for (r, &first) in points[idx[0]].iter().enumerate() {
        if first == 0.0 {
            continue;
        }
        let positive = first > 0.0;
        for &i in &idx[1..] {
            let x = points[i][r];
            if x == 0.0 || (x > 0.0) != positive {
                continue 'axes;
            }
        }
        return Ok(true);
    }
    Ok(!origin_in_hull_indexed(points, idx, scratch)?)
}

fn exhaustive_nonabsorbed_count(points: &[Vec<f64>], k: usize) -> Result<u64, GeometryError> {
    let mut count = 0u64;
    let mut scratch = HullScratch::new();
    for_each_k_subset(points.len(), k, |idx| {
        if subset_misses_origin(points, idx, &mut scratch)? {
            count += 1;
        }
        Ok(())
    })?;
    Ok(count)
}

/// Counts the k-tuples of `points` whose convex hull misses the origin.
///
/// Returns `(count, count / 2)`; the halved value is the statistic whose
/// expectation the exact layer computes. In `Sampled` mode the count is the
/// unbiased rescaled hit count and may be a non-integer rational.
pub fn count_nonabsorbed_tuples(
    points: &[Vec<f64>],
    k: usize,
    mode: CountMode,
) -> Result<(BigRational, BigRational), SimulateError> {
    let m = points.len();
    require_min("number of points", m, 1)?;
    if k == 0 || k > m {
        return Err(SimulateError::KOutOfRange { k, max: m });
    }
    // Validate shape and finiteness once up front; the per-tuple fast path
    // relies on it.
    let d = points[0].len();
    if d == 0 {
        return Err(SimulateError::Geometry(GeometryError::EmptyInput));
    }
    for p in points {
        if p.len() != d {
            return Err(SimulateError::Geometry(GeometryError::DimensionMismatch {
                expected: d,
                got: p.len(),
            }));
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(SimulateError::Geometry(GeometryError::NonFiniteInput));
        }
    }
    let total = binomial(m, k);
    let count = match mode {
        CountMode::Sampled { tuples, seed } if BigInt::from(tuples) < total => {
            require_min("tuples", tuples as usize, 1)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut indices: Vec<usize> = (0..m).collect();
            let mut hits = 0u64;
            let mut scratch = HullScratch::new();
            for _ in 0..tuples {
                // Partial Fisher–Yates: the first k entries become a
                // uniform k-subset.
                for i in 0..k {
                    let j = rng.gen_range(i..m);
                    indices.swap(i, j);
                }
                let mut subset: Vec<usize> = indices[..k].to_vec();
                subset.sort_unstable();
                if subset_misses_origin(points, &subset, &mut scratch)? {
                    hits += 1;
                }
            }
            BigRational::new(total * BigInt::from(hits), BigInt::from(tuples))
        }
        _ => BigRational::from_integer(BigInt::from(exhaustive_nonabsorbed_count(points, k)?)),
    };
    let half = &count / BigRational::from_integer(BigInt::from(2));
    Ok((count, half))
}

/// A Monte Carlo estimate of the expected halved nonabsorbed-tuple count,
/// together with the exact target it estimates.
#[derive(Clone, Debug, PartialEq)]
pub struct MonteCarloEstimate {
    /// Sample mean of the halved count.
    pub mean: f64,
    /// Standard error of the mean.
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
    /// The exact expectation for these parameters.
    pub target: BigRational,
}

impl MonteCarloEstimate {
    /// Absolute deviation of the estimate from the exact target.
    pub fn absolute_error(&self) -> f64 {
        let t = self.target.to_f64().expect("target fits in f64");
        (self.mean - t).abs()
    }

    /// Whether the estimate lies within `k_sigma` standard errors of the
    /// exact target.
    pub fn within(&self, k_sigma: f64) -> bool {
        self.absolute_error() <= k_sigma * self.std_error
    }
}

fn trial_count(
    n: usize,
    k: usize,
    d: usize,
    sampler: IncrementSampler,
    bridge: bool,
    trial_seed: u64,
) -> Result<u64, SimulateError> {
    if bridge {
        let path = sample_bridge(n, d, sampler, trial_seed)?;
        Ok(exhaustive_nonabsorbed_count(path.counting_points(), k)?)
    } else {
        let path = sample_walk(n, d, sampler, trial_seed)?;
        Ok(exhaustive_nonabsorbed_count(path.counting_points(), k)?)
    }
}

#[cfg(feature = "parallel")]
fn accumulate(
    trials: u64,
    workers: usize,
    trial: impl Fn(u64) -> Result<(u128, u128), SimulateError> + Send + Sync,
) -> Result<(u128, u128), SimulateError> {
    if workers == 1 {
        return accumulate_sequential(trials, trial);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| SimulateError::WorkerPool(e.to_string()))?;
    pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(trial)
            .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))
    })
}

#[cfg(not(feature = "parallel"))]
fn accumulate(
    trials: u64,
    _workers: usize,
    trial: impl Fn(u64) -> Result<(u128, u128), SimulateError> + Send + Sync,
) -> Result<(u128, u128), SimulateError> {
    accumulate_sequential(trials, trial)
}

fn accumulate_sequential(
    trials: u64,
    trial: impl Fn(u64) -> Result<(u128, u128), SimulateError>,
) -> Result<(u128, u128), SimulateError> {
    let mut acc = (0u128, 0u128);
    for i in 0..trials {
        let (c, c2) = trial(i)?;
        acc.0 += c;
        acc.1 += c2;
    }
    Ok(acc)
}

/// Estimates the expected halved nonabsorbed-k-tuple count over `trials`
/// independent paths, exhaustively counting tuples on each path.
///
/// Trial `i` uses the path seed `seed ⊕ i`; per-trial counts are integers
/// and are summed exactly, so the estimate is bit-identical for every
/// `workers` value. `workers > 1` requires the `parallel` feature to have
/// any effect (the estimate is unchanged either way).
#[allow(clippy::too_many_arguments)]
pub fn monte_carlo_expected_m(
    n: usize,
    k: usize,
    d: usize,
    sampler: IncrementSampler,
    bridge: bool,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<MonteCarloEstimate, SimulateError> {
    require_min("n", n, if bridge { 2 } else { 1 })?;
    require_min("d", d, 1)?;
    let max_k = if bridge { n - 1 } else { n };
    if k == 0 || k > max_k {
        return Err(SimulateError::KOutOfRange { k, max: max_k });
    }
    if trials == 0 {
        return Err(SimulateError::ZeroTrials);
    }
    if workers == 0 {
        return Err(SimulateError::ZeroWorkers);
    }

    let target = if bridge {
        expected_m_bridge(n, k, d)?
    } else {
        expected_m_walk(n, k, d)?
    };

    let (sum, sum_sq) = accumulate(trials, workers, |i| {
        let c = trial_count(n, k, d, sampler, bridge, seed ^ i)? as u128;
        Ok((c, c * c))
    })?;

    let t = trials as f64;
    let mean_count = sum as f64 / t;
    let std_error = if trials >= 2 {
        let var_count = ((sum_sq as f64) - (sum as f64) * mean_count) / (t - 1.0);
        (var_count.max(0.0) / t).sqrt() / 2.0
    } else {
        0.0
    };
    Ok(MonteCarloEstimate {
        mean: mean_count / 2.0,
        std_error,
        trials,
        seed,
        target,
    })
}
