//! Face statistics of the signed and unsigned permutation chamber fans.
//!
//! The signed fan tiles `ℝ^n` with `2^n n!` simplicial cones (chambers)
//! `ε_1 x_{σ(1)} ≥ … ≥ ε_n x_{σ(n)} ≥ 0`; the unsigned fan drops the signs
//! and the final inequality and its chambers share the diagonal lineality
//! line. This module enumerates the k-faces of either fan as weighted block
//! partitions, averages the "face meets a generic subspace only at the
//! origin" indicator over all chambers, and compares the result against the
//! closed forms from the `exact` module. It also verifies, path by path,
//! the correspondence between absorbed k-tuples of partial sums and chamber
//! faces meeting the kernel of the increment matrix, and samples chambers
//! uniformly to reproduce the arcsine vertex-count law.

mod partitions;

pub use partitions::{
    enumerate_partitions, enumerate_signed_partitions, face_multiplicity, Partition,
    PartitionIter, SignedPartition, SignedPartitionIter,
};

use crate::exact::{
    arcsine_pmf, binomial, expected_m_walk, factorial, pow2, stirling_row, ExactError,
};
use crate::geometry::{
    cone_meets_subspace_trivially, general_position_check, matrix_rank, origin_in_hull,
    Arrangement, ConeKind, GeometryError, RatMatrix, RatVector, SubspaceSpec, MAX_GP_AMBIENT,
};
use crate::simulate::for_each_k_subset;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Largest `n` for which the degenerate-normal screen (exhaustive over the
/// `3^n − 1` nonzero sign vectors) is still cheap.
pub const MAX_VERTEX_AMBIENT: usize = 12;

/// Magnitude bound for the integer entries of randomly drawn test
/// subspaces.
pub const RANDOM_SUBSPACE_BOUND: i64 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeylError {
    #[error("{name} must be at least {min}, got {got}")]
    BelowMinimum {
        name: &'static str,
        got: usize,
        min: usize,
    },
    #[error("k must be between 1 and {max}, got {k}")]
    KOutOfRange { k: usize, max: usize },
    #[error("codimension d must be between 1 and {max}, got {d}")]
    DOutOfRange { d: usize, max: usize },
    #[error("size {n} exceeds the supported maximum {max}")]
    UnsupportedSize { n: usize, max: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("subspace is not in general position for the {0:?} arrangement")]
    NotGeneralPosition(Arrangement),
    #[error("path increments are not in general position")]
    PathNotGeneralPosition,
    #[error("bridge increments must sum to zero exactly")]
    NotCentered,
    #[error("halfspace normal is orthogonal to a vertex direction")]
    DegenerateNormal,
    #[error("blocks must be nonempty and partition the ground set")]
    InvalidPartition,
    #[error("signs must be +1 or -1 off the zero block and 0 on it")]
    InvalidSign,
    #[error("sigma must be a permutation of 0..n")]
    InvalidPermutation,
    #[error("number of trials must be positive")]
    ZeroTrials,
    #[error("number of workers must be positive")]
    ZeroWorkers,
    #[error("worker pool: {0}")]
    WorkerPool(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Outcome of comparing an exhaustive chamber-average of the trivial-
/// intersection indicator against its closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct FaceCountReport {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub subspace: SubspaceSpec,
    /// Multiplicity-weighted fraction of chambers whose k-face meets the
    /// subspace only at the origin (for the unsigned fan: only along the
    /// diagonal's complement, i.e. `F ∩ L = {0}`).
    pub average_trivial: BigRational,
    /// The closed-form prediction for the same average.
    pub formula_value: BigRational,
    /// Whether the two agree exactly.
    pub matches: bool,
}

fn ratio(numer: BigInt, denom: BigInt) -> BigRational {
    BigRational::new(numer, denom)
}

/// Closed form for the signed-fan average: `2 C(n,k) (B_{k,d−1} +
/// B_{k,d−3} + …) / (2^k k!)`, i.e. twice the expected number of
/// nonabsorbed k-tuples of a length-n walk in dimension d.
fn formula_value_b(n: usize, k: usize, d: usize) -> Result<BigRational, ExactError> {
    Ok(expected_m_walk(n, k, d)? * BigRational::from_integer(BigInt::from(2)))
}

/// Closed form for the unsigned-fan average: `(2/k!) C(n−1,k−1) (s(k,d−1) +
/// s(k,d−3) + …)` with unsigned Stirling numbers of the first kind.
fn formula_value_a(n: usize, k: usize, d: usize) -> Result<BigRational, ExactError> {
    let row = stirling_row(k)?;
    let numer = BigInt::from(2) * binomial(n - 1, k - 1) * row.descending_sum(d as isize - 1);
    Ok(ratio(numer, factorial(k)))
}

fn validate_average_inputs(
    n: usize,
    k: usize,
    d: usize,
    l: &SubspaceSpec,
    arrangement: Arrangement,
) -> Result<(), WeylError> {
    if n < 1 {
        return Err(WeylError::BelowMinimum {
            name: "n",
            got: n,
            min: 1,
        });
    }
    if n > MAX_GP_AMBIENT {
        return Err(WeylError::UnsupportedSize {
            n,
            max: MAX_GP_AMBIENT,
        });
    }
    if k == 0 || k > n {
        return Err(WeylError::KOutOfRange { k, max: n });
    }
    if d == 0 || d > n {
        return Err(WeylError::DOutOfRange { d, max: n });
    }
    if l.ambient_dim() != n {
        return Err(WeylError::DimensionMismatch {
            expected: n,
            got: l.ambient_dim(),
        });
    }
    if l.codim() != d {
        return Err(WeylError::DimensionMismatch {
            expected: d,
            got: l.codim(),
        });
    }
    if !general_position_check(l, arrangement)? {
        return Err(WeylError::NotGeneralPosition(arrangement));
    }
    Ok(())
}

/// Whether the signed-fan face of `p` meets `ker(constraints)` only at the
/// origin. On the face, coordinates of block `I_l` equal `η_j γ_l`, so the
/// face is the chain cone `γ_1 ≥ … ≥ γ_k ≥ 0` pushed through the signed
/// block-sum matrix `D[r][l] = Σ_{j ∈ I_l} η_j C[r][j]`.
fn signed_face_trivial(p: &SignedPartition, c: &RatMatrix) -> Result<bool, WeylError> {
    let d = c.rows();
    let mut rows = Vec::with_capacity(d);
    for r in 0..d {
        let mut row = Vec::with_capacity(p.k());
        for block in p.blocks() {
            let mut s = BigRational::zero();
            for &e in block {
                if p.signs()[e] == 1 {
                    s += c.get(r, e).clone();
                } else {
                    s -= c.get(r, e).clone();
                }
            }
            row.push(s);
        }
        rows.push(row);
    }
    let d_matrix = RatMatrix::from_rows(rows)?;
    Ok(cone_meets_subspace_trivially(ConeKind::ChainB, &d_matrix)?)
}

/// Whether the unsigned-fan face of `p` meets `ker(constraints)` only at
/// the origin. The face is the free chain cone `γ_1 ≥ … ≥ γ_k` (with the
/// diagonal as lineality) pushed through plain block sums.
fn unsigned_face_trivial(p: &Partition, c: &RatMatrix) -> Result<bool, WeylError> {
    let d = c.rows();
    let mut rows = Vec::with_capacity(d);
    for r in 0..d {
        let mut row = Vec::with_capacity(p.k());
        for block in p.blocks() {
            let mut s = BigRational::zero();
            for &e in block {
                s += c.get(r, e).clone();
            }
            row.push(s);
        }
        rows.push(row);
    }
    let d_matrix = RatMatrix::from_rows(rows)?;
    Ok(cone_meets_subspace_trivially(ConeKind::ChainA, &d_matrix)?)
}

/// Multiplicity-weighted trivial-intersection mass over the signed k-faces
/// whose zero-block masks lie in `masks`.
fn signed_trivial_mass(
    n: usize,
    k: usize,
    c: &RatMatrix,
    masks: std::ops::Range<u32>,
) -> Result<BigInt, WeylError> {
    let mut total = BigInt::zero();
    for p in partitions::signed_partitions_for_masks(n, k, masks)? {
        if signed_face_trivial(&p, c)? {
            total += p.multiplicity();
        }
    }
    Ok(total)
}

#[cfg(feature = "parallel")]
fn signed_trivial_mass_parallel(n: usize, k: usize, c: &RatMatrix) -> Result<BigInt, WeylError> {
    (0..(1u32 << n))
        .into_par_iter()
        .map(|m| signed_trivial_mass(n, k, c, m..m + 1))
        .try_reduce(BigInt::zero, |a, b| Ok(a + b))
}

fn signed_trivial_mass_default(n: usize, k: usize, c: &RatMatrix) -> Result<BigInt, WeylError> {
    #[cfg(feature = "parallel")]
    {
        signed_trivial_mass_parallel(n, k, c)
    }
    #[cfg(not(feature = "parallel"))]
    {
        signed_trivial_mass(n, k, c, 0..(1u32 << n))
    }
}

/// Averages the trivial-intersection indicator of the k-faces over all
/// `2^n n!` signed-fan chambers (each face weighted by the number of
/// chambers containing it) and compares with the closed form.
///
/// The subspace must pass the general-position screen for the signed
/// arrangement; failure is reported as an error, not as a mismatch.
pub fn average_trivial_faces_b(
    n: usize,
    k: usize,
    d: usize,
    l: &SubspaceSpec,
) -> Result<FaceCountReport, WeylError> {
    validate_average_inputs(n, k, d, l, Arrangement::B)?;
    let mass = signed_trivial_mass_default(n, k, l.constraints())?;
    let average = ratio(mass, pow2(n) * factorial(n));
    let formula = formula_value_b(n, k, d)?;
    Ok(FaceCountReport {
        n,
        k,
        d,
        subspace: l.clone(),
        matches: average == formula,
        average_trivial: average,
        formula_value: formula,
    })
}

/// [`average_trivial_faces_b`] with an explicit worker count. `1` forces a
/// sequential scan; larger counts split the face stream by zero-block mask
/// across a dedicated pool. The reduction is exact-integer, so the result
/// is identical for every worker count.
pub fn average_trivial_faces_b_with_workers(
    n: usize,
    k: usize,
    d: usize,
    l: &SubspaceSpec,
    workers: usize,
) -> Result<FaceCountReport, WeylError> {
    if workers == 0 {
        return Err(WeylError::ZeroWorkers);
    }
    validate_average_inputs(n, k, d, l, Arrangement::B)?;
    let c = l.constraints();
    let mass = if workers == 1 {
        signed_trivial_mass(n, k, c, 0..(1u32 << n))?
    } else {
        #[cfg(feature = "parallel")]
        {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| WeylError::WorkerPool(e.to_string()))?;
            pool.install(|| signed_trivial_mass_parallel(n, k, c))?
        }
        #[cfg(not(feature = "parallel"))]
        {
            signed_trivial_mass(n, k, c, 0..(1u32 << n))?
        }
    };
    let average = ratio(mass, pow2(n) * factorial(n));
    let formula = formula_value_b(n, k, d)?;
    Ok(FaceCountReport {
        n,
        k,
        d,
        subspace: l.clone(),
        matches: average == formula,
        average_trivial: average,
        formula_value: formula,
    })
}

/// Averages the trivial-intersection indicator of the k-faces over all
/// `n!` unsigned-fan chambers and compares with the closed form. The face
/// family here is small (at most ordered-Bell many), so the scan is always
/// sequential.
///
/// Note: for `k = 1` the only face is the diagonal line itself, which meets
/// a general-position subspace trivially for every `d ≥ 1`, so the
/// exhaustive average is `1` while the closed form evaluates to `0` or `2`;
/// the report flags that disagreement rather than hiding it.
pub fn average_trivial_faces_a(
    n: usize,
    k: usize,
    d: usize,
    l: &SubspaceSpec,
) -> Result<FaceCountReport, WeylError> {
    validate_average_inputs(n, k, d, l, Arrangement::A)?;
    let c = l.constraints();
    let mut mass = BigInt::zero();
    for p in enumerate_partitions(n, k)? {
        if unsigned_face_trivial(&p, c)? {
            mass += p.multiplicity();
        }
    }
    let average = ratio(mass, factorial(n));
    let formula = formula_value_a(n, k, d)?;
    Ok(FaceCountReport {
        n,
        k,
        d,
        subspace: l.clone(),
        matches: average == formula,
        average_trivial: average,
        formula_value: formula,
    })
}

fn validate_increments(increments: &[RatVector], min_n: usize) -> Result<usize, WeylError> {
    let n = increments.len();
    if n < min_n {
        return Err(WeylError::BelowMinimum {
            name: "n",
            got: n,
            min: min_n,
        });
    }
    if n > MAX_GP_AMBIENT {
        return Err(WeylError::UnsupportedSize {
            n,
            max: MAX_GP_AMBIENT,
        });
    }
    let d = increments[0].len();
    if d < 1 {
        return Err(WeylError::BelowMinimum {
            name: "d",
            got: d,
            min: 1,
        });
    }
    for xi in increments {
        if xi.len() != d {
            return Err(WeylError::DimensionMismatch {
                expected: d,
                got: xi.len(),
            });
        }
    }
    Ok(d)
}

/// Certifies that every d-subset of the increments is linearly
/// independent, so the kernel of the increment matrix meets the coordinate
/// lattice generically.
fn certify_increments(increments: &[RatVector], d: usize) -> Result<(), WeylError> {
    let n = increments.len();
    if d > n {
        return Err(WeylError::PathNotGeneralPosition);
    }
    for_each_k_subset(n, d, |idx| {
        let rows: Vec<Vec<BigRational>> = idx.iter().map(|&i| increments[i].clone()).collect();
        let m = RatMatrix::from_rows(rows).map_err(WeylError::from)?;
        if matrix_rank(&m) != d {
            return Err(WeylError::PathNotGeneralPosition);
        }
        Ok(())
    })
}

fn prefix_sums(increments: &[RatVector], d: usize) -> Vec<RatVector> {
    let mut acc = vec![BigRational::zero(); d];
    increments
        .iter()
        .map(|xi| {
            for (a, x) in acc.iter_mut().zip(xi) {
                *a += x.clone();
            }
            acc.clone()
        })
        .collect()
}

/// Checks, tuple by tuple, that a k-tuple of partial sums captures the
/// origin in its convex hull exactly when the corresponding k-face of the
/// fundamental signed chamber meets the kernel of the increment matrix in
/// more than the origin.
///
/// The tuple `i_1 < … < i_k` corresponds to the face with consecutive
/// blocks `(i_{l−1}, i_l]` and zero block `(i_k, n]`. Returns the absorbed-
/// tuple count, the nontrivially-meeting face count, and whether the two
/// indicators agreed on every tuple. Increments must be exact rationals in
/// general position (every d of them linearly independent), certified here
/// for `n ≤ 8`.
pub fn walk_face_equivalence(
    increments: &[RatVector],
    k: usize,
) -> Result<(u64, u64, bool), WeylError> {
    let d = validate_increments(increments, 1)?;
    let n = increments.len();
    if k == 0 || k > n {
        return Err(WeylError::KOutOfRange { k, max: n });
    }
    certify_increments(increments, d)?;
    let sums = prefix_sums(increments, d);
    let mut absorbed = 0u64;
    let mut nontrivial = 0u64;
    let mut equal = true;
    for_each_k_subset(n, k, |idx| -> Result<(), WeylError> {
        let points: Vec<RatVector> = idx.iter().map(|&i| sums[i].clone()).collect();
        let hit = origin_in_hull(&points)?;
        let mut rows = vec![Vec::with_capacity(k); d];
        let mut prev: Option<usize> = None;
        for &i in idx {
            for (r, row) in rows.iter_mut().enumerate() {
                let v = match prev {
                    None => sums[i][r].clone(),
                    Some(p) => &sums[i][r] - &sums[p][r],
                };
                row.push(v);
            }
            prev = Some(i);
        }
        let d_matrix = RatMatrix::from_rows(rows)?;
        let meets = !cone_meets_subspace_trivially(ConeKind::ChainB, &d_matrix)?;
        if hit {
            absorbed += 1;
        }
        if meets {
            nontrivial += 1;
        }
        if hit != meets {
            equal = false;
        }
        Ok(())
    })?;
    Ok((absorbed, nontrivial, equal))
}

/// Bridge analogue of [`walk_face_equivalence`]: k-tuples are drawn from
/// the first `n − 1` partial sums of exactly-centered increments, and the
/// matching faces are the `(k+1)`-block consecutive partitions of the steps
/// inside the unsigned fan, tested against the kernel of the increment
/// matrix within the zero-sum hyperplane (the all-ones row is stacked onto
/// the constraints to remove the diagonal lineality, which always lies in
/// that kernel).
pub fn bridge_face_equivalence(
    increments: &[RatVector],
    k: usize,
) -> Result<(u64, u64, bool), WeylError> {
    let d = validate_increments(increments, 2)?;
    let n = increments.len();
    if k == 0 || k > n - 1 {
        return Err(WeylError::KOutOfRange { k, max: n - 1 });
    }
    for r in 0..d {
        let total: BigRational = increments.iter().map(|xi| xi[r].clone()).sum();
        if !total.is_zero() {
            return Err(WeylError::NotCentered);
        }
    }
    certify_increments(increments, d)?;
    let sums = prefix_sums(increments, d);
    let mut absorbed = 0u64;
    let mut nontrivial = 0u64;
    let mut equal = true;
    for_each_k_subset(n - 1, k, |idx| -> Result<(), WeylError> {
        let points: Vec<RatVector> = idx.iter().map(|&i| sums[i].clone()).collect();
        let hit = origin_in_hull(&points)?;
        // Step blocks between consecutive cut points; the last block ends
        // at n. Constraint rows are block sums of the increments plus a
        // block-size row from the stacked all-ones constraint.
        let mut bounds = Vec::with_capacity(k + 2);
        bounds.push(0usize);
        bounds.extend(idx.iter().map(|&i| i + 1));
        bounds.push(n);
        let mut rows = vec![Vec::with_capacity(k + 1); d + 1];
        for w in bounds.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            for (r, row) in rows.iter_mut().enumerate().take(d) {
                let mut v = sums[hi - 1][r].clone();
                if lo > 0 {
                    v -= &sums[lo - 1][r];
                }
                row.push(v);
            }
            rows[d].push(BigRational::from_integer(BigInt::from(hi - lo)));
        }
        let d_matrix = RatMatrix::from_rows(rows)?;
        let meets = !cone_meets_subspace_trivially(ConeKind::ChainA, &d_matrix)?;
        if hit {
            absorbed += 1;
        }
        if meets {
            nontrivial += 1;
        }
        if hit != meets {
            equal = false;
        }
        Ok(())
    })?;
    Ok((absorbed, nontrivial, equal))
}

/// A chamber of the signed fan, `ε_1 x_{σ(1)} ≥ ε_2 x_{σ(2)} ≥ … ≥ 0`,
/// identified by its sign vector and coordinate order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberB {
    epsilon: Vec<i8>,
    sigma: Vec<usize>,
}

impl ChamberB {
    pub fn new(epsilon: Vec<i8>, sigma: Vec<usize>) -> Result<Self, WeylError> {
        let n = epsilon.len();
        if n == 0 {
            return Err(WeylError::BelowMinimum {
                name: "n",
                got: 0,
                min: 1,
            });
        }
        if sigma.len() != n {
            return Err(WeylError::DimensionMismatch {
                expected: n,
                got: sigma.len(),
            });
        }
        if epsilon.iter().any(|&e| e != 1 && e != -1) {
            return Err(WeylError::InvalidSign);
        }
        let mut seen = vec![false; n];
        for &s in &sigma {
            if s >= n || seen[s] {
                return Err(WeylError::InvalidPermutation);
            }
            seen[s] = true;
        }
        Ok(ChamberB { epsilon, sigma })
    }

    pub fn n(&self) -> usize {
        self.epsilon.len()
    }

    pub fn epsilon(&self) -> &[i8] {
        &self.epsilon
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    /// The spanning vertices `v_j = Σ_{i ≤ j} ε_i e_{σ(i)}` for `j = 1..n`.
    pub fn vertices(&self) -> Vec<Vec<i64>> {
        let n = self.n();
        let mut v = vec![0i64; n];
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            v[self.sigma[i]] += i64::from(self.epsilon[i]);
            out.push(v.clone());
        }
        out
    }
}

/// Counts the chamber's spanning vertices on the positive side of the
/// hyperplane `⟨normal, x⟩ = 0`. A vertex exactly on the hyperplane makes
/// the count ill-defined and is reported as [`WeylError::DegenerateNormal`].
pub fn chamber_vertex_count(
    chamber: &ChamberB,
    normal: &[BigRational],
) -> Result<usize, WeylError> {
    let n = chamber.n();
    if normal.len() != n {
        return Err(WeylError::DimensionMismatch {
            expected: n,
            got: normal.len(),
        });
    }
    // ⟨normal, v_j⟩ grows by ε_j·normal[σ(j)] per step, so one pass
    // suffices.
    let mut dot = BigRational::zero();
    let mut count = 0usize;
    for i in 0..n {
        if chamber.epsilon()[i] == 1 {
            dot += normal[chamber.sigma()[i]].clone();
        } else {
            dot -= normal[chamber.sigma()[i]].clone();
        }
        if dot.is_zero() {
            return Err(WeylError::DegenerateNormal);
        }
        if dot.is_positive() {
            count += 1;
        }
    }
    Ok(count)
}

/// A halfspace normal that is never orthogonal to a `{−1, 0, 1}` vertex
/// vector: consecutive powers of two `(1, 2, 4, …)`.
pub fn default_halfspace_normal(n: usize) -> Vec<BigRational> {
    (0..n)
        .map(|i| BigRational::from_integer(pow2(i)))
        .collect()
}

/// Empirical distribution of the positive-side vertex count over uniformly
/// sampled signed-fan chambers, with its total-variation distance to the
/// discrete arcsine law.
#[derive(Clone, Debug)]
pub struct VertexDistribution {
    pub n: usize,
    pub trials: u64,
    /// `counts[m]` = number of sampled chambers with exactly `m` vertices
    /// strictly on the positive side.
    pub counts: Vec<u64>,
    pub empirical: Vec<f64>,
    /// Total-variation distance between the empirical distribution and the
    /// discrete arcsine law on `{0, …, n}`.
    pub tv_distance: f64,
}

/// Samples `trials` chambers uniformly (Fisher–Yates permutation, then one
/// sign bit per coordinate, from a single seeded generator) and tallies
/// their positive-vertex counts against `normal`.
///
/// The normal is screened exactly against all `3^n − 1` nonzero `{−1,0,1}`
/// vectors, so every sampled chamber has a well-defined count; the screen
/// is exponential in `n`, hence the [`MAX_VERTEX_AMBIENT`] cap.
pub fn corollary_vertex_distribution(
    n: usize,
    trials: u64,
    seed: u64,
    normal: &[BigRational],
) -> Result<VertexDistribution, WeylError> {
    if n < 1 {
        return Err(WeylError::BelowMinimum {
            name: "n",
            got: n,
            min: 1,
        });
    }
    if n > MAX_VERTEX_AMBIENT {
        return Err(WeylError::UnsupportedSize {
            n,
            max: MAX_VERTEX_AMBIENT,
        });
    }
    if trials == 0 {
        return Err(WeylError::ZeroTrials);
    }
    if normal.len() != n {
        return Err(WeylError::DimensionMismatch {
            expected: n,
            got: normal.len(),
        });
    }
    screen_normal(normal)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; n + 1];
    let mut sigma: Vec<usize> = (0..n).collect();
    for _ in 0..trials {
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            sigma.swap(i, j);
        }
        let epsilon: Vec<i8> = (0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
        let chamber = ChamberB::new(epsilon, sigma.clone())?;
        counts[chamber_vertex_count(&chamber, normal)?] += 1;
    }
    let empirical: Vec<f64> = counts
        .iter()
        .map(|&c| c as f64 / trials as f64)
        .collect();
    let exact = arcsine_pmf(n)?;
    let tv_distance = 0.5
        * empirical
            .iter()
            .zip(&exact)
            .map(|(e, p)| (e - p.to_f64().unwrap()).abs())
            .sum::<f64>();
    Ok(VertexDistribution {
        n,
        trials,
        counts,
        empirical,
        tv_distance,
    })
}

/// Rejects normals orthogonal to any nonzero `{−1, 0, 1}^n` vector.
fn screen_normal(normal: &[BigRational]) -> Result<(), WeylError> {
    let n = normal.len();
    let total = 3usize.pow(n as u32);
    for t in 0..total {
        let mut rem = t;
        let mut dot = BigRational::zero();
        let mut nonzero = false;
        for x in normal {
            match rem % 3 {
                0 => {
                    dot -= x.clone();
                    nonzero = true;
                }
                2 => {
                    dot += x.clone();
                    nonzero = true;
                }
                _ => {}
            }
            rem /= 3;
        }
        if nonzero && dot.is_zero() {
            return Err(WeylError::DegenerateNormal);
        }
    }
    Ok(())
}

/// Draws a random integer subspace of codimension `d` (entries uniform in
/// `[−10^6, 10^6]`) until it passes the general-position screen for the
/// requested arrangement. Deterministic in `seed`.
pub fn random_gp_subspace(
    n: usize,
    d: usize,
    arrangement: Arrangement,
    seed: u64,
) -> Result<SubspaceSpec, WeylError> {
    if n < 1 {
        return Err(WeylError::BelowMinimum {
            name: "n",
            got: n,
            min: 1,
        });
    }
    if n > MAX_GP_AMBIENT {
        return Err(WeylError::UnsupportedSize {
            n,
            max: MAX_GP_AMBIENT,
        });
    }
    if d == 0 || d > n {
        return Err(WeylError::DOutOfRange { d, max: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let rows: Vec<Vec<i64>> = (0..d)
            .map(|_| {
                (0..n)
                    .map(|_| rng.gen_range(-RANDOM_SUBSPACE_BOUND..=RANDOM_SUBSPACE_BOUND))
                    .collect()
            })
            .collect();
        let Ok(spec) = SubspaceSpec::from_int_rows(&rows) else {
            continue;
        };
        if general_position_check(&spec, arrangement)? {
            return Ok(spec);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{nonabsorption_walk, uniform_bridge_pmf};

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn rat_int(p: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(p))
    }

    fn increments_1d(values: &[(i64, i64)]) -> Vec<RatVector> {
        values.iter().map(|&(p, q)| vec![rat(p, q)]).collect()
    }

    #[test]
    fn signed_average_matches_formula_on_examples() {
        // (n, k, d) → expected average over all 2^n n! chambers.
        let cases = [
            (2, 1, 1, rat_int(2)),
            (2, 2, 1, rat(3, 4)),
            (3, 2, 2, rat_int(3)),
        ];
        for (i, (n, k, d, expected)) in cases.into_iter().enumerate() {
            let l = random_gp_subspace(n, d, Arrangement::B, 40 + i as u64).unwrap();
            let report = average_trivial_faces_b(n, k, d, &l).unwrap();
            assert_eq!(report.average_trivial, expected, "n={n}, k={k}, d={d}");
            assert_eq!(report.formula_value, expected);
            assert!(report.matches);
        }
    }

    #[test]
    fn signed_average_full_sweep_small() {
        for n in 1..=4 {
            for d in 1..=n {
                let l = random_gp_subspace(n, d, Arrangement::B, 7 * n as u64 + d as u64).unwrap();
                for k in 1..=n {
                    let report = average_trivial_faces_b(n, k, d, &l).unwrap();
                    assert!(
                        report.matches,
                        "n={n}, k={k}, d={d}: {} vs {}",
                        report.average_trivial, report.formula_value
                    );
                }
            }
        }
    }

    #[test]
    fn signed_average_k_equals_n_degenerates_to_nonabsorption() {
        let l = random_gp_subspace(3, 2, Arrangement::B, 3).unwrap();
        let report = average_trivial_faces_b(3, 3, 2, &l).unwrap();
        // At k = n the faces are the chambers themselves and the average
        // equals the walk nonabsorption probability.
        assert_eq!(report.average_trivial, nonabsorption_walk(3, 2).unwrap());
        assert!(report.matches);
    }

    #[test]
    fn signed_average_worker_counts_agree() {
        let l = random_gp_subspace(4, 2, Arrangement::B, 9).unwrap();
        let default = average_trivial_faces_b(4, 2, 2, &l).unwrap();
        let one = average_trivial_faces_b_with_workers(4, 2, 2, &l, 1).unwrap();
        let four = average_trivial_faces_b_with_workers(4, 2, 2, &l, 4).unwrap();
        assert_eq!(default.average_trivial, one.average_trivial);
        assert_eq!(one.average_trivial, four.average_trivial);
        assert!(matches!(
            average_trivial_faces_b_with_workers(4, 2, 2, &l, 0),
            Err(WeylError::ZeroWorkers)
        ));
    }

    #[test]
    fn unsigned_average_matches_formula_on_examples() {
        let cases = [
            (3, 2, 1, rat_int(0)),
            (3, 3, 2, rat(2, 3)),
            (4, 3, 2, rat_int(2)),
        ];
        for (i, (n, k, d, expected)) in cases.into_iter().enumerate() {
            let l = random_gp_subspace(n, d, Arrangement::A, 60 + i as u64).unwrap();
            let report = average_trivial_faces_a(n, k, d, &l).unwrap();
            assert_eq!(report.average_trivial, expected, "n={n}, k={k}, d={d}");
            assert_eq!(report.formula_value, expected);
            assert!(report.matches);
        }
    }

    #[test]
    fn unsigned_average_full_sweep_excluding_k_one() {
        for n in 2..=5 {
            for d in 1..=n {
                let l = random_gp_subspace(n, d, Arrangement::A, 100 + 11 * n as u64 + d as u64)
                    .unwrap();
                for k in 2..=n {
                    let report = average_trivial_faces_a(n, k, d, &l).unwrap();
                    assert!(
                        report.matches,
                        "n={n}, k={k}, d={d}: {} vs {}",
                        report.average_trivial, report.formula_value
                    );
                }
            }
        }
    }

    #[test]
    fn unsigned_average_k_one_disagrees_with_formula() {
        // The single 1-face of the unsigned fan is the diagonal line, which
        // meets every general-position subspace trivially, so the true
        // average is 1; the closed form gives 0 (odd d) or 2 (even d). The
        // report must expose the mismatch honestly.
        let l = random_gp_subspace(3, 1, Arrangement::A, 11).unwrap();
        let report = average_trivial_faces_a(3, 1, 1, &l).unwrap();
        assert_eq!(report.average_trivial, rat_int(1));
        assert_eq!(report.formula_value, rat_int(0));
        assert!(!report.matches);

        let l = random_gp_subspace(4, 2, Arrangement::A, 12).unwrap();
        let report = average_trivial_faces_a(4, 1, 2, &l).unwrap();
        assert_eq!(report.average_trivial, rat_int(1));
        assert_eq!(report.formula_value, rat_int(2));
        assert!(!report.matches);
    }

    #[test]
    fn averages_reject_bad_inputs() {
        let l = random_gp_subspace(3, 2, Arrangement::B, 1).unwrap();
        assert!(matches!(
            average_trivial_faces_b(3, 0, 2, &l),
            Err(WeylError::KOutOfRange { .. })
        ));
        assert!(matches!(
            average_trivial_faces_b(3, 2, 1, &l),
            Err(WeylError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            average_trivial_faces_b(4, 2, 2, &l),
            Err(WeylError::DimensionMismatch { .. })
        ));
        // A mirror hyperplane of the signed arrangement is not in general
        // position and must surface as an error, not a mismatch.
        let mirror = SubspaceSpec::from_int_rows(&[vec![1, -1]]).unwrap();
        assert_eq!(
            average_trivial_faces_b(2, 1, 1, &mirror),
            Err(WeylError::NotGeneralPosition(Arrangement::B))
        );
        let diag = SubspaceSpec::from_int_rows(&[vec![1, -1, 0]]).unwrap();
        assert_eq!(
            average_trivial_faces_a(3, 2, 1, &diag),
            Err(WeylError::NotGeneralPosition(Arrangement::A))
        );
    }

    #[test]
    fn walk_equivalence_on_pinned_path() {
        // Partial sums (1, −1/2, 2) in dimension 1.
        let increments = increments_1d(&[(1, 1), (-3, 2), (5, 2)]);
        assert_eq!(walk_face_equivalence(&increments, 1).unwrap(), (0, 0, true));
        assert_eq!(walk_face_equivalence(&increments, 2).unwrap(), (2, 2, true));
        assert_eq!(walk_face_equivalence(&increments, 3).unwrap(), (1, 1, true));
    }

    #[test]
    fn bridge_equivalence_on_pinned_path() {
        // Partial sums (1, −1, 0): exactly centered.
        let increments = increments_1d(&[(1, 1), (-2, 1), (1, 1)]);
        assert_eq!(
            bridge_face_equivalence(&increments, 1).unwrap(),
            (0, 0, true)
        );
        assert_eq!(
            bridge_face_equivalence(&increments, 2).unwrap(),
            (1, 1, true)
        );
    }

    #[test]
    fn equivalence_rejects_bad_paths() {
        let increments = increments_1d(&[(1, 1), (-2, 1), (1, 1)]);
        assert!(matches!(
            walk_face_equivalence(&increments, 0),
            Err(WeylError::KOutOfRange { .. })
        ));
        assert!(matches!(
            walk_face_equivalence(&increments, 4),
            Err(WeylError::KOutOfRange { .. })
        ));
        // Not centered.
        let skew = increments_1d(&[(1, 1), (1, 1)]);
        assert_eq!(
            bridge_face_equivalence(&skew, 1),
            Err(WeylError::NotCentered)
        );
        // A zero increment violates general position in dimension 1.
        let flat = increments_1d(&[(1, 1), (0, 1), (2, 1)]);
        assert_eq!(
            walk_face_equivalence(&flat, 2),
            Err(WeylError::PathNotGeneralPosition)
        );
        // Mixed dimensions.
        let ragged = vec![vec![rat_int(1)], vec![rat_int(1), rat_int(2)]];
        assert!(matches!(
            walk_face_equivalence(&ragged, 1),
            Err(WeylError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn tuples_smaller_than_dimension_never_absorb() {
        // k ≤ d: a k-tuple of generic points cannot capture the origin and
        // no k-face can meet the generic kernel, so both sides are zero.
        let increments = vec![
            vec![rat_int(1), rat(1, 2)],
            vec![rat(-1, 2), rat_int(1)],
            vec![rat(3, 4), rat(-5, 4)],
            vec![rat(-7, 8), rat(-1, 3)],
        ];
        for k in 1..=2 {
            assert_eq!(
                walk_face_equivalence(&increments, k).unwrap(),
                (0, 0, true),
                "k={k}"
            );
        }
    }

    fn dyadic_gaussianish(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<RatVector> {
        (0..n)
            .map(|_| {
                (0..d)
                    .map(|_| {
                        let x: f64 = rng.gen::<f64>() - 0.5;
                        BigRational::from_float(x).unwrap()
                    })
                    .collect()
            })
            .collect()
    }

    fn center(increments: &mut [RatVector]) {
        let n = increments.len();
        let d = increments[0].len();
        for r in 0..d {
            let mean: BigRational = increments.iter().map(|xi| xi[r].clone()).sum::<BigRational>()
                / BigRational::from_integer(BigInt::from(n));
            for xi in increments.iter_mut() {
                xi[r] -= &mean;
            }
        }
    }

    #[test]
    fn walk_equivalence_holds_on_random_dyadic_paths() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for trial in 0..12 {
            let d = 1 + (trial as usize) % 2;
            let n = 3 + (trial as usize) % 3;
            let increments = dyadic_gaussianish(&mut rng, n, d);
            for k in 1..=n {
                let (a, f, equal) = walk_face_equivalence(&increments, k).unwrap();
                assert!(equal, "trial={trial}, n={n}, d={d}, k={k}: {a} vs {f}");
            }
        }
    }

    #[test]
    fn bridge_equivalence_holds_on_random_dyadic_paths() {
        let mut rng = ChaCha8Rng::seed_from_u64(4048);
        for trial in 0..12 {
            let d = 1 + (trial as usize) % 2;
            let n = 3 + (trial as usize) % 3;
            let mut increments = dyadic_gaussianish(&mut rng, n, d);
            center(&mut increments);
            for k in 1..=n - 1 {
                let (a, f, equal) = bridge_face_equivalence(&increments, k).unwrap();
                assert!(equal, "trial={trial}, n={n}, d={d}, k={k}: {a} vs {f}");
            }
        }
    }

    #[test]
    fn bridge_absorption_counts_on_a_longer_path() {
        // Partial sums (1, 2, −1, 0) in dimension 1.
        let increments = increments_1d(&[(1, 1), (1, 1), (-3, 1), (1, 1)]);
        let (absorbed, faces, equal) = bridge_face_equivalence(&increments, 2).unwrap();
        assert!(equal);
        // Pairs from sums {1, 2, −1}: (1,−1) and (2,−1) straddle zero.
        assert_eq!(absorbed, 2);
        assert_eq!(faces, 2);
        // Sanity: the uniform-law pmf this connects to is well-formed.
        let pmf = uniform_bridge_pmf(4).unwrap();
        assert_eq!(pmf.len(), 4);
        assert!(pmf.iter().all(|p| *p == rat(1, 4)));
    }

    #[test]
    fn chamber_vertices_and_counts_match_examples() {
        let chamber = ChamberB::new(vec![1, 1], vec![0, 1]).unwrap();
        assert_eq!(chamber.vertices(), vec![vec![1, 0], vec![1, 1]]);
        let normal = vec![rat_int(1), rat_int(2)];
        assert_eq!(chamber_vertex_count(&chamber, &normal).unwrap(), 2);

        let opposite = ChamberB::new(vec![-1, -1], vec![0, 1]).unwrap();
        assert_eq!(chamber_vertex_count(&opposite, &normal).unwrap(), 0);
    }

    #[test]
    fn antipodal_chambers_split_the_vertex_count() {
        let normal = default_halfspace_normal(5);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            let mut sigma: Vec<usize> = (0..5).collect();
            for i in (1..5).rev() {
                let j = rng.gen_range(0..=i);
                sigma.swap(i, j);
            }
            let epsilon: Vec<i8> = (0..5).map(|_| if rng.gen() { 1 } else { -1 }).collect();
            let flipped: Vec<i8> = epsilon.iter().map(|&e| -e).collect();
            let a = ChamberB::new(epsilon, sigma.clone()).unwrap();
            let b = ChamberB::new(flipped, sigma).unwrap();
            let ca = chamber_vertex_count(&a, &normal).unwrap();
            let cb = chamber_vertex_count(&b, &normal).unwrap();
            assert_eq!(ca + cb, 5);
        }
    }

    #[test]
    fn vertex_count_is_equivariant_under_signed_permutations() {
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let n = 6;
        for _ in 0..40 {
            let mut sigma: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = rng.gen_range(0..=i);
                sigma.swap(i, j);
            }
            let epsilon: Vec<i8> = (0..n).map(|_| if rng.gen() { 1 } else { -1 }).collect();
            let mut pi: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = rng.gen_range(0..=i);
                pi.swap(i, j);
            }
            let tau: Vec<i8> = (0..n).map(|_| if rng.gen() { 1 } else { -1 }).collect();

            let normal = default_halfspace_normal(n);
            // Transformed normal: (g·a)[π(m)] = τ_m · a[m].
            let mut moved_normal = vec![BigRational::zero(); n];
            for m in 0..n {
                let v = normal[m].clone();
                moved_normal[pi[m]] = if tau[m] == 1 { v } else { -v };
            }
            let moved_sigma: Vec<usize> = sigma.iter().map(|&s| pi[s]).collect();
            let moved_epsilon: Vec<i8> = (0..n).map(|i| epsilon[i] * tau[sigma[i]]).collect();

            let base = ChamberB::new(epsilon, sigma).unwrap();
            let moved = ChamberB::new(moved_epsilon, moved_sigma).unwrap();
            assert_eq!(
                chamber_vertex_count(&base, &normal).unwrap(),
                chamber_vertex_count(&moved, &moved_normal).unwrap()
            );
        }
    }

    #[test]
    fn chamber_constructor_validates() {
        assert!(matches!(
            ChamberB::new(vec![1, 0], vec![0, 1]),
            Err(WeylError::InvalidSign)
        ));
        assert!(matches!(
            ChamberB::new(vec![1, 1], vec![0, 0]),
            Err(WeylError::InvalidPermutation)
        ));
        assert!(matches!(
            ChamberB::new(vec![1, 1], vec![0]),
            Err(WeylError::DimensionMismatch { .. })
        ));
        // Vertex exactly on the hyperplane.
        let chamber = ChamberB::new(vec![1, -1], vec![0, 1]).unwrap();
        assert_eq!(
            chamber_vertex_count(&chamber, &[rat_int(1), rat_int(1)]),
            Err(WeylError::DegenerateNormal)
        );
    }

    fn for_each_permutation(n: usize, f: &mut impl FnMut(&[usize])) {
        fn go(current: &mut Vec<usize>, remaining: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
            if remaining.is_empty() {
                f(current);
                return;
            }
            for i in 0..remaining.len() {
                let x = remaining.remove(i);
                current.push(x);
                go(current, remaining, f);
                current.pop();
                remaining.insert(i, x);
            }
        }
        go(&mut Vec::new(), &mut (0..n).collect(), f)
    }

    #[test]
    fn exhaustive_vertex_counts_reproduce_the_arcsine_law() {
        // Over ALL 2^n n! chambers the vertex-count distribution is exactly
        // the discrete arcsine law; verified by full enumeration.
        for n in [3usize, 4] {
            let normal = default_halfspace_normal(n);
            let mut counts = vec![BigInt::zero(); n + 1];
            for_each_permutation(n, &mut |sigma| {
                for mask in 0..(1u32 << n) {
                    let epsilon: Vec<i8> = (0..n)
                        .map(|i| if mask & (1 << i) == 0 { 1 } else { -1 })
                        .collect();
                    let chamber = ChamberB::new(epsilon, sigma.to_vec()).unwrap();
                    counts[chamber_vertex_count(&chamber, &normal).unwrap()] += 1;
                }
            });
            let total = pow2(n) * factorial(n);
            let pmf = arcsine_pmf(n).unwrap();
            for (m, c) in counts.into_iter().enumerate() {
                assert_eq!(ratio(c, total.clone()), pmf[m], "n={n}, m={m}");
            }
        }
    }

    #[test]
    fn sampled_vertex_distribution_approaches_the_arcsine_law() {
        let normal = default_halfspace_normal(2);
        let dist = corollary_vertex_distribution(2, 100_000, 5, &normal).unwrap();
        assert_eq!(dist.counts.iter().sum::<u64>(), 100_000);
        assert!((dist.empirical.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // pmf (3/8, 1/4, 3/8): TV below 1% at 1e5 trials except with
        // vanishing probability.
        assert!(
            dist.tv_distance < 0.01,
            "TV distance too large: {}",
            dist.tv_distance
        );

        let tiny = corollary_vertex_distribution(1, 40_000, 6, &default_halfspace_normal(1))
            .unwrap();
        // pmf (1/2, 1/2); 4σ ≈ 0.01 at 4e4 trials.
        assert!((tiny.empirical[0] - 0.5).abs() < 0.01);
    }

    #[test]
    fn vertex_distribution_rejects_bad_inputs() {
        let normal = default_halfspace_normal(2);
        assert!(matches!(
            corollary_vertex_distribution(2, 0, 1, &normal),
            Err(WeylError::ZeroTrials)
        ));
        assert!(matches!(
            corollary_vertex_distribution(3, 10, 1, &normal),
            Err(WeylError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            corollary_vertex_distribution(2, 10, 1, &[rat_int(1), rat_int(1)]),
            Err(WeylError::DegenerateNormal)
        ));
        assert!(matches!(
            corollary_vertex_distribution(13, 10, 1, &default_halfspace_normal(13)),
            Err(WeylError::UnsupportedSize { .. })
        ));
    }

    #[test]
    fn sampling_is_deterministic_in_the_seed() {
        let normal = default_halfspace_normal(4);
        let a = corollary_vertex_distribution(4, 2_000, 42, &normal).unwrap();
        let b = corollary_vertex_distribution(4, 2_000, 42, &normal).unwrap();
        let c = corollary_vertex_distribution(4, 2_000, 43, &normal).unwrap();
        assert_eq!(a.counts, b.counts);
        assert_ne!(a.counts, c.counts);
    }

    #[test]
    fn random_subspaces_are_reproducible_and_general() {
        let a = random_gp_subspace(4, 2, Arrangement::B, 17).unwrap();
        let b = random_gp_subspace(4, 2, Arrangement::B, 17).unwrap();
        assert_eq!(a.constraints().row(0), b.constraints().row(0));
        assert!(general_position_check(&a, Arrangement::B).unwrap());
        assert!(matches!(
            random_gp_subspace(4, 0, Arrangement::B, 1),
            Err(WeylError::DOutOfRange { .. })
        ));
        assert!(matches!(
            random_gp_subspace(9, 2, Arrangement::B, 1),
            Err(WeylError::UnsupportedSize { .. })
        ));
    }
}
