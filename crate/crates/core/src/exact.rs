//! Exact combinatorics behind the closed-form absorption statistics.
//!
//! Everything in this module is arbitrary-precision: coefficient rows are
//! `BigInt`, expectations and probabilities are `BigRational`, and no floating
//! point appears anywhere. The two coefficient families are
//!
//! * the B-triangle, row `k` holding the coefficients of
//!   `(t + 1)(t + 3) ⋯ (t + 2k − 1)`, and
//! * the unsigned Stirling numbers of the first kind, row `m` holding the
//!   coefficients of `t(t + 1) ⋯ (t + m − 1)`.
//!
//! Alternating partial sums of those rows give the expected number of
//! `k`-point subsets of walk (resp. bridge) partial sums whose convex hull
//! misses the origin, the complementary "hull contains the origin" counts,
//! and the non-absorption probabilities. In dimension one the walk statistic
//! reduces to the discrete arcsine law and the bridge statistic to the
//! discrete uniform law; both laws are provided here as exact pmfs.

use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Domain violations for the exact closed-form evaluations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("{name} = {got} is below its minimum {min}")]
    BelowMinimum {
        name: &'static str,
        got: usize,
        min: usize,
    },
    #[error("k = {k} is out of range (expected 1 <= k <= {max})")]
    KOutOfRange { k: usize, max: usize },
}

fn require_min(name: &'static str, got: usize, min: usize) -> Result<(), ExactError> {
    if got < min {
        Err(ExactError::BelowMinimum { name, got, min })
    } else {
        Ok(())
    }
}

/// `n!` as an exact integer.
pub fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    // Multiply/divide in lockstep; each prefix is itself a binomial, so the
    // division is exact at every step.
    for i in 1..=k {
        acc = acc * BigInt::from(n - k + i) / BigInt::from(i);
    }
    acc
}

/// `2^k` as an exact integer.
pub fn pow2(k: usize) -> BigInt {
    BigInt::one() << k
}

/// Dense integer polynomial; `coeffs[j]` is the coefficient of `t^j`.
///
/// The only mutation the row builders need is multiplication by a monic
/// linear factor, so that is the only operation provided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    /// The constant polynomial 1.
    pub fn one() -> Self {
        IntPolynomial {
            coeffs: vec![BigInt::one()],
        }
    }

    /// Builds a polynomial from raw coefficients (lowest degree first).
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        IntPolynomial { coeffs }
    }

    /// Coefficients, lowest degree first; the leading entry is nonzero for
    /// the monic products built here.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Multiplies `self` by the linear factor `(t + c)` in place.
    pub fn mul_linear(&mut self, c: i64) {
        let c = BigInt::from(c);
        let mut out = vec![BigInt::zero(); self.coeffs.len() + 1];
        for (j, coeff) in self.coeffs.iter().enumerate() {
            out[j] += coeff * &c;
            out[j + 1] += coeff;
        }
        self.coeffs = out;
    }
}

/// Row `k` of the triangle generated by `(t + 1)(t + 3) ⋯ (t + 2k − 1)`.
///
/// `values()[j]` is the coefficient of `t^j`; indices outside `0..=k` read as
/// zero through [`BRow::value`]. The row satisfies `values()[0] = (2k−1)!!`,
/// `values()[k] = 1`, and both parity-restricted sums equal `2^{k−1} k!`
/// (evaluate the product at `t = ±1`).
#[derive(Clone, Debug)]
pub struct BRow {
    k: usize,
    values: Arc<Vec<BigInt>>,
}

/// Row `m` of the unsigned Stirling numbers of the first kind: coefficients
/// of `t(t + 1) ⋯ (t + m − 1)`.
///
/// `values()[j]` is the coefficient of `t^j`; `values()[0] = 0`,
/// `values()[1] = (m−1)!`, `values()[m] = 1`, and for `m ≥ 2` both
/// parity-restricted sums equal `m!/2`.
#[derive(Clone, Debug)]
pub struct StirlingRow {
    m: usize,
    values: Arc<Vec<BigInt>>,
}

/// Shared accessor logic for the two coefficient rows.
macro_rules! row_accessors {
    ($ty:ident, $len_field:ident) => {
        impl $ty {
            /// The row index.
            pub fn $len_field(&self) -> usize {
                self.$len_field
            }

            /// All coefficients of the row, lowest index first.
            pub fn values(&self) -> &[BigInt] {
                &self.values
            }

            /// Coefficient at index `j`, zero outside `0..=row_index`.
            pub fn value(&self, j: isize) -> BigInt {
                if j < 0 || j as usize >= self.values.len() {
                    BigInt::zero()
                } else {
                    self.values[j as usize].clone()
                }
            }

            /// `value(top) + value(top − 2) + …` down to index 0 or 1.
            pub fn descending_sum(&self, top: isize) -> BigInt {
                let mut acc = BigInt::zero();
                let mut j = top;
                while j >= 0 {
                    acc += self.value(j);
                    j -= 2;
                }
                acc
            }

            /// `value(bottom) + value(bottom + 2) + …` up to the row end.
            pub fn ascending_sum(&self, bottom: isize) -> BigInt {
                let mut acc = BigInt::zero();
                let mut j = bottom.max(0);
                while (j as usize) < self.values.len() {
                    acc += self.value(j);
                    j += 2;
                }
                acc
            }

            /// Sums over even and odd indices (including index 0).
            pub fn parity_sums(&self) -> (BigInt, BigInt) {
                (self.ascending_sum(0), self.ascending_sum(1))
            }
        }
    };
}

row_accessors!(BRow, k);
row_accessors!(StirlingRow, m);

type RowCache = RwLock<Vec<Arc<Vec<BigInt>>>>;

fn b_cache() -> &'static RowCache {
    static CACHE: OnceLock<RowCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(Vec::new()))
}

fn stirling_cache() -> &'static RowCache {
    static CACHE: OnceLock<RowCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(Vec::new()))
}

/// Extends a row cache up to row `k`. `seed` is row 1 and `factor(i)` is the
/// constant of the linear factor that turns row `i − 1` into row `i`.
fn extend_cache(
    cache: &RowCache,
    k: usize,
    seed: &[i64],
    factor: impl Fn(usize) -> i64,
) -> Arc<Vec<BigInt>> {
    {
        let read = cache.read().expect("row cache poisoned");
        if let Some(row) = read.get(k - 1) {
            return Arc::clone(row);
        }
    }
    let mut write = cache.write().expect("row cache poisoned");
    if write.is_empty() {
        write.push(Arc::new(seed.iter().map(|&c| BigInt::from(c)).collect()));
    }
    while write.len() < k {
        let mut poly = IntPolynomial::from_coeffs(write.last().unwrap().as_ref().clone());
        poly.mul_linear(factor(write.len() + 1));
        write.push(Arc::new(poly.coeffs().to_vec()));
    }
    Arc::clone(&write[k - 1])
}

/// Coefficient row of `(t + 1)(t + 3) ⋯ (t + 2k − 1)`, memoized per process.
pub fn b_row(k: usize) -> Result<BRow, ExactError> {
    require_min("k", k, 1)?;
    let values = extend_cache(b_cache(), k, &[1, 1], |i| 2 * i as i64 - 1);
    Ok(BRow { k, values })
}

/// Coefficient row of `t(t + 1) ⋯ (t + m − 1)` (unsigned Stirling numbers of
/// the first kind), memoized per process.
pub fn stirling_row(m: usize) -> Result<StirlingRow, ExactError> {
    require_min("m", m, 1)?;
    let values = extend_cache(stirling_cache(), m, &[0, 1], |i| i as i64 - 1);
    Ok(StirlingRow { m, values })
}

/// Expected number (halved) of `k`-subsets of the first `n` partial sums of a
/// sign-symmetric exchangeable walk in dimension `d` whose convex hull misses
/// the origin:
///
/// `C(n,k) · (B(k,d−1) + B(k,d−3) + …) / (2^k k!)`.
pub fn expected_m_walk(n: usize, k: usize, d: usize) -> Result<BigRational, ExactError> {
    require_min("d", d, 1)?;
    if k == 0 || k > n {
        return Err(ExactError::KOutOfRange { k, max: n });
    }
    let row = b_row(k)?;
    let numerator = binomial(n, k) * row.descending_sum(d as isize - 1);
    Ok(BigRational::new(numerator, pow2(k) * factorial(k)))
}

/// Bridge analogue of [`expected_m_walk`]: `k`-subsets are drawn from the
/// first `n − 1` partial sums of an exchangeable bridge (`S_n = 0`):
///
/// `C(n−1,k) · (s(k+1,d) + s(k+1,d−2) + …) / (k+1)!`.
pub fn expected_m_bridge(n: usize, k: usize, d: usize) -> Result<BigRational, ExactError> {
    require_min("d", d, 1)?;
    if k == 0 || k + 1 > n {
        return Err(ExactError::KOutOfRange {
            k,
            max: n.saturating_sub(1),
        });
    }
    let row = stirling_row(k + 1)?;
    let numerator = binomial(n - 1, k) * row.descending_sum(d as isize);
    Ok(BigRational::new(numerator, factorial(k + 1)))
}

/// Expected number (not halved) of `k`-subsets of walk partial sums whose
/// convex hull *contains* the origin:
///
/// `2 · C(n,k) · (B(k,d+1) + B(k,d+3) + …) / (2^k k!)`.
///
/// Together with [`expected_m_walk`] this tiles the full count:
/// `2·E M + E containing = C(n,k)` exactly.
pub fn expected_containing_count(n: usize, k: usize, d: usize) -> Result<BigRational, ExactError> {
    require_min("d", d, 1)?;
    if k == 0 || k > n {
        return Err(ExactError::KOutOfRange { k, max: n });
    }
    let row = b_row(k)?;
    let numerator = BigInt::from(2) * binomial(n, k) * row.ascending_sum(d as isize + 1);
    Ok(BigRational::new(numerator, pow2(k) * factorial(k)))
}

/// Probability that the convex hull of all `n` walk partial sums misses the
/// origin: `2(B(n,d−1) + B(n,d−3) + …)/(2^n n!)`.
pub fn nonabsorption_walk(n: usize, d: usize) -> Result<BigRational, ExactError> {
    require_min("n", n, 1)?;
    require_min("d", d, 1)?;
    let row = b_row(n)?;
    let numerator = BigInt::from(2) * row.descending_sum(d as isize - 1);
    Ok(BigRational::new(numerator, pow2(n) * factorial(n)))
}

/// Probability that the convex hull of the bridge partial sums
/// `S_1, …, S_{n−1}` misses the origin: `(2/n!)(s(n,d) + s(n,d−2) + …)`.
pub fn nonabsorption_bridge(n: usize, d: usize) -> Result<BigRational, ExactError> {
    require_min("n", n, 2)?;
    require_min("d", d, 1)?;
    let row = stirling_row(n)?;
    let numerator = BigInt::from(2) * row.descending_sum(d as isize);
    Ok(BigRational::new(numerator, factorial(n)))
}

/// The discrete arcsine law: entry `m` is `4^{−n} C(2m,m) C(2n−2m,n−m)`,
/// the probability that exactly `m` of the `n` partial sums of a symmetric
/// continuous one-dimensional walk are positive.
pub fn arcsine_pmf(n: usize) -> Result<Vec<BigRational>, ExactError> {
    require_min("n", n, 1)?;
    let denominator = pow2(2 * n);
    Ok((0..=n)
        .map(|m| {
            let numerator = binomial(2 * m, m) * binomial(2 * (n - m), n - m);
            BigRational::new(numerator, denominator.clone())
        })
        .collect())
}

/// The number of positive partial sums `S_1, …, S_{n−1}` of a continuous
/// exchangeable bridge is uniform on `{0, …, n−1}`: every entry is `1/n`.
pub fn uniform_bridge_pmf(n: usize) -> Result<Vec<BigRational>, ExactError> {
    require_min("n", n, 2)?;
    let entry = BigRational::new(BigInt::one(), BigInt::from(n as i64));
    Ok(vec![entry; n])
}

/// Limit of `k! · E M_walk(n,k,d) / n^k` as `n → ∞`:
/// `(B(k,d−1) + B(k,d−3) + …)/(2^k k!)`, which also equals
/// `expected_m_walk(k, k, d)`.
pub fn limit_moment_walk(k: usize, d: usize) -> Result<BigRational, ExactError> {
    require_min("k", k, 1)?;
    require_min("d", d, 1)?;
    let row = b_row(k)?;
    Ok(BigRational::new(
        row.descending_sum(d as isize - 1),
        pow2(k) * factorial(k),
    ))
}

/// Limit of `k! · E M_bridge(n,k,d) / n^k` as `n → ∞`:
/// `(s(k+1,d) + s(k+1,d−2) + …)/(k+1)!`, which also equals
/// `expected_m_bridge(k+1, k, d)`.
pub fn limit_moment_bridge(k: usize, d: usize) -> Result<BigRational, ExactError> {
    require_min("k", k, 1)?;
    require_min("d", d, 1)?;
    let row = stirling_row(k + 1)?;
    Ok(BigRational::new(
        row.descending_sum(d as isize),
        factorial(k + 1),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(int(p), int(q))
    }

    fn ints(vs: &[i64]) -> Vec<BigInt> {
        vs.iter().map(|&v| int(v)).collect()
    }

    #[test]
    fn b_row_small_rows() {
        assert_eq!(b_row(1).unwrap().values(), ints(&[1, 1]).as_slice());
        assert_eq!(b_row(2).unwrap().values(), ints(&[3, 4, 1]).as_slice());
        assert_eq!(b_row(3).unwrap().values(), ints(&[15, 23, 9, 1]).as_slice());
    }

    #[test]
    fn b_row_rejects_zero() {
        assert!(b_row(0).is_err());
    }

    #[test]
    fn b_row_structure() {
        // values[0] = (2k−1)!!, values[k] = 1, total sum 2^k k!.
        for k in 1..=20 {
            let row = b_row(k).unwrap();
            let double_factorial = (1..=k).fold(BigInt::one(), |acc, i| acc * (2 * i as i64 - 1));
            assert_eq!(row.value(0), double_factorial);
            assert_eq!(row.value(k as isize), BigInt::one());
            let total: BigInt = row.values().iter().sum();
            assert_eq!(total, pow2(k) * factorial(k));
        }
    }

    #[test]
    fn b_row_parity_sums() {
        for k in 1..=30 {
            let row = b_row(k).unwrap();
            let (even, odd) = row.parity_sums();
            let half = pow2(k - 1) * factorial(k);
            assert_eq!(even, half, "even-index sum at k={k}");
            assert_eq!(odd, half, "odd-index sum at k={k}");
        }
    }

    #[test]
    fn stirling_small_rows() {
        assert_eq!(stirling_row(1).unwrap().values(), ints(&[0, 1]).as_slice());
        assert_eq!(
            stirling_row(2).unwrap().values(),
            ints(&[0, 1, 1]).as_slice()
        );
        assert_eq!(
            stirling_row(3).unwrap().values(),
            ints(&[0, 2, 3, 1]).as_slice()
        );
        assert_eq!(
            stirling_row(4).unwrap().values(),
            ints(&[0, 6, 11, 6, 1]).as_slice()
        );
    }

    #[test]
    fn stirling_rejects_zero() {
        assert!(stirling_row(0).is_err());
    }

    #[test]
    fn stirling_structure_and_parity() {
        for m in 2..=30 {
            let row = stirling_row(m).unwrap();
            assert_eq!(row.value(0), BigInt::zero());
            assert_eq!(row.value(1), factorial(m - 1));
            assert_eq!(row.value(m as isize), BigInt::one());
            let (even, odd) = row.parity_sums();
            let half = factorial(m) / int(2);
            assert_eq!(even, half, "even-index sum at m={m}");
            assert_eq!(odd, half, "odd-index sum at m={m}");
        }
    }

    #[test]
    fn out_of_range_indices_read_zero() {
        let row = b_row(3).unwrap();
        assert_eq!(row.value(-1), BigInt::zero());
        assert_eq!(row.value(4), BigInt::zero());
        assert_eq!(row.descending_sum(-2), BigInt::zero());
        // Sum that starts above the row end only picks up in-range terms.
        assert_eq!(row.descending_sum(5), row.value(3) + row.value(1));
    }

    #[test]
    fn expected_m_walk_examples() {
        assert_eq!(expected_m_walk(4, 2, 1).unwrap(), rat(9, 4));
        assert_eq!(expected_m_walk(6, 3, 2).unwrap(), rat(115, 12));
        assert_eq!(expected_m_walk(5, 2, 3).unwrap(), rat(5, 1));
    }

    #[test]
    fn expected_m_walk_domain() {
        assert!(expected_m_walk(3, 4, 1).is_err());
        assert!(expected_m_walk(3, 0, 1).is_err());
        assert!(expected_m_walk(3, 2, 0).is_err());
    }

    #[test]
    fn expected_m_bridge_examples() {
        assert_eq!(expected_m_bridge(4, 2, 1).unwrap(), rat(1, 1));
        assert_eq!(expected_m_bridge(6, 3, 2).unwrap(), rat(55, 12));
        assert_eq!(expected_m_bridge(5, 2, 3).unwrap(), rat(3, 1));
    }

    #[test]
    fn expected_m_bridge_domain() {
        assert!(expected_m_bridge(4, 4, 1).is_err());
        assert!(expected_m_bridge(4, 5, 1).is_err());
        assert!(expected_m_bridge(1, 1, 1).is_err());
    }

    #[test]
    fn expected_containing_examples() {
        assert_eq!(expected_containing_count(5, 2, 3).unwrap(), rat(0, 1));
        assert_eq!(expected_containing_count(6, 3, 2).unwrap(), rat(5, 6));
        assert_eq!(expected_containing_count(4, 2, 1).unwrap(), rat(3, 2));
    }

    #[test]
    fn walk_counts_tile_the_binomial() {
        for n in 1..=12 {
            for k in 1..=n {
                for d in 1..=4 {
                    let lhs = expected_m_walk(n, k, d).unwrap() * rat(2, 1)
                        + expected_containing_count(n, k, d).unwrap();
                    assert_eq!(lhs, BigRational::from(binomial(n, k)), "n={n} k={k} d={d}");
                }
            }
        }
    }

    #[test]
    fn walk_expectation_factors_through_k_point_case() {
        for n in 1..=12 {
            for k in 1..=n {
                for d in 1..=4 {
                    let full = expected_m_walk(n, k, d).unwrap();
                    let seed = expected_m_walk(k, k, d).unwrap();
                    assert_eq!(full, seed * BigRational::from(binomial(n, k)));
                }
            }
        }
    }

    #[test]
    fn bridge_expectation_factors_through_k_plus_one_point_case() {
        for n in 2..=12 {
            for k in 1..n {
                for d in 1..=4 {
                    let full = expected_m_bridge(n, k, d).unwrap();
                    let seed = expected_m_bridge(k + 1, k, d).unwrap();
                    assert_eq!(full, seed * BigRational::from(binomial(n - 1, k)));
                }
            }
        }
    }

    #[test]
    fn nonabsorption_walk_examples() {
        assert_eq!(nonabsorption_walk(2, 1).unwrap(), rat(3, 4));
        assert_eq!(nonabsorption_walk(3, 2).unwrap(), rat(23, 24));
        assert_eq!(nonabsorption_walk(2, 3).unwrap(), rat(1, 1));
    }

    #[test]
    fn nonabsorption_bridge_examples() {
        assert_eq!(nonabsorption_bridge(3, 1).unwrap(), rat(2, 3));
        assert_eq!(nonabsorption_bridge(4, 2).unwrap(), rat(11, 12));
        assert_eq!(nonabsorption_bridge(3, 2).unwrap(), rat(1, 1));
        assert!(nonabsorption_bridge(1, 1).is_err());
    }

    #[test]
    fn arcsine_pmf_examples() {
        assert_eq!(arcsine_pmf(1).unwrap(), vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(
            arcsine_pmf(2).unwrap(),
            vec![rat(3, 8), rat(1, 4), rat(3, 8)]
        );
    }

    #[test]
    fn arcsine_pmf_normalized_and_symmetric() {
        for n in 1..=40 {
            let pmf = arcsine_pmf(n).unwrap();
            let total: BigRational = pmf.iter().cloned().sum();
            assert_eq!(total, rat(1, 1), "normalization at n={n}");
            for m in 0..=n {
                assert_eq!(pmf[m], pmf[n - m], "symmetry at n={n}, m={m}");
            }
        }
    }

    #[test]
    fn uniform_bridge_pmf_examples() {
        assert_eq!(
            uniform_bridge_pmf(3).unwrap(),
            vec![rat(1, 3), rat(1, 3), rat(1, 3)]
        );
        assert_eq!(uniform_bridge_pmf(2).unwrap(), vec![rat(1, 2), rat(1, 2)]);
        assert!(uniform_bridge_pmf(1).is_err());

        // Factorial moment of the uniform law: Σ_m C(m,2)/4 = C(3,2)/3.
        let pmf = uniform_bridge_pmf(4).unwrap();
        let moment: BigRational = pmf
            .iter()
            .enumerate()
            .map(|(m, p)| p * BigRational::from(binomial(m, 2)))
            .sum();
        assert_eq!(moment, rat(1, 1));
        assert_eq!(
            moment,
            BigRational::from(binomial(3, 2)) / BigRational::from(int(3))
        );
    }

    #[test]
    fn one_dimensional_walk_moments_match_arcsine_pushforward() {
        // E M(n,k,1) computed from the closed form must equal the factorial
        // moment Σ_m pmf[m]·C(m,k) of the arcsine law, exactly.
        for n in 1..=12 {
            let pmf = arcsine_pmf(n).unwrap();
            for k in 1..=n {
                let moment: BigRational = pmf
                    .iter()
                    .enumerate()
                    .map(|(m, p)| p * BigRational::from(binomial(m, k)))
                    .sum();
                assert_eq!(expected_m_walk(n, k, 1).unwrap(), moment, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn one_dimensional_bridge_moments_match_uniform_pushforward() {
        for n in 2..=12 {
            let pmf = uniform_bridge_pmf(n).unwrap();
            for k in 1..n {
                let moment: BigRational = pmf
                    .iter()
                    .enumerate()
                    .map(|(m, p)| p * BigRational::from(binomial(m, k)))
                    .sum();
                let closed = expected_m_bridge(n, k, 1).unwrap();
                assert_eq!(closed, moment, "n={n} k={k}");
                assert_eq!(
                    closed,
                    BigRational::new(binomial(n - 1, k), int(k as i64 + 1)),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn limit_moment_examples() {
        assert_eq!(limit_moment_walk(2, 1).unwrap(), rat(3, 8));
        assert_eq!(limit_moment_walk(1, 1).unwrap(), rat(1, 2));
        assert_eq!(limit_moment_walk(3, 2).unwrap(), rat(23, 48));
        // The limit coincides with the k-point walk expectation.
        for k in 1..=8 {
            for d in 1..=4 {
                assert_eq!(
                    limit_moment_walk(k, d).unwrap(),
                    expected_m_walk(k, k, d).unwrap()
                );
                assert_eq!(
                    limit_moment_bridge(k, d).unwrap(),
                    expected_m_bridge(k + 1, k, d).unwrap()
                );
            }
        }
    }

    #[test]
    fn binomial_edge_cases() {
        assert_eq!(binomial(0, 0), BigInt::one());
        assert_eq!(binomial(5, 7), BigInt::zero());
        assert_eq!(binomial(10, 4), int(210));
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(6), int(720));
    }

    #[test]
    fn row_caches_are_thread_safe() {
        let handles: Vec<_> = (0..8)
            .map(|_| {
                std::thread::spawn(|| {
                    let b = b_row(120).unwrap();
                    let s = stirling_row(120).unwrap();
                    (b.value(60), s.value(60))
                })
            })
            .collect();
        let results: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        for pair in &results[1..] {
            assert_eq!(pair, &results[0]);
        }
    }
}
