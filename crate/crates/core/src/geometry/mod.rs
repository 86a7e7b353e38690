//! Exact rational linear algebra and feasibility geometry.
//!
//! The primitives here decide, with no tolerance anywhere:
//!
//! * membership of the origin in a convex hull ([`origin_in_hull`]), plus a
//!   floating-point fast path ([`origin_in_hull_fast`]) whose ambiguous cases
//!   are lifted to exact dyadic rationals and re-decided;
//! * exact matrix rank by fraction-free (Bareiss) elimination
//!   ([`matrix_rank`]);
//! * whether a chain cone meets the kernel of a constraint matrix only at the
//!   origin ([`cone_meets_subspace_trivially`]);
//! * whether a subspace is in general position with respect to the reflection
//!   arrangement of signed or unsigned coordinate permutations
//!   ([`general_position_check`]).

mod simplex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// A point or coefficient vector with exact rational entries.
pub type RatVector = Vec<BigRational>;

/// Ambient-dimension cap for exact general-position certification; the
/// arrangement lattice is enumerated exhaustively, which is only tractable
/// for small dimensions.
pub const MAX_GP_AMBIENT: usize = 8;

/// Absolute half-width of the band around zero in which the floating
/// feasibility verdict is considered ambiguous and the exact solver decides.
pub const HULL_AMBIGUITY_BAND: f64 = 1e-9;

/// Errors from the geometric predicates.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("input must contain at least one point/row/column")]
    EmptyInput,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite floating-point input")]
    NonFiniteInput,
    #[error("constraint matrix has rank {rank} but {rows} rows (not full row rank)")]
    NotFullRowRank { rank: usize, rows: usize },
    #[error("ambient dimension {n} exceeds the supported maximum {max}")]
    UnsupportedSize { n: usize, max: usize },
}

/// Dense matrix of exact rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    /// Builds a matrix from rows; all rows must share one positive length.
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self, GeometryError> {
        let nrows = rows.len();
        if nrows == 0 {
            return Err(GeometryError::EmptyInput);
        }
        let cols = rows[0].len();
        if cols == 0 {
            return Err(GeometryError::EmptyInput);
        }
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(GeometryError::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(RatMatrix {
            rows: nrows,
            cols,
            data,
        })
    }

    /// Convenience constructor from machine integers.
    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self, GeometryError> {
        RatMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigRational::from(BigInt::from(v))).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    /// Row `r` as a slice.
    pub fn row(&self, r: usize) -> &[BigRational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// The transposed matrix.
    pub fn transposed(&self) -> RatMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        RatMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }
}

/// A linear subspace given as the kernel of a full-row-rank constraint
/// matrix; its codimension is the number of constraint rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceSpec {
    constraints: RatMatrix,
}

impl SubspaceSpec {
    /// Validates full row rank and wraps the constraint matrix.
    pub fn new(constraints: RatMatrix) -> Result<Self, GeometryError> {
        let rank = matrix_rank(&constraints);
        if rank != constraints.rows() {
            return Err(GeometryError::NotFullRowRank {
                rank,
                rows: constraints.rows(),
            });
        }
        Ok(SubspaceSpec { constraints })
    }

    /// Convenience constructor from integer constraint rows.
    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self, GeometryError> {
        SubspaceSpec::new(RatMatrix::from_int_rows(rows)?)
    }

    /// Dimension of the space the subspace lives in.
    pub fn ambient_dim(&self) -> usize {
        self.constraints.cols()
    }

    /// Codimension of the subspace (= number of constraint rows).
    pub fn codim(&self) -> usize {
        self.constraints.rows()
    }

    pub fn constraints(&self) -> &RatMatrix {
        &self.constraints
    }
}

/// The two chain-cone shapes whose faces are tested against subspaces.
///
/// `ChainB` is `γ_1 ≥ γ_2 ≥ … ≥ γ_k ≥ 0` (pointed). `ChainA` is
/// `γ_1 ≥ … ≥ γ_k` with no sign constraint, so it contains the all-ones
/// lineality line and is not pointed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeKind {
    ChainB,
    ChainA,
}

/// The two reflection arrangements against which general position is
/// certified: signed coordinate permutations (`B`) and plain coordinate
/// permutations (`A`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arrangement {
    B,
    A,
}

/// Decides exactly whether the origin lies in the convex hull of `points`.
///
/// Feasibility of `Σ α_i x_i = 0, Σ α_i = 1, α ≥ 0` is decided by the exact
/// phase-1 simplex with Bland's rule.
pub fn origin_in_hull(points: &[RatVector]) -> Result<bool, GeometryError> {
    let m = points.len();
    if m == 0 {
        return Err(GeometryError::EmptyInput);
    }
    let d = points[0].len();
    if d == 0 {
        return Err(GeometryError::EmptyInput);
    }
    for p in points {
        if p.len() != d {
            return Err(GeometryError::DimensionMismatch {
                expected: d,
                got: p.len(),
            });
        }
    }
    // d coordinate rows with right-hand side 0, one convexity row Σα = 1.
    let mut a = vec![vec![BigRational::zero(); m]; d + 1];
    for (j, p) in points.iter().enumerate() {
        for (r, x) in p.iter().enumerate() {
            a[r][j] = x.clone();
        }
        a[d][j] = BigRational::one();
    }
    let mut b = vec![BigRational::zero(); d];
    b.push(BigRational::one());
    Ok(simplex::feasible_nonneg_exact(&a, &b))
}

/// Floating-point fast path for [`origin_in_hull`].
///
/// Runs a floating phase-1 simplex; when the optimal objective lies within
/// [`HULL_AMBIGUITY_BAND`] of zero (or the solver gives no verdict), the
/// inputs are lifted exactly to dyadic rationals — mantissa over a power of
/// two, never via decimal strings — and the exact test is the authority.
/// A clearly positive objective is a trusted "not in hull".
pub fn origin_in_hull_fast(points: &[Vec<f64>]) -> Result<bool, GeometryError> {
    let m = points.len();
    if m == 0 {
        return Err(GeometryError::EmptyInput);
    }
    let d = points[0].len();
    if d == 0 {
        return Err(GeometryError::EmptyInput);
    }
    for p in points {
        if p.len() != d {
            return Err(GeometryError::DimensionMismatch {
                expected: d,
                got: p.len(),
            });
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(GeometryError::NonFiniteInput);
        }
    }

    let idx: Vec<usize> = (0..m).collect();
    origin_in_hull_indexed(points, &idx, &mut HullScratch::new())
}

/// Scratch buffers for [`origin_in_hull_indexed`], reused across calls so
/// per-test heap traffic stays constant.
pub(crate) struct HullScratch {
    lp: simplex::FlatPhase1,
}

impl HullScratch {
    pub(crate) fn new() -> Self {
        Self {
            lp: simplex::FlatPhase1::new(),
        }
    }
}

/// [`origin_in_hull_fast`] restricted to the subset `points[i]` for `i` in
/// `idx`, without copying the points out.
///
/// The caller guarantees the inputs are already validated: `idx` nonempty,
/// every selected point finite with one common dimension ≥ 1.
pub(crate) fn origin_in_hull_indexed(
    points: &[Vec<f64>],
    idx: &[usize],
    scratch: &mut HullScratch,
) -> Result<bool, GeometryError> {
    let m = idx.len();
    let d = points[idx[0]].len();
    debug_assert!(m >= 1 && d >= 1, "caller validates shape");

    // Feasibility system: columns are the selected points plus a convexity
    // row of ones; right-hand side is the origin plus weight 1.
    let stride = m + 1;
    let tab = scratch.lp.tableau(d + 1, m);
    let (coord_rows, ones_row) = tab.split_at_mut(d * stride);
    for (r, row) in coord_rows.chunks_exact_mut(stride).enumerate() {
        let mut maxabs = 0.0f64;
        for (j, &i) in idx.iter().enumerate() {
            let x = points[i][r];
            row[j] = x;
            maxabs = maxabs.max(x.abs());
        }
        // Equilibrate the coordinate rows so the objective scale is
        // comparable to the convexity row regardless of the points'
        // magnitude. The right-hand side entry is zero either way.
        if maxabs > 0.0 {
            for v in &mut row[..m] {
                *v /= maxabs;
            }
        }
    }
    for v in ones_row {
        *v = 1.0;
    }

    match scratch.lp.objective() {
        Some(objective) if objective.abs() > HULL_AMBIGUITY_BAND => Ok(false),
        _ => {
            // The solver believes the system is feasible (or gave up). Its
            // final basis names a candidate support; an exact convex
            // combination on that support proves membership outright and is
            // far cheaper than the exact simplex.
            if membership_certificate(points, idx, scratch.lp.basis()) {
                return Ok(true);
            }
            // No certificate: exact dyadic lift decides.
            let exact: Vec<RatVector> = idx
                .iter()
                .map(|&i| {
                    points[i]
                        .iter()
                        .map(|&x| {
                            BigRational::from_float(x).expect("finite floats lift exactly")
                        })
                        .collect()
                })
                .collect();
            origin_in_hull(&exact)
        }
    }
}

/// Attempts to certify `0 ∈ conv({points[i] : i ∈ idx})` exactly from a
/// floating-point solver basis.
///
/// When the basic structural columns name `d + 1` of the selected points,
/// the affine system `Σ λ_j p_j = 0, Σ λ_j = 1` on that support has at most
/// one solution, and Cramer's rule gives the weights' signs as determinant
/// signs. The determinants are taken over the integers: each support column
/// `[p_j; 1]` is cleared of denominators by its own positive dyadic factor,
/// which rescales each weight positively and so preserves its sign. All
/// weights nonnegative proves membership — the remaining points take weight
/// zero. Any other outcome (wrong support size, singular system, a negative
/// weight) yields `false`, which only means "no certificate": the caller
/// must decide by other exact means. Soundness does not depend on the basis
/// being right — a stale or wrongly-pivoted basis can only fail to certify.
fn membership_certificate(points: &[Vec<f64>], idx: &[usize], basis: &[usize]) -> bool {
    let m = idx.len();
    let d = points[idx[0]].len();
    let support: Vec<usize> = basis.iter().copied().filter(|&j| j < m).collect();
    let nvars = d + 1;
    if support.len() != nvars {
        return false;
    }

    let cols: Vec<Vec<BigInt>> = support
        .iter()
        .map(|&j| {
            let mut col: Vec<BigRational> = points[idx[j]]
                .iter()
                .map(|&x| BigRational::from_float(x).expect("finite floats lift exactly"))
                .collect();
            col.push(BigRational::one());
            integer_row(&col)
        })
        .collect();

    // System matrix with column `replace` (if any) swapped for the
    // right-hand side `(0, …, 0, 1)`.
    let build = |replace: Option<usize>| -> Vec<Vec<BigInt>> {
        (0..nvars)
            .map(|r| {
                (0..nvars)
                    .map(|c| {
                        if Some(c) == replace {
                            if r == d {
                                BigInt::one()
                            } else {
                                BigInt::zero()
                            }
                        } else {
                            cols[c][r].clone()
                        }
                    })
                    .collect()
            })
            .collect()
    };

    let det = det_int(build(None));
    if det.is_zero() {
        return false;
    }
    (0..nvars).all(|j| {
        let dj = det_int(build(Some(j)));
        dj.is_zero() || dj.sign() == det.sign()
    })
}

/// Exact determinant of a square integer matrix by one-step fraction-free
/// (Bareiss) elimination; every division is exact.
fn det_int(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut negate = false;
    let mut prev = BigInt::one();
    for col in 0..n.saturating_sub(1) {
        let Some(pr) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigInt::zero();
        };
        if pr != col {
            a.swap(col, pr);
            negate = !negate;
        }
        let (pivot_part, rest) = a.split_at_mut(col + 1);
        let prow = &pivot_part[col];
        for row in rest.iter_mut() {
            for c in (col + 1)..n {
                let t = &prow[col] * &row[c] - &row[col] * &prow[c];
                row[c] = t / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = prow[col].clone();
    }
    let last = a[n - 1][n - 1].clone();
    if negate {
        -last
    } else {
        last
    }
}

/// Clears denominators of a rational row, returning an integer row with the
/// same kernel/rank behaviour.
fn integer_row(row: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for v in row {
        lcm = lcm.lcm(v.denom());
    }
    row.iter()
        .map(|v| v.numer() * (&lcm / v.denom()))
        .collect()
}

/// Exact rank of integer rows by one-step fraction-free (Bareiss)
/// elimination; every division is exact.
fn rank_int_rows(mut a: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let rows = a.len();
    let mut rank = 0;
    let mut pivot_row = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        let Some(pr) = (pivot_row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(pivot_row, pr);
        let (pivot_part, rest) = a.split_at_mut(pivot_row + 1);
        let prow = &pivot_part[pivot_row];
        // Every row below updates, even those already zero in this column:
        // uniform one-step elimination keeps all entries equal to minors of
        // the input, which is what makes the division by `prev` exact.
        for row in rest.iter_mut() {
            for c in (col + 1)..cols {
                let t = &prow[col] * &row[c] - &row[col] * &prow[c];
                row[c] = t / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = prow[col].clone();
        pivot_row += 1;
        rank += 1;
        if pivot_row == rows {
            break;
        }
    }
    rank
}

/// Exact matrix rank via fraction-free Gaussian elimination.
pub fn matrix_rank(m: &RatMatrix) -> usize {
    let rows: Vec<Vec<BigInt>> = (0..m.rows()).map(|r| integer_row(m.row(r))).collect();
    rank_int_rows(rows, m.cols())
}

/// Decides whether the only point of the chain cone lying in the kernel of
/// `constraints` is the origin.
///
/// The cone lives in the column space of `constraints` (dimension `k` =
/// number of columns; a zero-column matrix is unrepresentable, so `k ≥ 1`).
///
/// For `ChainB`, nonzero cone members have `γ_1 > 0`, so feasibility is
/// tested on the section `γ_1 = 1` after substituting the nonnegative
/// differences `δ_j = γ_j − γ_{j+1}` (with `δ_k = γ_k`), under which
/// constraint columns become prefix sums and `γ_1 = δ_1 + … + δ_k`.
///
/// For `ChainA`, the cone contains the all-ones lineality line, so that
/// direction is tested for kernel membership first; the remaining nonzero
/// members have `γ_1 > γ_k` and are normalized by `γ_1 − γ_k = 1`, with
/// `γ_k` split into a difference of nonnegatives.
pub fn cone_meets_subspace_trivially(
    kind: ConeKind,
    constraints: &RatMatrix,
) -> Result<bool, GeometryError> {
    let d = constraints.rows();
    let k = constraints.cols();
    match kind {
        ConeKind::ChainB => {
            let mut a: Vec<Vec<BigRational>> = Vec::with_capacity(d + 1);
            for r in 0..d {
                let mut acc = BigRational::zero();
                let mut row = Vec::with_capacity(k);
                for l in 0..k {
                    acc += constraints.get(r, l).clone();
                    row.push(acc.clone());
                }
                a.push(row);
            }
            a.push(vec![BigRational::one(); k]);
            let mut b = vec![BigRational::zero(); d];
            b.push(BigRational::one());
            Ok(!simplex::feasible_nonneg_exact(&a, &b))
        }
        ConeKind::ChainA => {
            let lineality_in_kernel = (0..d).all(|r| {
                (0..k)
                    .fold(BigRational::zero(), |acc, l| acc + constraints.get(r, l))
                    .is_zero()
            });
            if lineality_in_kernel {
                return Ok(false);
            }
            // Variables: δ_1..δ_{k−1} ≥ 0, then γ_k = p − q with p, q ≥ 0.
            let mut a: Vec<Vec<BigRational>> = Vec::with_capacity(d + 1);
            for r in 0..d {
                let mut acc = BigRational::zero();
                let mut row = Vec::with_capacity(k + 1);
                for l in 0..k - 1 {
                    acc += constraints.get(r, l).clone();
                    row.push(acc.clone());
                }
                let row_sum = acc + constraints.get(r, k - 1);
                row.push(row_sum.clone());
                row.push(-row_sum);
                a.push(row);
            }
            let mut norm = vec![BigRational::one(); k - 1];
            norm.push(BigRational::zero());
            norm.push(BigRational::zero());
            a.push(norm);
            let mut b = vec![BigRational::zero(); d];
            b.push(BigRational::one());
            Ok(!simplex::feasible_nonneg_exact(&a, &b))
        }
    }
}

/// Visits every subspace of the reflection-arrangement intersection lattice
/// as `(dimension, integer constraint rows)`; stops early when the visitor
/// returns `false`.
///
/// For the signed arrangement the lattice elements are indexed by a set of
/// zeroed coordinates plus a sign-normalized partition of the rest (each
/// block's smallest element carries `+`); for the unsigned arrangement they
/// are plain set partitions.
fn visit_lattice(
    n: usize,
    arrangement: Arrangement,
    visit: &mut impl FnMut(usize, &[Vec<i64>]) -> bool,
) -> bool {
    match arrangement {
        Arrangement::A => {
            let elems: Vec<usize> = (0..n).collect();
            for partition in set_partitions(&elems) {
                let mut rows: Vec<Vec<i64>> = Vec::new();
                for block in &partition {
                    let leader = block[0];
                    for &i in &block[1..] {
                        let mut row = vec![0i64; n];
                        row[leader] = 1;
                        row[i] = -1;
                        rows.push(row);
                    }
                }
                if !visit(partition.len(), &rows) {
                    return false;
                }
            }
            true
        }
        Arrangement::B => {
            for zero_mask in 0u32..(1 << n) {
                let rest: Vec<usize> = (0..n).filter(|i| zero_mask & (1 << i) == 0).collect();
                let mut zero_rows: Vec<Vec<i64>> = Vec::new();
                for i in 0..n {
                    if zero_mask & (1 << i) != 0 {
                        let mut row = vec![0i64; n];
                        row[i] = 1;
                        zero_rows.push(row);
                    }
                }
                for partition in set_partitions(&rest) {
                    let followers: usize = partition.iter().map(|b| b.len() - 1).sum();
                    for signs in 0u32..(1 << followers) {
                        let mut rows = zero_rows.clone();
                        let mut bit = 0;
                        for block in &partition {
                            let leader = block[0];
                            for &i in &block[1..] {
                                let sign = if signs & (1 << bit) == 0 { 1 } else { -1 };
                                bit += 1;
                                let mut row = vec![0i64; n];
                                row[leader] = 1;
                                row[i] = -sign;
                                rows.push(row);
                            }
                        }
                        if !visit(partition.len(), &rows) {
                            return false;
                        }
                    }
                }
            }
            true
        }
    }
}

/// All partitions of `elems` into unordered nonempty blocks; each block lists
/// its elements in input order, so `block[0]` is the block minimum when the
/// input is sorted.
fn set_partitions(elems: &[usize]) -> Vec<Vec<Vec<usize>>> {
    fn rec(elems: &[usize], idx: usize, current: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if idx == elems.len() {
            out.push(current.clone());
            return;
        }
        let e = elems[idx];
        for b in 0..current.len() {
            current[b].push(e);
            rec(elems, idx + 1, current, out);
            current[b].pop();
        }
        current.push(vec![e]);
        rec(elems, idx + 1, current, out);
        current.pop();
    }
    let mut out = Vec::new();
    rec(elems, 0, &mut Vec::new(), &mut out);
    out
}

/// Certifies that the subspace is in general position with respect to the
/// chosen reflection arrangement: for every lattice subspace `K`,
/// `dim(L ∩ K) = max(dim K − codim L, 0)`, verified by exact rank of the
/// stacked constraints. Supported for ambient dimension up to
/// [`MAX_GP_AMBIENT`].
pub fn general_position_check(
    l: &SubspaceSpec,
    arrangement: Arrangement,
) -> Result<bool, GeometryError> {
    let n = l.ambient_dim();
    if n > MAX_GP_AMBIENT {
        return Err(GeometryError::UnsupportedSize {
            n,
            max: MAX_GP_AMBIENT,
        });
    }
    let d = l.codim();
    let l_rows: Vec<Vec<BigInt>> = (0..d).map(|r| integer_row(l.constraints().row(r))).collect();
    let ok = visit_lattice(n, arrangement, &mut |dim_k, extra| {
        let mut stacked = l_rows.clone();
        stacked.extend(
            extra
                .iter()
                .map(|row| row.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>()),
        );
        let rank = rank_int_rows(stacked, n);
        let dim_intersection = n - rank;
        dim_intersection == dim_k.saturating_sub(d)
    });
    Ok(ok)
}
