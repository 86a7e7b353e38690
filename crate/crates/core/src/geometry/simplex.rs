//! Phase-1 simplex feasibility: does `{x ≥ 0 : A x = b}` have a point?
//!
//! The exact solver works over `BigRational` with Bland's least-index
//! anti-cycling rule, so it terminates on every input, degenerate or not.
//! The floating-point twin runs the same pivoting with epsilon guards and an
//! iteration cap; callers treat its answer as trustworthy only when the
//! optimal objective is clearly away from zero and fall back to the exact
//! solver otherwise.
//!
//! Artificial variables are kept implicit: the tableau stores only the
//! structural columns plus the right-hand side, artificials start as the
//! basis, and they are never allowed to re-enter. Dropping their columns is
//! sound for a feasibility verdict — a feasible system reaches objective zero
//! with every artificial at zero, and an infeasible one stays positive with
//! or without them.

use num_rational::BigRational;
use num_traits::Zero;

/// Decides exactly whether `{x ≥ 0 : a·x = b}` is nonempty.
///
/// `a` is row-major and rectangular; `b` has one entry per row.
pub(crate) fn feasible_nonneg_exact(a: &[Vec<BigRational>], b: &[BigRational]) -> bool {
    let m = a.len();
    assert_eq!(m, b.len(), "one right-hand side entry per row");
    if m == 0 {
        return true;
    }
    let n = a[0].len();

    // Tableau rows: structural columns 0..n, right-hand side at index n.
    // Rows are sign-flipped so every right-hand side is nonnegative, which
    // lets the artificial basis start feasible.
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for (r, row) in a.iter().enumerate() {
        assert_eq!(row.len(), n, "ragged constraint matrix");
        let mut t: Vec<BigRational> = Vec::with_capacity(n + 1);
        if b[r] < BigRational::zero() {
            t.extend(row.iter().map(|v| -v.clone()));
            t.push(-b[r].clone());
        } else {
            t.extend(row.iter().cloned());
            t.push(b[r].clone());
        }
        rows.push(t);
    }

    // Phase-1 objective: minimize the sum of the artificials. With the
    // artificial basis, the reduced profit of structural column j is the
    // column sum; the objective value is the right-hand-side sum.
    let mut basis: Vec<usize> = (0..m).map(|i| n + i).collect();
    let mut wrow: Vec<BigRational> = (0..n)
        .map(|j| rows.iter().fold(BigRational::zero(), |acc, r| acc + &r[j]))
        .collect();
    let mut wval: BigRational = rows
        .iter()
        .fold(BigRational::zero(), |acc, r| acc + &r[n]);

    loop {
        if wval.is_zero() {
            return true;
        }
        // Bland's rule: enter the lowest-index improving structural column.
        let Some(enter) = (0..n).find(|&j| wrow[j] > BigRational::zero()) else {
            return false; // optimal with positive objective: infeasible
        };
        // Ratio test; ties broken by the lowest basic variable index.
        let mut leave: Option<usize> = None;
        let mut best: Option<BigRational> = None;
        for i in 0..m {
            if rows[i][enter] > BigRational::zero() {
                let ratio = &rows[i][n] / &rows[i][enter];
                let better = match (&best, leave) {
                    (None, _) => true,
                    (Some(b), Some(li)) => ratio < *b || (ratio == *b && basis[i] < basis[li]),
                    (Some(_), None) => unreachable!(),
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        // The phase-1 objective is bounded below by zero, so an improving
        // column always has a blocking row.
        let li = leave.expect("phase-1 objective is bounded below");

        // Pivot on (li, enter).
        let p = rows[li][enter].clone();
        for v in rows[li].iter_mut() {
            *v = &*v / &p;
        }
        let pivot_row = rows[li].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == li || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (v, pv) in row.iter_mut().zip(pivot_row.iter()) {
                *v -= &f * pv;
            }
        }
        let f = wrow[enter].clone();
        if !f.is_zero() {
            for (v, pv) in wrow.iter_mut().zip(pivot_row.iter()) {
                *v -= &f * pv;
            }
            wval -= &f * &pivot_row[n];
        }
        basis[li] = enter;
    }
}

/// Floating-point twin of [`feasible_nonneg_exact`] with reusable buffers.
///
/// Hot loops solve millions of tiny systems, so the tableau lives in one
/// flat allocation that survives across calls: size it with [`Self::tableau`],
/// fill it row by row, then ask for the [`Self::objective`].
pub(crate) struct FlatPhase1 {
    /// `m` rows of `n` structural coefficients followed by the right-hand
    /// side, stride `n + 1`.
    tab: Vec<f64>,
    /// Reduced profits of the structural columns.
    wrow: Vec<f64>,
    /// Basic variable of each row (artificials are `n..n + m`).
    basis: Vec<usize>,
    m: usize,
    n: usize,
}

impl FlatPhase1 {
    pub(crate) fn new() -> Self {
        Self {
            tab: Vec::new(),
            wrow: Vec::new(),
            basis: Vec::new(),
            m: 0,
            n: 0,
        }
    }

    /// Basic variable of each row after the last [`Self::objective`] run;
    /// structural columns are `0..n`, artificials `n..n + m`.
    pub(crate) fn basis(&self) -> &[usize] {
        &self.basis
    }

    /// Sizes the tableau for `m` constraint rows and `n` structural columns
    /// and returns it zeroed. The caller writes each row's coefficients and
    /// its right-hand side at index `n` (row stride `n + 1`).
    pub(crate) fn tableau(&mut self, m: usize, n: usize) -> &mut [f64] {
        self.m = m;
        self.n = n;
        self.tab.clear();
        self.tab.resize(m * (n + 1), 0.0);
        &mut self.tab
    }

    /// Runs phase 1 on the filled tableau: the optimal objective of
    /// minimizing the artificial sum over `{x ≥ 0 : a·x = b}` (`Some(w)` with
    /// `w ≈ 0` meaning feasible), or `None` when the iteration cap is hit
    /// and no verdict is safe.
    pub(crate) fn objective(&mut self) -> Option<f64> {
        const EPS: f64 = 1e-12;
        let (m, n) = (self.m, self.n);
        if m == 0 {
            return Some(0.0);
        }
        let stride = n + 1;
        let tab = &mut self.tab[..m * stride];

        // Flip rows with a negative right-hand side so the artificial basis
        // starts feasible.
        for row in tab.chunks_exact_mut(stride) {
            if row[n] < 0.0 {
                for v in row.iter_mut() {
                    *v = -*v;
                }
            }
        }

        self.basis.clear();
        self.basis.extend(n..n + m);
        self.wrow.clear();
        self.wrow.resize(n, 0.0);
        let mut wval = 0.0;
        for row in tab.chunks_exact(stride) {
            for (w, v) in self.wrow.iter_mut().zip(row.iter()) {
                *w += v;
            }
            wval += row[n];
        }

        let max_iters = 200 + 20 * (n + m);
        for _ in 0..max_iters {
            // Bland's rule: enter the lowest-index improving column.
            let Some(enter) = self.wrow.iter().position(|&w| w > EPS) else {
                return Some(wval.max(0.0));
            };
            // Ratio test; ties broken by the lowest basic variable index.
            let mut leave: Option<usize> = None;
            let mut best = f64::INFINITY;
            for i in 0..m {
                let coeff = tab[i * stride + enter];
                if coeff > EPS {
                    let ratio = tab[i * stride + n] / coeff;
                    let better = match leave {
                        None => true,
                        Some(li) => {
                            ratio < best || (ratio == best && self.basis[i] < self.basis[li])
                        }
                    };
                    if better {
                        best = ratio;
                        leave = Some(i);
                    }
                }
            }
            let li = leave?; // numerically stuck: no safe verdict

            // Pivot on (li, enter), splitting the tableau around the pivot
            // row so no row needs to be copied out.
            let pstart = li * stride;
            let p = tab[pstart + enter];
            for v in &mut tab[pstart..pstart + stride] {
                *v /= p;
            }
            let (head, rest) = tab.split_at_mut(pstart);
            let (pivot, tail) = rest.split_at_mut(stride);
            for row in head
                .chunks_exact_mut(stride)
                .chain(tail.chunks_exact_mut(stride))
            {
                let f = row[enter];
                if f != 0.0 {
                    for (v, pv) in row.iter_mut().zip(pivot.iter()) {
                        *v -= f * pv;
                    }
                }
            }
            let f = self.wrow[enter];
            if f != 0.0 {
                for (w, pv) in self.wrow.iter_mut().zip(pivot.iter()) {
                    *w -= f * pv;
                }
                wval -= f * pivot[n];
            }
            self.basis[li] = enter;
        }
        None
    }
}

