//! Orthogonal Matching Pursuit with full per-iteration tracing.
//!
//! Each iteration correlates the dictionary with the residual (match),
//! selects the column of largest absolute correlation (identify, ties to the
//! lowest index), and refits by least squares on the selected set (update).
//! The algorithm runs on whatever measurement/matrix pair a scenario hands
//! it; perturbed inputs need no special casing because the selected-column
//! correlations vanish after every update regardless.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{self, SupportSet};

/// Why the iteration loop stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    ReachedMaxIter,
    ResidualTolerance,
}

/// One iteration: the chosen column, the top two correlation magnitudes,
/// the post-update residual norm, and the support snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub selected_index: usize,
    pub h_max_abs: f64,
    pub h_runner_up_abs: f64,
    pub residual_norm: f64,
    pub lambda_set: SupportSet,
}

/// Full run record plus the final estimate, materialized as a length-n
/// vector supported on the final selection.
#[derive(Debug, Clone, PartialEq)]
pub struct OmpTrace {
    pub iterations: Vec<IterationRecord>,
    pub x_hat: DVector<f64>,
    pub converged_reason: StopReason,
}

impl OmpTrace {
    /// Column indices in selection order.
    pub fn selection_sequence(&self) -> Vec<usize> {
        self.iterations.iter().map(|it| it.selected_index).collect()
    }

    /// Final selected support.
    pub fn support(&self) -> SupportSet {
        self.iterations
            .last()
            .map(|it| it.lambda_set.clone())
            .unwrap_or_default()
    }
}

/// Correlation of every column with a residual: `Aᵀ r`.
pub fn matching_vector(residual: &DVector<f64>, a: &DMatrix<f64>) -> Result<DVector<f64>> {
    if residual.len() != a.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "residual has length {}, matrix has {} rows",
            residual.len(),
            a.nrows()
        )));
    }
    Ok(a.transpose() * residual)
}

/// Runs OMP for at most `max_iter` iterations, stopping early when the
/// residual norm drops to `residual_tol`. With `residual_tol = 0` the run
/// performs exactly `max_iter` iterations unless the residual vanishes.
pub fn omp_run(
    y: &DVector<f64>,
    a: &DMatrix<f64>,
    max_iter: usize,
    residual_tol: f64,
) -> Result<OmpTrace> {
    if y.len() != a.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "y has length {}, matrix has {} rows",
            y.len(),
            a.nrows()
        )));
    }
    if max_iter > a.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "max_iter {} exceeds row count {}",
            max_iter,
            a.nrows()
        )));
    }
    if residual_tol < 0.0 {
        return Err(Error::InvalidArgument("residual_tol must be nonnegative"));
    }

    let n = a.ncols();
    let mut lambda = SupportSet::empty();
    let mut residual = y.clone();
    let mut coeffs = DVector::zeros(0);
    let mut iterations = Vec::with_capacity(max_iter);
    let mut reason = StopReason::ReachedMaxIter;

    if residual.norm() <= residual_tol {
        reason = StopReason::ResidualTolerance;
    } else {
        for _ in 0..max_iter {
            let h = matching_vector(&residual, a)?;

            // Identify: argmax of |h| outside the current support, ties to
            // the lowest index. Correlations inside the support are zero up
            // to roundoff, so restricting the argmax changes nothing
            // mathematically while keeping the no-reselection invariant.
            let mut selected = None;
            let mut best = f64::NEG_INFINITY;
            for j in 0..n {
                if !lambda.contains(j) && h[j].abs() > best {
                    best = h[j].abs();
                    selected = Some(j);
                }
            }
            let selected =
                selected.ok_or(Error::InvalidArgument("no selectable column remains"))?;
            let runner_up = (0..n)
                .filter(|&j| j != selected)
                .map(|j| h[j].abs())
                .fold(0.0, f64::max);

            lambda.insert(selected);
            coeffs = linalg::least_squares_on_support(a, y, &lambda)?;
            let a_s = linalg::columns(a, &lambda)?;
            residual = y - &a_s * &coeffs;

            iterations.push(IterationRecord {
                selected_index: selected,
                h_max_abs: best,
                h_runner_up_abs: runner_up,
                residual_norm: residual.norm(),
                lambda_set: lambda.clone(),
            });

            if residual.norm() <= residual_tol {
                reason = StopReason::ResidualTolerance;
                break;
            }
        }
    }

    let mut x_hat = DVector::zeros(n);
    for (pos, idx) in lambda.iter().enumerate() {
        x_hat[idx] = coeffs[pos];
    }
    Ok(OmpTrace {
        iterations,
        x_hat,
        converged_reason: reason,
    })
}
