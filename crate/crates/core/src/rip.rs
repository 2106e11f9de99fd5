//! Exact restricted isometry constants by enumeration, a randomized lower
//! bound, mutual coherence, and the coherence-based bound on the isometry
//! constant.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{self, SupportSet};
use crate::sensing::{self, DEFAULT_SUBSET_CAP};
use crate::subsets;

/// How a restricted-isometry figure was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RicMethod {
    ExactEnumeration,
    MonteCarloLowerBound,
}

/// Restricted isometry constant of one order, with the column subset whose
/// Gram eigenvalue attains it.
#[derive(Debug, Clone, PartialEq)]
pub struct RipReport {
    pub order: usize,
    pub delta: f64,
    pub method: RicMethod,
    pub witness: SupportSet,
    pub witness_eigenvalue: f64,
}

/// Exact order-k restricted isometry constant:
/// `delta = max over k-subsets S of max(lambda_max(G_S) - 1, 1 - lambda_min(G_S))`.
/// Ties keep the lexicographically first witness.
pub fn ric_exact(a: &DMatrix<f64>, k: usize) -> Result<RipReport> {
    ric_exact_with_cap(a, k, DEFAULT_SUBSET_CAP)
}

pub fn ric_exact_with_cap(a: &DMatrix<f64>, k: usize, cap: usize) -> Result<RipReport> {
    let g = linalg::gram(a);
    let mut delta = f64::NEG_INFINITY;
    let mut witness: Vec<usize> = Vec::new();
    let mut witness_eigenvalue = 1.0;
    subsets::for_each_subset(a.ncols(), k, cap, |s| {
        let gs = DMatrix::from_fn(k, k, |i, j| g[(s[i], s[j])]);
        let eigs = linalg::symmetric_eigenvalues(&gs)?;
        let lo = eigs[0];
        let hi = *eigs.last().expect("k >= 1");
        let (dev, eig) = if hi - 1.0 >= 1.0 - lo {
            (hi - 1.0, hi)
        } else {
            (1.0 - lo, lo)
        };
        if dev > delta {
            delta = dev;
            witness = s.to_vec();
            witness_eigenvalue = eig;
        }
        Ok(())
    })?;
    Ok(RipReport {
        order: k,
        delta: delta.max(0.0),
        method: RicMethod::ExactEnumeration,
        witness: SupportSet::new(witness),
        witness_eigenvalue,
    })
}

/// Randomized lower bound: the max of `| ||A v||^2 - 1 |` over random unit
/// k-sparse vectors. Always at most the exact constant (up to roundoff).
pub fn ric_lower_bound(a: &DMatrix<f64>, k: usize, trials: usize, seed: u64) -> Result<f64> {
    if k == 0 || k > a.ncols() {
        return Err(Error::BadK {
            k,
            limit: a.ncols(),
        });
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: f64 = 0.0;
    for _ in 0..trials {
        let support = sensing::sample_subset(&mut rng, a.ncols(), k);
        let mut v = DVector::zeros(a.ncols());
        let mut norm_sq = 0.0;
        for &idx in &support {
            let g: f64 = StandardNormal.sample(&mut rng);
            v[idx] = g;
            norm_sq += g * g;
        }
        if norm_sq == 0.0 {
            continue;
        }
        v /= norm_sq.sqrt();
        best = best.max(((a * &v).norm_squared() - 1.0).abs());
    }
    Ok(best)
}

/// Mutual coherence: the largest absolute off-diagonal Gram entry, with no
/// column normalization applied.
pub fn coherence(a: &DMatrix<f64>) -> Result<f64> {
    if a.ncols() < 2 {
        return Err(Error::TooFewColumns);
    }
    let g = linalg::gram(a);
    let mut mu: f64 = 0.0;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            if i != j {
                mu = mu.max(g[(i, j)].abs());
            }
        }
    }
    Ok(mu)
}

/// Checks `delta_k <= mu * (k - 1)` (valid for unit-norm columns). Errors if
/// any column norm deviates from 1 by more than 1e-8.
pub fn coherence_ric_bound_check(a: &DMatrix<f64>, k: usize) -> Result<bool> {
    coherence_ric_bound_check_with_cap(a, k, DEFAULT_SUBSET_CAP)
}

pub fn coherence_ric_bound_check_with_cap(a: &DMatrix<f64>, k: usize, cap: usize) -> Result<bool> {
    for j in 0..a.ncols() {
        let norm = a.column(j).norm();
        if (norm - 1.0).abs() > 1e-8 {
            return Err(Error::NotNormalized { column: j, norm });
        }
    }
    let delta = ric_exact_with_cap(a, k, cap)?.delta;
    let mu = coherence(a)?;
    Ok(delta <= mu * (k as f64 - 1.0) + 1e-9)
}
