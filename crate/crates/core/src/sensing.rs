//! Sensing-matrix generation, perturbation models, scenario assembly, and
//! the relative perturbation ratios eps and eps_b.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, SupportSet};
use crate::signals;
use crate::subsets;

/// Default cap on the number of column subsets any exact enumeration may
/// visit. Override per call with the `_with_cap` variants, or via the
/// `OMP_PERTURB_CAP` environment variable in the CLI.
pub const DEFAULT_SUBSET_CAP: usize = 1_000_000;

/// Which measurement/matrix pair the recovery algorithm is given.
///
/// `N0`: clean. `N1`: noisy measurements, exact matrix. `N2`: measurements
/// from the ideal matrix, but only the perturbed matrix is available.
/// `N2prime`: measurements from the perturbed matrix, ideal matrix available.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    N0,
    N1,
    N2,
    N2prime,
}

impl Scenario {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scenario::N0 => "N0",
            Scenario::N1 => "N1",
            Scenario::N2 => "N2",
            Scenario::N2prime => "N2prime",
        }
    }
}

/// One recovery scenario instance: ideal matrix, matrix perturbation, noise,
/// signal, scenario tag, and the sparsity level the analysis targets.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedProblem {
    pub phi: DMatrix<f64>,
    pub e_mat: DMatrix<f64>,
    pub b: DVector<f64>,
    pub x: DVector<f64>,
    pub scenario: Scenario,
    pub k: usize,
}

impl PerturbedProblem {
    /// Validates shapes and the structural requirements of the scenario tag:
    /// N0 needs `E = 0`, `b = 0` and a k-sparse signal; N1 needs `E = 0`.
    pub fn new(
        phi: DMatrix<f64>,
        e_mat: DMatrix<f64>,
        b: DVector<f64>,
        x: DVector<f64>,
        scenario: Scenario,
        k: usize,
    ) -> Result<Self> {
        if phi.shape() != e_mat.shape() {
            return Err(Error::DimensionMismatch(format!(
                "phi is {:?}, E is {:?}",
                phi.shape(),
                e_mat.shape()
            )));
        }
        if b.len() != phi.nrows() || x.len() != phi.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "phi is {:?}, b has length {}, x has length {}",
                phi.shape(),
                b.len(),
                x.len()
            )));
        }
        if k == 0 || k > phi.ncols() {
            return Err(Error::BadK {
                k,
                limit: phi.ncols(),
            });
        }
        let e_zero = e_mat.iter().all(|v| *v == 0.0);
        let b_zero = b.iter().all(|v| *v == 0.0);
        match scenario {
            Scenario::N0 => {
                let sparse = x.iter().filter(|v| **v != 0.0).count() <= k;
                if !e_zero || !b_zero || !sparse {
                    return Err(Error::ScenarioMismatch {
                        expected: "N0 (E = 0, b = 0, k-sparse x)",
                        got: "nonzero perturbation or non-sparse signal".into(),
                    });
                }
            }
            Scenario::N1 => {
                if !e_zero {
                    return Err(Error::ScenarioMismatch {
                        expected: "N1 (E = 0)",
                        got: "nonzero matrix perturbation".into(),
                    });
                }
            }
            Scenario::N2 | Scenario::N2prime => {}
        }
        Ok(Self {
            phi,
            e_mat,
            b,
            x,
            scenario,
            k,
        })
    }

    pub fn m(&self) -> usize {
        self.phi.nrows()
    }

    pub fn n(&self) -> usize {
        self.phi.ncols()
    }

    /// The perturbed matrix `phi + E`.
    pub fn phi_tilde(&self) -> DMatrix<f64> {
        &self.phi + &self.e_mat
    }

    /// The measurement vector the recoverer observes.
    pub fn y_tilde(&self) -> DVector<f64> {
        match self.scenario {
            Scenario::N0 | Scenario::N1 | Scenario::N2 => &self.phi * &self.x + &self.b,
            Scenario::N2prime => self.phi_tilde() * &self.x + &self.b,
        }
    }

    /// The matrix handed to the recoverer.
    pub fn available_matrix(&self) -> DMatrix<f64> {
        match self.scenario {
            Scenario::N2 => self.phi_tilde(),
            Scenario::N0 | Scenario::N1 | Scenario::N2prime => self.phi.clone(),
        }
    }
}

/// Relative perturbation ratios of the noise and the matrix perturbation,
/// measured with k-column submatrix spectral norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelativeBounds {
    pub eps: f64,
    pub eps_b: f64,
    pub k: usize,
}

/// i.i.d. Gaussian matrix with entry variance 1/m, deterministic per seed.
pub fn gen_gaussian(m: usize, n: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, (1.0 / m as f64).sqrt()).expect("positive std");
    DMatrix::from_fn(m, n, |_, _| normal.sample(&mut rng))
}

/// The first m rows of a random n x n orthogonal matrix, rescaled by
/// `sqrt(n/m)` so columns are near unit norm. For `m = n` this is exactly
/// orthogonal (all isometry constants zero); for `m` slightly below `n` the
/// small-order isometry constants stay far smaller than a Gaussian draw of
/// the same shape, which is what makes guarantee-satisfied instances
/// reachable at test scale.
pub fn gen_partial_orthogonal(m: usize, n: usize, seed: u64) -> Result<DMatrix<f64>> {
    if m == 0 || n == 0 || m > n {
        return Err(Error::DimensionMismatch(format!(
            "partial orthogonal needs 1 <= m <= n, got m = {m}, n = {n}"
        )));
    }
    let square = gen_gaussian(n, n, seed);
    let q = square.qr().q();
    let scale = (n as f64 / m as f64).sqrt();
    Ok(q.rows(0, m).into_owned() * scale)
}

/// Largest spectral norm over all k-column submatrices, together with the
/// first (lexicographically lowest) subset attaining it.
pub fn max_submatrix_with_witness(
    a: &DMatrix<f64>,
    k: usize,
    cap: usize,
) -> Result<(f64, SupportSet)> {
    let g = linalg::gram(a);
    let mut best = f64::NEG_INFINITY;
    let mut witness: Vec<usize> = Vec::new();
    subsets::for_each_subset(a.ncols(), k, cap, |s| {
        let gs = DMatrix::from_fn(k, k, |i, j| g[(s[i], s[j])]);
        let top = linalg::symmetric_eigenvalues(&gs)?
            .last()
            .copied()
            .unwrap_or(0.0)
            .max(0.0);
        if top > best {
            best = top;
            witness = s.to_vec();
        }
        Ok(())
    })?;
    Ok((best.sqrt(), SupportSet::new(witness)))
}

/// Exact `max over k-column subsets of spectral_norm`, default cap.
pub fn submatrix_spectral_norm(a: &DMatrix<f64>, k: usize) -> Result<f64> {
    submatrix_spectral_norm_with_cap(a, k, DEFAULT_SUBSET_CAP)
}

pub fn submatrix_spectral_norm_with_cap(a: &DMatrix<f64>, k: usize, cap: usize) -> Result<f64> {
    max_submatrix_with_witness(a, k, cap).map(|(norm, _)| norm)
}

/// Monte-Carlo lower bound on the k-column submatrix norm: the max over
/// randomly sampled subsets. Never used by the guarantee checkers, which
/// require exact values.
pub fn submatrix_norm_lower_bound(
    a: &DMatrix<f64>,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<f64> {
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
        let s = sample_subset(&mut rng, a.ncols(), k);
        let sub = linalg::columns(a, &SupportSet::new(s))?;
        best = best.max(linalg::spectral_norm(&sub));
    }
    Ok(best)
}

pub(crate) fn sample_subset(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    use rand::Rng;
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.gen_range(i..n);
        idx.swap(i, j);
    }
    idx.truncate(k);
    idx
}

/// Computes the relative perturbation ratios for `p` at its sparsity level.
/// Zero perturbations short-circuit to zero ratios; otherwise a vanishing
/// denominator is an error.
pub fn relative_bounds(p: &PerturbedProblem) -> Result<RelativeBounds> {
    relative_bounds_with_cap(p, DEFAULT_SUBSET_CAP)
}

pub fn relative_bounds_with_cap(p: &PerturbedProblem, cap: usize) -> Result<RelativeBounds> {
    let k = p.k;
    let e_zero = p.e_mat.iter().all(|v| *v == 0.0);
    let eps = if e_zero {
        0.0
    } else {
        let num = submatrix_spectral_norm_with_cap(&p.e_mat, k, cap)?;
        let den = submatrix_spectral_norm_with_cap(&p.phi, k, cap)?;
        if den == 0.0 {
            return Err(Error::ZeroDenominator("||phi||_2^(k)"));
        }
        num / den
    };

    let b_norm = p.b.norm();
    let eps_b = if b_norm == 0.0 {
        0.0
    } else {
        let den = match p.scenario {
            Scenario::N0 | Scenario::N1 | Scenario::N2 => (&p.phi * &p.x).norm(),
            Scenario::N2prime => (p.phi_tilde() * &p.x).norm(),
        };
        if den == 0.0 {
            return Err(Error::ZeroDenominator("||phi x||_2"));
        }
        b_norm / den
    };

    Ok(RelativeBounds { eps, eps_b, k })
}

/// How a synthetic matrix perturbation is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PerturbModel {
    /// `E = -eps * phi`: the rescaled copy that meets the worst-case error
    /// bound with equality.
    ScaledCopy,
    /// Seeded Gaussian draw rescaled so the k-submatrix norm ratio equals
    /// the target exactly.
    RandomGaussian,
}

/// Produces a perturbation matrix `E` whose relative ratio
/// `||E||_2^(k) / ||phi||_2^(k)` equals `eps_target`.
pub fn perturb(
    phi: &DMatrix<f64>,
    eps_target: f64,
    model: PerturbModel,
    seed: u64,
    k: usize,
) -> Result<DMatrix<f64>> {
    perturb_with_cap(phi, eps_target, model, seed, k, DEFAULT_SUBSET_CAP)
}

pub fn perturb_with_cap(
    phi: &DMatrix<f64>,
    eps_target: f64,
    model: PerturbModel,
    seed: u64,
    k: usize,
    cap: usize,
) -> Result<DMatrix<f64>> {
    if eps_target < 0.0 {
        return Err(Error::InvalidArgument("eps_target must be nonnegative"));
    }
    if eps_target == 0.0 {
        return Ok(DMatrix::zeros(phi.nrows(), phi.ncols()));
    }
    match model {
        PerturbModel::ScaledCopy => Ok(phi * -eps_target),
        PerturbModel::RandomGaussian => {
            let raw = gen_gaussian(phi.nrows(), phi.ncols(), seed);
            let raw_norm = submatrix_spectral_norm_with_cap(&raw, k, cap)?;
            let phi_norm = submatrix_spectral_norm_with_cap(phi, k, cap)?;
            if raw_norm == 0.0 || phi_norm == 0.0 {
                return Err(Error::ZeroDenominator("submatrix norm while rescaling E"));
            }
            Ok(raw * (eps_target * phi_norm / raw_norm))
        }
    }
}

/// Returns `(y_tilde, available matrix, e)` where `e` is the effective
/// perturbation satisfying `y_tilde = M x1 + e` for the scenario's matrix
/// pairing (`M = phi + E` under N2 and its degenerations, `M = phi` under
/// N2prime).
pub fn assemble(p: &PerturbedProblem) -> Result<(DVector<f64>, DMatrix<f64>, DVector<f64>)> {
    let (_, x2) = signals::best_k_approx(&p.x, p.k)?;
    let e = match p.scenario {
        Scenario::N0 | Scenario::N1 | Scenario::N2 => p.phi_tilde() * &x2 - &p.e_mat * &p.x + &p.b,
        Scenario::N2prime => &p.phi * &x2 + &p.e_mat * &p.x + &p.b,
    };
    Ok((p.y_tilde(), p.available_matrix(), e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sparse_problem(scenario: Scenario) -> PerturbedProblem {
        let phi = gen_gaussian(6, 8, 3);
        let e = DMatrix::zeros(6, 8);
        let b = DVector::zeros(6);
        let mut x = DVector::zeros(8);
        x[1] = 2.0;
        x[5] = -1.0;
        PerturbedProblem::new(phi, e, b, x, scenario, 2).unwrap()
    }

    #[test]
    fn gaussian_is_deterministic_per_seed() {
        let a = gen_gaussian(5, 7, 42);
        let b = gen_gaussian(5, 7, 42);
        assert_eq!(a, b);
        let c = gen_gaussian(5, 7, 43);
        assert_ne!(a, c);
    }

    #[test]
    fn gaussian_column_norms_concentrate() {
        let a = gen_gaussian(48, 20, 9);
        let mean: f64 = (0..20).map(|j| a.column(j).norm()).sum::<f64>() / 20.0;
        assert!((0.8..1.2).contains(&mean), "mean column norm {mean}");
    }

    #[test]
    fn gaussian_scalar_case() {
        let a = gen_gaussian(1, 1, 0);
        assert_eq!(a.shape(), (1, 1));
        assert!(a[(0, 0)].is_finite());
    }

    #[test]
    fn submatrix_norm_examples() {
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 2.0, 3.0]));
        assert_relative_eq!(
            submatrix_spectral_norm(&d, 1).unwrap(),
            3.0,
            epsilon = 1e-10
        );
        let eye = DMatrix::<f64>::identity(5, 5);
        for k in 1..=5 {
            assert_relative_eq!(
                submatrix_spectral_norm(&eye, k).unwrap(),
                1.0,
                epsilon = 1e-10
            );
        }
        let a = gen_gaussian(6, 6, 1);
        assert_relative_eq!(
            submatrix_spectral_norm(&a, 6).unwrap(),
            crate::linalg::spectral_norm(&a),
            max_relative = 1e-9
        );
    }

    #[test]
    fn submatrix_norm_nondecreasing_in_k_and_dominates_columns() {
        let a = gen_gaussian(7, 9, 5);
        let max_col = (0..9).map(|j| a.column(j).norm()).fold(0.0, f64::max);
        let mut prev = 0.0;
        for k in 1..=4 {
            let v = submatrix_spectral_norm(&a, k).unwrap();
            assert!(v >= prev - 1e-12);
            assert!(v >= max_col - 1e-12);
            prev = v;
        }
    }

    #[test]
    fn lower_bound_never_exceeds_exact() {
        let a = gen_gaussian(6, 8, 17);
        for k in 1..=3 {
            let exact = submatrix_spectral_norm(&a, k).unwrap();
            let lower = submatrix_norm_lower_bound(&a, k, 200, 3).unwrap();
            assert!(lower <= exact + 1e-9);
        }
    }

    #[test]
    fn relative_bounds_zero_and_homogeneous() {
        let p = sparse_problem(Scenario::N0);
        let rb = relative_bounds(&p).unwrap();
        assert_eq!((rb.eps, rb.eps_b), (0.0, 0.0));

        let mut p2 = sparse_problem(Scenario::N2);
        p2.e_mat = &p2.phi * 0.01;
        let rb = relative_bounds(&p2).unwrap();
        assert_relative_eq!(rb.eps, 0.01, max_relative = 1e-10);

        let mut p3 = sparse_problem(Scenario::N2);
        p3.b = &p3.phi * &p3.x * 0.05;
        let rb = relative_bounds(&p3).unwrap();
        assert_relative_eq!(rb.eps_b, 0.05, max_relative = 1e-10);
    }

    #[test]
    fn perturb_models_hit_target() {
        let phi = gen_gaussian(6, 8, 21);
        let zero = perturb(&phi, 0.0, PerturbModel::RandomGaussian, 1, 2).unwrap();
        assert_eq!(zero.amax(), 0.0);

        let e = perturb(&phi, 0.1, PerturbModel::ScaledCopy, 1, 2).unwrap();
        let ratio =
            submatrix_spectral_norm(&e, 2).unwrap() / submatrix_spectral_norm(&phi, 2).unwrap();
        assert_relative_eq!(ratio, 0.1, epsilon = 1e-12);

        let e = perturb(&phi, 0.05, PerturbModel::RandomGaussian, 7, 2).unwrap();
        let ratio =
            submatrix_spectral_norm(&e, 2).unwrap() / submatrix_spectral_norm(&phi, 2).unwrap();
        assert!((ratio - 0.05).abs() <= 1e-9);
    }

    #[test]
    fn assemble_identities() {
        // N0: e = 0 and y = phi x.
        let p = sparse_problem(Scenario::N0);
        let (y, m, e) = assemble(&p).unwrap();
        assert!(e.norm() <= 1e-12);
        assert_relative_eq!(y, &p.phi * &p.x, epsilon = 1e-12);
        assert_eq!(m, p.phi);

        // N1 with sparse x: e = b.
        let mut p = sparse_problem(Scenario::N1);
        p.b = DVector::from_fn(6, |i, _| 0.01 * (i as f64 + 1.0));
        let (_, _, e) = assemble(&p).unwrap();
        assert_relative_eq!(e, p.b, epsilon = 1e-12);
    }

    #[test]
    fn assemble_identity_holds_for_both_scenarios() {
        for scenario in [Scenario::N2, Scenario::N2prime] {
            let phi = gen_gaussian(6, 8, 31);
            let e_mat = perturb(&phi, 0.05, PerturbModel::RandomGaussian, 32, 2).unwrap();
            let mut x = DVector::zeros(8);
            x[0] = 1.5;
            x[4] = -0.7;
            x[6] = 0.001; // small tail
            let b = DVector::from_fn(6, |i, _| 0.002 * (i as f64 - 2.0));
            let p = PerturbedProblem::new(phi, e_mat, b, x, scenario, 2).unwrap();
            let (y, m, e) = assemble(&p).unwrap();
            let (x1, _) = signals::best_k_approx(&p.x, 2).unwrap();
            let recon = &m * &x1 + &e;
            assert!((recon - &y).norm() <= 1e-10 * y.norm());
        }
    }

    #[test]
    fn scaled_copy_matches_worst_case_chain() {
        // With E = -eps*phi, b = eps_b*phi*x and sparse x, the effective
        // perturbation collapses to (eps + eps_b) * phi * x.
        let phi = gen_gaussian(6, 8, 77);
        let e_mat = perturb(&phi, 0.1, PerturbModel::ScaledCopy, 0, 2).unwrap();
        let mut x = DVector::zeros(8);
        x[2] = 1.0;
        x[3] = -2.0;
        let b = &phi * &x * 0.05;
        let p = PerturbedProblem::new(phi.clone(), e_mat, b, x.clone(), Scenario::N2, 2).unwrap();
        let (_, _, e) = assemble(&p).unwrap();
        let expected = &phi * &x * (0.1 + 0.05);
        assert!((e - &expected).norm() <= 1e-10 * expected.norm());
    }

    #[test]
    fn scenario_tags_are_validated() {
        let phi = gen_gaussian(4, 5, 1);
        let e = &phi * 0.1;
        let b = DVector::zeros(4);
        let mut x = DVector::zeros(5);
        x[0] = 1.0;
        let err = PerturbedProblem::new(phi, e, b, x, Scenario::N1, 1).unwrap_err();
        assert!(matches!(err, Error::ScenarioMismatch { .. }));
    }
}
