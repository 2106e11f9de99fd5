//! Adversarial constructions: a parametric family of perturbed sensing
//! problems on which OMP provably picks a wrong column in its first
//! iteration, and the rescaled-copy instance that meets the worst-case
//! effective-perturbation bound with equality.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;
use crate::omp;
use crate::sensing::{self, PerturbModel, PerturbedProblem, Scenario, DEFAULT_SUBSET_CAP};

/// A fully materialized failure instance on `k+1` dimensions.
///
/// The available matrix is the identity plus a rank-structured perturbation
/// whose extra column correlates with the measurement more strongly than any
/// true support column; its order-(k+1) isometry constant equals `delta` in
/// closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleInstance {
    pub k: usize,
    pub eta: f64,
    pub t0: f64,
    pub xi: f64,
    pub delta: f64,
    pub phi: DMatrix<f64>,
    pub e_mat: DMatrix<f64>,
    pub b: DVector<f64>,
    pub x: DVector<f64>,
    pub y_tilde: DVector<f64>,
}

impl CounterexampleInstance {
    pub fn phi_tilde(&self) -> DMatrix<f64> {
        &self.phi + &self.e_mat
    }

    /// Best k-term part of the signal: `t0` on the first k coordinates.
    pub fn x1(&self) -> DVector<f64> {
        let mut v = DVector::zeros(self.k + 1);
        for i in 0..self.k {
            v[i] = self.t0;
        }
        v
    }

    /// Tail of the signal: `xi/2` on the last coordinate.
    pub fn x2(&self) -> DVector<f64> {
        let mut v = DVector::zeros(self.k + 1);
        v[self.k] = self.xi / 2.0;
        v
    }

    /// Effective perturbation `(0, ..., 0, xi)`; its norm is exactly `xi`.
    pub fn effective_e(&self) -> DVector<f64> {
        let mut v = DVector::zeros(self.k + 1);
        v[self.k] = self.xi;
        v
    }

    /// View as a scenario instance (perturbed matrix available).
    pub fn to_problem(&self) -> Result<PerturbedProblem> {
        PerturbedProblem::new(
            self.phi.clone(),
            self.e_mat.clone(),
            self.b.clone(),
            self.x.clone(),
            Scenario::N2,
            self.k,
        )
    }
}

/// Closed-form isometry constant of the failure family:
/// `delta = (eta sqrt(k) - rho sqrt(k - eta^2 + rho^2)) / (k + rho^2)`,
/// where `rho = xi / t0`. This is the unique root that makes the extra
/// column's first-iteration correlation exactly `eta * t0`.
///
/// Requires `k >= 2`, `eta >= 1`, `rho` in (0, 1), `k - eta^2 + rho^2 >= 0`
/// (else [`Error::EtaTooLarge`]) and a result below `1/sqrt(k)` (else
/// [`Error::DeltaOutOfRange`]). The failure statement itself needs
/// `eta > 1`; `eta = 1` is admitted to expose the tie-break boundary.
pub fn delta_closed_form(k: usize, eta: f64, rho: f64) -> Result<f64> {
    if k < 2 {
        return Err(Error::BadK { k, limit: 2 });
    }
    if eta < 1.0 {
        return Err(Error::InvalidArgument("eta must be at least 1"));
    }
    if !(0.0..1.0).contains(&rho) || rho == 0.0 {
        return Err(Error::InvalidArgument("rho = xi/t0 must lie in (0, 1)"));
    }
    let kf = k as f64;
    let disc = kf - eta * eta + rho * rho;
    if disc < 0.0 {
        return Err(Error::EtaTooLarge { eta, k, rho });
    }
    let delta = (eta * kf.sqrt() - rho * disc.sqrt()) / (kf + rho * rho);
    let bound = 1.0 / kf.sqrt();
    if delta >= bound || delta <= 0.0 {
        return Err(Error::DeltaOutOfRange { delta, bound });
    }
    Ok(delta)
}

/// Builds the full instance: ideal matrix `I`, perturbed matrix
/// `[[I, a*1], [0, b]]` with `a = delta/sqrt(k)`, `b = sqrt(1 - delta^2)`,
/// signal `x = (t0, ..., t0, xi/2)`, noise `b = (0, ..., 0, xi/2)`.
pub fn build(k: usize, eta: f64, t0: f64, xi: f64) -> Result<CounterexampleInstance> {
    if t0 <= 0.0 {
        return Err(Error::InvalidArgument("t0 must be positive"));
    }
    if xi <= 0.0 || xi >= t0 {
        return Err(Error::InvalidArgument("xi must lie in (0, t0)"));
    }
    let rho = xi / t0;
    let delta = delta_closed_form(k, eta, rho)?;
    let a = delta / (k as f64).sqrt();
    let b_scalar = (1.0 - delta * delta).sqrt();

    let n = k + 1;
    let phi = DMatrix::<f64>::identity(n, n);
    let mut phi_tilde = DMatrix::<f64>::identity(n, n);
    for i in 0..k {
        phi_tilde[(i, k)] = a;
    }
    phi_tilde[(k, k)] = b_scalar;
    let e_mat = &phi_tilde - &phi;

    let mut x = DVector::zeros(n);
    for i in 0..k {
        x[i] = t0;
    }
    x[k] = xi / 2.0;
    let mut b = DVector::zeros(n);
    b[k] = xi / 2.0;

    let mut y_tilde = DVector::zeros(n);
    for i in 0..k {
        y_tilde[i] = t0;
    }
    y_tilde[k] = xi;

    Ok(CounterexampleInstance {
        k,
        eta,
        t0,
        xi,
        delta,
        phi,
        e_mat,
        b,
        x,
        y_tilde,
    })
}

/// Runs OMP for k iterations on the instance's observed pair and reports
/// whether the selection ever includes the extra column `k`, i.e. whether
/// support recovery fails.
pub fn verify_failure(inst: &CounterexampleInstance) -> bool {
    let trace = omp::omp_run(&inst.y_tilde, &inst.phi_tilde(), inst.k, 0.0)
        .expect("construction is full rank");
    trace.selection_sequence().contains(&inst.k)
}

/// Instance meeting the effective-perturbation bound with equality:
/// `E = -eps * phi`, `x` the top right-singular vector of the norm-
/// maximizing k-column submatrix (embedded at those coordinates), and
/// `b = eps_b * phi * x`, so that
/// `||e||_2 = (||phi + E||_2^(k) / (1 - eps)) (eps + eps_b) ||x||_2`.
pub fn tight_error_instance(
    phi: &DMatrix<f64>,
    k: usize,
    eps: f64,
    eps_b: f64,
) -> Result<PerturbedProblem> {
    tight_error_instance_with_cap(phi, k, eps, eps_b, DEFAULT_SUBSET_CAP)
}

pub fn tight_error_instance_with_cap(
    phi: &DMatrix<f64>,
    k: usize,
    eps: f64,
    eps_b: f64,
    cap: usize,
) -> Result<PerturbedProblem> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::EpsTooLarge(eps));
    }
    if eps_b < 0.0 {
        return Err(Error::InvalidArgument("eps_b must be nonnegative"));
    }
    let (_, witness) = sensing::max_submatrix_with_witness(phi, k, cap)?;
    let sub = linalg::columns(phi, &witness)?;
    let svd = sub.clone().svd(false, true);
    // Row of V^T paired with the largest singular value.
    let top = svd
        .singular_values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite"))
        .map(|(i, _)| i)
        .expect("k >= 1");
    let v_t = svd.v_t.expect("requested");
    let mut x = DVector::zeros(phi.ncols());
    for (pos, idx) in witness.iter().enumerate() {
        x[idx] = v_t[(top, pos)];
    }
    let e_mat = sensing::perturb_with_cap(phi, eps, PerturbModel::ScaledCopy, 0, k, cap)?;
    let b = phi * &x * eps_b;
    PerturbedProblem::new(phi.clone(), e_mat, b, x, Scenario::N2, k)
}
