//! Closed-form recovery conditions and error bounds.
//!
//! Each checker computes the worst-case effective perturbation `eps_h`, an
//! isometry-constant threshold, the exact isometry constant of the matrix
//! the recoverer sees, and the predicted estimation error bound
//! `eps_h / sqrt(1 - delta_k)`. The checkers always use exact enumeration
//! for the isometry constants; a false "satisfied" would silently break the
//! soundness contract, so infeasible enumerations error instead.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rip;
use crate::sensing::{self, PerturbedProblem, Scenario, DEFAULT_SUBSET_CAP};
use crate::signals;

/// Identifier of a recovery condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Guarantee {
    T1,
    T3,
    T4,
    T5,
    C1,
    C1prime,
    C1star,
    C2,
    C3,
    C4,
}

impl Guarantee {
    pub fn as_str(&self) -> &'static str {
        match self {
            Guarantee::T1 => "T1",
            Guarantee::T3 => "T3",
            Guarantee::T4 => "T4",
            Guarantee::T5 => "T5",
            Guarantee::C1 => "C1",
            Guarantee::C1prime => "C1prime",
            Guarantee::C1star => "C1star",
            Guarantee::C2 => "C2",
            Guarantee::C3 => "C3",
            Guarantee::C4 => "C4",
        }
    }

    /// Whether this condition additionally promises magnitude-ordered
    /// selection when satisfied.
    pub fn promises_order(&self) -> bool {
        matches!(self, Guarantee::T4 | Guarantee::C4)
    }
}

/// Outcome of evaluating one recovery condition on one problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct GuaranteeReport {
    pub theorem: Guarantee,
    pub eps_h: f64,
    pub delta_threshold: f64,
    pub delta_actual: f64,
    pub satisfied: bool,
    pub predicted_error_bound: f64,
    pub order_of_recovery_promised: bool,
    pub notes: String,
}

/// Extra inputs some conditions need.
#[derive(Debug, Clone, Copy, Default)]
pub struct CheckParams {
    /// Decay ratio for T3/T4/C3/C4.
    pub alpha: Option<f64>,
    /// Constant in (0,1) for C1prime.
    pub tau: Option<f64>,
}

/// Threshold kernel `Q(u, v) = (1 - 3v) / (sqrt(u) + 1)`, i.e.
/// `1/(sqrt(u)+1) - 3v/(sqrt(u)+1)`. May be negative; a nonpositive value
/// means the minimum-component SNR is too small for any matrix to qualify.
pub fn q_function(u: f64, v: f64) -> f64 {
    (1.0 - 3.0 * v) / (u.sqrt() + 1.0)
}

/// Worst-case effective perturbation for the perturbed-matrix-available
/// scenario: `1.23/(1-eps) * (eps + eps_b + (1+eps_b)(beta+gamma)) * ||x1||`.
pub fn eps_h_t1(eps: f64, eps_b: f64, beta: f64, gamma: f64, norm_x1: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::EpsTooLarge(eps));
    }
    Ok(1.23 / (1.0 - eps) * (eps + eps_b + (1.0 + eps_b) * (beta + gamma)) * norm_x1)
}

/// Worst-case effective perturbation for the ideal-matrix-available
/// scenario: `1.23 (eps + eps_b + eps*eps_b + (1+eps_b)(1+eps)(beta+gamma)) * ||x1||`.
/// Finite for every `eps >= 0`; no `1/(1-eps)` factor appears here.
pub fn eps_h_t5(eps: f64, eps_b: f64, beta: f64, gamma: f64, norm_x1: f64) -> f64 {
    1.23 * (eps + eps_b + eps * eps_b + (1.0 + eps_b) * (1.0 + eps) * (beta + gamma)) * norm_x1
}

/// Explicit bound on `beta + gamma` for an alpha-strong-decaying signal:
/// `(1 + sqrt((alpha+1)/(alpha-1))/sqrt(k)) * (alpha^{2k} - 1)^{-1/2}`.
/// Equality holds for the exact-ratio signal with an infinite geometric
/// tail; truncated tails fall below it.
pub fn strong_decay_tail_bound(alpha: f64, k: usize) -> Result<f64> {
    if alpha <= 1.0 {
        return Err(Error::BadAlpha(alpha));
    }
    if k == 0 {
        return Err(Error::BadK {
            k,
            limit: usize::MAX,
        });
    }
    let kf = k as f64;
    let lead = 1.0 + ((alpha + 1.0) / (alpha - 1.0)).sqrt() / kf.sqrt();
    Ok(lead / (alpha.powi(2 * k as i32) - 1.0).sqrt())
}

/// Off-support correlation bound `(delta ||x*|| + eps_h) / (1 - delta)`.
pub fn lemma2_bound(delta_k1: f64, norm_xstar: f64, eps_h: f64) -> Result<f64> {
    if delta_k1 >= 1.0 {
        return Err(Error::DeltaTooLarge(delta_k1));
    }
    Ok((delta_k1 * norm_xstar + eps_h) / (1.0 - delta_k1))
}

fn error_bound(eps_h: f64, delta_k: f64) -> f64 {
    if delta_k >= 1.0 {
        f64::INFINITY
    } else {
        eps_h / (1.0 - delta_k).sqrt()
    }
}

fn norm_on_support(x: &DVector<f64>, support: &crate::linalg::SupportSet) -> f64 {
    support.iter().map(|i| x[i] * x[i]).sum::<f64>().sqrt()
}

fn require_scenario_n2_family(p: &PerturbedProblem) -> Result<()> {
    match p.scenario {
        Scenario::N0 | Scenario::N1 | Scenario::N2 => Ok(()),
        Scenario::N2prime => Err(Error::ScenarioMismatch {
            expected: "N0/N1/N2",
            got: p.scenario.as_str().to_string(),
        }),
    }
}

fn require_zero_e(p: &PerturbedProblem) -> Result<()> {
    if p.e_mat.iter().all(|v| *v == 0.0) {
        Ok(())
    } else {
        Err(Error::ScenarioMismatch {
            expected: "E = 0",
            got: "nonzero matrix perturbation".to_string(),
        })
    }
}

fn require_zero_b(p: &PerturbedProblem) -> Result<()> {
    if p.b.iter().all(|v| *v == 0.0) {
        Ok(())
    } else {
        Err(Error::ScenarioMismatch {
            expected: "b = 0",
            got: "nonzero measurement noise".to_string(),
        })
    }
}

fn require_sparse(p: &PerturbedProblem) -> Result<()> {
    if p.x.iter().filter(|v| **v != 0.0).count() <= p.k {
        Ok(())
    } else {
        Err(Error::ScenarioMismatch {
            expected: "k-sparse x",
            got: format!(
                "{} nonzero entries with k = {}",
                p.x.iter().filter(|v| **v != 0.0).count(),
                p.k
            ),
        })
    }
}

fn require_strong_decaying(p: &PerturbedProblem, alpha: f64) -> Result<()> {
    if alpha <= 1.0 {
        return Err(Error::BadAlpha(alpha));
    }
    if signals::is_strong_decaying(&p.x, alpha) {
        Ok(())
    } else {
        Err(Error::NotStrongDecaying)
    }
}

/// Evaluates one recovery condition with an explicit enumeration cap.
pub fn check(
    p: &PerturbedProblem,
    which: Guarantee,
    params: &CheckParams,
    cap: usize,
) -> Result<GuaranteeReport> {
    let prof = signals::profile(&p.x, p.k)?;
    let norm_x1 = norm_on_support(&p.x, &prof.support);
    let kf = p.k as f64;

    // The matrix whose isometry constants govern the condition.
    let matrix = match which {
        Guarantee::T5 => p.phi.clone(),
        _ => p.phi_tilde(),
    };
    let delta_k1 = rip::ric_exact_with_cap(&matrix, p.k + 1, cap)?.delta;
    let delta_k = rip::ric_exact_with_cap(&matrix, p.k, cap)?.delta;

    let mut notes = String::new();
    let report = match which {
        Guarantee::T1 | Guarantee::C1 | Guarantee::C2 => {
            require_scenario_n2_family(p)?;
            match which {
                Guarantee::C1 => {
                    require_zero_e(p)?;
                    require_sparse(p)?;
                }
                Guarantee::C2 => {
                    require_zero_e(p)?;
                    require_zero_b(p)?;
                }
                _ => {}
            }
            let rb = sensing::relative_bounds_with_cap(p, cap)?;
            let eps_h = eps_h_t1(rb.eps, rb.eps_b, prof.beta, prof.gamma, norm_x1)?;
            let threshold = q_function(kf, eps_h / prof.t0);
            let snr_ok = prof.t0 > 3.0 * eps_h;
            if !snr_ok {
                notes = "minimum component SNR too small: t0 <= 3 eps_h".to_string();
            }
            GuaranteeReport {
                theorem: which,
                eps_h,
                delta_threshold: threshold,
                delta_actual: delta_k1,
                satisfied: snr_ok && delta_k1 < threshold,
                predicted_error_bound: error_bound(eps_h, delta_k),
                order_of_recovery_promised: false,
                notes,
            }
        }
        Guarantee::T5 => {
            if p.scenario != Scenario::N2prime {
                return Err(Error::ScenarioMismatch {
                    expected: "N2prime",
                    got: p.scenario.as_str().to_string(),
                });
            }
            let rb = sensing::relative_bounds_with_cap(p, cap)?;
            let eps_h = eps_h_t5(rb.eps, rb.eps_b, prof.beta, prof.gamma, norm_x1);
            let threshold = q_function(kf, eps_h / prof.t0);
            let snr_ok = prof.t0 > 3.0 * eps_h;
            if !snr_ok {
                notes = "minimum component SNR too small: t0 <= 3 eps_h".to_string();
            }
            GuaranteeReport {
                theorem: which,
                eps_h,
                delta_threshold: threshold,
                delta_actual: delta_k1,
                satisfied: snr_ok && delta_k1 < threshold,
                predicted_error_bound: error_bound(eps_h, delta_k),
                order_of_recovery_promised: false,
                notes,
            }
        }
        Guarantee::T3 | Guarantee::T4 => {
            require_scenario_n2_family(p)?;
            let alpha = params
                .alpha
                .ok_or(Error::InvalidArgument("alpha required for this condition"))?;
            require_strong_decaying(p, alpha)?;
            let rb = sensing::relative_bounds_with_cap(p, cap)?;
            let tail = strong_decay_tail_bound(alpha, p.k)?;
            // The decay bound replaces beta + gamma.
            let eps_h = eps_h_t1(rb.eps, rb.eps_b, tail, 0.0, norm_x1)?;
            if which == Guarantee::T3 {
                let kstar = signals::k_star(p.k, alpha)?;
                let threshold = q_function(kstar, eps_h / prof.t0);
                let snr_ok = prof.t0 > 3.0 * eps_h;
                if !snr_ok {
                    notes = "minimum component SNR too small: t0 <= 3 eps_h".to_string();
                }
                GuaranteeReport {
                    theorem: which,
                    eps_h,
                    delta_threshold: threshold,
                    delta_actual: delta_k1,
                    satisfied: snr_ok && delta_k1 < threshold,
                    predicted_error_bound: error_bound(eps_h, delta_k),
                    order_of_recovery_promised: false,
                    notes,
                }
            } else {
                let threshold = 1.0 / 3.0 - 2.0 * eps_h / (3.0 * prof.t0);
                let delta_ok = delta_k1 < threshold;
                let alpha_ok = if delta_ok {
                    // Inside the threshold the denominator of G is positive.
                    let g = (1.0 + delta_k1) / (1.0 - 3.0 * delta_k1 - 2.0 * eps_h / prof.t0);
                    alpha >= g.max(1.2)
                } else {
                    false
                };
                if delta_ok && !alpha_ok {
                    notes = "decay ratio alpha below the order-of-recovery requirement".into();
                }
                let satisfied = delta_ok && alpha_ok;
                GuaranteeReport {
                    theorem: which,
                    eps_h,
                    delta_threshold: threshold,
                    delta_actual: delta_k1,
                    satisfied,
                    predicted_error_bound: error_bound(eps_h, delta_k),
                    order_of_recovery_promised: satisfied,
                    notes,
                }
            }
        }
        Guarantee::C3 | Guarantee::C4 => {
            require_scenario_n2_family(p)?;
            require_zero_e(p)?;
            require_zero_b(p)?;
            require_sparse(p)?;
            let alpha = params
                .alpha
                .ok_or(Error::InvalidArgument("alpha required for this condition"))?;
            require_strong_decaying(p, alpha)?;
            // Sparse and unperturbed: the effective perturbation vanishes.
            if which == Guarantee::C3 {
                let kstar = signals::k_star(p.k, alpha)?;
                let threshold = 1.0 / (kstar.sqrt() + 1.0);
                GuaranteeReport {
                    theorem: which,
                    eps_h: 0.0,
                    delta_threshold: threshold,
                    delta_actual: delta_k1,
                    satisfied: delta_k1 < threshold,
                    predicted_error_bound: 0.0,
                    order_of_recovery_promised: false,
                    notes,
                }
            } else {
                let threshold = 1.0 / 3.0;
                let delta_ok = delta_k1 < threshold;
                let alpha_ok =
                    delta_ok && alpha > ((1.0 + delta_k1) / (1.0 - 3.0 * delta_k1)).max(1.2);
                let satisfied = delta_ok && alpha_ok;
                if delta_ok && !alpha_ok {
                    notes = "decay ratio alpha below the order-of-recovery requirement".into();
                }
                GuaranteeReport {
                    theorem: which,
                    eps_h: 0.0,
                    delta_threshold: threshold,
                    delta_actual: delta_k1,
                    satisfied,
                    predicted_error_bound: 0.0,
                    order_of_recovery_promised: satisfied,
                    notes,
                }
            }
        }
        Guarantee::C1prime => {
            require_scenario_n2_family(p)?;
            require_zero_e(p)?;
            require_sparse(p)?;
            let tau = params
                .tau
                .ok_or(Error::InvalidArgument("tau required for this condition"))?;
            if !(0.0..1.0).contains(&tau) || tau == 0.0 {
                return Err(Error::BadTau(tau));
            }
            let norm_b = p.b.norm();
            let threshold = (1.0 - tau) / (kf.sqrt() + 1.0);
            // The noise budget is non-strict; the threshold is strict.
            let noise_ok = norm_b <= tau * prof.t0 / 3.0;
            if !noise_ok {
                notes = "noise norm exceeds tau * t0 / 3".to_string();
            }
            GuaranteeReport {
                theorem: which,
                eps_h: norm_b,
                delta_threshold: threshold,
                delta_actual: delta_k1,
                satisfied: noise_ok && delta_k1 < threshold,
                predicted_error_bound: error_bound(norm_b, delta_k),
                order_of_recovery_promised: false,
                notes,
            }
        }
        Guarantee::C1star => {
            require_scenario_n2_family(p)?;
            require_zero_e(p)?;
            require_sparse(p)?;
            let norm_b = p.b.norm();
            let threshold = (1.0 - 3.0 * norm_b / prof.t0) / (kf.sqrt() + 1.0);
            if threshold <= 0.0 {
                notes = "noise norm at least t0 / 3: threshold nonpositive".to_string();
            }
            GuaranteeReport {
                theorem: which,
                eps_h: norm_b,
                delta_threshold: threshold,
                delta_actual: delta_k1,
                satisfied: delta_k1 < threshold,
                predicted_error_bound: error_bound(norm_b, delta_k),
                order_of_recovery_promised: false,
                notes,
            }
        }
    };
    Ok(report)
}

/// Support recovery under joint matrix and measurement perturbation, with
/// the perturbed matrix available to the recoverer.
pub fn check_t1(p: &PerturbedProblem) -> Result<GuaranteeReport> {
    check(
        p,
        Guarantee::T1,
        &CheckParams::default(),
        DEFAULT_SUBSET_CAP,
    )
}

/// T1 with the relaxed threshold `Q(k*, .)` for alpha-strong-decaying
/// signals; the compressibility term is replaced by the decay tail bound.
pub fn check_t3(p: &PerturbedProblem, alpha: f64) -> Result<GuaranteeReport> {
    check(
        p,
        Guarantee::T3,
        &CheckParams {
            alpha: Some(alpha),
            tau: None,
        },
        DEFAULT_SUBSET_CAP,
    )
}

/// Magnitude-ordered recovery for strong-decaying signals.
pub fn check_t4(p: &PerturbedProblem, alpha: f64) -> Result<GuaranteeReport> {
    check(
        p,
        Guarantee::T4,
        &CheckParams {
            alpha: Some(alpha),
            tau: None,
        },
        DEFAULT_SUBSET_CAP,
    )
}

/// Support recovery when the ideal matrix is available but measurements come
/// from the perturbed one.
pub fn check_t5(p: &PerturbedProblem) -> Result<GuaranteeReport> {
    check(
        p,
        Guarantee::T5,
        &CheckParams::default(),
        DEFAULT_SUBSET_CAP,
    )
}

/// Sparse signal, noisy measurements only.
pub fn check_c1(p: &PerturbedProblem) -> Result<GuaranteeReport> {
    check(
        p,
        Guarantee::C1,
        &CheckParams::default(),
        DEFAULT_SUBSET_CAP,
    )
}

/// Noise-split variant: threshold `(1-tau)/(sqrt(k)+1)` with noise budget
/// `||b|| <= tau t0 / 3`.
pub fn check_c1prime(p: &PerturbedProblem, tau: f64) -> Result<GuaranteeReport> {
    check(
        p,
        Guarantee::C1prime,
        &CheckParams {
            alpha: None,
            tau: Some(tau),
        },
        DEFAULT_SUBSET_CAP,
    )
}

/// Unapproximated noisy-sparse condition `delta < (1 - 3||b||/t0)/(sqrt(k)+1)`.
pub fn check_c1star(p: &PerturbedProblem) -> Result<GuaranteeReport> {
    check(
        p,
        Guarantee::C1star,
        &CheckParams::default(),
        DEFAULT_SUBSET_CAP,
    )
}

/// Almost-sparse signal, no perturbation at all.
pub fn check_c2(p: &PerturbedProblem) -> Result<GuaranteeReport> {
    check(
        p,
        Guarantee::C2,
        &CheckParams::default(),
        DEFAULT_SUBSET_CAP,
    )
}

/// Sparse strong-decaying signal, unperturbed: threshold `1/(sqrt(k*)+1)`.
pub fn check_c3(p: &PerturbedProblem, alpha: f64) -> Result<GuaranteeReport> {
    check(
        p,
        Guarantee::C3,
        &CheckParams {
            alpha: Some(alpha),
            tau: None,
        },
        DEFAULT_SUBSET_CAP,
    )
}

/// Sparse strong-decaying signal, unperturbed, ordered recovery.
pub fn check_c4(p: &PerturbedProblem, alpha: f64) -> Result<GuaranteeReport> {
    check(
        p,
        Guarantee::C4,
        &CheckParams {
            alpha: Some(alpha),
            tau: None,
        },
        DEFAULT_SUBSET_CAP,
    )
}

/// Evaluation of the coherence-based recovery condition
/// `k <= (1+mu)/(2mu) - ||b||/(mu t0)` and the ratio of this crate's error
/// bound to the coherence-based one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceComparison {
    /// Right-hand side of the coherence condition.
    pub lhs_28: f64,
    /// Whether `k` meets it.
    pub satisfied_28: bool,
    /// `sqrt(1 - mu(k-1)) / sqrt(1 - delta_k)`; at most 1 whenever
    /// `delta_k <= mu (k-1)`.
    pub error_ratio_r: f64,
}

pub fn compare_coherence(
    mu: f64,
    k: usize,
    t0: f64,
    norm_b: f64,
    delta_k: f64,
) -> Result<CoherenceComparison> {
    if mu <= 0.0 {
        return Err(Error::DegenerateBound("mu must be positive"));
    }
    if t0 <= 0.0 {
        return Err(Error::InvalidArgument("t0 must be positive"));
    }
    let kf = k as f64;
    let lhs = (1.0 + mu) / (2.0 * mu) - norm_b / (mu * t0);
    if mu * (kf - 1.0) >= 1.0 || delta_k >= 1.0 {
        return Err(Error::DegenerateBound(
            "mu (k-1) or delta_k reaches 1; error ratio undefined",
        ));
    }
    let r = (1.0 - mu * (kf - 1.0)).sqrt() / (1.0 - delta_k).sqrt();
    Ok(CoherenceComparison {
        lhs_28: lhs,
        satisfied_28: kf <= lhs,
        error_ratio_r: r,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TighterBound {
    R30,
    R31,
    Equal,
}

/// Two squared-error bounds for the unperturbed almost-sparse setting: a
/// logarithmic-factor bound in `delta_2k` versus the compressibility bound
/// `4 (beta+gamma)^2 ||x1||^2` obtained through support recovery.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBoundComparison {
    pub bound_r30: f64,
    pub bound_r31_squared_total: f64,
    pub tighter: TighterBound,
}

fn ceil_log2(k: usize) -> u32 {
    if k <= 1 {
        0
    } else {
        usize::BITS - (k - 1).leading_zeros()
    }
}

pub fn compare_error_bounds_c2(
    delta_2k: f64,
    delta_k: f64,
    beta: f64,
    gamma: f64,
    norm_x1: f64,
    norm_x: f64,
    k: usize,
) -> Result<ErrorBoundComparison> {
    if delta_k > 0.5 {
        return Err(Error::DeltaTooLarge(delta_k));
    }
    let norm_x2 = beta * norm_x1;
    let bound_r30 =
        2.0 * norm_x * (norm_x2 + 4.0 * delta_2k * (2.0 + ceil_log2(k) as f64) * norm_x);
    let bound_r31 = 4.0 * (beta + gamma).powi(2) * norm_x1 * norm_x1;
    let tighter = if bound_r31 < bound_r30 {
        TighterBound::R31
    } else if bound_r30 < bound_r31 {
        TighterBound::R30
    } else {
        TighterBound::Equal
    };
    Ok(ErrorBoundComparison {
        bound_r30,
        bound_r31_squared_total: bound_r31,
        tighter,
    })
}

/// The noise-split constant that aligns the C1prime threshold with the
/// `1/(1 + (sqrt6 + 2) sqrt k)` condition.
pub fn tau_aligned(k: usize) -> f64 {
    let sk = (k as f64).sqrt();
    let s6 = 6.0_f64.sqrt();
    (s6 + 1.0) * sk / (1.0 + (s6 + 2.0) * sk)
}

/// Side-by-side evaluation of the `delta_{k+1} < 1/(1+(sqrt6+2) sqrt k)`,
/// `||b|| <= delta_k sqrt(k) t0` condition pair against C1prime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HuangZhuComparison {
    pub hz_delta_ok: bool,
    pub hz_noise_ok: bool,
    /// Whether any tau in (0,1) makes C1prime pass on the same numbers.
    pub c1prime_exists_tau: bool,
    /// The aligned tau.
    pub tau_aligned: f64,
    /// Ratio of the competitor's noise budget to C1prime's at the aligned
    /// tau; below 1 whenever the competitor's delta condition holds.
    pub noise_ratio_r: f64,
}

pub fn compare_huangzhu(
    k: usize,
    delta_k1: f64,
    delta_k: f64,
    t0: f64,
    norm_b: f64,
) -> HuangZhuComparison {
    let sk = (k as f64).sqrt();
    let s6 = 6.0_f64.sqrt();
    let hz_threshold = 1.0 / (1.0 + (s6 + 2.0) * sk);
    let hz_delta_ok = delta_k1 < hz_threshold;
    let hz_noise_ok = norm_b <= delta_k * sk * t0;
    // C1prime needs tau >= 3||b||/t0 and tau < 1 - delta_{k+1}(sqrt k + 1).
    let c1prime_exists_tau = 3.0 * norm_b / t0 + delta_k1 * (sk + 1.0) < 1.0;
    let tau = tau_aligned(k);
    let noise_ratio_r = 3.0 * (1.0 + (s6 + 2.0) * sk) * delta_k / (s6 + 1.0);
    HuangZhuComparison {
        hz_delta_ok,
        hz_noise_ok,
        c1prime_exists_tau,
        tau_aligned: tau,
        noise_ratio_r,
    }
}
