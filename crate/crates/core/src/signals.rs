//! Signal models: best k-term approximation, the compressibility ratios
//! beta and gamma, strong-decaying signal generation and verification, and
//! the effective sparsity k*.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::SupportSet;

/// Summary of a signal relative to a sparsity level k.
///
/// `beta = ||x2||_2 / ||x1||_2` and `gamma = ||x2||_1 / (sqrt(k) ||x1||_2)`
/// where `x1` is the best k-term approximation and `x2 = x - x1`.
/// `alpha_certified` is the largest ratio alpha > 1 for which the signal is
/// alpha-strong-decaying, if any (infinite when at most one entry is nonzero).
#[derive(Debug, Clone, PartialEq)]
pub struct SignalProfile {
    pub k: usize,
    pub support: SupportSet,
    pub t0: f64,
    pub beta: f64,
    pub gamma: f64,
    pub alpha_certified: Option<f64>,
}

/// Ranks entry indices by magnitude descending, ties broken toward the
/// lower index.
fn magnitude_order(x: &DVector<f64>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&i, &j| {
        x[j].abs()
            .partial_cmp(&x[i].abs())
            .expect("finite entries")
            .then(i.cmp(&j))
    });
    order
}

/// Splits `x` into its best k-term approximation `x1` (the k largest
/// magnitudes kept in place) and the tail `x2 = x - x1`.
pub fn best_k_approx(x: &DVector<f64>, k: usize) -> Result<(DVector<f64>, DVector<f64>)> {
    if k == 0 || k > x.len() {
        return Err(Error::BadK { k, limit: x.len() });
    }
    let order = magnitude_order(x);
    let mut x1 = DVector::zeros(x.len());
    for &idx in &order[..k] {
        x1[idx] = x[idx];
    }
    let x2 = x - &x1;
    Ok((x1, x2))
}

/// Computes the [`SignalProfile`] of `x` at sparsity `k`. Requires at least
/// k nonzero entries so that `t0 > 0`.
pub fn profile(x: &DVector<f64>, k: usize) -> Result<SignalProfile> {
    let (x1, x2) = best_k_approx(x, k)?;
    let order = magnitude_order(x);
    let t0 = x[order[k - 1]].abs();
    if t0 == 0.0 {
        return Err(Error::AllZero);
    }
    let support: SupportSet = order[..k].iter().copied().collect();
    let norm_x1 = x1.norm();
    let beta = x2.norm() / norm_x1;
    let gamma = x2.iter().map(|v| v.abs()).sum::<f64>() / ((k as f64).sqrt() * norm_x1);

    let mut min_ratio = f64::INFINITY;
    for w in order.windows(2) {
        let (hi, lo) = (x[w[0]].abs(), x[w[1]].abs());
        if lo != 0.0 {
            min_ratio = min_ratio.min(hi / lo);
        }
    }
    let alpha_certified = (min_ratio > 1.0).then_some(min_ratio);

    Ok(SignalProfile {
        k,
        support,
        t0,
        beta,
        gamma,
        alpha_certified,
    })
}

/// Whether entries past the k-th magnitude are zero or keep decaying.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailMode {
    Sparse,
    GeometricDecay,
}

/// Whether consecutive magnitude ratios are exactly alpha (the extremal
/// case the recovery thresholds are built around) or drawn uniformly from
/// `[alpha, spread * alpha]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RatioMode {
    Exact,
    Random { spread: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayOptions {
    pub tail: TailMode,
    pub ratio: RatioMode,
}

impl Default for DecayOptions {
    fn default() -> Self {
        Self {
            tail: TailMode::Sparse,
            ratio: RatioMode::Exact,
        }
    }
}

/// Generates an alpha-strong-decaying signal of length `n` whose top-k
/// magnitudes end exactly at `t0`. Positions and signs are drawn from the
/// seeded generator; magnitudes follow `opts`.
pub fn gen_strong_decaying(
    n: usize,
    k: usize,
    alpha: f64,
    t0: f64,
    seed: u64,
    opts: DecayOptions,
) -> Result<DVector<f64>> {
    if k == 0 || k > n {
        return Err(Error::BadK { k, limit: n });
    }
    if alpha <= 1.0 {
        return Err(Error::BadAlpha(alpha));
    }
    if t0 <= 0.0 {
        return Err(Error::InvalidArgument("t0 must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let draw_ratio = |rng: &mut ChaCha8Rng| match opts.ratio {
        RatioMode::Exact => alpha,
        RatioMode::Random { spread } => rng.gen_range(alpha..=alpha * spread.max(1.0)),
    };

    // Magnitudes by descending rank; rank k-1 is pinned at t0 and the ranks
    // above grow by one ratio per step.
    let mut mags = vec![0.0_f64; n];
    mags[k - 1] = t0;
    for j in (0..k.saturating_sub(1)).rev() {
        mags[j] = mags[j + 1] * draw_ratio(&mut rng);
    }
    if opts.tail == TailMode::GeometricDecay {
        for j in k..n {
            mags[j] = mags[j - 1] / draw_ratio(&mut rng);
        }
    }

    // Scatter ranks over positions, then attach signs.
    let mut positions: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        positions.swap(i, j);
    }
    let mut x = DVector::zeros(n);
    for (rank, &pos) in positions.iter().enumerate() {
        let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        x[pos] = sign * mags[rank];
    }
    Ok(x)
}

/// True iff every adjacent magnitude-sorted pair with a nonzero successor
/// has ratio at least `alpha - 1e-12`.
pub fn is_strong_decaying(x: &DVector<f64>, alpha: f64) -> bool {
    let order = magnitude_order(x);
    for w in order.windows(2) {
        let (hi, lo) = (x[w[0]].abs(), x[w[1]].abs());
        if lo != 0.0 && hi / lo < alpha - 1e-12 {
            return false;
        }
    }
    true
}

/// Effective sparsity `k* = (sum_{i<k} alpha^i)^2 / sum_{i<k} alpha^{2i}`.
/// Satisfies `1 <= k* < k` for k > 1 and `k* < (alpha+1)/(alpha-1)`.
pub fn k_star(k: usize, alpha: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::BadK {
            k,
            limit: usize::MAX,
        });
    }
    if alpha <= 1.0 {
        return Err(Error::BadAlpha(alpha));
    }
    // Sum in powers of 1/alpha so large k stays well scaled.
    let inv = 1.0 / alpha;
    let mut s1 = 0.0;
    let mut s2 = 0.0;
    for i in 0..k {
        s1 += inv.powi(i as i32);
        s2 += inv.powi(2 * i as i32);
    }
    Ok(s1 * s1 / s2)
}
