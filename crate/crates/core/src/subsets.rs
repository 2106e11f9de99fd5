//! Capped lexicographic enumeration of k-element index subsets, shared by
//! the submatrix-norm, restricted-isometry, and brute-force-support code.

use crate::error::{Error, Result};

/// Binomial coefficient, saturating at `u128::MAX`.
pub(crate) fn n_choose_k(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Calls `f` on every k-subset of `0..n` in lexicographic order. Errors with
/// `CombinatorialLimit` before enumerating if the subset count exceeds `cap`.
pub(crate) fn for_each_subset<F>(n: usize, k: usize, cap: usize, mut f: F) -> Result<()>
where
    F: FnMut(&[usize]) -> Result<()>,
{
    if k == 0 || k > n {
        return Err(Error::BadK { k, limit: n });
    }
    let total = n_choose_k(n, k);
    if total > cap as u128 {
        return Err(Error::CombinatorialLimit {
            subsets: total,
            cap,
        });
    }
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        f(&subset)?;
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if subset[i] != i + n - k {
                break;
            }
            if i == 0 {
                return Ok(());
            }
        }
        subset[i] += 1;
        for j in i + 1..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
}
