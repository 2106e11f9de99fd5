//! Dense real linear algebra used by every other module: least squares on
//! column subsets, orthogonal projectors, spectral norms, and symmetric
//! eigenvalues. Factorizations are delegated to nalgebra; all matrices here
//! are small (a few thousand entries at most).

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative rank tolerance: a column subset counts as rank deficient when its
/// smallest singular value falls below `RANK_TOL` times the largest.
pub const RANK_TOL: f64 = 1e-12;

/// Ordered set of column indices (ascending, no duplicates).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SupportSet {
    indices: Vec<usize>,
}

impl SupportSet {
    /// Builds a support set from arbitrary indices; sorts them and panics on
    /// duplicates (duplicate selection is a caller bug, not a data error).
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        assert!(
            indices.windows(2).all(|w| w[0] != w[1]),
            "duplicate index in support set"
        );
        Self { indices }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.indices.binary_search(&idx).is_ok()
    }

    /// Inserts an index, keeping order; returns false if already present.
    pub fn insert(&mut self, idx: usize) -> bool {
        match self.indices.binary_search(&idx) {
            Ok(_) => false,
            Err(pos) => {
                self.indices.insert(pos, idx);
                true
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.indices
    }

    /// Largest index, if any; callers compare against the ambient dimension.
    pub fn max_index(&self) -> Option<usize> {
        self.indices.last().copied()
    }
}

impl FromIterator<usize> for SupportSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// Extracts the `m x |S|` matrix of the columns of `a` indexed by `s`.
pub fn columns(a: &DMatrix<f64>, s: &SupportSet) -> Result<DMatrix<f64>> {
    if let Some(max) = s.max_index() {
        if max >= a.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "support index {max} out of range for {} columns",
                a.ncols()
            )));
        }
    }
    let mut out = DMatrix::zeros(a.nrows(), s.len());
    for (j, col) in s.iter().enumerate() {
        out.set_column(j, &a.column(col));
    }
    Ok(out)
}

/// Gram matrix `AᵀA`.
pub fn gram(a: &DMatrix<f64>) -> DMatrix<f64> {
    a.transpose() * a
}

fn singular_extremes(a: &DMatrix<f64>) -> (f64, f64) {
    if a.nrows() == 0 || a.ncols() == 0 {
        return (0.0, 0.0);
    }
    let sv = a.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0_f64, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    (min, max)
}

fn check_full_rank(a_s: &DMatrix<f64>) -> Result<()> {
    if a_s.ncols() == 0 {
        return Ok(());
    }
    let (smallest, largest) = singular_extremes(a_s);
    if a_s.ncols() > a_s.nrows() || smallest < RANK_TOL * largest || largest == 0.0 {
        return Err(Error::RankDeficient { smallest, largest });
    }
    Ok(())
}

/// Solves `min_c ||y - A_S c||_2` over the columns of `a` indexed by `s`,
/// via thin QR. Returns the coefficient vector of length `|S|`; an empty
/// support yields an empty vector.
pub fn least_squares_on_support(
    a: &DMatrix<f64>,
    y: &DVector<f64>,
    s: &SupportSet,
) -> Result<DVector<f64>> {
    if y.len() != a.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "y has length {}, matrix has {} rows",
            y.len(),
            a.nrows()
        )));
    }
    if s.len() > a.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "support size {} exceeds row count {}",
            s.len(),
            a.nrows()
        )));
    }
    if s.is_empty() {
        return Ok(DVector::zeros(0));
    }
    let a_s = columns(a, s)?;
    check_full_rank(&a_s)?;
    let qr = a_s.qr();
    let rhs = qr.q().transpose() * y;
    qr.r()
        .solve_upper_triangular(&rhs)
        .ok_or(Error::RankDeficient {
            smallest: 0.0,
            largest: 1.0,
        })
}

/// Orthogonal projector `P = A_S A_S⁺` onto the span of the selected columns.
/// Satisfies `P = Pᵀ = P²`; the empty support projects onto {0}.
pub fn orthogonal_projector(a: &DMatrix<f64>, s: &SupportSet) -> Result<DMatrix<f64>> {
    let m = a.nrows();
    if s.is_empty() {
        return Ok(DMatrix::zeros(m, m));
    }
    let a_s = columns(a, s)?;
    if s.len() > m {
        return Err(Error::RankDeficient {
            smallest: 0.0,
            largest: singular_extremes(&a_s).1,
        });
    }
    check_full_rank(&a_s)?;
    let q = a_s.qr().q();
    Ok(&q * q.transpose())
}

/// Largest singular value.
pub fn spectral_norm(a: &DMatrix<f64>) -> f64 {
    singular_extremes(a).1
}

/// Eigenvalues of a symmetric matrix, ascending. The input must be square
/// and symmetric within `1e-10` relative to its largest entry.
pub fn symmetric_eigenvalues(g: &DMatrix<f64>) -> Result<Vec<f64>> {
    if g.nrows() != g.ncols() {
        return Err(Error::NotSymmetric);
    }
    let scale = g.iter().fold(1.0_f64, |acc, v| acc.max(v.abs()));
    for i in 0..g.nrows() {
        for j in (i + 1)..g.ncols() {
            if (g[(i, j)] - g[(j, i)]).abs() > 1e-10 * scale {
                return Err(Error::NotSymmetric);
            }
        }
    }
    // Symmetrize before factorizing so roundoff asymmetry cannot leak in.
    let sym = (g + g.transpose()) * 0.5;
    let mut eigs: Vec<f64> = sym.symmetric_eigen().eigenvalues.iter().cloned().collect();
    eigs.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
    Ok(eigs)
}
