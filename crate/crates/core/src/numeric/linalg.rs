//! Dense rank, kernel and observability-matrix primitives.
//!
//! Every rank decision in the crate goes through [`RankPolicy`], so the same
//! singular-value threshold is applied whether the matrix is real or complex.

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type RealMatrix = DMatrix<f64>;
pub type ComplexMatrix = DMatrix<Complex64>;

/// Unit roundoff used by the default tolerances.
pub const MACHINE_EPSILON: f64 = f64::EPSILON;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankMode {
    /// Threshold is `tolerance * sigma_max`.
    SvdRelative,
    /// Threshold is `tolerance` itself.
    SvdAbsolute,
}

/// Singular-value threshold used to decide numerical rank.
///
/// A tolerance of zero selects the machine default
/// `sigma_max * max(rows, cols) * eps` in either mode.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankPolicy {
    pub mode: RankMode,
    pub tolerance: f64,
}

impl Default for RankPolicy {
    fn default() -> Self {
        Self {
            mode: RankMode::SvdRelative,
            tolerance: 0.0,
        }
    }
}

impl RankPolicy {
    pub fn relative(tolerance: f64) -> Result<Self> {
        Self::new(RankMode::SvdRelative, tolerance)
    }

    pub fn absolute(tolerance: f64) -> Result<Self> {
        Self::new(RankMode::SvdAbsolute, tolerance)
    }

    pub fn new(mode: RankMode, tolerance: f64) -> Result<Self> {
        if !(tolerance.is_finite() && tolerance >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "rank tolerance must be finite and nonnegative, got {tolerance}"
            )));
        }
        Ok(Self { mode, tolerance })
    }

    /// Singular values strictly above this value count towards the rank.
    pub fn threshold(&self, sigma_max: f64, rows: usize, cols: usize) -> f64 {
        if self.tolerance == 0.0 {
            return sigma_max * rows.max(cols) as f64 * MACHINE_EPSILON;
        }
        match self.mode {
            RankMode::SvdRelative => self.tolerance * sigma_max,
            RankMode::SvdAbsolute => self.tolerance,
        }
    }

    /// Tolerance for deciding that a residual matrix is zero, given the scale of
    /// the quantities it was built from.
    pub fn residual_tolerance(&self, scale: f64) -> f64 {
        match self.mode {
            RankMode::SvdAbsolute if self.tolerance > 0.0 => self.tolerance,
            RankMode::SvdRelative if self.tolerance > 0.0 => self.tolerance * scale.max(1.0),
            _ => MACHINE_EPSILON.sqrt() * scale.max(1.0),
        }
    }
}

/// Rejects matrices containing NaN or infinite entries.
pub fn ensure_finite<T: ComplexField<RealField = f64>>(m: &DMatrix<T>, what: &str) -> Result<()> {
    if m.iter().all(|x| x.clone().modulus().is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{what} contains non-finite entries"
        )))
    }
}

/// Infinity norm (maximum absolute row sum).
pub fn norm_inf<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> f64 {
    m.row_iter()
        .map(|row| row.iter().map(|x| x.clone().modulus()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Singular values in descending order together with the matching right
/// singular vectors as columns of an `n x n` matrix (`n = cols`).
///
/// Wide matrices are zero-padded to square before factoring so that the
/// full right basis, kernel included, is always available.
pub(crate) fn svd_right<T: ComplexField<RealField = f64>>(
    m: &DMatrix<T>,
) -> (Vec<f64>, DMatrix<T>) {
    let n = m.ncols();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let padded;
    let work = if m.nrows() < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
        padded = p;
        &padded
    } else {
        m
    };
    let svd = work.clone().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let sigmas = order.iter().map(|&i| svd.singular_values[i]).collect();
    let mut v = DMatrix::zeros(n, order.len());
    for (col, &i) in order.iter().enumerate() {
        v.set_column(col, &v_t.row(i).adjoint());
    }
    (sigmas, v)
}

/// Singular values in descending order.
pub fn singular_values<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

fn rank_from_sigmas(sigmas: &[f64], rows: usize, cols: usize, policy: &RankPolicy) -> usize {
    let sigma_max = sigmas.first().copied().unwrap_or(0.0);
    if sigma_max == 0.0 {
        return 0;
    }
    let thr = policy.threshold(sigma_max, rows, cols);
    sigmas.iter().filter(|&&s| s > thr).count()
}

/// Numerical rank under `policy`. Works for real and complex matrices.
pub fn rank<T: ComplexField<RealField = f64>>(
    m: &DMatrix<T>,
    policy: &RankPolicy,
) -> Result<usize> {
    ensure_finite(m, "matrix")?;
    Ok(rank_unchecked(m, policy))
}

pub(crate) fn rank_unchecked<T: ComplexField<RealField = f64>>(
    m: &DMatrix<T>,
    policy: &RankPolicy,
) -> usize {
    if m.is_empty() {
        return 0;
    }
    rank_from_sigmas(&singular_values(m), m.nrows(), m.ncols(), policy)
}

/// Orthonormal basis of the right null space, one column per kernel direction.
pub fn kernel_basis(m: &RealMatrix, policy: &RankPolicy) -> Result<RealMatrix> {
    ensure_finite(m, "matrix")?;
    Ok(kernel_unchecked(m, policy))
}

pub(crate) fn kernel_unchecked<T: ComplexField<RealField = f64>>(
    m: &DMatrix<T>,
    policy: &RankPolicy,
) -> DMatrix<T> {
    let n = m.ncols();
    if m.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    let (sigmas, v) = svd_right(m);
    let r = rank_from_sigmas(&sigmas, m.nrows(), n, policy);
    v.columns(r, n - r).into_owned()
}

/// Stacks `top` over `bottom`. Both must have the same column count.
pub fn vstack<T: ComplexField>(top: &DMatrix<T>, bottom: &DMatrix<T>) -> Result<DMatrix<T>> {
    if top.ncols() != bottom.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "cannot stack {}x{} over {}x{}",
            top.nrows(),
            top.ncols(),
            bottom.nrows(),
            bottom.ncols()
        )));
    }
    let mut out = DMatrix::zeros(top.nrows() + bottom.nrows(), top.ncols());
    out.view_mut((0, 0), top.shape()).copy_from(top);
    out.view_mut((top.nrows(), 0), bottom.shape())
        .copy_from(bottom);
    Ok(out)
}

/// `col{C, CA, ..., CA^{n-1}}`.
pub fn observability_matrix(a: &RealMatrix, c: &RealMatrix) -> Result<RealMatrix> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "A must be square, got {}x{}",
            n,
            a.ncols()
        )));
    }
    if c.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "C has {} columns but A is {n}x{n}",
            c.ncols()
        )));
    }
    let p = c.nrows();
    let mut out = RealMatrix::zeros(n * p, n);
    let mut block = c.clone();
    for t in 0..n {
        out.view_mut((t * p, 0), (p, n)).copy_from(&block);
        if t + 1 < n {
            block = &block * a;
        }
    }
    Ok(out)
}

/// Observability matrix of `(A/|A|, C/|C|)`.
///
/// Each block row differs from the plain observability matrix by a positive
/// scalar, so the row space is unchanged while the powers of `A` stay bounded.
pub(crate) fn scaled_observability(a: &RealMatrix, c: &RealMatrix) -> Result<RealMatrix> {
    observability_matrix(&unit_scaled(a), &unit_scaled(c))
}

pub(crate) fn unit_scaled(m: &RealMatrix) -> RealMatrix {
    let s = m.norm();
    if s > 0.0 {
        m / s
    } else {
        m.clone()
    }
}

/// True when stacking `r` under `m` does not raise the rank.
pub fn row_space_contains(m: &RealMatrix, r: &RealMatrix, policy: &RankPolicy) -> Result<bool> {
    ensure_finite(m, "M")?;
    ensure_finite(r, "R")?;
    let stacked = vstack(m, r)?;
    Ok(rank_unchecked(&stacked, policy) == rank_unchecked(m, policy))
}

pub fn to_complex(m: &RealMatrix) -> ComplexMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}
