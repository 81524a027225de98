//! Closed-form minimal output matrix for diagonalizable systems.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::functional::{is_functionally_observable, spectral_rank, SystemTriple};
use crate::numeric::linalg::{ensure_finite, to_complex, unit_scaled, vstack};
use crate::numeric::spectral::condition_number;
use crate::numeric::{
    eigendecompose_diagonalizable, real_jordan_basis, RankPolicy, RealMatrix, SpectralData,
};

fn spectrum(a: &RealMatrix, policy: &RankPolicy) -> Result<SpectralData> {
    match eigendecompose_diagonalizable(a, policy, None) {
        Err(Error::NotDiagonalizable { condition }) => Err(Error::Unsupported(format!(
            "the minimal design needs a diagonalizable A (eigenvector condition {condition:.3e})"
        ))),
        other => other,
    }
}

fn check_shapes(a: &RealMatrix, f: &RealMatrix) -> Result<()> {
    if a.nrows() != a.ncols() || f.ncols() != a.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "A is {}x{} and F is {}x{}",
            a.nrows(),
            a.ncols(),
            f.nrows(),
            f.ncols()
        )));
    }
    ensure_finite(a, "A")?;
    ensure_finite(f, "F")
}

/// `p* = max_i rank (F T_i)` over the distinct eigenvalues of `A`.
pub fn min_sensor_count_diagonalizable(
    a: &RealMatrix,
    f: &RealMatrix,
    policy: &RankPolicy,
) -> Result<usize> {
    check_shapes(a, f)?;
    let spec = spectrum(a, policy)?;
    Ok(count_from(&spec, f, policy))
}

fn count_from(spec: &SpectralData, f: &RealMatrix, policy: &RankPolicy) -> usize {
    let fc = to_complex(&unit_scaled(f));
    spec.groups
        .iter()
        .map(|g| spectral_rank(&(&fc * &g.vectors), policy))
        .max()
        .unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimalDesign {
    pub sensor_count: usize,
    /// `p* x n` output matrix.
    pub c: RealMatrix,
    /// Condition number of the real Jordan basis used in the construction.
    pub basis_condition: f64,
    pub rank_o: usize,
    pub rank_of: usize,
}

/// Builds a `C` with exactly `p*` rows that makes `(A, C, F)` functionally
/// observable.
///
/// In the real Jordan basis `T~`, each block `J~_i` receives rows of
/// `F~_i = F T~_i`, taken in ascending order whenever they raise
/// `rank [J~_i - lambda_i I; rows so far]`. The blocks are padded with zero
/// rows to `p*` and mapped back with `T~^{-1}`.
pub fn construct_min_c(
    a: &RealMatrix,
    f: &RealMatrix,
    policy: &RankPolicy,
) -> Result<MinimalDesign> {
    check_shapes(a, f)?;
    let n = a.nrows();
    let spec = spectrum(a, policy)?;
    let p_star = count_from(&spec, f, policy);
    let rj = real_jordan_basis(&spec)?;
    let basis_condition = condition_number(&rj.basis);
    let f_tilde = unit_scaled(f) * &rj.basis;

    let mut c_tilde = RealMatrix::zeros(p_star, n);
    for block in &rj.blocks {
        let cols = block.columns.clone();
        let w = cols.len();
        let lambda = block.eigenvalue;
        let shifted: DMatrix<Complex64> =
            to_complex(&block.jordan_block()) - DMatrix::<Complex64>::identity(w, w) * lambda;
        let fi = f_tilde.columns(cols.start, w).into_owned();
        let target = spectral_rank(&vstack(&shifted, &to_complex(&fi))?, policy);
        let mut acc = shifted;
        let mut rank = spectral_rank(&acc, policy);
        let mut picked = 0;
        for row in 0..fi.nrows() {
            if rank == target {
                break;
            }
            let candidate = vstack(&acc, &to_complex(&fi.rows(row, 1).into_owned()))?;
            let r = spectral_rank(&candidate, policy);
            if r > rank {
                if picked == p_star {
                    return Err(Error::NumericalDegeneracy {
                        message: format!(
                            "block for eigenvalue {lambda} needs more than p* = {p_star} rows"
                        ),
                        condition: basis_condition,
                    });
                }
                c_tilde
                    .view_mut((picked, cols.start), (1, w))
                    .copy_from(&fi.rows(row, 1));
                acc = candidate;
                rank = r;
                picked += 1;
            }
        }
    }

    let inverse = rj
        .basis
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NumericalDegeneracy {
            message: "real Jordan basis is singular".into(),
            condition: basis_condition,
        })?;
    let c = c_tilde * inverse;
    if p_star == 0 {
        return Ok(MinimalDesign {
            sensor_count: 0,
            c,
            basis_condition,
            rank_o: 0,
            rank_of: 0,
        });
    }
    let sys = SystemTriple::new(a.clone(), c.clone(), f.clone())?;
    let verdict = is_functionally_observable(&sys, policy)?;
    if !verdict.observable {
        return Err(Error::NumericalDegeneracy {
            message: format!(
                "constructed C fails the functional observability check (rank O = {}, rank [O; F] = {})",
                verdict.rank_o, verdict.rank_of
            ),
            condition: basis_condition,
        });
    }
    Ok(MinimalDesign {
        sensor_count: p_star,
        c,
        basis_condition,
        rank_o: verdict.rank_o,
        rank_of: verdict.rank_of,
    })
}
