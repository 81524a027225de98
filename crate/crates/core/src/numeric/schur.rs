//! Invariant subspaces from an ordered Schur form.

use nalgebra::linalg::Schur;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::linalg::{norm_inf, to_complex, ComplexMatrix, RealMatrix, MACHINE_EPSILON};
use crate::error::{Error, Result};

/// Eigenvalues with `Re(lambda) >= -(margin + tie)` count as unstable, where
/// `tie = sqrt(eps) * max(1, |M|_inf)`. Eigenvalues on or numerically near the
/// imaginary axis therefore always land in the unstable set.
pub fn stability_tie_tolerance(m: &RealMatrix) -> f64 {
    MACHINE_EPSILON.sqrt() * norm_inf(m).max(1.0)
}

pub fn is_unstable(lambda: Complex64, margin: f64, tie: f64) -> bool {
    lambda.re >= -(margin + tie)
}

/// QR sweeps allowed per dimension before a Schur attempt is abandoned.
const SCHUR_SWEEPS_PER_DIM: usize = 1000;
/// Similarity-transformed retries after the first attempt fails.
const SCHUR_RESTARTS: usize = 4;

/// Deterministic random orthogonal matrix for retry `attempt`.
fn restart_basis(n: usize, attempt: usize) -> RealMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ attempt as u64);
    RealMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0))
        .qr()
        .q()
}

/// Runs `attempt` on `M` and then on `P^T M P` for a few fixed orthogonal `P`,
/// returning the first success together with the `P` used. The unbounded
/// QR iteration can cycle forever on some matrices with repeated complex
/// pairs; a capped sweep count plus a change of basis avoids the cycle.
fn with_restarts<T>(
    m: &RealMatrix,
    attempt: impl Fn(&RealMatrix, usize) -> Option<T>,
) -> Result<(T, Option<RealMatrix>)> {
    let n = m.nrows();
    let cap = SCHUR_SWEEPS_PER_DIM * n.max(1);
    if let Some(out) = attempt(m, cap) {
        return Ok((out, None));
    }
    for k in 0..SCHUR_RESTARTS {
        let p = restart_basis(n, k);
        if let Some(out) = attempt(&(p.transpose() * m * &p), cap) {
            return Ok((out, Some(p)));
        }
    }
    Err(Error::NumericalDegeneracy {
        message: format!(
            "Schur iteration did not converge after {} attempts",
            SCHUR_RESTARTS + 1
        ),
        condition: f64::INFINITY,
    })
}

/// Eigenvalues from the real Schur form (conjugate pairs exact).
pub fn real_schur_eigenvalues(m: &RealMatrix) -> Result<Vec<Complex64>> {
    let (values, _) = with_restarts(m, |x, cap| {
        Schur::try_new(x.clone(), MACHINE_EPSILON, cap)
            .map(|s| s.complex_eigenvalues().iter().copied().collect())
    })?;
    Ok(values)
}

/// Complex Schur form `M = Q T Q^H`.
pub fn complex_schur(m: &RealMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let ((q, t), p) = with_restarts(m, |x, cap| {
        Schur::try_new(to_complex(x), MACHINE_EPSILON, cap).map(|s| s.unpack())
    })?;
    Ok(match p {
        Some(p) => (to_complex(&p) * q, t),
        None => (q, t),
    })
}

/// Complex Schur form `M = Q T Q^H` with the unstable eigenvalues leading.
/// Returns `(Q, T, number_of_unstable)`.
pub fn ordered_schur(m: &RealMatrix, margin: f64) -> Result<(ComplexMatrix, ComplexMatrix, usize)> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "matrix must be square, got {}x{}",
            n,
            m.ncols()
        )));
    }
    if n == 0 {
        return Ok((ComplexMatrix::zeros(0, 0), ComplexMatrix::zeros(0, 0), 0));
    }
    let tie = stability_tie_tolerance(m);
    let (mut q, mut t) = complex_schur(m)?;
    triangularize_leftovers(&mut q, &mut t);

    let unstable = |z: Complex64| is_unstable(z, margin, tie);
    loop {
        let mut swapped = false;
        for k in 0..n - 1 {
            if !unstable(t[(k, k)]) && unstable(t[(k + 1, k + 1)]) {
                swap_adjacent(&mut q, &mut t, k);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    let count = (0..n).filter(|&k| unstable(t[(k, k)])).count();
    Ok((q, t, count))
}

/// Orthonormal real basis of the invariant subspace belonging to eigenvalues
/// with `Re(lambda) >= -margin` (see [`stability_tie_tolerance`]).
pub fn unstable_invariant_subspace(m: &RealMatrix, margin: f64) -> Result<RealMatrix> {
    let n = m.nrows();
    let (q, _, k) = ordered_schur(m, margin)?;
    if k == 0 {
        return Ok(RealMatrix::zeros(n, 0));
    }
    // The selected eigenvalues are closed under conjugation, so the span of the
    // leading Schur vectors has a real basis; recover it from [Re Q_k, Im Q_k].
    let lead = q.columns(0, k);
    let mut parts = RealMatrix::zeros(n, 2 * k);
    parts
        .view_mut((0, 0), (n, k))
        .copy_from(&lead.map(|z| z.re));
    parts
        .view_mut((0, k), (n, k))
        .copy_from(&lead.map(|z| z.im));
    let svd = parts.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let mut basis = RealMatrix::zeros(n, k);
    for (col, &i) in order.iter().take(k).enumerate() {
        basis.set_column(col, &u.column(i));
    }
    Ok(basis)
}

/// Clears any remaining nonzero subdiagonal entries left by the Schur iteration.
fn triangularize_leftovers(q: &mut ComplexMatrix, t: &mut ComplexMatrix) {
    let n = t.nrows();
    let scale = norm_inf(t).max(1.0);
    for k in 0..n.saturating_sub(1) {
        if t[(k + 1, k)].norm() <= MACHINE_EPSILON * scale {
            t[(k + 1, k)] = Complex64::new(0.0, 0.0);
            continue;
        }
        // Eigenvector of the 2x2 block for its first eigenvalue becomes the
        // leading basis vector of a unitary rotation.
        let (a, b, c, d) = (t[(k, k)], t[(k, k + 1)], t[(k + 1, k)], t[(k + 1, k + 1)]);
        let half_tr = (a + d) * 0.5;
        let disc = ((a - d) * 0.5 * ((a - d) * 0.5) + b * c).sqrt();
        let lambda = half_tr + disc;
        let v = if (lambda - d).norm() > (lambda - a).norm() {
            [lambda - d, c]
        } else {
            [b, lambda - a]
        };
        apply_rotation(q, t, k, v);
        t[(k + 1, k)] = Complex64::new(0.0, 0.0);
    }
}

/// Swaps the diagonal entries `k` and `k + 1` of the triangular `t`.
fn swap_adjacent(q: &mut ComplexMatrix, t: &mut ComplexMatrix, k: usize) {
    let (t11, t12, t22) = (t[(k, k)], t[(k, k + 1)], t[(k + 1, k + 1)]);
    // Eigenvector of [[t11, t12], [0, t22]] for eigenvalue t22.
    let v = [t12, t22 - t11];
    if v[0].norm() == 0.0 && v[1].norm() == 0.0 {
        return;
    }
    apply_rotation(q, t, k, v);
    t[(k + 1, k)] = Complex64::new(0.0, 0.0);
    t[(k, k)] = t22;
    t[(k + 1, k + 1)] = t11;
}

/// Applies the unitary `Z = [v, w]` (with `w` orthogonal to `v`) to rows and
/// columns `k, k+1` of `t` and to columns `k, k+1` of `q`.
fn apply_rotation(q: &mut ComplexMatrix, t: &mut ComplexMatrix, k: usize, v: [Complex64; 2]) {
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    if norm == 0.0 {
        return;
    }
    let (v1, v2) = (v[0] / norm, v[1] / norm);
    let (w1, w2) = (-v2.conj(), v1.conj());
    let n = t.ncols();
    for j in 0..n {
        let (x, y) = (t[(k, j)], t[(k + 1, j)]);
        t[(k, j)] = v1.conj() * x + v2.conj() * y;
        t[(k + 1, j)] = w1.conj() * x + w2.conj() * y;
    }
    for i in 0..t.nrows() {
        let (x, y) = (t[(i, k)], t[(i, k + 1)]);
        t[(i, k)] = x * v1 + y * v2;
        t[(i, k + 1)] = x * w1 + y * w2;
    }
    for i in 0..q.nrows() {
        let (x, y) = (q[(i, k)], q[(i, k + 1)]);
        q[(i, k)] = x * v1 + y * v2;
        q[(i, k + 1)] = x * w1 + y * w2;
    }
}
