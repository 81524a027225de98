//! Eigenstructure of diagonalizable real matrices and the real Jordan basis.

use std::ops::Range;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::linalg::{
    ensure_finite, norm_inf, rank_unchecked, singular_values, svd_right, to_complex, ComplexMatrix,
    RankPolicy, RealMatrix, MACHINE_EPSILON,
};
use super::schur::real_schur_eigenvalues;
use crate::error::{Error, Result};

/// Eigenvector matrices whose condition number exceeds this are treated as
/// numerically defective.
pub const MAX_EIGENVECTOR_CONDITION: f64 = 1e6;

/// Default eigenvalue clustering tolerance: `1e6 * eps * |A|_inf`.
pub fn default_cluster_tolerance(a: &RealMatrix) -> f64 {
    1e6 * MACHINE_EPSILON * norm_inf(a).max(MACHINE_EPSILON)
}

/// One distinct eigenvalue together with a basis of its eigenspace.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenGroup {
    pub eigenvalue: Complex64,
    pub multiplicity: usize,
    /// `n x multiplicity` block `T_i` with `A T_i = lambda_i T_i`.
    pub vectors: ComplexMatrix,
    /// Index of the conjugate partner group for non-real eigenvalues.
    pub conjugate: Option<usize>,
}

impl EigenGroup {
    pub fn is_real(&self) -> bool {
        self.eigenvalue.im == 0.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralData {
    pub groups: Vec<EigenGroup>,
    /// Condition number of the assembled eigenvector matrix `T`.
    pub condition: f64,
    pub cluster_tolerance: f64,
}

impl SpectralData {
    pub fn dimension(&self) -> usize {
        self.groups.iter().map(|g| g.multiplicity).sum()
    }

    /// Full eigenvector matrix `T = [T_1, ..., T_k]`.
    pub fn eigenvector_matrix(&self) -> ComplexMatrix {
        let n = self.dimension();
        let mut t = ComplexMatrix::zeros(n, n);
        let mut col = 0;
        for g in &self.groups {
            t.view_mut((0, col), (n, g.multiplicity))
                .copy_from(&g.vectors);
            col += g.multiplicity;
        }
        t
    }

    /// Checks the group invariants against `a`: multiplicities sum to `n`,
    /// `A T_i = lambda_i T_i` within `tol`, and conjugate pairing is symmetric.
    pub fn validate_against(&self, a: &RealMatrix, tol: f64) -> Result<()> {
        let n = a.nrows();
        if self.dimension() != n {
            return Err(Error::InvalidInput(format!(
                "eigenvalue multiplicities sum to {} but A is {n}x{n}",
                self.dimension()
            )));
        }
        let ac = to_complex(a);
        for (i, g) in self.groups.iter().enumerate() {
            if g.vectors.shape() != (n, g.multiplicity) {
                return Err(Error::InvalidInput(format!(
                    "eigenvector block {i} has the wrong shape"
                )));
            }
            let residual = &ac * &g.vectors - &g.vectors * g.eigenvalue;
            if norm_inf(&residual) > tol {
                return Err(Error::InvalidInput(format!(
                    "eigenvector block {i} does not satisfy A T = lambda T (residual {:.3e})",
                    norm_inf(&residual)
                )));
            }
            if let Some(j) = g.conjugate {
                let partner = self.groups.get(j).ok_or_else(|| {
                    Error::InvalidInput(format!("group {i} names missing conjugate {j}"))
                })?;
                if partner.conjugate != Some(i)
                    || (partner.eigenvalue - g.eigenvalue.conj()).norm() > tol
                {
                    return Err(Error::InvalidInput(format!(
                        "group {i} has an inconsistent conjugate partner"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Groups eigenvalues of `a` and computes an eigenvector basis for each group.
///
/// Fails with [`Error::NotDiagonalizable`] when some eigenvalue has a deficient
/// eigenspace or the eigenvector matrix is too ill-conditioned to trust.
pub fn eigendecompose_diagonalizable(
    a: &RealMatrix,
    policy: &RankPolicy,
    cluster_tol: Option<f64>,
) -> Result<SpectralData> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "A must be square, got {}x{}",
            n,
            a.ncols()
        )));
    }
    ensure_finite(a, "A")?;
    let cluster_tol = cluster_tol.unwrap_or_else(|| default_cluster_tolerance(a));
    if n == 0 {
        return Ok(SpectralData {
            groups: Vec::new(),
            condition: 1.0,
            cluster_tolerance: cluster_tol,
        });
    }

    let eigenvalues = real_schur_eigenvalues(a)?;
    let clusters = cluster(&eigenvalues, cluster_tol);

    let ac = to_complex(a);
    let mut groups: Vec<EigenGroup> = Vec::with_capacity(clusters.len());
    let mut pending_conjugates: Vec<(usize, Complex64, usize)> = Vec::new();
    for (value, d) in clusters {
        if value.im < 0.0 {
            pending_conjugates.push((groups.len(), value, d));
            groups.push(EigenGroup {
                eigenvalue: value,
                multiplicity: d,
                vectors: ComplexMatrix::zeros(n, d),
                conjugate: None,
            });
            continue;
        }
        let shifted = if value.im == 0.0 {
            to_complex(&(a - RealMatrix::identity(n, n) * value.re))
        } else {
            &ac - ComplexMatrix::identity(n, n) * value
        };
        let vectors = eigenspace(&shifted, d, policy, cluster_tol)?;
        groups.push(EigenGroup {
            eigenvalue: value,
            multiplicity: d,
            vectors,
            conjugate: None,
        });
    }

    for (idx, value, d) in pending_conjugates {
        let partner = groups
            .iter()
            .enumerate()
            .filter(|(j, g)| {
                *j != idx && g.eigenvalue.im > 0.0 && g.multiplicity == d && g.conjugate.is_none()
            })
            .min_by(|(_, x), (_, y)| {
                (x.eigenvalue - value.conj())
                    .norm()
                    .total_cmp(&(y.eigenvalue - value.conj()).norm())
            })
            .map(|(j, _)| j)
            .ok_or_else(|| {
                Error::InvalidInput(format!("eigenvalue {value} has no conjugate partner"))
            })?;
        let conj_vectors = groups[partner].vectors.map(|z| z.conj());
        groups[idx].eigenvalue = groups[partner].eigenvalue.conj();
        groups[idx].vectors = conj_vectors;
        groups[idx].conjugate = Some(partner);
        groups[partner].conjugate = Some(idx);
    }
    if let Some(g) = groups
        .iter()
        .find(|g| g.eigenvalue.im > 0.0 && g.conjugate.is_none())
    {
        return Err(Error::InvalidInput(format!(
            "eigenvalue {} has no conjugate partner",
            g.eigenvalue
        )));
    }

    let mut spec = SpectralData {
        groups,
        condition: 1.0,
        cluster_tolerance: cluster_tol,
    };
    let t = spec.eigenvector_matrix();
    let sigmas = singular_values(&t);
    let smin = *sigmas.last().unwrap_or(&0.0);
    let condition = if smin > 0.0 {
        sigmas[0] / smin
    } else {
        f64::INFINITY
    };
    spec.condition = condition;
    if rank_unchecked(&t, policy) < n || condition > MAX_EIGENVECTOR_CONDITION {
        return Err(Error::NotDiagonalizable { condition });
    }
    Ok(spec)
}

/// Distinct eigenvalues of `a` with algebraic multiplicities, clustered with
/// `tol` (default [`default_cluster_tolerance`]). Works for defective matrices
/// too, although their computed eigenvalues are only accurate to roughly
/// `eps^(1/k)` for a Jordan chain of length `k`.
pub fn distinct_eigenvalues(a: &RealMatrix, tol: Option<f64>) -> Result<Vec<(Complex64, usize)>> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "A must be square, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    ensure_finite(a, "A")?;
    if a.nrows() == 0 {
        return Ok(Vec::new());
    }
    let values = real_schur_eigenvalues(a)?;
    Ok(cluster(
        &values,
        tol.unwrap_or_else(|| default_cluster_tolerance(a)),
    ))
}

/// Single-linkage clustering; each cluster is represented by its mean, with
/// real parts snapped when the imaginary part is within tolerance.
fn cluster(values: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (values[i] - values[j]).norm() <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut out: Vec<(usize, Complex64, usize)> = Vec::new();
    for (i, &value) in values.iter().enumerate().take(n) {
        let r = find(&mut parent, i);
        match out.iter_mut().find(|(root, _, _)| *root == r) {
            Some(entry) => {
                entry.1 += value;
                entry.2 += 1;
            }
            None => out.push((r, value, 1)),
        }
    }
    let mut clusters: Vec<(Complex64, usize)> = out
        .into_iter()
        .map(|(_, sum, d)| {
            let mean = sum / d as f64;
            if mean.im.abs() <= tol {
                (Complex64::new(mean.re, 0.0), d)
            } else {
                (mean, d)
            }
        })
        .collect();
    clusters.sort_by(|x, y| x.0.re.total_cmp(&y.0.re).then(y.0.im.total_cmp(&x.0.im)));
    clusters
}

/// The `d` right singular vectors of `A - lambda I` with smallest singular values.
fn eigenspace(
    shifted: &ComplexMatrix,
    d: usize,
    policy: &RankPolicy,
    cluster_tol: f64,
) -> Result<ComplexMatrix> {
    let n = shifted.ncols();
    let (sigmas, v) = svd_right(shifted);
    let smax = sigmas.first().copied().unwrap_or(0.0);
    let tol = policy.threshold(smax, n, n).max(cluster_tol);
    if sigmas[n - d] > tol {
        // Geometric multiplicity is below the algebraic one.
        return Err(Error::NotDiagonalizable {
            condition: f64::INFINITY,
        });
    }
    Ok(v.columns(n - d, d).into_owned())
}

/// One diagonal block of the real Jordan form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealJordanBlock {
    /// For complex pairs, the member with positive imaginary part.
    pub eigenvalue: Complex64,
    /// Algebraic multiplicity `d_i` of `eigenvalue`.
    pub multiplicity: usize,
    /// Columns of the real basis spanned by this block (`d_i` or `2 d_i` wide).
    pub columns: Range<usize>,
}

impl RealJordanBlock {
    pub fn is_complex(&self) -> bool {
        self.eigenvalue.im != 0.0
    }

    /// `J_i`: `lambda I` for real eigenvalues, `diag(D, ..., D)` with
    /// `D = [[a, b], [-b, a]]` for a pair `a +- bi`.
    pub fn jordan_block(&self) -> RealMatrix {
        let w = self.columns.len();
        if !self.is_complex() {
            return RealMatrix::identity(w, w) * self.eigenvalue.re;
        }
        let (a, b) = (self.eigenvalue.re, self.eigenvalue.im);
        let mut j = RealMatrix::zeros(w, w);
        for k in 0..self.multiplicity {
            let o = 2 * k;
            j[(o, o)] = a;
            j[(o, o + 1)] = b;
            j[(o + 1, o)] = -b;
            j[(o + 1, o + 1)] = a;
        }
        j
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RealJordanBasis {
    /// Real invertible `T~` with `T~^{-1} A T~ = J_r`.
    pub basis: RealMatrix,
    pub blocks: Vec<RealJordanBlock>,
}

impl RealJordanBasis {
    /// Block-diagonal real Jordan form assembled from the blocks.
    pub fn jordan_form(&self) -> RealMatrix {
        let n = self.basis.ncols();
        let mut j = RealMatrix::zeros(n, n);
        for b in &self.blocks {
            let s = b.columns.start;
            let w = b.columns.len();
            j.view_mut((s, s), (w, w)).copy_from(&b.jordan_block());
        }
        j
    }
}

/// Inverse of `Phi = [[-i, -i], [1, -1]]`.
fn phi_inverse() -> [[Complex64; 2]; 2] {
    let h = 0.5;
    [
        [Complex64::new(0.0, h), Complex64::new(h, 0.0)],
        [Complex64::new(0.0, h), Complex64::new(-h, 0.0)],
    ]
}

/// Real Jordan basis for a diagonalizable real matrix.
///
/// Complex pairs contribute `[t, t*] Phi^{-1}` per eigenvector `t`. That product
/// equals `i [Re t, Im t]`; the common factor `i` is dropped so the basis is real.
/// Complex blocks come first, followed by the real eigenvalues, each in order
/// of decreasing real part.
pub fn real_jordan_basis(spec: &SpectralData) -> Result<RealJordanBasis> {
    let n = spec.dimension();
    let mut basis = RealMatrix::zeros(n, n);
    let mut blocks = Vec::new();
    let mut col = 0;
    let phi_inv = phi_inverse();
    let minus_i = Complex64::new(0.0, -1.0);

    // blocks in order of decreasing real part
    let mut order: Vec<usize> = (0..spec.groups.len()).collect();
    order.sort_by(|&i, &j| {
        spec.groups[j]
            .eigenvalue
            .re
            .total_cmp(&spec.groups[i].eigenvalue.re)
    });
    for (idx, g) in order.iter().map(|&i| (i, &spec.groups[i])) {
        if g.is_real() || g.eigenvalue.im < 0.0 {
            continue;
        }
        let partner = g
            .conjugate
            .and_then(|j| spec.groups.get(j))
            .ok_or_else(|| {
                Error::InvalidInput(format!("non-real group {idx} has no conjugate partner"))
            })?;
        if partner.multiplicity != g.multiplicity {
            return Err(Error::InvalidInput(format!(
                "conjugate groups of {} differ in multiplicity",
                g.eigenvalue
            )));
        }
        let start = col;
        for k in 0..g.multiplicity {
            let t = g.vectors.column(k);
            let t_conj = partner.vectors.column(k);
            for out in [0, 1] {
                let v = (t * phi_inv[0][out] + t_conj * phi_inv[1][out]) * minus_i;
                basis.set_column(col, &v.map(|z| z.re));
                col += 1;
            }
        }
        blocks.push(RealJordanBlock {
            eigenvalue: g.eigenvalue,
            multiplicity: g.multiplicity,
            columns: start..col,
        });
    }
    if let Some(g) = spec
        .groups
        .iter()
        .find(|g| g.eigenvalue.im < 0.0 && g.conjugate.is_none())
    {
        return Err(Error::InvalidInput(format!(
            "non-real eigenvalue {} is unpaired",
            g.eigenvalue
        )));
    }
    for g in order
        .iter()
        .map(|&i| &spec.groups[i])
        .filter(|g| g.is_real())
    {
        let start = col;
        for k in 0..g.multiplicity {
            basis.set_column(col, &g.vectors.column(k).map(|z| z.re));
            col += 1;
        }
        blocks.push(RealJordanBlock {
            eigenvalue: g.eigenvalue,
            multiplicity: g.multiplicity,
            columns: start..col,
        });
    }
    debug_assert_eq!(col, n);
    Ok(RealJordanBasis { basis, blocks })
}

/// Condition number `sigma_max / sigma_min`.
pub fn condition_number<T: nalgebra::ComplexField<RealField = f64>>(m: &DMatrix<T>) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => 1.0,
    }
}
