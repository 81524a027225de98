//! Functional observability and detectability of numeric systems.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::linalg::{
    ensure_finite, norm_inf, rank_unchecked, scaled_observability, singular_values, svd_right,
    to_complex, unit_scaled, vstack,
};
use crate::numeric::schur::{is_unstable, stability_tie_tolerance};
use crate::numeric::{
    distinct_eigenvalues, eigendecompose_diagonalizable, unstable_invariant_subspace,
    ComplexMatrix, RankPolicy, RealMatrix, SpectralData,
};

/// Numeric triple `(A, C, F)`: `x' = Ax`, `y = Cx`, `z = Fx`.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemTriple {
    a: RealMatrix,
    c: RealMatrix,
    f: RealMatrix,
}

impl SystemTriple {
    pub fn new(a: RealMatrix, c: RealMatrix, f: RealMatrix) -> Result<Self> {
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
                "C has {} columns, expected {n}",
                c.ncols()
            )));
        }
        if f.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "F has {} columns, expected {n}",
                f.ncols()
            )));
        }
        if f.nrows() == 0 {
            return Err(Error::InvalidInput("F needs at least one row".into()));
        }
        ensure_finite(&a, "A")?;
        ensure_finite(&c, "C")?;
        ensure_finite(&f, "F")?;
        Ok(Self { a, c, f })
    }

    pub fn a(&self) -> &RealMatrix {
        &self.a
    }

    pub fn c(&self) -> &RealMatrix {
        &self.c
    }

    pub fn f(&self) -> &RealMatrix {
        &self.f
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    /// Same `A` and `F` with the sensor rows of `C` listed in `rows`.
    pub fn with_sensors(&self, rows: &[usize]) -> Self {
        Self {
            a: self.a.clone(),
            c: self.c.select_rows(rows),
            f: self.f.clone(),
        }
    }

    pub fn with_output(&self, c: RealMatrix) -> Result<Self> {
        Self::new(self.a.clone(), c, self.f.clone())
    }
}

/// Rank of the stacked matrices that every check compares.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoVerdict {
    pub observable: bool,
    /// `rank O(A, C)`.
    pub rank_o: usize,
    /// `rank [O(A, C); F]`.
    pub rank_of: usize,
}

/// `rank [O(A,C); F] == rank O(A,C)`.
///
/// Ranks are taken on `O(A/|A|, C/|C|)` and `F/|F|`, which have the same row
/// spaces as the unscaled matrices but keep high powers of `A` bounded.
pub fn is_functionally_observable(sys: &SystemTriple, policy: &RankPolicy) -> Result<FoVerdict> {
    let o = scaled_observability(&sys.a, &sys.c)?;
    let f = unit_scaled(&sys.f);
    let rank_o = rank_unchecked(&o, policy);
    let rank_of = rank_unchecked(&vstack(&o, &f)?, policy);
    Ok(FoVerdict {
        observable: rank_o == rank_of,
        rank_o,
        rank_of,
    })
}

/// Orthonormal bases adapted to the observable/unobservable split of `(A, C)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservabilityDecomposition {
    /// `n x l`, spanning the row space of `O(A, C)`.
    pub observable_basis: RealMatrix,
    /// `n x (n - l)`, spanning the unobservable subspace.
    pub unobservable_basis: RealMatrix,
    /// `N^T A N` for the unobservable basis `N`.
    pub unobservable_restriction: RealMatrix,
    /// `n x l_u`: the part of the unobservable subspace whose modes are not
    /// asymptotically stable.
    pub unstable_unobservable_basis: RealMatrix,
}

pub fn observability_decomposition(
    a: &RealMatrix,
    c: &RealMatrix,
    policy: &RankPolicy,
    margin: f64,
) -> Result<ObservabilityDecomposition> {
    let n = a.nrows();
    let o = scaled_observability(a, c)?;
    let (observable_basis, unobservable_basis) = if o.nrows() == 0 || n == 0 {
        (RealMatrix::zeros(n, 0), RealMatrix::identity(n, n))
    } else {
        let l = rank_unchecked(&o, policy);
        let (_, v) = svd_right(&o);
        (
            v.columns(0, l).into_owned(),
            v.columns(l, n - l).into_owned(),
        )
    };
    let unobservable_restriction = unobservable_basis.transpose() * a * &unobservable_basis;
    let unstable = unstable_invariant_subspace(&unobservable_restriction, margin)?;
    let unstable_unobservable_basis = &unobservable_basis * unstable;
    Ok(ObservabilityDecomposition {
        observable_basis,
        unobservable_basis,
        unobservable_restriction,
        unstable_unobservable_basis,
    })
}

/// `F W_u = 0`, where `W_u` spans the unobservable modes with
/// `Re(lambda) >= -margin`.
pub fn is_functionally_detectable(
    sys: &SystemTriple,
    policy: &RankPolicy,
    margin: f64,
) -> Result<bool> {
    let dec = observability_decomposition(&sys.a, &sys.c, policy, margin)?;
    Ok(detectable_from(&dec, &sys.f, policy))
}

fn detectable_from(dec: &ObservabilityDecomposition, f: &RealMatrix, policy: &RankPolicy) -> bool {
    if dec.unstable_unobservable_basis.ncols() == 0 {
        return true;
    }
    let residual = unit_scaled(f) * &dec.unstable_unobservable_basis;
    norm_inf(&residual) <= policy.residual_tolerance(1.0)
}

/// Rank used by the eigenvalue-based routes. Their inputs carry the error of
/// a computed eigenvalue or eigenvector, so besides the policy threshold a
/// floor of `policy.residual_tolerance(1)` applies to unit-scaled data.
pub(crate) fn spectral_rank<T: nalgebra::ComplexField<RealField = f64>>(
    m: &nalgebra::DMatrix<T>,
    policy: &RankPolicy,
) -> usize {
    if m.is_empty() {
        return 0;
    }
    let s = singular_values(m);
    let thr = policy
        .threshold(s[0], m.nrows(), m.ncols())
        .max(policy.residual_tolerance(1.0));
    s.iter().filter(|&&x| x > thr).count()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModalEntry {
    pub eigenvalue: Complex64,
    pub multiplicity: usize,
    pub modally_observable: bool,
    pub unstable: bool,
}

/// Per-eigenvalue test `rank [C T_i; F T_i] == rank C T_i` for diagonalizable `A`.
pub fn modal_functional_observability(
    sys: &SystemTriple,
    spec: &SpectralData,
    policy: &RankPolicy,
    margin: f64,
) -> Result<Vec<ModalEntry>> {
    let scale = norm_inf(&sys.a).max(1.0);
    spec.validate_against(&sys.a, policy.residual_tolerance(scale))?;
    let c = to_complex(&unit_scaled(&sys.c));
    let f = to_complex(&unit_scaled(&sys.f));
    let tie = stability_tie_tolerance(&sys.a);
    spec.groups
        .iter()
        .map(|g| {
            let ci = &c * &g.vectors;
            let fi = &f * &g.vectors;
            let stacked = vstack(&ci, &fi)?;
            Ok(ModalEntry {
                eigenvalue: g.eigenvalue,
                multiplicity: g.multiplicity,
                modally_observable: spectral_rank(&stacked, policy) == spectral_rank(&ci, policy),
                unstable: is_unstable(g.eigenvalue, margin, tie),
            })
        })
        .collect()
}

/// User-supplied real Jordan data for one eigenvalue: `A T = T J`.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanData {
    pub eigenvalue: Complex64,
    /// `n x d`.
    pub t: RealMatrix,
    /// `d x d`.
    pub j: RealMatrix,
}

/// Per-eigenvalue test `rank [O(J_i, C T_i); F T_i] == rank O(J_i, C T_i)` on
/// caller-provided Jordan data; the only modal route for defective `A`.
pub fn modal_functional_observability_jordan(
    sys: &SystemTriple,
    blocks: &[JordanData],
    policy: &RankPolicy,
    margin: f64,
) -> Result<Vec<ModalEntry>> {
    let n = sys.n();
    let total: usize = blocks.iter().map(|b| b.t.ncols()).sum();
    if total != n {
        return Err(Error::InvalidInput(format!(
            "Jordan blocks cover {total} columns, expected {n}"
        )));
    }
    let scale = norm_inf(&sys.a).max(1.0);
    let tie = stability_tie_tolerance(&sys.a);
    let c = unit_scaled(&sys.c);
    let f = unit_scaled(&sys.f);
    blocks
        .iter()
        .enumerate()
        .map(|(k, b)| {
            let d = b.t.ncols();
            if b.t.nrows() != n || b.j.shape() != (d, d) {
                return Err(Error::DimensionMismatch(format!(
                    "Jordan block {k} has inconsistent shapes"
                )));
            }
            let residual = &sys.a * &b.t - &b.t * &b.j;
            if norm_inf(&residual) > policy.residual_tolerance(scale) * norm_inf(&b.t).max(1.0) {
                return Err(Error::InvalidInput(format!(
                    "Jordan block {k} does not satisfy A T = T J (residual {:.3e})",
                    norm_inf(&residual)
                )));
            }
            let o = scaled_observability(&b.j, &(&c * &b.t))?;
            let fi = &f * &b.t;
            Ok(ModalEntry {
                eigenvalue: b.eigenvalue,
                multiplicity: d,
                modally_observable: rank_unchecked(&vstack(&o, &fi)?, policy)
                    == rank_unchecked(&o, policy),
                unstable: is_unstable(b.eigenvalue, margin, tie),
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PbhVerdict {
    pub eigenvalue: Complex64,
    /// `rank [A - lambda I; C; F] == rank [A - lambda I; C]`.
    pub holds: bool,
    /// Set when `A` is not (numerically) diagonalizable: the rank equality is
    /// then necessary for functional observability but not sufficient.
    pub necessary_only: bool,
}

/// Eigenvalue-wise rank test at `lambda`.
pub fn pbh_functional_check(
    sys: &SystemTriple,
    eigenvalue: Complex64,
    policy: &RankPolicy,
) -> Result<PbhVerdict> {
    let necessary_only = match eigendecompose_diagonalizable(&sys.a, policy, None) {
        Ok(_) => false,
        Err(Error::NotDiagonalizable { .. }) => true,
        Err(e) => return Err(e),
    };
    Ok(pbh_at(sys, eigenvalue, policy, necessary_only))
}

fn pbh_at(
    sys: &SystemTriple,
    eigenvalue: Complex64,
    policy: &RankPolicy,
    necessary_only: bool,
) -> PbhVerdict {
    let n = sys.n();
    let s = norm_inf(&sys.a).max(eigenvalue.norm());
    let s = if s > 0.0 { s } else { 1.0 };
    let shifted =
        (to_complex(&sys.a) - ComplexMatrix::identity(n, n) * eigenvalue) / Complex64::new(s, 0.0);
    let top = vstack(&shifted, &to_complex(&unit_scaled(&sys.c))).expect("column counts match");
    let full = vstack(&top, &to_complex(&unit_scaled(&sys.f))).expect("column counts match");
    PbhVerdict {
        eigenvalue,
        holds: spectral_rank(&full, policy) == spectral_rank(&top, policy),
        necessary_only,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    RankIdentity,
    Modal,
    Decomposition,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionalReport {
    pub functionally_observable: bool,
    pub functionally_detectable: bool,
    pub rank_o: usize,
    pub rank_of: usize,
    pub observability_method: Method,
    pub detectability_method: Method,
    /// Present only when `A` is diagonalizable.
    pub modal_table: Option<Vec<ModalEntry>>,
    /// Whether the modal table reproduces both verdicts; `None` without a table.
    pub modal_consistent: Option<bool>,
    pub diagonalizable: bool,
    /// Condition number of the eigenvector matrix; `None` when it is infinite.
    pub eigenvector_condition: Option<f64>,
    pub pbh: Vec<PbhVerdict>,
}

/// Runs every applicable check on `sys`.
pub fn analyze(sys: &SystemTriple, policy: &RankPolicy, margin: f64) -> Result<FunctionalReport> {
    let fo = is_functionally_observable(sys, policy)?;
    let fd = is_functionally_detectable(sys, policy, margin)?;
    let (spec, condition) = match eigendecompose_diagonalizable(&sys.a, policy, None) {
        Ok(spec) => {
            let cond = spec.condition;
            (Some(spec), cond)
        }
        Err(Error::NotDiagonalizable { condition }) => (None, condition),
        Err(e) => return Err(e),
    };
    let diagonalizable = spec.is_some();

    let modal_table = spec
        .as_ref()
        .map(|s| modal_functional_observability(sys, s, policy, margin))
        .transpose()?;
    let modal_consistent = modal_table.as_ref().map(|t| {
        let all = t.iter().all(|e| e.modally_observable);
        let unstable = t
            .iter()
            .filter(|e| e.unstable)
            .all(|e| e.modally_observable);
        all == fo.observable && unstable == fd
    });

    let eigenvalues: Vec<Complex64> = match &spec {
        Some(s) => s.groups.iter().map(|g| g.eigenvalue).collect(),
        None => distinct_eigenvalues(&sys.a, None)?
            .into_iter()
            .map(|(v, _)| v)
            .collect(),
    };
    let pbh = eigenvalues
        .into_iter()
        .map(|l| pbh_at(sys, l, policy, !diagonalizable))
        .collect();

    Ok(FunctionalReport {
        functionally_observable: fo.observable,
        functionally_detectable: fd,
        rank_o: fo.rank_o,
        rank_of: fo.rank_of,
        observability_method: Method::RankIdentity,
        detectability_method: Method::Decomposition,
        modal_table,
        modal_consistent,
        diagonalizable,
        eigenvector_condition: condition.is_finite().then_some(condition),
        pbh,
    })
}

/// `rank [O(A,C); O(A,F)] - rank O(A,C)`; zero exactly when the functional
/// is observable.
pub fn observability_gap_with_functional_outputs(
    sys: &SystemTriple,
    policy: &RankPolicy,
) -> Result<usize> {
    let o = scaled_observability(&sys.a, &sys.c)?;
    let of = scaled_observability(&sys.a, &sys.f)?;
    Ok(rank_unchecked(&vstack(&o, &of)?, policy) - rank_unchecked(&o, policy))
}
