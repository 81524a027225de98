//! Structural target controllability by duality with functional observability.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::dynamic::DynamicGraph;
use super::pattern::PatternMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetReport {
    pub targets: Vec<usize>,
    /// `grank C(A, B)`.
    pub generic_rank_c: usize,
    /// Bounds on `grank C(A, B)_S`; equal when the rank is known exactly.
    pub rank_lower: usize,
    pub rank_upper: usize,
    /// `Some` whenever the bounds settle the question.
    pub target_controllable: Option<bool>,
}

fn check_inputs(a: &PatternMatrix, b: &PatternMatrix, targets: &BTreeSet<usize>) -> Result<usize> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n {
        return Err(Error::DimensionMismatch(format!(
            "A must be n x n and B must have n rows (A is {}x{}, B is {}x{})",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    if let Some(&bad) = targets.iter().find(|&&s| s >= n) {
        return Err(Error::InvalidInput(format!(
            "target state {bad} is out of range for n = {n}"
        )));
    }
    Ok(n)
}

/// Dual dynamic graph `D(A^T, B^T)`, optionally with first-layer functional
/// edges for the given states.
fn dual_linking(a: &PatternMatrix, b: &PatternMatrix, extra: &[usize]) -> usize {
    let (at, bt) = (a.transpose(), b.transpose());
    let g = if extra.is_empty() {
        DynamicGraph::new(&at, &bt)
    } else {
        let f = PatternMatrix::unit_rows(a.nrows(), extra).expect("states checked against n");
        DynamicGraph::with_functional(&at, &bt, &f)
    };
    g.max_linking(&BTreeSet::new())
}

/// Whether almost every realization steers the `n - 1` states in `targets`
/// arbitrarily: `grank C(A, B)_S = n - 1`.
pub fn target_controllable_nminus1(
    a: &PatternMatrix,
    b: &PatternMatrix,
    targets: &BTreeSet<usize>,
) -> Result<bool> {
    let n = check_inputs(a, b, targets)?;
    if n == 0 || targets.len() + 1 != n {
        return Err(Error::Unsupported(format!(
            "exact structural target controllability needs |S| = n - 1 = {}, got |S| = {}; for smaller \
             target sets only a range for the generic rank is known",
            n.saturating_sub(1),
            targets.len()
        )));
    }
    let missing = (0..n)
        .find(|i| !targets.contains(i))
        .expect("exactly one state is not targeted");
    // grank [C(A,B), e_i^T] = 1 + grank C(A,B)_S
    Ok(dual_linking(a, b, &[missing]) == n)
}

/// Exact answer for `|S| = n - 1`, and the generic-rank range otherwise.
pub fn target_controllability(
    a: &PatternMatrix,
    b: &PatternMatrix,
    targets: &BTreeSet<usize>,
) -> Result<TargetReport> {
    let n = check_inputs(a, b, targets)?;
    if targets.len() == n {
        return Err(Error::Unsupported(
            "every state is targeted; use structural controllability (grank C(A, B) = n) instead"
                .into(),
        ));
    }
    let d_c = dual_linking(a, b, &[]);
    let complement: Vec<usize> = (0..n).filter(|i| !targets.contains(i)).collect();
    let k = complement.len();
    let (lo, hi) = if k == 1 {
        let r = dual_linking(a, b, &complement) - 1;
        (r, r)
    } else if complement.iter().any(|&i| dual_linking(a, b, &[i]) > d_c) {
        // grank [C, I_complement^T] lies in [d_c + 1, d_c + k]
        ((d_c + 1).saturating_sub(k), d_c)
    } else {
        let r = d_c.saturating_sub(k);
        (r, r)
    };
    let s = targets.len();
    let verdict = if lo >= s {
        Some(true)
    } else if hi < s {
        Some(false)
    } else {
        None
    };
    Ok(TargetReport {
        targets: targets.iter().copied().collect(),
        generic_rank_c: d_c,
        rank_lower: lo,
        rank_upper: hi,
        target_controllable: verdict,
    })
}
