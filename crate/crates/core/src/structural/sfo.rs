//! Structural functional observability via maximum linkings.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::dynamic::DynamicGraph;
use super::pattern::{output_reachable_set, PatternMatrix, PatternTriple};

/// Per-state entry of an [`SfoReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalStateCheck {
    pub state: usize,
    /// Every maximum linking of `D(A, C)` uses `x_state^0`.
    pub reached_by_every_max_family: bool,
    pub output_reachable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SfoReport {
    pub sfo: bool,
    /// `grank O(A, C)`.
    pub generic_rank_o: usize,
    /// `grank O(A, [C; F])`.
    pub generic_rank_of: usize,
    pub per_functional_state: Vec<FunctionalStateCheck>,
    /// Every state carries a self-loop, so the reachability shortcut applied
    /// (it is still cross-checked against the flow routes).
    pub fast_path_used: bool,
}

/// `grank O(A, C)` as the maximum linking size of `D(A, C)`.
pub fn generic_obs_rank(a: &PatternMatrix, c: &PatternMatrix) -> usize {
    DynamicGraph::new(a, c).max_linking(&BTreeSet::new())
}

pub fn max_linking_size(g: &DynamicGraph, excluded: &BTreeSet<usize>) -> usize {
    g.max_linking(excluded)
}

pub fn is_structurally_observable(a: &PatternMatrix, c: &PatternMatrix) -> bool {
    generic_obs_rank(a, c) == a.nrows()
}

/// `grank O(A, [C; F])`.
pub fn generic_rank_with_functional(triple: &PatternTriple) -> usize {
    let stacked = triple
        .c
        .vstack(&triple.f)
        .expect("triple columns already validated");
    generic_obs_rank(&triple.a, &stacked)
}

/// Self-loop shortcut: when every state has a self-loop, SFO holds iff every
/// functional state is output-reachable. `None` when some self-loop is missing.
pub fn sfo_selfloop_fastpath(triple: &PatternTriple) -> Option<bool> {
    if !triple.a.has_full_diagonal() {
        return None;
    }
    let reach = output_reachable_set(&triple.a, &triple.c);
    Some(triple.functional_states().is_subset(&reach))
}

/// Decides SFO by comparing generic ranks and, independently, by testing for
/// each functional state whether removing its first-layer copy shrinks the
/// maximum linking. The two answers must agree.
pub fn is_sfo(triple: &PatternTriple) -> SfoReport {
    let d_o = generic_obs_rank(&triple.a, &triple.c);
    let d_of = generic_rank_with_functional(triple);
    let by_rank = d_of == d_o;

    let g = DynamicGraph::new(&triple.a, &triple.c);
    let reach = output_reachable_set(&triple.a, &triple.c);
    let per_functional_state: Vec<FunctionalStateCheck> = triple
        .functional_states()
        .into_iter()
        .map(|state| FunctionalStateCheck {
            state,
            reached_by_every_max_family: g.max_linking(&BTreeSet::from([state])) < d_o,
            output_reachable: reach.contains(&state),
        })
        .collect();
    let by_families = per_functional_state
        .iter()
        .all(|s| s.reached_by_every_max_family);
    assert_eq!(
        by_rank, by_families,
        "SFO routes disagree (generic ranks {d_of} vs {d_o}, per-state test {by_families})"
    );

    let fast = sfo_selfloop_fastpath(triple);
    if let Some(verdict) = fast {
        assert_eq!(
            verdict, by_rank,
            "self-loop shortcut disagrees with the linking routes"
        );
    }
    SfoReport {
        sfo: by_rank,
        generic_rank_o: d_o,
        generic_rank_of: d_of,
        per_functional_state,
        fast_path_used: fast.is_some(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn branched_chain_with(states: &[usize]) -> PatternTriple {
        let (a, c) = fixtures::branched_chain();
        PatternTriple::with_functional_states(a, c, states).unwrap()
    }

    #[test]
    fn branched_chain_table() {
        let (a, c) = fixtures::branched_chain();
        assert_eq!(generic_obs_rank(&a, &c), 5);
        assert!(!is_structurally_observable(&a, &c));
        for i in 0..7 {
            let r = is_sfo(&branched_chain_with(&[i]));
            assert_eq!(r.sfo, [0, 1, 4].contains(&i), "x{}", i + 1);
            assert!(!r.fast_path_used);
        }
    }

    #[test]
    fn extra_link_is_not_sfo_but_becomes_sfo_without_c13() {
        let r = is_sfo(&fixtures::extra_link());
        assert!(!r.sfo);
        assert_eq!((r.generic_rank_of, r.generic_rank_o), (3, 2));
        let r = is_sfo(&fixtures::extra_link_removed());
        assert!(r.sfo);
    }

    #[test]
    fn identity_functional_on_observable_pattern() {
        let n = 4;
        let chain: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        let a = PatternMatrix::from_positions(n, n, &chain).unwrap();
        let c = PatternMatrix::from_positions(1, n, &[(0, 0)]).unwrap();
        assert!(is_structurally_observable(&a, &c));
        let t = PatternTriple::new(a, c, PatternMatrix::identity(n)).unwrap();
        assert!(is_sfo(&t).sfo);
    }

    #[test]
    fn empty_functional_set_is_vacuously_sfo() {
        let r = is_sfo(&branched_chain_with(&[]));
        assert!(r.sfo);
        assert!(r.per_functional_state.is_empty());
    }

    #[test]
    fn selfloop_fastpath() {
        let n = 3;
        let mut pos: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
        pos.push((0, 1)); // x2 -> x1
        let a = PatternMatrix::from_positions(n, n, &pos).unwrap();
        let c = PatternMatrix::from_positions(1, n, &[(0, 0)]).unwrap();
        let reachable =
            PatternTriple::with_functional_states(a.clone(), c.clone(), &[0, 1]).unwrap();
        assert_eq!(sfo_selfloop_fastpath(&reachable), Some(true));
        assert!(is_sfo(&reachable).fast_path_used);
        let isolated = PatternTriple::with_functional_states(a, c, &[2]).unwrap();
        assert_eq!(sfo_selfloop_fastpath(&isolated), Some(false));
        assert!(!is_sfo(&isolated).sfo);
        assert_eq!(sfo_selfloop_fastpath(&branched_chain_with(&[0])), None);
    }
}
