mod common;

use std::collections::BTreeSet;

use common::criteria;
use common::*;
use funcobs::fixtures;
use funcobs::numeric::RankPolicy;
use funcobs::structural::realization::field_observability_rank;
use funcobs::structural::{
    generic_obs_rank, is_sfo, max_linking_size, output_reachable_set,
    sample_functional_observability, DynamicGraph, PatternMatrix, PatternTriple,
};
use rand::Rng;

fn triples(seed: u64, count: usize) -> Vec<PatternTriple> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=7);
            let pc = rng.gen_range(1..=3);
            random_pattern_triple(&mut rng, n, pc)
        })
        .collect()
}

#[test]
fn reference_systems() {
    criteria::extra_link(100).unwrap();
    criteria::branched_chain().unwrap();
}

#[test]
fn linking_rank_matches_field_rank() {
    criteria::linking_rank_oracle(200, 31).unwrap();
}

#[test]
fn sfo_matches_field_oracle() {
    let mut rng = rng(32);
    for t in triples(33, 150) {
        let with_f = t.c.vstack(&t.f).unwrap();
        let field = field_observability_rank(&t.a, &with_f, &mut rng)
            == field_observability_rank(&t.a, &t.c, &mut rng);
        assert_eq!(is_sfo(&t).sfo, field);
    }
}

#[test]
fn excluding_one_source_costs_at_most_one_path() {
    for t in triples(34, 150) {
        let g = DynamicGraph::new(&t.a, &t.c);
        let d_o = max_linking_size(&g, &BTreeSet::new());
        for i in 0..t.n() {
            let without = max_linking_size(&g, &BTreeSet::from([i]));
            assert!(
                without == d_o || without + 1 == d_o,
                "d_o {d_o}, without x{i}: {without}"
            );
        }
    }
}

#[test]
fn sampling_separates_sfo_from_non_sfo() {
    let policy = RankPolicy::default();
    for (k, t) in triples(35, 40).into_iter().enumerate() {
        let sample = sample_functional_observability(&t, 100, k as u64, &policy).unwrap();
        let fraction = sample.fraction_observable();
        if is_sfo(&t).sfo {
            assert!(
                fraction >= 0.99,
                "SFO triple {k} observable in only {fraction}"
            );
        } else {
            assert!(
                fraction <= 0.01,
                "non-SFO triple {k} observable in {fraction}"
            );
        }
    }
}

#[test]
fn sfo_needs_every_functional_state_to_reach_an_output() {
    for t in triples(36, 200) {
        if is_sfo(&t).sfo {
            let reach = output_reachable_set(&t.a, &t.c);
            assert!(t.functional_states().is_subset(&reach));
        }
    }
}

#[test]
fn adding_an_output_link_can_destroy_sfo() {
    let without = fixtures::extra_link_removed();
    let with = fixtures::extra_link();
    assert!(is_sfo(&without).sfo);
    assert!(!is_sfo(&with).sfo);
    // the pair differs in exactly one support position of C
    let diff: Vec<_> = with
        .c
        .support()
        .symmetric_difference(without.c.support())
        .collect();
    assert_eq!(diff, vec![&(0, 2)]);
}

#[test]
fn sfo_decomposes_over_functional_states() {
    for t in triples(37, 150) {
        let states: Vec<usize> = t.functional_states().into_iter().collect();
        let per_state = states.iter().all(|&i| {
            let single =
                PatternTriple::with_functional_states(t.a.clone(), t.c.clone(), &[i]).unwrap();
            is_sfo(&single).sfo
        });
        assert_eq!(is_sfo(&t).sfo, per_state);
    }
}

#[test]
fn self_loop_fast_path_is_used_and_agrees() {
    let mut rng = rng(38);
    let mut used = 0;
    for _ in 0..60 {
        let n = rng.gen_range(1..=6);
        let t = random_pattern_triple(&mut rng, n, 2);
        let diag: Vec<(usize, usize)> = (0..n)
            .map(|i| (i, i))
            .chain(t.a.support().iter().copied())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let a = PatternMatrix::from_positions(n, n, &diag).unwrap();
        let looped = PatternTriple::new(a, t.c.clone(), t.f.clone()).unwrap();
        let r = is_sfo(&looped);
        used += usize::from(r.fast_path_used);
        let reach = output_reachable_set(&looped.a, &looped.c);
        assert_eq!(r.sfo, looped.functional_states().is_subset(&reach));
    }
    assert_eq!(used, 60);
}

#[test]
fn empty_functional_is_trivially_sfo() {
    let (a, c) = fixtures::branched_chain();
    let t = PatternTriple::with_functional_states(a.clone(), c.clone(), &[]).unwrap();
    let r = is_sfo(&t);
    assert!(r.sfo);
    assert_eq!(r.generic_rank_o, generic_obs_rank(&a, &c));
}
