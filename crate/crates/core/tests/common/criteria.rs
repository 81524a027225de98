//! One function per acceptance criterion. Each returns `Ok(detail)` when the
//! criterion holds and `Err(detail)` otherwise; sample counts are parameters
//! so the focused integration tests can reuse them at a smaller size.

use std::collections::{BTreeMap, BTreeSet};

use funcobs::fixtures;
use funcobs::functional::{
    analyze, is_functionally_detectable, is_functionally_observable,
    modal_functional_observability, modal_functional_observability_jordan, pbh_functional_check,
    JordanData,
};
use funcobs::numeric::{
    distinct_eigenvalues, eigendecompose_diagonalizable, RankPolicy, RealMatrix,
};
use funcobs::placement::{
    construct_min_c, greedy_place, greedy_with_certificate, min_sensor_count_diagonalizable,
    objective_f, objective_fbar, objective_fd, objective_gbar, PlacementProblem,
};
use funcobs::structural::realization::{field_observability_rank, field_target_rank};
use funcobs::structural::{
    generic_obs_rank, generic_rank_with_functional, is_sfo, max_linking_size,
    sample_functional_observability, target_controllable_nminus1, DynamicGraph, PatternMatrix,
    PatternTriple,
};
use funcobs::SystemTriple;
use num_complex::Complex64;
use rand::Rng;

use super::*;

pub type Outcome = std::result::Result<String, String>;

fn p() -> RankPolicy {
    RankPolicy::default()
}

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

pub fn defective_mix() -> Outcome {
    let (a, c, f) = fixtures::defective_mix();
    let sys = SystemTriple::new(a, c, f).map_err(|e| e.to_string())?;
    let report = analyze(&sys, &p(), 0.0).map_err(|e| e.to_string())?;
    let (t, j) = fixtures::defective_mix_jordan();
    let blocks = [(1.0, 0..2), (-1.0, 2..4), (0.0, 4..5)].map(|(l, cols)| JordanData {
        eigenvalue: Complex64::new(l, 0.0),
        t: t.columns(cols.start, cols.len()).into_owned(),
        j: j.view((cols.start, cols.start), (cols.len(), cols.len()))
            .into_owned(),
    });
    let table = modal_functional_observability_jordan(&sys, &blocks, &p(), 0.0)
        .map_err(|e| e.to_string())?;
    let modal: BTreeMap<i64, bool> = table
        .iter()
        .map(|e| (e.eigenvalue.re.round() as i64, e.modally_observable))
        .collect();
    let expected: BTreeMap<i64, bool> = [(-1, false), (0, true), (1, true)].into();
    let ok = !report.functionally_observable && report.functionally_detectable && modal == expected;
    verdict(
        ok,
        format!(
            "FO={} FD={} modal={:?}",
            report.functionally_observable, report.functionally_detectable, modal
        ),
    )
}

pub fn nilpotent_block() -> Outcome {
    let (a, c, f) = fixtures::nilpotent_block();
    let sys = SystemTriple::new(a, c, f).map_err(|e| e.to_string())?;
    let fo = is_functionally_observable(&sys, &p()).map_err(|e| e.to_string())?;
    let fd = is_functionally_detectable(&sys, &p(), 0.0).map_err(|e| e.to_string())?;
    let pbh =
        pbh_functional_check(&sys, Complex64::new(0.0, 0.0), &p()).map_err(|e| e.to_string())?;
    let ok = fo.rank_o == 1
        && fo.rank_of == 2
        && !fo.observable
        && !fd
        && pbh.holds
        && pbh.necessary_only;
    verdict(
        ok,
        format!(
            "rank O={} rank[O;F]={} FO={} FD={} PBH(0)={} necessary_only={}",
            fo.rank_o, fo.rank_of, fo.observable, fd, pbh.holds, pbh.necessary_only
        ),
    )
}

pub fn extra_link(trials: usize) -> Outcome {
    let t = fixtures::extra_link();
    let r = is_sfo(&t);
    let sample =
        sample_functional_observability(&t, trials, 2024, &p()).map_err(|e| e.to_string())?;
    let unobservable = sample.trials - sample.functionally_observable;
    let need = trials - trials / 100;
    let ok = !r.sfo && (r.generic_rank_of, r.generic_rank_o) == (3, 2) && unobservable >= need;
    verdict(
        ok,
        format!(
            "SFO={} granks=({}, {}) unobservable realizations {unobservable}/{trials}",
            r.sfo, r.generic_rank_of, r.generic_rank_o
        ),
    )
}

pub fn branched_chain() -> Outcome {
    let (a, c) = fixtures::branched_chain();
    let d_o = generic_obs_rank(&a, &c);
    let graph = DynamicGraph::new(&a, &c);
    let mut sfo_states = BTreeSet::new();
    let mut disagreements = 0;
    for i in 0..7 {
        let t = PatternTriple::with_functional_states(a.clone(), c.clone(), &[i])
            .map_err(|e| e.to_string())?;
        let route1 = generic_rank_with_functional(&t) == d_o;
        let route2 = max_linking_size(&graph, &BTreeSet::from([i])) < d_o;
        let report = is_sfo(&t);
        if route1 != route2 || report.sfo != route1 {
            disagreements += 1;
        }
        if route1 {
            sfo_states.insert(i + 1);
        }
    }
    let ok = d_o == 5 && sfo_states == BTreeSet::from([1, 2, 5]) && disagreements == 0;
    verdict(
        ok,
        format!("d_o={d_o} SFO states={sfo_states:?} route disagreements={disagreements}"),
    )
}

pub fn design_system(perturbations: usize) -> Outcome {
    let (a, f) = fixtures::design_system();
    let groups = distinct_eigenvalues(&a, None).map_err(|e| e.to_string())?;
    let mut seen: Vec<(i64, i64, usize)> = groups
        .iter()
        .map(|(l, m)| (l.re.round() as i64, l.im.round() as i64, *m))
        .collect();
    seen.sort();
    let groups_ok = seen == vec![(-2, -1, 1), (-2, 1, 1), (1, -1, 3), (1, 1, 3)];
    let p_star = min_sensor_count_diagonalizable(&a, &f, &p()).map_err(|e| e.to_string())?;
    let design = construct_min_c(&a, &f, &p()).map_err(|e| e.to_string())?;
    let given = fixtures::design_system_given_c();
    let sys = SystemTriple::new(a.clone(), given.clone(), f.clone()).map_err(|e| e.to_string())?;
    let given_ok = is_functionally_observable(&sys, &p())
        .map_err(|e| e.to_string())?
        .observable;

    let mut rng = rng(77);
    let mut broken = 0;
    for _ in 0..perturbations {
        let delta = RealMatrix::from_fn(2, 8, |_, _| rng.gen_range(-0.1..0.1));
        let perturbed =
            SystemTriple::new(a.clone(), &given + delta, f.clone()).map_err(|e| e.to_string())?;
        if !is_functionally_observable(&perturbed, &p())
            .map_err(|e| e.to_string())?
            .observable
        {
            broken += 1;
        }
    }
    let need = perturbations - perturbations / 100;

    let dedicated =
        SystemTriple::new(a, RealMatrix::identity(8, 8), f).map_err(|e| e.to_string())?;
    let placed =
        greedy_place(&PlacementProblem::numeric_fo(dedicated, p())).map_err(|e| e.to_string())?;
    let mut selected: Vec<usize> = placed.selected.iter().map(|s| s + 1).collect();
    selected.sort();

    let ok = groups_ok
        && p_star == 2
        && (design.rank_o, design.rank_of) == (6, 6)
        && given_ok
        && broken >= need
        && selected == vec![1, 2];
    verdict(
        ok,
        format!(
            "groups={seen:?} p*={p_star} constructed ranks=({}, {}) given C FO={given_ok} \
             perturbations breaking FO {broken}/{perturbations} greedy sensors={selected:?}",
            design.rank_o, design.rank_of
        ),
    )
}

pub fn linking_rank_oracle(instances: usize, seed: u64) -> Outcome {
    let mut rng = rng(seed);
    let mut disagreements = Vec::new();
    for k in 0..instances {
        let n = rng.gen_range(1..=8);
        let m = rng.gen_range(1..=3);
        let density = rng.gen_range(0.1..0.5);
        let a = random_pattern(&mut rng, n, n, density);
        let dc = rng.gen_range(0.1..0.5);
        let c = random_pattern(&mut rng, m, n, dc);
        let graph = generic_obs_rank(&a, &c);
        let field = field_observability_rank(&a, &c, &mut rng);
        if graph != field {
            disagreements.push(format!("instance {k}: linking {graph} vs field {field}"));
        }
    }
    verdict(
        disagreements.is_empty(),
        format!(
            "{instances} patterns, {} disagreements {:?}",
            disagreements.len(),
            disagreements.first()
        ),
    )
}

/// Checks monotone decrease and the supermodular inequality of a set
/// function tabulated over every subset mask of `p` candidates. Returns the
/// first violation found.
pub fn supermodularity_violation(values: &[usize], p: usize) -> Option<String> {
    let full = (1usize << p) - 1;
    for t in 0..=full {
        // S ranges over subsets of T
        let mut s = t;
        loop {
            if values[t] > values[s] {
                return Some(format!(
                    "not monotone: g({t:#b}) = {} > g({s:#b}) = {}",
                    values[t], values[s]
                ));
            }
            for v in (0..p).filter(|v| t & (1 << v) == 0) {
                let gain_s = values[s] as i64 - values[s | 1 << v] as i64;
                let gain_t = values[t] as i64 - values[t | 1 << v] as i64;
                if gain_s < gain_t {
                    return Some(format!(
                        "supermodularity: S={s:#b} T={t:#b} v={v}: gain at S {gain_s} < gain at T {gain_t}"
                    ));
                }
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & t;
        }
    }
    None
}

/// First subset pair `S ⊆ T` with `g(T) > g(S)`.
pub fn monotonicity_violation(values: &[usize], p: usize) -> Option<String> {
    let full = (1usize << p) - 1;
    (0..=full).find_map(|t| {
        (0..p)
            .filter(|v| t & (1 << v) == 0)
            .find(|v| values[t | 1 << v] > values[t])
            .map(|v| format!("g grows when adding {v} to {t:#b}"))
    })
}

pub fn tabulate(p: usize, mut g: impl FnMut(&[usize]) -> usize) -> Vec<usize> {
    subsets(p).iter().map(|s| g(s)).collect()
}

pub fn supermodularity(instances: usize, seed: u64) -> Outcome {
    let mut rng = rng(seed);
    let mut violations: BTreeMap<&str, (usize, String)> = BTreeMap::new();
    let mut record = |name: &'static str, v: Option<String>, k: usize| {
        if let Some(msg) = v {
            let e = violations
                .entry(name)
                .or_insert((0, format!("instance {k}: {msg}")));
            e.0 += 1;
        }
    };
    for k in 0..instances {
        let n = rng.gen_range(2..=5);
        let pc = rng.gen_range(2..=4);
        let r = rng.gen_range(1..=3);
        let sys = random_diagonalizable_triple(&mut rng, n, pc, r);
        let spec = eigendecompose_diagonalizable(sys.a(), &p(), None)
            .expect("orthogonal similarity of a modal form");
        record(
            "f",
            supermodularity_violation(&tabulate(pc, |s| objective_f(&sys, s, &p()).unwrap()), pc),
            k,
        );
        record(
            "fbar",
            supermodularity_violation(
                &tabulate(pc, |s| objective_fbar(&sys, s, &p()).unwrap()),
                pc,
            ),
            k,
        );
        record(
            "f_d",
            supermodularity_violation(
                &tabulate(pc, |s| objective_fd(&sys, &spec, s, &p(), 0.0).unwrap()),
                pc,
            ),
            k,
        );

        let n = rng.gen_range(2..=6);
        let pc = rng.gen_range(2..=4);
        let t = random_pattern_triple(&mut rng, n, pc);
        record(
            "gbar",
            supermodularity_violation(&tabulate(pc, |s| objective_gbar(&t, s)), pc),
            k,
        );
    }
    let summary: Vec<String> = violations
        .iter()
        .map(|(name, (count, first))| format!("{name}: {count} instances, e.g. {first}"))
        .collect();
    verdict(
        violations.is_empty(),
        format!(
            "{instances} numeric (f, fbar, f_d) + {instances} structural (gbar) instances; violations: {}",
            if summary.is_empty() { "none".to_string() } else { summary.join("; ") }
        ),
    )
}

fn feasible_numeric<R: Rng>(rng: &mut R) -> PlacementProblem {
    loop {
        let n = rng.gen_range(2..=6);
        let pc = rng.gen_range(4..=12);
        let r = rng.gen_range(1..=3);
        let sys = random_sparse_triple(rng, n, pc, r);
        let problem = PlacementProblem::numeric_fo(sys, p());
        if problem.objective(problem.candidates()).unwrap() == 0 {
            return problem;
        }
    }
}

fn feasible_structural<R: Rng>(rng: &mut R) -> PlacementProblem {
    loop {
        let n = rng.gen_range(2..=7);
        let pc = rng.gen_range(4..=12);
        let problem = PlacementProblem::structural_sfo(random_pattern_triple(rng, n, pc));
        if problem.objective(problem.candidates()).unwrap() == 0 {
            return problem;
        }
    }
}

pub fn approximation_bound(instances: usize, seed: u64) -> Outcome {
    let mut rng = rng(seed);
    let mut violations = Vec::new();
    let mut checked = 0;
    for k in 0..instances {
        let (label, problem) = if k % 2 == 0 {
            ("P1", feasible_numeric(&mut rng))
        } else {
            ("P2", feasible_structural(&mut rng))
        };
        let result = greedy_with_certificate(&problem, 14).unwrap();
        let cert = result
            .bound_certificate
            .expect("feasible instance carries a certificate");
        checked += 1;
        if !cert.holds {
            violations.push(format!(
                "instance {k} ({label}): greedy {} > bound {:.3} (optimum {})",
                cert.greedy, cert.bound, cert.optimum
            ));
        }
    }
    verdict(
        violations.is_empty(),
        format!(
            "{checked} instances (P1/P2 alternating), {} violations {:?}",
            violations.len(),
            violations.first()
        ),
    )
}

pub fn target_controllability(instances: usize, realizations: usize, seed: u64) -> Outcome {
    let mut rng = rng(seed);
    let mut disagreements = Vec::new();
    let mut sets = 0;
    let mut controllable = 0;
    for k in 0..instances {
        let n = rng.gen_range(2..=7);
        let m = rng.gen_range(1..=2);
        let da = rng.gen_range(0.1..0.45);
        let a = random_pattern(&mut rng, n, n, da);
        let db = rng.gen_range(0.1..0.4);
        let b = random_pattern(&mut rng, n, m, db);
        for missing in 0..n {
            let targets: Vec<usize> = (0..n).filter(|&i| i != missing).collect();
            let set: BTreeSet<usize> = targets.iter().copied().collect();
            let graph = target_controllable_nminus1(&a, &b, &set).unwrap();
            let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
            for _ in 0..realizations {
                *counts
                    .entry(field_target_rank(&a, &b, &targets, &mut rng))
                    .or_default() += 1;
            }
            let majority = counts
                .iter()
                .max_by_key(|(r, c)| (**c, **r))
                .map(|(r, _)| *r)
                .unwrap();
            let field = majority == n - 1;
            sets += 1;
            controllable += usize::from(graph);
            if graph != field {
                disagreements.push(format!(
                    "instance {k}, S = all but x{}: graph {graph}, field {field}",
                    missing + 1
                ));
            }
        }
    }
    verdict(
        disagreements.is_empty(),
        format!(
            "{instances} patterns, {sets} target sets ({controllable} controllable), {} disagreements {:?}",
            disagreements.len(),
            disagreements.first()
        ),
    )
}

pub fn predicate_routes(instances: usize, seed: u64) -> Outcome {
    let mut rng = rng(seed);
    let mut disagreements = Vec::new();
    let (mut fo_true, mut fd_true) = (0, 0);
    for k in 0..instances {
        let n = rng.gen_range(2..=6);
        let pc = rng.gen_range(1..=3);
        let r = rng.gen_range(1..=3);
        let sys = random_diagonalizable_triple(&mut rng, n, pc, r);
        let spec = eigendecompose_diagonalizable(sys.a(), &p(), None).unwrap();
        let modal = modal_functional_observability(&sys, &spec, &p(), 0.0).unwrap();
        let fo = is_functionally_observable(&sys, &p()).unwrap().observable;
        let fd = is_functionally_detectable(&sys, &p(), 0.0).unwrap();
        let modal_fo = modal.iter().all(|e| e.modally_observable);
        let modal_fd = modal
            .iter()
            .filter(|e| e.unstable)
            .all(|e| e.modally_observable);
        fo_true += usize::from(fo);
        fd_true += usize::from(fd);
        if fo != modal_fo || fd != modal_fd {
            disagreements.push(format!(
                "instance {k}: FO {fo}/{modal_fo}, FD {fd}/{modal_fd}"
            ));
        }
    }
    verdict(
        disagreements.is_empty(),
        format!(
            "{instances} triples (FO true {fo_true}, FD true {fd_true}), {} disagreements {:?}",
            disagreements.len(),
            disagreements.first()
        ),
    )
}

/// `A = 0`, `C = I_2`, `F = [1, 1]`: each sensor alone leaves the functional
/// unobservable, together they observe it.
pub fn counterexample() -> (SystemTriple, PatternTriple) {
    let sys = SystemTriple::new(
        RealMatrix::zeros(2, 2),
        RealMatrix::identity(2, 2),
        matrix(1, 2, &[1.0, 1.0]),
    )
    .unwrap();
    let pattern = PatternTriple::new(
        PatternMatrix::empty(2, 2),
        PatternMatrix::identity(2),
        PatternMatrix::from_positions(1, 2, &[(0, 0), (0, 1)]).unwrap(),
    )
    .unwrap();
    (sys, pattern)
}
