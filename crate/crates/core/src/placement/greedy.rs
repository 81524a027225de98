//! Greedy sensor selection and exhaustive optima.

use serde::{Deserialize, Serialize};

use super::objectives::{objective_f, objective_fd, objective_gbar, unstable_functional_rank};
use crate::error::{Error, Result};
use crate::functional::SystemTriple;
use crate::numeric::linalg::{rank_unchecked, unit_scaled};
use crate::numeric::{eigendecompose_diagonalizable, RankPolicy, SpectralData};
use crate::structural::{generic_obs_rank, PatternTriple};

/// Largest candidate count accepted by [`brute_force_optimum`] by default.
pub const DEFAULT_MAX_BRUTE_FORCE: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlacementKind {
    NumericFo,
    StructuralSfo,
    NumericFd,
}

#[derive(Clone, Debug)]
enum Payload {
    Numeric(SystemTriple),
    Structural(PatternTriple),
    Detectability(SystemTriple, SpectralData),
}

/// A sensor-selection instance: the system, the candidate rows of its output
/// matrix and the settings its objective needs.
#[derive(Clone, Debug)]
pub struct PlacementProblem {
    payload: Payload,
    candidates: Vec<usize>,
    policy: RankPolicy,
    margin: f64,
}

impl PlacementProblem {
    /// Functional observability; the objective is `f`.
    pub fn numeric_fo(sys: SystemTriple, policy: RankPolicy) -> Self {
        let candidates = (0..sys.c().nrows()).collect();
        Self {
            payload: Payload::Numeric(sys),
            candidates,
            policy,
            margin: 0.0,
        }
    }

    /// Structural functional observability; the objective is `g-bar`.
    pub fn structural_sfo(triple: PatternTriple) -> Self {
        let candidates = (0..triple.c.nrows()).collect();
        Self {
            payload: Payload::Structural(triple),
            candidates,
            policy: RankPolicy::default(),
            margin: 0.0,
        }
    }

    /// Functional detectability; requires diagonalizable `A`.
    pub fn numeric_fd(sys: SystemTriple, policy: RankPolicy, margin: f64) -> Result<Self> {
        let spec = match eigendecompose_diagonalizable(sys.a(), &policy, None) {
            Ok(spec) => spec,
            Err(Error::NotDiagonalizable { condition }) => {
                return Err(Error::Unsupported(format!(
                    "detectability placement needs a diagonalizable A (eigenvector condition {condition:.3e})"
                )))
            }
            Err(e) => return Err(e),
        };
        let candidates = (0..sys.c().nrows()).collect();
        Ok(Self {
            payload: Payload::Detectability(sys, spec),
            candidates,
            policy,
            margin,
        })
    }

    /// Restricts the selection to the listed sensor rows.
    pub fn with_candidates(mut self, candidates: Vec<usize>) -> Result<Self> {
        let p = self.sensor_count();
        if candidates.is_empty() {
            return Err(Error::InvalidInput("candidate sensor set is empty".into()));
        }
        let mut sorted = candidates.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != candidates.len() {
            return Err(Error::InvalidInput(
                "candidate sensors contain duplicates".into(),
            ));
        }
        if let Some(&bad) = sorted.iter().find(|&&c| c >= p) {
            return Err(Error::InvalidInput(format!(
                "candidate sensor {bad} is out of range (p = {p})"
            )));
        }
        self.candidates = sorted;
        Ok(self)
    }

    pub fn kind(&self) -> PlacementKind {
        match self.payload {
            Payload::Numeric(_) => PlacementKind::NumericFo,
            Payload::Structural(_) => PlacementKind::StructuralSfo,
            Payload::Detectability(..) => PlacementKind::NumericFd,
        }
    }

    pub fn candidates(&self) -> &[usize] {
        &self.candidates
    }

    fn sensor_count(&self) -> usize {
        match &self.payload {
            Payload::Numeric(s) | Payload::Detectability(s, _) => s.c().nrows(),
            Payload::Structural(t) => t.c.nrows(),
        }
    }

    /// Objective value for a set of sensor rows.
    pub fn objective(&self, sensors: &[usize]) -> Result<usize> {
        match &self.payload {
            Payload::Numeric(sys) => objective_f(sys, sensors, &self.policy),
            Payload::Structural(t) => Ok(objective_gbar(t, sensors)),
            Payload::Detectability(sys, spec) => {
                objective_fd(sys, spec, sensors, &self.policy, self.margin)
            }
        }
    }

    /// The quantity inside the logarithm of the greedy guarantee:
    /// `rank F`, `grank O(A, F)` or the unstable part of `rank F`.
    pub fn bound_rank(&self) -> usize {
        match &self.payload {
            Payload::Numeric(sys) => rank_unchecked(&unit_scaled(sys.f()), &self.policy),
            Payload::Structural(t) => generic_obs_rank(&t.a, &t.f),
            Payload::Detectability(sys, spec) => {
                unstable_functional_rank(sys, spec, &self.policy, self.margin)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GainStep {
    pub sensor: usize,
    pub gain: i64,
    /// Objective value after adding `sensor`.
    pub objective: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub optimum: usize,
    pub greedy: usize,
    /// `(1 + ln max(rank, 1)) * optimum`.
    pub bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlacementResult {
    /// Sensors in the order greedy picked them.
    pub selected: Vec<usize>,
    pub gain_trace: Vec<GainStep>,
    pub initial_objective: usize,
    pub residual: usize,
    pub feasible: bool,
    pub bound_certificate: Option<BoundCertificate>,
}

/// Repeatedly adds the candidate that lowers the objective most, smallest
/// index first on ties, until the objective reaches zero.
///
/// A step may have zero gain: the objectives are monotone but not always
/// supermodular, so a sensor that helps only in combination with a later one
/// can be the best available move.
pub fn greedy_place(problem: &PlacementProblem) -> Result<PlacementResult> {
    let initial = problem.objective(&[])?;
    let full = problem.objective(problem.candidates())?;
    if full > 0 {
        return Ok(PlacementResult {
            selected: problem.candidates().to_vec(),
            gain_trace: Vec::new(),
            initial_objective: initial,
            residual: full,
            feasible: false,
            bound_certificate: None,
        });
    }
    let mut selected: Vec<usize> = Vec::new();
    let mut trace = Vec::new();
    let mut current = initial;
    while current > 0 {
        let mut best: Option<(usize, usize)> = None;
        for &cand in problem
            .candidates()
            .iter()
            .filter(|c| !selected.contains(c))
        {
            let mut trial = selected.clone();
            trial.push(cand);
            let value = problem.objective(&trial)?;
            if best.is_none_or(|(_, v)| value < v) {
                best = Some((cand, value));
            }
        }
        // the full candidate set reaches zero, so some candidate is left
        let (sensor, value) = best.expect("feasible problem ran out of candidates");
        trace.push(GainStep {
            sensor,
            gain: current as i64 - value as i64,
            objective: value,
        });
        selected.push(sensor);
        current = value;
    }
    Ok(PlacementResult {
        selected,
        gain_trace: trace,
        initial_objective: initial,
        residual: 0,
        feasible: true,
        bound_certificate: None,
    })
}

/// Size of the smallest candidate subset with objective zero, or `None` when
/// even the full set fails.
pub fn brute_force_optimum(problem: &PlacementProblem, max_p: usize) -> Result<Option<usize>> {
    let cands = problem.candidates();
    if cands.len() > max_p {
        return Err(Error::Unsupported(format!(
            "exhaustive search over {} candidates exceeds the limit of {max_p}",
            cands.len()
        )));
    }
    let p = cands.len();
    let mut by_size: Vec<Vec<u32>> = vec![Vec::new(); p + 1];
    for mask in 0u32..(1u32 << p) {
        by_size[mask.count_ones() as usize].push(mask);
    }
    for (size, masks) in by_size.iter().enumerate() {
        for &mask in masks {
            let subset: Vec<usize> = (0..p)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| cands[i])
                .collect();
            if problem.objective(&subset)? == 0 {
                return Ok(Some(size));
            }
        }
    }
    Ok(None)
}

/// Greedy placement plus a check of the logarithmic approximation guarantee
/// against the exhaustive optimum.
pub fn greedy_with_certificate(
    problem: &PlacementProblem,
    max_p: usize,
) -> Result<PlacementResult> {
    let mut result = greedy_place(problem)?;
    if !result.feasible {
        return Ok(result);
    }
    let optimum = brute_force_optimum(problem, max_p)?.expect("greedy found a feasible set");
    let factor = 1.0 + (problem.bound_rank().max(1) as f64).ln();
    let bound = factor * optimum as f64;
    let greedy = result.selected.len();
    result.bound_certificate = Some(BoundCertificate {
        optimum,
        greedy,
        bound,
        holds: greedy as f64 <= bound + 1e-9,
    });
    Ok(result)
}
