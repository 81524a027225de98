//! Random realizations of pattern matrices, used as generic-rank oracles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::pattern::{PatternMatrix, PatternTriple};
use crate::error::Result;
use crate::functional::{is_functionally_observable, SystemTriple};
use crate::numeric::{prime_field_rank, PrimeFieldMatrix, RankPolicy, RealMatrix, FIELD_PRIME};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Free positions get independent uniform residues in `[1, p)`.
pub fn field_realization<R: Rng + ?Sized>(pm: &PatternMatrix, rng: &mut R) -> PrimeFieldMatrix {
    let mut m = PrimeFieldMatrix::zeros(pm.nrows(), pm.ncols());
    for &(r, c) in pm.support() {
        m.set(r, c, rng.gen_range(1..FIELD_PRIME));
    }
    m
}

/// Free positions get independent values with magnitude in `[0.5, 1.5]` and a
/// random sign.
pub fn real_realization<R: Rng + ?Sized>(pm: &PatternMatrix, rng: &mut R) -> RealMatrix {
    let mut m = RealMatrix::zeros(pm.nrows(), pm.ncols());
    for &(r, c) in pm.support() {
        let v: f64 = rng.gen_range(0.5..=1.5);
        m[(r, c)] = if rng.gen_bool(0.5) { v } else { -v };
    }
    m
}

pub fn real_triple_realization<R: Rng + ?Sized>(
    triple: &PatternTriple,
    rng: &mut R,
) -> SystemTriple {
    let a = real_realization(&triple.a, rng);
    let c = real_realization(&triple.c, rng);
    let f = real_realization(&triple.f, rng);
    SystemTriple::new(a, c, f).expect("pattern triple dimensions are consistent")
}

/// Rank over GF(p) of the observability matrix of one random realization.
pub fn field_observability_rank<R: Rng + ?Sized>(
    a: &PatternMatrix,
    c: &PatternMatrix,
    rng: &mut R,
) -> usize {
    let af = field_realization(a, rng);
    let cf = field_realization(c, rng);
    prime_field_rank(
        &af.observability(&cf)
            .expect("pattern dimensions are consistent"),
    )
}

/// Rank over GF(p) of the rows `targets` of `[B, AB, ..., A^{n-1}B]` for one
/// random realization.
pub fn field_target_rank<R: Rng + ?Sized>(
    a: &PatternMatrix,
    b: &PatternMatrix,
    targets: &[usize],
    rng: &mut R,
) -> usize {
    let af = field_realization(a, rng);
    let bf = field_realization(b, rng);
    // O(A^T, B^T) is the transposed controllability matrix; its columns are
    // the controllability rows.
    let obs = af
        .transpose()
        .observability(&bf.transpose())
        .expect("pattern dimensions are consistent");
    prime_field_rank(&obs.transpose().select_rows(targets))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericSample {
    pub trials: usize,
    pub functionally_observable: usize,
}

impl GenericSample {
    pub fn fraction_observable(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        self.functionally_observable as f64 / self.trials as f64
    }
}

/// Counts how many of `trials` random real realizations are functionally
/// observable.
pub fn sample_functional_observability(
    triple: &PatternTriple,
    trials: usize,
    seed: u64,
    policy: &RankPolicy,
) -> Result<GenericSample> {
    let mut rng = seeded_rng(seed);
    let mut hits = 0;
    for _ in 0..trials {
        let sys = real_triple_realization(triple, &mut rng);
        if is_functionally_observable(&sys, policy)?.observable {
            hits += 1;
        }
    }
    Ok(GenericSample {
        trials,
        functionally_observable: hits,
    })
}
