//! Set functions over sensor subsets. Each is zero exactly when the selected
//! sensors achieve the corresponding property.

use crate::error::Result;
use crate::functional::{spectral_rank, SystemTriple};
use crate::numeric::linalg::{
    rank_unchecked, scaled_observability, to_complex, unit_scaled, vstack,
};
use crate::numeric::schur::{is_unstable, stability_tie_tolerance};
use crate::numeric::{RankPolicy, SpectralData};
use crate::structural::{generic_obs_rank, PatternTriple};

/// `rank [O(A, C_S); F] - rank O(A, C_S)`.
pub fn objective_f(sys: &SystemTriple, sensors: &[usize], policy: &RankPolicy) -> Result<usize> {
    let sub = sys.with_sensors(sensors);
    let o = scaled_observability(sub.a(), sub.c())?;
    let with_f = vstack(&o, &unit_scaled(sub.f()))?;
    Ok(rank_unchecked(&with_f, policy) - rank_unchecked(&o, policy))
}

/// `rank O(A, [C_S; F]) - rank O(A, C_S)`.
pub fn objective_fbar(sys: &SystemTriple, sensors: &[usize], policy: &RankPolicy) -> Result<usize> {
    let sub = sys.with_sensors(sensors);
    let o = scaled_observability(sub.a(), sub.c())?;
    let stacked_c = vstack(&unit_scaled(sub.c()), &unit_scaled(sub.f()))?;
    let o_f = scaled_observability(sub.a(), &stacked_c)?;
    Ok(rank_unchecked(&o_f, policy) - rank_unchecked(&o, policy))
}

/// `grank O(A, [C_S; F]) - grank O(A, C_S)`, two maximum-linking computations.
pub fn objective_gbar(triple: &PatternTriple, sensors: &[usize]) -> usize {
    let c = triple.c.select_rows(sensors);
    let with_f = c
        .vstack(&triple.f)
        .expect("triple columns already validated");
    generic_obs_rank(&triple.a, &with_f) - generic_obs_rank(&triple.a, &c)
}

/// Sum over eigenvalues with `Re(lambda) >= -margin` of
/// `rank [C_S T_i; F T_i] - rank C_S T_i` (diagonalizable `A`).
pub fn objective_fd(
    sys: &SystemTriple,
    spec: &SpectralData,
    sensors: &[usize],
    policy: &RankPolicy,
    margin: f64,
) -> Result<usize> {
    let sub = sys.with_sensors(sensors);
    let c = to_complex(&unit_scaled(sub.c()));
    let f = to_complex(&unit_scaled(sub.f()));
    let tie = stability_tie_tolerance(sys.a());
    let mut total = 0;
    for g in spec
        .groups
        .iter()
        .filter(|g| is_unstable(g.eigenvalue, margin, tie))
    {
        let ci = &c * &g.vectors;
        let fi = &f * &g.vectors;
        total += spectral_rank(&vstack(&ci, &fi)?, policy) - spectral_rank(&ci, policy);
    }
    Ok(total)
}

/// `rank F` restricted to the unstable eigenspaces: `sum rank F T_i` over
/// eigenvalues with `Re(lambda) >= -margin`.
pub fn unstable_functional_rank(
    sys: &SystemTriple,
    spec: &SpectralData,
    policy: &RankPolicy,
    margin: f64,
) -> usize {
    let f = to_complex(&unit_scaled(sys.f()));
    let tie = stability_tie_tolerance(sys.a());
    spec.groups
        .iter()
        .filter(|g| is_unstable(g.eigenvalue, margin, tie))
        .map(|g| spectral_rank(&(&f * &g.vectors), policy))
        .sum()
}
