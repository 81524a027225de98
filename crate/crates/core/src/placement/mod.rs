//! Minimal sensor placement: greedy selection with exhaustive validation, and
//! the closed-form design for diagonalizable systems.

pub mod design;
pub mod greedy;
pub mod objectives;

pub use design::{construct_min_c, min_sensor_count_diagonalizable, MinimalDesign};
pub use greedy::{
    brute_force_optimum, greedy_place, greedy_with_certificate, BoundCertificate, GainStep,
    PlacementKind, PlacementProblem, PlacementResult, DEFAULT_MAX_BRUTE_FORCE,
};
pub use objectives::{
    objective_f, objective_fbar, objective_fd, objective_gbar, unstable_functional_rank,
};
