//! Orbits of the perturbed system, the return map and its fixed points.

mod monodromy;
mod poincare;
mod trajectory;

pub use monodromy::{monodromy, monodromy_with, MonodromyReport};
pub use poincare::{
    cycle_trajectory, find_fixed_point, find_fixed_point_with, poincare_map, poincare_map_with,
    regularization_consistency, regularization_consistency_with, PoincareOptions, PoincareResult,
    RegularizationReport, FLAT_TOL,
};
pub use trajectory::{
    integrate, integrate_reverse, Crossing, Direction, TimeDirection, Trajectory, EVENT_TOL,
    MAX_RETURN_PERIODS,
};
