//! The Malkin bifurcation function and what is derived from it.
//!
//! `M(z)` is a polynomial of degree at most `s = max(m, n, p)` in the height
//! `z` of the cylinder orbit; its simple zeros are the orbits that survive as
//! limit cycles for small `ε`.

mod integrand;
mod polynomial;
mod probe;
pub mod reference;

pub use integrand::{breakpoints, compute_malkin, malkin_integrand, smooth_integrand, MalkinMode};
pub use polynomial::{
    chebyshev_nodes, extract_polynomial, find_roots, CycleCandidate, MalkinPolynomial, HELD_OUT_Z,
    MAX_CONDITION, ROOT_TOL, SIMPLE_ROOT_TOL, ZERO_TOL,
};
pub use probe::{
    degree_probe, degree_table, random_perturbation, DegreeTable, MonomialConvention, TableCell,
    TableOptions, MAX_REDRAWS, NONZERO_REL, PROBE_TOL, STRUCTURAL_REL,
};
