//! The unperturbed field, the piecewise polynomial perturbation and the
//! assembled regularized / non-smooth systems.

mod field;
mod perturbation;
mod system;
mod transition;

pub use field::{AdmissibilityReport, CylinderField, HTerm, Homogenization};
pub use perturbation::{Component, Perturbation, Poly3, Side};
pub use system::{FieldMode, SigmaClass, SigmaPoint, SystemConfig, TANGENCY_TOL};
pub use transition::TransitionFunction;
