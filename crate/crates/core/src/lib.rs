//! Limit cycles bifurcating from a cylinder of periodic orbits under a
//! piecewise-polynomial, possibly discontinuous, perturbation.
//!
//! The unperturbed system is
//!
//! ```text
//! x' = -y + x (x^2 + y^2 - 1)
//! y' =  x + y (x^2 + y^2 - 1)
//! z' =  h(x, y)
//! ```
//!
//! whose cylinder `x^2 + y^2 = 1` is filled with 2π-periodic orbits when
//! `h` has zero mean on the unit circle. The perturbation is `ε g⁺` above the
//! switching plane `y = 0` and `ε g⁻` below it.
//!
//! The crate is organised in four layers:
//!
//! * [`model`]: the field `h`, the polynomial perturbation, the transition
//!   function and the assembled regularized / non-smooth vector fields.
//! * [`malkin`]: the Malkin bifurcation function, its polynomial coefficients
//!   in `z`, simple-root isolation and generic-degree probing.
//! * [`flow`]: event-driven integration across the switching plane, the
//!   Poincaré return map, Newton fixed points and the monodromy matrix.
//! * [`cli`]: configuration files, result files and the command dispatch used
//!   by the `malkin-cylinder` binary.
//!
//! [`quadrature`] and [`ode`] are the numerical kernels underneath.

pub mod cli;
pub mod error;
pub mod flow;
pub mod malkin;
pub mod model;
pub mod ode;
pub mod quadrature;

pub use error::{Error, Result};
pub use malkin::{CycleCandidate, MalkinMode, MalkinPolynomial};
pub use model::{
    CylinderField, FieldMode, HTerm, Perturbation, Side, SigmaClass, SystemConfig,
    TransitionFunction,
};
