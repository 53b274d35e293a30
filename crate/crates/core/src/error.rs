use thiserror::Error;

use crate::model::SigmaClass;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field is singular on the z-axis: (x, y) = ({x}, {y})")]
    ZAxis { x: f64, y: f64 },

    #[error("invalid {field}: {reason}")]
    Invalid { field: String, reason: String },

    #[error(
        "quadrature did not converge: estimated error {estimate:e} exceeds tolerance {tol:e} \
         after {subdivisions} subdivisions"
    )]
    QuadratureNonConvergence {
        estimate: f64,
        tol: f64,
        subdivisions: usize,
    },

    #[error("interpolation system is ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("held-out interpolation residual {residual:e} exceeds {limit:e}")]
    HeldOutResidual { residual: f64, limit: f64 },

    #[error("identically zero: continuum of zeros, no isolated cycle")]
    IdenticallyZero,

    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },

    #[error("maximum number of integration steps ({steps}) exceeded at t = {t}")]
    TooManySteps { steps: usize, t: f64 },

    #[error("orbit left the sewing regime: {class:?} crossing at t = {t}, state {state:?}")]
    LeftSewingRegime {
        class: SigmaClass,
        t: f64,
        state: [f64; 3],
    },

    #[error("tangential contact with the switching plane at t = {t}, state {state:?}")]
    Tangency { t: f64, state: [f64; 3] },

    #[error("no return to the section within {periods} periods")]
    NoReturn { periods: f64 },

    #[error("Newton iteration did not converge after {iterations} iterations (|F| = {residual:e})")]
    NewtonNonConvergence { iterations: usize, residual: f64 },

    #[error("return map is locally the identity (|F'| = {derivative:e}); epsilon too small")]
    FlatReturnMap { derivative: f64 },

    #[error("complex monodromy eigenvalues (discriminant {discriminant:e})")]
    ComplexMultipliers { discriminant: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
