use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::CylinderField;
use crate::ode::{self, OdeOptions};

/// Fundamental matrix of the variational equation along the cylinder after
/// one turn, in `(z, r)` coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonodromyReport {
    pub matrix: [[f64; 2]; 2],
    /// Real Floquet multipliers, ascending.
    pub eigenvalues: [f64; 2],
}

/// Integrates `Y' = [[0, A_h(θ)], [0, 2]] Y`, `Y(0) = I`, over `[0, 2π]`.
pub fn monodromy(field: &CylinderField) -> Result<MonodromyReport> {
    monodromy_with(field, OdeOptions::tol(1e-13, 1e-15))
}

pub fn monodromy_with(field: &CylinderField, opts: OdeOptions) -> Result<MonodromyReport> {
    let rhs = |t: f64, y: &[f64; 4]| -> Result<[f64; 4]> {
        // columns stored as (y11, y21, y12, y22)
        let a = field.a_h(t);
        Ok([a * y[1], 2.0 * y[1], a * y[3], 2.0 * y[3]])
    };
    let y = ode::solve(rhs, 0.0, [1.0, 0.0, 0.0, 1.0], TAU, opts)?;
    let matrix = [[y[0], y[2]], [y[1], y[3]]];
    Ok(MonodromyReport {
        matrix,
        eigenvalues: eigenvalues(matrix)?,
    })
}

fn eigenvalues(m: [[f64; 2]; 2]) -> Result<[f64; 2]> {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = tr * tr - 4.0 * det;
    if disc < 0.0 {
        return Err(Error::ComplexMultipliers { discriminant: disc });
    }
    let sq = disc.sqrt();
    // avoid cancellation in the small root
    let big = 0.5 * (tr + tr.signum() * sq);
    let small = if big != 0.0 { det / big } else { 0.5 * (tr - sq) };
    let (a, b) = if small <= big { (small, big) } else { (big, small) };
    Ok([a, b])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::HTerm;
    use std::f64::consts::PI;

    #[test]
    fn catalog_fields() {
        let e4pi = (4.0 * PI).exp();
        for field in [CylinderField::x_over_r(), CylinderField::xy_over_r2()] {
            let r = monodromy(&field).unwrap();
            assert!((r.eigenvalues[0] - 1.0).abs() < 1e-8);
            assert!((r.eigenvalues[1] / e4pi - 1.0).abs() < 1e-8);
            assert!(r.matrix[0][1].abs() < 1e-10);
            assert_eq!(r.matrix[1][0], 0.0);
        }
    }

    #[test]
    fn raw_probe_off_diagonal() {
        // A_h = cos θ ⇒ ∫₀^{2π} cos θ e^{2θ} dθ = (2/5)(e^{4π} − 1)
        let field = CylinderField::raw(vec![HTerm::new(1.0, 1, 0)]).unwrap();
        let r = monodromy(&field).unwrap();
        let expected = 0.4 * ((4.0 * PI).exp() - 1.0);
        assert!((r.matrix[0][1] / expected - 1.0).abs() < 1e-8);
    }

    #[test]
    fn eigenvalue_helper() {
        assert_eq!(eigenvalues([[2.0, 0.0], [0.0, 3.0]]).unwrap(), [2.0, 3.0]);
        assert!(eigenvalues([[0.0, -1.0], [1.0, 0.0]]).is_err());
    }
}
