use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::integrand::{compute_malkin, MalkinMode};
use crate::error::{Error, Result};
use crate::model::SystemConfig;

/// Interpolation systems above this 2-norm condition number are rejected.
pub const MAX_CONDITION: f64 = 1e8;
/// Extra point used to validate the interpolant.
pub const HELD_OUT_Z: f64 = 0.61803;
/// Below this every coefficient counts as zero.
pub const ZERO_TOL: f64 = 1e-12;
/// Roots with `|M'|` at or below this are not reported.
pub const SIMPLE_ROOT_TOL: f64 = 1e-8;
pub const ROOT_TOL: f64 = 1e-12;

/// `M(z) = I₀ + I₁ z + … + I_s z^s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MalkinPolynomial {
    pub coeffs: Vec<f64>,
    pub delta: f64,
    pub mode: MalkinMode,
    pub quad_error: f64,
}

/// A simple zero of `M`, i.e. a cylinder orbit `ξ(z₀) = (1, 0, z₀)` that
/// persists as a limit cycle for small `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleCandidate {
    pub z0: f64,
    pub m_derivative: f64,
    pub delta: f64,
    pub xi: [f64; 3],
}

impl MalkinPolynomial {
    pub fn new(coeffs: Vec<f64>, delta: f64, mode: MalkinMode) -> Self {
        Self {
            coeffs,
            delta,
            mode,
            quad_error: 0.0,
        }
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * z + c)
    }

    pub fn derivative(&self, z: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (j, &c)| acc * z + j as f64 * c)
    }

    /// `s = max(m, n, p)`.
    pub fn nominal_degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Largest `j` with `|I_j| > rel · max|I_k|`; `None` when every
    /// coefficient is below [`ZERO_TOL`].
    pub fn degree(&self, rel: f64) -> Option<usize> {
        let max = self.max_abs();
        if max < ZERO_TOL {
            return None;
        }
        self.coeffs.iter().rposition(|c| c.abs() > rel * max)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn is_identically_zero(&self) -> bool {
        self.max_abs() < ZERO_TOL
    }

    /// `1 + max_{j<d} |I_j / I_d|` for the effective degree `d`.
    pub fn cauchy_bound(&self) -> Option<f64> {
        let d = self.effective_degree()?;
        let lead = self.coeffs[d];
        Some(1.0 + self.coeffs[..d].iter().fold(0.0, |m: f64, c| m.max((c / lead).abs())))
    }

    fn effective_degree(&self) -> Option<usize> {
        let max = self.max_abs();
        if max < ZERO_TOL {
            return None;
        }
        let cut = ZERO_TOL.max(1e-9 * max);
        self.coeffs.iter().rposition(|c| c.abs() > cut)
    }
}

/// The `k` Chebyshev points of the first kind on `[−1, 1]`, decreasing.
pub fn chebyshev_nodes(k: usize) -> Vec<f64> {
    (0..k)
        .map(|i| ((2 * i + 1) as f64 * PI / (2 * k) as f64).cos())
        .collect()
}

/// Samples `M` at `s+1` Chebyshev nodes and solves the Vandermonde system
/// for the monomial coefficients.
pub fn extract_polynomial(cfg: &SystemConfig, mode: MalkinMode, tol: f64) -> Result<MalkinPolynomial> {
    let s = cfg.pert.max_degree() as usize;
    let nodes = chebyshev_nodes(s + 1);
    let mut values = Vec::with_capacity(s + 1);
    let mut quad_error: f64 = 0.0;
    for &z in &nodes {
        let (v, e) = compute_malkin(cfg, z, mode, tol)?;
        values.push(v);
        quad_error = quad_error.max(e);
    }

    let v = DMatrix::from_fn(s + 1, s + 1, |i, j| nodes[i].powi(j as i32));
    let sv = v.singular_values();
    let condition = sv.max() / sv.min();
    if !(condition < MAX_CONDITION) {
        return Err(Error::IllConditioned { condition });
    }
    let rhs = DVector::from_vec(values);
    let coeffs = v
        .lu()
        .solve(&rhs)
        .ok_or(Error::IllConditioned { condition: f64::INFINITY })?;

    let poly = MalkinPolynomial {
        coeffs: coeffs.iter().copied().collect(),
        delta: cfg.phi.delta(),
        mode,
        quad_error,
    };

    let (check, _) = compute_malkin(cfg, HELD_OUT_Z, mode, tol)?;
    let residual = (poly.eval(HELD_OUT_Z) - check).abs();
    let limit = 10.0 * tol;
    if !(residual < limit) {
        return Err(Error::HeldOutResidual { residual, limit });
    }
    Ok(poly)
}

/// Simple real roots of `poly` in `[−R, R]`, `R` defaulting to the Cauchy bound.
pub fn find_roots(poly: &MalkinPolynomial, search_radius: Option<f64>) -> Result<Vec<CycleCandidate>> {
    if poly.is_identically_zero() {
        return Err(Error::IdenticallyZero);
    }
    if let Some(r) = search_radius {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::invalid("search_radius", format!("must be positive and finite, got {r}")));
        }
    }
    let d = match poly.effective_degree() {
        Some(0) | None => return Ok(Vec::new()),
        Some(d) => d,
    };
    let radius = match search_radius {
        Some(r) => r,
        None => poly.cauchy_bound().expect("nonzero polynomial has a bound"),
    };

    let intervals = 64 * (poly.nominal_degree() + 1);
    let grid: Vec<f64> = (0..=intervals)
        .map(|i| -radius + 2.0 * radius * i as f64 / intervals as f64)
        .collect();
    let vals: Vec<f64> = grid.iter().map(|&z| poly.eval(z)).collect();

    let mut roots: Vec<f64> = Vec::new();
    for i in 0..intervals {
        let (a, b) = (grid[i], grid[i + 1]);
        let (fa, fb) = (vals[i], vals[i + 1]);
        if fa == 0.0 {
            roots.push(a);
        } else if fa * fb < 0.0 {
            roots.push(refine(poly, a, b));
        }
    }
    if vals[intervals] == 0.0 {
        roots.push(grid[intervals]);
    }

    let mut out: Vec<CycleCandidate> = Vec::new();
    for z0 in roots {
        let m_derivative = poly.derivative(z0);
        if m_derivative.abs() <= SIMPLE_ROOT_TOL {
            continue;
        }
        if out.last().is_some_and(|c| (c.z0 - z0).abs() <= 1e-12 * (1.0 + z0.abs())) {
            continue;
        }
        out.push(CycleCandidate {
            z0,
            m_derivative,
            delta: poly.delta,
            xi: [1.0, 0.0, z0],
        });
    }
    debug_assert!(out.len() <= d);
    Ok(out)
}

/// Bisection on a sign-change bracket, then Newton from the midpoint while
/// it stays inside the bracket.
fn refine(poly: &MalkinPolynomial, mut a: f64, mut b: f64) -> f64 {
    let mut fa = poly.eval(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if !(m > a && m < b) {
            break;
        }
        let fm = poly.eval(m);
        if fm == 0.0 {
            return m;
        }
        if fa * fm < 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
        if (b - a) < 1e-10 * (1.0 + a.abs()) {
            break;
        }
    }
    let mut z = 0.5 * (a + b);
    for _ in 0..20 {
        let f = poly.eval(z);
        if f.abs() < ROOT_TOL {
            break;
        }
        let df = poly.derivative(z);
        if df == 0.0 {
            break;
        }
        let next = z - f / df;
        if !(next >= a && next <= b) || next == z {
            break;
        }
        z = next;
    }
    z
}
