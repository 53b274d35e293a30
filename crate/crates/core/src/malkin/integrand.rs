use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Side, SystemConfig};
use crate::quadrature::{self, QuadOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MalkinMode {
    /// Both sides, blended with `φ_δ(sin θ)`; `δ = 0` uses `sgn(sin θ)`.
    NonsmoothRegularized,
    /// `g⁺` on both sides; the minus-side coefficients are ignored.
    Smooth,
}

/// The z-component of the first-order perturbation in the angle-as-time
/// form, evaluated along the unperturbed orbit through `(1, 0, z)`:
///
/// ```text
/// G(θ) = h·(−cos θ·Q + sin θ·P) + R,
/// (P, Q, R) = (g⁺+g⁻)/2 + φ_δ(sin θ)·(g⁺−g⁻)/2  at  ς = (cos θ, sin θ, z + ∫₀^θ h)
/// ```
///
/// Its integral over one turn is the Malkin function, normalized so that
/// the return map satisfies `P(z) − z = ε·M(z) + O(ε²)`.
pub fn malkin_integrand(cfg: &SystemConfig, theta: f64, z: f64) -> Result<f64> {
    integrand(cfg, theta, z, MalkinMode::NonsmoothRegularized)
}

pub fn smooth_integrand(cfg: &SystemConfig, theta: f64, z: f64) -> Result<f64> {
    integrand(cfg, theta, z, MalkinMode::Smooth)
}

pub(crate) fn integrand(cfg: &SystemConfig, theta: f64, z: f64, mode: MalkinMode) -> Result<f64> {
    let (s, c) = theta.sin_cos();
    let h = cfg.field.on_circle(theta);
    let zeta = z + cfg.field.z_primitive(theta)?;
    let gp = cfg.pert.eval_side(Side::Plus, c, s, zeta);
    let [p, q, r] = match mode {
        MalkinMode::Smooth => gp,
        MalkinMode::NonsmoothRegularized => {
            let gm = cfg.pert.eval_side(Side::Minus, c, s, zeta);
            let blend = cfg.phi.eval(s);
            let mut g = [0.0; 3];
            for i in 0..3 {
                g[i] = 0.5 * (gp[i] + gm[i]) + blend * 0.5 * (gp[i] - gm[i]);
            }
            g
        }
    };
    Ok(h * (-c * q + s * p) + r)
}

/// Panel boundaries for the Malkin quadrature: the quarter turns plus the
/// angles where `φ_δ(sin θ)` is only continuous.
pub fn breakpoints(cfg: &SystemConfig, mode: MalkinMode) -> Vec<f64> {
    let mut pts = vec![0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2, TAU];
    if mode == MalkinMode::NonsmoothRegularized {
        pts.extend(cfg.phi.kink_angles());
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// `M(z)` by adaptive quadrature; returns `(value, error estimate)`.
pub fn compute_malkin(cfg: &SystemConfig, z: f64, mode: MalkinMode, tol: f64) -> Result<(f64, f64)> {
    if !(tol > 0.0) {
        return Err(Error::invalid("quad_tol", format!("must be > 0, got {tol}")));
    }
    let pts = breakpoints(cfg, mode);
    // the integrand is infallible for finite θ: z_primitive only fails on NaN input
    let f = |theta: f64| integrand(cfg, theta, z, mode).unwrap_or(f64::NAN);
    let r = quadrature::integrate(f, &pts, QuadOptions::with_tol(tol))?;
    if !r.value.is_finite() {
        return Err(Error::invalid("malkin", format!("non-finite integral at z = {z}")));
    }
    Ok((r.value, r.error))
}
