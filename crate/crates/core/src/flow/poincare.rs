//! The return map on `{y = 0, x > 0}` restricted to the perturbed invariant
//! cylinder.
//!
//! The cylinder is repelling (multiplier `e^{4π}` per turn), so a forward
//! orbit started on `r = 1` is thrown off it by the `O(ε)` offset of the
//! perturbed cylinder and diverges within a few turns. Backwards in time the
//! cylinder attracts. Starting at `(1, 0, z_s)` and following the flow
//! backwards through `K` section returns gives points `w_1, …, w_K` that lie
//! on the invariant cylinder up to `ε·e^{−4π(K−1)}`, and since they belong to
//! one orbit the forward map sends `w_K` to `w_{K−1}`. With `u(z_s)` and
//! `v(z_s)` their heights, `P(u(z_s)) = v(z_s)`.

use serde::{Deserialize, Serialize};

use super::trajectory::{run, Crossing, Stop, TimeDirection, Trajectory};
use crate::error::{Error, Result};
use crate::model::{FieldMode, SystemConfig};
use crate::ode::OdeOptions;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoincareOptions {
    pub ode: OdeOptions,
    /// Reverse turns `K` before the orbit is read off.
    pub turns: usize,
    /// Fixed-point tolerance on `|P(z) − z|`.
    pub tol: f64,
    /// Newton also requires its last correction below `xtol · max(1, |z|)`,
    /// unless the residual has stopped decreasing.
    pub xtol: f64,
    pub max_iterations: usize,
    /// Largest allowed distance of a Newton iterate from the initial guess.
    pub search_radius: f64,
}

impl Default for PoincareOptions {
    fn default() -> Self {
        Self {
            ode: OdeOptions::tol(1e-12, 1e-14),
            turns: 3,
            tol: 1e-10,
            xtol: 1e-12,
            max_iterations: 50,
            search_radius: 10.0,
        }
    }
}

impl PoincareOptions {
    pub fn with_ode(ode: OdeOptions) -> Self {
        Self {
            ode,
            ..Self::default()
        }
    }
}

/// Below this `|F'|` the return map is treated as flat.
pub const FLAT_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoincareResult {
    pub z_star: f64,
    pub residual: f64,
    pub iterations: usize,
    pub epsilon: f64,
    pub delta: f64,
    /// `dP/dz` at `z_star` by central differences.
    pub multiplier_estimate: f64,
    /// Start height of the reverse run that ends on the cycle.
    pub seed: f64,
    /// Crossings of the reverse run, all classified.
    pub crossings: Vec<Crossing>,
}

impl PoincareResult {
    pub fn all_sewing(&self) -> bool {
        self.crossings.iter().all(|c| c.class == crate::model::SigmaClass::Sewing)
    }
}

struct Manifold {
    u: f64,
    v: f64,
    traj: Trajectory,
}

fn manifold_point(cfg: &SystemConfig, z_s: f64, mode: FieldMode, opts: &PoincareOptions) -> Result<Manifold> {
    if opts.turns < 2 {
        return Err(Error::invalid("turns", format!("need at least 2, got {}", opts.turns)));
    }
    let traj = run(
        cfg,
        [1.0, 0.0, z_s],
        mode,
        TimeDirection::Reverse,
        Stop::Returns(opts.turns),
        opts.ode,
    )?;
    let hits: Vec<f64> = traj.section_returns().map(|c| c.state[2]).collect();
    let k = opts.turns;
    Ok(Manifold {
        u: hits[k - 1],
        v: hits[k - 2],
        traj,
    })
}

/// `P(z)`: forward return height of the cylinder orbit through height `z`.
pub fn poincare_map(cfg: &SystemConfig, z: f64, mode: FieldMode) -> Result<f64> {
    poincare_map_with(cfg, z, mode, &PoincareOptions::default())
}

pub fn poincare_map_with(cfg: &SystemConfig, z: f64, mode: FieldMode, opts: &PoincareOptions) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::invalid("z", format!("must be finite, got {z}")));
    }
    // secant on u(z_s) = z
    let mut a = z;
    let ma = manifold_point(cfg, a, mode, opts)?;
    let mut fa = ma.u - z;
    let mut best = (fa.abs(), ma.v);
    if fa == 0.0 {
        return Ok(ma.v);
    }
    let mut b = z - fa;
    for _ in 0..20 {
        let mb = manifold_point(cfg, b, mode, opts)?;
        let fb = mb.u - z;
        if fb.abs() < best.0 {
            best = (fb.abs(), mb.v);
        }
        if fb.abs() <= 1e-15 * z.abs().max(1.0) || fb == fa {
            break;
        }
        let next = b - fb * (b - a) / (fb - fa);
        a = b;
        fa = fb;
        b = next;
    }
    Ok(best.1)
}

/// Newton on `P(z) − z = 0` started from `z_guess`.
pub fn find_fixed_point(cfg: &SystemConfig, z_guess: f64, mode: FieldMode) -> Result<PoincareResult> {
    find_fixed_point_with(cfg, z_guess, mode, &PoincareOptions::default())
}

/// Works in the start height `z_s` of the reverse run: the orbit is a cycle
/// iff `u(z_s) = v(z_s)`, and then `z* = u`. The derivative `F'` of
/// `F = P − id` is `v'/u' − 1`.
pub fn find_fixed_point_with(
    cfg: &SystemConfig,
    z_guess: f64,
    mode: FieldMode,
    opts: &PoincareOptions,
) -> Result<PoincareResult> {
    if !z_guess.is_finite() {
        return Err(Error::invalid("z_guess", format!("must be finite, got {z_guess}")));
    }
    let mut z_s = z_guess;
    let mut residual = f64::INFINITY;
    let mut previous = f64::INFINITY;
    for it in 1..=opts.max_iterations {
        let m0 = manifold_point(cfg, z_s, mode, opts)?;
        let h = (1e-6f64).max(1e-6 * z_s.abs());
        let mp = manifold_point(cfg, z_s + h, mode, opts)?;
        let mm = manifold_point(cfg, z_s - h, mode, opts)?;
        let du = (mp.u - mm.u) / (2.0 * h);
        let dv = (mp.v - mm.v) / (2.0 * h);
        residual = (m0.v - m0.u).abs();
        let dg = dv - du;
        if !(du.abs() > 0.0) {
            return Err(Error::FlatReturnMap { derivative: du });
        }
        let fprime = dg / du;
        let correction = if dg != 0.0 { (m0.v - m0.u) / dg } else { f64::INFINITY };
        let small_step = correction.abs() < opts.xtol * z_s.abs().max(1.0);
        let stalled = residual >= previous;
        if residual < opts.tol && (small_step || stalled) {
            return Ok(PoincareResult {
                z_star: m0.u,
                residual,
                iterations: it,
                epsilon: cfg.epsilon,
                delta: cfg.phi.delta(),
                multiplier_estimate: 1.0 + fprime,
                seed: z_s,
                crossings: m0.traj.crossings,
            });
        }
        if fprime.abs() < FLAT_TOL {
            return Err(Error::FlatReturnMap { derivative: fprime });
        }
        previous = residual;
        z_s -= correction;
        if !z_s.is_finite() || (z_s - z_guess).abs() > opts.search_radius {
            return Err(Error::NewtonNonConvergence {
                iterations: it,
                residual,
            });
        }
    }
    Err(Error::NewtonNonConvergence {
        iterations: opts.max_iterations,
        residual,
    })
}

/// One period of the converged cycle in forward time, from the section point
/// at height `z_star` back to itself.
pub fn cycle_trajectory(
    cfg: &SystemConfig,
    result: &PoincareResult,
    mode: FieldMode,
    opts: &PoincareOptions,
) -> Result<Trajectory> {
    let m = manifold_point(cfg, result.seed, mode, opts)?;
    let returns: Vec<&Crossing> = m.traj.section_returns().collect();
    let k = opts.turns;
    let (t_start, t_end) = (returns[k - 2].t, returns[k - 1].t);
    let mut out = Trajectory::default();
    for &(t, s) in m.traj.samples.iter().rev() {
        if t >= t_start && t <= t_end {
            out.samples.push((t_end - t, s));
        }
    }
    for c in m.traj.crossings.iter().rev() {
        if c.t > t_start && c.t <= t_end {
            out.crossings.push(Crossing { t: t_end - c.t, ..*c });
        }
    }
    Ok(out)
}

/// `|P_δ(z) − P(z)|` for a list of regularization widths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularizationReport {
    pub z: f64,
    pub p_nonsmooth: f64,
    pub deltas: Vec<f64>,
    pub p_regularized: Vec<f64>,
    pub differences: Vec<f64>,
}

impl RegularizationReport {
    pub fn strictly_decreasing(&self) -> bool {
        self.differences.windows(2).all(|w| w[1] < w[0])
    }
}

pub fn regularization_consistency(cfg: &SystemConfig, z: f64, deltas: &[f64]) -> Result<RegularizationReport> {
    regularization_consistency_with(cfg, z, deltas, &PoincareOptions::default())
}

pub fn regularization_consistency_with(
    cfg: &SystemConfig,
    z: f64,
    deltas: &[f64],
    opts: &PoincareOptions,
) -> Result<RegularizationReport> {
    let p_nonsmooth = poincare_map_with(cfg, z, FieldMode::Nonsmooth, opts)?;
    let mut p_regularized = Vec::with_capacity(deltas.len());
    for &d in deltas {
        let c = cfg.with_phi(crate::model::TransitionFunction::new(d)?);
        p_regularized.push(poincare_map_with(&c, z, FieldMode::Regularized, opts)?);
    }
    let differences = p_regularized.iter().map(|p| (p - p_nonsmooth).abs()).collect();
    Ok(RegularizationReport {
        z,
        p_nonsmooth,
        deltas: deltas.to_vec(),
        p_regularized,
        differences,
    })
}
