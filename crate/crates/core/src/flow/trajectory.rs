use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{FieldMode, Side, SigmaClass, SystemConfig};
use crate::ode::{Dopri5, OdeOptions, Step};

/// Crossings are located to `|y|` below this.
pub const EVENT_TOL: f64 = 1e-12;
/// A return to the section must happen within this many periods.
pub const MAX_RETURN_PERIODS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeDirection {
    Forward,
    Reverse,
}

impl TimeDirection {
    fn sign(self) -> f64 {
        match self {
            TimeDirection::Forward => 1.0,
            TimeDirection::Reverse => -1.0,
        }
    }
}

/// Sign of the physical `ẏ` at a crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Upward,
    Downward,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub t: f64,
    pub state: [f64; 3],
    pub direction: Direction,
    pub class: SigmaClass,
}

impl Crossing {
    /// On `{y = 0, x > 0}` with physical `ẏ > 0`.
    pub fn is_section_return(&self) -> bool {
        self.state[0] > 0.0 && self.direction == Direction::Upward
    }
}

/// Samples at accepted steps and located crossings of `y = 0`.
///
/// For reverse-time runs `t` is the elapsed reverse time, so the physical
/// time of a sample is `−t`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<(f64, [f64; 3])>,
    pub crossings: Vec<Crossing>,
}

impl Trajectory {
    pub fn final_state(&self) -> Option<[f64; 3]> {
        self.samples.last().map(|s| s.1)
    }

    pub fn section_returns(&self) -> impl Iterator<Item = &Crossing> {
        self.crossings.iter().filter(|c| c.is_section_return())
    }

    pub fn all_sewing(&self) -> bool {
        self.crossings.iter().all(|c| c.class == SigmaClass::Sewing)
    }

    fn push_sample(&mut self, t: f64, y: [f64; 3]) {
        if self.samples.last().is_none_or(|s| t > s.0) {
            self.samples.push((t, y));
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum Stop {
    Time(f64),
    /// After this many section returns.
    Returns(usize),
}

fn side_of(y: f64) -> Side {
    if y > 0.0 {
        Side::Plus
    } else {
        Side::Minus
    }
}

fn to_cartesian(p: &[f64; 3]) -> [f64; 3] {
    let (s, c) = p[1].sin_cos();
    [p[0] * c, p[0] * s, p[2]]
}

/// Physical field in `(r, θ, z)` on the current side (non-smooth) or the
/// regularized field.
fn physical(cfg: &SystemConfig, mode: FieldMode, side: Side, p: &[f64; 3]) -> Result<[f64; 3]> {
    match mode {
        FieldMode::Nonsmooth => cfg.eval_polar_side_field(p[0], p[1], p[2], side),
        FieldMode::Regularized => cfg.eval_polar_field(p[0], p[1], p[2], FieldMode::Regularized),
    }
}

fn height(p: &[f64; 3]) -> f64 {
    p[0] * p[1].sin()
}

/// Root of `y(t) = r sin θ` on a step whose `y` leaves `side` between `t0`
/// and `t1`. Returns the time and the polar state.
fn locate<F>(step: &Step<3>, side: Side, rhs: &mut F) -> Result<(f64, [f64; 3])>
where
    F: FnMut(f64, &[f64; 3]) -> Result<[f64; 3]>,
{
    let (mut lo, mut hi) = (step.t0, step.t1);
    let mut t = hi;
    let mut p = step.y1;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let pm = step.eval(mid);
        t = mid;
        p = pm;
        let y = height(&pm);
        if y.abs() < EVENT_TOL || !(mid > lo && mid < hi) {
            break;
        }
        if side.sign() * y > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // one Newton polish on the dense output
    let d = rhs(t, &p)?;
    let (sn, cs) = p[1].sin_cos();
    let ydot = d[0] * sn + p[0] * cs * d[1];
    if ydot != 0.0 {
        let tn = t - height(&p) / ydot;
        if tn >= step.t0 && tn <= step.t1 {
            let pn = step.eval(tn);
            if height(&pn).abs() <= height(&p).abs() {
                return Ok((tn, pn));
            }
        }
    }
    Ok((t, p))
}

/// Integration runs in cylindrical coordinates `(r, θ, z)`; samples and
/// crossings are reported in Cartesian coordinates.
pub(crate) fn run(
    cfg: &SystemConfig,
    state0: [f64; 3],
    mode: FieldMode,
    dir: TimeDirection,
    stop: Stop,
    opts: OdeOptions,
) -> Result<Trajectory> {
    if state0.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("state0", format!("must be finite, got {state0:?}")));
    }
    let r0 = state0[0].hypot(state0[1]);
    if r0 == 0.0 {
        return Err(Error::ZAxis {
            x: state0[0],
            y: state0[1],
        });
    }
    let ts = dir.sign();
    let t_end = match stop {
        Stop::Time(t) => {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::invalid("t_span", format!("must be finite and >= 0, got {t}")));
            }
            t
        }
        Stop::Returns(_) => f64::INFINITY,
    };
    let polar0 = [r0, state0[1].atan2(state0[0]), state0[2]];

    let mut side = if state0[1] != 0.0 {
        side_of(state0[1])
    } else {
        let p = cfg.classify_sigma_point(state0[0], state0[2]);
        match (mode, p.class) {
            (_, SigmaClass::Tangent) => {
                return Err(Error::Tangency { t: 0.0, state: state0 });
            }
            (FieldMode::Nonsmooth, SigmaClass::Sliding | SigmaClass::Escaping) => {
                return Err(Error::LeftSewingRegime {
                    class: p.class,
                    t: 0.0,
                    state: state0,
                });
            }
            _ => {
                let ydot = match mode {
                    FieldMode::Nonsmooth => p.xf,
                    FieldMode::Regularized => cfg.eval_field(state0[0], 0.0, state0[2], mode)?[1],
                };
                side_of(ts * ydot)
            }
        }
    };

    let mut traj = Trajectory::default();
    traj.push_sample(0.0, state0);
    if t_end == 0.0 {
        return Ok(traj);
    }

    let mut rhs_side = side;
    let mut ode = {
        let mut f = |_t: f64, p: &[f64; 3]| -> Result<[f64; 3]> {
            let v = physical(cfg, mode, rhs_side, p)?;
            Ok([ts * v[0], ts * v[1], ts * v[2]])
        };
        Dopri5::new(&mut f, 0.0, polar0, opts)?
    };
    let mut returns = 0;
    let mut last_return = 0.0;

    loop {
        let mut f = |_t: f64, p: &[f64; 3]| -> Result<[f64; 3]> {
            let v = physical(cfg, mode, rhs_side, p)?;
            Ok([ts * v[0], ts * v[1], ts * v[2]])
        };
        let step = ode.step(&mut f, t_end)?;
        if step.y1.iter().any(|v| !v.is_finite()) {
            return Err(Error::StepSizeUnderflow { t: step.t0 });
        }

        if side.sign() * height(&step.y1) < 0.0 {
            let (tc, pc) = locate(&step, side, &mut f)?;
            let sc = to_cartesian(&pc);
            let p = cfg.classify_sigma_point(sc[0], sc[2]);
            if mode == FieldMode::Nonsmooth {
                match p.class {
                    SigmaClass::Sewing => {}
                    SigmaClass::Tangent => return Err(Error::Tangency { t: tc, state: sc }),
                    c => {
                        return Err(Error::LeftSewingRegime {
                            class: c,
                            t: tc,
                            state: sc,
                        })
                    }
                }
            }
            let d = physical(cfg, mode, side, &pc)?;
            let (sn, cs) = pc[1].sin_cos();
            let ydot = d[0] * sn + pc[0] * cs * d[1];
            let crossing = Crossing {
                t: tc,
                state: sc,
                direction: if ydot > 0.0 { Direction::Upward } else { Direction::Downward },
                class: p.class,
            };
            traj.crossings.push(crossing);
            side = side.opposite();

            let done = if crossing.is_section_return() {
                returns += 1;
                last_return = tc;
                matches!(stop, Stop::Returns(k) if returns >= k)
            } else {
                false
            };
            traj.push_sample(tc, sc);
            if done {
                return Ok(traj);
            }
            if mode == FieldMode::Nonsmooth {
                rhs_side = side;
                let mut g = |_t: f64, p: &[f64; 3]| -> Result<[f64; 3]> {
                    let v = physical(cfg, mode, rhs_side, p)?;
                    Ok([ts * v[0], ts * v[1], ts * v[2]])
                };
                ode.reset(&mut g, tc, pc)?;
                continue;
            }
        }

        traj.push_sample(step.t1, to_cartesian(&step.y1));
        if ode.t() >= t_end {
            return Ok(traj);
        }
        if matches!(stop, Stop::Returns(_)) && ode.t() - last_return > MAX_RETURN_PERIODS * TAU {
            return Err(Error::NoReturn {
                periods: MAX_RETURN_PERIODS,
            });
        }
    }
}

/// Integrates over `[0, t_span]`. In non-smooth mode each crossing of
/// `y = 0` is located, classified and, if sewing, continued with the field of
/// the other side.
pub fn integrate(
    cfg: &SystemConfig,
    state0: [f64; 3],
    t_span: f64,
    mode: FieldMode,
    opts: OdeOptions,
) -> Result<Trajectory> {
    run(cfg, state0, mode, TimeDirection::Forward, Stop::Time(t_span), opts)
}

/// Same, following the flow backwards in time.
pub fn integrate_reverse(
    cfg: &SystemConfig,
    state0: [f64; 3],
    t_span: f64,
    mode: FieldMode,
    opts: OdeOptions,
) -> Result<Trajectory> {
    run(cfg, state0, mode, TimeDirection::Reverse, Stop::Time(t_span), opts)
}
