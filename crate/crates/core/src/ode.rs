//! Dormand–Prince 5(4) with FSAL, PI step-size control and the 5th-order
//! continuous extension. Integrates forward in time only.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFE: f64 = 0.9;
const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - BETA * 0.75;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            h_max: 0.1,
            max_steps: 1_000_000,
        }
    }
}

impl OdeOptions {
    pub fn tol(rtol: f64, atol: f64) -> Self {
        Self {
            rtol,
            atol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rtol > 0.0 && self.rtol.is_finite()) {
            return Err(Error::invalid("ode_rtol", format!("must be > 0, got {}", self.rtol)));
        }
        if !(self.atol > 0.0 && self.atol.is_finite()) {
            return Err(Error::invalid("ode_atol", format!("must be > 0, got {}", self.atol)));
        }
        if !(self.h_max > 0.0) {
            return Err(Error::invalid("h_max", format!("must be > 0, got {}", self.h_max)));
        }
        Ok(())
    }
}

/// One accepted step with its continuous extension.
#[derive(Debug, Clone, Copy)]
pub struct Step<const N: usize> {
    pub t0: f64,
    pub t1: f64,
    pub y0: [f64; N],
    pub y1: [f64; N],
    rcont: [[f64; N]; 5],
}

impl<const N: usize> Step<N> {
    /// Dense output at `t ∈ [t0, t1]`.
    pub fn eval(&self, t: f64) -> [f64; N] {
        let h = self.t1 - self.t0;
        let th = if h == 0.0 { 0.0 } else { (t - self.t0) / h };
        let th1 = 1.0 - th;
        let r = &self.rcont;
        let mut out = [0.0; N];
        for i in 0..N {
            out[i] = r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])));
        }
        out
    }
}

/// Stateful integrator; the right-hand side is passed to every call so it
/// can be swapped between steps (used when crossing a switching surface).
#[derive(Debug, Clone)]
pub struct Dopri5<const N: usize> {
    t: f64,
    y: [f64; N],
    k1: [f64; N],
    h: f64,
    facold: f64,
    steps: usize,
    opts: OdeOptions,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        let mut s = 0.0;
        for (c, k) in terms {
            s += c * k[i];
        }
        out[i] += h * s;
    }
    out
}

impl<const N: usize> Dopri5<N> {
    pub fn new<F>(f: &mut F, t0: f64, y0: [f64; N], opts: OdeOptions) -> Result<Self>
    where
        F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    {
        opts.validate()?;
        let k1 = f(t0, &y0)?;
        let mut s = Self {
            t: t0,
            y: y0,
            k1,
            h: 0.0,
            facold: 1e-4,
            steps: 0,
            opts,
        };
        s.h = s.initial_step(f)?;
        Ok(s)
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> [f64; N] {
        self.y
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    fn scale(&self, a: &[f64; N], b: &[f64; N], i: usize) -> f64 {
        self.opts.atol + self.opts.rtol * a[i].abs().max(b[i].abs())
    }

    fn initial_step<F>(&self, f: &mut F) -> Result<f64>
    where
        F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    {
        let (mut dnf, mut dny) = (0.0, 0.0);
        for i in 0..N {
            let sk = self.opts.atol + self.opts.rtol * self.y[i].abs();
            dnf += (self.k1[i] / sk).powi(2);
            dny += (self.y[i] / sk).powi(2);
        }
        let mut h = if dnf <= 1e-10 || dny <= 1e-10 {
            1e-6
        } else {
            0.01 * (dny / dnf).sqrt()
        };
        h = h.min(self.opts.h_max);
        let y1 = axpy(&self.y, h, &[(1.0, &self.k1)]);
        let f1 = f(self.t + h, &y1)?;
        let mut der2 = 0.0;
        for i in 0..N {
            let sk = self.opts.atol + self.opts.rtol * self.y[i].abs();
            der2 += ((f1[i] - self.k1[i]) / sk).powi(2);
        }
        let der2 = der2.sqrt() / h;
        let der12 = der2.abs().max(dnf.sqrt());
        let h1 = if der12 <= 1e-15 {
            (1e-6f64).max(h * 1e-3)
        } else {
            (0.01 / der12).powf(0.2)
        };
        Ok((100.0 * h).min(h1).min(self.opts.h_max))
    }

    /// Re-evaluates the stored derivative, e.g. after the field changed.
    pub fn restart<F>(&mut self, f: &mut F) -> Result<()>
    where
        F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    {
        self.k1 = f(self.t, &self.y)?;
        Ok(())
    }

    /// Moves to `(t, y)` and re-evaluates the derivative there; the step-size
    /// controller state is kept.
    pub fn reset<F>(&mut self, f: &mut F, t: f64, y: [f64; N]) -> Result<()>
    where
        F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    {
        self.t = t;
        self.y = y;
        self.restart(f)
    }

    /// Takes one accepted step that does not pass `t_end`.
    pub fn step<F>(&mut self, f: &mut F, t_end: f64) -> Result<Step<N>>
    where
        F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    {
        let mut reject = false;
        loop {
            if self.steps >= self.opts.max_steps {
                return Err(Error::TooManySteps {
                    steps: self.steps,
                    t: self.t,
                });
            }
            let mut h = self.h.min(self.opts.h_max);
            let last = self.t + h >= t_end;
            if last {
                h = t_end - self.t;
            }
            if h.abs() <= 10.0 * f64::EPSILON * self.t.abs().max(1.0) && !last {
                return Err(Error::StepSizeUnderflow { t: self.t });
            }
            self.steps += 1;

            let (t, y, k1) = (self.t, self.y, self.k1);
            let y2 = axpy(&y, h, &[(A21, &k1)]);
            let k2 = f(t + C2 * h, &y2)?;
            let y3 = axpy(&y, h, &[(A31, &k1), (A32, &k2)]);
            let k3 = f(t + C3 * h, &y3)?;
            let y4 = axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
            let k4 = f(t + C4 * h, &y4)?;
            let y5 = axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
            let k5 = f(t + C5 * h, &y5)?;
            let y6 = axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]);
            let tn = if last { t_end } else { t + h };
            let k6 = f(tn, &y6)?;
            let yn = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let k7 = f(tn, &yn)?;

            let mut err = 0.0;
            for i in 0..N {
                let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                err += (e / self.scale(&y, &yn, i)).powi(2);
            }
            let err = (err / N as f64).sqrt();
            if !err.is_finite() {
                self.h = h * FAC_MIN;
                reject = true;
                continue;
            }

            let fac11 = err.powf(EXPO1);
            let fac = (fac11 / self.facold.powf(BETA) / SAFE).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            let mut hnew = h / fac;

            if err <= 1.0 {
                self.facold = err.max(1e-4);
                if reject {
                    hnew = hnew.min(h);
                }
                let mut rcont = [[0.0; N]; 5];
                for i in 0..N {
                    let ydiff = yn[i] - y[i];
                    let bspl = h * k1[i] - ydiff;
                    rcont[0][i] = y[i];
                    rcont[1][i] = ydiff;
                    rcont[2][i] = bspl;
                    rcont[3][i] = ydiff - h * k7[i] - bspl;
                    rcont[4][i] = h
                        * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
                }
                self.t = tn;
                self.y = yn;
                self.k1 = k7;
                // keep the controller's step when the last step was truncated at t_end
                self.h = if last { self.h.max(hnew) } else { hnew };
                return Ok(Step {
                    t0: t,
                    t1: tn,
                    y0: y,
                    y1: yn,
                    rcont,
                });
            }
            hnew = h / (1.0 / FAC_MIN).min(fac11 / SAFE);
            self.h = hnew;
            reject = true;
        }
    }
}

/// Integrates from `t0` to `t1` and returns the final state.
pub fn solve<const N: usize, F>(mut f: F, t0: f64, y0: [f64; N], t1: f64, opts: OdeOptions) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    if t1 < t0 {
        return Err(Error::invalid("t_span", "must be non-negative"));
    }
    if t1 == t0 {
        return Ok(y0);
    }
    let mut ode = Dopri5::new(&mut f, t0, y0, opts)?;
    while ode.t() < t1 {
        ode.step(&mut f, t1)?;
    }
    Ok(ode.y())
}
