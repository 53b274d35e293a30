use crate::error::{Error, Result};

/// The piecewise-linear ramp `φ_δ`: `-1` below `-δ`, `t/δ` inside, `1` above.
/// With `δ = 0` it degenerates to `sgn`, taking the value `0` at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionFunction {
    delta: f64,
}

impl TransitionFunction {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(Error::invalid("delta", format!("must be finite and >= 0, got {delta}")));
        }
        Ok(Self { delta })
    }

    pub fn sign() -> Self {
        Self { delta: 0.0 }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn eval(&self, t: f64) -> f64 {
        if self.delta == 0.0 {
            return sgn(t);
        }
        if t >= self.delta {
            1.0
        } else if t <= -self.delta {
            -1.0
        } else {
            t / self.delta
        }
    }

    /// Angles in `[0, 2π]` where `φ_δ(sin θ)` has a kink.
    pub fn kink_angles(&self) -> Vec<f64> {
        use std::f64::consts::{PI, TAU};
        if self.delta == 0.0 {
            return vec![0.0, PI, TAU];
        }
        if self.delta >= 1.0 {
            return Vec::new();
        }
        let a = self.delta.asin();
        vec![a, PI - a, PI + a, TAU - a]
    }
}

pub(crate) fn sgn(t: f64) -> f64 {
    if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ramp_values() {
        let phi = TransitionFunction::new(0.5).unwrap();
        assert_eq!(phi.eval(0.25), 0.5);
        assert_eq!(phi.eval(0.5), 1.0);
        assert_eq!(phi.eval(-3.0), -1.0);
        assert_eq!(TransitionFunction::sign().eval(0.0), 0.0);
        assert_eq!(TransitionFunction::sign().eval(-1e-300), -1.0);
    }

    #[test]
    fn rejects_negative_delta() {
        assert!(TransitionFunction::new(-0.1).is_err());
        assert!(TransitionFunction::new(f64::NAN).is_err());
    }

    #[test]
    fn kinks() {
        assert!(TransitionFunction::new(2.0).unwrap().kink_angles().is_empty());
        let k = TransitionFunction::new(0.5).unwrap().kink_angles();
        assert!((k[0] - std::f64::consts::FRAC_PI_6).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn odd_and_bounded(t in -10.0f64..10.0, delta in 0.0f64..3.0) {
            let phi = TransitionFunction::new(delta).unwrap();
            prop_assert_eq!(phi.eval(-t) + phi.eval(t), 0.0);
            prop_assert!(phi.eval(t).abs() <= 1.0);
        }
    }
}
