use serde::{Deserialize, Serialize};

use super::transition::sgn;
use super::{CylinderField, Perturbation, Side, TransitionFunction};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldMode {
    /// `g_δ = (g⁺+g⁻)/2 + φ_δ(y)(g⁺-g⁻)/2`.
    Regularized,
    /// `g = (g⁺+g⁻)/2 + sgn(y)(g⁺-g⁻)/2`.
    Nonsmooth,
}

/// Filippov classification of a point of the switching plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SigmaClass {
    Sewing,
    Sliding,
    Escaping,
    Tangent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaPoint {
    pub class: SigmaClass,
    /// y-component of the field on `y ≥ 0`.
    pub xf: f64,
    /// y-component of the field on `y ≤ 0`.
    pub yf: f64,
}

pub const TANGENCY_TOL: f64 = 1e-12;

/// Everything needed to evaluate the perturbed vector field.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub field: CylinderField,
    pub pert: Perturbation,
    pub phi: TransitionFunction,
    pub epsilon: f64,
}

impl SystemConfig {
    pub fn new(field: CylinderField, pert: Perturbation, phi: TransitionFunction, epsilon: f64) -> Result<Self> {
        if !epsilon.is_finite() {
            return Err(Error::invalid("epsilon", format!("must be finite, got {epsilon}")));
        }
        Ok(Self {
            field,
            pert,
            phi,
            epsilon,
        })
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        Self::new(self.field.clone(), self.pert.clone(), self.phi, epsilon)
    }

    pub fn with_phi(&self, phi: TransitionFunction) -> Self {
        Self { phi, ..self.clone() }
    }

    /// The unperturbed field `f(x, y, z)`.
    pub fn unperturbed(&self, x: f64, y: f64) -> Result<[f64; 3]> {
        let h = self.field.eval(x, y)?;
        let w = x * x + y * y - 1.0;
        Ok([-y + x * w, x + y * w, h])
    }

    /// `f + ε g` where the blend weight of `(g⁺ - g⁻)/2` is given explicitly.
    fn blended(&self, x: f64, y: f64, z: f64, blend: f64) -> Result<[f64; 3]> {
        let mut f = self.unperturbed(x, y)?;
        if self.epsilon == 0.0 {
            return Ok(f);
        }
        let gp = self.pert.eval_side(Side::Plus, x, y, z);
        let gm = self.pert.eval_side(Side::Minus, x, y, z);
        for i in 0..3 {
            let g = 0.5 * (gp[i] + gm[i]) + blend * 0.5 * (gp[i] - gm[i]);
            f[i] += self.epsilon * g;
        }
        Ok(f)
    }

    pub fn eval_field(&self, x: f64, y: f64, z: f64, mode: FieldMode) -> Result<[f64; 3]> {
        let blend = match mode {
            FieldMode::Regularized => self.phi.eval(y),
            FieldMode::Nonsmooth => sgn(y),
        };
        self.blended(x, y, z, blend)
    }

    /// `f + ε g^side`, the smooth extension of one side's field across `y = 0`.
    pub fn eval_side_field(&self, x: f64, y: f64, z: f64, side: Side) -> Result<[f64; 3]> {
        self.blended(x, y, z, side.sign())
    }

    /// `(ṙ, θ̇, ż)` at `(r cos θ, r sin θ, z)` for an explicit blend weight.
    ///
    /// `ṙ = r(r² − 1)` is evaluated in this form so that the cylinder stays
    /// exactly invariant when `ε = 0`.
    pub fn polar_blended(&self, r: f64, theta: f64, z: f64, blend: f64) -> Result<[f64; 3]> {
        let (s, c) = theta.sin_cos();
        let (x, y) = (r * c, r * s);
        let h = self.field.eval(x, y)?;
        let mut out = [r * (r * r - 1.0), 1.0, h];
        if self.epsilon == 0.0 {
            return Ok(out);
        }
        let gp = self.pert.eval_side(Side::Plus, x, y, z);
        let gm = self.pert.eval_side(Side::Minus, x, y, z);
        let mut g = [0.0; 3];
        for i in 0..3 {
            g[i] = 0.5 * (gp[i] + gm[i]) + blend * 0.5 * (gp[i] - gm[i]);
        }
        out[0] += self.epsilon * (c * g[0] + s * g[1]);
        out[1] += self.epsilon * (c * g[1] - s * g[0]) / r;
        out[2] += self.epsilon * g[2];
        Ok(out)
    }

    pub fn eval_polar_field(&self, r: f64, theta: f64, z: f64, mode: FieldMode) -> Result<[f64; 3]> {
        let y = r * theta.sin();
        let blend = match mode {
            FieldMode::Regularized => self.phi.eval(y),
            FieldMode::Nonsmooth => sgn(y),
        };
        self.polar_blended(r, theta, z, blend)
    }

    pub fn eval_polar_side_field(&self, r: f64, theta: f64, z: f64, side: Side) -> Result<[f64; 3]> {
        self.polar_blended(r, theta, z, side.sign())
    }

    /// Classifies `(x, 0, z)` from the y-components of both side fields.
    pub fn classify_sigma_point(&self, x: f64, z: f64) -> SigmaPoint {
        // the y-component does not involve h, so this is defined even at x = 0
        let q_plus = self.pert.eval_side(Side::Plus, x, 0.0, z)[1];
        let q_minus = self.pert.eval_side(Side::Minus, x, 0.0, z)[1];
        let xf = x + self.epsilon * q_plus;
        let yf = x + self.epsilon * q_minus;
        let class = if xf.abs() < TANGENCY_TOL || yf.abs() < TANGENCY_TOL {
            SigmaClass::Tangent
        } else if xf * yf > 0.0 {
            SigmaClass::Sewing
        } else if xf > 0.0 {
            SigmaClass::Escaping
        } else {
            SigmaClass::Sliding
        };
        SigmaPoint { class, xf, yf }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Component, HTerm};
    use proptest::prelude::*;

    fn cfg(pert: Perturbation, delta: f64, eps: f64) -> SystemConfig {
        SystemConfig::new(
            CylinderField::x_over_r(),
            pert,
            TransitionFunction::new(delta).unwrap(),
            eps,
        )
        .unwrap()
    }

    #[test]
    fn unperturbed_at_base_point() {
        let c = cfg(Perturbation::zero(0, 0, 0), 0.0, 0.0);
        assert_eq!(c.eval_field(1.0, 0.0, 0.0, FieldMode::Nonsmooth).unwrap(), [0.0, 1.0, 1.0]);
    }

    #[test]
    fn symmetric_perturbation_ignores_blend() {
        let g = Perturbation::zero(0, 0, 0).with_both(Component::R, (0, 0, 0), 2.5).unwrap();
        let c = cfg(g, 0.3, 1.0);
        for y in [-0.4, -0.1, 0.0, 0.05, 0.7] {
            let f0 = c.unperturbed(0.9, y).unwrap();
            for mode in [FieldMode::Regularized, FieldMode::Nonsmooth] {
                let f = c.eval_field(0.9, y, 1.0, mode).unwrap();
                assert_eq!([f[0] - f0[0], f[1] - f0[1], f[2] - f0[2]], [0.0, 0.0, 2.5]);
            }
        }
    }

    #[test]
    fn regularized_blend_inside_ramp() {
        let g = Perturbation::zero(0, 0, 0)
            .with(Component::P, Side::Plus, (0, 0, 0), 1.0)
            .unwrap()
            .with(Component::P, Side::Minus, (0, 0, 0), -1.0)
            .unwrap();
        let c = cfg(g, 0.5, 1.0);
        let f = c.eval_field(1.0, 0.25, 0.0, FieldMode::Regularized).unwrap();
        let f0 = c.unperturbed(1.0, 0.25).unwrap();
        assert!((f[0] - f0[0] - 0.5).abs() < 1e-15);
        assert_eq!(f[1], f0[1]);
    }

    #[test]
    fn z_axis_rejected() {
        let c = cfg(Perturbation::zero(0, 0, 0), 0.0, 0.0);
        assert!(matches!(c.eval_field(0.0, 0.0, 1.0, FieldMode::Nonsmooth), Err(Error::ZAxis { .. })));
    }

    #[test]
    fn sigma_classification_unperturbed() {
        let c = cfg(Perturbation::zero(0, 0, 0), 0.0, 0.0);
        let p = c.classify_sigma_point(1.0, 0.0);
        assert_eq!(p.class, SigmaClass::Sewing);
        assert_eq!(p.xf * p.yf, 1.0);
        assert_eq!(c.classify_sigma_point(-1.0, 3.0).class, SigmaClass::Sewing);
        assert_eq!(c.classify_sigma_point(0.0, 0.0).class, SigmaClass::Tangent);
    }

    #[test]
    fn sigma_classification_sliding_and_escaping() {
        let g = Perturbation::zero(0, 0, 0)
            .with(Component::Q, Side::Plus, (0, 0, 0), -2.0)
            .unwrap()
            .with(Component::Q, Side::Minus, (0, 0, 0), 2.0)
            .unwrap();
        let c = cfg(g, 0.0, 1.0);
        // x = 1: XF = -1 < 0 < YF = 3
        assert_eq!(c.classify_sigma_point(1.0, 0.0).class, SigmaClass::Sliding);
        // x = -1: XF = -3, YF = 1 -> sliding too; flip the signs for escaping
        let c2 = SystemConfig { epsilon: -1.0, ..c };
        assert_eq!(c2.classify_sigma_point(1.0, 0.0).class, SigmaClass::Escaping);
    }

    #[test]
    fn polar_field_matches_cartesian() {
        let g = Perturbation::zero(1, 1, 1)
            .with(Component::P, Side::Plus, (0, 0, 1), 0.8)
            .unwrap()
            .with(Component::Q, Side::Minus, (1, 0, 0), -0.5)
            .unwrap()
            .with(Component::R, Side::Plus, (0, 1, 0), 1.5)
            .unwrap();
        let c = cfg(g, 0.4, 0.3);
        for (r, t, z) in [(1.2, 0.3, 0.5), (0.7, 4.0, -1.0), (1.0, 2.9, 2.0)] {
            let (s, co) = f64::sin_cos(t);
            for mode in [FieldMode::Regularized, FieldMode::Nonsmooth] {
                let f = c.eval_field(r * co, r * s, z, mode).unwrap();
                let p = c.eval_polar_field(r, t, z, mode).unwrap();
                assert!((p[0] - (co * f[0] + s * f[1])).abs() < 1e-14);
                assert!((p[1] - (co * f[1] - s * f[0]) / r).abs() < 1e-14);
                assert_eq!(p[2], f[2]);
            }
        }
        let u = cfg(Perturbation::zero(0, 0, 0), 0.0, 0.0);
        assert_eq!(u.eval_polar_field(1.0, 1.234, 0.0, FieldMode::Nonsmooth).unwrap()[0], 0.0);
    }

    proptest! {
        #[test]
        fn unperturbed_field_is_tangent_to_cylinder(theta in 0.0f64..std::f64::consts::TAU, z in -5.0f64..5.0) {
            let field = CylinderField::new(vec![HTerm::new(0.7, 1, 2), HTerm::new(-1.2, 3, 0)]).unwrap();
            let c = SystemConfig::new(field, Perturbation::zero(0, 0, 0), TransitionFunction::sign(), 0.0).unwrap();
            let (s, co) = theta.sin_cos();
            let f = c.eval_field(co, s, z, FieldMode::Regularized).unwrap();
            prop_assert!((co * f[0] + s * f[1]).abs() < 1e-14);
        }

        #[test]
        fn nonsmooth_is_limit_of_regularized(y in prop_oneof![-3.0f64..-1e-3, 1e-3f64..3.0], delta in 0.0f64..1e-3) {
            let g = Perturbation::zero(1, 1, 1)
                .with(Component::P, Side::Plus, (1, 0, 0), 0.3).unwrap()
                .with(Component::Q, Side::Minus, (0, 0, 1), -1.1).unwrap()
                .with(Component::R, Side::Plus, (0, 1, 0), 2.0).unwrap();
            let c = cfg(g, delta, 0.2);
            let a = c.eval_field(0.8, y, 0.4, FieldMode::Regularized).unwrap();
            let b = c.eval_field(0.8, y, 0.4, FieldMode::Nonsmooth).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
