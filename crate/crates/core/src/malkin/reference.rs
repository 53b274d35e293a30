//! Closed forms for `h = x/r` with the quadratic-in-`p`, constant-`q`, constant-`r`
//! perturbation family. Used as oracles and by the examples.
//!
//! Only `a_101`, `a_110`, `b_000`, `c_000` enter; the other quadratic
//! monomials of `p±` integrate to zero against `h = cos θ`.

use std::f64::consts::PI;

use crate::error::Result;
use crate::model::{Component, Perturbation, Side};

/// Coefficients of the family, `[plus, minus]` for each name.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WorkedExample {
    pub a101: [f64; 2],
    pub a110: [f64; 2],
    pub b000: [f64; 2],
    pub c000: [f64; 2],
}

impl WorkedExample {
    /// Caps `(m, n, p) = (2, 0, 0)`.
    pub fn perturbation(&self) -> Result<Perturbation> {
        let mut g = Perturbation::zero(2, 0, 0);
        for (k, side) in [(0, Side::Plus), (1, Side::Minus)] {
            g.set(Component::P, side, (1, 0, 1), self.a101[k])?;
            g.set(Component::P, side, (1, 1, 0), self.a110[k])?;
            g.set(Component::Q, side, (0, 0, 0), self.b000[k])?;
            g.set(Component::R, side, (0, 0, 0), self.c000[k])?;
        }
        Ok(g)
    }

    /// `a⁺₁₀₁ − a⁻₁₀₁`.
    pub fn difference(&self) -> f64 {
        self.a101[0] - self.a101[1]
    }

    /// `Σ± (a₁₀₁ + a₁₁₀ + 4b₀₀₀ + 8c₀₀₀)` as printed.
    pub fn published_sum(&self) -> f64 {
        (0..2)
            .map(|k| self.a101[k] + self.a110[k] + 4.0 * self.b000[k] + 8.0 * self.c000[k])
            .sum()
    }

    /// The same sum with the `q` contribution entering as `−4b₀₀₀`, which is
    /// what the quadrature and the flow both produce (`∫ −cos²θ · b = −πb`).
    pub fn sum(&self) -> f64 {
        (0..2)
            .map(|k| self.a101[k] + self.a110[k] - 4.0 * self.b000[k] + 8.0 * self.c000[k])
            .sum()
    }

    /// Smooth-mode constant `π/4 (a⁺₁₀₁ + a⁺₁₁₀ ∓ 4b⁺ + 8c⁺)`.
    pub fn smooth_value(&self, published: bool) -> f64 {
        let b = if published { 4.0 } else { -4.0 };
        PI / 4.0 * (self.a101[0] + self.a110[0] + b * self.b000[0] + 8.0 * self.c000[0])
    }

    fn s(&self, published: bool) -> f64 {
        if published {
            self.published_sum()
        } else {
            self.sum()
        }
    }

    /// `I₀(δ) = π/8 · S`, the same for every `δ ≥ 0`.
    pub fn constant(&self, published: bool) -> f64 {
        PI / 8.0 * self.s(published)
    }

    /// `I₁(δ)`: `π/(8δ)·D` for `δ ≥ 1`, `−Λ(δ)/(12δ)·D` for `0 < δ < 1`, `2/3·D` at `δ = 0`.
    pub fn slope(&self, delta: f64) -> f64 {
        slope_factor(delta) * self.difference()
    }

    /// Closed-form root `z₀ = −I₀/I₁`.
    pub fn z0(&self, delta: f64, published: bool) -> f64 {
        -self.constant(published) / self.slope(delta)
    }
}

/// `Λ(δ) = δ√(1−δ²)(−5 + 2δ²) − 3 arcsin δ` for `0 ≤ δ ≤ 1`.
pub fn lambda(delta: f64) -> f64 {
    delta * (1.0 - delta * delta).sqrt() * (-5.0 + 2.0 * delta * delta) - 3.0 * delta.asin()
}

/// `I₁(δ) / D`.
pub fn slope_factor(delta: f64) -> f64 {
    if delta >= 1.0 {
        PI / (8.0 * delta)
    } else if delta == 0.0 {
        2.0 / 3.0
    } else {
        -lambda(delta) / (12.0 * delta)
    }
}
