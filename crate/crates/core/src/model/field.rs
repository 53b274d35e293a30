use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{self, QuadOptions};

/// One term `coeff · x^ipow · y^jpow`, divided by `(x² + y²)^((ipow + jpow)/2)`
/// when the owning field is homogenized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HTerm {
    pub coeff: f64,
    pub ipow: u32,
    pub jpow: u32,
}

impl HTerm {
    pub fn new(coeff: f64, ipow: u32, jpow: u32) -> Self {
        Self { coeff, ipow, jpow }
    }

    /// Periodicity requires that the powers of x and y are not both even.
    pub fn parity_ok(&self) -> bool {
        !(self.ipow % 2 == 0 && self.jpow % 2 == 0)
    }

    fn degree(&self) -> i32 {
        (self.ipow + self.jpow) as i32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Homogenization {
    /// Each monomial is divided by `r^(i+j)`, making it constant along rays.
    DegreeZero,
    /// Plain monomials. Only meaningful as a diagnostic: `A_h` is not zero.
    Raw,
}

/// The right-hand side `h(x, y)` of `z' = h`.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderField {
    terms: Vec<HTerm>,
    homogenization: Homogenization,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub parity_ok: bool,
    /// Indices of terms whose powers are both even.
    pub parity_violations: Vec<usize>,
    pub mean_zero: bool,
    pub period_integral: f64,
    pub a_h_zero: bool,
    pub max_abs_a_h: f64,
}

impl AdmissibilityReport {
    pub fn passed(&self) -> bool {
        self.parity_ok && self.mean_zero && self.a_h_zero
    }
}

const PERIOD_INTEGRAL_TOL: f64 = 1e-10;
const A_H_TOL: f64 = 1e-12;
const A_H_SAMPLES: usize = 100;

impl CylinderField {
    pub fn new(terms: Vec<HTerm>) -> Result<Self> {
        Self::with_homogenization(terms, Homogenization::DegreeZero)
    }

    /// Non-homogenized monomials, e.g. `h = x`, for diagnostics only.
    pub fn raw(terms: Vec<HTerm>) -> Result<Self> {
        Self::with_homogenization(terms, Homogenization::Raw)
    }

    pub fn with_homogenization(terms: Vec<HTerm>, homogenization: Homogenization) -> Result<Self> {
        for (idx, t) in terms.iter().enumerate() {
            if !t.coeff.is_finite() {
                return Err(Error::invalid(
                    format!("h_terms[{idx}].coeff"),
                    format!("must be finite, got {}", t.coeff),
                ));
            }
        }
        Ok(Self {
            terms,
            homogenization,
        })
    }

    /// `h = x / sqrt(x² + y²)`, i.e. `cos θ` on the cylinder.
    pub fn x_over_r() -> Self {
        Self::new(vec![HTerm::new(1.0, 1, 0)]).expect("finite")
    }

    /// `h = xy / (x² + y²)`, i.e. `sin θ cos θ` on the cylinder.
    pub fn xy_over_r2() -> Self {
        Self::new(vec![HTerm::new(1.0, 1, 1)]).expect("finite")
    }

    pub fn terms(&self) -> &[HTerm] {
        &self.terms
    }

    pub fn homogenization(&self) -> Homogenization {
        self.homogenization
    }

    fn scale(&self, t: &HTerm, r2: f64) -> f64 {
        match self.homogenization {
            Homogenization::DegreeZero => r2.powf(-0.5 * t.degree() as f64),
            Homogenization::Raw => 1.0,
        }
    }

    /// Evaluates `h(x, y)`; the homogenized field is undefined on the z-axis.
    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        let r2 = x * x + y * y;
        if r2 == 0.0 && self.homogenization == Homogenization::DegreeZero {
            return Err(Error::ZAxis { x, y });
        }
        Ok(self.eval_unchecked(x, y, r2))
    }

    fn eval_unchecked(&self, x: f64, y: f64, r2: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff * x.powi(t.ipow as i32) * y.powi(t.jpow as i32) * self.scale(t, r2))
            .sum()
    }

    /// `h(cos θ, sin θ)`, where the homogenization factor is exactly one.
    pub fn on_circle(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        self.terms
            .iter()
            .map(|t| t.coeff * c.powi(t.ipow as i32) * s.powi(t.jpow as i32))
            .sum()
    }

    /// Analytic gradient `(∂h/∂x, ∂h/∂y)`.
    pub fn gradient(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        let r2 = x * x + y * y;
        if r2 == 0.0 && self.homogenization == Homogenization::DegreeZero {
            return Err(Error::ZAxis { x, y });
        }
        let mut gx = 0.0;
        let mut gy = 0.0;
        for t in &self.terms {
            let (i, j) = (t.ipow as i32, t.jpow as i32);
            let xi = x.powi(i);
            let yj = y.powi(j);
            let dxi = if i > 0 { i as f64 * x.powi(i - 1) } else { 0.0 };
            let dyj = if j > 0 { j as f64 * y.powi(j - 1) } else { 0.0 };
            match self.homogenization {
                Homogenization::Raw => {
                    gx += t.coeff * dxi * yj;
                    gy += t.coeff * xi * dyj;
                }
                Homogenization::DegreeZero => {
                    // d/dx r^(-n) = -n x r^(-n-2)
                    let n = t.degree() as f64;
                    let rn = r2.powf(-0.5 * n);
                    let rn2 = rn / r2;
                    gx += t.coeff * (dxi * yj * rn - n * xi * x * yj * rn2);
                    gy += t.coeff * (xi * dyj * rn - n * xi * yj * y * rn2);
                }
            }
        }
        Ok((gx, gy))
    }

    /// Radial derivative of `h` on the unit circle,
    /// `A_h(θ) = cos θ ∂h/∂x + sin θ ∂h/∂y` at `(cos θ, sin θ)`.
    pub fn a_h(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        let (gx, gy) = self.gradient(c, s).expect("unit circle is off the z-axis");
        c * gx + s * gy
    }

    /// `∫₀ᵗ h(cos s, sin s) ds`, the z-displacement along the unperturbed
    /// orbit started at `θ = 0`.
    pub fn z_primitive(&self, t: f64) -> Result<f64> {
        self.z_primitive_with(t, QuadOptions::with_tol(1e-13))
    }

    pub fn z_primitive_with(&self, t: f64, opts: QuadOptions) -> Result<f64> {
        if !t.is_finite() {
            return Err(Error::invalid("t", format!("must be finite, got {t}")));
        }
        if self.terms.is_empty() {
            return Ok(0.0);
        }
        let periods = (t / TAU).floor();
        let rem = t - periods * TAU;
        let part = self.circle_integral(0.0, rem, opts)?;
        if periods == 0.0 {
            return Ok(part);
        }
        let full = self.circle_integral(0.0, TAU, opts)?;
        Ok(periods * full + part)
    }

    fn circle_integral(&self, a: f64, b: f64, opts: QuadOptions) -> Result<f64> {
        let quarters = [FRAC_PI_2, PI, 3.0 * FRAC_PI_2];
        let r = quadrature::integrate_interval(|s| self.on_circle(s), a, b, &quarters, opts)?;
        Ok(r.value)
    }

    pub fn check_admissible(&self) -> AdmissibilityReport {
        let parity_violations: Vec<usize> = self
            .terms
            .iter()
            .enumerate()
            .filter(|(_, t)| !t.parity_ok())
            .map(|(i, _)| i)
            .collect();
        let period_integral = self
            .circle_integral(0.0, TAU, QuadOptions::with_tol(1e-14))
            .unwrap_or(f64::NAN);
        let max_abs_a_h = (0..A_H_SAMPLES)
            .map(|k| self.a_h(TAU * k as f64 / A_H_SAMPLES as f64).abs())
            .fold(0.0, f64::max);
        AdmissibilityReport {
            parity_ok: parity_violations.is_empty(),
            parity_violations,
            mean_zero: period_integral.abs() < PERIOD_INTEGRAL_TOL,
            period_integral,
            a_h_zero: max_abs_a_h < A_H_TOL,
            max_abs_a_h,
        }
    }

    /// Fails with a validation error unless every admissibility check passes.
    pub fn require_admissible(&self) -> Result<()> {
        let report = self.check_admissible();
        if report.passed() {
            return Ok(());
        }
        let mut reasons = Vec::new();
        if !report.parity_ok {
            reasons.push(format!(
                "terms {:?} have both powers even (parity rule)",
                report.parity_violations
            ));
        }
        if !report.mean_zero {
            reasons.push(format!("period integral {:e} is not zero", report.period_integral));
        }
        if !report.a_h_zero {
            reasons.push(format!("max |A_h| = {:e} is not zero", report.max_abs_a_h));
        }
        Err(Error::invalid("h_terms", reasons.join("; ")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn eval_on_unit_circle() {
        let h = CylinderField::x_over_r();
        assert_eq!(h.eval(1.0, 0.0).unwrap(), 1.0);
        assert_eq!(h.eval(0.0, 1.0).unwrap(), 0.0);
        let hxy = CylinderField::xy_over_r2();
        let v = hxy.eval(FRAC_PI_4.cos(), FRAC_PI_4.sin()).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn eval_is_constant_along_rays() {
        let h = CylinderField::new(vec![HTerm::new(2.0, 3, 0), HTerm::new(-1.0, 1, 2)]).unwrap();
        let a = h.eval(0.6, -0.8).unwrap();
        let b = h.eval(3.0, -4.0).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn z_axis_is_a_domain_error() {
        let h = CylinderField::x_over_r();
        assert!(matches!(h.eval(0.0, 0.0), Err(Error::ZAxis { .. })));
    }

    #[test]
    fn z_primitive_values() {
        let h = CylinderField::x_over_r();
        assert!((h.z_primitive(FRAC_PI_2).unwrap() - 1.0).abs() < 1e-14);
        assert!(h.z_primitive(TAU).unwrap().abs() < 1e-12);
        let hxy = CylinderField::xy_over_r2();
        assert!((hxy.z_primitive(FRAC_PI_2).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn z_primitive_handles_multiple_periods_and_negative_t() {
        let h = CylinderField::x_over_r();
        for t in [-7.5, -0.3, 9.0, 20.0] {
            assert!((h.z_primitive(t).unwrap() - f64::sin(t)).abs() < 1e-13, "t = {t}");
        }
    }

    #[test]
    fn a_h_vanishes_for_homogenized_terms() {
        assert!(CylinderField::x_over_r().a_h(0.7).abs() < 1e-15);
        assert!(CylinderField::xy_over_r2().a_h(PI / 3.0).abs() < 1e-15);
    }

    #[test]
    fn a_h_of_raw_probe() {
        let h = CylinderField::raw(vec![HTerm::new(1.0, 1, 0)]).unwrap();
        assert_eq!(h.a_h(0.0), 1.0);
        assert!((h.a_h(1.1) - 1.1f64.cos()).abs() < 1e-15);
    }

    #[test]
    fn gradient_matches_central_differences() {
        let h = CylinderField::new(vec![HTerm::new(1.5, 2, 1), HTerm::new(-0.5, 0, 3)]).unwrap();
        let (x, y) = (0.7, -1.3);
        let (gx, gy) = h.gradient(x, y).unwrap();
        let d = 1e-6;
        let fx = (h.eval(x + d, y).unwrap() - h.eval(x - d, y).unwrap()) / (2.0 * d);
        let fy = (h.eval(x, y + d).unwrap() - h.eval(x, y - d).unwrap()) / (2.0 * d);
        assert!((gx - fx).abs() < 1e-8);
        assert!((gy - fy).abs() < 1e-8);
    }

    #[test]
    fn admissibility_report() {
        assert!(CylinderField::x_over_r().check_admissible().passed());
        let bad = CylinderField::new(vec![HTerm::new(1.0, 2, 0)]).unwrap();
        let r = bad.check_admissible();
        assert!(!r.parity_ok);
        assert_eq!(r.parity_violations, vec![0]);
        assert!(!r.mean_zero);
        assert!(CylinderField::new(vec![]).unwrap().check_admissible().passed());
    }

    #[test]
    fn raw_probe_fails_a_h_check() {
        let h = CylinderField::raw(vec![HTerm::new(1.0, 1, 0)]).unwrap();
        let r = h.check_admissible();
        assert!(r.parity_ok && r.mean_zero);
        assert!(!r.a_h_zero);
    }

    #[test]
    fn rejects_non_finite_coefficients() {
        assert!(CylinderField::new(vec![HTerm::new(f64::NAN, 1, 0)]).is_err());
    }
}
