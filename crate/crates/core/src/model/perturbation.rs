use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Half-space of the switching plane `y = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }

    pub fn suffix(self) -> &'static str {
        match self {
            Side::Plus => "plus",
            Side::Minus => "minus",
        }
    }
}

/// Which component of `g = (p, q, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    P,
    Q,
    R,
}

impl Component {
    pub const ALL: [Component; 3] = [Component::P, Component::Q, Component::R];

    pub fn name(self) -> &'static str {
        match self {
            Component::P => "p",
            Component::Q => "q",
            Component::R => "r",
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Sparse polynomial `Σ c_ijk x^i y^j z^k`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Poly3 {
    terms: BTreeMap<(u32, u32, u32), f64>,
}

impl Poly3 {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32, u32), f64)>) -> Self {
        let mut p = Self::new();
        for (k, v) in terms {
            p.set(k, v);
        }
        p
    }

    /// Sets a coefficient; zero removes the monomial.
    pub fn set(&mut self, key: (u32, u32, u32), value: f64) {
        if value == 0.0 {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, value);
        }
    }

    pub fn get(&self, key: (u32, u32, u32)) -> f64 {
        self.terms.get(&key).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32, u32), f64)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j, k)| i + j + k).max()
    }

    pub fn eval(&self, x: f64, y: f64, z: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(i, j, k), &c)| c * x.powi(i as i32) * y.powi(j as i32) * z.powi(k as i32))
            .sum()
    }

    pub fn add(&self, other: &Poly3) -> Poly3 {
        let mut out = self.clone();
        for (k, v) in other.iter() {
            out.set(k, out.get(k) + v);
        }
        out
    }

    pub fn scale(&self, factor: f64) -> Poly3 {
        Poly3::from_terms(self.iter().map(|(k, v)| (k, v * factor)))
    }
}

/// The six polynomials `p±, q±, r±` with their total-degree caps `(m, n, p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Perturbation {
    polys: [[Poly3; 2]; 3],
    caps: [u32; 3],
}

fn side_index(side: Side) -> usize {
    match side {
        Side::Plus => 0,
        Side::Minus => 1,
    }
}

fn comp_index(c: Component) -> usize {
    match c {
        Component::P => 0,
        Component::Q => 1,
        Component::R => 2,
    }
}

impl Perturbation {
    /// The zero perturbation with degree caps `(m, n, p)`.
    pub fn zero(m: u32, n: u32, p: u32) -> Self {
        Self {
            polys: Default::default(),
            caps: [m, n, p],
        }
    }

    pub fn caps(&self) -> (u32, u32, u32) {
        (self.caps[0], self.caps[1], self.caps[2])
    }

    pub fn cap(&self, c: Component) -> u32 {
        self.caps[comp_index(c)]
    }

    /// `max(m, n, p)`, the degree bound of the Malkin polynomial.
    pub fn max_degree(&self) -> u32 {
        self.caps.iter().copied().max().unwrap_or(0)
    }

    pub fn poly(&self, c: Component, side: Side) -> &Poly3 {
        &self.polys[comp_index(c)][side_index(side)]
    }

    /// Sets `coefficient(c, side, i, j, k)`, validating the degree cap.
    pub fn set(&mut self, c: Component, side: Side, key: (u32, u32, u32), value: f64) -> Result<()> {
        let field = format!("{}_{}", c.name(), side.suffix());
        if !value.is_finite() {
            return Err(Error::invalid(field, format!("coefficient of {key:?} must be finite, got {value}")));
        }
        let cap = self.cap(c);
        if key.0 + key.1 + key.2 > cap {
            return Err(Error::invalid(
                field,
                format!("monomial {key:?} has total degree {} above the cap {cap}", key.0 + key.1 + key.2),
            ));
        }
        self.polys[comp_index(c)][side_index(side)].set(key, value);
        Ok(())
    }

    pub fn with(mut self, c: Component, side: Side, key: (u32, u32, u32), value: f64) -> Result<Self> {
        self.set(c, side, key, value)?;
        Ok(self)
    }

    /// Sets the same coefficient on both sides.
    pub fn with_both(self, c: Component, key: (u32, u32, u32), value: f64) -> Result<Self> {
        self.with(c, Side::Plus, key, value)?.with(c, Side::Minus, key, value)
    }

    /// `(p, q, r)` of the given side at `(x, y, z)`.
    pub fn eval_side(&self, side: Side, x: f64, y: f64, z: f64) -> [f64; 3] {
        let s = side_index(side);
        [
            self.polys[0][s].eval(x, y, z),
            self.polys[1][s].eval(x, y, z),
            self.polys[2][s].eval(x, y, z),
        ]
    }

    /// True when `g⁺ = g⁻` coefficient-wise.
    pub fn is_symmetric(&self) -> bool {
        self.polys.iter().all(|pair| pair[0] == pair[1])
    }

    /// Copy with `g⁻` replaced by `g⁺`.
    pub fn symmetrized(&self) -> Perturbation {
        let mut out = self.clone();
        for pair in out.polys.iter_mut() {
            pair[1] = pair[0].clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.polys.iter().flatten().all(Poly3::is_zero)
    }

    /// Coefficient-wise sum. Caps are the component-wise maxima.
    pub fn add(&self, other: &Perturbation) -> Perturbation {
        let mut out = Perturbation::zero(
            self.caps[0].max(other.caps[0]),
            self.caps[1].max(other.caps[1]),
            self.caps[2].max(other.caps[2]),
        );
        for c in 0..3 {
            for s in 0..2 {
                out.polys[c][s] = self.polys[c][s].add(&other.polys[c][s]);
            }
        }
        out
    }

    pub fn scale(&self, factor: f64) -> Perturbation {
        let mut out = self.clone();
        for pair in out.polys.iter_mut() {
            for p in pair.iter_mut() {
                *p = p.scale(factor);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_side_monomials() {
        let g = Perturbation::zero(2, 0, 0)
            .with(Component::P, Side::Plus, (1, 1, 0), 1.0)
            .unwrap();
        assert_eq!(g.eval_side(Side::Plus, 1.0, 1.0, 0.0), [1.0, 0.0, 0.0]);

        let g = Perturbation::zero(0, 0, 0)
            .with(Component::Q, Side::Plus, (0, 0, 0), 3.0)
            .unwrap();
        assert_eq!(g.eval_side(Side::Plus, 0.3, -2.0, 7.0), [0.0, 3.0, 0.0]);

        let g = Perturbation::zero(2, 0, 0)
            .with(Component::P, Side::Plus, (1, 0, 1), 2.0)
            .unwrap();
        assert_eq!(g.eval_side(Side::Plus, 1.0, 0.0, 5.0), [10.0, 0.0, 0.0]);
        assert_eq!(g.eval_side(Side::Minus, 1.0, 0.0, 5.0), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn cap_is_enforced() {
        let err = Perturbation::zero(1, 0, 0)
            .with(Component::P, Side::Minus, (1, 0, 1), 1.0)
            .unwrap_err();
        assert!(err.to_string().contains("p_minus"));
        assert!(Perturbation::zero(1, 0, 0)
            .with(Component::R, Side::Plus, (0, 0, 0), f64::INFINITY)
            .is_err());
    }

    #[test]
    fn symmetry_helpers() {
        let g = Perturbation::zero(1, 1, 1)
            .with(Component::R, Side::Plus, (0, 0, 1), 2.0)
            .unwrap();
        assert!(!g.is_symmetric());
        let s = g.symmetrized();
        assert!(s.is_symmetric());
        assert_eq!(s.poly(Component::R, Side::Minus).get((0, 0, 1)), 2.0);
    }

    #[test]
    fn add_and_scale() {
        let a = Perturbation::zero(1, 0, 0).with_both(Component::P, (1, 0, 0), 1.0).unwrap();
        let b = Perturbation::zero(1, 0, 0).with_both(Component::P, (1, 0, 0), -1.0).unwrap();
        assert!(a.add(&b).is_zero());
        assert_eq!(a.scale(3.0).poly(Component::P, Side::Plus).get((1, 0, 0)), 3.0);
    }
}
