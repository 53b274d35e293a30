use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::integrand::MalkinMode;
use super::polynomial::extract_polynomial;
use crate::error::{Error, Result};
use crate::model::{Component, CylinderField, Perturbation, Side, SystemConfig, TransitionFunction};

/// A coefficient counts as nonzero above this fraction of the largest one.
pub const NONZERO_REL: f64 = 1e-6;
/// Below this fraction a coefficient is treated as a structural zero.
pub const STRUCTURAL_REL: f64 = 1e-9;
pub const MAX_REDRAWS: usize = 10;
pub const PROBE_TOL: f64 = 1e-10;

/// Which monomials a random draw populates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonomialConvention {
    /// Only total degree exactly equal to the cap.
    TotalDegree,
    /// Only the pure powers `x^c, y^c, z^c` of the cap `c`: every monomial
    /// with all exponents `≤ c − 1` is zero.
    PerIndex,
}

impl MonomialConvention {
    pub fn admits(self, key: (u32, u32, u32), cap: u32) -> bool {
        let (i, j, k) = key;
        match self {
            MonomialConvention::TotalDegree => i + j + k == cap,
            MonomialConvention::PerIndex => i + j + k <= cap && i.max(j).max(k) == cap,
        }
    }

    /// Exponent triples admitted for the cap, in lexicographic order.
    pub fn monomials(self, cap: u32) -> Vec<(u32, u32, u32)> {
        let mut out = Vec::new();
        for i in 0..=cap {
            for j in 0..=cap - i {
                for k in 0..=cap - i - j {
                    if self.admits((i, j, k), cap) {
                        out.push((i, j, k));
                    }
                }
            }
        }
        out
    }
}

/// Uniform `[−1, 1]` draw on both sides over the admitted monomials.
pub fn random_perturbation<R: Rng>(
    rng: &mut R,
    caps: (u32, u32, u32),
    convention: MonomialConvention,
) -> Perturbation {
    let (m, n, p) = caps;
    let mut g = Perturbation::zero(m, n, p);
    for (c, cap) in [(Component::P, m), (Component::Q, n), (Component::R, p)] {
        for key in convention.monomials(cap) {
            for side in [Side::Plus, Side::Minus] {
                let v: f64 = rng.gen_range(-1.0..=1.0);
                g.set(c, side, key, v).expect("admitted monomials respect the cap");
            }
        }
    }
    g
}

fn ambiguous(coeffs: &[f64]) -> bool {
    let max = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    coeffs.iter().any(|c| {
        let r = c.abs() / max;
        r > STRUCTURAL_REL && r <= NONZERO_REL
    })
}

/// Generic degree of `M` over random draws: the largest `j` with
/// `|I_j| > 1e-6 · max|I_k|`, maximized over `trials`.
///
/// A draw with a coefficient strictly between the structural-zero level and
/// the nonzero threshold is an accidental near-cancellation and is redrawn,
/// at most [`MAX_REDRAWS`] times per trial.
pub fn degree_probe(
    field: &CylinderField,
    caps: (u32, u32, u32),
    mode: MalkinMode,
    trials: usize,
    delta: f64,
    seed: u64,
    convention: MonomialConvention,
) -> Result<usize> {
    if trials == 0 {
        return Err(Error::invalid("trials", "must be >= 1"));
    }
    let phi = TransitionFunction::new(delta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    for _ in 0..trials {
        let mut redraws = 0;
        let poly = loop {
            let g = random_perturbation(&mut rng, caps, convention);
            let cfg = SystemConfig::new(field.clone(), g, phi, 0.0)?;
            let poly = extract_polynomial(&cfg, mode, PROBE_TOL)?;
            if !ambiguous(&poly.coeffs) || redraws == MAX_REDRAWS {
                break poly;
            }
            redraws += 1;
        };
        if let Some(d) = poly.degree(NONZERO_REL) {
            best = best.max(d);
        }
    }
    Ok(best)
}

/// One `(n, p)` entry of a degree table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableCell {
    pub m: u32,
    pub n: u32,
    pub p: u32,
    pub smooth: usize,
    pub nonsmooth: usize,
}

impl TableCell {
    /// `"1 (2)"` when the modes differ, `"2"` otherwise.
    pub fn label(&self) -> String {
        if self.smooth == self.nonsmooth {
            self.smooth.to_string()
        } else {
            format!("{} ({})", self.smooth, self.nonsmooth)
        }
    }
}

/// The `(m+1)²` cells `0 ≤ n, p ≤ m` for fixed `m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeTable {
    pub m: u32,
    pub convention: MonomialConvention,
    pub cells: Vec<TableCell>,
}

impl DegreeTable {
    pub fn get(&self, n: u32, p: u32) -> Option<&TableCell> {
        self.cells.iter().find(|c| c.n == n && c.p == p)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TableOptions {
    pub trials: usize,
    pub delta: f64,
    pub seed: u64,
    pub convention: MonomialConvention,
}

impl Default for TableOptions {
    fn default() -> Self {
        Self {
            trials: 20,
            delta: 0.0,
            seed: 0,
            convention: MonomialConvention::TotalDegree,
        }
    }
}

/// Stream seed of one cell, so the table does not depend on evaluation order.
fn cell_seed(seed: u64, m: u32, n: u32, p: u32, mode: MalkinMode) -> u64 {
    let tag = match mode {
        MalkinMode::Smooth => 0u64,
        MalkinMode::NonsmoothRegularized => 1,
    };
    let mut x = seed ^ 0x9E37_79B9_7F4A_7C15;
    for v in [m as u64, n as u64, p as u64, tag] {
        // splitmix64 step
        x = x.wrapping_add(v.wrapping_add(0x9E37_79B9_7F4A_7C15));
        let mut z = x;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        x = z ^ (z >> 31);
    }
    x
}

/// Probes every cell of the table for `m`, in parallel.
pub fn degree_table(field: &CylinderField, m: u32, opts: TableOptions) -> Result<DegreeTable> {
    let pairs: Vec<(u32, u32)> = (0..=m).flat_map(|n| (0..=m).map(move |p| (n, p))).collect();
    let cells = pairs
        .par_iter()
        .map(|&(n, p)| {
            let probe = |mode| {
                degree_probe(
                    field,
                    (m, n, p),
                    mode,
                    opts.trials,
                    opts.delta,
                    cell_seed(opts.seed, m, n, p, mode),
                    opts.convention,
                )
            };
            Ok(TableCell {
                m,
                n,
                p,
                smooth: probe(MalkinMode::Smooth)?,
                nonsmooth: probe(MalkinMode::NonsmoothRegularized)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DegreeTable {
        m,
        convention: opts.convention,
        cells,
    })
}
