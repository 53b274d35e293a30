use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::PoincareOptions;
use crate::malkin::MalkinMode;
use crate::model::{
    Component, CylinderField, FieldMode, HTerm, Perturbation, Side, SystemConfig, TransitionFunction,
};
use crate::ode::OdeOptions;

/// Analysis mode selected on the command line or in the config.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RunMode {
    /// `g⁺` on both sides.
    Smooth,
    /// Discontinuous field; `M` at `δ = 0`.
    Nonsmooth,
    /// Regularized field and `M_δ` at the configured `δ`.
    Regularized,
}

impl RunMode {
    pub fn malkin_mode(self) -> MalkinMode {
        match self {
            RunMode::Smooth => MalkinMode::Smooth,
            RunMode::Nonsmooth | RunMode::Regularized => MalkinMode::NonsmoothRegularized,
        }
    }

    pub fn field_mode(self) -> FieldMode {
        match self {
            RunMode::Regularized => FieldMode::Regularized,
            RunMode::Smooth | RunMode::Nonsmooth => FieldMode::Nonsmooth,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RunMode::Smooth => "smooth",
            RunMode::Nonsmooth => "nonsmooth",
            RunMode::Regularized => "regularized",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
    pub k: u32,
    pub coeff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// `[coeff, i, j]` for `coeff · x^i y^j / r^{i+j}`.
    pub h_terms: Vec<(f64, u32, u32)>,
    pub m: u32,
    pub n: u32,
    pub p: u32,
    pub p_plus: Vec<Monomial>,
    pub p_minus: Vec<Monomial>,
    pub q_plus: Vec<Monomial>,
    pub q_minus: Vec<Monomial>,
    pub r_plus: Vec<Monomial>,
    pub r_minus: Vec<Monomial>,
    pub delta: f64,
    pub epsilon_list: Vec<f64>,
    pub mode: RunMode,
    pub quad_tol: f64,
    pub ode_rtol: f64,
    pub ode_atol: f64,
    pub seed: u64,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            h_terms: vec![(1.0, 1, 0)],
            m: 0,
            n: 0,
            p: 0,
            p_plus: Vec::new(),
            p_minus: Vec::new(),
            q_plus: Vec::new(),
            q_minus: Vec::new(),
            r_plus: Vec::new(),
            r_minus: Vec::new(),
            delta: 0.0,
            epsilon_list: vec![1e-2],
            mode: RunMode::Nonsmooth,
            quad_tol: 1e-10,
            ode_rtol: 1e-12,
            ode_atol: 1e-14,
            seed: 0,
            output_dir: PathBuf::from("out"),
        }
    }
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("must be positive and finite, got {v}")))
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    /// Checks everything except admissibility of `h`, which `check` reports.
    pub fn validate(&self) -> Result<()> {
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(Error::invalid("delta", format!("must be finite and >= 0, got {}", self.delta)));
        }
        for (k, &e) in self.epsilon_list.iter().enumerate() {
            if !e.is_finite() || e == 0.0 {
                return Err(Error::invalid(
                    format!("epsilon_list[{k}]"),
                    format!("must be finite and nonzero, got {e}"),
                ));
            }
        }
        positive("quad_tol", self.quad_tol)?;
        positive("ode_rtol", self.ode_rtol)?;
        positive("ode_atol", self.ode_atol)?;
        self.field()?;
        self.perturbation()?;
        Ok(())
    }

    pub fn field(&self) -> Result<CylinderField> {
        let terms = self
            .h_terms
            .iter()
            .map(|&(c, i, j)| HTerm::new(c, i, j))
            .collect();
        CylinderField::new(terms).map_err(|e| match e {
            Error::Invalid { reason, .. } => Error::invalid("h_terms", reason),
            other => other,
        })
    }

    pub fn perturbation(&self) -> Result<Perturbation> {
        let mut g = Perturbation::zero(self.m, self.n, self.p);
        let blocks = [
            (Component::P, Side::Plus, &self.p_plus),
            (Component::P, Side::Minus, &self.p_minus),
            (Component::Q, Side::Plus, &self.q_plus),
            (Component::Q, Side::Minus, &self.q_minus),
            (Component::R, Side::Plus, &self.r_plus),
            (Component::R, Side::Minus, &self.r_minus),
        ];
        for (c, side, block) in blocks {
            for mono in block.iter() {
                let key = (mono.i, mono.j, mono.k);
                if g.poly(c, side).get(key) != 0.0 {
                    return Err(Error::invalid(
                        format!("{}_{}", c.name(), side.suffix()),
                        format!("monomial {key:?} listed twice"),
                    ));
                }
                g.set(c, side, key, mono.coeff)?;
            }
        }
        Ok(g)
    }

    /// `δ` used for `M` and the flow: zero in non-smooth mode.
    pub fn effective_delta(&self) -> f64 {
        match self.mode {
            RunMode::Regularized => self.delta,
            RunMode::Smooth | RunMode::Nonsmooth => 0.0,
        }
    }

    /// The system at `ε = 0`; smooth mode copies `g⁺` onto both sides.
    pub fn system(&self) -> Result<SystemConfig> {
        let pert = self.perturbation()?;
        let pert = if self.mode == RunMode::Smooth {
            pert.symmetrized()
        } else {
            pert
        };
        SystemConfig::new(self.field()?, pert, TransitionFunction::new(self.effective_delta())?, 0.0)
    }

    pub fn ode_options(&self) -> OdeOptions {
        OdeOptions::tol(self.ode_rtol, self.ode_atol)
    }

    pub fn poincare_options(&self) -> PoincareOptions {
        PoincareOptions::with_ode(self.ode_options())
    }
}
