use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use specidx::potential::BuiltinPotential;
use specidx::scatter1d::GridPolicy;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Geometric,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LamWindow {
    pub min: f64,
    pub max: f64,
    pub npoints: usize,
    pub spacing: Spacing,
}

impl LamWindow {
    pub fn grid(&self) -> Vec<f64> {
        match self.spacing {
            Spacing::Geometric => specidx::xindex::geometric_grid(self.min, self.max, self.npoints),
            Spacing::Linear => specidx::xindex::linear_grid(self.min, self.max, self.npoints),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Eigenphase distance to π below which Ξ is expected to be undefined.
    pub phase_tol: f64,
    /// Largest branch motion between neighbouring flow samples before refinement.
    pub refine_step: f64,
    pub max_flow_points: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        let g = GridPolicy::default();
        Self {
            phase_tol: 1e-3,
            refine_step: g.refine_step,
            max_flow_points: g.max_points,
        }
    }
}

/// Everything a run depends on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub potential: BuiltinPotential,
    pub lam_window: LamWindow,
    pub nquad: usize,
    pub ode_tol: f64,
    pub tolerances: Tolerances,
    /// CSV path; the JSON sidecar sits next to it with extension `.json`.
    pub output_path: Option<PathBuf>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            potential: BuiltinPotential::Gaussian { depth: 8.0, width: 1.0 },
            lam_window: LamWindow {
                min: 0.06,
                max: 24.0,
                npoints: 40,
                spacing: Spacing::Geometric,
            },
            nquad: 64,
            ode_tol: 1e-10,
            tolerances: Tolerances::default(),
            output_path: None,
            seed: 20240611,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn policy(&self) -> GridPolicy {
        GridPolicy {
            refine_step: self.tolerances.refine_step,
            max_points: self.tolerances.max_flow_points,
            ode_tol: self.ode_tol,
            ..GridPolicy::default()
        }
    }

    /// Checks the invariants shared by all commands.
    pub fn validate(&self) -> Result<(), CliError> {
        let w = &self.lam_window;
        let bad = |m: String| Err(CliError::Config(m));
        if !(w.min > 0.0 && w.min.is_finite()) {
            return bad(format!("lam-min must be positive, got {}", w.min));
        }
        if !(w.max >= w.min && w.max.is_finite()) {
            return bad(format!("lam-max must be at least lam-min, got {}", w.max));
        }
        if w.npoints == 0 || (w.npoints > 1 && w.max == w.min) {
            return bad("the lambda window needs at least one point and a nonempty range".into());
        }
        if self.nquad < specidx::bsop::MIN_NQUAD {
            return bad(format!("nquad must be at least {}", specidx::bsop::MIN_NQUAD));
        }
        let t = &self.tolerances;
        if !(self.ode_tol > 0.0 && t.phase_tol > 0.0 && t.refine_step > 0.0) || t.max_flow_points < 2 {
            return bad("tolerances must be positive".into());
        }
        self.potential.build().map_err(|e| CliError::Config(format!("potential: {e}")))?;
        Ok(())
    }

    pub fn csv_path(&self, command: &str) -> PathBuf {
        self.output_path
            .clone()
            .unwrap_or_else(|| PathBuf::from(format!("{command}.csv")))
    }

    pub fn json_path(&self, command: &str) -> PathBuf {
        self.csv_path(command).with_extension("json")
    }
}
