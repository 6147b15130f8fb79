//! JSON run configuration. Every section is optional and defaults to the wave
//! benchmark with the central flux; unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use phdg_core::simulate::{BoundarySignals, Signal, SimulationOptions};
use phdg_core::{
    assemble_global, BoundaryConditions, BoundaryKind, FluxParams, FluxPreset, GlobalPHModel, Mesh1D,
    ReferenceBasis,
};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MeshConfig {
    pub a: f64,
    pub b: f64,
    pub elements: usize,
}

impl Default for MeshConfig {
    fn default() -> Self {
        Self { a: 0.0, b: 1.0, elements: 50 }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DegreeConfig {
    pub k1: usize,
    pub k2: usize,
}

impl Default for DegreeConfig {
    fn default() -> Self {
        Self { k1: 1, k2: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MaterialConfig {
    pub c1: f64,
    pub c2: f64,
}

impl Default for MaterialConfig {
    fn default() -> Self {
        Self { c1: 1.0, c2: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitFlux {
    pub beta: f64,
    pub tau: f64,
    pub xi: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum FluxConfig {
    Preset(String),
    Explicit(ExplicitFlux),
}

impl Default for FluxConfig {
    fn default() -> Self {
        FluxConfig::Preset("central".into())
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundaryConfig {
    pub left: String,
    pub right: String,
}

impl Default for BoundaryConfig {
    fn default() -> Self {
        Self { left: "dirichlet".into(), right: "neumann".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InputConfig {
    pub u1: String,
    pub u2: String,
}

impl Default for InputConfig {
    fn default() -> Self {
        Self { u1: "paper_pulse".into(), u2: "zero".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimeConfig {
    pub t_final: f64,
    pub dt: f64,
    /// Row decimation of `hamiltonian.csv` and `outputs.csv`.
    pub output_every: usize,
}

impl Default for TimeConfig {
    fn default() -> Self {
        Self { t_final: 1.5, dt: 2.5e-4, output_every: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub mesh: MeshConfig,
    pub degrees: DegreeConfig,
    pub material: MaterialConfig,
    pub flux: FluxConfig,
    pub boundary: BoundaryConfig,
    pub inputs: InputConfig,
    pub time: TimeConfig,
    pub snapshot_times: Vec<f64>,
    pub output_dir: Option<PathBuf>,
    /// Coefficients in global DOF order; zero when absent.
    pub initial_state: Option<Vec<f64>>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mesh: MeshConfig::default(),
            degrees: DegreeConfig::default(),
            material: MaterialConfig::default(),
            flux: FluxConfig::default(),
            boundary: BoundaryConfig::default(),
            inputs: InputConfig::default(),
            time: TimeConfig::default(),
            snapshot_times: vec![0.5, 1.5],
            output_dir: None,
            initial_state: None,
        }
    }
}

/// Checked, ready-to-use form of a [`RunConfig`].
#[derive(Debug, Clone)]
pub struct Resolved {
    pub mesh: Mesh1D,
    pub phi: ReferenceBasis,
    pub psi: ReferenceBasis,
    pub flux: FluxParams,
    pub bc: BoundaryConditions,
    pub c1: f64,
    pub c2: f64,
    pub inputs: BoundarySignals,
    pub options: SimulationOptions,
    pub output_every: usize,
}

fn field_err(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{field}: {msg}"))
}

fn positive(field: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(field_err(field, format!("must be a positive finite number, got {v}")))
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn flux_params(&self) -> Result<FluxParams, CliError> {
        match &self.flux {
            FluxConfig::Preset(name) => name
                .parse::<FluxPreset>()
                .and_then(|p| p.params())
                .map_err(|e| field_err("flux", e)),
            FluxConfig::Explicit(f) => FluxParams::new(f.beta, f.tau, f.xi).map_err(|e| field_err("flux", e)),
        }
    }

    /// Validates every field and builds the domain objects.
    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let m = &self.mesh;
        if m.elements == 0 {
            return Err(field_err("mesh.elements", "must be at least 1"));
        }
        let mesh = Mesh1D::uniform(m.a, m.b, m.elements).map_err(|e| field_err("mesh", e))?;
        let phi = ReferenceBasis::new(self.degrees.k1).map_err(|e| field_err("degrees.k1", e))?;
        let psi = ReferenceBasis::new(self.degrees.k2).map_err(|e| field_err("degrees.k2", e))?;
        let c1 = positive("material.c1", self.material.c1)?;
        let c2 = positive("material.c2", self.material.c2)?;
        let flux = self.flux_params()?;
        let left = self.boundary.left.parse::<BoundaryKind>().map_err(|e| field_err("boundary.left", e))?;
        let right = self.boundary.right.parse::<BoundaryKind>().map_err(|e| field_err("boundary.right", e))?;
        let u1 = self.inputs.u1.parse::<Signal>().map_err(|e| field_err("inputs.u1", e))?;
        let u2 = self.inputs.u2.parse::<Signal>().map_err(|e| field_err("inputs.u2", e))?;

        let t = &self.time;
        if !(t.t_final >= 0.0 && t.t_final.is_finite()) {
            return Err(field_err("time.t_final", format!("must be >= 0, got {}", t.t_final)));
        }
        let dt = positive("time.dt", t.dt)?;
        if t.output_every == 0 {
            return Err(field_err("time.output_every", "must be at least 1"));
        }
        let options = SimulationOptions {
            t_final: t.t_final,
            dt,
            output_every: 0,
            snapshot_times: Vec::new(),
            initial_state: self.initial_state.clone(),
        };
        let (n_uniform, last) = options.step_plan().map_err(|e| field_err("time", e))?;
        let mut snapshot_times = Vec::with_capacity(self.snapshot_times.len());
        for &ts in &self.snapshot_times {
            let tol = 1e-9 * ts.abs().max(1.0);
            let on_grid = (0..=n_uniform).any(|i| (i as f64 * dt - ts).abs() <= tol)
                || (last.is_some() && (ts - t.t_final).abs() <= tol);
            if !on_grid {
                return Err(field_err(
                    "snapshot_times",
                    format!("{ts} is not a step instant of the grid 0, {dt}, ..., {}", t.t_final),
                ));
            }
            snapshot_times.push(ts);
        }

        let dofs = m.elements * (phi.len() + psi.len());
        if let Some(x0) = &self.initial_state {
            if x0.len() != dofs {
                return Err(field_err("initial_state", format!("expected {dofs} values, got {}", x0.len())));
            }
            if x0.iter().any(|v| !v.is_finite()) {
                return Err(field_err("initial_state", "contains non-finite values"));
            }
        }

        Ok(Resolved {
            mesh,
            phi,
            psi,
            flux,
            bc: BoundaryConditions::new(left, right),
            c1,
            c2,
            inputs: BoundarySignals::new(u1, u2),
            options: SimulationOptions { snapshot_times, ..options },
            output_every: t.output_every,
        })
    }
}

impl Resolved {
    pub fn model(&self) -> Result<GlobalPHModel, CliError> {
        Ok(assemble_global(&self.mesh, &self.phi, &self.psi, &self.flux, &self.bc, self.c1, self.c2)?)
    }
}
