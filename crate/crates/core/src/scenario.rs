//! Wave-equation benchmark on `[0, 1]` and its analytic oracles.
//!
//! With `c1 = c2 = 1`, `p = x1`, `q = x2`, the system `∂t p = -∂z q`,
//! `∂t q = -∂z p` is driven by `p(0, t) = u1(t)` and closed by `q(1, t) = 0`.

use std::f64::consts::PI;

use crate::assembly::{assemble_global, BoundaryConditions, GlobalPHModel};
use crate::basis::{gauss_rule, ReferenceBasis};
use crate::error::{Error, Result};
use crate::flux::FluxParams;
use crate::mesh::Mesh1D;
use crate::simulate::{simulate, BoundarySignals, Signal, SimulationOptions, Trajectory};

#[derive(Debug, Clone, PartialEq)]
pub struct WaveBenchmark {
    pub n_elements: usize,
    pub k1: usize,
    pub k2: usize,
    pub c1: f64,
    pub c2: f64,
    pub bc: BoundaryConditions,
    pub inputs: BoundarySignals,
    pub flux: FluxParams,
    pub t_final: f64,
    pub dt: f64,
    pub snapshot_times: Vec<f64>,
}

impl Default for WaveBenchmark {
    fn default() -> Self {
        Self {
            n_elements: 50,
            k1: 1,
            k2: 1,
            c1: 1.0,
            c2: 1.0,
            bc: BoundaryConditions::default(),
            inputs: BoundarySignals::new(Signal::PaperPulse, Signal::Zero),
            flux: FluxParams::central(),
            t_final: 1.5,
            dt: 2.5e-4,
            snapshot_times: vec![0.5, 1.5],
        }
    }
}

impl WaveBenchmark {
    pub fn with_flux(flux: FluxParams) -> Self {
        Self { flux, ..Self::default() }
    }

    pub fn with_elements(mut self, n: usize) -> Self {
        self.n_elements = n;
        self
    }

    pub fn mesh(&self) -> Result<Mesh1D> {
        Mesh1D::uniform(0.0, 1.0, self.n_elements)
    }

    pub fn model(&self) -> Result<GlobalPHModel> {
        let phi = ReferenceBasis::new(self.k1)?;
        let psi = ReferenceBasis::new(self.k2)?;
        assemble_global(&self.mesh()?, &phi, &psi, &self.flux, &self.bc, self.c1, self.c2)
    }

    pub fn options(&self) -> SimulationOptions {
        SimulationOptions {
            t_final: self.t_final,
            dt: self.dt,
            output_every: 0,
            snapshot_times: self.snapshot_times.clone(),
            initial_state: None,
        }
    }

    pub fn run(&self) -> Result<(GlobalPHModel, Trajectory)> {
        let model = self.model()?;
        let traj = simulate(&model, &self.inputs, &self.options())?;
        Ok((model, traj))
    }
}

/// Characteristics solution `(p, q)` for the pulse entering at `z = 0` and
/// reflecting at `z = 1`; valid for `0 ≤ t < 2`. `u1` is taken as zero for
/// negative arguments.
pub fn exact_pulse_solution(z: f64, t: f64, u1: impl Fn(f64) -> f64) -> Result<(f64, f64)> {
    if !(0.0..2.0).contains(&t) {
        return Err(Error::InvalidParameter(format!("characteristics solution needs 0 <= t < 2, got {t}")));
    }
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::InvalidParameter(format!("z = {z} outside [0, 1]")));
    }
    let f = |s: f64| if s < 0.0 { 0.0 } else { u1(s) };
    let right = f(t - z);
    let left = f(t + z - 2.0);
    Ok((right + left, right - left))
}

/// [`exact_pulse_solution`] for the benchmark pulse.
pub fn exact_paper_pulse(z: f64, t: f64) -> Result<(f64, f64)> {
    exact_pulse_solution(z, t, |s| Signal::PaperPulse.eval(s))
}

/// Quarter-wave eigenfrequencies `(2m - 1) π / 2`, `m = 1..=m_max`.
pub fn exact_eigenfrequencies(m_max: usize) -> Vec<f64> {
    (1..=m_max).map(|m| (2 * m - 1) as f64 * PI / 2.0).collect()
}

/// `‖(x1_h, x2_h) - (p, q)‖_{L2}` with per-element Gauss quadrature of
/// `max(k1, k2) + 2` points.
pub fn l2_error_state(model: &GlobalPHModel, x: &[f64], exact: impl Fn(f64) -> Result<(f64, f64)>) -> Result<f64> {
    model.check_dim(x)?;
    let k = model.phi.degree().max(model.psi.degree());
    let rule = gauss_rule(k + 2)?;
    let mut sum = 0.0;
    for (e, (za, zb)) in model.mesh.intervals().enumerate() {
        let h = zb - za;
        for (&zeta, &w) in rule.points.iter().zip(&rule.weights) {
            let (ph, qh) = model.evaluate(x, e, zeta)?;
            let (p, q) = exact(za + h * zeta)?;
            sum += h * w * ((ph - p).powi(2) + (qh - q).powi(2));
        }
    }
    Ok(sum.sqrt())
}

/// L2 error of the stored state at time `t`.
pub fn l2_error(
    model: &GlobalPHModel,
    traj: &Trajectory,
    t: f64,
    exact: impl Fn(f64) -> Result<(f64, f64)>,
) -> Result<f64> {
    l2_error_state(model, traj.state_at(t)?, exact)
}

/// One sample of a discontinuous field snapshot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnapshotRow {
    pub element: usize,
    pub local_node: usize,
    pub z: f64,
    pub p: f64,
    pub q: f64,
}

/// Both fields sampled at the nodes of the higher-degree basis of every
/// element. Interface coordinates appear once per adjacent element.
pub fn snapshot_rows(model: &GlobalPHModel, x: &[f64]) -> Result<Vec<SnapshotRow>> {
    model.check_dim(x)?;
    let nodes = if model.phi.degree() >= model.psi.degree() { model.phi.nodes() } else { model.psi.nodes() };
    let mut rows = Vec::with_capacity(model.n_elements() * nodes.len());
    for (e, (za, zb)) in model.mesh.intervals().enumerate() {
        for (j, &zeta) in nodes.iter().enumerate() {
            let (p, q) = model.evaluate(x, e, zeta)?;
            let z = if j == 0 { za } else if j + 1 == nodes.len() { zb } else { za + (zb - za) * zeta };
            rows.push(SnapshotRow { element: e, local_node: j, z, p, q });
        }
    }
    Ok(rows)
}

/// Nodal interpolant of given fields (`x1` at the `φ` nodes, `x2` at the `ψ` nodes).
pub fn interpolate_state(model: &GlobalPHModel, f: impl Fn(f64) -> Result<(f64, f64)>) -> Result<Vec<f64>> {
    let mut x = vec![0.0; model.n_dof()];
    let d = model.dofs;
    for (e, (za, zb)) in model.mesh.intervals().enumerate() {
        for (j, &zeta) in model.phi.nodes().iter().enumerate() {
            x[d.index(e, crate::assembly::Field::X1, j)] = f(za + (zb - za) * zeta)?.0;
        }
        for (j, &zeta) in model.psi.nodes().iter().enumerate() {
            x[d.index(e, crate::assembly::Field::X2, j)] = f(za + (zb - za) * zeta)?.1;
        }
    }
    Ok(x)
}
