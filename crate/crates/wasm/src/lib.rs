//! Browser bindings for the wave benchmark: simulation with a field snapshot,
//! operator spectrum, and the structural check.
//!
//! Each binding wraps a plain function returning `Result<_, String>` so the
//! logic can be tested natively.

use wasm_bindgen::prelude::*;

use phdg_core::scenario::{exact_paper_pulse, l2_error_state, snapshot_rows};
use phdg_core::spectrum::{spectrum_summary, OperatorKind};
use phdg_core::{simulate, structure_report, FluxParams, SimulationOptions, WaveBenchmark};

/// Largest element count accepted from the page.
pub const MAX_ELEMENTS: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Setup {
    pub elements: usize,
    pub degree: usize,
    pub beta: f64,
    pub tau: f64,
    pub xi: f64,
}

impl Setup {
    fn benchmark(&self) -> Result<WaveBenchmark, String> {
        if self.elements == 0 || self.elements > MAX_ELEMENTS {
            return Err(format!("elements must be in 1..={MAX_ELEMENTS}"));
        }
        if !(1..=6).contains(&self.degree) {
            return Err("degree must be in 1..=6".into());
        }
        let flux = FluxParams::new(self.beta, self.tau, self.xi).map_err(|e| e.to_string())?;
        let mut b = WaveBenchmark::with_flux(flux).with_elements(self.elements);
        b.k1 = self.degree;
        b.k2 = self.degree;
        Ok(b)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveData {
    pub times: Vec<f64>,
    pub hamiltonian: Vec<f64>,
    pub snapshot_time: f64,
    pub z: Vec<f64>,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    /// Characteristics solution at `z`; empty when `snapshot_time ≥ 2`.
    pub exact_p: Vec<f64>,
    pub exact_q: Vec<f64>,
    /// NaN when no exact solution is available.
    pub l2_error: f64,
}

/// Runs the benchmark up to `t_final` and samples the fields at the step
/// instant nearest to `snapshot`. `hamiltonian` is thinned to at most
/// `max_points` samples.
pub fn run_wave(setup: &Setup, t_final: f64, dt: f64, snapshot: f64, max_points: usize) -> Result<WaveData, String> {
    let bench = setup.benchmark()?;
    if !(t_final > 0.0 && t_final <= 10.0) {
        return Err("final time must be in (0, 10]".into());
    }
    if !(dt > 0.0 && t_final / dt <= 2e5) {
        return Err("time step must be positive and give at most 200000 steps".into());
    }
    let model = bench.model().map_err(|e| e.to_string())?;
    let (n_uniform, _) = SimulationOptions::new(t_final, dt).step_plan().map_err(|e| e.to_string())?;
    let snap_step = ((snapshot.clamp(0.0, t_final)) / dt).round().min(n_uniform as f64);
    let snapshot_time = snap_step * dt;
    let mut opts = SimulationOptions::new(t_final, dt);
    opts.snapshot_times = vec![snapshot_time];
    let traj = simulate(&model, &bench.inputs, &opts).map_err(|e| e.to_string())?;

    let stride = traj.times.len().div_ceil(max_points.max(2));
    let pick = |v: &[f64]| v.iter().step_by(stride.max(1)).copied().collect::<Vec<_>>();
    let x = traj.state_at(snapshot_time).map_err(|e| e.to_string())?;
    let rows = snapshot_rows(&model, x).map_err(|e| e.to_string())?;
    let z: Vec<f64> = rows.iter().map(|r| r.z).collect();
    let (exact_p, exact_q, l2) = if snapshot_time < 2.0 {
        let ex: Vec<(f64, f64)> = z.iter().map(|&z| exact_paper_pulse(z, snapshot_time).unwrap_or((0.0, 0.0))).collect();
        let err = l2_error_state(&model, x, |z| exact_paper_pulse(z, snapshot_time)).map_err(|e| e.to_string())?;
        (ex.iter().map(|e| e.0).collect(), ex.iter().map(|e| e.1).collect(), err)
    } else {
        (Vec::new(), Vec::new(), f64::NAN)
    };
    Ok(WaveData {
        times: pick(&traj.times),
        hamiltonian: pick(&traj.hamiltonian),
        snapshot_time,
        z,
        p: rows.iter().map(|r| r.p).collect(),
        q: rows.iter().map(|r| r.q).collect(),
        exact_p,
        exact_q,
        l2_error: l2,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumData {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    pub summary: String,
}

pub fn run_spectrum(setup: &Setup, structure_only: bool) -> Result<SpectrumData, String> {
    let bench = setup.benchmark()?;
    let model = bench.model().map_err(|e| e.to_string())?;
    let kind = if structure_only { OperatorKind::StructureOnly } else { OperatorKind::Full };
    let s = spectrum_summary(&model, kind).map_err(|e| e.to_string())?;
    Ok(SpectrumData {
        re: s.result.eigenvalues.iter().map(|z| z.re).collect(),
        im: s.result.eigenvalues.iter().map(|z| z.im).collect(),
        summary: s.to_string(),
    })
}

pub fn run_check(setup: &Setup) -> Result<String, String> {
    let model = setup.benchmark()?.model().map_err(|e| e.to_string())?;
    Ok(structure_report(&model).to_string())
}

#[wasm_bindgen]
pub struct WaveResult(WaveData);

#[wasm_bindgen]
impl WaveResult {
    pub fn times(&self) -> Vec<f64> {
        self.0.times.clone()
    }
    pub fn hamiltonian(&self) -> Vec<f64> {
        self.0.hamiltonian.clone()
    }
    pub fn snapshot_time(&self) -> f64 {
        self.0.snapshot_time
    }
    pub fn z(&self) -> Vec<f64> {
        self.0.z.clone()
    }
    pub fn p(&self) -> Vec<f64> {
        self.0.p.clone()
    }
    pub fn q(&self) -> Vec<f64> {
        self.0.q.clone()
    }
    pub fn exact_p(&self) -> Vec<f64> {
        self.0.exact_p.clone()
    }
    pub fn exact_q(&self) -> Vec<f64> {
        self.0.exact_q.clone()
    }
    pub fn l2_error(&self) -> f64 {
        self.0.l2_error
    }
}

#[wasm_bindgen]
pub struct SpectrumResult(SpectrumData);

#[wasm_bindgen]
impl SpectrumResult {
    pub fn re(&self) -> Vec<f64> {
        self.0.re.clone()
    }
    pub fn im(&self) -> Vec<f64> {
        self.0.im.clone()
    }
    pub fn summary(&self) -> String {
        self.0.summary.clone()
    }
}

#[allow(clippy::too_many_arguments)]
#[wasm_bindgen]
pub fn simulate_wave(
    elements: usize,
    degree: usize,
    beta: f64,
    tau: f64,
    xi: f64,
    t_final: f64,
    dt: f64,
    snapshot: f64,
) -> Result<WaveResult, JsError> {
    let setup = Setup { elements, degree, beta, tau, xi };
    run_wave(&setup, t_final, dt, snapshot, 1500).map(WaveResult).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn spectrum(elements: usize, degree: usize, beta: f64, tau: f64, xi: f64, structure_only: bool) -> Result<SpectrumResult, JsError> {
    let setup = Setup { elements, degree, beta, tau, xi };
    run_spectrum(&setup, structure_only).map(SpectrumResult).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn structure_check(elements: usize, degree: usize, beta: f64, tau: f64, xi: f64) -> Result<String, JsError> {
    run_check(&Setup { elements, degree, beta, tau, xi }).map_err(|e| JsError::new(&e))
}
