//! Implicit midpoint integration, Hamiltonian and power diagnostics, and the
//! co-energy state transformation `X̃ = M X`.

use std::f64::consts::PI;
use std::str::FromStr;

use crate::assembly::GlobalPHModel;
use crate::error::{Error, Result};
use crate::linalg::{BandedLu, SparseMatrix};

/// Boundary inputs `(u1, u2)` at the left and right end.
pub trait InputSignal {
    fn inputs(&self, t: f64) -> [f64; 2];
}

impl<F: Fn(f64) -> [f64; 2]> InputSignal for F {
    fn inputs(&self, t: f64) -> [f64; 2] {
        self(t)
    }
}

/// Built-in scalar signals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Signal {
    Zero,
    Constant(f64),
    /// `amplitude · sin(2π frequency t)` on `[0, t_off)`, zero afterwards.
    Sine { amplitude: f64, frequency: f64, t_off: f64 },
    /// `sin(8πt)` on `[0, 0.125)`, zero afterwards.
    PaperPulse,
}

impl Signal {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Signal::Zero => 0.0,
            Signal::Constant(v) => v,
            Signal::Sine { amplitude, frequency, t_off } => {
                if (0.0..t_off).contains(&t) {
                    amplitude * (2.0 * PI * frequency * t).sin()
                } else {
                    0.0
                }
            }
            Signal::PaperPulse => {
                if (0.0..0.125).contains(&t) {
                    (8.0 * PI * t).sin()
                } else {
                    0.0
                }
            }
        }
    }

    /// Time from which the signal is identically zero, if any.
    pub fn vanishes_after(&self) -> Option<f64> {
        match *self {
            Signal::Zero => Some(0.0),
            Signal::Constant(v) => (v == 0.0).then_some(0.0),
            Signal::Sine { amplitude, t_off, .. } => Some(if amplitude == 0.0 { 0.0 } else { t_off.max(0.0) }),
            Signal::PaperPulse => Some(0.125),
        }
    }
}

impl FromStr for Signal {
    type Err = Error;

    /// `paper_pulse`, `zero`, `constant:<v>`, `sine:<amp>:<freq>:<t_off>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unknown signal `{s}`"));
        let num = |v: &str| -> Result<f64> {
            v.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::InvalidParameter(format!("bad number `{v}` in signal `{s}`")))
        };
        let parts: Vec<&str> = s.trim().split(':').collect();
        match parts.as_slice() {
            ["paper_pulse"] => Ok(Signal::PaperPulse),
            ["zero"] => Ok(Signal::Zero),
            ["constant", v] => Ok(Signal::Constant(num(v)?)),
            ["sine", a, f, off] => Ok(Signal::Sine {
                amplitude: num(a)?,
                frequency: num(f)?,
                t_off: num(off)?,
            }),
            _ => Err(bad()),
        }
    }
}

impl std::fmt::Display for Signal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Signal::Zero => write!(f, "zero"),
            Signal::Constant(v) => write!(f, "constant:{v}"),
            Signal::Sine { amplitude, frequency, t_off } => write!(f, "sine:{amplitude}:{frequency}:{t_off}"),
            Signal::PaperPulse => write!(f, "paper_pulse"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySignals {
    pub u1: Signal,
    pub u2: Signal,
}

impl BoundarySignals {
    pub fn new(u1: Signal, u2: Signal) -> Self {
        Self { u1, u2 }
    }

    pub fn zero() -> Self {
        Self::new(Signal::Zero, Signal::Zero)
    }

    pub fn vanishes_after(&self) -> Option<f64> {
        Some(self.u1.vanishes_after()?.max(self.u2.vanishes_after()?))
    }
}

impl InputSignal for BoundarySignals {
    fn inputs(&self, t: f64) -> [f64; 2] {
        [self.u1.eval(t), self.u2.eval(t)]
    }
}

/// `½ Xᵀ Q M X`.
pub fn hamiltonian(model: &GlobalPHModel, x: &[f64]) -> Result<f64> {
    model.check_dim(x)?;
    Ok(model.hamiltonian(x))
}

/// A linear PH model `E Ẋ = A X + G U` with a quadratic energy, in whichever
/// coordinates it is written.
pub trait PhForm {
    fn n_dof(&self) -> usize;
    /// Left-hand matrix `E`.
    fn lhs(&self) -> SparseMatrix;
    /// `A`, so that the efforts enter as `(J - R) e(X) = A X`.
    fn operator(&self) -> SparseMatrix;
    fn input_matrix(&self) -> &SparseMatrix;
    fn dissipation(&self) -> &SparseMatrix;
    fn efforts(&self, x: &[f64]) -> Vec<f64>;
    fn energy(&self, x: &[f64]) -> f64;
}

impl PhForm for GlobalPHModel {
    fn n_dof(&self) -> usize {
        GlobalPHModel::n_dof(self)
    }
    fn lhs(&self) -> SparseMatrix {
        self.mass.to_sparse()
    }
    fn operator(&self) -> SparseMatrix {
        self.structure_minus_dissipation().scale_columns(&self.q)
    }
    fn input_matrix(&self) -> &SparseMatrix {
        &self.g
    }
    fn dissipation(&self) -> &SparseMatrix {
        &self.r
    }
    fn efforts(&self, x: &[f64]) -> Vec<f64> {
        GlobalPHModel::efforts(self, x)
    }
    fn energy(&self, x: &[f64]) -> f64 {
        self.hamiltonian(x)
    }
}

/// Model in co-energy coordinates `X̃ = M X`:
/// `X̃̇ = (J - R) E + G U` with `E = Q M⁻¹ X̃`.
#[derive(Debug, Clone)]
pub struct CoenergyModel<'a> {
    pub model: &'a GlobalPHModel,
    /// `Q M⁻¹`, block diagonal.
    pub effort_map: SparseMatrix,
}

pub fn coenergy_transform(model: &GlobalPHModel) -> CoenergyModel<'_> {
    CoenergyModel { model, effort_map: model.mass.inverse_sparse().scale_rows(&model.q) }
}

impl CoenergyModel<'_> {
    /// `X̃ = M X`.
    pub fn to_coenergy(&self, x: &[f64]) -> Vec<f64> {
        self.model.mass.mul_vec(x)
    }

    /// `X = M⁻¹ X̃`.
    pub fn from_coenergy(&self, xt: &[f64]) -> Vec<f64> {
        self.model.mass.solve(xt)
    }
}

impl PhForm for CoenergyModel<'_> {
    fn n_dof(&self) -> usize {
        self.model.n_dof()
    }
    fn lhs(&self) -> SparseMatrix {
        SparseMatrix::identity(self.n_dof())
    }
    fn operator(&self) -> SparseMatrix {
        self.model.structure_minus_dissipation().matmul(&self.effort_map)
    }
    fn input_matrix(&self) -> &SparseMatrix {
        &self.model.g
    }
    fn dissipation(&self) -> &SparseMatrix {
        &self.model.r
    }
    fn efforts(&self, xt: &[f64]) -> Vec<f64> {
        self.effort_map.mul_vec(xt)
    }
    /// `½ X̃ᵀ Q M⁻¹ X̃`.
    fn energy(&self, xt: &[f64]) -> f64 {
        0.5 * xt.iter().zip(self.efforts(xt)).map(|(a, b)| a * b).sum::<f64>()
    }
}

/// One implicit midpoint step with a fixed step size:
/// `(E - dt/2 A) X⁺ = (E + dt/2 A) X + dt G U(t + dt/2)`.
#[derive(Debug, Clone)]
pub struct MidpointStepper {
    dt: f64,
    lu: BandedLu,
    explicit: SparseMatrix,
    g: SparseMatrix,
}

impl MidpointStepper {
    pub fn new<S: PhForm + ?Sized>(system: &S, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("time step must be positive, got {dt}")));
        }
        let e = system.lhs();
        let a = system.operator();
        let implicit = e.add_scaled(-0.5 * dt, &a);
        Ok(Self {
            dt,
            lu: BandedLu::factor(&implicit)?,
            explicit: e.add_scaled(0.5 * dt, &a),
            g: system.input_matrix().clone(),
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Advances `x` from `t` to `t + dt`; returns the midpoint input used.
    pub fn step(&self, x: &mut [f64], t: f64, u: &dyn InputSignal) -> [f64; 2] {
        let um = u.inputs(t + 0.5 * self.dt);
        let mut rhs = self.explicit.mul_vec(x);
        let gu = self.g.mul_vec(&um);
        for (r, g) in rhs.iter_mut().zip(gu) {
            *r += self.dt * g;
        }
        self.lu.solve_in_place(&mut rhs);
        x.copy_from_slice(&rhs);
        um
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationOptions {
    pub t_final: f64,
    pub dt: f64,
    /// Store the state every this many steps (0 disables periodic storage).
    pub output_every: usize,
    /// Additional instants at which the state is stored; must lie on the step grid.
    pub snapshot_times: Vec<f64>,
    /// Zero when absent.
    pub initial_state: Option<Vec<f64>>,
}

impl SimulationOptions {
    pub fn new(t_final: f64, dt: f64) -> Self {
        Self { t_final, dt, output_every: 0, snapshot_times: Vec::new(), initial_state: None }
    }

    /// Step sizes covering `[0, T]`: uniform steps, with a shortened last step
    /// when `T / dt` is not an integer.
    pub fn step_plan(&self) -> Result<(usize, Option<f64>)> {
        let (t, dt) = (self.t_final, self.dt);
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(format!("final time must be >= 0, got {t}")));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("time step must be positive, got {dt}")));
        }
        let n = (t / dt).round();
        if (n * dt - t).abs() <= 1e-9 * t.max(dt) {
            return Ok((n as usize, None));
        }
        let full = (t / dt).floor();
        Ok((full as usize, Some(t - full * dt)))
    }
}

/// Recorded simulation data.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Step instants `t_0 = 0, ..., t_n = T`.
    pub times: Vec<f64>,
    /// `Ĥ(t_n)`, one entry per step instant.
    pub hamiltonian: Vec<f64>,
    /// Step midpoints `t_n + dt_n / 2`.
    pub midpoint_times: Vec<f64>,
    /// `U` at the step midpoints.
    pub inputs: Vec<[f64; 2]>,
    /// `Y = Gᵀ E` at the midpoint states.
    pub outputs: Vec<[f64; 2]>,
    /// `ΔĤ - dt (Yᵀ U - Eᵀ R E)` per step.
    pub power_residuals: Vec<f64>,
    pub state_times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn n_steps(&self) -> usize {
        self.times.len() - 1
    }

    /// Stored state at `t` (tolerance `1e-9 · max(1, |t|)`).
    pub fn state_at(&self, t: f64) -> Result<&[f64]> {
        let tol = 1e-9 * t.abs().max(1.0);
        self.state_times
            .iter()
            .position(|&s| (s - t).abs() <= tol)
            .map(|i| self.states[i].as_slice())
            .ok_or(Error::TimeNotSampled(t))
    }

    pub fn max_hamiltonian(&self) -> f64 {
        self.hamiltonian.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_abs_residual(&self) -> f64 {
        self.power_residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    /// Index of the first step instant `≥ t` (within `1e-9 · max(1, |t|)`).
    pub fn index_at_or_after(&self, t: f64) -> Option<usize> {
        let tol = 1e-9 * t.abs().max(1.0);
        self.times.iter().position(|&s| s >= t - tol)
    }
}

/// Runs the implicit midpoint rule on the original model.
pub fn simulate(model: &GlobalPHModel, u: &dyn InputSignal, opts: &SimulationOptions) -> Result<Trajectory> {
    run(model, u, opts, None)
}

impl CoenergyModel<'_> {
    /// Runs the implicit midpoint rule in co-energy coordinates. The initial
    /// state in `opts` is given in the original coordinates; stored states are
    /// co-energy states.
    pub fn simulate(&self, u: &dyn InputSignal, opts: &SimulationOptions) -> Result<Trajectory> {
        let x0 = opts.initial_state.as_ref().map(|x| {
            self.model.check_dim(x)?;
            Ok::<_, Error>(self.to_coenergy(x))
        });
        run(self, u, opts, x0.transpose()?)
    }
}

fn run<S: PhForm>(
    system: &S,
    u: &dyn InputSignal,
    opts: &SimulationOptions,
    x0_override: Option<Vec<f64>>,
) -> Result<Trajectory> {
    let n = system.n_dof();
    let (n_uniform, last) = opts.step_plan()?;
    let n_steps = n_uniform + usize::from(last.is_some());
    let step_time = |i: usize| if i <= n_uniform { i as f64 * opts.dt } else { opts.t_final };

    let mut snapshot_steps = Vec::with_capacity(opts.snapshot_times.len());
    for &ts in &opts.snapshot_times {
        let tol = 1e-9 * ts.abs().max(1.0);
        let idx = (0..=n_steps).find(|&i| (step_time(i) - ts).abs() <= tol);
        match idx {
            Some(i) => snapshot_steps.push(i),
            None => {
                return Err(Error::InvalidParameter(format!(
                    "snapshot time {ts} is not a step instant in [0, {}]",
                    opts.t_final
                )))
            }
        }
    }

    let mut x = match (x0_override, &opts.initial_state) {
        (Some(x), _) => x,
        (None, Some(x)) => x.clone(),
        (None, None) => vec![0.0; n],
    };
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: x.len() });
    }

    let full = if n_uniform > 0 { Some(MidpointStepper::new(system, opts.dt)?) } else { None };
    let short = last.map(|dt| MidpointStepper::new(system, dt)).transpose()?;

    let store = |i: usize| (opts.output_every > 0 && i % opts.output_every == 0) || snapshot_steps.contains(&i);
    let mut traj = Trajectory {
        times: Vec::with_capacity(n_steps + 1),
        hamiltonian: Vec::with_capacity(n_steps + 1),
        midpoint_times: Vec::with_capacity(n_steps),
        inputs: Vec::with_capacity(n_steps),
        outputs: Vec::with_capacity(n_steps),
        power_residuals: Vec::with_capacity(n_steps),
        state_times: Vec::new(),
        states: Vec::new(),
    };

    let mut h = system.energy(&x);
    traj.times.push(0.0);
    traj.hamiltonian.push(h);
    if store(0) {
        traj.state_times.push(0.0);
        traj.states.push(x.clone());
    }

    let mut x_prev = x.clone();
    for i in 0..n_steps {
        let stepper = if i < n_uniform { full.as_ref() } else { short.as_ref() }.expect("stepper for step");
        let t = step_time(i);
        let dt = stepper.dt();
        x_prev.copy_from_slice(&x);
        let um = stepper.step(&mut x, t, u);

        let xm: Vec<f64> = x_prev.iter().zip(&x).map(|(a, b)| 0.5 * (a + b)).collect();
        let em = system.efforts(&xm);
        let ym = system.input_matrix().transpose_mul_vec(&em);
        let rem = system.dissipation().mul_vec(&em);
        let diss: f64 = em.iter().zip(&rem).map(|(a, b)| a * b).sum();
        let h_next = system.energy(&x);
        let supply = ym[0] * um[0] + ym[1] * um[1];

        let t_next = step_time(i + 1);
        traj.times.push(t_next);
        traj.hamiltonian.push(h_next);
        traj.midpoint_times.push(t + 0.5 * dt);
        traj.inputs.push(um);
        traj.outputs.push([ym[0], ym[1]]);
        traj.power_residuals.push((h_next - h) - dt * (supply - diss));
        if store(i + 1) {
            traj.state_times.push(t_next);
            traj.states.push(x.clone());
        }
        h = h_next;
    }
    Ok(traj)
}
