//! Command implementations behind the `phdg` binary.

pub mod config;
pub mod output;

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use phdg_core::scenario::snapshot_rows;
use phdg_core::spectrum::{spectrum_summary, OperatorKind};
use phdg_core::{simulate, structure_report, GlobalPHModel};

use config::RunConfig;
use output::{fmt_num, OutputSet};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
}

impl From<phdg_core::Error> for CliError {
    fn from(e: phdg_core::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Config(e.to_string())
        }
    }
}

impl CliError {
    /// 1 for configuration and I/O problems, 2 for numerical or check failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) | CliError::CheckFailed(_) => 2,
        }
    }
}

/// Runs the configured simulation and writes `hamiltonian.csv`,
/// `outputs.csv`, `power_residual.csv` and one `snapshot_<t>.csv` per
/// snapshot time. With `dump_matrices`, also `M.txt`, `J.txt`, `R.txt`,
/// `G.txt`, `Q.txt` as `row col value` triplets.
pub fn cmd_simulate(cfg: &RunConfig, out: &Path, dump_matrices: bool) -> Result<Vec<String>, CliError> {
    let r = cfg.resolve()?;
    let model = r.model()?;
    let traj = simulate(&model, &r.inputs, &r.options)?;
    let every = r.output_every;
    let mut files = OutputSet::default();

    let mut h = String::from("t,H\n");
    let last = traj.n_steps();
    for (i, (t, v)) in traj.times.iter().zip(&traj.hamiltonian).enumerate() {
        if i % every == 0 || i == last {
            h.push_str(&format!("{},{}\n", fmt_num(*t), fmt_num(*v)));
        }
    }
    files.add("hamiltonian.csv", h);

    let mut y = String::from("t,y1,y2\n");
    for (i, (t, v)) in traj.midpoint_times.iter().zip(&traj.outputs).enumerate() {
        if i % every == 0 || i + 1 == last {
            y.push_str(&format!("{},{},{}\n", fmt_num(*t), fmt_num(v[0]), fmt_num(v[1])));
        }
    }
    files.add("outputs.csv", y);

    let mut p = String::from("step,residual\n");
    for (i, v) in traj.power_residuals.iter().enumerate() {
        p.push_str(&format!("{},{}\n", i, fmt_num(*v)));
    }
    files.add("power_residual.csv", p);

    for &ts in &r.options.snapshot_times {
        let x = traj.state_at(ts)?;
        let mut s = String::from("element,local_node,z,p,q\n");
        for row in snapshot_rows(&model, x)? {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                row.element,
                row.local_node,
                fmt_num(row.z),
                fmt_num(row.p),
                fmt_num(row.q)
            ));
        }
        files.add(format!("snapshot_{ts}.csv"), s);
    }

    if dump_matrices {
        add_matrix_dumps(&model, &mut files);
    }
    files.commit(out)
}

fn add_matrix_dumps(model: &GlobalPHModel, files: &mut OutputSet) {
    let n = model.n_dof();
    files.add("M.txt", output::triplets(n, n, model.mass.to_sparse().triplets()));
    files.add("J.txt", output::triplets(n, n, model.j.triplets()));
    files.add("R.txt", output::triplets(n, n, model.r.triplets()));
    files.add("G.txt", output::triplets(n, 2, model.g.triplets()));
    files.add("Q.txt", output::triplets(n, n, model.q.iter().enumerate().map(|(i, &v)| (i, i, v))));
}

/// Writes `eigenvalues.csv` and `spectrum_summary.txt`.
pub fn cmd_spectrum(cfg: &RunConfig, out: &Path, kind: OperatorKind) -> Result<Vec<String>, CliError> {
    let r = cfg.resolve()?;
    let model = r.model()?;
    let summary = spectrum_summary(&model, kind)?;
    let mut ev = String::from("re,im\n");
    for z in &summary.result.eigenvalues {
        ev.push_str(&format!("{},{}\n", fmt_num(z.re), fmt_num(z.im)));
    }
    let mut files = OutputSet::default();
    files.add("eigenvalues.csv", ev);
    files.add("spectrum_summary.txt", format!("{summary}\n"));
    files.commit(out)
}

/// Seed of the random vectors used by `check`.
pub const CHECK_SEED: u64 = 0x5eed;

/// Largest relative defect of `Ĥ̇ = Yᵀ U - Eᵀ R E` over random states and inputs.
pub fn power_balance_defect(model: &GlobalPHModel, samples: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(CHECK_SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let x: Vec<f64> = (0..model.n_dof()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let u = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let e = model.efforts(&x);
        // Ĥ̇ = Eᵀ M Ẋ = Eᵀ ((J - R) E + G U).
        let rhs = model.rhs(&x, u);
        let hdot: f64 = e.iter().zip(&rhs).map(|(a, b)| a * b).sum();
        let y = model.output(&e);
        let diss = model.dissipated_power(&e);
        let expect = y[0] * u[0] + y[1] * u[1] - diss;
        let scale = e.iter().map(|v| v * v).sum::<f64>() * (model.j.max_abs() + model.r.max_abs()).max(1.0)
            + (u[0].abs() + u[1].abs()) * y[0].abs().max(y[1].abs());
        worst = worst.max((hdot - expect).abs() / scale.max(f64::MIN_POSITIVE));
    }
    worst
}

/// Structure report plus the random-vector power-balance identity. Returns
/// the report text; fails when any check fails.
pub fn cmd_check(cfg: &RunConfig) -> Result<String, CliError> {
    let r = cfg.resolve()?;
    let model = r.model()?;
    let report = structure_report(&model);
    let defect = power_balance_defect(&model, 16);
    let balance_ok = defect <= 1e-12;
    let text = format!(
        "flux: {}\nboundary: left {:?}, right {:?}\n{report}\n[{}] power balance on 16 random (X, U) (seed {CHECK_SEED:#x}): max relative defect {defect:e} (required: <= 1e-12)\n",
        model.params,
        model.bc.left,
        model.bc.right,
        if balance_ok { "pass" } else { "FAIL" },
    );
    if report.passed() && balance_ok {
        Ok(text)
    } else {
        Err(CliError::CheckFailed(text))
    }
}
