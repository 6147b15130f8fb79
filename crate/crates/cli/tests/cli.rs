use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use phdg::output::parse_triplets;

fn phdg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phdg")).args(args).output().expect("run phdg")
}

fn write_config(dir: &Path, json: &str) -> PathBuf {
    let p = dir.join("config.json");
    fs::write(&p, json).unwrap();
    p
}

fn data_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn benchmark_simulation_files() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "{}");
    let out = tmp.path().join("out");
    let o = phdg(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let h = data_rows(&out.join("hamiltonian.csv"));
    assert_eq!(h.len(), 6001);
    assert_eq!(h[0], vec!["0.0000000000000000e0", "0.0000000000000000e0"]);
    assert_eq!(h[6000][0].parse::<f64>().unwrap(), 1.5);
    assert_eq!(data_rows(&out.join("outputs.csv")).len(), 6000);
    assert_eq!(data_rows(&out.join("power_residual.csv")).len(), 6000);
    let header = fs::read_to_string(out.join("snapshot_0.5.csv")).unwrap();
    assert!(header.starts_with("element,local_node,z,p,q\n"));
    let snap = data_rows(&out.join("snapshot_1.5.csv"));
    assert_eq!(snap.len(), 100);
    // Interface coordinates appear once per adjacent element.
    assert_eq!(snap[1][2], snap[2][2]);

    // Conservative flux: H after the pulse stays put.
    let hv: Vec<f64> = h.iter().map(|r| r[1].parse().unwrap()).collect();
    let h0 = hv[500];
    assert!(hv[500..].iter().all(|v| (v - h0).abs() <= 1e-9 * h0));

    // No temporary files left.
    assert!(fs::read_dir(&out).unwrap().all(|e| !e.unwrap().file_name().to_string_lossy().ends_with(".tmp")));
}

#[test]
fn zero_final_time_keeps_initial_sample() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), r#"{"time": {"t_final": 0.0}, "snapshot_times": [0.0]}"#);
    let out = tmp.path().join("out");
    let o = phdg(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(data_rows(&out.join("hamiltonian.csv")).len(), 1);
    assert_eq!(data_rows(&out.join("outputs.csv")).len(), 0);
    assert_eq!(data_rows(&out.join("power_residual.csv")).len(), 0);
    assert!(out.join("snapshot_0.csv").exists());
}

#[test]
fn runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"mesh": {"elements": 8}, "degrees": {"k1": 2, "k2": 2}, "flux": "damped_central:0.5",
            "time": {"t_final": 0.3, "dt": 0.001, "output_every": 7}, "snapshot_times": [0.1]}"#,
    );
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for d in [&a, &b] {
        assert!(phdg(&["simulate", "--config", cfg.to_str().unwrap(), "--out", d.to_str().unwrap()]).status.success());
        assert!(phdg(&["spectrum", "--config", cfg.to_str().unwrap(), "--out", d.to_str().unwrap()]).status.success());
    }
    let mut names: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 6);
    for n in names {
        assert_eq!(fs::read(a.join(&n)).unwrap(), fs::read(b.join(&n)).unwrap(), "{n:?}");
    }
    // Decimation: steps 0, 7, ..., 294 and the final step 300.
    assert_eq!(data_rows(&a.join("hamiltonian.csv")).len(), 43 + 1);
}

#[test]
fn matrix_dumps_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"mesh": {"elements": 5}, "degrees": {"k1": 2, "k2": 1}, "material": {"c1": 2.0, "c2": 0.5},
            "flux": {"beta": 0.3, "tau": 0.2, "xi": 0.7}, "time": {"t_final": 0.01, "dt": 0.01}, "snapshot_times": []}"#,
    );
    let out = tmp.path().join("out");
    let o = phdg(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--dump-matrices"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let config = phdg::config::RunConfig::load(&cfg).unwrap();
    let model = config.resolve().unwrap().model().unwrap();
    let n = model.n_dof();
    let x: Vec<f64> = (0..n).map(|i| ((i * 37 % 23) as f64 - 11.0) / 7.0).collect();
    let check = |name: &str, direct: Vec<f64>, cols: usize| {
        let (nr, nc, entries) = parse_triplets(&fs::read_to_string(out.join(name)).unwrap()).unwrap();
        assert_eq!((nr, nc), (n, cols));
        let mut y = vec![0.0; n];
        for (r, c, v) in entries {
            y[r] += v * x[c];
        }
        let scale = direct.iter().map(|v| v.abs()).fold(1e-300, f64::max);
        for (a, b) in y.iter().zip(&direct) {
            assert!((a - b).abs() <= 1e-15 * scale, "{name}: {a} vs {b}");
        }
    };
    check("J.txt", model.j.mul_vec(&x), n);
    check("R.txt", model.r.mul_vec(&x), n);
    check("M.txt", model.mass.mul_vec(&x), n);
    check("Q.txt", model.efforts(&x), n);
    let (_, nc, g) = parse_triplets(&fs::read_to_string(out.join("G.txt")).unwrap()).unwrap();
    assert_eq!(nc, 2);
    let gd = model.g.to_dense();
    for (r, c, v) in g {
        assert_eq!(v, gd[(r, c)]);
    }
}

#[test]
fn spectrum_files() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cfg = write_config(tmp.path(), "{}");
    let o = phdg(&["spectrum", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let ev = data_rows(&out.join("eigenvalues.csv"));
    assert_eq!(ev.len(), 200);
    let summary = fs::read_to_string(out.join("spectrum_summary.txt")).unwrap();
    assert!(summary.starts_with("classification: conservative"), "{summary}");

    let cfg = write_config(tmp.path(), r#"{"flux": {"beta": 0.5, "tau": 0.5, "xi": 0.5}}"#);
    assert!(phdg(&["spectrum", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]).status.success());
    let summary = fs::read_to_string(out.join("spectrum_summary.txt")).unwrap();
    assert!(summary.starts_with("classification: dissipative"), "{summary}");
    let o = phdg(&["spectrum", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--operator", "structure-only"]);
    assert!(o.status.success());
    let summary = fs::read_to_string(out.join("spectrum_summary.txt")).unwrap();
    assert!(summary.starts_with("classification: conservative"), "{summary}");

    let cfg = write_config(tmp.path(), r#"{"mesh": {"elements": 1}}"#);
    assert!(phdg(&["spectrum", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]).status.success());
    assert_eq!(data_rows(&out.join("eigenvalues.csv")).len(), 4);

    let cfg = write_config(tmp.path(), r#"{"mesh": {"elements": 2000}}"#);
    let o = phdg(&["spectrum", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("4096"));
}

#[test]
fn check_command() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "{}");
    let o = phdg(&["check", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("R ≡ 0 (conservative)"), "{text}");
    assert!(!text.contains("FAIL"));

    let cfg = write_config(tmp.path(), r#"{"flux": "damped_central:0.5", "degrees": {"k1": 2, "k2": 3}}"#);
    let o = phdg(&["check", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(String::from_utf8_lossy(&o.stdout).contains("rank(R)"));
}

#[test]
fn invalid_config_is_rejected_without_output() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cfg = write_config(tmp.path(), r#"{"flux": {"beta": 1.5, "tau": 0, "xi": 0}}"#);
    for cmd in ["simulate", "spectrum"] {
        let o = phdg(&[cmd, "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(1));
        assert!(String::from_utf8_lossy(&o.stderr).contains("flux"));
    }
    let o = phdg(&["check", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());

    let cfg = write_config(tmp.path(), r#"{"time": {"dt": 0.001, "tfinal": 1}}"#);
    let o = phdg(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("tfinal"));
    assert!(!out.exists());

    let o = phdg(&["simulate", "--config", tmp.path().join("missing.json").to_str().unwrap(), "--out", "x"]);
    assert_eq!(o.status.code(), Some(1));
}
