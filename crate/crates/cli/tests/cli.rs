use std::fs;
use std::io::BufReader;
use std::path::Path;
use std::process::Command;

use nanoring_cli::{GateFile, RunReport, SWEEP_HEADER};
use nanoring_core::io::{read_csv, read_scalogram_bin, SPECTRUM_HEADER, TRAJECTORY_HEADER};

const BIN: &str = env!("CARGO_BIN_EXE_nanoring");

/// Short pulses on a small basis.
fn nanoring(args: &[&str], out: &Path) -> std::process::Output {
    nanoring_with(args, out, &["--m-max", "24", "--duration-oc", "12"])
}

fn nanoring_with(args: &[&str], out: &Path, extra: &[&str]) -> std::process::Output {
    Command::new(BIN)
        .args(args)
        .args(["--out", out.to_str().unwrap()])
        .args(extra)
        .env_remove("NANORING_OUT")
        .output()
        .unwrap()
}

fn read_all(dir: &Path, names: &[&str]) -> Vec<Vec<u8>> {
    names.iter().map(|n| fs::read(dir.join(n)).unwrap()).collect()
}

#[test]
fn run_writes_parseable_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = nanoring(&["run"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let traj = read_csv(BufReader::new(fs::File::open(dir.path().join("trajectory.csv")).unwrap()), TRAJECTORY_HEADER)
        .unwrap();
    assert_eq!(traj.len(), 12 * 64 + 1);
    assert_eq!(traj[0][0], 0.0);
    assert_eq!(traj.last().unwrap()[0], 12.0);

    let spectrum = read_csv(BufReader::new(fs::File::open(dir.path().join("spectrum.csv")).unwrap()), SPECTRUM_HEADER)
        .unwrap();
    assert!(spectrum.len() > 10);

    let scal = read_scalogram_bin(fs::File::open(dir.path().join("scalogram.bin")).unwrap()).unwrap();
    assert_eq!(scal.rows, 588);
    assert_eq!(scal.data.len(), scal.rows * scal.cols);
    assert_eq!(scal.time_range, [0.0, 12.0]);

    let report: RunReport = serde_json::from_slice(&fs::read(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report.final_lz, traj.last().unwrap()[3]);
    assert!(report.outputs.l_z);
    assert!(report.outputs.h_i);
    assert_eq!(report.scalogram_shape, [scal.rows, scal.cols]);
}

#[test]
fn identical_config_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let files = ["trajectory.csv", "spectrum.csv", "scalogram.bin", "report.json", "truth_table.json"];
    let mut outputs = Vec::new();
    for _ in 0..2 {
        assert!(nanoring(&["run", "--beta", "30"], dir.path()).status.success());
        assert!(nanoring(&["gate", "--tables", "none"], dir.path()).status.success());
        outputs.push(read_all(dir.path(), &files));
    }
    assert!(outputs[0] == outputs[1]);
}

#[test]
fn laser_off_reports_no_bits() {
    let dir = tempfile::tempdir().unwrap();
    assert!(nanoring(&["run", "--intensity", "0"], dir.path()).status.success());
    let report: RunReport = serde_json::from_slice(&fs::read(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report.outputs.as_array(), [false; 5]);
}

#[test]
fn gate_json_has_rows_and_classifications() {
    let dir = tempfile::tempdir().unwrap();
    let o = nanoring(&["gate", "--tables", "none"], dir.path());
    assert!(o.status.success());
    let text = fs::read_to_string(dir.path().join("truth_table.json")).unwrap();
    let file: GateFile = serde_json::from_str(&text).unwrap();
    let t = &file.tables[0];
    let inputs: Vec<&str> = t.rows.iter().map(|r| r.input.as_str()).collect();
    assert_eq!(inputs, ["00", "10", "01", "11"]);
    assert_eq!(t.classifications.len(), 5);
    assert!(text.contains("\"H_R2\""));
    assert!(text.contains("\"gate\": \"AND\""));
    assert_eq!(serde_json::to_string_pretty(&file).unwrap() + "\n", text);
}

#[test]
fn sweep_runs_each_angle_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let o = nanoring(&["sweep-beta", "--betas", "90,0,45"], dir.path());
    assert!(o.status.success());
    let rows = read_csv(BufReader::new(fs::File::open(dir.path().join("beta_sweep.csv")).unwrap()), SWEEP_HEADER)
        .unwrap();
    let betas: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    assert_eq!(betas, [90.0, 0.0, 45.0]);
    assert!(rows[0][1].abs() < 1e-3 && rows[1][1].abs() < 1e-3);
    assert!(rows[2][1] > 0.01);
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(nanoring(&["sweep-beta"], dir.path()).status.code(), Some(2));
    assert_eq!(nanoring(&["sweep-beta", "--betas", "120"], dir.path()).status.code(), Some(2));
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "[ring]\nradius = \"large\"\n").unwrap();
    assert_eq!(nanoring(&["run", "--config", bad.to_str().unwrap()], dir.path()).status.code(), Some(2));
    assert_eq!(nanoring(&["run", "--config", "/nonexistent.toml"], dir.path()).status.code(), Some(2));
    assert_eq!(nanoring(&["circuit", "--kind", "half", "--inputs", "1,0,1"], dir.path()).status.code(), Some(2));
    assert_eq!(nanoring(&["memory", "--ops", "flip"], dir.path()).status.code(), Some(2));
    assert_eq!(nanoring(&["frobnicate"], dir.path()).status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(BIN)
        .args(["run", "--m-max", "3", "--steps-per-oc", "256", "--duration-oc", "8", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("m_max"));
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from_env");
    let o = Command::new(BIN)
        .args(["circuit", "--kind", "full"])
        .env("NANORING_OUT", &target)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(target.join("circuit.json").exists());
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("111 -> 11"));
}

#[test]
fn config_file_is_read_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "[laser]\nbeta = 0.0\nduration_oc = 12.0\n[ring]\nm_max = 24\n").unwrap();
    let run = |extra: &[&str]| {
        let o = Command::new(BIN)
            .args(["run", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()])
            .args(extra)
            .output()
            .unwrap();
        assert!(o.status.success());
        let r: RunReport = serde_json::from_slice(&fs::read(dir.path().join("report.json")).unwrap()).unwrap();
        r
    };
    let from_file = run(&[]);
    assert_eq!(from_file.config.laser.beta, 0.0);
    assert!(!from_file.outputs.l_z);
    let overridden = run(&["--beta", "45"]);
    assert_eq!(overridden.config.laser.beta, 45.0);
    assert!(overridden.outputs.l_z);
}

#[test]
fn memory_log_tracks_write_and_erase() {
    let dir = tempfile::tempdir().unwrap();
    // write and erase use full-length pulses
    let o = nanoring_with(&["memory", "--ops", "read,write,erase", "--cells", "4"], dir.path(), &["--m-max", "24"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let log: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("memory_log.json")).unwrap()).unwrap();
    let bits = |i: usize| log[i]["bits"].as_array().unwrap().iter().map(|b| b.as_bool().unwrap()).collect::<Vec<_>>();
    assert_eq!(bits(0), vec![false; 4]);
    assert_eq!(bits(1), vec![true; 4]);
    assert_eq!(bits(2), vec![false; 4]);
}
