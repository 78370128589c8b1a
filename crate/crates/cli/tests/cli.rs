//! End-to-end tests of the `fqp` binary: exit-code contract,
//! configuration validation, and byte-identical CSV reproducibility
//! for every subcommand.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fqp"))
}

fn work_dir(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn fqp")
}

/// Config keeping every subcommand fast enough for repeated runs.
const FAST_CONFIG: &str = r#"
[verify_decomp]
grid = 2
restarts = 4
single_gate_restarts = 2

[trotter]
dts = [0.2, 0.1]

[vqe.noise]
widths_wr = [0.0, 0.004]
widths_r = [0.0, 0.04]
samples = 30

[lgt]
steps = 20

[echo]
l = 12
n_atoms = 4
seeds = 2
horizon = 500
min_ratio = 0.5
"#;

#[test]
fn seeded_runs_are_byte_identical() {
    let dir = work_dir("determinism");
    let config = dir.join("fast.toml");
    std::fs::write(&config, FAST_CONFIG).unwrap();
    let cases = [
        ("verify-decomp", vec!["decomp.csv"]),
        ("trotter", vec!["trotter.csv"]),
        ("vqe", vec!["vqe.csv", "noise.csv"]),
        ("lgt", vec!["lgt.csv"]),
        ("qpe", vec!["qpe.csv"]),
        ("echo", vec!["echo.csv", "echo_summary.csv"]),
        ("noise-budget", vec!["budget.csv"]),
    ];
    for (cmd, files) in cases {
        for out in ["a", "b"] {
            let o = run(&[
                cmd,
                "--config",
                config.to_str().unwrap(),
                "--seed",
                "7",
                "--out",
                dir.join(out).to_str().unwrap(),
                "--workers",
                "2",
            ]);
            let code = o.status.code().unwrap_or(-1);
            assert!(
                code == 0 || code == 1,
                "{cmd}: unexpected exit {code}: {}",
                String::from_utf8_lossy(&o.stderr)
            );
        }
        for f in files {
            let a = std::fs::read(dir.join("a").join(f)).unwrap();
            let b = std::fs::read(dir.join("b").join(f)).unwrap();
            assert_eq!(a, b, "{cmd}: {f} differs between identical runs");
            assert!(!a.is_empty());
        }
    }
}

#[test]
fn default_runs_of_fast_subcommands_pass() {
    let dir = work_dir("defaults");
    for cmd in ["noise-budget", "qpe", "trotter", "vqe"] {
        let o = run(&[cmd, "--out", dir.join(cmd).to_str().unwrap()]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{cmd}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn unknown_config_key_is_a_usage_error() {
    let dir = work_dir("bad-key");
    let config = dir.join("bad.toml");
    std::fs::write(&config, "[trotter]\nstep_sizes = [0.1]\n").unwrap();
    let o = run(&[
        "trotter",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_hamiltonian_file_is_a_usage_error() {
    let dir = work_dir("missing-file");
    let config = dir.join("cfg.toml");
    std::fs::write(
        &config,
        "[trotter]\nhamiltonian = \"/nonexistent/h.txt\"\n",
    )
    .unwrap();
    let o = run(&[
        "trotter",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_experiment_parameters_are_usage_errors() {
    let dir = work_dir("bad-params");
    let echo_cfg = dir.join("echo.toml");
    std::fs::write(&echo_cfg, "[echo]\nl = 4\nn_atoms = 9\n").unwrap();
    let o = run(&[
        "echo",
        "--config",
        echo_cfg.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2), "too many atoms must be rejected");

    let qpe_cfg = dir.join("qpe.toml");
    std::fs::write(&qpe_cfg, "[qpe]\nbits = 0\n").unwrap();
    let o = run(&[
        "qpe",
        "--config",
        qpe_cfg.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2), "zero bits must be rejected");

    let budget_cfg = dir.join("budget.toml");
    std::fs::write(&budget_cfg, "[noise_budget]\ngate_time = -1.0\n").unwrap();
    let o = run(&[
        "noise-budget",
        "--config",
        budget_cfg.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2), "negative input must be rejected");
}

#[test]
fn lih_fixture_reaches_chemical_accuracy() {
    let dir = work_dir("lih");
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures/lih_sto3g.txt")
        .canonicalize()
        .unwrap();
    let config = dir.join("lih.toml");
    std::fs::write(
        &config,
        format!(
            "[vqe]\nhamiltonian = {:?}\nreference = 3\ndelta_e_max = 1.59e-3\nf_tolerance = 1e-9\nmax_evaluations = 200000\n",
            fixture
        ),
    )
    .unwrap();
    let o = run(&[
        "vqe",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "stdout: {} stderr: {}",
        String::from_utf8_lossy(&o.stdout),
        String::from_utf8_lossy(&o.stderr)
    );
}
