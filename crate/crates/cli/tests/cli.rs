use std::path::Path;
use std::process::{Command, Output};

use fmq_core::io::{provenance_config, read_table};

fn fmq(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fmq"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn header(csv: &str) -> &str {
    csv.lines().find(|l| !l.starts_with('#')).unwrap()
}

const SINGLE: &str = "mode = single\n[physics]\nlambda = 3\ndelta = 10\nomega = 0.5\n[solver]\nt_max = 5\nsample_every = 0.5\n";

#[test]
fn single_run_schema_and_precedence() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.cfg"), SINGLE).unwrap();
    let csv = stdout(&fmq(&["single", "--config", "run.cfg", "--omega", "5"], dir.path()));
    assert_eq!(
        header(&csv),
        "gamma_t,re_C,im_C,coherence,qfi,phase_error,gamma_of_t,lamb_shift"
    );
    let cfg = provenance_config(&csv).unwrap();
    assert_eq!(cfg.omega, 5.0);
    assert_eq!(cfg.delta, 10.0);
    let table = read_table(&csv).unwrap();
    assert_eq!(table.rows.len(), 11);
    assert_eq!(table.rows[0][..6], [0.0, 1.0, 0.0, 1.0, 1.0, 1.0]);
}

#[test]
fn provenance_reproduces_the_data() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.cfg"), SINGLE).unwrap();
    let first = stdout(&fmq(&["single", "--config", "run.cfg", "--tau-q", "1e-7"], dir.path()));
    assert!(header(&first).ends_with(",t_seconds"));
    let provenance: String = first
        .lines()
        .take_while(|l| l.starts_with('#'))
        .map(|l| format!("{}\n", l.trim_start_matches('#').trim_start()))
        .collect();
    std::fs::write(dir.path().join("again.cfg"), provenance).unwrap();
    let second = stdout(&fmq(&["single", "--config", "again.cfg"], dir.path()));
    assert_eq!(first, second);
}

#[test]
fn pair_and_sweep_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let pair = stdout(&fmq(
        &["pair", "--lambda", "0.1", "--t-max", "5", "--sample-every", "1", "--kind", "phi"],
        dir.path(),
    ));
    assert_eq!(header(&pair), "gamma_t,concurrence,discord,zeta2");
    let sweep = stdout(&fmq(
        &[
            "sweep-nm", "--lambda", "3", "--delta", "10", "--t-max", "500", "--omega-min", "0.5",
            "--omega-max", "5", "--omega-points", "3",
        ],
        dir.path(),
    ));
    assert_eq!(header(&sweep), "omega_over_gamma,delta_over_gamma,N");
    assert_eq!(read_table(&sweep).unwrap().rows.len(), 3);
}

#[test]
fn lifetime_mode_reports_threshold_crossing() {
    let dir = tempfile::tempdir().unwrap();
    let csv = stdout(&fmq(&["lifetime", "--lambda", "3", "--t-max", "60"], dir.path()));
    let t = read_table(&csv).unwrap();
    assert_eq!(t.columns, ["epsilon", "lifetime", "horizon"]);
    let lt = t.rows[0][1];
    assert!((5.0..=15.0).contains(&lt), "{lt}");
}

#[test]
fn output_file_written() {
    let dir = tempfile::tempdir().unwrap();
    let out = fmq(&["single", "--lambda", "1", "--t-max", "1", "-o", "x.csv"], dir.path());
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("x.csv")).unwrap();
    assert!(provenance_config(&text).is_ok());
}

#[test]
fn errors_exit_nonzero_with_message() {
    let dir = tempfile::tempdir().unwrap();
    let out = fmq(&["single", "--lambda", "-1", "--t-max", "1"], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda"));

    std::fs::write(dir.path().join("bad.cfg"), "mode = single\n[physics]\nlambda = 1\nbogus = 2\n").unwrap();
    let out = fmq(&["single", "--config", "bad.cfg"], dir.path());
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 4") && err.contains("bogus"), "{err}");

    let out = fmq(&["figure", "fig99"], dir.path());
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("fig2a") && err.contains("fig10"), "{err}");

    let out = fmq(&["single", "--t-max", "1"], dir.path());
    assert!(!out.status.success());
}

#[test]
fn figure_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for sub in ["a", "b"] {
        let out = fmq(&["figure", "fig2b", "-o", sub], dir.path());
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for curve in ["omega0.5", "omega1"] {
        let name = format!("fig2b_{curve}.csv");
        let a = std::fs::read(dir.path().join("a").join(&name)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(&name)).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b, "{name}");
        let cfg = provenance_config(&String::from_utf8(a).unwrap()).unwrap();
        assert_eq!((cfg.lambda, cfg.delta), (Some(3.0), 10.0));
    }
}
