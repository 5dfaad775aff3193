//! End-to-end tests of the `obslab` binary: exit codes, file outputs, and
//! environment handling.

use std::fs;
use std::path::PathBuf;
use std::process::Command;
use std::sync::atomic::{AtomicU32, Ordering};

use obslab::cli::csv::read_csv_columns;

static DIR_COUNTER: AtomicU32 = AtomicU32::new(0);

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "obslab-test-{}-{}-{}",
        std::process::id(),
        tag,
        DIR_COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn obslab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_obslab"))
}

#[test]
fn simulate_preset_writes_all_outputs() {
    let out = scratch_dir("sim");
    let status = obslab()
        .args(["simulate", "--preset", "fig5", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    for file in ["trace.csv", "metrics.json", "plot.gp"] {
        assert!(out.join(file).exists(), "{file} missing");
    }
    let text = fs::read_to_string(out.join("trace.csv")).unwrap();
    assert!(text.starts_with("# obslab trace"));
    assert!(
        text.lines().all(|l| !l.ends_with('\r')),
        "line endings must be bare LF"
    );
    let (names, columns) = read_csv_columns(&text).unwrap();
    assert_eq!(names[0], "t");
    assert!(names.iter().any(|n| n == "xhat3"));
    assert_eq!(columns[0].len(), 10_001);

    // The plot script references the CSV by relative path.
    let gp = fs::read_to_string(out.join("plot.gp")).unwrap();
    assert!(gp.contains("'trace.csv'"));
}

#[test]
fn trace_csv_round_trips_bit_exactly() {
    let out = scratch_dir("roundtrip");
    let status = obslab()
        .args(["simulate", "--preset", "fig6", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(out.join("trace.csv")).unwrap();
    let (names, columns) = read_csv_columns(&text).unwrap();

    // Re-render from the parsed values and compare bytes after the header.
    let mut rebuilt = String::new();
    rebuilt.push_str(text.lines().next().unwrap());
    rebuilt.push('\n');
    rebuilt.push_str(&names.join(","));
    rebuilt.push('\n');
    for row in 0..columns[0].len() {
        let line: Vec<String> = columns.iter().map(|c| format!("{:.16e}", c[row])).collect();
        rebuilt.push_str(&line.join(","));
        rebuilt.push('\n');
    }
    assert_eq!(text, rebuilt, "parse -> format is not the identity");
}

#[test]
fn same_seed_byte_identical_different_seed_not() {
    let out_a = scratch_dir("seed-a");
    let out_b = scratch_dir("seed-b");
    let out_c = scratch_dir("seed-c");
    for (out, seed) in [(&out_a, "7"), (&out_b, "7"), (&out_c, "8")] {
        let status = obslab()
            .args(["simulate", "--preset", "fig6", "--seed", seed, "-o"])
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let a = fs::read(out_a.join("trace.csv")).unwrap();
    let b = fs::read(out_b.join("trace.csv")).unwrap();
    let c = fs::read(out_c.join("trace.csv")).unwrap();
    assert_eq!(a, b, "same seed must reproduce byte-identical traces");
    assert_ne!(a, c, "different seed must change the noise realization");
}

#[test]
fn malformed_config_exits_2_naming_the_key() {
    let dir = scratch_dir("badcfg");
    let cfg = dir.join("bad.toml");
    fs::write(&cfg, "[sim]\nstep = 0.001\n").unwrap();
    let output = obslab()
        .args(["simulate", "-c"])
        .arg(&cfg)
        .args(["-o"])
        .arg(dir.join("out"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("t_end"), "stderr: {stderr}");
}

#[test]
fn unreadable_config_exits_2() {
    let dir = scratch_dir("nofile");
    let output = obslab()
        .args(["simulate", "-c"])
        .arg(dir.join("does-not-exist.toml"))
        .args(["-o"])
        .arg(dir.join("out"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn step_above_stability_bound_is_a_config_error() {
    let dir = scratch_dir("stiff");
    let cfg = dir.join("stiff.toml");
    fs::write(
        &cfg,
        "[estimator]\nepsilon = 1e-5\n\n[sim]\nt_end = 0.1\nstep = 0.0001\n",
    )
    .unwrap();
    let output = obslab()
        .args(["simulate", "-c"])
        .arg(&cfg)
        .args(["-o"])
        .arg(dir.join("out"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("stability bound"), "stderr: {stderr}");
}

#[test]
fn config_and_preset_together_is_a_usage_error() {
    let dir = scratch_dir("both");
    let cfg = dir.join("cfg.toml");
    fs::write(&cfg, "").unwrap();
    let output = obslab()
        .args(["simulate", "--preset", "fig5", "-c"])
        .arg(&cfg)
        .args(["-o"])
        .arg(dir.join("out"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn unknown_preset_exits_2() {
    let dir = scratch_dir("preset");
    let output = obslab()
        .args(["compare", "--presets", "fig3,fig9", "-o"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn freqresp_grid_and_validation() {
    let dir = scratch_dir("freq");
    let status = obslab()
        .args([
            "freqresp", "--preset", "fig5", "--channel", "1", "--wmin", "1e-3", "--wmax", "1e5",
            "--points", "50", "-o",
        ])
        .arg(&dir)
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(dir.join("freqresp.csv")).unwrap();
    let (names, columns) = read_csv_columns(&text).unwrap();
    assert_eq!(names, vec!["omega", "h_ic_mag", "h_ic_phase", "h_hg_mag", "h_hg_phase"]);
    assert_eq!(columns[0].len(), 50);
    // DC row: both structures track exactly.
    assert!((columns[1][0] - 1.0).abs() < 1e-6);
    assert!((columns[3][0] - 1.0).abs() < 1e-6);

    // Descending range is rejected.
    let output = obslab()
        .args([
            "freqresp", "--preset", "fig5", "--channel", "1", "--wmin", "1e3", "--wmax", "1.0",
            "-o",
        ])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));

    // A config without an estimator cannot answer.
    let output = obslab()
        .args([
            "freqresp", "--preset", "fig3", "--channel", "1", "--wmin", "0.1", "--wmax", "10.0",
            "-o",
        ])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn sweep_rejects_overlarge_epsilon_rows_but_succeeds_overall() {
    let dir = scratch_dir("sweep");
    // 0.5 is fine at h = 1e-4; 1e-5 violates the stability step bound.
    let status = obslab()
        .args([
            "sweep", "--preset", "fig5", "--param", "epsilon", "--values", "0.05,1e-5", "-o",
        ])
        .arg(&dir)
        .env("OBSLAB_THREADS", "1")
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(dir.join("sweep.csv")).unwrap();
    let lines: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(lines.len(), 3); // header + 2 rows
    assert!(lines[1].ends_with("ok"));
    assert!(lines[2].contains("rejected"), "{}", lines[2]);
    assert!(lines[2].contains("stability bound"), "{}", lines[2]);
}

#[test]
fn observer_sweep_summary_shows_epsilon_scaling() {
    let dir = scratch_dir("sweep-obs");
    let cfg = dir.join("observer.toml");
    fs::write(
        &cfg,
        "[controller]\nkind = \"observer\"\n\n[sim]\nt_end = 10.0\nstep = 0.0001\n",
    )
    .unwrap();
    let status = obslab()
        .args(["sweep", "-c"])
        .arg(&cfg)
        .args(["--param", "epsilon", "--values", "0.1,0.05,0.025", "-o"])
        .arg(&dir)
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(dir.join("sweep.csv")).unwrap();
    let (names, columns) = read_csv_columns(
        // The status column is text; strip it before numeric parsing.
        &text
            .lines()
            .map(|l| {
                if l.starts_with('#') {
                    l.to_string()
                } else {
                    l.rsplit_once(',').map(|(head, _)| head.to_string()).unwrap()
                }
            })
            .collect::<Vec<_>>()
            .join("\n"),
    )
    .unwrap();
    let z_col = names.iter().position(|n| n == "steady_z").unwrap();
    let steady = &columns[z_col];
    assert_eq!(steady.len(), 3);
    for pair in steady.windows(2) {
        let ratio = pair[0] / pair[1];
        assert!((1.5..=3.0).contains(&ratio), "steady_z ratio {ratio:.3}");
    }
}

#[test]
fn single_value_sweep_degenerates_to_one_row() {
    let dir = scratch_dir("sweep-one");
    let status = obslab()
        .args(["sweep", "--preset", "fig5", "--param", "epsilon", "--values", "0.02", "-o"])
        .arg(&dir)
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(dir.join("sweep.csv")).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 2); // header + the single row
    assert!(rows[1].ends_with("ok"));
}

#[test]
fn sweep_with_unknown_parameter_exits_2() {
    let dir = scratch_dir("sweep-bad");
    let output = obslab()
        .args(["sweep", "--preset", "fig5", "--param", "gamma", "--values", "1.0", "-o"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn sweep_failing_every_value_exits_3() {
    let dir = scratch_dir("sweep-fail");
    let output = obslab()
        .args(["sweep", "--preset", "fig5", "--param", "epsilon", "--values", "1e-5,2e-5", "-o"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3));
    // The summary still records both rows.
    let text = fs::read_to_string(dir.join("sweep.csv")).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 3);
}

#[test]
fn compare_exposes_estimator_columns_only_for_estimator_presets() {
    let dir = scratch_dir("compare");
    let status = obslab()
        .args(["compare", "--presets", "fig3,fig4,fig5", "-o"])
        .arg(&dir)
        .env("OBSLAB_THREADS", "2")
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(dir.join("compare.csv")).unwrap();
    let lines: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(lines.len(), 4);
    let header: Vec<&str> = lines[0].split(',').collect();
    let jitter_col = header.iter().position(|h| *h == "jitter_xhat2").unwrap();
    let row = |l: &str| l.split(',').map(str::to_string).collect::<Vec<_>>();
    assert!(row(lines[1])[jitter_col].is_empty(), "fig3 has no velocity estimate");
    assert!(row(lines[2])[jitter_col].is_empty(), "fig4 has no velocity estimate");
    assert!(!row(lines[3])[jitter_col].is_empty(), "fig5 exposes the velocity estimate");
    for preset in ["fig3", "fig4", "fig5"] {
        assert!(dir.join(preset).join("trace.csv").exists());
    }
    assert!(dir.join("compare.gp").exists());
}
