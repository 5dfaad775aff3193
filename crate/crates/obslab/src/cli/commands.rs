//! The four CLI commands: simulate, freqresp, sweep, compare.

use std::fs;
use std::path::Path;
use std::time::Instant;

use crate::cli::config::ScenarioConfig;
use crate::cli::csv::{format_value, trace_to_csv, write_table_csv, write_trace_csv};
use crate::cli::metrics::MetricsReport;
use crate::cli::plots::{compare_plot_script, simulate_plot_script};
use crate::cli::presets::preset_config;
use crate::cli::CliError;
use crate::control::BoundSet;
use crate::error::Error;
use crate::estimators::{freq_response, highgain_noise_tf, EstimatorGains};
use crate::simkit::{
    run_closed_loop, run_scenarios_parallel, run_scenarios_timed, Scenario, SimTrace,
};

/// Resolve `-c config` xor `--preset name` into a parsed config.
pub fn load_config(
    config: Option<&Path>,
    preset: Option<&str>,
) -> Result<ScenarioConfig, CliError> {
    match (config, preset) {
        (Some(_), Some(_)) => Err(CliError::Usage(
            "pass either a config file or a preset, not both".into(),
        )),
        (None, None) => Err(CliError::Usage(
            "a config file (-c) or a preset (--preset) is required".into(),
        )),
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|e| {
                CliError::Config(format!("cannot read {}: {e}", path.display()))
            })?;
            ScenarioConfig::from_toml(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
        }
        (None, Some(name)) => preset_config(name),
    }
}

/// Worker count for sweeps: explicit flag, else the OBSLAB_THREADS cap, else
/// the available parallelism.
pub fn worker_threads(flag: Option<usize>) -> Option<usize> {
    if flag.is_some() {
        return flag;
    }
    let available = std::thread::available_parallelism().map_or(1, |p| p.get());
    match std::env::var("OBSLAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        Some(cap) if cap > 0 => Some(cap.min(available)),
        _ => None,
    }
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", dir.display())))
}

fn map_run_error(e: Error) -> CliError {
    match e {
        // Validation failures trace back to the scenario parameters.
        Error::InvalidArgument(_) | Error::BudgetExceeded { .. } => {
            CliError::Config(e.to_string())
        }
        _ => CliError::Numerical(e.to_string()),
    }
}

fn write_metrics_json(
    path: &Path,
    metrics: &MetricsReport,
    bounds: &BoundSet,
    effective: &ScenarioConfig,
) -> Result<(), CliError> {
    let doc = serde_json::json!({
        "metrics": metrics,
        "bounds": {
            "l_u": bounds.l_u,
            "l_g": bounds.l_g,
            "l_inf": bounds.l_inf,
            "l_sup": bounds.l_sup,
            "l_1": bounds.l_1,
            "l_h": bounds.l_h,
            "l_b": bounds.l_b,
        },
        "effective_config": toml_to_json(effective),
    });
    let text = serde_json::to_string_pretty(&doc).expect("metrics serialize");
    fs::write(path, text)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

fn toml_to_json(config: &ScenarioConfig) -> serde_json::Value {
    serde_json::to_value(config).unwrap_or(serde_json::Value::Null)
}

/// Run one scenario and export trace.csv, metrics.json, and plot.gp.
pub fn cmd_simulate(
    config: Option<&Path>,
    preset: Option<&str>,
    output: &Path,
    seed: Option<u64>,
) -> Result<(), CliError> {
    let mut cfg = load_config(config, preset)?;
    if let Some(seed) = seed {
        cfg.override_seed(seed);
    }
    let scenario = cfg.resolve()?;
    ensure_dir(output)?;
    let trace = run_closed_loop(&scenario).map_err(map_run_error)?;
    let metrics = MetricsReport::from_trace(&trace);
    let bounds = BoundSet::sample(&scenario.plant, &scenario.gains, &scenario.reference, scenario.l_u);

    write_trace_csv(&output.join("trace.csv"), &trace)?;
    write_metrics_json(&output.join("metrics.json"), &metrics, &bounds, &cfg.effective())?;
    let script = simulate_plot_script(&trace, "trace.csv");
    fs::write(output.join("plot.gp"), script)
        .map_err(|e| CliError::Config(format!("cannot write plot script: {e}")))?;

    println!(
        "simulate: {} samples, rms e1 = {:.3e}, max |e1| (t > {:.1} s) = {:.3e}",
        trace.len(),
        metrics.rms_e1,
        metrics.settle_time,
        metrics.max_e1_after_settle
    );
    Ok(())
}

/// Tabulate the integral-chain and classical high-gain frequency responses
/// of one channel over a log-spaced grid.
pub fn cmd_freqresp(
    config: Option<&Path>,
    preset: Option<&str>,
    channel: usize,
    wmin: f64,
    wmax: f64,
    points: usize,
    output: &Path,
) -> Result<(), CliError> {
    let cfg = load_config(config, preset)?;
    let gains: EstimatorGains = cfg.estimator_gains()?.ok_or_else(|| {
        CliError::Usage("freqresp needs an estimator section (or an estimator-based controller)".into())
    })?;
    if channel == 0 || channel > gains.order() + 1 {
        return Err(CliError::Usage(format!(
            "channel {channel} out of range 1..={}",
            gains.order() + 1
        )));
    }
    if wmin.is_nan() || wmax.is_nan() || wmin <= 0.0 || wmax <= wmin {
        return Err(CliError::Usage(format!(
            "frequency range must be ascending and positive, got [{wmin}, {wmax}]"
        )));
    }
    if points < 2 {
        return Err(CliError::Usage("at least two frequency points are needed".into()));
    }

    ensure_dir(output)?;
    let log_min = wmin.log10();
    let log_max = wmax.log10();
    let mut rows = Vec::with_capacity(points);
    for k in 0..points {
        let omega = 10f64.powf(log_min + (log_max - log_min) * k as f64 / (points - 1) as f64);
        let h_ic = freq_response(&gains, channel, omega).map_err(map_run_error)?;
        let h_hg = highgain_noise_tf(&gains, channel, omega).map_err(map_run_error)?;
        rows.push(vec![
            format_value(omega),
            format_value(h_ic.norm()),
            format_value(h_ic.arg()),
            format_value(h_hg.norm()),
            format_value(h_hg.arg()),
        ]);
    }
    write_table_csv(
        &output.join("freqresp.csv"),
        &format!(
            "measurement-to-channel-{channel} response; integral-chain vs classical high-gain; phases in radians"
        ),
        &["omega", "h_ic_mag", "h_ic_phase", "h_hg_mag", "h_hg_phase"],
        &rows,
    )?;
    println!("freqresp: {points} rows over [{wmin:.3e}, {wmax:.3e}] rad/s for channel {channel}");
    Ok(())
}

/// One sweep row: the swept value plus run outcome.
struct SweepRow {
    value: f64,
    steady_z: Option<f64>,
    rms_e1: Option<f64>,
    runtime_s: f64,
    status: String,
}

/// Run the scenario once per swept epsilon value on a bounded worker pool.
pub fn cmd_sweep(
    config: Option<&Path>,
    preset: Option<&str>,
    param: &str,
    values: &[f64],
    output: &Path,
    threads: Option<usize>,
    seed: Option<u64>,
) -> Result<(), CliError> {
    if param != "epsilon" {
        return Err(CliError::Usage(format!(
            "only `epsilon` can be swept, got `{param}`"
        )));
    }
    if values.is_empty() {
        return Err(CliError::Usage("sweep needs at least one value".into()));
    }
    let mut cfg = load_config(config, preset)?;
    if let Some(seed) = seed {
        cfg.override_seed(seed);
    }
    let base = cfg.resolve()?;
    let base_gains = base.estimator.clone().ok_or_else(|| {
        CliError::Usage("epsilon sweep needs an estimator-based controller".into())
    })?;

    // Build one scenario per value; gain validation failures become rejected
    // rows rather than hard errors.
    let mut prepared: Vec<Result<Scenario, String>> = Vec::with_capacity(values.len());
    for &eps in values {
        match EstimatorGains::new(eps, base_gains.a().to_vec()) {
            Ok(gains) => {
                let mut s = base.clone();
                s.estimator = Some(gains);
                prepared.push(Ok(s));
            }
            Err(e) => prepared.push(Err(e.to_string())),
        }
    }

    let runnable: Vec<Scenario> = prepared.iter().filter_map(|p| p.as_ref().ok().cloned()).collect();
    let started = Instant::now();
    let results = run_scenarios_timed(&runnable, worker_threads(threads));
    let wall = started.elapsed().as_secs_f64();

    let mut rows = Vec::with_capacity(values.len());
    let mut results_iter = results.into_iter();
    let mut any_ok = false;
    for (idx, prep) in prepared.into_iter().enumerate() {
        let value = values[idx];
        let row = match prep {
            Err(msg) => SweepRow {
                value,
                steady_z: None,
                rms_e1: None,
                runtime_s: 0.0,
                status: format!("rejected: {msg}"),
            },
            Ok(_) => {
                let (result, runtime_s) =
                    results_iter.next().expect("one result per runnable scenario");
                match result {
                    Ok(trace) => {
                        let metrics = MetricsReport::from_trace(&trace);
                        any_ok = true;
                        SweepRow {
                            value,
                            steady_z: metrics.observer_steady_z,
                            rms_e1: Some(metrics.rms_e1),
                            runtime_s,
                            status: "ok".into(),
                        }
                    }
                    Err(e) => SweepRow {
                        value,
                        steady_z: None,
                        rms_e1: None,
                        runtime_s,
                        status: format!("rejected: {e}"),
                    },
                }
            }
        };
        rows.push(row);
    }

    ensure_dir(output)?;
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                format_value(r.value),
                r.steady_z.map(format_value).unwrap_or_default(),
                r.rms_e1.map(format_value).unwrap_or_default(),
                format_value(r.runtime_s),
                r.status.replace(',', ";"),
            ]
        })
        .collect();
    write_table_csv(
        &output.join("sweep.csv"),
        "epsilon sweep summary; steady_z is the RMS estimate-error norm over the steady window",
        &["epsilon", "steady_z", "rms_e1", "runtime_s", "status"],
        &table,
    )?;

    println!(
        "sweep: {} values, {} ok, wall time {wall:.2} s",
        rows.len(),
        rows.iter().filter(|r| r.status == "ok").count()
    );
    if any_ok {
        Ok(())
    } else {
        Err(CliError::Numerical("every sweep value failed".into()))
    }
}

/// Run several presets side by side and tabulate their metrics.
pub fn cmd_compare(presets: &[String], output: &Path) -> Result<(), CliError> {
    if presets.is_empty() {
        return Err(CliError::Usage("compare needs at least one preset".into()));
    }
    let mut scenarios = Vec::with_capacity(presets.len());
    for name in presets {
        let scenario = preset_config(name)?.resolve()?;
        scenarios.push(scenario);
    }
    ensure_dir(output)?;
    let results = run_scenarios_parallel(&scenarios, worker_threads(None));

    let header = [
        "preset",
        "rms_e1",
        "max_e1_after_settle",
        "f_rms",
        "fhat_rms_error",
        "fhat_error_ratio",
        "saturation_duty",
        "jitter_xhat2",
        "status",
    ];
    let mut rows = Vec::new();
    let mut ok_traces: Vec<(String, SimTrace)> = Vec::new();
    for (name, result) in presets.iter().zip(results) {
        match result {
            Ok(trace) => {
                let metrics = MetricsReport::from_trace(&trace);
                let dir = output.join(name);
                ensure_dir(&dir)?;
                fs::write(dir.join("trace.csv"), trace_to_csv(&trace))
                    .map_err(|e| CliError::Config(format!("cannot write trace: {e}")))?;
                rows.push(vec![
                    name.clone(),
                    format_value(metrics.rms_e1),
                    format_value(metrics.max_e1_after_settle),
                    format_value(metrics.f_rms),
                    format_value(metrics.fhat_rms_error),
                    format_value(metrics.fhat_error_ratio),
                    format_value(metrics.saturation_duty),
                    metrics.jitter_xhat2.map(format_value).unwrap_or_default(),
                    "ok".into(),
                ]);
                ok_traces.push((name.clone(), trace));
            }
            Err(e) => rows.push(vec![
                name.clone(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                format!("failed: {e}").replace(',', ";"),
            ]),
        }
    }
    write_table_csv(
        &output.join("compare.csv"),
        "side-by-side preset metrics; estimator-only columns stay empty for full-state baselines",
        &header,
        &rows,
    )?;
    if !ok_traces.is_empty() {
        fs::write(output.join("compare.gp"), compare_plot_script(&ok_traces))
            .map_err(|e| CliError::Config(format!("cannot write plot script: {e}")))?;
    }
    println!("compare: {} presets, {} succeeded", presets.len(), ok_traces.len());
    Ok(())
}

