//! Soft diagnostics: reported, not asserted. The per-component error bound
//! built from the forcing magnitude is approximate for non-binomial gain
//! vectors, so a run that exceeds it is reported rather than failed.

use obslab::cli::presets::preset_config;
use obslab::control::slotine_error_bound;
use obslab::numkit::{min_decay_rate, Polynomial};
use obslab::simkit::run_closed_loop;

#[test]
fn error_bound_consistency_report() {
    let scenario = preset_config("fig5").unwrap().resolve().unwrap();
    let trace = run_closed_loop(&scenario).unwrap();

    let lambda = min_decay_rate(&Polynomial::from_gain_vector(&[20.0, 10.0]).unwrap()).unwrap();
    let tail: Vec<usize> = (0..trace.len()).filter(|&k| trace.t[k] > 3.0).collect();
    let phi_sup = tail.iter().map(|&k| trace.phi[k]).fold(0.0f64, f64::max);

    for i in 1..=2 {
        let bound = slotine_error_bound(phi_sup, lambda, 2, i).unwrap();
        let worst = tail
            .iter()
            .map(|&k| trace.errors[i - 1][k].abs())
            .fold(0.0f64, f64::max);
        assert!(bound.is_finite() && worst.is_finite());
        let verdict = if worst <= bound { "within" } else { "EXCEEDS" };
        println!(
            "bound consistency (soft): |e{i}| max = {worst:.3e} {verdict} 2^{}*phi/lambda^{} = {bound:.3e} (phi_sup = {phi_sup:.3e}, lambda = {lambda:.4})",
            i - 1,
            2 - i + 1
        );
    }
}
