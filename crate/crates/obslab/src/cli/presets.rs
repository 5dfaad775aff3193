//! Built-in benchmark presets, embedded as config data so the effective
//! parameter sets can be diffed like any user config.

use crate::cli::config::ScenarioConfig;
use crate::cli::CliError;

/// Adaptive fuzzy baseline on the pendulum.
pub const FIG3: &str = r#"
[controller]
kind = "fuzzy"
k = [20.0, 10.0]
l_u = 50.0

[approximator]
gamma = 100.0
theta0 = 0.1
q_scale = 50.0

[sim]
t_end = 10.0
step = 0.001
decimate = 10
"#;

/// Adaptive RBF baseline on the pendulum.
pub const FIG4: &str = r#"
[controller]
kind = "rbf"
k = [20.0, 10.0]
l_u = 50.0

[approximator]
gamma = 100.0
w0 = 0.0
q_scale = 50.0

[sim]
t_end = 10.0
step = 0.001
decimate = 10
"#;

/// Differentiator-based output feedback on the pendulum.
pub const FIG5: &str = r#"
[controller]
kind = "differentiator"
k = [20.0, 10.0]
l_u = 50.0

[estimator]
epsilon = 0.01
a = [10.0, 10.0, 10.0]

[sim]
t_end = 10.0
step = 0.0001
decimate = 10
"#;

/// The differentiator scenario under bounded measurement noise, with the
/// classical high-gain structure co-integrated for comparison.
pub const FIG6: &str = r#"
[controller]
kind = "differentiator"
k = [20.0, 10.0]
l_u = 50.0

[estimator]
epsilon = 0.01
a = [10.0, 10.0, 10.0]

[sim]
t_end = 10.0
step = 0.0001
decimate = 10
shadow_highgain = true

[noise]
amplitude = 0.01
seed = 42
"#;

pub const PRESET_NAMES: [&str; 4] = ["fig3", "fig4", "fig5", "fig6"];

pub fn preset_toml(name: &str) -> Result<&'static str, CliError> {
    match name {
        "fig3" => Ok(FIG3),
        "fig4" => Ok(FIG4),
        "fig5" => Ok(FIG5),
        "fig6" => Ok(FIG6),
        other => Err(CliError::Usage(format!(
            "unknown preset `{other}` (expected one of {})",
            PRESET_NAMES.join(", ")
        ))),
    }
}

pub fn preset_config(name: &str) -> Result<ScenarioConfig, CliError> {
    ScenarioConfig::from_toml(preset_toml(name)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn all_presets_parse_and_resolve() {
        for name in PRESET_NAMES {
            let scenario = preset_config(name).unwrap().resolve().unwrap();
            assert_eq!(scenario.t_end, 10.0);
        }
    }

    #[test]
    fn fig5_effective_parameters() {
        let eff = preset_config("fig5").unwrap().effective();
        let est = eff.estimator.unwrap();
        assert_eq!(est.epsilon, 0.01);
        assert_eq!(est.a.unwrap(), vec![10.0, 10.0, 10.0]);
        let ctrl = eff.controller.unwrap();
        assert_eq!(ctrl.k.unwrap(), vec![20.0, 10.0]);
        let plant = eff.plant.unwrap();
        assert_eq!(plant.reference_amplitude.unwrap(), 0.1);
        assert_eq!(plant.reference_angular_freq.unwrap(), PI);
        let sim = eff.sim.unwrap();
        assert_eq!(sim.initial_state.unwrap(), vec![PI / 60.0, 0.0]);
    }

    #[test]
    fn fig6_adds_noise_and_shadow() {
        let eff = preset_config("fig6").unwrap().effective();
        let noise = eff.noise.unwrap();
        assert_eq!(noise.amplitude, 0.01);
        assert_eq!(noise.seed, Some(42));
        assert_eq!(eff.sim.unwrap().shadow_highgain, Some(true));
    }

    #[test]
    fn unknown_preset_rejected() {
        assert!(preset_toml("fig7").is_err());
    }
}
