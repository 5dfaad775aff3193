//! TOML scenario configuration.
//!
//! A config file carries the sections `[plant]`, `[estimator]`,
//! `[approximator]`, `[controller]`, `[sim]`, and `[noise]`. Unknown keys
//! are rejected. Omitted sections (and most omitted keys) take the
//! benchmark defaults, which reproduce the differentiator-based pendulum
//! scenario exactly; `t_end` is required whenever a `[sim]` section is
//! written out explicitly.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::approximators::{MembershipGrid, RbfLayout};
use crate::cli::CliError;
use crate::estimators::EstimatorGains;
use crate::plant::{PendulumParams, PlantModel, Reference};
use crate::simkit::{ApproximatorConfig, ControllerKind, NoiseSpec, Scenario};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plant: Option<PlantSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimator: Option<EstimatorSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approximator: Option<ApproximatorSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub controller: Option<ControllerSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sim: Option<SimSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gravity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cart_mass: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pendulum_mass: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_amplitude: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_angular_freq: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatorSection {
    pub epsilon: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clamp_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproximatorSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_scale: Option<f64>,
    /// Fuzzy membership centers per input dimension (shared across dims).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fuzzy_centers: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fuzzy_width: Option<f64>,
    /// RBF hidden-node centers in the (e, e') plane.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rbf_centers: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rbf_widths: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ControllerKindName {
    Fullstate,
    Fuzzy,
    Rbf,
    Differentiator,
    Observer,
}

impl From<ControllerKindName> for ControllerKind {
    fn from(name: ControllerKindName) -> Self {
        match name {
            ControllerKindName::Fullstate => ControllerKind::FullState,
            ControllerKindName::Fuzzy => ControllerKind::Fuzzy,
            ControllerKindName::Rbf => ControllerKind::Rbf,
            ControllerKindName::Differentiator => ControllerKind::Differentiator,
            ControllerKindName::Observer => ControllerKind::Observer,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControllerSection {
    pub kind: ControllerKindName,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_u: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    pub t_end: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decimate: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shadow_highgain: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSection {
    pub amplitude: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("scenario config serializes")
    }

    /// Fill every section and key with its default so the full effective
    /// parameter set can be inspected or diffed. The estimator section is
    /// materialized only when the controller needs one (or it was explicit);
    /// same for the approximator.
    pub fn effective(&self) -> ScenarioConfig {
        let controller = self.controller.clone().unwrap_or(ControllerSection {
            kind: ControllerKindName::Differentiator,
            k: None,
            l_u: None,
        });
        let kind: ControllerKind = controller.kind.into();
        let controller = ControllerSection {
            kind: controller.kind,
            k: Some(controller.k.unwrap_or_else(|| vec![20.0, 10.0])),
            l_u: Some(controller.l_u.unwrap_or(50.0)),
        };

        let plant = {
            let p = self.plant.clone().unwrap_or(PlantSection {
                gravity: None,
                cart_mass: None,
                pendulum_mass: None,
                half_length: None,
                reference_amplitude: None,
                reference_angular_freq: None,
            });
            PlantSection {
                gravity: Some(p.gravity.unwrap_or(9.8)),
                cart_mass: Some(p.cart_mass.unwrap_or(1.0)),
                pendulum_mass: Some(p.pendulum_mass.unwrap_or(0.1)),
                half_length: Some(p.half_length.unwrap_or(0.5)),
                reference_amplitude: Some(p.reference_amplitude.unwrap_or(0.1)),
                reference_angular_freq: Some(p.reference_angular_freq.unwrap_or(PI)),
            }
        };

        let estimator = if kind.needs_estimator() || self.estimator.is_some() {
            let e = self
                .estimator
                .clone()
                .unwrap_or(EstimatorSection { epsilon: 0.01, a: None, clamp_bound: None });
            Some(EstimatorSection {
                epsilon: e.epsilon,
                a: Some(e.a.unwrap_or_else(|| vec![10.0, 10.0, 10.0])),
                clamp_bound: Some(e.clamp_bound.unwrap_or(1e3)),
            })
        } else {
            None
        };

        let approximator = if kind.needs_approximator() || self.approximator.is_some() {
            let a = self.approximator.clone().unwrap_or(ApproximatorSection {
                gamma: None,
                theta0: None,
                w0: None,
                q_scale: None,
                fuzzy_centers: None,
                fuzzy_width: None,
                rbf_centers: None,
                rbf_widths: None,
            });
            let bench_rbf = RbfLayout::benchmark();
            Some(ApproximatorSection {
                gamma: Some(a.gamma.unwrap_or(100.0)),
                theta0: Some(a.theta0.unwrap_or(0.1)),
                w0: Some(a.w0.unwrap_or(0.0)),
                q_scale: Some(a.q_scale.unwrap_or(50.0)),
                fuzzy_centers: Some(a.fuzzy_centers.unwrap_or_else(|| {
                    vec![-PI / 6.0, -PI / 12.0, 0.0, PI / 12.0, PI / 6.0]
                })),
                fuzzy_width: Some(a.fuzzy_width.unwrap_or(PI / 24.0)),
                rbf_centers: Some(a.rbf_centers.unwrap_or(bench_rbf.centers)),
                rbf_widths: Some(a.rbf_widths.unwrap_or(bench_rbf.widths)),
            })
        } else {
            None
        };

        let sim = {
            let s = self.sim.clone().unwrap_or(SimSection {
                t_end: 10.0,
                step: None,
                decimate: None,
                initial_state: None,
                shadow_highgain: None,
            });
            SimSection {
                t_end: s.t_end,
                step: Some(s.step.unwrap_or(1e-4)),
                decimate: Some(s.decimate.unwrap_or(10)),
                initial_state: Some(s.initial_state.unwrap_or_else(|| vec![PI / 60.0, 0.0])),
                shadow_highgain: Some(s.shadow_highgain.unwrap_or(false)),
            }
        };

        let noise = self.noise.clone().map(|n| NoiseSection {
            amplitude: n.amplitude,
            seed: Some(n.seed.unwrap_or(42)),
        });

        ScenarioConfig {
            plant: Some(plant),
            estimator,
            approximator,
            controller: Some(controller),
            sim: Some(sim),
            noise,
        }
    }

    /// Override the noise seed (no effect on noiseless scenarios).
    pub fn override_seed(&mut self, seed: u64) {
        if let Some(noise) = &mut self.noise {
            noise.seed = Some(seed);
        }
    }

    /// Estimator gains, when the config carries them (explicitly or through
    /// an estimator-based controller).
    pub fn estimator_gains(&self) -> Result<Option<EstimatorGains>, CliError> {
        let eff = self.effective();
        match eff.estimator {
            Some(e) => {
                let gains = EstimatorGains::new(e.epsilon, e.a.expect("effective fills a"))
                    .map_err(|err| CliError::Config(err.to_string()))?;
                Ok(Some(gains))
            }
            None => Ok(None),
        }
    }

    /// Build the runnable scenario.
    pub fn resolve(&self) -> Result<Scenario, CliError> {
        let eff = self.effective();
        let plant_section = eff.plant.as_ref().expect("effective fills plant");
        let params = PendulumParams {
            gravity: plant_section.gravity.unwrap(),
            cart_mass: plant_section.cart_mass.unwrap(),
            pendulum_mass: plant_section.pendulum_mass.unwrap(),
            half_length: plant_section.half_length.unwrap(),
        }
        .validated()
        .map_err(|e| CliError::Config(e.to_string()))?;
        let plant = PlantModel::pendulum(params);
        let reference = Reference {
            amplitude: plant_section.reference_amplitude.unwrap(),
            angular_freq: plant_section.reference_angular_freq.unwrap(),
        };

        let controller_section = eff.controller.as_ref().expect("effective fills controller");
        let kind: ControllerKind = controller_section.kind.into();
        let gains = crate::control::GainVector::new(controller_section.k.clone().unwrap())
            .map_err(|e| CliError::Config(e.to_string()))?;

        let estimator = match &eff.estimator {
            Some(e) if kind.needs_estimator() => Some(
                EstimatorGains::new(e.epsilon, e.a.clone().unwrap())
                    .map_err(|err| CliError::Config(err.to_string()))?,
            ),
            _ => None,
        };
        let clamp_bound = eff
            .estimator
            .as_ref()
            .and_then(|e| e.clamp_bound)
            .unwrap_or(1e3);

        let approximator = match &eff.approximator {
            Some(a) if kind == ControllerKind::Fuzzy => {
                let centers = a.fuzzy_centers.clone().unwrap();
                let width = a.fuzzy_width.unwrap();
                if width <= 0.0 {
                    return Err(CliError::Config("fuzzy_width must be positive".into()));
                }
                let row: Vec<_> = centers
                    .iter()
                    .map(|&c| crate::approximators::Gaussian { center: c, width })
                    .collect();
                let grid = MembershipGrid::new(vec![row; plant.order()])
                    .map_err(|e| CliError::Config(e.to_string()))?;
                Some(ApproximatorConfig::Fuzzy {
                    grid,
                    gamma: a.gamma.unwrap(),
                    theta0: a.theta0.unwrap(),
                    q_scale: a.q_scale.unwrap(),
                })
            }
            Some(a) if kind == ControllerKind::Rbf => {
                let layout = RbfLayout {
                    centers: a.rbf_centers.clone().unwrap(),
                    widths: a.rbf_widths.clone().unwrap(),
                }
                .validated()
                .map_err(|e| CliError::Config(e.to_string()))?;
                Some(ApproximatorConfig::Rbf {
                    layout,
                    gamma: a.gamma.unwrap(),
                    w0: a.w0.unwrap(),
                    q_scale: a.q_scale.unwrap(),
                })
            }
            _ => None,
        };

        let sim = eff.sim.as_ref().expect("effective fills sim");
        let noise = eff.noise.as_ref().map(|n| NoiseSpec {
            amplitude: n.amplitude,
            seed: n.seed.unwrap(),
        });

        Ok(Scenario {
            plant,
            reference,
            controller: kind,
            gains,
            l_u: controller_section.l_u.unwrap(),
            estimator,
            approximator,
            t_end: sim.t_end,
            step: sim.step.unwrap(),
            decimate: sim.decimate.unwrap(),
            noise,
            initial_state: sim.initial_state.clone().unwrap(),
            shadow_highgain: sim.shadow_highgain.unwrap(),
            clamp_bound,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_reproduces_benchmark_defaults() {
        let cfg = ScenarioConfig::from_toml("").unwrap();
        let eff = cfg.effective();
        let est = eff.estimator.unwrap();
        assert_eq!(est.epsilon, 0.01);
        assert_eq!(est.a.unwrap(), vec![10.0, 10.0, 10.0]);
        let ctrl = eff.controller.unwrap();
        assert_eq!(ctrl.kind, ControllerKindName::Differentiator);
        assert_eq!(ctrl.k.unwrap(), vec![20.0, 10.0]);
        let sim = eff.sim.unwrap();
        assert_eq!(sim.t_end, 10.0);
        assert_eq!(sim.initial_state.unwrap(), vec![PI / 60.0, 0.0]);
        assert!(eff.noise.is_none());
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = ScenarioConfig::from_toml("[sim]\nt_end = 1.0\nbogus = 2\n").unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
    }

    #[test]
    fn missing_t_end_named_in_error() {
        let err = ScenarioConfig::from_toml("[sim]\nstep = 0.001\n").unwrap_err();
        assert!(err.to_string().contains("t_end"), "{err}");
    }

    #[test]
    fn round_trip_preserves_config() {
        let text = "[controller]\nkind = \"observer\"\nk = [20.0, 10.0]\n\n[estimator]\nepsilon = 0.02\n\n[sim]\nt_end = 3.0\nstep = 0.0001\n\n[noise]\namplitude = 0.01\nseed = 7\n";
        let cfg = ScenarioConfig::from_toml(text).unwrap();
        let round = ScenarioConfig::from_toml(&cfg.to_toml()).unwrap();
        assert_eq!(cfg, round);
        // The effective form round-trips as well.
        let eff = cfg.effective();
        let eff_round = ScenarioConfig::from_toml(&eff.to_toml()).unwrap();
        assert_eq!(eff, eff_round);
    }

    #[test]
    fn fuzzy_config_resolves_with_grid() {
        let text = "[controller]\nkind = \"fuzzy\"\n\n[sim]\nt_end = 1.0\nstep = 0.001\n";
        let scenario = ScenarioConfig::from_toml(text).unwrap().resolve().unwrap();
        assert_eq!(scenario.controller, ControllerKind::Fuzzy);
        match scenario.approximator.unwrap() {
            ApproximatorConfig::Fuzzy { grid, gamma, theta0, q_scale } => {
                assert_eq!(grid.rule_count(), 25);
                assert_eq!(gamma, 100.0);
                assert_eq!(theta0, 0.1);
                assert_eq!(q_scale, 50.0);
            }
            other => panic!("expected fuzzy config, got {other:?}"),
        }
    }

    #[test]
    fn seed_override_applies_only_with_noise() {
        let mut with = ScenarioConfig::from_toml("[noise]\namplitude = 0.01\n").unwrap();
        with.override_seed(99);
        assert_eq!(with.noise.unwrap().seed, Some(99));

        let mut without = ScenarioConfig::from_toml("").unwrap();
        without.override_seed(99);
        assert!(without.noise.is_none());
    }
}
