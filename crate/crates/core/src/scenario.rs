//! Complete scenario files: system config plus optional channel statistics,
//! search box and objective route, all as flat keys of one JSON object.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::comm::ChannelProfile;
use crate::config::{self, SystemConfig};
use crate::error::{Error, Result};
use crate::optim::{DesignProblem, ObjectiveRoute, SearchBox};

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ScenarioFile {
    #[serde(flatten)]
    system: SystemConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    noise_var: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    estimator_var: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delay_spread_norm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    doppler_spread_norm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    num_paths: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    path_gains: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    path_delays_s: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    search_box: Option<SearchBox>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    objective: Option<ObjectiveRoute>,
}

/// Everything a command needs to evaluate or optimize a design.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub config: SystemConfig,
    pub profile: ChannelProfile,
    pub search: SearchBox,
    pub route: ObjectiveRoute,
}

impl Scenario {
    /// Reference numerology with the default channel profile.
    pub fn reference() -> Self {
        let config = SystemConfig::reference();
        Scenario {
            profile: ChannelProfile::default_for(&config),
            config,
            search: SearchBox::default(),
            route: ObjectiveRoute::default(),
        }
    }

    pub fn problem(&self) -> Result<DesignProblem> {
        DesignProblem::new(self.config.clone(), self.profile.clone(), self.search, self.route)
    }

    pub fn to_json(&self) -> Result<String> {
        let file = ScenarioFile {
            system: self.config.clone(),
            noise_var: Some(self.profile.noise_var),
            estimator_var: Some(self.profile.estimator_var),
            delay_spread_norm: Some(self.profile.delay_spread_norm),
            doppler_spread_norm: Some(self.profile.doppler_spread_norm),
            num_paths: Some(self.profile.num_paths()),
            path_gains: Some(self.profile.path_gains.clone()),
            path_delays_s: Some(self.profile.path_delays_s.clone()),
            search_box: Some(self.search),
            objective: Some(self.route),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let file: ScenarioFile = serde_json::from_str(text)?;
    let config = file.system;
    config.validate()?;

    let delay = file.delay_spread_norm.unwrap_or(ChannelProfile::DEFAULT_DELAY_SPREAD);
    let doppler = file.doppler_spread_norm.unwrap_or(ChannelProfile::DEFAULT_DOPPLER_SPREAD);
    let noise = file.noise_var.unwrap_or(ChannelProfile::DEFAULT_NOISE_VAR);
    let mut profile = match (file.path_gains, file.path_delays_s) {
        (Some(path_gains), Some(path_delays_s)) => {
            if file.num_paths.is_some_and(|l| l != path_gains.len()) {
                return Err(Error::validation("num_paths", "does not match the length of path_gains"));
            }
            ChannelProfile {
                path_gains,
                path_delays_s,
                doppler_spread_norm: doppler,
                delay_spread_norm: delay,
                noise_var: noise,
                estimator_var: 1.0,
            }
        }
        (None, None) => ChannelProfile::brick_wall(
            &config,
            delay,
            doppler,
            noise,
            file.num_paths.unwrap_or(ChannelProfile::DEFAULT_PATHS),
        )?,
        _ => {
            return Err(Error::validation(
                "path_gains",
                "path_gains and path_delays_s must be given together",
            ))
        }
    };
    if let Some(v) = file.estimator_var {
        profile.estimator_var = v;
    }
    profile.validate(&config)?;

    let search = file.search_box.unwrap_or_default();
    search.validate(&config)?;
    Ok(Scenario {
        config,
        profile,
        search,
        route: file.objective.unwrap_or_default(),
    })
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    parse_scenario(&config::read_text(path.as_ref())?)
}
