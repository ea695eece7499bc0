//! Declarative experiment configuration: TOML is the native format, JSON is
//! accepted as an alternate. Unknown keys are rejected so typos fail loudly.

use serde::{Deserialize, Serialize};

use bqsp_core::instr::DurationModel;
use bqsp_core::noise::NoiseModel;

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub output_path: Option<String>,
    /// Global Fock-dimension override (also settable via BQSP_FOCK_DIM).
    #[serde(default)]
    pub fock_dim: Option<usize>,
    #[serde(default)]
    pub parameters: Parameters,
    #[serde(default)]
    pub noise: Option<NoiseBlock>,
    #[serde(default)]
    pub durations: Option<DurationBlock>,
}

fn default_seed() -> u64 {
    20260808
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Parameters {
    #[serde(default)]
    pub alphas: Option<Vec<f64>>,
    #[serde(default)]
    pub theta: Option<f64>,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub target_db: Option<f64>,
    #[serde(default)]
    pub accelerated: Option<bool>,
    #[serde(default)]
    pub corrector: Option<String>,
    #[serde(default)]
    pub rounds: Option<usize>,
    #[serde(default)]
    pub pieces: Option<Vec<usize>>,
    #[serde(default)]
    pub p_x: Option<f64>,
    #[serde(default)]
    pub epsilons: Option<Vec<f64>>,
    #[serde(default)]
    pub thetas: Option<Vec<f64>>,
    #[serde(default)]
    pub squeeze_r: Option<f64>,
    #[serde(default)]
    pub shots: Option<usize>,
    #[serde(default)]
    pub n_steps: Option<usize>,
    #[serde(default)]
    pub append_sbs: Option<bool>,
    #[serde(default)]
    pub depth: Option<usize>,
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseBlock {
    #[serde(default)]
    pub kappa: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default)]
    pub gamma_phi: f64,
    #[serde(default = "default_dt")]
    pub substep_dt: f64,
}

fn default_dt() -> f64 {
    0.01
}

impl NoiseBlock {
    pub fn to_model(self) -> NoiseModel {
        NoiseModel {
            kappa: self.kappa,
            gamma: self.gamma,
            gamma_phi: self.gamma_phi,
            substep_dt: self.substep_dt,
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DurationBlock {
    #[serde(default = "default_tau")]
    pub tau_per_unit_amplitude: f64,
    #[serde(default)]
    pub rotation_time: f64,
    #[serde(default)]
    pub min_cd_time: f64,
}

fn default_tau() -> f64 {
    1.0
}

impl DurationBlock {
    pub fn to_model(self) -> DurationModel {
        DurationModel {
            tau_per_unit_amplitude: self.tau_per_unit_amplitude,
            rotation_time: self.rotation_time,
            min_cd_time: self.min_cd_time,
        }
    }
}

/// Parse a config from TOML (native) or JSON (alternate), selected by
/// content sniffing: JSON starts with `{`.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, String> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        serde_json::from_str(text).map_err(|e| format!("JSON config error: {e}"))
    } else {
        toml::from_str(text).map_err(|e| format!("TOML config error: {e}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unknown_keys() {
        let bad = "experiment = \"gkp_prep\"\nfokc_dim = 64\n";
        let err = parse_config(bad).unwrap_err();
        assert!(err.contains("fokc_dim"), "error should name the bad key: {err}");
    }

    #[test]
    fn parses_both_formats() {
        let t = "experiment = \"squeezing\"\nseed = 3\n[parameters]\ntarget_db = 8.5\n";
        let c = parse_config(t).unwrap();
        assert_eq!(c.experiment, "squeezing");
        assert_eq!(c.parameters.target_db, Some(8.5));
        let j = r#"{"experiment": "squeezing", "parameters": {"target_db": 8.5}}"#;
        let c2 = parse_config(j).unwrap();
        assert_eq!(c2.parameters.target_db, Some(8.5));
        assert_eq!(c2.seed, 20260808);
    }
}
