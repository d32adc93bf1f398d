pub mod embed;
pub mod lambda;
pub mod pmf;
pub mod simulate;
pub mod verify;

use clap::Args;
use depref::{Model, ModelParams};

use crate::config::{resolve, ConfigFile};
use crate::error::{CliError, CliResult};

/// Model selection shared by `simulate` and `embed`.
#[derive(Debug, Args)]
pub struct ModelArgs {
    /// `linear` or `inverse`.
    #[arg(long)]
    pub model: Option<String>,
    /// Linear model offset (theta >= 1).
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Inverse model shift (delta > -1).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Half-edges per arriving vertex.
    #[arg(long)]
    pub m: Option<u32>,
}

impl ModelArgs {
    pub fn resolve(&self, file: &ConfigFile) -> CliResult<ModelParams> {
        let kind = resolve(self.model.clone(), file, "model", "inverse".to_string())?;
        let alpha = resolve(self.alpha, file, "alpha", 1.0)?;
        let m = resolve(self.m, file, "m", 1)?;
        let model = match kind.as_str() {
            "linear" => Model::Linear { theta: resolve(self.theta, file, "theta", 1.0)?, alpha },
            "inverse" | "inverse_power" => {
                Model::InversePower { alpha, delta: resolve(self.delta, file, "delta", 0.0)? }
            }
            other => return Err(CliError::Usage(format!("unknown model '{other}'; use linear or inverse"))),
        };
        Ok(ModelParams::new(model, m)?)
    }
}
