use std::path::{Path, PathBuf};

use ddt_core::flow::{ContinuationConfig, FlowConfig};
use ddt_core::torus::{Flux, TorusGrid};
use serde::{Deserialize, Serialize};

use crate::report::Failure;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Active torus axes, 1-based and increasing.
    pub axes: Vec<usize>,
    /// Points per active axis (a power of two).
    pub n: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { axes: vec![1, 2], n: 4 }
    }
}

/// Everything a run needs, in one JSON document. Missing fields take defaults
/// and the resolved document is echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridConfig,
    /// Flux integers n_ij for i < j in lexicographic order.
    pub flux: Flux,
    /// Plain-text flux file; overrides `flux` when set.
    pub flux_file: Option<PathBuf>,
    pub flow: FlowConfig,
    pub continuation: ContinuationConfig,
    /// Amplitude of the random initial potential for `flow`.
    pub initial_amplitude: f64,
    /// Amplitude of the random perturbation added before `continue`.
    pub perturbation: f64,
    /// Grid used by `moment`.
    pub moment_grid: GridConfig,
    pub moment_samples: usize,
    /// Refinement levels in the cylinder order table.
    pub order_levels: usize,
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            grid: GridConfig::default(),
            flux: Flux::zero(),
            flux_file: None,
            flow: FlowConfig::default(),
            continuation: ContinuationConfig::default(),
            initial_amplitude: 0.05,
            perturbation: 0.0,
            moment_grid: GridConfig { axes: vec![1, 3, 5], n: 8 },
            moment_samples: 5,
            order_levels: 3,
            seed: 0,
            output_dir: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let mut cfg: RunConfig = match path {
            None => RunConfig::default(),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
                serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?
            }
        };
        if let Some(file) = cfg.flux_file.take() {
            let text =
                std::fs::read_to_string(&file).map_err(|e| Failure::input(format!("{}: {e}", file.display())))?;
            cfg.flux = Flux::parse(&text)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), Failure> {
        self.grid()?;
        TorusGrid::new(&self.moment_grid.axes, self.moment_grid.n)?;
        self.flow.validate()?;
        self.continuation.validate()?;
        if !(self.initial_amplitude >= 0.0 && self.perturbation >= 0.0) {
            return Err(Failure::input("amplitudes must be nonnegative"));
        }
        if self.moment_samples == 0 || self.order_levels < 2 {
            return Err(Failure::input("moment_samples must be positive and order_levels at least 2"));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<TorusGrid, Failure> {
        Ok(TorusGrid::new(&self.grid.axes, self.grid.n)?)
    }

    pub fn moment_grid(&self) -> Result<TorusGrid, Failure> {
        Ok(TorusGrid::new(&self.moment_grid.axes, self.moment_grid.n)?)
    }
}
