use clap::ValueEnum;
use qbounce::bouncer::ModeConstants;
use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// WKB ground-state constants S_1 = (9 pi/8)^(2/3), N_1 = (8 pi^2/9)^(1/6).
    Paper,
    /// True Airy zeros and unit normalization.
    Exact,
}

impl From<Convention> for ModeConstants {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Paper => ModeConstants::PaperWkb,
            Convention::Exact => ModeConstants::Exact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Strength used in the inverse-square term of the invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum H2Mode {
    /// h^2 = 1, the invariant exactly as printed.
    Paper,
    /// h^2 = N^4 / pi^2, the value the Pinney function actually satisfies.
    Consistent,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub convention: Convention,
    pub lambda: f64,
    pub grid_min: f64,
    pub grid_max: f64,
    pub grid_points: usize,
    pub tolerance: f64,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            convention: Convention::Exact,
            lambda: 1.0,
            grid_min: 0.0,
            grid_max: 12.0,
            grid_points: 1201,
            tolerance: 1e-12,
            output_format: OutputFormat::Csv,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        if !(self.grid_min.is_finite() && self.grid_max.is_finite()) {
            return Err(CliError::Usage("grid limits must be finite".into()));
        }
        if self.grid_min < 0.0 {
            return Err(CliError::Usage(format!("grid must start at or above the floor, got {}", self.grid_min)));
        }
        if !(self.grid_min < self.grid_max) {
            return Err(CliError::Usage(format!(
                "grid-min {} must be below grid-max {}",
                self.grid_min, self.grid_max
            )));
        }
        if self.grid_points < 2 {
            return Err(CliError::Usage("grid-points must be at least 2".into()));
        }
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return Err(CliError::Usage(format!("tolerance must lie in (0, 1), got {}", self.tolerance)));
        }
        let grid = self.grid();
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Usage("grid is too fine to be strictly increasing in double precision".into()));
        }
        Ok(())
    }

    pub fn validate_lambda(&self) -> CliResult<()> {
        if self.lambda > 0.0 && self.lambda.is_finite() {
            Ok(())
        } else {
            Err(CliError::Usage(format!("lambda must be positive, got {}", self.lambda)))
        }
    }

    /// Uniform grid with both ends hit exactly.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.grid_points;
        let span = self.grid_max - self.grid_min;
        (0..n)
            .map(|i| if i + 1 == n { self.grid_max } else { self.grid_min + span * i as f64 / (n - 1) as f64 })
            .collect()
    }

    pub fn constants(&self) -> ModeConstants {
        self.convention.into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid() {
        let cfg = RunConfig::default();
        cfg.validate().unwrap();
        let g = cfg.grid();
        assert_eq!(g.len(), 1201);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[1200], 12.0);
        assert_eq!(g[100], 1.0);
    }

    #[test]
    fn rejects_degenerate_grids() {
        let bad = [
            RunConfig { grid_min: 1.0, grid_max: 1.0, ..RunConfig::default() },
            RunConfig { grid_points: 1, ..RunConfig::default() },
            RunConfig { grid_min: -1.0, ..RunConfig::default() },
            RunConfig { grid_min: 1.0, grid_max: 1.0 + 1e-15, grid_points: 100, ..RunConfig::default() },
            RunConfig { tolerance: 0.0, ..RunConfig::default() },
        ];
        for cfg in bad {
            assert!(matches!(cfg.validate(), Err(CliError::Usage(_))), "{cfg:?}");
        }
        assert!(RunConfig { lambda: 0.0, ..RunConfig::default() }.validate_lambda().is_err());
    }
}
