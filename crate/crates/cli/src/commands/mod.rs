//! Subcommand implementations. Each `run` returns a small summary so that
//! tests can inspect results without re-reading the CSV files.

pub mod cpcheck;
pub mod domain;
pub mod evolve;
pub mod figures;
pub mod generator;

use std::path::PathBuf;

use corrdyn::generator::TimeGrid;
use corrdyn::Tolerances;

use crate::error::{CliError, CliResult};
use crate::scenario::{build_model, load_scenario, parse_scenario, BuiltModel, LoadedScenario};
use crate::table::Metadata;
use crate::CommonArgs;

/// A loaded scenario with command-line overrides applied.
pub struct Session {
    pub common: CommonArgs,
    pub loaded: LoadedScenario,
    pub tol: Tolerances,
    pub built: BuiltModel,
}

impl Session {
    pub fn load(common: &CommonArgs) -> CliResult<Self> {
        let path = common
            .scenario
            .as_ref()
            .ok_or_else(|| CliError::Input("--scenario is required".into()))?;
        Self::from_loaded(common, load_scenario(path)?)
    }

    pub fn from_text(common: &CommonArgs, text: &str) -> CliResult<Self> {
        Self::from_loaded(common, parse_scenario(text)?)
    }

    fn from_loaded(common: &CommonArgs, loaded: LoadedScenario) -> CliResult<Self> {
        let mut tol = loaded.scenario.tolerances();
        if let Some(psd) = common.tol_psd {
            tol.psd = psd;
        }
        if let Some(c) = common.cond_threshold {
            tol.cond_threshold = c;
        }
        let built = build_model(&loaded.scenario.model, tol)?;
        Ok(Self {
            common: common.clone(),
            loaded,
            tol,
            built,
        })
    }

    pub fn grid(&self) -> CliResult<TimeGrid> {
        let spec = self.loaded.scenario.time_grid;
        let t_max = self.common.t_max.or(spec.map(|g| g.t_max));
        let steps = self.common.steps.or(spec.map(|g| g.steps));
        match (t_max, steps) {
            (Some(t), Some(n)) => Ok(TimeGrid::new(t, n)?),
            _ => Err(CliError::Input(
                "no time grid: give time_grid in the scenario or --t-max and --steps".into(),
            )),
        }
    }

    pub fn metadata(&self, command: &str) -> Metadata {
        let mut meta = Metadata::new();
        meta.push("command", command)
            .push("model", self.loaded.scenario.model.tag())
            .push("scenario_hash", &self.loaded.hash)
            .tolerances(&self.tol);
        meta
    }

    pub fn out_path(&self, name: &str) -> PathBuf {
        self.common.out.join(name)
    }
}

pub(crate) fn max_deviation<'a>(
    a: impl IntoIterator<Item = &'a corrdyn::Operator>,
    b: impl IntoIterator<Item = &'a corrdyn::Operator>,
) -> f64 {
    a.into_iter()
        .zip(b)
        .map(|(x, y)| (x - y).frobenius_norm())
        .fold(0.0, f64::max)
}
