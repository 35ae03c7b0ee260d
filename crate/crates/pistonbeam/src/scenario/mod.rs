//! Named experiment presets, scenario files, batch orchestration, and
//! deterministic CSV/JSON output.
//!
//! A scenario couples one boundary configuration and parameter set with an
//! initial-data battery, at most one swept axis, and a list of requested
//! output artifacts. Presets bundle the scenarios reproducing each
//! figure-class study; `load_scenario` reads the same schema from JSON
//! (strict: unknown keys are rejected).

mod presets;
mod runner;
mod writers;

pub use presets::{preset, preset_names};
pub use runner::{run_scenario, run_scenarios, RunManifest, RunRecord};
pub use writers::{format_float, write_csv};

use crate::model::{BeamParams, ConfigKind, FreeEndKind, InitialData};
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read scenario: {0}")]
    Io(#[from] std::io::Error),
    #[error("scenario JSON is not parseable: {0}")]
    Parse(serde_json::Error),
    #[error("scenario schema violation: {0}")]
    Schema(serde_json::Error),
    #[error("invalid scenario `{name}`: {reason}")]
    Invalid { name: String, reason: String },
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error(transparent)]
    Stability(#[from] crate::stability::StabilityError),
    #[error(transparent)]
    Fdm(#[from] crate::fdm::FdmError),
    #[error("every run in scenario `{0}` failed")]
    AllRunsFailed(String),
}

/// Parameter swept across runs of one scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepAxis {
    L,
    Beta,
    K0,
    U,
    /// U expressed as a multiple of the scenario's computed critical speed.
    UMultiple,
    B1,
    B2,
}

impl SweepAxis {
    pub fn label(&self) -> &'static str {
        match self {
            SweepAxis::L => "L",
            SweepAxis::Beta => "beta",
            SweepAxis::K0 => "k0",
            SweepAxis::U => "U",
            SweepAxis::UMultiple => "U-mult",
            SweepAxis::B1 => "b1",
            SweepAxis::B2 => "b2",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

/// Bracket and tolerance for critical-speed searches.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UcritSearch {
    pub u_lo: f64,
    pub u_hi: f64,
    #[serde(default = "default_ucrit_tol")]
    pub tol: f64,
    #[serde(default = "default_modes")]
    pub n_modes: usize,
}

fn default_ucrit_tol() -> f64 {
    1e-2
}

fn default_modes() -> usize {
    crate::stability::DEFAULT_TRUNCATION
}

/// Requested artifact kinds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum OutputKind {
    /// Per-run CSV: t, E, Pi, scriptE, Ehat.
    EnergyTrace,
    /// Per-run CSV: t, observable, E, Pi, scriptE.
    ObservableTrace,
    /// Per-run CSV of full fields at given times: t, x, w.
    Snapshots { times: Vec<f64> },
    /// Per-scenario CSV: axis_value, u_crit, omega_crit, bracket_lo,
    /// bracket_hi. Requires a sweep over L, beta, or k0 plus a search.
    UcritCurve,
}

/// One named experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub config: ConfigKind,
    #[serde(default)]
    pub cf_free_end: FreeEndKind,
    pub params: BeamParams,
    #[serde(default)]
    pub initial_data: Vec<InitialData>,
    #[serde(default)]
    pub sweep: Option<Sweep>,
    #[serde(default)]
    pub ucrit_search: Option<UcritSearch>,
    #[serde(default)]
    pub horizon: Option<f64>,
    #[serde(default)]
    pub sample_dt: Option<f64>,
    /// Grid nodes (default 128; 512 is used for the long physical beams).
    #[serde(default)]
    pub resolution: Option<usize>,
    #[serde(default)]
    pub rtol: Option<f64>,
    #[serde(default)]
    pub atol: Option<f64>,
    pub outputs: Vec<OutputKind>,
    /// Free-form caveats (e.g. source-figure caption/text conflicts),
    /// copied into the manifest.
    #[serde(default)]
    pub notes: Vec<String>,
}

impl Scenario {
    pub fn boundary_config(&self) -> crate::model::BoundaryConfig {
        crate::model::BoundaryConfig::new(self.config, self.cf_free_end)
    }

    fn wants_simulation(&self) -> bool {
        self.outputs.iter().any(|o| {
            matches!(
                o,
                OutputKind::EnergyTrace | OutputKind::ObservableTrace | OutputKind::Snapshots { .. }
            )
        })
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let invalid = |reason: String| ScenarioError::Invalid {
            name: self.name.clone(),
            reason,
        };
        if self.name.is_empty() {
            return Err(invalid("empty name".into()));
        }
        if self.outputs.is_empty() {
            return Err(invalid("no outputs requested".into()));
        }
        let report = self.params.validate(&self.boundary_config());
        if !report.ok() {
            return Err(invalid(format!(
                "parameter violations: {:?}",
                report.violations
            )));
        }
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return Err(invalid("sweep without values".into()));
            }
            if sweep.values.iter().any(|v| !v.is_finite()) {
                return Err(invalid("non-finite sweep value".into()));
            }
        }
        let wants_curve = self.outputs.contains(&OutputKind::UcritCurve);
        if wants_curve {
            let axis_ok = matches!(
                self.sweep.as_ref().map(|s| s.axis),
                Some(SweepAxis::L) | Some(SweepAxis::Beta) | Some(SweepAxis::K0)
            );
            if !axis_ok {
                return Err(invalid(
                    "a critical-speed curve needs a sweep over L, beta, or k0".into(),
                ));
            }
            if self.ucrit_search.is_none() {
                return Err(invalid("a critical-speed curve needs a search range".into()));
            }
        }
        if self.wants_simulation() {
            if self.horizon.is_none() {
                return Err(invalid("simulation outputs need a horizon".into()));
            }
            if self.initial_data.is_empty() {
                return Err(invalid("simulation outputs need initial data".into()));
            }
            if matches!(
                self.sweep.as_ref().map(|s| s.axis),
                Some(SweepAxis::L) | Some(SweepAxis::Beta)
            ) {
                return Err(invalid(
                    "simulation sweeps support k0, U, U-mult, b1, b2 axes".into(),
                ));
            }
            if self.sweep.as_ref().map(|s| s.axis) == Some(SweepAxis::UMultiple)
                && self.ucrit_search.is_none()
            {
                return Err(invalid(
                    "a U-multiple sweep needs a critical-speed search range".into(),
                ));
            }
        }
        if let Some(m) = self.resolution {
            if m < 32 {
                return Err(invalid(format!("resolution {m} below the 32-node minimum")));
            }
        }
        for ic in &self.initial_data {
            if let InitialData::Mode { n } = ic {
                if *n == 0 || *n > 5 {
                    return Err(invalid(format!("mode initial data index {n} not in 1..=5")));
                }
            }
        }
        Ok(())
    }
}

/// Load and validate a scenario document. Unknown keys are schema errors.
pub fn load_scenario(path: &Path) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path)?;
    let scenario: Scenario = serde_json::from_str(&text).map_err(|e| {
        if e.classify() == serde_json::error::Category::Data {
            ScenarioError::Schema(e)
        } else {
            ScenarioError::Parse(e)
        }
    })?;
    scenario.validate()?;
    Ok(scenario)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document_loads_with_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.json");
        std::fs::write(
            &path,
            r#"{
                "name": "smoke",
                "config": "CF",
                "params": {"d": 1.0, "l": 1.0, "beta": 1.0, "u": 150.0,
                           "k0": 0.0, "b1": 0.0, "b2": 1.0},
                "initial_data": [{"type": "polynomial"}],
                "horizon": 5.0,
                "outputs": [{"kind": "observable-trace"}]
            }"#,
        )
        .unwrap();
        let s = load_scenario(&path).unwrap();
        assert_eq!(s.name, "smoke");
        assert_eq!(s.cf_free_end, FreeEndKind::PhysicalNonlinear);
        assert!(s.sweep.is_none());
    }

    #[test]
    fn unknown_key_is_schema_error_with_key_name() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.json");
        std::fs::write(
            &path,
            r#"{
                "name": "bad",
                "config": "C",
                "alpha2": 1.0,
                "params": {"d": 1, "l": 1, "beta": 1, "u": 0, "k0": 0, "b1": 0, "b2": 0},
                "outputs": [{"kind": "energy-trace"}]
            }"#,
        )
        .unwrap();
        match load_scenario(&path) {
            Err(ScenarioError::Schema(e)) => {
                assert!(e.to_string().contains("alpha2"), "message: {e}");
            }
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn syntax_error_is_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.json");
        std::fs::write(&path, "{ not json").unwrap();
        assert!(matches!(
            load_scenario(&path),
            Err(ScenarioError::Parse(_))
        ));
    }

    #[test]
    fn preset_reference_expands() {
        let bundle = preset("fig1-sweep").unwrap();
        assert_eq!(bundle.len(), 3);
        for s in &bundle {
            s.validate().unwrap();
            assert!(s.outputs.contains(&OutputKind::UcritCurve));
        }
        assert!(preset("no-such-preset").is_none());
    }

    #[test]
    fn every_preset_validates() {
        for name in preset_names() {
            for s in preset(name).unwrap() {
                s.validate()
                    .unwrap_or_else(|e| panic!("preset {name}: {e}"));
            }
        }
    }

    #[test]
    fn ucrit_curve_requires_search_and_axis() {
        let mut s = preset("fig1-sweep").unwrap().remove(0);
        s.ucrit_search = None;
        assert!(s.validate().is_err());
    }
}
