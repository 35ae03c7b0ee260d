//! Scenario execution: expands a scenario into runs, executes them on a
//! worker pool, writes artifacts, and assembles the manifest.

use super::writers::write_csv;
use super::{OutputKind, Scenario, ScenarioError, SweepAxis};
use crate::fdm::{
    build_grid, integrate_opts, sample_initial, IntegrateOptions, Termination, Trajectory,
};
use crate::model::{BeamParams, InitialData};
use crate::modes::{build_mode_basis, ModeBasis};
use crate::stability::{find_ucrit, sweep_ucrit, UcritAxis};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Outcome of one run (or one critical-speed curve).
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub id: String,
    pub status: String,
    pub files: Vec<String>,
    pub params: BeamParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_data: Option<InitialData>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis_value: Option<f64>,
}

/// Everything one `run_scenario` call produced.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub scenario: String,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_crit_reference: Option<f64>,
    pub notes: Vec<String>,
    pub wall_time_s: f64,
    pub runs: Vec<RunRecord>,
    pub files: Vec<String>,
}

/// Number-to-filename fragment: `0.5` -> `0p5`, `-1` -> `m1`.
fn slug(x: f64) -> String {
    format!("{x}").replace('.', "p").replace('-', "m")
}

struct SimSpec {
    id: String,
    params: BeamParams,
    ic: InitialData,
    axis_value: Option<f64>,
}

/// Execute one scenario, writing artifacts under `out_dir`. `parallelism`
/// sizes the worker pool (0 = default). Fails only when every run fails.
pub fn run_scenario(
    scenario: &Scenario,
    out_dir: &Path,
    parallelism: usize,
) -> Result<RunManifest, ScenarioError> {
    scenario.validate()?;
    std::fs::create_dir_all(out_dir)?;
    let started = Instant::now();
    let config = scenario.boundary_config();

    let mut u_crit_reference = None;
    if scenario.sweep.as_ref().map(|s| s.axis) == Some(SweepAxis::UMultiple) {
        let search = scenario.ucrit_search.expect("validated");
        let result = find_ucrit(
            &config,
            &scenario.params,
            (search.u_lo, search.u_hi),
            search.tol,
            search.n_modes,
        )?;
        u_crit_reference = Some(result.u_crit);
    }

    let mut records: Vec<RunRecord> = Vec::new();
    let mut files: Vec<String> = Vec::new();

    if scenario.outputs.contains(&OutputKind::UcritCurve) {
        let (record, file) = run_ucrit_curve(scenario, out_dir, parallelism)?;
        files.extend(file.clone());
        records.push(record);
    }

    if scenario
        .outputs
        .iter()
        .any(|o| !matches!(o, OutputKind::UcritCurve))
    {
        let specs = expand_sim_specs(scenario, u_crit_reference);
        // one basis serves every run: the allowed sim axes leave L and D
        // untouched
        let basis = if specs
            .iter()
            .any(|s| matches!(s.ic, InitialData::Mode { .. }))
        {
            Some(
                build_mode_basis(&config, &scenario.params, 5)
                    .map_err(crate::stability::StabilityError::from)?,
            )
        } else {
            None
        };
        let exec = |spec: &SimSpec| execute_sim(scenario, spec, basis.as_ref(), out_dir);
        let results: Vec<RunRecord> = pool_map(parallelism, &specs, exec);
        for r in &results {
            files.extend(r.files.clone());
        }
        records.extend(results);
    }

    if !records.is_empty() && records.iter().all(|r| r.status.starts_with("error")) {
        return Err(ScenarioError::AllRunsFailed(scenario.name.clone()));
    }

    let manifest = RunManifest {
        scenario: scenario.name.clone(),
        version: env!("CARGO_PKG_VERSION").into(),
        u_crit_reference,
        notes: scenario.notes.clone(),
        wall_time_s: started.elapsed().as_secs_f64(),
        runs: records,
        files,
    };
    let manifest_path = out_dir.join(format!("{}.manifest.json", scenario.name));
    std::fs::write(
        &manifest_path,
        serde_json::to_string_pretty(&manifest).expect("manifest serializes"),
    )?;
    Ok(manifest)
}

/// Run a list of scenarios (e.g. a preset bundle).
pub fn run_scenarios(
    scenarios: &[Scenario],
    out_dir: &Path,
    parallelism: usize,
) -> Result<Vec<RunManifest>, ScenarioError> {
    let mut manifests = Vec::new();
    let mut failures = 0usize;
    for s in scenarios {
        match run_scenario(s, out_dir, parallelism) {
            Ok(m) => manifests.push(m),
            Err(ScenarioError::AllRunsFailed(_)) => failures += 1,
            Err(e) => return Err(e),
        }
    }
    if manifests.is_empty() && failures > 0 {
        return Err(ScenarioError::AllRunsFailed(format!(
            "{failures} scenario(s)"
        )));
    }
    Ok(manifests)
}

fn pool_map<T: Sync, R: Send>(
    parallelism: usize,
    items: &[T],
    f: impl Fn(&T) -> R + Sync,
) -> Vec<R> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(parallelism)
            .build();
        match pool {
            Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
            Err(_) => items.iter().map(&f).collect(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = parallelism;
        items.iter().map(&f).collect()
    }
}

fn expand_sim_specs(scenario: &Scenario, u_crit: Option<f64>) -> Vec<SimSpec> {
    let axis_values: Vec<Option<f64>> = match &scenario.sweep {
        Some(sweep) => sweep.values.iter().copied().map(Some).collect(),
        None => vec![None],
    };
    let axis = scenario.sweep.as_ref().map(|s| s.axis);
    let mut specs = Vec::new();
    for value in &axis_values {
        let mut params = scenario.params;
        if let (Some(axis), Some(v)) = (axis, value) {
            match axis {
                SweepAxis::K0 => params.k0 = *v,
                SweepAxis::U => params.u = *v,
                SweepAxis::UMultiple => params.u = v * u_crit.expect("validated"),
                SweepAxis::B1 => params.b1 = *v,
                SweepAxis::B2 => params.b2 = *v,
                SweepAxis::L | SweepAxis::Beta => unreachable!("rejected by validate"),
            }
        }
        for ic in &scenario.initial_data {
            let mut id = format!("{}__{}", scenario.name, ic.label());
            if let (Some(axis), Some(v)) = (axis, value) {
                id.push_str(&format!("__{}-{}", axis.label(), slug(*v)));
            }
            specs.push(SimSpec {
                id,
                params,
                ic: ic.clone(),
                axis_value: *value,
            });
        }
    }
    specs
}

fn execute_sim(
    scenario: &Scenario,
    spec: &SimSpec,
    basis: Option<&ModeBasis>,
    out_dir: &Path,
) -> RunRecord {
    let config = scenario.boundary_config();
    let mut record = RunRecord {
        id: spec.id.clone(),
        status: String::new(),
        files: vec![],
        params: spec.params,
        initial_data: Some(spec.ic.clone()),
        axis_value: spec.axis_value,
    };
    let grid = match build_grid(spec.params.l, scenario.resolution.unwrap_or(128)) {
        Ok(g) => g,
        Err(e) => {
            record.status = format!("error: {e}");
            return record;
        }
    };
    let state0 = match sample_initial(&spec.ic, &grid, &config, basis) {
        Ok(s) => s,
        Err(e) => {
            record.status = format!("error: {e}");
            return record;
        }
    };
    let horizon = scenario.horizon.expect("validated");
    let record_states = scenario
        .outputs
        .iter()
        .any(|o| matches!(o, OutputKind::Snapshots { .. }));
    let opts = IntegrateOptions {
        rtol: scenario.rtol.unwrap_or(1e-8),
        atol: scenario.atol.unwrap_or(1e-10),
        sample_dt: Some(scenario.sample_dt.unwrap_or(horizon / 1000.0)),
        record_states,
        ..Default::default()
    };
    let traj = integrate_opts(&state0, &spec.params, &config, &grid, horizon, &opts);
    record.status = match traj.termination {
        Termination::Completed => "ok".into(),
        Termination::AmplitudeCap { t, .. } => format!("diverged: amplitude cap at t = {t}"),
        Termination::StepSizeUnderflow { t, .. } => {
            format!("diverged: step underflow at t = {t}")
        }
    };
    for output in &scenario.outputs {
        let result = match output {
            OutputKind::EnergyTrace => {
                let path = out_dir.join(format!("{}__energy.csv", spec.id));
                write_csv(
                    &path,
                    &["t", "E", "Pi", "scriptE", "Ehat"],
                    traj.samples.iter().map(|s| {
                        vec![s.t, s.energy.e, s.energy.pi, s.energy.script_e, s.energy.ehat]
                    }),
                )
                .map(|_| path)
            }
            OutputKind::ObservableTrace => {
                let path = out_dir.join(format!("{}__observable.csv", spec.id));
                write_csv(
                    &path,
                    &["t", "observable", "E", "Pi", "scriptE"],
                    traj.samples.iter().map(|s| {
                        vec![s.t, s.observable, s.energy.e, s.energy.pi, s.energy.script_e]
                    }),
                )
                .map(|_| path)
            }
            OutputKind::Snapshots { times } => {
                let path = out_dir.join(format!("{}__snapshots.csv", spec.id));
                write_snapshots(&path, &traj, &grid, times).map(|_| path)
            }
            OutputKind::UcritCurve => continue,
        };
        match result {
            Ok(path) => record
                .files
                .push(path.file_name().unwrap().to_string_lossy().into_owned()),
            Err(e) => {
                record.status = format!("error: {e}");
                return record;
            }
        }
    }
    record
}

fn write_snapshots(
    path: &PathBuf,
    traj: &Trajectory,
    grid: &crate::fdm::Grid,
    times: &[f64],
) -> std::io::Result<()> {
    let states = traj.states.as_deref().unwrap_or(&[]);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for &t_req in times {
        let best = states
            .iter()
            .min_by(|a, b| {
                (a.t - t_req)
                    .abs()
                    .partial_cmp(&(b.t - t_req).abs())
                    .unwrap()
            })
            .or(Some(&traj.final_state));
        if let Some(state) = best {
            for i in 0..grid.m {
                rows.push(vec![state.t, grid.node(i), state.w[i]]);
            }
        }
    }
    write_csv(path, &["t", "x", "w"], rows.into_iter())
}

fn run_ucrit_curve(
    scenario: &Scenario,
    out_dir: &Path,
    parallelism: usize,
) -> Result<(RunRecord, Vec<String>), ScenarioError> {
    let sweep = scenario.sweep.as_ref().expect("validated");
    let search = scenario.ucrit_search.expect("validated");
    let axis = match sweep.axis {
        SweepAxis::L => UcritAxis::L,
        SweepAxis::Beta => UcritAxis::Beta,
        SweepAxis::K0 => UcritAxis::K0,
        _ => unreachable!("validated"),
    };
    let config = scenario.boundary_config();
    let points = {
        #[cfg(feature = "parallel")]
        {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(parallelism)
                .build();
            match pool {
                Ok(pool) => pool.install(|| {
                    sweep_ucrit(
                        &config,
                        &scenario.params,
                        axis,
                        &sweep.values,
                        (search.u_lo, search.u_hi),
                        search.tol,
                        search.n_modes,
                    )
                }),
                Err(_) => sweep_ucrit(
                    &config,
                    &scenario.params,
                    axis,
                    &sweep.values,
                    (search.u_lo, search.u_hi),
                    search.tol,
                    search.n_modes,
                ),
            }
        }
        #[cfg(not(feature = "parallel"))]
        {
            let _ = parallelism;
            sweep_ucrit(
                &config,
                &scenario.params,
                axis,
                &sweep.values,
                (search.u_lo, search.u_hi),
                search.tol,
                search.n_modes,
            )
        }
    };
    let total = points.len();
    let mut rows = Vec::new();
    let mut absent = Vec::new();
    for p in &points {
        match &p.outcome {
            Ok(r) => rows.push(vec![
                p.value,
                r.u_crit,
                r.omega_crit,
                r.bracket.0,
                r.bracket.1,
            ]),
            Err(e) => absent.push(format!("{} = {}: {e}", axis.label(), p.value)),
        }
    }
    let file_name = format!("{}__ucrit.csv", scenario.name);
    let path = out_dir.join(&file_name);
    write_csv(
        &path,
        &["axis_value", "u_crit", "omega_crit", "bracket_lo", "bracket_hi"],
        rows.iter().cloned(),
    )?;
    let ok = total - absent.len();
    let status = if absent.is_empty() {
        "ok".to_string()
    } else if ok == 0 {
        format!("error: no onset at any of {total} points ({})", absent.join("; "))
    } else {
        format!("ok: {ok}/{total} points ({} absent)", absent.join("; "))
    };
    Ok((
        RunRecord {
            id: format!("{}__ucrit", scenario.name),
            status,
            files: vec![file_name.clone()],
            params: scenario.params,
            initial_data: None,
            axis_value: None,
        },
        vec![file_name],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ConfigKind, FreeEndKind};
    use crate::scenario::{Sweep, UcritSearch};

    fn tiny_sim_scenario() -> Scenario {
        Scenario {
            name: "tiny".into(),
            config: ConfigKind::H,
            cf_free_end: FreeEndKind::PhysicalNonlinear,
            params: BeamParams {
                beta: 0.0,
                ..BeamParams::unit()
            },
            initial_data: vec![InitialData::Mode { n: 1 }, InitialData::Polynomial],
            sweep: None,
            ucrit_search: None,
            horizon: Some(0.2),
            sample_dt: Some(0.01),
            resolution: Some(48),
            rtol: Some(1e-6),
            atol: Some(1e-9),
            outputs: vec![
                OutputKind::EnergyTrace,
                OutputKind::ObservableTrace,
                OutputKind::Snapshots { times: vec![0.2] },
            ],
            notes: vec![],
        }
    }

    #[test]
    fn runs_write_expected_artifacts_and_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let manifest = run_scenario(&tiny_sim_scenario(), dir.path(), 1).unwrap();
        assert_eq!(manifest.runs.len(), 2);
        for r in &manifest.runs {
            assert_eq!(r.status, "ok");
            assert_eq!(r.files.len(), 3);
            for f in &r.files {
                assert!(dir.path().join(f).exists(), "missing {f}");
            }
        }
        assert!(dir.path().join("tiny.manifest.json").exists());
        // energy trace has a header and one row per sample
        let energy = std::fs::read_to_string(
            dir.path().join("tiny__mode1__energy.csv"),
        )
        .unwrap();
        let mut lines = energy.lines();
        assert_eq!(lines.next().unwrap(), "t,E,Pi,scriptE,Ehat");
        assert_eq!(lines.count(), 21);
    }

    #[test]
    fn reruns_reproduce_identical_bytes() {
        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        run_scenario(&tiny_sim_scenario(), d1.path(), 1).unwrap();
        run_scenario(&tiny_sim_scenario(), d2.path(), 2).unwrap();
        for f in [
            "tiny__mode1__energy.csv",
            "tiny__poly__observable.csv",
            "tiny__mode1__snapshots.csv",
        ] {
            let a = std::fs::read(d1.path().join(f)).unwrap();
            let b = std::fs::read(d2.path().join(f)).unwrap();
            assert_eq!(a, b, "{f} differs across runs/parallelism");
        }
    }

    #[test]
    fn ucrit_curve_scenario_writes_curve() {
        let dir = tempfile::tempdir().unwrap();
        let scenario = Scenario {
            name: "curve".into(),
            config: ConfigKind::CF,
            cf_free_end: FreeEndKind::PhysicalNonlinear,
            params: BeamParams::unit(),
            initial_data: vec![],
            sweep: Some(Sweep {
                axis: SweepAxis::K0,
                values: vec![0.0, 0.5],
            }),
            ucrit_search: Some(UcritSearch {
                u_lo: 1.0,
                u_hi: 400.0,
                tol: 0.05,
                n_modes: 4,
            }),
            horizon: None,
            sample_dt: None,
            resolution: None,
            rtol: None,
            atol: None,
            outputs: vec![OutputKind::UcritCurve],
            notes: vec![],
        };
        let manifest = run_scenario(&scenario, dir.path(), 1).unwrap();
        assert_eq!(manifest.runs.len(), 1);
        assert_eq!(manifest.runs[0].status, "ok");
        let text = std::fs::read_to_string(dir.path().join("curve__ucrit.csv")).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "axis_value,u_crit,omega_crit,bracket_lo,bracket_hi"
        );
        assert_eq!(lines.len(), 3);
        // damping pushes the onset upward
        let u0: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
        let u1: f64 = lines[2].split(',').nth(1).unwrap().parse().unwrap();
        assert!(u1 > u0);
    }

    #[test]
    fn diverging_run_is_flagged_not_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let scenario = Scenario {
            name: "blow".into(),
            config: ConfigKind::CF,
            cf_free_end: FreeEndKind::PhysicalNonlinear,
            params: BeamParams {
                u: 400.0,
                ..BeamParams::unit()
            },
            initial_data: vec![InitialData::Polynomial],
            sweep: None,
            ucrit_search: None,
            horizon: Some(60.0),
            sample_dt: Some(0.05),
            resolution: Some(64),
            rtol: Some(1e-5),
            atol: Some(1e-8),
            outputs: vec![OutputKind::EnergyTrace],
            notes: vec![],
        };
        let manifest = run_scenario(&scenario, dir.path(), 1).unwrap();
        assert!(manifest.runs[0].status.starts_with("diverged"));
    }
}
