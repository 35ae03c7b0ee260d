use pistonbeam::fdm::{build_grid, integrate_opts, sample_initial, IntegrateOptions};
use pistonbeam::model::{BeamParams, BoundaryConfig, InitialData};
fn main() {
    let config = BoundaryConfig::clamped();
    let grid = build_grid(1.0, 128).unwrap();
    let params = BeamParams { u: 150.0, ..BeamParams::unit() };
    let state0 = sample_initial(&InitialData::Polynomial, &grid, &config, None).unwrap();
    let traj = integrate_opts(&state0, &params, &config, &grid, 0.5,
        &IntegrateOptions { sample_dt: Some(0.01), ..Default::default() });
    eprintln!("steps={} term={:?}", traj.steps, traj.termination);
}
