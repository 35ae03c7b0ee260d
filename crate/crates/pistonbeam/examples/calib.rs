use pistonbeam::fdm::{build_grid, integrate_opts, sample_initial, IntegrateOptions};
use pistonbeam::diagnostics::detect_lco;
use pistonbeam::model::{BeamParams, BoundaryConfig, InitialData};
use std::time::Instant;

fn main() {
    // CF U=150 b2=1 LCO run at several tolerances: compare amplitude/period
    let config = BoundaryConfig::cantilever();
    let grid = build_grid(1.0, 128).unwrap();
    let params = BeamParams { u: 150.0, b2: 1.0, ..BeamParams::unit() };
    let state0 = sample_initial(&InitialData::Polynomial, &grid, &config, None).unwrap();
    for (rtol, atol) in [(1e-5, 1e-8), (1e-6, 1e-9), (1e-8, 1e-10)] {
        let t0 = Instant::now();
        let traj = integrate_opts(&state0, &params, &config, &grid, 30.0,
            &IntegrateOptions { rtol, atol, sample_dt: Some(0.005), ..Default::default() });
        let lco = detect_lco(&traj.observable_series(), 0.5).unwrap();
        println!("rtol={rtol:.0e}: steps={} time={:.1?} term={:?} amp={:.6} per={:.6} spread={:.2e} conv={}",
            traj.steps, t0.elapsed(), traj.termination, lco.amplitude, lco.period, lco.relative_spread, lco.converged);
    }
}
