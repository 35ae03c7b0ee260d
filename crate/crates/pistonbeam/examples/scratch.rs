use pistonbeam::diagnostics::{detect_lco, fit_growth_rate};
use pistonbeam::fdm::{build_grid, integrate_opts, sample_initial, IntegrateOptions};
use pistonbeam::model::{BeamParams, BoundaryConfig, InitialData};
use pistonbeam::stability::{find_ucrit, spectrum_at};

fn main() {
    let which = std::env::args().nth(1).unwrap_or_default();
    match which.as_str() {
        "c-bracket" => c_bracket(),
        "cf-flutter" => cf_flutter(),
        "blowup" => blowup(),
        _ => {
            c_bracket();
            cf_flutter();
            blowup();
        }
    }
}

fn c_bracket() {
    let config = BoundaryConfig::clamped();
    let base = BeamParams::unit();
    let uc = find_ucrit(&config, &base, (1.0, 1000.0), 1e-3, 6).unwrap();
    println!("C modal U_crit = {}  omega_crit = {}", uc.u_crit, uc.omega_crit);
    let grid = build_grid(1.0, 128).unwrap();
    for mult in [150.0 / uc.u_crit, 0.98, 1.02, 1.5] {
        let u = mult * uc.u_crit;
        let params = base.with_u(u);
        let state0 = sample_initial(&InitialData::Polynomial, &grid, &config, None).unwrap();
        let t_end = 12.0;
        let traj = integrate_opts(
            &state0,
            &params,
            &config,
            &grid,
            t_end,
            &IntegrateOptions {
                sample_dt: Some(0.01),
                ..Default::default()
            },
        );
        let es = traj.energy_series();
        let last = es.last().unwrap();
        let sigma = fit_growth_rate(&es, (t_end * 0.5, last.0)).ok();
        let lam = spectrum_at(&config, &params, 6).unwrap();
        println!(
            "  U={u:9.3} ({mult:.3}x): E(0)={:.3e} E(end@t={:.2})={:.3e} sigma_fdm={:?} maxRe={:.4} steps={} term={:?}",
            es[0].1, last.0, last.1, sigma, lam.max_growth, traj.steps, traj.termination
        );
    }
}

fn cf_flutter() {
    let config = BoundaryConfig::cantilever();
    let grid = build_grid(1.0, 128).unwrap();
    for (b2, t_end) in [(0.0, 12.0), (1.0, 30.0)] {
        let params = BeamParams {
            u: 150.0,
            b2,
            ..BeamParams::unit()
        };
        let state0 = sample_initial(&InitialData::Polynomial, &grid, &config, None).unwrap();
        let traj = integrate_opts(
            &state0,
            &params,
            &config,
            &grid,
            t_end,
            &IntegrateOptions {
                sample_dt: Some(0.005),
                ..Default::default()
            },
        );
        let obs = traj.observable_series();
        let lco = detect_lco(&obs, 0.5);
        println!(
            "CF U=150 b2={b2}: term={:?} steps={} E_end={:.3e} lco={:?}",
            traj.termination,
            traj.steps,
            traj.samples.last().unwrap().energy.e,
            lco.map(|l| (l.converged, l.amplitude, l.period, l.relative_spread))
        );
    }
}

fn blowup() {
    let grid = build_grid(1.0, 256).unwrap();
    for (cfg, c, t_end) in [
        (BoundaryConfig::cantilever_linear_end(), 12.0, 8.0),
        (BoundaryConfig::cantilever_linear_end(), 13.0, 8.0),
        (BoundaryConfig::cantilever(), 12.0, 8.0),
    ] {
        let params = BeamParams {
            beta: 0.0,
            b2: 1.0,
            ..BeamParams::unit()
        };
        let state0 =
            sample_initial(&InitialData::Elementary { scale: c }, &grid, &cfg, None).unwrap();
        let traj = integrate_opts(
            &state0,
            &params,
            &cfg,
            &grid,
            t_end,
            &IntegrateOptions {
                sample_dt: Some(0.002),
                ..Default::default()
            },
        );
        let se: Vec<f64> = traj.samples.iter().map(|s| s.energy.script_e).collect();
        let e_max = se.iter().cloned().fold(0.0f64, f64::max);
        let drift = se.iter().map(|e| (e - se[0]).abs()).fold(0.0f64, f64::max) / se[0];
        println!(
            "CF {:?} c={c}: term={:?} steps={} scriptE0={:.4e} max={:.4e} rel_drift={:.3e}",
            cfg.free_end(),
            traj.termination,
            traj.steps,
            se[0],
            e_max,
            drift
        );
    }
}
