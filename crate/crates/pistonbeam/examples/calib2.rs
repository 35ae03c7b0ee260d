use pistonbeam::diagnostics::{detect_lco, detect_steady, fit_growth_rate, profile_difference};
use pistonbeam::fdm::{build_grid, integrate_opts, sample_initial, IntegrateOptions};
use pistonbeam::model::{BeamParams, BoundaryConfig, InitialData};
use pistonbeam::modes::build_mode_basis;
use std::time::Instant;

fn main() {
    match std::env::args().nth(1).unwrap_or_default().as_str() {
        "chaos" => chaos(),
        "buckle" => buckle(),
        "fig4" => fig4(),
        _ => {
            chaos();
            buckle();
            fig4();
        }
    }
}

fn chaos() {
    let config = BoundaryConfig::hinged();
    let params = BeamParams {
        u: 200.0,
        k0: 1.0,
        b1: 2000.0,
        b2: 1.0,
        ..BeamParams::unit()
    };
    let grid = build_grid(1.0, 256).unwrap();
    for eps in [0.0, 0.1, 0.01, 0.001] {
        let t0 = Instant::now();
        let state0 =
            sample_initial(&InitialData::Sine { eps }, &grid, &config, None).unwrap();
        let traj = integrate_opts(
            &state0,
            &params,
            &config,
            &grid,
            60.0,
            &IntegrateOptions {
                rtol: 1e-6,
                atol: 1e-9,
                sample_dt: Some(5e-3),
                ..Default::default()
            },
        );
        let es = traj.energy_series();
        let n = es.len();
        let median = |sl: &[(f64, f64)]| {
            let mut v: Vec<f64> = sl.iter().map(|p| p.1).collect();
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            v[v.len() / 2]
        };
        let early = median(&es[..n / 10]);
        let late = median(&es[(7 * n) / 10..]);
        let emax = es.iter().map(|p| p.1).fold(0.0f64, f64::max);
        let lco = detect_lco(&traj.observable_series(), 0.5);
        println!(
            "chaos eps={eps}: term={:?} steps={} E_early_med={early:.4e} E_late_med={late:.4e} E_max={emax:.4e} lco={:?} ({:.1?})",
            traj.termination,
            traj.steps,
            lco.map(|l| (l.converged, l.relative_spread)),
            t0.elapsed()
        );
    }
}

fn buckle() {
    let config = BoundaryConfig::clamped();
    let grid = build_grid(1.0, 128).unwrap();
    for (b1, k0s) in [(50.0, vec![0.0, 1.0, 3.0]), (100.0, vec![0.0, 1.0])] {
        let mut profiles: Vec<Vec<f64>> = Vec::new();
        for &k0 in &k0s {
            let params = BeamParams {
                u: 100.0,
                k0,
                b1,
                b2: 1.0,
                ..BeamParams::unit()
            };
            let state0 =
                sample_initial(&InitialData::Polynomial, &grid, &config, None).unwrap();
            let t0 = Instant::now();
            let traj = integrate_opts(
                &state0,
                &params,
                &config,
                &grid,
                40.0,
                &IntegrateOptions {
                    rtol: 1e-5,
                    atol: 1e-8,
                    sample_dt: Some(0.05),
                    record_states: true,
                    ..Default::default()
                },
            );
            let steady = detect_steady(&traj, 1e-4);
            let wmax = steady
                .profile
                .iter()
                .fold(0.0f64, |a, &x| a.max(x.abs()));
            println!(
                "buckle b1={b1} k={}: steady={} residual={:.3e} max|w|={wmax:.5} steps={} ({:.1?})",
                k0 + 1.0,
                steady.is_steady,
                steady.residual,
                traj.steps,
                t0.elapsed()
            );
            profiles.push(steady.profile);
        }
        for i in 1..profiles.len() {
            println!(
                "  b1={b1}: profile diff 0 vs {i} (sign-matched) = {:.3e}",
                profile_difference(&profiles[0], &profiles[i])
            );
        }
    }
}

fn fig4() {
    let config = BoundaryConfig::hinged();
    let params = BeamParams {
        d: 23.9,
        l: 300.0,
        beta: 1.2e-4,
        u: 5.0,
        ..BeamParams::unit()
    };
    let grid = build_grid(300.0, 512).unwrap();
    let basis = build_mode_basis(&config, &params, 2).unwrap();
    for ic in [
        InitialData::Mode { n: 1 },
        InitialData::Mode { n: 2 },
        InitialData::Polynomial,
        InitialData::Elementary { scale: 1.0 },
    ] {
        let t0 = Instant::now();
        let state0 = sample_initial(&ic, &grid, &config, Some(&basis)).unwrap();
        let traj = integrate_opts(
            &state0,
            &params,
            &config,
            &grid,
            8000.0,
            &IntegrateOptions {
                rtol: 1e-6,
                atol: 1e-12,
                sample_dt: Some(4.0),
                ..Default::default()
            },
        );
        let sigma = fit_growth_rate(&traj.energy_series(), (3000.0, 8000.0));
        println!(
            "fig4 {:?}: term={:?} steps={} sigma={:?} ({:.1?})",
            ic,
            traj.termination,
            traj.steps,
            sigma,
            t0.elapsed()
        );
    }
}
