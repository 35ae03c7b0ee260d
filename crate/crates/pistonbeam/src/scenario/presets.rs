//! Built-in experiment presets.
//!
//! Each preset pins every constant of one figure-class study: the critical
//! speed sweeps over length, flow density, and damping; the initial-data
//! growth battery; linear and nonlinear energy studies around the critical
//! speed; the cantilever free-end blow-up dichotomy; limit-cycle
//! uniformity; buckling; the non-simple limit cycle; the hinged
//! large-compression chaos study; and the restoring-force plateau sweep.
//! Known inconsistencies in the source material are carried as notes on
//! the affected scenario and surface in the run manifest.

use super::{OutputKind, Scenario, Sweep, SweepAxis, UcritSearch};
use crate::model::{BeamParams, ConfigKind, FreeEndKind, InitialData};

const PRESET_NAMES: &[&str] = &[
    "fig1-sweep",
    "fig2-beta-sweep",
    "fig3-k0-sweep",
    "fig4-ic-battery",
    "lin-energy-C",
    "nonlin-energy-C",
    "blowup-cf",
    "lco-cf",
    "buckle-C",
    "nonsimple-lco",
    "chaos-h",
    "b2-plateau",
    "lco-damping-C",
];

pub fn preset_names() -> &'static [&'static str] {
    PRESET_NAMES
}

/// Expand a preset name into its scenario bundle.
pub fn preset(name: &str) -> Option<Vec<Scenario>> {
    let bundle = match name {
        "fig1-sweep" => ucrit_sweep_bundle(
            "fig1-sweep",
            SweepAxis::L,
            vec![100.0, 150.0, 200.0, 250.0, 300.0, 350.0, 400.0, 450.0, 500.0],
            UcritSearch {
                u_lo: 0.0,
                u_hi: 200.0,
                tol: 1e-2,
                n_modes: 6,
            },
        ),
        "fig2-beta-sweep" => ucrit_sweep_bundle(
            "fig2-beta-sweep",
            SweepAxis::Beta,
            vec![1e-5, 2e-5, 5e-5, 1e-4, 2e-4, 5e-4, 1e-3, 2e-3, 5e-3, 1e-2],
            UcritSearch {
                u_lo: 0.0,
                u_hi: 600.0,
                tol: 1e-3,
                n_modes: 6,
            },
        ),
        "fig3-k0-sweep" => ucrit_sweep_bundle(
            "fig3-k0-sweep",
            SweepAxis::K0,
            vec![0.0, 5e-5, 1e-4, 2e-4, 3e-4, 4e-4, 5e-4],
            UcritSearch {
                u_lo: 0.0,
                u_hi: 400.0,
                tol: 1e-2,
                n_modes: 6,
            },
        ),
        "fig4-ic-battery" => vec![Scenario {
            name: "fig4-ic-battery".into(),
            config: ConfigKind::H,
            cf_free_end: FreeEndKind::PhysicalNonlinear,
            params: BeamParams {
                u: 5.0,
                ..physical_base()
            },
            initial_data: vec![
                InitialData::Mode { n: 1 },
                InitialData::Mode { n: 2 },
                InitialData::Polynomial,
                InitialData::Elementary { scale: 1.0 },
            ],
            sweep: None,
            ucrit_search: None,
            horizon: Some(8000.0),
            sample_dt: Some(4.0),
            resolution: Some(512),
            rtol: Some(1e-6),
            atol: Some(1e-12),
            outputs: vec![OutputKind::EnergyTrace, OutputKind::ObservableTrace],
            notes: vec![],
        }],
        "lin-energy-C" => vec![
            lin_energy_scenario("lin-energy-C-damped", 0.0),
            lin_energy_scenario("lin-energy-C-undamped", -1.0),
        ],
        "nonlin-energy-C" => vec![Scenario {
            name: "nonlin-energy-C".into(),
            config: ConfigKind::C,
            cf_free_end: FreeEndKind::PhysicalNonlinear,
            params: BeamParams {
                b2: 1.0,
                ..BeamParams::unit()
            },
            initial_data: vec![InitialData::Polynomial],
            sweep: Some(Sweep {
                axis: SweepAxis::UMultiple,
                values: vec![0.5, 1.1, 1.5, 2.0],
            }),
            ucrit_search: Some(unit_search()),
            horizon: Some(20.0),
            sample_dt: Some(5e-3),
            resolution: Some(128),
            rtol: Some(1e-5),
            atol: Some(1e-8),
            outputs: vec![OutputKind::EnergyTrace, OutputKind::ObservableTrace],
            notes: vec![],
        }],
        "blowup-cf" => vec![
            Scenario {
                name: "blowup-cf-linear-end".into(),
                config: ConfigKind::CF,
                cf_free_end: FreeEndKind::LinearNonPhysical,
                params: in_vacuo_nonlinear(),
                initial_data: vec![
                    InitialData::Elementary { scale: 12.0 },
                    InitialData::Elementary { scale: 13.0 },
                ],
                sweep: None,
                ucrit_search: None,
                horizon: Some(8.0),
                sample_dt: Some(2e-3),
                resolution: Some(256),
                rtol: Some(1e-6),
                atol: Some(1e-9),
                outputs: vec![OutputKind::EnergyTrace, OutputKind::ObservableTrace],
                notes: vec![
                    "the linear free-end closure alongside b2 > 0 does not conserve energy; \
                     growth past c = 12 is the expected signal"
                        .into(),
                ],
            },
            Scenario {
                name: "blowup-cf-physical-end".into(),
                config: ConfigKind::CF,
                cf_free_end: FreeEndKind::PhysicalNonlinear,
                params: in_vacuo_nonlinear(),
                initial_data: vec![InitialData::Elementary { scale: 12.0 }],
                sweep: None,
                ucrit_search: None,
                horizon: Some(8.0),
                sample_dt: Some(2e-3),
                resolution: Some(256),
                rtol: Some(1e-8),
                atol: Some(1e-11),
                outputs: vec![OutputKind::EnergyTrace, OutputKind::ObservableTrace],
                notes: vec![],
            },
        ],
        "lco-cf" => vec![
            Scenario {
                name: "lco-cf-invacuo".into(),
                config: ConfigKind::CF,
                cf_free_end: FreeEndKind::PhysicalNonlinear,
                params: in_vacuo_nonlinear(),
                initial_data: lco_battery(),
                sweep: None,
                ucrit_search: None,
                horizon: Some(12.0),
                sample_dt: Some(5e-3),
                resolution: Some(128),
                rtol: Some(1e-6),
                atol: Some(1e-9),
                outputs: vec![OutputKind::ObservableTrace, OutputKind::EnergyTrace],
                notes: vec![],
            },
            Scenario {
                name: "lco-cf-flutter".into(),
                config: ConfigKind::CF,
                cf_free_end: FreeEndKind::PhysicalNonlinear,
                params: BeamParams {
                    u: 150.0,
                    b2: 1.0,
                    ..BeamParams::unit()
                },
                initial_data: lco_battery(),
                sweep: None,
                ucrit_search: None,
                horizon: Some(30.0),
                sample_dt: Some(5e-3),
                resolution: Some(128),
                rtol: Some(1e-5),
                atol: Some(1e-8),
                outputs: vec![OutputKind::ObservableTrace, OutputKind::EnergyTrace],
                notes: vec![],
            },
        ],
        "buckle-C" => vec![
            buckle_scenario("buckle-C-b1-50", 50.0, vec![0.0, 1.0, 3.0]),
            buckle_scenario("buckle-C-b1-100", 100.0, vec![0.0, 1.0]),
        ],
        "nonsimple-lco" => vec![Scenario {
            name: "nonsimple-lco".into(),
            config: ConfigKind::C,
            cf_free_end: FreeEndKind::PhysicalNonlinear,
            params: BeamParams {
                u: 5000.0,
                k0: 100.0,
                b1: 5000.0,
                b2: 5000.0,
                ..BeamParams::unit()
            },
            initial_data: vec![InitialData::Polynomial],
            sweep: None,
            ucrit_search: None,
            horizon: Some(3.0),
            sample_dt: Some(2e-4),
            resolution: Some(128),
            rtol: Some(1e-6),
            atol: Some(1e-9),
            outputs: vec![OutputKind::ObservableTrace, OutputKind::EnergyTrace],
            notes: vec![
                "source caption reads b1 = 5000, b2 = 5000, k = 101 while the body text \
                 gives k = 100, b1 = 5000, b2 = 1000; the caption values are used"
                    .into(),
            ],
        }],
        "chaos-h" => vec![Scenario {
            name: "chaos-h".into(),
            config: ConfigKind::H,
            cf_free_end: FreeEndKind::PhysicalNonlinear,
            params: BeamParams {
                u: 200.0,
                k0: 1.0,
                b1: 2000.0,
                b2: 1.0,
                ..BeamParams::unit()
            },
            initial_data: vec![
                InitialData::Sine { eps: 0.0 },
                InitialData::Sine { eps: 0.1 },
                InitialData::Sine { eps: 0.01 },
                InitialData::Sine { eps: 0.001 },
            ],
            sweep: None,
            ucrit_search: None,
            horizon: Some(60.0),
            sample_dt: Some(5e-3),
            resolution: Some(256),
            rtol: Some(1e-6),
            atol: Some(1e-9),
            outputs: vec![OutputKind::ObservableTrace, OutputKind::EnergyTrace],
            notes: vec![],
        }],
        "b2-plateau" => vec![Scenario {
            name: "b2-plateau".into(),
            config: ConfigKind::C,
            cf_free_end: FreeEndKind::PhysicalNonlinear,
            params: BeamParams {
                u: 150.0,
                ..BeamParams::unit()
            },
            initial_data: vec![InitialData::Polynomial],
            sweep: Some(Sweep {
                axis: SweepAxis::B2,
                values: vec![0.5, 1.0, 2.0, 4.0],
            }),
            ucrit_search: None,
            horizon: Some(20.0),
            sample_dt: Some(5e-3),
            resolution: Some(128),
            rtol: Some(1e-5),
            atol: Some(1e-8),
            outputs: vec![OutputKind::EnergyTrace],
            notes: vec![
                "at these coefficients the clamped beam is linearly stable at U = 150 \
                 (its critical speed is near 636), so all traces decay and the late-time \
                 plateaus sit at the decay floor"
                    .into(),
            ],
        }],
        "lco-damping-C" => vec![Scenario {
            name: "lco-damping-C".into(),
            config: ConfigKind::C,
            cf_free_end: FreeEndKind::PhysicalNonlinear,
            params: BeamParams {
                u: 5000.0,
                b1: 20.0,
                b2: 1.0,
                ..BeamParams::unit()
            },
            initial_data: vec![InitialData::Polynomial],
            sweep: Some(Sweep {
                axis: SweepAxis::K0,
                values: vec![0.0, 1.0, 3.0, 7.0],
            }),
            ucrit_search: None,
            horizon: Some(3.0),
            sample_dt: Some(2e-4),
            resolution: Some(128),
            rtol: Some(1e-6),
            atol: Some(1e-9),
            outputs: vec![OutputKind::ObservableTrace, OutputKind::EnergyTrace],
            notes: vec![
                "source caption reads b1 = 20 while the body text says 50; the caption \
                 value is used"
                    .into(),
            ],
        }],
        _ => return None,
    };
    Some(bundle)
}

/// D = 23.9, L = 300, beta = 1.2e-4, no imposed damping, linear beam.
fn physical_base() -> BeamParams {
    BeamParams {
        d: 23.9,
        l: 300.0,
        beta: 1.2e-4,
        u: 0.0,
        k0: 0.0,
        b1: 0.0,
        b2: 0.0,
        alpha: 0.0,
        k1: 0.0,
    }
}

fn in_vacuo_nonlinear() -> BeamParams {
    BeamParams {
        beta: 0.0,
        b2: 1.0,
        ..BeamParams::unit()
    }
}

fn unit_search() -> UcritSearch {
    UcritSearch {
        u_lo: 1.0,
        u_hi: 1000.0,
        tol: 1e-2,
        n_modes: 6,
    }
}

fn lco_battery() -> Vec<InitialData> {
    vec![
        InitialData::Mode { n: 2 },
        InitialData::Polynomial,
        InitialData::Elementary { scale: 1.0 },
    ]
}

fn ucrit_sweep_bundle(
    base_name: &str,
    axis: SweepAxis,
    values: Vec<f64>,
    search: UcritSearch,
) -> Vec<Scenario> {
    [ConfigKind::C, ConfigKind::H, ConfigKind::CF]
        .into_iter()
        .map(|config| Scenario {
            name: format!("{base_name}-{}", config.label().to_lowercase()),
            config,
            cf_free_end: FreeEndKind::PhysicalNonlinear,
            params: physical_base(),
            initial_data: vec![],
            sweep: Some(Sweep {
                axis,
                values: values.clone(),
            }),
            ucrit_search: Some(search),
            horizon: None,
            sample_dt: None,
            resolution: None,
            rtol: None,
            atol: None,
            outputs: vec![OutputKind::UcritCurve],
            notes: vec![],
        })
        .collect()
}

fn lin_energy_scenario(name: &str, k0: f64) -> Scenario {
    Scenario {
        name: name.into(),
        config: ConfigKind::C,
        cf_free_end: FreeEndKind::PhysicalNonlinear,
        params: BeamParams {
            k0,
            ..BeamParams::unit()
        },
        initial_data: vec![InitialData::Polynomial],
        sweep: Some(Sweep {
            axis: SweepAxis::UMultiple,
            values: vec![0.0, 0.5, 0.9, 1.1, 1.5, 2.0],
        }),
        ucrit_search: Some(unit_search()),
        horizon: Some(12.0),
        sample_dt: Some(5e-3),
        resolution: Some(128),
        rtol: Some(1e-6),
        atol: Some(1e-9),
        outputs: vec![OutputKind::EnergyTrace, OutputKind::ObservableTrace],
        notes: vec![],
    }
}

fn buckle_scenario(name: &str, b1: f64, k0_values: Vec<f64>) -> Scenario {
    Scenario {
        name: name.into(),
        config: ConfigKind::C,
        cf_free_end: FreeEndKind::PhysicalNonlinear,
        params: BeamParams {
            u: 100.0,
            b1,
            b2: 1.0,
            ..BeamParams::unit()
        },
        initial_data: vec![InitialData::Polynomial],
        sweep: Some(Sweep {
            axis: SweepAxis::K0,
            values: k0_values,
        }),
        ucrit_search: None,
        horizon: Some(40.0),
        sample_dt: Some(0.01),
        resolution: Some(128),
        rtol: Some(1e-5),
        atol: Some(1e-8),
        outputs: vec![
            OutputKind::EnergyTrace,
            OutputKind::ObservableTrace,
            OutputKind::Snapshots { times: vec![40.0] },
        ],
        notes: vec![],
    }
}
