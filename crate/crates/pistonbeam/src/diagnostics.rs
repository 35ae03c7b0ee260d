//! Energy functionals and regime descriptors: exponential rates, limit
//! cycle amplitude/period, steady (buckled) profiles.

use crate::fdm::{energy_parts, BeamState, EnergyParts, Grid, Trajectory};
use crate::model::{BeamParams, BoundaryConfig};
use serde::Serialize;
use thiserror::Error;

/// Peaks used for limit-cycle statistics.
pub const LCO_PEAKS: usize = 10;
/// Relative spread below which a limit cycle counts as converged.
pub const LCO_SPREAD_THRESHOLD: f64 = 0.02;
/// Relative profile drift allowed in a steady state.
pub const STEADY_PROFILE_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Error)]
pub enum DiagnosticsError {
    #[error("window holds {got} samples, need at least {need}")]
    InsufficientSamples { got: usize, need: usize },
    #[error("nonpositive energy in fit window at t = {t}")]
    NonpositiveEnergy { t: f64 },
    #[error("found {got} peaks after the transient cut, need at least 4")]
    InsufficientPeaks { got: usize },
}

/// Energy functionals at one instant.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EnergySample {
    pub t: f64,
    /// Linear energy (D ||w_xx||^2 + ||w_t||^2) / 2.
    pub e: f64,
    /// Nonlinear potential (b2 ||w_x||^4 - 2 b1 ||w_x||^2) / 4.
    pub pi: f64,
    /// E + Pi.
    pub script_e: f64,
    /// E + (b2/4) ||w_x||^4.
    pub ehat: f64,
}

impl From<(f64, EnergyParts)> for EnergySample {
    fn from((t, p): (f64, EnergyParts)) -> Self {
        Self {
            t,
            e: p.e,
            pi: p.pi,
            script_e: p.script_e,
            ehat: p.ehat,
        }
    }
}

/// Energies of one state, with `||w_xx||` closed by the configuration's
/// ghost relations.
pub fn energies(
    state: &BeamState,
    grid: &Grid,
    params: &BeamParams,
    config: &BoundaryConfig,
) -> EnergySample {
    (state.t, energy_parts(&state.w, &state.v, grid, params, config)).into()
}

/// Energy trace of a recorded trajectory.
pub fn energy_trace(traj: &Trajectory) -> Vec<EnergySample> {
    traj.samples
        .iter()
        .map(|s| (s.t, s.energy).into())
        .collect()
}

/// Exponential amplitude rate sigma from a log-linear fit of E(t) over
/// `window`; the energy slope is divided by 2 so sigma compares directly
/// with `max Re lambda`.
pub fn fit_growth_rate(
    trace: &[(f64, f64)],
    window: (f64, f64),
) -> Result<f64, DiagnosticsError> {
    let pts: Vec<(f64, f64)> = trace
        .iter()
        .copied()
        .filter(|(t, _)| *t >= window.0 && *t <= window.1)
        .collect();
    if pts.len() < 16 {
        return Err(DiagnosticsError::InsufficientSamples {
            got: pts.len(),
            need: 16,
        });
    }
    for &(t, e) in &pts {
        if e <= 0.0 {
            return Err(DiagnosticsError::NonpositiveEnergy { t });
        }
    }
    let n = pts.len() as f64;
    let (mut st, mut sy, mut stt, mut sty) = (0.0, 0.0, 0.0, 0.0);
    for &(t, e) in &pts {
        let y = e.ln();
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    let slope = (n * sty - st * sy) / (n * stt - st * st);
    Ok(slope / 2.0)
}

/// Limit-cycle summary over the last [`LCO_PEAKS`] peaks.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LcoReport {
    pub converged: bool,
    /// Mean |peak| of the observable.
    pub amplitude: f64,
    /// Mean spacing of successive same-sign peaks.
    pub period: f64,
    /// max of the relative standard deviations of amplitude and period.
    pub relative_spread: f64,
}

/// Detect a limit cycle in an observable series, ignoring the first
/// `transient_cut` fraction of the time span. Peaks are maxima located by
/// slope sign change with three-point quadratic refinement.
pub fn detect_lco(
    series: &[(f64, f64)],
    transient_cut: f64,
) -> Result<LcoReport, DiagnosticsError> {
    if series.len() < 3 {
        return Err(DiagnosticsError::InsufficientPeaks { got: 0 });
    }
    let t0 = series[0].0;
    let t1 = series[series.len() - 1].0;
    let cut = t0 + transient_cut * (t1 - t0);
    let s: Vec<(f64, f64)> = series.iter().copied().filter(|(t, _)| *t >= cut).collect();
    let mut peaks: Vec<(f64, f64)> = Vec::new();
    for i in 1..s.len().saturating_sub(1) {
        let (tm, ym) = s[i - 1];
        let (ti, yi) = s[i];
        let (tp, yp) = s[i + 1];
        if yi >= ym && yi > yp && (yi > ym || yi > yp) {
            let denom = ym - 2.0 * yi + yp;
            if denom.abs() > 0.0 {
                let delta = 0.5 * (ym - yp) / denom;
                let dt = 0.5 * (tp - tm);
                peaks.push((ti + delta * dt, yi - 0.25 * (ym - yp) * delta));
            } else {
                peaks.push((ti, yi));
            }
        }
    }
    if peaks.len() < 4 {
        return Err(DiagnosticsError::InsufficientPeaks { got: peaks.len() });
    }
    let used = peaks.len().min(LCO_PEAKS);
    let tail = &peaks[peaks.len() - used..];
    let amps: Vec<f64> = tail.iter().map(|(_, y)| y.abs()).collect();
    let gaps: Vec<f64> = tail.windows(2).map(|p| p[1].0 - p[0].0).collect();
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let std = |v: &[f64], m: f64| {
        (v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / v.len() as f64).sqrt()
    };
    let amp_mean = mean(&amps);
    let per_mean = mean(&gaps);
    let spread = (std(&amps, amp_mean) / amp_mean.abs().max(1e-300))
        .max(std(&gaps, per_mean) / per_mean.abs().max(1e-300));
    Ok(LcoReport {
        converged: used >= LCO_PEAKS && spread < LCO_SPREAD_THRESHOLD,
        amplitude: amp_mean,
        period: per_mean,
        relative_spread: spread,
    })
}

/// Steady-state (buckled or at-rest) summary.
#[derive(Debug, Clone, Serialize)]
pub struct SteadyStateReport {
    pub is_steady: bool,
    /// Nodal displacement at final time.
    pub profile: Vec<f64>,
    /// `||v||_inf` at final time.
    pub residual: f64,
}

/// Check the last 10% of a trajectory for convergence to a steady profile.
/// `tol` bounds the final velocity; profile drift over the window must stay
/// below [`STEADY_PROFILE_THRESHOLD`] (relative). Uses recorded states when
/// available, otherwise only the final state.
pub fn detect_steady(traj: &Trajectory, tol: f64) -> SteadyStateReport {
    let final_state = &traj.final_state;
    let residual = final_state.v.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    let w_final = &final_state.w;
    let scale = w_final
        .iter()
        .fold(0.0f64, |a, &x| a.max(x.abs()))
        .max(1e-12);
    let mut drift = 0.0f64;
    if let Some(states) = &traj.states {
        let t_end = final_state.t;
        let t_cut = t_end - 0.1 * (t_end - traj.samples.first().map_or(0.0, |s| s.t));
        for s in states.iter().filter(|s| s.t >= t_cut) {
            let d = s
                .w
                .iter()
                .zip(w_final)
                .fold(0.0f64, |a, (&x, &y)| a.max((x - y).abs()));
            drift = drift.max(d / scale);
        }
    }
    SteadyStateReport {
        is_steady: residual < tol && drift < STEADY_PROFILE_THRESHOLD,
        profile: w_final.clone(),
        residual,
    }
}

/// Relative difference of two profiles up to overall sign,
/// `min(||a - b||, ||a + b||) / max ||a||`.
pub fn profile_difference(a: &[f64], b: &[f64]) -> f64 {
    let scale = a.iter().fold(0.0f64, |m, &x| m.max(x.abs())).max(1e-300);
    let (mut dm, mut dp) = (0.0f64, 0.0f64);
    for (&x, &y) in a.iter().zip(b) {
        dm = dm.max((x - y).abs());
        dp = dp.max((x + y).abs());
    }
    dm.min(dp) / scale
}

/// Worst relative defect of the linear energy identity
/// `E(t) + k int ||w_t||^2 + beta U int (w_x, w_t) - E(0) = 0`
/// along a recorded trajectory (valid for b1 = b2 = 0 runs).
pub fn linear_energy_identity_defect(traj: &Trajectory, params: &BeamParams) -> f64 {
    let e0 = traj.samples[0].energy.e;
    let scale = traj
        .samples
        .iter()
        .map(|s| s.energy.e)
        .fold(e0, f64::max)
        .max(1e-300);
    let k = params.k();
    let bu = params.beta * params.u;
    traj.samples
        .iter()
        .map(|s| (s.energy.e + k * s.int_wt_sq + bu * s.int_wx_wt - e0).abs())
        .fold(0.0, f64::max)
        / scale
}
