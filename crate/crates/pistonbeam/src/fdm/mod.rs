//! Method-of-lines finite differences for the beam system
//!
//! ```text
//! w_tt = -D w_xxxx - k0 w_t - [b1 - b2 ||w_x||^2] w_xx - beta (w_t + U w_x)
//! ```
//!
//! Second-order stencils on a uniform grid, with ghost points closing each
//! boundary configuration. The cantilever free end couples the ghost values
//! to the global state through the nonlinear, nonlocal coefficient
//! `b1 - b2 ||w_x||^2`; that coefficient is lagged per time step by the
//! stiff integrator in [`integrator`].

mod banded;
mod integrator;

pub use integrator::{integrate, integrate_opts, IntegrateOptions, Termination};

use crate::model::{BeamParams, BoundaryConfig, ConfigKind, FreeEndKind, InitialData};
use crate::modes::ModeBasis;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FdmError {
    #[error("grid needs at least 32 nodes, got {m}")]
    InvalidResolution { m: usize },
    #[error("mode initial data requires a mode basis")]
    MissingBasis,
    #[error("mode initial data index {n} unsupported (1..=5, basis holds {len})")]
    InvalidModeIndex { n: usize, len: usize },
    #[error("custom initial data table invalid: {0}")]
    InvalidCustomTable(&'static str),
}

/// Uniform spatial grid on [0, L] with `m` nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub m: usize,
    pub h: f64,
    pub l: f64,
}

/// Uniform grid with nodes `x_i = i L / (m-1)`.
pub fn build_grid(l: f64, m: usize) -> Result<Grid, FdmError> {
    if m < 32 {
        return Err(FdmError::InvalidResolution { m });
    }
    Ok(Grid {
        m,
        h: l / (m - 1) as f64,
        l,
    })
}

impl Grid {
    pub fn node(&self, i: usize) -> f64 {
        self.l * i as f64 / (self.m - 1) as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.m).map(|i| self.node(i))
    }
}

/// Nodal displacement/velocity pair at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamState {
    pub t: f64,
    pub w: Vec<f64>,
    pub v: Vec<f64>,
}

impl BeamState {
    pub fn zero(grid: &Grid) -> Self {
        Self {
            t: 0.0,
            w: vec![0.0; grid.m],
            v: vec![0.0; grid.m],
        }
    }

    pub fn max_abs_w(&self) -> f64 {
        self.w.iter().fold(0.0f64, |a, &x| a.max(x.abs()))
    }
}

/// Sample initial data onto the grid. `basis` is required for mode shapes.
/// Boundary values are pinned exactly after sampling.
pub fn sample_initial(
    data: &InitialData,
    grid: &Grid,
    config: &BoundaryConfig,
    basis: Option<&ModeBasis>,
) -> Result<BeamState, FdmError> {
    let m = grid.m;
    let mut state = BeamState::zero(grid);
    let xh = |i: usize| grid.node(i) / grid.l;
    match data {
        InitialData::Zero => {}
        InitialData::Mode { n } => {
            let basis = basis.ok_or(FdmError::MissingBasis)?;
            if *n == 0 || *n > 5 || *n > basis.len() {
                return Err(FdmError::InvalidModeIndex {
                    n: *n,
                    len: basis.len(),
                });
            }
            for i in 0..m {
                state.w[i] = basis.eval(*n, grid.node(i), 0).unwrap();
            }
        }
        InitialData::Polynomial => {
            for i in 0..m {
                let x = xh(i);
                state.w[i] = match config.kind {
                    ConfigKind::CF => {
                        ((((-4.0 * x) + 15.0) * x - 20.0) * x + 10.0) * x * x
                    }
                    _ => x.powi(3) * (1.0 - x).powi(3),
                };
            }
        }
        InitialData::Elementary { scale } => {
            for i in 0..m {
                let x = xh(i);
                state.v[i] = match config.kind {
                    ConfigKind::CF => scale * x,
                    _ => scale * x * (1.0 - x),
                };
            }
        }
        InitialData::Sine { eps } => {
            for i in 0..m {
                let x = xh(i);
                state.w[i] = eps * (2.0 * std::f64::consts::PI * x).sin();
                state.v[i] = x * (1.0 - x);
            }
        }
        InitialData::Custom { x, w0, w1 } => {
            if x.len() < 2 || x.len() != w0.len() || x.len() != w1.len() {
                return Err(FdmError::InvalidCustomTable("length mismatch"));
            }
            if x.windows(2).any(|p| p[1] <= p[0]) {
                return Err(FdmError::InvalidCustomTable("x not strictly increasing"));
            }
            for i in 0..m {
                let xi = xh(i);
                state.w[i] = interp(x, w0, xi);
                state.v[i] = interp(x, w1, xi);
            }
        }
    }
    for &i in dirichlet_nodes(config, m).iter() {
        state.w[i] = 0.0;
        state.v[i] = 0.0;
    }
    Ok(state)
}

fn interp(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[xs.len() - 1] {
        return ys[ys.len() - 1];
    }
    let j = xs.partition_point(|&p| p < x).max(1);
    let (x0, x1) = (xs[j - 1], xs[j]);
    let s = (x - x0) / (x1 - x0);
    ys[j - 1] * (1.0 - s) + ys[j] * s
}

/// Nodes with pinned w = 0 for the configuration.
pub(crate) fn dirichlet_nodes(config: &BoundaryConfig, m: usize) -> Vec<usize> {
    match config.kind {
        ConfigKind::C | ConfigKind::H => vec![0, m - 1],
        ConfigKind::CF => vec![0],
    }
}

/// Unknown (non-Dirichlet) node index range.
pub(crate) fn unknown_range(config: &BoundaryConfig, m: usize) -> std::ops::Range<usize> {
    match config.kind {
        ConfigKind::C | ConfigKind::H => 1..m - 1,
        ConfigKind::CF => 1..m,
    }
}

/// `int_0^L |w_x|^2 dx` by composite trapezoid of the squared
/// central-difference slope (one-sided second order at the ends).
pub fn norm_wx_sq(state: &BeamState, grid: &Grid) -> f64 {
    norm_wx_sq_of(&state.w, grid)
}

pub(crate) fn norm_wx_sq_of(w: &[f64], grid: &Grid) -> f64 {
    let m = grid.m;
    let h = grid.h;
    let wx = |i: usize| -> f64 {
        if i == 0 {
            (-3.0 * w[0] + 4.0 * w[1] - w[2]) / (2.0 * h)
        } else if i == m - 1 {
            (3.0 * w[m - 1] - 4.0 * w[m - 2] + w[m - 3]) / (2.0 * h)
        } else {
            (w[i + 1] - w[i - 1]) / (2.0 * h)
        }
    };
    let mut acc = 0.5 * (wx(0).powi(2) + wx(m - 1).powi(2));
    for i in 1..m - 1 {
        acc += wx(i).powi(2);
    }
    acc * h
}

/// Ghost-extended copy of `w`: two ghosts per side, laid out as
/// `[w_{-2}, w_{-1}, w_0, ..., w_{M-1}, w_M, w_{M+1}]`.
///
/// Closures (all O(h^2)):
/// - C: reflection through the clamped end (`w_x = 0`), both sides;
/// - H: anti-reflection (`w_xx = 0`), both sides;
/// - CF: clamped reflection at x = 0; at x = L the two ghosts solve
///   `w_xx(L) = 0` and `w_xxx(L) + coeff * w_x(L) = 0` (5-point third
///   derivative, central first derivative). The linear variant forces
///   `coeff = 0`.
pub fn apply_ghosts(config: &BoundaryConfig, w: &[f64], coeff: f64, h: f64) -> Vec<f64> {
    let m = w.len();
    let mut ext = vec![0.0; m + 4];
    ext[2..2 + m].copy_from_slice(w);
    match config.kind {
        ConfigKind::C => {
            ext[1] = w[1];
            ext[0] = w[2];
            ext[m + 2] = w[m - 2];
            ext[m + 3] = w[m - 3];
        }
        ConfigKind::H => {
            ext[1] = 2.0 * w[0] - w[1];
            ext[0] = 2.0 * w[0] - w[2];
            ext[m + 2] = 2.0 * w[m - 1] - w[m - 2];
            ext[m + 3] = 2.0 * w[m - 1] - w[m - 3];
        }
        ConfigKind::CF => {
            ext[1] = w[1];
            ext[0] = w[2];
            let c = match config.free_end() {
                FreeEndKind::PhysicalNonlinear => coeff,
                FreeEndKind::LinearNonPhysical => 0.0,
            };
            // w_M from the moment condition, then w_{M+1} from the shear
            // condition: a triangular 2x2 system.
            let w_m = 2.0 * w[m - 1] - w[m - 2];
            let w_mp1 =
                2.0 * w_m - 2.0 * w[m - 2] + w[m - 3] - c * h * h * (w_m - w[m - 2]);
            ext[m + 2] = w_m;
            ext[m + 3] = w_mp1;
        }
    }
    ext
}

/// Linear acceleration `-D w_xxxx - coeff w_xx - beta U w_x` with the
/// coefficient of the extensible term frozen at `coeff`. Writes unknown
/// rows of `out`; Dirichlet rows are set to zero.
pub(crate) fn linear_accel(
    config: &BoundaryConfig,
    grid: &Grid,
    params: &BeamParams,
    coeff: f64,
    w: &[f64],
    out: &mut [f64],
) {
    let m = grid.m;
    let h = grid.h;
    let ext = apply_ghosts(config, w, coeff, h);
    let h2 = h * h;
    let h4 = h2 * h2;
    let bu = params.beta * params.u;
    out[..m].fill(0.0);
    for i in unknown_range(config, m) {
        let e = i + 2; // index of w_i in ext
        let d4 = (ext[e - 2] - 4.0 * ext[e - 1] + 6.0 * ext[e] - 4.0 * ext[e + 1]
            + ext[e + 2])
            / h4;
        let d2 = (ext[e - 1] - 2.0 * ext[e] + ext[e + 1]) / h2;
        let d1 = (ext[e + 1] - ext[e - 1]) / (2.0 * h);
        out[i] = -params.d * d4 - coeff * d2 - bu * d1;
    }
}

/// Full right side `(dw, dv)` of the first-order system at `state`.
/// Dirichlet rows return zero.
pub fn rhs(
    state: &BeamState,
    grid: &Grid,
    params: &BeamParams,
    config: &BoundaryConfig,
) -> (Vec<f64>, Vec<f64>) {
    let m = grid.m;
    let coeff = params.b1 - params.b2 * norm_wx_sq(state, grid);
    let mut dv = vec![0.0; m];
    linear_accel(config, grid, params, coeff, &state.w, &mut dv);
    let k = params.k();
    let mut dw = vec![0.0; m];
    for i in unknown_range(config, m) {
        dv[i] -= k * state.v[i];
        dw[i] = state.v[i];
    }
    (dw, dv)
}

/// Energy functionals of one state: linear `E`, nonlinear potential `Pi`,
/// `scriptE = E + Pi`, and `Ehat = E + (b2/4) ||w_x||^4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Default)]
pub struct EnergyParts {
    pub e: f64,
    pub pi: f64,
    pub script_e: f64,
    pub ehat: f64,
}

pub(crate) fn energy_parts(
    w: &[f64],
    v: &[f64],
    grid: &Grid,
    params: &BeamParams,
    config: &BoundaryConfig,
) -> EnergyParts {
    let m = grid.m;
    let h = grid.h;
    let nx2 = norm_wx_sq_of(w, grid);
    let coeff = params.b1 - params.b2 * nx2;
    let ext = apply_ghosts(config, w, coeff, h);
    let mut wxx_sq = 0.0;
    for i in 0..m {
        let e = i + 2;
        let d2 = (ext[e - 1] - 2.0 * ext[e] + ext[e + 1]) / (h * h);
        let weight = if i == 0 || i == m - 1 { 0.5 } else { 1.0 };
        wxx_sq += weight * d2 * d2;
    }
    wxx_sq *= h;
    let mut v_sq = 0.5 * (v[0] * v[0] + v[m - 1] * v[m - 1]);
    for i in 1..m - 1 {
        v_sq += v[i] * v[i];
    }
    v_sq *= h;
    let e = 0.5 * (params.d * wxx_sq + v_sq);
    let pi = 0.25 * (params.b2 * nx2 * nx2 - 2.0 * params.b1 * nx2);
    EnergyParts {
        e,
        pi,
        script_e: e + pi,
        ehat: e + 0.25 * params.b2 * nx2 * nx2,
    }
}

/// Observable displacement: midpoint for panels, tip for the cantilever.
pub(crate) fn observable(config: &BoundaryConfig, grid: &Grid, w: &[f64]) -> f64 {
    match config.kind {
        ConfigKind::CF => w[grid.m - 1],
        _ => {
            let mid = 0.5 * (grid.m - 1) as f64;
            let i = mid.floor() as usize;
            if (grid.m - 1) % 2 == 0 {
                w[i]
            } else {
                0.5 * (w[i] + w[i + 1])
            }
        }
    }
}

/// One recorded instant of a trajectory.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TrajectorySample {
    pub t: f64,
    /// Midpoint displacement (C, H) or tip displacement (CF).
    pub observable: f64,
    pub energy: EnergyParts,
    /// Accumulated `int_0^t ||w_t||^2 dtau`.
    pub int_wt_sq: f64,
    /// Accumulated `int_0^t (w_x, w_t) dtau`.
    pub int_wx_wt: f64,
}

/// Recorded evolution of one finite-difference run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    /// Full states aligned with `samples`, when state recording was on.
    pub states: Option<Vec<BeamState>>,
    pub final_state: BeamState,
    pub termination: Termination,
    pub steps: usize,
}

impl Trajectory {
    pub fn diverged(&self) -> bool {
        !matches!(self.termination, Termination::Completed)
    }

    /// (t, observable) series.
    pub fn observable_series(&self) -> Vec<(f64, f64)> {
        self.samples.iter().map(|s| (s.t, s.observable)).collect()
    }

    /// (t, E) series.
    pub fn energy_series(&self) -> Vec<(f64, f64)> {
        self.samples.iter().map(|s| (s.t, s.energy.e)).collect()
    }

    /// (t, scriptE) series.
    pub fn script_e_series(&self) -> Vec<(f64, f64)> {
        self.samples.iter().map(|s| (s.t, s.energy.script_e)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BeamParams, BoundaryConfig, InitialData};
    use crate::modes::build_mode_basis;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn grid_examples() {
        let g = build_grid(1.0, 101).unwrap();
        assert_abs_diff_eq!(g.h, 0.01, epsilon = 1e-15);
        let g = build_grid(300.0, 301).unwrap();
        assert_abs_diff_eq!(g.h, 1.0, epsilon = 1e-15);
        assert_eq!(g.node(300), 300.0);
        assert!(matches!(
            build_grid(1.0, 2),
            Err(FdmError::InvalidResolution { m: 2 })
        ));
    }

    #[test]
    fn cf_polynomial_tip_is_one() {
        let g = build_grid(1.0, 65).unwrap();
        let cfg = BoundaryConfig::cantilever();
        let s = sample_initial(&InitialData::Polynomial, &g, &cfg, None).unwrap();
        assert_abs_diff_eq!(s.w[64], 1.0, epsilon = 1e-12);
        assert_eq!(s.w[0], 0.0);
        assert!(s.v.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn zero_and_elementary_initial_data() {
        let g = build_grid(1.0, 65).unwrap();
        let cfg = BoundaryConfig::cantilever();
        let z = sample_initial(&InitialData::Zero, &g, &cfg, None).unwrap();
        assert!(z.w.iter().chain(z.v.iter()).all(|&x| x == 0.0));
        let c = 13.0;
        let s = sample_initial(&InitialData::Elementary { scale: c }, &g, &cfg, None).unwrap();
        for i in 1..g.m {
            assert_abs_diff_eq!(s.v[i], c * g.node(i), epsilon = 1e-12);
        }
        // panel variant vanishes at both ends
        let h = BoundaryConfig::hinged();
        let s = sample_initial(&InitialData::Elementary { scale: 1.0 }, &g, &h, None).unwrap();
        assert_eq!(s.v[0], 0.0);
        assert_eq!(s.v[g.m - 1], 0.0);
        assert!(s.v[g.m / 2] > 0.2);
    }

    #[test]
    fn mode_initial_data_needs_basis() {
        let g = build_grid(1.0, 64).unwrap();
        let cfg = BoundaryConfig::hinged();
        assert!(matches!(
            sample_initial(&InitialData::Mode { n: 1 }, &g, &cfg, None),
            Err(FdmError::MissingBasis)
        ));
        let basis = build_mode_basis(&cfg, &BeamParams::unit(), 2).unwrap();
        assert!(matches!(
            sample_initial(&InitialData::Mode { n: 3 }, &g, &cfg, Some(&basis)),
            Err(FdmError::InvalidModeIndex { .. })
        ));
        let s = sample_initial(&InitialData::Mode { n: 1 }, &g, &cfg, Some(&basis)).unwrap();
        assert_eq!(s.w[0], 0.0);
        assert_eq!(s.w[g.m - 1], 0.0);
    }

    #[test]
    fn norm_wx_sq_examples() {
        let g = build_grid(1.0, 101).unwrap();
        let mut s = BeamState::zero(&g);
        assert_eq!(norm_wx_sq(&s, &g), 0.0);
        for i in 0..g.m {
            s.w[i] = g.node(i);
        }
        assert_abs_diff_eq!(norm_wx_sq(&s, &g), 1.0, epsilon = 1e-10);
        for i in 0..g.m {
            s.w[i] = (PI * g.node(i)).sin();
        }
        let exact = PI * PI / 2.0;
        assert!((norm_wx_sq(&s, &g) - exact).abs() < 4.0 * exact * g.h * g.h);
    }

    #[test]
    fn ghost_reflections() {
        let g = build_grid(1.0, 64).unwrap();
        let mut w = vec![0.0; 64];
        w[1] = 0.3;
        let h_ext = apply_ghosts(&BoundaryConfig::hinged(), &w, 0.0, g.h);
        assert_abs_diff_eq!(h_ext[1], -0.3, epsilon = 1e-15);
        let c_ext = apply_ghosts(&BoundaryConfig::clamped(), &w, 0.0, g.h);
        assert_abs_diff_eq!(c_ext[1], 0.3, epsilon = 1e-15);
    }

    #[test]
    fn cf_ghosts_reduce_to_linear_when_unstressed() {
        let g = build_grid(1.0, 64).unwrap();
        let w: Vec<f64> = (0..64).map(|i| (g.node(i)).powi(2)).collect();
        let phys = apply_ghosts(&BoundaryConfig::cantilever(), &w, 0.0, g.h);
        let lin = apply_ghosts(&BoundaryConfig::cantilever_linear_end(), &w, 123.0, g.h);
        assert_eq!(phys, lin);
    }

    #[test]
    fn cf_ghost_closure_satisfies_free_end_conditions() {
        let g = build_grid(1.0, 64).unwrap();
        let m = g.m;
        let h = g.h;
        // an arbitrary smooth clamped-left profile
        let w: Vec<f64> = (0..m)
            .map(|i| {
                let x = g.node(i);
                x * x * (1.1 - 0.3 * x + 0.2 * x * x)
            })
            .collect();
        let coeff = -7.5;
        let ext = apply_ghosts(&BoundaryConfig::cantilever(), &w, coeff, h);
        let e = m - 1 + 2;
        let wxx = (ext[e - 1] - 2.0 * ext[e] + ext[e + 1]) / (h * h);
        let wxxx =
            (ext[e + 2] - 2.0 * ext[e + 1] + 2.0 * ext[e - 1] - ext[e - 2]) / (2.0 * h * h * h);
        let wx = (ext[e + 1] - ext[e - 1]) / (2.0 * h);
        assert!(wxx.abs() < 1e-9);
        assert!((wxxx + coeff * wx).abs() < 1e-9 * (1.0 + wx.abs() * coeff.abs()));
    }

    #[test]
    fn rhs_zero_state_is_zero() {
        let g = build_grid(1.0, 64).unwrap();
        let cfg = BoundaryConfig::clamped();
        let s = BeamState::zero(&g);
        let (dw, dv) = rhs(&s, &g, &BeamParams::unit(), &cfg);
        assert!(dw.iter().chain(dv.iter()).all(|&x| x == 0.0));
    }

    #[test]
    fn rhs_hinged_mode_matches_eigenrelation() {
        // in vacuo, w = s1: dv ~ -D kappa1^4 w to O(h^2)
        let g = build_grid(1.0, 257).unwrap();
        let cfg = BoundaryConfig::hinged();
        let params = BeamParams {
            beta: 0.0,
            ..BeamParams::unit()
        };
        let basis = build_mode_basis(&cfg, &params, 1).unwrap();
        let s = sample_initial(&InitialData::Mode { n: 1 }, &g, &cfg, Some(&basis)).unwrap();
        let (_, dv) = rhs(&s, &g, &params, &cfg);
        let k4 = basis.entries[0].kappa.powi(4);
        for i in 1..g.m - 1 {
            let expect = -k4 * s.w[i];
            assert!(
                (dv[i] - expect).abs() < 20.0 * g.h * g.h * k4,
                "node {i}: {} vs {expect}",
                dv[i]
            );
        }
    }

    #[test]
    fn rhs_flow_term_parity() {
        // odd-symmetric clamped profile: the beta U w_x contribution is even
        let g = build_grid(1.0, 129).unwrap();
        let cfg = BoundaryConfig::clamped();
        let mut s = BeamState::zero(&g);
        for i in 0..g.m {
            let x = g.node(i);
            s.w[i] = x * x * (1.0 - x) * (1.0 - x) * (1.0 - 2.0 * x);
        }
        let p0 = BeamParams::unit();
        let p1 = BeamParams {
            u: 2.0,
            ..BeamParams::unit()
        };
        let (_, dv0) = rhs(&s, &g, &p0, &cfg);
        let (_, dv1) = rhs(&s, &g, &p1, &cfg);
        let flow: Vec<f64> = dv0.iter().zip(&dv1).map(|(a, b)| b - a).collect();
        for i in 1..g.m - 1 {
            let j = g.m - 1 - i;
            assert!(
                (flow[i] - flow[j]).abs() < 1e-10 * (1.0 + flow[i].abs()),
                "asymmetry at {i}"
            );
        }
    }

    #[test]
    fn energies_examples() {
        let g = build_grid(1.0, 101).unwrap();
        let cfg = BoundaryConfig::hinged();
        let p = BeamParams {
            b1: 0.5,
            b2: 2.0,
            ..BeamParams::unit()
        };
        let zero = BeamState::zero(&g);
        let e0 = energy_parts(&zero.w, &zero.v, &g, &p, &cfg);
        assert_eq!(e0, EnergyParts::default());

        // pure velocity: E = ||v||^2 / 2, Pi = 0
        let mut s = BeamState::zero(&g);
        for i in 1..g.m - 1 {
            s.v[i] = (PI * g.node(i)).sin();
        }
        let e = energy_parts(&s.w, &s.v, &g, &p, &cfg);
        assert!((e.e - 0.25).abs() < 1e-3);
        assert_eq!(e.pi, 0.0);
        assert_eq!(e.script_e, e.e);

        // b1 = 0 makes Ehat = scriptE
        let p2 = BeamParams {
            b1: 0.0,
            b2: 2.0,
            ..BeamParams::unit()
        };
        let mut s2 = BeamState::zero(&g);
        for i in 0..g.m {
            s2.w[i] = (PI * g.node(i)).sin();
        }
        let e2 = energy_parts(&s2.w, &s2.v, &g, &p2, &cfg);
        assert_abs_diff_eq!(e2.ehat, e2.script_e, epsilon = 1e-14);
        assert!(e2.ehat >= e2.e);
    }
}
