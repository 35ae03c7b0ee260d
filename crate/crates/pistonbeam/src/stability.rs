//! Perturbed-frequency eigenproblem, stability classification, and critical
//! flow speed searches.
//!
//! The harmonic ansatz reduces the linear beam-in-flow system to
//! `det(-w~^2 I - i k w~ I + K) = 0` with `K_mm = D kappa_m^4` and
//! `K_mn = beta U (dx s_n, s_m)` off the diagonal. Substituting
//! `lambda = -i w~` turns this into the real quadratic eigenvalue problem
//! `det(lambda^2 I + k lambda I + K) = 0`, solved through its 2N x 2N
//! companion form `[[0, I], [-K, -k I]]`. Growth means `Re lambda > 0`
//! (equivalently `Im w~ > 0`).

use crate::model::{BeamParams, BoundaryConfig};
use crate::modes::{
    build_mode_basis, overlap_matrix, ModeBasis, ModesError, OverlapMatrix,
    DEFAULT_QUADRATURE_POINTS,
};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

/// Default modal truncation for stability work.
pub const DEFAULT_TRUNCATION: usize = 6;

#[derive(Debug, Error)]
pub enum StabilityError {
    #[error("basis/overlap dimensions disagree: {basis} modes vs {overlap} overlap rows")]
    DimensionMismatch { basis: usize, overlap: usize },
    #[error("basis was built for L = {basis_l}, D = {basis_d}; params carry L = {l}, D = {d}")]
    BasisParamsMismatch {
        basis_l: f64,
        basis_d: f64,
        l: f64,
        d: f64,
    },
    #[error("eigenvalue solve failed to converge (worst residual {residual:.3e})")]
    EigenSolveFailure { residual: f64 },
    #[error("classification at U = {u} is not stable, cannot bracket onset")]
    UnstableAtLowerBound { u: f64 },
    #[error("no instability found in U range ({lo}, {hi})")]
    NoInstabilityInRange { lo: f64, hi: f64 },
    #[error(transparent)]
    Modes(#[from] ModesError),
}

/// Quadratic eigenvalue problem `lambda^2 I + k lambda I + K`.
#[derive(Debug, Clone)]
pub struct QepProblem {
    pub n: usize,
    /// Total damping k = k0 + beta.
    pub damping: f64,
    /// Stiffness-plus-flow matrix K.
    pub kmat: DMatrix<f64>,
    /// Fundamental in-vacuo frequency, used for tolerance scaling.
    pub omega1: f64,
}

/// All 2N exponential rates of the flutter eigenproblem.
#[derive(Debug, Clone, Serialize)]
pub struct ModalSpectrum {
    /// Roots lambda of det(lambda^2 I + k lambda I + K), sorted by
    /// decreasing real part (ties by imaginary part).
    pub lambdas: Vec<Complex64>,
    /// max Re lambda.
    pub max_growth: f64,
    /// |Im lambda| of the fastest-growing root.
    pub dominant_frequency: f64,
}

impl ModalSpectrum {
    /// The same roots in the `w~ = i lambda` convention
    /// (`Im w~ = Re lambda`).
    pub fn omegas(&self) -> Vec<Complex64> {
        self.lambdas.iter().map(|l| Complex64::i() * l).collect()
    }
}

/// Stability verdict at a tolerance on the growth rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum StabilityVerdict {
    Stable,
    Unstable { growth: f64, frequency: f64 },
}

/// Result of a critical-flow-speed search.
#[derive(Debug, Clone)]
pub struct UcritResult {
    pub u_crit: f64,
    pub bracket: (f64, f64),
    pub spectrum_at_crit: ModalSpectrum,
    /// Dominant oscillation frequency at onset.
    pub omega_crit: f64,
}

/// Build the QEP from a basis and its overlap matrix.
///
/// `K[m][n] = D kappa_m^4` on the diagonal and `beta U S[n][m]` off it
/// (S is the `(dx s_m, s_n)` overlap, so rows of K follow the test index).
pub fn assemble_qep(
    basis: &ModeBasis,
    overlaps: &OverlapMatrix,
    params: &BeamParams,
) -> Result<QepProblem, StabilityError> {
    let n = basis.len();
    if overlaps.s.nrows() != n || overlaps.s.ncols() != n {
        return Err(StabilityError::DimensionMismatch {
            basis: n,
            overlap: overlaps.s.nrows(),
        });
    }
    let same = |a: f64, b: f64| (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()));
    if !same(basis.l, params.l) || !same(basis.d, params.d) {
        return Err(StabilityError::BasisParamsMismatch {
            basis_l: basis.l,
            basis_d: basis.d,
            l: params.l,
            d: params.d,
        });
    }
    let bu = params.beta * params.u;
    let mut kmat = DMatrix::zeros(n, n);
    for m in 0..n {
        for j in 0..n {
            kmat[(m, j)] = if m == j {
                params.d * basis.entries[m].kappa.powi(4)
            } else {
                bu * overlaps.s[(j, m)]
            };
        }
    }
    Ok(QepProblem {
        n,
        damping: params.k(),
        kmat,
        omega1: basis.entries[0].omega,
    })
}

/// Instability tolerance on Re lambda: 1e-6 of the fundamental frequency.
pub fn default_instability_tol(problem: &QepProblem) -> f64 {
    1e-6 * problem.omega1
}

/// Solve the QEP through the companion linearization; every eigenpair is
/// verified (and, if needed, polished) to residual
/// `||(lambda^2 + k lambda) v + K v|| <= 1e-8 ||K|| ||v||`.
pub fn solve_qep(problem: &QepProblem) -> Result<ModalSpectrum, StabilityError> {
    let n = problem.n;
    let k = problem.damping;
    let mut comp = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        comp[(i, n + i)] = 1.0;
        comp[(n + i, n + i)] = -k;
        for j in 0..n {
            comp[(n + i, j)] = -problem.kmat[(i, j)];
        }
    }
    let schur = nalgebra::linalg::Schur::try_new(comp, 1e-14, 10_000)
        .ok_or(StabilityError::EigenSolveFailure { residual: f64::NAN })?;
    let raw = schur.complex_eigenvalues();

    let k_norm = problem.kmat.norm().max(f64::MIN_POSITIVE);
    let tol = 1e-8 * k_norm;
    let mut lambdas = Vec::with_capacity(2 * n);
    let mut worst: f64 = 0.0;
    for &lam0 in raw.iter() {
        let mut lam = lam0;
        let mut res = qep_residual(problem, lam);
        let mut polish = 0;
        while res > tol && polish < 8 {
            lam = newton_polish(problem, lam);
            res = qep_residual(problem, lam);
            polish += 1;
        }
        worst = worst.max(res);
        if res > tol {
            return Err(StabilityError::EigenSolveFailure { residual: res / k_norm });
        }
        lambdas.push(lam);
    }
    let _ = worst;
    lambdas.sort_by(|a, b| {
        b.re.partial_cmp(&a.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    let top = lambdas[0];
    Ok(ModalSpectrum {
        max_growth: top.re,
        dominant_frequency: top.im.abs(),
        lambdas,
    })
}

/// Q(lambda) = lambda^2 I + k lambda I + K as a complex matrix.
fn qep_matrix(problem: &QepProblem, lam: Complex64) -> DMatrix<Complex64> {
    let n = problem.n;
    let shift = lam * lam + problem.damping * lam;
    let mut q = problem.kmat.map(|x| Complex64::new(x, 0.0));
    for i in 0..n {
        q[(i, i)] += shift;
    }
    q
}

/// Residual `||Q(lambda) v|| / ||v||` with `v` from one inverse iteration.
fn qep_residual(problem: &QepProblem, lam: Complex64) -> f64 {
    match null_vector(problem, lam) {
        Some(v) => (qep_matrix(problem, lam) * &v).norm(),
        None => f64::INFINITY,
    }
}

/// Approximate null vector of Q(lambda) by inverse iteration.
fn null_vector(problem: &QepProblem, lam: Complex64) -> Option<DVector<Complex64>> {
    let q = qep_matrix(problem, lam);
    let lu = q.lu();
    let b = DVector::from_element(problem.n, Complex64::new(1.0, 0.0));
    let mut v = lu.solve(&b)?;
    let norm = v.norm();
    if !norm.is_finite() || norm == 0.0 {
        // lambda is exactly an eigenvalue of the factored system; fall back
        // to the unit start vector
        v = b;
    } else {
        v /= Complex64::new(norm, 0.0);
    }
    Some(v)
}

/// One Newton correction `lambda -= w* Q v / (w* Q' v)` using approximate
/// left/right null vectors.
fn newton_polish(problem: &QepProblem, lam: Complex64) -> Complex64 {
    let Some(v) = null_vector(problem, lam) else {
        return lam;
    };
    let qt = QepProblem {
        n: problem.n,
        damping: problem.damping,
        kmat: problem.kmat.transpose(),
        omega1: problem.omega1,
    };
    let Some(w) = null_vector(&qt, lam) else {
        return lam;
    };
    let w = w.map(|x| x.conj());
    let qv = qep_matrix(problem, lam) * &v;
    let num: Complex64 = w.dotc(&qv);
    let dv = &v * (2.0 * lam + problem.damping);
    let den: Complex64 = w.dotc(&dv);
    if den.norm() < 1e-300 {
        return lam;
    }
    lam - num / den
}

/// Unstable iff `max Re lambda > tol`.
pub fn classify(spectrum: &ModalSpectrum, tol: f64) -> StabilityVerdict {
    if spectrum.max_growth > tol {
        StabilityVerdict::Unstable {
            growth: spectrum.max_growth,
            frequency: spectrum.dominant_frequency,
        }
    } else {
        StabilityVerdict::Stable
    }
}

/// Spectrum of the configuration at the given parameters.
pub fn spectrum_at(
    config: &BoundaryConfig,
    params: &BeamParams,
    n: usize,
) -> Result<ModalSpectrum, StabilityError> {
    let basis = build_mode_basis(config, params, n)?;
    let overlaps = overlap_matrix(&basis, DEFAULT_QUADRATURE_POINTS);
    solve_qep(&assemble_qep(&basis, &overlaps, params)?)
}

/// Find the critical flow speed by bisection on `g(U) = max Re lambda(U)`.
///
/// Requires the configuration stable at `u_range.0`. If `g` is still
/// negative at `u_range.1`, a forward scan with step `(hi - lo)/64` locates
/// the first sign change (onset) before bisecting to width `tol`.
pub fn find_ucrit(
    config: &BoundaryConfig,
    params_base: &BeamParams,
    u_range: (f64, f64),
    tol: f64,
    n: usize,
) -> Result<UcritResult, StabilityError> {
    let basis = build_mode_basis(config, params_base, n)?;
    let overlaps = overlap_matrix(&basis, DEFAULT_QUADRATURE_POINTS);
    let qep_at = |u: f64| -> Result<QepProblem, StabilityError> {
        assemble_qep(&basis, &overlaps, &params_base.with_u(u))
    };
    let thr = default_instability_tol(&qep_at(u_range.0)?);
    let growth = |u: f64| -> Result<f64, StabilityError> {
        Ok(solve_qep(&qep_at(u)?)?.max_growth - thr)
    };

    let (mut lo, mut hi) = u_range;
    if growth(lo)? > 0.0 {
        return Err(StabilityError::UnstableAtLowerBound { u: lo });
    }
    if growth(hi)? < 0.0 {
        let step = (hi - lo) / 64.0;
        let mut u = lo;
        let mut found = None;
        while u + step <= hi * (1.0 + 1e-12) {
            if growth(u + step)? > 0.0 {
                found = Some((u, u + step));
                break;
            }
            u += step;
        }
        match found {
            Some((a, b)) => {
                lo = a;
                hi = b;
            }
            None => {
                return Err(StabilityError::NoInstabilityInRange {
                    lo: u_range.0,
                    hi: u_range.1,
                })
            }
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if growth(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let u_crit = 0.5 * (lo + hi);
    let spectrum_at_crit = solve_qep(&qep_at(u_crit)?)?;
    Ok(UcritResult {
        u_crit,
        bracket: (lo, hi),
        omega_crit: spectrum_at_crit.dominant_frequency,
        spectrum_at_crit,
    })
}

/// Swept parameter for [`sweep_ucrit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UcritAxis {
    L,
    Beta,
    K0,
}

impl UcritAxis {
    pub fn apply(&self, base: &BeamParams, value: f64) -> BeamParams {
        let mut p = *base;
        match self {
            UcritAxis::L => p.l = value,
            UcritAxis::Beta => p.beta = value,
            UcritAxis::K0 => p.k0 = value,
        }
        p
    }

    pub fn label(&self) -> &'static str {
        match self {
            UcritAxis::L => "L",
            UcritAxis::Beta => "beta",
            UcritAxis::K0 => "k0",
        }
    }
}

/// One sweep point; errors are collected, never aborting the sweep.
#[derive(Debug)]
pub struct UcritPoint {
    pub value: f64,
    pub outcome: Result<UcritResult, StabilityError>,
}

/// Critical speed along one swept axis. Points run concurrently under the
/// `parallel` feature; results are keyed by axis value, not arrival order.
pub fn sweep_ucrit(
    config: &BoundaryConfig,
    params_base: &BeamParams,
    axis: UcritAxis,
    values: &[f64],
    u_range: (f64, f64),
    tol: f64,
    n: usize,
) -> Vec<UcritPoint> {
    let run = |&value: &f64| -> UcritPoint {
        let params = axis.apply(params_base, value);
        UcritPoint {
            value,
            outcome: find_ucrit(config, &params, u_range, tol, n),
        }
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        values.par_iter().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        values.iter().map(run).collect()
    }
}
