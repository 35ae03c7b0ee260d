//! Shared parameter, configuration, and initial-data vocabulary.
//!
//! Everything here is an immutable value object: validation never mutates,
//! and all types are `Send + Sync`.

use serde::{Deserialize, Serialize};

/// Beam boundary configuration: clamped panel, hinged panel, or cantilever.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConfigKind {
    /// Clamped-clamped panel: w = w_x = 0 at both ends.
    C,
    /// Hinged-hinged panel: w = w_xx = 0 at both ends.
    H,
    /// Clamped-free cantilever (flag): clamped at the leading edge.
    CF,
}

impl ConfigKind {
    pub fn label(&self) -> &'static str {
        match self {
            ConfigKind::C => "C",
            ConfigKind::H => "H",
            ConfigKind::CF => "CF",
        }
    }
}

/// Treatment of the cantilever free-end condition.
///
/// The extensible nonlinearity couples into the third-order free-end
/// condition, `w_xxx(L) + [b1 - b2 ||w_x||^2] w_x(L) = 0`. That closure
/// conserves the nonlinear energy. Forcing the coefficient to zero instead
/// (`w_xxx(L) = 0`, the textbook linear free end) is non-physical alongside
/// `b2 > 0` and admits energy growth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FreeEndKind {
    #[default]
    PhysicalNonlinear,
    LinearNonPhysical,
}

/// Boundary configuration plus the cantilever free-end variant.
///
/// `cf_free_end` is meaningful only for [`ConfigKind::CF`]; constructors
/// normalize it to [`FreeEndKind::PhysicalNonlinear`] otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "RawBoundaryConfig")]
pub struct BoundaryConfig {
    pub kind: ConfigKind,
    cf_free_end: FreeEndKind,
}

#[derive(Deserialize)]
struct RawBoundaryConfig {
    kind: ConfigKind,
    #[serde(default)]
    cf_free_end: FreeEndKind,
}

impl From<RawBoundaryConfig> for BoundaryConfig {
    fn from(raw: RawBoundaryConfig) -> Self {
        BoundaryConfig::new(raw.kind, raw.cf_free_end)
    }
}

impl BoundaryConfig {
    pub fn new(kind: ConfigKind, cf_free_end: FreeEndKind) -> Self {
        let cf_free_end = if kind == ConfigKind::CF {
            cf_free_end
        } else {
            FreeEndKind::PhysicalNonlinear
        };
        Self { kind, cf_free_end }
    }

    pub fn clamped() -> Self {
        Self::new(ConfigKind::C, FreeEndKind::PhysicalNonlinear)
    }

    pub fn hinged() -> Self {
        Self::new(ConfigKind::H, FreeEndKind::PhysicalNonlinear)
    }

    pub fn cantilever() -> Self {
        Self::new(ConfigKind::CF, FreeEndKind::PhysicalNonlinear)
    }

    pub fn cantilever_linear_end() -> Self {
        Self::new(ConfigKind::CF, FreeEndKind::LinearNonPhysical)
    }

    /// Effective free-end treatment (always `PhysicalNonlinear` off-CF).
    pub fn free_end(&self) -> FreeEndKind {
        self.cf_free_end
    }
}

/// Scalar model coefficients.
///
/// Rotational inertia and square-root damping are fixed at zero and the
/// static pressure is identically zero; those are hard invariants of this
/// artifact, enforced by [`validate_params`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamParams {
    /// Elastic stiffness D > 0.
    pub d: f64,
    /// Beam length L > 0.
    pub l: f64,
    /// Flow density coefficient beta >= 0.
    pub beta: f64,
    /// Unperturbed axial flow speed U >= 0.
    pub u: f64,
    /// Imposed (frictional) damping; may be negative down to -beta.
    pub k0: f64,
    /// In-axis pre-stress: b1 > 0 compression, b1 < 0 stretching.
    pub b1: f64,
    /// Nonlinear restoring coefficient b2 >= 0.
    pub b2: f64,
    /// Rotational inertia; fixed 0.
    #[serde(default)]
    pub alpha: f64,
    /// Square-root damping; fixed 0.
    #[serde(default)]
    pub k1: f64,
}

impl BeamParams {
    /// Unit-coefficient baseline (D = L = beta = 1, everything else zero).
    pub fn unit() -> Self {
        Self {
            d: 1.0,
            l: 1.0,
            beta: 1.0,
            u: 0.0,
            k0: 0.0,
            b1: 0.0,
            b2: 0.0,
            alpha: 0.0,
            k1: 0.0,
        }
    }

    /// Total damping k = k0 + beta.
    pub fn k(&self) -> f64 {
        self.k0 + self.beta
    }

    pub fn with_u(mut self, u: f64) -> Self {
        self.u = u;
        self
    }

    pub fn validate(&self, config: &BoundaryConfig) -> ValidationReport {
        validate_params(self, config)
    }
}

/// One violated invariant: the offending field and what was required of it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub field: &'static str,
    pub requirement: &'static str,
}

/// Outcome of [`validate_params`]; carries failures instead of erroring.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check every `BeamParams` invariant. Pure: identical inputs give
/// identical reports.
pub fn validate_params(params: &BeamParams, _config: &BoundaryConfig) -> ValidationReport {
    let mut v = Vec::new();
    let mut req = |cond: bool, field: &'static str, requirement: &'static str| {
        if !cond {
            v.push(Violation { field, requirement });
        }
    };

    req(params.d.is_finite() && params.d > 0.0, "d", "D > 0");
    req(params.l.is_finite() && params.l > 0.0, "l", "L > 0");
    req(params.beta.is_finite() && params.beta >= 0.0, "beta", "beta >= 0");
    req(params.u.is_finite() && params.u >= 0.0, "u", "U >= 0");
    req(params.b2.is_finite() && params.b2 >= 0.0, "b2", "b2 >= 0");
    req(params.b1.is_finite(), "b1", "b1 finite");
    req(
        params.k0.is_finite() && params.k0 + params.beta >= 0.0,
        "k0",
        "k = k0 + beta >= 0",
    );
    req(params.alpha == 0.0, "alpha", "alpha = 0");
    req(params.k1 == 0.0, "k1", "k1 = 0");

    ValidationReport { violations: v }
}

/// Initial displacement/velocity profiles, parameterized over `x_hat = x/L`.
///
/// Sampling onto a simulation grid happens at build time; the data itself
/// carries no grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialData {
    /// n-th in-vacuo mode shape as displacement, zero velocity (n = 1..5).
    Mode { n: usize },
    /// Minimal-degree polynomial displacement satisfying the boundary
    /// conditions, zero velocity. CF: -4x^5 + 15x^4 - 20x^3 + 10x^2;
    /// C and H: x^3 (1-x)^3.
    Polynomial,
    /// Zero displacement, elementary velocity profile:
    /// `scale * x_hat` for CF, `scale * x_hat (1 - x_hat)` for C and H.
    Elementary {
        #[serde(default = "default_scale")]
        scale: f64,
    },
    /// `w0 = eps sin(2 pi x_hat)`, `w1 = x_hat (1 - x_hat)`.
    Sine { eps: f64 },
    /// Rest.
    Zero,
    /// Tabulated profiles on `x_hat` in [0, 1], linearly interpolated.
    Custom {
        x: Vec<f64>,
        w0: Vec<f64>,
        w1: Vec<f64>,
    },
}

fn default_scale() -> f64 {
    1.0
}

impl InitialData {
    /// Short deterministic label used in output file names.
    pub fn label(&self) -> String {
        match self {
            InitialData::Mode { n } => format!("mode{n}"),
            InitialData::Polynomial => "poly".into(),
            InitialData::Elementary { scale } => format!("eiv{scale}"),
            InitialData::Sine { eps } => format!("sine{eps}"),
            InitialData::Zero => "zero".into(),
            InitialData::Custom { .. } => "custom".into(),
        }
    }
}
