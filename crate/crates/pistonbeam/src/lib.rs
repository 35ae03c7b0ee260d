//! Flutter onset prediction and nonlinear dynamics for 1-D extensible beams
//! in axial flow, with piston-theoretic aerodynamic loading.
//!
//! The library covers two complementary toolchains:
//!
//! - a modal route: in-vacuo eigenpairs for clamped/hinged/cantilever
//!   configurations ([`modes`]), the perturbed-frequency eigenproblem and
//!   critical flow speed searches ([`stability`]);
//! - a direct route: method-of-lines finite differences with ghost-point
//!   boundary closures and a stiff implicit integrator ([`fdm`]), plus
//!   energy/limit-cycle/steady-state diagnostics ([`diagnostics`]).
//!
//! [`scenario`] ties both together into named, reproducible experiment
//! presets with deterministic CSV/JSON output.

pub mod diagnostics;
pub mod fdm;
pub mod model;
pub mod modes;
pub mod scenario;
pub mod stability;

pub use model::{BeamParams, BoundaryConfig, ConfigKind, FreeEndKind, InitialData};
pub use modes::ModeBasis;
