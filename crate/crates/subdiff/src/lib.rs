//! Spectral solver for the subdiffusion equation
//!
//!   D_t^rho u(x,t) - Lap u(x,t) = f(x) g(t),   u|_boundary = 0,   u(x,0) = phi(x)
//!
//! on intervals and rectangles, where `D_t^rho` is the Caputo derivative of
//! order `rho` in (0, 1]. The forward solver expands the solution in the
//! Dirichlet sine eigenbasis; the inverse solver recovers the spatial source
//! factor `f` from one interior-time snapshot `u(., t0) = psi`, reports
//! per-mode invertibility, and describes the full non-unique solution family
//! when sign-changing `g` makes some Duhamel coefficients vanish at `t0`.
//!
//! Module map:
//! - [`special`]: gamma, beta, and the two-parameter Mittag-Leffler function
//!   on the negative real axis.
//! - [`basis`]: Dirichlet eigenpairs of the Laplacian on boxes, grid/spectral
//!   transforms, coefficient-decay diagnostics.
//! - [`kernel`]: per-mode Duhamel coefficients b_k(t), mode classification
//!   into invertible and null sets, two-sided bound checks.
//! - [`forward`]: series solution of the initial-boundary value problem.
//! - [`inverse`]: source recovery, uniqueness certificates, round trips.
//! - [`oracles`]: independent verification machinery (L1 Caputo scheme,
//!   finite-difference Laplacian, brute-force quadrature, residual checks).

pub mod basis;
mod error;
pub mod forward;
pub mod inverse;
pub mod kernel;
pub mod oracles;
pub mod special;

pub use basis::{BoxDomain, GridFunction, ModeIndex, SpectralCoeffs};
pub use error::{Error, Result};
pub use forward::{ForwardProblem, ForwardSolution};
pub use inverse::{InverseProblem, InverseResult, SolvabilityReport, Verdict};
pub use kernel::{DuhamelKernel, ModeClassification, TimeProfile};
