//! Recovery of the spatial source factor f from one interior-time snapshot.
//!
//! Applying the snapshot u(., t0) = psi to the forward series gives, per
//! mode,
//!
//!   f_k b_k(t0) = psi_k - phi_k E_rho(-lambda_k t0^rho).
//!
//! Modes with b_k(t0) away from zero invert directly; the recovery amplifies
//! data errors by 1/|b_k(t0)| ~ lambda_k, which the report exposes as a
//! per-mode amplification factor. Modes with b_k(t0) = 0 (possible only for
//! sign-changing g) carry no information about f_k: a solution exists iff
//! the snapshot matches the homogeneous evolution on those modes, and then
//! any square-summable choice of the free coefficients yields a valid
//! solution. The default free value is 0, the minimal-norm representative of
//! the family.

use crate::basis::{self, BoxDomain, DecayReport, GridFunction, ModeIndex, SpectralCoeffs};
use crate::forward::{self, ForwardProblem, ForwardSolution};
use crate::kernel::{self, ModeClassification, TimeProfile};
use crate::special;
use crate::{Error, Result};

/// Default base tolerance for the per-null-mode solvability residual.
pub const DEFAULT_SOLVABILITY_TOL: f64 = 1e-7;

/// Inverse problem data: recover f from (phi, psi, g, t0).
#[derive(Debug, Clone)]
pub struct InverseProblem {
    pub domain: BoxDomain,
    pub rho: f64,
    pub phi: SpectralCoeffs,
    pub psi: SpectralCoeffs,
    pub g: TimeProfile,
    pub t0: f64,
    pub horizon: f64,
    /// Free source coefficients for null modes; defaults to zero elsewhere.
    pub free_coefficients: Vec<(ModeIndex, f64)>,
    pub rel_threshold: f64,
    pub solvability_tol: f64,
    pub quadrature_cells: usize,
}

impl InverseProblem {
    pub fn new(
        rho: f64,
        phi: SpectralCoeffs,
        psi: SpectralCoeffs,
        g: TimeProfile,
        t0: f64,
        horizon: f64,
    ) -> Result<Self> {
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(Error::Precondition(format!("rho = {rho} not in (0, 1]")));
        }
        if !(t0 > 0.0 && t0 <= horizon) {
            return Err(Error::Precondition(format!(
                "t0 = {t0} must lie in (0, horizon = {horizon}]"
            )));
        }
        if phi.domain() != psi.domain() || phi.counts() != psi.counts() {
            return Err(Error::Precondition(
                "phi and psi must share domain and mode counts".into(),
            ));
        }
        let domain = phi.domain().clone();
        Ok(Self {
            domain,
            rho,
            phi,
            psi,
            g,
            t0,
            horizon,
            free_coefficients: Vec::new(),
            rel_threshold: kernel::DEFAULT_NULL_THRESHOLD,
            solvability_tol: DEFAULT_SOLVABILITY_TOL,
            quadrature_cells: kernel::DEFAULT_QUADRATURE_CELLS,
        })
    }

    pub fn with_free_coefficients(mut self, free: Vec<(ModeIndex, f64)>) -> Self {
        self.free_coefficients = free;
        self
    }

    pub fn with_thresholds(mut self, rel_threshold: f64, solvability_tol: f64) -> Self {
        self.rel_threshold = rel_threshold;
        self.solvability_tol = solvability_tol;
        self
    }

    pub fn with_quadrature_cells(mut self, cells: usize) -> Self {
        self.quadrature_cells = cells.max(16);
        self
    }
}

/// Outcome of the solvability analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// every retained mode inverts: exactly one solution
    Unique,
    /// null modes exist and the snapshot is compatible: a solution family
    NonUniqueFamily,
    /// some null mode contradicts the snapshot: no solution at all
    NoSolution,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Unique => "unique",
            Verdict::NonUniqueFamily => "non-unique-family",
            Verdict::NoSolution => "no-solution",
        };
        write!(f, "{s}")
    }
}

/// One null mode's compatibility check: the snapshot must match the purely
/// homogeneous evolution there.
#[derive(Debug, Clone)]
pub struct NullModeCheck {
    pub mode: ModeIndex,
    pub position: usize,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Per-mode solvability report.
#[derive(Debug, Clone)]
pub struct SolvabilityReport {
    pub verdict: Verdict,
    pub checks: Vec<NullModeCheck>,
    /// 1/(lambda_k |b_k(t0)|) per retained mode; infinity on null modes
    pub amplification: Vec<f64>,
    /// regular modes within 10x of the null threshold: inverted but fragile
    pub near_singular: Vec<ModeIndex>,
}

impl SolvabilityReport {
    pub fn violations(&self) -> Vec<&NullModeCheck> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

/// Description of the non-unique solution family: free coefficients live on
/// the null modes, constrained only by weighted square-summability, proxied
/// here by the decay diagnostic at tau.
#[derive(Debug, Clone)]
pub struct FamilyDescription {
    pub free_modes: Vec<ModeIndex>,
    pub chosen_values: Vec<f64>,
    pub constraint_tau: f64,
    pub decay: Option<DecayReport>,
}

impl FamilyDescription {
    pub fn is_empty(&self) -> bool {
        self.free_modes.is_empty()
    }
}

/// Recovered source, reconstructed trajectory, classification, and family.
#[derive(Debug)]
pub struct InverseResult {
    pub f: SpectralCoeffs,
    pub u: ForwardSolution,
    pub classification: ModeClassification,
    pub report: SolvabilityReport,
    pub family: FamilyDescription,
}

impl InverseResult {
    pub fn f_grid(&self, nodes: &[usize]) -> Result<GridFunction> {
        basis::synthesize(&self.f, nodes)
    }
}

/// Solves the inverse problem. Fails with [`Error::NoSolution`] when the
/// snapshot is incompatible with the null modes.
pub fn recover(problem: &InverseProblem) -> Result<InverseResult> {
    let modes = problem.phi.order().to_vec();
    let eigenvalues = problem.phi.eigenvalues();
    let kernel_at_t0 = kernel::duhamel_kernel(
        &problem.g,
        problem.rho,
        &eigenvalues,
        problem.t0,
        problem.quadrature_cells,
    )?;
    let classification = kernel::classify_from_kernel(
        &kernel_at_t0,
        &modes,
        &eigenvalues,
        problem.rho,
        problem.rel_threshold,
    )?;

    // free coefficients may only target null modes
    for (k, _) in &problem.free_coefficients {
        match classification.null_modes().contains(k) {
            true => {}
            false => {
                return Err(Error::Precondition(format!(
                    "free coefficient on mode {k}, which is not null at t0"
                )))
            }
        }
    }

    let tp = problem.t0.powf(problem.rho);
    let mut f = problem.phi.clone();
    for v in f.values_mut() {
        *v = 0.0;
    }
    let mut checks = Vec::new();
    let mut amplification = Vec::with_capacity(modes.len());
    let mut near_singular = Vec::new();
    for (pos, k) in modes.iter().enumerate() {
        let lam = eigenvalues[pos];
        let e0 = special::ml_one(problem.rho, -lam * tp)?;
        let data = problem.psi.values()[pos] - problem.phi.values()[pos] * e0;
        let b = kernel_at_t0.values[pos];
        if classification.is_null(pos) {
            let tolerance = problem.solvability_tol * (1.0 + problem.phi.values()[pos].abs())
                + kernel_at_t0.error_estimates[pos];
            let residual = data.abs();
            checks.push(NullModeCheck {
                mode: k.clone(),
                position: pos,
                residual,
                tolerance,
                pass: residual <= tolerance,
            });
            amplification.push(f64::INFINITY);
            let free = problem
                .free_coefficients
                .iter()
                .find(|(m, _)| m == k)
                .map(|(_, v)| *v)
                .unwrap_or(0.0);
            f.values_mut()[pos] = free;
        } else {
            f.values_mut()[pos] = data / b;
            amplification.push(1.0 / (lam * b.abs()));
            if b.abs() < 10.0 * classification.threshold(pos) {
                near_singular.push(k.clone());
            }
        }
    }

    let verdict = if checks.iter().any(|c| !c.pass) {
        Verdict::NoSolution
    } else if checks.is_empty() {
        Verdict::Unique
    } else {
        Verdict::NonUniqueFamily
    };
    let report = SolvabilityReport {
        verdict,
        checks,
        amplification,
        near_singular,
    };
    if verdict == Verdict::NoSolution {
        return Err(Error::NoSolution(Box::new(report)));
    }

    // square-summability constraint on the free values, proxied by the decay
    // diagnostic at tau = dim/2 + 1 (advisory, never blocking)
    let family = if report.verdict == Verdict::NonUniqueFamily {
        let mut free_modes = Vec::new();
        let mut chosen_values = Vec::new();
        let mut free_coeffs = problem.phi.clone();
        for v in free_coeffs.values_mut() {
            *v = 0.0;
        }
        for pos in classification.null_positions() {
            free_modes.push(modes[pos].clone());
            chosen_values.push(f.values()[pos]);
            free_coeffs.values_mut()[pos] = f.values()[pos];
        }
        let tau = problem.domain.dim() as f64 / 2.0 + 1.0;
        let decay = basis::decay_diagnostic(&free_coeffs, tau).ok();
        FamilyDescription {
            free_modes,
            chosen_values,
            constraint_tau: tau,
            decay,
        }
    } else {
        FamilyDescription {
            free_modes: Vec::new(),
            chosen_values: Vec::new(),
            constraint_tau: problem.domain.dim() as f64 / 2.0 + 1.0,
            decay: None,
        }
    };

    let u = forward::solve(
        ForwardProblem::new(
            problem.rho,
            problem.phi.clone(),
            f.clone(),
            problem.g.clone(),
            problem.horizon,
        )?
        .with_quadrature_cells(problem.quadrature_cells),
    )?;

    Ok(InverseResult {
        f,
        u,
        classification,
        report,
        family,
    })
}

/// Per-mode invertibility margins lambda_k |b_k(t0)| and the resulting
/// uniqueness statement.
#[derive(Debug, Clone)]
pub struct UniquenessCertificate {
    pub margins: Vec<f64>,
    pub null_modes: Vec<ModeIndex>,
    /// g keeps a strict sign on [0, t0]; then no mode can be null at any t0
    pub sign_definite: bool,
    pub unique_at_t0: bool,
}

pub fn uniqueness_certificate(problem: &InverseProblem) -> Result<UniquenessCertificate> {
    let modes = problem.phi.order().to_vec();
    let eigenvalues = problem.phi.eigenvalues();
    let kernel_at_t0 = kernel::duhamel_kernel(
        &problem.g,
        problem.rho,
        &eigenvalues,
        problem.t0,
        problem.quadrature_cells,
    )?;
    let classification = kernel::classify_from_kernel(
        &kernel_at_t0,
        &modes,
        &eigenvalues,
        problem.rho,
        problem.rel_threshold,
    )?;
    let margins = eigenvalues
        .iter()
        .zip(&kernel_at_t0.values)
        .map(|(&lam, &b)| lam * b.abs())
        .collect();
    let sign_definite = problem.g.sign_definite_on(problem.t0).is_some();
    Ok(UniquenessCertificate {
        margins,
        null_modes: classification.null_modes().to_vec(),
        sign_definite,
        unique_at_t0: classification.null_modes().is_empty(),
    })
}

/// Forward-then-recover consistency report.
#[derive(Debug, Clone)]
pub struct RoundTripReport {
    pub rel_l2_error: f64,
    pub max_abs_error: f64,
    pub verdict: Verdict,
}

/// Forward solve with a known source, snapshot at t0, recovery, and
/// comparison of the recovered coefficients against the truth on the
/// retained modes.
pub fn roundtrip(
    rho: f64,
    phi: &SpectralCoeffs,
    f_true: &SpectralCoeffs,
    g: &TimeProfile,
    t0: f64,
    nodes: &[usize],
) -> Result<RoundTripReport> {
    let problem = ForwardProblem::new(rho, phi.clone(), f_true.clone(), g.clone(), t0)?;
    let solution = forward::solve(problem)?;
    let snapshot = solution.at(t0, nodes)?;
    let psi = basis::analyze(&snapshot, phi.counts())?;
    let inverse = InverseProblem::new(rho, phi.clone(), psi, g.clone(), t0, t0)?;
    let result = recover(&inverse)?;
    let mut sq = 0.0;
    let mut max_abs: f64 = 0.0;
    for (a, b) in result.f.values().iter().zip(f_true.values()) {
        let d = a - b;
        sq += d * d;
        max_abs = max_abs.max(d.abs());
    }
    let denom = f_true.l2_norm();
    let rel_l2_error = if denom > 0.0 {
        sq.sqrt() / denom
    } else {
        sq.sqrt()
    };
    Ok(RoundTripReport {
        rel_l2_error,
        max_abs_error: max_abs,
        verdict: result.report.verdict,
    })
}
