//! Command implementations: each run validates its configuration, produces
//! deterministic artifacts under the output directory, and writes a manifest
//! echoing the resolved configuration.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde_json::json;

use subdiff::basis::{self, BoxDomain, SpectralCoeffs};
use subdiff::forward::{self, ForwardProblem};
use subdiff::inverse::{self, InverseProblem};
use subdiff::kernel::{self, TimeProfile};
use subdiff::oracles::{self, ResidualOptions, SignChangingScenario};
use subdiff::special::{self, MlParams};
use subdiff::Error as LibError;

use crate::catalog::{resolve_profile, resolve_source};
use crate::config::{ProfileConfig, RunConfig, RunKind, SourceConfig};

/// Errors mapped to process exit codes: configuration and domain problems
/// exit 2, an unsolvable inverse problem exits 3, accuracy failures exit 4.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    NoSolution(String),
    Accuracy(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::NoSolution(_) => 3,
            CliError::Accuracy(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::NoSolution(m) | CliError::Accuracy(m) => m,
        }
    }
}

impl From<LibError> for CliError {
    fn from(e: LibError) -> Self {
        match e {
            LibError::NoSolution(_) => CliError::NoSolution(e.to_string()),
            LibError::Accuracy(m) => CliError::Accuracy(m),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("i/o error: {e}"))
    }
}

fn config_err(m: impl Into<String>) -> CliError {
    CliError::Config(m.into())
}

pub type CliResult<T> = Result<T, CliError>;

struct Resolved {
    config: RunConfig,
    domain: BoxDomain,
}

fn prepare(mut config: RunConfig, kind: RunKind) -> CliResult<Resolved> {
    config.kind = Some(kind);
    config.validate().map_err(config_err)?;
    let domain = BoxDomain::new(&config.domain.lengths).map_err(|e| config_err(e.to_string()))?;
    Ok(Resolved { config, domain })
}

fn ensure_dir(dir: &str) -> CliResult<PathBuf> {
    let path = PathBuf::from(dir);
    fs::create_dir_all(&path)?;
    Ok(path)
}

fn write_manifest(dir: &Path, config: &RunConfig) -> CliResult<()> {
    let manifest = json!({
        "tool": "subdiff",
        "version": env!("CARGO_PKG_VERSION"),
        "command": config.kind.map(|k| k.to_string()),
        "config": config,
    });
    write_json(dir.join("manifest.json"), &manifest)
}

fn write_json(path: PathBuf, value: &serde_json::Value) -> CliResult<()> {
    let mut file = fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut file, value)
        .map_err(|e| config_err(format!("json write error: {e}")))?;
    file.write_all(b"\n")?;
    Ok(())
}

fn write_grid_csv(path: PathBuf, grid: &basis::GridFunction) -> CliResult<()> {
    let mut file = fs::File::create(path)?;
    grid.write_csv(&mut file)?;
    Ok(())
}

fn source_or(cfg: &Option<SourceConfig>, fallback: SourceConfig) -> SourceConfig {
    cfg.clone().unwrap_or(fallback)
}

fn profile_or_constant(cfg: &Option<ProfileConfig>) -> ProfileConfig {
    cfg.clone().unwrap_or(ProfileConfig::Constant { value: 1.0 })
}

fn mode_labels(c: &SpectralCoeffs) -> Vec<String> {
    c.order().iter().map(|k| k.to_string()).collect()
}

// ---------------------------------------------------------------------------
// forward
// ---------------------------------------------------------------------------

pub fn run_forward(config: RunConfig) -> CliResult<()> {
    let mut config = config;
    config.phi = Some(source_or(
        &config.phi,
        SourceConfig::Expr {
            name: "sine-mode".into(),
            mode: Some(vec![1; config.domain.lengths.len()]),
            amplitude: 1.0,
            center: None,
            width: None,
        },
    ));
    config.f = Some(source_or(&config.f, SourceConfig::Zero));
    config.g = Some(profile_or_constant(&config.g));
    if config.snapshot_times.is_empty() {
        config.snapshot_times = vec![config.horizon];
    }
    let r = prepare(config, RunKind::Forward)?;
    let disc = &r.config.discretization;
    let phi = resolve_source(
        r.config.phi.as_ref().unwrap(),
        &r.domain,
        &disc.modes,
        &disc.grid,
    )
    .map_err(config_err)?;
    let f = resolve_source(
        r.config.f.as_ref().unwrap(),
        &r.domain,
        &disc.modes,
        &disc.grid,
    )
    .map_err(config_err)?;
    let g = resolve_profile(r.config.g.as_ref().unwrap(), r.config.rho, &r.domain)
        .map_err(config_err)?;

    let problem = ForwardProblem::new(r.config.rho, phi, f.clone(), g.clone(), r.config.horizon)?
        .with_quadrature_cells(disc.quadrature_cells);
    let solution = forward::solve(problem)?;

    let dir = ensure_dir(&r.config.output_dir)?;
    for (i, &t) in r.config.snapshot_times.iter().enumerate() {
        let grid = solution.at(t, &disc.grid)?;
        write_grid_csv(dir.join(format!("snapshot_{i:03}.csv")), &grid)?;
    }

    // residual summary over [horizon/10, horizon]
    let mut opts = ResidualOptions::for_dim(r.domain.dim());
    opts.time_steps = disc.residual_time_steps;
    let window = (r.config.horizon / 10.0, r.config.horizon);
    let residual = oracles::residual_check(&solution, &f, &g, window, &opts)?;

    let report = json!({
        "mode_count": solution.eigenvalues().len(),
        "tail_indicator": solution.tail_indicator(),
        "snapshot_times": r.config.snapshot_times,
        "residual": {
            "max": residual.max_residual,
            "rms": residual.l2_residual,
            "window": [residual.window.0, residual.window.1],
            "time_steps": residual.time_steps,
        },
    });
    write_json(dir.join("report.json"), &report)?;
    write_manifest(&dir, &r.config)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// invert
// ---------------------------------------------------------------------------

pub fn run_invert(config: RunConfig) -> CliResult<()> {
    let mut config = config;
    config.phi = Some(source_or(&config.phi, SourceConfig::Zero));
    config.g = Some(profile_or_constant(&config.g));
    if config.psi.is_none() {
        return Err(config_err("psi: snapshot data source is required for invert"));
    }
    if config.snapshot_times.is_empty() {
        config.snapshot_times = vec![config.t0];
    }
    let r = prepare(config, RunKind::Inverse)?;
    let disc = &r.config.discretization;
    let phi = resolve_source(
        r.config.phi.as_ref().unwrap(),
        &r.domain,
        &disc.modes,
        &disc.grid,
    )
    .map_err(config_err)?;
    let psi = resolve_source(
        r.config.psi.as_ref().unwrap(),
        &r.domain,
        &disc.modes,
        &disc.grid,
    )
    .map_err(config_err)?;
    let g = resolve_profile(r.config.g.as_ref().unwrap(), r.config.rho, &r.domain)
        .map_err(config_err)?;

    let problem = InverseProblem::new(r.config.rho, phi, psi, g, r.config.t0, r.config.horizon)?
        .with_thresholds(
            r.config.thresholds.null_mode_rel,
            r.config.thresholds.solvability_abs,
        )
        .with_quadrature_cells(disc.quadrature_cells);

    let dir = ensure_dir(&r.config.output_dir)?;
    let result = match inverse::recover(&problem) {
        Ok(result) => result,
        Err(LibError::NoSolution(report)) => {
            // still record what was learned before failing with exit code 3
            write_json(dir.join("solvability.json"), &solvability_json(&report))?;
            write_manifest(&dir, &r.config)?;
            let modes: Vec<String> = report
                .violations()
                .iter()
                .map(|c| c.mode.to_string())
                .collect();
            return Err(CliError::NoSolution(format!(
                "no solution: orthogonality violated on null mode(s) {}",
                modes.join(", ")
            )));
        }
        Err(other) => return Err(other.into()),
    };

    write_grid_csv(dir.join("f.csv"), &result.f_grid(&disc.grid)?)?;
    for (i, &t) in r.config.snapshot_times.iter().enumerate() {
        let grid = result.u.at(t, &disc.grid)?;
        write_grid_csv(dir.join(format!("u_{i:03}.csv")), &grid)?;
    }
    write_json(dir.join("solvability.json"), &solvability_json(&result.report))?;
    write_manifest(&dir, &r.config)?;
    Ok(())
}

fn solvability_json(report: &inverse::SolvabilityReport) -> serde_json::Value {
    json!({
        "verdict": report.verdict.to_string(),
        "null_modes": report.checks.iter().map(|c| c.mode.to_string()).collect::<Vec<_>>(),
        "residuals": report.checks.iter().map(|c| c.residual).collect::<Vec<_>>(),
        "tolerances": report.checks.iter().map(|c| c.tolerance).collect::<Vec<_>>(),
        "amplification": report.amplification,
        "near_singular": report.near_singular.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
    })
}

// ---------------------------------------------------------------------------
// diagnose-modes
// ---------------------------------------------------------------------------

pub fn run_diagnose(config: RunConfig) -> CliResult<()> {
    let mut config = config;
    config.g = Some(profile_or_constant(&config.g));
    let r = prepare(config, RunKind::Diagnose)?;
    let disc = &r.config.discretization;
    let g = resolve_profile(r.config.g.as_ref().unwrap(), r.config.rho, &r.domain)
        .map_err(config_err)?;
    let coeffs = SpectralCoeffs::zeros(r.domain.clone(), &disc.modes)?;
    let eigenvalues = coeffs.eigenvalues();
    let kernel_values = kernel::duhamel_kernel(
        &g,
        r.config.rho,
        &eigenvalues,
        r.config.t0,
        disc.quadrature_cells,
    )?;
    let class = kernel::classify_from_kernel(
        &kernel_values,
        coeffs.order(),
        &eigenvalues,
        r.config.rho,
        r.config.thresholds.null_mode_rel,
    )?;

    let dir = ensure_dir(&r.config.output_dir)?;
    let mut file = fs::File::create(dir.join("modes.csv"))?;
    file.write_all(b"k_index,lambda,b_value,error_estimate,class\n")?;
    for (i, label) in mode_labels(&coeffs).iter().enumerate() {
        writeln!(
            file,
            "{label},{:.17e},{:.17e},{:.17e},{}",
            eigenvalues[i],
            kernel_values.values[i],
            kernel_values.error_estimates[i],
            if class.is_null(i) { "null" } else { "regular" }
        )?;
    }
    write_manifest(&dir, &r.config)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// example1
// ---------------------------------------------------------------------------

pub fn run_example1(config: RunConfig, b: f64, mode: Vec<usize>) -> CliResult<()> {
    let mut config = config;
    config.g = Some(ProfileConfig::Example1 {
        b,
        lambda: None,
        mode: Some(mode.clone()),
    });
    config.phi = Some(SourceConfig::Zero);
    config.psi = Some(SourceConfig::Zero);
    let r = prepare(config, RunKind::Example1)?;
    let disc = &r.config.discretization;
    let idx = basis::ModeIndex::new(&mode).map_err(|e| config_err(e.to_string()))?;
    if idx.dim() != r.domain.dim() {
        return Err(config_err("example1: mode dimension must match the domain"));
    }
    let lambda = r.domain.eigenvalue(&idx);
    let scenario = SignChangingScenario::new(r.config.rho, b, lambda)
        .map_err(|e| config_err(e.to_string()))?;

    let phi = SpectralCoeffs::zeros(r.domain.clone(), &disc.modes)?;
    let psi = phi.clone();
    let problem = InverseProblem::new(
        r.config.rho,
        phi,
        psi,
        scenario.g.clone(),
        r.config.t0,
        r.config.horizon,
    )?
    .with_thresholds(
        r.config.thresholds.null_mode_rel,
        r.config.thresholds.solvability_abs,
    )
    .with_quadrature_cells(disc.quadrature_cells);
    let cert = inverse::uniqueness_certificate(&problem)?;
    let result = inverse::recover(&problem)?;

    let dir = ensure_dir(&r.config.output_dir)?;
    let report = json!({
        "rho": r.config.rho,
        "b": b,
        "mode": idx.to_string(),
        "lambda": lambda,
        "t0": r.config.t0,
        "g_at_zero": scenario.g_at_zero,
        "g_at_one": scenario.g_at_one,
        "time_factor_at_t0": scenario.time_factor(r.config.t0),
        "null_modes": cert.null_modes.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        "margins_first_8": cert.margins.iter().take(8).collect::<Vec<_>>(),
        "verdict": result.report.verdict.to_string(),
        "free_modes": result.family.free_modes.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
    });
    write_json(dir.join("report.json"), &report)?;
    write_manifest(&dir, &r.config)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// roundtrip
// ---------------------------------------------------------------------------

pub fn run_roundtrip(config: RunConfig) -> CliResult<()> {
    let mut config = config;
    config.phi = Some(source_or(&config.phi, SourceConfig::Zero));
    config.f = Some(source_or(
        &config.f,
        SourceConfig::Expr {
            name: "poly-bubble".into(),
            mode: None,
            amplitude: 1.0,
            center: None,
            width: None,
        },
    ));
    config.g = Some(profile_or_constant(&config.g));
    let r = prepare(config, RunKind::Roundtrip)?;
    let disc = &r.config.discretization;
    let phi = resolve_source(
        r.config.phi.as_ref().unwrap(),
        &r.domain,
        &disc.modes,
        &disc.grid,
    )
    .map_err(config_err)?;
    let f_true = resolve_source(
        r.config.f.as_ref().unwrap(),
        &r.domain,
        &disc.modes,
        &disc.grid,
    )
    .map_err(config_err)?;
    let g = resolve_profile(r.config.g.as_ref().unwrap(), r.config.rho, &r.domain)
        .map_err(config_err)?;

    let report = inverse::roundtrip(r.config.rho, &phi, &f_true, &g, r.config.t0, &disc.grid)?;
    let dir = ensure_dir(&r.config.output_dir)?;
    let value = json!({
        "rho": r.config.rho,
        "t0": r.config.t0,
        "modes": disc.modes,
        "rel_error": report.rel_l2_error,
        "max_error": report.max_abs_error,
        "verdict": report.verdict.to_string(),
    });
    write_json(dir.join("report.json"), &value)?;
    write_manifest(&dir, &r.config)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct Check {
    name: &'static str,
    value: f64,
    threshold: f64,
    passed: bool,
}

fn check_upper(name: &'static str, value: f64, threshold: f64) -> Check {
    Check {
        name,
        value,
        threshold,
        passed: value <= threshold,
    }
}

/// Oracle conformance suite behind the `verify` command; emits a JSON report
/// and fails with the accuracy exit code when any check misses its
/// tolerance.
pub fn run_verify(config: RunConfig) -> CliResult<()> {
    let r = prepare(config, RunKind::Verify)?;
    let mut checks: Vec<Check> = Vec::new();

    // 1. reduction identity on a log grid
    let mut worst = 0.0f64;
    for rho in [0.3, 0.5, 0.7, 0.9] {
        let p = MlParams::new(rho, rho + 1.0).unwrap();
        for i in 0..=300 {
            let t = 10f64.powf(-4.0 + 10.0 * i as f64 / 300.0);
            let lhs = special::ml(p, -t)?;
            let rhs = (1.0 - special::ml_one(rho, -t)?) / t;
            worst = worst.max((lhs - rhs).abs());
        }
    }
    checks.push(check_upper("ml_reduction_identity", worst, 1e-11));

    // 2. monotonicity of E_rho(-t)
    let mut violations = 0.0;
    for rho in [0.3, 0.5, 0.7, 0.9] {
        let mut prev = 1.0;
        for i in 1..=2000 {
            let t = 10f64.powf(-6.0 + 12.0 * i as f64 / 2000.0);
            let v = special::ml_one(rho, -t)?;
            if !(v < prev && v > 0.0 && v < 1.0) {
                violations += 1.0;
            }
            prev = v;
        }
    }
    checks.push(check_upper("ml_monotonicity_violations", violations, 0.0));

    // 3. convolution identity vs brute-force quadrature
    let mut worst = 0.0f64;
    for rho in [0.5, 0.9] {
        for lam in [1.0, 100.0] {
            for t in [0.1f64, 1.0] {
                let brute = oracles::brute_duhamel(&|_| 1.0, rho, lam, t, 1e-9)?;
                let closed = t.powf(rho)
                    * special::ml(MlParams::new(rho, rho + 1.0).unwrap(), -lam * t.powf(rho))?;
                worst = worst.max((brute - closed).abs());
            }
        }
    }
    checks.push(check_upper("convolution_vs_brute_quadrature", worst, 1e-8));

    // 4. closed form vs product integration on a sampled constant
    let times: Vec<f64> = (0..=32).map(|i| i as f64 / 32.0).collect();
    let sampled = TimeProfile::samples(times, vec![1.0; 33]).map_err(CliError::from)?;
    let exact = TimeProfile::constant(1.0).map_err(CliError::from)?;
    let mut worst = 0.0f64;
    for (rho, lam) in [(0.3, 1.0), (0.5, 1e3), (0.9, 10.0)] {
        let a = kernel::duhamel(&sampled, rho, lam, 1.0)?;
        let b = kernel::duhamel(&exact, rho, lam, 1.0)?;
        worst = worst.max((a.value - b.value).abs() / a.error_estimate.max(1e-14));
    }
    checks.push(check_upper("product_integration_within_estimate", worst, 1.0));

    // 5. L1 empirical order on t^2 (expected in [1.3, 2.0] for rho = 0.5)
    let gamma_25 = special::gamma(2.5)?;
    let exact_at_one = 2.0 / gamma_25;
    let mut errs = Vec::new();
    for n in [512usize, 1024] {
        let dt = 1.0 / n as f64;
        let samples: Vec<f64> = (0..=n).map(|i| (i as f64 * dt).powi(2)).collect();
        let d = oracles::caputo_l1(&samples, 0.5, dt)?;
        errs.push((d[n] - exact_at_one).abs());
    }
    let order = (errs[0] / errs[1]).log2();
    checks.push(Check {
        name: "l1_empirical_order",
        value: order,
        threshold: 1.3,
        passed: (1.3..=2.0).contains(&order),
    });

    // 6. residual of the stationary balance on the run's own domain size
    let dim = r.domain.dim();
    let counts = vec![4.min(r.config.discretization.modes[0]); dim];
    let mut phi = SpectralCoeffs::zeros(r.domain.clone(), &counts)?;
    let first = phi.order()[0].clone();
    phi.set(&first, 1.0)?;
    let g1 = TimeProfile::constant(1.0).map_err(CliError::from)?;
    let problem = ForwardProblem::new(1.0, phi.clone(), SpectralCoeffs::zeros(r.domain.clone(), &counts)?, g1.clone(), 1.0)?;
    let sol = forward::solve(problem)?;
    let mut opts = ResidualOptions::for_dim(dim);
    opts.time_steps = r.config.discretization.residual_time_steps;
    let zero = SpectralCoeffs::zeros(r.domain.clone(), &counts)?;
    let rep = oracles::residual_check(&sol, &zero, &g1, (0.1, 1.0), &opts)?;
    checks.push(check_upper("heat_mode_residual", rep.max_residual, 1e-3));

    // 7. sign-changing scenario sanity
    let scenario =
        SignChangingScenario::new(0.5, 0.1, 1.0).map_err(|e| config_err(e.to_string()))?;
    checks.push(check_upper(
        "scenario_g_at_zero_offset",
        (scenario.g_at_zero - std::f64::consts::PI.sqrt() / 2.0).abs(),
        1e-12,
    ));
    checks.push(check_upper("scenario_g_at_one", scenario.g_at_one, 0.0));

    let all_passed = checks.iter().all(|c| c.passed);
    let dir = ensure_dir(&r.config.output_dir)?;
    let report = json!({
        "all_passed": all_passed,
        "checks": checks.iter().map(|c| json!({
            "name": c.name,
            "value": c.value,
            "threshold": c.threshold,
            "passed": c.passed,
        })).collect::<Vec<_>>(),
    });
    write_json(dir.join("report.json"), &report)?;
    write_manifest(&dir, &r.config)?;
    for c in &checks {
        println!(
            "{}: {} (value {:.3e}, threshold {:.3e})",
            c.name,
            if c.passed { "ok" } else { "FAILED" },
            c.value,
            c.threshold
        );
    }
    if all_passed {
        Ok(())
    } else {
        Err(CliError::Accuracy("verification checks failed".into()))
    }
}

// ---------------------------------------------------------------------------
// ml-eval
// ---------------------------------------------------------------------------

pub fn run_ml_eval(rho: f64, mu: f64, z: f64) -> CliResult<()> {
    let params = MlParams::new(rho, mu)?;
    let v = special::ml(params, z)?;
    // 15 significant digits
    println!("{v:.14e}");
    Ok(())
}
