//! Run configuration: a single TOML file, with command-line flags taking
//! precedence over file values and file values over built-in defaults.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunKind {
    Forward,
    Inverse,
    Diagnose,
    Example1,
    Roundtrip,
    Verify,
}

impl std::fmt::Display for RunKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RunKind::Forward => "forward",
            RunKind::Inverse => "inverse",
            RunKind::Diagnose => "diagnose",
            RunKind::Example1 => "example1",
            RunKind::Roundtrip => "roundtrip",
            RunKind::Verify => "verify",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    pub lengths: Vec<f64>,
}

impl Default for DomainConfig {
    fn default() -> Self {
        Self {
            lengths: vec![std::f64::consts::PI],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Discretization {
    /// retained modes per axis
    pub modes: Vec<usize>,
    /// interior grid nodes per axis for file output and analysis
    pub grid: Vec<usize>,
    /// product-integration cells for sampled profiles
    pub quadrature_cells: usize,
    /// time steps used by residual summaries
    pub residual_time_steps: usize,
}

impl Default for Discretization {
    fn default() -> Self {
        Self {
            modes: vec![64],
            grid: vec![255],
            quadrature_cells: 1024,
            residual_time_steps: 512,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    /// relative null-mode classification threshold
    pub null_mode_rel: f64,
    /// base absolute solvability tolerance on null-mode residuals
    pub solvability_abs: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            null_mode_rel: 1e-9,
            solvability_abs: 1e-7,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SourceConfig {
    /// identically zero
    Zero,
    /// inline expression from the catalog: sine-mode, poly-bubble,
    /// gaussian-bump
    Expr {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mode: Option<Vec<usize>>,
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        width: Option<f64>,
    },
    /// grid samples from a CSV file
    Csv { path: String },
    /// explicit spectral coefficients
    Coeffs { entries: Vec<CoeffEntry> },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffEntry {
    pub mode: Vec<usize>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProfileConfig {
    Constant {
        value: f64,
    },
    /// the built-in sign-changing benchmark profile; lambda defaults to the
    /// eigenvalue of `mode` (default mode 1)
    Example1 {
        b: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lambda: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mode: Option<Vec<usize>>,
    },
    Polynomial {
        coeffs: Vec<f64>,
    },
    Samples {
        times: Vec<f64>,
        values: Vec<f64>,
    },
}

/// The full run configuration; the manifest echoes the resolved value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<RunKind>,
    #[serde(default = "default_output_dir")]
    pub output_dir: String,
    #[serde(default)]
    pub domain: DomainConfig,
    #[serde(default)]
    pub discretization: Discretization,
    #[serde(default = "default_rho")]
    pub rho: f64,
    #[serde(default = "default_t0")]
    pub t0: f64,
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub snapshot_times: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<SourceConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<SourceConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<SourceConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<ProfileConfig>,
    #[serde(default)]
    pub thresholds: Thresholds,
}

fn default_output_dir() -> String {
    "out".into()
}

fn default_rho() -> f64 {
    0.5
}

fn default_t0() -> f64 {
    1.0
}

fn default_horizon() -> f64 {
    1.0
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            kind: None,
            output_dir: default_output_dir(),
            domain: DomainConfig::default(),
            discretization: Discretization::default(),
            rho: default_rho(),
            t0: default_t0(),
            horizon: default_horizon(),
            snapshot_times: Vec::new(),
            phi: None,
            psi: None,
            f: None,
            g: None,
            thresholds: Thresholds::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| format!("config parse error: {e}"))
    }

    /// Structural validation with field paths.
    pub fn validate(&self) -> Result<(), String> {
        let dim = self.domain.lengths.len();
        if dim == 0 || dim > 2 {
            return Err(format!("domain.lengths: dimension must be 1 or 2, got {dim}"));
        }
        if self.domain.lengths.iter().any(|l| !(*l > 0.0)) {
            return Err("domain.lengths: all lengths must be positive".into());
        }
        if !(self.rho > 0.0 && self.rho <= 1.0) {
            return Err(format!("rho: {} not in (0, 1]", self.rho));
        }
        if !(self.horizon > 0.0) {
            return Err(format!("horizon: {} must be positive", self.horizon));
        }
        if !(self.t0 > 0.0 && self.t0 <= self.horizon) {
            return Err(format!(
                "t0: {} must lie in (0, horizon = {}]",
                self.t0, self.horizon
            ));
        }
        if self.discretization.modes.len() != dim {
            return Err(format!(
                "discretization.modes: expected {dim} per-axis counts, got {}",
                self.discretization.modes.len()
            ));
        }
        if self.discretization.grid.len() != dim {
            return Err(format!(
                "discretization.grid: expected {dim} per-axis counts, got {}",
                self.discretization.grid.len()
            ));
        }
        for (m, g) in self
            .discretization
            .modes
            .iter()
            .zip(&self.discretization.grid)
        {
            if *m == 0 || *g == 0 {
                return Err("discretization: modes and grid must be >= 1".into());
            }
            if m > g {
                return Err(format!(
                    "discretization: {m} modes exceed {g} grid nodes (aliasing)"
                ));
            }
        }
        for t in &self.snapshot_times {
            if !(*t >= 0.0 && *t <= self.horizon) {
                return Err(format!("snapshot_times: {t} outside [0, horizon]"));
            }
        }
        if !(self.thresholds.null_mode_rel > 0.0) || !(self.thresholds.solvability_abs > 0.0) {
            return Err("thresholds: must be positive".into());
        }
        Ok(())
    }
}
