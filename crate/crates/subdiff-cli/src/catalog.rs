//! Resolution of configured sources and time profiles into library objects.
//!
//! The inline function catalog keeps file-free quick runs possible:
//! - `sine-mode`: product of sines sin(k_a pi x_a / L_a) (unnormalized)
//! - `poly-bubble`: product of x_a (L_a - x_a)
//! - `gaussian-bump`: Gaussian exp(-|x - center|^2 / (2 width^2)) shifted by
//!   its largest boundary value and clipped at zero, so it vanishes on the
//!   boundary

use std::fs::File;
use std::io::BufReader;

use subdiff::basis::{self, BoxDomain, GridFunction, ModeIndex, SpectralCoeffs};
use subdiff::kernel::TimeProfile;

use crate::config::{ProfileConfig, SourceConfig};

pub fn resolve_source(
    cfg: &SourceConfig,
    domain: &BoxDomain,
    counts: &[usize],
    grid: &[usize],
) -> Result<SpectralCoeffs, String> {
    match cfg {
        SourceConfig::Zero => {
            SpectralCoeffs::zeros(domain.clone(), counts).map_err(|e| e.to_string())
        }
        SourceConfig::Expr {
            name,
            mode,
            amplitude,
            center,
            width,
        } => {
            let f = catalog_fn(name, domain, mode, *amplitude, center, width)?;
            let sampled = GridFunction::sample(domain.clone(), grid, |x| f(x))
                .map_err(|e| e.to_string())?;
            basis::analyze(&sampled, counts).map_err(|e| e.to_string())
        }
        SourceConfig::Csv { path } => {
            let file = File::open(path).map_err(|e| format!("{path}: {e}"))?;
            let mut reader = BufReader::new(file);
            let sampled = GridFunction::read_csv(&mut reader).map_err(|e| e.to_string())?;
            if sampled.domain().dim() != domain.dim() {
                return Err(format!(
                    "{path}: grid dimension {} does not match run domain dimension {}",
                    sampled.domain().dim(),
                    domain.dim()
                ));
            }
            for (a, (got, want)) in sampled
                .domain()
                .lengths()
                .iter()
                .zip(domain.lengths())
                .enumerate()
            {
                if (got - want).abs() > 1e-9 * want.max(1.0) {
                    return Err(format!(
                        "{path}: axis {a} length {got} does not match run domain {want}"
                    ));
                }
            }
            basis::analyze(&sampled, counts).map_err(|e| e.to_string())
        }
        SourceConfig::Coeffs { entries } => {
            let mut c =
                SpectralCoeffs::zeros(domain.clone(), counts).map_err(|e| e.to_string())?;
            for entry in entries {
                let idx = ModeIndex::new(&entry.mode).map_err(|e| e.to_string())?;
                c.set(&idx, entry.value)
                    .map_err(|e| format!("coeffs entry {idx}: {e}"))?;
            }
            Ok(c)
        }
    }
}

type PointFn = Box<dyn Fn(&[f64]) -> f64>;

fn catalog_fn(
    name: &str,
    domain: &BoxDomain,
    mode: &Option<Vec<usize>>,
    amplitude: f64,
    center: &Option<Vec<f64>>,
    width: &Option<f64>,
) -> Result<PointFn, String> {
    let lengths = domain.lengths().to_vec();
    match name {
        "sine-mode" => {
            let k = mode.clone().unwrap_or_else(|| vec![1; lengths.len()]);
            if k.len() != lengths.len() || k.iter().any(|v| *v == 0) {
                return Err("expr sine-mode: mode must have one positive entry per axis".into());
            }
            Ok(Box::new(move |x: &[f64]| {
                amplitude
                    * x.iter()
                        .zip(&lengths)
                        .zip(&k)
                        .map(|((&xa, &la), &ka)| {
                            (ka as f64 * std::f64::consts::PI * xa / la).sin()
                        })
                        .product::<f64>()
            }))
        }
        "poly-bubble" => Ok(Box::new(move |x: &[f64]| {
            amplitude
                * x.iter()
                    .zip(&lengths)
                    .map(|(&xa, &la)| xa * (la - xa))
                    .product::<f64>()
        })),
        "gaussian-bump" => {
            let c = center
                .clone()
                .unwrap_or_else(|| lengths.iter().map(|l| l / 2.0).collect());
            if c.len() != lengths.len() {
                return Err("expr gaussian-bump: center must have one entry per axis".into());
            }
            let w = width.unwrap_or(0.25);
            if !(w > 0.0) {
                return Err("expr gaussian-bump: width must be positive".into());
            }
            // largest boundary value of the Gaussian: attained on the face
            // nearest the center with the other coordinates at the center
            let mut boundary_max: f64 = 0.0;
            for (a, &la) in lengths.iter().enumerate() {
                for face in [0.0, la] {
                    let d = face - c[a];
                    boundary_max = boundary_max.max((-d * d / (2.0 * w * w)).exp());
                }
            }
            Ok(Box::new(move |x: &[f64]| {
                let q: f64 = x
                    .iter()
                    .zip(&c)
                    .map(|(&xa, &ca)| (xa - ca) * (xa - ca))
                    .sum();
                amplitude * ((-q / (2.0 * w * w)).exp() - boundary_max).max(0.0)
            }))
        }
        other => Err(format!(
            "expr: unknown catalog function {other:?} (expected sine-mode, poly-bubble, \
             gaussian-bump)"
        )),
    }
}

pub fn resolve_profile(
    cfg: &ProfileConfig,
    rho: f64,
    domain: &BoxDomain,
) -> Result<TimeProfile, String> {
    match cfg {
        ProfileConfig::Constant { value } => {
            TimeProfile::constant(*value).map_err(|e| e.to_string())
        }
        ProfileConfig::Example1 { b, lambda, mode } => {
            let lam = match (lambda, mode) {
                (Some(l), _) => *l,
                (None, Some(m)) => {
                    let idx = ModeIndex::new(m).map_err(|e| e.to_string())?;
                    domain.eigenvalue(&idx)
                }
                (None, None) => domain.eigenvalue(&ModeIndex::new(&vec![1; domain.dim()]).unwrap()),
            };
            TimeProfile::sign_changing(rho, *b, lam).map_err(|e| e.to_string())
        }
        ProfileConfig::Polynomial { coeffs } => {
            TimeProfile::polynomial(coeffs.clone()).map_err(|e| e.to_string())
        }
        ProfileConfig::Samples { times, values } => {
            TimeProfile::samples(times.clone(), values.clone()).map_err(|e| e.to_string())
        }
    }
}
