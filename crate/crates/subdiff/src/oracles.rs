//! Independent verification machinery: L1 discretization of the Caputo
//! derivative, finite-difference Laplacian, adaptive brute-force quadrature
//! for the Duhamel integral, pointwise residual checks of the governing
//! equation, and the canonical sign-changing scenario builder.
//!
//! Nothing here participates in the solvers; these routines exist so that
//! the spectral pipeline can be cross-checked through entirely different
//! discretizations (they share only the Mittag-Leffler evaluator).

use crate::basis::{BoxDomain, GridFunction, SpectralCoeffs};
use crate::forward::ForwardSolution;
use crate::kernel::TimeProfile;
use crate::special::{self, MlParams};
use crate::{Error, Result};

/// L1 product-integration scheme for the Caputo derivative of order
/// rho in (0, 1) on a uniform time grid with step `dt`:
///
///   D^rho u(t_n) ~= dt^-rho / Gamma(2-rho)
///                   * sum_{j=0}^{n-1} (u_{j+1} - u_j) ((n-j)^(1-rho) - (n-j-1)^(1-rho)).
///
/// First-order accurate for C^1 histories, order 2-rho for C^2. rho = 1
/// delegates to central differences. The value at index 0 is reported as 0.
pub fn caputo_l1(samples: &[f64], rho: f64, dt: f64) -> Result<Vec<f64>> {
    if samples.len() < 3 {
        return Err(Error::Precondition("need >= 3 samples".into()));
    }
    if !(dt > 0.0) {
        return Err(Error::Precondition(format!("dt = {dt} must be positive")));
    }
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::Precondition(format!("rho = {rho} not in (0, 1]")));
    }
    let n = samples.len();
    let mut out = vec![0.0; n];
    if rho == 1.0 {
        for i in 1..n - 1 {
            out[i] = (samples[i + 1] - samples[i - 1]) / (2.0 * dt);
        }
        // second-order one-sided stencils at the ends
        out[0] = (-3.0 * samples[0] + 4.0 * samples[1] - samples[2]) / (2.0 * dt);
        out[n - 1] = (3.0 * samples[n - 1] - 4.0 * samples[n - 2] + samples[n - 3]) / (2.0 * dt);
        return Ok(out);
    }
    let scale = dt.powf(-rho) / special::gamma(2.0 - rho)?;
    // weights w_m = (m+1)^(1-rho) - m^(1-rho)
    let mut w = Vec::with_capacity(n);
    for m in 0..n {
        w.push(((m + 1) as f64).powf(1.0 - rho) - (m as f64).powf(1.0 - rho));
    }
    for i in 1..n {
        let mut s = 0.0;
        for j in 0..i {
            s += (samples[j + 1] - samples[j]) * w[i - j - 1];
        }
        out[i] = scale * s;
    }
    Ok(out)
}

/// Second-order central-difference Laplacian with the implicit zero boundary.
pub fn laplacian_fd(h: &GridFunction) -> Result<GridFunction> {
    if h.nodes().iter().any(|&n| n < 3) {
        return Err(Error::Precondition(
            "finite-difference Laplacian needs >= 3 interior nodes per axis".into(),
        ));
    }
    let mut out = GridFunction::zeros(h.domain().clone(), h.nodes())?;
    match h.nodes() {
        [n] => {
            let n = *n;
            let dx = h.domain().lengths()[0] / (n + 1) as f64;
            let inv = 1.0 / (dx * dx);
            let v = h.values();
            for i in 0..n {
                let left = if i == 0 { 0.0 } else { v[i - 1] };
                let right = if i == n - 1 { 0.0 } else { v[i + 1] };
                out.values_mut()[i] = (left - 2.0 * v[i] + right) * inv;
            }
        }
        [n1, n2] => {
            let (n1, n2) = (*n1, *n2);
            let dx = h.domain().lengths()[0] / (n1 + 1) as f64;
            let dy = h.domain().lengths()[1] / (n2 + 1) as f64;
            let (ix, iy) = (1.0 / (dx * dx), 1.0 / (dy * dy));
            let v = h.values();
            for i in 0..n1 {
                for j in 0..n2 {
                    let c = v[i * n2 + j];
                    let xm = if i == 0 { 0.0 } else { v[(i - 1) * n2 + j] };
                    let xp = if i == n1 - 1 { 0.0 } else { v[(i + 1) * n2 + j] };
                    let ym = if j == 0 { 0.0 } else { v[i * n2 + j - 1] };
                    let yp = if j == n2 - 1 { 0.0 } else { v[i * n2 + j + 1] };
                    out.values_mut()[i * n2 + j] =
                        (xm - 2.0 * c + xp) * ix + (ym - 2.0 * c + yp) * iy;
                }
            }
        }
        _ => unreachable!(),
    }
    Ok(out)
}

/// Residual statistics of D_t^rho u - Lap u - f g over sampled interior
/// space-time nodes.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub max_residual: f64,
    /// root-mean-square residual over the sampled nodes
    pub l2_residual: f64,
    pub window: (f64, f64),
    pub time_steps: usize,
    pub space_nodes: Vec<usize>,
    pub sampled_space_points: usize,
    pub sampled_times: usize,
}

/// Knobs for the residual check.
#[derive(Debug, Clone)]
pub struct ResidualOptions {
    /// uniform time steps on [0, window.1] feeding the L1 history
    pub time_steps: usize,
    /// full grid nodes per axis for the difference stencil
    pub space_nodes: Vec<usize>,
    /// sampled interior points per axis where the residual is evaluated
    pub sample_points: usize,
    /// sampled times inside the window
    pub sample_times: usize,
}

impl ResidualOptions {
    pub fn for_dim(dim: usize) -> Self {
        match dim {
            1 => Self {
                time_steps: 2048,
                space_nodes: vec![1023],
                sample_points: 17,
                sample_times: 33,
            },
            _ => Self {
                time_steps: 1024,
                space_nodes: vec![127, 127],
                sample_points: 5,
                sample_times: 17,
            },
        }
    }
}

/// Checks the governing equation pointwise: the Caputo derivative comes from
/// the L1 scheme on the mode histories, the Laplacian from the
/// finite-difference stencil on the synthesized grid. The window must stay
/// away from t = 0, where the time derivative of the series solution is
/// merely continuous and the L1 error degrades.
pub fn residual_check(
    u: &ForwardSolution,
    f: &SpectralCoeffs,
    g: &TimeProfile,
    window: (f64, f64),
    opts: &ResidualOptions,
) -> Result<ResidualReport> {
    let (t_lo, t_hi) = window;
    if !(t_lo > 0.0 && t_hi > t_lo) {
        return Err(Error::Precondition(format!(
            "window ({t_lo}, {t_hi}) must satisfy 0 < lo < hi"
        )));
    }
    if t_hi > u.horizon() * (1.0 + 1e-12) {
        return Err(Error::Precondition(
            "window end exceeds the solution horizon".into(),
        ));
    }
    let dim = u.domain().dim();
    if opts.space_nodes.len() != dim {
        return Err(Error::Precondition(
            "space_nodes dimension mismatch".into(),
        ));
    }
    let n_t = opts.time_steps;
    let dt = t_hi / n_t as f64;

    // mode trajectories on the uniform grid feeding the L1 history
    let n_modes = u.eigenvalues().len();
    let mut trajectories: Vec<Vec<f64>> = Vec::with_capacity(n_modes);
    for k in 0..n_modes {
        if u.phi().values()[k] == 0.0 && u.source().values()[k] == 0.0 {
            trajectories.push(Vec::new());
        } else {
            trajectories.push(u.mode_values_on_grid(k, n_t, t_hi)?);
        }
    }

    // sampled time indices inside the window
    let j_lo = ((t_lo / dt).ceil() as usize).max(1);
    let sample_times: Vec<usize> = if opts.sample_times >= n_t - j_lo {
        (j_lo..=n_t).collect()
    } else {
        (0..opts.sample_times)
            .map(|i| j_lo + i * (n_t - j_lo) / (opts.sample_times - 1).max(1))
            .collect()
    };

    // sampled interior points: evenly spread multi-indices on the full grid
    let probe_axis = |n: usize| -> Vec<usize> {
        let m = opts.sample_points.min(n);
        (0..m).map(|i| (i + 1) * n / (m + 1)).collect()
    };
    let probes: Vec<Vec<usize>> = match dim {
        1 => probe_axis(opts.space_nodes[0])
            .into_iter()
            .map(|i| vec![i])
            .collect(),
        _ => {
            let a = probe_axis(opts.space_nodes[0]);
            let b = probe_axis(opts.space_nodes[1]);
            a.iter()
                .flat_map(|&i| b.iter().map(move |&j| vec![i, j]))
                .collect()
        }
    };

    // eigenfunction values at each probe and its stencil neighbors
    let grid_coord = |axis: usize, i: usize| -> f64 {
        u.domain().lengths()[axis] * (i + 1) as f64 / (opts.space_nodes[axis] + 1) as f64
    };
    let order = u.phi().order().to_vec();
    let point_of = |idx: &[usize]| -> Vec<f64> {
        idx.iter()
            .enumerate()
            .map(|(a, &i)| grid_coord(a, i))
            .collect()
    };
    let eigenfn_row = |p: &[f64]| -> Result<Vec<f64>> {
        order
            .iter()
            .map(|k| u.domain().eigenfunction_at(k, p))
            .collect()
    };

    let mut max_residual: f64 = 0.0;
    let mut sum_sq = 0.0;
    let mut count = 0usize;
    for idx in &probes {
        let center = point_of(idx);
        let v_center = eigenfn_row(&center)?;
        // stencil neighbor eigenfunction rows per axis (zero row = boundary)
        let mut neighbors: Vec<(Vec<f64>, Vec<f64>, f64)> = Vec::new(); // (minus, plus, 1/dx^2)
        for a in 0..dim {
            let n = opts.space_nodes[a];
            let dx = u.domain().lengths()[a] / (n + 1) as f64;
            let minus = if idx[a] == 0 {
                vec![0.0; order.len()]
            } else {
                let mut q = idx.clone();
                q[a] -= 1;
                eigenfn_row(&point_of(&q))?
            };
            let plus = if idx[a] == n - 1 {
                vec![0.0; order.len()]
            } else {
                let mut q = idx.clone();
                q[a] += 1;
                eigenfn_row(&point_of(&q))?
            };
            neighbors.push((minus, plus, 1.0 / (dx * dx)));
        }
        // u history at the probe
        let mut history = vec![0.0; n_t + 1];
        for (k, traj) in trajectories.iter().enumerate() {
            if traj.is_empty() {
                continue;
            }
            let w = v_center[k];
            for (h, tv) in history.iter_mut().zip(traj) {
                *h += w * tv;
            }
        }
        let drho = caputo_l1(&history, u.rho(), dt)?;
        // f at the probe
        let f_val: f64 = f
            .values()
            .iter()
            .zip(&v_center)
            .map(|(c, v)| c * v)
            .sum();
        for &j in &sample_times {
            let t = j as f64 * dt;
            // finite-difference Laplacian at the probe from neighbor values
            let mut lap = 0.0;
            for (minus, plus, inv) in &neighbors {
                let mut um = 0.0;
                let mut up = 0.0;
                let mut uc = 0.0;
                for (k, traj) in trajectories.iter().enumerate() {
                    if traj.is_empty() {
                        continue;
                    }
                    let tv = traj[j];
                    um += minus[k] * tv;
                    up += plus[k] * tv;
                    uc += v_center[k] * tv;
                }
                lap += (um - 2.0 * uc + up) * inv;
            }
            let r = drho[j] - lap - f_val * g.eval(t)?;
            max_residual = max_residual.max(r.abs());
            sum_sq += r * r;
            count += 1;
        }
    }
    Ok(ResidualReport {
        max_residual,
        l2_residual: (sum_sq / count.max(1) as f64).sqrt(),
        window,
        time_steps: n_t,
        space_nodes: opts.space_nodes.clone(),
        sampled_space_points: probes.len(),
        sampled_times: sample_times.len(),
    })
}

/// Adaptive Gauss-Kronrod quadrature of the Duhamel integral
///
///   int_0^t eta^(rho-1) E_{rho,rho}(-lambda eta^rho) g(t - eta) d eta
///
/// with recursive bisection; panels grade geometrically into the weakly
/// singular left endpoint until the local tolerance is met. Independent of
/// the kernel module's product integration (shares only the Mittag-Leffler
/// evaluator).
pub fn brute_duhamel(
    g: &dyn Fn(f64) -> f64,
    rho: f64,
    lambda: f64,
    t: f64,
    tol: f64,
) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!("tol = {tol} must be positive")));
    }
    if !(rho > 0.0 && rho <= 1.0) || !(lambda > 0.0) || !(t > 0.0) {
        return Err(Error::Domain(
            "brute_duhamel needs rho in (0,1], lambda > 0, t > 0".into(),
        ));
    }
    let params = MlParams::new(rho, rho)?;
    let integrand = |eta: f64| -> Result<f64> {
        if eta <= 0.0 {
            return Ok(0.0); // never actually sampled at 0 by the GK nodes
        }
        let w = eta.powf(rho - 1.0) * special::ml(params, -lambda * eta.powf(rho))?;
        Ok(w * g(t - eta))
    };
    let mut total = 0.0;
    // explicit work stack; local tolerance proportional to panel length,
    // floored at the rounding noise of the panel's absolute integral
    let mut stack = vec![(0.0f64, t, 0u32)];
    let mut evaluations = 0usize;
    while let Some((a, b, depth)) = stack.pop() {
        let (coarse, fine, abs_fine) = gauss_kronrod(&integrand, a, b)?;
        evaluations += 15;
        if evaluations > 4_000_000 {
            return Err(Error::Accuracy(
                "brute_duhamel exceeded its evaluation budget".into(),
            ));
        }
        let local_tol = (tol * ((b - a) / t)).max(50.0 * f64::EPSILON * abs_fine);
        if (fine - coarse).abs() <= local_tol || b - a < 1e-290 {
            total += fine;
        } else if depth >= 2000 {
            return Err(Error::Accuracy(format!(
                "brute_duhamel failed to converge on [{a}, {b}]"
            )));
        } else {
            let mid = 0.5 * (a + b);
            stack.push((a, mid, depth + 1));
            stack.push((mid, b, depth + 1));
        }
    }
    Ok(total)
}

/// G7/K15 pair on [a, b]; returns (Gauss-7, Kronrod-15, Kronrod of |f|).
fn gauss_kronrod(f: &dyn Fn(f64) -> Result<f64>, a: f64, b: f64) -> Result<(f64, f64, f64)> {
    // Kronrod-15 abscissae (positive half) and weights; the embedded
    // Gauss-7 rule sits on the even-indexed abscissae.
    const XK: [f64; 8] = [
        0.0,
        0.207_784_955_007_898_3,
        0.405_845_151_377_397_2,
        0.586_087_235_467_691_1,
        0.741_531_185_599_394_4,
        0.864_864_423_359_769_1,
        0.949_107_912_342_758_5,
        0.991_455_371_120_812_6,
    ];
    const WK: [f64; 8] = [
        0.209_482_141_084_727_8,
        0.204_432_940_075_298_9,
        0.190_350_578_064_785_4,
        0.169_004_726_639_267_9,
        0.140_653_259_715_525_2,
        0.104_790_010_322_250_3,
        0.063_092_092_629_978_55,
        0.022_935_322_010_529_22,
    ];
    const WG: [f64; 4] = [
        0.417_959_183_673_469_4,
        0.381_830_050_505_118_9,
        0.279_705_391_489_276_7,
        0.129_484_966_168_869_7,
    ];
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kron = 0.0;
    let mut gauss = 0.0;
    let mut kron_abs = 0.0;
    for (i, (&x, &wk)) in XK.iter().zip(WK.iter()).enumerate() {
        let (fp, fm) = if i == 0 {
            let v = f(c)?;
            (v, 0.0)
        } else {
            (f(c + h * x)?, f(c - h * x)?)
        };
        let pair = if i == 0 { fp } else { fp + fm };
        kron += wk * pair;
        kron_abs += wk * (fp.abs() + fm.abs());
        if i % 2 == 0 {
            gauss += WG[i / 2] * pair;
        }
    }
    Ok((gauss * h, kron * h, kron_abs * h))
}

/// The canonical sign-changing scenario: T(t) = t^rho (1 - t^b) and
/// g = D_t^rho T + lambda T. The pair (u, f) = (T(t) v, v) solves the
/// homogeneous inverse problem with snapshot time t0 = 1 for the
/// eigenfunction v with eigenvalue `lambda`, alongside the trivial pair
/// (0, 0) -- two distinct solutions from identical data.
#[derive(Debug, Clone)]
pub struct SignChangingScenario {
    pub rho: f64,
    pub b: f64,
    pub lambda: f64,
    pub g: TimeProfile,
    pub g_at_zero: f64,
    pub g_at_one: f64,
}

impl SignChangingScenario {
    pub fn new(rho: f64, b: f64, lambda: f64) -> Result<Self> {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::Precondition(format!(
                "scenario needs rho in (0, 1), got {rho}"
            )));
        }
        let g = TimeProfile::sign_changing(rho, b, lambda)?;
        let g_at_zero = g.eval(0.0)?;
        let g_at_one = g.eval(1.0)?;
        if rho == 0.5 && b == 0.1 {
            debug_assert!(g_at_zero > 0.0 && g_at_one < 0.0);
        }
        Ok(Self {
            rho,
            b,
            lambda,
            g,
            g_at_zero,
            g_at_one,
        })
    }

    /// T(t) = t^rho (1 - t^b); vanishes at t = 1, so b(1) = 0 for the
    /// matched mode.
    pub fn time_factor(&self, t: f64) -> f64 {
        t.powf(self.rho) * (1.0 - t.powf(self.b))
    }

    /// The two solutions of the homogeneous inverse problem as source
    /// coefficient vectors: (0, 0) and (T(t) v_mode, v_mode).
    pub fn solution_sources(
        &self,
        domain: &BoxDomain,
        counts: &[usize],
        mode: &crate::basis::ModeIndex,
    ) -> Result<(SpectralCoeffs, SpectralCoeffs)> {
        let trivial = SpectralCoeffs::zeros(domain.clone(), counts)?;
        let mut nontrivial = SpectralCoeffs::zeros(domain.clone(), counts)?;
        nontrivial.set(mode, 1.0)?;
        Ok((trivial, nontrivial))
    }
}
