//! Series solution of the forward problem
//!
//!   D_t^rho u - Lap u = f(x) g(t),  u|_boundary = 0,  u(x, 0) = phi(x).
//!
//! Each retained mode evolves independently:
//!
//!   u_k(t) = phi_k E_rho(-lambda_k t^rho) + f_k b_k(t),
//!
//! where b_k is the Duhamel coefficient from the kernel module. The solution
//! object is lazy: spectral values are computed per requested time and cached
//! keyed by the time's bit pattern; the cache is safe under concurrent
//! insertion.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;

use crate::basis::{self, BoxDomain, GridFunction, SpectralCoeffs};
use crate::kernel::{self, TimeProfile};
use crate::special;
use crate::{Error, Result};

/// Forward problem data. `phi` (initial) and `f` (source factor) must share
/// the domain and mode counts.
#[derive(Debug, Clone)]
pub struct ForwardProblem {
    pub domain: BoxDomain,
    pub rho: f64,
    pub phi: SpectralCoeffs,
    pub f: SpectralCoeffs,
    pub g: TimeProfile,
    pub horizon: f64,
    pub quadrature_cells: usize,
}

impl ForwardProblem {
    pub fn new(
        rho: f64,
        phi: SpectralCoeffs,
        f: SpectralCoeffs,
        g: TimeProfile,
        horizon: f64,
    ) -> Result<Self> {
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(Error::Precondition(format!("rho = {rho} not in (0, 1]")));
        }
        if !(horizon > 0.0) {
            return Err(Error::Precondition(format!(
                "horizon = {horizon} must be positive"
            )));
        }
        if phi.domain() != f.domain() || phi.counts() != f.counts() {
            return Err(Error::Precondition(
                "phi and f must share domain and mode counts".into(),
            ));
        }
        if let Some(cov) = g.coverage() {
            if horizon > cov * (1.0 + 1e-12) {
                return Err(Error::Coverage {
                    covered: cov,
                    needed: horizon,
                });
            }
        }
        let domain = phi.domain().clone();
        Ok(Self {
            domain,
            rho,
            phi,
            f,
            g,
            horizon,
            quadrature_cells: kernel::DEFAULT_QUADRATURE_CELLS,
        })
    }

    /// Builds the problem from grid samples of phi and f.
    pub fn from_grids(
        rho: f64,
        phi: &GridFunction,
        f: &GridFunction,
        counts: &[usize],
        g: TimeProfile,
        horizon: f64,
    ) -> Result<Self> {
        let phi_c = basis::analyze(phi, counts)?;
        let f_c = basis::analyze(f, counts)?;
        Self::new(rho, phi_c, f_c, g, horizon)
    }

    pub fn with_quadrature_cells(mut self, cells: usize) -> Self {
        self.quadrature_cells = cells.max(16);
        self
    }
}

/// Lazy spectral trajectory of the forward solution.
#[derive(Debug)]
pub struct ForwardSolution {
    domain: BoxDomain,
    rho: f64,
    phi: SpectralCoeffs,
    f: SpectralCoeffs,
    g: TimeProfile,
    horizon: f64,
    quadrature_cells: usize,
    eigenvalues: Vec<f64>,
    cache: RwLock<HashMap<u64, Arc<Vec<f64>>>>,
}

/// Homogeneous part only: u(., t) = sum phi_k E_rho(-lambda_k t^rho) v_k.
pub fn solve_homogeneous(
    rho: f64,
    phi: &SpectralCoeffs,
    t: f64,
    nodes: &[usize],
) -> Result<GridFunction> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::Precondition(format!("rho = {rho} not in (0, 1]")));
    }
    if t < 0.0 {
        return Err(Error::Precondition(format!("t = {t} must be >= 0")));
    }
    let mut coeffs = phi.clone();
    if t > 0.0 {
        let tp = t.powf(rho);
        let eigs = phi.eigenvalues();
        for (v, lam) in coeffs.values_mut().iter_mut().zip(eigs) {
            *v *= special::ml_one(rho, -lam * tp)?;
        }
    }
    basis::synthesize(&coeffs, nodes)
}

/// Zero-initial-data part only: u(., t) = sum f_k b_k(t) v_k.
pub fn solve_inhomogeneous(
    rho: f64,
    f: &SpectralCoeffs,
    g: &TimeProfile,
    t: f64,
    nodes: &[usize],
) -> Result<GridFunction> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::Precondition(format!("rho = {rho} not in (0, 1]")));
    }
    if t < 0.0 {
        return Err(Error::Precondition(format!("t = {t} must be >= 0")));
    }
    let mut coeffs = f.clone();
    if t == 0.0 {
        for v in coeffs.values_mut() {
            *v = 0.0;
        }
    } else {
        let eigs = f.eigenvalues();
        let scaled: Result<Vec<f64>> = eigs
            .par_iter()
            .zip(coeffs.values().to_vec())
            .map(|(&lam, fv)| {
                if fv == 0.0 {
                    Ok(0.0)
                } else {
                    Ok(fv * kernel::duhamel(g, rho, lam, t)?.value)
                }
            })
            .collect();
        coeffs.values_mut().copy_from_slice(&scaled?);
    }
    basis::synthesize(&coeffs, nodes)
}

/// Full forward solve: superposition of the homogeneous and zero-initial
/// parts as a lazy trajectory.
pub fn solve(problem: ForwardProblem) -> Result<ForwardSolution> {
    let eigenvalues = problem.phi.eigenvalues();
    Ok(ForwardSolution {
        domain: problem.domain,
        rho: problem.rho,
        phi: problem.phi,
        f: problem.f,
        g: problem.g,
        horizon: problem.horizon,
        quadrature_cells: problem.quadrature_cells,
        eigenvalues,
        cache: RwLock::new(HashMap::new()),
    })
}

impl ForwardSolution {
    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn phi(&self) -> &SpectralCoeffs {
        &self.phi
    }

    pub fn source(&self) -> &SpectralCoeffs {
        &self.f
    }

    pub fn profile(&self) -> &TimeProfile {
        &self.g
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Truncation-tail indicator lambda_K^-1 (|phi_K| + |f_K|) for the last
    /// retained mode; the series terms decay at this rate.
    pub fn tail_indicator(&self) -> f64 {
        match self.eigenvalues.last() {
            Some(&lam) => {
                let k = self.eigenvalues.len() - 1;
                (self.phi.values()[k].abs() + self.f.values()[k].abs()) / lam
            }
            None => 0.0,
        }
    }

    /// Spectral coefficients u_k(t), cached per time.
    pub fn spectral_at(&self, t: f64) -> Result<Arc<Vec<f64>>> {
        if !(0.0..=self.horizon * (1.0 + 1e-12)).contains(&t) {
            return Err(Error::Precondition(format!(
                "t = {t} outside [0, {}]",
                self.horizon
            )));
        }
        let key = t.to_bits();
        if let Some(hit) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let values = if t == 0.0 {
            self.phi.values().to_vec()
        } else {
            let tp = t.powf(self.rho);
            let per_mode: Result<Vec<f64>> = self
                .eigenvalues
                .par_iter()
                .enumerate()
                .map(|(k, &lam)| {
                    let mut u = 0.0;
                    let pv = self.phi.values()[k];
                    if pv != 0.0 {
                        u += pv * special::ml_one(self.rho, -lam * tp)?;
                    }
                    let fv = self.f.values()[k];
                    if fv != 0.0 {
                        u += fv
                            * kernel::duhamel_with_cells(
                                &self.g,
                                self.rho,
                                lam,
                                t,
                                self.quadrature_cells,
                            )?
                            .value;
                    }
                    Ok(u)
                })
                .collect();
            per_mode?
        };
        let arc = Arc::new(values);
        self.cache
            .write()
            .expect("cache lock")
            .insert(key, arc.clone());
        Ok(arc)
    }

    /// Grid snapshot at time t.
    pub fn at(&self, t: f64, nodes: &[usize]) -> Result<GridFunction> {
        let spectral = self.spectral_at(t)?;
        let mut coeffs = self.phi.clone();
        coeffs.values_mut().copy_from_slice(&spectral);
        basis::synthesize(&coeffs, nodes)
    }

    /// One mode's trajectory on the uniform grid t_j = j t_end / steps,
    /// j = 0..=steps, using the grid-convolution Duhamel path.
    pub fn mode_values_on_grid(
        &self,
        position: usize,
        steps: usize,
        t_end: f64,
    ) -> Result<Vec<f64>> {
        if position >= self.eigenvalues.len() {
            return Err(Error::Precondition(format!(
                "mode position {position} out of range"
            )));
        }
        let lam = self.eigenvalues[position];
        let pv = self.phi.values()[position];
        let fv = self.f.values()[position];
        let mut out = vec![0.0; steps + 1];
        out[0] = pv;
        let b = if fv != 0.0 {
            Some(kernel::duhamel_on_grid(&self.g, self.rho, lam, steps, t_end)?)
        } else {
            None
        };
        for (j, slot) in out.iter_mut().enumerate().skip(1) {
            let t = j as f64 * t_end / steps as f64;
            let mut u = 0.0;
            if pv != 0.0 {
                u += pv * special::ml_one(self.rho, -lam * t.powf(self.rho))?;
            }
            if let Some(bv) = &b {
                u += fv * bv[j].value;
            }
            *slot = u;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::ModeIndex;
    use std::f64::consts::PI;

    fn unit_mode(domain: &BoxDomain, counts: &[usize], k: usize, amp: f64) -> SpectralCoeffs {
        let mut c = SpectralCoeffs::zeros(domain.clone(), counts).unwrap();
        c.set(&ModeIndex::d1(k), amp).unwrap();
        c
    }

    #[test]
    fn homogeneous_heat_mode_decays_exponentially() {
        let d = BoxDomain::interval(PI).unwrap();
        let phi = unit_mode(&d, &[16], 1, 1.0);
        for t in [0.1, 0.5, 1.0] {
            let u = solve_homogeneous(1.0, &phi, t, &[63]).unwrap();
            let want = GridFunction::sample(d.clone(), &[63], |x| {
                (-t as f64).exp() * (2.0 / PI).sqrt() * x[0].sin()
            })
            .unwrap();
            for (a, b) in u.values().iter().zip(want.values()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn homogeneous_subdiffusive_mode_uses_ml_factor() {
        let d = BoxDomain::interval(PI).unwrap();
        let phi = unit_mode(&d, &[16], 1, 1.0);
        let u = solve_homogeneous(0.5, &phi, 1.0, &[63]).unwrap();
        let factor = special::ml_one(0.5, -1.0).unwrap();
        let v1 = GridFunction::sample(d, &[63], |x| (2.0 / PI).sqrt() * x[0].sin()).unwrap();
        for (a, b) in u.values().iter().zip(v1.values()) {
            assert!((a - factor * b).abs() < 1e-12);
        }
    }

    #[test]
    fn initial_condition_is_reproduced() {
        let d = BoxDomain::interval(PI).unwrap();
        let grid = GridFunction::sample(d.clone(), &[127], |x| x[0] * (PI - x[0])).unwrap();
        let phi = basis::analyze(&grid, &[32]).unwrap();
        let u0 = solve_homogeneous(0.7, &phi, 0.0, &[127]).unwrap();
        let resampled = basis::synthesize(&phi, &[127]).unwrap();
        for (a, b) in u0.values().iter().zip(resampled.values()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn inhomogeneous_zero_source_is_zero() {
        let d = BoxDomain::interval(PI).unwrap();
        let f = SpectralCoeffs::zeros(d, &[8]).unwrap();
        let g = TimeProfile::constant(1.0).unwrap();
        let u = solve_inhomogeneous(0.5, &f, &g, 0.7, &[31]).unwrap();
        assert!(u.max_abs() == 0.0);
    }

    #[test]
    fn inhomogeneous_heat_mode_two() {
        // f = v_2, g = 1, rho = 1, t = 1: u = (1 - e^-4)/4 v_2
        let d = BoxDomain::interval(PI).unwrap();
        let f = unit_mode(&d, &[8], 2, 1.0);
        let g = TimeProfile::constant(1.0).unwrap();
        let u = solve_inhomogeneous(1.0, &f, &g, 1.0, &[63]).unwrap();
        let c = (1.0 - (-4.0f64).exp()) / 4.0;
        let v2 = basis::synthesize(&unit_mode(&d, &[8], 2, 1.0), &[63]).unwrap();
        for (a, b) in u.values().iter().zip(v2.values()) {
            assert!((a - c * b).abs() < 1e-12);
        }
    }

    #[test]
    fn stationary_balance_heat() {
        // phi = v_1, f = v_1, g = 1, rho = 1: u_1(t) = e^-t + (1 - e^-t) = 1
        let d = BoxDomain::interval(PI).unwrap();
        let phi = unit_mode(&d, &[8], 1, 1.0);
        let f = unit_mode(&d, &[8], 1, 1.0);
        let g = TimeProfile::constant(1.0).unwrap();
        let problem = ForwardProblem::new(1.0, phi, f, g, 2.0).unwrap();
        let sol = solve(problem).unwrap();
        for t in [0.0, 0.3, 1.0, 2.0] {
            let s = sol.spectral_at(t).unwrap();
            assert!((s[0] - 1.0).abs() < 1e-12, "t={t}: {}", s[0]);
            for v in &s[1..] {
                assert!(v.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn zero_initial_data_reduces_to_inhomogeneous_part() {
        let d = BoxDomain::interval(PI).unwrap();
        let phi = SpectralCoeffs::zeros(d.clone(), &[8]).unwrap();
        let f = unit_mode(&d, &[8], 3, 2.0);
        let g = TimeProfile::constant(1.0).unwrap();
        let problem = ForwardProblem::new(0.6, phi, f.clone(), g.clone(), 1.0).unwrap();
        let sol = solve(problem).unwrap();
        let a = sol.at(0.8, &[63]).unwrap();
        let b = solve_inhomogeneous(0.6, &f, &g, 0.8, &[63]).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn mode_decoupling() {
        let d = BoxDomain::interval(PI).unwrap();
        let phi = unit_mode(&d, &[8], 4, 1.0);
        let f = unit_mode(&d, &[8], 4, 0.5);
        let g = TimeProfile::constant(1.0).unwrap();
        let problem = ForwardProblem::new(0.5, phi, f, g, 1.0).unwrap();
        let sol = solve(problem).unwrap();
        let s = sol.spectral_at(0.5).unwrap();
        for (i, v) in s.iter().enumerate() {
            let is_mode4 = sol.phi().order()[i] == ModeIndex::d1(4);
            if is_mode4 {
                assert!(v.abs() > 0.05);
            } else {
                assert!(v.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn boundary_values_vanish() {
        // sine synthesis vanishes at the boundary by construction; check the
        // extreme interior nodes stay small for a smooth solution
        let d = BoxDomain::interval(PI).unwrap();
        let grid = GridFunction::sample(d.clone(), &[255], |x| x[0] * (PI - x[0])).unwrap();
        let phi = basis::analyze(&grid, &[64]).unwrap();
        let u = solve_homogeneous(0.5, &phi, 0.5, &[255]).unwrap();
        assert!(u.values()[0].abs() < 0.05);
        assert!(u.values()[254].abs() < 0.05);
    }

    #[test]
    fn snapshot_cache_returns_identical_values() {
        let d = BoxDomain::interval(PI).unwrap();
        let phi = unit_mode(&d, &[8], 1, 1.0);
        let f = unit_mode(&d, &[8], 2, 1.0);
        let g = TimeProfile::constant(1.0).unwrap();
        let problem = ForwardProblem::new(0.5, phi, f, g, 1.0).unwrap();
        let sol = solve(problem).unwrap();
        let a = sol.spectral_at(0.5).unwrap();
        let b = sol.spectral_at(0.5).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn rejects_times_outside_horizon() {
        let d = BoxDomain::interval(PI).unwrap();
        let phi = unit_mode(&d, &[4], 1, 1.0);
        let f = SpectralCoeffs::zeros(d, &[4]).unwrap();
        let g = TimeProfile::constant(1.0).unwrap();
        let sol = solve(ForwardProblem::new(0.5, phi, f, g, 1.0).unwrap()).unwrap();
        assert!(sol.spectral_at(1.5).is_err());
        assert!(sol.spectral_at(-0.1).is_err());
    }
}
