//! Radial solitary-wave profiles: shooting solvers for the 3D Soler-type
//! system (both sign families), the 1D Gross-Neveu model, and the
//! certification machinery (pointwise ODE residuals, exponential decay
//! fits, node counts) shared with the Klein-Gordon-Dirac solver.
//!
//! Solver structure, per profile:
//!
//! 1. sweep the shooting parameter and classify each trajectory by the
//!    sign of the dominant component at blowup; sign changes bracket
//!    localized solutions;
//! 2. bisect the bracket;
//! 3. polish with a two-sided fitting-point Newton iteration: integrate
//!    forward from the origin and backward from `r_max` (started on the
//!    linear decaying tail with amplitude `c`), and solve the 2x2 system
//!    matching (u, v) at a mid radius in the unknowns (parameter, c).
//!    Backward integration is stable for the decaying solution, so the
//!    assembled profile carries no exponential contamination in the tail;
//! 4. sample both passes onto a uniform grid, certify the pointwise ODE
//!    residual by high-order finite differences, fit the tail decay rate.

use crate::error::Error;
use crate::nonlin::NonlinearityModel;
use crate::ode::{self, RkOptions};
use crate::spline::CubicSpline;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    Dirac3dPlus,
    Dirac3dMinus,
    Dirac1d,
    Kgd3d,
}

impl ProfileKind {
    pub fn is_3d(self) -> bool {
        !matches!(self, ProfileKind::Dirac1d)
    }
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ProfileKind::Dirac3dPlus => "dirac3d_plus",
            ProfileKind::Dirac3dMinus => "dirac3d_minus",
            ProfileKind::Dirac1d => "dirac1d",
            ProfileKind::Kgd3d => "kgd3d",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for ProfileKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "dirac3d_plus" => Ok(ProfileKind::Dirac3dPlus),
            "dirac3d_minus" => Ok(ProfileKind::Dirac3dMinus),
            "dirac1d" => Ok(ProfileKind::Dirac1d),
            "kgd3d" => Ok(ProfileKind::Kgd3d),
            other => Err(Error::ProfileFormat(format!("unknown kind '{other}'"))),
        }
    }
}

/// Which of the two 3D sign families to solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilySign {
    Plus,
    Minus,
}

/// A solved radial profile.
///
/// `u` is the component multiplying the angular spinor: it vanishes
/// linearly at the origin and carries the 2u/r centrifugal term. `v` is
/// finite at the origin. This convention applies to both sign families
/// (for the minus family the angular component sits in the upper spinor
/// block, but the regular/singular roles of the radial functions are the
/// same).
#[derive(Debug, Clone)]
pub struct RadialProfile {
    pub kind: ProfileKind,
    pub omega: f64,
    pub mass: f64,
    pub model: NonlinearityModel,
    /// Yukawa coupling; nonzero only for kind = Kgd3d.
    pub eta: f64,
    /// Meson mass; nonzero only for kind = Kgd3d.
    pub meson_mass: f64,
    pub grid: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub chi: Option<Vec<f64>>,
    /// Fitted tail rate of log(|u|+|v|) over the outer third of the grid.
    pub decay: f64,
    /// RMS residual of that linear fit.
    pub decay_fit_residual: f64,
    /// Max pointwise ODE residual relative to the local solution scale.
    pub residual: f64,
    /// Zero crossings of u away from the origin.
    pub nodes: usize,
    splines: Arc<ProfileSplines>,
}

#[derive(Debug)]
struct ProfileSplines {
    u: CubicSpline,
    v: CubicSpline,
    chi: Option<CubicSpline>,
}

impl RadialProfile {
    /// Builds a profile from raw samples, recomputing splines, node count,
    /// decay fit and the certified ODE residual.
    pub fn from_samples(
        kind: ProfileKind,
        omega: f64,
        mass: f64,
        model: NonlinearityModel,
        eta: f64,
        meson_mass: f64,
        grid: Vec<f64>,
        u: Vec<f64>,
        v: Vec<f64>,
        chi: Option<Vec<f64>>,
    ) -> Result<Self, Error> {
        if grid.len() < 8 || grid.len() != u.len() || grid.len() != v.len() {
            return Err(Error::ProfileFormat(
                "grid/u/v must have equal length >= 8".into(),
            ));
        }
        if let Some(c) = &chi {
            if c.len() != grid.len() {
                return Err(Error::ProfileFormat("chi column length mismatch".into()));
            }
        }
        let splines = Arc::new(ProfileSplines {
            u: CubicSpline::new(grid.clone(), u.clone()),
            v: CubicSpline::new(grid.clone(), v.clone()),
            chi: chi
                .as_ref()
                .map(|c| CubicSpline::new(grid.clone(), c.clone())),
        });
        let mut profile = Self {
            kind,
            omega,
            mass,
            model,
            eta,
            meson_mass,
            grid,
            u,
            v,
            chi,
            decay: 0.0,
            decay_fit_residual: 0.0,
            residual: f64::INFINITY,
            nodes: 0,
            splines,
        };
        profile.nodes = profile.count_nodes();
        let (kappa, fit_res) = decay_rate(&profile)?;
        profile.decay = kappa;
        profile.decay_fit_residual = fit_res;
        profile.residual = profile.certify_residual();
        Ok(profile)
    }

    pub fn kappa(&self) -> f64 {
        (self.mass * self.mass - self.omega * self.omega).sqrt()
    }

    pub fn r_max(&self) -> f64 {
        *self.grid.last().unwrap()
    }

    pub fn peak_amplitude(&self) -> f64 {
        self.u
            .iter()
            .chain(self.v.iter())
            .map(|x| x.abs())
            .fold(0.0, f64::max)
    }

    /// u(r), extended beyond the grid by the linear decaying tail.
    pub fn eval_u(&self, r: f64) -> f64 {
        let rm = self.r_max();
        if r <= rm {
            self.splines.u.eval(r)
        } else {
            self.tail_factor(r) * self.u[self.u.len() - 1] * self.tail_u_shape(r, rm)
        }
    }

    pub fn eval_v(&self, r: f64) -> f64 {
        let rm = self.r_max();
        if r <= rm {
            self.splines.v.eval(r)
        } else {
            self.tail_factor(r) * self.v[self.v.len() - 1]
        }
    }

    pub fn eval_chi(&self, r: f64) -> f64 {
        match (&self.splines.chi, &self.chi) {
            (Some(s), Some(vals)) => {
                let rm = self.r_max();
                if r <= rm {
                    s.eval(r)
                } else {
                    let mu = if self.meson_mass > 0.0 {
                        self.meson_mass.min(2.0 * self.kappa())
                    } else {
                        0.0
                    };
                    let geo = if self.kind.is_3d() { rm / r } else { 1.0 };
                    vals[vals.len() - 1] * geo * (-mu * (r - rm)).exp()
                }
            }
            _ => 0.0,
        }
    }

    pub fn deriv_u(&self, r: f64) -> f64 {
        let rm = self.r_max();
        if r <= rm {
            self.splines.u.deriv(r)
        } else {
            // derivative of the extended tail by finite differences of the
            // (exponentially tiny) extension
            let h = 1e-5;
            (self.eval_u(r + h) - self.eval_u(r - h)) / (2.0 * h)
        }
    }

    pub fn deriv_v(&self, r: f64) -> f64 {
        let rm = self.r_max();
        if r <= rm {
            self.splines.v.deriv(r)
        } else {
            let h = 1e-5;
            (self.eval_v(r + h) - self.eval_v(r - h)) / (2.0 * h)
        }
    }

    pub fn deriv_chi(&self, r: f64) -> f64 {
        match &self.splines.chi {
            Some(s) if r <= self.r_max() => s.deriv(r),
            Some(_) => {
                let h = 1e-5;
                (self.eval_chi(r + h) - self.eval_chi(r - h)) / (2.0 * h)
            }
            None => 0.0,
        }
    }

    fn tail_factor(&self, r: f64) -> f64 {
        let rm = self.r_max();
        let kappa = self.kappa();
        let geo = if self.kind.is_3d() { rm / r } else { 1.0 };
        geo * (-kappa * (r - rm)).exp()
    }

    fn tail_u_shape(&self, r: f64, rm: f64) -> f64 {
        if self.kind.is_3d() {
            let kappa = self.kappa();
            (kappa + 1.0 / r) / (kappa + 1.0 / rm)
        } else {
            1.0
        }
    }

    /// The effective scalar potential entering the radial system:
    /// g(rho) plus the Yukawa shift for KGD profiles.
    fn effective_g(&self, rho: f64, r: f64) -> f64 {
        let mut g = self.model.g(rho);
        if self.eta != 0.0 {
            g += self.eta * self.eval_chi(r);
        }
        g
    }

    /// Right-hand side of the radial system at (r, u, v) for this profile's
    /// kind. Returns (u', v').
    pub fn system_rhs(&self, r: f64, u: f64, v: f64) -> (f64, f64) {
        let (m, w) = (self.mass, self.omega);
        match self.kind {
            ProfileKind::Dirac3dPlus | ProfileKind::Kgd3d => {
                let g = self.effective_g(v * v - u * u, r);
                (-2.0 * u / r + v * (g - (m - w)), u * (g - (m + w)))
            }
            ProfileKind::Dirac3dMinus => {
                let g = self.effective_g(u * u - v * v, r);
                (-2.0 * u / r + v * (g - (m + w)), u * (g - (m - w)))
            }
            ProfileKind::Dirac1d => {
                let g = self.effective_g(v * v - u * u, r);
                (v * (g - (m - w)), u * (g - (m + w)))
            }
        }
    }

    /// Max pointwise ODE residual over interior grid points, relative to
    /// the local solution scale. Derivatives come from 6th-order central
    /// (4th-order one-sided near the edges) finite differences of the
    /// stored samples, independent of how the samples were produced.
    pub fn certify_residual(&self) -> f64 {
        let n = self.grid.len();
        let mut worst = 0.0f64;
        for i in 1..n - 1 {
            let r = self.grid[i];
            let du = fd_derivative(&self.grid, &self.u, i);
            let dv = fd_derivative(&self.grid, &self.v, i);
            let (fu, fv) = self.system_rhs(r, self.u[i], self.v[i]);
            let scale = (self.mass + self.omega) * (self.u[i].abs() + self.v[i].abs())
                + fu.abs()
                + fv.abs()
                + 1e-300;
            let res = ((du - fu).abs()).max((dv - fv).abs()) / scale;
            worst = worst.max(res);
        }
        worst
    }

    fn count_nodes(&self) -> usize {
        let floor = 1e-9
            * self
                .u
                .iter()
                .map(|x| x.abs())
                .fold(0.0, f64::max)
                .max(1e-300);
        let mut nodes = 0;
        let mut last: Option<f64> = None;
        for (&r, &ui) in self.grid.iter().zip(self.u.iter()) {
            if r == 0.0 || ui.abs() < floor {
                continue;
            }
            if let Some(prev) = last {
                if prev * ui < 0.0 {
                    nodes += 1;
                }
            }
            last = Some(ui);
        }
        nodes
    }
}

/// 6th-order central finite-difference first derivative where the stencil
/// fits, 4th-order one-sided stencils near the boundary. Uniform grid.
fn fd_derivative(x: &[f64], y: &[f64], i: usize) -> f64 {
    let n = x.len();
    let h = x[1] - x[0];
    if i >= 3 && i + 3 < n {
        (-y[i - 3] + 9.0 * y[i - 2] - 45.0 * y[i - 1] + 45.0 * y[i + 1] - 9.0 * y[i + 2]
            + y[i + 3])
            / (60.0 * h)
    } else if i >= 2 && i + 2 < n {
        (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) / (12.0 * h)
    } else if i + 3 < n && i >= 1 {
        // 4th-order stencil on {i-1 .. i+3}
        (-3.0 * y[i - 1] - 10.0 * y[i] + 18.0 * y[i + 1] - 6.0 * y[i + 2] + y[i + 3])
            / (12.0 * h)
    } else if i >= 3 && i + 1 < n {
        (3.0 * y[i + 1] + 10.0 * y[i] - 18.0 * y[i - 1] + 6.0 * y[i - 2] - y[i - 3]) / (12.0 * h)
    } else if i == 0 {
        (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) / (12.0 * h)
    } else {
        (25.0 * y[n - 1] - 48.0 * y[n - 2] + 36.0 * y[n - 3] - 16.0 * y[n - 4] + 3.0 * y[n - 5])
            / (12.0 * h)
    }
}

/// Least-squares slope of log(|u|+|v|) over the outer third of the grid.
/// Returns (kappa, rms fit residual).
pub fn decay_rate(profile: &RadialProfile) -> Result<(f64, f64), Error> {
    let n = profile.grid.len();
    let start = n - n / 3;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in start..n {
        let s = profile.u[i].abs() + profile.v[i].abs();
        if s < 1e-280 {
            return Err(Error::TailUnderflow);
        }
        xs.push(profile.grid[i]);
        ys.push(s.ln());
    }
    if xs.len() < 4 {
        return Err(Error::TailUnderflow);
    }
    let nn = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / nn;
    let my = ys.iter().sum::<f64>() / nn;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys.iter()) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut ss = 0.0;
    for (x, y) in xs.iter().zip(ys.iter()) {
        let e = y - (intercept + slope * x);
        ss += e * e;
    }
    Ok((-slope, (ss / nn).sqrt()))
}

/// Tuning knobs for the shooting solvers.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Truncation radius; default 14 / sqrt(m^2 - omega^2).
    pub r_max: Option<f64>,
    /// Number of grid intervals (grid has `intervals + 1` points).
    pub intervals: usize,
    /// Relative tolerance of the final integration passes.
    pub rtol: f64,
    /// Sweep range for the shooting parameter, as multiples of the natural
    /// amplitude scale, and the number of sweep points.
    pub sweep_lo: f64,
    pub sweep_hi: f64,
    pub sweep_points: usize,
    /// Residual the profile must certify to.
    pub residual_target: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            r_max: None,
            intervals: 8192,
            rtol: 1e-12,
            sweep_lo: 0.02,
            sweep_hi: 3.0,
            sweep_points: 120,
            residual_target: 1e-8,
        }
    }
}

impl SolveOptions {
    pub fn default_1d() -> Self {
        Self {
            residual_target: 1e-10,
            ..Self::default()
        }
    }
}

/// Generic shooting problem in the plane: forward trajectories from the
/// origin parametrized by `p`, linear decaying tail for the backward pass.
pub(crate) struct ShootingProblem<R, I, T>
where
    R: Fn(f64, f64, &[f64; 2]) -> [f64; 2],
    I: Fn(f64) -> (f64, [f64; 2]),
    T: Fn(f64) -> [f64; 2],
{
    /// rhs(p, r, [u, v]) -> [u', v'].
    pub rhs: R,
    /// initial(p) -> (r_start, [u, v]).
    pub initial: I,
    /// Unit-amplitude decaying tail at r.
    pub tail: T,
    /// Index of the dominant component at blowup (0 = u, 1 = v).
    pub classify_component: usize,
    pub r_mid: f64,
    pub r_max: f64,
    pub rtol: f64,
}

pub(crate) struct ShootingSolution {
    pub p: f64,
    pub tail_amplitude: f64,
    /// Matching defect at r_mid relative to the local amplitude.
    pub match_defect: f64,
}

const BLOWUP: f64 = 1e6;

impl<R, I, T> ShootingProblem<R, I, T>
where
    R: Fn(f64, f64, &[f64; 2]) -> [f64; 2],
    I: Fn(f64) -> (f64, [f64; 2]),
    T: Fn(f64) -> [f64; 2],
{
    fn classify_opts(&self) -> RkOptions {
        RkOptions {
            rtol: 1e-10,
            atol: 1e-250,
            ..Default::default()
        }
    }

    fn fine_opts(&self) -> RkOptions {
        RkOptions {
            rtol: self.rtol,
            atol: 1e-250,
            ..Default::default()
        }
    }

    /// Sign of the dominant component after escape (or at the far end).
    pub fn classify(&self, p: f64) -> f64 {
        let (r0, y0) = (self.initial)(p);
        let sol = ode::integrate_until(
            |r, y| (self.rhs)(p, r, y),
            r0,
            y0,
            self.r_max * 1.2,
            self.classify_opts(),
            |_, y| y[0].abs() + y[1].abs() > BLOWUP,
        );
        let c = sol.y[self.classify_component];
        if c == 0.0 {
            1.0
        } else {
            c.signum()
        }
    }

    /// Forward state at r_mid.
    fn forward_mid(&self, p: f64) -> [f64; 2] {
        let (r0, y0) = (self.initial)(p);
        let sol = ode::integrate_until(
            |r, y| (self.rhs)(p, r, y),
            r0,
            y0,
            self.r_mid,
            self.fine_opts(),
            |_, _| false,
        );
        sol.y
    }

    /// Backward state at r_mid starting from c * tail(r_max).
    fn backward_mid(&self, p: f64, c: f64) -> [f64; 2] {
        let t = (self.tail)(self.r_max);
        let y0 = [c * t[0], c * t[1]];
        let sol = ode::integrate_until(
            |r, y| (self.rhs)(p, r, y),
            self.r_max,
            y0,
            self.r_mid,
            self.fine_opts(),
            |_, _| false,
        );
        sol.y
    }

    /// Finds every sign-change bracket of the classifier over the sweep.
    pub fn sweep_brackets(&self, lo: f64, hi: f64, points: usize) -> Vec<(f64, f64)> {
        let mut brackets = Vec::new();
        let mut prev: Option<(f64, f64)> = None;
        for i in 0..points {
            let p = lo + (hi - lo) * i as f64 / (points - 1) as f64;
            let c = self.classify(p);
            if let Some((pp, cc)) = prev {
                if cc != c {
                    brackets.push((pp, p));
                }
            }
            prev = Some((p, c));
        }
        brackets
    }

    pub fn bisect(&self, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
        let c_lo = self.classify(lo);
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if self.classify(mid) == c_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Two-sided matching Newton on (p, c). Returns the polished solution.
    pub fn newton_polish(&self, p0: f64) -> Result<ShootingSolution, Error> {
        let fwd = self.forward_mid(p0);
        let tail_mid = (self.tail)(self.r_mid);
        // initial amplitude from matching the v component at r_mid
        let mut c = fwd[1] / tail_mid[1];
        let mut p = p0;
        if !c.is_finite() || c == 0.0 {
            return Err(Error::NoBracket { lo: p0, hi: p0 });
        }

        let debug = std::env::var_os("SOLWAVE_DEBUG_NEWTON").is_some();
        let mut best = (f64::INFINITY, p, c);
        for iter in 0..25 {
            let f = self.forward_mid(p);
            let b = self.backward_mid(p, c);
            let scale = f[0].abs() + f[1].abs() + 1e-300;
            let res = [b[0] - f[0], b[1] - f[1]];
            let defect = (res[0].abs() + res[1].abs()) / scale;
            if debug {
                eprintln!("newton iter {iter}: p={p:.16e} c={c:.16e} defect={defect:.3e}");
            }
            if defect < best.0 {
                best = (defect, p, c);
            }
            if defect < 1e-13 {
                return Ok(ShootingSolution {
                    p,
                    tail_amplitude: c,
                    match_defect: defect,
                });
            }
            // finite-difference Jacobian; the rhs may depend on p, so the
            // backward pass is differentiated in p as well
            let dp = 1e-8 * p.abs().max(0.1);
            let dc = 1e-8 * c.abs();
            let fp = self.forward_mid(p + dp);
            let bp = self.backward_mid(p + dp, c);
            let bc = self.backward_mid(p, c + dc);
            // residual = backward - forward
            let j00 = ((bp[0] - b[0]) - (fp[0] - f[0])) / dp;
            let j10 = ((bp[1] - b[1]) - (fp[1] - f[1])) / dp;
            let j01 = (bc[0] - b[0]) / dc;
            let j11 = (bc[1] - b[1]) / dc;
            let det = j00 * j11 - j01 * j10;
            if det.abs() < 1e-300 {
                break;
            }
            let step_p = (res[0] * j11 - res[1] * j01) / det;
            let step_c = (j00 * res[1] - j10 * res[0]) / det;
            p -= step_p;
            c -= step_c;
            if !(p.is_finite() && c.is_finite()) {
                break;
            }
        }
        let (defect, p, c) = best;
        Ok(ShootingSolution {
            p,
            tail_amplitude: c,
            match_defect: defect,
        })
    }

    /// Samples the converged solution onto `grid` (assumed increasing,
    /// covering [0, r_max]). The forward and backward passes overlap in a
    /// window around r_mid and are blended with a quintic smoothstep, so
    /// the assembled samples carry no jump at the handoff (the blend's
    /// residual is the pass discrepancy divided by the window width, far
    /// below the integration tolerance budget).
    pub fn sample(&self, sol: &ShootingSolution, grid: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let h = grid[1] - grid[0];
        let w_half = (40.0 * h).max(0.05 * self.r_mid).min(0.5 * self.r_mid);
        let lo = self.r_mid - w_half;
        let hi = self.r_mid + w_half;
        let split_lo = grid.partition_point(|&r| r < lo);
        let split_hi = grid.partition_point(|&r| r <= hi);
        let (r0, y0) = (self.initial)(sol.p);

        let fwd_targets: Vec<f64> = grid[..split_hi]
            .iter()
            .copied()
            .filter(|&r| r >= r0)
            .collect();
        let fwd = ode::integrate_sampled(
            |r, y| (self.rhs)(sol.p, r, y),
            r0,
            y0,
            &fwd_targets,
            self.fine_opts(),
        );

        let mut bwd_targets: Vec<f64> = grid[split_lo..].to_vec();
        bwd_targets.reverse();
        let t = (self.tail)(self.r_max);
        let y_end = [sol.tail_amplitude * t[0], sol.tail_amplitude * t[1]];
        let mut bwd = ode::integrate_sampled(
            |r, y| (self.rhs)(sol.p, r, y),
            self.r_max,
            y_end,
            &bwd_targets,
            self.fine_opts(),
        );
        bwd.reverse();

        let n_skipped = grid[..split_hi].iter().filter(|&&r| r < r0).count();
        let mut u = Vec::with_capacity(grid.len());
        let mut v = Vec::with_capacity(grid.len());
        for (i, &r) in grid.iter().enumerate() {
            if i < split_lo {
                if r < r0 {
                    u.push(if r == 0.0 { 0.0 } else { y0[0] * r / r0.max(1e-300) });
                    v.push(y0[1]);
                } else {
                    let y = fwd[i - n_skipped];
                    u.push(y[0]);
                    v.push(y[1]);
                }
            } else if i < split_hi {
                let yf = fwd[i - n_skipped];
                let yb = bwd[i - split_lo];
                let t = ((r - lo) / (hi - lo)).clamp(0.0, 1.0);
                let w = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
                u.push((1.0 - w) * yf[0] + w * yb[0]);
                v.push((1.0 - w) * yf[1] + w * yb[1]);
            } else {
                let y = bwd[i - split_lo];
                u.push(y[0]);
                v.push(y[1]);
            }
        }
        debug_assert_eq!(u.len(), grid.len());
        (u, v)
    }
}

/// Uniform grid 0 = r_0 < ... < r_N = r_max.
pub fn uniform_grid(r_max: f64, intervals: usize) -> Vec<f64> {
    (0..=intervals)
        .map(|i| r_max * i as f64 / intervals as f64)
        .collect()
}

fn check_omega(omega: f64, mass: f64) -> Result<(), Error> {
    if !(omega > 0.0 && omega < mass) {
        return Err(Error::FrequencyOutOfRange { omega, mass });
    }
    Ok(())
}

/// Natural amplitude scale of the shooting parameter: g(v0^2) ~ m.
fn amplitude_scale(mass: f64, model: &NonlinearityModel) -> f64 {
    if model.is_zero() {
        1.0
    } else {
        (mass / model.lambda).powf(1.0 / (2.0 * model.exponent))
    }
}

/// Solves the 3D Soler-type radial system for the requested sign family
/// and node count.
pub fn solve_soler_radial(
    omega: f64,
    mass: f64,
    model: NonlinearityModel,
    sign: FamilySign,
    nodes: usize,
    opts: &SolveOptions,
) -> Result<RadialProfile, Error> {
    check_omega(omega, mass)?;
    if model.is_zero() {
        return Err(Error::InvalidParameter(
            "pure Dirac solve needs a nonzero nonlinearity (the linear system has no localized states)"
                .into(),
        ));
    }
    let kappa = (mass * mass - omega * omega).sqrt();
    let r_max = opts.r_max.unwrap_or(14.0 / kappa);
    let r_mid = (5.0 / kappa).min(0.6 * r_max);
    let kind = match sign {
        FamilySign::Plus => ProfileKind::Dirac3dPlus,
        FamilySign::Minus => ProfileKind::Dirac3dMinus,
    };

    let (ms, mp) = match sign {
        FamilySign::Plus => (mass - omega, mass + omega),
        FamilySign::Minus => (mass + omega, mass - omega),
    };
    let rho_sign = match sign {
        FamilySign::Plus => 1.0,
        FamilySign::Minus => -1.0,
    };
    let r_start = 1e-6;
    let problem = ShootingProblem {
        rhs: |_p: f64, r: f64, y: &[f64; 2]| {
            let (u, v) = (y[0], y[1]);
            let g = model.g(rho_sign * (v * v - u * u));
            [-2.0 * u / r + v * (g - ms), u * (g - mp)]
        },
        initial: |p: f64| {
            let g0 = model.g(rho_sign * p * p);
            let c = p * (g0 - ms) / 3.0;
            (r_start, [c * r_start, p])
        },
        tail: |r: f64| {
            let e = (-kappa * r).exp() / r;
            [(kappa + 1.0 / r) / mp * e, e]
        },
        classify_component: match sign {
            FamilySign::Plus => 1,
            FamilySign::Minus => 0,
        },
        r_mid,
        r_max,
        rtol: opts.rtol,
    };

    let scale = amplitude_scale(mass, &model);
    let lo = opts.sweep_lo * scale;
    let hi = opts.sweep_hi * scale;
    let brackets = problem.sweep_brackets(lo, hi, opts.sweep_points);
    if brackets.is_empty() {
        return Err(Error::NoBracket { lo, hi });
    }

    let grid = uniform_grid(r_max, opts.intervals);
    let mut last_err = None;
    for (blo, bhi) in brackets {
        let p0 = problem.bisect(blo, bhi, 1e-12);
        let sol = match problem.newton_polish(p0) {
            Ok(s) => s,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        let (u, v) = problem.sample(&sol, &grid);
        let profile = RadialProfile::from_samples(
            kind,
            omega,
            mass,
            model,
            0.0,
            0.0,
            grid.clone(),
            u,
            v,
            None,
        )?;
        if profile.nodes == nodes {
            if profile.residual > opts.residual_target {
                return Err(Error::ToleranceFailure {
                    achieved: profile.residual,
                    requested: opts.residual_target,
                });
            }
            return Ok(profile);
        }
    }
    Err(last_err.unwrap_or(Error::NoBracket { lo, hi }))
}

/// Solves the 1D Gross-Neveu stationary system on the half line
/// (v even, u odd). The initial amplitude is pinned by the conserved
/// quantity H = G(rho) - m rho + omega (u^2 + v^2) of the planar system,
/// which must vanish on localized orbits; shooting then only polishes the
/// two-sided match.
pub fn solve_gross_neveu_1d(
    omega: f64,
    mass: f64,
    model: NonlinearityModel,
    opts: &SolveOptions,
) -> Result<RadialProfile, Error> {
    check_omega(omega, mass)?;
    if model.is_zero() {
        return Err(Error::InvalidParameter(
            "1D solve needs a nonzero nonlinearity".into(),
        ));
    }
    let kappa = (mass * mass - omega * omega).sqrt();
    let x_max = opts.r_max.unwrap_or(14.0 / kappa);
    let x_mid = (5.0 / kappa).min(0.6 * x_max);

    // G(v0^2) = (m - omega) v0^2 for the power family
    let p_exp = model.exponent;
    let v0 = (((p_exp + 1.0) * (mass - omega)) / model.lambda).powf(1.0 / (2.0 * p_exp));

    let problem = ShootingProblem {
        rhs: |_p: f64, _x: f64, y: &[f64; 2]| {
            let (u, v) = (y[0], y[1]);
            let g = model.g(v * v - u * u);
            [v * (g - (mass - omega)), u * (g - (mass + omega))]
        },
        initial: |p: f64| (0.0, [0.0, p]),
        tail: |x: f64| {
            let e = (-kappa * x).exp();
            [kappa / (mass + omega) * e, e]
        },
        classify_component: 1,
        r_mid: x_mid,
        r_max: x_max,
        rtol: opts.rtol,
    };

    let sol = problem.newton_polish(v0)?;
    let grid = uniform_grid(x_max, opts.intervals);
    let (u, v) = problem.sample(&sol, &grid);
    let profile = RadialProfile::from_samples(
        ProfileKind::Dirac1d,
        omega,
        mass,
        model,
        0.0,
        0.0,
        grid,
        u,
        v,
        None,
    )?;
    if profile.residual > opts.residual_target {
        return Err(Error::ToleranceFailure {
            achieved: profile.residual,
            requested: opts.residual_target,
        });
    }
    Ok(profile)
}

// ---------------------------------------------------------------------
// columnar text serialization
// ---------------------------------------------------------------------

impl RadialProfile {
    /// Columnar text format: header lines with `# key=value` metadata, then
    /// rows `r u v [chi]` at 17 significant digits (exact decimal
    /// round-trip for f64).
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!(
            "# kind={} omega={:.16e} mass={:.16e} lambda={:.16e} exponent={:.16e} model={}\n",
            self.kind,
            self.omega,
            self.mass,
            self.model.lambda,
            self.model.exponent,
            match self.model.kind {
                crate::nonlin::NonlinearityKind::SolerLinear => "soler_linear",
                crate::nonlin::NonlinearityKind::Power => "power",
                crate::nonlin::NonlinearityKind::Zero => "zero",
            }
        ));
        s.push_str(&format!(
            "# eta={:.16e} meson_mass={:.16e} nodes={} decay={:.16e} residual={:.16e}\n",
            self.eta, self.meson_mass, self.nodes, self.decay, self.residual
        ));
        let cols = if self.chi.is_some() { "r u v chi" } else { "r u v" };
        s.push_str(&format!("# columns: {cols}\n"));
        for i in 0..self.grid.len() {
            match &self.chi {
                Some(chi) => s.push_str(&format!(
                    "{:.16e} {:.16e} {:.16e} {:.16e}\n",
                    self.grid[i], self.u[i], self.v[i], chi[i]
                )),
                None => s.push_str(&format!(
                    "{:.16e} {:.16e} {:.16e}\n",
                    self.grid[i], self.u[i], self.v[i]
                )),
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, Error> {
        let mut meta = std::collections::BTreeMap::new();
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                for tok in rest.split_whitespace() {
                    if let Some((k, v)) = tok.split_once('=') {
                        meta.insert(k.to_string(), v.to_string());
                    }
                }
                continue;
            }
            let cols: Result<Vec<f64>, _> =
                line.split_whitespace().map(|t| t.parse::<f64>()).collect();
            let cols =
                cols.map_err(|e| Error::ProfileFormat(format!("bad number in row: {e}")))?;
            if cols.len() != 3 && cols.len() != 4 {
                return Err(Error::ProfileFormat(format!(
                    "expected 3 or 4 columns, got {}",
                    cols.len()
                )));
            }
            rows.push(cols);
        }
        if rows.is_empty() {
            return Err(Error::ProfileFormat("no data rows".into()));
        }
        let get = |k: &str| -> Result<f64, Error> {
            meta.get(k)
                .ok_or_else(|| Error::ProfileFormat(format!("missing header key '{k}'")))?
                .parse::<f64>()
                .map_err(|e| Error::ProfileFormat(format!("bad header value for '{k}': {e}")))
        };
        let kind: ProfileKind = meta
            .get("kind")
            .ok_or_else(|| Error::ProfileFormat("missing header key 'kind'".into()))?
            .parse()?;
        let model = match meta.get("model").map(|s| s.as_str()) {
            Some("soler_linear") | None => NonlinearityModel::soler(get("lambda")?),
            Some("power") => NonlinearityModel {
                kind: crate::nonlin::NonlinearityKind::Power,
                lambda: get("lambda")?,
                exponent: get("exponent")?,
            },
            Some("zero") => NonlinearityModel::zero(),
            Some(other) => {
                return Err(Error::ProfileFormat(format!("unknown model '{other}'")));
            }
        };
        let ncols = rows[0].len();
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::ProfileFormat("inconsistent column counts".into()));
        }
        let grid: Vec<f64> = rows.iter().map(|r| r[0]).collect();
        let u: Vec<f64> = rows.iter().map(|r| r[1]).collect();
        let v: Vec<f64> = rows.iter().map(|r| r[2]).collect();
        let chi = if ncols == 4 {
            Some(rows.iter().map(|r| r[3]).collect())
        } else {
            None
        };
        RadialProfile::from_samples(
            kind,
            get("omega")?,
            get("mass")?,
            model,
            get("eta").unwrap_or(0.0),
            get("meson_mass").unwrap_or(0.0),
            grid,
            u,
            v,
            chi,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlin::NonlinearityModel;

    /// Exact Gross-Neveu solitary wave for g(s) = lambda s, in the
    /// cancellation-free form
    ///   v = kappa sqrt(2(m+omega)/lambda) cosh(kappa x) / D,
    ///   u = kappa sqrt(2(m-omega)/lambda) sinh(kappa x) / D,
    ///   D = omega cosh(2 kappa x) + m.
    fn gn_exact(lambda: f64, m: f64, omega: f64, x: f64) -> (f64, f64) {
        let kappa = (m * m - omega * omega).sqrt();
        let d = omega * (2.0 * kappa * x).cosh() + m;
        let v = kappa * (2.0 * (m + omega) / lambda).sqrt() * (kappa * x).cosh() / d;
        let u = kappa * (2.0 * (m - omega) / lambda).sqrt() * (kappa * x).sinh() / d;
        (u, v)
    }

    #[test]
    fn gross_neveu_matches_exact_solution() {
        let model = NonlinearityModel::soler(1.0);
        let prof = solve_gross_neveu_1d(0.5, 1.0, model, &SolveOptions::default_1d()).unwrap();
        assert!(prof.residual <= 1e-10, "residual {}", prof.residual);
        let mut worst = 0.0f64;
        for i in (0..prof.grid.len()).step_by(97) {
            let x = prof.grid[i];
            let (ue, ve) = gn_exact(1.0, 1.0, 0.5, x);
            worst = worst.max((prof.u[i] - ue).abs()).max((prof.v[i] - ve).abs());
        }
        assert!(worst < 1e-9, "max deviation from exact solution {worst}");
        // v(0) = sqrt(2 (m - omega) / lambda)
        assert!((prof.v[0] - 1.0f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn gross_neveu_first_integral_constant() {
        // H = G(rho) - m rho + omega (u^2 + v^2) vanishes along the orbit
        let model = NonlinearityModel::soler(1.0);
        let prof = solve_gross_neveu_1d(0.5, 1.0, model, &SolveOptions::default_1d()).unwrap();
        let mut worst = 0.0f64;
        for i in (0..prof.grid.len() / 2).step_by(53) {
            let (u, v) = (prof.u[i], prof.v[i]);
            let rho = v * v - u * u;
            let h = model.g_integral(rho) - prof.mass * rho + prof.omega * (u * u + v * v);
            worst = worst.max(h.abs());
        }
        assert!(worst <= 1e-8, "first integral drift {worst}");
    }

    #[test]
    fn gross_neveu_tail_rate() {
        let model = NonlinearityModel::soler(1.0);
        let prof = solve_gross_neveu_1d(0.99, 1.0, model, &SolveOptions::default_1d()).unwrap();
        let kappa = (1.0f64 - 0.99f64 * 0.99f64).sqrt();
        assert!(
            (prof.decay - kappa).abs() <= 0.05 * kappa,
            "decay {} vs kappa {kappa}",
            prof.decay
        );
    }

    #[test]
    fn soler_ground_state_certifies() {
        let model = NonlinearityModel::soler(1.0);
        let prof = solve_soler_radial(
            0.9,
            1.0,
            model,
            FamilySign::Plus,
            0,
            &SolveOptions::default(),
        )
        .unwrap();
        assert!(prof.residual <= 1e-8, "residual {}", prof.residual);
        assert_eq!(prof.nodes, 0);
        assert!(prof.u[0] == 0.0);
        // value located by the bracket sweep (frozen from an independent
        // scipy shooting run of the same system)
        assert!(
            (prof.v[0] - 1.0647717).abs() < 1e-4,
            "v(0) = {}",
            prof.v[0]
        );
        // tail rate within 10% of sqrt(m^2 - omega^2)
        let kappa = (1.0f64 - 0.81f64).sqrt();
        assert!((prof.decay - kappa).abs() <= 0.1 * kappa, "decay {}", prof.decay);
        assert!(prof.decay >= 0.39 && prof.decay <= 0.48);
        // ground state: v - u keeps one sign
        let mut sign_changes = 0;
        for i in 1..prof.grid.len() {
            let a = prof.v[i - 1] - prof.u[i - 1];
            let b = prof.v[i] - prof.u[i];
            if a * b < 0.0 {
                sign_changes += 1;
            }
        }
        assert_eq!(sign_changes, 0);
    }

    #[test]
    fn soler_small_amplitude_limit() {
        // v(0) decreases strictly along omega -> m
        let model = NonlinearityModel::soler(1.0);
        let mut last = f64::INFINITY;
        for omega in [0.90, 0.95, 0.99] {
            let prof = solve_soler_radial(
                omega,
                1.0,
                model,
                FamilySign::Plus,
                0,
                &SolveOptions::default(),
            )
            .unwrap();
            assert!(
                prof.v[0] < last,
                "v(0) not decreasing at omega={omega}: {} !< {last}",
                prof.v[0]
            );
            last = prof.v[0];
        }
    }

    #[test]
    fn minus_family_solves_and_certifies() {
        let model = NonlinearityModel::soler(1.0);
        let prof = solve_soler_radial(
            0.9,
            1.0,
            model,
            FamilySign::Minus,
            0,
            &SolveOptions::default(),
        )
        .unwrap();
        assert!(prof.residual <= 1e-8, "residual {}", prof.residual);
        assert_eq!(prof.nodes, 0);
        // frozen from the independent scipy shooting run
        assert!(
            (prof.v[0] - 0.43904723).abs() < 1e-4,
            "v(0) = {}",
            prof.v[0]
        );
    }

    #[test]
    fn plus_and_minus_satisfy_their_signed_equations() {
        // cross-check: a plus profile does NOT satisfy the minus equations
        let model = NonlinearityModel::soler(1.0);
        let plus = solve_soler_radial(
            0.9,
            1.0,
            model,
            FamilySign::Plus,
            0,
            &SolveOptions::default(),
        )
        .unwrap();
        let mut wrong = plus.clone();
        wrong.kind = ProfileKind::Dirac3dMinus;
        let res_wrong = wrong.certify_residual();
        assert!(
            res_wrong > 1e-2,
            "plus profile should violate the minus system, residual {res_wrong}"
        );
    }

    #[test]
    fn rk4_reintegration_agrees() {
        // independent fixed-step classical RK4 oracle at two resolutions
        let model = NonlinearityModel::soler(1.0);
        let prof = solve_soler_radial(
            0.9,
            1.0,
            model,
            FamilySign::Plus,
            0,
            &SolveOptions::default(),
        )
        .unwrap();
        let rhs = |r: f64, y: [f64; 2]| -> [f64; 2] {
            let (du, dv) = prof.system_rhs(r, y[0], y[1]);
            [du, dv]
        };
        let rk4 = |h: f64, r_end: f64| -> Vec<[f64; 2]> {
            let r0 = 1e-6;
            let mut y = [prof.u[1] * r0 / prof.grid[1], prof.v[0]];
            // series start consistent with the solver
            let g0 = prof.model.g(prof.v[0] * prof.v[0]);
            y[0] = prof.v[0] * (g0 - (prof.mass - prof.omega)) / 3.0 * r0;
            let mut r = r0;
            let mut out = vec![y];
            while r < r_end {
                let k1 = rhs(r, y);
                let k2 = rhs(r + 0.5 * h, add(y, scale(k1, 0.5 * h)));
                let k3 = rhs(r + 0.5 * h, add(y, scale(k2, 0.5 * h)));
                let k4 = rhs(r + h, add(y, scale(k3, h)));
                for i in 0..2 {
                    y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                }
                r += h;
                out.push(y);
            }
            out
        };
        fn add(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
            [a[0] + b[0], a[1] + b[1]]
        }
        fn scale(a: [f64; 2], s: f64) -> [f64; 2] {
            [a[0] * s, a[1] * s]
        }
        let r_end = 5.0 / prof.kappa();
        let h = 1e-3;
        let coarse = rk4(h, r_end);
        let fine = rk4(0.5 * h, r_end);
        // sup-norm agreement between the two RK4 resolutions and the profile
        let mut worst_profile = 0.0f64;
        for (i, y) in coarse.iter().enumerate() {
            let r = 1e-6 + i as f64 * h;
            worst_profile = worst_profile
                .max((prof.eval_u(r) - y[0]).abs())
                .max((prof.eval_v(r) - y[1]).abs());
        }
        let mut worst_pair = 0.0f64;
        for (i, y) in coarse.iter().enumerate() {
            let yf = fine[2 * i];
            worst_pair = worst_pair.max((y[0] - yf[0]).abs()).max((y[1] - yf[1]).abs());
        }
        assert!(worst_pair < 1e-7, "rk4 h vs h/2 differ by {worst_pair}");
        assert!(
            worst_profile < 1e-7,
            "profile vs rk4 differ by {worst_profile}"
        );
    }

    #[test]
    fn decay_rate_exact_exponential() {
        // synthetic profile u = 0, v = e^{-2r}
        let grid = uniform_grid(10.0, 512);
        let u = vec![0.0; grid.len()];
        let v: Vec<f64> = grid.iter().map(|&r| (-2.0 * r).exp()).collect();
        let prof = RadialProfile::from_samples(
            ProfileKind::Dirac1d,
            0.5,
            1.0,
            NonlinearityModel::soler(1.0),
            0.0,
            0.0,
            grid,
            u,
            v,
            None,
        )
        .unwrap();
        let (kappa, fit) = decay_rate(&prof).unwrap();
        assert!((kappa - 2.0).abs() < 1e-6, "kappa {kappa}");
        assert!(fit < 1e-9);
    }

    #[test]
    fn decay_rate_underflow_detected() {
        let grid = uniform_grid(10.0, 128);
        let u = vec![0.0; grid.len()];
        let v: Vec<f64> = grid.iter().map(|&r| (-80.0 * r).exp()).collect();
        let err = RadialProfile::from_samples(
            ProfileKind::Dirac1d,
            0.5,
            1.0,
            NonlinearityModel::soler(1.0),
            0.0,
            0.0,
            grid,
            u,
            v,
            None,
        );
        assert!(matches!(err, Err(Error::TailUnderflow)));
    }

    #[test]
    fn omega_window_enforced() {
        let model = NonlinearityModel::soler(1.0);
        assert!(matches!(
            solve_soler_radial(1.2, 1.0, model, FamilySign::Plus, 0, &SolveOptions::default()),
            Err(Error::FrequencyOutOfRange { .. })
        ));
        assert!(solve_gross_neveu_1d(-0.1, 1.0, model, &SolveOptions::default()).is_err());
    }

    #[test]
    fn text_round_trip_is_exact() {
        let model = NonlinearityModel::soler(1.0);
        let mut opts = SolveOptions::default();
        opts.intervals = 2048; // keep the test quick
        let prof =
            solve_soler_radial(0.9, 1.0, model, FamilySign::Plus, 0, &opts).unwrap();
        let text = prof.to_text();
        let back = RadialProfile::from_text(&text).unwrap();
        assert_eq!(back.kind, prof.kind);
        assert_eq!(back.omega, prof.omega);
        assert_eq!(back.grid, prof.grid);
        assert_eq!(back.u, prof.u);
        assert_eq!(back.v, prof.v);
    }

    #[test]
    fn grid_refinement_changes_nothing_material() {
        // doubling the grid changes the stored solution by < 1e-9 pointwise
        let model = NonlinearityModel::soler(1.0);
        let mut opts = SolveOptions::default();
        opts.intervals = 2048;
        let a = solve_soler_radial(0.9, 1.0, model, FamilySign::Plus, 0, &opts).unwrap();
        opts.intervals = 4096;
        let b = solve_soler_radial(0.9, 1.0, model, FamilySign::Plus, 0, &opts).unwrap();
        let mut worst = 0.0f64;
        for i in 0..a.grid.len() {
            worst = worst.max((a.u[i] - b.eval_u(a.grid[i])).abs());
            worst = worst.max((a.v[i] - b.eval_v(a.grid[i])).abs());
        }
        assert!(worst < 1e-9, "grid doubling moved the solution by {worst}");
    }
}
