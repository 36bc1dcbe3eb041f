//! The Klein-Gordon-Dirac system: self-consistent standing waves, their
//! functionals and virial identities, and the boosted energy-momentum
//! relations.
//!
//! The stationary system couples the radial Dirac pair (u, v) to the
//! Yukawa field chi through the shifted potential g(rho) + eta chi(r):
//!
//! ```text
//!   u' + 2u/r = v [ g(v^2-u^2) - (m - omega) + eta chi ],
//!   v'        = u [ g(v^2-u^2) - (m + omega) + eta chi ],
//!   (-Delta + M^2) chi = eta (v^2 - u^2).
//! ```
//!
//! The solver is a damped fixed point on chi. With a nonzero
//! self-interaction the inner problem is the usual amplitude shooting.
//! With G = 0 the frozen-chi subproblem is linear in (u, v), so the
//! initial amplitude cannot select a solution; the inner solve instead
//! tunes a potential scale t so that omega is the lowest eigenvalue of
//! the potential eta t chi, and the field amplitude A is recovered from
//! the self-consistency requirement A^2 G_M[v^2-u^2] = t chi (an L^2
//! projection). At the fixed point t = 1 and the assembled state solves
//! the coupled system.

use crate::ansatz::{algebra, build_family, SpinorField};
use crate::boostlab::moving_wave;
use crate::clifford::{boost_frame, boost_kappa};
use crate::error::Error;
use crate::functionals::{radial_functionals, QuadratureSpec};
use crate::nonlin::NonlinearityModel;
use crate::profiles::{uniform_grid, ProfileKind, RadialProfile, ShootingProblem, SolveOptions};
use crate::quadrature::{gauss_legendre, orthonormal_frame, BoxRule};
use crate::report::FunctionalReport;
use crate::spline::CubicSpline;
use nalgebra::Vector3;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

use super::yukawa::{operator_residual, yukawa_radial};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A converged standing wave of the KGD system.
#[derive(Debug, Clone)]
pub struct KgdState {
    pub profile: Arc<RadialProfile>,
    pub omega: f64,
    pub mass: f64,
    pub meson_mass: f64,
    pub eta: f64,
    pub model: NonlinearityModel,
    pub scf_iters: usize,
    /// Final sup-norm change of chi between iterates.
    pub scf_residual: f64,
    pub scf_history: Vec<f64>,
    /// Scaled operator residual of (-Delta + M^2) chi = eta (v^2 - u^2).
    pub chi_residual: f64,
}

#[derive(Debug, Clone)]
pub struct KgdOptions {
    /// Initial mixing factor of the chi update; halved whenever the
    /// sup-change increases.
    pub relax: f64,
    pub max_iters: usize,
    /// Convergence threshold on the sup-change of chi.
    pub scf_tol: f64,
    pub solve: SolveOptions,
}

impl Default for KgdOptions {
    fn default() -> Self {
        Self {
            relax: 0.5,
            max_iters: 300,
            scf_tol: 1e-9,
            solve: SolveOptions::default(),
        }
    }
}

struct InnerSolution {
    u: Vec<f64>,
    v: Vec<f64>,
    /// Potential scale for the linear mode, 1.0 for the nonlinear mode.
    t: f64,
}

/// One inner Dirac solve in the frozen potential eta * chi.
fn inner_solve(
    grid: &[f64],
    chi: &CubicSpline,
    omega: f64,
    mass: f64,
    eta: f64,
    model: &NonlinearityModel,
    kappa: f64,
    opts: &SolveOptions,
    warm_t: Option<f64>,
) -> Result<InnerSolution, Error> {
    let r_max = *grid.last().unwrap();
    let r_mid = (5.0 / kappa).min(0.6 * r_max);
    let r_start = 1e-6;
    let (ms, mp) = (mass - omega, mass + omega);

    if model.is_zero() {
        // eigenvalue mode: shoot on the potential scale t with v(0) = 1
        let problem = ShootingProblem {
            rhs: |t: f64, r: f64, y: &[f64; 2]| {
                let (u, v) = (y[0], y[1]);
                let q = eta * t * chi.eval(r);
                [-2.0 * u / r + v * (q - ms), u * (q - mp)]
            },
            initial: |t: f64| {
                let g0 = eta * t * chi.eval(r_start) - ms;
                (r_start, [g0 / 3.0 * r_start, 1.0])
            },
            tail: |r: f64| {
                let e = (-kappa * r).exp() / r;
                [(kappa + 1.0 / r) / mp * e, e]
            },
            classify_component: 1,
            r_mid,
            r_max,
            rtol: opts.rtol,
        };
        // bracket the eigenvalue crossing in t
        let mut t_lo = warm_t.map(|t| t * 0.7).unwrap_or(1e-3).max(1e-6);
        let mut c_lo = problem.classify(t_lo);
        let mut t_hi = t_lo;
        loop {
            t_hi *= 1.6;
            if t_hi > 1e5 {
                return Err(Error::NoBracket { lo: t_lo, hi: t_hi });
            }
            if problem.classify(t_hi) != c_lo {
                break;
            }
            // keep the window tight around the sweep
            if t_hi > 1e3 && warm_t.is_some() {
                // warm start missed; restart cold
                t_lo = 1e-6;
                c_lo = problem.classify(t_lo);
            }
        }
        let t0 = problem.bisect(t_lo.max(t_hi / 1.6), t_hi, 1e-13 * t_hi);
        let sol = problem.newton_polish(t0)?;
        let (u, v) = problem.sample(&sol, grid);
        Ok(InnerSolution { u, v, t: sol.p })
    } else {
        // nonlinear mode: amplitude shooting with the chi shift
        let problem = ShootingProblem {
            rhs: |_p: f64, r: f64, y: &[f64; 2]| {
                let (u, v) = (y[0], y[1]);
                let q = model.g(v * v - u * u) + eta * chi.eval(r);
                [-2.0 * u / r + v * (q - ms), u * (q - mp)]
            },
            initial: |p: f64| {
                let g0 = model.g(p * p) + eta * chi.eval(r_start) - ms;
                (r_start, [p * g0 / 3.0 * r_start, p])
            },
            tail: |r: f64| {
                let e = (-kappa * r).exp() / r;
                [(kappa + 1.0 / r) / mp * e, e]
            },
            classify_component: 1,
            r_mid,
            r_max,
            rtol: opts.rtol,
        };
        let scale = (mass / model.lambda.max(1e-12)).powf(1.0 / (2.0 * model.exponent));
        let brackets =
            problem.sweep_brackets(opts.sweep_lo * scale, opts.sweep_hi * scale, opts.sweep_points);
        let (lo, hi) = brackets.first().copied().ok_or(Error::NoBracket {
            lo: opts.sweep_lo * scale,
            hi: opts.sweep_hi * scale,
        })?;
        let p0 = problem.bisect(lo, hi, 1e-12);
        let sol = problem.newton_polish(p0)?;
        let (u, v) = problem.sample(&sol, grid);
        Ok(InnerSolution { u, v, t: 1.0 })
    }
}

/// Weighted inner product int a b r^2 dr on the uniform grid (trapezoid;
/// only used for the amplitude projection, where any consistent inner
/// product works).
fn weighted_dot(grid: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let h = grid[1] - grid[0];
    let mut s = 0.0;
    for i in 0..grid.len() {
        let w = if i == 0 || i == grid.len() - 1 { 0.5 } else { 1.0 };
        s += w * a[i] * b[i] * grid[i] * grid[i];
    }
    s * h
}

/// Solves the KGD standing-wave system self-consistently.
pub fn kgd_scf_solve(
    omega: f64,
    mass: f64,
    meson_mass: f64,
    eta: f64,
    model: NonlinearityModel,
    opts: &KgdOptions,
) -> Result<KgdState, Error> {
    if !(omega > 0.0 && omega < mass) {
        return Err(Error::FrequencyOutOfRange { omega, mass });
    }
    if meson_mass <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "meson mass must be positive, got {meson_mass}"
        )));
    }
    if model.is_zero() && eta == 0.0 {
        return Err(Error::InvalidParameter(
            "G = 0 with eta = 0 has no localized states".into(),
        ));
    }
    let kappa = (mass * mass - omega * omega).sqrt();
    let r_max = opts.solve.r_max.unwrap_or(14.0 / kappa);
    let grid = uniform_grid(r_max, opts.solve.intervals);

    // seed chi: a positive bump on the solitary-wave scale (zero for the
    // decoupled eta = 0 case, where one sweep converges)
    let mut chi: Vec<f64> = if model.is_zero() {
        grid.iter()
            .map(|&r| (-0.25 * (kappa * r).powi(2)).exp())
            .collect()
    } else {
        vec![0.0; grid.len()]
    };

    let mut relax = opts.relax;
    let mut history = Vec::new();
    let mut warm_t = None;
    let mut last: Option<InnerSolution> = None;
    let mut converged = false;

    for iter in 0..opts.max_iters {
        let chi_spline = CubicSpline::new(grid.clone(), chi.clone());
        let inner = inner_solve(
            &grid, &chi_spline, omega, mass, eta, &model, kappa, &opts.solve, warm_t,
        )
        .map_err(|e| Error::ScfInnerSolve {
            iteration: iter,
            source: Box::new(e),
        })?;
        warm_t = if model.is_zero() { Some(inner.t) } else { None };

        // regenerate the meson field from the source eta (v^2 - u^2)
        let us = CubicSpline::new(grid.clone(), inner.u.clone());
        let vs = CubicSpline::new(grid.clone(), inner.v.clone());
        let raw = yukawa_radial(
            &grid,
            |r| {
                let u = us.eval(r);
                let v = vs.eval(r);
                eta * (v * v - u * u)
            },
            meson_mass,
        );
        let raw_vals: Vec<f64> = grid.iter().map(|&r| raw.eval(r)).collect();

        // amplitude: A^2 <raw, raw> = t <chi, raw> in L^2(r^2 dr);
        // trivially A = 1 in the nonlinear mode (t = 1, amplitudes live
        // in the shooting)
        let a2 = if model.is_zero() {
            inner.t * weighted_dot(&grid, &chi, &raw_vals) / weighted_dot(&grid, &raw_vals, &raw_vals)
        } else {
            1.0
        };
        let chi_new: Vec<f64> = raw_vals.iter().map(|x| a2 * x).collect();

        let change = chi
            .iter()
            .zip(chi_new.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if let Some(&prev) = history.last() {
            if change > prev && relax > 0.05 {
                relax *= 0.5;
            }
        }
        history.push(change);

        for (c, n) in chi.iter_mut().zip(chi_new.iter()) {
            *c = (1.0 - relax) * *c + relax * n;
        }
        let scaled = if model.is_zero() {
            let a = a2.max(0.0).sqrt();
            InnerSolution {
                u: inner.u.iter().map(|x| a * x).collect(),
                v: inner.v.iter().map(|x| a * x).collect(),
                t: inner.t,
            }
        } else {
            inner
        };
        last = Some(scaled);
        if change <= opts.scf_tol {
            converged = true;
            break;
        }
    }
    if !converged {
        let tail: Vec<f64> = history.iter().rev().take(8).copied().collect();
        return Err(Error::ScfDiverged {
            iterations: history.len(),
            history: tail,
        });
    }

    // final inner solve against the converged chi, then assemble
    let chi_spline = CubicSpline::new(grid.clone(), chi.clone());
    let inner = inner_solve(
        &grid, &chi_spline, omega, mass, eta, &model, kappa, &opts.solve, warm_t,
    )?;
    let (u, v) = if model.is_zero() {
        let us = CubicSpline::new(grid.clone(), inner.u.clone());
        let vs = CubicSpline::new(grid.clone(), inner.v.clone());
        let raw = yukawa_radial(
            &grid,
            |r| {
                let uu = us.eval(r);
                let vv = vs.eval(r);
                eta * (vv * vv - uu * uu)
            },
            meson_mass,
        );
        let raw_vals: Vec<f64> = grid.iter().map(|&r| raw.eval(r)).collect();
        let a2 =
            inner.t * weighted_dot(&grid, &chi, &raw_vals) / weighted_dot(&grid, &raw_vals, &raw_vals);
        let a = a2.max(0.0).sqrt();
        (
            inner.u.iter().map(|x| a * x).collect::<Vec<_>>(),
            inner.v.iter().map(|x| a * x).collect::<Vec<_>>(),
        )
    } else {
        (inner.u, inner.v)
    };
    let scf_iters = history.len();
    let scf_residual = *history.last().unwrap();
    let _ = last;

    let profile = RadialProfile::from_samples(
        ProfileKind::Kgd3d,
        omega,
        mass,
        model,
        eta,
        meson_mass,
        grid.clone(),
        u,
        v,
        Some(chi),
    )?;

    // chi operator residual against the final Dirac source
    let probes: Vec<f64> = grid.iter().copied().skip(8).step_by(16).collect();
    let chi_field = super::yukawa::ScalarFieldRadial {
        spline: CubicSpline::new(grid.clone(), profile.chi.clone().unwrap()),
        mass: meson_mass,
        ell: 0,
    };
    let chi_residual = operator_residual(
        &chi_field,
        |r| {
            let uu = profile.eval_u(r);
            let vv = profile.eval_v(r);
            eta * (vv * vv - uu * uu)
        },
        &probes,
    );

    Ok(KgdState {
        profile: Arc::new(profile),
        omega,
        mass,
        meson_mass,
        eta,
        model,
        scf_iters,
        scf_residual,
        scf_history: history,
        chi_residual,
    })
}

impl KgdState {
    pub fn field(&self) -> Result<SpinorField, Error> {
        build_family(self.profile.clone(), 1)
    }

    /// One extra undamped fixed-point sweep; returns the sup-change of chi
    /// it would produce (the independence oracle for SCF convergence).
    pub fn undamped_sweep_change(&self, opts: &KgdOptions) -> Result<f64, Error> {
        let grid = &self.profile.grid;
        let chi = self.profile.chi.as_ref().unwrap();
        let kappa = self.profile.kappa();
        let chi_spline = CubicSpline::new(grid.clone(), chi.clone());
        let inner = inner_solve(
            grid,
            &chi_spline,
            self.omega,
            self.mass,
            self.eta,
            &self.model,
            kappa,
            &opts.solve,
            None,
        )?;
        let us = CubicSpline::new(grid.clone(), inner.u.clone());
        let vs = CubicSpline::new(grid.clone(), inner.v.clone());
        let raw = yukawa_radial(
            grid,
            |r| {
                let u = us.eval(r);
                let v = vs.eval(r);
                self.eta * (v * v - u * u)
            },
            self.meson_mass,
        );
        let raw_vals: Vec<f64> = grid.iter().map(|&r| raw.eval(r)).collect();
        let a2 = if self.model.is_zero() {
            inner.t * weighted_dot(grid, chi, &raw_vals) / weighted_dot(grid, &raw_vals, &raw_vals)
        } else {
            1.0
        };
        Ok(chi
            .iter()
            .zip(raw_vals.iter())
            .map(|(c, r)| (c - a2 * r).abs())
            .fold(0.0, f64::max))
    }
}

/// The KGD functionals R, R_1 (both expressions), P_j and E_0, plus the
/// relations among them.
pub fn kgd_functionals(state: &KgdState, spec: &QuadratureSpec) -> Result<FunctionalReport, Error> {
    let field = state.field()?;
    let prof = &state.profile;
    let m_meson = state.meson_mass;
    let eta = state.eta;
    let rad = radial_functionals(&field, spec);
    let rule = spec.radial_rule(prof.r_max());

    let vals = rule.integrate_many(|r| {
        let u = prof.eval_u(r);
        let v = prof.eval_v(r);
        let chi = prof.eval_chi(r);
        let dchi = prof.deriv_chi(r);
        let f_phi = eta * (v * v - u * u);
        let r2 = r * r;
        [chi * f_phi * r2, chi * chi * r2, dchi * dchi * r2]
    });
    let f4 = 4.0 * PI;
    let r_func = f4 * vals[0];
    let r1_a = 2.0 * m_meson * f4 * vals[1];
    let p_sum = f4 * vals[2];
    let p_j = p_sum / 3.0;
    let e0 = 3.0 * rad.i_k + rad.v - 0.5 * r_func;

    // R_1 second expression: (1/4pi) int int e^{-M|x-y|} f(x) f(y) dx dy
    // by the reduced double-radial kernel
    let r1_b = r1_double_integral(prof, eta, m_meson);

    // P_j by direct 3D quadrature, each axis separately
    let box_rule = BoxRule::concentrated_cube(prof.r_max(), spec.box_nodes.min(128));
    let p3d = box_rule.integrate(|p: Vector3<f64>| {
        let r = p.norm().max(1e-9);
        let d = prof.deriv_chi(r);
        let g = p * (d / r);
        [g[0] * g[0], g[1] * g[1], g[2] * g[2]]
    });

    let scale = (state.omega * rad.q).abs().max(1e-300);
    let mut report = FunctionalReport::new("kgd functionals");
    report.push_value("Q", rad.q);
    report.push_value("V", rad.v);
    report.push_value("sum I_k", 3.0 * rad.i_k);
    report.push_value("R", r_func);
    report.push_value("R_1", r1_a);
    report.push_value("R_1 (double integral)", r1_b);
    report.push_value("P_j", p_j);
    report.push_value("E_0", e0);

    report.push_check(
        "R_1 dual expressions agree",
        (r1_a - r1_b) / r1_a.abs().max(scale),
        1e-6,
    );
    let p_scale = p_sum.abs().max(1e-12 * scale);
    let iso = (p3d[0] - p3d[1])
        .abs()
        .max((p3d[1] - p3d[2]).abs())
        .max((p3d[0] - p3d[2]).abs());
    report.push_check("P_1 = P_2 = P_3 (3d)", iso / p_scale, 1e-6);
    report.push_check(
        "P_j (3d) matches radial",
        (p3d[0] + p3d[1] + p3d[2] - p_sum).abs() / p_scale,
        1e-6,
    );
    report.push_check(
        "sum P_j = R - M R_1 / 2",
        (p_sum - (r_func - m_meson * r1_a / 2.0)) / p_scale,
        1e-6,
    );
    if state.eta != 0.0 {
        report.push_check("R > 0", if r_func > 0.0 { 0.0 } else { 1.0 }, 0.5);
        report.push_check("R_1 > 0", if r1_a > 0.0 { 0.0 } else { 1.0 }, 0.5);
    }
    Ok(report)
}

/// (1/4pi) int int e^{-M|x-y|} f f by the angular-reduced double radial
/// integral (2 pi / M^2) int int f(r) f(s) r s [e^{-M|r-s|}(1 + M|r-s|)
/// - e^{-M(r+s)}(1 + M(r+s))] dr ds.
fn r1_double_integral(prof: &RadialProfile, eta: f64, m: f64) -> f64 {
    let n_pts = 700;
    let r_max = prof.r_max();
    let (gx, gw) = gauss_legendre(n_pts);
    let nodes: Vec<f64> = gx.iter().map(|x| 0.5 * r_max * (x + 1.0)).collect();
    let weights: Vec<f64> = gw.iter().map(|w| 0.5 * r_max * w).collect();
    let f: Vec<f64> = nodes
        .iter()
        .map(|&r| {
            let u = prof.eval_u(r);
            let v = prof.eval_v(r);
            eta * (v * v - u * u)
        })
        .collect();
    let mut total = 0.0;
    for i in 0..n_pts {
        let r = nodes[i];
        let mut inner = 0.0;
        for j in 0..n_pts {
            let s = nodes[j];
            let d = (r - s).abs();
            let p = r + s;
            let kernel = (-m * d).exp() * (1.0 + m * d) - (-m * p).exp() * (1.0 + m * p);
            inner += weights[j] * f[j] * s * kernel;
        }
        total += weights[i] * f[i] * r * inner;
    }
    2.0 * PI / (m * m) * total
}

/// The KGD virial identity suite (scaled by omega Q):
///
///   (a) omega Q = (2/3) sum I_k + V - (5R - M R_1)/6
///   (b) I_j = (omega Q - V)/2 + (3/4) R - (M/4) R_1 - P_j
///   (c) sum I_k = omega Q + int (g - m) psibar psi + R
///   (d) sum I_k = 3 int (g s - G) + (R + M R_1)/2 > 0
///   (e) E_0 = omega Q + int (g s - G) + R/2 > 0
pub fn kgd_virial(state: &KgdState, spec: &QuadratureSpec) -> Result<FunctionalReport, Error> {
    let field = state.field()?;
    let prof = &state.profile;
    let rad = radial_functionals(&field, spec);
    let rule = spec.radial_rule(prof.r_max());
    let vals = rule.integrate_many(|r| {
        let u = prof.eval_u(r);
        let v = prof.eval_v(r);
        let chi = prof.eval_chi(r);
        let dchi = prof.deriv_chi(r);
        let f_phi = state.eta * (v * v - u * u);
        let r2 = r * r;
        [chi * f_phi * r2, chi * chi * r2, dchi * dchi * r2]
    });
    let f4 = 4.0 * PI;
    let r_func = f4 * vals[0];
    let r1 = 2.0 * state.meson_mass * f4 * vals[1];
    let p_j = f4 * vals[2] / 3.0;
    let omega = state.omega;
    let sum_i = 3.0 * rad.i_k;
    let e0 = sum_i + rad.v - 0.5 * r_func;
    let scale = (omega * rad.q).abs().max(1e-300);

    let mut report = FunctionalReport::new("kgd virial suite");
    report.push_value("omega Q", omega * rad.q);
    report.push_value("E_0", e0);
    report.push_check(
        "(a) omega Q = (2/3) sum I_k + V - (5R - M R_1)/6",
        (omega * rad.q
            - (2.0 / 3.0) * sum_i
            - rad.v
            + (5.0 * r_func - state.meson_mass * r1) / 6.0)
            / scale,
        1e-5,
    );
    report.push_check(
        "(b) I_j = (omega Q - V)/2 + (3/4)R - (M/4)R_1 - P_j",
        (rad.i_k
            - 0.5 * (omega * rad.q - rad.v)
            - 0.75 * r_func
            + 0.25 * state.meson_mass * r1
            + p_j)
            / scale,
        1e-5,
    );
    report.push_check(
        "(c) sum I_k = omega Q + int (g - m) psibar psi + R",
        (sum_i - omega * rad.q - rad.gm_scalar - r_func) / scale,
        1e-5,
    );
    report.push_check(
        "(d) sum I_k = 3 int (g s - G) + (R + M R_1)/2",
        (sum_i - 3.0 * rad.gs_minus_g - 0.5 * (r_func + state.meson_mass * r1)) / scale,
        1e-5,
    );
    report.push_check(
        "(d) positivity of sum I_k",
        if sum_i > 0.0 { 0.0 } else { 1.0 },
        0.5,
    );
    report.push_check(
        "(e) E_0 = omega Q + int (g s - G) + R/2",
        (e0 - omega * rad.q - rad.gs_minus_g - 0.5 * r_func) / scale,
        1e-5,
    );
    report.push_check("(e) positivity of E_0", if e0 > 0.0 { 0.0 } else { 1.0 }, 0.5);
    Ok(report)
}

/// Direct quadrature of the KGD energy, momentum and charge of the
/// travelling wave (psi_v, chi_v) at time t, verifying E_v = gamma E_0,
/// P_v = gamma v E_0, Q_v = Q_0, the C3-type cross terms, and the chi_v
/// field equation by finite differences.
pub fn kgd_relation_check(
    state: &KgdState,
    velocities: &[Vector3<f64>],
    t_samples: &[f64],
    spec: &QuadratureSpec,
    tol: f64,
) -> Result<FunctionalReport, Error> {
    let alg = algebra();
    let field = state.field()?;
    let prof = &state.profile;
    let rad = radial_functionals(&field, spec);
    let rule = spec.radial_rule(prof.r_max());
    let vals = rule.integrate_many(|r| {
        let u = prof.eval_u(r);
        let v = prof.eval_v(r);
        let chi = prof.eval_chi(r);
        let dchi = prof.deriv_chi(r);
        [
            chi * state.eta * (v * v - u * u) * r * r,
            dchi * dchi * r * r,
        ]
    });
    let r_func = 4.0 * PI * vals[0];
    let p_sum = 4.0 * PI * vals[1];
    let e0 = 3.0 * rad.i_k + rad.v - 0.5 * r_func;
    let q0 = rad.q;
    let m_meson = state.meson_mass;
    let eta = state.eta;
    let model = state.model;
    let m = state.mass;

    let mut report = FunctionalReport::new("kgd energy-momentum relations");
    report.push_value("E_0", e0);
    report.push_value("Q_0", q0);

    for v in velocities {
        let frame = boost_frame(*v)?;
        let gamma = frame.gamma;
        let kappa_v = boost_kappa(v, gamma);
        let wave = moving_wave(field.clone(), frame.clone());

        // C3 cross terms: int d_i chi d_j chi dx, i != j (spherical chi)
        let cross_rule = BoxRule::concentrated_cube(prof.r_max(), spec.box_nodes.min(96));
        let cross = cross_rule.integrate(|p: Vector3<f64>| {
            let r = p.norm().max(1e-9);
            let d = prof.deriv_chi(r);
            let g = p * (d / r);
            [g[0] * g[1], g[0] * g[2], g[1] * g[2]]
        });
        let worst_cross = cross.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        report.push_check(
            format!("C3 cross terms vanish [v=({:.2},{:.2},{:.2})]", v[0], v[1], v[2]),
            worst_cross / p_sum.max(1e-300),
            1e-8,
        );

        for &t in t_samples {
            let r_box = 0.75 * prof.r_max();
            let axes = orthonormal_frame(v);
            let box_rule = BoxRule::new(
                *v * t,
                axes,
                [r_box / gamma, r_box, r_box],
                [spec.box_nodes, spec.box_nodes, spec.box_nodes],
            );
            let out = box_rule.integrate(|p: Vector3<f64>| {
                let (value, _dt, grad) = wave.value_time_gradient(t, &p);
                // Dirac part
                let mut e = Complex64::new(0.0, 0.0);
                for k in 0..3 {
                    e += value.dotc(&(alg.alpha[k] * grad[k])) * (-I);
                }
                let sbar = value.dotc(&(alg.beta * value)).re;
                e += Complex64::new(m * sbar - model.g_integral(sbar), 0.0);
                // Klein-Gordon part: chi_v(t, x) = chi0(y)
                let y = frame.contracted_coordinate(t, &p);
                let ry = y.norm().max(1e-12);
                let chi = prof.eval_chi(ry);
                let dchi = prof.deriv_chi(ry);
                let grad_chi0 = y * (dchi / ry);
                let chi_dot = -gamma * v.dot(&grad_chi0);
                let grad_chi_x = grad_chi0 + *v * (kappa_v * v.dot(&grad_chi0));
                let e_kg = 0.5
                    * (chi_dot * chi_dot
                        + grad_chi_x.norm_squared()
                        + m_meson * m_meson * chi * chi);
                let e_int = -eta * chi * sbar;

                let mut acc = [0.0; 6];
                acc[0] = e.re + e_kg + e_int;
                for k in 0..3 {
                    let zp = value.dotc(&grad[k]) * (-I);
                    acc[1 + k] = zp.re - chi_dot * grad_chi_x[k];
                }
                acc[4] = value.norm_squared();
                acc[5] = e.im;
                acc
            });
            let e_v = out[0];
            let p_v = Vector3::new(out[1], out[2], out[3]);
            let q_v = out[4];
            let tag = format!("v=({:.2},{:.2},{:.2}) t={:.2}", v[0], v[1], v[2], t);
            report.push_value(format!("E_v [{tag}]"), e_v);
            report.push_value(format!("Q_v [{tag}]"), q_v);
            report.push_check(
                format!("E_v = gamma E_0 [{tag}]"),
                (e_v - gamma * e0) / e0,
                tol,
            );
            report.push_check(
                format!("P_v = gamma v E_0 [{tag}]"),
                (p_v - *v * (gamma * e0)).norm() / e0,
                tol,
            );
            report.push_check(format!("Q_v = Q_0 [{tag}]"), (q_v - q0) / q0, tol);

            // chi_v field equation by finite differences at probe points
            let chi_v = |tt: f64, xx: &Vector3<f64>| {
                let y = frame.contracted_coordinate(tt, xx);
                prof.eval_chi(y.norm())
            };
            let mut worst_fe = 0.0f64;
            let h = 1e-2;
            for probe in [
                *v * t + Vector3::new(0.5, 0.2, -0.4),
                *v * t + Vector3::new(-0.8, 1.0, 0.3),
            ] {
                let psi = wave.evaluate(t, &probe);
                let sbar = psi.dotc(&(alg.beta * psi)).re;
                let c0 = chi_v(t, &probe);
                let dtt = (chi_v(t + h, &probe) - 2.0 * c0 + chi_v(t - h, &probe)) / (h * h);
                let mut lap = 0.0;
                for k in 0..3 {
                    let mut dx = Vector3::zeros();
                    dx[k] = h;
                    lap += (chi_v(t, &(probe + dx)) - 2.0 * c0 + chi_v(t, &(probe - dx)))
                        / (h * h);
                }
                let lhs = dtt - lap + m_meson * m_meson * c0;
                let rhs = eta * sbar;
                let scale = m_meson * m_meson * c0.abs() + rhs.abs() + lap.abs() + 1e-300;
                worst_fe = worst_fe.max((lhs - rhs).abs() / scale);
            }
            report.push_check(
                format!("chi_v field equation (FD) [{tag}]"),
                worst_fe,
                1e-4,
            );
        }
    }
    Ok(report)
}
