//! Scalar functionals of the stationary fields and the virial-identity
//! verification suites.
//!
//! For family fields every functional reduces to a radial quadrature;
//! the same quantities are also computed by direct 3D quadrature over a
//! Cartesian box, and the two routes must agree. The virial identities
//! hold exactly on solutions of the stationary equation, so their scaled
//! residuals certify a numerical profile (and flag perturbed inputs).
//!
//! Notation: I_k = -i int phi* alpha_k d_k phi, Q = int phi* phi,
//! V = int (m psibar psi - G(psibar psi)), E_0 = sum I_k + V.

use crate::ansatz::{algebra, SpinorField, SpinorField1d};
use crate::error::Error;
use crate::quadrature::{BoxRule, CompositeRule};
use crate::report::FunctionalReport;
use nalgebra::Vector3;
use num_complex::Complex64;
use std::f64::consts::PI;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Quadrature resolution knobs. Defaults are calibrated so the radial
/// rules are converged to machine precision and the 3D box rule to
/// ~1e-9 relative on default profiles.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub radial_panels: usize,
    pub radial_nodes: usize,
    pub box_nodes: usize,
    /// Agreement tolerance between the reduced and direct-3D routes.
    pub tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            radial_panels: 192,
            radial_nodes: 10,
            box_nodes: 160,
            tol: 1e-6,
        }
    }
}

impl QuadratureSpec {
    /// Coarser boxes for the (1e-4 tolerance) boost relation checks.
    pub fn fast() -> Self {
        Self {
            box_nodes: 112,
            ..Self::default()
        }
    }

    pub fn radial_rule(&self, r_max: f64) -> CompositeRule {
        CompositeRule::new(0.0, r_max, self.radial_panels, self.radial_nodes)
    }
}

/// The reduced radial functionals shared by every suite.
#[derive(Debug, Clone, Copy)]
pub struct RadialFunctionals {
    /// Common value of I_1 = I_2 = I_3 in the reduced route.
    pub i_k: f64,
    pub q: f64,
    pub v: f64,
    /// int (g(s) - m) s dx at s = psibar psi.
    pub gm_scalar: f64,
    /// int (g(s) s - G(s)) dx.
    pub gs_minus_g: f64,
    pub e0: f64,
}

/// Radial quadrature of all functionals of a family field:
/// I_k = 4 pi int [ (2/3) u v r + (1/3)(v u' - u v') r^2 ] dr (any k),
/// Q = 4 pi int (u^2 + v^2) r^2 dr, V = 4 pi int (m s - G(s)) r^2 dr.
pub fn radial_functionals(field: &SpinorField, spec: &QuadratureSpec) -> RadialFunctionals {
    let prof = field.profile();
    let model = prof.model;
    let m = prof.mass;
    let rule = spec.radial_rule(prof.r_max());
    let vals = rule.integrate_many(|r| {
        let u = prof.eval_u(r);
        let v = prof.eval_v(r);
        let up = prof.deriv_u(r);
        let vp = prof.deriv_v(r);
        let s = field.scalar_density_radial(r);
        let r2 = r * r;
        [
            (2.0 / 3.0) * u * v * r + (1.0 / 3.0) * (v * up - u * vp) * r2,
            (u * u + v * v) * r2,
            (m * s - model.g_integral(s)) * r2,
            (model.g(s) - m) * s * r2,
            model.gs_minus_big_g(s) * r2,
        ]
    });
    let f = 4.0 * PI;
    let i_k = f * vals[0];
    let q = f * vals[1];
    let v = f * vals[2];
    RadialFunctionals {
        i_k,
        q,
        v,
        gm_scalar: f * vals[3],
        gs_minus_g: f * vals[4],
        e0: 3.0 * i_k + v,
    }
}

/// All direct-3D quantities gathered in one sweep.
struct Direct3d {
    q: f64,
    i_k: [f64; 3],
    i_k_im: [f64; 3],
    v: f64,
    /// int phi* alpha_k phi dx
    j_int: [f64; 3],
    /// int phi* d_k phi dx
    grad_int: [Complex64; 3],
}

fn direct_3d(field: &SpinorField, spec: &QuadratureSpec) -> Direct3d {
    let alg = algebra();
    let prof = field.profile();
    let model = prof.model;
    let m = prof.mass;
    let rule = BoxRule::concentrated_cube(prof.r_max(), spec.box_nodes);
    let out = rule.integrate(|p: Vector3<f64>| {
        let (value, grad) = field.value_and_gradient(&p);
        let mut acc = [0.0; 17];
        acc[0] = value.norm_squared();
        for k in 0..3 {
            let z = value.dotc(&(alg.alpha[k] * grad[k])) * (-I);
            acc[1 + k] = z.re;
            acc[4 + k] = z.im;
        }
        let mut s = 0.0;
        for i in 0..2 {
            s += value[i].norm_sqr();
        }
        for i in 2..4 {
            s -= value[i].norm_sqr();
        }
        acc[7] = m * s - model.g_integral(s);
        for k in 0..3 {
            acc[8 + k] = value.dotc(&(alg.alpha[k] * value)).re;
            let z = value.dotc(&grad[k]);
            acc[11 + 2 * k] = z.re;
            acc[12 + 2 * k] = z.im;
        }
        acc
    });
    Direct3d {
        q: out[0],
        i_k: [out[1], out[2], out[3]],
        i_k_im: [out[4], out[5], out[6]],
        v: out[7],
        j_int: [out[8], out[9], out[10]],
        grad_int: [
            Complex64::new(out[11], out[12]),
            Complex64::new(out[13], out[14]),
            Complex64::new(out[15], out[16]),
        ],
    }
}

/// Computes I_k, Q, V, E_0 by both the reduced radial route and direct 3D
/// quadrature; the two must agree to `spec.tol` relative, and the three
/// direct I_k must coincide (the paper's I_1 = I_2 = I_3).
pub fn dirac_functionals(
    field: &SpinorField,
    spec: &QuadratureSpec,
) -> Result<FunctionalReport, Error> {
    // radial convergence gate: doubling the panel count must not move
    // the results
    let rad = radial_functionals(field, spec);
    let fine_spec = QuadratureSpec {
        radial_panels: spec.radial_panels * 2,
        ..*spec
    };
    let rad_fine = radial_functionals(field, &fine_spec);
    let conv = relative(rad.q - rad_fine.q, rad_fine.q)
        .max(relative(rad.i_k - rad_fine.i_k, rad_fine.i_k))
        .max(relative(rad.v - rad_fine.v, rad_fine.v));
    if conv > spec.tol {
        return Err(Error::QuadratureNonConvergence {
            previous: rad.q,
            latest: rad_fine.q,
        });
    }

    let d3 = direct_3d(field, spec);
    let mut report = FunctionalReport::new(format!("dirac functionals, family {}", field.family));
    report.push_value("Q", rad.q);
    report.push_value("I_k (reduced)", rad.i_k);
    report.push_value("I_1 (3d)", d3.i_k[0]);
    report.push_value("I_2 (3d)", d3.i_k[1]);
    report.push_value("I_3 (3d)", d3.i_k[2]);
    report.push_value("V", rad.v);
    report.push_value("E_0", rad.e0);
    report.push_value("Q (3d)", d3.q);
    report.push_value("V (3d)", d3.v);

    report.push_check("radial refinement converged", conv, spec.tol);
    report.push_check("Q: reduced vs 3d", relative(rad.q - d3.q, rad.q), spec.tol);
    report.push_check("V: reduced vs 3d", relative(rad.v - d3.v, rad.v), spec.tol);
    let scale = (3.0 * rad.i_k).abs().max(rad.q * field.omega);
    for k in 0..3 {
        report.push_check(
            format!("I_{}: reduced vs 3d", k + 1),
            (rad.i_k - d3.i_k[k]).abs() / scale,
            spec.tol,
        );
        report.push_check(
            format!("Im I_{} vanishes", k + 1),
            d3.i_k_im[k].abs() / scale,
            spec.tol,
        );
    }
    let iso = (d3.i_k[0] - d3.i_k[1])
        .abs()
        .max((d3.i_k[1] - d3.i_k[2]).abs())
        .max((d3.i_k[0] - d3.i_k[2]).abs());
    report.push_check("I_1 = I_2 = I_3 (3d)", iso / scale, spec.tol);
    report.push_check("E_0 > 0", if rad.e0 > 0.0 { 0.0 } else { 1.0 }, 0.5);
    Ok(report)
}

fn relative(diff: f64, scale: f64) -> f64 {
    diff.abs() / scale.abs().max(1e-300)
}

/// The virial / Pokhozhaev identity suite for the pure Dirac model:
///
///   (a) omega Q = V + (2/3) sum I_k
///   (b) sum I_k = omega Q + int (g - m) psibar psi
///   (c) sum I_k = 3 int (g s - G), and > 0
///   (d) omega (phi*, alpha_k phi) = -i (phi*, d_k phi), k = 1, 2, 3
///   (e) E_0 = omega Q + int (g s - G), and > 0
///
/// Residuals are scaled by omega Q.
pub fn virial_suite(field: &SpinorField, spec: &QuadratureSpec) -> FunctionalReport {
    let omega = field.omega;
    let rad = radial_functionals(field, spec);
    let d3 = direct_3d(field, spec);
    let sum_i = 3.0 * rad.i_k;
    let scale = (omega * rad.q).abs().max(1e-300);

    let mut report = FunctionalReport::new(format!("virial suite, family {}", field.family));
    report.push_value("omega", omega);
    report.push_value("Q", rad.q);
    report.push_value("V", rad.v);
    report.push_value("sum I_k", sum_i);
    report.push_value("E_0", rad.e0);
    report.push_value("int (g s - G)", rad.gs_minus_g);

    report.push_check(
        "(a) omega Q = V + (2/3) sum I_k",
        (omega * rad.q - rad.v - (2.0 / 3.0) * sum_i) / scale,
        1e-5,
    );
    report.push_check(
        "(b) sum I_k = omega Q + int (g - m) psibar psi",
        (sum_i - omega * rad.q - rad.gm_scalar) / scale,
        1e-5,
    );
    report.push_check(
        "(c) sum I_k = 3 int (g s - G)",
        (sum_i - 3.0 * rad.gs_minus_g) / scale,
        1e-5,
    );
    report.push_check(
        "(c) positivity of sum I_k",
        if sum_i > 0.0 { 0.0 } else { 1.0 },
        0.5,
    );
    let mut worst_d = 0.0f64;
    for k in 0..3 {
        let lhs = Complex64::new(omega * d3.j_int[k], 0.0);
        let rhs = -I * d3.grad_int[k];
        worst_d = worst_d.max((lhs - rhs).norm() / scale);
    }
    report.push_check(
        "(d) omega (phi*, alpha_k phi) = -i (phi*, d_k phi)",
        worst_d,
        1e-5,
    );
    report.push_check(
        "(e) E_0 = omega Q + int (g s - G)",
        (rad.e0 - omega * rad.q - rad.gs_minus_g) / scale,
        1e-5,
    );
    report.push_check(
        "(e) positivity of E_0",
        if rad.e0 > 0.0 { 0.0 } else { 1.0 },
        0.5,
    );
    report
}

// ---------------------------------------------------------------------
// 1D functionals
// ---------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct Functionals1d {
    pub i: f64,
    pub q: f64,
    pub v: f64,
    pub e0: f64,
}

/// Line quadrature of the 1D functionals over [-x_max, x_max].
pub fn functionals_1d(field: &SpinorField1d, spec: &QuadratureSpec) -> Functionals1d {
    let alg = algebra();
    let prof = field.profile();
    let model = prof.model;
    let m = prof.mass;
    let rule = CompositeRule::new(
        -prof.r_max(),
        prof.r_max(),
        2 * spec.radial_panels,
        spec.radial_nodes,
    );
    let vals = rule.integrate_many(|x| {
        let phi = field.evaluate(x);
        let dphi = field.derivative(x);
        let i_dens = (phi.dotc(&(alg.alpha_1d * dphi)) * (-I)).re;
        let q_dens = phi.norm_squared();
        let s = phi[0].norm_sqr() - phi[1].norm_sqr();
        [i_dens, q_dens, m * s - model.g_integral(s)]
    });
    Functionals1d {
        i: vals[0],
        q: vals[1],
        v: vals[2],
        e0: vals[0] + vals[2],
    }
}

/// 1D identity suite: omega Q = V, the alpha-gradient pairing identity,
/// and (phi*, phi') = 0.
pub fn dirac_functionals_1d(field: &SpinorField1d, spec: &QuadratureSpec) -> FunctionalReport {
    let alg = algebra();
    let prof = field.profile();
    let omega = field.omega;
    let f = functionals_1d(field, spec);
    let rule = CompositeRule::new(
        -prof.r_max(),
        prof.r_max(),
        2 * spec.radial_panels,
        spec.radial_nodes,
    );
    let pair = rule.integrate_many(|x| {
        let phi = field.evaluate(x);
        let dphi = field.derivative(x);
        let a = phi.dotc(&(alg.alpha_1d * phi));
        let g = phi.dotc(&dphi);
        [a.re, a.im, g.re, g.im]
    });
    let scale = (omega * f.q).abs().max(1e-300);

    let mut report = FunctionalReport::new("1d functionals");
    report.push_value("I", f.i);
    report.push_value("Q", f.q);
    report.push_value("V", f.v);
    report.push_value("E_0", f.e0);
    report.push_check("omega Q = V", (omega * f.q - f.v) / scale, 1e-8);
    let lhs = Complex64::new(pair[0], pair[1]) * omega;
    let rhs = -I * Complex64::new(pair[2], pair[3]);
    report.push_check(
        "omega (phi*, alpha phi) = -i (phi*, phi')",
        (lhs - rhs).norm() / scale,
        1e-8,
    );
    report.push_check(
        "(phi*, phi') = 0",
        Complex64::new(pair[2], pair[3]).norm() / scale,
        1e-8,
    );
    report.push_check("E_0 = I + V > 0", if f.e0 > 0.0 { 0.0 } else { 1.0 }, 0.5);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{build_1d, build_family};
    use crate::nonlin::NonlinearityModel;
    use crate::profiles::{
        solve_gross_neveu_1d, solve_soler_radial, FamilySign, ProfileKind, RadialProfile,
        SolveOptions,
    };
    use std::sync::Arc;

    fn plus_field(omega: f64) -> SpinorField {
        let prof = Arc::new(
            solve_soler_radial(
                omega,
                1.0,
                NonlinearityModel::soler(1.0),
                FamilySign::Plus,
                0,
                &SolveOptions::default(),
            )
            .unwrap(),
        );
        build_family(prof, 1).unwrap()
    }

    #[test]
    fn zero_field_gives_zero_functionals() {
        // a numerically-zero profile: amplitudes at 1e-200 so that every
        // quadratic density underflows to exactly 0.0 (an identically zero
        // array cannot carry a decay fit)
        let grid = crate::profiles::uniform_grid(10.0, 512);
        let z = vec![0.0; grid.len()];
        let tail: Vec<f64> = grid.iter().map(|&r| 1e-200 * (-r).exp()).collect();
        let prof = RadialProfile::from_samples(
            ProfileKind::Dirac3dPlus,
            0.9,
            1.0,
            NonlinearityModel::soler(1.0),
            0.0,
            0.0,
            grid,
            z.clone(),
            tail,
            None,
        )
        .unwrap();
        let f = build_family(Arc::new(prof), 1).unwrap();
        let rad = radial_functionals(&f, &QuadratureSpec::default());
        assert_eq!(rad.q, 0.0);
        assert_eq!(rad.v, 0.0);
        assert_eq!(rad.i_k, 0.0);
        assert_eq!(rad.e0, 0.0);
    }

    #[test]
    fn virial_identities_hold_on_certified_solution() {
        let f = plus_field(0.9);
        let rep = virial_suite(&f, &QuadratureSpec::default());
        assert!(rep.all_pass(), "{}", rep.to_text());
    }

    #[test]
    fn functional_routes_agree() {
        let f = plus_field(0.9);
        let rep = dirac_functionals(&f, &QuadratureSpec::default()).unwrap();
        assert!(rep.all_pass(), "{}", rep.to_text());
        assert!(rep.get("E_0").unwrap() > 0.0);
    }

    #[test]
    fn perturbed_profile_is_flagged() {
        let prof = solve_soler_radial(
            0.9,
            1.0,
            NonlinearityModel::soler(1.0),
            FamilySign::Plus,
            0,
            &SolveOptions::default(),
        )
        .unwrap();
        let perturbed = RadialProfile::from_samples(
            prof.kind,
            prof.omega,
            prof.mass,
            prof.model,
            0.0,
            0.0,
            prof.grid.clone(),
            prof.u.iter().map(|u| 1.05 * u).collect(),
            prof.v.clone(),
            None,
        )
        .unwrap();
        let f = build_family(Arc::new(perturbed), 1).unwrap();
        let rep = virial_suite(&f, &QuadratureSpec::default());
        let a = rep.check("(a) omega Q = V + (2/3) sum I_k").unwrap();
        assert!(
            a.residual.abs() > 1e-3,
            "perturbation not detected: residual {}",
            a.residual
        );
        assert!(!rep.all_pass());
    }

    #[test]
    fn soler_identity_c_equals_half_lambda_s_squared() {
        // for g = lambda s: g(s)s - G(s) = lambda s^2 / 2, so identity (c)
        // reads sum I_k = (3 lambda / 2) int (v^2-u^2)^2 dx; radial oracle
        let f = plus_field(0.9);
        let prof = f.profile();
        let spec = QuadratureSpec::default();
        let rad = radial_functionals(&f, &spec);
        let rule = spec.radial_rule(prof.r_max());
        let oracle = 4.0
            * PI
            * rule.integrate(|r| {
                let s = prof.eval_v(r).powi(2) - prof.eval_u(r).powi(2);
                0.5 * s * s * r * r
            });
        assert!(
            ((rad.gs_minus_g - oracle) / oracle).abs() < 1e-12,
            "{} vs {}",
            rad.gs_minus_g,
            oracle
        );
        assert!(((3.0 * rad.i_k - 3.0 * oracle) / (3.0 * oracle)).abs() < 1e-5);
    }

    #[test]
    fn one_dimensional_identities() {
        let prof = Arc::new(
            solve_gross_neveu_1d(
                0.5,
                1.0,
                NonlinearityModel::soler(1.0),
                &SolveOptions::default_1d(),
            )
            .unwrap(),
        );
        let f = build_1d(prof).unwrap();
        let rep = dirac_functionals_1d(&f, &QuadratureSpec::default());
        assert!(rep.all_pass(), "{}", rep.to_text());
        // frozen oracle: for omega = 0.5, m = 1, lambda = 1 the exact
        // solution gives Q = 2 sqrt(3) and V = sqrt(3)
        let q = rep.get("Q").unwrap();
        let v = rep.get("V").unwrap();
        assert!((q - 2.0 * 3.0f64.sqrt()).abs() < 1e-8, "Q = {q}");
        assert!((v - 3.0f64.sqrt()).abs() < 1e-8, "V = {v}");
        assert!(rep.get("E_0").unwrap() > 0.0);
    }
}
