//! Full 3D spinor fields built from radial profiles via the four explicit
//! angular-momentum families, plus their symmetry diagnostics.
//!
//! With `W(r) = u(r)/r` the four families are smooth in Cartesian
//! coordinates:
//!
//! ```text
//!   a=1: ( V, 0, i W x3, i W (x1 + i x2) )          m3 = +1/2, kappa = +1
//!   a=2: ( W x3, W (x1 + i x2), i V, 0 )            m3 = +1/2, kappa = -1
//!   a=3: ( 0, V, i W (x1 - i x2), -i W x3 )         m3 = -1/2, kappa = +1
//!   a=4: ( -W (x1 - i x2), W x3, 0, -i V )          m3 = -1/2, kappa = -1
//! ```
//!
//! where V = v(r) is the origin-regular radial function and u (vanishing
//! linearly at the origin) multiplies the angular spinor. Families 1, 3
//! require a plus-family profile, families 2, 4 a minus-family one.
//!
//! The checks in this module apply the angular momentum operators
//! M = L + Sigma/2 and the spin-orbit operator K = beta(Sigma.L + 1)
//! numerically (analytic gradients for the first application, high-order
//! finite differences for the second) and verify the quantum numbers; the
//! symmetry integrals certify the conditions under which the boost
//! theorems hold.

use crate::clifford::{dirac_algebra, DiracAlgebra, Spinor};
use crate::error::Error;
use crate::profiles::{ProfileKind, RadialProfile};
use crate::quadrature::BoxRule;
use crate::report::FunctionalReport;
use nalgebra::{Vector2, Vector3};
use num_complex::Complex64;
use std::sync::{Arc, OnceLock};

pub(crate) fn algebra() -> &'static DiracAlgebra {
    static ALG: OnceLock<DiracAlgebra> = OnceLock::new();
    ALG.get_or_init(dirac_algebra)
}

const I: Complex64 = Complex64::new(0.0, 1.0);

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// An evaluatable spinor field phi: R^3 -> C^4 built from a radial profile
/// and a family index. The full stationary state is
/// psi(t, x) = exp(-i omega t) phi(x).
#[derive(Debug, Clone)]
pub struct SpinorField {
    profile: Arc<RadialProfile>,
    pub family: u8,
    pub omega: f64,
    /// Eigenvalue of M_3.
    pub m3: f64,
    /// Eigenvalue of the spin-orbit operator K.
    pub kappa_qn: i32,
}

/// Builds the family-`a` field from a radial profile.
/// Families 1 and 3 take plus-family (or KGD) profiles, families 2 and 4
/// minus-family ones.
pub fn build_family(profile: Arc<RadialProfile>, a: u8) -> Result<SpinorField, Error> {
    let plus_ok = matches!(profile.kind, ProfileKind::Dirac3dPlus | ProfileKind::Kgd3d);
    let minus_ok = profile.kind == ProfileKind::Dirac3dMinus;
    let compatible = match a {
        1 | 3 => plus_ok,
        2 | 4 => minus_ok,
        _ => {
            return Err(Error::InvalidParameter(format!(
                "family index must be 1..=4, got {a}"
            )))
        }
    };
    if !compatible {
        return Err(Error::KindMismatch {
            expected: if a == 1 || a == 3 {
                "dirac3d_plus or kgd3d".into()
            } else {
                "dirac3d_minus".into()
            },
            got: profile.kind.to_string(),
        });
    }
    let (m3, kappa_qn) = match a {
        1 => (0.5, 1),
        2 => (0.5, -1),
        3 => (-0.5, 1),
        _ => (-0.5, -1),
    };
    Ok(SpinorField {
        omega: profile.omega,
        profile,
        family: a,
        m3,
        kappa_qn,
    })
}

struct RadialParts {
    v: f64,
    w: f64,
    /// v'(r)/r
    vp_r: f64,
    /// W'(r)/r with W = u/r
    wp_r: f64,
}

impl SpinorField {
    pub fn profile(&self) -> &Arc<RadialProfile> {
        &self.profile
    }

    fn parts(&self, r: f64) -> RadialParts {
        // clamp the radius for the derivative ratios; u(0) = 0 and
        // v'(0) = 0 keep everything finite
        let rc = r.max(1e-8);
        let u = self.profile.eval_u(rc);
        let up = self.profile.deriv_u(rc);
        let w = u / rc;
        RadialParts {
            v: self.profile.eval_v(rc),
            w,
            vp_r: self.profile.deriv_v(rc) / rc,
            wp_r: (up - w) / (rc * rc),
        }
    }

    /// phi(x).
    pub fn evaluate(&self, x: &Vector3<f64>) -> Spinor {
        let p = self.parts(x.norm());
        self.compose(x, &p)
    }

    fn compose(&self, x: &Vector3<f64>, p: &RadialParts) -> Spinor {
        let (x1, x2, x3) = (x[0], x[1], x[2]);
        let xp = Complex64::new(x1, x2); // x1 + i x2
        let xm = Complex64::new(x1, -x2); // x1 - i x2
        let v = re(p.v);
        let w = p.w;
        match self.family {
            1 => Spinor::new(v, re(0.0), I * re(w * x3), I * (xp * w)),
            2 => Spinor::new(re(w * x3), xp * w, I * v, re(0.0)),
            3 => Spinor::new(re(0.0), v, I * (xm * w), -I * re(w * x3)),
            _ => Spinor::new(-(xm * w), re(w * x3), re(0.0), -I * v),
        }
    }

    /// Analytic gradient [d phi/dx1, d phi/dx2, d phi/dx3].
    pub fn gradient(&self, x: &Vector3<f64>) -> [Spinor; 3] {
        self.value_and_gradient(x).1
    }

    /// phi(x) and its gradient with one set of radial lookups.
    pub fn value_and_gradient(&self, x: &Vector3<f64>) -> (Spinor, [Spinor; 3]) {
        let p = self.parts(x.norm());
        let value = self.compose(x, &p);
        let (x1, x2, x3) = (x[0], x[1], x[2]);
        let xp = Complex64::new(x1, x2);
        let xm = Complex64::new(x1, -x2);
        let mut grad = [Spinor::zeros(); 3];
        for k in 0..3 {
            let xk = x[k];
            // d/dxk of V, W x3, W (x1 +- i x2)
            let dv = re(p.vp_r * xk);
            let d_wx3 = re(p.wp_r * xk * x3 + if k == 2 { p.w } else { 0.0 });
            let unit_p = match k {
                0 => re(1.0),
                1 => I,
                _ => re(0.0),
            };
            let unit_m = match k {
                0 => re(1.0),
                1 => -I,
                _ => re(0.0),
            };
            let d_wxp = xp * re(p.wp_r * xk) + unit_p * re(p.w);
            let d_wxm = xm * re(p.wp_r * xk) + unit_m * re(p.w);
            grad[k] = match self.family {
                1 => Spinor::new(dv, re(0.0), I * d_wx3, I * d_wxp),
                2 => Spinor::new(d_wx3, d_wxp, I * dv, re(0.0)),
                3 => Spinor::new(re(0.0), dv, I * d_wxm, -I * d_wx3),
                _ => Spinor::new(-d_wxm, d_wx3, re(0.0), -I * dv),
            };
        }
        (value, grad)
    }

    /// The Lorentz-scalar density psi-bar psi = phi* beta phi at x.
    pub fn scalar_density(&self, x: &Vector3<f64>) -> f64 {
        let phi = self.evaluate(x);
        let mut s = 0.0;
        for i in 0..2 {
            s += phi[i].norm_sqr();
        }
        for i in 2..4 {
            s -= phi[i].norm_sqr();
        }
        s
    }

    /// Radial form of psi-bar psi (depends on r only).
    pub fn scalar_density_radial(&self, r: f64) -> f64 {
        let u = self.profile.eval_u(r);
        let v = self.profile.eval_v(r);
        match self.family {
            1 | 3 => v * v - u * u,
            _ => u * u - v * v,
        }
    }

    /// |phi|^2 (depends on r only for family fields).
    pub fn charge_density_radial(&self, r: f64) -> f64 {
        let u = self.profile.eval_u(r);
        let v = self.profile.eval_v(r);
        u * u + v * v
    }

    pub fn r_max(&self) -> f64 {
        self.profile.r_max()
    }
}

/// rho = phi* phi and J = phi* alpha phi at x.
pub fn current_density(field: &SpinorField, x: &Vector3<f64>) -> (f64, Vector3<f64>) {
    let alg = algebra();
    let phi = field.evaluate(x);
    let rho = phi.iter().map(|z| z.norm_sqr()).sum();
    let mut j = Vector3::zeros();
    for k in 0..3 {
        j[k] = phi.dotc(&(alg.alpha[k] * phi)).re;
    }
    (rho, j)
}

// ---------------------------------------------------------------------
// angular momentum checks
// ---------------------------------------------------------------------

/// Applies M_k = L_k + Sigma_k/2 with L = x cross (-i grad), using the
/// analytic gradient.
fn apply_m(field: &SpinorField, k: usize, x: &Vector3<f64>) -> Spinor {
    let alg = algebra();
    let (value, grad) = field.value_and_gradient(x);
    let (a, b) = ((k + 1) % 3, (k + 2) % 3);
    // L_k = -i (x_a d_b - x_b d_a)
    let l = (grad[b] * re(x[a]) - grad[a] * re(x[b])) * (-I);
    l + alg.sigma_big(k) * value * re(0.5)
}

/// Applies the spin-orbit operator K = beta (Sigma . L + 1).
fn apply_k(field: &SpinorField, x: &Vector3<f64>) -> Spinor {
    let alg = algebra();
    let (value, grad) = field.value_and_gradient(x);
    let mut acc = value;
    for k in 0..3 {
        let (a, b) = ((k + 1) % 3, (k + 2) % 3);
        let l = (grad[b] * re(x[a]) - grad[a] * re(x[b])) * (-I);
        acc += alg.sigma_big(k) * l;
    }
    alg.beta * acc
}

/// Applies M_k to the field `g` (given as a closure) by 4th-order central
/// finite differences; used for the second application in M^2.
fn apply_m_fd(k: usize, x: &Vector3<f64>, g: &dyn Fn(&Vector3<f64>) -> Spinor, h: f64) -> Spinor {
    let alg = algebra();
    let mut grad = [Spinor::zeros(); 3];
    for d in 0..3 {
        let mut step = Vector3::zeros();
        step[d] = h;
        let p2 = g(&(x + step * 2.0));
        let p1 = g(&(x + step));
        let m1 = g(&(x - step));
        let m2 = g(&(x - step * 2.0));
        grad[d] = (m2 - p2 + (p1 - m1) * re(8.0)) * re(1.0 / (12.0 * h));
    }
    let (a, b) = ((k + 1) % 3, (k + 2) % 3);
    let l = (grad[b] * re(x[a]) - grad[a] * re(x[b])) * (-I);
    l + alg.sigma_big(k) * g(x) * re(0.5)
}

/// Spectral L_3 (exact for the e^{i m phi} azimuthal dependence of the
/// families): differentiates through a DFT over n equally spaced azimuths
/// on the circle through x.
fn l3_spectral(field: &SpinorField, x: &Vector3<f64>) -> Spinor {
    let n = 8usize;
    let rho = (x[0] * x[0] + x[1] * x[1]).sqrt();
    let phi0 = x[1].atan2(x[0]);
    let samples: Vec<Spinor> = (0..n)
        .map(|j| {
            let phi = phi0 + 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            field.evaluate(&Vector3::new(rho * phi.cos(), rho * phi.sin(), x[2]))
        })
        .collect();
    // derivative at sample 0 through the DFT; the families' azimuthal
    // content is |m| <= 1, exactly resolved with n = 8
    let mut out = Spinor::zeros();
    for m in 0..n {
        let mf = if m <= n / 2 {
            m as f64
        } else {
            m as f64 - n as f64
        };
        if mf == 0.0 {
            continue;
        }
        let mut coeff = Spinor::zeros();
        for (j, s) in samples.iter().enumerate() {
            let ang = -2.0 * std::f64::consts::PI * (m * j) as f64 / n as f64;
            coeff += *s * Complex64::from_polar(1.0 / n as f64, ang);
        }
        out += coeff * (I * re(mf));
    }
    // L_3 = -i d/dphi
    out * (-I)
}

fn spinor_norm(s: &Spinor) -> f64 {
    s.norm()
}

/// Deterministic set of probe points spanning radii, polar and azimuthal
/// angles (poles included).
fn probe_points(field: &SpinorField) -> Vec<Vector3<f64>> {
    let kappa = field.profile().kappa();
    let mut pts = Vec::new();
    for rf in [0.4, 1.0, 2.3, 4.1] {
        let r = rf / kappa;
        for theta in [1e-4, 0.4, 1.1, 2.0, std::f64::consts::PI - 1e-4] {
            for phi in [0.13f64, 1.9, 4.4] {
                pts.push(Vector3::new(
                    r * phi.cos() * theta.sin(),
                    r * phi.sin() * theta.sin(),
                    r * theta.cos(),
                ));
            }
        }
    }
    pts
}

/// Verifies the angular-momentum structure: M_3 phi = m3 phi (both by the
/// analytic gradient and by the spectral azimuthal derivative),
/// K phi = kappa phi, and M^2 phi = (3/4) phi.
pub fn angular_checks(field: &SpinorField) -> FunctionalReport {
    let mut report = FunctionalReport::new(format!("angular checks, family {}", field.family));
    let pts = probe_points(field);
    let m3 = re(field.m3);
    let kq = re(field.kappa_qn as f64);

    let mut worst_m3 = 0.0f64;
    let mut worst_m3_spectral = 0.0f64;
    let mut worst_k = 0.0f64;
    let mut worst_m2 = 0.0f64;
    for x in &pts {
        let phi = field.evaluate(x);
        let scale = spinor_norm(&phi).max(1e-300);

        let m3_phi = apply_m(field, 2, x);
        worst_m3 = worst_m3.max(spinor_norm(&(m3_phi - phi * m3)) / scale);

        let alg = algebra();
        let m3_spec = l3_spectral(field, x) + alg.sigma_big(2) * phi * re(0.5);
        worst_m3_spectral = worst_m3_spectral.max(spinor_norm(&(m3_spec - phi * m3)) / scale);

        let k_phi = apply_k(field, x);
        worst_k = worst_k.max(spinor_norm(&(k_phi - phi * kq)) / scale);

        // M^2 = sum_k M_k M_k, second application by finite differences
        let h = 0.02 / field.profile().kappa();
        let mut m2_phi = Spinor::zeros();
        for k in 0..3 {
            let inner = |y: &Vector3<f64>| apply_m(field, k, y);
            m2_phi += apply_m_fd(k, x, &inner, h);
        }
        worst_m2 = worst_m2.max(spinor_norm(&(m2_phi - phi * re(0.75))) / scale);
    }
    report.push_value("m3", field.m3);
    report.push_value("kappa", field.kappa_qn as f64);
    report.push_check("M3 phi = m3 phi (analytic gradient)", worst_m3, 1e-6);
    report.push_check(
        "M3 phi = m3 phi (spectral azimuthal)",
        worst_m3_spectral,
        1e-6,
    );
    report.push_check("K phi = kappa phi", worst_k, 1e-6);
    report.push_check("M^2 phi = 3/4 phi", worst_m2, 1e-5);
    report
}

/// Quadrature of the symmetry integrals: int phi* grad phi dx and
/// int phi* alpha_k d_l phi dx for k != l; all vanish for the four
/// families, certifying conditions C1'/C2' (hence C1/C2 for any v).
pub fn symmetry_integrals(field: &SpinorField, nodes: usize) -> FunctionalReport {
    let alg = algebra();
    let rule = BoxRule::concentrated_cube(field.r_max(), nodes);
    // accumulators: |phi|^2, grad (3 x re/im), alpha_k d_l (6 x re/im)
    let result = rule.integrate(|p: Vector3<f64>| {
        let (value, grad) = field.value_and_gradient(&p);
        let mut out = [0.0; 19];
        out[0] = value.norm_squared();
        for k in 0..3 {
            let z = value.dotc(&grad[k]);
            out[1 + 2 * k] = z.re;
            out[2 + 2 * k] = z.im;
        }
        let mut slot = 7;
        for k in 0..3 {
            for l in 0..3 {
                if k == l {
                    continue;
                }
                let z = value.dotc(&(alg.alpha[k] * grad[l]));
                out[slot] = z.re;
                out[slot + 1] = z.im;
                slot += 2;
            }
        }
        out
    });
    let q = result[0];
    let mut report = FunctionalReport::new(format!(
        "symmetry integrals, family {} (scaled by Q)",
        field.family
    ));
    report.push_value("Q", q);
    let mut worst_grad = 0.0f64;
    for k in 0..3 {
        let mag = (result[1 + 2 * k].powi(2) + result[2 + 2 * k].powi(2)).sqrt();
        worst_grad = worst_grad.max(mag / q);
    }
    report.push_check("int phi* grad phi dx = 0 (C1')", worst_grad, 1e-8);
    let mut worst_cross = 0.0f64;
    let mut slot = 7;
    for k in 0..3 {
        for l in 0..3 {
            if k == l {
                continue;
            }
            let mag = (result[slot].powi(2) + result[slot + 1].powi(2)).sqrt();
            worst_cross = worst_cross.max(mag / q);
            slot += 2;
        }
    }
    report.push_check(
        "int phi* alpha_k d_l phi dx = 0, k != l (C2')",
        worst_cross,
        1e-8,
    );
    report
}

/// Sampled-field dump rows `x1 x2 x3 Re psi1 Im psi1 ... Re psi4 Im psi4`.
pub fn sample_dump(field: &SpinorField, points: &[Vector3<f64>]) -> String {
    let mut s = String::new();
    for x in points {
        let phi = field.evaluate(x);
        s.push_str(&format!("{:.16e} {:.16e} {:.16e}", x[0], x[1], x[2]));
        for c in phi.iter() {
            s.push_str(&format!(" {:.16e} {:.16e}", c.re, c.im));
        }
        s.push('\n');
    }
    s
}

// ---------------------------------------------------------------------
// the 1D field
// ---------------------------------------------------------------------

/// The 1D stationary spinor: phi(x) = (v(|x|), sign(x) u(|x|)), real
/// components, v even and u odd.
#[derive(Debug, Clone)]
pub struct SpinorField1d {
    profile: Arc<RadialProfile>,
    pub omega: f64,
}

pub fn build_1d(profile: Arc<RadialProfile>) -> Result<SpinorField1d, Error> {
    if profile.kind != ProfileKind::Dirac1d {
        return Err(Error::KindMismatch {
            expected: "dirac1d".into(),
            got: profile.kind.to_string(),
        });
    }
    Ok(SpinorField1d {
        omega: profile.omega,
        profile,
    })
}

impl SpinorField1d {
    pub fn profile(&self) -> &Arc<RadialProfile> {
        &self.profile
    }

    pub fn evaluate(&self, x: f64) -> Vector2<Complex64> {
        let s = if x < 0.0 { -1.0 } else { 1.0 };
        Vector2::new(
            re(self.profile.eval_v(x.abs())),
            re(s * self.profile.eval_u(x.abs())),
        )
    }

    pub fn derivative(&self, x: f64) -> Vector2<Complex64> {
        let s = if x < 0.0 { -1.0 } else { 1.0 };
        Vector2::new(
            re(s * self.profile.deriv_v(x.abs())),
            re(self.profile.deriv_u(x.abs())),
        )
    }

    pub fn x_max(&self) -> f64 {
        self.profile.r_max()
    }
}
