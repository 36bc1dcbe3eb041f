//! Pauli-Dirac matrices, Lorentz boosts and spinor boosts.
//!
//! Everything here is exact linear algebra on 2x2 and 4x4 complex matrices:
//! the standard block representation of the alpha_k / beta matrices, the
//! boost matrix Lambda_v acting on (t, x) in R^4, and the spinor boost
//!
//! ```text
//!   S_v = sqrt((gamma+1)/2) * (I + alpha.v * gamma/(gamma+1)),
//! ```
//!
//! which satisfies S* beta S = beta and the covariance relations
//! S* alpha_mu S = sum_nu Lambda_{mu nu} alpha_nu (alpha_0 = I).
//!
//! Residuals are measured in the max-absolute-entry norm.

use crate::error::Error;
use nalgebra::{Matrix2, Matrix4, Vector3, Vector4};
use num_complex::Complex64;

pub type C2 = Matrix2<Complex64>;
pub type C4 = Matrix4<Complex64>;
pub type Spinor = Vector4<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Velocities are capped at 1 - GAMMA_GUARD so the gamma factor stays
/// well conditioned (gamma ~ 2.2e4 at the cap).
pub const GAMMA_GUARD: f64 = 1e-9;

/// Max-absolute-entry norm of a complex matrix; the residual norm used by
/// every identity check in this module.
pub fn max_entry_norm(m: &C4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_entry_norm2(m: &C2) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// The Pauli-Dirac matrix algebra in the standard 2x2-block representation,
/// together with the 2x2 matrices of the 1D model (alpha = -sigma_2,
/// beta = sigma_3).
#[derive(Debug, Clone)]
pub struct DiracAlgebra {
    pub alpha: [C4; 3],
    pub beta: C4,
    pub gamma5: C4,
    pub pauli: [C2; 3],
    pub alpha_1d: C2,
    pub beta_1d: C2,
}

/// Builds the algebra. Entries are exactly 0, +-1 or +-i.
pub fn dirac_algebra() -> DiracAlgebra {
    let sigma1 = C2::new(ZERO, ONE, ONE, ZERO);
    let sigma2 = C2::new(ZERO, -I, I, ZERO);
    let sigma3 = C2::new(ONE, ZERO, ZERO, -ONE);
    let pauli = [sigma1, sigma2, sigma3];

    let alpha = [
        off_diag_block(&sigma1),
        off_diag_block(&sigma2),
        off_diag_block(&sigma3),
    ];
    let mut beta = C4::zeros();
    beta[(0, 0)] = ONE;
    beta[(1, 1)] = ONE;
    beta[(2, 2)] = -ONE;
    beta[(3, 3)] = -ONE;

    // gamma^5 = -i alpha_1 alpha_2 alpha_3; off-diagonal identity blocks.
    let gamma5 = alpha[0] * alpha[1] * alpha[2] * Complex64::new(0.0, -1.0);

    DiracAlgebra {
        alpha,
        beta,
        gamma5,
        pauli,
        alpha_1d: -sigma2,
        beta_1d: sigma3,
    }
}

fn off_diag_block(s: &C2) -> C4 {
    let mut m = C4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            m[(i, j + 2)] = s[(i, j)];
            m[(i + 2, j)] = s[(i, j)];
        }
    }
    m
}

impl DiracAlgebra {
    /// alpha_0 in the covariance relation: the 4x4 identity.
    pub fn alpha0(&self) -> C4 {
        C4::identity()
    }

    /// alpha . v.
    pub fn alpha_dot(&self, v: &Vector3<f64>) -> C4 {
        self.alpha[0] * Complex64::new(v[0], 0.0)
            + self.alpha[1] * Complex64::new(v[1], 0.0)
            + self.alpha[2] * Complex64::new(v[2], 0.0)
    }

    /// Sigma_3 = diag(sigma_3, sigma_3), the spin matrix along x3.
    pub fn sigma_big(&self, k: usize) -> C4 {
        let s = &self.pauli[k];
        let mut m = C4::zeros();
        for i in 0..2 {
            for j in 0..2 {
                m[(i, j)] = s[(i, j)];
                m[(i + 2, j + 2)] = s[(i, j)];
            }
        }
        m
    }
}

/// A velocity together with its gamma factor, the 4x4 boost Lambda_v (and
/// its inverse Lambda_{-v}), and the spinor boost S_v (and S_{-v}).
/// Immutable after construction.
#[derive(Debug, Clone)]
pub struct BoostFrame {
    pub v: Vector3<f64>,
    pub gamma: f64,
    pub lambda: Matrix4<f64>,
    pub lambda_inv: Matrix4<f64>,
    pub s: C4,
    pub s_inv: C4,
}

/// (gamma - 1)/|v|^2 with its v -> 0 limit 1/2.
pub fn boost_kappa(v: &Vector3<f64>, gamma: f64) -> f64 {
    let v2 = v.norm_squared();
    if v2 < 1e-28 {
        0.5
    } else {
        (gamma - 1.0) / v2
    }
}

pub fn boost_frame(v: Vector3<f64>) -> Result<BoostFrame, Error> {
    let speed = v.norm();
    if speed > 1.0 - GAMMA_GUARD {
        return Err(Error::SuperluminalVelocity { speed });
    }
    let gamma = 1.0 / (1.0 - speed * speed).sqrt();
    let lambda = lambda_matrix(&v, gamma);
    let lambda_inv = lambda_matrix(&(-v), gamma);
    let alg = dirac_algebra();
    let s = spinor_boost(&alg, &v, gamma);
    let s_inv = spinor_boost(&alg, &(-v), gamma);
    Ok(BoostFrame {
        v,
        gamma,
        lambda,
        lambda_inv,
        s,
        s_inv,
    })
}

/// Lambda_v in (t, x) block form: row/column 0 is time.
fn lambda_matrix(v: &Vector3<f64>, gamma: f64) -> Matrix4<f64> {
    let kappa = boost_kappa(v, gamma);
    let mut m = Matrix4::identity();
    m[(0, 0)] = gamma;
    for i in 0..3 {
        m[(0, i + 1)] = gamma * v[i];
        m[(i + 1, 0)] = gamma * v[i];
        for j in 0..3 {
            m[(i + 1, j + 1)] = if i == j { 1.0 } else { 0.0 } + kappa * v[i] * v[j];
        }
    }
    m
}

fn spinor_boost(alg: &DiracAlgebra, v: &Vector3<f64>, gamma: f64) -> C4 {
    let scale = ((gamma + 1.0) / 2.0).sqrt();
    let coeff = gamma / (gamma + 1.0);
    let m = C4::identity() + alg.alpha_dot(v) * Complex64::new(coeff, 0.0);
    m * Complex64::new(scale, 0.0)
}

impl BoostFrame {
    /// Boosted coordinate argument of the standing profile:
    /// y = x + v (gamma-1) (x.v)/|v|^2 - gamma v t.
    pub fn contracted_coordinate(&self, t: f64, x: &Vector3<f64>) -> Vector3<f64> {
        let kappa = boost_kappa(&self.v, self.gamma);
        x + self.v * (kappa * x.dot(&self.v)) - self.v * (self.gamma * t)
    }

    /// Applies Lambda_v to a 4-vector (a0, a).
    pub fn apply_lambda(&self, a0: f64, a: &Vector3<f64>) -> (f64, Vector3<f64>) {
        let four = Vector4::new(a0, a[0], a[1], a[2]);
        let out = self.lambda * four;
        (out[0], Vector3::new(out[1], out[2], out[3]))
    }
}

/// Max-entry residual of the covariance relations
/// S* beta S = beta and S* alpha_mu S = sum_nu Lambda_{mu nu} alpha_nu.
pub fn check_covariance(frame: &BoostFrame) -> f64 {
    let alg = dirac_algebra();
    let s_adj = frame.s.adjoint();
    let mut worst = max_entry_norm(&(s_adj * alg.beta * frame.s - alg.beta));
    let alphas = [alg.alpha0(), alg.alpha[0], alg.alpha[1], alg.alpha[2]];
    for mu in 0..4 {
        let lhs = s_adj * alphas[mu] * frame.s;
        let mut rhs = C4::zeros();
        for nu in 0..4 {
            rhs += alphas[nu] * Complex64::new(frame.lambda[(mu, nu)], 0.0);
        }
        worst = worst.max(max_entry_norm(&(lhs - rhs)));
    }
    worst
}

/// The 1D analogue: 2x2 spinor boost for alpha = -sigma_2, beta = sigma_3.
#[derive(Debug, Clone)]
pub struct BoostFrame1d {
    pub v: f64,
    pub gamma: f64,
    pub s: C2,
    pub s_inv: C2,
}

pub fn boost_frame_1d(v: f64) -> Result<BoostFrame1d, Error> {
    if v.abs() > 1.0 - GAMMA_GUARD {
        return Err(Error::SuperluminalVelocity { speed: v.abs() });
    }
    let gamma = 1.0 / (1.0 - v * v).sqrt();
    let alg = dirac_algebra();
    let build = |vv: f64| -> C2 {
        let scale = ((gamma + 1.0) / 2.0).sqrt();
        let coeff = vv * gamma / (gamma + 1.0);
        (C2::identity() + alg.alpha_1d * Complex64::new(coeff, 0.0)) * Complex64::new(scale, 0.0)
    };
    Ok(BoostFrame1d {
        v,
        gamma,
        s: build(v),
        s_inv: build(-v),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pauli_anticommutators_exact() {
        let alg = dirac_algebra();
        for k in 0..3 {
            for l in 0..3 {
                let anti = alg.pauli[k] * alg.pauli[l] + alg.pauli[l] * alg.pauli[k];
                let expect = if k == l { C2::identity() * c(2.0, 0.0) } else { C2::zeros() };
                assert_eq!(anti, expect, "sigma_{k} sigma_{l}");
            }
            assert_eq!(alg.pauli[k].adjoint(), alg.pauli[k]);
        }
    }

    #[test]
    fn dirac_anticommutator_table_exact() {
        let alg = dirac_algebra();
        for k in 0..3 {
            assert_eq!(alg.alpha[k].adjoint(), alg.alpha[k]);
            assert_eq!(alg.alpha[k] * alg.alpha[k], C4::identity());
            assert_eq!(
                alg.alpha[k] * alg.beta + alg.beta * alg.alpha[k],
                C4::zeros()
            );
            for j in 0..3 {
                if j != k {
                    assert_eq!(
                        alg.alpha[k] * alg.alpha[j] + alg.alpha[j] * alg.alpha[k],
                        C4::zeros()
                    );
                }
            }
        }
        assert_eq!(alg.beta.adjoint(), alg.beta);
        assert_eq!(alg.beta * alg.beta, C4::identity());
    }

    #[test]
    fn alpha3_block_structure() {
        let alg = dirac_algebra();
        // alpha_3 = [[0, sigma_3], [sigma_3, 0]]
        let a3 = alg.alpha[2];
        assert_eq!(a3[(0, 2)], c(1.0, 0.0));
        assert_eq!(a3[(1, 3)], c(-1.0, 0.0));
        assert_eq!(a3[(2, 0)], c(1.0, 0.0));
        assert_eq!(a3[(3, 1)], c(-1.0, 0.0));
        assert_eq!(a3[(0, 0)], ZERO);
        assert_eq!(a3[(0, 3)], ZERO);
    }

    #[test]
    fn gamma5_off_diagonal_identity_blocks() {
        // brute-force product -i a1 a2 a3 must be [[0, I], [I, 0]]
        let alg = dirac_algebra();
        let mut expect = C4::zeros();
        for i in 0..2 {
            expect[(i, i + 2)] = ONE;
            expect[(i + 2, i)] = ONE;
        }
        assert_eq!(alg.gamma5, expect);
    }

    #[test]
    fn identity_boost() {
        let f = boost_frame(Vector3::zeros()).unwrap();
        assert_eq!(f.gamma, 1.0);
        assert!(max_entry_norm(&(f.s - C4::identity())) == 0.0);
        assert!((f.lambda - Matrix4::identity()).abs().max() == 0.0);
        assert_eq!(check_covariance(&f), 0.0);
    }

    #[test]
    fn axis_boost_closed_form() {
        // v = (0,0,0.6): gamma = 1.25, S = sqrt(1.125) (I + alpha_3/3).
        let f = boost_frame(Vector3::new(0.0, 0.0, 0.6)).unwrap();
        assert!((f.gamma - 1.25).abs() < 1e-15);
        let alg = dirac_algebra();
        let expect =
            (C4::identity() + alg.alpha[2] * c(1.0 / 3.0, 0.0)) * c(1.125f64.sqrt(), 0.0);
        assert!(max_entry_norm(&(f.s - expect)) < 1e-15);
    }

    #[test]
    fn lambda_inverse_is_opposite_velocity() {
        let f = boost_frame(Vector3::new(0.3, 0.4, 0.0)).unwrap();
        let prod = f.lambda * f.lambda_inv;
        assert!((prod - Matrix4::identity()).abs().max() < 1e-12);
        // det Lambda_v = 1
        assert!((f.lambda.determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn covariance_residual_tiny_and_detects_corruption() {
        let v = Vector3::new(0.0, 0.0, 0.9);
        let f = boost_frame(v).unwrap();
        assert!(check_covariance(&f) <= 1e-12);

        // replace S by the identity: the mu = 0 relation alone leaves a
        // residual of size ||gamma(alpha.v + I) - I|| >= gamma |v|.
        let mut corrupted = f.clone();
        corrupted.s = C4::identity();
        let res = check_covariance(&corrupted);
        assert!(
            res >= corrupted.gamma * v.norm(),
            "residual {res} too small to flag corruption"
        );
    }

    #[test]
    fn spinor_boost_identities_417() {
        let alg = dirac_algebra();
        for v in [
            Vector3::new(0.0, 0.0, 0.6),
            Vector3::new(0.3, 0.4, 0.0),
            Vector3::new(-0.2, 0.5, 0.55),
        ] {
            let f = boost_frame(v).unwrap();
            let s_adj = f.s.adjoint();
            // S* = S
            assert!(max_entry_norm(&(s_adj - f.s)) < 1e-13);
            // S_{-v} = S^{-1}
            assert!(max_entry_norm(&(f.s * f.s_inv - C4::identity())) < 1e-13);
            // S^2 = gamma (alpha.v + I)
            let rhs = (alg.alpha_dot(&v) + C4::identity()) * c(f.gamma, 0.0);
            assert!(max_entry_norm(&(f.s * f.s - rhs)) < 1e-12);
            // S* beta S = beta
            assert!(max_entry_norm(&(s_adj * alg.beta * f.s - alg.beta)) < 1e-12);
            // S* alpha_j S = alpha_j + gamma v_j + v_j (gamma-1)/|v|^2 alpha.v
            let kappa = boost_kappa(&v, f.gamma);
            let adotv = alg.alpha_dot(&v);
            for j in 0..3 {
                let lhs = s_adj * alg.alpha[j] * f.s;
                let rhs = alg.alpha[j]
                    + C4::identity() * c(f.gamma * v[j], 0.0)
                    + adotv * c(kappa * v[j], 0.0);
                assert!(max_entry_norm(&(lhs - rhs)) < 1e-12);
            }
            // second identity of (3.5): gamma (I - alpha.v) S_v = S_v^{-1}
            let lhs = (C4::identity() - alg.alpha_dot(&v)) * c(f.gamma, 0.0) * f.s;
            assert!(max_entry_norm(&(lhs - f.s_inv)) < 1e-12);
        }
    }

    #[test]
    fn superluminal_rejected() {
        assert!(matches!(
            boost_frame(Vector3::new(0.8, 0.6, 0.1)),
            Err(Error::SuperluminalVelocity { .. })
        ));
        assert!(boost_frame_1d(1.0).is_err());
    }

    #[test]
    fn one_dimensional_boost_relations() {
        let alg = dirac_algebra();
        for v in [0.3, 0.6, 0.9, -0.75] {
            let f = boost_frame_1d(v).unwrap();
            let s_adj = f.s.adjoint();
            let alpha = alg.alpha_1d;
            let beta = alg.beta_1d;
            // alpha* = alpha, alpha^2 = I, alpha beta + beta alpha = 0
            assert_eq!(alpha.adjoint(), alpha);
            assert_eq!(alpha * alpha, C2::identity());
            assert_eq!(alpha * beta + beta * alpha, C2::zeros());
            // S* beta S = beta
            assert!(max_entry_norm2(&(s_adj * beta * f.s - beta)) < 1e-13);
            // S* S = gamma (v alpha + I)
            let rhs = (alpha * c(v, 0.0) + C2::identity()) * c(f.gamma, 0.0);
            assert!(max_entry_norm2(&(s_adj * f.s - rhs)) < 1e-12);
            // S* alpha S = gamma (v I + alpha)
            let rhs = (C2::identity() * c(v, 0.0) + alpha) * c(f.gamma, 0.0);
            assert!(max_entry_norm2(&(s_adj * alpha * f.s - rhs)) < 1e-12);
            // S_{-v} = S^{-1}
            assert!(max_entry_norm2(&(f.s * f.s_inv - C2::identity())) < 1e-13);
        }
    }
}
