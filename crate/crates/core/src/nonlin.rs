//! Scalar self-interaction models g(s), G(s) with G' = g.
//!
//! The power family g(s) = lambda * sign(s) * |s|^p covers the classical
//! Soler model (p = 1) and its generalizations. G is even, nonnegative and
//! satisfies g(s) s = (p+1) G(s), so the superlinearity condition
//! g(s) s >= theta G(s) holds with theta = p + 1 > 1.

use crate::error::Error;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonlinearityKind {
    /// g(s) = lambda * s (Soler model).
    SolerLinear,
    /// g(s) = lambda * sign(s) * |s|^p.
    Power,
    /// G identically zero (pure mass term; used by the Klein-Gordon-Dirac
    /// system where the binding comes from the Yukawa field).
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonlinearityModel {
    pub kind: NonlinearityKind,
    pub lambda: f64,
    pub exponent: f64,
}

impl NonlinearityModel {
    pub fn soler(lambda: f64) -> Self {
        Self {
            kind: NonlinearityKind::SolerLinear,
            lambda,
            exponent: 1.0,
        }
    }

    pub fn power(lambda: f64, exponent: f64) -> Result<Self, Error> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "power nonlinearity needs lambda > 0, got {lambda}"
            )));
        }
        if !(exponent >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "power nonlinearity needs exponent p >= 1, got {exponent}"
            )));
        }
        Ok(Self {
            kind: NonlinearityKind::Power,
            lambda,
            exponent,
        })
    }

    pub fn zero() -> Self {
        Self {
            kind: NonlinearityKind::Zero,
            lambda: 0.0,
            exponent: 1.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.kind, NonlinearityKind::Zero) || self.lambda == 0.0
    }

    /// g(s).
    pub fn g(&self, s: f64) -> f64 {
        match self.kind {
            NonlinearityKind::SolerLinear => self.lambda * s,
            NonlinearityKind::Power => {
                if self.exponent == 1.0 {
                    self.lambda * s
                } else {
                    self.lambda * s.signum() * s.abs().powf(self.exponent)
                }
            }
            NonlinearityKind::Zero => 0.0,
        }
    }

    /// G(s) = integral of g from 0 to s.
    pub fn g_integral(&self, s: f64) -> f64 {
        match self.kind {
            NonlinearityKind::SolerLinear => 0.5 * self.lambda * s * s,
            NonlinearityKind::Power => {
                if self.exponent == 1.0 {
                    0.5 * self.lambda * s * s
                } else {
                    let p1 = self.exponent + 1.0;
                    self.lambda * s.abs().powf(p1) / p1
                }
            }
            NonlinearityKind::Zero => 0.0,
        }
    }

    /// g(s) s - G(s); the integrand of the positivity identities.
    pub fn gs_minus_big_g(&self, s: f64) -> f64 {
        self.g(s) * s - self.g_integral(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn soler_matches_power_p1() {
        let a = NonlinearityModel::soler(2.5);
        let b = NonlinearityModel::power(2.5, 1.0).unwrap();
        for s in [-3.0, -0.2, 0.0, 0.7, 4.0] {
            assert_eq!(a.g(s), b.g(s));
            assert_eq!(a.g_integral(s), b.g_integral(s));
        }
    }

    #[test]
    fn superlinearity_theta() {
        // g(s) s = (p+1) G(s) for the power family, s of either sign.
        let m = NonlinearityModel::power(1.3, 2.0).unwrap();
        for s in [-2.0, -0.3, 0.4, 1.9] {
            let lhs = m.g(s) * s;
            let rhs = (m.exponent + 1.0) * m.g_integral(s);
            assert!((lhs - rhs).abs() <= 1e-14 * lhs.abs().max(1.0));
        }
    }

    #[test]
    fn g_is_derivative_of_big_g() {
        let m = NonlinearityModel::power(0.8, 1.5).unwrap();
        let h = 1e-6;
        for s in [-1.5, -0.4, 0.3, 2.2] {
            let fd = (m.g_integral(s + h) - m.g_integral(s - h)) / (2.0 * h);
            assert!((fd - m.g(s)).abs() < 1e-8, "s={s}: fd={fd} g={}", m.g(s));
        }
        assert_eq!(m.g_integral(0.0), 0.0);
        assert_eq!(m.g(0.0), 0.0);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(NonlinearityModel::power(-1.0, 1.0).is_err());
        assert!(NonlinearityModel::power(1.0, 0.5).is_err());
    }
}
