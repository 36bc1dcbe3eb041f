//! Solitary waves of nonlinear Dirac-type field equations.
//!
//! The crate computes localized stationary solutions ("solitary waves") of
//! nonlinear Dirac, Maxwell-Dirac and Klein-Gordon-Dirac equations in natural
//! units, boosts them to arbitrary subluminal velocities, and verifies by
//! independent numerical integration that the energy, momentum and charge of
//! the moving waves obey the relativistic point-particle relations
//!
//! ```text
//!     E_v = gamma * E_0,    P_v = gamma * v * E_0,    Q_v = Q_0,
//! ```
//!
//! together with the full set of virial (Pokhozhaev) identities that certify
//! a numerical profile as an actual solution.
//!
//! Layering, bottom up:
//!
//! * [`clifford`] - exact Pauli-Dirac matrices, Lorentz boosts `Lambda_v`
//!   and spinor boosts `S_v`, with algebraic self-checks;
//! * [`ode`], [`spline`], [`quadrature`] - the numerical kernel (adaptive
//!   Runge-Kutta, cubic-spline sampling, Gauss-Legendre rules in 1D/3D);
//! * [`nonlin`], [`profiles`] - scalar self-interaction models and the
//!   radial shooting solvers for the 3D Soler-type system and the 1D
//!   Gross-Neveu model;
//! * [`ansatz`] - full 3D spinor fields built from radial profiles via the
//!   four explicit angular-momentum families, plus their symmetry checks;
//! * [`functionals`] - quadrature of every scalar functional (I_k, Q, V,
//!   E_0, ...) and the virial-identity suites;
//! * [`boostlab`] - moving solitary waves, their PDE residuals, and the
//!   energy-momentum relation checks by direct integration;
//! * [`coupled`] - Maxwell-Dirac potentials/functionals (evaluation layer)
//!   and the full Klein-Gordon-Dirac self-consistent solver with Yukawa
//!   coupling;
//! * [`report`] - structured pass/fail reports shared by all verification
//!   suites.

pub mod ansatz;
pub mod boostlab;
pub mod clifford;
pub mod coupled;
pub mod error;
pub mod functionals;
pub mod nonlin;
pub mod ode;
pub mod profiles;
pub mod quadrature;
pub mod report;
pub mod spline;

pub use error::Error;
pub type Result<T> = std::result::Result<T, Error>;
