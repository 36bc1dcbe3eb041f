//! Coupled field systems: the Maxwell-Dirac potential/functional layer
//! (evaluation and boost kinematics for given spinors) and the full
//! Klein-Gordon-Dirac pipeline (Yukawa potentials, self-consistent radial
//! solver, functionals, virial identities and boost relations).

pub mod kgd;
pub mod md;
pub mod yukawa;

pub use kgd::{kgd_functionals, kgd_relation_check, kgd_scf_solve, kgd_virial, KgdOptions, KgdState};
pub use md::{md_boost_checks, md_boost_fields, md_functionals, md_potentials, MdPotentials};
pub use yukawa::{coulomb_multipole, operator_residual, yukawa_radial, ScalarFieldRadial};
