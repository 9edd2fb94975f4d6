//! Exact electrostatics of a grounded conducting ball on the axis of an
//! axially symmetric external field.
//!
//! When the external potential along the axis is a polynomial, the induced
//! surface charge density is a polynomial of the same degree whose
//! coefficients follow from the inverse of the Legendre moment matrix. This
//! crate builds that matrix algebra in exact rational arithmetic
//! ([`moment_matrix`]), derives charge, multipole moments and force from it
//! ([`electrostatics`]), and cross-checks everything against an independent
//! floating-point collocation solver ([`oracle`]).
//!
//! Batch loops run on rayon when the `parallel` feature is enabled (the
//! default); see [`exec::Strategy`].

pub mod electrostatics;
pub mod exec;
pub mod moment_matrix;
pub mod oracle;
pub mod poly;
pub mod rational;

pub use electrostatics::{
    analyze, axial_force, dipole_moment, induced_axis_potential, multipole_moment,
    solve_charge_density, total_charge, BallReport, ChargeDensity, ExactPhysical, PotentialSpec,
    SpecError, VACUUM_PERMITTIVITY,
};
pub use exec::Strategy;
pub use moment_matrix::{
    build_b, build_d, build_f, build_g, DiagonalMatrix, ExpansionMatrix, InverseMatrix,
    MomentMatrix,
};
pub use rational::Rational;
