//! Optimal uniform rational approximation of the sign function on two-
//! and three-band subsets of the real line.
//!
//! The crate builds the classical two-band Zolotarev fractions, the
//! genus-2 Stiefel solutions for three bands, and four further
//! three-band families (genus 1 and genus 3), all evaluated through
//! elliptic functions and abelian integrals on hyperelliptic curves.
//! A verification layer certifies equiripple behaviour, topological
//! class and extremality, and a grid minimax oracle (differential
//! correction over a dense simplex LP) cross-checks constructed
//! solutions at small degree.

pub mod bands;
pub mod conformal;
pub mod elliptic;
pub mod error;
mod quad;
pub mod oracle;
pub mod rational;
mod simplex;
pub mod solutions;
pub mod verify;
pub mod zolotarev;

pub use bands::{BandSystem, Interval, Moebius};
pub use conformal::{sc_solve_forward, HyperellipticData, PolygonSpec};
pub use elliptic::{inverse_x, modulus_from_t, theta, x_map, EllipticModulus};
pub use error::{Error, Result};
pub use oracle::{differential_correction, GridProblem};
pub use rational::RationalFunction;
pub use solutions::{design, forward_construct, FamilyExtras, FilterFamily, FilterSolution};
pub use verify::VerificationReport;
pub use zolotarev::ZolotarevFraction;
