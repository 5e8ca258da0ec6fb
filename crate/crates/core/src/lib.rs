//! Logarithmic residues of divisor germs.
//!
//! A germ `D = {h = 0}` in `(C^n, 0)` carries the modules of logarithmic
//! vector fields and 1-forms, the residue module `R_D`, its dual the Jacobian
//! ideal, the normalization `Õ_D` and the conductor `C_D`. This crate computes
//! them exactly over the rationals and decides the conditions relating them.

pub mod branch;
pub mod corpus;
pub mod criteria;
pub mod error;
pub mod fractional;
pub mod puiseux;
pub mod germ;
pub mod normalization;
pub mod report;
pub mod residues;

pub use error::{CoreError, Result};
pub use fractional::{FractionalIdeal, MeroFraction};
pub use germ::{DivisorGerm, EulerField, Freeness, SaitoMatrix, VectorField};
pub use residues::{LogOneForm, ResidueCertificate};
