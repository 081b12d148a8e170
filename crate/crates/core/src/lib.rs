//! Vacuum-polarization potentials of point and Fermi-distributed nuclear charges.
//!
//! All quantities are in atomic units (`ħ = m_e = e = 1`, `c = 1/α`), lengths in
//! Bohr radii.

// `!(x > 0.0)` rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod accuracy;
pub mod cli;
pub mod constants;
pub mod error;
pub mod fermi;
pub mod kallen_sabry;
pub mod numdiff;
pub mod quadrature;
pub mod specfun;
pub mod uehling_fermi;
pub mod uehling_point;

pub use accuracy::AccuracyControl;
pub use constants::PhysicalConstants;
pub use error::{Error, Result};
