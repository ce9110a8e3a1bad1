//! Exact free-field kernel for the Virasoro algebra at central charge
//! `c = 1 - 6 (p₊ - p₋)² / (p₊ p₋)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`scalars`] — rationals, the quadratic field `Q(√D)` with `D = 2 p₊ p₋`,
//!   polynomials in the highest weight, dual numbers.
//! * [`lattice`] — Kac-table bookkeeping: momenta, conformal weights, simple
//!   labels and their blocks, fusion constraint polynomials.
//! * [`fock`] — bosonic Fock modules with partition bases and the
//!   background-charge Virasoro action.
//! * [`verma`] — Verma modules, Gram matrices with symbolic `h`, singular
//!   vectors and irreducible graded dimensions.
//! * [`vertex`] — vertex-operator modes, screening operators as Virasoro
//!   intertwiners, rank profiles and Felder-complex homology.
//! * [`logdef`] — logarithmic deformations of Fock-module direct sums.
//! * [`atlas`] — structural data (blocks, extension groups, socle series,
//!   characters, Zhu centre) with a consistency harness.

pub mod atlas;
pub mod fock;
pub mod lattice;
pub mod linalg;
pub mod logdef;
pub mod scalars;
pub mod verma;
pub mod vertex;

mod error;

pub use error::{Error, Result};
pub use lattice::Params;
pub use scalars::{FieldElem, HPoly, Rat};

/// Library version string embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
