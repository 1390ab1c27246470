//! Laplace eigenvalues under mixed Steklov/Neumann/Robin/Dirichlet boundary
//! conditions on planar domains.
//!
//! The crate is `no_std` (it needs `alloc`) and splits into:
//!
//! - [`geometry`]: domains, boundary partitions, support heights and signed face distances.
//! - [`specfun`]: integer-order Bessel functions and the zeros the half-disk spectra are built from.
//! - [`closed_form`]: exact spectra and normalized eigenfunctions of the canonical domains.
//! - [`fem`]: P1 triangular discretization and a generalized symmetric eigensolver.
//! - [`inequalities`]: Kuttler-Sigillito and Robin comparison bounds, Weyl-law sanity checks.
//! - [`rellich`]: boundary integrals, Rellich and Rellich-Christianson identities, scaling
//!   (Hadamard) checks.
//!
//! File formats, reports and the command-line tool live in the `mixspec` crate.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod closed_form;
pub mod error;
pub mod fem;
pub mod geometry;
pub mod inequalities;
pub mod quadrature;
pub mod rellich;
pub mod specfun;

pub use error::{Error, Result};
pub use geometry::{BoundaryCondition, DomainKind, DomainSpec, Point2};
