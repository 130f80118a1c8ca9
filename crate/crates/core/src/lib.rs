//! Exact enumeration, classification and counting of square-tiled surfaces
//! in the genus-two stratum H(2).
//!
//! The crate is `no_std` and only needs `alloc`. It is organised bottom-up:
//!
//! - [`arith`]: divisor sums, Möbius and Euler functions, Dirichlet
//!   convolution, and the convolution sums `S_k`.
//! - [`qseries`]: truncated q-expansions with exact rational coefficients,
//!   Eisenstein series, the derivation `D`, twists and exact basis fitting.
//! - [`counting`]: closed-form orbit counts and the component formulas they
//!   are assembled from.
//! - [`origami`]: permutation-pair representation, stratum detection, the
//!   SL(2,Z) generator action, canonical forms, orbit search and the
//!   hyperelliptic involution.
//! - [`surfaces`]: cylinder coordinates, enumeration, period lattices,
//!   reduce/inflate and type A/B classification.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod arith;
pub mod counting;
pub mod origami;
pub mod qseries;
pub mod surfaces;

pub use arith::Rational;
pub use origami::{Origami, OrbitReport, SurfaceType, WeierstrassReport};
pub use qseries::{DirichletCharacter, QMBasis, QSeries};
pub use surfaces::{LatticeHNF, OneCylSurface, Surface, TwoCylSurface};
