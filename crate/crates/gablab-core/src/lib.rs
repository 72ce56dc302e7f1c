//! Gabor analysis on finite abelian groups.
//!
//! A group `Z_{n1} x ... x Z_{nk}` is described by its moduli list. On top of
//! it the crate builds time-frequency (Gabor) systems over subgroup lattices,
//! computes frame/Riesz spectra, constructs Riesz duals of Gabor frames, and
//! runs density/completeness diagnostics. Everything is dense linear algebra
//! over `Complex64`; group-theoretic quantities (annihilators, coset sections,
//! lattice densities) are computed in exact integer arithmetic.
//!
//! The crate is `no_std` (with `alloc`); IO, serialization and the CLI live in
//! the companion `gablab` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod density;
pub mod gabor;
pub mod group;
pub mod mat;
pub mod rdual;
pub mod rng;
pub mod spectral;

// The numeric scalar types appearing in public signatures, re-exported so
// downstream crates agree on the exact versions.
pub use num_complex::Complex64;
pub use num_rational::Ratio;
