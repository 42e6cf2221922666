//! Numerics for fluctuation-induced (Casimir) forces.
//!
//! Reduced units are used throughout: ħ = c = k_B = 1. Temperatures are
//! energies, Matsubara frequencies are `2πnT`, and thermal wavelengths are
//! `λ_T = 1/(2πT)`.
//!
//! The crate builds without `std` (it needs `alloc`); disable default
//! features to get the `no_std` build.

#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` is the NaN-rejecting form used for argument checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod error;
pub mod lattice;
pub mod media;
pub mod piston;
pub mod psa;
pub mod quad;
pub mod regulate;
pub mod roots;
pub mod scatter;
pub mod specfun;

pub use error::{Error, Result};
