//! Exact arithmetic for moduli of sheaves on K3 and elliptic surfaces.
//!
//! The crate is `no_std` (it needs `alloc`) and works exclusively with
//! arbitrary-precision integers and rationals. It covers:
//!
//! * [`lattice`]: Néron–Severi lattices of the supported surface models,
//!   Riemann–Roch, Mukai vectors and their algebra.
//! * [`hilbert`]: divisor classes on Hilbert schemes of points and on their
//!   products, tautological section counts, and the pullback constraint solve.
//! * [`fm`]: the lattice action of the relative Fourier–Mukai transform on
//!   elliptic fibrations, derived from its values on known sheaves.
//! * [`duality`]: numerical bookkeeping for strange duality pairs.
//! * [`strata`]: walls in the ample cone, Harder–Narasimhan strata and their
//!   codimension audit.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arith;
pub mod duality;
pub mod error;
pub mod fm;
pub mod hilbert;
pub mod lattice;
pub mod linalg;
pub mod strata;

pub use arith::{binom, int, Int, Rational};
pub use error::{Error, Result};
pub use lattice::{MukaiVector, NsBasis, NsClass, SurfaceModel};
