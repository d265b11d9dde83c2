//! Chebyshev rational approximation (CRAM) of the exponential on the
//! negative real axis.
//!
//! The crate ships the order-14 and order-16 partial-fraction coefficients,
//! checks them numerically (error curves, equioscillation, sup error,
//! convergence ratio between orders, polynomial round trip), measures how
//! coefficient perturbations degrade the approximation, and applies the
//! approximation to `exp(At)·x0` through shifted complex linear solves.
//!
//! All arithmetic runs in extended-precision decimal ([`xprec`]).

pub mod coeffs;
pub mod errcurve;
pub mod error;
pub mod exec;
pub mod matexp;
pub mod ratfun;
pub mod refit;
pub mod sensitivity;
pub mod xprec;

pub use coeffs::{builtin_set, CoefficientSet};
pub use error::{Error, Result};
pub use exec::Exec;
pub use xprec::{XComplex, XReal};
