//! Numerical laboratory for the Mahler measures of four genus-one polynomial
//! families, evaluated by four independent methods that cross-validate each
//! other at desk precision:
//!
//! - direct torus integration after Jensen reduction ([`torus`]),
//! - lacunary q-series driven by the base products M, N, G, R ([`qseries`]),
//! - generalized hypergeometric closed forms ([`hypergeom`]),
//! - Kronecker–Eisenstein lattice sums over half-period lattices ([`regulator`]).
//!
//! The [`lfun`] module supplies elliptic-curve L-functions from point counting
//! (validated against eta-product newform expansions) so that measure/L-value
//! identities such as m(2+x+1/x+y+1/y) = L'(E,0) can be checked numerically.
//! The [`harness`] module packages every identity as a runnable residual check
//! with machine-readable reports.
//!
//! All computation is f64; every public tolerance in the harness is calibrated
//! to that precision.

pub mod error;
pub mod harness;
pub mod hypergeom;
pub mod lfun;
pub mod nome;
pub mod numkit;
pub mod qseries;
pub mod regulator;
pub mod torus;

pub use error::Error;

/// Build-wide real scalar.
pub type Real = f64;
/// Build-wide complex scalar.
pub type Cx = num_complex::Complex64;

/// Convenience result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
