//! Polyhedral harmonics of the isohedral triakis tetrahedra and octahedra.
//!
//! The algebra is generic over [`Scalar`]: exact rationals for everything
//! that lives over the rationals (PDE kernels, identities among invariants,
//! root isolation), and a fixed-precision binary float for the geometric side,
//! where incidence numbers carry square roots.

pub mod acceptance;
pub mod critical;
pub mod error;
pub mod geometry;
pub mod group;
pub mod harmonic;
pub mod invariants;
pub mod linalg;
pub mod meanvalue;
pub mod poly;
pub mod scalar;

pub use error::{Error, Result};
pub use poly::{Axis, LinearForm, Monomial, Polynomial};
pub use scalar::{parse_rational, Float, Rational, Real, Scalar};

/// 100-bit working precision, the default for geometric assembly.
pub type Float100 = Float<100>;
/// 128-bit precision used by the radical identity checks.
pub type Float128 = Float<128>;

pub type ExactPolynomial = Polynomial<Rational>;
pub type FloatPolynomial = Polynomial<Float100>;
