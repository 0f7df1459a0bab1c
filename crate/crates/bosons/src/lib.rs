//! Symmetric (Boson) quantum states over C^n: spectral norms, geometric
//! entanglement, Haar sampling, epsilon-net certificates, and seeded Monte
//! Carlo experiment suites.
//!
//! The crate stores a symmetric m-mode tensor as its coordinate vector in
//! the orthonormal symmetric basis, so the Hilbert-Schmidt norm is the
//! Euclidean norm and Haar-random states are exactly uniform sphere vectors.
//! On top of that representation it provides
//!
//! * multi-index combinatorics and basis conversions ([`index`], [`tensor`]),
//! * spectral-norm optimization, a qubit grid oracle, and closed forms for
//!   basis states ([`spectral`]),
//! * reproducible Haar sampling keyed by (seed, stream, substream)
//!   ([`sampling`]),
//! * covering nets on the phase-quotient sphere with cardinality
//!   certificates and rigorous upper-bound certification ([`nets`]),
//! * seeded statistical experiment suites with machine-readable reports
//!   ([`experiments`]).
//!
//! Core numerics are generic over the floating scalar through
//! [`scalar::Real`]; the aliases below fix the common concrete choices.

pub mod cvec;
pub mod error;
pub mod experiments;
pub mod index;
pub mod io;
pub mod nets;
pub mod sampling;
pub mod scalar;
pub mod spectral;
pub mod tensor;

pub use error::{Error, Result};
pub use scalar::Real;

/// Complex scalar over f64.
pub type C64 = num_complex::Complex<f64>;
/// Complex scalar over f32.
pub type C32 = num_complex::Complex<f32>;

/// Double-precision symmetric tensor.
pub type SymTensor64 = tensor::SymmetricTensor<f64>;
/// Single-precision symmetric tensor.
pub type SymTensor32 = tensor::SymmetricTensor<f32>;
/// Double-precision Boson state.
pub type Boson64 = tensor::BosonState<f64>;
/// Single-precision Boson state.
pub type Boson32 = tensor::BosonState<f32>;
/// Double-precision epsilon net.
pub type Net64 = nets::EpsilonNet<f64>;
