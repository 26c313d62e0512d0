//! Exact spectral data, phase-space integrals and sharp inequality constants
//! for the shifted Coulomb Hamiltonian `-Δ - κ/|x| + Λ` in dimension `d ≥ 3`.
//!
//! Everything that can be rational is computed with [`BigRational`]; the few
//! genuinely transcendental quantities (real Riesz exponents, half-integer
//! powers for odd `d`, Gamma functions at non-half-integer points) go through
//! [`HighPrecisionReal`] or rigorous rational [`Enclosure`]s.
//!
//! All physical quantities are reported in units `Λ = 1`, so the coupling
//! enters only through `η = κ/√Λ`.

pub mod error;
pub mod exact;
pub mod figures;
pub mod optima;
pub mod phase_space;
pub mod spectrum;
pub mod verification;
pub mod zoo;

pub use error::{Error, Result};
pub use exact::hpr::{Enclosure, HighPrecisionReal};
pub use exact::poly::Polynomial;
pub use exact::ratfun::RationalFunctionPair;
pub use exact::sturm::{RootBracket, Sign};
pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;

/// Default number of significant decimal digits for the high-precision path.
pub const DEFAULT_PRECISION: u32 = 30;
