//! Prime-field polynomial kernel for generalized binomial edge ideals.
//!
//! Everything is generic over a [`PrimeField`]; the aliases below fix the default primes.

pub mod dimension;
pub mod error;
pub mod field;
pub mod groebner;
pub mod ideal;
pub mod monomial;
pub mod oracle;
pub mod poly;
pub mod resolution;
pub mod ring;

pub use error::{AlgebraError, Result};
pub use field::{Fp, PrimeField};
pub use ideal::Ideal;
pub use monomial::{Monomial, MonomialOrder};
pub use poly::Polynomial;
pub use resolution::{BettiTable, ResCaps};
pub use ring::RingContext;

/// The default coefficient field `F_32003`.
pub type F32003 = Fp<32003>;
/// The second prime used for characteristic-stability checks.
pub type F31991 = Fp<31991>;
pub type Poly = Polynomial<F32003>;
pub type DefaultIdeal = Ideal<F32003>;
