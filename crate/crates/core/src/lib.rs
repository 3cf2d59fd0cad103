//! Norms of free-group automorphisms and the cost of inverting them.
//!
//! The crate works in the free group `F_r` on the standard basis
//! `a_1, …, a_r`. It provides exact word algebra ([`words`]), endomorphisms
//! with p-norms and abelianization ([`morphisms`]), basis recognition and
//! inversion by Nielsen reduction ([`nielsen`]), outer norms ([`outer`]), the
//! constructive rank-two theory ([`rank2`]), explicit lower-bound families
//! ([`families`]), and exhaustive computation of the inversion-gap functions
//! `α_r(n)` and `β_r(n)` ([`enumerate`]).
//!
//! Automorphisms act on the right: `compose(φ, θ)` means "`φ`, then `θ`".
//!
//! Integer matrices are generic over the scalar ([`matrix::Matrix`]);
//! [`IntMatrix`] is the 64-bit instance used by the abelianization map and
//! [`WideMatrix`] is available where entries can outgrow it.

pub mod enumerate;
pub mod error;
pub mod families;
pub mod matrix;
pub mod morphisms;
pub mod nielsen;
pub mod outer;
pub mod rank2;
pub mod words;

pub use error::{Error, Result};
pub use morphisms::{Automorphism, Endomorphism, PNorm};
pub use words::{AbelianVector, Letter, Word};

/// Abelianization matrices and the `M^(p)` / `N^(p)` families.
pub type IntMatrix = matrix::Matrix<i64>;

/// 128-bit matrices for products whose entries exceed 64 bits.
pub type WideMatrix = matrix::Matrix<i128>;
