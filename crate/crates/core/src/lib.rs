//! 1-factors of the complete graph on `F_p ∪ {c}` whose edges join a quadratic
//! residue to a non-residue and have pairwise distinct lengths, together with
//! the Paley-type sign matrix they are compatible with and the number-theoretic
//! machinery (primitive roots, quartic characters, explicit bounds) that
//! guarantees such factors exist.

pub mod bounds;
pub mod construction;
pub mod error;
pub mod numtheory;
pub mod paley;
pub mod scan;
pub mod sieve;
pub mod verification;

pub use bounds::{BoundsCase, BoundsReport, CharSpec, GaussianInt};
pub use construction::{Edge, IndexSets, Length, Method, OneFactor, Vertex};
pub use error::{Error, Result};
pub use numtheory::{Factorization, PrimeContext};
pub use paley::{Factorization as OneFactorization, SignMatrix};

pub use verification::VerificationReport;
