//! The MOR public-key cryptosystem over the unitriangular p-groups UT(n, p),
//! together with an executable attack that linearizes the public
//! automorphism on the Frattini quotient and reduces the resulting matrix
//! discrete logarithm to discrete logarithms in finite-field extensions.
//!
//! Module map:
//! - [`ff`]: prime fields, polynomials over them, factorization, extension fields.
//! - [`linalg`]: exact matrices, characteristic polynomials, kernels, Jordan residues.
//! - [`dlp`]: integer factorization, element orders, BSGS, Pohlig-Hellman, CRT.
//! - [`utgroup`]: the group UT(n, p), its automorphisms and its Frattini quotient.
//! - [`morsys`]: key generation, encryption, decryption and the canonical JSON format.
//! - [`attack`]: the reduction from a public key to finite-field discrete logarithms.
//!
//! Everything is exact. No floating point is used anywhere in the arithmetic.

pub mod arith;
pub mod attack;
pub mod dlp;
pub mod error;
pub mod ff;
pub mod linalg;
pub mod morsys;
pub mod rng;
pub mod utgroup;

pub use error::{Error, Result};
pub use rng::SplitMix64;
