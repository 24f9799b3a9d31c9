//! The p-group UT(n, p) of upper unitriangular matrices over Z_p.
//!
//! Elements, the standard minimal generators `x_i = I + e_{i,i+1}`,
//! automorphisms given by generator images, the projection onto the
//! Frattini quotient `G / Phi(G) = Z_p^(n-1)`, and the linear map an
//! automorphism induces there.
//!
//! Indices in the Rust API are 0-based: `x_i` for `i in 0..n-1` and root
//! positions `(i, j)` with `i < j < n`. The JSON format uses 1-based indices.

mod automorphism;
mod element;
mod frattini;
mod oracle;
mod params;

pub use automorphism::{graph_flip_matrix, Automorphism, PrivatePart};
pub use element::{canonical_positions, generators, UtElement};
pub use frattini::{frattini_project, induced_map, FrattiniVector};
pub use oracle::{frattini_bruteforce, generated_subgroup_size, FrattiniOracle, ORACLE_LIMIT};
pub use params::GroupParams;
