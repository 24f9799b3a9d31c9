//! Exact arithmetic in Z_p, in Z_p[x], and in extension fields Z_p[x]/(f).

mod ext;
mod factor;
mod poly;
mod prime;

pub use ext::{ExtElem, ExtField};
pub use factor::{distinct_degree, equal_degree, factor_poly, is_irreducible, squarefree, Factorization};
pub use poly::Poly;
pub use prime::{Fp, PrimeField};
