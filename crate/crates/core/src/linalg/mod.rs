//! Exact square matrices over Z_p and over extension fields.

mod charpoly;
mod ext;
mod jordan;
mod matrix;

pub use charpoly::char_poly;
pub use ext::MatrixExt;
pub use jordan::jordan_exponent_residue;
pub(crate) use jordan::proportionality;
pub use matrix::MatrixFp;
