//! Generic discrete-logarithm machinery: integer factorization, CRT,
//! element orders, and three interchangeable solvers (exhaustive search,
//! baby-step giant-step, Pohlig-Hellman).

mod crt;
mod group;
mod integer;
mod order;
mod solve;

pub use crt::{crt_combine, Residue};
pub use group::{ExtUnits, Group, MatrixGroup, PrimeUnits};
pub use integer::{factor_integer, factor_integer_with, FactoredInteger, RHO_ITERATION_BUDGET};
pub use order::{element_order, matrix_order, matrix_order_bound};
pub use solve::{bsgs, exhaustive, pohlig_hellman, solve, Solver, SolverConfig, DEFAULT_CEILING_BITS};
