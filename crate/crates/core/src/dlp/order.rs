use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use super::{factor_integer, FactoredInteger, Group, MatrixGroup};
use crate::arith::{big_pow, ceil_log};
use crate::error::{Error, Result};
use crate::ff::factor_poly;
use crate::linalg::{char_poly, MatrixFp};
use crate::rng::SplitMix64;

/// Exact order of `g`, given a multiple of it in factored form: start from
/// the multiple and divide out primes while the power stays the identity.
pub fn element_order<G: Group>(
    group: &G,
    g: &G::Elem,
    multiple: &FactoredInteger,
) -> Result<FactoredInteger> {
    let id = group.identity();
    if group.pow(g, multiple.value()) != id {
        return Err(Error::InvalidInput(format!(
            "element does not satisfy g^{} = 1",
            multiple.value()
        )));
    }
    let mut order = multiple.value().clone();
    for (q, _) in multiple.factors() {
        while order.is_multiple_of(q) {
            let candidate = &order / q;
            if group.pow(g, &candidate) == id {
                order = candidate;
            } else {
                break;
            }
        }
    }
    Ok(multiple.divisor(&order))
}

/// A multiple of the order of an invertible matrix, read from the degrees
/// of its characteristic polynomial's irreducible factors:
/// `lcm(p^d_i - 1) * p^ceil(log_p n)`.
pub fn matrix_order_bound(a: &MatrixFp) -> Result<FactoredInteger> {
    let field = a.field();
    let p = field.modulus();
    let chi = char_poly(a);
    if chi.coeff(0) == 0 && a.dim() > 0 {
        return Err(Error::SingularMatrix);
    }
    let factorization = factor_poly(&chi, &mut SplitMix64::new(0));
    let mut degrees = factorization.degrees();
    degrees.sort_unstable();
    degrees.dedup();
    let mut bound = FactoredInteger::one();
    for d in degrees {
        let units = big_pow(p, d as u32) - 1u32;
        if units.is_zero() {
            continue;
        }
        bound = bound.lcm(&factor_integer(&units)?);
    }
    let unipotent = ceil_log(p, a.dim() as u64);
    let p_power = FactoredInteger::from_prime_powers(vec![(BigUint::from(p), unipotent)]);
    Ok(bound.mul(&p_power))
}

/// Exact multiplicative order of an invertible matrix over Z_p.
pub fn matrix_order(a: &MatrixFp) -> Result<FactoredInteger> {
    let bound = matrix_order_bound(a)?;
    element_order(&MatrixGroup { field: a.field(), n: a.dim() }, a, &bound)
}
