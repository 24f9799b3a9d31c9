use std::fmt;

use num_bigint::BigUint;

use crate::arith::big_pow;
use crate::error::{Error, Result};
use crate::ff::PrimeField;

/// Parameters of UT(n, p): `n >= 3` and `p` an odd prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupParams {
    n: usize,
    field: PrimeField,
}

impl GroupParams {
    pub fn new(n: usize, p: u64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Validation("n must be ≥ 3".into()));
        }
        let field = PrimeField::new(p)?;
        if p == 2 {
            return Err(Error::Validation("p not an odd prime".into()));
        }
        Ok(Self { n, field })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.field.modulus()
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Number of strictly upper entries, n(n-1)/2.
    pub fn root_count(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    /// |G| = p^(n(n-1)/2).
    pub fn group_order(&self) -> BigUint {
        big_pow(self.p(), self.root_count() as u32)
    }

    /// Dimension of the Frattini quotient, n - 1.
    pub fn rank(&self) -> usize {
        self.n - 1
    }
}

impl fmt::Display for GroupParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UT({}, {})", self.n, self.p())
    }
}
