use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::arith::{is_prime_u64, mul_mod};
use crate::error::{Error, Result};

/// The prime field Z_p. Validated once; afterwards arithmetic on raw `u64`
/// residues goes through this handle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Accepts any prime below 2^63 (including 2).
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 63 {
            return Err(Error::Validation(format!("p = {p} does not fit in 63 bits")));
        }
        if !is_prime_u64(p) {
            return Err(Error::Validation("p not prime".into()));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, a: u64) -> u64 {
        a % self.p
    }

    pub fn reduce_signed(&self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        // a, b < p < 2^63 so the sum cannot overflow.
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.p <= u32::MAX as u64 {
            a * b % self.p
        } else {
            mul_mod(a, b, self.p)
        }
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn pow_big(&self, base: u64, exp: &BigUint) -> u64 {
        match exp.to_u64() {
            Some(e) => self.pow(base, e),
            None => BigUint::from(base)
                .modpow(exp, &BigUint::from(self.p))
                .to_u64()
                .expect("residue fits"),
        }
    }

    /// Inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: u64) -> Result<u64> {
        if a % self.p == 0 {
            return Err(Error::DivisionByZero);
        }
        let (mut r0, mut r1) = (self.p as i128, (a % self.p) as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Ok(s0.rem_euclid(self.p as i128) as u64)
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn elem(&self, value: u64) -> Fp {
        Fp {
            value: value % self.p,
            modulus: self.p,
        }
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}", self.p)
    }
}

/// A single residue carrying its modulus.
///
/// The operator impls panic on a modulus mismatch; the `checked_*` methods
/// report it as [`Error::ModulusMismatch`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn field(&self) -> PrimeField {
        PrimeField { p: self.modulus }
    }

    fn same(&self, other: &Fp) -> Result<PrimeField> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(self.field())
    }

    pub fn checked_add(&self, other: &Fp) -> Result<Fp> {
        let f = self.same(other)?;
        Ok(f.elem(f.add(self.value, other.value)))
    }

    pub fn checked_sub(&self, other: &Fp) -> Result<Fp> {
        let f = self.same(other)?;
        Ok(f.elem(f.sub(self.value, other.value)))
    }

    pub fn checked_mul(&self, other: &Fp) -> Result<Fp> {
        let f = self.same(other)?;
        Ok(f.elem(f.mul(self.value, other.value)))
    }

    pub fn checked_div(&self, other: &Fp) -> Result<Fp> {
        let f = self.same(other)?;
        Ok(f.elem(f.div(self.value, other.value)?))
    }

    pub fn inv(&self) -> Result<Fp> {
        let f = self.field();
        Ok(f.elem(f.inv(self.value)?))
    }

    pub fn pow(&self, exp: &BigUint) -> Fp {
        let f = self.field();
        f.elem(f.pow_big(self.value, exp))
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        self.checked_add(&rhs).expect("modulus mismatch")
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self.checked_sub(&rhs).expect("modulus mismatch")
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        self.checked_mul(&rhs).expect("modulus mismatch")
    }
}

impl Div for Fp {
    type Output = Fp;
    fn div(self, rhs: Fp) -> Fp {
        self.checked_div(&rhs).expect("division failed")
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        let f = self.field();
        f.elem(f.neg(self.value))
    }
}
