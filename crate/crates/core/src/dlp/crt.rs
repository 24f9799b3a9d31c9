use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// `r mod modulus` with `0 <= r < modulus`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residue {
    r: BigUint,
    modulus: BigUint,
}

impl Residue {
    pub fn new(r: BigUint, modulus: BigUint) -> Result<Self> {
        if modulus.is_zero() {
            return Err(Error::InvalidInput("residue modulus must be at least 1".into()));
        }
        Ok(Self { r: r % &modulus, modulus })
    }

    pub fn from_u64(r: u64, modulus: u64) -> Result<Self> {
        Self::new(BigUint::from(r), BigUint::from(modulus))
    }

    pub fn r(&self) -> &BigUint {
        &self.r
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn contains(&self, x: &BigUint) -> bool {
        (x % &self.modulus) == self.r
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.r, self.modulus)
    }
}

/// Combines congruences into one modulo the lcm of the moduli. Moduli need
/// not be coprime; disagreement on a shared factor is `Inconsistent`.
pub fn crt_combine(residues: &[Residue]) -> Result<Residue> {
    let (first, rest) = residues
        .split_first()
        .ok_or_else(|| Error::InvalidInput("no residues to combine".into()))?;
    let mut acc = first.clone();
    for next in rest {
        acc = combine_pair(&acc, next)?;
    }
    Ok(acc)
}

fn combine_pair(a: &Residue, b: &Residue) -> Result<Residue> {
    let (m, n) = (to_int(&a.modulus), to_int(&b.modulus));
    let (ra, rb) = (to_int(&a.r), to_int(&b.r));
    let egcd = m.extended_gcd(&n);
    let g = egcd.gcd;
    let diff = &rb - &ra;
    if !(&diff % &g).is_zero() {
        return Err(Error::Inconsistent(format!("{a} and {b} disagree")));
    }
    let n_g = &n / &g;
    // m * x = diff (mod n) with x = (diff / g) * inv(m / g) mod (n / g); egcd.x is that inverse.
    let x = ((&diff / &g) * &egcd.x).mod_floor(&n_g);
    let lcm = &m * &n_g;
    let r = (&ra + &m * x).mod_floor(&lcm);
    Residue::new(to_uint(&r), to_uint(&lcm))
}

fn to_int(x: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, x.clone())
}

fn to_uint(x: &BigInt) -> BigUint {
    x.to_biguint().expect("non-negative")
}

impl Default for Residue {
    fn default() -> Self {
        Self { r: BigUint::zero(), modulus: BigUint::one() }
    }
}
