use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigUint;

use super::{is_irreducible, Poly, PrimeField};
use crate::arith::big_pow;
use crate::error::{Error, Result};

/// The field F_{p^d} = Z_p[x]/(f) for a monic irreducible `f` of degree `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtField {
    modulus: Poly,
}

impl ExtField {
    pub fn new(modulus: Poly) -> Result<Arc<Self>> {
        if !modulus.is_monic() {
            return Err(Error::Validation("extension modulus must be monic".into()));
        }
        if !is_irreducible(&modulus) {
            return Err(Error::Validation(format!(
                "extension modulus {modulus} is not irreducible"
            )));
        }
        Ok(Arc::new(Self { modulus }))
    }

    pub fn base(&self) -> PrimeField {
        self.modulus.field()
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().expect("nonzero modulus")
    }

    /// p^d.
    pub fn size(&self) -> BigUint {
        big_pow(self.base().modulus(), self.degree() as u32)
    }

    /// p^d - 1, the order of the unit group.
    pub fn unit_order(&self) -> BigUint {
        self.size() - 1u32
    }
}

/// An element of an [`ExtField`], represented by a polynomial of degree below `d`.
///
/// Operators panic when the contexts differ; `checked_*` methods return
/// [`Error::ContextMismatch`] instead.
#[derive(Debug, Clone)]
pub struct ExtElem {
    ctx: Arc<ExtField>,
    rep: Poly,
}

impl PartialEq for ExtElem {
    fn eq(&self, other: &Self) -> bool {
        self.rep == other.rep && same_context(&self.ctx, &other.ctx)
    }
}

impl Eq for ExtElem {}

impl Hash for ExtElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rep.coeffs().hash(state);
    }
}

fn same_context(a: &Arc<ExtField>, b: &Arc<ExtField>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl ExtElem {
    pub fn new(ctx: &Arc<ExtField>, rep: Poly) -> Self {
        let rep = rep.rem(ctx.modulus()).expect("nonzero modulus");
        Self { ctx: ctx.clone(), rep }
    }

    pub fn zero(ctx: &Arc<ExtField>) -> Self {
        Self::new(ctx, Poly::zero(ctx.base()))
    }

    pub fn one(ctx: &Arc<ExtField>) -> Self {
        Self::from_base(ctx, 1)
    }

    /// The class of `x`, a root of the defining polynomial.
    pub fn generator(ctx: &Arc<ExtField>) -> Self {
        Self::new(ctx, Poly::x(ctx.base()))
    }

    pub fn from_base(ctx: &Arc<ExtField>, c: u64) -> Self {
        Self::new(ctx, Poly::constant(ctx.base(), c))
    }

    pub fn context(&self) -> &Arc<ExtField> {
        &self.ctx
    }

    pub fn rep(&self) -> &Poly {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rep.is_one()
    }

    /// `Some(c)` when the element lies in the prime field.
    pub fn as_base(&self) -> Option<u64> {
        match self.rep.degree() {
            None => Some(0),
            Some(0) => Some(self.rep.coeff(0)),
            _ => None,
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_context(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { ctx: self.ctx.clone(), rep: self.rep.add(&other.rep) })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { ctx: self.ctx.clone(), rep: self.rep.sub(&other.rep) })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::new(&self.ctx, self.rep.mul(&other.rep)))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn scale(&self, c: u64) -> Self {
        Self { ctx: self.ctx.clone(), rep: self.rep.scale(c) }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, s, _) = self.rep.ext_gcd(self.ctx.modulus());
        debug_assert!(g.is_one());
        Ok(Self::new(&self.ctx, s))
    }

    pub fn pow(&self, exp: &BigUint) -> Self {
        let mut acc = Self::one(&self.ctx);
        for i in (0..exp.bits()).rev() {
            acc = &acc * &acc;
            if exp.bit(i) {
                acc = &acc * self;
            }
        }
        acc
    }

    pub fn pow_u64(&self, exp: u64) -> Self {
        self.pow(&BigUint::from(exp))
    }
}

impl fmt::Display for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

impl Add for &ExtElem {
    type Output = ExtElem;
    fn add(self, rhs: &ExtElem) -> ExtElem {
        self.checked_add(rhs).expect("extension context mismatch")
    }
}

impl Sub for &ExtElem {
    type Output = ExtElem;
    fn sub(self, rhs: &ExtElem) -> ExtElem {
        self.checked_sub(rhs).expect("extension context mismatch")
    }
}

impl Mul for &ExtElem {
    type Output = ExtElem;
    fn mul(self, rhs: &ExtElem) -> ExtElem {
        self.checked_mul(rhs).expect("extension context mismatch")
    }
}

impl Neg for &ExtElem {
    type Output = ExtElem;
    fn neg(self) -> ExtElem {
        ExtElem { ctx: self.ctx.clone(), rep: self.rep.neg() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn f25() -> Arc<ExtField> {
        let z5 = PrimeField::new(5).unwrap();
        ExtField::new(Poly::new(z5, vec![2, 0, 1])).unwrap()
    }

    fn random(ctx: &Arc<ExtField>, rng: &mut SplitMix64) -> ExtElem {
        let p = ctx.base().modulus();
        let coeffs = (0..ctx.degree()).map(|_| rng.below(p)).collect();
        ExtElem::new(ctx, Poly::new(ctx.base(), coeffs))
    }

    /// Naive oracle: multiply coefficient lists, then reduce by repeated
    /// subtraction of shifted multiples of the modulus.
    fn naive_mul(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
        let mut prod = vec![0u64; a.len() + b.len()];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let d = modulus.len() - 1;
        for k in (d..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for (j, m) in modulus.iter().enumerate() {
                prod[k - d + j] = (prod[k - d + j] + p * p - c * m % p) % p;
            }
        }
        prod.truncate(d);
        while prod.last() == Some(&0) {
            prod.pop();
        }
        prod
    }

    #[test]
    fn x_squared_in_f25() {
        let ctx = f25();
        let x = ExtElem::generator(&ctx);
        assert_eq!((&x * &x).as_base(), Some(3));
        assert!((&x.inv().unwrap() * &x).is_one());
    }

    #[test]
    fn lagrange_and_frobenius() {
        let ctx = f25();
        let mut rng = SplitMix64::new(11);
        for _ in 0..100 {
            let a = random(&ctx, &mut rng);
            assert_eq!(a.pow(&ctx.size()), a);
            if !a.is_zero() {
                assert!(a.pow(&ctx.unit_order()).is_one());
            }
        }
    }

    #[test]
    fn multiplication_matches_naive_oracle() {
        let mut rng = SplitMix64::new(2024);
        for (p, modulus) in [(5u64, vec![2u64, 0, 1]), (7, vec![3, 0, 1, 1]), (3, vec![2, 1, 0, 0, 1])] {
            let z = PrimeField::new(p).unwrap();
            let ctx = ExtField::new(Poly::new(z, modulus.clone())).unwrap();
            for _ in 0..1000 {
                let a = random(&ctx, &mut rng);
                let b = random(&ctx, &mut rng);
                let want = naive_mul(a.rep().coeffs(), b.rep().coeffs(), &modulus, p);
                assert_eq!((&a * &b).rep().coeffs(), want.as_slice());
            }
        }
    }

    #[test]
    fn field_axioms_on_random_triples() {
        let z7 = PrimeField::new(7).unwrap();
        let ctx = ExtField::new(Poly::new(z7, vec![3, 0, 1, 1])).unwrap();
        assert_eq!(ctx.degree(), 3);
        let mut rng = SplitMix64::new(5);
        for _ in 0..200 {
            let (a, b, c) = (random(&ctx, &mut rng), random(&ctx, &mut rng), random(&ctx, &mut rng));
            assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            assert_eq!(&(&a - &b) + &b, a);
            if !b.is_zero() {
                assert_eq!(a.checked_div(&b).unwrap().checked_mul(&b).unwrap(), a);
            }
        }
    }

    #[test]
    fn errors() {
        let ctx = f25();
        assert_eq!(ExtElem::zero(&ctx).inv().unwrap_err(), Error::DivisionByZero);
        let z7 = PrimeField::new(7).unwrap();
        let other = ExtField::new(Poly::new(z7, vec![3, 0, 1, 1])).unwrap();
        let a = ExtElem::one(&ctx);
        let b = ExtElem::one(&other);
        assert_eq!(a.checked_add(&b).unwrap_err(), Error::ContextMismatch);
        let z5 = PrimeField::new(5).unwrap();
        assert!(ExtField::new(Poly::from_signed(z5, &[-1, 0, 1])).is_err());
        assert!(ExtField::new(Poly::new(z5, vec![2, 0, 3])).is_err());
    }
}
