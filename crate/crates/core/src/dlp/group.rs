use std::hash::Hash;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::ff::{ExtElem, ExtField, PrimeField};
use crate::linalg::MatrixFp;

/// A multiplicative group in which discrete logarithms are taken.
pub trait Group {
    type Elem: Clone + Eq + Hash;

    fn identity(&self) -> Self::Elem;

    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn pow(&self, a: &Self::Elem, exp: &BigUint) -> Self::Elem {
        let mut acc = self.identity();
        for i in (0..exp.bits()).rev() {
            acc = self.op(&acc, &acc);
            if exp.bit(i) {
                acc = self.op(&acc, a);
            }
        }
        acc
    }
}

/// Z_p^*.
#[derive(Debug, Clone, Copy)]
pub struct PrimeUnits(pub PrimeField);

impl Group for PrimeUnits {
    type Elem = u64;

    fn identity(&self) -> u64 {
        1
    }

    fn op(&self, a: &u64, b: &u64) -> u64 {
        self.0.mul(*a, *b)
    }

    fn pow(&self, a: &u64, exp: &BigUint) -> u64 {
        self.0.pow_big(*a, exp)
    }
}

/// The unit group of an extension field.
#[derive(Debug, Clone)]
pub struct ExtUnits(pub Arc<ExtField>);

impl Group for ExtUnits {
    type Elem = ExtElem;

    fn identity(&self) -> ExtElem {
        ExtElem::one(&self.0)
    }

    fn op(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        a * b
    }
}

/// GL(n, p).
#[derive(Debug, Clone, Copy)]
pub struct MatrixGroup {
    pub field: PrimeField,
    pub n: usize,
}

impl Group for MatrixGroup {
    type Elem = MatrixFp;

    fn identity(&self) -> MatrixFp {
        MatrixFp::identity(self.field, self.n)
    }

    fn op(&self, a: &MatrixFp, b: &MatrixFp) -> MatrixFp {
        a.mul(b).expect("matrices of the group's shape")
    }

    fn pow(&self, a: &MatrixFp, exp: &BigUint) -> MatrixFp {
        a.pow(exp)
    }
}
