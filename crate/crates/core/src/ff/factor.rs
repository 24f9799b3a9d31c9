//! Factorization of univariate polynomials over Z_p.
//!
//! The pipeline is square-free decomposition, distinct-degree splitting and
//! Cantor-Zassenhaus equal-degree splitting. For odd p the splitting
//! polynomial is `a^((p^d - 1) / 2) - 1`; for p = 2 it is the trace
//! `a + a^2 + ... + a^(2^(d-1))`. Randomness comes from the caller's seeded
//! generator, and the output is sorted canonically, so the result does not
//! depend on the seed.

use num_bigint::BigUint;
use num_traits::One;

use super::{Poly, PrimeField};
use crate::arith::big_pow;
use crate::rng::SplitMix64;

/// `leading * prod(factor^multiplicity)` with monic irreducible factors in
/// canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub leading: u64,
    pub factors: Vec<(Poly, usize)>,
}

impl Factorization {
    /// Multiplies everything back together.
    pub fn expand(&self, field: PrimeField) -> Poly {
        let mut acc = Poly::constant(field, self.leading);
        for (g, m) in &self.factors {
            for _ in 0..*m {
                acc = acc.mul(g);
            }
        }
        acc
    }

    /// Degrees of the distinct irreducible factors.
    pub fn degrees(&self) -> Vec<usize> {
        self.factors
            .iter()
            .map(|(g, _)| g.degree().unwrap_or(0))
            .collect()
    }
}

/// Full factorization of a nonzero polynomial. Panics on the zero polynomial.
pub fn factor_poly(f: &Poly, rng: &mut SplitMix64) -> Factorization {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let leading = f.leading();
    let mut factors = Vec::new();
    for (sq, mult) in squarefree(&f.monic()) {
        for (block, degree) in distinct_degree(&sq) {
            for g in equal_degree(&block, degree, rng) {
                factors.push((g, mult));
            }
        }
    }
    factors.sort_by(|(a, ma), (b, mb)| a.canonical_cmp(b).then(ma.cmp(mb)));
    Factorization { leading, factors }
}

/// Square-free decomposition of a monic polynomial: pairs `(g, i)` of
/// pairwise coprime square-free monic `g` with `f = prod g^i`.
pub fn squarefree(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field();
    let p = field.modulus() as usize;
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y);
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.div_exact(&w);
        i += 1;
    }
    if !c.is_one() {
        // Every exponent of c is a multiple of p, and a^(1/p) = a in Z_p.
        let root = Poly::new(
            field,
            c.coeffs().iter().step_by(p).copied().collect(),
        );
        for (g, m) in squarefree(&root) {
            out.push((g, m * p));
        }
    }
    out
}

/// Distinct-degree splitting of a square-free monic polynomial: pairs
/// `(block, d)` where `block` is the product of all irreducible factors of
/// degree `d`.
pub fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field();
    let p = BigUint::from(field.modulus());
    let x = Poly::x(field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.powmod(&p, &rest).expect("nonzero modulus");
        let g = rest.gcd(&h.sub(&x));
        if !g.is_one() {
            rest = rest.div_exact(&g);
            h = h.rem(&rest).expect("nonzero modulus");
            out.push((g, d));
        }
        d += 1;
    }
    if let Some(deg) = rest.degree() {
        if deg > 0 {
            out.push((rest, deg));
        }
    }
    out
}

/// Splits a monic square-free product of irreducibles of degree `d` into
/// its irreducible factors.
pub fn equal_degree(f: &Poly, d: usize, rng: &mut SplitMix64) -> Vec<Poly> {
    let n = f.degree().expect("nonzero polynomial");
    if n == d {
        return vec![f.clone()];
    }
    let field = f.field();
    let p = field.modulus();
    let half = if p == 2 {
        BigUint::one()
    } else {
        (big_pow(p, d as u32) - 1u32) >> 1u32
    };
    loop {
        let a = Poly::new(field, (0..n).map(|_| rng.below(p)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            let mut term = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                term = term.mul(&term).rem(f).expect("nonzero modulus");
                acc = acc.add(&term);
            }
            acc
        } else {
            a.powmod(&half, f)
                .expect("nonzero modulus")
                .sub(&Poly::one(field))
        };
        let g = f.gcd(&b);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let mut left = equal_degree(&g, d, rng);
            left.extend(equal_degree(&f.div_exact(&g), d, rng));
            return left;
        }
    }
}

/// Deterministic irreducibility test: a monic polynomial of positive degree
/// is irreducible iff it is square-free and distinct-degree splitting finds a
/// single block of full degree.
pub fn is_irreducible(f: &Poly) -> bool {
    let Some(deg) = f.degree() else {
        return false;
    };
    if deg == 0 {
        return false;
    }
    let f = f.monic();
    if !f.gcd(&f.derivative()).is_one() {
        return false;
    }
    let blocks = distinct_degree(&f);
    blocks.len() == 1 && blocks[0].1 == deg
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn field(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    /// Every monic polynomial of the given degree.
    fn monics(field: PrimeField, degree: usize) -> Vec<Poly> {
        let p = field.modulus();
        let count = p.pow(degree as u32);
        (0..count)
            .map(|mut k| {
                let mut coeffs = Vec::with_capacity(degree + 1);
                for _ in 0..degree {
                    coeffs.push(k % p);
                    k /= p;
                }
                coeffs.push(1);
                Poly::new(field, coeffs)
            })
            .collect()
    }

    /// Irreducibility by exhaustive trial division over all lower-degree monics.
    fn irreducible_by_trial_division(g: &Poly) -> bool {
        let deg = g.degree().unwrap();
        (1..=deg / 2).all(|d| {
            monics(g.field(), d)
                .iter()
                .all(|h| !g.rem(h).unwrap().is_zero())
        })
    }

    #[test]
    fn x2_plus_2_over_z5_is_irreducible() {
        let z5 = field(5);
        let f = Poly::new(z5, vec![2, 0, 1]);
        assert!((0..5).all(|x| f.eval(x) != 0));
        let fac = factor_poly(&f, &mut SplitMix64::new(1));
        assert_eq!(fac.factors, vec![(f.clone(), 1)]);
        assert!(is_irreducible(&f));
    }

    #[test]
    fn x2_minus_1_over_z5_splits() {
        let z5 = field(5);
        let f = Poly::from_signed(z5, &[-1, 0, 1]);
        let roots: Vec<u64> = (0..5).filter(|&x| f.eval(x) == 0).collect();
        assert_eq!(roots, vec![1, 4]);
        let fac = factor_poly(&f, &mut SplitMix64::new(1));
        assert_eq!(
            fac.factors,
            vec![
                (Poly::new(z5, vec![1, 1]), 1),
                (Poly::new(z5, vec![4, 1]), 1)
            ]
        );
    }

    #[test]
    fn repeated_factor() {
        let z3 = field(3);
        let f = Poly::monomial(z3, 1, 2);
        let fac = factor_poly(&f, &mut SplitMix64::new(1));
        assert_eq!(fac.factors, vec![(Poly::x(z3), 2)]);
    }

    #[test]
    fn pth_power_input() {
        // (x + 1)^3 * (x^2 + 1)^2 over Z_3: the square-free loop must take a cube root.
        let z3 = field(3);
        let a = Poly::new(z3, vec![1, 1]);
        let b = Poly::new(z3, vec![1, 0, 1]);
        let f = a.mul(&a).mul(&a).mul(&b).mul(&b);
        let fac = factor_poly(&f, &mut SplitMix64::new(9));
        assert_eq!(fac.factors, vec![(a, 3), (b, 2)]);
    }

    #[test]
    fn leading_coefficient_is_kept() {
        let z7 = field(7);
        let f = Poly::new(z7, vec![6, 0, 3]);
        let fac = factor_poly(&f, &mut SplitMix64::new(3));
        assert_eq!(fac.leading, 3);
        assert_eq!(fac.expand(z7), f);
    }

    #[test]
    fn irreducibility_matches_trial_division() {
        for p in [2u64, 3, 5] {
            let z = field(p);
            for deg in 1..=4 {
                for g in monics(z, deg) {
                    assert_eq!(
                        is_irreducible(&g),
                        irreducible_by_trial_division(&g),
                        "{g} over Z_{p}"
                    );
                }
            }
        }
    }

    #[test]
    fn char_two_equal_degree_splitting() {
        let z2 = field(2);
        // x^2 + x + 1 and x^3 + x + 1 and x^3 + x^2 + 1 are the irreducibles used here.
        let q = Poly::new(z2, vec![1, 1, 1]);
        let c1 = Poly::new(z2, vec![1, 1, 0, 1]);
        let c2 = Poly::new(z2, vec![1, 0, 1, 1]);
        let prod = c1.mul(&c2);
        let mut parts = equal_degree(&prod, 3, &mut SplitMix64::new(5));
        parts.sort_by(|a, b| a.canonical_cmp(b));
        assert_eq!(parts, vec![c2.clone(), c1.clone()]);
        let f = q.mul(&q).mul(&prod).mul(&Poly::x(z2));
        let fac = factor_poly(&f, &mut SplitMix64::new(6));
        assert_eq!(fac.expand(z2), f);
        assert_eq!(fac.factors.len(), 4);
    }

    fn arb_poly() -> impl Strategy<Value = (u64, Vec<u64>)> {
        prop::sample::select(vec![2u64, 3, 5, 7]).prop_flat_map(|p| {
            (Just(p), prop::collection::vec(0..p, 1..=9))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn factors_multiply_back((p, coeffs) in arb_poly(), seed in any::<u64>()) {
            let z = field(p);
            let f = Poly::new(z, coeffs);
            prop_assume!(!f.is_zero());
            let fac = factor_poly(&f, &mut SplitMix64::new(seed));
            prop_assert_eq!(fac.expand(z), f.clone());
            for (g, _) in &fac.factors {
                prop_assert!(g.is_monic());
                let deg = g.degree().unwrap();
                if deg <= 3 {
                    if deg >= 2 {
                        prop_assert!((0..p).all(|x| g.eval(x) != 0));
                    }
                    prop_assert!(irreducible_by_trial_division(g));
                }
            }
            let sorted = fac.factors.windows(2).all(|w| w[0].0.canonical_cmp(&w[1].0).is_lt());
            prop_assert!(sorted);
        }
    }
}
