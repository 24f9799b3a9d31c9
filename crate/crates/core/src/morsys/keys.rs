use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::MatrixFp;
use crate::rng::SplitMix64;
use crate::utgroup::{canonical_positions, Automorphism, GroupParams, UtElement};

/// How many automorphisms keygen draws before giving up on a degenerate order.
pub const KEYGEN_ATTEMPTS: usize = 64;

/// Key automorphisms are `a -> g tau^e(a) g^-1` with `g` invertible upper
/// triangular and `tau` the graph flip. The family fixes the shape of `g`
/// and the choice of `e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KeyFamily {
    /// Diagonal `g`, no flip. The induced map is diagonal.
    Diagonal,
    /// Full upper triangular `g`, no flip.
    Conjugation,
    /// Diagonal `g` composed with the flip.
    DiagonalFlip,
    /// Full upper triangular `g` composed with the flip.
    Flip,
    /// Full upper triangular `g`, flip chosen by a coin.
    #[default]
    Mixed,
}

impl FromStr for KeyFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "diagonal" => Ok(Self::Diagonal),
            "conjugation" => Ok(Self::Conjugation),
            "diagonal-flip" => Ok(Self::DiagonalFlip),
            "flip" => Ok(Self::Flip),
            "mixed" => Ok(Self::Mixed),
            other => Err(Error::InvalidInput(format!("unknown key family {other:?}"))),
        }
    }
}

impl fmt::Display for KeyFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Diagonal => "diagonal",
            Self::Conjugation => "conjugation",
            Self::DiagonalFlip => "diagonal-flip",
            Self::Flip => "flip",
            Self::Mixed => "mixed",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    params: GroupParams,
    phi: Automorphism,
    phi_m: Automorphism,
}

impl PublicKey {
    pub fn new(phi: Automorphism, phi_m: Automorphism) -> Result<Self> {
        if phi.params() != phi_m.params() {
            return Err(Error::ParamsMismatch);
        }
        Ok(Self { params: phi.params(), phi: phi.public(), phi_m: phi_m.public() })
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn phi(&self) -> &Automorphism {
        &self.phi
    }

    pub fn phi_m(&self) -> &Automorphism {
        &self.phi_m
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivateKey {
    params: GroupParams,
    m: BigUint,
    order: BigUint,
}

impl PrivateKey {
    /// `order` is the order of the key automorphism; requires `1 <= m < order`.
    pub fn new(params: GroupParams, m: BigUint, order: BigUint) -> Result<Self> {
        if m.is_zero() || m >= order {
            return Err(Error::Validation(format!("m must satisfy 1 ≤ m < order ({order})")));
        }
        Ok(Self { params, m, order })
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn m(&self) -> &BigUint {
        &self.m
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ciphertext {
    params: GroupParams,
    phi_r: Automorphism,
    masked: UtElement,
}

impl Ciphertext {
    pub fn new(phi_r: Automorphism, masked: UtElement) -> Result<Self> {
        if phi_r.params() != masked.params() {
            return Err(Error::ParamsMismatch);
        }
        Ok(Self { params: masked.params(), phi_r: phi_r.public(), masked })
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn phi_r(&self) -> &Automorphism {
        &self.phi_r
    }

    pub fn masked(&self) -> &UtElement {
        &self.masked
    }
}

fn draw_automorphism(params: GroupParams, family: KeyFamily, rng: &mut SplitMix64) -> Automorphism {
    let n = params.n();
    let p = params.p();
    let flip = match family {
        KeyFamily::Diagonal | KeyFamily::Conjugation => false,
        KeyFamily::DiagonalFlip | KeyFamily::Flip => true,
        KeyFamily::Mixed => rng.bit(),
    };
    let mut g = MatrixFp::zero(params.field(), n);
    for i in 0..n {
        g.set(i, i, rng.range_inclusive(1, p - 1));
    }
    if !matches!(family, KeyFamily::Diagonal | KeyFamily::DiagonalFlip) {
        for (i, j) in canonical_positions(n) {
            g.set(i, j, rng.below(p));
        }
    }
    Automorphism::from_private(params, g, flip).expect("invertible upper triangular")
}

/// Draws a key automorphism from `family`, computes its order `t`, and
/// draws `m` uniformly from `[2, t - 1]`. Automorphisms with `t <= 2` are
/// redrawn up to [`KEYGEN_ATTEMPTS`] times.
///
/// Draw order, for ports: flip bit (mixed only), the `n` diagonal entries of
/// `g` from `[1, p - 1]`, the strictly upper entries of `g` in canonical
/// order (non-diagonal families only), then `m`.
pub fn keygen(
    params: GroupParams,
    family: KeyFamily,
    rng: &mut SplitMix64,
) -> Result<(PublicKey, PrivateKey, Automorphism)> {
    for _ in 0..KEYGEN_ATTEMPTS {
        let phi = draw_automorphism(params, family, rng);
        let t = phi.order();
        let t = t.value();
        if t <= &BigUint::from(2u8) {
            continue;
        }
        let m = BigUint::from(2u8) + rng.below_big(&(t - 2u8));
        let (pk, sk) = keypair_from(&phi, m)?;
        return Ok((pk, sk, phi));
    }
    Err(Error::DegenerateKey(format!(
        "no automorphism of order > 2 in {KEYGEN_ATTEMPTS} draws over {params}"
    )))
}

/// Builds a key pair for a given automorphism and exponent.
pub fn keypair_from(phi: &Automorphism, m: BigUint) -> Result<(PublicKey, PrivateKey)> {
    let order = phi.order().value().clone();
    let sk = PrivateKey::new(phi.params(), m, order)?;
    let pk = PublicKey::new(phi.clone(), phi.compose_power(sk.m()))?;
    Ok((pk, sk))
}

/// Draws `r` uniformly from `[2, 2^64)`.
pub fn encrypt(pk: &PublicKey, a: &UtElement, rng: &mut SplitMix64) -> Result<Ciphertext> {
    let r = BigUint::from(rng.range_inclusive(2, u64::MAX));
    encrypt_with_r(pk, a, &r)
}

pub fn encrypt_with_r(pk: &PublicKey, a: &UtElement, r: &BigUint) -> Result<Ciphertext> {
    if a.params() != pk.params {
        return Err(Error::ParamsMismatch);
    }
    let phi_r = pk.phi.compose_power(r);
    let masked = pk.phi_m.compose_power(r).apply(a)?;
    Ciphertext::new(phi_r, masked)
}

/// Applies `(phi^r)^-m` to the masked element. With `t` the cached order of
/// `phi`, `phi^r` has order dividing `t`, so the inverse power is the single
/// exponent `-m mod t`. A ciphertext whose `phi_r` does not satisfy that
/// falls back to inverting `(phi^r)^m` through its own order.
pub fn decrypt(sk: &PrivateKey, ct: &Ciphertext) -> Result<UtElement> {
    if sk.params != ct.params {
        return Err(Error::ParamsMismatch);
    }
    let phi_r = &ct.phi_r;
    let t = &sk.order;
    let unmask = if phi_r.compose_power(t).is_identity() {
        let e = (t - (&sk.m % t)) % t;
        phi_r.compose_power(&e)
    } else {
        phi_r.compose_power(&sk.m).inverse()
    };
    unmask.apply(&ct.masked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::utgroup::frattini_project;
    use num_traits::One;
    use proptest::prelude::*;

    fn params(n: usize, p: u64) -> GroupParams {
        GroupParams::new(n, p).unwrap()
    }

    fn diag_key(g: GroupParams, d: &[u64]) -> Automorphism {
        Automorphism::from_private(g, MatrixFp::diagonal(g.field(), d), false).unwrap()
    }

    #[test]
    fn keygen_is_deterministic() {
        let g = params(4, 10007);
        for family in [KeyFamily::Mixed, KeyFamily::Diagonal, KeyFamily::Flip] {
            let a = keygen(g, family, &mut SplitMix64::new(42)).unwrap();
            let b = keygen(g, family, &mut SplitMix64::new(42)).unwrap();
            assert_eq!(a.0, b.0);
            assert_eq!(a.1, b.1);
        }
        let c = keygen(g, KeyFamily::Mixed, &mut SplitMix64::new(43)).unwrap();
        let a = keygen(g, KeyFamily::Mixed, &mut SplitMix64::new(42)).unwrap();
        assert_ne!(a.0, c.0);
    }

    #[test]
    fn diagonal_example_key() {
        let g = params(3, 5);
        let phi = diag_key(g, &[1, 2, 4]);
        assert_eq!(phi.order().value(), &BigUint::from(4u8));
        // m must come from {2, 3}.
        for m in [2u8, 3] {
            let (pk, sk) = keypair_from(&phi, BigUint::from(m)).unwrap();
            assert_eq!(sk.order(), &BigUint::from(4u8));
            assert_eq!(pk.phi_m().induced_map(), pk.phi().induced_map().pow_u64(m as u64));
        }
        assert!(keypair_from(&phi, BigUint::from(4u8)).is_err());
        assert!(keypair_from(&phi, BigUint::zero()).is_err());
    }

    #[test]
    fn m_range_and_key_consistency() {
        let mut rng = SplitMix64::new(9);
        for (n, p) in [(3, 5), (3, 7), (4, 11), (5, 5)] {
            let g = params(n, p);
            for _ in 0..10 {
                let (pk, sk, phi) = keygen(g, KeyFamily::Mixed, &mut rng).unwrap();
                assert!(sk.m() >= &BigUint::from(2u8) && sk.m() < sk.order());
                assert_eq!(&phi.order().value().clone(), sk.order());
                assert_eq!(pk.phi().compose_power(sk.m()), *pk.phi_m());
                assert!(pk.phi().private_part().is_none());
                assert_eq!(pk.phi_m().induced_map(), pk.phi().induced_map().pow(sk.m()));
            }
        }
    }

    #[test]
    fn degenerate_family_is_rejected() {
        // Over p = 3 a diagonal key has entries in {1, 2}; its order is at
        // most 2 on the quotient and every power of 2 squares to 1.
        let g = params(3, 3);
        let err = keygen(g, KeyFamily::Diagonal, &mut SplitMix64::new(1)).unwrap_err();
        assert!(matches!(err, Error::DegenerateKey(_)));
    }

    #[test]
    fn forced_r_and_m() {
        let g = params(4, 7);
        let mut rng = SplitMix64::new(5);
        let (pk, sk, phi) = keygen(g, KeyFamily::Mixed, &mut rng).unwrap();
        let a = UtElement::random(g, &mut rng);
        let ct = encrypt_with_r(&pk, &a, &BigUint::one()).unwrap();
        assert_eq!(ct.masked(), &pk.phi_m().apply(&a).unwrap());
        assert_eq!(decrypt(&sk, &ct).unwrap(), a);

        let (pk1, sk1) = keypair_from(&phi, BigUint::one()).unwrap();
        for r in [2u64, 3, 1000, u64::MAX] {
            let ct = encrypt_with_r(&pk1, &a, &BigUint::from(r)).unwrap();
            assert_eq!(decrypt(&sk1, &ct).unwrap(), a);
        }
    }

    #[test]
    fn roundtrip_small_params() {
        let mut rng = SplitMix64::new(11);
        for n in [3, 4, 5] {
            for p in [5, 7, 11] {
                let g = params(n, p);
                let (pk, sk, _) = keygen(g, KeyFamily::Mixed, &mut rng).unwrap();
                assert_eq!(
                    decrypt(&sk, &encrypt(&pk, &UtElement::identity(g), &mut rng).unwrap()).unwrap(),
                    UtElement::identity(g)
                );
                for _ in 0..100 {
                    let a = UtElement::random(g, &mut rng);
                    let ct = encrypt(&pk, &a, &mut rng).unwrap();
                    assert_eq!(decrypt(&sk, &ct).unwrap(), a);
                }
            }
        }
    }

    #[test]
    fn masked_projection_is_linear() {
        let mut rng = SplitMix64::new(13);
        let g = params(4, 101);
        let (pk, sk, _) = keygen(g, KeyFamily::Flip, &mut rng).unwrap();
        for _ in 0..20 {
            let a = UtElement::random(g, &mut rng);
            let r = BigUint::from(rng.range_inclusive(2, u64::MAX));
            let ct = encrypt_with_r(&pk, &a, &r).unwrap();
            let a_mat = pk.phi().induced_map().pow(&(sk.m() * &r));
            let want = a_mat.mul_vec(frattini_project(&a).coords()).unwrap();
            assert_eq!(frattini_project(ct.masked()).coords(), &want[..]);
        }
    }

    #[test]
    fn malleability_and_tampering() {
        let mut rng = SplitMix64::new(17);
        let g = params(4, 11);
        let (pk, sk, _) = keygen(g, KeyFamily::Mixed, &mut rng).unwrap();
        let a = UtElement::random(g, &mut rng);
        let b = UtElement::random(g, &mut rng);
        let r = BigUint::from(123_456_789u64);
        let ca = encrypt_with_r(&pk, &a, &r).unwrap();
        let cb = encrypt_with_r(&pk, &b, &r).unwrap();
        let product = Ciphertext::new(ca.phi_r().clone(), ca.masked().mul(cb.masked()).unwrap()).unwrap();
        assert_eq!(decrypt(&sk, &product).unwrap(), a.mul(&b).unwrap());

        let mut entries = ca.masked().entries();
        entries[4] = (entries[4] + 1) % 11;
        let tampered = Ciphertext::new(
            ca.phi_r().clone(),
            UtElement::from_canonical(g, &entries).unwrap(),
        )
        .unwrap();
        assert_ne!(decrypt(&sk, &tampered).unwrap(), a);
    }

    #[test]
    fn wrong_key_gives_wrong_plaintext() {
        let g = params(4, 10007);
        let mut rng = SplitMix64::new(19);
        let (pk, sk, _) = keygen(g, KeyFamily::Mixed, &mut rng).unwrap();
        let mut wrong_m = sk.m() + 1u8;
        if &wrong_m == sk.order() {
            wrong_m = BigUint::from(2u8);
        }
        let wrong = PrivateKey::new(g, wrong_m, sk.order().clone()).unwrap();
        let a = UtElement::random(g, &mut rng);
        let ct = encrypt(&pk, &a, &mut rng).unwrap();
        assert_eq!(decrypt(&sk, &ct).unwrap(), a);
        assert_ne!(decrypt(&wrong, &ct).unwrap(), a);
    }

    #[test]
    fn params_mismatch() {
        let mut rng = SplitMix64::new(23);
        let (pk, sk, _) = keygen(params(3, 5), KeyFamily::Mixed, &mut rng).unwrap();
        let other = UtElement::identity(params(4, 5));
        assert_eq!(encrypt(&pk, &other, &mut rng), Err(Error::ParamsMismatch));
        let (pk4, _, _) = keygen(params(4, 5), KeyFamily::Mixed, &mut rng).unwrap();
        let ct = encrypt(&pk4, &other, &mut rng).unwrap();
        assert_eq!(decrypt(&sk, &ct), Err(Error::ParamsMismatch));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn decrypt_inverts_encrypt(seed in any::<u64>(), n in 3usize..6, pi in 0usize..3, fam in 0usize..5) {
            let p = [5u64, 7, 11][pi];
            let family = [KeyFamily::Diagonal, KeyFamily::Conjugation, KeyFamily::DiagonalFlip, KeyFamily::Flip, KeyFamily::Mixed][fam];
            let mut rng = SplitMix64::new(seed);
            let g = params(n, p);
            if let Ok((pk, sk, _)) = keygen(g, family, &mut rng) {
                let a = UtElement::random(g, &mut rng);
                let ct = encrypt(&pk, &a, &mut rng).unwrap();
                prop_assert_eq!(decrypt(&sk, &ct).unwrap(), a);
            }
        }
    }
}
