use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::element::{canonical_positions, generators, UtElement};
use super::frattini::induced_from_images;
use super::GroupParams;
use crate::dlp::{matrix_order, FactoredInteger};
use crate::error::{Error, Result};
use crate::linalg::MatrixFp;

/// The graph flip `tau(M) = J (M^-1)^T J`, with `J` the reversal matrix.
/// It maps upper triangular matrices to upper triangular matrices and
/// sends `x_i` to `x_{n-2-i}(-1)` (0-based).
pub fn graph_flip_matrix(m: &MatrixFp) -> Result<MatrixFp> {
    let inv = m.inv()?;
    let n = m.dim();
    let mut out = MatrixFp::zero(m.field(), n);
    for i in 0..n {
        for j in 0..n {
            // (J X^T J)_{ij} = X_{n-1-j, n-1-i}
            out.set(i, j, inv.get(n - 1 - j, n - 1 - i));
        }
    }
    Ok(out)
}

fn flip_if(m: &MatrixFp, flip: bool) -> MatrixFp {
    if flip {
        graph_flip_matrix(m).expect("conjugator is invertible")
    } else {
        m.clone()
    }
}

fn is_upper_triangular(m: &MatrixFp) -> bool {
    (0..m.dim()).all(|i| (0..i).all(|j| m.get(i, j) == 0))
}

/// Private form of a key automorphism: `a -> g tau^flip(a) g^-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivatePart {
    conjugator: MatrixFp,
    conjugator_inv: MatrixFp,
    flip: bool,
}

impl PrivatePart {
    pub fn new(conjugator: MatrixFp, flip: bool) -> Result<Self> {
        if !is_upper_triangular(&conjugator) {
            return Err(Error::Validation("conjugator is not upper triangular".into()));
        }
        let conjugator_inv = conjugator
            .inv()
            .map_err(|_| Error::Validation("conjugator is not invertible".into()))?;
        Ok(Self { conjugator, conjugator_inv, flip })
    }

    pub fn conjugator(&self) -> &MatrixFp {
        &self.conjugator
    }

    pub fn flip(&self) -> bool {
        self.flip
    }

    fn identity(params: GroupParams) -> Self {
        let id = MatrixFp::identity(params.field(), params.n());
        Self { conjugator: id.clone(), conjugator_inv: id, flip: false }
    }

    fn apply_matrix(&self, m: &MatrixFp) -> MatrixFp {
        let inner = flip_if(m, self.flip);
        self.conjugator
            .mul(&inner)
            .and_then(|x| x.mul(&self.conjugator_inv))
            .expect("dimensions agree")
    }

    /// `(g1, e1) o (g2, e2) = (g1 tau^e1(g2), e1 xor e2)`.
    fn compose(&self, other: &Self) -> Self {
        let g = self
            .conjugator
            .mul(&flip_if(&other.conjugator, self.flip))
            .expect("dimensions agree");
        Self::new(g, self.flip ^ other.flip).expect("product of invertible upper triangular matrices")
    }

    /// `(g, e)^-1 = (tau^e(g^-1), e)`.
    fn inverse(&self) -> Self {
        Self::new(flip_if(&self.conjugator_inv, self.flip), self.flip).expect("invertible")
    }

    fn power(&self, params: GroupParams, m: &BigUint) -> Self {
        let mut acc = Self::identity(params);
        for i in (0..m.bits()).rev() {
            acc = acc.compose(&acc);
            if m.bit(i) {
                acc = acc.compose(self);
            }
        }
        acc
    }
}

/// An automorphism of UT(n, p), stored as the images of the standard
/// generators. Root-element images and their nilpotent powers are cached at
/// construction so evaluation by collection is cheap.
#[derive(Debug, Clone)]
pub struct Automorphism {
    params: GroupParams,
    images: Vec<UtElement>,
    private: Option<PrivatePart>,
    // root_powers[r][k - 1] = N_r^k where r_image = I + N_r, canonical root order.
    root_powers: Vec<Vec<Vec<u64>>>,
    inv_small: Vec<u64>,
    order: OnceLock<FactoredInteger>,
}

impl PartialEq for Automorphism {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params && self.images == other.images
    }
}

impl Eq for Automorphism {}

impl Automorphism {
    pub fn identity(params: GroupParams) -> Self {
        Self::build(params, generators(params), Some(PrivatePart::identity(params)))
    }

    /// Conjugation by an invertible upper triangular `g`, optionally after the graph flip.
    pub fn from_private(params: GroupParams, conjugator: MatrixFp, flip: bool) -> Result<Self> {
        if conjugator.dim() != params.n() || conjugator.field() != params.field() {
            return Err(Error::ParamsMismatch);
        }
        Ok(Self::with_private(params, PrivatePart::new(conjugator, flip)?))
    }

    fn with_private(params: GroupParams, private: PrivatePart) -> Self {
        let images = generators(params)
            .iter()
            .map(|x| {
                UtElement::from_matrix(params, &private.apply_matrix(&x.to_matrix()))
                    .expect("conjugation by upper triangular preserves UT")
            })
            .collect();
        Self::build(params, images, Some(private))
    }

    /// Validates externally supplied generator images: the induced map on
    /// the Frattini quotient must be invertible and every relation of the
    /// root presentation must hold for the images.
    pub fn from_images(params: GroupParams, images: Vec<UtElement>) -> Result<Self> {
        if images.len() != params.n() - 1 {
            return Err(Error::DimensionMismatch(format!(
                "{} generator images for {params}, expected {}",
                images.len(),
                params.n() - 1
            )));
        }
        if images.iter().any(|x| x.params() != params) {
            return Err(Error::ParamsMismatch);
        }
        if induced_from_images(params, &images).inv().is_err() {
            return Err(Error::NonInvertibleInducedMap);
        }
        let phi = Self::build(params, images, None);
        phi.check_relations()?;
        Ok(phi)
    }

    /// Public images together with a private part; they must agree.
    pub fn from_parts(
        params: GroupParams,
        images: Vec<UtElement>,
        conjugator: MatrixFp,
        flip: bool,
    ) -> Result<Self> {
        let phi = Self::from_private(params, conjugator, flip)?;
        if phi.images != images {
            return Err(Error::Validation(
                "public images are inconsistent with the private part".into(),
            ));
        }
        Ok(phi)
    }

    fn build(params: GroupParams, images: Vec<UtElement>, private: Option<PrivatePart>) -> Self {
        let n = params.n();
        let f = params.field();
        let positions = canonical_positions(n);
        let index_of = |i: usize, j: usize| positions.iter().position(|&q| q == (i, j)).unwrap();
        let mut roots: Vec<UtElement> = Vec::with_capacity(positions.len());
        for &(i, j) in &positions {
            let r = if j == i + 1 {
                images[i].clone()
            } else {
                // x_{ij}(1) = [x_{i,i+1}(1), x_{i+1,j}(1)]
                let a = &roots[index_of(i, i + 1)];
                let b = &roots[index_of(i + 1, j)];
                a.commutator(b).expect("same params")
            };
            roots.push(r);
        }
        let root_powers = roots
            .iter()
            .map(|r| {
                let base = r.raw().to_vec();
                let mut powers = vec![base.clone()];
                for _ in 2..n {
                    let next = strict_mul(f, n, powers.last().unwrap(), &base);
                    powers.push(next);
                }
                powers
            })
            .collect();
        let inv_small = (1..n.min(params.p() as usize))
            .map(|k| f.inv(k as u64).expect("k < p"))
            .collect();
        Self { params, images, private, root_powers, inv_small, order: OnceLock::new() }
    }

    fn root_image(&self, r: usize) -> UtElement {
        UtElement::from_raw(self.params, self.root_powers[r][0].clone())
    }

    fn check_relations(&self) -> Result<()> {
        let n = self.params.n();
        let positions = canonical_positions(n);
        let p = BigUint::from(self.params.p());
        let bad = |what: String| Err(Error::Validation(format!("not an automorphism: {what}")));
        let roots: Vec<UtElement> = (0..positions.len()).map(|r| self.root_image(r)).collect();
        for (r, &(i, j)) in positions.iter().enumerate() {
            if !roots[r].pow(&p).is_identity() {
                return bad(format!("image of x_{},{} has order other than p", i + 1, j + 1));
            }
        }
        for (a, &(i, j)) in positions.iter().enumerate() {
            for (b, &(k, l)) in positions.iter().enumerate() {
                let c = roots[a].commutator(&roots[b])?;
                let ok = if j == k {
                    let target = positions.iter().position(|&q| q == (i, l)).unwrap();
                    c == roots[target]
                } else if l == i {
                    // Covered when the pair is visited in the other order.
                    true
                } else {
                    c.is_identity()
                };
                if !ok {
                    return bad(format!(
                        "commutator relation for x_{},{} and x_{},{} fails",
                        i + 1,
                        j + 1,
                        k + 1,
                        l + 1
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn images(&self) -> &[UtElement] {
        &self.images
    }

    pub fn private_part(&self) -> Option<&PrivatePart> {
        self.private.as_ref()
    }

    /// The same map with the private part dropped.
    pub fn public(&self) -> Self {
        let mut phi = self.clone();
        phi.private = None;
        phi
    }

    pub fn is_identity(&self) -> bool {
        self.images == generators(self.params)
    }

    /// Private form when available, collection otherwise.
    pub fn apply(&self, a: &UtElement) -> Result<UtElement> {
        match &self.private {
            Some(private) => {
                if a.params() != self.params {
                    return Err(Error::ParamsMismatch);
                }
                Ok(UtElement::from_matrix(self.params, &private.apply_matrix(&a.to_matrix()))
                    .expect("conjugation preserves UT"))
            }
            None => self.apply_public(a),
        }
    }

    /// Evaluates through the collected word and the cached root images.
    pub fn apply_public(&self, a: &UtElement) -> Result<UtElement> {
        if a.params() != self.params {
            return Err(Error::ParamsMismatch);
        }
        let mut acc = UtElement::identity(self.params);
        for (r, t) in a.collect().into_iter().enumerate() {
            if t != 0 {
                acc = acc.mul_unchecked(&self.root_power(r, t));
            }
        }
        Ok(acc)
    }

    /// `(I + N)^t = I + sum_k C(t, k) N^k` for `t < p`.
    fn root_power(&self, r: usize, t: u64) -> UtElement {
        let n = self.params.n();
        let f = self.params.field();
        let mut out = vec![0u64; n * n];
        let mut binom = 1u64;
        for (k, power) in (1..n).zip(&self.root_powers[r]) {
            binom = f.mul(binom, f.sub(t, (k - 1) as u64));
            if binom == 0 {
                break;
            }
            binom = f.mul(binom, self.inv_small[k - 1]);
            for (o, &v) in out.iter_mut().zip(power) {
                if v != 0 {
                    *o = f.add(*o, f.mul(binom, v));
                }
            }
        }
        UtElement::from_raw(self.params, out)
    }

    /// `self o other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.params != other.params {
            return Err(Error::ParamsMismatch);
        }
        if let (Some(a), Some(b)) = (&self.private, &other.private) {
            return Ok(Self::with_private(self.params, a.compose(b)));
        }
        let images = other
            .images
            .iter()
            .map(|x| self.apply_public(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::build(self.params, images, None))
    }

    /// `phi^m`; uses the private form when present.
    pub fn compose_power(&self, m: &BigUint) -> Self {
        match &self.private {
            Some(private) => Self::with_private(self.params, private.power(self.params, m)),
            None => self.compose_power_public(m),
        }
    }

    /// `phi^m` by square-and-multiply over public composition only.
    pub fn compose_power_public(&self, m: &BigUint) -> Self {
        let public = self.public();
        let mut acc = Self::build(self.params, generators(self.params), None);
        for i in (0..m.bits()).rev() {
            acc = acc.compose(&acc).expect("same params");
            if m.bit(i) {
                acc = acc.compose(&public).expect("same params");
            }
        }
        acc
    }

    /// Matrix of the induced linear map on the Frattini quotient; column `i`
    /// is the projection of the image of `x_i`.
    pub fn induced_map(&self) -> MatrixFp {
        induced_from_images(self.params, &self.images)
    }

    /// Smallest `t >= 1` with `phi^t = id`, as `N1 * p^k` where `N1` is the
    /// order of the induced matrix.
    pub fn order(&self) -> FactoredInteger {
        self.order
            .get_or_init(|| {
                let n1 = matrix_order(&self.induced_map()).expect("induced map is invertible");
                let p = BigUint::from(self.params.p());
                let mut psi = self.compose_power(n1.value());
                let mut k = 0u32;
                while !psi.is_identity() {
                    psi = psi.compose_power(&p);
                    k += 1;
                    assert!(k <= 64, "automorphism order search did not terminate");
                }
                let p_part = FactoredInteger::from_prime_powers(vec![(p, k)]);
                n1.mul(&p_part)
            })
            .clone()
    }

    /// `phi^(t-1)` with `t` the order; the private form inverts directly.
    pub fn inverse(&self) -> Self {
        if let Some(private) = &self.private {
            return Self::with_private(self.params, private.inverse());
        }
        self.inverse_public()
    }

    pub fn inverse_public(&self) -> Self {
        let t = self.order();
        if t.value().is_one() {
            return self.clone();
        }
        let exp = t.value() - 1u32;
        let inv = self.compose_power_public(&exp);
        debug_assert!(!exp.is_zero());
        inv
    }
}

fn strict_mul(f: crate::ff::PrimeField, n: usize, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; n * n];
    for i in 0..n {
        for k in i + 1..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in k + 1..n {
                out[i * n + j] = f.add(out[i * n + j], f.mul(x, b[k * n + j]));
            }
        }
    }
    out
}
