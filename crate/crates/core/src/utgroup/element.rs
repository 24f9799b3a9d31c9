use std::fmt;

use num_bigint::BigUint;

use super::GroupParams;
use crate::error::{Error, Result};
use crate::linalg::MatrixFp;
use crate::rng::SplitMix64;

/// Root positions `(i, j)`, `i < j`, in canonical collection order:
/// ascending level `j - i`, then ascending row `i`.
pub fn canonical_positions(n: usize) -> Vec<(usize, usize)> {
    (1..n)
        .flat_map(|level| (0..n - level).map(move |i| (i, i + level)))
        .collect()
}

/// An element of UT(n, p). Only the strictly upper part is stored, so a
/// value of this type is always a group member.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UtElement {
    params: GroupParams,
    // n x n row-major; only entries with i < j are ever nonzero.
    data: Vec<u64>,
}

/// The minimal generating set `x_i = I + e_{i,i+1}`, `i = 0..n-1`.
pub fn generators(params: GroupParams) -> Vec<UtElement> {
    (0..params.n() - 1)
        .map(|i| UtElement::root(params, i, i + 1, 1))
        .collect()
}

impl UtElement {
    pub fn identity(params: GroupParams) -> Self {
        let n = params.n();
        Self { params, data: vec![0; n * n] }
    }

    /// The root element `x_ij(t) = I + t e_ij`.
    pub fn root(params: GroupParams, i: usize, j: usize, t: u64) -> Self {
        assert!(i < j && j < params.n(), "({i}, {j}) is not a root position");
        let mut e = Self::identity(params);
        e.data[i * params.n() + j] = params.field().reduce(t);
        e
    }

    /// Builds from `(i, j, value)` triples (0-based, `i < j`); unspecified entries are zero.
    pub fn from_entries(params: GroupParams, entries: &[(usize, usize, u64)]) -> Result<Self> {
        let n = params.n();
        let mut e = Self::identity(params);
        for &(i, j, v) in entries {
            if !(i < j && j < n) {
                return Err(Error::Validation(format!(
                    "entry ({}, {}) is not strictly upper triangular in {params}",
                    i + 1,
                    j + 1
                )));
            }
            if v >= params.p() {
                return Err(Error::Validation(format!(
                    "entry ({}, {}) = {v} is not reduced mod {}",
                    i + 1,
                    j + 1,
                    params.p()
                )));
            }
            e.data[i * n + j] = v;
        }
        Ok(e)
    }

    /// Draws every strictly upper entry uniformly, in canonical order.
    pub fn random(params: GroupParams, rng: &mut SplitMix64) -> Self {
        let mut e = Self::identity(params);
        let n = params.n();
        for (i, j) in canonical_positions(n) {
            e.data[i * n + j] = rng.below(params.p());
        }
        e
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    /// Matrix entry, including the implicit diagonal ones and lower zeros.
    pub fn get(&self, i: usize, j: usize) -> u64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.data[i * self.params.n() + j],
            std::cmp::Ordering::Equal => 1,
            std::cmp::Ordering::Greater => 0,
        }
    }

    /// Strictly upper entries in canonical order.
    pub fn entries(&self) -> Vec<u64> {
        canonical_positions(self.params.n())
            .into_iter()
            .map(|(i, j)| self.get(i, j))
            .collect()
    }

    /// Builds from strictly upper entries in canonical order.
    pub fn from_canonical(params: GroupParams, values: &[u64]) -> Result<Self> {
        let positions = canonical_positions(params.n());
        if values.len() != positions.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for {params}",
                values.len()
            )));
        }
        let triples: Vec<(usize, usize, u64)> = positions
            .into_iter()
            .zip(values)
            .map(|((i, j), &v)| (i, j, v))
            .collect();
        Self::from_entries(params, &triples)
    }

    pub fn is_identity(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.params != other.params {
            return Err(Error::ParamsMismatch);
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.params.n();
        let f = self.params.field();
        let (a, b) = (&self.data, &other.data);
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let mut acc = f.add(a[i * n + j], b[i * n + j]);
                for k in i + 1..j {
                    let x = a[i * n + k];
                    if x != 0 {
                        acc = f.add(acc, f.mul(x, b[k * n + j]));
                    }
                }
                out[i * n + j] = acc;
            }
        }
        Self { params: self.params, data: out }
    }

    pub fn inv(&self) -> Self {
        let n = self.params.n();
        let f = self.params.field();
        let a = &self.data;
        let mut x = vec![0u64; n * n];
        for level in 1..n {
            for i in 0..n - level {
                let j = i + level;
                let mut acc = a[i * n + j];
                for k in i + 1..j {
                    acc = f.add(acc, f.mul(a[i * n + k], x[k * n + j]));
                }
                x[i * n + j] = f.neg(acc);
            }
        }
        Self { params: self.params, data: x }
    }

    pub fn pow(&self, exp: &BigUint) -> Self {
        let mut acc = Self::identity(self.params);
        for i in (0..exp.bits()).rev() {
            acc = acc.mul_unchecked(&acc);
            if exp.bit(i) {
                acc = acc.mul_unchecked(self);
            }
        }
        acc
    }

    pub fn pow_u64(&self, exp: u64) -> Self {
        self.pow(&BigUint::from(exp))
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self
            .inv()
            .mul_unchecked(&other.inv())
            .mul_unchecked(self)
            .mul_unchecked(other))
    }

    /// Normal form: exponents `t_ij` (canonical order) such that the ordered
    /// product of `x_ij(t_ij)` equals `self`.
    pub fn collect(&self) -> Vec<u64> {
        let n = self.params.n();
        let f = self.params.field();
        let mut cur = self.data.clone();
        let mut out = Vec::with_capacity(self.params.root_count());
        for level in 1..n {
            let ts: Vec<u64> = (0..n - level).map(|i| cur[i * n + i + level]).collect();
            // Left-multiply by x_{i,i+level}(-t_i), i ascending: row i -= t_i * row (i + level).
            for (i, &t) in ts.iter().enumerate() {
                if t == 0 {
                    continue;
                }
                let j = i + level;
                cur[i * n + j] = f.sub(cur[i * n + j], t);
                for c in j + 1..n {
                    let delta = f.mul(t, cur[j * n + c]);
                    cur[i * n + c] = f.sub(cur[i * n + c], delta);
                }
            }
            out.extend(ts);
        }
        out
    }

    /// Inverse of [`UtElement::collect`]: multiplies the root elements back together.
    pub fn from_collected(params: GroupParams, exponents: &[u64]) -> Self {
        canonical_positions(params.n())
            .into_iter()
            .zip(exponents)
            .fold(Self::identity(params), |acc, ((i, j), &t)| {
                acc.mul_unchecked(&Self::root(params, i, j, t))
            })
    }

    pub fn to_matrix(&self) -> MatrixFp {
        let n = self.params.n();
        let mut m = MatrixFp::identity(self.params.field(), n);
        for i in 0..n {
            for j in i + 1..n {
                m.set(i, j, self.data[i * n + j]);
            }
        }
        m
    }

    /// Fails unless the matrix is upper unitriangular.
    pub fn from_matrix(params: GroupParams, m: &MatrixFp) -> Result<Self> {
        let n = params.n();
        if m.dim() != n || m.field() != params.field() {
            return Err(Error::ParamsMismatch);
        }
        let mut e = Self::identity(params);
        for i in 0..n {
            for j in 0..n {
                let v = m.get(i, j);
                match i.cmp(&j) {
                    std::cmp::Ordering::Less => e.data[i * n + j] = v,
                    std::cmp::Ordering::Equal if v != 1 => {
                        return Err(Error::InvalidInput("diagonal entry is not 1".into()))
                    }
                    std::cmp::Ordering::Greater if v != 0 => {
                        return Err(Error::InvalidInput("nonzero entry below the diagonal".into()))
                    }
                    _ => {}
                }
            }
        }
        Ok(e)
    }

    /// Mixed-radix index in `[0, |G|)` from the canonical entries, used by the
    /// brute-force oracles.
    pub(crate) fn index(&self) -> u64 {
        let p = self.params.p();
        self.entries().iter().rev().fold(0, |acc, &v| acc * p + v)
    }

    pub(crate) fn from_index(params: GroupParams, mut index: u64) -> Self {
        let p = params.p();
        let values: Vec<u64> = (0..params.root_count())
            .map(|_| {
                let v = index % p;
                index /= p;
                v
            })
            .collect();
        Self::from_canonical(params, &values).expect("valid digits")
    }

    /// Raw strictly-upper storage, shared with the automorphism cache.
    pub(crate) fn raw(&self) -> &[u64] {
        &self.data
    }

    pub(crate) fn from_raw(params: GroupParams, data: Vec<u64>) -> Self {
        debug_assert_eq!(data.len(), params.n() * params.n());
        Self { params, data }
    }
}

impl fmt::Display for UtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_matrix())
    }
}
