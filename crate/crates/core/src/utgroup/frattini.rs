use super::{Automorphism, GroupParams, UtElement};
use crate::linalg::MatrixFp;

/// A point of the Frattini quotient `G / Phi(G) = Z_p^(n-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FrattiniVector {
    coords: Vec<u64>,
}

impl FrattiniVector {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

/// The first superdiagonal `(a_12, a_23, ..., a_{n-1,n})`. For odd p this is
/// the quotient map by `Phi(G) = G' G^p`.
pub fn frattini_project(a: &UtElement) -> FrattiniVector {
    let n = a.params().n();
    FrattiniVector { coords: (0..n - 1).map(|i| a.get(i, i + 1)).collect() }
}

/// Matrix of the linear map induced on the quotient.
pub fn induced_map(phi: &Automorphism) -> MatrixFp {
    phi.induced_map()
}

pub(crate) fn induced_from_images(params: GroupParams, images: &[UtElement]) -> MatrixFp {
    let k = params.n() - 1;
    let mut m = MatrixFp::zero(params.field(), k);
    for (col, image) in images.iter().enumerate() {
        for (row, &v) in frattini_project(image).coords.iter().enumerate() {
            m.set(row, col, v);
        }
    }
    m
}
