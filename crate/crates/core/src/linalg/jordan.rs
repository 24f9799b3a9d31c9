use super::{char_poly, MatrixExt, MatrixFp};
use crate::error::{Error, Result};
use crate::ff::ExtElem;

/// Recovers `m mod p` from `B = A^m` using a Jordan chain of `A` at `lam`.
///
/// With `N = A - lam*I`, pick `w` in `ker N^2` but not in `ker N` and set
/// `v = N w`. Then `A w = lam w + v`, and the binomial expansion of
/// `(lam*I + N)^m` gives `B w = lam^m w + m lam^(m-1) v`. The coefficient of
/// `v` divided by `lam^(m-1)` is `m` reduced into Z_p.
///
/// Only chains of length two are used; longer chains carry the same residue.
/// Returns `None` when `A` is semisimple at `lam`.
pub fn jordan_exponent_residue(a: &MatrixFp, b: &MatrixFp, lam: &ExtElem) -> Result<Option<u64>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", a.dim(), b.dim())));
    }
    let ctx = lam.context();
    let chi = char_poly(a);
    let chi_at_lam = chi
        .coeffs()
        .iter()
        .rev()
        .fold(ExtElem::zero(ctx), |acc, &c| &(&acc * lam) + &ExtElem::from_base(ctx, c));
    if !chi_at_lam.is_zero() {
        return Err(Error::InvalidInput(format!(
            "{lam} is not an eigenvalue of the matrix"
        )));
    }

    let big_a = MatrixExt::from_fp(a, ctx)?;
    let big_b = MatrixExt::from_fp(b, ctx)?;
    let nil = big_a.sub_scalar(lam)?;
    let nil_sq = nil.mul(&nil)?;
    let eigen_dim = nil.kernel_basis().len();
    let generalized = nil_sq.kernel_basis();
    if generalized.len() == eigen_dim {
        return Ok(None);
    }
    let (w, v) = generalized
        .into_iter()
        .find_map(|w| {
            let v = nil.mul_vec(&w).ok()?;
            (!v.iter().all(ExtElem::is_zero)).then_some((w, v))
        })
        .expect("a generalized eigenvector outside the eigenspace exists");

    let mu = proportionality(&big_b.mul_vec(&v)?, &v)?;
    let bw = big_b.mul_vec(&w)?;
    let residual: Vec<ExtElem> = bw.iter().zip(&w).map(|(x, y)| x - &(&mu * y)).collect();
    let coeff = proportionality(&residual, &v)?;
    // coeff = m * lam^(m-1) and mu = lam^m, so m = coeff * lam / mu.
    let m = (&coeff * lam).checked_div(&mu)?;
    m.as_base()
        .map(Some)
        .ok_or_else(|| Error::Inconsistent("Jordan coefficient does not lie in the prime field".into()))
}

/// The scalar `c` with `x = c * v`, failing if `x` is not a multiple of `v`.
pub(crate) fn proportionality(x: &[ExtElem], v: &[ExtElem]) -> Result<ExtElem> {
    let k = v
        .iter()
        .position(|e| !e.is_zero())
        .ok_or_else(|| Error::InvalidInput("zero vector".into()))?;
    let c = x[k].checked_div(&v[k])?;
    if x.iter().zip(v).all(|(xi, vi)| *xi == &c * vi) {
        Ok(c)
    } else {
        Err(Error::EigenvectorMismatch(
            "image is not proportional to the eigenvector".into(),
        ))
    }
}
