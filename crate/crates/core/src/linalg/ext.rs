use std::sync::Arc;

use super::MatrixFp;
use crate::error::{Error, Result};
use crate::ff::{ExtElem, ExtField};

/// A square matrix over an extension field. All entries share one context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixExt {
    ctx: Arc<ExtField>,
    n: usize,
    data: Vec<ExtElem>,
}

impl MatrixExt {
    pub fn zero(ctx: &Arc<ExtField>, n: usize) -> Self {
        Self { ctx: ctx.clone(), n, data: vec![ExtElem::zero(ctx); n * n] }
    }

    pub fn identity(ctx: &Arc<ExtField>, n: usize) -> Self {
        let mut m = Self::zero(ctx, n);
        for i in 0..n {
            m.data[i * n + i] = ExtElem::one(ctx);
        }
        m
    }

    /// Embeds a matrix over Z_p. The prime fields must agree.
    pub fn from_fp(a: &MatrixFp, ctx: &Arc<ExtField>) -> Result<Self> {
        if a.field() != ctx.base() {
            return Err(Error::ModulusMismatch(a.field().modulus(), ctx.base().modulus()));
        }
        let n = a.dim();
        let data = (0..n * n)
            .map(|k| ExtElem::from_base(ctx, a.get(k / n, k % n)))
            .collect();
        Ok(Self { ctx: ctx.clone(), n, data })
    }

    pub fn context(&self) -> &Arc<ExtField> {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &ExtElem {
        &self.data[i * self.n + j]
    }

    /// `self - lambda * I`.
    pub fn sub_scalar(&self, lambda: &ExtElem) -> Result<Self> {
        let mut out = self.clone();
        for i in 0..self.n {
            let idx = i * self.n + i;
            out.data[idx] = out.data[idx].checked_sub(lambda)?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.n, other.n)));
        }
        let n = self.n;
        let mut out = Self::zero(&self.ctx, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ExtElem::zero(&self.ctx);
                for k in 0..n {
                    acc = acc.checked_add(&self.get(i, k).checked_mul(other.get(k, j))?)?;
                }
                out.data[i * n + j] = acc;
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[ExtElem]) -> Result<Vec<ExtElem>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against dimension {}",
                v.len(),
                self.n
            )));
        }
        (0..self.n)
            .map(|i| {
                v.iter().enumerate().try_fold(ExtElem::zero(&self.ctx), |acc, (j, x)| {
                    acc.checked_add(&self.get(i, j).checked_mul(x)?)
                })
            })
            .collect()
    }

    /// Reduced row echelon form and its pivot columns.
    fn rref(&self) -> (Vec<Vec<ExtElem>>, Vec<usize>) {
        let n = self.n;
        let mut rows: Vec<Vec<ExtElem>> = self.data.chunks(n.max(1)).take(n).map(|r| r.to_vec()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..n {
            let Some(pivot) = (r..n).find(|&i| !rows[i][col].is_zero()) else {
                continue;
            };
            rows.swap(pivot, r);
            let inv = rows[r][col].inv().expect("nonzero pivot");
            for x in rows[r].iter_mut() {
                *x = &*x * &inv;
            }
            for i in 0..n {
                if i == r || rows[i][col].is_zero() {
                    continue;
                }
                let factor = rows[i][col].clone();
                for j in 0..n {
                    let delta = &factor * &rows[r][j];
                    rows[i][j] = &rows[i][j] - &delta;
                }
            }
            pivots.push(col);
            r += 1;
        }
        (rows, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the right kernel `{v : M v = 0}`, one vector per free
    /// column of the reduced row echelon form. Full rank gives an empty list.
    pub fn kernel_basis(&self) -> Vec<Vec<ExtElem>> {
        let n = self.n;
        let (rows, pivots) = self.rref();
        (0..n)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![ExtElem::zero(&self.ctx); n];
                v[free] = ExtElem::one(&self.ctx);
                for (k, &pc) in pivots.iter().enumerate() {
                    v[pc] = -&rows[k][free];
                }
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::{Poly, PrimeField};
    use crate::rng::SplitMix64;

    fn f25() -> Arc<ExtField> {
        let z5 = PrimeField::new(5).unwrap();
        ExtField::new(Poly::new(z5, vec![2, 0, 1])).unwrap()
    }

    fn is_zero_vec(v: &[ExtElem]) -> bool {
        v.iter().all(ExtElem::is_zero)
    }

    /// Rank by column reduction, independent of the row-reduction routine.
    fn column_rank(m: &MatrixExt) -> usize {
        let n = m.dim();
        let mut cols: Vec<Vec<ExtElem>> = (0..n).map(|j| (0..n).map(|i| m.get(i, j).clone()).collect()).collect();
        let mut rank = 0;
        for row in 0..n {
            let Some(p) = (rank..n).find(|&c| !cols[c][row].is_zero()) else {
                continue;
            };
            cols.swap(p, rank);
            let inv = cols[rank][row].inv().unwrap();
            for c in 0..n {
                if c != rank && !cols[c][row].is_zero() {
                    let factor = &cols[c][row] * &inv;
                    for i in 0..n {
                        let d = &factor * &cols[rank][i];
                        cols[c][i] = &cols[c][i] - &d;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn zero_and_identity_kernels() {
        let ctx = f25();
        let k = MatrixExt::zero(&ctx, 3).kernel_basis();
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                assert_eq!(x.is_one(), i == j);
            }
        }
        assert!(MatrixExt::identity(&ctx, 3).kernel_basis().is_empty());
    }

    #[test]
    fn eigenvector_of_antidiagonal_matrix() {
        let ctx = f25();
        let z5 = ctx.base();
        let a = MatrixFp::from_rows(z5, &[vec![0, 4], vec![2, 0]]).unwrap();
        let lifted = MatrixExt::from_fp(&a, &ctx).unwrap();
        let lambda = ExtElem::generator(&ctx);
        let kernel = lifted.sub_scalar(&lambda).unwrap().kernel_basis();
        assert_eq!(kernel.len(), 1);
        let v = &kernel[0];
        let av = lifted.mul_vec(v).unwrap();
        let lv: Vec<ExtElem> = v.iter().map(|x| &lambda * x).collect();
        assert_eq!(av, lv);
        // Solving 4*v2 = x*v1 with v2 = 1 by hand gives v1 = 4 * x^-1 = 4 * 2x = 3x.
        assert!(kernel[0][1].is_one());
        assert_eq!(kernel[0][0], ExtElem::new(&ctx, Poly::new(z5, vec![0, 3])));
    }

    #[test]
    fn rank_nullity_on_random_singular_matrices() {
        let ctx = f25();
        let mut rng = SplitMix64::new(31);
        for _ in 0..200 {
            let n = 1 + rng.below(4) as usize;
            // Random low-rank matrix: product of n x r and r x n factors.
            let r = rng.below(n as u64 + 1) as usize;
            let rand_elem = |rng: &mut SplitMix64| {
                ExtElem::new(&ctx, Poly::new(ctx.base(), vec![rng.below(5), rng.below(5)]))
            };
            let mut m = MatrixExt::zero(&ctx, n);
            let left: Vec<Vec<ExtElem>> = (0..n).map(|_| (0..r).map(|_| rand_elem(&mut rng)).collect()).collect();
            let right: Vec<Vec<ExtElem>> = (0..r).map(|_| (0..n).map(|_| rand_elem(&mut rng)).collect()).collect();
            for i in 0..n {
                for j in 0..n {
                    let mut acc = ExtElem::zero(&ctx);
                    for k in 0..r {
                        acc = &acc + &(&left[i][k] * &right[k][j]);
                    }
                    m.data[i * n + j] = acc;
                }
            }
            let kernel = m.kernel_basis();
            assert_eq!(kernel.len(), n - column_rank(&m));
            for v in &kernel {
                assert!(is_zero_vec(&m.mul_vec(v).unwrap()));
            }
            // Independence: stacking the kernel vectors as rows gives full row rank.
            let mut stack = MatrixExt::zero(&ctx, n);
            for (i, v) in kernel.iter().enumerate() {
                for (j, x) in v.iter().enumerate() {
                    stack.data[i * n + j] = x.clone();
                }
            }
            assert_eq!(stack.rank(), kernel.len());
        }
    }
}
