use super::MatrixFp;
use crate::ff::Poly;

/// Characteristic polynomial `det(xI - A)`, monic of degree n.
///
/// The matrix is first brought to upper Hessenberg form by pivoted
/// similarity transforms, then the polynomial is read off with the
/// standard Hessenberg recurrence. O(n^3) field operations.
pub fn char_poly(a: &MatrixFp) -> Poly {
    let f = a.field();
    let n = a.dim();
    let mut h = a.clone();
    for c in 0..n.saturating_sub(2) {
        let Some(pivot) = (c + 1..n).find(|&r| h.get(r, c) != 0) else {
            continue;
        };
        h.swap_rows(pivot, c + 1);
        h.swap_cols(pivot, c + 1);
        let inv = f.inv(h.get(c + 1, c)).expect("nonzero pivot");
        for r in c + 2..n {
            let u = f.mul(h.get(r, c), inv);
            if u != 0 {
                h.add_row_multiple(r, c + 1, f.neg(u));
                h.add_col_multiple(c + 1, r, u);
            }
        }
    }

    // polys[m] is the characteristic polynomial of the leading m x m block.
    let mut polys = vec![Poly::one(f)];
    for m in 1..=n {
        let linear = Poly::new(f, vec![f.neg(h.get(m - 1, m - 1)), 1]);
        let mut next = linear.mul(&polys[m - 1]);
        let mut t = 1u64;
        for i in 1..m {
            t = f.mul(t, h.get(m - i, m - i - 1));
            let coeff = f.mul(h.get(m - i - 1, m - 1), t);
            if coeff != 0 {
                next = next.sub(&polys[m - i - 1].scale(coeff));
            }
        }
        polys.push(next);
    }
    polys.pop().expect("at least the constant polynomial")
}
