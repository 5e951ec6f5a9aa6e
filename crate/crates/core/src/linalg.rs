//! Exact sparse linear algebra over a `Field`.

use std::collections::HashMap;

use crate::field::Field;

/// Sparse row: `(column, value)` pairs with strictly increasing columns and
/// no stored zeros.
pub type SparseRow<F> = Vec<(usize, F)>;

/// `dst += c * src`, both sorted.
pub fn axpy<F: Field>(dst: &SparseRow<F>, c: &F, src: &SparseRow<F>) -> SparseRow<F> {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        let take_dst = j == src.len() || (i < dst.len() && dst[i].0 < src[j].0);
        let take_src = i == dst.len() || (j < src.len() && src[j].0 < dst[i].0);
        if take_dst {
            out.push(dst[i].clone());
            i += 1;
        } else if take_src {
            out.push((src[j].0, c.mul(&src[j].1)));
            j += 1;
        } else {
            let v = dst[i].1.add(&c.mul(&src[j].1));
            if !v.is_zero() {
                out.push((dst[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Rank of the matrix with the given rows, by echelon insertion.
/// Rows are consumed shortest-first to limit fill-in.
pub fn rank<F: Field>(mut rows: Vec<SparseRow<F>>) -> usize {
    rows.retain(|r| !r.is_empty());
    rows.sort_by_key(|r| r.len());
    let mut pivots: HashMap<usize, SparseRow<F>> = HashMap::new();
    for mut r in rows {
        while let Some((lead, v)) = r.first().cloned() {
            match pivots.get(&lead) {
                Some(p) => {
                    let c = v.neg().mul(&p[0].1.inv());
                    r = axpy(&r, &c, p);
                }
                None => {
                    pivots.insert(lead, r);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Product of a sparse row-major matrix `a` (rows indexed by output) with
/// `b`, as rows of `a * b`. Used to check `d∘d = 0`.
pub fn mat_mul<F: Field>(a: &[SparseRow<F>], b: &[SparseRow<F>]) -> Vec<SparseRow<F>> {
    a.iter()
        .map(|row| {
            let mut acc: SparseRow<F> = Vec::new();
            for (k, v) in row {
                acc = axpy(&acc, v, &b[*k]);
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Rational, F2};
    use proptest::prelude::*;

    fn dense_rank(m: &[Vec<i64>]) -> usize {
        let mut a: Vec<Vec<Rational>> = m.iter().map(|r| r.iter().map(|&x| Rational::from_i64(x)).collect()).collect();
        let cols = a.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else { continue };
            a.swap(rank, p);
            let inv = a[rank][c].inv();
            for r in 0..a.len() {
                if r != rank && !a[r][c].is_zero() {
                    let f = a[r][c].mul(&inv);
                    for k in 0..cols {
                        let v = a[r][k].sub(&f.mul(&a[rank][k]));
                        a[r][k] = v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn sparse(m: &[Vec<i64>]) -> Vec<SparseRow<Rational>> {
        m.iter()
            .map(|r| r.iter().enumerate().filter(|(_, &x)| x != 0).map(|(k, &x)| (k, Rational::from_i64(x))).collect())
            .collect()
    }

    #[test]
    fn f2_rank_differs_from_rational() {
        // [[1,1],[1,-1]] is invertible over Q, singular over F2
        let q = sparse(&[vec![1, 1], vec![1, -1]]);
        assert_eq!(rank(q), 2);
        let f: Vec<SparseRow<F2>> = vec![vec![(0, F2(true)), (1, F2(true))], vec![(0, F2(true)), (1, F2(true))]];
        assert_eq!(rank(f), 1);
    }

    proptest! {
        #[test]
        fn sparse_rank_matches_dense(m in prop::collection::vec(prop::collection::vec(-2i64..=2, 6), 0..7)) {
            prop_assert_eq!(rank(sparse(&m)), dense_rank(&m));
        }
    }
}
