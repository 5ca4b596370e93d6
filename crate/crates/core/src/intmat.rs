//! Exact integer linear algebra: row Hermite normal form with transform,
//! integer kernels and integer solutions of linear systems.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn from_i64(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn transpose(m: &IntMatrix, cols: usize) -> IntMatrix {
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Result of [`row_hnf`]: `transform * input = hnf`, `transform`
/// unimodular. `pivots[i]` is the pivot column of nonzero row `i`; rows
/// past `pivots.len()` are zero.
#[derive(Debug, Clone)]
pub struct RowHnf {
    pub hnf: IntMatrix,
    pub transform: IntMatrix,
    pub pivots: Vec<usize>,
}

// row[target] -= q * row[src], applied to both the matrix and the transform
fn sub_row(m: &mut IntMatrix, target: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let (a, b) = if target < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(target);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in a.iter_mut().zip(b.iter()) {
        *x -= q * y;
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for x in m[r].iter_mut() {
        *x = -x.clone();
    }
}

/// Row-style Hermite normal form: pivots strictly increase, pivot entries
/// are positive, entries above a pivot are reduced into `[0, pivot)`.
pub fn row_hnf(input: &IntMatrix, cols: usize) -> RowHnf {
    let rows = input.len();
    let mut h = input.clone();
    let mut u = identity(rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        // Euclid on column `col` over rows r.. until one nonzero entry remains.
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows {
                if !h[i][col].is_zero()
                    && best.is_none_or(|b| h[i][col].abs() < h[b][col].abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            h.swap(r, b);
            u.swap(r, b);
            let mut done = true;
            for i in r + 1..rows {
                if h[i][col].is_zero() {
                    continue;
                }
                let q = h[i][col].div_floor(&h[r][col]);
                sub_row(&mut h, i, r, &q);
                sub_row(&mut u, i, r, &q);
                if !h[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[r][col].is_zero() {
            continue;
        }
        if h[r][col].is_negative() {
            negate_row(&mut h, r);
            negate_row(&mut u, r);
        }
        for i in 0..r {
            let q = h[i][col].div_floor(&h[r][col]);
            sub_row(&mut h, i, r, &q);
            sub_row(&mut u, i, r, &q);
        }
        pivots.push(col);
        r += 1;
    }
    RowHnf {
        hnf: h,
        transform: u,
        pivots,
    }
}

/// Basis of `{x in Z^n : m x = 0}` for an `rows x n` matrix, returned in
/// row Hermite normal form (each basis vector is a row).
pub fn kernel_basis(m: &IntMatrix, n: usize) -> IntMatrix {
    let mt = transpose(m, n);
    let rows = m.len();
    let res = row_hnf(&mt, rows);
    let rank = res.pivots.len();
    let kernel: IntMatrix = res.transform[rank..].to_vec();
    if kernel.is_empty() {
        return kernel;
    }
    let canon = row_hnf(&kernel, n);
    canon.hnf[..canon.pivots.len()].to_vec()
}

/// An integer solution of `m x = t`, or `None` if there is none. Free
/// coordinates of the echelon system are set to zero.
pub fn solve(m: &IntMatrix, n: usize, t: &[BigInt]) -> Option<Vec<BigInt>> {
    let rows = m.len();
    // x^T m^T = t^T; with h = u m^T, write x^T = y^T u and solve y^T h = t^T.
    let mt = transpose(m, n);
    let res = row_hnf(&mt, rows);
    let mut y = vec![BigInt::zero(); n];
    let mut residual: Vec<BigInt> = t.to_vec();
    for (i, &p) in res.pivots.iter().enumerate() {
        let (q, rem) = residual[p].div_rem(&res.hnf[i][p]);
        if !rem.is_zero() {
            return None;
        }
        for (j, v) in residual.iter_mut().enumerate() {
            *v -= &q * &res.hnf[i][j];
        }
        y[i] = q;
    }
    if residual.iter().any(|v| !v.is_zero()) {
        return None;
    }
    let x = (0..n)
        .map(|j| {
            y.iter()
                .zip(res.transform.iter())
                .map(|(yi, row)| yi * &row[j])
                .sum()
        })
        .collect();
    Some(x)
}

pub fn mat_vec(m: &IntMatrix, x: &[BigInt]) -> Vec<BigInt> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hnf_of_small_matrix() {
        let m = from_i64(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let res = row_hnf(&m, 3);
        assert_eq!(res.pivots, vec![0, 1, 2]);
        for (i, &p) in res.pivots.iter().enumerate() {
            assert!(res.hnf[i][p].is_positive());
            for k in 0..i {
                assert!(!res.hnf[k][p].is_negative() && res.hnf[k][p] < res.hnf[i][p]);
            }
            for q in 0..p {
                assert!(res.hnf[i][q].is_zero());
            }
        }
        // product of pivots equals |det m| = 144
        let d: BigInt = res.pivots.iter().enumerate().map(|(i, &p)| res.hnf[i][p].clone()).product();
        assert_eq!(d, BigInt::from(144));
        // transform * m == hnf
        let prod: IntMatrix = res
            .transform
            .iter()
            .map(|row| {
                (0..3)
                    .map(|j| row.iter().zip(&m).map(|(a, r)| a * &r[j]).sum())
                    .collect()
            })
            .collect();
        assert_eq!(prod, res.hnf);
    }

    #[test]
    fn kernel_of_zero_matrix_is_standard_basis() {
        let m = from_i64(&[vec![0, 0, 0], vec![0, 0, 0]]);
        assert_eq!(kernel_basis(&m, 3), identity(3));
    }

    #[test]
    fn kernel_vectors_are_in_kernel() {
        let m = from_i64(&[vec![1, 2, 3, 4], vec![2, 4, 6, 9]]);
        let k = kernel_basis(&m, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&m, v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_finds_integer_solutions() {
        let m = from_i64(&[vec![2, 3], vec![0, 1]]);
        let x = solve(&m, 2, &big(&[7, 1])).unwrap();
        assert_eq!(x, big(&[2, 1]));
        let m = from_i64(&[vec![2, 4]]);
        assert!(solve(&m, 2, &big(&[3])).is_none());
        assert!(solve(&m, 2, &big(&[6])).is_some());
    }
}
