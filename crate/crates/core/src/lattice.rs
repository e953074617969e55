//! Integer lattices: Hermite normal form, integer kernels and determinants.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::linalg::Int;

/// Unimodular row elimination on the first `ncols` columns of `rows`.
/// Returns the number of pivot rows, which sit at the top afterwards.
/// With `reduce_above`, entries above each pivot are brought into `[0, pivot)`.
fn hermite_eliminate(rows: &mut [Vec<Int>], ncols: usize, reduce_above: bool) -> usize {
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        loop {
            // smallest nonzero magnitude at or below r
            let best = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()).then(a.cmp(&b)));
            let Some(best) = best else { break };
            rows.swap(r, best);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let f = rows[i][c].div_floor(&rows[r][c]);
                let (top, bottom) = rows.split_at_mut(i);
                for (x, y) in bottom[0].iter_mut().zip(&top[r]) {
                    *x -= &f * y;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows.get(r).is_none_or(|row| row[c].is_zero()) {
            continue;
        }
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -&*x;
            }
        }
        if reduce_above {
            for i in 0..r {
                let f = rows[i][c].div_floor(&rows[r][c]);
                if f.is_zero() {
                    continue;
                }
                let (top, bottom) = rows.split_at_mut(r);
                for (x, y) in top[i].iter_mut().zip(&bottom[0]) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

/// Row-style Hermite normal form of the lattice spanned by `rows`; zero rows are dropped.
pub fn hermite_normal_form(rows: &[Vec<Int>], ncols: usize) -> Vec<Vec<Int>> {
    let mut m: Vec<Vec<Int>> = rows.to_vec();
    let r = hermite_eliminate(&mut m, ncols, true);
    m.truncate(r);
    m
}

/// Basis (in Hermite normal form) of `{x in Z^n : c . x = 0 for every constraint c}`.
pub fn integer_kernel(constraints: &[Vec<Int>], n: usize) -> Vec<Vec<Int>> {
    let m = constraints.len();
    // rows: [ c_1(k) ... c_m(k) | e_k ]
    let mut rows: Vec<Vec<Int>> = (0..n)
        .map(|k| {
            let mut row: Vec<Int> = constraints.iter().map(|c| c[k].clone()).collect();
            row.extend((0..n).map(|j| if j == k { Int::one() } else { Int::zero() }));
            row
        })
        .collect();
    let r = hermite_eliminate(&mut rows, m, false);
    let kernel: Vec<Vec<Int>> = rows[r..].iter().map(|row| row[m..].to_vec()).collect();
    hermite_normal_form(&kernel, n)
}

/// Determinant via Bareiss fraction-free elimination.
pub fn determinant(m: &[Vec<Int>]) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut a: Vec<Vec<Int>> = m.to_vec();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Int::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

pub fn to_ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: &[Vec<i64>]) -> Vec<Vec<Int>> {
        rows.iter().map(|r| to_ints(r)).collect()
    }

    #[test]
    fn hnf_of_plane() {
        let h = hermite_normal_form(&z(&[vec![1, 1, 0], vec![0, 1, 1]]), 3);
        assert_eq!(h, z(&[vec![1, 0, -1], vec![0, 1, 1]]));
    }

    #[test]
    fn hnf_is_canonical_under_basis_change() {
        let a = hermite_normal_form(&z(&[vec![2, 3], vec![4, 5]]), 2);
        let b = hermite_normal_form(&z(&[vec![6, 8], vec![2, 3], vec![0, 0]]), 2);
        assert_eq!(a, b);
        assert_eq!(a, z(&[vec![2, 0], vec![0, 1]]));
    }

    #[test]
    fn kernel_of_single_form() {
        let k = integer_kernel(&z(&[vec![1, -1, 1]]), 3);
        assert_eq!(k, z(&[vec![1, 0, -1], vec![0, 1, 1]]));
    }

    #[test]
    fn kernel_is_saturated() {
        // 2x + 4y = 0: the primitive solution, not (4, -2)
        let k = integer_kernel(&z(&[vec![2, 4]]), 2);
        assert_eq!(k, z(&[vec![2, -1]]));
    }

    #[test]
    fn kernel_edge_cases() {
        assert_eq!(integer_kernel(&[], 2), z(&[vec![1, 0], vec![0, 1]]));
        assert!(integer_kernel(&z(&[vec![1, 0], vec![0, 1]]), 2).is_empty());
    }

    #[test]
    fn determinants() {
        assert_eq!(
            determinant(&z(&[vec![1, 2, 2], vec![0, 1, 2], vec![0, 0, 1]])),
            Int::one()
        );
        assert_eq!(determinant(&z(&[vec![0, 1], vec![1, 0]])), Int::from(-1));
        assert_eq!(determinant(&z(&[vec![2, 4], vec![1, 2]])), Int::zero());
        assert_eq!(
            determinant(&z(&[vec![0, 2, 1], vec![3, 1, 0], vec![1, 1, 1]])),
            Int::from(-4)
        );
    }
}
