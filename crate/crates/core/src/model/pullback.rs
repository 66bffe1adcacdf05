#![allow(clippy::needless_range_loop)]

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Solves `M c = -s` exactly, where `M` is the intersection matrix of the
/// exceptional curves of a surface resolution and `s_i = Y' . E_i`.
///
/// The returned `c_i` are the multiplicities of the `E_i` in `f^*Y`
/// (numerical pullback: `f^*Y . E_i = 0` for every exceptional `E_i`).
/// `M` must be symmetric and negative definite; definiteness is decided by
/// the signs of the leading principal minors.
pub fn solve_pullback_coefficients(matrix: &[Vec<i64>], strict_dot_e: &[i64]) -> Result<Vec<Rational>> {
    let n = matrix.len();
    if n == 0 {
        return Err(Error::DimensionMismatch("empty intersection matrix".into()));
    }
    if matrix.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch("intersection matrix is not square".into()));
    }
    if strict_dot_e.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} intersection numbers for a {n}x{n} matrix",
            strict_dot_e.len()
        )));
    }
    for i in 0..n {
        for j in 0..i {
            if matrix[i][j] != matrix[j][i] {
                return Err(Error::InvalidParameter("intersection matrix must be symmetric".into()));
            }
        }
    }

    let mut a: Vec<Vec<Rational>> = matrix
        .iter()
        .zip(strict_dot_e)
        .map(|(row, s)| {
            let mut r: Vec<Rational> = row.iter().map(|&x| Rational::from(x)).collect();
            r.push(Rational::from(-*s));
            r
        })
        .collect();

    // Elimination without row exchanges: the k-th pivot is the ratio of the
    // k-th and (k-1)-th leading principal minors, so negative definiteness is
    // exactly "every pivot is negative".
    for k in 0..n {
        let pivot = a[k][k].clone();
        if !pivot.is_negative() {
            return Err(if pivot.is_zero() && is_singular(matrix) {
                Error::SingularMatrix
            } else {
                Error::NotNegativeDefinite(k + 1)
            });
        }
        for i in (k + 1)..n {
            if a[i][k].is_zero() {
                continue;
            }
            let factor = &a[i][k] / &pivot;
            for j in k..=n {
                let delta = &factor * &a[k][j];
                a[i][j] = &a[i][j] - &delta;
            }
        }
    }

    let mut c = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = a[i][n].clone();
        for j in (i + 1)..n {
            acc = acc - &a[i][j] * &c[j];
        }
        c[i] = acc / &a[i][i];
    }
    Ok(c)
}

fn is_singular(matrix: &[Vec<i64>]) -> bool {
    let n = matrix.len();
    let mut a: Vec<Vec<Rational>> = matrix
        .iter()
        .map(|r| r.iter().map(|&x| Rational::from(x)).collect())
        .collect();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return true;
        };
        a.swap(k, p);
        for i in (k + 1)..n {
            let factor = &a[i][k] / &a[k][k];
            for j in k..n {
                let delta = &factor * &a[k][j];
                a[i][j] = &a[i][j] - &delta;
            }
        }
    }
    false
}

/// Tridiagonal intersection matrix of a chain of `len` smooth rational
/// curves with self-intersection `-2` (the `A_len` configuration).
pub(crate) fn a_chain_matrix(len: usize) -> Vec<Vec<i64>> {
    (0..len)
        .map(|i| {
            (0..len)
                .map(|j| match i.abs_diff(j) {
                    0 => -2,
                    1 => 1,
                    _ => 0,
                })
                .collect()
        })
        .collect()
}
