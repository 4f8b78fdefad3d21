//! Dense linear algebra over GF(p): row reduction, rank, determinants and
//! linear solves. Matrices are row-major `Vec<Vec<Fp>>`.

use crate::error::{Error, Result};
use crate::field::{Fp, PrimeField};

pub type Matrix = Vec<Vec<Fp>>;

/// Reduced row echelon form with zero rows removed, plus pivot columns.
pub fn rref(rows: &[Vec<Fp>]) -> (Matrix, Vec<usize>) {
    let mut m: Matrix = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(pr) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].inv().expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x *= inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x -= factor * y;
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    debug_assert!(m.iter().all(|row| row.iter().any(|x| !x.is_zero())));
    (m, pivots)
}

pub fn rank(rows: &[Vec<Fp>]) -> usize {
    rref(rows).1.len()
}

/// True when both row sets span the same subspace.
pub fn row_space_eq(a: &[Vec<Fp>], b: &[Vec<Fp>]) -> bool {
    rref(a).0 == rref(b).0
}

/// True when `v` lies in the row space of `rows`.
pub fn in_row_space(rows: &[Vec<Fp>], v: &[Fp]) -> bool {
    let mut ext = rows.to_vec();
    ext.push(v.to_vec());
    rank(&ext) == rank(rows)
}

pub fn transpose(m: &[Vec<Fp>]) -> Matrix {
    let ncols = m.first().map_or(0, Vec::len);
    (0..ncols)
        .map(|c| m.iter().map(|row| row[c]).collect())
        .collect()
}

/// Columns `cols` of `m`, in that order.
pub fn select_columns(m: &[Vec<Fp>], cols: &[usize]) -> Matrix {
    m.iter()
        .map(|row| cols.iter().map(|&c| row[c]).collect())
        .collect()
}

/// Determinant of a square matrix by Gaussian elimination.
pub fn determinant(field: PrimeField, m: &[Vec<Fp>]) -> Result<Fp> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::ShapeMismatch("determinant of non-square matrix".into()));
    }
    let mut a = m.to_vec();
    let mut det = field.one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Ok(field.zero());
        };
        if pr != c {
            a.swap(pr, c);
            det = -det;
        }
        det *= a[c][c];
        let inv = a[c][c].inv()?;
        for i in c + 1..n {
            let factor = a[i][c] * inv;
            if factor.is_zero() {
                continue;
            }
            let pivot_row = a[c].clone();
            for (x, &y) in a[i][c..].iter_mut().zip(&pivot_row[c..]) {
                *x -= factor * y;
            }
        }
    }
    Ok(det)
}

/// Solves `a · x = b` for a square invertible `a`.
pub fn solve(a: &[Vec<Fp>], b: &[Fp]) -> Result<Vec<Fp>> {
    let n = a.len();
    if b.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: b.len(),
        });
    }
    let aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    let (red, pivots) = rref(&aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
        return Err(Error::Singular);
    }
    Ok(red.iter().map(|row| row[n]).collect())
}

/// Some solution of a possibly rectangular system `a · x = b`, if one exists.
pub fn solve_any(field: PrimeField, a: &[Vec<Fp>], b: &[Fp], ncols: usize) -> Option<Vec<Fp>> {
    let aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    let (red, pivots) = rref(&aug);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = field.zeros(ncols);
    for (row, &c) in red.iter().zip(&pivots) {
        x[c] = row[ncols];
    }
    Some(x)
}

/// Inverse of a square matrix.
pub fn inverse(field: PrimeField, a: &[Vec<Fp>]) -> Result<Matrix> {
    let n = a.len();
    let aug: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            r
        })
        .collect();
    let (red, pivots) = rref(&aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
        return Err(Error::Singular);
    }
    Ok(red.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Matrix product `a · b`.
pub fn mat_mul(field: PrimeField, a: &[Vec<Fp>], b: &[Vec<Fp>]) -> Matrix {
    let inner = b.len();
    let ncols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            debug_assert_eq!(row.len(), inner);
            (0..ncols)
                .map(|c| {
                    row.iter()
                        .zip(b)
                        .fold(field.zero(), |acc, (&x, brow)| acc + x * brow[c])
                })
                .collect()
        })
        .collect()
}
