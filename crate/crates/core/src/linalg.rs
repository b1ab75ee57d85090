//! Exact determinants over the rationals.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// Determinant of a square matrix given as rows, by Gaussian elimination
/// with exact pivoting on the first nonzero entry.
pub fn det(rows: &[Vec<Scalar>]) -> Scalar {
    let n = rows.len();
    debug_assert!(rows.iter().all(|r| r.len() == n));
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let mut acc = Scalar::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Scalar::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            acc = -acc;
        }
        let p = m[col][col].clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] -= delta;
            }
        }
        acc *= p;
    }
    acc
}

/// Determinant of the `(d+1)×(d+1)` matrix whose top row is all ones and
/// whose column `i` below it holds `columns[i]`.
pub fn bordered_det(columns: &[&[Scalar]]) -> Scalar {
    let k = columns.len();
    if k == 3 {
        let (a, b, c) = (columns[0], columns[1], columns[2]);
        return (&b[0] - &a[0]) * (&c[1] - &a[1]) - (&b[1] - &a[1]) * (&c[0] - &a[0]);
    }
    let mut rows = Vec::with_capacity(k);
    rows.push(vec![Scalar::one(); k]);
    for coord in 0..k - 1 {
        rows.push(columns.iter().map(|c| c[coord].clone()).collect());
    }
    det(&rows)
}

/// Integer determinant by fraction-free (Bareiss) elimination.
pub fn det_int(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign_flip = false;
    let mut prev = BigInt::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigInt::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            sign_flip = !sign_flip;
        }
        for r in col + 1..n {
            for c in col + 1..n {
                let v = &m[col][col] * &m[r][c] - &m[r][col] * &m[col][c];
                m[r][c] = v / &prev;
            }
        }
        prev = m[col][col].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign_flip {
        -d
    } else {
        d
    }
}

/// Integer version of [`bordered_det`], computed on differences from the
/// first column.
pub fn bordered_det_int(columns: &[&[BigInt]]) -> BigInt {
    let k = columns.len();
    let base = columns[0];
    if k == 3 {
        let (b, c) = (columns[1], columns[2]);
        return (&b[0] - &base[0]) * (&c[1] - &base[1]) - (&b[1] - &base[1]) * (&c[0] - &base[0]);
    }
    let rows = (0..k - 1)
        .map(|coord| columns[1..].iter().map(|c| &c[coord] - &base[coord]).collect())
        .collect();
    det_int(rows)
}

/// Exact inverse by Gauss-Jordan elimination; `None` if singular.
pub fn inverse(rows: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = rows.len();
    let mut m: Vec<Vec<Scalar>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(pivot, col);
        let p = m[col][col].clone();
        for c in 0..2 * n {
            m[col][c] /= &p;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in 0..2 * n {
                let delta = &factor * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(det(&m(&[&[2]])), int(2));
        assert_eq!(det(&m(&[&[1, 2], &[3, 4]])), int(-2));
        assert_eq!(det(&m(&[&[0, 1], &[1, 0]])), int(-1));
        assert_eq!(det(&m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])), int(-3));
        assert_eq!(det(&m(&[&[1, 2], &[2, 4]])), int(0));
    }

    #[test]
    fn bordered_unit_triangle() {
        let a = [int(0), int(0)];
        let b = [int(1), int(0)];
        let c = [int(0), int(1)];
        assert_eq!(bordered_det(&[&a, &b, &c]), int(1));
        assert_eq!(bordered_det(&[&a, &c, &b]), int(-1));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = inverse(&a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let v: Scalar = (0..3).map(|k| &a[i][k] * &inv[k][j]).sum();
                assert_eq!(v, if i == j { Scalar::one() } else { Scalar::zero() });
            }
        }
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn integer_paths_match_rational() {
        let cols = m(&[&[1, 5, -2], &[3, 0, 4], &[-1, 2, 2], &[7, -3, 1]]);
        let refs: Vec<&[Scalar]> = cols.iter().map(Vec::as_slice).collect();
        let ints: Vec<Vec<BigInt>> = cols.iter().map(|c| c.iter().map(|v| v.to_integer()).collect()).collect();
        let irefs: Vec<&[BigInt]> = ints.iter().map(Vec::as_slice).collect();
        assert_eq!(Scalar::from_integer(bordered_det_int(&irefs)), bordered_det(&refs));
        let plane = m(&[&[0, 0], &[4, 1], &[1, 3]]);
        let prefs: Vec<&[Scalar]> = plane.iter().map(Vec::as_slice).collect();
        assert_eq!(bordered_det(&prefs), int(11));
        let sq = m(&[&[2, 0, 1, 3], &[1, 1, 0, 2], &[4, 3, 1, 0], &[0, 2, 2, 1]]);
        let isq: Vec<Vec<BigInt>> = sq.iter().map(|r| r.iter().map(|v| v.to_integer()).collect()).collect();
        assert_eq!(Scalar::from_integer(det_int(isq)), det(&sq));
    }
}
