//! Exact Gaussian elimination over the rationals.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Solves `A·x = b` exactly.
///
/// Columns are processed left to right; the pivot is the first row (in
/// order) with a nonzero entry in the current column. Free variables are set
/// to zero, so the output is deterministic. Returns `None` when the system
/// is inconsistent.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Result<Option<Vec<BigRational>>> {
    let rows = a.len();
    if b.len() != rows {
        return Err(Error::Dimension(format!("{rows} equations but {} right-hand sides", b.len())));
    }
    let cols = a.first().map_or(0, |r| r.len());
    if a.iter().any(|r| r.len() != cols) {
        return Err(Error::Dimension("ragged coefficient matrix".into()));
    }
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.clone();
            row.push(bi.clone());
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut next = 0;
    for c in 0..cols {
        let Some(p) = (next..rows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(next, p);
        let inv = BigRational::one() / &m[next][c];
        for x in m[next].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[next].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == next || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x -= &f * y;
            }
        }
        pivot_cols.push(c);
        next += 1;
        if next == rows {
            break;
        }
    }
    if m[next..].iter().any(|row| !row[cols].is_zero()) {
        return Ok(None);
    }
    let mut x = vec![BigRational::zero(); cols];
    for (r, &c) in pivot_cols.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    Ok(Some(x))
}

/// Rank of a rational matrix.
pub fn rank(a: &[Vec<BigRational>]) -> usize {
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<BigRational>> = a.to_vec();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pivot = m[r].clone();
        for row in m.iter_mut().skip(r + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot[c];
            for (x, y) in row.iter_mut().zip(&pivot).skip(c) {
                *x -= &f * y;
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn unique_solution() {
        let a = mat(&[&[1, 1, 1], &[0, 0, 1], &[0, 1, 1], &[0, 0, 1]]);
        let b = vec![q(2), q(1), q(0), q(1)];
        assert_eq!(solve(&a, &b).unwrap().unwrap(), vec![q(2), q(-1), q(1)]);
    }

    #[test]
    fn inconsistent_system() {
        let a = mat(&[&[1, 1], &[1, 1]]);
        assert_eq!(solve(&a, &[q(1), q(2)]).unwrap(), None);
    }

    #[test]
    fn free_variables_zero() {
        let a = mat(&[&[1, 1, 0]]);
        assert_eq!(solve(&a, &[q(3)]).unwrap().unwrap(), vec![q(3), q(0), q(0)]);
        assert_eq!(rank(&a), 1);
    }

    #[test]
    fn dimension_errors() {
        assert!(solve(&mat(&[&[1]]), &[]).is_err());
        assert!(solve(&mat(&[&[1], &[1, 2]]), &[q(1), q(1)]).is_err());
    }

    proptest! {
        #[test]
        fn solutions_satisfy_system(
            entries in proptest::collection::vec(-3i64..4, 12),
            x in proptest::collection::vec(-5i64..6, 4),
        ) {
            let a: Vec<Vec<BigRational>> = entries.chunks(4).map(|r| r.iter().map(|&v| q(v)).collect()).collect();
            let b: Vec<BigRational> = a.iter().map(|r| r.iter().zip(&x).map(|(c, &v)| c * q(v)).sum()).collect();
            let sol = solve(&a, &b).unwrap().expect("consistent by construction");
            for (row, bi) in a.iter().zip(&b) {
                let lhs: BigRational = row.iter().zip(&sol).map(|(c, v)| c * v).sum();
                prop_assert_eq!(&lhs, bi);
            }
        }
    }
}
