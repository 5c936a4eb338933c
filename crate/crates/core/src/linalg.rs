//! Exact Gaussian elimination over the rationals.
//!
//! Pivoting is "first nonzero entry": with exact arithmetic there is no
//! stability concern, and a zero pivot column certifies singularity.

use num::Zero;

use crate::Rat;

/// Solve `a x = b` for a square matrix `a` (row-major). Returns `None` when
/// `a` is singular.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n) && b.len() == n);
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    eliminate(&mut m, n)?;
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Invert a square matrix (row-major). Returns `None` when singular.
pub fn invert(a: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j {
                    Rat::from_integer(1.into())
                } else {
                    Rat::zero()
                });
            }
            r
        })
        .collect();
    eliminate(&mut m, n)?;
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Reduce the first `n` columns of the augmented matrix to the identity.
fn eliminate(m: &mut [Vec<Rat>], n: usize) -> Option<()> {
    let width = m.first().map_or(n, |r| r.len());
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = {
            let p = &m[col][col];
            Rat::from_integer(1.into()) / p.clone()
        };
        for j in col..width {
            let v = &m[col][j] * &inv;
            m[col][j] = v;
        }
        for row in 0..n {
            if row == col || m[row][col].is_zero() {
                continue;
            }
            let factor = m[row][col].clone();
            for j in col..width {
                let v = &m[row][j] - &factor * &m[col][j];
                m[row][j] = v;
            }
        }
    }
    Some(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn solves_and_inverts() {
        let a = vec![vec![rat(2, 1), rat(1, 1)], vec![rat(1, 1), rat(1, 1)]];
        let x = solve(&a, &[rat(3, 1), rat(2, 1)]).unwrap();
        assert_eq!(x, vec![rat(1, 1), rat(1, 1)]);
        let inv = invert(&a).unwrap();
        assert_eq!(inv[0], vec![rat(1, 1), rat(-1, 1)]);
        assert_eq!(inv[1], vec![rat(-1, 1), rat(2, 1)]);
    }

    #[test]
    fn detects_singularity() {
        let a = vec![vec![rat(1, 1), rat(2, 1)], vec![rat(2, 1), rat(4, 1)]];
        assert!(solve(&a, &[rat(1, 1), rat(1, 1)]).is_none());
        assert!(invert(&a).is_none());
    }
}
