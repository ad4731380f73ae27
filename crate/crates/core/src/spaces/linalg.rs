//! Small dense exact linear algebra: Gaussian elimination, rank, null spaces,
//! inverses. Everything is over arbitrary-precision rationals; pivots are
//! chosen by position (first nonzero), which keeps runs reproducible.

use num_traits::{One, Zero};

use crate::rat::Rat;

pub type Matrix = Vec<Vec<Rat>>;

/// Reduced row echelon form in place; returns the pivot column per row.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].clone();
        for v in m[r].iter_mut() {
            *v = &*v / &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for c2 in 0..cols {
                    let delta = &f * &m[r][c2];
                    m[i][c2] = &m[i][c2] - delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut work = m.clone();
    rref(&mut work).len()
}

/// Basis of the null space of `m` (viewed as a map on column vectors).
pub fn null_space(m: &Matrix, cols: usize) -> Vec<Vec<Rat>> {
    let mut work = m.clone();
    let pivots = rref(&mut work);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -work[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Unique solution of `a x = b`, if the system has exactly one.
pub fn solve_unique(a: &Matrix, b: &[Rat]) -> Option<Vec<Rat>> {
    let rows = a.len();
    let cols = if rows == 0 { return None } else { a[0].len() };
    let mut aug: Matrix = a
        .iter()
        .zip(b.iter())
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    // Inconsistent if a pivot lands in the rhs column.
    if pivots.last() == Some(&cols) {
        return None;
    }
    if pivots.len() != cols {
        return None; // underdetermined
    }
    let mut x = vec![Rat::zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][cols].clone();
    }
    // Rows below the pivots must be consistent (all-zero coefficients, zero rhs).
    for row in aug.iter().skip(pivots.len()) {
        if !row[cols].is_zero() {
            return None;
        }
    }
    Some(x)
}

/// Inverse of a square matrix, if nonsingular.
pub fn invert(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n, "invert: matrix not square");
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { Rat::one() } else { Rat::zero() });
            }
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| i != p) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn mat_vec(m: &Matrix, v: &[Rat]) -> Vec<Rat> {
    m.iter()
        .map(|row| row.iter().zip(v.iter()).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rint};

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&v| rint(v)).collect())
            .collect()
    }

    #[test]
    fn solves_unique_system() {
        let a = m(&[&[2, 1], &[1, -1]]);
        let b = vec![rint(3), rint(0)];
        let x = solve_unique(&a, &b).unwrap();
        assert_eq!(x, vec![rint(1), rint(1)]);
    }

    #[test]
    fn rejects_singular_and_inconsistent() {
        let a = m(&[&[1, 1], &[2, 2]]);
        assert!(solve_unique(&a, &[rint(1), rint(2)]).is_none()); // underdetermined
        assert!(solve_unique(&a, &[rint(1), rint(3)]).is_none()); // inconsistent
    }

    #[test]
    fn null_space_of_projection() {
        let a = m(&[&[1, 0, 0]]);
        let ns = null_space(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(dot(&a[0], v).is_zero());
        }
    }

    #[test]
    fn inverts_2x2() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let inv = invert(&a).unwrap();
        assert_eq!(inv[0][0], rat(-2, 1));
        assert_eq!(inv[0][1], rint(1));
        assert_eq!(inv[1][0], rat(3, 2));
        assert_eq!(inv[1][1], rat(-1, 2));
        assert!(invert(&m(&[&[1, 1], &[1, 1]])).is_none());
    }
}
