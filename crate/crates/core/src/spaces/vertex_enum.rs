//! Exact vertex enumeration for bounded polyhedra (H → V).
//!
//! The facet system is homogenized to a cone in one extra dimension, the
//! equalities are eliminated through a null-space change of coordinates, and
//! the extreme rays of the remaining pointed cone are built incrementally by
//! the double description method with the standard combinatorial adjacency
//! test. Rays with a positive homogenizing coordinate dehomogenize to
//! vertices; a surviving ray at level zero witnesses unboundedness.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{Point, Rat};
use crate::spaces::linalg::{self, Matrix};
use crate::spaces::polytope::LinearForm;

/// Vertices of `{x : eq·x = rhs, ineq·x ≤ rhs}`. Empty result means the
/// region is empty; an unbounded nonempty region is an error.
pub fn enumerate_vertices(
    dim: usize,
    equalities: &[LinearForm],
    inequalities: &[LinearForm],
) -> Result<Vec<Point>> {
    // Homogenize: y = (x, t).  Equality a·x = b becomes [a, -b]·y = 0,
    // inequality a·x ≤ b becomes [-a, b]·y ≥ 0, plus the row t ≥ 0.
    let hdim = dim + 1;
    let eq_rows: Matrix = equalities
        .iter()
        .map(|f| {
            let mut row = f.coeffs.clone();
            row.push(-f.rhs.clone());
            row
        })
        .collect();

    let mut ineq_rows: Matrix = inequalities
        .iter()
        .map(|f| {
            let mut row: Vec<Rat> = f.coeffs.iter().map(|c| -c.clone()).collect();
            row.push(f.rhs.clone());
            row
        })
        .collect();
    let mut t_row = vec![Rat::zero(); hdim];
    t_row[dim] = Rat::one();
    ineq_rows.push(t_row);

    // Change of coordinates onto the equality null space.
    let reduced_basis: Matrix = if eq_rows.is_empty() {
        (0..hdim)
            .map(|i| {
                (0..hdim)
                    .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                    .collect()
            })
            .collect()
    } else {
        linalg::null_space(&eq_rows, hdim)
    };
    let q = reduced_basis.len();
    if q == 0 {
        return Ok(Vec::new());
    }

    let rows: Matrix = ineq_rows
        .iter()
        .map(|r| {
            reduced_basis
                .iter()
                .map(|b| linalg::dot(r, b))
                .collect::<Vec<Rat>>()
        })
        .collect();

    let rays = double_description(q, &rows)?;

    let mut vertices: Vec<Point> = Vec::new();
    let mut recession = false;
    for ray in &rays {
        // Back to original coordinates.
        let mut orig = vec![Rat::zero(); hdim];
        for (c, b) in ray.iter().zip(reduced_basis.iter()) {
            for (o, bv) in orig.iter_mut().zip(b.iter()) {
                *o += c * bv;
            }
        }
        let t = orig[dim].clone();
        if t.is_positive() {
            let v: Point = orig[..dim].iter().map(|c| c / &t).collect();
            vertices.push(v);
        } else if orig.iter().any(|c| !c.is_zero()) {
            recession = true;
        }
    }
    if vertices.is_empty() {
        return Ok(Vec::new());
    }
    if recession {
        return Err(Error::UnboundedPolyhedron);
    }
    vertices.sort();
    vertices.dedup();
    Ok(vertices)
}

/// Extreme rays of the pointed cone `{y : rows·y ≥ 0}`.
fn double_description(q: usize, rows: &Matrix) -> Result<Vec<Vec<Rat>>> {
    // Seed with q rows of full rank; the seed cone is simplicial with rays
    // given by the inverse columns. Rank < q means the cone has a lineality
    // direction, i.e. the polyhedron contains a line.
    let mut seed_ids: Vec<usize> = Vec::new();
    let mut seed: Matrix = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut trial = seed.clone();
        trial.push(r.clone());
        if linalg::rank(&trial) > seed.len() {
            seed.push(r.clone());
            seed_ids.push(i);
            if seed.len() == q {
                break;
            }
        }
    }
    if seed.len() < q {
        return Err(Error::UnboundedPolyhedron);
    }
    let inv = linalg::invert(&seed).expect("seed rows are independent");

    // Process order: seed rows first, the rest in input order.
    let mut order: Vec<usize> = seed_ids.clone();
    for i in 0..rows.len() {
        if !seed_ids.contains(&i) {
            order.push(i);
        }
    }

    let words = order.len().div_ceil(64);
    let mut rays: Vec<Ray> = (0..q)
        .map(|j| {
            let dir: Vec<Rat> = inv.iter().map(|row| row[j].clone()).collect();
            let mut zero = vec![0u64; words];
            for (pos, _) in order.iter().enumerate().take(q) {
                if pos != j {
                    set_bit(&mut zero, pos);
                }
            }
            Ray {
                dir: primitive(dir),
                zero,
            }
        })
        .collect();

    for step in q..order.len() {
        let row = &rows[order[step]];
        let vals: Vec<Rat> = rays.iter().map(|r| linalg::dot(row, &r.dir)).collect();
        if vals.iter().all(|v| !v.is_negative()) {
            for (ray, v) in rays.iter_mut().zip(vals.iter()) {
                if v.is_zero() {
                    set_bit(&mut ray.zero, step);
                }
            }
            continue;
        }

        let mut next: Vec<Ray> = Vec::new();
        for (ray, v) in rays.iter().zip(vals.iter()) {
            if !v.is_negative() {
                let mut kept = ray.clone();
                if v.is_zero() {
                    set_bit(&mut kept.zero, step);
                }
                next.push(kept);
            }
        }
        for (i, vi) in vals.iter().enumerate() {
            if !vi.is_positive() {
                continue;
            }
            for (j, vj) in vals.iter().enumerate() {
                if !vj.is_negative() {
                    continue;
                }
                if !adjacent(&rays, i, j) {
                    continue;
                }
                // vi·ray_j − vj·ray_i lies on the new hyperplane.
                let dir: Vec<Rat> = rays[j]
                    .dir
                    .iter()
                    .zip(rays[i].dir.iter())
                    .map(|(dj, di)| vi * dj - vj * di)
                    .collect();
                let dir = primitive(dir);
                let mut zero = vec![0u64; words];
                for (pos, &rid) in order.iter().enumerate().take(step + 1) {
                    if linalg::dot(&rows[rid], &dir).is_zero() {
                        set_bit(&mut zero, pos);
                    }
                }
                next.push(Ray { dir, zero });
            }
        }
        rays = next;
        if rays.is_empty() {
            return Ok(Vec::new());
        }
    }

    Ok(rays.into_iter().map(|r| r.dir).collect())
}

#[derive(Clone)]
struct Ray {
    dir: Vec<Rat>,
    zero: Vec<u64>, // bit per processed row: tight at this ray
}

fn set_bit(bits: &mut [u64], pos: usize) {
    bits[pos / 64] |= 1 << (pos % 64);
}

/// Combinatorial adjacency: no third ray is tight on every row where both
/// `a` and `b` are tight.
fn adjacent(rays: &[Ray], a: usize, b: usize) -> bool {
    let meet: Vec<u64> = rays[a]
        .zero
        .iter()
        .zip(rays[b].zero.iter())
        .map(|(x, y)| x & y)
        .collect();
    for (k, r) in rays.iter().enumerate() {
        if k == a || k == b {
            continue;
        }
        if meet.iter().zip(r.zero.iter()).all(|(m, z)| m & z == *m) {
            return false;
        }
    }
    true
}

/// Clears denominators and divides by the content, keeping the direction.
fn primitive(dir: Vec<Rat>) -> Vec<Rat> {
    let mut lcm = BigInt::one();
    for c in &dir {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = dir
        .iter()
        .map(|c| (c * Rat::from(lcm.clone())).to_integer())
        .collect();
    let mut gcd = BigInt::zero();
    for v in &ints {
        gcd = gcd.gcd(v);
    }
    if gcd.is_zero() {
        return dir;
    }
    ints.into_iter().map(|v| Rat::from(v / &gcd)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rint};

    fn le(coeffs: &[i64], rhs: i64) -> LinearForm {
        LinearForm::new(coeffs.iter().map(|&c| rint(c)).collect(), rint(rhs))
    }

    #[test]
    fn unit_interval() {
        // 0 ≤ x ≤ 1
        let vs = enumerate_vertices(1, &[], &[le(&[-1], 0), le(&[1], 1)]).unwrap();
        assert_eq!(vs, vec![vec![rint(0)], vec![rint(1)]]);
    }

    #[test]
    fn unit_square() {
        let ineqs = vec![
            le(&[-1, 0], 0),
            le(&[1, 0], 1),
            le(&[0, -1], 0),
            le(&[0, 1], 1),
        ];
        let vs = enumerate_vertices(2, &[], &ineqs).unwrap();
        assert_eq!(vs.len(), 4);
    }

    #[test]
    fn transportation_2x2_uniform() {
        // Couplings of uniform marginals on {1,2}×{1,2}: exactly the two
        // permutation measures.
        let eq = |coeffs: &[i64], rhs: Rat| {
            LinearForm::new(coeffs.iter().map(|&c| rint(c)).collect(), rhs)
        };
        let eqs = vec![
            eq(&[1, 1, 0, 0], rat(1, 2)),
            eq(&[0, 0, 1, 1], rat(1, 2)),
            eq(&[1, 0, 1, 0], rat(1, 2)),
            eq(&[0, 1, 0, 1], rat(1, 2)),
        ];
        let ineqs = vec![
            le(&[-1, 0, 0, 0], 0),
            le(&[0, -1, 0, 0], 0),
            le(&[0, 0, -1, 0], 0),
            le(&[0, 0, 0, -1], 0),
        ];
        let vs = enumerate_vertices(4, &eqs, &ineqs).unwrap();
        assert_eq!(vs.len(), 2);
        assert!(vs.contains(&vec![rat(1, 2), rint(0), rint(0), rat(1, 2)]));
        assert!(vs.contains(&vec![rint(0), rat(1, 2), rat(1, 2), rint(0)]));
    }

    #[test]
    fn empty_region() {
        let vs = enumerate_vertices(1, &[], &[le(&[1], 0), le(&[-1], -1)]).unwrap();
        assert!(vs.is_empty());
    }

    #[test]
    fn unbounded_region_is_an_error() {
        assert!(matches!(
            enumerate_vertices(2, &[], &[le(&[-1, 0], 0), le(&[0, -1], 0)]),
            Err(Error::UnboundedPolyhedron)
        ));
    }

    #[test]
    fn degenerate_equality_only_point() {
        let eq = LinearForm::new(vec![rint(1)], rat(3, 7));
        let vs = enumerate_vertices(1, &[eq], &[]).unwrap();
        assert_eq!(vs, vec![vec![rat(3, 7)]]);
    }
}
