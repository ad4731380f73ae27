//! Exact rational polytopes.
//!
//! The primary representation is the canonical V-form: the sorted list of
//! extreme points. Facets (H-form) are derived on demand through an
//! affine-hull reduction and a polar-dual vertex enumeration, so degenerate
//! (lower-dimensional) polytopes are first class. All predicates — membership,
//! containment, intersection, distances — are decided exactly.

use std::sync::OnceLock;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{fmt_point, linf_dist, Point, Rat};
use crate::spaces::linalg::{self, Matrix};
use crate::spaces::lp::{LpProblem, Rel};
use crate::spaces::vertex_enum::enumerate_vertices;

/// One linear condition `coeffs · x (≤ or =) rhs`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LinearForm {
    pub coeffs: Vec<Rat>,
    pub rhs: Rat,
}

impl LinearForm {
    pub fn new(coeffs: Vec<Rat>, rhs: Rat) -> Self {
        LinearForm { coeffs, rhs }
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        linalg::dot(&self.coeffs, x)
    }

    /// Scales to primitive integer coefficients. Only positive scaling, so
    /// inequality direction is preserved.
    pub fn normalized(&self) -> LinearForm {
        let mut lcm = num_bigint::BigInt::one();
        for c in self.coeffs.iter().chain(std::iter::once(&self.rhs)) {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<num_bigint::BigInt> = self
            .coeffs
            .iter()
            .chain(std::iter::once(&self.rhs))
            .map(|c| (c * Rat::from(lcm.clone())).to_integer())
            .collect();
        let mut gcd = num_bigint::BigInt::zero();
        for v in &ints {
            gcd = gcd.gcd(v);
        }
        if gcd.is_zero() {
            gcd = num_bigint::BigInt::one();
        }
        let scaled: Vec<Rat> = ints.iter().map(|v| Rat::from(v / &gcd)).collect();
        let (coeffs, rhs) = scaled.split_at(self.coeffs.len());
        LinearForm {
            coeffs: coeffs.to_vec(),
            rhs: rhs[0].clone(),
        }
    }

    /// Normalization for equalities: also fixes the sign so the first nonzero
    /// coefficient is positive.
    pub fn normalized_eq(&self) -> LinearForm {
        let mut n = self.normalized();
        let flip = n
            .coeffs
            .iter()
            .find(|c| !c.is_zero())
            .map(|c| c.is_negative())
            .unwrap_or(false);
        if flip {
            for c in n.coeffs.iter_mut() {
                *c = -c.clone();
            }
            n.rhs = -n.rhs;
        }
        n
    }
}

/// Facet description: `equalities` hold with `=`, `inequalities` with `≤`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HRep {
    pub equalities: Vec<LinearForm>,
    pub inequalities: Vec<LinearForm>,
}

impl HRep {
    pub fn contains(&self, x: &[Rat]) -> bool {
        self.equalities.iter().all(|f| f.eval(x) == f.rhs)
            && self.inequalities.iter().all(|f| f.eval(x) <= f.rhs)
    }
}

/// An affine map `x ↦ matrix · x + offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    pub matrix: Matrix, // rows = target dimension
    pub offset: Vec<Rat>,
}

impl AffineMap {
    pub fn new(matrix: Matrix, offset: Vec<Rat>) -> Self {
        for row in &matrix {
            assert_eq!(row.len(), matrix[0].len(), "ragged matrix");
        }
        assert_eq!(matrix.len(), offset.len(), "offset arity mismatch");
        AffineMap { matrix, offset }
    }

    pub fn identity(dim: usize) -> Self {
        let matrix = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                    .collect()
            })
            .collect();
        AffineMap {
            matrix,
            offset: vec![Rat::zero(); dim],
        }
    }

    /// Projection of a product space onto the coordinate block
    /// `[start, start+len)` of a `total`-dimensional space.
    pub fn block_projection(total: usize, start: usize, len: usize) -> Self {
        let matrix = (0..len)
            .map(|i| {
                (0..total)
                    .map(|j| {
                        if j == start + i {
                            Rat::one()
                        } else {
                            Rat::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        AffineMap {
            matrix,
            offset: vec![Rat::zero(); len],
        }
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.first().map(|r| r.len()).unwrap_or(0)
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, x: &[Rat]) -> Point {
        assert_eq!(x.len(), self.source_dim(), "affine map arity mismatch");
        self.matrix
            .iter()
            .zip(self.offset.iter())
            .map(|(row, off)| linalg::dot(row, x) + off)
            .collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        assert_eq!(self.source_dim(), inner.target_dim());
        let matrix: Matrix = self
            .matrix
            .iter()
            .map(|row| {
                (0..inner.source_dim())
                    .map(|j| {
                        row.iter()
                            .zip(inner.matrix.iter())
                            .map(|(a, irow)| a * &irow[j])
                            .sum()
                    })
                    .collect()
            })
            .collect();
        let offset = self.apply(&inner.offset);
        AffineMap { matrix, offset }
    }
}

/// A nonempty polytope in canonical V-representation.
#[derive(Debug, Clone)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Point>,
    hrep: OnceLock<HRep>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}
impl Eq for Polytope {}

impl PartialOrd for Polytope {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Polytope {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.dim, &self.vertices).cmp(&(other.dim, &other.vertices))
    }
}

impl std::fmt::Display for Polytope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let vs: Vec<String> = self.vertices.iter().map(|v| fmt_point(v)).collect();
        write!(f, "conv{{{}}}", vs.join(", "))
    }
}

impl Polytope {
    /// Convex hull of a nonempty point set: duplicates and interior points
    /// are removed, the result is the canonical irredundant V-form.
    pub fn conv_hull(dim: usize, points: &[Point]) -> Result<Polytope> {
        if points.is_empty() {
            return Err(Error::DimensionMismatch("empty point set".into()));
        }
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "point has {} coordinates, expected {}",
                    p.len(),
                    dim
                )));
            }
        }
        let mut pts: Vec<Point> = points.to_vec();
        pts.sort();
        pts.dedup();
        let extreme: Vec<Point> = pts
            .iter()
            .enumerate()
            .filter(|(i, p)| !in_hull_of_others(&pts, *i, p))
            .map(|(_, p)| p.clone())
            .collect();
        Ok(Polytope {
            dim,
            vertices: extreme,
            hrep: OnceLock::new(),
        })
    }

    pub fn point(p: Point) -> Polytope {
        Polytope {
            dim: p.len(),
            vertices: vec![p],
            hrep: OnceLock::new(),
        }
    }

    pub fn segment(a: Point, b: Point) -> Result<Polytope> {
        let dim = a.len();
        Polytope::conv_hull(dim, &[a, b])
    }

    /// Axis-aligned box given per-coordinate bounds.
    pub fn axis_box(bounds: &[(Rat, Rat)]) -> Result<Polytope> {
        let dim = bounds.len();
        let mut corners: Vec<Point> = vec![vec![]];
        for (lo, hi) in bounds {
            if lo > hi {
                return Err(Error::DimensionMismatch("box with lo > hi".into()));
            }
            let mut next = Vec::with_capacity(corners.len() * 2);
            for c in &corners {
                let mut a = c.clone();
                a.push(lo.clone());
                next.push(a);
                if hi != lo {
                    let mut b = c.clone();
                    b.push(hi.clone());
                    next.push(b);
                }
            }
            corners = next;
        }
        Polytope::conv_hull(dim, &corners)
    }

    /// The standard probability simplex in `R^n`: hull of the unit vectors.
    pub fn std_simplex(n: usize) -> Polytope {
        let vertices: Vec<Point> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                    .collect()
            })
            .collect();
        Polytope {
            dim: n,
            vertices,
            hrep: OnceLock::new(),
        }
    }

    /// Builds from facets; errors if the region is unbounded, returns `None`
    /// if it is empty.
    pub fn from_hrep(
        dim: usize,
        equalities: &[LinearForm],
        inequalities: &[LinearForm],
    ) -> Result<Option<Polytope>> {
        let vertices = enumerate_vertices(dim, equalities, inequalities)?;
        if vertices.is_empty() {
            return Ok(None);
        }
        Ok(Some(Polytope::conv_hull(dim, &vertices)?))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn contains_point(&self, x: &[Rat]) -> bool {
        if x.len() != self.dim {
            return false;
        }
        convex_membership_lp(&self.vertices, x).feasible_point().is_some()
    }

    pub fn contains_polytope(&self, other: &Polytope) -> bool {
        other.vertices.iter().all(|v| self.contains_point(v))
    }

    pub fn intersects(&self, other: &Polytope) -> bool {
        if self.dim != other.dim {
            return false;
        }
        // Convex combinations of both vertex sets forced equal.
        let n = self.vertices.len();
        let m = other.vertices.len();
        let mut lp = LpProblem::new(n + m);
        lp.require_nonneg_range(0..n + m);
        for coord in 0..self.dim {
            let mut row = vec![Rat::zero(); n + m];
            for (j, v) in self.vertices.iter().enumerate() {
                row[j] = v[coord].clone();
            }
            for (j, w) in other.vertices.iter().enumerate() {
                row[n + j] = -w[coord].clone();
            }
            lp.constrain(row, Rel::Eq, Rat::zero());
        }
        let mut sum_self = vec![Rat::zero(); n + m];
        for c in sum_self.iter_mut().take(n) {
            *c = Rat::one();
        }
        lp.constrain(sum_self, Rel::Eq, Rat::one());
        let mut sum_other = vec![Rat::zero(); n + m];
        for c in sum_other.iter_mut().skip(n) {
            *c = Rat::one();
        }
        lp.constrain(sum_other, Rel::Eq, Rat::one());
        lp.feasible_point().is_some()
    }

    pub fn affine_image(&self, f: &AffineMap) -> Result<Polytope> {
        if f.source_dim() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "affine map expects dimension {}, polytope has {}",
                f.source_dim(),
                self.dim
            )));
        }
        let images: Vec<Point> = self.vertices.iter().map(|v| f.apply(v)).collect();
        Polytope::conv_hull(f.target_dim(), &images)
    }

    /// Max-norm distance from `x` to the polytope, with a deterministic
    /// nearest point: least max-norm, then least L1, under a fixed pivot
    /// order.
    pub fn nearest_point_linf(&self, x: &[Rat]) -> (Point, Rat) {
        assert_eq!(x.len(), self.dim, "dimension mismatch");
        let d = self.dim;
        let n = self.vertices.len();
        // Variables: q (d, free), λ (n, nonneg), s (d, nonneg L1 slack), t.
        let nv = d + n + d + 1;
        let t = nv - 1;
        let mut lp = LpProblem::new(nv);
        lp.require_nonneg_range(d..d + n + d);
        for coord in 0..d {
            let mut row = vec![Rat::zero(); nv];
            row[coord] = Rat::one();
            for (j, v) in self.vertices.iter().enumerate() {
                row[d + j] = -v[coord].clone();
            }
            lp.constrain(row, Rel::Eq, Rat::zero());
        }
        let mut sum = vec![Rat::zero(); nv];
        for c in sum.iter_mut().skip(d).take(n) {
            *c = Rat::one();
        }
        lp.constrain(sum, Rel::Eq, Rat::one());
        for coord in 0..d {
            // |q_i − x_i| ≤ s_i ≤ t.
            let s = d + n + coord;
            let mut up = vec![Rat::zero(); nv];
            up[coord] = Rat::one();
            up[s] = -Rat::one();
            lp.constrain(up, Rel::Le, x[coord].clone());
            let mut down = vec![Rat::zero(); nv];
            down[coord] = -Rat::one();
            down[s] = -Rat::one();
            lp.constrain(down, Rel::Le, -x[coord].clone());
            let mut cap = vec![Rat::zero(); nv];
            cap[s] = Rat::one();
            cap[t] = -Rat::one();
            lp.constrain(cap, Rel::Le, Rat::zero());
        }
        let mut objective = vec![Rat::zero(); nv];
        objective[t] = Rat::one();
        let (dist, _) = lp
            .minimize(&objective)
            .optimal()
            .expect("nonempty polytope always has a nearest point");
        lp.fix(t, dist.clone());
        let mut l1 = vec![Rat::zero(); nv];
        for c in l1.iter_mut().skip(d + n).take(d) {
            *c = Rat::one();
        }
        let (_, point) = lp
            .minimize(&l1)
            .optimal()
            .expect("restriction stays feasible");
        (point[..d].to_vec(), dist)
    }

    /// Max-norm distance only: a single exact solve.
    pub fn distance_to_point_linf(&self, x: &[Rat]) -> Rat {
        let d = self.dim;
        let n = self.vertices.len();
        let nv = d + n + 1;
        let t = nv - 1;
        let mut lp = LpProblem::new(nv);
        lp.require_nonneg_range(d..d + n);
        for coord in 0..d {
            let mut row = vec![Rat::zero(); nv];
            row[coord] = Rat::one();
            for (j, v) in self.vertices.iter().enumerate() {
                row[d + j] = -v[coord].clone();
            }
            lp.constrain(row, Rel::Eq, Rat::zero());
        }
        let mut sum = vec![Rat::zero(); nv];
        for c in sum.iter_mut().skip(d).take(n) {
            *c = Rat::one();
        }
        lp.constrain(sum, Rel::Eq, Rat::one());
        for coord in 0..d {
            let mut up = vec![Rat::zero(); nv];
            up[coord] = Rat::one();
            up[t] = -Rat::one();
            lp.constrain(up, Rel::Le, x[coord].clone());
            let mut down = vec![Rat::zero(); nv];
            down[coord] = -Rat::one();
            down[t] = -Rat::one();
            lp.constrain(down, Rel::Le, -x[coord].clone());
        }
        let mut objective = vec![Rat::zero(); nv];
        objective[t] = Rat::one();
        let (dist, _) = lp
            .minimize(&objective)
            .optimal()
            .expect("nonempty polytope always has a nearest point");
        dist
    }

    /// Exact Hausdorff distance under the max-coordinate norm.
    pub fn hausdorff_distance(&self, other: &Polytope) -> Result<Rat> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "Hausdorff between dimensions {} and {}",
                self.dim, other.dim
            )));
        }
        let directed = |from: &Polytope, to: &Polytope| -> Rat {
            let mut worst = Rat::zero();
            for v in from.vertices() {
                let d = to.distance_to_point_linf(v);
                if d > worst {
                    worst = d;
                }
            }
            worst
        };
        let a = directed(self, other);
        let b = directed(other, self);
        Ok(if a > b { a } else { b })
    }

    /// Per-coordinate bounds, attained on vertices.
    pub fn bounding_box(&self) -> Vec<(Rat, Rat)> {
        (0..self.dim)
            .map(|c| {
                let mut lo = self.vertices[0][c].clone();
                let mut hi = lo.clone();
                for v in &self.vertices[1..] {
                    if v[c] < lo {
                        lo = v[c].clone();
                    }
                    if v[c] > hi {
                        hi = v[c].clone();
                    }
                }
                (lo, hi)
            })
            .collect()
    }

    /// Facet representation, computed once and cached.
    pub fn hrep(&self) -> &HRep {
        self.hrep.get_or_init(|| compute_hrep(self.dim, &self.vertices))
    }
}

fn in_hull_of_others(points: &[Point], skip: usize, target: &Point) -> bool {
    let others: Vec<&Point> = points
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != skip)
        .map(|(_, p)| p)
        .collect();
    if others.is_empty() {
        return false;
    }
    let n = others.len();
    let mut lp = LpProblem::new(n);
    lp.require_nonneg_range(0..n);
    for coord in 0..target.len() {
        let row: Vec<Rat> = others.iter().map(|p| p[coord].clone()).collect();
        lp.constrain(row, Rel::Eq, target[coord].clone());
    }
    lp.constrain(vec![Rat::one(); n], Rel::Eq, Rat::one());
    lp.feasible_point().is_some()
}

fn convex_membership_lp(vertices: &[Point], x: &[Rat]) -> LpProblem {
    let n = vertices.len();
    let mut lp = LpProblem::new(n);
    lp.require_nonneg_range(0..n);
    for coord in 0..x.len() {
        let row: Vec<Rat> = vertices.iter().map(|v| v[coord].clone()).collect();
        lp.constrain(row, Rel::Eq, x[coord].clone());
    }
    lp.constrain(vec![Rat::one(); n], Rel::Eq, Rat::one());
    lp
}

/// Max-norm Hausdorff distance between two finite point sets.
pub fn point_set_hausdorff_linf(a: &[Point], b: &[Point]) -> Rat {
    let directed = |from: &[Point], to: &[Point]| -> Rat {
        let mut worst = Rat::zero();
        for p in from {
            let mut best: Option<Rat> = None;
            for q in to {
                let d = linf_dist(p, q);
                if best.as_ref().map(|b| d < *b).unwrap_or(true) {
                    best = Some(d);
                }
            }
            let best = best.expect("nonempty point set");
            if best > worst {
                worst = best;
            }
        }
        worst
    };
    let x = directed(a, b);
    let y = directed(b, a);
    if x > y {
        x
    } else {
        y
    }
}

/// Facet enumeration: affine-hull reduction, then polar duality in the
/// reduced coordinates, with the dual vertices enumerated exactly.
fn compute_hrep(dim: usize, vertices: &[Point]) -> HRep {
    let v0 = &vertices[0];

    // Independent spanning directions of the affine hull.
    let mut basis: Vec<Vec<Rat>> = Vec::new();
    for v in &vertices[1..] {
        let diff: Vec<Rat> = v.iter().zip(v0.iter()).map(|(a, b)| a - b).collect();
        let mut trial = basis.clone();
        trial.push(diff.clone());
        if linalg::rank(&trial) > basis.len() {
            basis.push(diff);
        }
    }
    let k = basis.len();

    // Affine-hull equalities: u · x = u · v0 for u normal to the hull.
    let equalities: Vec<LinearForm> = if k == dim {
        Vec::new()
    } else {
        linalg::null_space(&basis, dim)
            .into_iter()
            .map(|u| {
                let rhs = linalg::dot(&u, v0);
                LinearForm::new(u, rhs).normalized_eq()
            })
            .collect()
    };

    if k == 0 {
        let mut eqs = equalities;
        eqs.sort();
        return HRep {
            equalities: eqs,
            inequalities: Vec::new(),
        };
    }

    // Reduced coordinates: pick k independent coordinate rows of the basis
    // matrix (d×k, columns = basis vectors) and invert.
    let bmat: Matrix = (0..dim)
        .map(|r| basis.iter().map(|col| col[r].clone()).collect())
        .collect();
    let mut row_ids: Vec<usize> = Vec::new();
    let mut picked: Matrix = Vec::new();
    for r in 0..dim {
        let mut trial = picked.clone();
        trial.push(bmat[r].clone());
        if linalg::rank(&trial) > picked.len() {
            picked.push(bmat[r].clone());
            row_ids.push(r);
            if picked.len() == k {
                break;
            }
        }
    }
    let s_inv = linalg::invert(&picked).expect("picked rows are independent");

    let reduce = |x: &[Rat]| -> Vec<Rat> {
        let sel: Vec<Rat> = row_ids.iter().map(|&r| &x[r] - &v0[r]).collect();
        linalg::mat_vec(&s_inv, &sel)
    };
    let ys: Vec<Point> = vertices.iter().map(|v| reduce(v)).collect();

    // Interior point of the reduced polytope.
    let n = Rat::from(num_bigint::BigInt::from(ys.len() as i64));
    let center: Vec<Rat> = (0..k)
        .map(|c| ys.iter().map(|y| y[c].clone()).sum::<Rat>() / &n)
        .collect();

    // Polar dual: one halfspace per vertex; its vertices are our facets.
    let dual_ineqs: Vec<LinearForm> = ys
        .iter()
        .map(|y| {
            let coeffs: Vec<Rat> = y.iter().zip(center.iter()).map(|(a, c)| a - c).collect();
            LinearForm::new(coeffs, Rat::one())
        })
        .collect();
    let dual_vertices = enumerate_vertices(k, &[], &dual_ineqs)
        .expect("polar dual of a bounded polytope is bounded");

    // Lift each dual vertex z to a facet in the original coordinates:
    // z · (y(x) − center) ≤ 1 with y(x) = s_inv (x_R − v0_R).
    let mut inequalities: Vec<LinearForm> = dual_vertices
        .iter()
        .map(|z| {
            let w = linalg::mat_vec(&transpose(&s_inv), z);
            let mut coeffs = vec![Rat::zero(); dim];
            for (j, &r) in row_ids.iter().enumerate() {
                coeffs[r] = w[j].clone();
            }
            let rhs = Rat::one()
                + linalg::dot(z, &center)
                + row_ids
                    .iter()
                    .zip(w.iter())
                    .map(|(&r, wj)| wj * &v0[r])
                    .sum::<Rat>();
            LinearForm::new(coeffs, rhs).normalized()
        })
        .collect();
    inequalities.sort();
    inequalities.dedup();
    let mut eqs = equalities;
    eqs.sort();
    HRep {
        equalities: eqs,
        inequalities,
    }
}

fn transpose(m: &Matrix) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|c| m.iter().map(|row| row[c].clone()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rint};

    fn pt(coords: &[i64]) -> Point {
        coords.iter().map(|&c| rint(c)).collect()
    }

    #[test]
    fn hull_of_single_point() {
        let p = Polytope::conv_hull(2, &[pt(&[0, 0])]).unwrap();
        assert_eq!(p.vertices().len(), 1);
    }

    #[test]
    fn hull_drops_collinear_midpoint() {
        let p = Polytope::conv_hull(
            2,
            &[pt(&[0, 0]), pt(&[1, 0]), vec![rat(1, 2), rint(0)]],
        )
        .unwrap();
        assert_eq!(p.vertices(), &[pt(&[0, 0]), pt(&[1, 0])]);
    }

    #[test]
    fn hull_drops_interior_point() {
        let p = Polytope::conv_hull(
            2,
            &[
                pt(&[0, 0]),
                pt(&[1, 0]),
                pt(&[0, 1]),
                vec![rat(1, 4), rat(1, 4)],
            ],
        )
        .unwrap();
        assert_eq!(p.vertices().len(), 3);
        assert!(!p
            .vertices()
            .contains(&vec![rat(1, 4), rat(1, 4)]));
    }

    #[test]
    fn affine_image_examples() {
        let square = Polytope::axis_box(&[(rint(0), rint(1)), (rint(0), rint(1))]).unwrap();
        let id = AffineMap::identity(2);
        assert_eq!(square.affine_image(&id).unwrap(), square);

        let proj = AffineMap::block_projection(2, 0, 1);
        let seg = square.affine_image(&proj).unwrap();
        assert_eq!(seg.vertices(), &[vec![rint(0)], vec![rint(1)]]);

        let tri = Polytope::conv_hull(2, &[pt(&[0, 0]), pt(&[2, 0]), pt(&[0, 2])]).unwrap();
        let half = AffineMap::new(
            vec![vec![rat(1, 2), rint(0)], vec![rint(0), rat(1, 2)]],
            vec![rint(0), rint(0)],
        );
        let small = tri.affine_image(&half).unwrap();
        assert_eq!(
            small,
            Polytope::conv_hull(2, &[pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1])]).unwrap()
        );
    }

    #[test]
    fn hausdorff_examples() {
        let seg1 = Polytope::segment(pt(&[0]), pt(&[1])).unwrap();
        assert_eq!(seg1.hausdorff_distance(&seg1).unwrap(), rint(0));
        let seg2 = Polytope::segment(pt(&[0]), pt(&[2])).unwrap();
        assert_eq!(seg1.hausdorff_distance(&seg2).unwrap(), rint(1));

        let square = Polytope::axis_box(&[(rint(0), rint(1)), (rint(0), rint(1))]).unwrap();
        let mut pts: Vec<Point> = square.vertices().to_vec();
        pts.push(pt(&[2, 2]));
        let bigger = Polytope::conv_hull(2, &pts).unwrap();
        assert_eq!(square.hausdorff_distance(&bigger).unwrap(), rint(1));

        let seg3 = Polytope::segment(pt(&[0]), pt(&[1])).unwrap();
        let seg4 = Polytope::segment(pt(&[0, 0]), pt(&[1, 1])).unwrap();
        assert!(matches!(
            seg3.hausdorff_distance(&seg4),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn membership_and_containment() {
        let tri = Polytope::conv_hull(2, &[pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1])]).unwrap();
        assert!(tri.contains_point(&[rat(1, 4), rat(1, 4)]));
        assert!(!tri.contains_point(&[rat(3, 4), rat(3, 4)]));
        let inner = Polytope::conv_hull(2, &[pt(&[0, 0]), vec![rat(1, 2), rat(1, 2)]]).unwrap();
        assert!(tri.contains_polytope(&inner));
        assert!(!inner.contains_polytope(&tri));
    }

    #[test]
    fn hrep_of_unit_square() {
        let square = Polytope::axis_box(&[(rint(0), rint(1)), (rint(0), rint(1))]).unwrap();
        let h = square.hrep();
        assert!(h.equalities.is_empty());
        assert_eq!(h.inequalities.len(), 4);
        assert!(h.contains(&[rat(1, 2), rat(1, 2)]));
        assert!(!h.contains(&[rat(3, 2), rat(1, 2)]));
    }

    #[test]
    fn hrep_of_degenerate_segment_in_plane() {
        let seg = Polytope::segment(pt(&[0, 0]), pt(&[1, 1])).unwrap();
        let h = seg.hrep();
        assert_eq!(h.equalities.len(), 1);
        assert_eq!(h.inequalities.len(), 2);
        assert!(h.contains(&[rat(1, 2), rat(1, 2)]));
        assert!(!h.contains(&[rat(1, 2), rat(1, 4)]));
        assert!(!h.contains(&[rint(2), rint(2)]));
    }

    #[test]
    fn hrep_of_point() {
        let p = Polytope::point(pt(&[3, 4]));
        let h = p.hrep();
        assert_eq!(h.equalities.len(), 2);
        assert!(h.inequalities.is_empty());
        assert!(h.contains(&[rint(3), rint(4)]));
        assert!(!h.contains(&[rint(3), rint(5)]));
    }

    #[test]
    fn nearest_point_is_canonical() {
        let square = Polytope::axis_box(&[(rint(0), rint(1)), (rint(0), rint(1))]).unwrap();
        let (q, d) = square.nearest_point_linf(&[rint(2), rat(1, 2)]);
        assert_eq!(d, rint(1));
        // Many points of the square are at max-norm distance 1; the L1
        // refinement pins the one that moves no further than it must.
        assert_eq!(q, vec![rint(1), rat(1, 2)]);
        assert_eq!(square.distance_to_point_linf(&[rint(2), rat(1, 2)]), rint(1));
    }
}
