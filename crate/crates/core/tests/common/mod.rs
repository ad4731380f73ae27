//! Independent test oracles: brute-force constructions that never touch the
//! implementation paths they check.
#![allow(dead_code)] // shared by several test binaries, each using a subset

use omcert_core::category::{Diagram, FiniteCategory, MapKind, SpacePoint, SpaceRef};
use omcert_core::rat::{Point, Rat};
use omcert_core::spaces::linalg;
use omcert_core::spaces::LinearForm;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Limit oracle: enumerate the full product of carriers and keep the tuples
/// compatible with every non-identity morphism.
pub fn brute_force_limit(d: &Diagram) -> Vec<Vec<usize>> {
    let sizes: Vec<usize> = d
        .spaces()
        .iter()
        .map(|s| match &s.kind {
            omcert_core::category::SpaceKind::Finite { points } => *points,
            _ => panic!("finite diagrams only"),
        })
        .collect();
    let mut out = Vec::new();
    let total: usize = sizes.iter().product();
    for mut code in 0..total {
        // Decode with the last object fastest, matching lexicographic order.
        let mut tuple = vec![0usize; sizes.len()];
        for (i, &n) in sizes.iter().enumerate().rev() {
            tuple[i] = code % n;
            code /= n;
        }
        let ok = d
            .shape()
            .morphisms()
            .iter()
            .enumerate()
            .filter(|(mi, _)| !d.shape().is_identity(*mi))
            .all(|(mi, m)| {
                d.apply(mi, &SpacePoint::Finite(tuple[m.src])).unwrap()
                    == SpacePoint::Finite(tuple[m.dst])
            });
        if ok {
            out.push(tuple);
        }
    }
    out
}

/// All nonempty up-closed families of nonempty subsets of an n-point space,
/// enumerated extensionally over every subset-family and filtered by the
/// definition; returned as sorted minimal-generator antichains.
pub fn brute_force_upfamilies(n: usize) -> Vec<Vec<u32>> {
    assert!(n <= 4, "oracle is exponential in 2^n");
    let subsets: Vec<u32> = (1..(1u32 << n)).collect();
    let m = subsets.len();
    let mut out = Vec::new();
    for fam in 1u64..(1u64 << m) {
        let members: Vec<u32> = subsets
            .iter()
            .enumerate()
            .filter(|(i, _)| fam & (1 << i) != 0)
            .map(|(_, &s)| s)
            .collect();
        let up_closed = members.iter().all(|&s| {
            subsets
                .iter()
                .filter(|&&t| t & s == s) // t ⊇ s
                .all(|t| members.contains(t))
        });
        if up_closed {
            out.push(minimal_members(&members));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// All maximal linked up-closed families, filtered extensionally.
pub fn brute_force_maximal_linked(n: usize) -> Vec<Vec<u32>> {
    assert!(n <= 4);
    let subsets: Vec<u32> = (1..(1u32 << n)).collect();
    let m = subsets.len();
    let mut out = Vec::new();
    for fam in 1u64..(1u64 << m) {
        let members: Vec<u32> = subsets
            .iter()
            .enumerate()
            .filter(|(i, _)| fam & (1 << i) != 0)
            .map(|(_, &s)| s)
            .collect();
        let up_closed = members.iter().all(|&s| {
            subsets
                .iter()
                .filter(|&&t| t & s == s)
                .all(|t| members.contains(t))
        });
        if !up_closed {
            continue;
        }
        let linked = members
            .iter()
            .all(|&a| members.iter().all(|&b| a & b != 0));
        if !linked {
            continue;
        }
        // Maximal: every subset meeting all members is already a member.
        let maximal = subsets
            .iter()
            .all(|&s| members.contains(&s) || members.iter().any(|&a| a & s == 0));
        if maximal {
            out.push(minimal_members(&members));
        }
    }
    out.sort();
    out.dedup();
    out
}

fn minimal_members(members: &[u32]) -> Vec<u32> {
    let mut min: Vec<u32> = members
        .iter()
        .filter(|&&s| !members.iter().any(|&t| t != s && t & s == t))
        .copied()
        .collect();
    min.sort();
    min
}

/// Extremality oracle: a point is extreme iff no convex combination of at
/// most dim+1 other points reproduces it (affinely independent subsets
/// suffice). Exact linear solves only, no linear programming.
pub fn brute_force_extreme_points(dim: usize, points: &[Point]) -> Vec<Point> {
    let mut unique: Vec<Point> = points.to_vec();
    unique.sort();
    unique.dedup();
    unique
        .iter()
        .filter(|target| {
            let others: Vec<&Point> = unique.iter().filter(|p| p != target).collect();
            !subsets_up_to(others.len(), dim + 1).into_iter().any(|idx| {
                let cols: Vec<&Point> = idx.iter().map(|&i| others[i]).collect();
                combination_reaches(dim, &cols, target)
            })
        })
        .cloned()
        .collect()
}

fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
    while let Some((cur, from)) = stack.pop() {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == k {
            continue;
        }
        for i in from..n {
            let mut next = cur.clone();
            next.push(i);
            stack.push((next, i + 1));
        }
    }
    out
}

fn combination_reaches(dim: usize, cols: &[&Point], target: &Point) -> bool {
    use num_traits::{One, Signed};
    // Rows: one per coordinate plus the affine row of ones.
    let mut a: Vec<Vec<Rat>> = (0..dim)
        .map(|c| cols.iter().map(|p| p[c].clone()).collect())
        .collect();
    a.push(vec![Rat::one(); cols.len()]);
    let mut b: Vec<Rat> = target.clone();
    b.push(Rat::one());
    match linalg::solve_unique(&a, &b) {
        Some(lambda) => lambda.iter().all(|l| !l.is_negative()),
        None => false,
    }
}

/// Vertex oracle: scan every choice of tight inequalities completing the
/// equality system to a unique solve; keep feasible solutions.
pub fn brute_force_vertices(
    dim: usize,
    equalities: &[LinearForm],
    inequalities: &[LinearForm],
) -> Vec<Point> {
    let eq_rows: Vec<Vec<Rat>> = equalities.iter().map(|f| f.coeffs.clone()).collect();
    let rank_eq = if eq_rows.is_empty() {
        0
    } else {
        linalg::rank(&eq_rows)
    };
    let free = dim - rank_eq;
    let mut out: Vec<Point> = Vec::new();
    for idx in subsets_of_size(inequalities.len(), free) {
        let mut a = eq_rows.clone();
        let mut b: Vec<Rat> = equalities.iter().map(|f| f.rhs.clone()).collect();
        for &i in &idx {
            a.push(inequalities[i].coeffs.clone());
            b.push(inequalities[i].rhs.clone());
        }
        let Some(x) = linalg::solve_unique(&a, &b) else {
            continue;
        };
        let feasible = equalities.iter().all(|f| f.eval(&x) == f.rhs)
            && inequalities.iter().all(|f| f.eval(&x) <= f.rhs);
        if feasible {
            out.push(x);
        }
    }
    out.sort();
    out.dedup();
    out
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // Next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Random finite diagram over pullback-style shapes (discrete, cospan,
/// chain); spaces of 1..=max_points points, random total maps.
pub fn random_finite_diagram(rng: &mut ChaCha8Rng, max_points: usize) -> Diagram {
    let shape_pick = rng.gen_range(0..4u8);
    match shape_pick {
        0 => {
            let k = rng.gen_range(1..=3usize);
            let names = ["A", "B", "C"];
            let shape = FiniteCategory::discrete(&names[..k]);
            let spaces: Vec<(String, SpaceRef)> = (0..k)
                .map(|i| {
                    let n = rng.gen_range(1..=max_points);
                    (names[i].to_string(), SpaceRef::finite(names[i], n))
                })
                .collect();
            let maps: Vec<(String, MapKind)> = spaces
                .iter()
                .map(|(id, s)| (format!("id_{id}"), MapKind::identity_for(s)))
                .collect();
            Diagram::new(shape, spaces, maps).unwrap()
        }
        1 => {
            // Cospan L -> M <- R.
            let nl = rng.gen_range(1..=max_points);
            let nm = rng.gen_range(1..=max_points);
            let nr = rng.gen_range(1..=max_points);
            let f: Vec<usize> = (0..nl).map(|_| rng.gen_range(0..nm)).collect();
            let g: Vec<usize> = (0..nr).map(|_| rng.gen_range(0..nm)).collect();
            Diagram::new(
                FiniteCategory::cospan(),
                vec![
                    ("L".into(), SpaceRef::finite("L", nl)),
                    ("M".into(), SpaceRef::finite("M", nm)),
                    ("R".into(), SpaceRef::finite("R", nr)),
                ],
                vec![
                    ("id_L".into(), MapKind::Table((0..nl).collect())),
                    ("id_M".into(), MapKind::Table((0..nm).collect())),
                    ("id_R".into(), MapKind::Table((0..nr).collect())),
                    ("f".into(), MapKind::Table(f)),
                    ("g".into(), MapKind::Table(g)),
                ],
            )
            .unwrap()
        }
        2 => {
            // Chain X0 -> X1 -> X2 (-> X3), composites forced.
            let len = rng.gen_range(2..=3usize);
            let sizes: Vec<usize> = (0..=len).map(|_| rng.gen_range(1..=max_points)).collect();
            let steps: Vec<Vec<usize>> = (0..len)
                .map(|i| (0..sizes[i]).map(|_| rng.gen_range(0..sizes[i + 1])).collect())
                .collect();
            let shape = FiniteCategory::chain(len);
            let mut spaces = Vec::new();
            let mut maps = Vec::new();
            for (i, &n) in sizes.iter().enumerate() {
                spaces.push((format!("X{i}"), SpaceRef::finite(&format!("X{i}"), n)));
                maps.push((format!("id_X{i}"), MapKind::Table((0..n).collect())));
            }
            // All arrows i -> j as forced compositions of the steps.
            for i in 0..=len {
                for j in i + 1..=len {
                    let mut table: Vec<usize> = (0..sizes[i]).collect();
                    for step in steps.iter().take(j).skip(i) {
                        table = table.iter().map(|&p| step[p]).collect();
                    }
                    maps.push((format!("a{i}_{j}"), MapKind::Table(table)));
                }
            }
            Diagram::new(shape, spaces, maps).unwrap()
        }
        _ => {
            // Parallel pair A ⇉ B: legal for the limit oracle.
            let na = rng.gen_range(1..=max_points);
            let nb = rng.gen_range(1..=max_points);
            let f: Vec<usize> = (0..na).map(|_| rng.gen_range(0..nb)).collect();
            let g: Vec<usize> = (0..na).map(|_| rng.gen_range(0..nb)).collect();
            Diagram::new(
                FiniteCategory::parallel_pair(),
                vec![
                    ("A".into(), SpaceRef::finite("A", na)),
                    ("B".into(), SpaceRef::finite("B", nb)),
                ],
                vec![
                    ("id_A".into(), MapKind::Table((0..na).collect())),
                    ("id_B".into(), MapKind::Table((0..nb).collect())),
                    ("f".into(), MapKind::Table(f)),
                    ("g".into(), MapKind::Table(g)),
                ],
            )
            .unwrap()
        }
    }
}
