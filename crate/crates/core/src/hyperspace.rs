//! Hyperspaces of finite spaces: nonempty subsets, inclusion hyperspaces
//! (up-closed families of nonempty subsets), and superextensions (maximal
//! linked families).
//!
//! Families are stored by their minimal-generator antichain; the family
//! denoted is the up-closure of the generators among nonempty subsets.
//! Canonical order everywhere: subsets by (size, point list), families by
//! generator lists.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Largest base size for subset enumeration (`u32` masks).
const SUBSET_BASE_LIMIT: usize = 25;

/// A nonempty subset of an `n`-point space, as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Subset {
    pub n: usize,
    pub mask: u32,
}

impl Subset {
    pub fn new(n: usize, mask: u32) -> Subset {
        assert!(n >= 1 && n <= SUBSET_BASE_LIMIT);
        assert!(mask != 0, "hyperspace members are nonempty");
        assert!(mask < (1u32 << n));
        Subset { n, mask }
    }

    pub fn points(&self) -> Vec<usize> {
        (0..self.n).filter(|i| self.mask & (1 << i) != 0).collect()
    }

    pub fn size(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn contains(&self, point: usize) -> bool {
        self.mask & (1 << point) != 0
    }
}

impl std::fmt::Display for Subset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let pts: Vec<String> = self.points().iter().map(|p| (p + 1).to_string()).collect();
        write!(f, "{{{}}}", pts.join(","))
    }
}

/// Canonical subset order: by size, then by sorted point list.
pub fn cmp_masks(a: u32, b: u32) -> Ordering {
    let (ca, cb) = (a.count_ones(), b.count_ones());
    if ca != cb {
        return ca.cmp(&cb);
    }
    if a == b {
        return Ordering::Equal;
    }
    // Equal sizes: compare point lists lexicographically, lowest point first.
    let (mut x, mut y) = (a, b);
    while x != 0 && y != 0 {
        let (px, py) = (x.trailing_zeros(), y.trailing_zeros());
        if px != py {
            return px.cmp(&py);
        }
        x &= x - 1;
        y &= y - 1;
    }
    Ordering::Equal
}

/// All nonempty subsets of an `n`-point space, canonically ordered.
pub fn exp_space(n: usize) -> Result<Vec<Subset>> {
    if n == 0 || n > SUBSET_BASE_LIMIT {
        return Err(Error::EnumerationTooLarge(format!(
            "exp enumeration needs 1 ≤ n ≤ {SUBSET_BASE_LIMIT}, got {n}"
        )));
    }
    let mut masks: Vec<u32> = (1..(1u32 << n)).collect();
    masks.sort_by(|a, b| cmp_masks(*a, *b));
    Ok(masks.into_iter().map(|m| Subset::new(n, m)).collect())
}

/// Image of a subset under a total table map into a `target_n`-point space.
pub fn exp_map(table: &[usize], target_n: usize, s: &Subset) -> Subset {
    assert_eq!(table.len(), s.n, "table does not match base");
    let mut mask = 0u32;
    for p in s.points() {
        assert!(table[p] < target_n);
        mask |= 1 << table[p];
    }
    Subset::new(target_n, mask)
}

/// An up-closed family of nonempty subsets, by minimal generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpFamily {
    n: usize,
    generators: Vec<u32>, // canonical antichain
    is_linked: bool,
    is_maximal_linked: bool,
}

impl UpFamily {
    /// Builds a family from any set of generator masks: redundant (non-
    /// minimal) generators are dropped, the rest are canonically sorted, and
    /// the linked/maximal-linked flags are computed by exhaustion.
    pub fn new(n: usize, generators: &[u32]) -> Result<UpFamily> {
        if n == 0 || n > SUBSET_BASE_LIMIT {
            return Err(Error::EnumerationTooLarge(format!(
                "family base needs 1 ≤ n ≤ {SUBSET_BASE_LIMIT}, got {n}"
            )));
        }
        if generators.is_empty() {
            return Err(Error::MalformedDiagram(
                "a family needs at least one generator".into(),
            ));
        }
        let full = (1u64 << n) - 1;
        for &g in generators {
            if g == 0 || u64::from(g) > full {
                return Err(Error::MalformedDiagram(
                    "generators must be nonempty subsets of the base".into(),
                ));
            }
        }
        let mut gens: Vec<u32> = generators.to_vec();
        gens.sort_by(|a, b| cmp_masks(*a, *b));
        gens.dedup();
        // Keep only minimal generators: drop any strict superset of another.
        let minimal: Vec<u32> = gens
            .iter()
            .copied()
            .filter(|&g| !gens.iter().any(|&h| h != g && h & g == h))
            .collect();
        let is_linked = minimal
            .iter()
            .all(|&a| minimal.iter().all(|&b| a & b != 0));
        let mut fam = UpFamily {
            n,
            generators: minimal,
            is_linked,
            is_maximal_linked: false,
        };
        fam.is_maximal_linked = is_linked && fam.maximality_check();
        Ok(fam)
    }

    /// Principal family: everything containing the given subset.
    pub fn principal(n: usize, mask: u32) -> Result<UpFamily> {
        UpFamily::new(n, &[mask])
    }

    pub fn base_size(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn generator_subsets(&self) -> Vec<Subset> {
        self.generators
            .iter()
            .map(|&m| Subset::new(self.n, m))
            .collect()
    }

    pub fn is_linked(&self) -> bool {
        self.is_linked
    }

    pub fn is_maximal_linked(&self) -> bool {
        self.is_maximal_linked
    }

    /// Membership in the denoted up-closed family.
    pub fn member(&self, mask: u32) -> bool {
        mask != 0 && self.generators.iter().any(|&g| g & mask == g)
    }

    /// A linked family is maximal iff every nonempty subset meeting all
    /// generators is already a member.
    fn maximality_check(&self) -> bool {
        let total = 1u32 << self.n;
        for s in 1..total {
            if self.generators.iter().all(|&g| g & s != 0) && !self.member(s) {
                return false;
            }
        }
        true
    }
}

impl std::fmt::Display for UpFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let gens: Vec<String> = self
            .generator_subsets()
            .iter()
            .map(|s| s.to_string())
            .collect();
        write!(f, "{{{}}}", gens.join(", "))
    }
}

/// Canonical family order: compare generator lists under the subset order.
pub fn cmp_families(a: &UpFamily, b: &UpFamily) -> Ordering {
    let mut i = 0;
    loop {
        match (a.generators.get(i), b.generators.get(i)) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(&x), Some(&y)) => match cmp_masks(x, y) {
                Ordering::Equal => i += 1,
                other => return other,
            },
        }
    }
}

/// All nonempty up-closed families of nonempty subsets of an `n`-point
/// space, i.e. all nonempty antichains, canonically ordered.
pub fn g_space(n: usize, bound: usize) -> Result<Vec<UpFamily>> {
    if n == 0 || n > bound {
        return Err(Error::EnumerationTooLarge(format!(
            "inclusion-hyperspace enumeration needs 1 ≤ n ≤ {bound}, got {n}"
        )));
    }
    let subsets: Vec<u32> = exp_space(n)?.iter().map(|s| s.mask).collect();
    let mut families = Vec::new();
    let mut chosen: Vec<u32> = Vec::new();
    enumerate_antichains(&subsets, 0, &mut chosen, &mut families, n);
    families.sort_by(cmp_families);
    Ok(families)
}

fn enumerate_antichains(
    subsets: &[u32],
    from: usize,
    chosen: &mut Vec<u32>,
    out: &mut Vec<UpFamily>,
    n: usize,
) {
    if !chosen.is_empty() {
        out.push(UpFamily::new(n, chosen).expect("antichain is a valid generator set"));
    }
    for i in from..subsets.len() {
        let cand = subsets[i];
        let comparable = chosen
            .iter()
            .any(|&g| g & cand == g || g & cand == cand);
        if comparable {
            continue;
        }
        chosen.push(cand);
        enumerate_antichains(subsets, i + 1, chosen, out, n);
        chosen.pop();
    }
}

/// All maximal linked families: the superextension carrier.
pub fn lambda_space(n: usize, bound: usize) -> Result<Vec<UpFamily>> {
    Ok(g_space(n, bound)?
        .into_iter()
        .filter(|f| f.is_maximal_linked())
        .collect())
}

/// Functorial action on families: up-closure of generator images.
/// Linkedness is preserved; maximal-linked inputs are re-verified, not
/// assumed, so the flags on the output are always truthful.
pub fn g_map(table: &[usize], target_n: usize, f: &UpFamily) -> UpFamily {
    let gens: Vec<u32> = f
        .generators()
        .iter()
        .map(|&g| exp_map(table, target_n, &Subset::new(f.base_size(), g)).mask)
        .collect();
    UpFamily::new(target_n, &gens).expect("images of nonempty sets are nonempty")
}
