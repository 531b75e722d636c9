//! Ground-truth class computation by summing open-stratum classes over all
//! boundary strata.
//!
//! A boundary stratum of the `n`-marked space corresponds to a stable tree
//! with `n` labeled legs, and stable trees correspond to laminar families of
//! marked subsets: each tree edge cuts the markings into two sides, and the
//! side not containing marking `n` is the subset recorded. Two subsets are
//! compatible exactly when they are nested or disjoint (with `n` excluded
//! from every subset, the "union is everything" case cannot occur).
//!
//! The stratum indexed by a family is a product over tree vertices of open
//! moduli of configurations, whose class is the falling product
//! `(L-2)(L-3)...(L-(m-2))` for a valence-`m` vertex. Summing the products
//! over all families yields the class of the compactification. This is much
//! slower than the closed formulas, which is fine: its whole purpose is to be
//! an independent oracle at small `n`.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lpoly::LPolynomial;
use crate::DEFAULT_N_MAX_ORACLE;

/// A subset of the markings `{1..n}` that contains at least two elements,
/// misses at least two, and never contains the marking `n` itself (the
/// convention that picks one side of each tree edge).
///
/// Stored as a bitmask: bit `i-1` is marking `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MarkedSubset {
    mask: u32,
}

impl MarkedSubset {
    pub fn from_elements(elements: &[u32], n: u32) -> Result<Self> {
        let mut mask = 0u32;
        for &e in elements {
            if e < 1 || e >= n {
                return Err(Error::Domain {
                    what: format!("marking {e} outside 1..{n}"),
                });
            }
            mask |= 1 << (e - 1);
        }
        let size = mask.count_ones();
        if size < 2 || size + 2 > n {
            return Err(Error::Domain {
                what: format!("subset of size {size} not allowed for n={n}"),
            });
        }
        Ok(MarkedSubset { mask })
    }

    fn from_mask(mask: u32) -> Self {
        MarkedSubset { mask }
    }

    pub fn len(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, marking: u32) -> bool {
        marking >= 1 && self.mask >> (marking - 1) & 1 == 1
    }

    pub fn elements(&self) -> Vec<u32> {
        (1..=32).filter(|&e| self.contains(e)).collect()
    }

    pub fn is_subset_of(&self, other: &MarkedSubset) -> bool {
        self.mask & other.mask == self.mask
    }

    pub fn is_disjoint_from(&self, other: &MarkedSubset) -> bool {
        self.mask & other.mask == 0
    }

    /// Nested or disjoint.
    pub fn is_compatible(&self, other: &MarkedSubset) -> bool {
        let meet = self.mask & other.mask;
        meet == 0 || meet == self.mask || meet == other.mask
    }
}

/// A set of pairwise compatible marked subsets: one boundary stratum.
/// The family size equals the number of edges of the stable tree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LaminarFamily {
    members: Vec<MarkedSubset>,
}

impl LaminarFamily {
    pub fn empty() -> Self {
        LaminarFamily {
            members: Vec::new(),
        }
    }

    /// Validate pairwise compatibility and distinctness; members are kept in
    /// ascending mask order.
    pub fn new(mut members: Vec<MarkedSubset>) -> Result<Self> {
        members.sort();
        for w in members.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Domain {
                    what: "duplicate member subset".to_string(),
                });
            }
        }
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                if !members[i].is_compatible(&members[j]) {
                    return Err(Error::Domain {
                        what: format!(
                            "incompatible subsets {:?} and {:?}",
                            members[i].elements(),
                            members[j].elements()
                        ),
                    });
                }
            }
        }
        Ok(LaminarFamily { members })
    }

    pub fn members(&self) -> &[MarkedSubset] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// One vertex of a stable tree.
#[derive(Debug, Clone)]
pub struct TreeVertex {
    /// The marked subset this vertex carries; `None` for the root.
    pub subset: Option<MarkedSubset>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// Markings attached directly to this vertex.
    pub legs: Vec<u32>,
}

impl TreeVertex {
    pub fn valence(&self) -> u32 {
        (self.children.len() + self.legs.len() + usize::from(self.parent.is_some())) as u32
    }
}

/// The dual tree of a boundary stratum: connected, acyclic, every vertex of
/// valence at least 3, total number of legs equal to `n`.
#[derive(Debug, Clone)]
pub struct StableTree {
    n: u32,
    vertices: Vec<TreeVertex>,
}

impl StableTree {
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Vertex 0 is the root (the side containing marking `n`).
    pub fn vertices(&self) -> &[TreeVertex] {
        &self.vertices
    }

    pub fn valences(&self) -> impl Iterator<Item = u32> + '_ {
        self.vertices.iter().map(|v| v.valence())
    }
}

/// Class of the open moduli of `m` distinct marked points on a line:
/// `(L-2)(L-3)...(L-(m-2))`, the empty product `1` when `m = 3`.
pub fn open_class(m: u32) -> Result<LPolynomial> {
    if m < 3 {
        return Err(Error::Domain {
            what: format!("open stratum class needs m >= 3, got {m}"),
        });
    }
    let mut acc = LPolynomial::one();
    for i in 2..=m as i64 - 2 {
        acc = &acc * &LPolynomial::from_i64(&[-i, 1]);
    }
    Ok(acc)
}

/// Enumerate every laminar family for `n` markings (including the empty one)
/// exactly once: depth-first extension over the valid subsets in ascending
/// mask order, adding only subsets later in the order than the last member.
pub fn enumerate_laminar_families(n: u32) -> LaminarFamilies {
    assert!((3..=32).contains(&n), "marking sets are 32-bit masks");
    let mut subsets = Vec::new();
    if n >= 4 {
        for mask in 3..1u32 << (n - 1) {
            let size = mask.count_ones();
            if size >= 2 && size + 2 <= n {
                subsets.push(mask);
            }
        }
    }
    LaminarFamilies {
        subsets,
        stack: vec![(Vec::new(), 0)],
    }
}

#[derive(Debug, Clone)]
pub struct LaminarFamilies {
    subsets: Vec<u32>,
    stack: Vec<(Vec<u32>, usize)>,
}

impl Iterator for LaminarFamilies {
    type Item = LaminarFamily;

    fn next(&mut self) -> Option<LaminarFamily> {
        let (members, start) = self.stack.pop()?;
        for idx in (start..self.subsets.len()).rev() {
            let cand = self.subsets[idx];
            if members
                .iter()
                .all(|&m| MarkedSubset::from_mask(m).is_compatible(&MarkedSubset::from_mask(cand)))
            {
                let mut extended = members.clone();
                extended.push(cand);
                self.stack.push((extended, idx + 1));
            }
        }
        Some(LaminarFamily {
            members: members.into_iter().map(MarkedSubset::from_mask).collect(),
        })
    }
}

/// Build the stable tree of a family: one vertex per member plus the root.
/// The parent of a member is the minimal member strictly containing it (the
/// root if none); the legs of a vertex are the markings it carries that no
/// child carries; the root additionally carries marking `n`.
pub fn family_to_tree(family: &LaminarFamily, n: u32) -> Result<StableTree> {
    let members = family.members();
    let k = members.len();
    // vertex 0 = root, vertex i+1 = members[i]
    let mut vertices: Vec<TreeVertex> = Vec::with_capacity(k + 1);
    vertices.push(TreeVertex {
        subset: None,
        parent: None,
        children: Vec::new(),
        legs: Vec::new(),
    });
    for m in members {
        vertices.push(TreeVertex {
            subset: Some(*m),
            parent: None,
            children: Vec::new(),
            legs: Vec::new(),
        });
    }

    for (i, m) in members.iter().enumerate() {
        // minimal strict superset among the members; laminarity makes the
        // set of strict supersets totally ordered, so "smallest size" is it
        let mut best: Option<usize> = None;
        for (j, c) in members.iter().enumerate() {
            if i != j && m.is_subset_of(c) && best.is_none_or(|b| c.len() < members[b].len()) {
                best = Some(j);
            }
        }
        let parent_idx = best.map_or(0, |j| j + 1);
        vertices[i + 1].parent = Some(parent_idx);
        vertices[parent_idx].children.push(i + 1);
    }

    for i in 0..=k {
        let child_union: u32 = vertices[i]
            .children
            .iter()
            .map(|&c| vertices[c].subset.expect("children are members").mask)
            .fold(0, |a, b| a | b);
        let own = match vertices[i].subset {
            Some(s) => s.mask,
            // the root carries everything, marking n included
            None => (1u32 << n) - 1,
        };
        let leg_mask = own & !child_union;
        vertices[i].legs = (1..=n).filter(|&e| leg_mask >> (e - 1) & 1 == 1).collect();
    }

    let tree = StableTree { n, vertices };
    for (i, v) in tree.vertices.iter().enumerate() {
        if v.valence() < 3 {
            return Err(Error::Internal {
                what: format!(
                    "stable tree vertex {i} has valence {} < 3 for n={n}",
                    v.valence()
                ),
            });
        }
    }
    Ok(tree)
}

/// Number of laminar families (= boundary strata) for `n` markings.
///
/// ```
/// use mbar_core::strata::stratum_count;
/// assert_eq!(stratum_count(6).unwrap(), 236.into());
/// ```
pub fn stratum_count(n: u32) -> Result<BigInt> {
    stratum_count_with_limit(n, DEFAULT_N_MAX_ORACLE)
}

pub fn stratum_count_with_limit(n: u32, n_max: u32) -> Result<BigInt> {
    check_oracle_range(n, n_max)?;
    let mut count = BigInt::zero();
    for _ in enumerate_laminar_families(n) {
        count += 1;
    }
    Ok(count)
}

/// The class of the `n`-marked compactification as a sum over all boundary
/// strata of the product of open vertex classes.
pub fn class_via_strata(n: u32) -> Result<LPolynomial> {
    class_via_strata_with_limit(n, DEFAULT_N_MAX_ORACLE)
}

pub fn class_via_strata_with_limit(n: u32, n_max: u32) -> Result<LPolynomial> {
    check_oracle_range(n, n_max)?;
    // every valence that can occur is 3..=n
    let mut open: Vec<LPolynomial> = vec![LPolynomial::zero(); n as usize + 1];
    for m in 3..=n {
        open[m as usize] = open_class(m)?;
    }
    let mut total = LPolynomial::zero();
    for family in enumerate_laminar_families(n) {
        let tree = family_to_tree(&family, n)?;
        let mut prod = LPolynomial::one();
        for v in tree.valences() {
            prod = &prod * &open[v as usize];
        }
        total = &total + &prod;
    }
    total.to_betti_table(n)?;
    Ok(total)
}

fn check_oracle_range(n: u32, n_max: u32) -> Result<()> {
    if n < 3 {
        return Err(Error::Domain {
            what: format!("need n >= 3, got {n}"),
        });
    }
    if n > n_max {
        return Err(Error::Domain {
            what: format!("strata enumeration capped at n <= {n_max}, got {n}"),
        });
    }
    Ok(())
}
