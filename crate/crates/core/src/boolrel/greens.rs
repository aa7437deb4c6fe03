use std::collections::BTreeSet;
use std::sync::OnceLock;

use super::{members, poset_automorphisms, poset_isomorphic, BoolRel, Poset, VertexSet};
use crate::error::{Error, Result};
use crate::permutation::Permutation;

/// Largest neighbourhood lattice that is materialised.
pub const NEIGHBORHOOD_LATTICE_CAP: usize = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Rows: out-neighbourhoods.
    Out,
    /// Columns: in-neighbourhoods.
    In,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum GreensRelation {
    L,
    R,
    H,
    D,
}

impl std::str::FromStr for GreensRelation {
    type Err = Error;

    fn from_str(s: &str) -> Result<GreensRelation> {
        match s {
            "L" | "l" => Ok(GreensRelation::L),
            "R" | "r" => Ok(GreensRelation::R),
            "H" | "h" => Ok(GreensRelation::H),
            "D" | "d" => Ok(GreensRelation::D),
            _ => Err(Error::Parse {
                context: "Green's relation".into(),
                message: format!("{s:?} is not one of L, R, H, D"),
            }),
        }
    }
}

/// All unions of the rows (or columns) of a relation, ordered by inclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodLattice {
    n: usize,
    /// Sorted numerically, which is a linear extension of inclusion.
    sets: Vec<VertexSet>,
}

impl NeighborhoodLattice {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> &[VertexSet] {
        &self.sets
    }

    pub fn size(&self) -> usize {
        self.sets.len()
    }

    pub fn contains(&self, s: VertexSet) -> bool {
        self.sets.binary_search(&s).is_ok()
    }

    pub fn join(&self, a: VertexSet, b: VertexSet) -> VertexSet {
        a | b
    }

    /// The largest member inside `a ∩ b`; the union of all such members.
    pub fn meet(&self, a: VertexSet, b: VertexSet) -> VertexSet {
        let cap = a & b;
        self.sets
            .iter()
            .filter(|&&s| s & !cap == 0)
            .fold(0, |acc, &s| acc | s)
    }

    /// The inclusion order; element `i` is `sets()[i]`.
    pub fn to_poset(&self) -> Poset {
        let s = &self.sets;
        Poset::from_fn((0..s.len()).collect(), |i, j| s[i] & !s[j] == 0).expect("inclusion")
    }

    /// One-based set notation, e.g. `{1,3}`.
    pub fn label(s: VertexSet) -> String {
        let inner: Vec<String> = members(s).map(|i| (i + 1).to_string()).collect();
        format!("{{{}}}", inner.join(","))
    }
}

pub fn neighborhood_lattice(alpha: &BoolRel, side: Side) -> Result<NeighborhoodLattice> {
    let gens: Vec<VertexSet> = match side {
        Side::Out => alpha.row_masks().to_vec(),
        Side::In => (0..alpha.n()).map(|j| alpha.col(j)).collect(),
    };
    let mut sets: BTreeSet<VertexSet> = BTreeSet::from([0]);
    for g in gens {
        if sets.contains(&g) {
            continue;
        }
        let grown: Vec<VertexSet> = sets.iter().map(|s| s | g).collect();
        sets.extend(grown);
        if sets.len() > NEIGHBORHOOD_LATTICE_CAP {
            return Err(Error::SizeLimit {
                what: "neighbourhood lattice",
                size: sets.len(),
                limit: NEIGHBORHOOD_LATTICE_CAP,
            });
        }
    }
    Ok(NeighborhoodLattice {
        n: alpha.n(),
        sets: sets.into_iter().collect(),
    })
}

/// Green's relations via neighbourhood lattices.
///
/// `L` and `R` compare the out- and in-neighbourhood systems, `H` is their
/// conjunction, and `D` asks whether the out-neighbourhood lattices are
/// isomorphic.
pub fn greens(a: &BoolRel, b: &BoolRel, which: GreensRelation) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    let same = |side| -> Result<bool> {
        Ok(neighborhood_lattice(a, side)? == neighborhood_lattice(b, side)?)
    };
    match which {
        GreensRelation::L => same(Side::Out),
        GreensRelation::R => same(Side::In),
        GreensRelation::H => Ok(same(Side::Out)? && same(Side::In)?),
        GreensRelation::D => {
            let la = neighborhood_lattice(a, Side::Out)?;
            let lb = neighborhood_lattice(b, Side::Out)?;
            if la.size() != lb.size() {
                return Ok(false);
            }
            Ok(poset_isomorphic(&la.to_poset(), &lb.to_poset()).is_some())
        }
    }
}

/// Exhaustive Green's relations on all `2^{n²}` relations for `n ≤ 3`.
///
/// `A L B` iff `B ∈ B_n·A` and `A ∈ B_n·B`; `R` dually with right
/// multiplication; `D = L ∘ R`.
pub struct GreensOracle {
    n: usize,
    /// Bitsets over matrix indices: `left[a]` holds every `C·A`.
    left: Vec<Vec<u64>>,
    right: Vec<Vec<u64>>,
}

pub const GREENS_ORACLE_MAX_N: usize = 3;

impl GreensOracle {
    pub fn new(n: usize) -> Result<GreensOracle> {
        if n == 0 || n > GREENS_ORACLE_MAX_N {
            return Err(Error::SizeLimit {
                what: "oracle dimension",
                size: n,
                limit: GREENS_ORACLE_MAX_N,
            });
        }
        let count = 1usize << (n * n);
        let words = count.div_ceil(64);
        let all: Vec<BoolRel> = BoolRel::all(n).collect();
        let mut left = vec![vec![0u64; words]; count];
        let mut right = vec![vec![0u64; words]; count];
        for (ai, a) in all.iter().enumerate() {
            for c in &all {
                let ca = c.mul_unchecked(a).to_index() as usize;
                left[ai][ca / 64] |= 1 << (ca % 64);
                let ac = a.mul_unchecked(c).to_index() as usize;
                right[ai][ac / 64] |= 1 << (ac % 64);
            }
        }
        Ok(GreensOracle { n, left, right })
    }

    /// The shared oracle for dimension `n`, built on first use.
    pub fn cached(n: usize) -> Result<&'static GreensOracle> {
        static CACHE: [OnceLock<GreensOracle>; GREENS_ORACLE_MAX_N] =
            [OnceLock::new(), OnceLock::new(), OnceLock::new()];
        let slot = n
            .checked_sub(1)
            .and_then(|i| CACHE.get(i))
            .ok_or(Error::SizeLimit {
                what: "oracle dimension",
                size: n,
                limit: GREENS_ORACLE_MAX_N,
            })?;
        Ok(slot.get_or_init(|| GreensOracle::new(n).expect("dimension checked")))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn has(ideal: &[u64], b: usize) -> bool {
        ideal[b / 64] >> (b % 64) & 1 == 1
    }

    fn l(&self, a: usize, b: usize) -> bool {
        Self::has(&self.left[a], b) && Self::has(&self.left[b], a)
    }

    fn r(&self, a: usize, b: usize) -> bool {
        Self::has(&self.right[a], b) && Self::has(&self.right[b], a)
    }

    fn related_index(&self, a: usize, b: usize, which: GreensRelation) -> bool {
        match which {
            GreensRelation::L => self.l(a, b),
            GreensRelation::R => self.r(a, b),
            GreensRelation::H => self.l(a, b) && self.r(a, b),
            GreensRelation::D => (0..self.left.len()).any(|c| self.l(a, c) && self.r(c, b)),
        }
    }

    pub fn related(&self, a: &BoolRel, b: &BoolRel, which: GreensRelation) -> Result<bool> {
        for m in [a, b] {
            if m.n() != self.n {
                return Err(Error::DimensionMismatch {
                    left: self.n,
                    right: m.n(),
                });
            }
        }
        Ok(self.related_index(a.to_index() as usize, b.to_index() as usize, which))
    }

    /// The full class of `a` for the given relation, in index order.
    pub fn class_of(&self, a: &BoolRel, which: GreensRelation) -> Result<Vec<BoolRel>> {
        if a.n() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: a.n(),
            });
        }
        let ai = a.to_index() as usize;
        Ok((0..self.left.len())
            .filter(|&b| self.related_index(ai, b, which))
            .map(|b| BoolRel::from_index(self.n, b as u64))
            .collect())
    }
}

pub fn greens_oracle(a: &BoolRel, b: &BoolRel, which: GreensRelation) -> Result<bool> {
    GreensOracle::cached(a.n())?.related(a, b, which)
}

/// One element `P_f·A` of the H-class of a reduced idempotent.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct HClassMember {
    /// `f` on all of `X`, fixing every vertex outside the carrier.
    pub automorphism: Permutation,
    #[serde(serialize_with = "crate::io::serialize_rel_rows")]
    pub matrix: BoolRel,
}

fn is_reduced_idempotent(a: &BoolRel) -> bool {
    let t = a.loops();
    a.restrict(t) == *a && a.is_antisymmetric() && a.is_transitive()
}

/// The H-class of a reduced idempotent `A`: `{P_f·A : f ∈ Aut(T; α)}`,
/// listed in the order of the automorphisms restricted to `T`.
pub fn hclass_of_reduced_idempotent(a: &BoolRel) -> Result<Vec<HClassMember>> {
    if !is_reduced_idempotent(a) {
        return Err(Error::NotReducedIdempotent);
    }
    let poset = Poset::from_relation(a, a.loops())?;
    let t = poset.labels().to_vec();
    let mut out = Vec::new();
    for g in poset_automorphisms(&poset)? {
        let mut map: Vec<usize> = (0..a.n()).collect();
        for (i, &x) in t.iter().enumerate() {
            map[x] = t[g.apply(i)];
        }
        let f = Permutation::from_vec(map)?;
        let matrix = BoolRel::permutation(&f)?.mul_unchecked(a);
        out.push(HClassMember {
            automorphism: f,
            matrix,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use GreensRelation::*;

    fn rel<const N: usize>(rows: [[u8; N]; N]) -> BoolRel {
        BoolRel::from_rows(&rows).unwrap()
    }

    #[test]
    fn neighborhood_examples() {
        let id = BoolRel::identity(3).unwrap();
        assert_eq!(neighborhood_lattice(&id, Side::Out).unwrap().size(), 8);
        let full = BoolRel::full(3).unwrap();
        assert_eq!(
            neighborhood_lattice(&full, Side::Out).unwrap().sets(),
            &[0, 0b111]
        );
        let a = rel([[1, 1], [0, 1]]);
        let l = neighborhood_lattice(&a, Side::Out).unwrap();
        assert_eq!(l.sets(), &[0, 0b10, 0b11]);
        assert!(l.to_poset().is_chain());
        assert_eq!(NeighborhoodLattice::label(0b101), "{1,3}");
    }

    #[test]
    fn meet_is_largest_member_below() {
        let a = rel([[1, 1, 0], [0, 1, 1], [0, 0, 0]]);
        let l = neighborhood_lattice(&a, Side::Out).unwrap();
        assert_eq!(l.meet(0b011, 0b110), 0);
        assert_eq!(l.meet(0b111, 0b011), 0b011);
        for &x in l.sets() {
            for &y in l.sets() {
                assert!(l.contains(l.meet(x, y)));
                assert!(l.contains(l.join(x, y)));
            }
        }
    }

    #[test]
    fn greens_examples() {
        let id = BoolRel::identity(2).unwrap();
        let swap = rel([[0, 1], [1, 0]]);
        let full = BoolRel::full(2).unwrap();
        for w in [L, R, H, D] {
            assert!(greens(&id, &id, w).unwrap());
            assert!(greens_oracle(&id, &id, w).unwrap());
        }
        assert!(!greens(&id, &full, D).unwrap());
        assert!(!greens_oracle(&id, &full, D).unwrap());
        assert!(greens(&id, &swap, H).unwrap());
        assert!(greens_oracle(&id, &swap, H).unwrap());
        assert!(!greens_oracle(&id, &full, L).unwrap());
    }

    #[test]
    fn oracle_rejects_large_n() {
        let a = BoolRel::identity(4).unwrap();
        assert!(matches!(
            greens_oracle(&a, &a, L),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn formula_matches_oracle_n2() {
        let all: Vec<_> = BoolRel::all(2).collect();
        for a in &all {
            for b in &all {
                for w in [L, R, H, D] {
                    assert_eq!(
                        greens(a, b, w).unwrap(),
                        greens_oracle(a, b, w).unwrap(),
                        "{a:?} {b:?} {w:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn hclass_examples() {
        let id = BoolRel::identity(2).unwrap();
        let h = hclass_of_reduced_idempotent(&id).unwrap();
        let mats: Vec<_> = h.iter().map(|m| m.matrix.clone()).collect();
        assert_eq!(mats, vec![id.clone(), rel([[0, 1], [1, 0]])]);

        let chain = rel([[1, 1], [0, 1]]);
        assert_eq!(hclass_of_reduced_idempotent(&chain).unwrap().len(), 1);

        let two_points = rel([[1, 0, 0], [0, 1, 0], [0, 0, 0]]);
        let h = hclass_of_reduced_idempotent(&two_points).unwrap();
        assert_eq!(h.len(), 2);
        let oracle = GreensOracle::cached(3)
            .unwrap()
            .class_of(&two_points, H)
            .unwrap();
        let mut ours: Vec<_> = h.into_iter().map(|m| m.matrix).collect();
        ours.sort_by_key(|m| m.to_index());
        assert_eq!(ours, oracle);

        assert_eq!(
            hclass_of_reduced_idempotent(&BoolRel::full(2).unwrap()),
            Err(Error::NotReducedIdempotent)
        );
    }
}
