//! Binary relations on `X = {0, ..., n-1}` as Boolean matrices.
//!
//! Row `i` is stored as a `u64` bitmask of the out-neighbourhood of `i`,
//! so relational products are word-parallel row unions. `n ≤ 64`.

mod greens;
mod poset;
mod pseudo;

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::permutation::Permutation;

pub use greens::{
    greens, greens_oracle, hclass_of_reduced_idempotent, neighborhood_lattice, GreensOracle,
    GreensRelation, HClassMember, NeighborhoodLattice, Side, GREENS_ORACLE_MAX_N,
    NEIGHBORHOOD_LATTICE_CAP,
};
pub use poset::{
    poset_automorphisms, poset_automorphisms_capped, poset_isomorphic, Poset,
    DEFAULT_AUTOMORPHISM_CAP,
};
pub use pseudo::{
    analyze_pseudo_order, check_pseudo_order_routes, core_poset, is_idempotent_rel,
    reduced_idempotent, PseudoOrderAnalysis, PseudoOrderFailure, ReducedIdempotent,
};

/// Vertex subsets of `X` as bitmasks.
pub type VertexSet = u64;

/// Iterates the members of a vertex set in increasing order.
pub fn members(mut set: VertexSet) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (set != 0).then(|| {
            let i = set.trailing_zeros() as usize;
            set &= set - 1;
            i
        })
    })
}

/// A binary relation `α ⊆ X²`; `(i, j) ∈ α` iff entry `a_ij` is 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoolRel {
    n: usize,
    rows: Vec<u64>,
}

impl fmt::Debug for BoolRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BoolRel{:?}", self.to_rows())
    }
}

impl fmt::Display for BoolRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: String = (0..self.n)
                .map(|j| if self.get(i, j) { '1' } else { '0' })
                .collect();
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > 64 {
        Err(Error::InvalidDimension(n))
    } else {
        Ok(())
    }
}

impl BoolRel {
    pub fn zero(n: usize) -> Result<BoolRel> {
        check_n(n)?;
        Ok(BoolRel {
            n,
            rows: vec![0; n],
        })
    }

    /// The equality relation.
    pub fn identity(n: usize) -> Result<BoolRel> {
        check_n(n)?;
        Ok(BoolRel {
            n,
            rows: (0..n).map(|i| 1 << i).collect(),
        })
    }

    /// The full relation `X²`.
    pub fn full(n: usize) -> Result<BoolRel> {
        check_n(n)?;
        let all = full_mask(n);
        Ok(BoolRel {
            n,
            rows: vec![all; n],
        })
    }

    /// The diagonal relation `{(x, x) : x ∈ set}`.
    pub fn diagonal(n: usize, set: VertexSet) -> Result<BoolRel> {
        check_n(n)?;
        Ok(BoolRel {
            n,
            rows: (0..n).map(|i| set & (1 << i)).collect(),
        })
    }

    /// From row bitmasks.
    pub fn from_row_masks(n: usize, rows: Vec<u64>) -> Result<BoolRel> {
        check_n(n)?;
        if rows.len() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: rows.len(),
            });
        }
        if rows.iter().any(|&r| r & !full_mask(n) != 0) {
            return Err(Error::InvalidDimension(n));
        }
        Ok(BoolRel { n, rows })
    }

    /// From a 0/1 matrix.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<BoolRel> {
        let n = rows.len();
        check_n(n)?;
        let mut masks = Vec::with_capacity(n);
        for r in rows {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: r.len(),
                });
            }
            let mut mask = 0u64;
            for (j, &v) in r.iter().enumerate() {
                match v {
                    0 => {}
                    1 => mask |= 1 << j,
                    _ => {
                        return Err(Error::Parse {
                            context: "relation entry".into(),
                            message: format!("{v} is not 0 or 1"),
                        })
                    }
                }
            }
            masks.push(mask);
        }
        Ok(BoolRel { n, rows: masks })
    }

    /// From zero-based edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<BoolRel> {
        let mut r = BoolRel::zero(n)?;
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidElement(i.max(j)));
            }
            r.rows[i] |= 1 << j;
        }
        Ok(r)
    }

    /// Decodes bit `i·n + j` of `index` as entry `(i, j)`; needs `n ≤ 8`.
    pub fn from_index(n: usize, index: u64) -> BoolRel {
        assert!((1..=8).contains(&n), "index encoding needs 1 <= n <= 8");
        let row_mask = full_mask(n);
        BoolRel {
            n,
            rows: (0..n).map(|i| (index >> (i * n)) & row_mask).collect(),
        }
    }

    pub fn to_index(&self) -> u64 {
        assert!(self.n <= 8);
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &r)| acc | (r << (i * self.n)))
    }

    /// Every relation on `n` points, in [`BoolRel::from_index`] order.
    pub fn all(n: usize) -> impl Iterator<Item = BoolRel> {
        assert!((1..=5).contains(&n), "exhaustive enumeration needs n <= 5");
        (0..1u64 << (n * n)).map(move |i| BoolRel::from_index(n, i))
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BoolRel {
        let mask = full_mask(n);
        BoolRel {
            n,
            rows: (0..n).map(|_| rng.gen::<u64>() & mask).collect(),
        }
    }

    /// The permutation matrix `P_π`: `(i, π(i))` for every `i`.
    pub fn permutation(pi: &Permutation) -> Result<BoolRel> {
        check_n(pi.len())?;
        Ok(BoolRel {
            n: pi.len(),
            rows: (0..pi.len()).map(|i| 1 << pi.apply(i)).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        if value {
            self.rows[i] |= 1 << j;
        } else {
            self.rows[i] &= !(1 << j);
        }
    }

    /// Out-neighbourhood of `i`.
    #[inline]
    pub fn row(&self, i: usize) -> VertexSet {
        self.rows[i]
    }

    pub fn row_masks(&self) -> &[u64] {
        &self.rows
    }

    /// In-neighbourhood of `j`.
    pub fn col(&self, j: usize) -> VertexSet {
        (0..self.n)
            .filter(|&i| self.get(i, j))
            .fold(0, |acc, i| acc | 1 << i)
    }

    /// Out-neighbourhood of a vertex set.
    pub fn image(&self, set: VertexSet) -> VertexSet {
        members(set).fold(0, |acc, i| acc | self.rows[i])
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) as u8).collect())
            .collect()
    }

    /// Zero-based edge list in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| members(self.rows[i]).map(move |j| (i, j)))
            .collect()
    }

    fn check_same(&self, other: &BoolRel) -> Result<()> {
        if self.n != other.n {
            Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            })
        } else {
            Ok(())
        }
    }

    /// Relational product `α ∘ β`, i.e. the Boolean matrix product.
    pub fn mul(&self, other: &BoolRel) -> Result<BoolRel> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    #[inline]
    pub(crate) fn mul_unchecked(&self, other: &BoolRel) -> BoolRel {
        BoolRel {
            n: self.n,
            rows: self.rows.iter().map(|&r| other.image(r)).collect(),
        }
    }

    pub fn union(&self, other: &BoolRel) -> Result<BoolRel> {
        self.check_same(other)?;
        Ok(BoolRel {
            n: self.n,
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a | b)
                .collect(),
        })
    }

    /// Entrywise order, i.e. inclusion of relations.
    pub fn leq(&self, other: &BoolRel) -> bool {
        self.n == other.n && self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    pub fn transpose(&self) -> BoolRel {
        BoolRel {
            n: self.n,
            rows: (0..self.n).map(|j| self.col(j)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    /// Looped vertices `{x : (x, x) ∈ α}`.
    pub fn loops(&self) -> VertexSet {
        (0..self.n)
            .filter(|&i| self.get(i, i))
            .fold(0, |acc, i| acc | 1 << i)
    }

    pub fn is_transitive(&self) -> bool {
        self.mul_unchecked(self).leq(self)
    }

    pub fn is_reflexive(&self) -> bool {
        self.loops() == full_mask(self.n)
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.n).all(|i| members(self.rows[i]).all(|j| j == i || !self.get(j, i)))
    }

    pub fn is_partial_order(&self) -> bool {
        self.is_reflexive() && self.is_antisymmetric() && self.is_transitive()
    }

    pub fn is_idempotent(&self) -> bool {
        self.mul_unchecked(self) == *self
    }

    /// `α ∪ {(x, x) : x ∈ X}`.
    pub fn reflexive_closure(&self) -> BoolRel {
        BoolRel {
            n: self.n,
            rows: self
                .rows
                .iter()
                .enumerate()
                .map(|(i, &r)| r | 1 << i)
                .collect(),
        }
    }

    /// Reflexive-transitive closure: `(x, y)` iff a route of length `≥ 0`
    /// leads from `x` to `y`.
    pub fn reachability(&self) -> BoolRel {
        let mut rows = self.reflexive_closure().rows;
        // Warshall on bit rows
        for k in 0..self.n {
            let rk = rows[k];
            for r in rows.iter_mut() {
                if *r >> k & 1 == 1 {
                    *r |= rk;
                }
            }
        }
        BoolRel { n: self.n, rows }
    }

    /// Keeps only the edges with both ends in `set`.
    pub fn restrict(&self, set: VertexSet) -> BoolRel {
        BoolRel {
            n: self.n,
            rows: self
                .rows
                .iter()
                .enumerate()
                .map(|(i, &r)| if set >> i & 1 == 1 { r & set } else { 0 })
                .collect(),
        }
    }

    /// For `A² ≤ A` the powers decrease; returns the limit and the first
    /// exponent `ℓ` with `A^ℓ = A^(ℓ+1)`. `None` if `A² ≰ A`.
    pub fn power_limit(&self) -> Option<(BoolRel, usize)> {
        if !self.is_transitive() {
            return None;
        }
        let mut cur = self.clone();
        let mut exp = 1;
        loop {
            let next = cur.mul_unchecked(self);
            if next == cur {
                return Some((cur, exp));
            }
            debug_assert!(next.leq(&cur));
            cur = next;
            exp += 1;
        }
    }

    /// Graphviz rendering with one-based vertex labels.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph relation {\n");
        for i in 0..self.n {
            s.push_str(&format!("  {};\n", i + 1));
        }
        for (i, j) in self.edges() {
            s.push_str(&format!("  {} -> {};\n", i + 1, j + 1));
        }
        s.push_str("}\n");
        s
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}
