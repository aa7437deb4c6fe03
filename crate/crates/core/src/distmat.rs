//! Matrices over distributive lattices through their cuts.
//!
//! For a distributive lattice with join-irreducibles `Ω`, the cut of a
//! matrix at `ω ∈ Ω` is the Boolean matrix with a 1 wherever `ω ≤ a_ij`.
//! Each cut map is a semiring homomorphism into Boolean matrices, and a
//! matrix is determined by its cuts.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::Arc;

use crate::boolrel::{analyze_pseudo_order, poset_automorphisms, BoolRel, Poset};
use crate::error::{Error, Result};
use crate::lattice::{BoundIrreducibility, CutIndex, Elem, Lattice};
use crate::matrix::LatMatrix;
use crate::permutation::Permutation;

/// The cuts of one matrix, one Boolean matrix per join-irreducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutFamily {
    lattice: Arc<Lattice>,
    index: CutIndex,
    cuts: Vec<BoolRel>,
}

impl CutFamily {
    pub fn from_parts(lattice: Arc<Lattice>, cuts: Vec<BoolRel>) -> Result<CutFamily> {
        let index = lattice.birkhoff_cuts()?;
        if cuts.len() != index.omega().len() {
            return Err(Error::DimensionMismatch {
                left: index.omega().len(),
                right: cuts.len(),
            });
        }
        if let Some(c) = cuts.iter().find(|c| c.n() != cuts[0].n()) {
            return Err(Error::DimensionMismatch {
                left: cuts[0].n(),
                right: c.n(),
            });
        }
        Ok(CutFamily {
            lattice,
            index,
            cuts,
        })
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn index(&self) -> &CutIndex {
        &self.index
    }

    /// Cuts in the order of [`CutIndex::omega`].
    pub fn cuts(&self) -> &[BoolRel] {
        &self.cuts
    }

    /// The cut at the join-irreducible `omega`.
    pub fn cut(&self, omega: Elem) -> Result<&BoolRel> {
        Ok(&self.cuts[self.index.position(omega)?])
    }
}

pub fn cut_decompose(a: &LatMatrix) -> Result<CutFamily> {
    let lattice = a.lattice().clone();
    let index = lattice.birkhoff_cuts()?;
    let n = a.n();
    let cuts = (0..index.omega().len())
        .map(|k| {
            let rows = (0..n)
                .map(|i| {
                    (0..n)
                        .filter(|&j| index.cut_at(k, a.get(i, j)))
                        .fold(0u64, |m, j| m | 1 << j)
                })
                .collect();
            BoolRel::from_row_masks(n, rows)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CutFamily {
        lattice,
        index,
        cuts,
    })
}

/// Inverse of [`cut_decompose`]; fails if some entry's cut pattern is not
/// the image of a lattice element.
pub fn reconstruct(family: &CutFamily) -> Result<LatMatrix> {
    let n = family.cuts.first().map_or(0, |c| c.n());
    if n == 0 {
        // the two-element lattice is the smallest with a join-irreducible
        return Err(Error::TooFewElements);
    }
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mask = family
                .cuts
                .iter()
                .enumerate()
                .filter(|(_, c)| c.get(i, j))
                .fold(0u64, |m, (k, _)| m | 1 << k);
            entries.push(
                family
                    .index
                    .element_of(mask)
                    .ok_or(Error::CutsNotRealizable)?,
            );
        }
    }
    LatMatrix::new(family.lattice.clone(), n, entries)
}

/// `A² = A`, decided both directly and by checking that every cut is a
/// pseudo-order.
pub fn is_idempotent_mat(a: &LatMatrix) -> Result<bool> {
    let family = cut_decompose(a)?;
    let direct = a.mul(a)? == *a;
    let by_cuts = family
        .cuts
        .iter()
        .all(|c| analyze_pseudo_order(c).is_pseudo_order());
    if direct != by_cuts {
        return Err(Error::Internal(format!(
            "idempotence by squaring ({direct}) disagrees with the cut criterion ({by_cuts})"
        )));
    }
    Ok(direct)
}

/// The idempotent over `chain:m` whose cuts are `α₁ ⊇ … ⊇ α_{m−1}`.
pub fn chain_idempotent_from_nested(relations: &[BoolRel]) -> Result<LatMatrix> {
    let first = relations.first().ok_or(Error::TooFewElements)?;
    let n = first.n();
    if let Some(r) = relations.iter().find(|r| r.n() != n) {
        return Err(Error::DimensionMismatch {
            left: n,
            right: r.n(),
        });
    }
    if let Some(k) = relations.windows(2).position(|w| !w[1].leq(&w[0])) {
        return Err(Error::NotNested(k + 1));
    }
    if let Some(k) = relations
        .iter()
        .position(|r| !analyze_pseudo_order(r).is_pseudo_order())
    {
        return Err(Error::NotPseudoOrder(k + 1));
    }
    let chain = Arc::new(Lattice::chain(relations.len() + 1)?);
    // chain element ids are ranks, so the entry is the number of cuts containing (i, j)
    LatMatrix::from_fn(chain, n, |i, j| {
        relations.iter().filter(|r| r.get(i, j)).count()
    })
}

/// How [`invert`] searches for right inverses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvertMode {
    /// Applies the permutation-matrix characterisation; needs an
    /// irreducible bound.
    Theorem,
    /// Scans every matrix over the lattice.
    Exhaustive { budget: u128 },
}

pub const DEFAULT_INVERT_BUDGET: u128 = 10_000_000;

/// Right inverses `B` with `A·B = I`.
///
/// Theorem mode returns `P_{π⁻¹}` when `A = P_π` and nothing otherwise.
/// Exhaustive mode returns every right inverse in index order.
pub fn invert(a: &LatMatrix, mode: InvertMode) -> Result<Vec<LatMatrix>> {
    let lattice = a.lattice().clone();
    match mode {
        InvertMode::Theorem => {
            if !lattice.bound_irreducibility().either() {
                return Err(Error::IrreducibilityNotSatisfied);
            }
            Ok(match a.as_permutation() {
                Some(pi) => vec![LatMatrix::permutation(lattice, &pi.inverse())?],
                None => Vec::new(),
            })
        }
        InvertMode::Exhaustive { budget } => {
            let n = a.n();
            let needed = LatMatrix::count(&lattice, n).unwrap_or(u128::MAX);
            if needed > budget {
                return Err(Error::BudgetExceeded { needed, budget });
            }
            let id = LatMatrix::identity(lattice.clone(), n)?;
            Ok(LatMatrix::all(lattice, n)
                .filter(|b| a.mul(b).is_ok_and(|ab| ab == id))
                .collect())
        }
    }
}

/// Nilpotency by two criteria that must agree: `Aⁿ = 𝟘`, and every
/// directed cycle has capacity `0`.
pub fn is_nilpotent(a: &LatMatrix) -> Result<bool> {
    let l = a.lattice();
    if !l.is_distributive() {
        return Err(Error::NotDistributive);
    }
    let by_power = a.power_unchecked(a.n()).is_zero();
    let by_cycles = cycle_capacities(a).iter().all(|&c| c == l.bottom());
    if by_power != by_cycles {
        return Err(Error::Internal(format!(
            "power criterion ({by_power}) disagrees with the cycle criterion ({by_cycles})"
        )));
    }
    Ok(by_power)
}

/// For each vertex, the join of the capacities of all closed routes
/// through it, by a Warshall pass over `(join, meet)`.
fn cycle_capacities(a: &LatMatrix) -> Vec<Elem> {
    let l = a.lattice();
    let n = a.n();
    let mut c = a.entries().to_vec();
    for k in 0..n {
        for i in 0..n {
            let cik = c[i * n + k];
            if cik == l.bottom() {
                continue;
            }
            for j in 0..n {
                let via = l.meet(cik, c[k * n + j]);
                c[i * n + j] = l.join(c[i * n + j], via);
            }
        }
    }
    (0..n).map(|i| c[i * n + i]).collect()
}

/// The nonzero pattern `{(i, j) : a_ij ≠ 0}`.
pub fn support(a: &LatMatrix) -> Result<BoolRel> {
    let n = a.n();
    let b = a.lattice().bottom();
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| a.get(i, j) != b)
                .fold(0u64, |m, j| m | 1 << j)
        })
        .collect();
    BoolRel::from_row_masks(n, rows)
}

/// A permutation `π` with `conjugate(A, π)` strictly upper triangular.
///
/// `π(i)` is the `i`-th vertex in a topological order of the support of
/// `A`, breaking ties by least index.
pub fn triangularize(a: &LatMatrix) -> Result<Permutation> {
    let l = a.lattice();
    if !l.bound_irreducibility().bottom_meet_irreducible {
        return Err(Error::BottomNotMeetIrreducible);
    }
    let alpha = support(a)?;
    let n = a.n();
    let mut indegree: Vec<usize> = (0..n).map(|j| alpha.col(j).count_ones() as usize).collect();
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&j| indegree[j] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(x)) = ready.pop() {
        order.push(x);
        for y in crate::boolrel::members(alpha.row(x)) {
            indegree[y] -= 1;
            if indegree[y] == 0 {
                ready.push(Reverse(y));
            }
        }
    }
    if order.len() < n {
        return Err(Error::NotNilpotent);
    }
    let pi = Permutation::from_vec(order)?;
    debug_assert!(a.conjugate(&pi)?.is_strictly_upper_triangular());
    Ok(pi)
}

/// One element `P_f·A` of the H-class of an idempotent over a chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainHClassMember {
    pub automorphism: Permutation,
    pub matrix: LatMatrix,
}

/// The H-class of an idempotent over a chain whose cuts are all partial
/// orders on the whole vertex set: `{P_f·A : f a common automorphism}`.
pub fn hclass_chain(a: &LatMatrix) -> Result<Vec<ChainHClassMember>> {
    let lattice = a.lattice().clone();
    if !lattice.is_chain() {
        return Err(Error::NotAChain);
    }
    if a.mul(a)? != *a {
        return Err(Error::NotIdempotent);
    }
    let family = cut_decompose(a)?;
    let n = a.n();
    let mut posets = Vec::new();
    for (k, c) in family.cuts().iter().enumerate() {
        if !c.is_partial_order() {
            return Err(Error::CutNotPartialOrder(k + 1));
        }
        posets.push(Poset::from_relation(c, crate::boolrel::full_mask(n))?);
    }
    let mut out = Vec::new();
    for f in poset_automorphisms(&posets[0])? {
        if posets[1..].iter().all(|p| p.is_automorphism(&f)) {
            let matrix = LatMatrix::permutation(lattice.clone(), &f)?.mul(a)?;
            out.push(ChainHClassMember {
                automorphism: f,
                matrix,
            });
        }
    }
    Ok(out)
}

/// A check that is either decided or inapplicable to the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Decided(bool),
    NotApplicable,
}

impl Check {
    pub fn decided(self) -> Option<bool> {
        match self {
            Check::Decided(b) => Some(b),
            Check::NotApplicable => None,
        }
    }
}

impl serde::Serialize for Check {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Check::Decided(b) => s.serialize_bool(*b),
            Check::NotApplicable => s.serialize_str("not-applicable"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Classification {
    pub n: usize,
    pub lattice_size: usize,
    pub distributive: bool,
    pub idempotent: Check,
    pub nilpotent: Check,
    pub permutation: bool,
    /// One-based images when the matrix is a permutation matrix.
    pub permutation_images: Option<Vec<usize>>,
    pub bounds: BoundIrreducibility,
}

/// Bundles the structural checks into one report; never fails.
pub fn classify(a: &LatMatrix) -> Classification {
    let l = a.lattice();
    let distributive = l.is_distributive();
    let guarded = |r: Result<bool>| match r {
        Ok(b) if distributive => Check::Decided(b),
        _ => Check::NotApplicable,
    };
    let perm = a.as_permutation();
    Classification {
        n: a.n(),
        lattice_size: l.size(),
        distributive,
        idempotent: guarded(is_idempotent_mat(a)),
        nilpotent: guarded(is_nilpotent(a)),
        permutation: perm.is_some(),
        permutation_images: perm.map(|p| p.to_one_based()),
        bounds: l.bound_irreducibility(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(m: usize) -> Arc<Lattice> {
        Arc::new(Lattice::chain(m).unwrap())
    }

    fn mat(l: &Arc<Lattice>, rows: &[&[&str]]) -> LatMatrix {
        LatMatrix::from_labels(l.clone(), rows).unwrap()
    }

    #[test]
    fn cut_examples() {
        let c3 = chain(3);
        let id = LatMatrix::identity(c3.clone(), 3).unwrap();
        for c in cut_decompose(&id).unwrap().cuts() {
            assert_eq!(*c, BoolRel::identity(3).unwrap());
        }
        let z = LatMatrix::zero(c3.clone(), 2).unwrap();
        assert!(cut_decompose(&z)
            .unwrap()
            .cuts()
            .iter()
            .all(|c| c.is_zero()));

        let a = mat(&c3, &[&["0", "x1"], &["x1", "1"]]);
        let f = cut_decompose(&a).unwrap();
        assert_eq!(f.cuts()[0], BoolRel::from_rows(&[[0, 1], [1, 1]]).unwrap());
        assert_eq!(f.cuts()[1], BoolRel::from_rows(&[[0, 0], [0, 1]]).unwrap());
        assert_eq!(reconstruct(&f).unwrap(), a);
        assert_eq!(f.cut(1).unwrap(), &f.cuts()[0]);
    }

    #[test]
    fn unrealizable_cuts() {
        let c3 = chain(3);
        // second cut not inside the first
        let f = CutFamily::from_parts(
            c3,
            vec![BoolRel::zero(2).unwrap(), BoolRel::identity(2).unwrap()],
        )
        .unwrap();
        assert_eq!(reconstruct(&f), Err(Error::CutsNotRealizable));
    }

    #[test]
    fn idempotence_examples() {
        let c3 = chain(3);
        assert!(is_idempotent_mat(&LatMatrix::identity(c3.clone(), 3).unwrap()).unwrap());
        assert!(is_idempotent_mat(&LatMatrix::constant(c3.clone(), 3, c3.top()).unwrap()).unwrap());
        assert!(!is_idempotent_mat(&mat(&c3, &[&["0", "x1"], &["0", "0"]])).unwrap());
        let m3 = Arc::new(Lattice::m3());
        assert_eq!(
            is_idempotent_mat(&LatMatrix::identity(m3, 2).unwrap()),
            Err(Error::NotDistributive)
        );
    }

    #[test]
    fn nested_examples() {
        let eq = BoolRel::identity(2).unwrap();
        let full = BoolRel::full(2).unwrap();
        let i = chain_idempotent_from_nested(&[eq.clone(), eq.clone()]).unwrap();
        assert!(i.is_identity());
        let a = chain_idempotent_from_nested(&[full.clone(), eq.clone()]).unwrap();
        assert_eq!(a.to_labels(), vec![vec!["1", "x1"], vec!["x1", "1"]]);
        assert!(is_idempotent_mat(&a).unwrap());
        let f = cut_decompose(&a).unwrap();
        assert_eq!(f.cuts(), &[full.clone(), eq.clone()]);
        assert_eq!(
            chain_idempotent_from_nested(&[eq.clone(), full]),
            Err(Error::NotNested(1))
        );
        let edge = BoolRel::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(
            chain_idempotent_from_nested(&[BoolRel::full(2).unwrap(), edge]),
            Err(Error::NotPseudoOrder(2))
        );
    }

    #[test]
    fn invert_examples() {
        let c3 = chain(3);
        let pi = Permutation::from_vec(vec![2, 0, 1]).unwrap();
        let p = LatMatrix::permutation(c3.clone(), &pi).unwrap();
        let inv = LatMatrix::permutation(c3.clone(), &pi.inverse()).unwrap();
        assert_eq!(invert(&p, InvertMode::Theorem).unwrap(), vec![inv]);
        assert!(
            invert(&mat(&c3, &[&["1", "1"], &["0", "1"]]), InvertMode::Theorem)
                .unwrap()
                .is_empty()
        );

        let sq = Arc::new(Lattice::two_by_two());
        let a = mat(&sq, &[&["a", "b"], &["b", "a"]]);
        assert_eq!(
            invert(&a, InvertMode::Theorem),
            Err(Error::IrreducibilityNotSatisfied)
        );
        let found = invert(&a, InvertMode::Exhaustive { budget: 1 << 20 }).unwrap();
        assert_eq!(found, vec![a.clone()]);

        assert!(matches!(
            invert(&a, InvertMode::Exhaustive { budget: 10 }),
            Err(Error::BudgetExceeded {
                needed: 256,
                budget: 10
            })
        ));
    }

    #[test]
    fn n5_right_inverses() {
        let n5 = Arc::new(Lattice::n5());
        let a = mat(&n5, &[&["c", "b"], &["b", "c"]]);
        let b = mat(&n5, &[&["a", "b"], &["b", "c"]]);
        let found = invert(&a, InvertMode::Exhaustive { budget: 1 << 20 }).unwrap();
        assert!(found.contains(&a));
        assert!(found.contains(&b));
    }

    #[test]
    fn nilpotency_examples() {
        let c2 = chain(2);
        for n in 2..=6 {
            let v = LatMatrix::strict_upper_ones(c2.clone(), n).unwrap();
            assert!(is_nilpotent(&v).unwrap());
            assert!(!v.power(n - 1).unwrap().is_zero());
        }
        assert!(!is_nilpotent(&LatMatrix::identity(c2.clone(), 3).unwrap()).unwrap());
        let l = Arc::new(Lattice::two_by_two_plus_one());
        let a = mat(&l, &[&["0", "a"], &["b", "0"]]);
        assert!(is_nilpotent(&a).unwrap());
        assert!(a.mul(&a).unwrap().is_zero());
        assert_eq!(triangularize(&a), Err(Error::BottomNotMeetIrreducible));
    }

    #[test]
    fn triangularize_examples() {
        let c3 = chain(3);
        let u = mat(
            &c3,
            &[&["0", "x1", "1"], &["0", "0", "1"], &["0", "0", "0"]],
        );
        assert!(triangularize(&u).unwrap().is_identity());
        let sigma = Permutation::from_vec(vec![1, 2, 0]).unwrap();
        let a = u.conjugate(&sigma).unwrap();
        let pi = triangularize(&a).unwrap();
        assert!(a.conjugate(&pi).unwrap().is_strictly_upper_triangular());
        assert_eq!(
            triangularize(&LatMatrix::identity(c3, 2).unwrap()),
            Err(Error::NotNilpotent)
        );
    }

    #[test]
    fn hclass_chain_examples() {
        let c3 = chain(3);
        let h = hclass_chain(&LatMatrix::identity(c3.clone(), 3).unwrap()).unwrap();
        assert_eq!(h.len(), 6);
        assert!(h.iter().all(|m| m.matrix.as_permutation().is_some()));

        let a = mat(&c3, &[&["1", "1"], &["0", "1"]]);
        assert_eq!(hclass_chain(&a).unwrap().len(), 1);

        let eq = BoolRel::identity(2).unwrap();
        let b = chain_idempotent_from_nested(&[eq.clone(), eq]).unwrap();
        let swap =
            LatMatrix::permutation(c3.clone(), &Permutation::transposition(2, 0, 1)).unwrap();
        let mats: Vec<_> = hclass_chain(&b)
            .unwrap()
            .into_iter()
            .map(|m| m.matrix)
            .collect();
        assert_eq!(mats, vec![b.clone(), swap.mul(&b).unwrap()]);

        assert_eq!(
            hclass_chain(&LatMatrix::constant(c3.clone(), 2, c3.top()).unwrap()),
            Err(Error::CutNotPartialOrder(1))
        );
        assert_eq!(
            hclass_chain(&mat(&c3, &[&["0", "1"], &["0", "0"]])),
            Err(Error::NotIdempotent)
        );
        let m3 = Arc::new(Lattice::m3());
        assert_eq!(
            hclass_chain(&LatMatrix::identity(m3, 2).unwrap()),
            Err(Error::NotAChain)
        );
    }

    #[test]
    fn classify_examples() {
        let c2 = chain(2);
        let r = classify(&LatMatrix::identity(c2.clone(), 3).unwrap());
        assert_eq!(
            (r.idempotent, r.nilpotent, r.permutation),
            (Check::Decided(true), Check::Decided(false), true)
        );
        let r = classify(&LatMatrix::strict_upper_ones(c2, 3).unwrap());
        assert_eq!(
            (r.idempotent, r.nilpotent, r.permutation),
            (Check::Decided(false), Check::Decided(true), false)
        );
        let m3 = Arc::new(Lattice::m3());
        let r = classify(&mat(&m3, &[&["a", "b"], &["0", "0"]]));
        assert_eq!(
            (r.idempotent, r.nilpotent, r.permutation),
            (Check::NotApplicable, Check::NotApplicable, false)
        );
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["idempotent"], "not-applicable");
    }
}
