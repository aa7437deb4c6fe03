//! Fixed points of `x·A = x` for row vectors over a distributive lattice.
//!
//! Starting from the all-top vector `𝟙`, the sequence `𝟙, 𝟙A, 𝟙A², …`
//! decreases and becomes constant; its limit is the greatest solution.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::distmat::{is_nilpotent, triangularize};
use crate::error::{Error, Result};
use crate::lattice::{Elem, Lattice};
use crate::matrix::LatMatrix;
use crate::permutation::Permutation;

pub const DEFAULT_SOLVE_BUDGET: u128 = 1_000_000;
pub const DEFAULT_ORBIT_BUDGET: usize = 1_000_000;
/// Largest `n` for the brute-force permutation search in [`equivalence_report`].
pub const PERMUTATION_SEARCH_MAX_N: usize = 8;

/// A vector in `Lⁿ`, read as a fuzzy subset of the vertex set.
#[derive(Clone, PartialEq, Eq)]
pub struct LatVector {
    lattice: Arc<Lattice>,
    entries: Vec<Elem>,
}

impl Hash for LatVector {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.entries.hash(state);
    }
}

impl fmt::Debug for LatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatVector{:?}", self.to_labels())
    }
}

impl fmt::Display for LatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_labels().join(", "))
    }
}

impl serde::Serialize for LatVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_labels().serialize(s)
    }
}

impl LatVector {
    pub fn new(lattice: Arc<Lattice>, entries: Vec<Elem>) -> Result<LatVector> {
        if entries.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        if let Some(&e) = entries.iter().find(|&&e| !lattice.contains(e)) {
            return Err(Error::InvalidElement(e));
        }
        Ok(LatVector { lattice, entries })
    }

    pub fn from_labels<S: AsRef<str>>(lattice: Arc<Lattice>, labels: &[S]) -> Result<LatVector> {
        let entries = labels
            .iter()
            .map(|s| lattice.parse_element(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        LatVector::new(lattice, entries)
    }

    /// `𝟙`.
    pub fn ones(lattice: Arc<Lattice>, n: usize) -> Result<LatVector> {
        let t = lattice.top();
        LatVector::new(lattice, vec![t; n])
    }

    /// `𝟎`.
    pub fn zeros(lattice: Arc<Lattice>, n: usize) -> Result<LatVector> {
        let b = lattice.bottom();
        LatVector::new(lattice, vec![b; n])
    }

    /// Every vector of `Lⁿ`, entry 0 varying fastest.
    pub fn all(lattice: Arc<Lattice>, n: usize) -> impl Iterator<Item = LatVector> {
        let m = lattice.size();
        let total = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        (0..total).map(move |mut idx| {
            let entries = (0..n)
                .map(|_| {
                    let e = (idx % m as u128) as Elem;
                    idx /= m as u128;
                    e
                })
                .collect();
            LatVector {
                lattice: lattice.clone(),
                entries,
            }
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> Elem {
        self.entries[i]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == self.lattice.bottom())
    }

    /// Entrywise order.
    pub fn leq(&self, other: &LatVector) -> bool {
        self.len() == other.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(&a, &b)| self.lattice.leq(a, b))
    }

    pub fn to_labels(&self) -> Vec<String> {
        self.entries
            .iter()
            .map(|&e| self.lattice.name(e).to_string())
            .collect()
    }
}

fn check_shapes(x: &LatVector, a: &LatMatrix) -> Result<()> {
    if x.len() != a.n() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: a.n(),
        });
    }
    if !Arc::ptr_eq(&x.lattice, a.lattice()) && *x.lattice != **a.lattice() {
        return Err(Error::LatticeMismatch);
    }
    Ok(())
}

/// `(xA)_j = Σ_i x_i·a_ij`.
pub fn vec_mat_mul(x: &LatVector, a: &LatMatrix) -> Result<LatVector> {
    check_shapes(x, a)?;
    let l = a.lattice();
    let entries = (0..a.n())
        .map(|j| {
            (0..a.n()).fold(l.bottom(), |acc, i| {
                l.join(acc, l.meet(x.get(i), a.get(i, j)))
            })
        })
        .collect();
    Ok(LatVector {
        lattice: x.lattice.clone(),
        entries,
    })
}

/// The column form `(Ax)_i = Σ_j a_ij·x_j`, i.e. `x·Aᵀ`.
pub fn mat_vec_mul(a: &LatMatrix, x: &LatVector) -> Result<LatVector> {
    vec_mat_mul(x, &a.transpose())
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct GreatestFixpoint {
    /// The limit of `𝟙Aᵏ`.
    pub limit: LatVector,
    /// Smallest `ℓ` with `𝟙A^ℓ = 𝟙A^(ℓ+1)`.
    pub steps: usize,
    /// `𝟙, 𝟙A, …, 𝟙A^ℓ`.
    pub trajectory: Vec<LatVector>,
}

/// Iterates `x₀ = 𝟙`, `x_{k+1} = x_k·A` until the sequence stops moving.
pub fn greatest_fixpoint(a: &LatMatrix) -> Result<GreatestFixpoint> {
    let l = a.lattice();
    if !l.is_distributive() {
        return Err(Error::NotDistributive);
    }
    let cap = 2 * l.size() * a.n();
    let mut x = LatVector::ones(l.clone(), a.n())?;
    let mut trajectory = vec![x.clone()];
    for steps in 0..=cap {
        let next = vec_mat_mul(&x, a)?;
        if next == x {
            return Ok(GreatestFixpoint {
                limit: x,
                steps,
                trajectory,
            });
        }
        if !next.leq(&x) {
            return Err(Error::Internal(format!(
                "iteration increased at step {}",
                steps + 1
            )));
        }
        x = next;
        trajectory.push(x.clone());
    }
    Err(Error::Internal(format!(
        "no stabilisation within {cap} steps"
    )))
}

/// Column-vector counterpart: the greatest `x` with `A·x = x`.
pub fn greatest_column_fixpoint(a: &LatMatrix) -> Result<GreatestFixpoint> {
    greatest_fixpoint(&a.transpose())
}

/// Eventual behaviour of `x, xA, xA², …` from an arbitrary start.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Orbit {
    /// Index of the first state on the cycle.
    pub preperiod: usize,
    pub period: usize,
    /// States up to and including one full cycle.
    pub states: Vec<LatVector>,
}

impl Orbit {
    /// The limit when the orbit becomes constant.
    pub fn limit(&self) -> Option<&LatVector> {
        (self.period == 1).then(|| &self.states[self.preperiod])
    }
}

pub fn orbit(start: &LatVector, a: &LatMatrix, budget: usize) -> Result<Orbit> {
    check_shapes(start, a)?;
    let mut seen: HashMap<LatVector, usize> = HashMap::new();
    let mut states = Vec::new();
    let mut x = start.clone();
    loop {
        if let Some(&first) = seen.get(&x) {
            return Ok(Orbit {
                preperiod: first,
                period: states.len() - first,
                states,
            });
        }
        if states.len() >= budget {
            return Err(Error::BudgetExceeded {
                needed: states.len() as u128 + 1,
                budget: budget as u128,
            });
        }
        seen.insert(x.clone(), states.len());
        states.push(x.clone());
        x = vec_mat_mul(&x, a)?;
    }
}

/// Whether `x·A = x` has a solution other than `𝟎`; cross-checked against
/// nilpotency.
pub fn has_nonzero_fixpoint(a: &LatMatrix) -> Result<bool> {
    let nonzero = !greatest_fixpoint(a)?.limit.is_zero();
    let nilpotent = is_nilpotent(a)?;
    if nonzero == nilpotent {
        return Err(Error::Internal(format!(
            "nonzero fixpoint ({nonzero}) and nilpotency ({nilpotent}) are not complementary"
        )));
    }
    Ok(nonzero)
}

/// Every solution of `x·A = x` by scanning `Lⁿ`.
pub fn solve_all_fixpoints(a: &LatMatrix, budget: u128) -> Result<Vec<LatVector>> {
    let l = a.lattice();
    let needed = (l.size() as u128)
        .checked_pow(a.n() as u32)
        .unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let mut out = Vec::new();
    for x in LatVector::all(l.clone(), a.n()) {
        if vec_mat_mul(&x, a)? == x {
            out.push(x);
        }
    }
    Ok(out)
}

/// Six conditions that coincide when the bottom is meet-irreducible.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct EquivalenceReport {
    /// `𝟎` is the only solution of `x·A = x`.
    pub only_zero_fixpoint: bool,
    /// The limit of `𝟙Aᵏ` is `𝟎`.
    pub limit_is_zero: bool,
    pub nilpotent: bool,
    /// `Aⁿ = 𝟘`.
    pub power_n_is_zero: bool,
    /// The topological-sort construction succeeds.
    pub triangularizable: bool,
    /// Some `π` makes `P_π⁻¹·A·P_π` strictly upper triangular.
    pub conjugate_exists: bool,
    pub verdict: bool,
    pub limit: LatVector,
    pub triangularizing_permutation: Option<Permutation>,
    pub searched_permutation: Option<Permutation>,
}

pub fn equivalence_report(a: &LatMatrix, budget: u128) -> Result<EquivalenceReport> {
    let l = a.lattice();
    if !l.bound_irreducibility().bottom_meet_irreducible {
        return Err(Error::BottomNotMeetIrreducible);
    }
    let n = a.n();
    if n > PERMUTATION_SEARCH_MAX_N {
        return Err(Error::SizeLimit {
            what: "permutation search dimension",
            size: n,
            limit: PERMUTATION_SEARCH_MAX_N,
        });
    }
    let solutions = solve_all_fixpoints(a, budget)?;
    let gfp = greatest_fixpoint(a)?;
    let nilpotent = is_nilpotent(a)?;
    let tri = match triangularize(a) {
        Ok(pi) => Some(pi),
        Err(Error::NotNilpotent) => None,
        Err(e) => return Err(e),
    };
    let searched = Permutation::all(n).find(|pi| {
        a.conjugate(&pi.inverse())
            .is_ok_and(|c| c.is_strictly_upper_triangular())
    });
    let report = EquivalenceReport {
        only_zero_fixpoint: solutions.iter().all(|x| x.is_zero()),
        limit_is_zero: gfp.limit.is_zero(),
        nilpotent,
        power_n_is_zero: a.power_unchecked(n).is_zero(),
        triangularizable: tri.is_some(),
        conjugate_exists: searched.is_some(),
        verdict: nilpotent,
        limit: gfp.limit,
        triangularizing_permutation: tri,
        searched_permutation: searched,
    };
    let all = [
        report.only_zero_fixpoint,
        report.limit_is_zero,
        report.nilpotent,
        report.power_n_is_zero,
        report.triangularizable,
        report.conjugate_exists,
    ];
    if all.iter().any(|&b| b != nilpotent) {
        return Err(Error::Internal(format!(
            "equivalent conditions disagree: {all:?}"
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(m: usize) -> Arc<Lattice> {
        Arc::new(Lattice::chain(m).unwrap())
    }

    fn vec_of(l: &Arc<Lattice>, labels: &[&str]) -> LatVector {
        LatVector::from_labels(l.clone(), labels).unwrap()
    }

    #[test]
    fn products() {
        let c2 = chain(2);
        let one = LatVector::ones(c2.clone(), 3).unwrap();
        let id = LatMatrix::identity(c2.clone(), 3).unwrap();
        assert_eq!(vec_mat_mul(&one, &id).unwrap(), one);
        let v = LatMatrix::strict_upper_ones(c2.clone(), 3).unwrap();
        let zero = LatVector::zeros(c2.clone(), 3).unwrap();
        assert_eq!(vec_mat_mul(&zero, &v).unwrap(), zero);
        assert_eq!(
            vec_mat_mul(&one, &v).unwrap(),
            vec_of(&c2, &["0", "1", "1"])
        );
        assert_eq!(
            mat_vec_mul(&v, &one).unwrap(),
            vec_of(&c2, &["1", "1", "0"])
        );
        let short = LatVector::ones(c2, 2).unwrap();
        assert!(matches!(
            vec_mat_mul(&short, &v),
            Err(Error::DimensionMismatch { .. })
        ));
        let other = LatVector::ones(chain(3), 3).unwrap();
        assert_eq!(vec_mat_mul(&other, &v), Err(Error::LatticeMismatch));
    }

    #[test]
    fn greatest_fixpoint_examples() {
        let c2 = chain(2);
        let g = greatest_fixpoint(&LatMatrix::identity(c2.clone(), 3).unwrap()).unwrap();
        assert_eq!(g.steps, 0);
        assert_eq!(g.limit, LatVector::ones(c2.clone(), 3).unwrap());

        let v = LatMatrix::strict_upper_ones(c2.clone(), 3).unwrap();
        let g = greatest_fixpoint(&v).unwrap();
        assert!(g.limit.is_zero());
        assert_eq!(g.steps, 3);
        let labels: Vec<_> = g.trajectory[1..].iter().map(|x| x.to_labels()).collect();
        assert_eq!(
            labels,
            vec![
                vec!["0", "1", "1"],
                vec!["0", "0", "1"],
                vec!["0", "0", "0"]
            ]
        );

        let a = LatMatrix::from_labels(c2.clone(), &[["1", "0"], ["0", "0"]]).unwrap();
        let g = greatest_fixpoint(&a).unwrap();
        assert_eq!(g.limit, vec_of(&c2, &["1", "0"]));
        assert_eq!(g.steps, 1);

        let m3 = Arc::new(Lattice::m3());
        assert_eq!(
            greatest_fixpoint(&LatMatrix::identity(m3, 2).unwrap()),
            Err(Error::NotDistributive)
        );
    }

    #[test]
    fn column_form() {
        let c2 = chain(2);
        // vertex 1 reaches the loop at vertex 2
        let a = LatMatrix::from_labels(c2.clone(), &[["0", "1"], ["0", "1"]]).unwrap();
        let g = greatest_column_fixpoint(&a).unwrap();
        assert_eq!(g.limit, vec_of(&c2, &["1", "1"]));
        assert_eq!(mat_vec_mul(&a, &g.limit).unwrap(), g.limit);
    }

    #[test]
    fn nonzero_fixpoint_examples() {
        let c2 = chain(2);
        assert!(
            !has_nonzero_fixpoint(&LatMatrix::strict_upper_ones(c2.clone(), 4).unwrap()).unwrap()
        );
        assert!(has_nonzero_fixpoint(&LatMatrix::identity(c2.clone(), 4).unwrap()).unwrap());
        let p = LatMatrix::permutation(chain(3), &Permutation::from_vec(vec![1, 2, 0]).unwrap())
            .unwrap();
        assert!(has_nonzero_fixpoint(&p).unwrap());
        assert!(greatest_fixpoint(&p)
            .unwrap()
            .limit
            .entries()
            .iter()
            .all(|&e| e == 2));
    }

    #[test]
    fn solve_all_examples() {
        let c3 = chain(3);
        let z = LatMatrix::zero(c3.clone(), 2).unwrap();
        assert_eq!(
            solve_all_fixpoints(&z, 1000).unwrap(),
            vec![LatVector::zeros(c3.clone(), 2).unwrap()]
        );
        let id = LatMatrix::identity(c3.clone(), 2).unwrap();
        assert_eq!(solve_all_fixpoints(&id, 1000).unwrap().len(), 9);
        let v = LatMatrix::strict_upper_ones(chain(2), 2).unwrap();
        let sols = solve_all_fixpoints(&v, 1000).unwrap();
        assert_eq!(sols.len(), 1);
        assert!(sols[0].is_zero());
        assert!(matches!(
            solve_all_fixpoints(&id, 8),
            Err(Error::BudgetExceeded {
                needed: 9,
                budget: 8
            })
        ));
    }

    #[test]
    fn orbit_of_rotation() {
        let c2 = chain(2);
        let p = LatMatrix::permutation(c2.clone(), &Permutation::from_vec(vec![1, 2, 0]).unwrap())
            .unwrap();
        let o = orbit(&vec_of(&c2, &["1", "0", "0"]), &p, 100).unwrap();
        assert_eq!((o.preperiod, o.period), (0, 3));
        assert!(o.limit().is_none());
        let v = LatMatrix::strict_upper_ones(c2.clone(), 3).unwrap();
        let o = orbit(&LatVector::ones(c2, 3).unwrap(), &v, 100).unwrap();
        assert_eq!((o.preperiod, o.period), (3, 1));
        assert!(o.limit().unwrap().is_zero());
    }

    #[test]
    fn equivalence_examples() {
        let c2 = chain(2);
        let r = equivalence_report(
            &LatMatrix::strict_upper_ones(c2.clone(), 3).unwrap(),
            DEFAULT_SOLVE_BUDGET,
        )
        .unwrap();
        assert!(r.verdict && r.only_zero_fixpoint && r.conjugate_exists);
        assert!(r.triangularizing_permutation.unwrap().is_identity());
        let r =
            equivalence_report(&LatMatrix::identity(c2, 3).unwrap(), DEFAULT_SOLVE_BUDGET).unwrap();
        assert!(!r.verdict && !r.only_zero_fixpoint && !r.triangularizable);
        let l = Arc::new(Lattice::two_by_two_plus_one());
        assert_eq!(
            equivalence_report(&LatMatrix::zero(l, 2).unwrap(), DEFAULT_SOLVE_BUDGET),
            Err(Error::BottomNotMeetIrreducible)
        );
    }
}
