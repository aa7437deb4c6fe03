//! Finite bounded lattices.
//!
//! A [`Lattice`] stores its order, join and meet as dense tables indexed by
//! element id. Ids are positions in the label list; labels only matter for
//! input and output.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Element id inside a [`Lattice`].
pub type Elem = usize;

/// A finite bounded lattice with precomputed operation tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    names: Vec<String>,
    leq: Vec<bool>,
    join: Vec<Elem>,
    meet: Vec<Elem>,
    bottom: Elem,
    top: Elem,
}

/// Irreducibility of the two bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct BoundIrreducibility {
    /// `a·b = 0` implies `a = 0` or `b = 0`.
    pub bottom_meet_irreducible: bool,
    /// `a+b = 1` implies `a = 1` or `b = 1`.
    pub top_join_irreducible: bool,
}

impl BoundIrreducibility {
    pub fn either(&self) -> bool {
        self.bottom_meet_irreducible || self.top_join_irreducible
    }
}

fn check_names(names: &[String]) -> Result<()> {
    if names.len() < 2 {
        return Err(Error::TooFewElements);
    }
    let mut seen = HashMap::new();
    for n in names {
        if seen.insert(n.as_str(), ()).is_some() {
            return Err(Error::DuplicateElement(n.clone()));
        }
    }
    Ok(())
}

impl Lattice {
    /// Builds a lattice from a list of cover pairs `(lower, upper)`.
    ///
    /// The order is the reflexive-transitive closure of the pairs; the pairs
    /// need not be exact covers.
    pub fn from_covers<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        covers: &[(Elem, Elem)],
    ) -> Result<Lattice> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        check_names(&names)?;
        let m = names.len();
        let mut leq = vec![false; m * m];
        for a in 0..m {
            leq[a * m + a] = true;
        }
        for &(lo, hi) in covers {
            if lo >= m {
                return Err(Error::InvalidElement(lo));
            }
            if hi >= m {
                return Err(Error::InvalidElement(hi));
            }
            leq[lo * m + hi] = true;
        }
        for k in 0..m {
            for i in 0..m {
                if leq[i * m + k] {
                    for j in 0..m {
                        if leq[k * m + j] {
                            leq[i * m + j] = true;
                        }
                    }
                }
            }
        }
        for a in 0..m {
            for b in (a + 1)..m {
                if leq[a * m + b] && leq[b * m + a] {
                    return Err(Error::NotAPartialOrder(format!(
                        "{} and {} lie on a cycle",
                        names[a], names[b]
                    )));
                }
            }
        }

        let bottom = (0..m).find(|&a| (0..m).all(|b| leq[a * m + b]));
        let top = (0..m).find(|&a| (0..m).all(|b| leq[b * m + a]));
        let (bottom, top) = match (bottom, top) {
            (Some(b), Some(t)) => (b, t),
            _ => return Err(Error::Unbounded),
        };

        let mut join = vec![0; m * m];
        let mut meet = vec![0; m * m];
        for a in 0..m {
            for b in 0..m {
                let upper: Vec<Elem> = (0..m)
                    .filter(|&u| leq[a * m + u] && leq[b * m + u])
                    .collect();
                let lub = upper
                    .iter()
                    .copied()
                    .find(|&u| upper.iter().all(|&v| leq[u * m + v]));
                let lower: Vec<Elem> = (0..m)
                    .filter(|&l| leq[l * m + a] && leq[l * m + b])
                    .collect();
                let glb = lower
                    .iter()
                    .copied()
                    .find(|&l| lower.iter().all(|&v| leq[v * m + l]));
                match (lub, glb) {
                    (Some(j), Some(mt)) => {
                        join[a * m + b] = j;
                        meet[a * m + b] = mt;
                    }
                    (None, _) => {
                        return Err(Error::NotALattice {
                            a: names[a].clone(),
                            b: names[b].clone(),
                            bound: "least upper bound",
                        })
                    }
                    (_, None) => {
                        return Err(Error::NotALattice {
                            a: names[a].clone(),
                            b: names[b].clone(),
                            bound: "greatest lower bound",
                        })
                    }
                }
            }
        }
        Ok(Lattice {
            names,
            leq,
            join,
            meet,
            bottom,
            top,
        })
    }

    /// Builds a lattice from explicit join and meet tables, validating the
    /// lattice axioms exhaustively.
    pub fn from_tables<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        join: Vec<Vec<Elem>>,
        meet: Vec<Vec<Elem>>,
    ) -> Result<Lattice> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        check_names(&names)?;
        let m = names.len();
        let flatten = |t: Vec<Vec<Elem>>, what: &str| -> Result<Vec<Elem>> {
            if t.len() != m || t.iter().any(|r| r.len() != m) {
                return Err(Error::InconsistentTables(format!(
                    "{what} table is not {m}x{m}"
                )));
            }
            let flat: Vec<Elem> = t.into_iter().flatten().collect();
            if let Some(&bad) = flat.iter().find(|&&e| e >= m) {
                return Err(Error::InvalidElement(bad));
            }
            Ok(flat)
        };
        let join = flatten(join, "join")?;
        let meet = flatten(meet, "meet")?;
        let j = |a: Elem, b: Elem| join[a * m + b];
        let mt = |a: Elem, b: Elem| meet[a * m + b];
        let fail = |law: &str, a: Elem, b: Elem| {
            Err(Error::InconsistentTables(format!(
                "{law} fails at ({}, {})",
                names[a], names[b]
            )))
        };
        for a in 0..m {
            if j(a, a) != a || mt(a, a) != a {
                return fail("idempotence", a, a);
            }
            for b in 0..m {
                if j(a, b) != j(b, a) || mt(a, b) != mt(b, a) {
                    return fail("commutativity", a, b);
                }
                if mt(a, j(a, b)) != a || j(a, mt(a, b)) != a {
                    return fail("absorption", a, b);
                }
                for c in 0..m {
                    if j(j(a, b), c) != j(a, j(b, c)) || mt(mt(a, b), c) != mt(a, mt(b, c)) {
                        return fail("associativity", a, b);
                    }
                }
            }
        }
        let leq: Vec<bool> = (0..m * m).map(|i| meet[i] == i / m).collect();
        let bottom = (0..m).fold(0, mt);
        let top = (0..m).fold(0, j);
        Ok(Lattice {
            names,
            leq,
            join,
            meet,
            bottom,
            top,
        })
    }

    /// The `m`-element chain `0 < x1 < ... < x(m-2) < 1`, ids in rank order.
    pub fn chain(m: usize) -> Result<Lattice> {
        if m < 2 {
            return Err(Error::TooFewElements);
        }
        let names = (0..m).map(|i| {
            if i == 0 {
                "0".to_string()
            } else if i == m - 1 {
                "1".to_string()
            } else {
                format!("x{i}")
            }
        });
        let covers: Vec<_> = (1..m).map(|i| (i - 1, i)).collect();
        Lattice::from_covers(names, &covers)
    }

    /// The two-element lattice.
    pub fn boolean() -> Lattice {
        Lattice::chain(2).expect("two-element chain")
    }

    /// `M3`: three atoms `a, b, c` between `0` and `1`.
    pub fn m3() -> Lattice {
        Lattice::from_covers(
            ["0", "a", "b", "c", "1"],
            &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)],
        )
        .expect("M3")
    }

    /// `N5`: the pentagon `0 < a < c < 1`, `0 < b < 1`.
    pub fn n5() -> Lattice {
        Lattice::from_covers(
            ["0", "a", "b", "c", "1"],
            &[(0, 1), (1, 3), (3, 4), (0, 2), (2, 4)],
        )
        .expect("N5")
    }

    /// The four-element Boolean lattice `2×2` with atoms `a, b`.
    pub fn two_by_two() -> Lattice {
        Lattice::from_covers(["0", "a", "b", "1"], &[(0, 1), (0, 2), (1, 3), (2, 3)]).expect("2x2")
    }

    /// `2×2` with a new top adjoined; the old top is labelled `u`.
    pub fn two_by_two_plus_one() -> Lattice {
        Lattice::from_covers(
            ["0", "a", "b", "u", "1"],
            &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)],
        )
        .expect("2x2+1")
    }

    /// Resolves a built-in lattice name: `chain:<m>`, `M3`, `N5`, `2x2`,
    /// `2x2+1` or `bool`.
    pub fn builtin(name: &str) -> Option<Lattice> {
        match name {
            "M3" => Some(Lattice::m3()),
            "N5" => Some(Lattice::n5()),
            "2x2" => Some(Lattice::two_by_two()),
            "2x2+1" => Some(Lattice::two_by_two_plus_one()),
            "bool" => Some(Lattice::boolean()),
            _ => {
                let m: usize = name.strip_prefix("chain:")?.parse().ok()?;
                Lattice::chain(m).ok()
            }
        }
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.size()
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a * self.size() + b]
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a * self.size() + b]
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a * self.size() + b]
    }

    pub fn name(&self, a: Elem) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Looks an element up by label.
    pub fn element(&self, name: &str) -> Option<Elem> {
        self.names.iter().position(|n| n == name)
    }

    /// Like [`Lattice::element`] but reports the label on failure.
    pub fn parse_element(&self, name: &str) -> Result<Elem> {
        self.element(name)
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn contains(&self, a: Elem) -> bool {
        a < self.size()
    }

    /// Checks `a·(b+c) = a·b + a·c` for every triple.
    pub fn is_distributive(&self) -> bool {
        let m = self.size();
        (0..m).all(|a| {
            (0..m).all(|b| {
                (0..m).all(|c| {
                    self.meet(a, self.join(b, c)) == self.join(self.meet(a, b), self.meet(a, c))
                })
            })
        })
    }

    pub fn is_chain(&self) -> bool {
        let m = self.size();
        (0..m).all(|a| (0..m).all(|b| self.leq(a, b) || self.leq(b, a)))
    }

    pub fn bound_irreducibility(&self) -> BoundIrreducibility {
        let m = self.size();
        let (bot, top) = (self.bottom, self.top);
        let mut out = BoundIrreducibility {
            bottom_meet_irreducible: true,
            top_join_irreducible: true,
        };
        for a in 0..m {
            for b in 0..m {
                if self.meet(a, b) == bot && a != bot && b != bot {
                    out.bottom_meet_irreducible = false;
                }
                if self.join(a, b) == top && a != top && b != top {
                    out.top_join_irreducible = false;
                }
            }
        }
        out
    }

    /// Elements covered by `a`.
    pub fn lower_covers(&self, a: Elem) -> Vec<Elem> {
        let below: Vec<Elem> = self
            .elements()
            .filter(|&b| b != a && self.leq(b, a))
            .collect();
        below
            .iter()
            .copied()
            .filter(|&b| !below.iter().any(|&c| c != b && self.leq(b, c)))
            .collect()
    }

    /// Cover pairs `(lower, upper)` of the Hasse diagram.
    pub fn covers(&self) -> Vec<(Elem, Elem)> {
        self.elements()
            .flat_map(|a| self.lower_covers(a).into_iter().map(move |b| (b, a)))
            .collect()
    }

    /// Elements with exactly one lower cover.
    pub fn join_irreducibles(&self) -> Vec<Elem> {
        self.elements()
            .filter(|&a| self.lower_covers(a).len() == 1)
            .collect()
    }

    /// The set embedding of a distributive lattice into the subsets of its
    /// join-irreducibles.
    pub fn birkhoff_cuts(&self) -> Result<CutIndex> {
        if !self.is_distributive() {
            return Err(Error::NotDistributive);
        }
        let omega = self.join_irreducibles();
        if omega.len() > 64 {
            return Err(Error::SizeLimit {
                what: "join-irreducible set",
                size: omega.len(),
                limit: 64,
            });
        }
        let embed: Vec<u64> = self
            .elements()
            .map(|a| {
                omega
                    .iter()
                    .enumerate()
                    .filter(|&(_, &w)| self.leq(w, a))
                    .fold(0u64, |mask, (k, _)| mask | (1 << k))
            })
            .collect();
        let by_mask = embed.iter().enumerate().map(|(a, &s)| (s, a)).collect();
        Ok(CutIndex {
            omega,
            embed,
            by_mask,
        })
    }

    /// Smallest subset containing `seed` that is closed under join and meet.
    pub fn generated_sublattice(&self, seed: &[Elem]) -> Vec<Elem> {
        let mut inside = vec![false; self.size()];
        let mut members: Vec<Elem> = Vec::new();
        for &s in seed {
            if !inside[s] {
                inside[s] = true;
                members.push(s);
            }
        }
        loop {
            let mut fresh = Vec::new();
            for (i, &a) in members.iter().enumerate() {
                for &b in &members[i + 1..] {
                    for c in [self.join(a, b), self.meet(a, b)] {
                        if !inside[c] {
                            inside[c] = true;
                            fresh.push(c);
                        }
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            members.extend(fresh);
        }
        members.sort_unstable();
        members
    }
}

/// Join-irreducibles `Ω` of a distributive lattice together with the
/// embedding `a ↦ {ω ∈ Ω : ω ≤ a}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutIndex {
    omega: Vec<Elem>,
    /// Bit `k` of `embed[a]` is set iff `omega[k] ≤ a`.
    embed: Vec<u64>,
    by_mask: HashMap<u64, Elem>,
}

impl CutIndex {
    pub fn omega(&self) -> &[Elem] {
        &self.omega
    }

    /// Embedded image of `a` as a bitmask over positions in [`CutIndex::omega`].
    pub fn embed(&self, a: Elem) -> u64 {
        self.embed[a]
    }

    /// The embedded image of `a` as a list of join-irreducibles.
    pub fn embed_set(&self, a: Elem) -> Vec<Elem> {
        self.omega
            .iter()
            .enumerate()
            .filter(|&(k, _)| self.embed[a] >> k & 1 == 1)
            .map(|(_, &w)| w)
            .collect()
    }

    /// Position of `omega` in the index.
    pub fn position(&self, omega: Elem) -> Result<usize> {
        self.omega
            .iter()
            .position(|&w| w == omega)
            .ok_or(Error::UnknownOmega(omega))
    }

    /// The cut of `a` at the join-irreducible `omega`.
    pub fn cut(&self, omega: Elem, a: Elem) -> Result<bool> {
        let k = self.position(omega)?;
        Ok(self.cut_at(k, a))
    }

    /// The cut of `a` at position `k` of [`CutIndex::omega`].
    #[inline]
    pub fn cut_at(&self, k: usize, a: Elem) -> bool {
        self.embed[a] >> k & 1 == 1
    }

    /// The element whose embedded image is `mask`, if any.
    pub fn element_of(&self, mask: u64) -> Option<Elem> {
        self.by_mask.get(&mask).copied()
    }
}
