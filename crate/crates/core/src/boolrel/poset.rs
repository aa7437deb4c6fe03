use rand::Rng;

use super::{members, BoolRel, VertexSet};
use crate::error::{Error, Result};
use crate::permutation::Permutation;

/// Default bound on the carrier size for automorphism enumeration.
pub const DEFAULT_AUTOMORPHISM_CAP: usize = 10;

/// A finite partial order. Elements are local indices `0..size`; `labels`
/// records the vertex of `X` each index stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<usize>,
    leq: Vec<bool>,
}

impl Poset {
    /// Validates reflexivity, antisymmetry and transitivity.
    pub fn new(labels: Vec<usize>, leq: Vec<bool>) -> Result<Poset> {
        let k = labels.len();
        if leq.len() != k * k {
            return Err(Error::DimensionMismatch {
                left: k * k,
                right: leq.len(),
            });
        }
        let p = Poset { labels, leq };
        for x in 0..k {
            if !p.leq(x, x) {
                return Err(Error::NotAPartialOrder(format!("{x} is not below itself")));
            }
            for y in 0..k {
                if x != y && p.leq(x, y) && p.leq(y, x) {
                    return Err(Error::NotAPartialOrder(format!("{x} and {y} form a cycle")));
                }
                if p.leq(x, y) && (0..k).any(|z| p.leq(y, z) && !p.leq(x, z)) {
                    return Err(Error::NotAPartialOrder(format!(
                        "not transitive at {x}, {y}"
                    )));
                }
            }
        }
        Ok(p)
    }

    pub fn from_fn(labels: Vec<usize>, mut leq: impl FnMut(usize, usize) -> bool) -> Result<Poset> {
        let k = labels.len();
        let table = (0..k * k).map(|i| leq(i / k, i % k)).collect();
        Poset::new(labels, table)
    }

    /// `(carrier; rel ∩ carrier²)`.
    pub fn from_relation(rel: &BoolRel, carrier: VertexSet) -> Result<Poset> {
        let labels: Vec<usize> = members(carrier).collect();
        let l = labels.clone();
        Poset::from_fn(labels, |i, j| rel.get(l[i], l[j]))
    }

    pub fn chain(k: usize) -> Poset {
        Poset::from_fn((0..k).collect(), |i, j| i <= j).expect("a chain")
    }

    pub fn antichain(k: usize) -> Poset {
        Poset::from_fn((0..k).collect(), |i, j| i == j).expect("an antichain")
    }

    /// Side-by-side union; the labels of `other` are shifted past ours.
    pub fn disjoint_union(&self, other: &Poset) -> Poset {
        let (a, b) = (self.size(), other.size());
        let shift = self.labels.iter().max().map_or(0, |m| m + 1);
        let labels = self
            .labels
            .iter()
            .copied()
            .chain(other.labels.iter().map(|l| l + shift))
            .collect();
        Poset::from_fn(labels, |i, j| match (i < a, j < a) {
            (true, true) => self.leq(i, j),
            (false, false) => other.leq(i - a, j - a),
            _ => false,
        })
        .inspect(|p| {
            debug_assert_eq!(p.size(), a + b);
        })
        .expect("union of posets")
    }

    /// Random poset: a random strict order compatible with `0 < 1 < ... < k-1`,
    /// transitively closed, then relabelled by a random permutation.
    pub fn random<R: Rng + ?Sized>(k: usize, density: f64, rng: &mut R) -> Poset {
        let mut leq = vec![false; k * k];
        for i in 0..k {
            leq[i * k + i] = true;
            for j in i + 1..k {
                leq[i * k + j] = rng.gen_bool(density);
            }
        }
        for m in 0..k {
            for i in 0..k {
                for j in 0..k {
                    if leq[i * k + m] && leq[m * k + j] {
                        leq[i * k + j] = true;
                    }
                }
            }
        }
        let mut perm: Vec<usize> = (0..k).collect();
        for i in (1..k).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let base = Poset::new((0..k).collect(), leq).expect("closed order");
        base.relabel(&Permutation::from_vec(perm).expect("shuffle"))
    }

    /// The isomorphic copy in which old element `i` becomes `pi(i)`.
    pub fn relabel(&self, pi: &Permutation) -> Poset {
        let inv = pi.inverse();
        Poset {
            labels: (0..self.size())
                .map(|i| self.labels[inv.apply(i)])
                .collect(),
            leq: (0..self.size() * self.size())
                .map(|t| {
                    let (i, j) = (t / self.size(), t % self.size());
                    self.leq(inv.apply(i), inv.apply(j))
                })
                .collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.size() + j]
    }

    pub fn is_chain(&self) -> bool {
        let k = self.size();
        (0..k).all(|i| (0..k).all(|j| self.leq(i, j) || self.leq(j, i)))
    }

    pub fn is_antichain(&self) -> bool {
        let k = self.size();
        (0..k).all(|i| (0..k).all(|j| i == j || !self.leq(i, j)))
    }

    /// Whether `f` (on local indices) preserves and reflects the order.
    pub fn is_automorphism(&self, f: &Permutation) -> bool {
        let k = self.size();
        f.len() == k
            && (0..k).all(|i| (0..k).all(|j| self.leq(i, j) == self.leq(f.apply(i), f.apply(j))))
    }

    /// `(#strictly below, #strictly above, height)` per element, where the
    /// height is the number of elements in a longest chain ending there.
    fn signatures(&self) -> Vec<(usize, usize, usize)> {
        let k = self.size();
        let down: Vec<usize> = (0..k)
            .map(|x| (0..k).filter(|&y| y != x && self.leq(y, x)).count())
            .collect();
        let up: Vec<usize> = (0..k)
            .map(|x| (0..k).filter(|&y| y != x && self.leq(x, y)).count())
            .collect();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&x| down[x]);
        let mut height = vec![1; k];
        for &x in &order {
            height[x] = 1
                + (0..k)
                    .filter(|&y| y != x && self.leq(y, x))
                    .map(|y| height[y])
                    .max()
                    .unwrap_or(0);
        }
        (0..k).map(|x| (down[x], up[x], height[x])).collect()
    }
}

/// Backtracking over order isomorphisms `P → Q`. `visit` receives each
/// complete map and returns `false` to stop the search.
fn search_isomorphisms(p: &Poset, q: &Poset, visit: &mut dyn FnMut(&[usize]) -> bool) {
    let k = p.size();
    if k != q.size() {
        return;
    }
    let (sp, sq) = (p.signatures(), q.signatures());
    let mut a = sp.clone();
    let mut b = sq.clone();
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return;
    }
    // place elements of P bottom-up so comparabilities get checked early
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&x| (sp[x].2, sp[x].0));
    let mut map = vec![usize::MAX; k];
    let mut used = vec![false; k];

    type Signature = (usize, usize, usize);

    fn go(
        depth: usize,
        ctx: (&Poset, &Poset, &[Signature], &[Signature], &[usize]),
        map: &mut [usize],
        used: &mut [bool],
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let (p, q, sp, sq, order) = ctx;
        if depth == order.len() {
            return visit(map);
        }
        let x = order[depth];
        for y in 0..q.size() {
            if used[y] || sp[x] != sq[y] {
                continue;
            }
            let consistent = order[..depth].iter().all(|&x2| {
                let y2 = map[x2];
                p.leq(x, x2) == q.leq(y, y2) && p.leq(x2, x) == q.leq(y2, y)
            });
            if !consistent {
                continue;
            }
            map[x] = y;
            used[y] = true;
            let go_on = go(depth + 1, ctx, map, used, visit);
            used[y] = false;
            map[x] = usize::MAX;
            if !go_on {
                return false;
            }
        }
        true
    }

    go(0, (p, q, &sp, &sq, &order), &mut map, &mut used, visit);
}

/// An order isomorphism `P → Q` on local indices, if one exists.
pub fn poset_isomorphic(p: &Poset, q: &Poset) -> Option<Permutation> {
    let mut found = None;
    search_isomorphisms(p, q, &mut |m| {
        found = Some(m.to_vec());
        false
    });
    found.map(|m| Permutation::from_vec(m).expect("bijection"))
}

/// All automorphisms of `P` on local indices, with the default size cap.
pub fn poset_automorphisms(p: &Poset) -> Result<Vec<Permutation>> {
    poset_automorphisms_capped(p, DEFAULT_AUTOMORPHISM_CAP)
}

pub fn poset_automorphisms_capped(p: &Poset, cap: usize) -> Result<Vec<Permutation>> {
    if p.size() > cap {
        return Err(Error::SizeLimit {
            what: "poset",
            size: p.size(),
            limit: cap,
        });
    }
    let mut out = Vec::new();
    search_isomorphisms(p, p, &mut |m| {
        out.push(Permutation::from_vec(m.to_vec()).expect("bijection"));
        true
    });
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn validates_orders() {
        assert!(Poset::new(vec![0, 1], vec![true, true, true, true]).is_err());
        assert!(Poset::new(vec![0, 1], vec![false, false, false, true]).is_err());
        assert!(Poset::from_fn(vec![0, 1, 2], |i, j| i == j
            || (i, j) == (0, 1)
            || (i, j) == (1, 2))
        .is_err());
    }

    #[test]
    fn isomorphism_examples() {
        let c = Poset::chain(4);
        assert!(poset_isomorphic(&c, &c).unwrap().is_identity());
        assert!(poset_isomorphic(&Poset::chain(2), &Poset::antichain(2)).is_none());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let p = Poset::random(5, 0.4, &mut rng);
            let q = p.relabel(&Permutation::from_vec(vec![3, 0, 4, 1, 2]).unwrap());
            let f = poset_isomorphic(&p, &q).expect("relabelled copy");
            for i in 0..5 {
                for j in 0..5 {
                    assert_eq!(p.leq(i, j), q.leq(f.apply(i), f.apply(j)));
                }
            }
        }
    }

    #[test]
    fn automorphism_examples() {
        assert_eq!(poset_automorphisms(&Poset::antichain(4)).unwrap().len(), 24);
        assert_eq!(poset_automorphisms(&Poset::chain(5)).unwrap().len(), 1);
        let two = Poset::chain(2).disjoint_union(&Poset::chain(2));
        assert_eq!(poset_automorphisms(&two).unwrap().len(), 2);
        assert!(matches!(
            poset_automorphisms(&Poset::antichain(11)),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn automorphisms_form_a_group() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let p = Poset::random(6, 0.3, &mut rng);
            let auts = poset_automorphisms(&p).unwrap();
            assert!(auts.iter().any(|f| f.is_identity()));
            for f in &auts {
                assert!(p.is_automorphism(f));
                assert!(auts.contains(&f.inverse()));
                for g in &auts {
                    assert!(auts.contains(&f.then(g)));
                }
            }
        }
    }
}
