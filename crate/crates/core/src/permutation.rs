use std::fmt;

use crate::error::{Error, Result};

/// A bijection on `{0, ..., n-1}`.
///
/// Products compose left to right: `(πσ)(i) = σ(π(i))`. With this
/// convention `P_π · P_σ = P_{πσ}` for the associated permutation matrices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        Permutation {
            map: (0..n).collect(),
        }
    }

    pub fn from_vec(map: Vec<usize>) -> Result<Permutation> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &x in &map {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPermutation(format!(
                    "{map:?} is not a bijection"
                )));
            }
        }
        Ok(Permutation { map })
    }

    /// Builds from one-based images, as written in files and on the command line.
    pub fn from_one_based(images: &[usize]) -> Result<Permutation> {
        if images.contains(&0) {
            return Err(Error::InvalidPermutation("images are one-based".into()));
        }
        Permutation::from_vec(images.iter().map(|&x| x - 1).collect())
    }

    /// The transposition swapping `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Permutation {
        let mut p = Permutation::identity(n);
        p.map.swap(i, j);
        p
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.map.iter().map(|x| x + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &x) in self.map.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { map: inv }
    }

    /// Left-to-right product: first `self`, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "permutation sizes differ");
        Permutation {
            map: self.map.iter().map(|&x| other.map[x]).collect(),
        }
    }

    /// All permutations of `n` points in lexicographic order.
    pub fn all(n: usize) -> AllPermutations {
        AllPermutations {
            next: Some((0..n).collect()),
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", x + 1)?;
        }
        write!(f, "]")
    }
}

impl serde::Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_one_based().serialize(s)
    }
}

/// Iterator returned by [`Permutation::all`].
pub struct AllPermutations {
    next: Option<Vec<usize>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        // standard next-permutation step
        if let Some(i) = (1..succ.len()).rev().find(|&i| succ[i - 1] < succ[i]) {
            let j = (i..succ.len())
                .rev()
                .find(|&j| succ[j] > succ[i - 1])
                .unwrap();
            succ.swap(i - 1, j);
            succ[i..].reverse();
            self.next = Some(succ);
        }
        Some(Permutation { map: cur })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn enumerates_factorial_many() {
        for n in 0..7 {
            let all: Vec<_> = Permutation::all(n).collect();
            assert_eq!(all.len(), (1..=n).product::<usize>());
            let mut sorted = all.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted, all);
        }
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_vec(vec![0, 0]).is_err());
        assert!(Permutation::from_vec(vec![0, 2]).is_err());
        assert!(Permutation::from_one_based(&[0, 1]).is_err());
        assert_eq!(
            Permutation::from_one_based(&[2, 1]).unwrap(),
            Permutation::transposition(2, 0, 1)
        );
    }

    fn perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::from_vec(v).unwrap())
    }

    proptest! {
        #[test]
        fn group_laws(p in perm(6), q in perm(6), r in perm(6)) {
            let id = Permutation::identity(6);
            prop_assert_eq!(p.then(&q).then(&r), p.then(&q.then(&r)));
            prop_assert_eq!(p.then(&p.inverse()), id.clone());
            prop_assert_eq!(p.inverse().then(&p), id.clone());
            prop_assert_eq!(p.then(&id), p.clone());
            prop_assert_eq!(p.then(&q).apply(2), q.apply(p.apply(2)));
        }
    }
}
