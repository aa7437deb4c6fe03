//! Square matrices over a finite lattice.
//!
//! Addition is entrywise join and the product is `(AB)_ik = Σ_j a_ij·b_jk`
//! with join as the sum and meet as the product. Over a nondistributive
//! lattice this product is not associative, so there is no unbracketed
//! power; see [`LatMatrix::bracketed_power`].

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::{Elem, Lattice};
use crate::permutation::Permutation;
use crate::spectrum::Bracketing;

/// Which pair of lattice operations plays the role of `(+, ·)` in a product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Product {
    /// `Σ_j a_ij·b_jk` with join as sum and meet as product.
    #[default]
    JoinOfMeets,
    /// The order-dual product `Π_j (a_ij + b_jk)`.
    MeetOfJoins,
}

/// An `n×n` matrix of element ids bound to one lattice.
#[derive(Clone)]
pub struct LatMatrix {
    n: usize,
    lattice: Arc<Lattice>,
    entries: Vec<Elem>,
}

impl PartialEq for LatMatrix {
    fn eq(&self, other: &LatMatrix) -> bool {
        self.n == other.n
            && self.entries == other.entries
            && (Arc::ptr_eq(&self.lattice, &other.lattice) || self.lattice == other.lattice)
    }
}

impl Eq for LatMatrix {}

impl Hash for LatMatrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.entries.hash(state);
    }
}

impl fmt::Debug for LatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatMatrix{:?}", self.to_labels())
    }
}

impl fmt::Display for LatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = self.to_labels();
        let width = labels.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
        for row in labels {
            let cells: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

type LatticeOp = fn(&Lattice, Elem, Elem) -> Elem;

impl LatMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(lattice: Arc<Lattice>, n: usize, entries: Vec<Elem>) -> Result<LatMatrix> {
        if n < 2 {
            return Err(Error::InvalidDimension(n));
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                left: n * n,
                right: entries.len(),
            });
        }
        if let Some(&bad) = entries.iter().find(|&&e| !lattice.contains(e)) {
            return Err(Error::InvalidElement(bad));
        }
        Ok(LatMatrix {
            n,
            lattice,
            entries,
        })
    }

    pub fn from_rows(lattice: Arc<Lattice>, rows: Vec<Vec<Elem>>) -> Result<LatMatrix> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                left: n,
                right: r.len(),
            });
        }
        LatMatrix::new(lattice, n, rows.into_iter().flatten().collect())
    }

    /// Builds a matrix from element labels.
    pub fn from_labels<R: AsRef<[S]>, S: AsRef<str>>(
        lattice: Arc<Lattice>,
        rows: &[R],
    ) -> Result<LatMatrix> {
        let rows = rows
            .iter()
            .map(|r| {
                r.as_ref()
                    .iter()
                    .map(|s| lattice.parse_element(s.as_ref()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        LatMatrix::from_rows(lattice, rows)
    }

    pub fn from_fn(
        lattice: Arc<Lattice>,
        n: usize,
        mut f: impl FnMut(usize, usize) -> Elem,
    ) -> Result<LatMatrix> {
        let entries = (0..n * n).map(|t| f(t / n, t % n)).collect();
        LatMatrix::new(lattice, n, entries)
    }

    pub fn constant(lattice: Arc<Lattice>, n: usize, e: Elem) -> Result<LatMatrix> {
        LatMatrix::from_fn(lattice, n, |_, _| e)
    }

    /// The all-bottom matrix.
    pub fn zero(lattice: Arc<Lattice>, n: usize) -> Result<LatMatrix> {
        let b = lattice.bottom();
        LatMatrix::constant(lattice, n, b)
    }

    /// Top on the diagonal, bottom elsewhere.
    pub fn identity(lattice: Arc<Lattice>, n: usize) -> Result<LatMatrix> {
        let (b, t) = (lattice.bottom(), lattice.top());
        LatMatrix::from_fn(lattice, n, |i, j| if i == j { t } else { b })
    }

    /// `P_π` with top at `(i, π(i))` and bottom elsewhere.
    pub fn permutation(lattice: Arc<Lattice>, pi: &Permutation) -> Result<LatMatrix> {
        let (b, t) = (lattice.bottom(), lattice.top());
        LatMatrix::from_fn(
            lattice,
            pi.len(),
            |i, j| if j == pi.apply(i) { t } else { b },
        )
    }

    /// Top strictly above the diagonal, bottom elsewhere.
    pub fn strict_upper_ones(lattice: Arc<Lattice>, n: usize) -> Result<LatMatrix> {
        let (b, t) = (lattice.bottom(), lattice.top());
        LatMatrix::from_fn(lattice, n, |i, j| if i < j { t } else { b })
    }

    /// Decodes `index` as a base-`|L|` numeral, entry `(0,0)` least significant.
    pub fn from_index(lattice: Arc<Lattice>, n: usize, mut index: u128) -> Result<LatMatrix> {
        let m = lattice.size() as u128;
        let entries = (0..n * n)
            .map(|_| {
                let e = (index % m) as Elem;
                index /= m;
                e
            })
            .collect();
        LatMatrix::new(lattice, n, entries)
    }

    /// Number of `n×n` matrices over `lattice`, if it fits in a `u128`.
    pub fn count(lattice: &Lattice, n: usize) -> Option<u128> {
        (lattice.size() as u128).checked_pow(u32::try_from(n * n).ok()?)
    }

    /// Every `n×n` matrix over `lattice`, in [`LatMatrix::from_index`] order.
    pub fn all(lattice: Arc<Lattice>, n: usize) -> impl Iterator<Item = LatMatrix> {
        let total = LatMatrix::count(&lattice, n).expect("matrix space too large to enumerate");
        (0..total).map(move |i| LatMatrix::from_index(lattice.clone(), n, i).unwrap())
    }

    pub fn random<R: Rng + ?Sized>(lattice: Arc<Lattice>, n: usize, rng: &mut R) -> LatMatrix {
        let m = lattice.size();
        let entries = (0..n * n).map(|_| rng.gen_range(0..m)).collect();
        LatMatrix::new(lattice, n, entries).expect("valid random matrix")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn to_labels(&self) -> Vec<Vec<String>> {
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|&e| self.lattice.name(e).to_string())
                    .collect()
            })
            .collect()
    }

    fn compatible(&self, other: &LatMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        if !Arc::ptr_eq(&self.lattice, &other.lattice) && self.lattice != other.lattice {
            return Err(Error::LatticeMismatch);
        }
        Ok(())
    }

    fn map_with(&self, mut f: impl FnMut(usize, usize) -> Elem) -> LatMatrix {
        let n = self.n;
        LatMatrix {
            n,
            lattice: self.lattice.clone(),
            entries: (0..n * n).map(|t| f(t / n, t % n)).collect(),
        }
    }

    /// The matrix product over the lattice.
    pub fn mul(&self, other: &LatMatrix) -> Result<LatMatrix> {
        self.mul_with(other, Product::JoinOfMeets)
    }

    /// The matrix product computed with a chosen pair of operations.
    pub fn mul_with(&self, other: &LatMatrix, product: Product) -> Result<LatMatrix> {
        self.compatible(other)?;
        let l = &*self.lattice;
        let n = self.n;
        let (unit, sum, prod): (Elem, LatticeOp, LatticeOp) = match product {
            Product::JoinOfMeets => (l.bottom(), Lattice::join, Lattice::meet),
            Product::MeetOfJoins => (l.top(), Lattice::meet, Lattice::join),
        };
        Ok(self.map_with(|i, k| {
            (0..n).fold(unit, |acc, j| {
                sum(l, acc, prod(l, self.get(i, j), other.get(j, k)))
            })
        }))
    }

    /// Entrywise join.
    pub fn add(&self, other: &LatMatrix) -> Result<LatMatrix> {
        self.compatible(other)?;
        Ok(self.map_with(|i, j| self.lattice.join(self.get(i, j), other.get(i, j))))
    }

    /// Entrywise order.
    pub fn leq(&self, other: &LatMatrix) -> Result<bool> {
        self.compatible(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .all(|(&a, &b)| self.lattice.leq(a, b)))
    }

    pub fn transpose(&self) -> LatMatrix {
        self.map_with(|i, j| self.get(j, i))
    }

    pub fn is_zero(&self) -> bool {
        let b = self.lattice.bottom();
        self.entries.iter().all(|&e| e == b)
    }

    pub fn is_identity(&self) -> bool {
        let (b, t) = (self.lattice.bottom(), self.lattice.top());
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == if i == j { t } else { b }))
    }

    /// `a_ij ≠ 0` implies `i < j`.
    pub fn is_strictly_upper_triangular(&self) -> bool {
        let b = self.lattice.bottom();
        (0..self.n).all(|i| (0..=i).all(|j| self.get(i, j) == b))
    }

    /// Returns `π` when the matrix equals `P_π`.
    pub fn as_permutation(&self) -> Option<Permutation> {
        let (b, t) = (self.lattice.bottom(), self.lattice.top());
        let mut images = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let row = self.row(i);
            if row.iter().any(|&e| e != b && e != t) {
                return None;
            }
            let mut tops = row.iter().enumerate().filter(|&(_, &e)| e == t);
            match (tops.next(), tops.next()) {
                (Some((j, _)), None) => images.push(j),
                _ => return None,
            }
        }
        Permutation::from_vec(images).ok()
    }

    /// `P_π · A · P_π⁻¹`, whose `(i, j)` entry is `a_{π(i)π(j)}`.
    pub fn conjugate(&self, pi: &Permutation) -> Result<LatMatrix> {
        if pi.len() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: pi.len(),
            });
        }
        Ok(self.map_with(|i, j| self.get(pi.apply(i), pi.apply(j))))
    }

    /// Evaluates `t` with every leaf set to `self`.
    pub fn bracketed_power(&self, t: &Bracketing) -> LatMatrix {
        self.bracketed_power_with(t, Product::JoinOfMeets)
    }

    pub fn bracketed_power_with(&self, t: &Bracketing, product: Product) -> LatMatrix {
        let leaves = vec![self.clone(); t.leaves()];
        t.eval(&leaves, &mut |a: &LatMatrix, b: &LatMatrix| {
            a.mul_with(b, product).expect("same shape")
        })
    }

    /// `A^k` for `k ≥ 1`; only defined over distributive lattices.
    pub fn power(&self, k: usize) -> Result<LatMatrix> {
        if !self.lattice.is_distributive() {
            return Err(Error::NotDistributive);
        }
        Ok(self.power_unchecked(k))
    }

    pub(crate) fn power_unchecked(&self, k: usize) -> LatMatrix {
        if k == 0 {
            return LatMatrix::identity(self.lattice.clone(), self.n).expect("n >= 2");
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.mul(self).expect("same shape");
        }
        acc
    }

    /// Embeds the matrix into the top-left corner of an `size×size` zero matrix.
    pub fn padded(&self, size: usize) -> Result<LatMatrix> {
        if size < self.n {
            return Err(Error::InvalidDimension(size));
        }
        let b = self.lattice.bottom();
        LatMatrix::from_fn(self.lattice.clone(), size, |i, j| {
            if i < self.n && j < self.n {
                self.get(i, j)
            } else {
                b
            }
        })
    }
}
