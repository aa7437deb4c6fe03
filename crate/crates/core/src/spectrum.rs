//! Bracketings and the associative spectrum of a finite groupoid.
//!
//! The spectrum counts how many distinct `k`-ary term functions the
//! bracketings of `x1⋯xk` induce. It lies between 1 (associative) and the
//! Catalan number `C(k-1)` (antiassociative). A groupoid with an identity
//! element and one nonassociative triple is antiassociative, and
//! [`distinguish_with_identity`] builds the separating assignment for any
//! pair of distinct bracketings.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::matrix::{LatMatrix, Product};

/// Default cap on the number of leaves accepted by [`Bracketing::enumerate`].
pub const DEFAULT_MAX_LEAVES: usize = 12;
/// Default evaluation budget for exhaustive spectrum counting.
pub const DEFAULT_EVAL_BUDGET: u128 = 10_000_000;

/// A full binary tree whose leaves stand for `x1, ..., xk` in order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Bracketing {
    Leaf,
    Node(Box<Bracketing>, Box<Bracketing>),
}

/// The Catalan number `C(n)`.
pub fn catalan(n: usize) -> u128 {
    // C(i+1) = C(i)·2(2i+1)/(i+2), exact at every step
    (0..n as u128).fold(1, |c, i| c * 2 * (2 * i + 1) / (i + 2))
}

impl Bracketing {
    pub fn node(left: Bracketing, right: Bracketing) -> Bracketing {
        Bracketing::Node(Box::new(left), Box::new(right))
    }

    /// `((x1x2)x3)⋯xk`
    pub fn left_comb(k: usize) -> Bracketing {
        assert!(k >= 1);
        (1..k).fold(Bracketing::Leaf, |acc, _| {
            Bracketing::node(acc, Bracketing::Leaf)
        })
    }

    /// `x1(x2(⋯xk))`
    pub fn right_comb(k: usize) -> Bracketing {
        assert!(k >= 1);
        (1..k).fold(Bracketing::Leaf, |acc, _| {
            Bracketing::node(Bracketing::Leaf, acc)
        })
    }

    pub fn leaves(&self) -> usize {
        match self {
            Bracketing::Leaf => 1,
            Bracketing::Node(l, r) => l.leaves() + r.leaves(),
        }
    }

    /// Outermost split: the two factors, or `None` for a leaf.
    pub fn split(&self) -> Option<(&Bracketing, &Bracketing)> {
        match self {
            Bracketing::Leaf => None,
            Bracketing::Node(l, r) => Some((l, r)),
        }
    }

    /// All bracketings with `k` leaves, ordered by the leaf count of the
    /// left factor and then recursively.
    pub fn enumerate(k: usize) -> Result<Vec<Bracketing>> {
        Bracketing::enumerate_capped(k, DEFAULT_MAX_LEAVES)
    }

    pub fn enumerate_capped(k: usize, cap: usize) -> Result<Vec<Bracketing>> {
        if k == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if k > cap {
            return Err(Error::SizeLimit {
                what: "bracketing",
                size: k,
                limit: cap,
            });
        }
        let mut table: Vec<Vec<Bracketing>> = vec![Vec::new(), vec![Bracketing::Leaf]];
        for size in 2..=k {
            let mut here = Vec::new();
            for s in 1..size {
                for l in &table[s] {
                    for r in &table[size - s] {
                        here.push(Bracketing::node(l.clone(), r.clone()));
                    }
                }
            }
            table.push(here);
        }
        Ok(table.swap_remove(k))
    }

    /// Evaluates bottom-up with `args[i]` at leaf `i`.
    pub fn eval<T: Clone>(&self, args: &[T], op: &mut impl FnMut(&T, &T) -> T) -> T {
        assert_eq!(args.len(), self.leaves(), "wrong number of arguments");
        self.eval_at(args, op)
    }

    fn eval_at<T: Clone>(&self, args: &[T], op: &mut impl FnMut(&T, &T) -> T) -> T {
        match self {
            Bracketing::Leaf => args[0].clone(),
            Bracketing::Node(l, r) => {
                let k = l.leaves();
                let a = l.eval_at(&args[..k], op);
                let b = r.eval_at(&args[k..], op);
                op(&a, &b)
            }
        }
    }

    /// Parses `x`, `(pq)` recursively; leaves may carry digits (`x1`) and
    /// whitespace is ignored.
    pub fn parse(text: &str) -> Result<Bracketing> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let t = parse_term(&chars, &mut pos)?;
        if pos != chars.len() {
            return Err(bracket_error(pos, "trailing input"));
        }
        Ok(t)
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, next: &mut usize) -> fmt::Result {
        match self {
            Bracketing::Leaf => {
                *next += 1;
                write!(f, "x{next}")
            }
            Bracketing::Node(l, r) => {
                write!(f, "(")?;
                l.fmt_at(f, next)?;
                r.fmt_at(f, next)?;
                write!(f, ")")
            }
        }
    }
}

fn bracket_error(pos: usize, message: &str) -> Error {
    Error::Parse {
        context: format!("bracketing, character {pos}"),
        message: message.to_string(),
    }
}

fn parse_term(chars: &[char], pos: &mut usize) -> Result<Bracketing> {
    match chars.get(*pos) {
        Some('x') => {
            *pos += 1;
            while chars.get(*pos).is_some_and(|c| c.is_ascii_digit()) {
                *pos += 1;
            }
            Ok(Bracketing::Leaf)
        }
        Some('(') => {
            *pos += 1;
            let l = parse_term(chars, pos)?;
            let r = parse_term(chars, pos)?;
            if chars.get(*pos) != Some(&')') {
                return Err(bracket_error(*pos, "expected ')'"));
            }
            *pos += 1;
            Ok(Bracketing::node(l, r))
        }
        _ => Err(bracket_error(*pos, "expected 'x' or '('")),
    }
}

impl fmt::Display for Bracketing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, &mut 0)
    }
}

impl serde::Serialize for Bracketing {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A set with a binary operation.
pub trait Groupoid {
    type Elem: Clone + Eq + Hash + fmt::Debug;

    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// A two-sided identity, if the groupoid has one.
    fn identity(&self) -> Option<Self::Elem> {
        None
    }

    /// The whole carrier, when it is finite and small enough to list.
    fn elements(&self) -> Option<Vec<Self::Elem>> {
        None
    }

    /// A random element, for sampled searches.
    fn sample(&self, _rng: &mut dyn RngCore) -> Option<Self::Elem> {
        None
    }
}

/// A groupoid on `{0, ..., size-1}` given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableGroupoid {
    size: usize,
    table: Vec<usize>,
}

impl TableGroupoid {
    pub fn new(size: usize, table: Vec<usize>) -> Result<TableGroupoid> {
        if table.len() != size * size {
            return Err(Error::DimensionMismatch {
                left: size * size,
                right: table.len(),
            });
        }
        if let Some(&bad) = table.iter().find(|&&x| x >= size) {
            return Err(Error::InvalidElement(bad));
        }
        Ok(TableGroupoid { size, table })
    }

    /// Tabulates a finite groupoid; returns the table and the carrier order.
    pub fn tabulate<G: Groupoid>(g: &G) -> Result<(TableGroupoid, Vec<G::Elem>)> {
        let elems = g.elements().ok_or(Error::CarrierNotEnumerable)?;
        let index: HashMap<&G::Elem, usize> =
            elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut table = Vec::with_capacity(elems.len() * elems.len());
        for a in &elems {
            for b in &elems {
                let c = g.op(a, b);
                let i = *index.get(&c).ok_or_else(|| {
                    Error::Internal("carrier not closed under the operation".into())
                })?;
                table.push(i);
            }
        }
        Ok((
            TableGroupoid {
                size: elems.len(),
                table,
            },
            elems,
        ))
    }

    pub fn size(&self) -> usize {
        self.size
    }
}

impl Groupoid for TableGroupoid {
    type Elem = usize;

    fn op(&self, a: &usize, b: &usize) -> usize {
        self.table[a * self.size + b]
    }

    fn identity(&self) -> Option<usize> {
        (0..self.size)
            .find(|&e| (0..self.size).all(|x| self.op(&e, &x) == x && self.op(&x, &e) == x))
    }

    fn elements(&self) -> Option<Vec<usize>> {
        Some((0..self.size).collect())
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Option<usize> {
        Some((rng.next_u64() % self.size as u64) as usize)
    }
}

/// `n×n` matrices over a lattice under the matrix product.
#[derive(Debug, Clone)]
pub struct MatrixGroupoid {
    lattice: Arc<Lattice>,
    n: usize,
    product: Product,
    /// Largest carrier [`Groupoid::elements`] will list.
    pub enumeration_cap: u128,
}

impl MatrixGroupoid {
    pub fn new(lattice: Arc<Lattice>, n: usize) -> MatrixGroupoid {
        MatrixGroupoid::with_product(lattice, n, Product::JoinOfMeets)
    }

    pub fn with_product(lattice: Arc<Lattice>, n: usize, product: Product) -> MatrixGroupoid {
        MatrixGroupoid {
            lattice,
            n,
            product,
            enumeration_cap: 1 << 16,
        }
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

impl Groupoid for MatrixGroupoid {
    type Elem = LatMatrix;

    fn op(&self, a: &LatMatrix, b: &LatMatrix) -> LatMatrix {
        a.mul_with(b, self.product)
            .expect("matrices of one groupoid")
    }

    fn identity(&self) -> Option<LatMatrix> {
        // the identity matrix is neutral only for the standard product
        match self.product {
            Product::JoinOfMeets => LatMatrix::identity(self.lattice.clone(), self.n).ok(),
            Product::MeetOfJoins => None,
        }
    }

    fn elements(&self) -> Option<Vec<LatMatrix>> {
        let count = LatMatrix::count(&self.lattice, self.n)?;
        (count <= self.enumeration_cap)
            .then(|| LatMatrix::all(self.lattice.clone(), self.n).collect())
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Option<LatMatrix> {
        Some(LatMatrix::random(self.lattice.clone(), self.n, rng))
    }
}

fn is_associative_on<G: Groupoid>(g: &G, a: &G::Elem, b: &G::Elem, c: &G::Elem) -> bool {
    g.op(&g.op(a, b), c) == g.op(a, &g.op(b, c))
}

pub type Triple<E> = (E, E, E);

/// Scans `a, b, c` over the carrier in order and returns the first triple
/// with `(ab)c ≠ a(bc)`.
pub fn find_nonassociative_triple<G: Groupoid>(g: &G) -> Result<Option<Triple<G::Elem>>> {
    let elems = g.elements().ok_or(Error::CarrierNotEnumerable)?;
    // Small carriers are tabulated once so the cubic scan is table lookups.
    if elems.len() <= 4096 {
        let (t, elems) = TableGroupoid::tabulate(g)?;
        let s = t.size();
        for a in 0..s {
            for b in 0..s {
                let ab = t.op(&a, &b);
                for c in 0..s {
                    if t.op(&ab, &c) != t.op(&a, &t.op(&b, &c)) {
                        return Ok(Some((elems[a].clone(), elems[b].clone(), elems[c].clone())));
                    }
                }
            }
        }
        return Ok(None);
    }
    for a in &elems {
        for b in &elems {
            for c in &elems {
                if !is_associative_on(g, a, b, c) {
                    return Ok(Some((a.clone(), b.clone(), c.clone())));
                }
            }
        }
    }
    Ok(None)
}

/// Samples up to `budget` random triples looking for a nonassociative one.
pub fn sample_nonassociative_triple<G: Groupoid>(
    g: &G,
    budget: u64,
    rng: &mut dyn RngCore,
) -> Result<(G::Elem, G::Elem, G::Elem)> {
    for _ in 0..budget {
        let (Some(a), Some(b), Some(c)) = (g.sample(rng), g.sample(rng), g.sample(rng)) else {
            return Err(Error::CarrierNotEnumerable);
        };
        if !is_associative_on(g, &a, &b, &c) {
            return Ok((a, b, c));
        }
    }
    Err(Error::BudgetExceeded {
        needed: budget as u128 + 1,
        budget: budget as u128,
    })
}

/// Builds an assignment on which `p` and `q` evaluate differently, using an
/// identity element `e` and a nonassociative triple `(a, b, c)`.
///
/// Returns `Ok(None)` when `p == q`. When the outermost splits coincide, the
/// construction recurses into the left factors if they differ and into the
/// right factors otherwise, padding the other side with `e`. When the splits
/// differ at `k < l`, it places `a, b, c` at positions `1, k+1, l+1` and `e`
/// everywhere else, so the two sides evaluate to `a(bc)` and `(ab)c`.
///
/// `probes` are extra elements on which `e` is checked to be neutral.
pub fn distinguish_with_identity<G: Groupoid>(
    g: &G,
    p: &Bracketing,
    q: &Bracketing,
    triple: (&G::Elem, &G::Elem, &G::Elem),
    e: &G::Elem,
    probes: &[G::Elem],
) -> Result<Option<Vec<G::Elem>>> {
    if p.leaves() != q.leaves() {
        return Err(Error::DimensionMismatch {
            left: p.leaves(),
            right: q.leaves(),
        });
    }
    let (a, b, c) = triple;
    for x in [a, b, c].into_iter().chain(probes) {
        if g.op(e, x) != *x || g.op(x, e) != *x {
            return Err(Error::NotAnIdentity);
        }
    }
    if is_associative_on(g, a, b, c) {
        return Err(Error::NotAWitness);
    }
    if p == q {
        return Ok(None);
    }
    Ok(Some(separate(p, q, (a, b, c), e)))
}

fn separate<E: Clone>(p: &Bracketing, q: &Bracketing, (a, b, c): (&E, &E, &E), e: &E) -> Vec<E> {
    let n = p.leaves();
    let ((p1, p2), (q1, q2)) = match (p.split(), q.split()) {
        (Some(ps), Some(qs)) => (ps, qs),
        _ => unreachable!("distinct bracketings of equal size have at least 3 leaves"),
    };
    let (k, l) = (p1.leaves(), q1.leaves());
    if k == l {
        if p1 != q1 {
            let mut v = separate(p1, q1, (a, b, c), e);
            v.resize(n, e.clone());
            v
        } else {
            let mut v = vec![e.clone(); k];
            v.extend(separate(p2, q2, (a, b, c), e));
            v
        }
    } else {
        let (k, l) = (k.min(l), k.max(l));
        let mut v = vec![e.clone(); n];
        v[0] = a.clone();
        v[k] = b.clone();
        v[l] = c.clone();
        v
    }
}

/// How [`spectrum_count`] establishes the count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumMode {
    /// Compare every pair of bracketings on every assignment.
    Exhaustive,
    /// Produce a separating assignment for every pair of bracketings.
    Witness,
}

/// Options for [`spectrum_count`].
#[derive(Debug, Clone)]
pub struct SpectrumOptions<E> {
    pub mode: SpectrumMode,
    /// Cap on `|carrier|^k · C(k-1)` in exhaustive mode.
    pub eval_budget: u128,
    pub max_leaves: usize,
    /// Nonassociative triple to seed witness mode; searched for when absent.
    pub seed_triple: Option<(E, E, E)>,
}

impl<E> SpectrumOptions<E> {
    pub fn new(mode: SpectrumMode) -> SpectrumOptions<E> {
        SpectrumOptions {
            mode,
            eval_budget: DEFAULT_EVAL_BUDGET,
            max_leaves: DEFAULT_MAX_LEAVES,
            seed_triple: None,
        }
    }
}

/// A pair of bracketings (indices into [`SpectrumReport::bracketings`]) and
/// an assignment on which they differ.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness<E> {
    pub p: usize,
    pub q: usize,
    pub assignment: Vec<E>,
}

#[derive(Debug, Clone)]
pub struct SpectrumReport<E> {
    pub k: usize,
    /// Number of distinct term functions.
    pub count: u128,
    pub catalan: u128,
    pub mode: SpectrumMode,
    pub bracketings: Vec<Bracketing>,
    /// Exhaustive mode: class index of each bracketing.
    pub classes: Vec<usize>,
    pub witnesses: Vec<Witness<E>>,
}

impl<E: Clone + PartialEq> SpectrumReport<E> {
    /// Re-evaluates every stored witness and checks that the two bracketings
    /// really disagree on it.
    pub fn verify_witnesses<G: Groupoid<Elem = E>>(&self, g: &G) -> bool {
        self.witnesses.iter().all(|w| {
            let mut op = |x: &E, y: &E| g.op(x, y);
            self.bracketings[w.p].eval(&w.assignment, &mut op)
                != self.bracketings[w.q].eval(&w.assignment, &mut op)
        })
    }
}

/// Counts the distinct term functions induced by bracketings of size `k`.
pub fn spectrum_count<G: Groupoid>(
    g: &G,
    k: usize,
    opts: &SpectrumOptions<G::Elem>,
) -> Result<SpectrumReport<G::Elem>> {
    let bracketings = Bracketing::enumerate_capped(k, opts.max_leaves)?;
    let catalan = catalan(k - 1);
    match opts.mode {
        SpectrumMode::Exhaustive => exhaustive(g, k, bracketings, catalan, opts.eval_budget),
        SpectrumMode::Witness => witnessed(g, k, bracketings, catalan, opts),
    }
}

fn exhaustive<G: Groupoid>(
    g: &G,
    k: usize,
    bracketings: Vec<Bracketing>,
    catalan: u128,
    budget: u128,
) -> Result<SpectrumReport<G::Elem>> {
    let elems = g.elements().ok_or(Error::CarrierNotEnumerable)?;
    let needed = (elems.len() as u128)
        .checked_pow(k as u32)
        .and_then(|x| x.checked_mul(catalan))
        .unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let (table, _) = TableGroupoid::tabulate(g)?;
    let s = elems.len();
    let mut op = |x: &usize, y: &usize| table.op(x, y);

    // All assignments as base-|carrier| counters.
    let total = s.pow(k as u32);
    let assignment = |mut idx: usize| -> Vec<usize> {
        (0..k)
            .map(|_| {
                let d = idx % s;
                idx /= s;
                d
            })
            .collect()
    };

    let mut reps: Vec<usize> = Vec::new();
    let mut classes = Vec::with_capacity(bracketings.len());
    let mut witnesses = Vec::new();
    for (bi, b) in bracketings.iter().enumerate() {
        let mut class = None;
        for (ci, &r) in reps.iter().enumerate() {
            let differing = (0..total)
                .map(assignment)
                .find(|args| b.eval(args, &mut op) != bracketings[r].eval(args, &mut op));
            match differing {
                None => {
                    class = Some(ci);
                    break;
                }
                Some(args) => witnesses.push(Witness {
                    p: r,
                    q: bi,
                    assignment: args.into_iter().map(|i| elems[i].clone()).collect(),
                }),
            }
        }
        let class = class.unwrap_or_else(|| {
            reps.push(bi);
            reps.len() - 1
        });
        classes.push(class);
    }
    Ok(SpectrumReport {
        k,
        count: reps.len() as u128,
        catalan,
        mode: SpectrumMode::Exhaustive,
        bracketings,
        classes,
        witnesses,
    })
}

fn witnessed<G: Groupoid>(
    g: &G,
    k: usize,
    bracketings: Vec<Bracketing>,
    catalan: u128,
    opts: &SpectrumOptions<G::Elem>,
) -> Result<SpectrumReport<G::Elem>> {
    let e = g
        .identity()
        .ok_or(Error::WitnessModeUnavailable("no identity element"))?;
    let (a, b, c) = match &opts.seed_triple {
        Some(t) => t.clone(),
        None => find_nonassociative_triple(g)?
            .ok_or(Error::WitnessModeUnavailable("no nonassociative triple"))?,
    };
    let mut witnesses = Vec::new();
    for i in 0..bracketings.len() {
        for j in (i + 1)..bracketings.len() {
            let (p, q) = (&bracketings[i], &bracketings[j]);
            let args = distinguish_with_identity(g, p, q, (&a, &b, &c), &e, &[])?
                .expect("distinct bracketings");
            let mut op = |x: &G::Elem, y: &G::Elem| g.op(x, y);
            if p.eval(&args, &mut op) == q.eval(&args, &mut op) {
                return Err(Error::Internal(format!(
                    "assignment fails to separate {p} and {q}"
                )));
            }
            witnesses.push(Witness {
                p: i,
                q: j,
                assignment: args,
            });
        }
    }
    Ok(SpectrumReport {
        k,
        count: bracketings.len() as u128,
        catalan,
        mode: SpectrumMode::Witness,
        classes: (0..bracketings.len()).collect(),
        bracketings,
        witnesses,
    })
}
