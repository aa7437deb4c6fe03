use super::{members, BoolRel, Poset, VertexSet};
use crate::error::{Error, Result};

/// Which defining condition of a pseudo-order fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum PseudoOrderFailure {
    /// The reflexive closure is not transitive.
    Transitivity,
    /// A vertex without a loop shares its `∼`-block with another vertex.
    LooplessBlock { vertex: usize },
    /// A cover pair `lower ≺ upper` has no loop at either end.
    UnparkedCover { lower: usize, upper: usize },
}

/// The quasi-order data attached to a relation and the pseudo-order verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoOrderAnalysis {
    /// Looped vertices.
    pub park: VertexSet,
    /// Reflexive closure `≤`.
    pub quasi: BoolRel,
    /// Symmetric part `∼` of the reflexive closure.
    pub sim: BoolRel,
    /// Vertex pairs `x ≺ y`; empty when `≤` is not transitive.
    pub covers: Vec<(usize, usize)>,
    pub failure: Option<PseudoOrderFailure>,
}

impl PseudoOrderAnalysis {
    pub fn is_pseudo_order(&self) -> bool {
        self.failure.is_none()
    }
}

/// Decides whether `alpha` is a pseudo-order: its reflexive closure is a
/// quasi-order, loopless vertices form singleton blocks, and every cover
/// pair keeps a loop on at least one side.
pub fn analyze_pseudo_order(alpha: &BoolRel) -> PseudoOrderAnalysis {
    let n = alpha.n();
    let park = alpha.loops();
    let quasi = alpha.reflexive_closure();
    let sim = BoolRel::from_row_masks(n, (0..n).map(|i| quasi.row(i) & quasi.col(i)).collect())
        .expect("same shape");

    let mut out = PseudoOrderAnalysis {
        park,
        quasi,
        sim,
        covers: Vec::new(),
        failure: None,
    };
    if !out.quasi.is_transitive() {
        out.failure = Some(PseudoOrderFailure::Transitivity);
        return out;
    }

    let (le, sim) = (&out.quasi, &out.sim);
    for x in 0..n {
        for y in members(le.row(x)) {
            if sim.get(x, y) {
                continue;
            }
            let between = le.row(x) & le.col(y);
            if members(between).all(|z| sim.get(x, z) || sim.get(z, y)) {
                out.covers.push((x, y));
            }
        }
    }

    if let Some(x) = (0..n).find(|&x| park >> x & 1 == 0 && out.sim.row(x) != 1 << x) {
        out.failure = Some(PseudoOrderFailure::LooplessBlock { vertex: x });
    } else if let Some(&(x, y)) = out
        .covers
        .iter()
        .find(|&&(x, y)| park >> x & 1 == 0 && park >> y & 1 == 0)
    {
        out.failure = Some(PseudoOrderFailure::UnparkedCover { lower: x, upper: y });
    }
    out
}

/// The route formulation: `alpha` is transitive, and every edge `(x, y)`
/// can be realised by a route that visits a looped vertex.
pub fn check_pseudo_order_routes(alpha: &BoolRel) -> bool {
    if !alpha.is_transitive() {
        return false;
    }
    let reach = alpha.reachability();
    let park = alpha.loops();
    alpha
        .edges()
        .into_iter()
        .all(|(x, y)| members(park).any(|p| reach.get(x, p) && reach.get(p, y)))
}

/// `A·A = A` by direct squaring.
pub fn is_idempotent_rel(alpha: &BoolRel) -> bool {
    alpha.is_idempotent()
}

/// `D` and `A1 = D·A·D` for an idempotent `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedIdempotent {
    /// Diagonal matrix selecting the transversal.
    pub d: BoolRel,
    /// `D·A·D`, a partial order on the transversal.
    pub a1: BoolRel,
    /// Least-index representative of each `∼`-block of looped vertices.
    pub transversal: Vec<usize>,
}

impl ReducedIdempotent {
    pub fn transversal_set(&self) -> VertexSet {
        self.transversal.iter().fold(0, |acc, &t| acc | 1 << t)
    }
}

pub fn reduced_idempotent(a: &BoolRel) -> Result<ReducedIdempotent> {
    if !a.is_idempotent() {
        return Err(Error::NotIdempotent);
    }
    let n = a.n();
    let park = a.loops();
    let mut covered: VertexSet = 0;
    let mut transversal = Vec::new();
    for x in members(park) {
        if covered >> x & 1 == 1 {
            continue;
        }
        transversal.push(x);
        covered |= members(park)
            .filter(|&y| a.get(x, y) && a.get(y, x))
            .fold(0, |acc, y| acc | 1 << y);
    }
    let t: VertexSet = transversal.iter().fold(0, |acc, &x| acc | 1 << x);
    let d = BoolRel::diagonal(n, t)?;
    let a1 = d.mul_unchecked(a).mul_unchecked(&d);
    Ok(ReducedIdempotent { d, a1, transversal })
}

/// The poset `(T; α ∩ T²)` of an idempotent.
pub fn core_poset(a: &BoolRel) -> Result<Poset> {
    let r = reduced_idempotent(a)?;
    Poset::from_relation(&r.a1, r.transversal_set())
}
