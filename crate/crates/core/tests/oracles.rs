use std::collections::HashSet;
use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use latmat::boolrel::{analyze_pseudo_order, BoolRel};
use latmat::distmat::{
    chain_idempotent_from_nested, cut_decompose, hclass_chain, invert, is_idempotent_mat,
    reconstruct, InvertMode,
};
use latmat::fixpoint::{orbit, vec_mat_mul, LatVector};
use latmat::spectrum::{spectrum_count, MatrixGroupoid, SpectrumMode, SpectrumOptions};
use latmat::{Error, LatMatrix, Lattice};

fn lat(name: &str) -> Arc<Lattice> {
    Arc::new(Lattice::builtin(name).unwrap())
}

fn naive_mul(a: &LatMatrix, b: &LatMatrix) -> LatMatrix {
    let l = a.lattice();
    let n = a.n();
    LatMatrix::from_fn(l.clone(), n, |i, k| {
        (0..n).fold(l.bottom(), |acc, j| {
            l.join(acc, l.meet(a.get(i, j), b.get(j, k)))
        })
    })
    .unwrap()
}

/// Green's H-class by comparing principal ideals over the full monoid.
fn brute_hclass(all: &[LatMatrix], a: &LatMatrix) -> HashSet<Vec<usize>> {
    let left = |x: &LatMatrix| -> HashSet<Vec<usize>> {
        all.iter()
            .map(|s| naive_mul(s, x).entries().to_vec())
            .collect()
    };
    let right = |x: &LatMatrix| -> HashSet<Vec<usize>> {
        all.iter()
            .map(|s| naive_mul(x, s).entries().to_vec())
            .collect()
    };
    let (la, ra) = (left(a), right(a));
    all.iter()
        .filter(|b| left(b) == la && right(b) == ra)
        .map(|b| b.entries().to_vec())
        .collect()
}

#[test]
fn hclass_chain_matches_ideal_comparison() {
    for name in ["chain:3", "chain:4"] {
        let l = lat(name);
        let all: Vec<LatMatrix> = LatMatrix::all(l, 2).collect();
        let mut checked = 0;
        for a in &all {
            match hclass_chain(a) {
                Ok(members) => {
                    let got: HashSet<Vec<usize>> = members
                        .iter()
                        .map(|m| m.matrix.entries().to_vec())
                        .collect();
                    assert_eq!(got, brute_hclass(&all, a), "{name}: {:?}", a.to_labels());
                    checked += 1;
                }
                Err(Error::NotIdempotent | Error::CutNotPartialOrder(_)) => {}
                Err(e) => panic!("{e}"),
            }
        }
        assert!(checked >= 2, "{name}: only {checked} idempotents qualified");
    }
}

#[test]
fn idempotents_over_chains_are_nested_pseudo_orders() {
    for name in ["chain:3", "chain:4"] {
        let l = lat(name);
        for a in LatMatrix::all(l.clone(), 2) {
            let idem = naive_mul(&a, &a) == a;
            assert_eq!(is_idempotent_mat(&a).unwrap(), idem);
            let family = cut_decompose(&a).unwrap();
            let cuts = family.cuts();
            let nested_po = cuts
                .iter()
                .all(|c| analyze_pseudo_order(c).is_pseudo_order())
                && cuts.windows(2).all(|w| w[1].leq(&w[0]));
            assert_eq!(idem, nested_po, "{name}: {:?}", a.to_labels());
            if idem {
                assert_eq!(chain_idempotent_from_nested(cuts).unwrap(), a);
            }
        }
    }
}

#[test]
fn nested_construction_on_all_pseudo_order_chains() {
    let pos: Vec<BoolRel> = BoolRel::all(3).filter(|r| r.is_idempotent()).collect();
    for x in &pos {
        for y in pos.iter().filter(|y| y.leq(x)) {
            let a = chain_idempotent_from_nested(&[x.clone(), y.clone()]).unwrap();
            assert_eq!(naive_mul(&a, &a), a);
        }
    }
}

#[test]
fn exhaustive_inverses_match_scan() {
    for name in ["2x2", "2x2+1", "chain:3"] {
        let l = lat(name);
        let id = LatMatrix::identity(l.clone(), 2).unwrap();
        let all: Vec<LatMatrix> = LatMatrix::all(l, 2).collect();
        for a in &all {
            let scan: Vec<LatMatrix> = all
                .iter()
                .filter(|b| naive_mul(a, b) == id)
                .cloned()
                .collect();
            let found = invert(a, InvertMode::Exhaustive { budget: 1 << 20 }).unwrap();
            assert_eq!(found, scan, "{name}: {:?}", a.to_labels());
            // one-sided inverses are two-sided over distributive lattices
            for b in &found {
                assert_eq!(naive_mul(b, a), id);
            }
        }
    }
}

#[test]
fn exhaustive_spectrum_is_one_when_distributive() {
    let g = MatrixGroupoid::new(lat("bool"), 2);
    for k in 3..=4 {
        let r = spectrum_count(&g, k, &SpectrumOptions::new(SpectrumMode::Exhaustive)).unwrap();
        assert_eq!(r.count, 1);
    }
}

#[test]
fn orbits_repeat_with_stated_period() {
    let l = lat("chain:3");
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let a = LatMatrix::random(l.clone(), 3, &mut rng);
        for x in LatVector::all(l.clone(), 3).step_by(5) {
            let o = orbit(&x, &a, 1000).unwrap();
            let last = o.states.last().unwrap();
            let next = vec_mat_mul(last, &a).unwrap();
            assert_eq!(next, o.states[o.preperiod]);
            assert_eq!(o.states.len(), o.preperiod + o.period);
            let distinct: HashSet<&LatVector> = o.states.iter().collect();
            assert_eq!(distinct.len(), o.states.len());
        }
    }
}

fn matrix_over(name: &'static str, n: usize) -> impl Strategy<Value = LatMatrix> {
    let l = lat(name);
    let m = l.size();
    prop::collection::vec(0..m, n * n).prop_map(move |e| LatMatrix::new(l.clone(), n, e).unwrap())
}

proptest! {
    #[test]
    fn cuts_respect_sum_and_product(
        (a, b) in prop_oneof![
            (matrix_over("2x2", 3), matrix_over("2x2", 3)),
            (matrix_over("chain:4", 3), matrix_over("chain:4", 3)),
            (matrix_over("2x2+1", 3), matrix_over("2x2+1", 3)),
        ]
    ) {
        let (ca, cb) = (cut_decompose(&a).unwrap(), cut_decompose(&b).unwrap());
        let prod = cut_decompose(&naive_mul(&a, &b)).unwrap();
        let sum = cut_decompose(&a.add(&b).unwrap()).unwrap();
        for k in 0..ca.cuts().len() {
            prop_assert_eq!(&prod.cuts()[k], &ca.cuts()[k].mul(&cb.cuts()[k]).unwrap());
            prop_assert_eq!(&sum.cuts()[k], &ca.cuts()[k].union(&cb.cuts()[k]).unwrap());
        }
        prop_assert_eq!(reconstruct(&ca).unwrap(), a);
    }
}
