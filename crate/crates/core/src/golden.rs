//! Replays the worked examples behind the library as a self-check.
//!
//! Every case that multiplies matrices does so with the [`Product`] passed
//! to [`run_golden_suite`], so running the suite with
//! [`Product::MeetOfJoins`] acts as a mutation test.

use std::sync::Arc;

use crate::distmat::{hclass_chain, invert, is_nilpotent, triangularize, InvertMode};
use crate::error::Error;
use crate::fixpoint::{has_nonzero_fixpoint, vec_mat_mul, LatVector};
use crate::io::parse_matrix;
use crate::lattice::Lattice;
use crate::matrix::{LatMatrix, Product};
use crate::permutation::Permutation;
use crate::spectrum::{
    distinguish_with_identity, find_nonassociative_triple, spectrum_count, Bracketing,
    MatrixGroupoid, SpectrumMode, SpectrumOptions,
};

type Check = std::result::Result<(), String>;

/// One replayable example.
pub struct GoldenCase {
    pub id: &'static str,
    pub lattice: &'static str,
    /// Where the example comes from, in words.
    pub source: &'static str,
    pub run: fn(Product) -> Check,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct GoldenOutcome {
    pub id: &'static str,
    pub lattice: &'static str,
    pub source: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct GoldenSummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub cases: Vec<GoldenOutcome>,
}

impl GoldenSummary {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn outcome(&self, id: &str) -> Option<&GoldenOutcome> {
        self.cases.iter().find(|c| c.id == id)
    }
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn lat(name: &str) -> Arc<Lattice> {
    Arc::new(Lattice::builtin(name).expect("built-in lattice"))
}

fn mat(l: &Arc<Lattice>, rows: &[&[&str]]) -> Result<LatMatrix, String> {
    LatMatrix::from_labels(l.clone(), rows).map_err(err)
}

fn mul(a: &LatMatrix, b: &LatMatrix, p: Product) -> Result<LatMatrix, String> {
    a.mul_with(b, p).map_err(err)
}

fn same(got: &LatMatrix, want: &LatMatrix, what: &str) -> Check {
    ensure(got == want, || {
        format!(
            "{what}: got {:?}, expected {:?}",
            got.to_labels(),
            want.to_labels()
        )
    })
}

/// The three matrices from the nonassociativity argument.
fn proof_triple(l: &Arc<Lattice>) -> Result<(LatMatrix, LatMatrix, LatMatrix), String> {
    Ok((
        mat(l, &[&["a", "b"], &["0", "0"]])?,
        mat(l, &[&["1", "0"], &["1", "0"]])?,
        mat(l, &[&["c", "0"], &["0", "0"]])?,
    ))
}

fn nonassociativity(name: &str, p: Product, right: &[&[&str]]) -> Check {
    let l = lat(name);
    let (a, b, c) = proof_triple(&l)?;
    let left = mul(&mul(&a, &b, p)?, &c, p)?;
    let right_side = mul(&a, &mul(&b, &c, p)?, p)?;
    same(&left, &mat(&l, &[&["c", "0"], &["0", "0"]])?, "(AB)C")?;
    same(&right_side, &mat(&l, right)?, "A(BC)")
}

fn cube_matrix() -> Result<LatMatrix, String> {
    mat(
        &lat("M3"),
        &[
            &["0", "a", "0", "0", "0"],
            &["0", "0", "b", "c", "0"],
            &["0", "0", "0", "0", "b"],
            &["0", "0", "0", "0", "c"],
            &["0", "0", "0", "0", "0"],
        ],
    )
}

fn n5_pair() -> Result<(Arc<Lattice>, LatMatrix, LatMatrix), String> {
    let l = lat("N5");
    let a = mat(&l, &[&["c", "b"], &["b", "c"]])?;
    let b = mat(&l, &[&["a", "b"], &["b", "c"]])?;
    Ok((l, a, b))
}

fn skew_2x2_plus_1() -> Result<LatMatrix, String> {
    mat(&lat("2x2+1"), &[&["0", "a"], &["b", "0"]])
}

/// The full case list.
pub fn golden_cases() -> Vec<GoldenCase> {
    vec![
        GoldenCase {
            id: "m3-from-covers",
            lattice: "M3",
            source: "lattice figure for M3",
            run: |_| {
                let l = Lattice::from_covers(
                    ["0", "a", "b", "c", "1"],
                    &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)],
                )
                .map_err(err)?;
                ensure(
                    l.join(1, 2) == 4 && l.meet(1, 2) == 0 && l.join(2, 3) == 4,
                    || "a+b = 1 and a·b = 0 expected".into(),
                )?;
                ensure(l == Lattice::m3(), || "differs from the built-in M3".into())
            },
        },
        GoldenCase {
            id: "m3-not-distributive",
            lattice: "M3",
            source: "nonassociativity proof: M3 embeds",
            run: |_| {
                ensure(!Lattice::m3().is_distributive(), || {
                    "M3 reported distributive".into()
                })
            },
        },
        GoldenCase {
            id: "n5-not-distributive",
            lattice: "N5",
            source: "nonassociativity proof: N5 embeds",
            run: |_| {
                ensure(!Lattice::n5().is_distributive(), || {
                    "N5 reported distributive".into()
                })
            },
        },
        GoldenCase {
            id: "2x2-distributive",
            lattice: "2x2",
            source: "non-permutation inverse example",
            run: |_| {
                ensure(Lattice::two_by_two().is_distributive(), || {
                    "2x2 reported nondistributive".into()
                })
            },
        },
        GoldenCase {
            id: "2x2-bounds-reducible",
            lattice: "2x2",
            source: "non-permutation inverse example: neither bound irreducible",
            run: |_| {
                let b = Lattice::two_by_two().bound_irreducibility();
                ensure(
                    !b.bottom_meet_irreducible && !b.top_join_irreducible,
                    || format!("{b:?}"),
                )
            },
        },
        GoldenCase {
            id: "chain-cuts-nested",
            lattice: "chain:m",
            source: "cut homomorphisms of a chain",
            run: |_| {
                for m in 2..=8 {
                    let l = Lattice::chain(m).map_err(err)?;
                    let cuts = l.birkhoff_cuts().map_err(err)?;
                    ensure(cuts.omega().len() == m - 1, || {
                        format!("chain:{m} has {} cuts", cuts.omega().len())
                    })?;
                    for r in 0..m {
                        ensure(cuts.embed(r) == (1u64 << r) - 1, || {
                            format!(
                                "chain:{m}: element of rank {r} embeds as {:b}",
                                cuts.embed(r)
                            )
                        })?;
                    }
                }
                Ok(())
            },
        },
        GoldenCase {
            id: "parse-proof-matrix",
            lattice: "M3",
            source: "nonassociativity proof display",
            run: |_| {
                let a = parse_matrix(
                    r#"{"lattice": "M3", "entries": [["a", "b"], ["0", "0"]]}"#,
                    None,
                )
                .map_err(err)?;
                same(&a, &proof_triple(&lat("M3"))?.0, "parsed A")
            },
        },
        GoldenCase {
            id: "m3-nonassociative",
            lattice: "M3",
            source: "nonassociativity proof matrices",
            run: |p| nonassociativity("M3", p, &[&["0", "0"], &["0", "0"]]),
        },
        GoldenCase {
            id: "n5-nonassociative",
            lattice: "N5",
            source: "nonassociativity proof matrices",
            run: |p| nonassociativity("N5", p, &[&["a", "0"], &["0", "0"]]),
        },
        GoldenCase {
            id: "padded-nonassociative",
            lattice: "M3, N5",
            source: "nonassociativity proof: corner embedding for larger n",
            run: |p| {
                for name in ["M3", "N5"] {
                    let (a, b, c) = proof_triple(&lat(name))?;
                    for n in 2..=6 {
                        let pad = |x: &LatMatrix| x.padded(n).map_err(err);
                        let (a, b, c) = (pad(&a)?, pad(&b)?, pad(&c)?);
                        let left = mul(&mul(&a, &b, p)?, &c, p)?;
                        let right = mul(&a, &mul(&b, &c, p)?, p)?;
                        ensure(left != right, || format!("{name}, n = {n}: products agree"))?;
                    }
                }
                Ok(())
            },
        },
        GoldenCase {
            id: "m3-two-cubes",
            lattice: "M3",
            source: "two different cubes example",
            run: |p| {
                let a = cube_matrix()?;
                let left = mul(&mul(&a, &a, p)?, &a, p)?;
                let right = mul(&a, &mul(&a, &a, p)?, p)?;
                ensure(left.is_zero(), || format!("(AA)A = {:?}", left.to_labels()))?;
                let nonzero: Vec<_> = (0..5)
                    .flat_map(|i| (0..5).map(move |j| (i, j)))
                    .filter(|&(i, j)| right.get(i, j) != 0)
                    .collect();
                ensure(nonzero == [(0, 4)] && right.get(0, 4) == 1, || {
                    format!("A(AA) = {:?}", right.to_labels())
                })
            },
        },
        GoldenCase {
            id: "bracketings-of-three",
            lattice: "-",
            source: "associative spectrum definition",
            run: |_| {
                let all = Bracketing::enumerate(3).map_err(err)?;
                let mut shown: Vec<String> = all.iter().map(|b| b.to_string()).collect();
                shown.sort();
                ensure(shown == ["((x1x2)x3)", "(x1(x2x3))"], || {
                    format!("{shown:?}")
                })
            },
        },
        GoldenCase {
            id: "m3-distinguish-triple",
            lattice: "M3",
            source: "nonassociativity proof triple separates the two bracketings of three",
            run: |p| {
                let l = lat("M3");
                let g = MatrixGroupoid::with_product(l.clone(), 2, p);
                let (a, b, c) = proof_triple(&l)?;
                let e = LatMatrix::identity(l, 2).map_err(err)?;
                let left = Bracketing::left_comb(3);
                let right = Bracketing::right_comb(3);
                let got = distinguish_with_identity(&g, &left, &right, (&a, &b, &c), &e, &[])
                    .map_err(err)?;
                ensure(got == Some(vec![a, b, c]), || format!("assignment {got:?}"))
            },
        },
        GoldenCase {
            id: "distributive-spectrum-one",
            lattice: "bool",
            source: "associativity over distributive lattices",
            run: |p| {
                let g = MatrixGroupoid::with_product(lat("bool"), 2, p);
                let r = spectrum_count(&g, 4, &SpectrumOptions::new(SpectrumMode::Exhaustive))
                    .map_err(err)?;
                ensure(r.count == 1, || format!("s4 = {}", r.count))
            },
        },
        GoldenCase {
            id: "m3-triple-found",
            lattice: "M3",
            source: "nonassociativity proof: a failing triple exists",
            run: |p| {
                let l = lat("M3");
                let g = MatrixGroupoid::with_product(l.clone(), 2, p);
                ensure(
                    find_nonassociative_triple(&g).map_err(err)?.is_some(),
                    || "no triple".into(),
                )?;
                let (a, b, c) = proof_triple(&l)?;
                ensure(
                    mul(&mul(&a, &b, p)?, &c, p)? != mul(&a, &mul(&b, &c, p)?, p)?,
                    || "proof triple is associative".into(),
                )
            },
        },
        GoldenCase {
            id: "n5-triple-found",
            lattice: "N5",
            source: "nonassociativity proof: a failing triple exists",
            run: |p| {
                let g = MatrixGroupoid::with_product(lat("N5"), 2, p);
                ensure(
                    find_nonassociative_triple(&g).map_err(err)?.is_some(),
                    || "no triple".into(),
                )
            },
        },
        GoldenCase {
            id: "n5-several-inverses",
            lattice: "N5",
            source: "matrix with several inverses",
            run: |p| {
                let (l, a, b) = n5_pair()?;
                let id = LatMatrix::identity(l, 2).map_err(err)?;
                same(&mul(&a, &a, p)?, &id, "AA")?;
                same(&mul(&a, &b, p)?, &id, "AB")?;
                same(&mul(&b, &a, p)?, &id, "BA")
            },
        },
        GoldenCase {
            id: "n5-right-inverses-scan",
            lattice: "N5",
            source: "matrix with several inverses",
            run: |_| {
                let (_, a, b) = n5_pair()?;
                let found = invert(&a, InvertMode::Exhaustive { budget: 1 << 20 }).map_err(err)?;
                ensure(found.contains(&a) && found.contains(&b), || {
                    format!("{} right inverses, missing A or B", found.len())
                })
            },
        },
        GoldenCase {
            id: "2x2-self-inverse",
            lattice: "2x2",
            source: "non-permutation inverse example",
            run: |p| {
                let l = lat("2x2");
                let a = mat(&l, &[&["a", "b"], &["b", "a"]])?;
                same(
                    &mul(&a, &a, p)?,
                    &LatMatrix::identity(l, 2).map_err(err)?,
                    "AA",
                )?;
                let found = invert(&a, InvertMode::Exhaustive { budget: 1 << 20 }).map_err(err)?;
                ensure(found == [a.clone()], || {
                    format!("{} right inverses", found.len())
                })?;
                ensure(a.as_permutation().is_none(), || {
                    "A is a permutation matrix".into()
                })
            },
        },
        GoldenCase {
            id: "permutation-rows",
            lattice: "bool",
            source: "permutation matrices permute rows",
            run: |p| {
                let l = lat("bool");
                let a = mat(&l, &[&["1", "1"], &["0", "1"]])?;
                let swap = LatMatrix::permutation(l.clone(), &Permutation::transposition(2, 0, 1))
                    .map_err(err)?;
                same(
                    &mul(&swap, &a, p)?,
                    &mat(&l, &[&["0", "1"], &["1", "1"]])?,
                    "P(12)A",
                )
            },
        },
        GoldenCase {
            id: "conjugate-skew",
            lattice: "2x2+1",
            source: "nilpotent matrix with no triangular conjugate",
            run: |p| {
                let a = skew_2x2_plus_1()?;
                let l = a.lattice().clone();
                let want = mat(&l, &[&["0", "b"], &["a", "0"]])?;
                let swap = Permutation::transposition(2, 0, 1);
                same(&a.conjugate(&swap).map_err(err)?, &want, "conjugate")?;
                let ps = LatMatrix::permutation(l, &swap).map_err(err)?;
                same(&mul(&mul(&ps, &a, p)?, &ps, p)?, &want, "P⁻¹AP")
            },
        },
        GoldenCase {
            id: "skew-nilpotent",
            lattice: "2x2+1",
            source: "nilpotent matrix with no triangular conjugate",
            run: |p| {
                let a = skew_2x2_plus_1()?;
                ensure(mul(&a, &a, p)?.is_zero(), || "A² ≠ 0".into())?;
                ensure(is_nilpotent(&a).map_err(err)?, || "not nilpotent".into())
            },
        },
        GoldenCase {
            id: "skew-not-triangularizable",
            lattice: "2x2+1",
            source: "nilpotent matrix with no triangular conjugate",
            run: |_| match triangularize(&skew_2x2_plus_1()?) {
                Err(Error::BottomNotMeetIrreducible) => Ok(()),
                other => Err(format!("{other:?}")),
            },
        },
        GoldenCase {
            id: "v-nilpotency-index",
            lattice: "bool",
            source: "V is nilpotent but its (n-1)-st power is not zero",
            run: |p| {
                let l = lat("bool");
                for n in 2..=8 {
                    let v = LatMatrix::strict_upper_ones(l.clone(), n).map_err(err)?;
                    let mut power = v.clone();
                    for _ in 2..n {
                        power = mul(&power, &v, p)?;
                    }
                    ensure(!power.is_zero(), || format!("V^{} = 0 for n = {n}", n - 1))?;
                    ensure(mul(&power, &v, p)?.is_zero(), || format!("V^{n} ≠ 0"))?;
                    ensure(is_nilpotent(&v).map_err(err)?, || {
                        format!("V not nilpotent for n = {n}")
                    })?;
                }
                Ok(())
            },
        },
        GoldenCase {
            id: "v-no-nonzero-fixpoint",
            lattice: "bool",
            source: "nonzero fixed point iff not nilpotent",
            run: |p| {
                let l = lat("bool");
                let n = 4;
                let v = LatMatrix::strict_upper_ones(l.clone(), n).map_err(err)?;
                ensure(!has_nonzero_fixpoint(&v).map_err(err)?, || {
                    "nonzero fixpoint".into()
                })?;
                let mut x = LatVector::ones(l, n).map_err(err)?;
                let mut power = v.clone();
                for k in 1..=n {
                    x = vec_mat_mul(&x, &v).map_err(err)?;
                    ensure(x.is_zero() == power.is_zero(), || {
                        format!("1·V^{k} and V^{k} disagree")
                    })?;
                    power = mul(&power, &v, p)?;
                }
                ensure(x.is_zero(), || "1·V^n ≠ 0".into())
            },
        },
        GoldenCase {
            id: "identity-hclass-symmetric",
            lattice: "chain:m",
            source: "H-class of the identity is the symmetric group",
            run: |_| {
                for m in 2..=4 {
                    let l = Arc::new(Lattice::chain(m).map_err(err)?);
                    for n in 2..=4 {
                        let h = hclass_chain(&LatMatrix::identity(l.clone(), n).map_err(err)?)
                            .map_err(err)?;
                        let want: usize = (1..=n).product();
                        ensure(h.len() == want, || {
                            format!("chain:{m}, n = {n}: {} members", h.len())
                        })?;
                        ensure(
                            h.iter().all(|x| x.matrix.as_permutation().is_some()),
                            || "non-permutation member".into(),
                        )?;
                    }
                }
                Ok(())
            },
        },
    ]
}

/// Runs every case with the given product.
pub fn run_golden_suite(product: Product) -> GoldenSummary {
    let cases: Vec<GoldenOutcome> = golden_cases()
        .into_iter()
        .map(|c| {
            let result = (c.run)(product);
            GoldenOutcome {
                id: c.id,
                lattice: c.lattice,
                source: c.source,
                passed: result.is_ok(),
                detail: result.err(),
            }
        })
        .collect();
    let passed = cases.iter().filter(|c| c.passed).count();
    GoldenSummary {
        total: cases.len(),
        passed,
        failed: cases.len() - passed,
        cases,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        let s = run_golden_suite(Product::JoinOfMeets);
        for c in &s.cases {
            assert!(c.passed, "{}: {:?}", c.id, c.detail);
        }
        assert!(s.total >= 10);
    }

    #[test]
    fn mutation_is_caught() {
        let s = run_golden_suite(Product::MeetOfJoins);
        assert!(!s.all_passed());
        assert!(!s.outcome("m3-nonassociative").unwrap().passed);
    }

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<_> = golden_cases().iter().map(|c| c.id).collect();
        ids.sort();
        let before = ids.len();
        ids.dedup();
        assert_eq!(ids.len(), before);
    }
}
